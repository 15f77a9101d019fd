#![no_main]

use isocalc::eval::JsonTrace;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(trace) = serde_json::from_slice::<JsonTrace>(data) {
        let text = serde_json::to_string(&trace).expect("traces serialize");
        let back: JsonTrace = serde_json::from_str(&text).expect("serialized traces decode");
        assert_eq!(back, trace);
    }
});
