#![no_main]

use isocalc::syntax::{elaborate, parse_term, print_term};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(surface) = parse_term(text) else {
        return;
    };
    if let Ok(t) = elaborate(&surface, &[]) {
        let printed = print_term(&t);
        let again = parse_term(&printed).expect("printed terms parse");
        assert_eq!(elaborate(&again, &[]), Ok(t), "{printed}");
    }
});
