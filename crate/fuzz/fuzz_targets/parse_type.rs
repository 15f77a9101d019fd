#![no_main]

use isocalc::syntax::{parse_type, print_type};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ty) = parse_type(text) {
        assert_eq!(parse_type(&print_type(&ty)), Ok(ty));
    }
});
