#![no_main]

use isocalc::syntax::{elaborate_program, parse_program, print_program};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(program) = parse_program(text) else {
        return;
    };
    if let Ok((t, _)) = elaborate_program(&program) {
        let once = print_program(&program, &t);
        let reparsed = parse_program(&once).expect("formatted programs parse");
        let (t2, _) = elaborate_program(&reparsed).expect("formatted programs elaborate");
        assert_eq!(print_program(&reparsed, &t2), once);
    }
});
