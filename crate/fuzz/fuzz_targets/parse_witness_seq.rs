#![no_main]

use isocalc::iso::{apply_witnesses, sym_normalize};
use isocalc::syntax::{parse_witness_seq, print_witness_seq};
use isocalc::Type;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ws) = parse_witness_seq(text) {
        assert_eq!(parse_witness_seq(&print_witness_seq(&ws)).as_ref(), Ok(&ws));
        for w in &ws {
            let n = sym_normalize(w);
            assert_eq!(sym_normalize(&n), n);
        }
        let _ = apply_witnesses(&ws, &Type::Top);
    }
});
