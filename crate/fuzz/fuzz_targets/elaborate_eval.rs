#![no_main]

use isocalc::eval::{evaluate, format_trace_in, EvalError, TraceFormat};
use isocalc::syntax::{elaborate_program, parse_program};
use isocalc::typing::infer;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(program) = parse_program(text) else {
        return;
    };
    let Ok((t, ty)) = elaborate_program(&program) else {
        return;
    };
    let g = program.context();
    assert_eq!(infer(&g, &t).as_ref(), Ok(&ty));
    match evaluate(&g, &t, 2_000) {
        Ok(trace) => {
            assert_eq!(infer(&g, &trace.final_term), Ok(ty));
            let names = program.names();
            let _ = format_trace_in(&g, &names, &trace, TraceFormat::Text);
            let _ = format_trace_in(&g, &names, &trace, TraceFormat::Json);
        }
        Err(EvalError::FuelExhausted(_)) => {}
        Err(e) => panic!("well-typed program failed to evaluate: {e}"),
    }
});
