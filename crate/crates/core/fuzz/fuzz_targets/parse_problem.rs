#![no_main]

use libfuzzer_sys::fuzz_target;
use symbreak::problems::ProblemSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = text.parse::<ProblemSpec>() {
        let printed = spec.to_string();
        let again: ProblemSpec = printed.parse().expect("printed spec must parse");
        assert_eq!(printed, again.to_string());
        // Building must either succeed or report an error, never panic.
        let _ = spec.build();
    }
});
