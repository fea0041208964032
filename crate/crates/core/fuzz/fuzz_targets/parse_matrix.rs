#![no_main]

use libfuzzer_sys::fuzz_target;
use symbreak::Matrix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = text.parse::<Matrix>() {
        let again: Matrix = m.to_string().parse().expect("printed matrix must parse");
        assert_eq!(m, again);
    }
});
