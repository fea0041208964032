#![no_main]

use libfuzzer_sys::fuzz_target;
use symbreak::symbreak::{SbKind, SymBreakConfig, ValueSb};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = text.parse::<SymBreakConfig>() {
        assert_eq!(cfg.to_string().parse::<SymBreakConfig>().unwrap(), cfg);
    }
    if let Ok(kind) = text.parse::<SbKind>() {
        assert_eq!(kind.to_string().parse::<SbKind>().unwrap(), kind);
    }
    if let Ok(value) = text.parse::<ValueSb>() {
        assert_eq!(value.to_string().parse::<ValueSb>().unwrap(), value);
    }
});
