#![no_main]

use libfuzzer_sys::fuzz_target;
use resmin::arith::{fmt_rational, parse_rational};

fuzz_target!(|data: &str| {
    if data.len() > 256 {
        return;
    }
    if let Ok(x) = parse_rational(data) {
        assert_eq!(parse_rational(&fmt_rational(&x)).unwrap(), x);
    }
});
