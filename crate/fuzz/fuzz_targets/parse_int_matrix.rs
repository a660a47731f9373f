#![no_main]

use libfuzzer_sys::fuzz_target;
use resmin::json::parse_int_matrix;

fuzz_target!(|data: &str| {
    if data.len() > 4096 {
        return;
    }
    if let Ok(m) = parse_int_matrix(data) {
        assert!(!m.is_empty() && m.iter().all(|r| r.len() == m[0].len()));
    }
});
