#![no_main]

use libfuzzer_sys::fuzz_target;
use resmin::json::parse_minima_result;

fuzz_target!(|data: &str| {
    if data.len() > 4096 {
        return;
    }
    if let Ok(r) = parse_minima_result(data) {
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(parse_minima_result(&text).unwrap(), r);
    }
});
