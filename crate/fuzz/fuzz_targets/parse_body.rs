#![no_main]

use libfuzzer_sys::fuzz_target;
use resmin::json::parse_body;

fuzz_target!(|data: &str| {
    if data.len() > 4096 {
        return;
    }
    if let Ok(b) = parse_body(data) {
        let text = serde_json::to_string(&b).unwrap();
        assert_eq!(parse_body(&text).unwrap(), b);
    }
});
