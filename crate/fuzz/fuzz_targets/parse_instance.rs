#![no_main]

use libfuzzer_sys::fuzz_target;
use resmin::harness::parse_instance;

fuzz_target!(|data: &str| {
    if data.len() > 8192 {
        return;
    }
    if let Ok(inst) = parse_instance(data) {
        let text = serde_json::to_string(&inst).unwrap();
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }
});
