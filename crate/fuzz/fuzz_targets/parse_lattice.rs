#![no_main]

use libfuzzer_sys::fuzz_target;
use resmin::json::parse_lattice;

fuzz_target!(|data: &str| {
    if data.len() > 4096 {
        return;
    }
    if let Ok(l) = parse_lattice(data) {
        let text = serde_json::to_string(&l).unwrap();
        assert_eq!(parse_lattice(&text).unwrap(), l);
    }
});
