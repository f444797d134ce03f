#![no_main]

use fragsim::sidecar::Sidecar;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = Sidecar::from_json_str(text) {
        let again = Sidecar::from_json_str(&s.to_json_string().unwrap()).unwrap();
        assert_eq!(s.schema_version, again.schema_version);
        assert_eq!(s.rows, again.rows);
    }
});
