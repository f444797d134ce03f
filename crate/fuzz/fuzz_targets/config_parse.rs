#![no_main]

use fragsim::ConfigFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ConfigFile::from_toml_str(text) {
        if let Ok(spec) = cfg.clone().into_spec() {
            // A valid spec must survive a round trip through its own file form.
            let again = ConfigFile::from_toml_str(&spec.to_config().to_toml_string().unwrap())
                .unwrap()
                .into_spec()
                .unwrap();
            assert_eq!(spec, again);
        }
    }
});
