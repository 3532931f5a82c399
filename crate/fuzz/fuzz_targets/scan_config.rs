#![no_main]

use itep_core::ScanConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(config) = ScanConfig::from_toml_str(text) {
        // accepted configs must describe a usable grid
        assert!(config.k_min < config.k_max);
        assert!(config.steps >= 1);
        config.mesh().expect("validated config has a valid mesh");
    }
});
