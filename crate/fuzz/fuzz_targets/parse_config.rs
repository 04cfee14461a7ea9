#![no_main]

use libfuzzer_sys::fuzz_target;
use mmse_outage::config::Settings;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(settings) = Settings::from_text(text) {
        // accepted settings must resolve or fail cleanly, never panic
        let _ = settings.system();
        let _ = settings.grid();
        let _ = settings.policy();
    }
});
