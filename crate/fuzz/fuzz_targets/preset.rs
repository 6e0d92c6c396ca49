#![no_main]

use libfuzzer_sys::fuzz_target;
use rbasis::Preset;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(preset) = Preset::parse(text) else { return };
    assert_eq!(Preset::parse(&preset.to_string()).expect("display reparses"), preset);
    let _ = preset.expand();
});
