#![no_main]

use libfuzzer_sys::fuzz_target;
use rbasis::IntSet;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(set) = IntSet::parse(text) {
        assert!(set.elements().windows(2).all(|w| w[0] < w[1]));
        let json = serde_json::to_string(&set).unwrap();
        assert_eq!(serde_json::from_str::<IntSet>(&json).unwrap(), set);
    }
    let _ = serde_json::from_str::<IntSet>(text);
});
