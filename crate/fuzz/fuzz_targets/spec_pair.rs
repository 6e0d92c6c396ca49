#![no_main]

use libfuzzer_sys::fuzz_target;
use rbasis::parse_spec_pair;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(pair) = parse_spec_pair(text) else { return };
    for n in 0..64 {
        let h = pair.h.eval(n);
        let r = pair.r.eval(n);
        assert!(h.min() >= 1 && r.min() >= 1);
        assert_eq!(pair.h.max_at(n), h.max());
    }
    let again = parse_spec_pair(&pair.to_json()).expect("serialized pair reloads");
    assert_eq!(again, pair);
});
