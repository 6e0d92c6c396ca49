#![no_main]

use libfuzzer_sys::fuzz_target;
use rbasis::{Checkpoint, SearchConfig, SeqSpec, SpecPair, Strategy};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cp) = Checkpoint::from_json(text) else { return };
    assert_eq!(Checkpoint::from_json(&cp.to_json()).expect("reloads"), cp);
    // keep profile rebuilds small
    if cp
        .frontier
        .iter()
        .any(|e| e.set.max_element().unwrap_or(0) > 256 || e.next.unwrap_or(0) > 1024)
    {
        return;
    }
    let pair = SpecPair::new(SeqSpec::constant(vec![2]).unwrap(), SeqSpec::interval(1, 2).unwrap());
    for strategy in Strategy::ALL {
        let mut config = SearchConfig::new(pair.clone(), 40)
            .with_strategy(strategy)
            .with_budget(64);
        config.record_vertices = cp.vertices.is_some();
        let cp = rbasis::Checkpoint {
            digest: config.digest(),
            ..cp.clone()
        };
        let _ = rbasis::resume(cp, config);
    }
});
