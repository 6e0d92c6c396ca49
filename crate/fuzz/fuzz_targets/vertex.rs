#![no_main]

use libfuzzer_sys::fuzz_target;
use rbasis::tree::{BoundLimits, VertexDoc};
use rbasis::{SeqSpec, SpecPair, Tree};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = serde_json::from_str::<VertexDoc>(text) else {
        return;
    };
    if doc.set.max_element().unwrap_or(0) > 512 {
        return;
    }
    let pair = SpecPair::new(SeqSpec::constant(vec![2]).unwrap(), SeqSpec::interval(1, 3).unwrap());
    let tree = Tree::new(pair, BoundLimits::default());
    if let Ok(v) = tree.vertex(doc.set.clone()) {
        assert_eq!(VertexDoc::from(&v), doc);
        if !tree.is_root(&v) {
            let parent = tree.parent(&v).expect("non-root vertex has a parent");
            assert!(tree.children(&parent).expect("finite bound").contains(&v));
        }
    }
});
