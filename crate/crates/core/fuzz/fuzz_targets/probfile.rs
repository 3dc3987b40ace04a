#![no_main]

use libfuzzer_sys::fuzz_target;
use lettercost::probfile::parse_probabilities;
use lettercost::{build_code, char_root, prepare, verify_prefix_free, CostSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(raw) = parse_probabilities(text) else {
        return;
    };
    assert!(!raw.is_empty() && raw.iter().all(|p| p.is_finite()));
    let Ok(input) = prepare(&raw, true) else {
        return;
    };
    if input.len() > 4096 {
        return;
    }
    let spec = CostSpec::finite(vec![1.0, 2.0]);
    let root = char_root(&spec, 1e-12).unwrap();
    if let Ok((tree, _)) = build_code(&input, &spec, &root, false) {
        let words: Vec<Vec<u32>> = tree.codewords().into_iter().map(|w| w.letters).collect();
        assert!(verify_prefix_free(&words));
    }
});
