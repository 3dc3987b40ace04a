#![no_main]

use libfuzzer_sys::fuzz_target;
use lettercost::costs::{parse_cost_spec, DEFAULT_TOL};
use lettercost::{build_code, char_root, normalize, prepare, verify_prefix_free};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = parse_cost_spec(text) else {
        return;
    };
    let Ok(spec) = normalize(&spec) else {
        return;
    };
    let Ok(root) = char_root(&spec, DEFAULT_TOL) else {
        return;
    };
    assert!(root.c > 0.0 && root.c.is_finite());
    let input = prepare(&[0.4, 0.3, 0.2, 0.1], false).unwrap();
    if let Ok((tree, _)) = build_code(&input, &spec, &root, false) {
        let words: Vec<Vec<u32>> = tree.codewords().into_iter().map(|w| w.letters).collect();
        assert!(verify_prefix_free(&words));
    }
});
