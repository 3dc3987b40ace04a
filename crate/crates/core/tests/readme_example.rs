use lettercost::analysis::report;
use lettercost::costs::{parse_cost_spec, DEFAULT_TOL};
use lettercost::{build_code, char_root, normalize, prepare};

#[test]
fn library_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = normalize(&parse_cost_spec("finite:1,3")?)?;
    let root = char_root(&spec, DEFAULT_TOL)?;
    let input = prepare(&[0.5, 0.2, 0.2, 0.1], false)?;
    let (tree, _) = build_code(&input, &spec, &root, false)?;
    let rep = report(&tree, &input, &spec, &root);
    assert!((rep.cost - 3.2).abs() < 1e-12);
    assert!(rep.nr >= 0.0);
    Ok(())
}
