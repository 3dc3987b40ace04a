#![no_main]

use libfuzzer_sys::fuzz_target;
use lettercost_cli::ProbSource;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = ProbSource::parse_inline(text);
    let Ok(source) = ProbSource::parse_generator(text) else {
        return;
    };
    let small = match source {
        ProbSource::Uniform { n }
        | ProbSource::Geometric { n, .. }
        | ProbSource::Zipf { n, .. }
        | ProbSource::Dyadic { n } => n <= 10_000,
        _ => false,
    };
    if small {
        if let Ok(probs) = source.load(0) {
            assert!(probs.iter().all(|p| p.is_finite() && *p >= 0.0));
        }
    }
});
