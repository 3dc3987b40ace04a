//! Where probabilities come from: a file, an inline list, or a generator.
//!
//! Generator specs: `uniform:n` (independent uniform weights, seeded),
//! `geometric:q,n` (`p_i ~ q^i`), `zipf:s,n` (`p_i ~ i^-s`) and `dyadic:n`
//! (`1/2, 1/4, ..., 2^-(n-1), 2^-(n-1)`). All are returned normalized.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum ProbSource {
    File(String),
    Inline(Vec<f64>),
    Uniform { n: usize },
    Geometric { q: f64, n: usize },
    Zipf { s: f64, n: usize },
    Dyadic { n: usize },
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_n(tok: &str) -> Result<usize, CliError> {
    let n: f64 = tok
        .trim()
        .parse()
        .map_err(|_| usage(format!("bad size '{tok}'")))?;
    // accept 1e6 as well as 1000000
    if !(n >= 1.0 && n.fract() == 0.0 && n <= 1e9) {
        return Err(usage(format!("size must be a positive integer, got '{tok}'")));
    }
    Ok(n as usize)
}

fn parse_real(tok: &str, what: &str) -> Result<f64, CliError> {
    tok.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| usage(format!("bad {what} '{tok}'")))
}

impl ProbSource {
    /// Parses a generator spec such as `zipf:1.0,1000`.
    pub fn parse_generator(spec: &str) -> Result<Self, CliError> {
        let (head, body) = spec
            .split_once(':')
            .ok_or_else(|| usage(format!("generator '{spec}' needs arguments")))?;
        let args: Vec<&str> = body.split(',').collect();
        match (head.trim(), args.as_slice()) {
            ("uniform", [n]) => Ok(ProbSource::Uniform { n: parse_n(n)? }),
            ("dyadic", [n]) => Ok(ProbSource::Dyadic { n: parse_n(n)? }),
            ("geometric", [q, n]) => {
                let q = parse_real(q, "ratio")?;
                if !(q > 0.0 && q <= 1.0) {
                    return Err(usage("geometric ratio must lie in (0, 1]"));
                }
                Ok(ProbSource::Geometric { q, n: parse_n(n)? })
            }
            ("zipf", [s, n]) => {
                let s = parse_real(s, "exponent")?;
                if s < 0.0 {
                    return Err(usage("zipf exponent must be nonnegative"));
                }
                Ok(ProbSource::Zipf { s, n: parse_n(n)? })
            }
            _ => Err(usage(format!("unknown generator '{spec}'"))),
        }
    }

    /// Parses a comma-separated inline list.
    pub fn parse_inline(list: &str) -> Result<Self, CliError> {
        let values = list
            .split(',')
            .map(|t| parse_real(t, "probability"))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ProbSource::Inline(values))
    }

    /// The same generator at a different size; files and inline lists are
    /// returned unchanged.
    pub fn with_size(&self, n: usize) -> Self {
        match self {
            ProbSource::Uniform { .. } => ProbSource::Uniform { n },
            ProbSource::Geometric { q, .. } => ProbSource::Geometric { q: *q, n },
            ProbSource::Zipf { s, .. } => ProbSource::Zipf { s: *s, n },
            ProbSource::Dyadic { .. } => ProbSource::Dyadic { n },
            other => other.clone(),
        }
    }

    /// Raw weights; generated ones are already normalized.
    pub fn load(&self, seed: u64) -> Result<Vec<f64>, CliError> {
        match self {
            ProbSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                    path: path.clone(),
                    message: e.to_string(),
                })?;
                Ok(lettercost::probfile::parse_probabilities(&text)?)
            }
            ProbSource::Inline(values) => Ok(values.clone()),
            ProbSource::Uniform { n } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                // (0, 1]: no zero weights
                Ok(normalized((0..*n).map(|_| 1.0 - rng.gen::<f64>()).collect()))
            }
            ProbSource::Geometric { q, n } => {
                Ok(normalized((0..*n).map(|i| q.powi(i as i32)).collect()))
            }
            ProbSource::Zipf { s, n } => {
                Ok(normalized((1..=*n).map(|i| (i as f64).powf(-s)).collect()))
            }
            ProbSource::Dyadic { n } => {
                let mut p: Vec<f64> = (1..*n).map(|i| (-(i as f64)).exp2()).collect();
                p.push((1.0 - *n as f64).exp2());
                Ok(p)
            }
        }
    }
}

fn normalized(mut w: Vec<f64>) -> Vec<f64> {
    let total = lettercost::numeric::compensated_sum(w.iter().copied());
    for x in &mut w {
        *x /= total;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum(v: &[f64]) -> f64 {
        v.iter().sum()
    }

    #[test]
    fn generators() {
        let d = ProbSource::parse_generator("dyadic:4").unwrap().load(0).unwrap();
        assert_eq!(d, vec![0.5, 0.25, 0.125, 0.125]);
        assert_eq!(ProbSource::parse_generator("dyadic:1").unwrap().load(0).unwrap(), vec![1.0]);

        let z = ProbSource::parse_generator("zipf:1.0,1000").unwrap().load(0).unwrap();
        assert_eq!(z.len(), 1000);
        assert!((sum(&z) - 1.0).abs() < 1e-12);
        assert!((z[0] / z[9] - 10.0).abs() < 1e-9);

        let g = ProbSource::parse_generator("geometric:0.5,3").unwrap().load(0).unwrap();
        assert!((g[0] - 4.0 / 7.0).abs() < 1e-15);

        let n = ProbSource::parse_generator("zipf:1,1e6").unwrap();
        assert_eq!(n, ProbSource::Zipf { s: 1.0, n: 1_000_000 });
    }

    #[test]
    fn uniform_is_seeded() {
        let src = ProbSource::parse_generator("uniform:50").unwrap();
        assert_eq!(src.load(7).unwrap(), src.load(7).unwrap());
        assert_ne!(src.load(7).unwrap(), src.load(8).unwrap());
        assert!(src.load(7).unwrap().iter().all(|&p| p > 0.0));
    }

    #[test]
    fn bad_generators() {
        for bad in ["zipf", "zipf:1", "zipf:-1,10", "uniform:0", "uniform:2.5", "geometric:2,10", "pareto:1,2"] {
            assert!(ProbSource::parse_generator(bad).is_err(), "{bad}");
        }
        assert!(ProbSource::parse_inline("0.5,x").is_err());
        assert_eq!(ProbSource::parse_inline("0.5, 0.5").unwrap(), ProbSource::Inline(vec![0.5, 0.5]));
    }
}
