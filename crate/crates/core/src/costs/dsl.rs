//! Textual cost specs.
//!
//! ```text
//! finite:1,3          explicit letter costs
//! linear              c_m = m
//! repeat:3            3 letters of every integer cost
//! fib                 d_j = F_j
//! rll:2,5             letters 0^k 1 for k = 2..=5, costs 2..=5
//! telegraph           finite:1,2
//! balanced            irreducible balanced binary words
//! profile:1,1,2,3;dominator=2.0,1.7
//!                     d_1..d_4 listed, then floor(1.7 * 2.0^j) letters of cost j
//! ```

use super::{CostSpec, Dominator, Family, Profile};
use crate::error::CostError;

fn parse_err(msg: impl Into<String>) -> CostError {
    CostError::Parse(msg.into())
}

fn parse_list<T: std::str::FromStr>(body: &str, what: &str) -> Result<Vec<T>, CostError> {
    body.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<T>()
                .map_err(|_| parse_err(format!("bad {what} '{tok}'")))
        })
        .collect()
}

/// Parses a cost-spec string. The result is not normalized.
pub fn parse_cost_spec(input: &str) -> Result<CostSpec, CostError> {
    let input = input.trim();
    let (head, body) = match input.split_once(':') {
        Some((h, b)) => (h.trim(), Some(b.trim())),
        None => (input, None),
    };
    let no_args = |spec: CostSpec| match body {
        None => Ok(spec),
        Some(_) => Err(parse_err(format!("'{head}' takes no arguments"))),
    };
    let need_body = || body.ok_or_else(|| parse_err(format!("'{head}' needs arguments")));

    match head.to_ascii_lowercase().as_str() {
        "finite" => {
            let costs: Vec<f64> = parse_list(need_body()?, "cost")?;
            if let Some(&bad) = costs.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
                return Err(CostError::NonPositiveCost(bad));
            }
            if costs.len() < 2 {
                return Err(CostError::TooFewLetters(costs.len()));
            }
            Ok(CostSpec::finite(costs))
        }
        "linear" => no_args(CostSpec::profile(Profile::Linear)),
        "fib" | "fibonacci" => no_args(CostSpec::profile(Profile::Fibonacci)),
        "balanced" => no_args(CostSpec::profile(Profile::BalancedWords)),
        "telegraph" => no_args(CostSpec::FiniteList {
            costs: vec![1.0, 2.0],
            family: Family::Telegraph,
        }),
        "repeat" => {
            let copies: u32 = need_body()?
                .parse()
                .map_err(|_| parse_err("repeat needs a positive integer"))?;
            if copies == 0 {
                return Err(parse_err("repeat needs a positive integer"));
            }
            Ok(CostSpec::profile(Profile::Repeat { copies }))
        }
        "rll" => {
            let bounds: Vec<u32> = parse_list(need_body()?, "run length")?;
            let [a, b] = bounds[..] else {
                return Err(parse_err("rll needs exactly two bounds a,b"));
            };
            if a == 0 {
                return Err(CostError::NonPositiveCost(0.0));
            }
            if b <= a {
                return Err(CostError::TooFewLetters((b + 1).saturating_sub(a) as usize));
            }
            Ok(CostSpec::FiniteList {
                costs: (a..=b).map(f64::from).collect(),
                family: Family::RunLengthLimited {
                    min_zeros: a,
                    max_zeros: b,
                },
            })
        }
        "profile" => parse_profile(need_body()?),
        other => Err(parse_err(format!("unknown cost family '{other}'"))),
    }
}

fn parse_profile(body: &str) -> Result<CostSpec, CostError> {
    let mut parts = body.split(';');
    let prefix: Vec<u64> = parse_list(parts.next().unwrap_or(""), "multiplicity")?;
    let mut tail = None;
    for part in parts {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected key=value, got '{part}'")))?;
        match key.trim() {
            "dominator" => {
                let nums: Vec<f64> = parse_list(value, "dominator value")?;
                let [ratio, scale] = nums[..] else {
                    return Err(parse_err("dominator needs ratio,scale"));
                };
                if !(ratio.is_finite() && ratio > 0.0 && scale.is_finite() && scale >= 0.0) {
                    return Err(parse_err("dominator ratio must be positive and scale nonnegative"));
                }
                tail = Some(Dominator { ratio, scale });
            }
            other => return Err(parse_err(format!("unknown profile option '{other}'"))),
        }
    }
    if let Some(dom) = tail {
        for (i, &d) in prefix.iter().enumerate() {
            let j = i as u64 + 1;
            if d as f64 > dom.bound(j) {
                return Err(parse_err(format!(
                    "d_{j} = {d} exceeds dominator {} * {}^{j}",
                    dom.scale, dom.ratio
                )));
            }
        }
    }
    let spec = CostSpec::profile(Profile::Custom { prefix, tail });
    match spec.alphabet_size() {
        Some(t) if t < 2 => Err(CostError::TooFewLetters(t)),
        _ => Ok(spec),
    }
}
