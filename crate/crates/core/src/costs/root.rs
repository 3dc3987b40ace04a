//! The characteristic root `c` and the quantities derived from it.

use serde::Serialize;

use super::{level_series, CostSpec, Profile};
use crate::error::CostError;
use crate::numeric::KahanSum;

pub const DEFAULT_TOL: f64 = 1e-12;
const MAX_ITERATIONS: usize = 200;
const MAX_BRACKET: f64 = 1e9;
/// Certified truncation error for tail sums.
const TAIL_TOL: f64 = 1e-13;

/// Positive root of `1 = sum_i 2^(-c c_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharRoot {
    pub c: f64,
    /// Width of the final bisection bracket.
    pub tolerance: f64,
    /// `|S(c) - 1|` at the returned root.
    pub residual: f64,
    /// `sup_m beta_m`; `f64::INFINITY` when unbounded.
    pub beta: f64,
    /// Whether `sum_m c_m 2^(-c c_m)` converges.
    pub tail_convergent: bool,
}

impl CharRoot {
    pub fn beta_is_finite(&self) -> bool {
        self.beta.is_finite()
    }
}

/// Solves the characteristic equation by bisection.
///
/// `S(c)` is strictly decreasing, so the root is unique; the upper end of the
/// bracket is found by doubling until `S(hi) < 1`.
pub fn char_root(spec: &CostSpec, tol: f64) -> Result<CharRoot, CostError> {
    let tol = if tol > 0.0 { tol } else { DEFAULT_TOL };
    let (floor, inclusive) = spec.convergence_floor();

    // S(c) > 1 is "root lies to the right", divergence counts as +infinity
    let above_one = |c: f64| spec.char_sum(c).is_none_or(|s| s > 1.0);

    if inclusive {
        if let Some(s) = spec.char_sum(floor) {
            if (s - 1.0).abs() <= tol {
                return Ok(finish(spec, floor, 0.0, s));
            }
            if s < 1.0 {
                return Err(CostError::NoRoot);
            }
        }
    }

    let mut lo = floor;
    let mut hi = floor + 1.0;
    while above_one(hi) {
        lo = hi;
        hi = floor + 2.0 * (hi - floor);
        if hi > MAX_BRACKET {
            return Err(CostError::DivergentSpec(format!(
                "S(c) >= 1 for every c up to {MAX_BRACKET}"
            )));
        }
    }

    for _ in 0..MAX_ITERATIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match spec.char_sum(mid) {
            Some(1.0) => {
                lo = mid;
                hi = mid;
            }
            Some(s) if s < 1.0 => hi = mid,
            _ => lo = mid,
        }
    }

    // prefer the bracket end whose residual is certified
    let candidates = [0.5 * (lo + hi), hi];
    let (c, s) = candidates
        .iter()
        .filter_map(|&c| spec.char_sum(c).map(|s| (c, s)))
        .min_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs()))
        .ok_or(CostError::NoRoot)?;
    // false for a NaN residual as well
    let residual_ok = (s - 1.0).abs() <= 1e-6;
    if !residual_ok || c <= tol {
        // the bracket collapsed onto the edge of convergence (or onto 0)
        // without crossing 1
        return Err(CostError::NoRoot);
    }
    Ok(finish(spec, c, hi - lo, s))
}

fn finish(spec: &CostSpec, c: f64, width: f64, s: f64) -> CharRoot {
    let tail_convergent = tail_converges(spec, c);
    CharRoot {
        c,
        tolerance: width,
        residual: (s - 1.0).abs(),
        beta: beta_of(spec, c),
        tail_convergent,
    }
}

fn tail_converges(spec: &CostSpec, c: f64) -> bool {
    match spec {
        CostSpec::FiniteList { .. } => true,
        CostSpec::IntegerProfile { profile } => {
            if profile.support_end().is_some() {
                return true;
            }
            match profile {
                Profile::BalancedWords => false,
                _ => profile
                    .dominator()
                    .is_some_and(|d| d.ratio * (-c).exp2() < 1.0),
            }
        }
    }
}

/// `beta = sup_m 2^(c c_m) sum_{i >= m} 2^(-c c_i)`.
///
/// Finite lists are evaluated exactly with suffix sums. Profiles with
/// `d_j <= K` use `K / (1 - 2^(-c))`, which is attained by `Linear` and
/// `Repeat`; anything else is infinite.
pub fn beta_of(spec: &CostSpec, c: f64) -> f64 {
    match spec {
        CostSpec::FiniteList { costs, .. } => {
            let mut suffix = KahanSum::new();
            let mut best = 0.0f64;
            for &cm in costs.iter().rev() {
                suffix.add((-c * cm).exp2());
                best = best.max((c * cm).exp2() * suffix.value());
            }
            best
        }
        CostSpec::IntegerProfile { profile } => {
            if let Some(end) = profile.support_end() {
                let letters = spec.first_letters(usize::try_from(profile_len(profile, end)).unwrap_or(usize::MAX));
                return beta_of(&CostSpec::finite(letters), c);
            }
            match profile.max_multiplicity() {
                Some(k) => k as f64 / (1.0 - (-c).exp2()),
                None => f64::INFINITY,
            }
        }
    }
}

fn profile_len(profile: &Profile, end: u64) -> u64 {
    (1..=end).fold(0u64, |acc, j| acc.saturating_add(profile.level_count(j)))
}

/// `g(m) = sum_{m' >= m} c_{m'} 2^(-c c_{m'})` with letters indexed from 1.
pub fn tail_sum_g(spec: &CostSpec, root: &CharRoot, from_index: u64) -> Result<f64, CostError> {
    if !root.tail_convergent {
        return Err(CostError::DivergentTail);
    }
    let c = root.c;
    let from = from_index.max(1);
    match spec {
        CostSpec::FiniteList { costs, .. } => {
            let start = (from - 1) as usize;
            Ok(crate::numeric::compensated_sum(
                costs.iter().skip(start).map(|&cm| cm * (-c * cm).exp2()),
            ))
        }
        CostSpec::IntegerProfile { profile } => {
            let Some((level, remaining)) = spec.locate_letter(from) else {
                return Ok(0.0);
            };
            let head = remaining as f64 * level as f64 * (-c * level as f64).exp2();
            let (tail, _) = level_series(profile, c, level, true, TAIL_TOL)
                .ok_or(CostError::DivergentTail)?;
            Ok(head + tail)
        }
    }
}
