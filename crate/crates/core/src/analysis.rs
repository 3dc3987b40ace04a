//! Entropy, redundancy and the redundancy bounds.
//!
//! All logarithms are base 2. With `H` the entropy and `c` the characteristic
//! root, a code of expected cost `C(T)` has redundancy `R = C(T) - H/c` and
//! normalized redundancy `NR = c C(T) - H`. Every bound here is a bound on
//! `NR` for codes produced by [`crate::coder::build_code`].

use std::fmt;

use serde::Serialize;

use crate::coder::{CodeTree, ProbInput, SplitTrace};
use crate::costs::{char_root, level_series, CharRoot, CostSpec, DEFAULT_TOL};
use crate::error::{AnalysisError, CostError};
use crate::numeric::{compensated_sum, plogp, KahanSum};

/// Epsilon used by [`report`] for the approximation bound.
pub const DEFAULT_EPSILON: f64 = 0.5;
const MAX_SCAN_LEVELS: usize = 100_000;
const TAIL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundName {
    MehlhornEqMbound,
    ThmFirst,
    ThmBeta,
    ThmTbound,
    LemKbound,
    ThmApprox,
}

impl BoundName {
    pub const ALL: [BoundName; 6] = [
        BoundName::MehlhornEqMbound,
        BoundName::ThmFirst,
        BoundName::ThmBeta,
        BoundName::ThmTbound,
        BoundName::LemKbound,
        BoundName::ThmApprox,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::MehlhornEqMbound => "Mehlhorn_eqMbound",
            BoundName::ThmFirst => "Thm_first",
            BoundName::ThmBeta => "Thm_beta",
            BoundName::ThmTbound => "Thm_tbound",
            BoundName::LemKbound => "Lem_Kbound",
            BoundName::ThmApprox => "Thm_approx",
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for BoundName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// One bound on `NR`. `value` is present whenever it can be computed, even if
/// the bound is not a guarantee for this coder (the Mehlhorn reference).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub name: BoundName,
    pub value: Option<f64>,
    pub applicable: bool,
    pub reason: Option<String>,
}

impl BoundEntry {
    fn from_result(name: BoundName, result: Result<f64, AnalysisError>) -> Self {
        match result {
            Ok(value) => Self {
                name,
                value: Some(value),
                applicable: true,
                reason: None,
            },
            Err(e) => Self {
                name,
                value: None,
                applicable: false,
                reason: Some(e.reason().to_string()),
            },
        }
    }
}

/// Parameters of the `(1 + eps) OPT + f` guarantee.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxBound {
    pub epsilon: f64,
    /// Smallest cost threshold whose tail is at most `eps / 6`.
    pub n_epsilon: f64,
    /// Number of letters of cost at most `n_epsilon` (saturating).
    pub m_epsilon: u64,
    /// `sum_{m > m_eps} c_m 2^(-c c_m)`.
    pub tail: f64,
    /// The same tail at the previous candidate threshold, if there is one.
    pub previous_tail: Option<f64>,
    /// `f = (4/3)(2/c + (c_2 - c_1) + N_eps)`.
    pub f_value: f64,
}

impl ApproxBound {
    /// Guaranteed upper bound on `C(T)` given the entropy.
    pub fn cost_bound(&self, entropy: f64, c: f64) -> f64 {
        (1.0 + self.epsilon) * entropy / c + self.f_value
    }

    /// The guarantee restated as a bound on `NR`: `eps H + c f`.
    pub fn nr_bound(&self, entropy: f64, c: f64) -> f64 {
        self.epsilon * entropy + c * self.f_value
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub cost: f64,
    pub entropy: f64,
    pub lower_bound: f64,
    pub redundancy: f64,
    pub nr: f64,
    pub bounds: Vec<BoundEntry>,
}

impl AnalysisReport {
    pub fn bound(&self, name: BoundName) -> Option<&BoundEntry> {
        self.bounds.iter().find(|b| b.name == name)
    }

    /// Smallest applicable bound on `NR`.
    pub fn best_bound(&self) -> Option<&BoundEntry> {
        self.bounds
            .iter()
            .filter(|b| b.applicable && b.value.is_some())
            .min_by(|a, b| a.value.unwrap().total_cmp(&b.value.unwrap()))
    }

    /// Applicable bounds that `NR` exceeds by more than `tol`.
    pub fn violations(&self, tol: f64) -> Vec<&BoundEntry> {
        self.bounds
            .iter()
            .filter(|b| b.applicable && b.value.is_some_and(|v| self.nr > v + tol))
            .collect()
    }
}

impl AnalysisError {
    /// Short machine-readable reason.
    pub fn reason(&self) -> &'static str {
        match self {
            AnalysisError::InfiniteAlphabet => "infinite-alphabet",
            AnalysisError::BetaInfinite => "beta-infinite",
            AnalysisError::UnboundedProfile => "unbounded-profile",
            AnalysisError::InvalidEpsilon(_) => "invalid-epsilon",
            AnalysisError::ScanExhausted(_) => "scan-exhausted",
            AnalysisError::NotNormalized(_) => "not-normalized",
            AnalysisError::Cost(CostError::DivergentTail) => "divergent-tail",
            AnalysisError::Cost(_) => "invalid-costs",
        }
    }
}

pub fn entropy(input: &ProbInput) -> f64 {
    entropy_of(&input.probs)
}

/// `H(p) = -sum p log2 p`, with `0 log 0 = 0`.
pub fn entropy_of(probs: &[f64]) -> f64 {
    compensated_sum(probs.iter().map(|&p| plogp(p)))
}

fn finite_t(spec: &CostSpec) -> Result<usize, AnalysisError> {
    spec.alphabet_size().ok_or(AnalysisError::InfiniteAlphabet)
}

fn c_t(spec: &CostSpec) -> Result<f64, AnalysisError> {
    finite_t(spec)?;
    spec.max_cost().ok_or(AnalysisError::InfiniteAlphabet)
}

/// `2(1 - p1) + c c_t`.
pub fn bound_thm_first(spec: &CostSpec, root: &CharRoot, p1: f64) -> Result<f64, AnalysisError> {
    Ok(2.0 * (1.0 - p1) + root.c * c_t(spec)?)
}

/// `2(1 - p1) + max(c (c_2 - c_1), 1 + log beta)`.
pub fn bound_thm_beta(spec: &CostSpec, root: &CharRoot, p1: f64) -> Result<f64, AnalysisError> {
    if !root.beta.is_finite() {
        return Err(AnalysisError::BetaInfinite);
    }
    Ok(2.0 * (1.0 - p1) + (root.c * (spec.c2() - spec.c1())).max(1.0 + root.beta.log2()))
}

/// `2(1 - p1) + max(c (c_2 - c_1), 1 + log t)`.
pub fn bound_thm_tbound(spec: &CostSpec, root: &CharRoot, p1: f64) -> Result<f64, AnalysisError> {
    let t = finite_t(spec)? as f64;
    Ok(2.0 * (1.0 - p1) + (root.c * (spec.c2() - spec.c1())).max(1.0 + t.log2()))
}

/// `K = max_j d_j`, requiring `c_1 = 1`.
pub fn kbound_k(spec: &CostSpec) -> Result<u64, AnalysisError> {
    let c1 = spec.c1();
    if c1 != 1.0 {
        return Err(AnalysisError::NotNormalized(c1));
    }
    spec.multiplicity_bound().ok_or(AnalysisError::UnboundedProfile)
}

/// `2(1 - p1) + max(c (c_2 - c_1), 1 + log(K / (1 - 2^-c)))`, plus `c` inside
/// the second term when some cost is not an integer.
pub fn bound_lem_kbound(spec: &CostSpec, root: &CharRoot, p1: f64) -> Result<f64, AnalysisError> {
    let k = kbound_k(spec)?;
    let c = root.c;
    let extra = if spec.is_integer() { 0.0 } else { c };
    let log_term = 1.0 + extra + (k as f64 / (1.0 - (-c).exp2())).log2();
    Ok(2.0 * (1.0 - p1) + (c * (spec.c2() - spec.c1())).max(log_term))
}

/// `(1 - p1 - pn) + c c_t`, the classical bound for Mehlhorn's coder. Shown
/// for comparison only.
pub fn bound_mehlhorn_reference(
    spec: &CostSpec,
    root: &CharRoot,
    p1: f64,
    pn: f64,
) -> Result<f64, AnalysisError> {
    Ok((1.0 - p1 - pn) + root.c * c_t(spec)?)
}

/// Finds `N_eps` by scanning cost thresholds (distinct costs for finite
/// lists, occupied integer levels for profiles) for the first one whose
/// letter tail `sum_{m > m_eps} c_m 2^(-c c_m)` is at most `eps / 6`.
pub fn approx_bound(spec: &CostSpec, root: &CharRoot, epsilon: f64) -> Result<ApproxBound, AnalysisError> {
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(AnalysisError::InvalidEpsilon(epsilon));
    }
    if !root.tail_convergent {
        return Err(CostError::DivergentTail.into());
    }
    let c = root.c;
    let target = epsilon / 6.0;
    let finish = |n_epsilon: f64, m_epsilon: u64, tail: f64, previous_tail: Option<f64>| ApproxBound {
        epsilon,
        n_epsilon,
        m_epsilon,
        tail,
        previous_tail,
        f_value: 4.0 / 3.0 * (2.0 / c + (spec.c2() - spec.c1()) + n_epsilon),
    };

    let mut previous = None;
    match spec {
        CostSpec::FiniteList { costs, .. } => {
            // suffix[m] = sum_{i >= m} c_i 2^(-c c_i), 0-based
            let mut suffix = vec![0.0; costs.len() + 1];
            let mut acc = KahanSum::new();
            for (i, &cm) in costs.iter().enumerate().rev() {
                acc.add(cm * (-c * cm).exp2());
                suffix[i] = acc.value();
            }
            let mut m = 0;
            while m < costs.len() {
                let level = costs[m];
                while m < costs.len() && costs[m] <= level {
                    m += 1;
                }
                let tail = suffix[m];
                if tail <= target {
                    return Ok(finish(level, m as u64, tail, previous));
                }
                previous = Some(tail);
            }
            unreachable!("the empty tail always qualifies")
        }
        CostSpec::IntegerProfile { profile } => {
            let mut letters = 0u64;
            for j in 1..=MAX_SCAN_LEVELS as u64 {
                let d = profile.level_count(j);
                if d == 0 && profile.support_end().is_none_or(|e| j <= e) {
                    continue;
                }
                letters = letters.saturating_add(d);
                let (tail, _) =
                    level_series(profile, c, j, true, TAIL_TOL).ok_or(CostError::DivergentTail)?;
                if tail <= target {
                    return Ok(finish(j as f64, letters, tail, previous));
                }
                previous = Some(tail);
            }
            Err(AnalysisError::ScanExhausted(MAX_SCAN_LEVELS))
        }
    }
}

/// The approximation bound expressed on `NR` for a given entropy.
pub fn bound_thm_approx(
    spec: &CostSpec,
    root: &CharRoot,
    epsilon: f64,
    entropy: f64,
) -> Result<f64, AnalysisError> {
    Ok(approx_bound(spec, root, epsilon)?.nr_bound(entropy, root.c))
}

/// Evaluates every bound at the given `p1`, `pn` and entropy.
pub fn all_bounds(
    spec: &CostSpec,
    root: &CharRoot,
    p1: f64,
    pn: f64,
    entropy: f64,
    epsilon: f64,
) -> Vec<BoundEntry> {
    BoundName::ALL
        .iter()
        .map(|&name| match name {
            BoundName::MehlhornEqMbound => {
                let mut entry =
                    BoundEntry::from_result(name, bound_mehlhorn_reference(spec, root, p1, pn));
                if entry.applicable {
                    entry.applicable = false;
                    entry.reason = Some("reference-only".to_string());
                }
                entry
            }
            BoundName::ThmFirst => BoundEntry::from_result(name, bound_thm_first(spec, root, p1)),
            BoundName::ThmBeta => BoundEntry::from_result(name, bound_thm_beta(spec, root, p1)),
            BoundName::ThmTbound => BoundEntry::from_result(name, bound_thm_tbound(spec, root, p1)),
            BoundName::LemKbound => BoundEntry::from_result(name, bound_lem_kbound(spec, root, p1)),
            BoundName::ThmApprox => {
                BoundEntry::from_result(name, bound_thm_approx(spec, root, epsilon, entropy))
            }
        })
        .collect()
}

pub fn report(tree: &CodeTree, input: &ProbInput, spec: &CostSpec, root: &CharRoot) -> AnalysisReport {
    report_with_epsilon(tree, input, spec, root, DEFAULT_EPSILON)
}

pub fn report_with_epsilon(
    tree: &CodeTree,
    input: &ProbInput,
    spec: &CostSpec,
    root: &CharRoot,
    epsilon: f64,
) -> AnalysisReport {
    let cost = tree.expected_cost(input);
    let h = entropy(input);
    let c = root.c;
    AnalysisReport {
        cost,
        entropy: h,
        lower_bound: h / c,
        redundancy: cost - h / c,
        nr: c * cost - h,
        bounds: all_bounds(spec, root, input.p1(), input.pn(), h, epsilon),
    }
}

/// Uniform bound for every truncation `(c_1, ..., c_t)` of an alphabet with
/// `d_j <= K`: the root of each truncation is at least the two-letter root
/// `c^(2)` and below the full root `c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationBound {
    /// Root of the full alphabet.
    pub c: f64,
    /// Root of the first two letters.
    pub c_two: f64,
    pub k: u64,
    /// Bound on `NR_t` at the given `p1`.
    pub nr: f64,
    /// `nr / c^(2)`, a bound on `R_t`.
    pub r: f64,
}

pub fn truncation_bound(full: &CostSpec, p1: f64) -> Result<TruncationBound, AnalysisError> {
    let k = kbound_k(full)?;
    let root = char_root(full, DEFAULT_TOL)?;
    let two = CostSpec::finite(full.first_letters(2));
    let c_two = char_root(&two, DEFAULT_TOL)?.c;
    let c = root.c;
    let extra = if full.is_integer() { 0.0 } else { c };
    let log_term = 1.0 + extra + (k as f64 / (1.0 - (-c_two).exp2())).log2();
    let nr = 2.0 * (1.0 - p1) + (c * (full.c2() - full.c1())).max(log_term);
    Ok(TruncationBound {
        c,
        c_two,
        k,
        nr,
        r: nr / c_two,
    })
}

/// `sum_v sum_m c_m w_m(v)`, which equals `C(T)`.
pub fn lemma1_cost(trace: &SplitTrace) -> f64 {
    compensated_sum(
        trace
            .nodes
            .iter()
            .flat_map(|v| v.final_bins.iter().map(|b| b.cost * b.weight)),
    )
}

/// `sum_v w(v) H(w_1(v)/w(v), w_2(v)/w(v), ...)`, which equals `H(p)`.
pub fn lemma1_entropy(trace: &SplitTrace) -> f64 {
    compensated_sum(trace.nodes.iter().filter(|v| v.weight > 0.0).map(|v| {
        let inner = compensated_sum(v.final_bins.iter().map(|b| plogp(b.weight / v.weight)));
        v.weight * inner
    }))
}

/// `w(v) E*(v, m) = w*_m (c c_m + log(w*_m / w(v)))`.
fn weighted_e_star(weight: f64, bin_weight: f64, cost: f64, c: f64) -> f64 {
    if bin_weight <= 0.0 || weight <= 0.0 {
        0.0
    } else {
        bin_weight * (c * cost + (bin_weight / weight).log2())
    }
}

/// `NR*`: normalized redundancy computed from the initial bins.
pub fn nr_star(trace: &SplitTrace, c: f64) -> f64 {
    compensated_sum(trace.nodes.iter().flat_map(|v| {
        v.initial_bins
            .iter()
            .map(move |b| weighted_e_star(v.weight, b.weight, b.cost, c))
    }))
}

/// `sum_v sum_{|I*_m(v)| = 1} w(v) E*(v, m)`.
pub fn singleton_e_star(trace: &SplitTrace, c: f64) -> f64 {
    compensated_sum(trace.nodes.iter().flat_map(|v| {
        v.initial_bins
            .iter()
            .filter(|b| b.first == b.last)
            .map(move |b| weighted_e_star(v.weight, b.weight, b.cost, c))
    }))
}

/// Total probability of items moved by a right shift.
pub fn right_shifted_mass(trace: &SplitTrace, input: &ProbInput) -> f64 {
    compensated_sum(trace.right_shifted_items().into_iter().map(|k| input.probs[k]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coder::{build_code, prepare};
    use crate::costs::{parse_cost_spec, Profile};

    fn root_of(spec: &CostSpec) -> CharRoot {
        char_root(spec, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy_of(&[0.5, 0.5]), 1.0);
        assert_eq!(entropy_of(&[1.0, 0.0]), 0.0);
        let h = entropy_of(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]);
        let expected = 2.0 / 3.0 * 3f64.log2() + 6f64.log2() / 3.0;
        assert!((h - expected).abs() < 1e-14);
        assert!((h - 1.9183).abs() < 1e-4);
    }

    #[test]
    fn thm_first_examples() {
        let spec = CostSpec::finite(vec![1.0, 3.0]);
        let r = root_of(&spec);
        let v = bound_thm_first(&spec, &r, 1.0 / 3.0).unwrap();
        assert!((v - (4.0 / 3.0 + 3.0 * r.c)).abs() < 1e-12);
        assert!((bound_thm_first(&spec, &r, 1.0).unwrap() - 3.0 * r.c).abs() < 1e-12);
        let bin = CostSpec::finite(vec![1.0, 1.0]);
        assert!((bound_thm_first(&bin, &root_of(&bin), 0.5).unwrap() - 2.0).abs() < 1e-12);
        let lin = CostSpec::profile(Profile::Linear);
        assert_eq!(bound_thm_first(&lin, &root_of(&lin), 0.5), Err(AnalysisError::InfiniteAlphabet));
    }

    #[test]
    fn thm_beta_and_tbound() {
        let bin = CostSpec::finite(vec![1.0, 1.0]);
        let r = root_of(&bin);
        assert!((bound_thm_beta(&bin, &r, 0.3).unwrap() - (1.4 + 2.0)).abs() < 1e-12);
        assert!((bound_thm_tbound(&bin, &r, 0.5).unwrap() - 3.0).abs() < 1e-12);

        let four = CostSpec::finite(vec![1.0, 2.0, 3.0, 4.0]);
        let r4 = root_of(&four);
        let v = bound_thm_tbound(&four, &r4, 0.4).unwrap();
        assert!((v - (1.2 + (r4.c * 1.0).max(3.0))).abs() < 1e-12);
        assert!(bound_thm_beta(&four, &r4, 0.4).unwrap() <= v + 1e-12);

        let rep = CostSpec::profile(Profile::Repeat { copies: 1 });
        let rr = root_of(&rep);
        assert!((bound_thm_beta(&rep, &rr, 0.25).unwrap() - (1.5 + 2.0)).abs() < 1e-9);
        let fib = CostSpec::profile(Profile::Fibonacci);
        assert_eq!(bound_thm_beta(&fib, &root_of(&fib), 0.5), Err(AnalysisError::BetaInfinite));
    }

    #[test]
    fn kbound_examples() {
        let lin = CostSpec::profile(Profile::Linear);
        assert!((bound_lem_kbound(&lin, &root_of(&lin), 0.5).unwrap() - 3.0).abs() < 1e-9);
        for d in 2..=6u32 {
            let spec = CostSpec::profile(Profile::Repeat { copies: d });
            let v = bound_lem_kbound(&spec, &root_of(&spec), 0.0).unwrap();
            assert!(v <= 3.0 + f64::from(d + 1).log2() + 1e-9);
        }
        let fib = CostSpec::profile(Profile::Fibonacci);
        assert_eq!(bound_lem_kbound(&fib, &root_of(&fib), 0.5), Err(AnalysisError::UnboundedProfile));
        // non-integer costs pay an extra c
        let frac = CostSpec::finite(vec![1.0, 1.5]);
        let r = root_of(&frac);
        let expected = 2.0 * 0.5 + (r.c * 0.5).max(1.0 + r.c + (2.0 / (1.0 - (-r.c).exp2())).log2());
        assert!((bound_lem_kbound(&frac, &r, 0.5).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn mehlhorn_examples() {
        let bin = CostSpec::finite(vec![1.0, 1.0]);
        assert!((bound_mehlhorn_reference(&bin, &root_of(&bin), 0.25, 0.25).unwrap() - 1.5).abs() < 1e-12);
        let tele = CostSpec::finite(vec![1.0, 2.0]);
        let r = root_of(&tele);
        let v = bound_mehlhorn_reference(&tele, &r, 0.5, 0.1).unwrap();
        assert!((v - (0.4 + 2.0 * r.c)).abs() < 1e-12);
    }

    #[test]
    fn approx_bound_finite_uses_empty_tail() {
        let spec = CostSpec::finite(vec![1.0, 2.0, 3.0]);
        let r = root_of(&spec);
        let a = approx_bound(&spec, &r, 0.1).unwrap();
        assert_eq!(a.n_epsilon, 3.0);
        assert_eq!(a.m_epsilon, 3);
        assert_eq!(a.tail, 0.0);
        assert!(a.previous_tail.unwrap() > 0.1 / 6.0);
        let f = 4.0 / 3.0 * (2.0 / r.c + 1.0 + 3.0);
        assert!((a.f_value - f).abs() < 1e-12);
    }

    #[test]
    fn approx_bound_linear_matches_closed_form() {
        // tail past level N is (N + 2) 2^-N
        let spec = CostSpec::profile(Profile::Linear);
        let r = root_of(&spec);
        for eps in [0.5, 0.25, 0.1, 0.01] {
            let a = approx_bound(&spec, &r, eps).unwrap();
            let tail = |n: f64| (n + 2.0) * (-n).exp2();
            let n = (1..).map(f64::from).find(|&n| tail(n) <= eps / 6.0).unwrap();
            assert_eq!(a.n_epsilon, n, "eps = {eps}");
            assert!((a.tail - tail(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn approx_bound_fib_minimal() {
        let spec = CostSpec::profile(Profile::Fibonacci);
        let r = root_of(&spec);
        let a = approx_bound(&spec, &r, 0.5).unwrap();
        assert!(a.tail <= 0.5 / 6.0);
        assert!(a.previous_tail.unwrap() > 0.5 / 6.0);
        assert!(a.n_epsilon.is_finite() && a.n_epsilon > 1.0);
    }

    #[test]
    fn approx_bound_errors() {
        let bal = CostSpec::profile(Profile::BalancedWords);
        assert_eq!(
            approx_bound(&bal, &root_of(&bal), 0.5),
            Err(AnalysisError::Cost(CostError::DivergentTail))
        );
        let lin = CostSpec::profile(Profile::Linear);
        let r = root_of(&lin);
        assert!(matches!(approx_bound(&lin, &r, 0.0), Err(AnalysisError::InvalidEpsilon(_))));
        assert!(matches!(approx_bound(&lin, &r, 0.75), Err(AnalysisError::InvalidEpsilon(_))));
    }

    #[test]
    fn report_fields_are_consistent() {
        let spec = parse_cost_spec("finite:1,3").unwrap();
        let r = root_of(&spec);
        let input = prepare(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0], false).unwrap();
        let (tree, _) = build_code(&input, &spec, &r, false).unwrap();
        let rep = report(&tree, &input, &spec, &r);
        assert!((rep.nr - r.c * rep.redundancy).abs() < 1e-12);
        assert!(rep.redundancy >= -1e-9);
        assert_eq!(rep.bounds.len(), 6);
        assert!(rep.violations(1e-7).is_empty());
        let mehl = rep.bound(BoundName::MehlhornEqMbound).unwrap();
        assert!(!mehl.applicable && mehl.value.is_some());
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["bounds"][1]["name"], "Thm_first");
    }

    #[test]
    fn lemma1_and_nr_star_on_a_small_tree() {
        let spec = CostSpec::finite(vec![1.0, 2.0]);
        let r = root_of(&spec);
        let input = prepare(&[0.4, 0.3, 0.2, 0.1], false).unwrap();
        let (tree, trace) = build_code(&input, &spec, &r, true).unwrap();
        let trace = trace.unwrap();
        assert!((lemma1_cost(&trace) - tree.expected_cost(&input)).abs() < 1e-12);
        assert!((lemma1_entropy(&trace) - entropy(&input)).abs() < 1e-12);
        let nr = r.c * tree.expected_cost(&input) - entropy(&input);
        let star = nr_star(&trace, r.c);
        assert!(nr <= star + r.c * (spec.c2() - spec.c1()) * right_shifted_mass(&trace, &input) + 1e-9);
        assert!(star <= 2.0 * (1.0 - input.p1()) + singleton_e_star(&trace, r.c) + 1e-9);
    }

    #[test]
    fn truncation_constants() {
        let t = truncation_bound(&CostSpec::profile(Profile::Linear), 0.0).unwrap();
        assert_eq!(t.k, 1);
        assert!((t.c - 1.0).abs() < 1e-12);
        let expected = 3.0 + (2.0 / (3.0 - 5f64.sqrt())).log2();
        assert!((t.nr - expected).abs() < 1e-9);
        assert!((t.r - expected / t.c_two).abs() < 1e-12);
    }
}
