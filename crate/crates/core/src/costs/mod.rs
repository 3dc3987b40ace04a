//! Letter-cost alphabets.
//!
//! An alphabet is either an explicit nondecreasing list of costs or an
//! integer profile, where `d_j` letters cost exactly `j`. Profiles may be
//! infinite; they are enumerated lazily and every infinite profile carries a
//! geometric dominator `d_j <= scale * ratio^j` so that truncated sums come
//! with a certified remainder.

mod dsl;
mod root;

pub use dsl::parse_cost_spec;
pub use root::{beta_of, char_root, tail_sum_g, CharRoot, DEFAULT_TOL};

use serde::Serialize;

use crate::error::CostError;

/// Costs within this distance of an integer are treated as integers.
pub const INTEGER_SNAP: f64 = 1e-9;

/// Named origin of a cost spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `c_m = m`.
    Linear,
    /// `d` letters of every integer cost.
    Repeat { copies: u32 },
    /// `d_j = F_j`.
    Fibonacci,
    /// Letters `0^k 1` for `k = a..=b`, costs `a..=b`.
    RunLengthLimited { min_zeros: u32, max_zeros: u32 },
    /// Dot and dash, costs `(1, 2)`.
    Telegraph,
    /// Irreducible balanced binary words, `d_j = 2 C_{j/2-1}` for even `j`.
    BalancedWords,
    Custom,
}

/// Geometric bound `d_j <= scale * ratio^j`, valid for every `j >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dominator {
    pub ratio: f64,
    pub scale: f64,
}

impl Dominator {
    fn bound(&self, j: u64) -> f64 {
        self.scale * self.ratio.powf(j as f64)
    }
}

/// Letter multiplicities per integer cost level.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum Profile {
    Linear,
    Repeat { copies: u32 },
    Fibonacci,
    BalancedWords,
    /// Explicit `d_1, d_2, ...`. Without a dominator the alphabet ends with
    /// the listed levels; with one, level `j` past the prefix holds
    /// `floor(scale * ratio^j)` letters.
    Custom {
        prefix: Vec<u64>,
        tail: Option<Dominator>,
    },
}

const PHI: f64 = 1.618_033_988_749_895;

impl Profile {
    /// `d_j`, saturating at `u64::MAX`.
    pub fn level_count(&self, j: u64) -> u64 {
        if j == 0 {
            return 0;
        }
        match self {
            Profile::Linear => 1,
            Profile::Repeat { copies } => u64::from(*copies),
            Profile::Fibonacci => fibonacci(j),
            Profile::BalancedWords => {
                if j % 2 == 1 {
                    0
                } else {
                    catalan(j / 2 - 1).saturating_mul(2)
                }
            }
            Profile::Custom { prefix, tail } => {
                let idx = (j - 1) as usize;
                if idx < prefix.len() {
                    prefix[idx]
                } else {
                    match tail {
                        Some(dom) => {
                            let v = dom.bound(j).floor();
                            if v >= u64::MAX as f64 {
                                u64::MAX
                            } else {
                                v as u64
                            }
                        }
                        None => 0,
                    }
                }
            }
        }
    }

    /// `d_j` as a float, exact for built-in families well past `u64` range.
    pub fn level_weight(&self, j: u64) -> f64 {
        match self {
            Profile::Fibonacci => fibonacci_f64(j),
            Profile::BalancedWords if j.is_multiple_of(2) && j > 0 => 2.0 * catalan_f64(j / 2 - 1),
            Profile::Custom {
                prefix,
                tail: Some(dom),
            } if j as usize > prefix.len() => dom.bound(j).floor(),
            _ => self.level_count(j) as f64,
        }
    }

    /// Last nonempty level, or `None` when the profile is infinite.
    pub fn support_end(&self) -> Option<u64> {
        match self {
            Profile::Custom { prefix, tail } => {
                let prefix_end = prefix.iter().rposition(|&d| d > 0).map(|i| i as u64 + 1);
                match tail {
                    None => Some(prefix_end.unwrap_or(0)),
                    Some(dom) if dom.ratio < 1.0 => {
                        // floor(scale * ratio^j) is zero once scale * ratio^j < 1
                        let mut last = prefix_end.unwrap_or(0);
                        let mut j = prefix.len() as u64 + 1;
                        while dom.bound(j) >= 1.0 {
                            last = j;
                            j += 1;
                        }
                        Some(last)
                    }
                    Some(dom) if dom.ratio == 1.0 && dom.scale < 1.0 => {
                        Some(prefix_end.unwrap_or(0))
                    }
                    Some(_) => None,
                }
            }
            _ => None,
        }
    }

    /// Geometric dominator covering every level.
    pub fn dominator(&self) -> Option<Dominator> {
        match self {
            Profile::Linear => Some(Dominator {
                ratio: 1.0,
                scale: 1.0,
            }),
            Profile::Repeat { copies } => Some(Dominator {
                ratio: 1.0,
                scale: f64::from(*copies),
            }),
            // F_j <= phi^(j-1) <= phi^j
            Profile::Fibonacci => Some(Dominator {
                ratio: PHI,
                scale: 1.0,
            }),
            // 2 C_{k} <= 2 * 4^k = 2^(j-1) for j = 2k + 2
            Profile::BalancedWords => Some(Dominator {
                ratio: 2.0,
                scale: 0.5,
            }),
            Profile::Custom { tail, .. } => *tail,
        }
    }

    /// Largest `d_j`, if bounded.
    pub fn max_multiplicity(&self) -> Option<u64> {
        match self {
            Profile::Linear => Some(1),
            Profile::Repeat { copies } => Some(u64::from(*copies)),
            Profile::Fibonacci | Profile::BalancedWords => None,
            Profile::Custom { prefix, tail } => {
                let head = prefix.iter().copied().max().unwrap_or(0);
                match (tail, self.support_end()) {
                    (_, Some(end)) => Some(
                        (prefix.len() as u64 + 1..=end)
                            .map(|j| self.level_count(j))
                            .chain(std::iter::once(head))
                            .max()
                            .unwrap_or(0),
                    ),
                    (Some(dom), None) if dom.ratio <= 1.0 => Some(head.max(dom.scale.floor() as u64)),
                    _ => None,
                }
            }
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Profile::Linear => Family::Linear,
            Profile::Repeat { copies } => Family::Repeat { copies: *copies },
            Profile::Fibonacci => Family::Fibonacci,
            Profile::BalancedWords => Family::BalancedWords,
            Profile::Custom { .. } => Family::Custom,
        }
    }

    fn total_letters(&self) -> Option<u64> {
        self.support_end()
            .map(|end| (1..=end).fold(0u64, |acc, j| acc.saturating_add(self.level_count(j))))
    }

    fn first_level(&self) -> Option<u64> {
        match self.support_end() {
            Some(end) => (1..=end).find(|&j| self.level_count(j) > 0),
            None => (1..).find(|&j| self.level_count(j) > 0),
        }
    }
}

fn fibonacci(j: u64) -> u64 {
    let (mut a, mut b) = (1u64, 1u64);
    for _ in 2..j {
        let next = match a.checked_add(b) {
            Some(v) => v,
            None => return u64::MAX,
        };
        a = b;
        b = next;
    }
    b
}

fn fibonacci_f64(j: u64) -> f64 {
    if j <= 90 {
        return fibonacci(j) as f64;
    }
    (PHI.powf(j as f64) / 5f64.sqrt()).round()
}

fn catalan(i: u64) -> u64 {
    let mut c: u128 = 1;
    for k in 0..i {
        c = c * 2 * (2 * k as u128 + 1) / (k as u128 + 2);
        if c > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    c as u64
}

fn catalan_f64(i: u64) -> f64 {
    let mut c = 1.0f64;
    for k in 0..i {
        c = c * 2.0 * (2.0 * k as f64 + 1.0) / (k as f64 + 2.0);
    }
    c
}

/// An encoding alphabet with its letter costs.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CostSpec {
    FiniteList { costs: Vec<f64>, family: Family },
    IntegerProfile { profile: Profile },
}

impl CostSpec {
    pub fn finite(costs: Vec<f64>) -> Self {
        CostSpec::FiniteList {
            costs,
            family: Family::Custom,
        }
    }

    pub fn profile(profile: Profile) -> Self {
        CostSpec::IntegerProfile { profile }
    }

    pub fn family(&self) -> Family {
        match self {
            CostSpec::FiniteList { family, .. } => *family,
            CostSpec::IntegerProfile { profile } => profile.family(),
        }
    }

    /// Number of letters, `None` for infinite alphabets.
    pub fn alphabet_size(&self) -> Option<usize> {
        match self {
            CostSpec::FiniteList { costs, .. } => Some(costs.len()),
            CostSpec::IntegerProfile { profile } => profile
                .total_letters()
                .map(|t| usize::try_from(t).unwrap_or(usize::MAX)),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.alphabet_size().is_some()
    }

    /// Costs of the first `count` letters (fewer if the alphabet is smaller).
    pub fn first_letters(&self, count: usize) -> Vec<f64> {
        match self {
            CostSpec::FiniteList { costs, .. } => costs.iter().copied().take(count).collect(),
            CostSpec::IntegerProfile { profile } => {
                let end = profile.support_end();
                let mut out = Vec::with_capacity(count.min(1 << 20));
                let mut j = 1u64;
                while out.len() < count {
                    if end.is_some_and(|e| j > e) {
                        break;
                    }
                    let d = profile.level_count(j);
                    let take = (count - out.len()).min(usize::try_from(d).unwrap_or(usize::MAX));
                    out.extend(std::iter::repeat_n(j as f64, take));
                    j += 1;
                }
                out
            }
        }
    }

    /// Cost of letter `m` (1-based).
    pub fn letter_cost(&self, m: usize) -> Option<f64> {
        if m == 0 {
            return None;
        }
        match self {
            CostSpec::FiniteList { costs, .. } => costs.get(m - 1).copied(),
            CostSpec::IntegerProfile { profile } => {
                let (level, _) = self.locate_letter(m as u64)?;
                let _ = profile;
                Some(level as f64)
            }
        }
    }

    /// For integer profiles: the level holding letter `m` and the number of
    /// letters of that level at or after `m`.
    pub(crate) fn locate_letter(&self, m: u64) -> Option<(u64, u64)> {
        let CostSpec::IntegerProfile { profile } = self else {
            return None;
        };
        match profile {
            Profile::Linear => Some((m, 1)),
            Profile::Repeat { copies } => {
                let d = u64::from(*copies);
                let level = (m - 1) / d + 1;
                Some((level, level * d - m + 1))
            }
            _ => {
                let end = profile.support_end();
                let mut seen = 0u64;
                let mut j = 1u64;
                loop {
                    if end.is_some_and(|e| j > e) {
                        return None;
                    }
                    let d = profile.level_count(j);
                    if seen.saturating_add(d) >= m {
                        return Some((j, seen.saturating_add(d).saturating_sub(m).saturating_add(1)));
                    }
                    seen += d;
                    j += 1;
                }
            }
        }
    }

    pub fn c1(&self) -> f64 {
        self.letter_cost(1).unwrap_or(f64::NAN)
    }

    pub fn c2(&self) -> f64 {
        self.letter_cost(2).unwrap_or(f64::NAN)
    }

    /// Largest letter cost `c_t` for finite alphabets.
    pub fn max_cost(&self) -> Option<f64> {
        match self {
            CostSpec::FiniteList { costs, .. } => costs.last().copied(),
            CostSpec::IntegerProfile { profile } => profile.support_end().map(|e| e as f64),
        }
    }

    /// Whether every cost is an integer (within [`INTEGER_SNAP`]).
    pub fn is_integer(&self) -> bool {
        match self {
            CostSpec::FiniteList { costs, .. } => {
                costs.iter().all(|c| (c - c.round()).abs() <= INTEGER_SNAP)
            }
            CostSpec::IntegerProfile { .. } => true,
        }
    }

    /// `K` with `d_j <= K` for every `j`, when one exists.
    pub fn multiplicity_bound(&self) -> Option<u64> {
        match self {
            CostSpec::FiniteList { costs, .. } => {
                let top = costs.last().copied().unwrap_or(1.0);
                let levels = snap_floor(top).max(1.0) as u64;
                d_profile(self, levels).into_iter().max()
            }
            CostSpec::IntegerProfile { profile } => profile.max_multiplicity(),
        }
    }

    /// `S(c) = sum_i 2^(-c c_i)`, or `None` where the series diverges.
    pub fn char_sum(&self, c: f64) -> Option<f64> {
        match self {
            CostSpec::FiniteList { costs, .. } => Some(crate::numeric::compensated_sum(
                costs.iter().map(|&ci| (-c * ci).exp2()),
            )),
            CostSpec::IntegerProfile { profile } => {
                let x = (-c).exp2();
                match profile {
                    Profile::Linear => (x < 1.0).then(|| x / (1.0 - x)),
                    Profile::Repeat { copies } => {
                        (x < 1.0).then(|| f64::from(*copies) * x / (1.0 - x))
                    }
                    Profile::Fibonacci => {
                        let q = 1.0 - x - x * x;
                        (q > 0.0).then(|| x / q)
                    }
                    Profile::BalancedWords => {
                        let q = 1.0 - 4.0 * x * x;
                        (q >= 0.0).then(|| 1.0 - q.sqrt())
                    }
                    Profile::Custom { .. } => self.char_sum_series(c).filter(|s| s.is_finite()),
                }
            }
        }
    }

    /// `S(c)` by direct summation with a dominator-certified remainder below
    /// `1e-15`. Works for any profile with a dominator.
    pub fn char_sum_series(&self, c: f64) -> Option<f64> {
        match self {
            CostSpec::FiniteList { .. } => self.char_sum(c),
            CostSpec::IntegerProfile { profile } => {
                level_series(profile, c, 0, false, 1e-15).map(|(sum, _)| sum)
            }
        }
    }

    /// Smallest `c` worth probing, and whether `S` converges there.
    pub(crate) fn convergence_floor(&self) -> (f64, bool) {
        match self {
            CostSpec::FiniteList { .. } => (0.0, false),
            CostSpec::IntegerProfile { profile } => {
                if profile.support_end().is_some() {
                    return (0.0, false);
                }
                match profile {
                    Profile::BalancedWords => (1.0, true),
                    _ => {
                        let ratio = profile.dominator().map_or(f64::INFINITY, |d| d.ratio);
                        (ratio.log2().max(0.0), false)
                    }
                }
            }
        }
    }
}

/// Sums `sum_{j > after} d_j j^k 2^(-c j)` (with `k = 1` when `weighted`)
/// until the dominator bounds the remainder by `tol`. Returns the sum and
/// the certified remainder bound.
pub(crate) fn level_series(
    profile: &Profile,
    c: f64,
    after: u64,
    weighted: bool,
    tol: f64,
) -> Option<(f64, f64)> {
    let x = (-c).exp2();
    let weight = |j: u64| {
        let base = profile.level_weight(j) * (-c * j as f64).exp2();
        if weighted {
            base * j as f64
        } else {
            base
        }
    };
    if let Some(end) = profile.support_end() {
        let sum = crate::numeric::compensated_sum((after + 1..=end).map(weight));
        return Some((sum, 0.0));
    }
    let dom = profile.dominator()?;
    let y = dom.ratio * x;
    if y >= 1.0 {
        return None;
    }
    let remainder = |n: u64| {
        if weighted {
            dom.scale * crate::numeric::weighted_geometric_tail(n, y)
        } else {
            dom.scale * crate::numeric::geometric_tail(n, y)
        }
    };
    let mut acc = crate::numeric::KahanSum::new();
    let mut j = after;
    const MAX_LEVELS: u64 = 5_000_000;
    loop {
        let r = remainder(j);
        if r <= tol {
            return Some((acc.value(), r));
        }
        if j - after > MAX_LEVELS {
            return None;
        }
        j += 1;
        acc.add(weight(j));
    }
}

fn snap_floor(c: f64) -> f64 {
    let r = c.round();
    if (c - r).abs() <= INTEGER_SNAP {
        r
    } else {
        c.floor()
    }
}

/// Rescales costs so that the cheapest letter costs exactly 1 and sorts them
/// nondecreasingly. Integer profiles already live on the integer grid and
/// are returned unchanged.
pub fn normalize(spec: &CostSpec) -> Result<CostSpec, CostError> {
    match spec {
        CostSpec::FiniteList { costs, family } => {
            if costs.is_empty() {
                return Err(CostError::Empty);
            }
            if let Some(&bad) = costs.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
                return Err(CostError::NonPositiveCost(bad));
            }
            if costs.len() < 2 {
                return Err(CostError::TooFewLetters(costs.len()));
            }
            let mut sorted = costs.clone();
            sorted.sort_by(f64::total_cmp);
            let min = sorted[0];
            let mut scaled: Vec<f64> = sorted.iter().map(|c| c / min).collect();
            scaled[0] = 1.0;
            for c in scaled.iter_mut() {
                if (*c - c.round()).abs() <= INTEGER_SNAP {
                    *c = c.round();
                }
            }
            Ok(CostSpec::FiniteList {
                costs: scaled,
                family: *family,
            })
        }
        CostSpec::IntegerProfile { profile } => {
            match profile.total_letters() {
                Some(0) => return Err(CostError::Empty),
                Some(t) if t < 2 => return Err(CostError::TooFewLetters(t as usize)),
                _ => {}
            }
            if profile.first_level().is_none() {
                return Err(CostError::Empty);
            }
            Ok(spec.clone())
        }
    }
}

/// `d_j = |{ i : j <= c_i < j + 1 }|` for `j = 1..=up_to`.
pub fn d_profile(spec: &CostSpec, up_to: u64) -> Vec<u64> {
    match spec {
        CostSpec::FiniteList { costs, .. } => {
            let mut d = vec![0u64; up_to as usize];
            for &c in costs {
                let level = snap_floor(c);
                if level >= 1.0 && level <= up_to as f64 {
                    d[level as usize - 1] += 1;
                }
            }
            d
        }
        CostSpec::IntegerProfile { profile } => (1..=up_to).map(|j| profile.level_count(j)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finite(c: &[f64]) -> CostSpec {
        CostSpec::finite(c.to_vec())
    }

    fn costs_of(spec: &CostSpec) -> Vec<f64> {
        match spec {
            CostSpec::FiniteList { costs, .. } => costs.clone(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn normalize_scales_to_unit_minimum() {
        assert_eq!(costs_of(&normalize(&finite(&[2.0, 4.0, 6.0])).unwrap()), vec![1.0, 2.0, 3.0]);
        assert_eq!(costs_of(&normalize(&finite(&[1.0, 3.0])).unwrap()), vec![1.0, 3.0]);
        assert_eq!(costs_of(&normalize(&finite(&[0.5, 1.5])).unwrap()), vec![1.0, 3.0]);
    }

    #[test]
    fn normalize_sorts_and_is_idempotent() {
        let once = normalize(&finite(&[3.0, 1.5, 2.25])).unwrap();
        assert_eq!(costs_of(&once), vec![1.0, 1.5, 2.0]);
        assert_eq!(normalize(&once).unwrap(), once);
    }

    #[test]
    fn normalize_errors() {
        assert_eq!(normalize(&finite(&[])), Err(CostError::Empty));
        assert_eq!(normalize(&finite(&[1.0, 0.0])), Err(CostError::NonPositiveCost(0.0)));
        assert_eq!(normalize(&finite(&[1.0, -2.0])), Err(CostError::NonPositiveCost(-2.0)));
        assert_eq!(normalize(&finite(&[2.0])), Err(CostError::TooFewLetters(1)));
        let single = CostSpec::profile(Profile::Custom {
            prefix: vec![1],
            tail: None,
        });
        assert_eq!(normalize(&single), Err(CostError::TooFewLetters(1)));
    }

    #[test]
    fn d_profile_counts() {
        assert_eq!(d_profile(&finite(&[1.0, 1.0, 2.5]), 2), vec![2, 1]);
        let fib = CostSpec::profile(Profile::Fibonacci);
        assert_eq!(d_profile(&fib, 8), vec![1, 1, 2, 3, 5, 8, 13, 21]);
        let balanced = CostSpec::profile(Profile::BalancedWords);
        assert_eq!(d_profile(&balanced, 10), vec![0, 2, 0, 2, 0, 4, 0, 10, 0, 28]);
    }

    /// Words over {1,2,3} (costs 1,1,2) that end in letter 1 and contain no
    /// other 1: counted by brute force per total cost.
    #[test]
    fn restricted_language_reduction_gives_fibonacci() {
        let costs = [1u32, 1, 2];
        let mut counts = vec![0u64; 9];
        // words of the form {2,3}^* 1
        fn walk(cost: u32, costs: &[u32; 3], counts: &mut Vec<u64>) {
            let total = cost + costs[0];
            if (total as usize) < counts.len() {
                counts[total as usize] += 1;
            }
            for &letter in &[1usize, 2] {
                let next = cost + costs[letter];
                if (next as usize) < counts.len() {
                    walk(next, costs, counts);
                }
            }
        }
        walk(0, &costs, &mut counts);
        let fib = d_profile(&CostSpec::profile(Profile::Fibonacci), 8);
        assert_eq!(&counts[1..], &fib[..]);
        assert_eq!(counts[5], 5);
    }

    #[test]
    fn d_profile_of_finite_sums_to_t() {
        let spec = finite(&[1.0, 1.2, 2.0, 2.9, 3.0, 7.5]);
        assert_eq!(d_profile(&spec, 10).iter().sum::<u64>(), 6);
    }

    #[test]
    fn letters_enumerate_levels() {
        let rep = CostSpec::profile(Profile::Repeat { copies: 3 });
        assert_eq!(rep.first_letters(7), vec![1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 3.0]);
        assert_eq!(rep.letter_cost(7), Some(3.0));
        assert_eq!(rep.locate_letter(5), Some((2, 2)));
        let bal = CostSpec::profile(Profile::BalancedWords);
        assert_eq!(bal.first_letters(5), vec![2.0, 2.0, 4.0, 4.0, 6.0]);
        assert_eq!(bal.locate_letter(4), Some((4, 1)));
        let custom = CostSpec::profile(Profile::Custom {
            prefix: vec![1, 0, 2],
            tail: None,
        });
        assert_eq!(custom.alphabet_size(), Some(3));
        assert_eq!(custom.first_letters(10), vec![1.0, 3.0, 3.0]);
        assert_eq!(custom.letter_cost(4), None);
    }

    #[test]
    fn closed_forms_agree_with_series() {
        let specs = [
            CostSpec::profile(Profile::Linear),
            CostSpec::profile(Profile::Repeat { copies: 4 }),
            CostSpec::profile(Profile::Fibonacci),
        ];
        for spec in &specs {
            for &c in &[0.9, 1.3, 2.5, 4.0] {
                let (Some(a), Some(b)) = (spec.char_sum(c), spec.char_sum_series(c)) else {
                    continue;
                };
                assert!((a - b).abs() < 1e-12, "{spec:?} at {c}: {a} vs {b}");
            }
        }
        let bal = CostSpec::profile(Profile::BalancedWords);
        let a = bal.char_sum(1.5).unwrap();
        let b = bal.char_sum_series(1.5).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn multiplicity_bounds() {
        assert_eq!(CostSpec::profile(Profile::Linear).multiplicity_bound(), Some(1));
        assert_eq!(CostSpec::profile(Profile::Repeat { copies: 5 }).multiplicity_bound(), Some(5));
        assert_eq!(CostSpec::profile(Profile::Fibonacci).multiplicity_bound(), None);
        assert_eq!(finite(&[1.0, 1.0, 1.5, 3.0]).multiplicity_bound(), Some(3));
    }

    #[test]
    fn catalan_values() {
        let c: Vec<u64> = (0..8).map(catalan).collect();
        assert_eq!(c, vec![1, 1, 2, 5, 14, 42, 132, 429]);
        assert_eq!(catalan_f64(7), 429.0);
        assert_eq!(fibonacci_f64(10), 55.0);
    }
}
