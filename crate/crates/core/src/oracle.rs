//! Exact optimum for small instances.
//!
//! [`exact_opt`] enumerates code trees by branch and bound. A partial tree is
//! a multiset of pending leaf costs; the cheapest pending leaf is either made
//! final or expanded with the `k` cheapest letters (`2 <= k <= t`). Final
//! leaves therefore appear in nondecreasing cost order, and by the
//! rearrangement inequality the `i`-th final leaf takes the `i`-th largest
//! probability.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::coder::ProbInput;
use crate::costs::CostSpec;
use crate::error::OracleError;

pub const MAX_N: usize = 10;
pub const MAX_T: usize = 4;
const PRUNE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub opt_cost: f64,
    /// Codeword costs of an optimal code, by the caller's original index.
    pub opt_codeword_costs: Vec<f64>,
    /// The optimal code itself, by original index (0-based letters).
    pub codewords: Vec<Vec<u32>>,
    pub nodes_explored: u64,
    pub cost_cap_used: f64,
}

struct Search<'a> {
    probs: &'a [f64],
    letters: &'a [f64],
    best: f64,
    best_words: Option<Vec<(f64, Vec<u32>)>>,
    explored: u64,
}

impl Search<'_> {
    fn n(&self) -> usize {
        self.probs.len()
    }

    fn lower_bound(&self, pending: &[(f64, Vec<u32>)], finalized: usize) -> f64 {
        let needed = self.n() - finalized;
        let q = pending.len();
        let mut costs: Vec<f64> = pending.iter().map(|(y, _)| *y).collect();
        let deeper = pending[0].0 + self.letters[0];
        costs.extend(std::iter::repeat_n(deeper, needed - q));
        costs.sort_by(f64::total_cmp);
        costs
            .iter()
            .zip(&self.probs[finalized..])
            .map(|(y, p)| y * p)
            .sum()
    }

    fn visit(
        &mut self,
        pending: &mut Vec<(f64, Vec<u32>)>,
        finalized: &mut Vec<(f64, Vec<u32>)>,
        acc: f64,
    ) {
        self.explored += 1;
        let n = self.n();
        if pending.is_empty() {
            if finalized.len() == n && acc < self.best {
                self.best = acc;
                self.best_words = Some(finalized.clone());
            }
            return;
        }
        if finalized.len() + pending.len() > n {
            return;
        }
        if acc + self.lower_bound(pending, finalized.len()) > self.best + PRUNE_TOL {
            return;
        }

        // pending is kept sorted, cheapest first
        let (y, word) = pending.remove(0);

        let p = self.probs[finalized.len()];
        finalized.push((y, word.clone()));
        self.visit(pending, finalized, acc + p * y);
        finalized.pop();

        let room = n - finalized.len() - pending.len();
        let max_k = self.letters.len().min(room);
        for k in 2..=max_k {
            let inserted: Vec<(f64, Vec<u32>)> = (0..k)
                .map(|m| {
                    let mut w = word.clone();
                    w.push(m as u32);
                    (y + self.letters[m], w)
                })
                .collect();
            let saved = pending.clone();
            for child in inserted {
                let pos = pending.partition_point(|(z, _)| *z <= child.0);
                pending.insert(pos, child);
            }
            self.visit(pending, finalized, acc);
            *pending = saved;
        }

        pending.insert(0, (y, word));
    }
}

/// Minimum expected cost over all prefix-free codes. `cap` must be at least
/// the optimum (the coder's `C(T)` always is); `f64::INFINITY` disables it.
pub fn exact_opt(input: &ProbInput, spec: &CostSpec, cap: f64) -> Result<OracleResult, OracleError> {
    let n = input.len();
    let t = spec.alphabet_size();
    match t {
        Some(t) if n <= MAX_N && t <= MAX_T => {}
        _ => return Err(OracleError::TooLarge { n, t }),
    }
    let letters = spec.first_letters(MAX_T);

    let to_original = |sorted: Vec<(f64, Vec<u32>)>| {
        let mut costs = vec![0.0; n];
        let mut words = vec![Vec::new(); n];
        for (k, (y, w)) in sorted.into_iter().enumerate() {
            costs[input.permutation[k]] = y;
            words[input.permutation[k]] = w;
        }
        (costs, words)
    };

    if n == 1 {
        if letters[0] > cap + PRUNE_TOL {
            return Err(OracleError::CapTooSmall(cap));
        }
        let (costs, words) = to_original(vec![(letters[0], vec![0])]);
        return Ok(OracleResult {
            opt_cost: letters[0],
            opt_codeword_costs: costs,
            codewords: words,
            nodes_explored: 1,
            cost_cap_used: cap,
        });
    }

    let mut search = Search {
        probs: &input.probs,
        letters: &letters,
        best: cap + 1e-9,
        best_words: None,
        explored: 0,
    };
    search.visit(&mut vec![(0.0, Vec::new())], &mut Vec::new(), 0.0);
    let explored = search.explored;
    let Some(words) = search.best_words else {
        return Err(OracleError::CapTooSmall(cap));
    };
    let opt_cost = crate::numeric::compensated_sum(
        words.iter().zip(&input.probs).map(|((y, _), p)| y * p),
    );
    let (costs, words) = to_original(words);
    Ok(OracleResult {
        opt_cost,
        opt_codeword_costs: costs,
        codewords: words,
        nodes_explored: explored,
        cost_cap_used: cap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Weight(f64);

impl Eq for Weight {}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Optimal expected codeword length over `t` equal-cost letters, by `t`-ary
/// Huffman merging. A single symbol still needs one letter.
pub fn huffman_equal_cost(input: &ProbInput, t: usize) -> f64 {
    assert!(t >= 2, "need at least two letters");
    let n = input.len();
    if n <= 1 {
        return 1.0;
    }
    let mut heap: BinaryHeap<Reverse<Weight>> =
        input.probs.iter().map(|&p| Reverse(Weight(p))).collect();
    let mut size = n;
    while !(size - 1).is_multiple_of(t - 1) {
        heap.push(Reverse(Weight(0.0)));
        size += 1;
    }
    let mut cost = 0.0;
    while heap.len() > 1 {
        let merged: f64 = (0..t).filter_map(|_| heap.pop()).map(|Reverse(Weight(w))| w).sum();
        cost += merged;
        heap.push(Reverse(Weight(merged)));
    }
    cost
}
