//! Code construction by recursive midpoint splitting.
//!
//! At a node covering sorted items `l..=r` with total weight `w`, the interval
//! `[P_{l-1}, P_r)` is cut into consecutive bins, bin `m` having width
//! `w 2^(-c c_m)`. Item `k` starts in the bin containing its midpoint
//! `s_k = P_{k-1} + p_k / 2`. The bins are then compacted left to right so
//! that every bin up to some `M` is nonempty (an empty bin takes the next
//! unassigned item), and if everything landed in bin 1 the last item is moved
//! alone into bin 2. Each nonempty bin `m` becomes the child reached by
//! letter `m` and is split again.
//!
//! Bins are never materialized: the last item of bin `m` is found by binary
//! search over the midpoints, so a node with `M` children costs
//! `O(M log n)` and the whole build `O(n log n)` regardless of alphabet size.

use std::ops::Range;

use serde::Serialize;

use crate::costs::{CharRoot, CostSpec};
use crate::error::CodeError;
use crate::numeric::KahanSum;

/// Tolerance on `sum p_i = 1`.
pub const SUM_TOL: f64 = 1e-9;

/// Probabilities sorted nonincreasingly, with prefix sums and midpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbInput {
    /// `p_1 >= p_2 >= ... >= p_n`.
    pub probs: Vec<f64>,
    /// `P_0 = 0, P_k = p_1 + ... + p_k`; length `n + 1`.
    pub prefix: Vec<f64>,
    /// `s_k = P_{k-1} + p_k / 2`.
    pub midpoints: Vec<f64>,
    /// `permutation[k]` is the caller's index of sorted item `k`.
    pub permutation: Vec<usize>,
}

impl ProbInput {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Largest probability.
    pub fn p1(&self) -> f64 {
        self.probs[0]
    }

    /// Smallest probability.
    pub fn pn(&self) -> f64 {
        *self.probs.last().expect("nonempty")
    }
}

/// Validates, optionally rescales, and sorts raw probabilities.
pub fn prepare(raw: &[f64], normalize: bool) -> Result<ProbInput, CodeError> {
    if raw.is_empty() {
        return Err(CodeError::Empty);
    }
    if let Some((index, &value)) = raw
        .iter()
        .enumerate()
        .find(|(_, p)| !(p.is_finite() && **p >= 0.0))
    {
        return Err(CodeError::InvalidProbability { index, value });
    }
    let total = crate::numeric::compensated_sum(raw.iter().copied());
    if total <= 0.0 {
        return Err(CodeError::AllZero);
    }
    let scaled: Vec<f64> = if normalize {
        raw.iter().map(|p| p / total).collect()
    } else {
        if (total - 1.0).abs() > SUM_TOL {
            return Err(CodeError::NotNormalized(total));
        }
        raw.to_vec()
    };

    let mut permutation: Vec<usize> = (0..scaled.len()).collect();
    // stable: ties keep the caller's order
    permutation.sort_by(|&a, &b| scaled[b].total_cmp(&scaled[a]));
    let probs: Vec<f64> = permutation.iter().map(|&i| scaled[i]).collect();

    let mut prefix = Vec::with_capacity(probs.len() + 1);
    let mut midpoints = Vec::with_capacity(probs.len());
    let mut acc = KahanSum::new();
    prefix.push(0.0);
    for &p in &probs {
        midpoints.push(acc.value() + p / 2.0);
        acc.add(p);
        prefix.push(acc.value());
    }
    Ok(ProbInput {
        probs,
        prefix,
        midpoints,
        permutation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    /// Children occupy consecutive arena slots.
    Internal { children: Range<usize> },
    Leaf { sorted_index: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeNode {
    pub parent: Option<usize>,
    /// 0-based letter on the edge from the parent.
    pub letter: Option<u32>,
    /// `w(v)`: total probability below this node.
    pub weight: f64,
    /// Cost of the path from the root.
    pub path_cost: f64,
    pub kind: NodeKind,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf { .. })
    }

    pub fn children(&self) -> Range<usize> {
        match &self.kind {
            NodeKind::Internal { children } => children.clone(),
            NodeKind::Leaf { .. } => 0..0,
        }
    }
}

/// One codeword, addressed by the caller's original index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Codeword {
    pub index: usize,
    pub letters: Vec<u32>,
    pub cost: f64,
}

/// A prefix-free code stored as a tree over an arena of nodes. Node 0 is the
/// root.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeTree {
    nodes: Vec<TreeNode>,
    /// leaf node id for each sorted index
    leaf_of: Vec<usize>,
    /// original index -> sorted index
    rank_of: Vec<usize>,
    permutation: Vec<usize>,
    letter_costs: Vec<f64>,
    c: f64,
}

impl CodeTree {
    pub fn len(&self) -> usize {
        self.leaf_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaf_of.is_empty()
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    /// Characteristic root the tree was built with.
    pub fn char_root(&self) -> f64 {
        self.c
    }

    /// Costs of the letters the tree may use (`letter_costs()[m]` is letter `m`).
    pub fn letter_costs(&self) -> &[f64] {
        &self.letter_costs
    }

    pub fn internal_nodes(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| !n.is_leaf())
    }

    /// `sum_v M(v)` over internal nodes.
    pub fn total_children(&self) -> usize {
        self.internal_nodes().map(|n| n.children().len()).sum()
    }

    fn sorted_index(&self, original: usize) -> Result<usize, CodeError> {
        self.rank_of
            .get(original)
            .copied()
            .ok_or(CodeError::UnknownIndex(original))
    }

    /// Cost of the codeword for the caller's input `index`.
    pub fn codeword_cost(&self, index: usize) -> Result<f64, CodeError> {
        let k = self.sorted_index(index)?;
        Ok(self.nodes[self.leaf_of[k]].path_cost)
    }

    /// Letters of the codeword for the caller's input `index`.
    pub fn codeword(&self, index: usize) -> Result<Vec<u32>, CodeError> {
        let k = self.sorted_index(index)?;
        let mut letters = Vec::new();
        let mut id = self.leaf_of[k];
        while let Some(parent) = self.nodes[id].parent {
            letters.push(self.nodes[id].letter.expect("non-root node has a letter"));
            id = parent;
        }
        letters.reverse();
        Ok(letters)
    }

    /// All codewords in the caller's original order.
    pub fn codewords(&self) -> Vec<Codeword> {
        (0..self.len())
            .map(|index| Codeword {
                index,
                letters: self.codeword(index).expect("index in range"),
                cost: self.codeword_cost(index).expect("index in range"),
            })
            .collect()
    }

    /// Per-sorted-index codeword costs.
    pub fn sorted_costs(&self) -> Vec<f64> {
        self.leaf_of.iter().map(|&id| self.nodes[id].path_cost).collect()
    }

    /// Expected cost `C(T) = sum_k p_k cost(w_k)` for sorted probabilities.
    pub fn expected_cost(&self, input: &ProbInput) -> f64 {
        crate::numeric::compensated_sum(
            input
                .probs
                .iter()
                .zip(&self.leaf_of)
                .map(|(p, &id)| p * self.nodes[id].path_cost),
        )
    }

    /// `sum_i 2^(-c cost(w_i))`; at most 1 for any prefix-free code.
    pub fn kraft_sum(&self) -> f64 {
        crate::numeric::compensated_sum(
            self.leaf_of
                .iter()
                .map(|&id| (-self.c * self.nodes[id].path_cost).exp2()),
        )
    }

    /// One line per codeword: `index TAB letters TAB cost`, letters
    /// comma-separated and 0-based.
    pub fn codeword_lines(&self) -> String {
        let mut out = String::new();
        for cw in self.codewords() {
            let letters: Vec<String> = cw.letters.iter().map(u32::to_string).collect();
            out.push_str(&format!("{}\t{}\t{}\n", cw.index, letters.join(","), cw.cost));
        }
        out
    }

    /// Nested JSON: internal nodes are `{"letter_index", "children"}`,
    /// leaves `{"letter_index", "leaf_index"}` with the caller's index.
    /// Written iteratively so deep trees do not exhaust the stack.
    pub fn to_json(&self) -> String {
        enum Step {
            Open(usize),
            Close,
            Comma,
        }
        let mut out = String::new();
        let mut stack = vec![Step::Open(0)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Comma => out.push(','),
                Step::Close => out.push_str("]}"),
                Step::Open(id) => {
                    let node = &self.nodes[id];
                    out.push_str("{\"letter_index\":");
                    match node.letter {
                        Some(l) => out.push_str(&l.to_string()),
                        None => out.push_str("null"),
                    }
                    match &node.kind {
                        NodeKind::Leaf { sorted_index } => {
                            out.push_str(&format!(
                                ",\"leaf_index\":{}}}",
                                self.permutation[*sorted_index]
                            ));
                        }
                        NodeKind::Internal { children } => {
                            out.push_str(",\"children\":[");
                            stack.push(Step::Close);
                            for (i, child) in children.clone().enumerate().rev() {
                                stack.push(Step::Open(child));
                                if i > 0 {
                                    stack.push(Step::Comma);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// One nonempty initial bin `I*_m(v)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialBin {
    /// 1-based letter index.
    pub m: u64,
    pub cost: f64,
    /// `L_m` and `R_m` (`R_m` is infinite for the last letter of a finite alphabet).
    pub left: f64,
    pub right: f64,
    /// Sorted indices `first..=last`.
    pub first: usize,
    pub last: usize,
    /// `w*_m(v)`.
    pub weight: f64,
}

/// One final bin `I_m(v)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinalBin {
    pub m: u64,
    pub cost: f64,
    pub first: usize,
    pub last: usize,
    /// `w_m(v)`.
    pub weight: f64,
}

/// Split record for one internal node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceNode {
    pub node: usize,
    pub l: usize,
    pub r: usize,
    /// `L = P_{l-1}`.
    pub left: f64,
    /// `w(v)`.
    pub weight: f64,
    pub initial_bins: Vec<InitialBin>,
    pub final_bins: Vec<FinalBin>,
    /// Items whose midpoint fell past every bin (zero or sub-ulp probabilities).
    pub unbinned: Vec<usize>,
    pub left_shifted: bool,
    /// Sorted index moved alone into bin 2.
    pub right_shifted: Option<usize>,
}

/// Per-node split diagnostics, collected only on request.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SplitTrace {
    pub nodes: Vec<TraceNode>,
}

impl SplitTrace {
    /// Sorted indices moved by a right shift, in visiting order.
    pub fn right_shifted_items(&self) -> Vec<usize> {
        self.nodes.iter().filter_map(|n| n.right_shifted).collect()
    }
}

struct LetterTable {
    costs: Vec<f64>,
    /// `2^(-c c_m)` for letter `m` at position `m - 1`
    weights: Vec<f64>,
    /// `cum[m] = sum_{i <= m} 2^(-c c_i)`, `cum[0] = 0`
    cum: Vec<f64>,
    /// alphabet size when finite
    t: Option<usize>,
}

impl LetterTable {
    fn new(spec: &CostSpec, c: f64, wanted: usize) -> Self {
        let costs = spec.first_letters(wanted);
        let weights: Vec<f64> = costs.iter().map(|&cm| (-c * cm).exp2()).collect();
        let mut cum = Vec::with_capacity(weights.len() + 1);
        let mut acc = KahanSum::new();
        cum.push(0.0);
        for &q in &weights {
            acc.add(q);
            cum.push(acc.value());
        }
        Self {
            costs,
            weights,
            cum,
            t: spec.alphabet_size(),
        }
    }

    fn is_last_letter(&self, m: usize) -> bool {
        self.t == Some(m)
    }
}

/// Builds the code. With `trace` set, also records every split.
pub fn build_code(
    input: &ProbInput,
    spec: &CostSpec,
    root: &CharRoot,
    trace: bool,
) -> Result<(CodeTree, Option<SplitTrace>), CodeError> {
    let n = input.len();
    if n == 0 {
        return Err(CodeError::Empty);
    }
    let c = root.c;
    let table = LetterTable::new(spec, c, n.max(2));
    let mut split_trace = trace.then(SplitTrace::default);

    // sum of M(v) is at most 2n - 1
    let mut nodes = Vec::with_capacity(2 * n);
    nodes.push(TreeNode {
        parent: None,
        letter: None,
        weight: input.prefix[n] - input.prefix[0],
        path_cost: 0.0,
        kind: NodeKind::Internal { children: 0..0 },
    });
    let mut leaf_of = vec![usize::MAX; n];

    if n == 1 {
        // a lone symbol still gets a nonempty codeword: sigma_1
        nodes.push(TreeNode {
            parent: Some(0),
            letter: Some(0),
            weight: input.probs[0],
            path_cost: table.costs[0],
            kind: NodeKind::Leaf { sorted_index: 0 },
        });
        nodes[0].kind = NodeKind::Internal { children: 1..2 };
        leaf_of[0] = 1;
        if let Some(st) = split_trace.as_mut() {
            st.nodes.push(TraceNode {
                node: 0,
                l: 0,
                r: 0,
                left: 0.0,
                weight: input.probs[0],
                initial_bins: Vec::new(),
                final_bins: vec![FinalBin {
                    m: 1,
                    cost: table.costs[0],
                    first: 0,
                    last: 0,
                    weight: input.probs[0],
                }],
                unbinned: Vec::new(),
                left_shifted: false,
                right_shifted: None,
            });
        }
        return Ok((finish_tree(nodes, leaf_of, input, table, c), split_trace));
    }

    let mut stack = vec![(0usize, 0usize, n - 1)];
    let mut bins: Vec<(usize, usize)> = Vec::new();
    while let Some((node_id, l, r)) = stack.pop() {
        split_node(input, &table, l, r, &mut bins)?;
        let right_shifted = if bins.len() == 1 {
            bins.clear();
            bins.push((l, r - 1));
            bins.push((r, r));
            Some(r)
        } else {
            None
        };

        if let Some(st) = split_trace.as_mut() {
            st.nodes.push(trace_node(
                input,
                spec,
                c,
                &table,
                node_id,
                l,
                r,
                &bins,
                right_shifted,
            ));
        }

        let parent_cost = nodes[node_id].path_cost;
        let first_child = nodes.len();
        for (m, &(lm, rm)) in bins.iter().enumerate() {
            let id = nodes.len();
            let path_cost = parent_cost + table.costs[m];
            if lm == rm {
                nodes.push(TreeNode {
                    parent: Some(node_id),
                    letter: Some(m as u32),
                    weight: input.probs[lm],
                    path_cost,
                    kind: NodeKind::Leaf { sorted_index: lm },
                });
                leaf_of[lm] = id;
            } else {
                nodes.push(TreeNode {
                    parent: Some(node_id),
                    letter: Some(m as u32),
                    weight: input.prefix[rm + 1] - input.prefix[lm],
                    path_cost,
                    kind: NodeKind::Internal { children: 0..0 },
                });
                stack.push((id, lm, rm));
            }
        }
        nodes[node_id].kind = NodeKind::Internal {
            children: first_child..nodes.len(),
        };
    }

    Ok((finish_tree(nodes, leaf_of, input, table, c), split_trace))
}

fn finish_tree(
    nodes: Vec<TreeNode>,
    leaf_of: Vec<usize>,
    input: &ProbInput,
    table: LetterTable,
    c: f64,
) -> CodeTree {
    let mut rank_of = vec![0usize; input.len()];
    for (k, &orig) in input.permutation.iter().enumerate() {
        rank_of[orig] = k;
    }
    CodeTree {
        nodes,
        leaf_of,
        rank_of,
        permutation: input.permutation.clone(),
        letter_costs: table.costs,
        c,
    }
}

/// Computes the final bins `I_1, ..., I_M` (before the right-shift check) for
/// items `l..=r`.
fn split_node(
    input: &ProbInput,
    table: &LetterTable,
    l: usize,
    r: usize,
    bins: &mut Vec<(usize, usize)>,
) -> Result<(), CodeError> {
    bins.clear();
    let left = input.prefix[l];
    let width = input.prefix[r + 1] - left;
    let mids = &input.midpoints;
    let mut k = l;
    let mut m = 0usize;
    while k <= r {
        m += 1;
        let rm = if table.is_last_letter(m) {
            r
        } else {
            if width > 0.0
                && width * table.weights[m - 1] == 0.0
                && input.prefix[r + 1] - input.prefix[k] > 0.0
            {
                return Err(CodeError::BinUnderflow { bin: m, l, r });
            }
            let right = left + width * table.cum[m];
            // rightmost unassigned item whose midpoint lies left of R_m
            let below = mids[k..=r].partition_point(|&s| s < right);
            if below == 0 {
                k
            } else {
                k + below - 1
            }
        };
        bins.push((k, rm));
        k = rm + 1;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn trace_node(
    input: &ProbInput,
    spec: &CostSpec,
    c: f64,
    table: &LetterTable,
    node: usize,
    l: usize,
    r: usize,
    bins: &[(usize, usize)],
    right_shifted: Option<usize>,
) -> TraceNode {
    let left = input.prefix[l];
    let width = input.prefix[r + 1] - left;
    let weight_of = |a: usize, b: usize| crate::numeric::compensated_sum(input.probs[a..=b].iter().copied());

    let mut initial_bins: Vec<InitialBin> = Vec::new();
    let mut unbinned = Vec::new();
    for k in l..=r {
        match locate_initial_bin(input.midpoints[k], left, width, spec, c, table) {
            Some(bin) => match initial_bins.last_mut() {
                Some(last) if last.m == bin.m => last.last = k,
                _ => initial_bins.push(InitialBin {
                    first: k,
                    last: k,
                    weight: 0.0,
                    ..bin
                }),
            },
            None => unbinned.push(k),
        }
    }
    for bin in &mut initial_bins {
        bin.weight = weight_of(bin.first, bin.last);
    }

    let final_bins: Vec<FinalBin> = bins
        .iter()
        .enumerate()
        .map(|(i, &(first, last))| FinalBin {
            m: i as u64 + 1,
            cost: table.costs[i],
            first,
            last,
            weight: weight_of(first, last),
        })
        .collect();

    // a left shift happened iff some final bin (ignoring the right shift)
    // differs from its initial bin
    let mut compacted: Vec<(usize, usize)> = bins.to_vec();
    if right_shifted.is_some() {
        compacted = vec![(l, r)];
    }
    let left_shifted = compacted.iter().enumerate().any(|(i, &(first, last))| {
        let m = i as u64 + 1;
        !initial_bins
            .iter()
            .any(|b| b.m == m && b.first == first && b.last == last)
    });

    TraceNode {
        node,
        l,
        r,
        left,
        weight: width,
        initial_bins,
        final_bins,
        unbinned,
        left_shifted,
        right_shifted,
    }
}

/// The bin `m` with `L_m <= s < R_m`. Boundaries inside the coder's letter
/// table are computed exactly as the coder computes them; beyond it, whole
/// cost levels are skipped arithmetically.
fn locate_initial_bin(
    s: f64,
    left: f64,
    width: f64,
    spec: &CostSpec,
    c: f64,
    table: &LetterTable,
) -> Option<InitialBin> {
    let len = table.costs.len();
    let bin = |m: usize, right: f64| InitialBin {
        m: m as u64,
        cost: table.costs[m - 1],
        left: left + width * table.cum[m - 1],
        right,
        first: 0,
        last: 0,
        weight: 0.0,
    };
    // smallest m with s < R_m
    let within = (1..=len).collect::<Vec<_>>();
    let pos = within.partition_point(|&m| {
        if table.is_last_letter(m) {
            false
        } else {
            s >= left + width * table.cum[m]
        }
    });
    if pos < len {
        let m = pos + 1;
        let right = if table.is_last_letter(m) {
            f64::INFINITY
        } else {
            left + width * table.cum[m]
        };
        return Some(bin(m, right));
    }
    if spec.alphabet_size().is_some_and(|t| t <= len) {
        return None;
    }

    // walk the letters past the table, a whole cost level at a time
    let mut acc = KahanSum::new();
    acc.add(table.cum[len]);
    let mut next = len as u64 + 1;
    let mut levels = 0;
    match spec {
        CostSpec::FiniteList { costs, .. } => {
            let t = costs.len() as u64;
            while next <= t {
                let cm = costs[next as usize - 1];
                let q = (-c * cm).exp2();
                let lo = left + width * acc.value();
                acc.add(q);
                let hi = if next == t {
                    f64::INFINITY
                } else {
                    left + width * acc.value()
                };
                if s < hi {
                    return Some(InitialBin {
                        m: next,
                        cost: cm,
                        left: lo,
                        right: hi,
                        first: 0,
                        last: 0,
                        weight: 0.0,
                    });
                }
                next += 1;
            }
            None
        }
        CostSpec::IntegerProfile { .. } => {
            if s >= left + width {
                return None;
            }
            while let Some((level, remaining)) = spec.locate_letter(next) {
                levels += 1;
                if levels > 100_000 {
                    return None;
                }
                let q = (-c * level as f64).exp2();
                let start = left + width * acc.value();
                let span = remaining as f64 * q;
                if s < left + width * (acc.value() + span) {
                    let offset = ((s - start) / (width * q)).floor().max(0.0);
                    let offset = (offset as u64).min(remaining - 1);
                    let lo = start + width * q * offset as f64;
                    return Some(InitialBin {
                        m: next + offset,
                        cost: level as f64,
                        left: lo,
                        right: lo + width * q,
                        first: 0,
                        last: 0,
                        weight: 0.0,
                    });
                }
                acc.add(span);
                next = next.saturating_add(remaining);
                if q == 0.0 || next == u64::MAX {
                    return None;
                }
            }
            None
        }
    }
}

/// True iff no word is a proper prefix of another (duplicates count as
/// prefixes). Sorting puts any prefix immediately before some word it
/// prefixes, so adjacent comparison suffices.
pub fn verify_prefix_free<W: AsRef<[u32]>>(codewords: &[W]) -> bool {
    let mut words: Vec<&[u32]> = codewords.iter().map(AsRef::as_ref).collect();
    words.sort_unstable();
    words.windows(2).all(|pair| !pair[1].starts_with(pair[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::{char_root, CostSpec, Profile, DEFAULT_TOL};

    fn build(probs: &[f64], spec: &CostSpec) -> (CodeTree, SplitTrace, ProbInput) {
        let input = prepare(probs, false).unwrap();
        let root = char_root(spec, DEFAULT_TOL).unwrap();
        let (tree, trace) = build_code(&input, spec, &root, true).unwrap();
        (tree, trace.unwrap(), input)
    }

    #[test]
    fn prepare_sorts_with_permutation() {
        let input = prepare(&[0.25, 0.5, 0.25], false).unwrap();
        assert_eq!(input.probs, vec![0.5, 0.25, 0.25]);
        assert_eq!(input.permutation, vec![1, 0, 2]);
        assert_eq!(input.prefix, vec![0.0, 0.5, 0.75, 1.0]);
        assert_eq!(input.midpoints, vec![0.25, 0.625, 0.875]);
        assert_eq!(prepare(&[1.0], false).unwrap().probs, vec![1.0]);
        assert_eq!(prepare(&[2.0, 1.0, 1.0], true).unwrap().probs, vec![0.5, 0.25, 0.25]);
    }

    #[test]
    fn prepare_errors() {
        assert_eq!(prepare(&[], false), Err(CodeError::Empty));
        assert_eq!(prepare(&[0.0, 0.0], true), Err(CodeError::AllZero));
        assert!(matches!(prepare(&[0.5, -0.5, 1.0], true), Err(CodeError::InvalidProbability { index: 1, .. })));
        assert!(matches!(prepare(&[0.5, f64::NAN], true), Err(CodeError::InvalidProbability { index: 1, .. })));
        assert!(matches!(prepare(&[0.5, 0.6], false), Err(CodeError::NotNormalized(_))));
    }

    #[test]
    fn uniform_four_with_binary_letters() {
        let spec = CostSpec::finite(vec![1.0, 1.0]);
        let (tree, _, input) = build(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0], &spec);
        // s_2 = 1/2 sits on the boundary and goes right, giving 1,2,3,3
        // rather than 2,2,2,2; both cost 2
        assert_eq!(tree.sorted_costs(), vec![1.0, 2.0, 3.0, 3.0]);
        assert!((tree.expected_cost(&input) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_symbol_gets_first_letter() {
        let spec = CostSpec::finite(vec![1.0, 3.0]);
        let (tree, trace, _) = build(&[1.0], &spec);
        assert_eq!(tree.codeword(0).unwrap(), vec![0]);
        assert_eq!(tree.codeword_cost(0).unwrap(), 1.0);
        assert_eq!(tree.total_children(), 1);
        assert_eq!(trace.nodes.len(), 1);
    }

    #[test]
    fn dyadic_binary_is_prefix_free_and_near_entropy() {
        let spec = CostSpec::finite(vec![1.0, 1.0]);
        let (tree, _, input) = build(&[0.5, 0.25, 0.125, 0.125], &spec);
        let words: Vec<Vec<u32>> = tree.codewords().into_iter().map(|c| c.letters).collect();
        assert!(verify_prefix_free(&words));
        let cost = tree.expected_cost(&input);
        // NR <= 2(1 - p1) + 1 with beta = 1
        assert!(cost - 1.75 <= 2.0 * 0.5 + 1.0 + 1e-9);
    }

    #[test]
    fn codeword_cost_sums_letter_costs() {
        let spec = CostSpec::finite(vec![1.0, 3.0]);
        let (tree, _, _) = build(&[0.4, 0.3, 0.2, 0.1], &spec);
        for cw in tree.codewords() {
            let direct: f64 = cw.letters.iter().map(|&l| [1.0, 3.0][l as usize]).sum();
            assert_eq!(cw.cost, direct);
        }
        assert_eq!(tree.codeword_cost(4), Err(CodeError::UnknownIndex(4)));
    }

    #[test]
    fn prefix_free_checker() {
        // a = 0, b = 1
        let good = [vec![0, 0, 0], vec![0, 0, 1], vec![0, 1], vec![1]];
        assert!(verify_prefix_free(&good));
        let bad = [vec![0, 0, 0], vec![0, 0, 1], vec![0, 1], vec![0, 0, 1, 0]];
        assert!(!verify_prefix_free(&bad));
        assert!(verify_prefix_free(&[vec![0u32]]));
        assert!(!verify_prefix_free(&[vec![1u32], vec![1]]));
    }

    #[test]
    fn everything_in_first_bin_triggers_right_shift() {
        // with costs (1, 20) bin 1 covers almost 0.9 of the interval
        let spec = CostSpec::finite(vec![1.0, 20.0]);
        let (tree, trace, _) = build(&[0.4, 0.3, 0.3], &spec);
        let root = &trace.nodes[0];
        assert_eq!(root.initial_bins.len(), 1);
        assert_eq!(root.right_shifted, Some(2));
        assert_eq!(root.final_bins.len(), 2);
        assert!(tree.internal_nodes().all(|n| n.children().len() >= 2));
    }

    #[test]
    fn heavy_first_item_is_stolen_into_empty_bin_one() {
        // p_1 = 0.9 has midpoint 0.45 >= R_1 = 1/3 with costs (1,1,1)
        let spec = CostSpec::finite(vec![1.0, 1.0, 1.0]);
        let (_, trace, _) = build(&[0.9, 0.05, 0.05], &spec);
        let root = &trace.nodes[0];
        assert!(root.initial_bins.iter().all(|b| b.m != 1));
        assert!(root.left_shifted);
        assert_eq!(root.final_bins[0].first, 0);
        assert_eq!(root.final_bins[0].last, 0);
    }

    #[test]
    fn zero_probabilities_are_coded() {
        let spec = CostSpec::finite(vec![1.0, 2.0]);
        let (tree, _, _) = build(&[0.5, 0.5, 0.0, 0.0, 0.0], &spec);
        let words: Vec<Vec<u32>> = tree.codewords().into_iter().map(|c| c.letters).collect();
        assert!(verify_prefix_free(&words));
        assert_eq!(words.len(), 5);
    }

    #[test]
    fn infinite_alphabet_uses_many_letters_on_uniform_input() {
        let spec = CostSpec::profile(Profile::Linear);
        let probs = vec![1.0 / 64.0; 64];
        let (tree, trace, _) = build(&probs, &spec);
        assert!(tree.root().children().len() > 2);
        assert!(tree.total_children() < 2 * 64);
        assert!(trace.nodes.iter().all(|n| n.unbinned.is_empty()));
    }

    #[test]
    fn json_shape() {
        let spec = CostSpec::finite(vec![1.0, 1.0]);
        let (tree, _, _) = build(&[0.5, 0.25, 0.25], &spec);
        let v: serde_json::Value = serde_json::from_str(&tree.to_json()).unwrap();
        assert!(v["letter_index"].is_null());
        assert_eq!(v["children"].as_array().unwrap().len(), 2);
        assert_eq!(v["children"][0]["leaf_index"], 0);
        assert_eq!(v["children"][1]["children"].as_array().unwrap().len(), 2);
        let lines = tree.codeword_lines();
        assert_eq!(lines.lines().next().unwrap(), "0\t0\t1");
    }
}
