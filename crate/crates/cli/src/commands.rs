use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use serde_json::value::RawValue;

use lettercost::analysis::{report_with_epsilon, AnalysisReport};
use lettercost::costs::parse_cost_spec;
use lettercost::{build_code, char_root, exact_opt, normalize, prepare, CharRoot, CostSpec, ProbInput};

use crate::{CliError, ProbSource};

/// Slack allowed when auditing bounds.
pub const AUDIT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub costs: String,
    pub source: Option<ProbSource>,
    pub seed: u64,
    pub format: Format,
    pub normalize: bool,
    pub epsilon: f64,
    pub trace: bool,
    pub tol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            costs: "finite:1,1".to_string(),
            source: None,
            seed: 0,
            format: Format::Text,
            normalize: false,
            epsilon: lettercost::analysis::DEFAULT_EPSILON,
            trace: false,
            tol: lettercost::costs::DEFAULT_TOL,
        }
    }
}

impl Options {
    fn spec(&self) -> Result<(CostSpec, CharRoot), CliError> {
        let spec = normalize(&parse_cost_spec(&self.costs)?)?;
        let root = char_root(&spec, self.tol)?;
        Ok((spec, root))
    }

    fn input_with(&self, source: &ProbSource, seed: u64) -> Result<ProbInput, CliError> {
        let raw = source.load(seed)?;
        // generated weights are normalized up to rounding already
        let rescale = self.normalize || !matches!(source, ProbSource::File(_) | ProbSource::Inline(_));
        Ok(prepare(&raw, rescale)?)
    }

    fn input(&self) -> Result<ProbInput, CliError> {
        let source = self
            .source
            .as_ref()
            .ok_or_else(|| CliError::Usage("no probabilities given (use --probs, --inline or --gen)".into()))?;
        self.input_with(source, self.seed)
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.9}"))
}

fn report_text(out: &mut String, rep: &AnalysisReport) {
    let _ = writeln!(out, "cost         {:.9}", rep.cost);
    let _ = writeln!(out, "entropy      {:.9}", rep.entropy);
    let _ = writeln!(out, "lower_bound  {:.9}", rep.lower_bound);
    let _ = writeln!(out, "redundancy   {:.9}", rep.redundancy);
    let _ = writeln!(out, "nr           {:.9}", rep.nr);
    for b in &rep.bounds {
        let status = match (&b.reason, b.applicable) {
            (_, true) => "applicable".to_string(),
            (Some(r), false) => r.clone(),
            (None, false) => "not applicable".to_string(),
        };
        let _ = writeln!(out, "bound {:<18} {:>14}  {status}", b.name.as_str(), fmt_opt(b.value));
    }
}

pub fn cmd_root(opts: &Options) -> Result<String, CliError> {
    let (_, root) = opts.spec()?;
    if opts.format == Format::Json {
        return Ok(to_json(&json!({
            "c": root.c,
            "tolerance": root.tolerance,
            "residual": root.residual,
            "beta": root.beta_is_finite().then_some(root.beta),
            "tail_convergent": root.tail_convergent,
        })));
    }
    let mut out = String::new();
    let _ = writeln!(out, "c                {:.12}", root.c);
    let _ = writeln!(out, "tolerance        {:.3e}", root.tolerance);
    let _ = writeln!(out, "residual         {:.3e}", root.residual);
    let _ = writeln!(out, "beta             {}", if root.beta_is_finite() { format!("{:.12}", root.beta) } else { "inf".into() });
    let _ = writeln!(out, "tail_convergent  {}", root.tail_convergent);
    if !root.tail_convergent {
        let _ = writeln!(out, "warning: sum of c_m 2^(-c c_m) diverges; the approximation bound does not apply");
    }
    Ok(out)
}

pub fn cmd_code(opts: &Options) -> Result<String, CliError> {
    let (spec, root) = opts.spec()?;
    let input = opts.input()?;
    let (tree, trace) = build_code(&input, &spec, &root, opts.trace)?;
    let rep = report_with_epsilon(&tree, &input, &spec, &root, opts.epsilon);
    if opts.format == Format::Json {
        let tree_json = RawValue::from_string(tree.to_json()).expect("tree JSON is well formed");
        let mut value = json!({
            "c": root.c,
            "codewords": tree.codewords(),
            "tree": tree_json,
            "report": rep,
        });
        if let Some(trace) = trace {
            value["trace"] = serde_json::to_value(&trace).expect("serializable");
        }
        return Ok(to_json(&value));
    }
    let mut out = String::new();
    let _ = writeln!(out, "# c = {:.12}", root.c);
    let _ = writeln!(out, "# index\tletters\tcost");
    out.push_str(&tree.codeword_lines());
    report_text(&mut out, &rep);
    if let Some(trace) = trace {
        for v in &trace.nodes {
            let initial: Vec<String> = v
                .initial_bins
                .iter()
                .map(|b| format!("{}:{}..={}", b.m, b.first, b.last))
                .collect();
            let fin: Vec<String> = v
                .final_bins
                .iter()
                .map(|b| format!("{}:{}..={}", b.m, b.first, b.last))
                .collect();
            let _ = writeln!(
                out,
                "trace node={} items={}..={} w={:.6e} initial=[{}] final=[{}] left_shift={} right_shift={}",
                v.node,
                v.l,
                v.r,
                v.weight,
                initial.join(" "),
                fin.join(" "),
                v.left_shifted,
                v.right_shifted.map_or("-".to_string(), |k| k.to_string()),
            );
        }
    }
    Ok(out)
}

pub fn cmd_bounds(opts: &Options) -> Result<String, CliError> {
    let (spec, root) = opts.spec()?;
    let input = opts.input()?;
    let (tree, _) = build_code(&input, &spec, &root, false)?;
    let rep = report_with_epsilon(&tree, &input, &spec, &root, opts.epsilon);
    if opts.format == Format::Json {
        return Ok(to_json(&rep));
    }
    let mut out = String::new();
    report_text(&mut out, &rep);
    Ok(out)
}

pub fn cmd_oracle(opts: &Options) -> Result<String, CliError> {
    let (spec, _) = opts.spec()?;
    let input = opts.input()?;
    let res = exact_opt(&input, &spec, f64::INFINITY)?;
    if opts.format == Format::Json {
        return Ok(to_json(&json!({
            "opt_cost": res.opt_cost,
            "codeword_costs": res.opt_codeword_costs,
            "nodes_explored": res.nodes_explored,
        })));
    }
    let mut out = String::new();
    let _ = writeln!(out, "opt_cost        {:.12}", res.opt_cost);
    let costs: Vec<String> = res.opt_codeword_costs.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(out, "codeword_costs  {}", costs.join(","));
    let _ = writeln!(out, "nodes_explored  {}", res.nodes_explored);
    Ok(out)
}

/// Coder against exact optimum on one instance.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub n: usize,
    pub cost: f64,
    pub opt: f64,
    pub lower_bound: f64,
    pub gap: f64,
    pub bound: Option<String>,
    /// Best applicable `NR` bound divided by `c`.
    pub allowed_gap: Option<f64>,
    pub ok: bool,
}

pub fn compare_instance(spec: &CostSpec, root: &CharRoot, input: &ProbInput, epsilon: f64) -> Result<Comparison, CliError> {
    let (tree, _) = build_code(input, spec, root, false)?;
    let rep = report_with_epsilon(&tree, input, spec, root, epsilon);
    let opt = exact_opt(input, spec, rep.cost)?.opt_cost;
    let best = rep.best_bound();
    let allowed_gap = best.and_then(|b| b.value).map(|v| v / root.c);
    let gap = rep.cost - opt;
    let ok = rep.lower_bound <= opt + 1e-9
        && opt <= rep.cost + 1e-9
        && allowed_gap.is_none_or(|a| gap <= a + AUDIT_TOL);
    Ok(Comparison {
        n: input.len(),
        cost: rep.cost,
        opt,
        lower_bound: rep.lower_bound,
        gap,
        bound: best.map(|b| b.name.to_string()),
        allowed_gap,
        ok,
    })
}

fn comparison_text(out: &mut String, c: &Comparison) {
    let _ = writeln!(out, "cost         {:.9}", c.cost);
    let _ = writeln!(out, "opt          {:.9}", c.opt);
    let _ = writeln!(out, "lower_bound  {:.9}", c.lower_bound);
    let _ = writeln!(out, "gap          {:.9}", c.gap);
    let _ = writeln!(
        out,
        "allowed_gap  {} ({})",
        fmt_opt(c.allowed_gap),
        c.bound.as_deref().unwrap_or("no applicable bound")
    );
    let _ = writeln!(out, "status       {}", if c.ok { "ok" } else { "VIOLATION" });
}

pub fn cmd_compare(opts: &Options) -> Result<String, CliError> {
    let (spec, root) = opts.spec()?;
    let input = opts.input()?;
    let cmp = compare_instance(&spec, &root, &input, opts.epsilon)?;
    let out = if opts.format == Format::Json {
        to_json(&cmp)
    } else {
        let mut out = String::new();
        comparison_text(&mut out, &cmp);
        out
    };
    if cmp.ok {
        Ok(out)
    } else {
        Err(CliError::Violation {
            message: format!("gap {} exceeds {}", cmp.gap, fmt_opt(cmp.allowed_gap)),
            output: out,
        })
    }
}

/// Runs `count` comparisons with seeds `seed..seed + count` in parallel.
pub fn cmd_sweep(opts: &Options, count: u64) -> Result<String, CliError> {
    let (spec, root) = opts.spec()?;
    let source = opts
        .source
        .clone()
        .ok_or_else(|| CliError::Usage("sweep needs a generator (--gen)".into()))?;
    let results: Vec<Comparison> = (0..count)
        .into_par_iter()
        .map(|i| {
            let input = opts.input_with(&source, opts.seed.wrapping_add(i))?;
            compare_instance(&spec, &root, &input, opts.epsilon)
        })
        .collect::<Result<_, _>>()?;
    let failures: Vec<u64> = (0..count).filter(|&i| !results[i as usize].ok).map(|i| opts.seed.wrapping_add(i)).collect();
    let worst = results
        .iter()
        .filter_map(|c| c.allowed_gap.filter(|&a| a > 0.0).map(|a| c.gap / a))
        .fold(0.0f64, f64::max);
    let out = if opts.format == Format::Json {
        to_json(&json!({
            "instances": count,
            "violations": failures.len(),
            "failing_seeds": failures,
            "max_gap_fraction": worst,
        }))
    } else {
        format!(
            "instances         {count}\nviolations        {}\nmax_gap_fraction  {worst:.6}\n",
            failures.len()
        )
    };
    if failures.is_empty() {
        Ok(out)
    } else {
        Err(CliError::Violation {
            message: format!("{} of {count} instances, first seed {}", failures.len(), failures[0]),
            output: out,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub seconds: f64,
    pub cost: f64,
    pub nr: f64,
}

/// Times `prepare` plus `build_code` (median of `repeats`) at each size.
pub fn bench_rows(opts: &Options, sizes: &[usize], repeats: usize) -> Result<(Vec<BenchRow>, Vec<String>), CliError> {
    let (spec, root) = opts.spec()?;
    let source = opts
        .source
        .clone()
        .unwrap_or(ProbSource::Zipf { s: 1.0, n: 1000 });
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for &n in sizes {
        let sized = source.with_size(n);
        let raw = sized.load(opts.seed)?;
        let mut times = Vec::with_capacity(repeats.max(1));
        let mut built = None;
        for _ in 0..repeats.max(1) {
            let start = Instant::now();
            let input = prepare(&raw, true)?;
            let (tree, _) = build_code(&input, &spec, &root, false)?;
            times.push(start.elapsed().as_secs_f64());
            built = Some((input, tree));
        }
        times.sort_by(f64::total_cmp);
        let (input, tree) = built.expect("at least one repeat");
        let rep = report_with_epsilon(&tree, &input, &spec, &root, opts.epsilon);
        for b in rep.violations(AUDIT_TOL) {
            violations.push(format!("n={n}: NR {} > {} {}", rep.nr, b.name, b.value.unwrap_or(f64::NAN)));
        }
        rows.push(BenchRow {
            n: input.len(),
            seconds: times[times.len() / 2],
            cost: rep.cost,
            nr: rep.nr,
        });
    }
    Ok((rows, violations))
}

/// Time ratio allowed between consecutive sizes: 2.5 per doubling.
pub fn scaling_limit(growth: f64) -> f64 {
    2.5f64.powf(growth.log2())
}

/// Consecutive rows whose time ratio exceeds [`scaling_limit`]. Rows faster
/// than a millisecond are too noisy to judge.
pub fn slow_steps(rows: &[BenchRow]) -> Vec<String> {
    rows.windows(2)
        .filter(|w| w[0].seconds >= 1e-3 && w[1].n > w[0].n)
        .filter_map(|w| {
            let limit = scaling_limit(w[1].n as f64 / w[0].n as f64);
            let ratio = w[1].seconds / w[0].seconds;
            (ratio > limit).then(|| format!("n={}->{}: time ratio {ratio:.2} > {limit:.2}", w[0].n, w[1].n))
        })
        .collect()
}

pub fn cmd_bench(opts: &Options, sizes: &[usize], repeats: usize) -> Result<String, CliError> {
    let (rows, violations) = bench_rows(opts, sizes, repeats)?;
    // timing is machine dependent, so a slow step is reported but never fails the run
    for note in slow_steps(&rows) {
        eprintln!("warning: {note}");
    }
    let mut out = String::from("n,seconds,cost,nr\n");
    for r in &rows {
        let _ = writeln!(out, "{},{:.6},{:.9},{:.9}", r.n, r.seconds, r.cost, r.nr);
    }
    if violations.is_empty() {
        Ok(out)
    } else {
        Err(CliError::Violation {
            message: violations.join("; "),
            output: out,
        })
    }
}
