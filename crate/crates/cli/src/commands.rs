use std::path::PathBuf;

use clap::Args;
use num_complex::Complex64;
use num_rational::BigRational;
use vilenkin::counterexamples::{divergence_report, SearchParams, Variant};
use vilenkin::rational::parse_rational;
use vilenkin::summability::convergence::strictly_decreasing;
use vilenkin::summability::{
    condition_predicates, convergence_table, kernel_domination_sweep, make_weights, maximal_mean, norlund_kernel, norlund_mean_spectral,
    regularity_probe, Condition, WeightScheme,
};
use vilenkin::{forward_transform, Cyclotomic, Error, Result, Scalar};

use crate::config::{parse_index_list, Format, Mode, RunConfig};
use crate::input::build_function;
use crate::output::{emit, value_cells, value_columns, Cell, ExactText, Table};

macro_rules! by_mode {
    ($cfg:expr, $f:ident($($arg:expr),*)) => {
        match $cfg.mode {
            Mode::Exact => $f::<Cyclotomic>($($arg),*),
            Mode::Float => $f::<Complex64>($($arg),*),
        }
    };
}

fn scheme(cfg: &RunConfig, n_max: u64) -> Result<WeightScheme> {
    make_weights(cfg.scheme_kind()?, n_max.max(1) as usize)
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    /// Test function: constant[:c], psi:<n>, cylinder:<level>:<digits>, file:<path>, random[:<seed>].
    #[arg(long = "fn")]
    pub function: String,
    /// Only list nonzero coefficients.
    #[arg(long)]
    pub nonzero: bool,
}

pub fn transform(cfg: &RunConfig, a: &TransformArgs) -> Result<()> {
    by_mode!(cfg, transform_in(cfg, a))
}

fn transform_in<S: Scalar + ExactText>(cfg: &RunConfig, a: &TransformArgs) -> Result<()> {
    let group = cfg.group()?;
    let f = build_function::<S>(&a.function, &group, cfg.seed)?;
    let s = forward_transform(&f);
    let mut cols = vec!["n"];
    cols.extend(value_columns::<S>());
    let mut table = Table::new(cols);
    let coeffs = s.to_dense()?;
    // float round-off below this counts as zero for --nonzero
    let floor = 1e-12 * coeffs.iter().map(|c| c.modulus()).fold(0.0, f64::max);
    for (n, c) in coeffs.iter().enumerate() {
        if a.nonzero && (c.is_zero() || (!S::EXACT && c.modulus() <= floor)) {
            continue;
        }
        let mut row = vec![Cell::from(n)];
        row.extend(value_cells(c));
        table.push(row);
    }
    // ∫|f|² = Σ|f̂(n)|²
    let energy: f64 = coeffs.iter().map(|c| c.to_complex().norm_sqr()).sum();
    let mass: f64 = f.values().iter().map(|v| v.to_complex().norm_sqr()).sum::<f64>() / f.len() as f64;
    table.note("parseval_coefficients", energy);
    table.note("parseval_function", mass);
    if S::EXACT {
        let exact_sum = |vals: &mut dyn Iterator<Item = &S>| -> Option<BigRational> {
            vals.map(|v| v.norm_sqr_rational()).try_fold(BigRational::from_integer(0.into()), |acc, x| Some(acc + x?))
        };
        let lhs = exact_sum(&mut coeffs.iter());
        let rhs = exact_sum(&mut f.values().iter()).map(|r| r / BigRational::from_integer((f.len() as u64).into()));
        if let (Some(l), Some(r)) = (lhs, rhs) {
            table.note("parseval_exact", l == r);
        }
    }
    table.note("parseval_diff", (energy - mass).abs());
    emit(&table, cfg.format, cfg.out.as_deref(), None)
}

#[derive(Args, Debug)]
pub struct MeansArgs {
    #[arg(long = "fn")]
    pub function: String,
    /// Indices: `5`, `1,2,4`, `3..9`, `M2..M6`. Defaults to every scale `M_1..M_N`.
    #[arg(long)]
    pub n: Option<String>,
    /// Also write `t_n f` pointwise (columns n, x, re, im) to this CSV file.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

pub fn means(cfg: &RunConfig, a: &MeansArgs) -> Result<()> {
    by_mode!(cfg, means_in(cfg, a))
}

fn means_in<S: Scalar + ExactText>(cfg: &RunConfig, a: &MeansArgs) -> Result<()> {
    let group = cfg.group()?;
    let f = build_function::<S>(&a.function, &group, cfg.seed)?;
    let ns = parse_index_list(a.n.as_deref().unwrap_or(&format!("M1..M{}", group.level())), &group)?;
    let w = scheme(cfg, ns.iter().copied().max().unwrap_or(1))?;
    let rows = convergence_table(&f, &w, &ns)?;
    let mut table = Table::new(["n", "l1_error", "linf_error"]);
    for r in &rows {
        table.push(vec![r.n.into(), r.l1_error.into(), r.linf_error.into()]);
    }
    table.note("scheme", w.kind().to_string());
    table.note("l1_strictly_decreasing", strictly_decreasing(&rows.iter().map(|r| r.l1_error).collect::<Vec<_>>()));
    if let Some(path) = &a.dump {
        let s = forward_transform(&f);
        let mut cols = vec!["n", "x"];
        cols.extend(value_columns::<S>());
        let mut dump = Table::new(cols);
        for &n in &ns {
            let t = norlund_mean_spectral(&s, &w, n)?;
            for (x, v) in t.values().iter().enumerate() {
                let mut row = vec![Cell::from(n), Cell::from(x)];
                row.extend(value_cells(v));
                dump.push(row);
            }
        }
        std::fs::write(path, dump.to_csv()?)?;
    }
    emit(&table, cfg.format, cfg.out.as_deref(), None)
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    /// Indices, as for `means`.
    #[arg(long)]
    pub n: String,
    /// Report `sup |F_n| / (n^{−α} Σ M_j^α |K_{M_j}|)` for this α instead of kernel values.
    #[arg(long)]
    pub domination: Option<f64>,
}

pub fn kernel(cfg: &RunConfig, a: &KernelArgs) -> Result<()> {
    by_mode!(cfg, kernel_in(cfg, a))
}

fn kernel_in<S: Scalar + ExactText>(cfg: &RunConfig, a: &KernelArgs) -> Result<()> {
    let group = cfg.group()?;
    let ns = parse_index_list(&a.n, &group)?;
    let w = scheme(cfg, ns.iter().copied().max().unwrap_or(1))?;
    if let Some(alpha) = a.domination {
        let mut table = Table::new(["n", "ratio", "skipped"]);
        let ratios = kernel_domination_sweep(&group, &w, alpha, &ns)?;
        for r in &ratios {
            table.push(vec![r.n.into(), r.ratio.into(), r.skipped.into()]);
        }
        table.note("max_ratio", ratios.iter().map(|r| r.ratio).fold(0.0, f64::max));
        return emit(&table, cfg.format, cfg.out.as_deref(), None);
    }
    let mut cols = vec!["n", "x"];
    cols.extend(value_columns::<S>());
    let mut table = Table::new(cols);
    let mut worst: f64 = 0.0;
    for &n in &ns {
        let k = norlund_kernel::<S>(&group, &w, n)?;
        worst = worst.max((k.values.integral().to_complex() - Complex64::new(1.0, 0.0)).norm());
        for (x, v) in k.values.values().iter().enumerate() {
            let mut row = vec![Cell::from(n), Cell::from(x)];
            row.extend(value_cells(v));
            table.push(row);
        }
    }
    table.note("max_integral_error", worst);
    emit(&table, cfg.format, cfg.out.as_deref(), None)
}

#[derive(Args, Debug)]
pub struct MaximalArgs {
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long)]
    pub nmax: u64,
}

pub fn maximal(cfg: &RunConfig, a: &MaximalArgs) -> Result<()> {
    by_mode!(cfg, maximal_in(cfg, a))
}

fn maximal_in<S: Scalar + ExactText>(cfg: &RunConfig, a: &MaximalArgs) -> Result<()> {
    let group = cfg.group()?;
    let f = build_function::<S>(&a.function, &group, cfg.seed)?;
    let w = scheme(cfg, a.nmax)?;
    let m = maximal_mean(&forward_transform(&f), &w, a.nmax)?;
    let mut table = Table::new(["x", "value"]);
    for (x, v) in m.values.iter().enumerate() {
        table.push(vec![x.into(), (*v).into()]);
    }
    table.note("max", m.max());
    table.note("l1_norm", m.l1_norm());
    emit(&table, cfg.format, cfg.out.as_deref(), None)
}

#[derive(Args, Debug)]
pub struct PredicatesArgs {
    /// cond1, cond2, cond3, cond4, regularity or all.
    #[arg(long, default_value = "all")]
    pub which: String,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1024)]
    pub nmax: u64,
}

pub fn predicates(cfg: &RunConfig, a: &PredicatesArgs) -> Result<()> {
    let w = scheme(cfg, a.nmax)?;
    if a.which == "regularity" {
        let r = regularity_probe(&w, a.nmax)?;
        let mut table = Table::new(["n", "ratio", "exact"]);
        for (i, (n, ratio)) in r.ratios.iter().enumerate() {
            let exact = r.exact.as_ref().and_then(|e| e.get(i)).cloned().unwrap_or_default();
            table.push(vec![(*n).into(), (*ratio).into(), Cell::Exact(exact)]);
        }
        table.note("trend", format!("{:?}", r.trend));
        table.note("tail_slope", r.tail_slope);
        return emit(&table, cfg.format, cfg.out.as_deref(), Some(serde_json::to_value(&r)?));
    }
    let which: Vec<Condition> = if a.which == "all" {
        vec![Condition::Cond1, Condition::Cond2, Condition::Cond3, Condition::Cond4]
    } else {
        vec![a.which.parse()?]
    };
    let reports = which.iter().map(|&c| condition_predicates(&w, c, a.alpha, a.c, a.nmax)).collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(["condition", "verdict", "exact", "witnesses", "note"]);
    for r in &reports {
        table.push(vec![
            r.condition.to_string().into(),
            format!("{:?}", r.verdict).to_lowercase().into(),
            r.exact.into(),
            r.witnesses.len().into(),
            r.note.clone().into(),
        ]);
    }
    table.note("scheme", w.kind().to_string());
    emit(&table, cfg.format, cfg.out.as_deref(), Some(serde_json::to_value(&reports)?))
}

#[derive(Args, Debug)]
pub struct CounterexampleArgs {
    /// thm2, thm3, thm4b or thm4c.
    #[arg(long)]
    pub variant: String,
    /// Exponent `p` (ignored for thm4c, where `p = 1/(1+α)`).
    #[arg(long, default_value = "1/4")]
    pub p: String,
    /// Weight exponent α for thm4b/thm4c.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub kmax: usize,
    /// Largest α_k the search may use.
    #[arg(long, default_value_t = 64)]
    pub cap: u32,
}

pub fn counterexample(cfg: &RunConfig, a: &CounterexampleArgs) -> Result<()> {
    let variant: Variant = a.variant.parse()?;
    let alpha = a.alpha.as_deref().map(parse_rational).transpose()?;
    let mut p = parse_rational(&a.p)?;
    if variant == Variant::Thm4c {
        let al = alpha.clone().ok_or_else(|| Error::Precondition("thm4c needs --alpha".into()))?;
        p = (BigRational::from_integer(1.into()) + al).recip();
    }
    let mut params = SearchParams::new(variant, p, alpha, cfg.radices.clone(), a.kmax);
    params.cap = a.cap;
    let report = divergence_report(&params, &cfg.scheme_kind()?)?;
    let mut table = Table::new(["k", "alpha_k", "M", "threshold", "threshold_exact", "weak_raw", "weak_quasinorm", "exact", "route", "contrast"]);
    for (row, cert) in report.rows.iter().zip(&report.certificates) {
        table.push(vec![
            row.k.into(),
            (row.alpha_k as u64).into(),
            row.m.into(),
            row.threshold.into(),
            Cell::Exact(row.threshold_exact.clone().unwrap_or_default()),
            row.weak_raw.into(),
            row.weak_quasinorm.into(),
            row.exact.into(),
            format!("{:?}", cert.route).to_lowercase().into(),
            row.contrast.map_or(Cell::Text(String::new()), Cell::Float),
        ]);
    }
    table.note("variant", variant.to_string());
    table.note("scheme", report.scheme.clone());
    table.note("p", report.p.clone());
    table.note("alphas", format!("{:?}", report.sequence.entries));
    table.note("strictly_increasing", report.strictly_increasing);
    let json = serde_json::to_value(&report)?;
    match &cfg.out {
        // the certificate file is always JSON; the growth table goes to stdout
        Some(path) => {
            std::fs::write(path, serde_json::to_string_pretty(&json)? + "\n")?;
            print!("{}", growth_table(&table));
            print!("{}", table.summary_text());
            Ok(())
        }
        None if cfg.format == Format::Json => emit(&table, Format::Json, None, Some(json)),
        None => emit(&table, Format::Csv, None, None),
    }
}

/// Fixed-width rendering for terminals.
fn growth_table(t: &Table) -> String {
    let keep = [0usize, 1, 2, 3, 6, 7, 8];
    let text = |c: &Cell| match c {
        Cell::Float(x) => format!("{x:.6e}"),
        Cell::Int(i) => i.to_string(),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(s) | Cell::Exact(s) => s.clone(),
    };
    let mut lines: Vec<Vec<String>> = vec![keep.iter().map(|&i| t.columns[i].clone()).collect()];
    for row in &t.rows {
        lines.push(keep.iter().map(|&i| text(&row[i])).collect());
    }
    let widths: Vec<usize> = (0..keep.len()).map(|j| lines.iter().map(|l| l[j].len()).max().unwrap_or(0)).collect();
    lines
        .iter()
        .map(|l| l.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect::<Vec<_>>().join("  ") + "\n")
        .collect()
}
