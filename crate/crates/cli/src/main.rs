//! Command-line front end: dataset analysis, worked-example reproduction and
//! coordinate-point queries.
//!
//! Exit codes: 0 when every check passes, 1 on input errors, 2 when some
//! check fails, 3 when the only non-passes are inconclusive.

mod dataset;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use specball::checks::{self, CheckKind, CheckOptions, CheckReport, InterpolationDataset, Verdict};
use specball::hypgeom;
use specball::matrix::ComplexMatrix;
use specball::matspec::{self, Tolerances};
use specball::poly::ComplexPolynomial;
use specball::symm::{self, SymmPoint};
use specball::Error;

use dataset::{parse_complex, parse_point, DatasetFile};
use report::{AnalyzeReport, EigenOut, NodeOut, ParamsOut};

const EXIT_PASS: i32 = 0;
const EXIT_INPUT: i32 = 1;
const EXIT_FAIL: i32 = 2;
const EXIT_INCONCLUSIVE: i32 = 3;

/// Deviation threshold for the reproduction tables.
const REPRO_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(
    name = "specball",
    version,
    about = "Necessary-condition checks for holomorphic interpolation into the spectral unit ball"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct CommonOpts {
    /// Angular nodes on the unit circle for grid scans.
    #[arg(long, value_name = "N")]
    grid: Option<usize>,
    /// Interior sample rings for the Pick condition.
    #[arg(long, value_name = "K")]
    rings: Option<usize>,
    /// Smallest-eigenvalue slack for Pick positivity.
    #[arg(long, value_name = "X")]
    psd_tol: Option<f64>,
    /// Eigenvalue clustering tolerance.
    #[arg(long, value_name = "X")]
    cluster_tol: Option<f64>,
    /// Relative singular-value threshold for rank decisions.
    #[arg(long, value_name = "X")]
    rank_tol: Option<f64>,
    /// Seed recorded in reports and used by randomized subroutines.
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
    /// Run grid scans on a single thread.
    #[arg(long)]
    serial: bool,
}

impl CommonOpts {
    fn check_options(&self) -> CheckOptions {
        let mut opts = CheckOptions::default();
        if let Some(grid) = self.grid {
            opts.boundary_grid = grid;
        }
        if let Some(rings) = self.rings {
            opts.interior_rings = rings;
        }
        if let Some(psd_tol) = self.psd_tol {
            opts.psd_tol = psd_tol;
        }
        if let Some(cluster_tol) = self.cluster_tol {
            opts.tolerances.cluster_tol = cluster_tol;
        }
        if let Some(rank_tol) = self.rank_tol {
            opts.tolerances.rank_tol = rank_tol;
        }
        opts.serial = self.serial;
        opts
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyze an interpolation dataset file: per-node spectral structure,
    /// then every applicable checker.
    Analyze {
        /// Path to the dataset JSON document.
        path: PathBuf,
        /// Emit the machine-readable report.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Reproduce the worked examples and print computed against reference
    /// values.
    Repro {
        #[command(subcommand)]
        example: ReproCmd,
    },
    /// Symmetrized-polydisc queries.
    Gn {
        #[command(subcommand)]
        query: GnCmd,
    },
}

#[derive(Subcommand)]
enum ReproCmd {
    /// The block family with a d-cycle and a scalar block: equality of the
    /// two-sided product bound.
    Ex1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Interpolation parameter, written `re` or `re,im`.
        #[arg(long, value_parser = parse_complex)]
        zeta: Complex64,
    },
    /// The nilpotent-pair example: boundary supremum of the two-point form
    /// and the product pair, with the window where the two conditions
    /// disagree.
    Obs2 {
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = parse_complex)]
        alpha: Complex64,
    },
    /// Sharpness of the self-map growth bound on single-eigenvalue input.
    Sharpness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// The repeated eigenvalue, written `re` or `re,im`.
        #[arg(long, value_parser = parse_complex)]
        lambda: Complex64,
    },
}

#[derive(Subcommand)]
enum GnCmd {
    /// Membership of a coordinate point, with its margin.
    Member {
        /// The point as JSON: a number, an array of reals, or an array of
        /// [re, im] pairs.
        point: String,
        #[arg(long, value_name = "X")]
        cluster_tol: Option<f64>,
    },
    /// The torus max distance between two member points.
    Pn {
        s: String,
        t: String,
        #[arg(long, value_name = "N")]
        grid: Option<usize>,
        #[arg(long)]
        serial: bool,
        #[arg(long, value_name = "X")]
        cluster_tol: Option<f64>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            EXIT_INPUT
        }
    };
    std::process::exit(code);
}

fn run(command: Command) -> Result<i32, String> {
    match command {
        Command::Analyze { path, json, common } => cmd_analyze(&path, json, &common),
        Command::Repro { example } => match example {
            ReproCmd::Ex1 { n, d, zeta } => repro_ex1(n, d, zeta),
            ReproCmd::Obs2 { m, alpha } => repro_obs2(m, alpha),
            ReproCmd::Sharpness { n, d, lambda } => repro_sharpness(n, d, lambda),
        },
        Command::Gn { query } => match query {
            GnCmd::Member { point, cluster_tol } => cmd_gn_member(&point, cluster_tol),
            GnCmd::Pn {
                s,
                t,
                grid,
                serial,
                cluster_tol,
            } => cmd_gn_pn(&s, &t, grid, serial, cluster_tol),
        },
    }
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

fn node_summary(
    index: usize,
    zeta: Complex64,
    w: &ComplexMatrix,
    tols: &Tolerances,
) -> Result<NodeOut, String> {
    match matspec::spectral_summary(w, tols) {
        Ok(summary) => Ok(NodeOut {
            index,
            zeta: [zeta.re, zeta.im],
            spectral_radius: summary.spectral_radius,
            ball_margin: 1.0 - summary.spectral_radius,
            min_poly_degree: Some(summary.min_poly_degree),
            non_derogatory: Some(summary.min_poly_degree == w.dim()),
            eigenvalues: summary
                .eigen
                .iter()
                .map(|e| EigenOut {
                    value: [e.value.re, e.value.im],
                    alg_mult: e.alg_mult,
                    index: Some(e.index),
                })
                .collect(),
            warnings: summary.warnings.iter().map(|x| x.to_string()).collect(),
        }),
        Err(Error::RankAmbiguity { lambda }) => {
            // fall back to eigenvalue locations only
            let chi = matspec::char_poly(w);
            let clusters = chi.roots(tols.cluster_tol).map_err(|e| e.to_string())?;
            let radius = clusters
                .iter()
                .map(|cl| cl.center.norm())
                .fold(0.0, f64::max);
            let note = match lambda {
                Some(l) => format!(
                    "Jordan structure unresolved: rank decision ambiguous near {}",
                    report::fmt_complex(l)
                ),
                None => "Jordan structure unresolved: rank decision ambiguous".to_string(),
            };
            Ok(NodeOut {
                index,
                zeta: [zeta.re, zeta.im],
                spectral_radius: radius,
                ball_margin: 1.0 - radius,
                min_poly_degree: None,
                non_derogatory: None,
                eigenvalues: clusters
                    .iter()
                    .map(|cl| EigenOut {
                        value: [cl.center.re, cl.center.im],
                        alg_mult: cl.multiplicity,
                        index: None,
                    })
                    .collect(),
                warnings: vec![note],
            })
        }
        Err(e) => Err(format!("node {index}: {e}")),
    }
}

fn run_checks(
    data: &InterpolationDataset,
    opts: &CheckOptions,
) -> Result<Vec<(String, CheckReport)>, String> {
    let mut out = Vec::new();
    match data.len() {
        1 => {
            // a constant map interpolates any single node
            let report = CheckReport {
                kind: CheckKind::ConstantInterpolant,
                verdict: Verdict::Pass,
                margin: 1.0,
                witness: None,
                diagnostics: Vec::new(),
            };
            out.push((CheckKind::ConstantInterpolant.name().to_string(), report));
        }
        2 => {
            let necc = checks::check_necc(data, opts).map_err(|e| e.to_string())?;
            out.push((necc.kind.name().to_string(), necc));
            let two_point = checks::check_necc_two_point(data, opts).map_err(|e| e.to_string())?;
            out.push((two_point.kind.name().to_string(), two_point));
            let schwarz = checks::check_schwarz(data, opts).map_err(|e| e.to_string())?;
            out.push((schwarz.kind.name().to_string(), schwarz));
        }
        _ => {
            let necc = checks::check_necc(data, opts).map_err(|e| e.to_string())?;
            out.push((necc.kind.name().to_string(), necc));
            // the product bound applies pairwise
            for j in 0..data.len() {
                for k in (j + 1)..data.len() {
                    let pair = InterpolationDataset::new(
                        vec![data.nodes()[j].clone(), data.nodes()[k].clone()],
                        &opts.tolerances,
                    )
                    .map_err(|e| e.to_string())?;
                    let report = checks::check_schwarz(&pair, opts).map_err(|e| e.to_string())?;
                    out.push((format!("{}[{j},{k}]", report.kind.name()), report));
                }
            }
        }
    }
    Ok(out)
}

fn exit_code_for(checks: &[(String, CheckReport)]) -> i32 {
    let mut code = EXIT_PASS;
    for (_, report) in checks {
        match report.verdict {
            Verdict::Fail => return EXIT_FAIL,
            Verdict::Inconclusive => code = EXIT_INCONCLUSIVE,
            Verdict::Pass => {}
        }
    }
    code
}

fn cmd_analyze(path: &PathBuf, json: bool, common: &CommonOpts) -> Result<i32, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let opts = common.check_options();
    let data = DatasetFile::parse(&text)?.into_dataset(&opts.tolerances)?;

    let mut nodes = Vec::with_capacity(data.len());
    for (index, (zeta, w)) in data.nodes().iter().enumerate() {
        nodes.push(node_summary(index, *zeta, w, &opts.tolerances)?);
    }
    let check_reports = run_checks(&data, &opts)?;
    let exit_code = exit_code_for(&check_reports);

    let report = AnalyzeReport {
        version: 1,
        params: ParamsOut {
            boundary_grid: opts.boundary_grid,
            interior_rings: opts.interior_rings,
            psd_tol: opts.psd_tol,
            cluster_tol: opts.tolerances.cluster_tol,
            rank_tol: opts.tolerances.rank_tol,
            seed: common.seed,
            serial: opts.serial,
        },
        dim: data.dim(),
        nodes,
        checks: check_reports
            .iter()
            .map(|(name, r)| report::check_out(name.clone(), r))
            .collect(),
        exit_code,
    };

    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?
        );
    } else {
        print!("{}", report::render_text(&report));
    }
    Ok(exit_code)
}

// ---------------------------------------------------------------------------
// repro
// ---------------------------------------------------------------------------

struct ReproTable {
    rows: Vec<(String, f64, f64)>,
}

impl ReproTable {
    fn new() -> Self {
        ReproTable { rows: Vec::new() }
    }

    fn row(&mut self, label: impl Into<String>, computed: f64, reference: f64) {
        self.rows.push((label.into(), computed, reference));
    }

    fn print_and_exit_code(self) -> i32 {
        println!(
            "{:<44} {:>16} {:>16} {:>12}",
            "quantity", "computed", "reference", "|deviation|"
        );
        let mut worst = 0.0f64;
        for (label, computed, reference) in &self.rows {
            let dev = (computed - reference).abs();
            worst = worst.max(dev);
            println!("{label:<44} {computed:>16.10} {reference:>16.10} {dev:>12.3e}");
        }
        if worst < REPRO_TOL {
            println!("all deviations below {REPRO_TOL:.0e}");
            EXIT_PASS
        } else {
            println!("worst deviation {worst:.3e} exceeds {REPRO_TOL:.0e}");
            EXIT_FAIL
        }
    }
}

fn schwarz_product_pair(
    w1: &ComplexMatrix,
    w2: &ComplexMatrix,
    tols: &Tolerances,
) -> Result<(f64, f64), String> {
    let s1 = matspec::spectral_summary(w1, tols).map_err(|e| e.to_string())?;
    let s2 = matspec::spectral_summary(w2, tols).map_err(|e| e.to_string())?;
    let product = |mu: Complex64, against: &matspec::SpectralSummary| -> Result<f64, String> {
        let mut acc = 1.0;
        for e in &against.eigen {
            acc *= hypgeom::pseudo_dist(mu, e.value)
                .map_err(|e| e.to_string())?
                .powi(e.index as i32);
        }
        Ok(acc)
    };
    let mut over_first = 0.0f64;
    for e in &s2.eigen {
        over_first = over_first.max(product(e.value, &s1)?);
    }
    let mut over_second = 0.0f64;
    for e in &s1.eigen {
        over_second = over_second.max(product(e.value, &s2)?);
    }
    Ok((over_first, over_second))
}

fn repro_ex1(n: usize, d: usize, zeta: Complex64) -> Result<i32, String> {
    let w1 = matspec::example_fd(n, d, Complex64::new(0.0, 0.0)).map_err(|e| e.to_string())?;
    let w2 = matspec::example_fd(n, d, zeta).map_err(|e| e.to_string())?;
    let tols = Tolerances::default();
    let (p1, p2) = schwarz_product_pair(&w1, &w2, &tols)?;
    let pd = zeta.norm();
    println!(
        "block family at n = {n}, d = {d}, zeta = {}",
        report::fmt_complex(zeta)
    );
    let mut table = ReproTable::new();
    table.row("product over first spectrum", p1, pd);
    table.row("product over second spectrum", p2, pd * pd);
    table.row("bound max vs distance (equality)", p1.max(p2), pd);
    Ok(table.print_and_exit_code())
}

fn repro_obs2(m: usize, alpha: Complex64) -> Result<i32, String> {
    if m < 2 {
        return Err("the nilpotent-pair example needs m >= 2".to_string());
    }
    if alpha.norm() >= 1.0 || alpha.norm() == 0.0 {
        return Err("alpha must satisfy 0 < |alpha| < 1".to_string());
    }
    let n = 2 * m;
    let mut w1 = ComplexMatrix::zeros(n);
    for i in 1..m {
        w1[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in (m + 1)..n {
        w1[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    coeffs[m] = -alpha;
    let w2 = matspec::companion(&ComplexPolynomial::new(coeffs)).map_err(|e| e.to_string())?;

    let opts = CheckOptions {
        boundary_grid: 4096,
        ..CheckOptions::default()
    };
    let zeta2 = Complex64::new(0.65, 0.0);
    let data = InterpolationDataset::new(
        vec![(Complex64::new(0.0, 0.0), w1.clone()), (zeta2, w2.clone())],
        &opts.tolerances,
    )
    .map_err(|e| e.to_string())?;
    let two_point = checks::check_necc_two_point(&data, &opts).map_err(|e| e.to_string())?;
    let sup = hypgeom::pseudo_dist(Complex64::new(0.0, 0.0), zeta2).map_err(|e| e.to_string())?
        - two_point.margin;

    let mf = m as f64;
    let sup_reference = mf * alpha.norm() / (2.0 * mf - mf * alpha.norm());
    let (p1, p2) = schwarz_product_pair(&w1, &w2, &opts.tolerances)?;
    println!(
        "nilpotent pair at m = {m}, alpha = {} (n = {n})",
        report::fmt_complex(alpha)
    );
    println!(
        "window where the Pick form is silent but the product bound rules out: ({sup_reference:.6}, {:.6})",
        alpha.norm()
    );
    let mut table = ReproTable::new();
    table.row("two-point boundary supremum", sup, sup_reference);
    table.row("product over first spectrum", p1, alpha.norm());
    table.row("product over second spectrum", p2, 0.0);
    Ok(table.print_and_exit_code())
}

fn repro_sharpness(n: usize, d: usize, lambda: Complex64) -> Result<i32, String> {
    if d < 1 || d > n {
        return Err(format!("sharpness needs 1 <= d <= n, got d = {d}, n = {n}"));
    }
    if lambda.norm() >= 1.0 {
        return Err("lambda must lie inside the unit disc".to_string());
    }
    let tols = Tolerances::default();
    let mut a = ComplexMatrix::identity(n).scale(lambda);
    if n >= 2 {
        a[(0, 1)] = Complex64::new(0.3, 0.0);
    }
    let g0 = matspec::sharpness_map(d, n, &ComplexMatrix::zeros(n)).map_err(|e| e.to_string())?;
    let ga = matspec::sharpness_map(d, n, &a).map_err(|e| e.to_string())?;
    let g0_summary = matspec::spectral_summary(&g0, &tols).map_err(|e| e.to_string())?;
    let r_ga = matspec::spectral_summary(&ga, &tols)
        .map_err(|e| e.to_string())?
        .spectral_radius;
    let r_a = matspec::spectral_summary(&a, &tols)
        .map_err(|e| e.to_string())?
        .spectral_radius;
    let root = r_a.powf(1.0 / d as f64);
    let r_g0 = g0_summary.spectral_radius;
    let rhs = (root + r_g0) / (1.0 + r_g0 * root);

    println!(
        "self-map sharpness at n = {n}, d = {d}, lambda = {}",
        report::fmt_complex(lambda)
    );
    let mut table = ReproTable::new();
    table.row(
        "degree of the map at the origin",
        g0_summary.min_poly_degree as f64,
        d as f64,
    );
    table.row(
        "spectral radius of the image",
        r_ga,
        lambda.norm().powf(1.0 / d as f64),
    );
    table.row(
        "growth bound right-hand side",
        rhs,
        lambda.norm().powf(1.0 / d as f64),
    );
    Ok(table.print_and_exit_code())
}

// ---------------------------------------------------------------------------
// gn
// ---------------------------------------------------------------------------

fn cmd_gn_member(point: &str, cluster_tol: Option<f64>) -> Result<i32, String> {
    let coords = parse_point(point)?;
    let s = SymmPoint::new(coords).map_err(|e| e.to_string())?;
    let tol = cluster_tol.unwrap_or(Tolerances::default().cluster_tol);
    let membership = symm::in_gn(&s, tol).map_err(|e| e.to_string())?;
    println!(
        "member: {} (margin {:+.6e})",
        membership.inside, membership.margin
    );
    Ok(if membership.inside {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

fn cmd_gn_pn(
    s_text: &str,
    t_text: &str,
    grid: Option<usize>,
    serial: bool,
    cluster_tol: Option<f64>,
) -> Result<i32, String> {
    let s = SymmPoint::new(parse_point(s_text)?).map_err(|e| e.to_string())?;
    let t = SymmPoint::new(parse_point(t_text)?).map_err(|e| e.to_string())?;
    let tol = cluster_tol.unwrap_or(Tolerances::default().cluster_tol);
    let grid = grid.unwrap_or_else(|| symm::default_pn_grid(s.len()));
    let result = symm::pn_distance(&s, &t, grid, true, serial, tol).map_err(|e| e.to_string())?;
    println!("pn distance: {:.12}", result.value);
    let witness: Vec<String> = result
        .witness
        .iter()
        .map(|&z| report::fmt_complex(z))
        .collect();
    println!("argmax Z: [{}]", witness.join(", "));
    println!(
        "grid: {grid} per angle, {} nodes total, {} skipped{}",
        result.total,
        result.skipped,
        if result.high_skip_rate {
            " (high skip rate)"
        } else {
            ""
        }
    );
    Ok(EXIT_PASS)
}
