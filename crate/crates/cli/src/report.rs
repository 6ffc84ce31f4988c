//! Report structures for the analyze command: one serializable document that
//! also drives the human-readable rendering. Field order is fixed so that
//! identical inputs produce byte-identical JSON.

use num_complex::Complex64;
use serde::Serialize;
use specball::checks::{CheckReport, Diagnostic, ProductSide, Verdict, Witness};

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub version: u32,
    pub params: ParamsOut,
    pub dim: usize,
    pub nodes: Vec<NodeOut>,
    pub checks: Vec<CheckOut>,
    pub exit_code: i32,
}

#[derive(Serialize)]
pub struct ParamsOut {
    pub boundary_grid: usize,
    pub interior_rings: usize,
    pub psd_tol: f64,
    pub cluster_tol: f64,
    pub rank_tol: f64,
    pub seed: u64,
    pub serial: bool,
}

#[derive(Serialize)]
pub struct NodeOut {
    pub index: usize,
    pub zeta: [f64; 2],
    pub spectral_radius: f64,
    pub ball_margin: f64,
    /// None when the Jordan structure could not be resolved.
    pub min_poly_degree: Option<usize>,
    pub non_derogatory: Option<bool>,
    pub eigenvalues: Vec<EigenOut>,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
pub struct EigenOut {
    pub value: [f64; 2],
    pub alg_mult: usize,
    pub index: Option<usize>,
}

#[derive(Serialize)]
pub struct CheckOut {
    pub name: String,
    pub verdict: &'static str,
    /// None when the checker could not produce a margin.
    pub margin: Option<f64>,
    pub witness: Option<WitnessOut>,
    pub diagnostics: Vec<String>,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum WitnessOut {
    Point {
        z: [f64; 2],
    },
    Eigenvalue {
        side: &'static str,
        value: [f64; 2],
        product: f64,
    },
    Radii {
        spectral_radius: f64,
        bound: f64,
    },
    Sample {
        zeta: [f64; 2],
        eigenvalue: [f64; 2],
        excess: f64,
    },
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn check_out(name: String, report: &CheckReport) -> CheckOut {
    let witness = report.witness.as_ref().map(|w| match w {
        Witness::Point { z } => WitnessOut::Point { z: pair(*z) },
        Witness::Eigen {
            side,
            value,
            product,
        } => WitnessOut::Eigenvalue {
            side: match side {
                ProductSide::OverFirstSpectrum => "over-first-spectrum",
                ProductSide::OverSecondSpectrum => "over-second-spectrum",
            },
            value: pair(*value),
            product: *product,
        },
        Witness::Radii {
            spectral_radius,
            bound,
        } => WitnessOut::Radii {
            spectral_radius: *spectral_radius,
            bound: *bound,
        },
        Witness::Sample {
            zeta,
            eigenvalue,
            excess,
        } => WitnessOut::Sample {
            zeta: pair(*zeta),
            eigenvalue: pair(*eigenvalue),
            excess: *excess,
        },
    });
    CheckOut {
        name,
        verdict: verdict_name(report.verdict),
        margin: if report.margin.is_finite() {
            Some(report.margin)
        } else {
            None
        },
        witness,
        diagnostics: report
            .diagnostics
            .iter()
            .map(Diagnostic::to_string)
            .collect(),
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.6}", z.re)
    } else if z.im < 0.0 {
        format!("{:.6}-{:.6}i", z.re, -z.im)
    } else {
        format!("{:.6}+{:.6}i", z.re, z.im)
    }
}

pub fn render_text(report: &AnalyzeReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "dataset: {} node(s), dimension {}\n",
        report.nodes.len(),
        report.dim
    ));
    for node in &report.nodes {
        out.push_str(&format!(
            "node {}: zeta = {}, r(W) = {:.6}",
            node.index,
            fmt_complex(Complex64::new(node.zeta[0], node.zeta[1])),
            node.spectral_radius
        ));
        match (node.min_poly_degree, node.non_derogatory) {
            (Some(degree), Some(nd)) => out.push_str(&format!(
                ", min poly degree {degree}, {}\n",
                if nd { "non-derogatory" } else { "derogatory" }
            )),
            _ => out.push_str(", Jordan structure unresolved\n"),
        }
        for e in &node.eigenvalues {
            let idx = e
                .index
                .map(|i| i.to_string())
                .unwrap_or_else(|| "?".to_string());
            out.push_str(&format!(
                "    eigenvalue {} (alg {}, index {})\n",
                fmt_complex(Complex64::new(e.value[0], e.value[1])),
                e.alg_mult,
                idx
            ));
        }
        for w in &node.warnings {
            out.push_str(&format!("    warning: {w}\n"));
        }
    }
    out.push_str("checks:\n");
    for check in &report.checks {
        let margin = check
            .margin
            .map(|m| format!("{m:+.6e}"))
            .unwrap_or_else(|| "n/a".to_string());
        out.push_str(&format!(
            "  {:<28} {:<12} margin {}\n",
            check.name,
            check.verdict.to_uppercase(),
            margin
        ));
        if let Some(w) = &check.witness {
            out.push_str(&format!("    witness: {}\n", witness_text(w)));
        }
        for d in &check.diagnostics {
            out.push_str(&format!("    note: {d}\n"));
        }
    }
    out.push_str(&format!("exit code: {}\n", report.exit_code));
    out
}

fn witness_text(w: &WitnessOut) -> String {
    match w {
        WitnessOut::Point { z } => format!("z = {}", fmt_complex(Complex64::new(z[0], z[1]))),
        WitnessOut::Eigenvalue {
            side,
            value,
            product,
        } => format!(
            "eigenvalue {} ({side}), product {product:.6}",
            fmt_complex(Complex64::new(value[0], value[1]))
        ),
        WitnessOut::Radii {
            spectral_radius,
            bound,
        } => format!("spectral radius {spectral_radius:.6} against bound {bound:.6}"),
        WitnessOut::Sample {
            zeta,
            eigenvalue,
            excess,
        } => format!(
            "zeta = {}, eigenvalue {}, excess {excess:.3e}",
            fmt_complex(Complex64::new(zeta[0], zeta[1])),
            fmt_complex(Complex64::new(eigenvalue[0], eigenvalue[1]))
        ),
    }
}
