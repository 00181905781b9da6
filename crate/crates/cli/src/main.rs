mod config;
mod output;

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use trigseries::diagnostics::{analyze_trace_with, boundedness_report};
use trigseries::exceptional::{
    build_witness, default_order, uniform_integrability_certificate, DEFAULT_KAPPA,
};
use trigseries::extrema::{coefficient_sum, find_extrema};
use trigseries::kernels::TorusPoint;
use trigseries::partial_sums::{residual_identity_check, residual_identity_sweep};
use trigseries::quadrature::{norm_trace, IntervalUnion, QuadSettings, ResidualSettings, TraceKind};

use output::{num, Format, Report, Table};

#[derive(Parser)]
#[command(name = "trigseries", version, about = "Experiments on convex-coefficient cosine series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// L¹ norm traces of S_N or f - S_N with a convergence verdict
    Norms(NormsArgs),
    /// Extrema of the Dirichlet kernel, or Σc_i over a sweep
    Extrema(ExtremaArgs),
    /// Small-measure witness sets for failure of uniform integrability
    Witness(WitnessArgs),
    /// Check of the summation-by-parts identity for f - S_N
    Identity(IdentityArgs),
}

#[derive(Args)]
struct Common {
    /// Output format (defaults depend on the command)
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or_else(|| match self.out.as_ref().and_then(|p| p.extension()) {
            Some(ext) if ext == "json" => Format::Json,
            Some(ext) if ext == "csv" => Format::Csv,
            _ => default,
        })
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Abs,
    Residual,
}

#[derive(Args)]
struct NormsArgs {
    #[command(flatten)]
    common: Common,
    /// `log`, `log2` or a sequence file
    #[arg(long, default_value = "log")]
    sequence: String,
    #[arg(long, value_enum, default_value = "abs")]
    kind: Kind,
    /// Orders: `a..bxk`, `a..b` or a comma list
    #[arg(long, default_value = "16..4096x2")]
    n: String,
    /// Interval union `lo,hi;lo,hi` or `torus`
    #[arg(long, default_value = "torus")]
    set: String,
    #[arg(long, default_value_t = 1)]
    panels_per_cell: usize,
    #[arg(long, default_value_t = 16)]
    nodes_per_panel: usize,
    /// Origin window half-width for residual traces
    #[arg(long, default_value_t = 1e-3)]
    eta: f64,
    #[arg(long, default_value_t = 100_000)]
    j_max: usize,
    #[arg(long, default_value_t = 1 << 18)]
    grid_size: usize,
    #[arg(long, default_value_t = 4)]
    window: usize,
    #[arg(long, default_value_t = 0.05)]
    threshold: f64,
}

#[derive(Args)]
struct ExtremaArgs {
    #[command(flatten)]
    common: Common,
    /// Single order for a full table
    #[arg(long, conflicts_with = "sweep")]
    n: Option<usize>,
    /// Orders for Σc_i rows
    #[arg(long)]
    sweep: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "log")]
    sequence: String,
    /// N0 values; a single value with --b builds one witness
    #[arg(long, default_value = "8,16,32,64")]
    n0: String,
    #[arg(long)]
    b: Option<usize>,
    /// Order in (b·N0, (b+1)·N0]; defaults to b·N0 + ⌈N0/2⌉
    #[arg(long, requires = "b")]
    n: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_KAPPA)]
    kappa: f64,
}

#[derive(Args)]
struct IdentityArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "log")]
    sequence: String,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    n_max: usize,
    /// Sampling range for t
    #[arg(long, default_value = "0.05,0.45")]
    t_range: String,
    #[arg(long, default_value_t = 100_000)]
    j_max: usize,
    /// Single check at this order (requires --t)
    #[arg(long, requires = "t")]
    n: Option<usize>,
    #[arg(long, requires = "n", allow_hyphen_values = true)]
    t: Option<f64>,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Norms(a) => norms(a),
        Command::Extrema(a) => extrema(a),
        Command::Witness(a) => witness(a),
        Command::Identity(a) => identity(a),
    }
}

fn norms(a: NormsArgs) -> Result<()> {
    let seq = config::load_sequence(&a.sequence)?;
    let ns = config::parse_orders(&a.n)?;
    let set: IntervalUnion = a.set.parse()?;
    let quad = QuadSettings {
        panels_per_cell: a.panels_per_cell,
        nodes_per_panel: a.nodes_per_panel,
    };
    if quad.panels_per_cell == 0 || quad.nodes_per_panel == 0 || a.grid_size == 0 || a.j_max == 0 {
        bail!("quadrature settings must be positive");
    }
    let kind = match a.kind {
        Kind::Abs => TraceKind::Abs,
        Kind::Residual => TraceKind::Residual(ResidualSettings {
            eta: a.eta,
            j_max: a.j_max,
            grid_size: a.grid_size,
        }),
    };
    let config = json!({
        "command": "norms",
        "sequence": a.sequence,
        "tail": seq.tail().keyword(),
        "kind": a.kind,
        "n": ns,
        "set": set.to_string(),
        "quadrature": quad,
        "residual": match kind { TraceKind::Residual(r) => json!(r), TraceKind::Abs => Value::Null },
        "window": a.window,
        "threshold": a.threshold,
    });
    let trace = norm_trace(&seq, &ns, &set, kind, &quad)?;
    let verdict = analyze_trace_with(&trace, a.window, a.threshold).ok();
    let bounds = boundedness_report(&trace)?;
    let residual = matches!(kind, TraceKind::Residual(_));
    let mut header = vec!["N", "value", "error"];
    if residual {
        header.push("excluded_bound");
    }
    let rows = trace
        .entries()
        .iter()
        .map(|e| {
            let mut row = vec![e.n.to_string(), num(e.value), num(e.error_estimate)];
            if residual {
                row.push(e.excluded_bound.map(num).unwrap_or_default());
            }
            row
        })
        .collect();
    let mut notes: Vec<String> = trace
        .entries()
        .iter()
        .filter_map(|e| e.flag.as_ref().map(|f| format!("flagged N={}: {f}", e.n)))
        .collect();
    match &verdict {
        Some(v) => notes.push(format!(
            "verdict: {} cauchy_gap={} limit_estimate={} uncertainty={}",
            v.verdict,
            num(v.cauchy_gap),
            num(v.limit_estimate),
            num(v.uncertainty)
        )),
        None => notes.push(format!(
            "verdict: none (trace shorter than window + 2 = {})",
            a.window + 2
        )),
    }
    notes.push(format!("sup: {} at N={}", num(bounds.sup), bounds.argmax_n));
    let report = Report {
        config,
        table: Table { header, rows, notes },
        result: json!({ "trace": trace, "verdict": verdict, "boundedness": bounds }),
    };
    report.emit(a.common.format_or(Format::Csv), a.common.out.as_ref())
}

fn extrema(a: ExtremaArgs) -> Result<()> {
    let format = a.common.format_or(Format::Csv);
    let report = match (a.n, &a.sweep) {
        (_, Some(sweep)) => {
            let ns = config::parse_orders(sweep)?;
            let table = coefficient_sum(&ns)?;
            let config = json!({ "command": "extrema", "sweep": ns });
            let rows = table
                .rows
                .iter()
                .map(|r| vec![r.n.to_string(), num(r.sum), r.ratio.map(num).unwrap_or_default()])
                .collect();
            Report {
                config,
                table: Table {
                    header: vec!["N", "sum_c", "ratio"],
                    rows,
                    notes: vec![format!(
                        "ratio band: max={} min={} bounded={}",
                        num(table.max_ratio),
                        num(table.min_ratio),
                        table.bounded
                    )],
                },
                result: json!(table),
            }
        }
        (n, None) => {
            let n = n.unwrap_or(64);
            let table = find_extrema(n, a.tol)?;
            let config = json!({ "command": "extrema", "n": n, "tol": a.tol });
            let rows = table
                .rows
                .iter()
                .map(|r| vec![r.i.to_string(), num(r.t), num(r.height), num(r.c)])
                .collect();
            Report {
                config,
                table: Table {
                    header: vec!["i", "t", "height", "c"],
                    rows,
                    notes: vec![format!(
                        "sum_c={} interleaves={}",
                        num(table.c_sum()),
                        table.interleaves()
                    )],
                },
                result: json!(table),
            }
        }
    };
    report.emit(format, a.common.out.as_ref())
}

fn witness(a: WitnessArgs) -> Result<()> {
    let seq = config::load_sequence(&a.sequence)?;
    let n0s = config::parse_orders(&a.n0)?;
    let format = a.common.format_or(Format::Json);
    let report = if let Some(b) = a.b {
        let [n0] = n0s[..] else {
            bail!("--b builds a single witness; pass exactly one --n0");
        };
        let n = a.n.unwrap_or_else(|| default_order(n0, b));
        let w = build_witness(&seq, n0, b, n)?;
        let config = json!({
            "command": "witness",
            "sequence": a.sequence,
            "tail": seq.tail().keyword(),
            "n0": n0, "b": b, "n": n,
        });
        let rows = w
            .cells
            .iter()
            .map(|c| vec![num(c[0]), num(c[1])])
            .collect();
        let notes = vec![format!(
            "N0={} b={} n={} measure={} integral={} feasible={}",
            w.n0,
            w.b,
            w.n,
            num(w.measure),
            num(w.integral),
            w.feasible
        )];
        Report {
            config,
            table: Table { header: vec!["lo", "hi"], rows, notes },
            result: json!(w),
        }
    } else {
        let cert = uniform_integrability_certificate(&seq, &n0s, a.kappa)?;
        let config = json!({
            "command": "witness",
            "sequence": a.sequence,
            "tail": seq.tail().keyword(),
            "n0": n0s,
            "kappa": a.kappa,
        });
        let rows = cert
            .witnesses
            .iter()
            .map(|w| {
                vec![
                    w.n0.to_string(),
                    w.b.to_string(),
                    w.n.to_string(),
                    num(w.measure),
                    num(w.integral),
                    w.feasible.to_string(),
                ]
            })
            .collect();
        let notes = vec![format!(
            "certificate: passed={} min={} max={} kappa={}",
            cert.passed,
            num(cert.min_integral),
            num(cert.max_integral),
            a.kappa
        )];
        Report {
            config,
            table: Table {
                header: vec!["N0", "b", "n", "measure", "integral", "feasible"],
                rows,
                notes,
            },
            result: json!(cert),
        }
    };
    report.emit(format, a.common.out.as_ref())
}

fn identity(a: IdentityArgs) -> Result<()> {
    let seq = config::load_sequence(&a.sequence)?;
    let format = a.common.format_or(Format::Json);
    let header = vec![
        "N", "t", "lhs", "rhs_literal", "rhs_derived", "diff_literal", "diff_derived", "tolerance",
    ];
    let row = |c: &trigseries::partial_sums::IdentityCheck| {
        vec![
            c.n.to_string(),
            num(c.t),
            num(c.lhs),
            num(c.rhs_literal),
            num(c.rhs_derived),
            num(c.discrepancy_literal),
            num(c.discrepancy_derived),
            num(c.tolerance),
        ]
    };
    let report = if let (Some(n), Some(t)) = (a.n, a.t) {
        let reduced = TorusPoint::was_reduced(t);
        let check = residual_identity_check(&seq, n, t, a.j_max)?;
        let config = json!({
            "command": "identity",
            "sequence": a.sequence,
            "tail": seq.tail().keyword(),
            "n": n, "t": t, "j_max": a.j_max,
        });
        let mut notes = vec![format!(
            "matched: {}",
            check.matched.map(|v| format!("{v:?}").to_lowercase()).unwrap_or("none".into())
        )];
        if reduced {
            notes.push(format!("t = {t} canonicalized to {}", num(check.t)));
        }
        Report {
            config,
            table: Table { header, rows: vec![row(&check)], notes },
            result: json!({ "check": check, "canonicalized": reduced }),
        }
    } else {
        let range = config::parse_pair(&a.t_range)?;
        let sweep = residual_identity_sweep(&seq, a.samples, a.seed, a.n_max, range, a.j_max)?;
        let config = json!({
            "command": "identity",
            "sequence": a.sequence,
            "tail": seq.tail().keyword(),
            "samples": a.samples, "seed": a.seed, "n_max": a.n_max,
            "t_range": [range.0, range.1], "j_max": a.j_max,
        });
        let notes = vec![format!(
            "matched variant: {} (literal {}/{}, derived {}/{})",
            sweep
                .matched_variant
                .map(|v| format!("{v:?}").to_lowercase())
                .unwrap_or("none".into()),
            sweep.literal_matches,
            sweep.checks.len(),
            sweep.derived_matches,
            sweep.checks.len()
        )];
        Report {
            config,
            table: Table {
                header,
                rows: sweep.checks.iter().map(row).collect(),
                notes,
            },
            result: json!(sweep),
        }
    };
    report.emit(format, a.common.out.as_ref())
}
