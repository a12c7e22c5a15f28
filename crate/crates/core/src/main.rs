//! Command-line front end: run the check registry, print dimension and
//! homology tables, and export kernels/operators in the text formats.

use bgg_poisson::forms::kernel_to_text;
use bgg_poisson::kernels::poisson_kernel;
use bgg_poisson::linalg::SparseMat;
use bgg_poisson::model::Model;
use bgg_poisson::ops;
use bgg_poisson::rat::{fmt_short, parse_q};
use bgg_poisson::spaces::{operator_sparse_mat, Space};
use bgg_poisson::verify::{self, RunConfig, Status};
use bgg_poisson::chains;
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bgg-poisson",
    version,
    about = "Exact rational verification of boundary-to-interior integral kernels on the conformal sphere model"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the check registry and emit a report (exit code 1 if any check fails).
    Verify {
        /// Boundary sphere dimension (2..=6).
        #[arg(long)]
        n: usize,
        /// Restrict degree-parameterized checks to this degree.
        #[arg(long)]
        k: Option<i64>,
        /// Weight samples for the weighted-Laplacian checks (rationals; repeatable).
        #[arg(long = "lambda")]
        lambda: Vec<String>,
        /// Comma-separated list of check ids to run (default: all).
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Record real elapsed milliseconds per check (reports stop being byte-identical).
        #[arg(long)]
        timings: bool,
        /// Write the report to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the block dimension table for operator-valued forms.
    Dims {
        #[arg(long)]
        n: usize,
    },
    /// Print the chain homology table (dimensions, ranks, homology, representatives).
    Homology {
        #[arg(long)]
        n: usize,
    },
    /// Export the degree-k kernel in the exact text format.
    DumpKernel {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export an operator restricted to one bidegree block as a sparse matrix.
    ExportOperator {
        #[arg(long)]
        n: usize,
        /// One of: d_k, d_k_twisted, d_p, delta_k, p_codiff, star_k, laplace_k, lie_e, lie_e_star.
        #[arg(long)]
        name: String,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the matrix realization of the algebra basis.
    DumpAlgebra {
        #[arg(long)]
        n: usize,
    },
}

fn check_n(n: usize) -> Result<(), String> {
    if (2..=6).contains(&n) {
        Ok(())
    } else {
        Err(format!("n must be between 2 and 6 (got {n})"))
    }
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("writing {}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| format!("writing stdout: {e}"))
        }
    }
}

fn render_text(report: &verify::Report) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "# bgg-poisson {} | n={} | {}\n",
        report.version, report.n, report.normalization
    ));
    for c in &report.checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        let mut line = format!("{tag} {}", c.id);
        line.push_str(&format!(" n={}", c.params.n));
        if let Some(k) = c.params.k {
            line.push_str(&format!(" k={k}"));
        }
        if let Some(l) = &c.params.lambda {
            line.push_str(&format!(" lambda={l}"));
        }
        if let (Some(p), Some(q)) = (c.params.p, c.params.q) {
            line.push_str(&format!(" (p,q)=({p},{q})"));
        }
        if let Some(w) = &c.witness {
            line.push_str(&format!(" | {}", w.note));
            if c.status == Status::Fail {
                if let Some(m) = &w.monomial {
                    line.push_str(&format!(" at {m}"));
                }
                if let (Some(r), Some(col)) = (w.row, w.col) {
                    line.push_str(&format!(" [{r},{col}]"));
                }
                line.push_str(&format!(": lhs={} rhs={}", w.lhs, w.rhs));
            }
        }
        if c.ms > 0 {
            line.push_str(&format!(" ({} ms)", c.ms));
        }
        s.push_str(&line);
        s.push('\n');
    }
    s.push_str(&format!(
        "# summary: pass={} fail={} skipped={}\n",
        report.summary.pass, report.summary.fail, report.summary.skipped
    ));
    s
}

fn binom(a: usize, b: usize) -> usize {
    if b > a {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..b {
        r = r * (a - i) / (i + 1);
    }
    r
}

fn run() -> Result<u8, String> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Verify {
            n,
            k,
            lambda,
            checks,
            format,
            timings,
            out,
        } => {
            check_n(n)?;
            let mut cfg = RunConfig {
                k_filter: k,
                check_filter: checks,
                timings,
                ..RunConfig::default()
            };
            if !lambda.is_empty() {
                let mut samples = Vec::new();
                for l in &lambda {
                    samples.push(parse_q(l).map_err(|e| format!("--lambda {l}: {e}"))?);
                }
                cfg.lambda_samples = samples;
            }
            if let Some(filter) = &cfg.check_filter {
                for id in filter {
                    if verify::find_check(id).is_none() {
                        let known: Vec<&str> = verify::registry().iter().map(|c| c.id).collect();
                        return Err(format!("unknown check id {id}; known: {}", known.join(", ")));
                    }
                }
            }
            let report = verify::run_all(n, &cfg);
            let body = match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report)
                        .map_err(|e| format!("serializing report: {e}"))?;
                    s.push('\n');
                    s
                }
                Format::Text => render_text(&report),
            };
            emit(&out, &body)?;
            Ok(if report.summary.fail == 0 { 0 } else { 1 })
        }
        Cmd::Dims { n } => {
            check_n(n)?;
            let model = Model::new(n);
            let d = model.d;
            let mut body = String::new();
            body.push_str(&format!(
                "# operator-valued form blocks at n={n} (value space dim {d}, block dim = C(n+1,p)*C(n,q)*d^2)\n"
            ));
            body.push_str("p q monomials dim\n");
            let mut total = 0usize;
            for p in 0..=n + 1 {
                for q in 0..=n {
                    let monos = binom(n + 1, p) * binom(n, q);
                    let dim = monos * d * d;
                    total += dim;
                    body.push_str(&format!("{p} {q} {monos} {dim}\n"));
                }
            }
            body.push_str(&format!("total {total}\n"));
            body.push_str(&format!("\n# chain blocks (dim = C(n,k)*d)\n"));
            body.push_str("k dim homology\n");
            for k in 0..=n {
                body.push_str(&format!(
                    "{k} {} {}\n",
                    binom(n, k) * d,
                    chains::expected_h_dim(n, k)
                ));
            }
            emit(&None, &body)?;
            Ok(0)
        }
        Cmd::Homology { n } => {
            check_n(n)?;
            let model = Model::new(n);
            let h = chains::homology(&model);
            let mut body = String::new();
            body.push_str(&format!("# chain homology at n={n}\n"));
            body.push_str("k dim rank(boundary_k) homology expected representatives\n");
            for k in 0..=n {
                body.push_str(&format!(
                    "{k} {} {} {} {} {}\n",
                    h.dims[k],
                    h.ranks[k],
                    h.hdims[k],
                    chains::expected_h_dim(n, k),
                    h.representatives[k].len()
                ));
            }
            emit(&None, &body)?;
            Ok(0)
        }
        Cmd::DumpKernel { n, k, out } => {
            check_n(n)?;
            if k > n {
                return Err(format!("k must be between 0 and n={n} (got {k})"));
            }
            let model = Model::new(n);
            let phi = poisson_kernel(&model, k);
            let body = kernel_to_text(&phi, n, model.d);
            emit(&out, &body)?;
            Ok(0)
        }
        Cmd::ExportOperator { n, name, p, q, out } => {
            check_n(n)?;
            if p as usize > n + 1 || q as usize > n {
                return Err(format!("block (p,q)=({p},{q}) out of range for n={n}"));
            }
            let model = Model::new(n);
            type OpFn<'a> = Box<dyn Fn(&bgg_poisson::forms::Kernel) -> bgg_poisson::forms::Kernel + 'a>;
            let (tp, tq, op): (i64, i64, OpFn) = match name.as_str() {
                "d_k" => (p as i64 + 1, q as i64, Box::new(|e| ops::d_k(&model, e, false))),
                "d_k_twisted" => (p as i64 + 1, q as i64, Box::new(|e| ops::d_k(&model, e, true))),
                "d_p" => (p as i64, q as i64 + 1, Box::new(|e| ops::d_p(&model, e))),
                "delta_k" => (p as i64 - 1, q as i64, Box::new(|e| ops::delta_k(&model, e))),
                "p_codiff" => (p as i64, q as i64 - 1, Box::new(|e| ops::p_codiff(&model, e))),
                "star_k" => (
                    (n as i64 + 1) - p as i64,
                    n as i64 - q as i64,
                    Box::new(|e| ops::star_k(&model, e)),
                ),
                "laplace_k" => (p as i64, q as i64, Box::new(|e| ops::laplace_k(&model, e))),
                "lie_e" => (p as i64, q as i64, Box::new(|e| ops::lie_e(&model, e, false))),
                "lie_e_star" => (p as i64, q as i64, Box::new(|e| ops::lie_e_star(&model, e))),
                other => {
                    return Err(format!(
                        "unknown operator {other}; known: d_k, d_k_twisted, d_p, delta_k, p_codiff, star_k, laplace_k, lie_e, lie_e_star"
                    ))
                }
            };
            let space_in = Space::end_v(&model, p, q);
            let space_out = if tp < 0 || tq < 0 || tp as usize > n + 1 || tq as usize > n {
                // operator leaves the valid range, so its image is zero;
                // represent the target as the empty block
                Space::end_v(&model, (n + 2) as u32, 0)
            } else {
                Space::end_v(&model, tp as u32, tq as u32)
            };
            let sm: SparseMat = operator_sparse_mat(&space_in, &space_out, |e| op(e));
            let mut body = format!(
                "# operator {name} at n={n} from block ({p},{q}) [dim {}] to block ({},{}) [dim {}]\n",
                space_in.dim,
                tp.max(0),
                tq.max(0),
                space_out.dim
            );
            body.push_str("# entries are `row col value`, 0-based, value in lowest terms\n");
            body.push_str(&sm.to_text());
            emit(&out, &body)?;
            Ok(0)
        }
        Cmd::DumpAlgebra { n } => {
            check_n(n)?;
            let model = Model::new(n);
            let a = &model.alg;
            let mut body = String::new();
            body.push_str(&format!(
                "# matrix realization at n={n}: d={} ambient, {} basis elements\n",
                model.d,
                a.dim()
            ));
            body.push_str(&format!("# metric diagonal: {}\n", {
                let parts: Vec<String> = model.gdiag.iter().map(fmt_short).collect();
                parts.join(" ")
            }));
            for (i, x) in a.g_basis.iter().enumerate() {
                body.push_str(&format!("{} grade={}\n", a.g_labels[i], a.grade(i)));
                for r in 0..model.d {
                    let row: Vec<String> = (0..model.d).map(|c| fmt_short(x.get(r, c))).collect();
                    body.push_str(&format!("  {}\n", row.join(" ")));
                }
            }
            emit(&None, &body)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
