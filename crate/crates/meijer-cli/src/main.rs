//! `meijer`: evaluation, verification suites, moment and transform tables,
//! zero reports and sign-stabilization search.
//!
//! Exit codes: 0 ok, 1 usage, 2 domain error, 3 verification failure.

mod input;
mod table;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};
use meijer::ghat::eval_ghat;
use meijer::hypergeom::{pfq_with, HypergeomSpec, SeriesOptions};
use meijer::moments::{hyper_transform_with, mixed_moment, mixed_moment_by_quadrature, transform_by_quadrature, KernelSpec};
use meijer::norlund::eval_g0;
use meijer::positivity::{find_zeros_thm42, stabilization_n};
use meijer::quad::QuadOptions;
use meijer::regularized::{g1_action_with, gb1_action, RegFunctionalSpec};
use meijer::verify::{run_single_case, run_suite, Suite, SuiteOptions, SuiteReport};
use meijer::{EvalResult, GHatSpec};

use input::{parse_complex, parse_complex_list, parse_kernel, parse_real_list, parse_test_function, resolve_params, ResolvedParams, UsageError};
use table::{Cell, Format, Table};

#[derive(Parser, Debug)]
#[command(name = "meijer", version, about = "Meijer–Nørlund functions, their fractional primitives and regularized functionals")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Global {
    /// Series tolerance
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Term cap for series and expansions
    #[arg(long, global = true, default_value_t = 100_000)]
    max_terms: usize,
    /// Quadrature tolerance
    #[arg(long, global = true, default_value_t = 1e-11)]
    quad_tol: f64,
    /// Seed for the random verification suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    output: Format,
    /// JSON file {"a": [[re, im], …], "b": [[re, im], …], "n": int}
    #[arg(long, global = true, value_name = "PATH")]
    params_file: Option<PathBuf>,
    /// Treat unmet hypotheses and loose error estimates as domain errors
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Args, Debug, Clone)]
struct Params {
    /// Comma-separated `a` (entries `re` or `re+imj`)
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Comma-separated `b`
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate one quantity
    #[command(subcommand)]
    Eval(EvalCmd),
    /// Run identity-residual suites
    Verify {
        /// Suite name, or `all`
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        cases: Option<usize>,
        /// Replace every per-check tolerance
        #[arg(long)]
        tolerance: Option<f64>,
        /// Run only this case index
        #[arg(long)]
        case: Option<usize>,
    },
    /// Mixed moments ∫ t^k (1-t)^r Ĝ_n(t) dt / Γ(a)
    Moments {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        #[arg(long, default_value_t = 0)]
        r_max: usize,
        /// Add quadrature reference columns
        #[arg(long)]
        quad: bool,
    },
    /// Transform table over a list of z
    Transform {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        n: Option<usize>,
        /// laplace, stieltjes:SIGMA, bessel:NU or hyp:C1,C2/D1,D2
        #[arg(long, default_value = "laplace")]
        kernel: String,
        /// Comma-separated z values
        #[arg(long, allow_hyphen_values = true, default_value = "0.3,1,3")]
        z: String,
        /// Add quadrature reference columns
        #[arg(long)]
        quad: bool,
    },
    /// Zeros of the Bessel-type function pF_{p+1}(â; b; -z²/4) - cos z
    Zeros {
        #[arg(long, allow_hyphen_values = true)]
        a_hat: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 3.0 * PI)]
        z_max: f64,
    },
    /// Smallest n from which Ĝ_n keeps one sign on (0, 1)
    Stabilize {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
}

#[derive(Subcommand, Debug)]
enum EvalCmd {
    /// G^{p,0}_{p,p}(t | b-1; a-1)
    G0 {
        #[command(flatten)]
        params: Params,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    /// Ĝ_n(t)/Γ(a)
    Ghat {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    /// Regularized functional applied to a test function
    G1 {
        #[command(flatten)]
        params: Params,
        /// Order of the regularization (automatic when omitted)
        #[arg(long)]
        n: Option<usize>,
        /// poly:C0,C1,…  exp:C  cos:Z  or a kernel such as laplace:Z
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
    },
    /// Bessel-type regularized functional applied to a test function
    Gb1 {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
    },
    /// Hypergeometric transform ∫ Ĝ_n(t) K(zt) dt / Γ(a)
    Transform {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        n: Option<usize>,
        /// laplace:Z, stieltjes:SIGMA,Z, bessel:NU,Z or hyp:C1,C2/D1,D2/Z
        #[arg(long, allow_hyphen_values = true)]
        kernel: String,
    },
    /// uF_s(upper; lower; z)
    Pfq {
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        upper: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        lower: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
    Verification,
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<meijer::Error> for Failure {
    fn from(e: meijer::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

const EVAL_COLUMNS: [&str; 5] = ["value_re", "value_im", "abs_err", "method", "count"];

fn eval_row(r: &EvalResult) -> Vec<Cell> {
    vec![r.value.re.into(), r.value.im.into(), r.abs_err.into(), r.method.as_str().into(), r.count.into()]
}

struct Ctx<'a> {
    g: &'a Global,
}

impl Ctx<'_> {
    fn params(&self, p: &Params, n: Option<usize>) -> Result<ResolvedParams, UsageError> {
        resolve_params(p.a.as_deref(), p.b.as_deref(), n, self.g.params_file.as_deref())
    }

    fn quad(&self) -> QuadOptions {
        QuadOptions::with_tol(self.g.quad_tol)
    }

    fn emit_eval(&self, r: EvalResult) -> Outcome {
        Table::record(&EVAL_COLUMNS, eval_row(&r)).emit(self.g.output);
        if self.g.strict && !(r.abs_err <= self.g.tol * r.value.norm().max(1.0)) {
            return Err(Failure::Domain(format!("error estimate {:e} exceeds --tol {:e}", r.abs_err, self.g.tol)));
        }
        Ok(())
    }

    fn ghat_spec(&self, p: &Params, n: Option<usize>) -> Result<GHatSpec, Failure> {
        let rp = self.params(p, n)?;
        let n = rp.require_n()?;
        Ok(GHatSpec::new(rp.vectors()?, n))
    }

    fn eval(&self, cmd: &EvalCmd) -> Outcome {
        match cmd {
            EvalCmd::G0 { params, t } => {
                let rp = self.params(params, None)?;
                self.emit_eval(eval_g0(&rp.vectors()?, *t, self.g.max_terms)?)
            }
            EvalCmd::Ghat { params, n, t } => self.emit_eval(eval_ghat(&self.ghat_spec(params, *n)?, *t)?),
            EvalCmd::G1 { params, n, phi } | EvalCmd::Gb1 { params, n, phi } => {
                let rp = self.params(params, *n)?;
                let spec = RegFunctionalSpec::new(rp.vectors()?, rp.n)?;
                let phi = parse_test_function(phi)?;
                let r = if matches!(cmd, EvalCmd::G1 { .. }) {
                    g1_action_with(&spec, phi.as_ref(), &self.quad())?
                } else {
                    gb1_action(&spec, phi.as_ref())?
                };
                self.emit_eval(r)
            }
            EvalCmd::Transform { params, n, kernel } => {
                let spec = self.ghat_spec(params, *n)?;
                let kernel = parse_kernel(kernel)?;
                self.emit_eval(hyper_transform_with(&spec, &kernel, self.g.tol, self.g.max_terms)?)
            }
            EvalCmd::Pfq { upper, lower, z } => {
                let spec = HypergeomSpec::new(parse_complex_list(upper)?, parse_complex_list(lower)?, parse_complex(z)?);
                let opts = SeriesOptions { tol: self.g.tol.min(SeriesOptions::default().tol), max_terms: self.g.max_terms };
                self.emit_eval(pfq_with(&spec, &opts)?)
            }
        }
    }

    fn verify(&self, suite: &str, cases: Option<usize>, tolerance: Option<f64>, case: Option<usize>) -> Outcome {
        let suites: Vec<Suite> = if suite == "all" {
            Suite::ALL.to_vec()
        } else {
            vec![suite.parse().map_err(|e: meijer::Error| Failure::Usage(e.to_string()))?]
        };
        if let Some(t) = tolerance {
            positive("--tolerance", t)?;
        }
        let opts = SuiteOptions { seed: self.g.seed, cases, tol_override: tolerance, quad_tol: self.g.quad_tol, ..SuiteOptions::default() };
        let reports: Vec<SuiteReport> = suites
            .iter()
            .map(|&s| match case {
                Some(c) => SuiteReport { suite: s, seed: opts.seed, rows: run_single_case(s, c, &opts) },
                None => run_suite(s, &opts),
            })
            .collect();
        let mut t = Table::new(&["suite", "case", "check", "params", "residual", "tol", "pass", "note"]);
        for row in reports.iter().flat_map(|r| &r.rows) {
            t.push(vec![
                row.suite.into(),
                row.case.into(),
                row.check.into(),
                row.params.clone().into(),
                row.residual.into(),
                row.tol.into(),
                row.pass.into(),
                row.note.clone().unwrap_or_default().into(),
            ]);
        }
        let total = t.rows.len();
        let failed = reports.iter().flat_map(|r| &r.rows).filter(|r| !r.pass).count();
        let max_residual = reports.iter().map(SuiteReport::max_residual).fold(0.0, f64::max);
        let ok = failed == 0 && total > 0;
        let t = t
            .meta("seed", Cell::I(self.g.seed as i64))
            .meta("checks", total)
            .meta("failed", failed)
            .meta("max_residual", max_residual)
            .meta("pass", ok);
        t.emit(self.g.output);
        if self.g.output == Format::Json {
            eprintln!("{} checks, {failed} failed, max residual {max_residual:.3e}", total);
        }
        if ok {
            Ok(())
        } else {
            Err(Failure::Verification)
        }
    }

    fn moments(&self, params: &Params, n: Option<usize>, k_max: usize, r_max: usize, quad: bool) -> Outcome {
        let spec = self.ghat_spec(params, n)?;
        let mut cols = vec!["k", "r", "value_re", "value_im"];
        if quad {
            cols.extend(["quad_re", "quad_im", "residual"]);
        }
        let mut t = Table::new(&cols);
        for k in 0..=k_max {
            for r in 0..=r_max {
                let v = mixed_moment(&spec, k, r)?;
                let mut row: Vec<Cell> = vec![k.into(), r.into(), v.re.into(), v.im.into()];
                if quad {
                    let q = mixed_moment_by_quadrature(&spec, k, r, &self.quad())?.value;
                    row.extend([q.re.into(), q.im.into(), ((q - v).norm() / v.norm().max(1.0)).into()]);
                }
                t.push(row);
            }
        }
        t.meta("n", spec.n).emit(self.g.output);
        Ok(())
    }

    fn transform(&self, params: &Params, n: Option<usize>, kernel: &str, zs: &str, quad: bool) -> Outcome {
        let spec = self.ghat_spec(params, n)?;
        let mut cols = vec!["z_re", "z_im", "value_re", "value_im", "abs_err"];
        if quad {
            cols.extend(["quad_re", "quad_im", "residual"]);
        }
        let mut t = Table::new(&cols);
        for z in parse_complex_list(zs)? {
            // the kernel family with z appended, e.g. "stieltjes:0.5" + ",z"
            let spec_str = match kernel.split_once(':') {
                Some((name, rest)) if name == "hyp" => format!("{name}:{rest}/{}", fmt_complex(z)),
                Some((name, rest)) => format!("{name}:{rest},{}", fmt_complex(z)),
                None => format!("{kernel}:{}", fmt_complex(z)),
            };
            let k: KernelSpec = parse_kernel(&spec_str)?;
            let r = hyper_transform_with(&spec, &k, self.g.tol, self.g.max_terms)?;
            let mut row: Vec<Cell> = vec![z.re.into(), z.im.into(), r.value.re.into(), r.value.im.into(), r.abs_err.into()];
            if quad {
                let q = transform_by_quadrature(&spec, &k, &self.quad())?.value;
                row.extend([q.re.into(), q.im.into(), ((q - r.value).norm() / r.value.norm().max(1.0)).into()]);
            }
            t.push(row);
        }
        t.meta("n", spec.n).emit(self.g.output);
        Ok(())
    }

    fn zeros(&self, a_hat: &str, b: &str, z_max: f64) -> Outcome {
        let (a_hat, b) = (parse_real_list(a_hat)?, parse_real_list(b)?);
        positive("--z-max", z_max)?;
        let scan = find_zeros_thm42(&a_hat, &b, z_max)?;
        if !scan.hypotheses_hold {
            let note = scan.hypothesis_note.clone().unwrap_or_default();
            if self.g.strict {
                return Err(Failure::Domain(format!("hypotheses fail: {note}")));
            }
            eprintln!("warning: hypotheses fail: {note}");
        }
        let mut t = Table::new(&["interval_lo", "interval_hi", "root", "fprime", "simple"]);
        for z in &scan.zeros {
            t.push(vec![z.interval.0.into(), z.interval.1.into(), z.root.into(), z.derivative_at_root.into(), z.simple.into()]);
        }
        t.meta("hypotheses_hold", scan.hypotheses_hold)
            .meta("extra_zeros", scan.extra_zeros())
            .meta("scan_lo", scan.scan_lo)
            .meta("scan_hi", scan.scan_hi)
            .meta("step", scan.step)
            .emit(self.g.output);
        Ok(())
    }

    fn stabilize(&self, params: &Params, grid: usize) -> Outcome {
        let rp = self.params(params, None)?;
        rp.real()?;
        let s = stabilization_n(&rp.vectors()?, grid)?;
        let eta = s.eta.iter().map(u8::to_string).collect::<Vec<_>>().join(" ");
        Table::record(&["n", "eta", "grid", "min_value"], vec![s.n.into(), eta.into(), s.grid.into(), s.min_value.into()])
            .emit(self.g.output);
        Ok(())
    }
}

fn fmt_complex(z: num_complex::Complex64) -> String {
    if z.im == 0.0 {
        format!("{:e}", z.re)
    } else {
        format!("{:e}{:+e}j", z.re, z.im)
    }
}

fn positive(flag: &str, x: f64) -> Result<(), Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{flag} must be positive, got {x}")))
    }
}

fn run(cli: &Cli) -> Outcome {
    positive("--tol", cli.global.tol)?;
    positive("--quad-tol", cli.global.quad_tol)?;
    if cli.global.max_terms == 0 {
        return Err(Failure::Usage("--max-terms must be positive".into()));
    }
    let ctx = Ctx { g: &cli.global };
    match &cli.cmd {
        Cmd::Eval(e) => ctx.eval(e),
        Cmd::Verify { suite, cases, tolerance, case } => ctx.verify(suite, *cases, *tolerance, *case),
        Cmd::Moments { params, n, k_max, r_max, quad } => ctx.moments(params, *n, *k_max, *r_max, *quad),
        Cmd::Transform { params, n, kernel, z, quad } => ctx.transform(params, *n, kernel, z, *quad),
        Cmd::Zeros { a_hat, b, z_max } => ctx.zeros(a_hat, b, *z_max),
        Cmd::Stabilize { params, grid } => ctx.stabilize(params, *grid),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n");
            eprintln!("{}", subcommand_usage(&cli));
            ExitCode::from(1)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => ExitCode::from(3),
    }
}

fn subcommand_usage(cli: &Cli) -> String {
    let mut cmd = Cli::command();
    let path: Vec<&str> = match &cli.cmd {
        Cmd::Eval(e) => vec![
            "eval",
            match e {
                EvalCmd::G0 { .. } => "g0",
                EvalCmd::Ghat { .. } => "ghat",
                EvalCmd::G1 { .. } => "g1",
                EvalCmd::Gb1 { .. } => "gb1",
                EvalCmd::Transform { .. } => "transform",
                EvalCmd::Pfq { .. } => "pfq",
            },
        ],
        Cmd::Verify { .. } => vec!["verify"],
        Cmd::Moments { .. } => vec!["moments"],
        Cmd::Transform { .. } => vec!["transform"],
        Cmd::Zeros { .. } => vec!["zeros"],
        Cmd::Stabilize { .. } => vec!["stabilize"],
    };
    cmd.build();
    fn usage_at(cmd: &mut clap::Command, path: &[&str]) -> String {
        match path.split_first() {
            Some((name, rest)) => match cmd.find_subcommand_mut(name) {
                Some(sub) => usage_at(sub, rest),
                None => cmd.render_usage().to_string(),
            },
            None => cmd.render_usage().to_string(),
        }
    }
    usage_at(&mut cmd, &path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
