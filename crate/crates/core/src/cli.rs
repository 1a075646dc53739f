//! Command-line front end. [`run`] takes argv and output streams so tests can
//! drive it in-process; the binary is a thin wrapper.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::criterion::{check_criterion, exponent_profile, scan_criterion, violations_csv};
use crate::error::{Error, Result};
use crate::exact::{g_value_with, multiple_angle_coefficients, SummationOrder};
use crate::exec::Exec;
use crate::identity::{
    decimal_powers, verify_angle_difference, verify_iteration_ratio, verify_multiple_angle,
    verify_multiple_angle_seeded, verify_sinc_limit, ResidualReport,
};
use crate::mp::{compute_pi, pi_digits_matching, read_pi_fixture, sin_int, MpReal};
use crate::rationality::{
    cf_terms_rational, convergents, local_exponent, pi_cf_terms, spike_indices_with, spikes_csv, CfExpansion,
};
use crate::series::{
    equivalence_experiment, partial_sum_with, series_csv_row, term, Checkpoint, PartialSumResult, SeriesSpec,
    SERIES_CSV_HEADER,
};

pub const FIXTURE_ENV: &str = "FLINTLAB_PI_FIXTURE";

#[derive(Parser, Debug)]
#[command(
    name = "flintlab",
    version,
    about = "Error-bounded experiments on sum 1/(n^3 sin^2 n) and related identities",
    after_help = "Exit codes: 0 ok, 1 usage, 2 precision/resource limit, 3 checkpoint mismatch.\n\
Errors are also printed to stderr as one JSON object {\"error\", \"message\", \"exit_code\"}.\n\
Decimal values carry only the digits their error bound guarantees; \"err\" gives the bound."
)]
pub struct Cli {
    /// Target precision in bits.
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u64).range(8..))]
    pub bits: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for range scans; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Known-digits file for pi (one line "3.14159..."); also read from FLINTLAB_PI_FIXTURE.
    #[arg(long, global = true)]
    pub fixture: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct SeriesArgs {
    /// Depth s of the numerator G(n)^{2s}.
    #[arg(long, default_value_t = 0)]
    pub s: u32,
    /// Power of |sin n|.
    #[arg(long, default_value_t = 2)]
    pub u: u32,
    /// Power of n (before the extra 2s).
    #[arg(long, default_value_t = 3.0)]
    pub v: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Partial sum up to k. JSON: {k,s,u,v,bits,value,err,g_source}. CSV: k,s,u,v,value,err.
    Sum {
        #[arg(long)]
        k: u64,
        #[command(flatten)]
        series: SeriesArgs,
        /// Write a checkpoint of the result here.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Continue from a checkpoint written by an earlier run.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// One summand. JSON: {n,s,u,v,value,err}.
    Term {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Exact G(n). JSON: {n,value}.
    G {
        #[arg(long)]
        n: u64,
        /// Evaluate with the outer sum over j instead of i.
        #[arg(long)]
        column_major: bool,
    },
    /// Coefficients of sin(n t)/sin t by power of cos t. JSON: {n,coefficients:[{power,coefficient}]}.
    Coeffs {
        #[arg(long)]
        n: u64,
    },
    /// Pi at the requested precision. JSON: {bits,value,err[,fixture_digits_matched]}.
    Pi,
    /// sin n for a positive integer. JSON: {n,value,err}.
    Sin {
        #[arg(long)]
        n: u64,
    },
    /// Continued fraction of pi, or of p/q with --rational. JSON: {terms,status,convergents}.
    Cf {
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// A positive rational "p/q" to expand instead of pi.
        #[arg(long)]
        rational: Option<String>,
    },
    /// Record minima of |sin n| for n <= n_max. CSV: n,abs_sin,lambda,is_convergent_numerator.
    Spikes {
        #[arg(long)]
        n_max: u64,
    },
    /// Local exponent -ln|sin n|/ln n; --profile lists 2..=n with the running maximum.
    Lambda {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        profile: bool,
    },
    /// Check G(n)^{2s} <= sin^2 n * n^(2s+2-eps) at one n.
    Criterion {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long)]
        eps: f64,
    },
    /// Scan a range for violations. CSV: n,s,epsilon,ln_lhs,ln_rhs,margin.
    /// JSON: {violations:[...],summary:{checked,violations,worst_margin_n,worst_margin}}.
    Scan {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long)]
        eps: f64,
    },
    /// Residual reports for one identity check.
    Identity {
        #[arg(value_enum)]
        kind: IdentityKind,
        #[arg(long)]
        n: Option<String>,
        /// Angle for multiple-angle; omitted means seeded random angles.
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
    /// Partial sums for s = 0..=s_max at the same k. CSV: s,value,err,delta_vs_s0.
    Equiv {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        s_max: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IdentityKind {
    MultipleAngle,
    Sinc,
    AngleDifference,
    Ratio,
}

/// Everything a subcommand prints, in all three shapes.
struct Output {
    json: Value,
    csv: String,
    text: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit { .. } | Error::Undecidable { .. } => 2,
        Error::CheckpointMismatch(_) => 3,
        _ => 1,
    }
}

fn error_object(kind: &str, message: &str, code: i32) -> String {
    json!({ "error": kind, "message": message, "exit_code": code }).to_string()
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = writeln!(err, "{}", error_object("usage", e.to_string().trim(), 1));
            return 1;
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let text = match cli.format {
                Format::Json => format!("{}\n", o.json),
                Format::Csv => o.csv,
                Format::Text => o.text,
            };
            match out.write_all(text.as_bytes()) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "{}", error_object("io", &e.to_string(), 1));
                    1
                }
            }
        }
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(err, "{}", error_object(e.kind(), &e.to_string(), code));
            code
        }
    }
}

fn spec_of(a: &SeriesArgs, bits: u64) -> SeriesSpec {
    SeriesSpec { s: a.s, u: a.u, v: a.v, bits }
}

fn mp_json(v: &MpReal) -> (String, String) {
    (v.to_decimal_guaranteed(), v.err_to_sci())
}

fn parse_real(s: &str, bits: u64) -> Result<MpReal> {
    MpReal::from_decimal(s, bits + 64)
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required for this check")))
}

fn execute(cli: &Cli) -> Result<Output> {
    let bits = cli.bits;
    let exec = Exec::from_threads(cli.threads);
    match &cli.command {
        Command::Sum { k, series, checkpoint, resume } => {
            let spec = spec_of(series, bits);
            let start = match resume {
                Some(p) => {
                    let text = std::fs::read_to_string(p)?;
                    Some(PartialSumResult::from_checkpoint(&Checkpoint::from_json(&text)?)?)
                }
                None => None,
            };
            let r = partial_sum_with(*k, &spec, start.as_ref(), exec)?;
            if let Some(p) = checkpoint {
                std::fs::write(p, r.to_checkpoint().to_json()?)?;
            }
            let (value, e) = mp_json(&r.value);
            Ok(Output {
                json: json!({"k": r.k, "s": spec.s, "u": spec.u, "v": spec.v, "bits": bits,
                             "value": value, "err": e, "g_source": r.g_source}),
                csv: format!("{SERIES_CSV_HEADER}\n{}\n", series_csv_row(&r)),
                text: format!("S({}) = {value} ± {e}\n", r.k),
            })
        }
        Command::Term { n, series } => {
            let spec = spec_of(series, bits);
            let t = term(*n, &spec)?;
            let (value, e) = mp_json(&t);
            Ok(Output {
                json: json!({"n": n, "s": spec.s, "u": spec.u, "v": spec.v, "value": value, "err": e}),
                csv: format!("n,s,u,v,value,err\n{n},{},{},{},{value},{e}\n", spec.s, spec.u, spec.v),
                text: format!("term({n}) = {value} ± {e}\n"),
            })
        }
        Command::G { n, column_major } => {
            let order = if *column_major { SummationOrder::ColumnMajor } else { SummationOrder::RowMajor };
            let g = g_value_with(*n, order)?;
            let v = g.value.to_str_radix(10);
            Ok(Output { json: json!({"n": n, "value": v}), csv: format!("n,value\n{n},{v}\n"), text: format!("{v}\n") })
        }
        Command::Coeffs { n } => {
            let c = multiple_angle_coefficients(*n)?;
            let rows: Vec<Value> =
                c.iter().map(|(p, v)| json!({"power": p, "coefficient": v.to_str_radix(10)})).collect();
            let mut csv = String::from("power,coefficient\n");
            let mut text = String::new();
            for (p, v) in &c {
                csv.push_str(&format!("{p},{v}\n"));
                text.push_str(&format!("cos^{p}: {v}\n"));
            }
            Ok(Output { json: json!({"n": n, "coefficients": rows}), csv, text })
        }
        Command::Pi => {
            let pi = compute_pi(bits)?;
            let (value, e) = mp_json(&pi);
            let fixture = cli.fixture.clone().or_else(|| std::env::var_os(FIXTURE_ENV).map(PathBuf::from));
            let matched = match fixture {
                Some(p) => Some(pi_digits_matching(&pi, &read_pi_fixture(&std::fs::read_to_string(p)?)?)),
                None => None,
            };
            let mut json = json!({"bits": bits, "value": value, "err": e});
            let mut text = format!("{value} ± {e}\n");
            if let Some(m) = matched {
                json["fixture_digits_matched"] = json!(m);
                text.push_str(&format!("fixture digits matched: {m}\n"));
            }
            let csv = format!("bits,value,err,fixture_digits_matched\n{bits},{value},{e},{}\n",
                matched.map(|m| m.to_string()).unwrap_or_default());
            Ok(Output { json, csv, text })
        }
        Command::Sin { n } => {
            let s = sin_int(*n, bits)?;
            let (value, e) = mp_json(&s);
            Ok(Output {
                json: json!({"n": n, "value": value, "err": e}),
                csv: format!("n,value,err\n{n},{value},{e}\n"),
                text: format!("sin({n}) = {value} ± {e}\n"),
            })
        }
        Command::Cf { count, rational } => {
            let cf = match rational {
                Some(r) => {
                    let (p, q) = parse_rational(r)?;
                    cf_terms_rational(&p, &q, *count)?
                }
                None => pi_cf_terms(*count, bits)?,
            };
            cf_output(&cf)
        }
        Command::Spikes { n_max } => {
            let recs = spike_indices_with(*n_max, bits, exec)?;
            let csv = spikes_csv(&recs)?;
            let text = recs
                .iter()
                .map(|r| match r.lambda {
                    Some(l) => format!("{}  |sin| = {}  lambda = {l:.6}\n", r.n, r.abs_sin.to_decimal_guaranteed()),
                    None => format!("{}  |sin| = {}\n", r.n, r.abs_sin.to_decimal_guaranteed()),
                })
                .collect();
            Ok(Output { json: serde_json::to_value(&recs)?, csv, text })
        }
        Command::Lambda { n, profile } => {
            if *profile {
                let rows = exponent_profile(*n, bits)?;
                let mut csv = String::from("n,lambda,running_max\n");
                let mut text = String::new();
                for r in &rows {
                    csv.push_str(&format!("{},{},{}\n", r.n, r.lambda, r.running_max));
                    text.push_str(&format!("{} {:.9} {:.9}\n", r.n, r.lambda, r.running_max));
                }
                Ok(Output { json: serde_json::to_value(&rows)?, csv, text })
            } else {
                let l = local_exponent(*n, bits)?;
                Ok(Output { json: json!({"n": n, "lambda": l}), csv: format!("n,lambda\n{n},{l}\n"), text: format!("{l}\n") })
            }
        }
        Command::Criterion { n, s, eps } => {
            let r = check_criterion(*n, *s, *eps, bits)?;
            let verdict = if r.satisfied { "satisfied" } else { "violated" };
            Ok(Output {
                json: serde_json::to_value(&r)?,
                csv: format!("n,s,epsilon,ln_lhs,ln_rhs,margin,satisfied\n{},{},{},{},{},{},{}\n",
                    r.n, r.s, r.epsilon, r.ln_lhs, r.ln_rhs, r.margin, u8::from(r.satisfied)),
                text: format!("n={} s={} eps={}: {verdict} (margin {:.6})\n", r.n, r.s, r.epsilon, r.margin),
            })
        }
        Command::Scan { from, to, s, eps } => {
            let r = scan_criterion(*from, *to, *s, *eps, bits, exec)?;
            let mut text = String::new();
            for v in &r.violations {
                text.push_str(&format!("violation n={} margin={:.6}\n", v.n, v.margin));
            }
            text.push_str(&format!("checked {} violations {}\n", r.summary.checked, r.summary.violations));
            Ok(Output { json: serde_json::to_value(&r)?, csv: violations_csv(&r.violations), text })
        }
        Command::Identity { kind, n, theta, a, k, s, seed, count } => {
            let reports = identity_reports(*kind, bits, exec, n, theta, a, *k, *s, *seed, *count)?;
            identity_output(&reports)
        }
        Command::Equiv { k, s_max } => {
            let rows = equivalence_experiment(*k, *s_max, bits, exec)?;
            let mut csv = String::from("s,value,err,delta_vs_s0\n");
            let mut text = String::new();
            for r in &rows {
                let (v, e) = mp_json(&r.value);
                let d = r.delta_vs_s0.to_decimal_exact();
                csv.push_str(&format!("{},{v},{e},{d}\n", r.s));
                text.push_str(&format!("s={}  S = {v} ± {e}  delta = {}\n", r.s, r.delta_vs_s0.to_f64()));
            }
            Ok(Output { json: json!({"k": k, "rows": serde_json::to_value(&rows)?}), csv, text })
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn identity_reports(
    kind: IdentityKind,
    bits: u64,
    exec: Exec,
    n: &Option<String>,
    theta: &Option<String>,
    a: &Option<String>,
    k: Option<u64>,
    s: Option<u32>,
    seed: u64,
    count: usize,
) -> Result<Vec<ResidualReport>> {
    match kind {
        IdentityKind::MultipleAngle => {
            let n: u64 = need(n.as_deref(), "n")?
                .parse()
                .map_err(|_| Error::InvalidArgument("--n must be a positive integer".into()))?;
            match theta {
                Some(t) => Ok(vec![verify_multiple_angle(n, &parse_real(t, bits)?.midpoint(), bits)?]),
                None => verify_multiple_angle_seeded(n, seed, count, bits),
            }
        }
        IdentityKind::Sinc => {
            let pts = verify_sinc_limit(&decimal_powers(count as u32, bits)?, bits)?;
            Ok(pts
                .into_iter()
                .map(|p| {
                    // the bound |sin m / m - 1| <= m^2/6 plus rounding
                    let bound = p.m.mul_exact(&p.m).div_u64_at(6, -(bits as i64) - 8).upper_abs();
                    let mut tol = bound;
                    tol.add_err_pow2(-(bits as i64));
                    let tol = tol.upper_abs();
                    let params = vec![("m".to_string(), p.m.to_decimal_exact()), ("bits".to_string(), bits.to_string())];
                    let pass = p.distance.upper_abs().cmp_mid(&tol) != std::cmp::Ordering::Greater;
                    ResidualReport { description: "sinc limit".into(), parameters: params, residual: p.distance, tolerance: tol, pass }
                })
                .collect())
        }
        IdentityKind::AngleDifference => {
            let n = parse_real(need(n.as_deref(), "n")?, bits)?.midpoint();
            let a = parse_real(need(a.as_deref(), "a")?, bits)?.midpoint();
            Ok(vec![verify_angle_difference(&n, &a, bits)?])
        }
        IdentityKind::Ratio => Ok(vec![verify_iteration_ratio(need(k, "k")?, need(s, "s")?, bits, exec)?]),
    }
}

fn identity_output(reports: &[ResidualReport]) -> Result<Output> {
    let mut csv = String::from("description,residual,tolerance,pass\n");
    let mut text = String::new();
    for r in reports {
        let params: Vec<String> = r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        csv.push_str(&format!("{},{},{},{}\n", r.description, r.residual.upper_abs_to_sci(), r.tolerance.upper_abs_to_sci(), u8::from(r.pass)));
        text.push_str(&format!(
            "{} [{}]: residual <= {} tolerance {} {}\n",
            r.description,
            params.join(" "),
            r.residual.upper_abs_to_sci(),
            r.tolerance.upper_abs_to_sci(),
            if r.pass { "PASS" } else { "FAIL" }
        ));
    }
    Ok(Output { json: serde_json::to_value(reports)?, csv, text })
}

fn parse_rational(s: &str) -> Result<(BigInt, BigInt)> {
    let bad = || Error::Parse(format!("expected a rational p/q, got '{s}'"));
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p = BigInt::parse_bytes(p.trim().as_bytes(), 10).ok_or_else(bad)?;
    let q = BigInt::parse_bytes(q.trim().as_bytes(), 10).ok_or_else(bad)?;
    Ok((p, q))
}

fn cf_output(cf: &CfExpansion) -> Result<Output> {
    let conv = if cf.terms.is_empty() { Vec::new() } else { convergents(&cf.terms)? };
    let terms: Vec<String> = cf.terms.iter().map(|t| t.to_str_radix(10)).collect();
    let mut json = serde_json::to_value(cf)?;
    json["convergents"] = serde_json::to_value(&conv)?;
    let mut csv = String::from("index,term,p,q\n");
    for (i, c) in conv.iter().enumerate() {
        csv.push_str(&format!("{i},{},{},{}\n", cf.terms[i], c.p, c.q));
    }
    let status = serde_json::to_value(cf.status)?;
    let text = format!("[{}] ({})\n", terms.join(", "), status.as_str().unwrap_or_default());
    Ok(Output { json, csv, text })
}
