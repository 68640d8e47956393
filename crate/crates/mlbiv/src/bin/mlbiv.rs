//! Command-line surface: point evaluation, grid sweeps, and the self-test
//! battery.
//!
//! Exit codes: 0 success, 1 argument/usage errors (and unwritable output),
//! 2 evaluation failures. The default tolerance comes from --tol, falling
//! back to the MLBIV_TOL environment variable, then 1e-9.

use std::collections::HashMap;
use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use mlbiv::evaluate::{evaluate, MethodChoice};
use mlbiv::selftest;
use mlbiv::sweep::{self, fmt_sig17, SweepSpec};
use mlbiv::Params;

#[derive(Parser)]
#[command(
    name = "mlbiv",
    about = "Evaluate the two-variable Mittag-Leffler type function by series, \
             Hankel-contour, or asymptotic methods",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate at a single point and print: value_re value_im method err_est
    Eval(EvalArgs),
    /// Evaluate over a grid and emit CSV or JSON records
    Sweep(SweepArgs),
    /// Run the built-in verification battery
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    mu_re: f64,
    #[arg(long, default_value_t = 0.0)]
    mu_im: f64,

    /// Re(x); Cartesian form, incompatible with --x-mod/--x-arg
    #[arg(long, conflicts_with_all = ["x_mod", "x_arg"])]
    x_re: Option<f64>,
    #[arg(long, requires = "x_re")]
    x_im: Option<f64>,
    /// |x|; polar form, requires --x-arg
    #[arg(long, requires = "x_arg")]
    x_mod: Option<f64>,
    /// arg(x) in radians
    #[arg(long)]
    x_arg: Option<f64>,

    #[arg(long, conflicts_with_all = ["y_mod", "y_arg"])]
    y_re: Option<f64>,
    #[arg(long, requires = "y_re")]
    y_im: Option<f64>,
    #[arg(long, requires = "y_arg")]
    y_mod: Option<f64>,
    #[arg(long)]
    y_arg: Option<f64>,

    /// auto | series | contour | asym
    #[arg(long, default_value = "auto")]
    method: String,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Flat key=value configuration file; explicit flags override its entries
    #[arg(long)]
    config: Option<String>,

    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    mu_re: Option<f64>,
    #[arg(long)]
    mu_im: Option<f64>,

    #[arg(long)]
    x_start: Option<f64>,
    #[arg(long)]
    x_stop: Option<f64>,
    #[arg(long)]
    x_count: Option<usize>,
    /// Fixed arg(x): makes the x axis a ray swept in modulus
    #[arg(long)]
    x_arg: Option<f64>,

    #[arg(long)]
    y_start: Option<f64>,
    #[arg(long)]
    y_stop: Option<f64>,
    #[arg(long)]
    y_count: Option<usize>,
    #[arg(long)]
    y_arg: Option<f64>,

    /// csv | json
    #[arg(long)]
    format: Option<String>,
    /// Output path; stdout when omitted
    #[arg(long)]
    output: Option<String>,
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Run only the named suite (gamma | identities | contour | crossval | decay)
    #[arg(long)]
    suite: Option<String>,
}

fn default_tol(flag: Option<f64>) -> f64 {
    flag.or_else(|| {
        std::env::var("MLBIV_TOL")
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
    })
    .unwrap_or(1e-9)
}

fn complex_arg(
    what: &str,
    re: Option<f64>,
    im: Option<f64>,
    modulus: Option<f64>,
    arg: Option<f64>,
) -> Result<Complex64, String> {
    match (re, modulus) {
        (Some(re), None) => Ok(Complex64::new(re, im.unwrap_or(0.0))),
        (None, Some(m)) => Ok(Complex64::from_polar(m, arg.unwrap_or(0.0))),
        (None, None) => Err(format!(
            "missing {what}: give --{what}-re [--{what}-im] or --{what}-mod --{what}-arg"
        )),
        (Some(_), Some(_)) => Err(format!("{what} given in both Cartesian and polar form")),
    }
}

fn cmd_eval(args: EvalArgs) -> u8 {
    let x = match complex_arg("x", args.x_re, args.x_im, args.x_mod, args.x_arg) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let y = match complex_arg("y", args.y_re, args.y_im, args.y_mod, args.y_arg) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let method: MethodChoice = match args.method.parse() {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let params = match Params::new(args.alpha, args.beta, Complex64::new(args.mu_re, args.mu_im)) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let tol = default_tol(args.tol);
    match evaluate(x, y, &params, method, tol) {
        Ok(res) => {
            let mut line = format!(
                "{} {} {} {:.3e}",
                fmt_sig17(res.value.re),
                fmt_sig17(res.value.im),
                res.method,
                res.error_estimate
            );
            if !res.warnings.is_empty() {
                let warns: Vec<String> = res.warnings.iter().map(|w| w.to_string()).collect();
                line.push_str(&format!(" warnings: {}", warns.join("; ")));
            }
            println!("{line}");
            0
        }
        Err(e) => {
            eprintln!("evaluation failed: {e}");
            2
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> u8 {
    let mut map: HashMap<String, String> = HashMap::new();
    if let Some(path) = &args.config {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read config '{path}': {e}");
                return 1;
            }
        };
        map = match sweep::parse_config(&text) {
            Ok(m) => m,
            Err(e) => {
                eprintln!("error: {e}");
                return 1;
            }
        };
    }
    let put_f = |k: &str, v: Option<f64>, map: &mut HashMap<String, String>| {
        if let Some(v) = v {
            map.insert(k.to_string(), v.to_string());
        }
    };
    put_f("alpha", args.alpha, &mut map);
    put_f("beta", args.beta, &mut map);
    put_f("mu_re", args.mu_re, &mut map);
    put_f("mu_im", args.mu_im, &mut map);
    put_f("x_start", args.x_start, &mut map);
    put_f("x_stop", args.x_stop, &mut map);
    put_f("x_arg", args.x_arg, &mut map);
    put_f("y_start", args.y_start, &mut map);
    put_f("y_stop", args.y_stop, &mut map);
    put_f("y_arg", args.y_arg, &mut map);
    put_f("tol", args.tol, &mut map);
    if let Some(c) = args.x_count {
        map.insert("x_count".into(), c.to_string());
    }
    if let Some(c) = args.y_count {
        map.insert("y_count".into(), c.to_string());
    }
    if let Some(m) = &args.method {
        map.insert("method".into(), m.clone());
    }
    if let Some(f) = &args.format {
        map.insert("format".into(), f.clone());
    }

    let spec: SweepSpec = match sweep::spec_from_map(&map, default_tol(None)) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };

    let outcome = match &args.output {
        Some(path) => match std::fs::File::create(path) {
            Ok(mut f) => sweep::run_sweep(&spec, &mut f),
            Err(e) => {
                eprintln!("error: cannot write '{path}': {e}");
                return 1;
            }
        },
        None => {
            let stdout = std::io::stdout();
            let mut lock: std::io::StdoutLock<'_> = stdout.lock();
            let r = sweep::run_sweep(&spec, &mut lock);
            let _ = lock.flush();
            r
        }
    };
    match outcome {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn cmd_selftest(args: SelftestArgs) -> u8 {
    match selftest::run(args.suite.as_deref()) {
        Ok(results) => {
            let mut all_ok = true;
            for r in &results {
                let status = if r.passed { "pass" } else { "FAIL" };
                println!("{:<11} {status}  {}", r.name, r.detail);
                all_ok &= r.passed;
            }
            if all_ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                ExitCode::SUCCESS
            } else {
                eprint!("{e}");
                ExitCode::from(1)
            };
        }
    };
    let code = match cli.cmd {
        Cmd::Eval(args) => cmd_eval(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Selftest(args) => cmd_selftest(args),
    };
    ExitCode::from(code)
}
