//! Command-line surface: `wavespec analyze|table|threshold|profile|spectrum`.
//!
//! Exit codes: 0 stable, 10 unstable, 20 indeterminate, 30 no-threshold,
//! 2 usage, 1 internal.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::fs;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::hill::compute_ybar;
use crate::profiles::{make_profile, omega_to_k, WaveFamily};
use crate::render::{canonical_json, format_sig};
use crate::spectral::verify_inertial;
use crate::stability::{analyze, AnalyzeOptions, StabilityReport};
use crate::threshold::{find_k0, ThresholdOptions};

#[derive(Parser)]
#[command(
    name = "wavespec",
    version,
    about = "Spectral stability of periodic traveling waves (critical KdV and Gardner) \
             via the Hamiltonian-Krein index"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full stability analysis of a single wave.
    Analyze(AnalyzeArgs),
    /// Row-by-row index tables over a list of moduli or a preset.
    Table(TableArgs),
    /// Locate the modulus k0 where I(k) changes sign.
    Threshold(ThresholdArgs),
    /// Sample the wave profile (or sweep I over k) for external plotting.
    Profile(ProfileArgs),
    /// Smallest Hill-operator eigenvalues and the inertial index.
    Spectrum(SpectrumArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Md,
}

#[derive(Args)]
struct WaveSelect {
    /// Wave family: ckdv-dnoidal | ckdv-cnoidal | gardner
    #[arg(long, value_parser = parse_family)]
    family: WaveFamily,
    /// Period length L > 0
    #[arg(long = "L")]
    l: f64,
    /// Elliptic modulus in (0,1); exactly one of --k / --omega
    #[arg(long)]
    k: Option<f64>,
    /// Wave speed; resolved to k through the monotone speed map
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
}

#[derive(Args)]
struct OutputOpts {
    #[arg(long, value_enum, default_value = "json")]
    format: OutFormat,
    /// Write to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GridOpts {
    /// IVP grid size (default from WAVESPEC_GRID_N or 2048)
    #[arg(long = "grid-n")]
    grid_n: Option<usize>,
    /// Fourier mode cutoff of the spectral check
    #[arg(long, default_value_t = 64)]
    modes: usize,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    wave: WaveSelect,
    #[command(flatten)]
    grid: GridOpts,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct TableArgs {
    /// Wave family (implied by --preset when omitted)
    #[arg(long, value_parser = parse_family)]
    family: Option<WaveFamily>,
    #[arg(long = "L")]
    l: f64,
    /// Comma-separated modulus list, e.g. "0.1,0.5,0.9"
    #[arg(long = "k-list", conflicts_with = "preset")]
    k_list: Option<String>,
    /// Published row preset: dnoidal-tables | cnoidal-tables
    #[arg(long)]
    preset: Option<String>,
    #[command(flatten)]
    grid: GridOpts,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct ThresholdArgs {
    /// Wave family: ckdv-dnoidal | ckdv-cnoidal | gardner
    #[arg(long, value_parser = parse_family)]
    family: WaveFamily,
    #[arg(long = "L")]
    l: f64,
    #[arg(long = "grid-n")]
    grid_n: Option<usize>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    wave: WaveSelect,
    /// Number of uniform samples over one period
    #[arg(long, default_value_t = 2048)]
    samples: usize,
    /// Sweep I(k) instead: LO:HI:STEP
    #[arg(long = "sweep-k")]
    sweep_k: Option<String>,
    #[arg(long = "grid-n")]
    grid_n: Option<usize>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    wave: WaveSelect,
    /// How many of the smallest eigenvalues to print
    #[arg(long, default_value_t = 5)]
    count: usize,
    #[command(flatten)]
    grid: GridOpts,
    #[command(flatten)]
    output: OutputOpts,
}

fn parse_family(s: &str) -> std::result::Result<WaveFamily, String> {
    match s {
        "ckdv-dnoidal" => Ok(WaveFamily::CkdvDnoidal),
        "ckdv-cnoidal" => Ok(WaveFamily::CkdvCnoidal),
        "gardner" => Ok(WaveFamily::GardnerCnoidal),
        other => Err(format!(
            "unknown family '{other}' (expected ckdv-dnoidal, ckdv-cnoidal or gardner)"
        )),
    }
}

fn default_grid() -> usize {
    std::env::var("WAVESPEC_GRID_N")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(2048)
}

impl WaveSelect {
    /// Enforce the "exactly one of k/omega" contract and resolve to a modulus.
    fn resolve_k(&self) -> Result<f64> {
        match (self.k, self.omega) {
            (Some(k), None) => Ok(k),
            (None, Some(w)) => Ok(omega_to_k(self.family, self.l, w)?.k()),
            (Some(_), Some(_)) => Err(Error::Usage(
                "provide exactly one of --k and --omega, not both".into(),
            )),
            (None, None) => Err(Error::Usage(
                "provide exactly one of --k and --omega".into(),
            )),
        }
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("wavespec: {e}");
            match e {
                Error::Usage(_) => 2,
                Error::NoThreshold(_) => 30,
                _ => 1,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Table(args) => cmd_table(args),
        Command::Threshold(args) => cmd_threshold(args),
        Command::Profile(args) => cmd_profile(args),
        Command::Spectrum(args) => cmd_spectrum(args),
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn analyze_opts(grid: &GridOpts) -> AnalyzeOptions {
    AnalyzeOptions {
        grid_n: grid.grid_n.unwrap_or_else(default_grid),
        modes: grid.modes,
    }
}

/// JSON object for a full report (canonical key order applied at emission).
pub fn report_to_value(r: &StabilityReport) -> Value {
    let d = match &r.d {
        Some(d) => json!({
            "matrix": [[d.entries[0][0], d.entries[0][1]], [d.entries[1][0], d.entries[1][1]]],
            "det_raw": d.det_raw,
            "det_prefactored": d.det_prefactored,
            "det_schur": d.schur,
            "eigenvalues": [d.eigenvalues[0], d.eigenvalues[1]],
        }),
        None => Value::Null,
    };
    let checks: Value = r
        .crosschecks
        .iter()
        .map(|(k, v)| (k.clone(), json!(v)))
        .collect::<serde_json::Map<String, Value>>()
        .into();
    json!({
        "family": r.family.name(),
        "L": r.l,
        "k": r.k,
        "omega": r.omega,
        "A": r.a_const,
        "theta": r.theta,
        "I": r.i_value,
        "lphi_phi": r.inner.lphi_phi,
        "lphi_one": r.inner.lphi_one,
        "D": d,
        "n_L": r.n_l,
        "n_I": r.n_i,
        "n_D": r.n_d,
        "K_Ham": r.k_ham.map(Value::from).unwrap_or(Value::Null),
        "verdict": r.verdict.as_str(),
        "reason": r.reason.clone().map(Value::from).unwrap_or(Value::Null),
        "crosschecks": checks,
        "spectral": {
            "n_neg": r.spectral.index.n_neg,
            "n_zero": r.spectral.index.n_zero,
            "eigenvalues": r.spectral.index.eigensample,
            "kernel_correlation": r.spectral.kernel_correlation,
            "modes": r.spectral.n_modes,
        },
        "grid_n": r.grid_n,
    })
}

fn report_csv(r: &StabilityReport) -> String {
    let mut s = String::from("key,value\n");
    let v = report_to_value(r);
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&String> = obj.keys().collect();
    keys.sort();
    for key in keys {
        match &obj[key.as_str()] {
            Value::Object(_) | Value::Array(_) => continue,
            Value::Number(n) if n.is_f64() => {
                s.push_str(&format!("{key},{}\n", format_sig(n.as_f64().unwrap())))
            }
            other => s.push_str(&format!("{key},{}\n", other.to_string().trim_matches('"'))),
        }
    }
    s
}

fn report_md(r: &StabilityReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "# {} wave, L = {}, k = {}\n\n",
        r.family.name(),
        format_sig(r.l),
        format_sig(r.k)
    ));
    s.push_str(&format!(
        "- omega = {}, A = {}\n- theta = {}\n- I = <L^-1 1,1> = {}\n",
        format_sig(r.omega),
        format_sig(r.a_const),
        format_sig(r.theta),
        format_sig(r.i_value)
    ));
    if let Some(d) = &r.d {
        s.push_str(&format!("- det(D) = {}\n", format_sig(d.schur)));
    }
    if let Some(k) = r.k_ham {
        s.push_str(&format!(
            "- n(L) = {}, n(I) = {}, n(D) = {} => K_Ham = {k}\n",
            r.n_l, r.n_i, r.n_d
        ));
    }
    s.push_str(&format!("- verdict: **{}**\n", r.verdict.as_str()));
    if let Some(reason) = &r.reason {
        s.push_str(&format!("- reason: {reason}\n"));
    }
    s.push_str(&format!(
        "- spectral check: n_neg = {}, n_zero = {}, kernel correlation = {}\n",
        r.spectral.index.n_neg,
        r.spectral.index.n_zero,
        format_sig(r.spectral.kernel_correlation)
    ));
    s
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<i32> {
    let k = args.wave.resolve_k()?;
    let report = analyze(args.wave.family, args.wave.l, k, &analyze_opts(&args.grid))?;
    let content = match args.output.format {
        OutFormat::Json => canonical_json(&report_to_value(&report)),
        OutFormat::Csv => report_csv(&report),
        OutFormat::Md => report_md(&report),
    };
    emit(&args.output.out, &content)?;
    Ok(report.verdict.exit_code())
}

/// The published tables' k rows.
fn preset_rows(preset: &str, l: f64) -> Result<(WaveFamily, Vec<f64>)> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let is = |a: f64, b: f64| (a - b).abs() < 1e-6;
    match preset {
        "dnoidal-tables" => Ok((
            WaveFamily::CkdvDnoidal,
            vec![0.1, 0.3, 0.5, 0.7, 0.9, 0.9999],
        )),
        "cnoidal-tables" => {
            let rows = if is(l, two_pi) {
                vec![0.0001, 0.1, 0.3, 0.5, 0.7, 0.739, 0.746, 0.9, 0.9999]
            } else if is(l, 20.0) {
                vec![0.0001, 0.1, 0.3, 0.5, 0.7, 0.744, 0.7449, 0.9, 0.9999]
            } else if is(l, 50.0) {
                vec![0.0001, 0.1, 0.3, 0.5, 0.7, 0.74521, 0.74523, 0.9, 0.9999]
            } else if is(l, 100.0) {
                vec![0.0001, 0.1, 0.3, 0.5, 0.7, 0.74528, 0.74529, 0.9, 0.9999]
            } else {
                return Err(Error::Usage(format!(
                    "preset cnoidal-tables supports L in {{2pi, 20, 50, 100}}, got {l}"
                )));
            };
            Ok((WaveFamily::CkdvCnoidal, rows))
        }
        other => Err(Error::Usage(format!(
            "unknown preset '{other}' (expected dnoidal-tables or cnoidal-tables)"
        ))),
    }
}

fn table_row_value(r: &StabilityReport) -> Value {
    let (schur, det_raw, det_pref) = match &r.d {
        Some(d) => (
            json!(d.schur),
            json!(d.det_raw),
            json!(d.det_prefactored),
        ),
        None => (Value::Null, Value::Null, Value::Null),
    };
    json!({
        "k": r.k,
        "omega": r.omega,
        "theta": r.theta,
        "I": r.i_value,
        "detD": schur,
        "det_raw": det_raw,
        "det_prefactored": det_pref,
        "lphi_phi": r.inner.lphi_phi,
        "K_Ham": r.k_ham.map(Value::from).unwrap_or(Value::Null),
        "verdict": r.verdict.as_str(),
    })
}

const TABLE_COLUMNS: [&str; 10] = [
    "k",
    "omega",
    "theta",
    "I",
    "detD",
    "det_raw",
    "det_prefactored",
    "lphi_phi",
    "K_Ham",
    "verdict",
];

fn cell_text(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => format_sig(n.as_f64().unwrap()),
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn rows_csv(rows: &[Value]) -> String {
    let mut s = TABLE_COLUMNS.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = TABLE_COLUMNS
            .iter()
            .map(|c| cell_text(&row[*c]))
            .collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

fn rows_md(rows: &[Value]) -> String {
    let mut s = format!("| {} |\n", TABLE_COLUMNS.join(" | "));
    s.push_str(&format!("|{}\n", "---|".repeat(TABLE_COLUMNS.len())));
    for row in rows {
        let cells: Vec<String> = TABLE_COLUMNS
            .iter()
            .map(|c| cell_text(&row[*c]))
            .collect();
        s.push_str(&format!("| {} |\n", cells.join(" | ")));
    }
    s
}

fn cmd_table(args: TableArgs) -> Result<i32> {
    let (family, ks) = match (&args.preset, &args.k_list) {
        (Some(p), None) => {
            let (fam, rows) = preset_rows(p, args.l)?;
            if let Some(flag_fam) = args.family {
                if flag_fam != fam {
                    return Err(Error::Usage(format!(
                        "--family {} conflicts with preset '{p}'",
                        flag_fam.name()
                    )));
                }
            }
            (fam, rows)
        }
        (None, Some(list)) => {
            let family = args.family.ok_or_else(|| {
                Error::Usage("--family is required with --k-list".into())
            })?;
            let ks = list
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Usage(format!("bad modulus '{t}' in --k-list")))
                })
                .collect::<Result<Vec<f64>>>()?;
            if ks.is_empty() {
                return Err(Error::Usage("--k-list is empty".into()));
            }
            (family, ks)
        }
        _ => {
            return Err(Error::Usage(
                "provide exactly one of --preset and --k-list".into(),
            ))
        }
    };
    let opts = analyze_opts(&args.grid);
    // fan out rows over the worker pool; collect preserves row order
    let reports: Vec<StabilityReport> = ks
        .par_iter()
        .map(|&k| analyze(family, args.l, k, &opts))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Value> = reports.iter().map(table_row_value).collect();
    let content = match args.output.format {
        OutFormat::Json => canonical_json(&json!({
            "family": family.name(),
            "L": args.l,
            "rows": rows,
        })),
        OutFormat::Csv => rows_csv(&rows),
        OutFormat::Md => rows_md(&rows),
    };
    emit(&args.output.out, &content)?;
    Ok(0)
}

fn cmd_threshold(args: ThresholdArgs) -> Result<i32> {
    let opts = ThresholdOptions {
        grid_n: args.grid_n.unwrap_or_else(default_grid),
        ..ThresholdOptions::default()
    };
    let r = find_k0(args.family, args.l, &opts)?;
    let v = json!({
        "family": r.family.name(),
        "L": r.l,
        "k0": r.k0,
        "omega_at_k0": r.omega_at_k0,
        "bracket": [r.bracket.0, r.bracket.1],
        "iterations": r.iterations,
        "sign_changes": r.sign_changes,
    });
    let content = match args.output.format {
        OutFormat::Json => canonical_json(&v),
        OutFormat::Csv => format!(
            "family,L,k0,omega_at_k0,bracket_lo,bracket_hi,iterations,sign_changes\n{},{},{},{},{},{},{},{}\n",
            r.family.name()
            , format_sig(r.l), format_sig(r.k0), format_sig(r.omega_at_k0),
            format_sig(r.bracket.0), format_sig(r.bracket.1), r.iterations, r.sign_changes
        ),
        OutFormat::Md => format!(
            "k0 = {} (omega = {}) for {} at L = {}\n",
            format_sig(r.k0),
            format_sig(r.omega_at_k0),
            r.family.name(),
            format_sig(r.l)
        ),
    };
    emit(&args.output.out, &content)?;
    Ok(0)
}

fn parse_sweep(s: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Usage(format!("--sweep-k expects LO:HI:STEP, got '{s}'")));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::Usage(format!("bad number '{t}' in --sweep-k")))
        })
        .collect::<Result<Vec<f64>>>()?;
    let (lo, hi, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0 && lo < hi) {
        return Err(Error::Usage("--sweep-k requires LO < HI and STEP > 0".into()));
    }
    Ok((lo, hi, step))
}

fn cmd_profile(args: ProfileArgs) -> Result<i32> {
    let grid_n = args.grid_n.unwrap_or_else(default_grid);
    if let Some(sweep) = &args.sweep_k {
        let (lo, hi, step) = parse_sweep(sweep)?;
        let family = args.wave.family;
        let l = args.wave.l;
        let mut ks = Vec::new();
        let mut k = lo;
        while k <= hi + 1e-12 {
            ks.push(k);
            k += step;
        }
        let rows: Vec<(f64, f64, f64, f64)> = ks
            .par_iter()
            .map(|&k| -> Result<(f64, f64, f64, f64)> {
                let p = make_profile(family, l, k)?;
                let (ybar, theta) = compute_ybar(&p, grid_n)?;
                let eta = crate::hill::compute_eta(&p, &ybar)?;
                let i = crate::hill::periodic_quadrature(&eta.xs, &eta.y)?;
                Ok((k, p.omega, theta, i))
            })
            .collect::<Result<Vec<_>>>()?;
        let content = match args.output.format {
            OutFormat::Json => {
                let arr: Vec<Value> = rows
                    .iter()
                    .map(|(k, w, th, i)| json!({"k": k, "omega": w, "theta": th, "I": i}))
                    .collect();
                canonical_json(&json!({"family": family.name(), "L": l, "sweep": arr}))
            }
            _ => {
                let mut s = String::from("k,omega,theta,I\n");
                for (k, w, th, i) in &rows {
                    s.push_str(&format!(
                        "{},{},{},{}\n",
                        format_sig(*k),
                        format_sig(*w),
                        format_sig(*th),
                        format_sig(*i)
                    ));
                }
                s
            }
        };
        emit(&args.output.out, &content)?;
        return Ok(0);
    }

    let k = args.wave.resolve_k()?;
    let p = make_profile(args.wave.family, args.wave.l, k)?;
    if args.samples < 1 {
        return Err(Error::Usage("--samples must be at least 1".into()));
    }
    let content = match args.output.format {
        OutFormat::Json => {
            let rows: Vec<Value> = (0..=args.samples)
                .map(|i| {
                    let x = p.l * i as f64 / args.samples as f64;
                    let (v, dv, ddv) = p.eval(x);
                    json!({
                        "x": x, "phi": v, "phi_prime": dv,
                        "phi_double_prime": ddv, "q": p.hill_potential(x)
                    })
                })
                .collect();
            canonical_json(&json!({
                "family": p.family.name(), "L": p.l, "k": p.k(),
                "omega": p.omega, "A": p.a_const, "rows": rows
            }))
        }
        _ => {
            let mut s = String::from("x,phi,phi_prime,phi_double_prime,q\n");
            for i in 0..=args.samples {
                let x = p.l * i as f64 / args.samples as f64;
                let (v, dv, ddv) = p.eval(x);
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    format_sig(x),
                    format_sig(v),
                    format_sig(dv),
                    format_sig(ddv),
                    format_sig(p.hill_potential(x))
                ));
            }
            s
        }
    };
    emit(&args.output.out, &content)?;
    Ok(0)
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<i32> {
    let k = args.wave.resolve_k()?;
    let p = make_profile(args.wave.family, args.wave.l, k)?;
    let grid_n = args.grid.grid_n.unwrap_or_else(default_grid);
    let (_, theta) = compute_ybar(&p, grid_n)?;
    let summary = verify_inertial(&p, theta, args.grid.modes)?;
    // re-diagonalize for the requested eigenvalue count
    let m = crate::spectral::assemble(&p, summary.n_modes)?;
    let evals = crate::spectral::eigen_symmetric(&m)?;
    let count = args.count.min(evals.len());
    let v = json!({
        "family": p.family.name(),
        "L": p.l,
        "k": p.k(),
        "omega": p.omega,
        "theta": theta,
        "modes": summary.n_modes,
        "n_neg": summary.index.n_neg,
        "n_zero": summary.index.n_zero,
        "kernel_correlation": summary.kernel_correlation,
        "eigenvalues": evals[..count].to_vec(),
    });
    let content = match args.output.format {
        OutFormat::Json => canonical_json(&v),
        OutFormat::Csv => {
            let mut s = String::from("index,eigenvalue\n");
            for (i, e) in evals[..count].iter().enumerate() {
                s.push_str(&format!("{i},{}\n", format_sig(*e)));
            }
            s
        }
        OutFormat::Md => {
            let list: Vec<String> = evals[..count].iter().map(|e| format_sig(*e)).collect();
            format!(
                "inertial index (n, z) = ({}, {}); smallest eigenvalues: {}\n",
                summary.index.n_neg,
                summary.index.n_zero,
                list.join(", ")
            )
        }
    };
    emit(&args.output.out, &content)?;
    Ok(0)
}
