//! Command-line frontend: propagator evaluation, single-point moment
//! reports, interaction-length sweeps, poling-period design, and the
//! library's self-verification suite.
//!
//! Exit status is 0 on success, 1 on domain or validation errors, and
//! 2 on usage errors. Every error path prints one line to standard
//! error prefixed `error:`. Identical invocations produce byte-identical
//! output.

use std::f64::consts::PI;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polsqueeze::{
    design_processes, effective_couplings, mean_photon_numbers_engine, parse_plan,
    photon_number_variance, propagator, run_sweep, run_verify, simultaneity_check, stokes_report,
    symplectic_residual, to_csv, CouplingRatios, DispersionTable, InputState, OutputArm,
    OutputSelection, QpmSolution, SweepPlan, SweepRow, VerifyConfig,
};

/// Polarization statistics of a three-mode parametric cascade:
/// evaluate the propagator, report photon and Stokes moments, sweep
/// the interaction length, design poling periods, and cross-check the
/// closed forms against their oracles.
#[derive(Parser)]
#[command(name = "polsqueeze", version)]
struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the 3x3 propagator matrix and its symplectic residual.
    Propagate(OperatingPoint),

    /// Print photon numbers and the Stokes report at one length.
    Moments {
        #[command(flatten)]
        point: OperatingPoint,
        #[command(flatten)]
        state: StateOpts,
    },

    /// Evaluate a plan over an interaction-length grid.
    Sweep(SweepArgs),

    /// Design poling periods for the four cascaded processes.
    Qpm(QpmArgs),

    /// Run the oracle cross-check suite; nonzero exit on any failure.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct OperatingPoint {
    /// Coupling ratio k1 = |gamma3/gamma1|.
    #[arg(long, allow_hyphen_values = true)]
    k1: f64,

    /// Coupling ratio k2 = |gamma2/gamma1|.
    #[arg(long, allow_hyphen_values = true)]
    k2: f64,

    /// Normalized interaction length.
    #[arg(long, allow_hyphen_values = true)]
    zeta: f64,
}

#[derive(Args)]
struct StateOpts {
    /// Mean photon number of the ordinary fundamental input.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    n1o: f64,

    /// Mean photon number of the extraordinary fundamental input.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    n1e: f64,

    /// Input phase sum in radians; accepts the tokens pi and -pi.
    #[arg(long, default_value = "0", value_parser = phase_value, allow_hyphen_values = true)]
    phase_sum: f64,

    /// Input phase difference in radians; accepts the tokens pi and -pi.
    #[arg(long, default_value = "0", value_parser = phase_value, allow_hyphen_values = true)]
    phase_diff: f64,
}

#[derive(Args)]
struct SweepArgs {
    /// Plan file with one `key = value` pair per line; keys mirror the
    /// inline options and exclude them.
    #[arg(
        long,
        value_name = "FILE",
        conflicts_with_all = [
            "k1", "k2", "mag_sq_1o", "mag_sq_1e", "phase_sum", "phase_diff",
            "zeta_start", "zeta_end", "zeta_steps", "outputs",
        ]
    )]
    plan: Option<PathBuf>,

    /// Coupling ratio k1 = |gamma3/gamma1|.
    #[arg(long, required_unless_present = "plan", allow_hyphen_values = true)]
    k1: Option<f64>,

    /// Coupling ratio k2 = |gamma2/gamma1|.
    #[arg(long, required_unless_present = "plan", allow_hyphen_values = true)]
    k2: Option<f64>,

    /// Mean photon number of the ordinary fundamental input.
    #[arg(long, required_unless_present = "plan", allow_hyphen_values = true)]
    mag_sq_1o: Option<f64>,

    /// Mean photon number of the extraordinary fundamental input.
    #[arg(long, required_unless_present = "plan", allow_hyphen_values = true)]
    mag_sq_1e: Option<f64>,

    /// Input phase sum in radians; accepts the tokens pi and -pi.
    #[arg(long, default_value = "0", value_parser = phase_value, allow_hyphen_values = true)]
    phase_sum: f64,

    /// Input phase difference in radians; accepts the tokens pi and -pi.
    #[arg(long, default_value = "0", value_parser = phase_value, allow_hyphen_values = true)]
    phase_diff: f64,

    /// First grid point of the interaction length.
    #[arg(long, required_unless_present = "plan", allow_hyphen_values = true)]
    zeta_start: Option<f64>,

    /// Last grid point of the interaction length.
    #[arg(long, required_unless_present = "plan", allow_hyphen_values = true)]
    zeta_end: Option<f64>,

    /// Number of grid points.
    #[arg(long, required_unless_present = "plan")]
    zeta_steps: Option<u32>,

    /// Comma-separated subset of photon_means, photon_variances,
    /// stokes; all three when omitted.
    #[arg(long, value_parser = outputs_value)]
    outputs: Option<OutputSelection>,

    /// Report format; csv requires the photon_means and stokes groups.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Aligned full-precision columns.
    Table,
    /// The fixed column contract zeta,N1o,...,S3.
    Csv,
}

#[derive(Args)]
struct QpmArgs {
    /// Dispersion table file: `wavelength_um n_ordinary n_extraordinary`
    /// per line, wavelengths strictly increasing.
    #[arg(long, value_name = "FILE")]
    table: PathBuf,

    /// Fundamental wavelength in micrometers.
    #[arg(long, allow_hyphen_values = true)]
    wavelength: f64,

    /// Poling order magnitude for the first process (odd).
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    order1: i64,

    /// Poling order magnitude for the second process (odd).
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    order2: i64,

    /// Poling order magnitude for the third process (odd); 9 lets one
    /// grating serve all four processes at the 9:1 coherence ratio.
    #[arg(long, default_value_t = 9, allow_hyphen_values = true)]
    order3: i64,

    /// Poling order magnitude for the fourth process (odd).
    #[arg(long, default_value_t = 9, allow_hyphen_values = true)]
    order4: i64,

    /// Raw coupling strength of the first process before poling.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    xi1: f64,

    /// Raw coupling strength of the second process before poling.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    xi2: f64,

    /// Raw coupling strength of the third process before poling.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    xi3: f64,

    /// Raw coupling strength of the fourth process before poling.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    xi4: f64,

    /// Relative tolerance of the simultaneity conditions.
    #[arg(long, default_value_t = 1e-3)]
    rel_tol: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Points per axis of the deterministic grids.
    #[arg(long, default_value_t = VerifyConfig::default().grid)]
    grid: u32,

    /// Step count of the reference integrator.
    #[arg(long, default_value_t = VerifyConfig::default().oracle_steps)]
    oracle_steps: u32,

    /// Sample count of each randomized cross-check.
    #[arg(long, default_value_t = VerifyConfig::default().samples)]
    samples: u32,

    /// Seed of the random sample streams.
    #[arg(long, default_value_t = VerifyConfig::default().seed)]
    seed: u64,
}

fn phase_value(text: &str) -> Result<f64, String> {
    match text {
        "pi" => Ok(PI),
        "-pi" => Ok(-PI),
        _ => text
            .parse::<f64>()
            .map_err(|e| format!("invalid phase '{text}': {e}")),
    }
}

fn outputs_value(text: &str) -> Result<OutputSelection, String> {
    let mut selection = OutputSelection {
        photon_means: false,
        photon_variances: false,
        stokes: false,
    };
    for item in text.split(',') {
        match item.trim() {
            "photon_means" => selection.photon_means = true,
            "photon_variances" => selection.photon_variances = true,
            "stokes" => selection.stokes = true,
            other => return Err(format!("unknown output group '{other}'")),
        }
    }
    Ok(selection)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => return report_parse_outcome(&err),
    };
    match run(cli.command, cli.output.as_deref()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

/// Help and version requests print in full and exit 0; every other
/// parse failure prints its first line as the single diagnostic and
/// exits 2.
fn report_parse_outcome(err: &clap::Error) -> ExitCode {
    use clap::error::ErrorKind;
    if matches!(
        err.kind(),
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
    ) {
        print!("{err}");
        return ExitCode::SUCCESS;
    }
    let rendered = err.to_string();
    let first = rendered.lines().next().unwrap_or("invalid usage");
    let message = first.strip_prefix("error: ").unwrap_or(first);
    eprintln!("error: {message}");
    ExitCode::from(2)
}

type CliResult<T> = Result<T, String>;

fn run(command: Command, output: Option<&Path>) -> CliResult<ExitCode> {
    let (text, code) = match command {
        Command::Propagate(point) => (render_propagate(&point)?, ExitCode::SUCCESS),
        Command::Moments { point, state } => (render_moments(&point, &state)?, ExitCode::SUCCESS),
        Command::Sweep(args) => (render_sweep(&args)?, ExitCode::SUCCESS),
        Command::Qpm(args) => (render_qpm(&args)?, ExitCode::SUCCESS),
        Command::Verify(args) => {
            let (text, passed) = render_verify(&args)?;
            (text, if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    };
    emit(output, &text)?;
    Ok(code)
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| format!("cannot write standard output: {e}"))
        }
    }
}

/// Full-precision scientific form, 17 significant digits.
fn num(value: f64) -> String {
    format!("{value:.16e}")
}

/// Sign-carrying column cell, right-aligned for tables.
fn cell(value: f64) -> String {
    format!("{:>24}", format!("{value:+.16e}"))
}

fn finish(lines: Vec<String>) -> String {
    let mut text = lines.join("\n");
    text.push('\n');
    text
}

fn render_propagate(point: &OperatingPoint) -> CliResult<String> {
    let ratios = CouplingRatios::new(point.k1, point.k2).map_err(|e| e.to_string())?;
    let p = propagator(&ratios, point.zeta).map_err(|e| e.to_string())?;
    let mut lines = vec![
        format!("k1 = {}", point.k1),
        format!("k2 = {}", point.k2),
        format!("zeta = {}", point.zeta),
        "lambda =".to_string(),
    ];
    for row in p.entries() {
        lines.push(format!("  {} {} {}", cell(row[0]), cell(row[1]), cell(row[2])));
    }
    lines.push(format!("symplectic residual = {}", num(symplectic_residual(&p))));
    Ok(finish(lines))
}

fn render_moments(point: &OperatingPoint, state: &StateOpts) -> CliResult<String> {
    let ratios = CouplingRatios::new(point.k1, point.k2).map_err(|e| e.to_string())?;
    let p = propagator(&ratios, point.zeta).map_err(|e| e.to_string())?;
    let input = InputState::from_mean_photons(
        state.n1o,
        state.n1e,
        state.phase_sum,
        state.phase_diff,
    )
    .map_err(|e| e.to_string())?;
    let means = mean_photon_numbers_engine(&p, &input);
    let variances = [
        photon_number_variance(&p, &input, OutputArm::Ordinary),
        photon_number_variance(&p, &input, OutputArm::Extraordinary),
    ];
    let stokes = stokes_report(&p, &input).map_err(|e| e.to_string())?;

    let mut lines = vec![
        format!("k1 = {}", point.k1),
        format!("k2 = {}", point.k2),
        format!("zeta = {}", point.zeta),
        format!("n1o = {}", state.n1o),
        format!("n1e = {}", state.n1e),
        format!("phase_sum = {}", state.phase_sum),
        format!("phase_diff = {}", state.phase_diff),
        format!("N1o = {}", num(means[0])),
        format!("N1e = {}", num(means[1])),
        format!("N3e = {}", num(means[2])),
        format!("var_N1o = {}", num(variances[0])),
        format!("var_N1e = {}", num(variances[1])),
    ];
    for j in 0..4 {
        lines.push(format!(
            "S{j}: mean = {}, variance = {}, normalized = {}",
            num(stokes.means[j]),
            num(stokes.variances[j]),
            num(stokes.normalized[j]),
        ));
    }
    Ok(finish(lines))
}

fn render_sweep(args: &SweepArgs) -> CliResult<String> {
    let plan = match &args.plan {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            parse_plan(&text).map_err(|e| e.to_string())?
        }
        None => SweepPlan {
            k1: args.k1.expect("required unless a plan file is given"),
            k2: args.k2.expect("required unless a plan file is given"),
            mag_sq_1o: args.mag_sq_1o.expect("required unless a plan file is given"),
            mag_sq_1e: args.mag_sq_1e.expect("required unless a plan file is given"),
            phase_sum: args.phase_sum,
            phase_diff: args.phase_diff,
            zeta_start: args.zeta_start.expect("required unless a plan file is given"),
            zeta_end: args.zeta_end.expect("required unless a plan file is given"),
            zeta_steps: args.zeta_steps.expect("required unless a plan file is given"),
            outputs: args.outputs.unwrap_or_default(),
        },
    };
    let rows = run_sweep(&plan).map_err(|e| e.to_string())?;
    match args.format {
        Format::Csv => to_csv(&rows).map_err(|e| e.to_string()),
        Format::Table => Ok(render_table(&rows, plan.outputs)),
    }
}

fn render_table(rows: &[SweepRow], selection: OutputSelection) -> String {
    let mut names: Vec<&str> = vec!["zeta"];
    if selection.photon_means {
        names.extend(["N1o", "N1e", "N3e"]);
    }
    if selection.photon_variances {
        names.extend(["var_N1o", "var_N1e"]);
    }
    if selection.stokes {
        names.extend(["V0", "V1", "V2", "V3", "S0", "S1", "S2", "S3"]);
    }
    let header = names
        .iter()
        .map(|n| format!("{n:>24}"))
        .collect::<Vec<_>>()
        .join(" ");
    let mut lines = vec![header];
    for row in rows {
        let mut values = vec![row.zeta];
        if let Some(n) = row.photon_means {
            values.extend(n);
        }
        if let Some(v) = row.photon_variances {
            values.extend(v);
        }
        if let Some(s) = row.stokes {
            values.extend(s.normalized);
            values.extend(s.means);
        }
        lines.push(
            values
                .into_iter()
                .map(cell)
                .collect::<Vec<_>>()
                .join(" "),
        );
    }
    finish(lines)
}

fn render_qpm(args: &QpmArgs) -> CliResult<String> {
    if !(args.rel_tol.is_finite() && args.rel_tol >= 0.0) {
        return Err(format!(
            "rel_tol must be finite and nonnegative, got {}",
            args.rel_tol
        ));
    }
    let text = fs::read_to_string(&args.table)
        .map_err(|e| format!("cannot read {}: {e}", args.table.display()))?;
    let table = DispersionTable::parse(&text).map_err(|e| e.to_string())?;
    let orders = [args.order1, args.order2, args.order3, args.order4];
    let processes =
        design_processes(&table, args.wavelength, orders).map_err(|e| e.to_string())?;
    let report = simultaneity_check(&processes, args.rel_tol);

    // Couplings are evaluated at the solved signed orders; a process
    // that needs no poling keeps its requested order magnitude.
    let mut signed = orders;
    for (slot, process) in signed.iter_mut().zip(&processes) {
        if let QpmSolution::Grating { order, .. } = process.solution {
            *slot = order;
        }
    }
    let xi = [args.xi1, args.xi2, args.xi3, args.xi4];
    let couplings = effective_couplings(xi, signed).map_err(|e| e.to_string())?;

    let mut lines = vec![format!("fundamental wavelength = {} um", args.wavelength)];
    for (j, process) in processes.iter().enumerate() {
        match process.solution {
            QpmSolution::NoPolingNeeded => lines.push(format!(
                "process P{}: delta_k = {} rad/um, no poling needed",
                j + 1,
                num(process.delta_k),
            )),
            QpmSolution::Grating {
                order,
                period_um,
                coherence_length_um,
            } => lines.push(format!(
                "process P{}: delta_k = {} rad/um, L_coh = {} um, order = {}, period = {} um, residual = {} rad/um",
                j + 1,
                num(process.delta_k),
                num(coherence_length_um),
                order,
                num(period_um),
                num(process.residual()),
            )),
        }
    }

    let verdict = |ok: bool| if ok { "ok" } else { "FAIL" };
    lines.push(format!("simultaneity (rel_tol = {}):", args.rel_tol));
    lines.push(format!(
        "  first pair rel gap = {} -> {}",
        num(report.first_pair_rel),
        verdict(report.first_pair_ok),
    ));
    lines.push(format!(
        "  second pair rel gap = {} -> {}",
        num(report.second_pair_rel),
        verdict(report.second_pair_ok),
    ));
    lines.push(format!(
        "  coherence length ratio L1/L3 = {}, target 9 -> {}",
        num(report.coherence_ratio),
        verdict(report.coherence_ratio_ok),
    ));
    match report.single_grating_spread {
        Some(spread) => lines.push(format!(
            "  single grating period spread = {} -> {}",
            num(spread),
            verdict(report.single_grating_ok),
        )),
        None => lines.push(format!(
            "  single grating period spread = n/a -> {}",
            verdict(report.single_grating_ok),
        )),
    }
    lines.push(format!("  no poling required = {}", report.no_poling_required));
    lines.push(format!("  passed = {}", report.passed));

    lines.push(format!(
        "couplings (orders {}, {}, {}, {}):",
        signed[0], signed[1], signed[2], signed[3]
    ));
    lines.push(format!(
        "  gamma = ({}, {}, {}, {})",
        num(couplings.gamma[0]),
        num(couplings.gamma[1]),
        num(couplings.gamma[2]),
        num(couplings.gamma[3]),
    ));
    lines.push(format!("  k1 = {}", num(couplings.ratios.k1())));
    lines.push(format!("  k2 = {}", num(couplings.ratios.k2())));
    Ok(finish(lines))
}

fn render_verify(args: &VerifyArgs) -> CliResult<(String, bool)> {
    if args.grid == 0 {
        return Err("grid must be at least 1".to_string());
    }
    if args.samples == 0 {
        return Err("samples must be at least 1".to_string());
    }
    let config = VerifyConfig {
        grid: args.grid,
        oracle_steps: args.oracle_steps,
        samples: args.samples,
        seed: args.seed,
    };
    let report = run_verify(&config).map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    for check in &report.checks {
        lines.push(format!(
            "check {}: worst = {}, bound = {:e} -> {}",
            check.name,
            num(check.worst),
            check.bound,
            if check.passed { "ok" } else { "FAIL" },
        ));
    }
    let passed = report.passed();
    let count = report.checks.iter().filter(|c| c.passed).count();
    lines.push(format!(
        "verify: {count} of {} checks passed",
        report.checks.len()
    ));
    Ok((finish(lines), passed))
}
