use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use wignerlab::entanglement::{
    boosted_entropy_closed_form, rest_frame_entropy, state_entropy, Subsystem,
};
use wignerlab::kinematics::{
    wigner_angle_cos_form, wigner_angle_matrix, wigner_angle_tan_form, BoostGeometry, Speed,
    WignerAngle,
};
use wignerlab::output::{
    figure_to_csv, figure_to_json, series_to_csv, series_to_json, write_atomic,
};
use wignerlab::states::{boost_state, prepare_state, HelicityClass, PreparationAngle, StateRecord};
use wignerlab::sweep::{
    emit_figure, find_local_extrema, sweep_entanglement, FigureId, FigureOverrides, SweepRequest,
};
use wignerlab::verify::{run_suite, Tolerances};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;

/// Thomas–Wigner rotation and spin–momentum entanglement of a single boosted particle.
#[derive(Parser, Debug)]
#[command(name = "wignerlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Wigner angle of two non-collinear boosts.
    Angle(AngleArgs),
    /// Boost a prepared state and report its entanglement.
    Boost(BoostArgs),
    /// Entanglement against boosting angle.
    Sweep(SweepArgs),
    /// Emit a figure dataset.
    Figure(FigureArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Cos,
    Tan,
    Matrix,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct AngleArgs {
    /// Speed of the first boost, in units of c.
    #[arg(long)]
    u: f64,
    /// Speed of the second boost, in units of c.
    #[arg(long)]
    v: f64,
    /// Boosting angle between the two velocities.
    #[arg(long)]
    phi: f64,
    #[arg(long, value_enum, default_value_t = Method::Tan)]
    method: Method,
    /// Read angles in degrees.
    #[arg(long)]
    degrees: bool,
}

#[derive(Args, Debug)]
struct BoostArgs {
    /// psi, psi_tilde or xi.
    #[arg(long)]
    class: HelicityClass,
    /// Preparation angle.
    #[arg(long)]
    eta: f64,
    /// Wigner angle, given directly.
    #[arg(long, conflicts_with_all = ["u", "v", "phi"], required_unless_present = "u")]
    delta: Option<f64>,
    #[arg(long, requires_all = ["v", "phi"])]
    u: Option<f64>,
    #[arg(long, requires_all = ["u", "phi"])]
    v: Option<f64>,
    #[arg(long, requires_all = ["u", "v"])]
    phi: Option<f64>,
    /// Read angles in degrees.
    #[arg(long)]
    degrees: bool,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    u: f64,
    #[arg(long)]
    v: f64,
    #[arg(long)]
    eta: f64,
    #[arg(long, default_value = "psi")]
    class: HelicityClass,
    #[arg(long, default_value_t = 0.0)]
    phi_min: f64,
    /// Defaults to pi (180 with --degrees).
    #[arg(long)]
    phi_max: Option<f64>,
    #[arg(long, default_value_t = wignerlab::sweep::DEFAULT_SAMPLES)]
    samples: usize,
    /// Read angles in degrees.
    #[arg(long)]
    degrees: bool,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Print the local extrema as JSON on stderr.
    #[arg(long)]
    extrema: bool,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// 1a, 1b, 1c, 3a, 3b or 3c.
    #[arg(long)]
    id: String,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Points per curve (per axis for 1c).
    #[arg(long)]
    samples: Option<usize>,
    /// Boosting angles drawn in 1a, in radians.
    #[arg(long, value_delimiter = ',')]
    phis: Option<Vec<f64>>,
    /// Equal speeds drawn in 1b.
    #[arg(long, value_delimiter = ',')]
    speeds: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Per-axis grid resolution.
    #[arg(long, default_value_t = 50)]
    grid: usize,
    /// Tolerance override, key=value; repeatable.
    #[arg(long = "tol", value_name = "KEY=VALUE")]
    tol: Vec<String>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

enum Outcome {
    Done,
    VerificationFailed,
}

fn angle(x: f64, degrees: bool) -> f64 {
    if degrees {
        x.to_radians()
    } else {
        x
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            write_atomic(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn cmd_angle(a: &AngleArgs) -> Result<Outcome> {
    let g = BoostGeometry::from_values(a.u, a.v, angle(a.phi, a.degrees))?;
    let line = |name: &str, d: WignerAngle| {
        println!("{name:<7} {:.17} rad  {:.15} deg", d.radians(), d.degrees());
    };
    match a.method {
        Method::Cos => line("cos", wigner_angle_cos_form(g)),
        Method::Tan => line("tan", wigner_angle_tan_form(g)),
        Method::Matrix => line("matrix", wigner_angle_matrix(g)),
        Method::All => {
            let values = [
                ("cos", wigner_angle_cos_form(g)),
                ("tan", wigner_angle_tan_form(g)),
                ("matrix", wigner_angle_matrix(g)),
            ];
            for (name, d) in values {
                line(name, d);
            }
            let mut dev = 0.0_f64;
            for (i, a) in values.iter().enumerate() {
                for b in &values[i + 1..] {
                    dev = dev.max((a.1.radians() - b.1.radians()).abs());
                }
            }
            println!("max pairwise deviation {dev:.3e} rad");
        }
    }
    Ok(Outcome::Done)
}

fn cmd_boost(a: &BoostArgs) -> Result<Outcome> {
    let eta = PreparationAngle::new(angle(a.eta, a.degrees))?;
    let (delta, geometry) = match (a.delta, a.u, a.v, a.phi) {
        (Some(d), None, None, None) => (WignerAngle::new(angle(d, a.degrees))?, None),
        (None, Some(u), Some(v), Some(phi)) => {
            let g = BoostGeometry::from_values(u, v, angle(phi, a.degrees))?;
            (
                wigner_angle_tan_form(g),
                Some(json!({ "u": u, "v": v, "phi": g.phi() })),
            )
        }
        _ => bail!("give either --delta or all of --u, --v, --phi"),
    };
    let rest = prepare_state(a.class, eta);
    let boosted = boost_state(&rest, delta)?;
    let record = StateRecord::new(a.class, eta, delta, &boosted);
    let mut doc = json!({
        "state": record,
        "rest_entropy_bits": state_entropy(&rest, Subsystem::Spin)?.value(),
        "boosted_entropy_bits": state_entropy(&boosted, Subsystem::Spin)?.value(),
        "closed_form_entropy_bits": boosted_entropy_closed_form(eta, delta, a.class).value(),
        "closed_form_rest_entropy_bits": rest_frame_entropy(eta, a.class).value(),
    });
    if let Some(g) = geometry {
        doc["geometry"] = g;
    }
    emit(a.out.as_deref(), &serde_json::to_string_pretty(&doc)?)?;
    Ok(Outcome::Done)
}

fn cmd_sweep(a: &SweepArgs) -> Result<Outcome> {
    let req = SweepRequest {
        u: Speed::new(a.u)?,
        v: Speed::new(a.v)?,
        eta: PreparationAngle::new(angle(a.eta, a.degrees))?,
        class: a.class,
        phi_min: angle(a.phi_min, a.degrees),
        phi_max: a.phi_max.map_or(PI, |x| angle(x, a.degrees)),
        samples: a.samples,
    };
    req.validate()?;
    let series = sweep_entanglement(&req)?;
    let text = match a.format {
        Format::Csv => series_to_csv(&series),
        Format::Json => series_to_json(&series)?,
    };
    emit(a.out.as_deref(), &text)?;
    if a.extrema {
        let report = find_local_extrema(&series)?;
        eprintln!("{}", serde_json::to_string_pretty(&report)?);
    }
    Ok(Outcome::Done)
}

fn cmd_figure(a: &FigureArgs) -> Result<Outcome> {
    let id: FigureId = a.id.parse()?;
    let overrides = FigureOverrides {
        samples: a.samples,
        phis: a.phis.clone(),
        speeds: a.speeds.clone(),
    };
    let data = emit_figure(id, &overrides)?;
    let text = match a.format {
        Format::Csv => figure_to_csv(&data),
        Format::Json => figure_to_json(id, &data)?,
    };
    emit(a.out.as_deref(), &text)?;
    Ok(Outcome::Done)
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let mut tol = Tolerances::default();
    for entry in &a.tol {
        tol.apply_override(entry)?;
    }
    let report = run_suite(a.grid, &tol)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("{report}");
    }
    Ok(if report.passed() {
        Outcome::Done
    } else {
        Outcome::VerificationFailed
    })
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("WIGNERLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("WIGNERLAB_THREADS = {raw:?} is not a non-negative integer"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome> {
    configure_threads()?;
    match &cli.command {
        Command::Angle(a) => cmd_angle(a),
        Command::Boost(a) => cmd_boost(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Figure(a) => cmd_figure(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(EXIT_VERIFY),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
