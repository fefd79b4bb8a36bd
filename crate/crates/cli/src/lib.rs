//! `mewheel` command-line front end.
//!
//! Every number printed is the value returned by `mewheel-core`; this crate
//! only parses, dispatches and formats.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mewheel_core::dynamics::{
    delta_v_aggregation, delta_v_rotation, force_decomposed, force_direct, integrate, run_maneuver_sequence,
    FieldTimeSeries, ForceTerm, ImpulseLedger, Maneuver, SequenceError,
};
use mewheel_core::material::{MagnetoElectricTensor, Particle, ProperRotation};
use mewheel_core::mission::{
    evaluate_mission, solve_for_unknown_in, sweep, sweep_rows, MissionReport, MissionSpec, Solution, SweepGrid,
    SweepMode, SweepOptions, Unknown, DEFAULT_SWEEP_CAP,
};
use mewheel_core::quantities::{convert_gaussian_si, ConversionDirection, Dimension, Quantity};
use mewheel_core::vacuum::{
    convergence_study, vacuum_momentum_closed_form, write_convergence_csv, CutoffConvention, VacuumModel,
    DEFAULT_PREFACTOR_A,
};

#[derive(Debug, Parser)]
#[command(
    name = "mewheel",
    version,
    about = "Vacuum momentum transfer calculator for magneto-electric particles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Vacuum prefactor A (> 0); overrides the value in a spec file.
    #[arg(long = "A", global = true, value_parser = positive_f64, allow_hyphen_values = true)]
    pub prefactor_a: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = Cutoff::WavelengthEqualsSize)]
    pub cutoff: Cutoff,

    /// Unit system of printed results. Inputs are always SI.
    #[arg(long, global = true, value_enum, default_value_t = Units::Si)]
    pub units: Units,

    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Cutoff {
    /// k_cut = 2π/a
    WavelengthEqualsSize,
    /// k_cut = π/a
    HalfWavelength,
    /// k_cut = 1/a
    ReducedWavelength,
}

impl From<Cutoff> for CutoffConvention {
    fn from(c: Cutoff) -> Self {
        match c {
            Cutoff::WavelengthEqualsSize => CutoffConvention::WavelengthEqualsSize,
            Cutoff::HalfWavelength => CutoffConvention::HalfWavelength,
            Cutoff::ReducedWavelength => CutoffConvention::ReducedWavelength,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Si,
    Gaussian,
}

#[derive(Debug, Args)]
pub struct ParticleArgs {
    /// Oriented χ_xy (dimensionless).
    #[arg(long, allow_hyphen_values = true)]
    pub chi: f64,
    /// Particle size, m.
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    /// Density, kg/m³.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Particle Δv from one π-rotation.
    DeltaVRot(ParticleArgs),
    /// Particle Δv from aggregating N particles.
    DeltaVAgg {
        #[command(flatten)]
        particle: ParticleArgs,
        #[arg(long = "N")]
        n: u64,
    },
    /// Closed-form vacuum momentum A ħ χ / a.
    VacuumMomentum {
        #[arg(long, allow_hyphen_values = true)]
        chi: f64,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
    },
    /// Mode-sum convergence study.
    Oracle {
        #[arg(long, allow_hyphen_values = true)]
        chi: f64,
        /// Sizes, m, comma separated.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        a: Vec<f64>,
        /// Grid points per axis, comma separated.
        #[arg(long = "n", value_delimiter = ',', default_value = "16,32,64")]
        n: Vec<usize>,
    },
    /// Force on one particle from a field time series, split into terms.
    ForceDecompose {
        /// CSV (t_s,E_x,B_y[,chi0_xy,kappa1,kappa2,kappa3]) or .json.
        #[arg(long)]
        series: PathBuf,
        /// Particle JSON (object or array; the first is used).
        #[arg(long, conflicts_with_all = ["chi", "epsilon"])]
        particles: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        chi: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        epsilon: f64,
    },
    /// Evaluate a mission spec.
    Mission {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Solve a mission spec for one unknown.
    Solve {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        unknown: Unknown,
        /// Lower end of the search bracket.
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<f64>,
        /// Upper end of the search bracket.
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<f64>,
    },
    /// Cartesian parameter sweep; axes not given stay at the spec value.
    Sweep {
        /// Base mission spec; the built-in design point when omitted.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        chi: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        rho: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        fraction: Vec<f64>,
        /// Values of A to sweep.
        #[arg(long = "A-values", value_delimiter = ',', allow_hyphen_values = true)]
        a_values: Vec<f64>,
        /// Hold per-particle mass (kg) fixed instead of density.
        #[arg(long, allow_hyphen_values = true)]
        fixed_mass: Option<f64>,
        #[arg(long)]
        serial: bool,
        #[arg(long, default_value_t = DEFAULT_SWEEP_CAP)]
        cap: u64,
    },
    /// Run a maneuver sequence and print the impulse ledger.
    Ledger {
        #[arg(long)]
        particles: PathBuf,
        #[arg(long)]
        maneuvers: PathBuf,
        /// Total satellite mass, kg.
        #[arg(long = "M", allow_hyphen_values = true)]
        m_total: f64,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be > 0, got {v}"))
    }
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    fn domain(e: impl std::fmt::Display) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CmdResult = Result<String, Failure>;

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    2
                }
            };
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => 0,
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    1
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

pub fn execute(cli: &Cli) -> CmdResult {
    let model =
        VacuumModel::new(cli.prefactor_a.unwrap_or(DEFAULT_PREFACTOR_A), cli.cutoff.into()).map_err(Failure::domain)?;
    let single = matches!(
        cli.command,
        Command::DeltaVRot(_) | Command::DeltaVAgg { .. } | Command::VacuumMomentum { .. }
    );
    if cli.units == Units::Gaussian && !single {
        return Err(Failure::Usage(
            "--units gaussian applies to delta-v-rot, delta-v-agg and vacuum-momentum".into(),
        ));
    }
    match &cli.command {
        Command::DeltaVRot(p) => {
            let particle = Particle::simple(p.chi, p.a, p.rho).map_err(Failure::domain)?;
            let dv = delta_v_rotation(&particle, &model).map_err(Failure::domain)?;
            single_value(cli, "delta_v_rotation", dv)
        }
        Command::DeltaVAgg { particle: p, n } => {
            let dv = delta_v_aggregation(p.a, p.rho, p.chi, *n, &model).map_err(Failure::domain)?;
            single_value(cli, "delta_v_aggregation", dv)
        }
        Command::VacuumMomentum { chi, a } => {
            let p = vacuum_momentum_closed_form(*chi, *a, &model).map_err(Failure::domain)?;
            single_value(cli, "vacuum_momentum", p)
        }
        Command::Oracle { chi, a, n } => oracle(cli.format, *chi, a, n, &model),
        Command::ForceDecompose {
            series,
            particles,
            chi,
            epsilon,
        } => {
            let series = read_series(series)?;
            let particle = match particles {
                Some(path) => first_particle(path)?,
                None => Particle::new(
                    1e-9,
                    1000.0,
                    MagnetoElectricTensor::xy_only(*chi).map_err(Failure::domain)?,
                    ProperRotation::identity(),
                    *epsilon,
                )
                .map_err(Failure::domain)?,
            };
            forces(cli.format, &particle, &series)
        }
        Command::Mission { spec } => {
            let spec = read_spec(spec, cli.prefactor_a)?;
            let report = evaluate_mission(&spec).map_err(Failure::domain)?;
            mission_report(cli.format, &report)
        }
        Command::Solve { spec, unknown, lo, hi } => {
            let spec = read_spec(spec, cli.prefactor_a)?;
            let (dlo, dhi) = unknown.default_bracket();
            let sol =
                solve_for_unknown_in(&spec, *unknown, lo.unwrap_or(dlo), hi.unwrap_or(dhi)).map_err(Failure::domain)?;
            solution(cli.format, &sol)
        }
        Command::Sweep {
            spec,
            chi,
            a,
            rho,
            fraction,
            a_values,
            fixed_mass,
            serial,
            cap,
        } => {
            let base = match spec {
                Some(path) => read_spec(path, cli.prefactor_a)?,
                None => MissionSpec {
                    prefactor_a: cli.prefactor_a.unwrap_or(MissionSpec::design_point().prefactor_a),
                    ..MissionSpec::design_point()
                },
            };
            let axis = |given: &[f64], default: f64| {
                if given.is_empty() {
                    vec![default]
                } else {
                    given.to_vec()
                }
            };
            let grid = SweepGrid {
                chi0: axis(chi, base.chi0),
                a_m: axis(a, base.particle_size),
                rho: axis(rho, base.particle_density),
                fraction: axis(fraction, base.active_mass_fraction),
                prefactor_a: axis(a_values, base.prefactor_a),
            };
            let options = SweepOptions {
                mode: match fixed_mass {
                    Some(m) => SweepMode::FixedParticleMass { mass_kg: *m },
                    None => SweepMode::Mission,
                },
                parallel: !serial,
                cap: *cap,
            };
            sweep_output(cli.format, &base, &grid, &options)
        }
        Command::Ledger {
            particles,
            maneuvers,
            m_total,
        } => {
            let ps = read_particles(particles)?;
            let ms: Vec<Maneuver> = read_json(maneuvers)?;
            match run_maneuver_sequence(&ps, &ms, *m_total, &model) {
                Ok(ledger) => ledger_output(cli.format, &ledger),
                Err(SequenceError::Setup(e)) => Err(Failure::domain(e)),
                Err(e @ SequenceError::Maneuver { .. }) => {
                    Err(Failure::Domain(format!("{}: {e}", maneuvers.display())))
                }
            }
        }
    }
}

/// Six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-3..6).contains(&exp) {
        format!("{:.*}", (5 - exp).max(0) as usize, x)
    } else {
        sci
    }
}

fn unit_of(dim: Dimension, gaussian: bool) -> &'static str {
    match (dim, gaussian) {
        (d, false) if d == Dimension::VELOCITY => "m/s",
        (d, true) if d == Dimension::VELOCITY => "cm/s",
        (d, false) if d == Dimension::MOMENTUM => "kg m/s",
        (d, true) if d == Dimension::MOMENTUM => "g cm/s",
        (d, false) if d == Dimension::ENERGY_DENSITY => "J/m^3",
        (d, true) if d == Dimension::ENERGY_DENSITY => "erg/cm^3",
        _ => "",
    }
}

fn single_value(cli: &Cli, name: &str, q: Quantity) -> CmdResult {
    let gaussian = cli.units == Units::Gaussian;
    let q = if gaussian {
        convert_gaussian_si(q, ConversionDirection::SiToGaussian).map_err(Failure::domain)?
    } else {
        q
    };
    let unit = unit_of(q.dim, gaussian);
    Ok(match cli.format {
        Format::Text => format!("{name}: {} {unit}\n", sig6(q.value)),
        Format::Json => json_line(&serde_json::json!({ "quantity": name, "value": q.value, "unit": unit })),
        Format::Csv => format!("quantity,value,unit\n{name},{},{unit}\n", q.value),
    })
}

fn json_line<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn read_spec(path: &Path, prefactor: Option<f64>) -> Result<MissionSpec, Failure> {
    let mut spec: MissionSpec = read_json(path)?;
    if let Some(a) = prefactor {
        spec.prefactor_a = a;
    }
    Ok(spec)
}

fn read_particles(path: &Path) -> Result<Vec<Particle>, Failure> {
    let value: serde_json::Value = read_json(path)?;
    let parsed = if value.is_array() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value(value).map(|p| vec![p])
    };
    parsed.map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn first_particle(path: &Path) -> Result<Particle, Failure> {
    read_particles(path)?
        .into_iter()
        .next()
        .ok_or_else(|| Failure::Domain(format!("{}: no particles", path.display())))
}

fn read_series(path: &Path) -> Result<FieldTimeSeries, Failure> {
    if path.extension().is_some_and(|e| e == "json") {
        return read_json(path);
    }
    let file = fs::File::open(path).map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))?;
    FieldTimeSeries::from_csv(file).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn oracle(format: Format, chi: f64, sizes: &[f64], resolutions: &[usize], model: &VacuumModel) -> CmdResult {
    let rows = convergence_study(chi, sizes, resolutions, model).map_err(Failure::domain)?;
    Ok(match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_convergence_csv(&rows, &mut buf).map_err(Failure::domain)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Format::Json => json_line(&rows),
        Format::Text => {
            let mut s = format!(
                "{:>6} {:>12} {:>12} {:>14} {:>12}\n",
                "n", "a_m", "chi", "p_kg_m_s", "effective_A"
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>6} {:>12} {:>12} {:>14} {:>12}",
                    r.n_per_axis,
                    sig6(r.a_m),
                    sig6(r.chi),
                    sig6(r.p_kg_m_s),
                    sig6(r.effective_a)
                );
            }
            s
        }
    })
}

fn forces(format: Format, p: &Particle, s: &FieldTimeSeries) -> CmdResult {
    let d = force_decomposed(p, s).map_err(Failure::domain)?;
    let direct = force_direct(p, s).map_err(Failure::domain)?;
    let total = d.total();
    let terms = [
        ForceTerm::Dielectric,
        ForceTerm::ClassicalMagnetoElectric,
        ForceTerm::ChiDot,
    ];
    let names = ["dielectric", "classical_me", "chi_dot"];
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("t_s,dielectric,classical_me,chi_dot,total,direct\n");
            for i in 0..s.len() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    s.t()[i],
                    d.dielectric[i],
                    d.classical_me[i],
                    d.chi_dot[i],
                    total[i],
                    direct[i]
                );
            }
            out
        }
        Format::Json => {
            let mut impulse = serde_json::Map::new();
            for (t, n) in terms.iter().zip(names) {
                impulse.insert(n.into(), integrate(d.term(*t), s.dt()).into());
            }
            impulse.insert("total".into(), integrate(&total, s.dt()).into());
            impulse.insert("direct".into(), integrate(&direct, s.dt()).into());
            impulse.insert("vacuum_capable".into(), integrate(&d.vacuum_capable(), s.dt()).into());
            json_line(&serde_json::json!({
                "t_s": s.t(),
                "dielectric": d.dielectric,
                "classical_me": d.classical_me,
                "chi_dot": d.chi_dot,
                "total": total,
                "direct": direct,
                "impulse": impulse,
            }))
        }
        Format::Text => {
            let mut out = format!("impulse over {} s ({} samples)\n", sig6(s.duration()), s.len());
            for (t, n) in terms.iter().zip(names) {
                let vac = if t.carries_vacuum_contribution() {
                    " (vacuum-capable)"
                } else {
                    ""
                };
                let _ = writeln!(out, "  {n:<13} {}{vac}", sig6(integrate(d.term(*t), s.dt())));
            }
            let _ = writeln!(out, "  {:<13} {}", "total", sig6(integrate(&total, s.dt())));
            let _ = writeln!(out, "  {:<13} {}", "direct", sig6(integrate(&direct, s.dt())));
            out
        }
    })
}

fn mission_report(format: Format, r: &MissionReport) -> CmdResult {
    Ok(match format {
        Format::Json => json_line(r),
        Format::Csv => format!(
            "required_tangential_v,achieved_tangential_v,feasible,margin\n{},{},{},{}\n",
            r.required_tangential_v, r.achieved_tangential_v, r.feasible, r.margin
        ),
        Format::Text => format!(
            "required_tangential_v: {} m/s\nachieved_tangential_v: {} m/s\nfeasible: {}\nmargin: {}\n",
            sig6(r.required_tangential_v),
            sig6(r.achieved_tangential_v),
            r.feasible,
            sig6(r.margin)
        ),
    })
}

fn solution(format: Format, s: &Solution) -> CmdResult {
    Ok(match format {
        Format::Json => json_line(s),
        Format::Csv => format!(
            "unknown,value,margin,feasible,warning\n{},{},{},{},{}\n",
            s.unknown,
            s.value,
            s.report.margin,
            s.report.feasible,
            s.warning.as_deref().unwrap_or("")
        ),
        Format::Text => {
            let mut out = format!(
                "{}: {}\n{}",
                s.unknown,
                sig6(s.value),
                mission_report(Format::Text, &s.report)?
            );
            if let Some(w) = &s.warning {
                let _ = writeln!(out, "warning: {w}");
            }
            out
        }
    })
}

fn sweep_output(format: Format, base: &MissionSpec, grid: &SweepGrid, options: &SweepOptions) -> CmdResult {
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            sweep(base, grid, options, &mut buf).map_err(Failure::domain)?;
            Ok(String::from_utf8(buf).expect("csv is utf-8"))
        }
        Format::Json => Ok(json_line(&sweep_rows(base, grid, options).map_err(Failure::domain)?)),
        Format::Text => {
            let rows = sweep_rows(base, grid, options).map_err(Failure::domain)?;
            let mut out = format!(
                "{:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>8}\n",
                "chi0", "a_m", "rho_kg_m3", "fraction", "A", "dv_m_s", "dV_m_s", "rate_deg_day", "feasible"
            );
            for r in rows {
                let _ = writeln!(
                    out,
                    "{:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>8}",
                    sig6(r.chi0),
                    sig6(r.a_m),
                    sig6(r.rho_kg_m3),
                    sig6(r.fraction),
                    sig6(r.prefactor_a),
                    sig6(r.dv_m_s),
                    sig6(r.payload_dv_m_s),
                    sig6(r.rate_deg_day),
                    r.feasible
                );
            }
            Ok(out)
        }
    }
}

fn ledger_output(format: Format, ledger: &ImpulseLedger) -> CmdResult {
    Ok(match format {
        Format::Json => {
            let mut buf = Vec::new();
            ledger.write_json_lines(&mut buf).map_err(Failure::domain)?;
            String::from_utf8(buf).expect("json is utf-8")
        }
        Format::Csv => {
            let mut out = String::from(
                "maneuver_id,type,dp_particles_x,dp_particles_y,dp_particles_z,dp_vacuum_x,dp_vacuum_y,dp_vacuum_z,cumulative_v_x,cumulative_v_y,cumulative_v_z\n",
            );
            for e in &ledger.entries {
                let nums: Vec<String> = e
                    .dp_particles
                    .iter()
                    .chain(&e.dp_vacuum)
                    .chain(&e.cumulative_v)
                    .map(|x| x.to_string())
                    .collect();
                let _ = writeln!(out, "{},{},{}", e.maneuver_id, e.kind, nums.join(","));
            }
            out
        }
        Format::Text => {
            let v3 = |v: &[f64; 3]| format!("({}, {}, {})", sig6(v[0]), sig6(v[1]), sig6(v[2]));
            let mut out = String::new();
            for e in &ledger.entries {
                let _ = writeln!(
                    out,
                    "{} {}: dp_particles {} kg m/s, cumulative_v {} m/s",
                    e.maneuver_id,
                    e.kind,
                    v3(&e.dp_particles),
                    v3(&e.cumulative_v)
                );
            }
            let _ = writeln!(out, "final velocity {} m/s", v3(&ledger.cumulative_v));
            out
        }
    })
}
