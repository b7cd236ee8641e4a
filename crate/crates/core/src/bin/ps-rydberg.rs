use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use ps_rydberg::bloch::{self, Scheme};
use ps_rydberg::config::{Format, RunConfig};
use ps_rydberg::constants::{self, units};
use ps_rydberg::level_structure::{self, LevelBand};
use ps_rydberg::output::{Header, Table, SCHEMA_VERSION, TOOL};
use ps_rydberg::saturation::{self, FluenceReport, GROUND};
use ps_rydberg::scan::{self, ScanAxis};
use ps_rydberg::Error;

#[derive(Parser, Debug)]
#[command(name = "ps-rydberg", version, about = "Two-step Rydberg excitation of positronium")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Overrides applied on top of the config file; flags win.
#[derive(Args, Debug)]
struct Common {
    /// JSON config, or an earlier output file whose header holds one.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    realizations: Option<usize>,
    /// Temperature (K).
    #[arg(long, global = true)]
    temperature: Option<f64>,
    /// Magnetic field (T).
    #[arg(long, global = true)]
    bfield: Option<f64>,
    #[arg(long, global = true, value_enum)]
    scheme: Option<Scheme>,
    #[arg(long, global = true)]
    n_final: Option<u32>,
    /// First-pulse fluence (µJ/cm²).
    #[arg(long, global = true)]
    fluence1: Option<f64>,
    /// Second-pulse fluence (µJ/cm²).
    #[arg(long, global = true)]
    fluence2: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Broadenings, interleaving and ionization limits versus n.
    Structure {
        #[arg(long)]
        n_min: Option<u32>,
        #[arg(long)]
        n_max: Option<u32>,
    },
    /// Saturation fluences and pulse energies of both legs.
    Fluence {
        /// Transverse FWHM of the atom cloud (mm).
        #[arg(long)]
        spot_mm: Option<f64>,
        /// Peak fluence in units of F_sat.
        #[arg(long)]
        overdrive: Option<f64>,
    },
    /// Incoherent rate-equation population under the first pulse.
    Rate {
        /// Saturation fluence (µJ/cm²); the first-leg value when absent.
        #[arg(long)]
        fsat: Option<f64>,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
    },
    /// Stochastic Bloch simulation (ensemble unless --single).
    Simulate {
        #[arg(long)]
        single: bool,
        /// Stream index of the --single realization.
        #[arg(long, default_value_t = 0)]
        realization: u64,
        /// Also write a JSON summary here.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Final fractions across a parameter grid.
    Scan {
        #[arg(long, value_enum)]
        axis: ScanAxis,
        /// Comma-separated grid, e.g. 20,21,22 or 2,4,8.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Vec<f64>,
        /// Fluence values are multiples of the band saturation fluence.
        #[arg(long)]
        relative: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Structure { .. } => "structure",
            Command::Fluence { .. } => "fluence",
            Command::Rate { .. } => "rate",
            Command::Simulate { .. } => "simulate",
            Command::Scan { .. } => "scan",
        }
    }
}

fn resolve_config(common: &Common, command: &Command) -> anyhow::Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = common.seed {
        cfg.simulation.seed = v;
    }
    if let Some(v) = common.realizations {
        cfg.simulation.realizations = v;
    }
    if let Some(v) = common.temperature {
        cfg.environment.temperature_k = v;
    }
    if let Some(v) = common.bfield {
        cfg.environment.b_field_t = v;
    }
    if let Some(v) = common.scheme {
        if v != cfg.scheme.ladder && cfg.pulses.is_none() {
            log::info!("switching ladder to {v:?} with its reference pulses");
        }
        cfg.scheme.ladder = v;
    }
    if let Some(v) = common.n_final {
        cfg.scheme.n_final = v;
    }
    if common.fluence1.is_some() || common.fluence2.is_some() {
        let mut p = cfg.pulse_blocks();
        if let Some(v) = common.fluence1 {
            p[0].fluence_uj_cm2 = v;
        }
        if let Some(v) = common.fluence2 {
            p[1].fluence_uj_cm2 = v;
        }
        cfg.pulses = Some(p);
    }
    if let Some(v) = common.format {
        cfg.output.format = v;
    }
    if let Some(v) = &common.out {
        cfg.output.path = Some(v.clone());
    }
    match command {
        Command::Structure { n_min, n_max } => {
            if let Some(v) = n_min {
                cfg.structure.n_min = *v;
            }
            if let Some(v) = n_max {
                cfg.structure.n_max = *v;
            }
        }
        Command::Fluence { spot_mm, overdrive } => {
            if let Some(v) = spot_mm {
                cfg.fluence.spot_fwhm_mm = *v;
            }
            if let Some(v) = overdrive {
                cfg.fluence.overdrive = *v;
            }
        }
        _ => {}
    }
    Ok(cfg)
}

fn structure(cfg: &RunConfig) -> anyhow::Result<Table> {
    let env = cfg.env()?;
    let rows = level_structure::structure_table(&env, cfg.structure.n_min, cfg.structure.n_max)?;
    let markers = level_structure::structure_markers(&env)?;
    let cols: Vec<&str> = LevelBand::CSV_HEADER.split(',').collect();
    let mut t = Table::new(&cols);
    for b in &rows {
        t.push(vec![
            b.n.into(),
            units::to_ev(b.energy).into(),
            (b.dlambda_doppler / units::NM).into(),
            (b.dlambda_stark / units::NM).into(),
            (b.dlambda_splitting / units::NM).into(),
            b.n_interleaved.into(),
            b.density.into(),
            b.ionizing.into(),
        ]);
    }
    let lam13 = constants::transition_wavelength(1, 3)?;
    t.note("dlambda_doppler_1_3[nm]", level_structure::doppler_fwhm(&env, lam13)?.dlambda / units::NM);
    t.note("stark_width_n3[eV]", units::to_ev(level_structure::stark_width(&env, 3)?));
    t.note("zeeman_scale[eV]", units::to_ev(level_structure::zeeman_scale(&env)));
    t.note("interleaving_onset", markers.interleaving_onset);
    t.note("ionization_onset", markers.ionization_onset);
    t.note("useful_range", markers.useful_range);
    Ok(t)
}

fn fluence(cfg: &RunConfig) -> anyhow::Result<Table> {
    let env = cfg.env()?;
    let mid = cfg.scheme.ladder.mid_level();
    let n = cfg.scheme.n_final;
    let spot = cfg.fluence.spot_fwhm_mm * units::MM;
    let k = cfg.fluence.overdrive;
    let legs = [
        (format!("1S-{}P", mid.n), constants::transition_wavelength(1, mid.n)?, saturation::fsat_line(GROUND, mid, &env)?),
        (
            format!("{}P-band(n={n},l={})", mid.n, cfg.scheme.final_l),
            constants::transition_wavelength(mid.n, n)?,
            saturation::fsat_band(mid, n, cfg.scheme.final_l)?,
        ),
    ];
    let mut t = Table::new(&[
        "leg",
        "transition",
        "lambda[nm]",
        "f_sat[uJ/cm2]",
        "pulse_energy[uJ]",
        "spot_fwhm[mm]",
        "overdrive",
    ]);
    for (i, (name, lam, fsat)) in legs.into_iter().enumerate() {
        let r = FluenceReport::new(fsat, spot, k)?;
        t.push(vec![
            (i as u32 + 1).into(),
            name.as_str().into(),
            (lam / units::NM).into(),
            (r.f_sat / units::UJ_PER_CM2).into(),
            (r.pulse_energy / units::UJ).into(),
            (r.spot_fwhm / units::MM).into(),
            r.overdrive.into(),
        ]);
    }
    Ok(t)
}

fn rate(cfg: &RunConfig, fsat: Option<f64>, steps: usize) -> anyhow::Result<Table> {
    let ladder = cfg.to_ladder()?;
    let pulse = ladder.pulses[0];
    let f_sat = match fsat {
        Some(v) => v * units::UJ_PER_CM2,
        None => saturation::fsat_line(GROUND, ladder.mid_level(), &ladder.env)?,
    };
    let series = saturation::rate_population_numeric(&pulse, f_sat, steps)?;
    let mut t = Table::new(&["t[ns]", "F[uJ/cm2]", "P_analytic", "P_numeric"]);
    for ((&time, &a), &nu) in series.times.iter().zip(&series.analytic).zip(&series.numeric) {
        t.push(vec![
            (time / units::NS).into(),
            (pulse.cumulative_fluence(time) / units::UJ_PER_CM2).into(),
            a.into(),
            nu.into(),
        ]);
    }
    t.note("f_sat[uJ/cm2]", f_sat / units::UJ_PER_CM2);
    t.note("max_abs_difference", series.max_abs_difference());
    Ok(t)
}

fn simulate(cfg: &RunConfig, single: bool, realization: u64, summary: Option<&Path>) -> anyhow::Result<Table> {
    let ladder = cfg.to_ladder()?;
    if single {
        let r = bloch::simulate_one(&ladder, realization)?;
        let mut t = Table::new(&["t[ns]", "p1", "p_mid", "p_ryd", "p_ion"]);
        for i in 0..r.len() {
            t.push(vec![
                (r.times[i] / units::NS).into(),
                r.p_ground[i].into(),
                r.p_mid[i].into(),
                r.p_ryd[i].into(),
                r.p_ion[i].into(),
            ]);
        }
        t.note("realization", realization);
        t.note("velocity[m/s]", r.velocity_sample);
        t.note("final_rydberg", r.final_rydberg());
        t.note("final_ionization", r.final_ionization());
        eprintln!("Rydberg {:.4}  ionized {:.5}  v = {:.1} m/s", r.final_rydberg(), r.final_ionization(), r.velocity_sample);
        return Ok(t);
    }
    let r = bloch::simulate_ensemble(&ladder)?;
    let mut t = Table::new(&["t[ns]", "p1", "p_mid", "p_ryd", "p_ion", "se_p1", "se_mid", "se_ryd", "se_ion"]);
    for i in 0..r.times.len() {
        t.push(vec![
            (r.times[i] / units::NS).into(),
            r.mean_ground[i].into(),
            r.mean_mid[i].into(),
            r.mean_ryd[i].into(),
            r.mean_ion[i].into(),
            r.se_ground[i].into(),
            r.se_mid[i].into(),
            r.se_ryd[i].into(),
            r.se_ion[i].into(),
        ]);
    }
    let s = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "tool": TOOL,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": r.seed,
        "config": Header::new("simulate", cfg).config,
        "n_realizations": r.n_realizations,
        "final_rydberg": r.final_rydberg,
        "final_rydberg_se": r.final_rydberg_se,
        "final_ionization": r.final_ionization,
        "final_ionization_se": r.final_ionization_se,
        "max_trace_error": r.max_trace_error,
    });
    for key in ["n_realizations", "final_rydberg", "final_rydberg_se", "final_ionization", "final_ionization_se"] {
        t.note(key, &s[key]);
    }
    if let Some(p) = summary {
        let mut w = BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?);
        serde_json::to_writer_pretty(&mut w, &s)?;
        writeln!(w)?;
    }
    eprintln!(
        "Rydberg {:.4} ± {:.4}  ionized {:.5} ± {:.5}  ({} realizations)",
        r.final_rydberg, r.final_rydberg_se, r.final_ionization, r.final_ionization_se, r.n_realizations
    );
    Ok(t)
}

fn scan_table(cfg: &RunConfig, axis: ScanAxis, values: &[f64], relative: bool) -> anyhow::Result<Table> {
    let points = scan::run(cfg, axis, values, relative)?;
    let mut t = Table::new(&[axis.label(relative), "p_ryd", "se_ryd", "p_ion", "se_ion"]);
    for p in &points {
        t.push(vec![
            p.value.into(),
            p.final_rydberg.into(),
            p.final_rydberg_se.into(),
            p.final_ionization.into(),
            p.final_ionization_se.into(),
        ]);
    }
    t.note("flat_within_2se", scan::is_flat(&points, 2.0));
    Ok(t)
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("PS_RYDBERG_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Error::config(format!("PS_RYDBERG_THREADS={v} is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    configure_threads()?;
    let cfg = resolve_config(&cli.common, &cli.command)?;
    let table = match &cli.command {
        Command::Structure { .. } => structure(&cfg)?,
        Command::Fluence { .. } => fluence(&cfg)?,
        Command::Rate { fsat, steps } => rate(&cfg, *fsat, *steps)?,
        Command::Simulate { single, realization, summary } => simulate(&cfg, *single, *realization, summary.as_deref())?,
        Command::Scan { axis, values, relative } => scan_table(&cfg, *axis, values, *relative)?,
    };
    let header = Header::new(cli.command.name(), &cfg);
    let format = cfg.output.format;
    match &cfg.output.path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?);
            table.write(&header, format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(&header, format, &mut w)?;
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Config(_)) | Some(Error::Domain(_)) | Some(Error::Forbidden(_)) | Some(Error::Json(_)) => 2,
        Some(Error::Convergence(_)) => 3,
        _ => 1,
    }
}

fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().any(|c| match c.downcast_ref::<io::Error>() {
        Some(e) => e.kind() == io::ErrorKind::BrokenPipe,
        None => match c.downcast_ref::<Error>() {
            Some(Error::Io(e)) => e.kind() == io::ErrorKind::BrokenPipe,
            Some(Error::Json(e)) => e.io_error_kind() == Some(io::ErrorKind::BrokenPipe),
            _ => false,
        },
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
