//! Command-line front end. Every subcommand maps one library call (or a
//! parameter grid of them) to [`ReportRecord`] rows.

use std::f64::consts::PI;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::dicke::{self, DickeSpec};
use crate::error::{capacity, domain, Error, Result};
use crate::eta::{self, EtaSpec};
use crate::field;
use crate::gauge::{self, PhaseSpec, PhysicalConstants, Topology, UnitSystem};
use crate::report::{emit, Format, ReportRecord, Value};
use crate::spin::{self, Geometry, HubbardSpec};

/// Largest lattice the `odlro` subcommand brute-forces in Fock space.
const MAX_ODLRO_SITES: usize = 6;

#[derive(Debug, Parser)]
#[command(
    name = "etapair",
    version,
    about = "Eta-pairing entanglement experiments"
)]
struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv, global = true)]
    format: OutputFormat,
    /// Worker threads for parameter scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TopologyArg {
    SimplyConnected,
    Annulus,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum UnitsArg {
    Si,
    Natural,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GeometryArg {
    Chain,
    Ring,
}

impl From<GeometryArg> for Geometry {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Chain => Geometry::OpenChain,
            GeometryArg::Ring => Geometry::Ring,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Two-site reduced density matrix (a, b, c) and its PPT data.
    DickeRho {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Two-site PPT verdict and negativity for every (n, k).
    EntangledScan {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Entropy of the first m sites of a Dicke state.
    BlockEntropy {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Block size; all of 1..n-1 when omitted.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Pair correlator by brute force in Fock space (n <= 6).
    Odlro {
        #[arg(long)]
        n: usize,
        /// Number of pairs; all of 0..=n when omitted.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        i: usize,
        /// Second site; n-1 when omitted.
        #[arg(long)]
        j: Option<usize>,
        /// Momentum phase, e.g. 0, 0.3, pi, 0.5pi.
        #[arg(long, default_value = "0", value_parser = parse_phase)]
        q: f64,
    },
    /// Exchange-phase sweep of the symmetry defect.
    GaugeSwap {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 9)]
        points: usize,
        /// Upper end of the sweep, e.g. 4pi.
        #[arg(long, default_value = "4pi", value_parser = parse_phase)]
        phi_max: f64,
    },
    /// Fluxes compatible with a 2 pi exchange phase.
    FluxSet {
        #[arg(long, value_enum)]
        topology: TopologyArg,
        #[arg(long, value_enum, default_value_t = UnitsArg::Si)]
        units: UnitsArg,
        #[arg(long, default_value_t = 2)]
        max_n: u32,
    },
    /// Half-chain entropy of the massive scalar chain versus mass.
    FieldScan {
        #[arg(long, default_value_t = 400)]
        sites: usize,
        #[arg(long, default_value_t = 1.0)]
        spacing: f64,
        #[arg(long)]
        mass_min: f64,
        #[arg(long)]
        mass_max: f64,
        /// Log-spaced masses between the bounds.
        #[arg(long, default_value_t = 4)]
        points: usize,
    },
    /// Inter-site spin correlators of an eta state.
    SpinCorrelators {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value = "0", value_parser = parse_phase)]
        q: f64,
    },
    /// Half-filled Hubbard ground state for one or more U values.
    Hubbard {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Comma-separated list of U values.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        u: Vec<f64>,
        #[arg(long, value_enum, default_value_t = GeometryArg::Chain)]
        geometry: GeometryArg,
    },
    /// Eigenstate residual of eta_q^k |0> under the Hubbard Hamiltonian.
    EtaResidual {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 3.0)]
        u: f64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value = "pi", value_parser = parse_phase)]
        q: f64,
        #[arg(long, value_enum, default_value_t = GeometryArg::Ring)]
        geometry: GeometryArg,
    },
}

/// Parses `1.5`, `pi`, `-pi`, `0.5pi` into radians.
fn parse_phase(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let value = match s.strip_suffix("pi") {
        Some(coef) => {
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c
                    .parse::<f64>()
                    .map_err(|e| format!("bad phase '{s}': {e}"))?,
            };
            c * PI
        }
        None => s
            .parse::<f64>()
            .map_err(|e| format!("bad phase '{s}': {e}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("phase '{s}' is not finite"))
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the
/// process exit code: 0 success, 1 domain/capacity error, 2 usage error.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                return 2;
            }
            let _ = write!(stdout, "{rendered}");
            return 0;
        }
    };
    match execute(&cli) {
        Ok(text) => match stdout.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "etapair: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "etapair: {e}");
            1
        }
    }
}

fn execute(cli: &Cli) -> Result<String> {
    let format = match cli.format {
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Json => Format::Json,
    };
    let (records, header) = match cli.threads {
        Some(0) => return domain("--threads must be at least 1"),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(|| dispatch(&cli.command))?,
        None => dispatch(&cli.command)?,
    };
    emit(&records, format, header)
}

type Rows = (Vec<ReportRecord>, &'static [&'static str]);

fn dispatch(cmd: &Command) -> Result<Rows> {
    match *cmd {
        Command::DickeRho { n, k } => dicke_rho(n, k),
        Command::EntangledScan { n_min, n_max } => entangled_scan(n_min, n_max),
        Command::BlockEntropy { n, k, m } => block_entropy(n, k, m),
        Command::Odlro { n, k, i, j, q } => odlro(n, k, i, j, q),
        Command::GaugeSwap {
            n,
            k,
            points,
            phi_max,
        } => gauge_swap(n, k, points, phi_max),
        Command::FluxSet {
            topology,
            units,
            max_n,
        } => flux_set(topology, units, max_n),
        Command::FieldScan {
            sites,
            spacing,
            mass_min,
            mass_max,
            points,
        } => field_scan(sites, spacing, mass_min, mass_max, points),
        Command::SpinCorrelators { n, k, q } => spin_correlators(n, k, q),
        Command::Hubbard {
            n,
            t,
            ref u,
            geometry,
        } => hubbard(n, t, u, geometry.into()),
        Command::EtaResidual {
            n,
            t,
            u,
            k,
            q,
            geometry,
        } => eta_residual(n, t, u, k, q, geometry.into()),
    }
}

fn dicke_rho(n: usize, k: usize) -> Result<Rows> {
    let spec = DickeSpec::new(n, k)?;
    let abc = dicke::two_site_abc(&spec)?;
    let row = ReportRecord::new("dicke_rho")
        .param("n", n)
        .param("k", k)
        .result("a", abc.a)
        .result("b", abc.b)
        .result("c", abc.c)
        .result("min_pt_eigenvalue", abc.min_partial_transpose_eigenvalue())
        .result("negativity", dicke::two_site_negativity(&spec)?)
        .result("entangled", dicke::is_two_site_entangled_numeric(&spec)?);
    Ok((vec![row], &[]))
}

fn entangled_scan(n_min: usize, n_max: usize) -> Result<Rows> {
    if n_min < 2 || n_max < n_min {
        return domain(format!("need 2 <= n-min <= n-max, got {n_min}..{n_max}"));
    }
    let grid: Vec<(usize, usize)> = (n_min..=n_max)
        .flat_map(|n| (0..=n).map(move |k| (n, k)))
        .collect();
    let rows = grid
        .par_iter()
        .map(|&(n, k)| {
            let spec = DickeSpec::new(n, k)?;
            Ok(ReportRecord::new("entangled_scan")
                .param("n", n)
                .param("k", k)
                .result("entangled", dicke::is_two_site_entangled_numeric(&spec)?)
                .result("negativity", dicke::two_site_negativity(&spec)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rows, &["n", "k", "entangled", "negativity"]))
}

fn block_entropy(n: usize, k: usize, m: Option<usize>) -> Result<Rows> {
    let spec = DickeSpec::new(n, k)?;
    let sizes: Vec<usize> = match m {
        Some(m) => vec![m],
        None => (1..n).collect(),
    };
    let rows = sizes
        .into_iter()
        .map(|m| {
            Ok(ReportRecord::new("block_entropy")
                .param("n", n)
                .param("k", k)
                .param("m", m)
                .result("entropy", dicke::block_entropy(&spec, m)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rows, &["n", "k", "m", "entropy"]))
}

fn odlro(n: usize, k: Option<usize>, i: usize, j: Option<usize>, q: f64) -> Result<Rows> {
    if n > MAX_ODLRO_SITES {
        return capacity(format!(
            "odlro brute force is limited to n <= {MAX_ODLRO_SITES}"
        ));
    }
    if n < 2 {
        return domain("odlro needs at least two sites");
    }
    let j = j.unwrap_or(n - 1);
    if i >= n || j >= n {
        return domain(format!("sites ({i}, {j}) outside a lattice of {n}"));
    }
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (0..=n).collect(),
    };
    let rows = ks
        .par_iter()
        .map(|&k| {
            let state = eta::build_eta_state(&EtaSpec::with_phase(n, k, q)?)?;
            let report = eta::odlro_correlator(&state, i, j)?;
            let c = dicke::two_site_abc(&DickeSpec::new(n, k)?)?.c;
            Ok(ReportRecord::new("odlro")
                .param("n", n)
                .param("k", k)
                .param("i", i)
                .param("j", j)
                .param("q", q)
                .result("correlator_re", report.correlator.re)
                .result("correlator_im", report.correlator.im)
                .result("closed_form", report.closed_form)
                .result("c_half", c / 2.0)
                .result("alpha_limit", report.alpha_limit))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rows, &[]))
}

fn gauge_swap(n: usize, k: usize, points: usize, phi_max: f64) -> Result<Rows> {
    if points < 2 {
        return domain("a sweep needs at least two points");
    }
    let spec = DickeSpec::new(n, k)?;
    let rows = (0..points)
        .map(|p| {
            let phi = PhaseSpec(phi_max * p as f64 / (points - 1) as f64);
            let outcome = gauge::symmetry_defect(&spec, phi)?;
            let status = match outcome {
                gauge::DefectOutcome::Defect(_) => "constrained",
                gauge::DefectOutcome::Unconstrained => "unconstrained",
            };
            let fidelity_defect = spec
                .has_coherence()
                .then(|| gauge::exchange_defect(&gauge::psi_plus(), phi));
            Ok(ReportRecord::new("gauge_swap")
                .param("n", n)
                .param("k", k)
                .param("phi", phi.radians())
                .result("status", status)
                .result("defect", outcome.value())
                .result("fidelity_defect", fidelity_defect)
                .result("counter_defect", gauge::counter_example_defect(phi)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rows, &[]))
}

fn flux_set(topology: TopologyArg, units: UnitsArg, max_n: u32) -> Result<Rows> {
    let topology = match topology {
        TopologyArg::SimplyConnected => Topology::SimplyConnected,
        TopologyArg::Annulus => Topology::Annulus,
    };
    let units = match units {
        UnitsArg::Si => UnitSystem::Si,
        UnitsArg::Natural => UnitSystem::Natural,
    };
    let constants = PhysicalConstants::for_units(units);
    let report = gauge::allowed_flux_set(topology, max_n, &constants);
    let rows = report
        .allowed_fluxes
        .iter()
        .zip(&report.flux_values)
        .map(|(&n, &flux)| {
            ReportRecord::new("flux_set")
                .param("topology", topology.to_string())
                .param("units", units.to_string())
                .result("n", n)
                .result("flux", flux)
                .result("flux_quantum", report.flux_quantum)
                .result("exchange_phase", constants.exchange_phase(flux).radians())
                .result("b_field", report.allowed_b_field)
                .result("persistent_current", report.persistent_current)
        })
        .collect();
    Ok((rows, &[]))
}

fn field_scan(
    sites: usize,
    spacing: f64,
    mass_min: f64,
    mass_max: f64,
    points: usize,
) -> Result<Rows> {
    if points < 2 || !(mass_min > 0.0 && mass_max > mass_min) {
        return domain("need points >= 2 and 0 < mass-min < mass-max");
    }
    let ratio = mass_max / mass_min;
    let masses: Vec<f64> = (0..points)
        .map(|i| mass_min * ratio.powf(i as f64 / (points - 1) as f64))
        .collect();
    let fit = field::mass_scan_fit(sites, spacing, &masses)?;
    let base = |kind: &str| {
        ReportRecord::new("field_scan")
            .param("sites", sites)
            .param("spacing", spacing)
            .param("kind", kind)
    };
    let mut rows: Vec<ReportRecord> = fit
        .samples
        .iter()
        .map(|&(m, s)| {
            base("sample")
                .param("mass", m)
                .result("ln_inv_ma", (1.0 / (m * spacing)).ln())
                .result("entropy", s)
                .result("slope", Value::Missing)
                .result("intercept", Value::Missing)
                .result("r_squared", Value::Missing)
        })
        .collect();
    rows.push(
        base("fit")
            .param("mass", Value::Missing)
            .result("ln_inv_ma", Value::Missing)
            .result("entropy", Value::Missing)
            .result("slope", fit.slope)
            .result("intercept", fit.intercept)
            .result("r_squared", fit.r_squared),
    );
    Ok((rows, &[]))
}

fn spin_correlators(n: usize, k: usize, q: f64) -> Result<Rows> {
    if n > MAX_ODLRO_SITES {
        return capacity(format!(
            "spin-correlators is limited to n <= {MAX_ODLRO_SITES}"
        ));
    }
    let state = eta::build_eta_state(&EtaSpec::with_phase(n, k, q)?)?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|&(i, j)| {
            let r = spin::spin_correlator(&state, i, j)?;
            Ok(ReportRecord::new("spin_correlators")
                .param("n", n)
                .param("k", k)
                .param("q", q)
                .param("i", i)
                .param("j", j)
                .result("czz", r.czz)
                .result("cxx", r.cxx)
                .result("cyy", r.cyy)
                .result("total", r.total))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((
        rows,
        &["n", "k", "q", "i", "j", "czz", "cxx", "cyy", "total"],
    ))
}

fn hubbard(n: usize, t: f64, us: &[f64], geometry: Geometry) -> Result<Rows> {
    let rows = us
        .par_iter()
        .map(|&u| {
            let spec = HubbardSpec::new(n, t, u, geometry)?;
            let (energy, state) = spin::half_filling_ground_state(&spec)?;
            Ok(ReportRecord::new("hubbard")
                .param("n", n)
                .param("t", t)
                .param("u", u)
                .param("geometry", geometry.to_string())
                .result("ground_energy", energy)
                .result(
                    "spin_correlation_01",
                    spin::spin_correlator(&state, 0, 1)?.total,
                )
                .result(
                    "pair_correlator",
                    eta::odlro_correlator(&state, 0, n - 1)?.correlator.re,
                ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rows, &[]))
}

fn eta_residual(n: usize, t: f64, u: f64, k: usize, q: f64, geometry: Geometry) -> Result<Rows> {
    let spec = HubbardSpec::new(n, t, u, geometry)?;
    let r = spin::eta_eigenstate_residual(&spec, k, q)?;
    let row = ReportRecord::new("eta_residual")
        .param("n", n)
        .param("t", t)
        .param("u", u)
        .param("k", k)
        .param("q", q)
        .param("geometry", geometry.to_string())
        .result("energy", r.energy)
        .result("k_times_u", k as f64 * u)
        .result("residual", r.residual);
    Ok((vec![row], &[]))
}
