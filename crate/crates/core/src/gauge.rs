//! Pair-exchange Aharonov-Bohm phase and the constraints it puts on fields.
//!
//! Exchanging the pairs on two sites transports a charge-`2e` pair once
//! around a loop. On the two-site component `|01> + |10>` the two branches
//! travel in opposite directions, so their relative phase is
//! `Phi = (2e / hbar) * flux` (SI; `2e / (hbar c)` in Gaussian units).
//! Total symmetry of the state forces `e^{i Phi} = 1`.
//!
//! The module works with `Phi` directly and never integrates a vector
//! potential. Consequences:
//!
//! * simply connected region: every loop must carry `Phi in 2 pi Z` for
//!   arbitrarily small areas, so `B = 0` (Meissner);
//! * annulus: the flux through the hole is `n h / (2e)` (SI).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::dicke::{DickeSpec, TwoSiteRho};
use crate::error::{domain, Error, Result};

/// The loop phase `Phi` (radians) picked up on one pair exchange.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpec(pub f64);

impl PhaseSpec {
    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Multiplies the `|01><10|` coherence by `e^{i Phi}` (and its mirror by
/// `e^{-i Phi}`); diagonal entries are untouched.
pub fn apply_pair_exchange_phase(rho: &TwoSiteRho, phi: PhaseSpec) -> TwoSiteRho {
    let mut m = rho.matrix().clone();
    let u = Complex64::from_polar(1.0, phi.0);
    m[(1, 2)] *= u;
    m[(2, 1)] *= u.conj();
    // Conjugation by diag(1, 1, e^{-i Phi}, 1).
    m[(2, 0)] *= u.conj();
    m[(0, 2)] *= u;
    m[(2, 3)] *= u.conj();
    m[(3, 2)] *= u;
    TwoSiteRho::from_matrix(m).expect("phase conjugation preserves validity")
}

/// Phases `(0, +Phi/2, -Phi/2, 0)` picked up by `(|00>, |01>, |10>, |11>)`.
///
/// A pair moving from site 2 to site 1 picks up `+Phi/2`, one moving the
/// other way `-Phi/2`. `|01>` and `|10>` thus differ by `e^{i Phi}` (the
/// same sign as [`apply_pair_exchange_phase`]), while in `|11>` both pairs
/// move and the phases cancel.
fn exchange_phases(phi: PhaseSpec) -> [f64; 4] {
    [0.0, phi.0 / 2.0, -phi.0 / 2.0, 0.0]
}

/// Exchange applied to a two-site ket `(|00>, |01>, |10>, |11>)`.
pub fn exchange_ket(ket: &[Complex64; 4], phi: PhaseSpec) -> [Complex64; 4] {
    let phases = exchange_phases(phi);
    std::array::from_fn(|i| ket[i] * Complex64::from_polar(1.0, phases[i]))
}

/// `sin^2(x/2)`, exactly zero on multiples of `2 pi`.
fn half_angle_sin_sq(x: f64) -> f64 {
    let half = x / 2.0;
    (half - PI * (x / (2.0 * PI)).round()).sin().powi(2)
}

/// `1 - |<ket| U(Phi) |ket>|^2` for a normalized two-site ket.
///
/// Evaluated as `sum_{i,j} p_i p_j 2 sin^2((theta_i - theta_j)/2)` over the
/// populations `p`, which is nonnegative and exactly zero when all
/// populated phases agree.
pub fn exchange_defect(ket: &[Complex64; 4], phi: PhaseSpec) -> f64 {
    let phases = exchange_phases(phi);
    let pops: Vec<f64> = ket.iter().map(|z| z.norm_sqr()).collect();
    let mut total = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                total += 2.0 * pops[i] * pops[j] * half_angle_sin_sq(phases[i] - phases[j]);
            }
        }
    }
    total
}

/// `(|01> + |10>)/sqrt(2)`.
pub fn psi_plus() -> [Complex64; 4] {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    [z, h, h, z]
}

/// `(|00> + |11>)/sqrt(2)`, whose coherence is invisible to pair exchange.
pub fn phi_plus() -> [Complex64; 4] {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    [h, z, z, h]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DefectOutcome {
    /// `sin^2(Phi/2)`; zero exactly when `Phi` is a multiple of `2 pi`.
    Defect(f64),
    /// `k = 0` or `k = n`: no ODLRO, the phase is not constrained.
    Unconstrained,
}

impl DefectOutcome {
    pub fn value(self) -> Option<f64> {
        match self {
            DefectOutcome::Defect(d) => Some(d),
            DefectOutcome::Unconstrained => None,
        }
    }
}

/// Infidelity between the phase-shifted symmetric component and `psi+`.
pub fn symmetry_defect(spec: &DickeSpec, phi: PhaseSpec) -> Result<DefectOutcome> {
    if spec.n() < 2 {
        return domain("pair exchange needs two sites");
    }
    if !spec.has_coherence() {
        return Ok(DefectOutcome::Unconstrained);
    }
    Ok(DefectOutcome::Defect(half_angle_sin_sq(phi.0)))
}

/// Defect of the `|00> + |11>` counter-example; always zero.
pub fn counter_example_defect(phi: PhaseSpec) -> f64 {
    exchange_defect(&phi_plus(), phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    SimplyConnected,
    Annulus,
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simply-connected" | "simply_connected" => Ok(Topology::SimplyConnected),
            "annulus" => Ok(Topology::Annulus),
            other => domain(format!("unknown topology '{other}'")),
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::SimplyConnected => "simply-connected",
            Topology::Annulus => "annulus",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitSystem {
    /// CODATA 2018 exact SI values; flux in webers.
    Si,
    /// `hbar = c = e = 1`.
    Natural,
    /// CGS-Gaussian; flux in G cm^2.
    Gaussian,
}

impl FromStr for UnitSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "si" => Ok(UnitSystem::Si),
            "natural" => Ok(UnitSystem::Natural),
            "gaussian" => Ok(UnitSystem::Gaussian),
            other => domain(format!("unknown unit system '{other}'")),
        }
    }
}

impl fmt::Display for UnitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnitSystem::Si => "si",
            UnitSystem::Natural => "natural",
            UnitSystem::Gaussian => "gaussian",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub e: f64,
    pub h: f64,
    pub c_light: f64,
    pub units: UnitSystem,
}

impl PhysicalConstants {
    pub fn si() -> Self {
        Self {
            e: 1.602_176_634e-19,
            h: 6.626_070_15e-34,
            c_light: 299_792_458.0,
            units: UnitSystem::Si,
        }
    }

    pub fn natural() -> Self {
        Self {
            e: 1.0,
            h: 2.0 * PI,
            c_light: 1.0,
            units: UnitSystem::Natural,
        }
    }

    pub fn gaussian() -> Self {
        Self {
            // e [statC] = e [C] * c [cm/s] / 10
            e: 1.602_176_634e-19 * 2.997_924_58e10 / 10.0,
            h: 6.626_070_15e-27,
            c_light: 2.997_924_58e10,
            units: UnitSystem::Gaussian,
        }
    }

    pub fn for_units(units: UnitSystem) -> Self {
        match units {
            UnitSystem::Si => Self::si(),
            UnitSystem::Natural => Self::natural(),
            UnitSystem::Gaussian => Self::gaussian(),
        }
    }

    pub fn hbar(&self) -> f64 {
        self.h / (2.0 * PI)
    }

    /// Coefficient `2e/hbar` (SI, natural) or `2e/(hbar c)` (Gaussian)
    /// converting a flux into the pair-exchange phase.
    pub fn phase_per_flux(&self) -> f64 {
        let coupling = 2.0 * self.e / self.hbar();
        match self.units {
            UnitSystem::Gaussian => coupling / self.c_light,
            UnitSystem::Si | UnitSystem::Natural => coupling,
        }
    }

    /// The flux carrying a `2 pi` exchange phase: `h/2e` (SI), `hc/2e`
    /// (Gaussian), `pi` (natural).
    pub fn flux_quantum(&self) -> f64 {
        2.0 * PI / self.phase_per_flux()
    }

    pub fn exchange_phase(&self, flux: f64) -> PhaseSpec {
        PhaseSpec(self.phase_per_flux() * flux)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluxReport {
    pub topology: Topology,
    /// Field allowed inside the condensate itself.
    pub allowed_b_field: f64,
    /// Integers `n` with flux `n * flux_quantum`.
    pub allowed_fluxes: Vec<i64>,
    pub flux_values: Vec<f64>,
    pub flux_quantum: f64,
    /// Largest exchange defect over the allowed set.
    pub symmetry_defect: f64,
    /// Discrete flux admits no continuous decay of the supercurrent.
    pub persistent_current: bool,
}

/// Fluxes compatible with `e^{i Phi} = 1`.
pub fn allowed_flux_set(
    topology: Topology,
    max_n: u32,
    constants: &PhysicalConstants,
) -> FluxReport {
    let quantum = constants.flux_quantum();
    let allowed_fluxes: Vec<i64> = match topology {
        Topology::SimplyConnected => vec![0],
        Topology::Annulus => {
            let m = i64::from(max_n);
            (-m..=m).collect()
        }
    };
    let flux_values: Vec<f64> = allowed_fluxes.iter().map(|&n| n as f64 * quantum).collect();
    let symmetry_defect = flux_values
        .iter()
        .map(|&f| half_angle_sin_sq(constants.exchange_phase(f).0))
        .fold(0.0, f64::max);
    FluxReport {
        topology,
        allowed_b_field: 0.0,
        allowed_fluxes,
        flux_values,
        flux_quantum: quantum,
        symmetry_defect,
        persistent_current: topology == Topology::Annulus,
    }
}
