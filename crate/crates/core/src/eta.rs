//! Yang eta-pairing states and their pair-hopping (ODLRO) correlator.
//!
//! `eta_q^dagger = sum_j e^{i q j} c^dagger_{j,up} c^dagger_{j,down}` creates a
//! coherent on-site pair. Because the pair operators commute and square to
//! zero, `(eta^dagger)^k |0>` equals `k!` times the sum over all `k`-subsets
//! of occupied sites, so its norm is `k! * sqrt(C(n, k))` rather than
//! `sqrt(C(n, k))`. [`build_eta_state`] therefore divides by the computed norm.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::fock::{self, FockVector};

/// Parameters of `|k, n-k>_q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaSpec {
    n_sites: usize,
    k_pairs: usize,
    momentum_phase: f64,
}

impl EtaSpec {
    pub fn new(n_sites: usize, k_pairs: usize) -> Result<Self> {
        Self::with_phase(n_sites, k_pairs, 0.0)
    }

    pub fn with_phase(n_sites: usize, k_pairs: usize, momentum_phase: f64) -> Result<Self> {
        if n_sites == 0 {
            return domain("an eta state needs at least one site");
        }
        if k_pairs > n_sites {
            return domain(format!(
                "{k_pairs} pairs do not fit on {n_sites} sites (one pair per site)"
            ));
        }
        if !momentum_phase.is_finite() {
            return domain("momentum phase must be finite");
        }
        Ok(Self {
            n_sites,
            k_pairs,
            momentum_phase,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn k_pairs(&self) -> usize {
        self.k_pairs
    }

    pub fn momentum_phase(&self) -> f64 {
        self.momentum_phase
    }
}

/// Applies `eta_q^dagger` once.
pub fn apply_eta_dagger(state: &FockVector, q: f64) -> Result<FockVector> {
    let mut out = FockVector::zero(state.n_sites())?;
    for site in 0..state.n_sites() {
        let term = fock::apply_ops(state, &fock::pair_creation(site))?;
        let phase = Complex64::from_polar(1.0, q * site as f64);
        out = out.add_scaled(&term, phase)?;
    }
    Ok(out)
}

/// `(eta_q^dagger)^k |0>` without any normalization.
pub fn eta_power_on_vacuum(spec: &EtaSpec) -> Result<FockVector> {
    let mut state = FockVector::vacuum(spec.n_sites)?;
    for _ in 0..spec.k_pairs {
        state = apply_eta_dagger(&state, spec.momentum_phase)?;
    }
    Ok(state)
}

/// Normalized eta state, divided by its brute-force norm.
pub fn build_eta_state(spec: &EtaSpec) -> Result<FockVector> {
    eta_power_on_vacuum(spec)?.normalized()
}

/// `k(n-k) / (n(n-1))`, the exact pair correlator of the `q = 0` state.
pub fn odlro_closed_form(n: usize, k: usize) -> Result<f64> {
    if n < 2 {
        return domain("the pair correlator needs two distinct sites");
    }
    if k > n {
        return domain(format!("k = {k} exceeds n = {n}"));
    }
    let (n, k) = (n as f64, k as f64);
    Ok(k * (n - k) / (n * (n - 1.0)))
}

/// The large-`n` limit of [`odlro_closed_form`] at fixed filling `x = k/n`.
pub fn asymptotic_alpha(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return domain(format!("filling fraction {x} must lie in (0, 1)"));
    }
    Ok(x * (1.0 - x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdlroReport {
    pub site_i: usize,
    pub site_j: usize,
    pub correlator: Complex64,
    /// `k(n-k)/(n(n-1))`, present when the state has a definite pair number.
    pub closed_form: Option<f64>,
    /// `x(1-x)` with `x = k/n`, present when `0 < k < n`.
    pub alpha_limit: Option<f64>,
}

/// `<c^dagger_{j,up} c^dagger_{j,down} c_{i,down} c_{i,up}>`.
pub fn odlro_correlator(state: &FockVector, i: usize, j: usize) -> Result<OdlroReport> {
    if i == j {
        return domain("the on-site pair correlator is a density, not an off-diagonal element");
    }
    let mut ops = fock::pair_creation(j).to_vec();
    ops.extend(fock::pair_annihilation(i));
    let correlator = fock::expectation(state, &ops)?;

    let n = state.n_sites();
    let pairs = state
        .particle_number()
        .filter(|p| p % 2 == 0)
        .map(|p| p as usize / 2)
        .filter(|&k| k <= n);
    let closed_form = pairs.and_then(|k| odlro_closed_form(n, k).ok());
    let alpha_limit = pairs.and_then(|k| asymptotic_alpha(k as f64 / n as f64).ok());
    Ok(OdlroReport {
        site_i: i,
        site_j: j,
        correlator,
        closed_form,
        alpha_limit,
    })
}
