//! Entanglement entropy of a lattice-discretized 1+1d massive scalar field.
//!
//! The chain `H = 1/2 sum_i pi_i^2 + 1/2 phi^T K phi` has a Gaussian ground
//! state with `X = <phi phi^T> = K^{-1/2}/2` and `P = <pi pi^T> = K^{1/2}/2`.
//! The entropy of a block `B` follows from the symplectic eigenvalues
//! `nu = sqrt(eig(X_B P_B))`, each contributing
//! `(nu + 1/2) ln(nu + 1/2) - (nu - 1/2) ln(nu - 1/2)`.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{domain, Result};

/// Symplectic eigenvalues this close below `1/2` are clamped to `1/2`.
pub const CLAMP_TOLERANCE: f64 = 1e-8;

/// Deficits below 1/2 smaller than this are eigensolver round-off
/// (observed around 1e-15) and do not count as clamping.
pub const ROUNDOFF_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Field pinned to zero just outside both ends.
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicChainSpec {
    n_osc: usize,
    mass: f64,
    spacing: f64,
    boundary: Boundary,
}

impl HarmonicChainSpec {
    /// Dirichlet chain of `n_osc` sites with lattice spacing `spacing`.
    pub fn new(n_osc: usize, mass: f64, spacing: f64) -> Result<Self> {
        if n_osc == 0 {
            return domain("a chain needs at least one oscillator");
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return domain(format!("mass must be positive and finite, got {mass}"));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return domain(format!("lattice spacing must be positive, got {spacing}"));
        }
        Ok(Self {
            n_osc,
            mass,
            spacing,
            boundary: Boundary::Dirichlet,
        })
    }

    pub fn n_osc(&self) -> usize {
        self.n_osc
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }
}

/// Tridiagonal `K` with `m^2 + 2/a^2` on the diagonal and `-1/a^2` beside it.
pub fn coupling_matrix(spec: &HarmonicChainSpec) -> DMatrix<f64> {
    let n = spec.n_osc;
    let inv_a2 = spec.spacing.powi(2).recip();
    let diag = spec.mass.powi(2) + 2.0 * inv_a2;
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag
        } else if i.abs_diff(j) == 1 {
            -inv_a2
        } else {
            0.0
        }
    })
}

/// Position and momentum two-point functions of a Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceData {
    pub x: DMatrix<f64>,
    pub p: DMatrix<f64>,
}

impl CovarianceData {
    pub fn dimension(&self) -> usize {
        self.x.nrows()
    }
}

/// Ground-state covariances `X = K^{-1/2}/2`, `P = K^{1/2}/2`.
pub fn ground_covariance(k: &DMatrix<f64>) -> Result<CovarianceData> {
    let n = k.nrows();
    if n == 0 || k.ncols() != n {
        return domain("coupling matrix must be square and nonempty");
    }
    let scale = k.amax().max(1.0);
    if (k - k.transpose()).amax() > 1e-12 * scale {
        return domain("coupling matrix is not symmetric");
    }
    let eig = SymmetricEigen::new(k.clone());
    let min = eig.eigenvalues.min();
    if min <= 0.0 {
        return domain(format!(
            "coupling matrix is not positive definite (min eigenvalue {min:e})"
        ));
    }
    let v = &eig.eigenvectors;
    let spectral = |f: &dyn Fn(f64) -> f64| {
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(f));
        let m = v * d * v.transpose();
        (&m + m.transpose()) * 0.5
    };
    Ok(CovarianceData {
        x: spectral(&|w| 0.5 / w.sqrt()),
        p: spectral(&|w| 0.5 * w.sqrt()),
    })
}

fn check_block(dim: usize, block: &[usize], allow_full: bool) -> Result<()> {
    if block.is_empty() {
        return domain("block is empty");
    }
    if !allow_full && block.len() >= dim {
        return domain("block must be a proper subset of the chain");
    }
    let mut seen = vec![false; dim];
    for &i in block {
        if i >= dim {
            return domain(format!("index {i} outside a chain of {dim}"));
        }
        if std::mem::replace(&mut seen[i], true) {
            return domain(format!("index {i} repeated in block"));
        }
    }
    Ok(())
}

fn restrict(m: &DMatrix<f64>, block: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(block.len(), block.len(), |r, c| m[(block[r], block[c])])
}

/// Unclamped `sqrt(eig(X_B P_B))`, ascending.
///
/// With `X_B = L L^T`, `X_B P_B` is similar to the symmetric `L^T P_B L`.
fn raw_symplectic_eigenvalues(cov: &CovarianceData, block: &[usize]) -> Result<Vec<f64>> {
    let xb = restrict(&cov.x, block);
    let pb = restrict(&cov.p, block);
    let chol = Cholesky::new(xb).ok_or_else(|| {
        crate::Error::Domain("position covariance of the block is not positive definite".into())
    })?;
    let l = chol.l();
    let m = l.transpose() * pb * &l;
    let m = (&m + m.transpose()) * 0.5;
    let mut nu: Vec<f64> = m
        .symmetric_eigenvalues()
        .iter()
        .map(|&e| e.max(0.0).sqrt())
        .collect();
    nu.sort_by(f64::total_cmp);
    Ok(nu)
}

/// Symplectic eigenvalues of the block, clamped into `[1/2, inf)`.
///
/// Values in `[1/2 - CLAMP_TOLERANCE, 1/2)` become `1/2`; anything lower
/// violates the uncertainty relation and is rejected.
pub fn symplectic_eigenvalues(cov: &CovarianceData, block: &[usize]) -> Result<Vec<f64>> {
    check_block(cov.dimension(), block, true)?;
    raw_symplectic_eigenvalues(cov, block)?
        .into_iter()
        .map(|nu| {
            if nu >= 0.5 {
                Ok(nu)
            } else if nu >= 0.5 - CLAMP_TOLERANCE {
                Ok(0.5)
            } else {
                domain(format!("symplectic eigenvalue {nu} is below 1/2"))
            }
        })
        .collect()
}

/// Whether clamping moved any symplectic eigenvalue of the block by more
/// than `ROUNDOFF_TOLERANCE`.
pub fn clamping_needed(cov: &CovarianceData, block: &[usize]) -> Result<bool> {
    check_block(cov.dimension(), block, true)?;
    Ok(raw_symplectic_eigenvalues(cov, block)?
        .iter()
        .any(|&nu| nu < 0.5 - ROUNDOFF_TOLERANCE))
}

/// Entropy (nats) of one bosonic mode with symplectic eigenvalue `nu >= 1/2`.
pub fn mode_entropy(nu: f64) -> f64 {
    let plus = nu + 0.5;
    let minus = nu - 0.5;
    let tail = if minus > 0.0 { minus * minus.ln() } else { 0.0 };
    (plus * plus.ln() - tail).max(0.0)
}

/// Von Neumann entropy of the reduced Gaussian state on `block`.
pub fn gaussian_block_entropy(cov: &CovarianceData, block: &[usize]) -> Result<f64> {
    check_block(cov.dimension(), block, false)?;
    Ok(symplectic_eigenvalues(cov, block)?
        .into_iter()
        .map(mode_entropy)
        .fold(0.0, |acc, x| acc + x))
}

/// Indices not in `block`.
pub fn complement(dim: usize, block: &[usize]) -> Vec<usize> {
    (0..dim).filter(|i| !block.contains(i)).collect()
}

/// Entropy of the left half `0..n/2` of the chain's ground state.
pub fn half_chain_entropy(spec: &HarmonicChainSpec) -> Result<f64> {
    if spec.n_osc < 2 {
        return domain("a half-chain cut needs at least two oscillators");
    }
    let cov = ground_covariance(&coupling_matrix(spec))?;
    let half: Vec<usize> = (0..spec.n_osc / 2).collect();
    gaussian_block_entropy(&cov, &half)
}

/// Least-squares line through `(ln(1/(m a)), S)` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyFit {
    /// `(mass, entropy)` in input order.
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y = slope * x + intercept` with its `r^2`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return domain("a line fit needs at least two paired samples");
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx <= f64::EPSILON * n * mx.abs().max(1.0).powi(2) {
        return domain("degenerate fit: all abscissae are equal");
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok((slope, intercept, r_squared))
}

/// Half-chain entropy for each mass and its fit against `ln(1/(m a))`.
///
/// Every mass must sit inside the scaling window `1/n < m a < 1`.
pub fn mass_scan_fit(n_osc: usize, spacing: f64, masses: &[f64]) -> Result<EntropyFit> {
    if masses.len() < 4 {
        return domain(format!(
            "a mass scan needs at least 4 masses, got {}",
            masses.len()
        ));
    }
    let specs = masses
        .iter()
        .map(|&m| {
            let spec = HarmonicChainSpec::new(n_osc, m, spacing)?;
            let ma = m * spacing;
            if !(ma > 1.0 / n_osc as f64 && ma < 1.0) {
                return domain(format!(
                    "m a = {ma} lies outside the scaling window (1/{n_osc}, 1)"
                ));
            }
            Ok(spec)
        })
        .collect::<Result<Vec<_>>>()?;

    let xs: Vec<f64> = masses.iter().map(|&m| (1.0 / (m * spacing)).ln()).collect();
    if linear_fit(&xs, &xs).is_err() {
        return domain("degenerate fit: all masses are equal");
    }
    let entropies = specs
        .par_iter()
        .map(half_chain_entropy)
        .collect::<Result<Vec<_>>>()?;
    let (slope, intercept, r_squared) = linear_fit(&xs, &entropies)?;
    Ok(EntropyFit {
        samples: masses.iter().copied().zip(entropies).collect(),
        slope,
        intercept,
        r_squared,
    })
}
