//! Spin correlations and small Hubbard-model exact diagonalization.
//!
//! `H = -t sum_<ij>,s (c^dagger_{i,s} c_{j,s} + h.c.) + U sum_i n_{i,up} n_{i,down}`
//! in the occupation basis of [`crate::fock`]. Dense matrices are indexed by
//! the occupation bitstring itself.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{capacity, domain, Error, Result};
use crate::eta::{self, EtaSpec};
use crate::fock::{self, annihilate, create, FockVector, ModeIndex, Spin};

/// Largest lattice for dense diagonalization (`4^6 = 4096` states).
pub const MAX_HUBBARD_SITES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Geometry {
    OpenChain,
    Ring,
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain" | "open-chain" => Ok(Geometry::OpenChain),
            "ring" => Ok(Geometry::Ring),
            other => domain(format!("unknown geometry '{other}'")),
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Geometry::OpenChain => "chain",
            Geometry::Ring => "ring",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubbardSpec {
    pub n_sites: usize,
    pub t: f64,
    pub u: f64,
    pub geometry: Geometry,
}

impl HubbardSpec {
    pub fn new(n_sites: usize, t: f64, u: f64, geometry: Geometry) -> Result<Self> {
        if n_sites < 2 {
            return domain("the Hubbard model needs at least two sites");
        }
        if n_sites > MAX_HUBBARD_SITES {
            return capacity(format!(
                "{n_sites} sites exceed the dense limit of {MAX_HUBBARD_SITES}"
            ));
        }
        if !t.is_finite() || !u.is_finite() {
            return domain("t and U must be finite");
        }
        Ok(Self {
            n_sites,
            t,
            u,
            geometry,
        })
    }

    /// Nearest-neighbour bonds; a two-site ring has the single bond `(0, 1)`.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.n_sites;
        let mut bonds: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        if self.geometry == Geometry::Ring && n > 2 {
            bonds.push((n - 1, 0));
        }
        bonds
    }
}

/// Nonzero entries `(column, H[row, column])` of the row for `bits`.
/// `H` is real symmetric, so this is also the action `H |bits>`.
fn hamiltonian_column(spec: &HubbardSpec, bits: u64) -> Vec<(u64, f64)> {
    let mut out = Vec::new();
    let doublons = (0..spec.n_sites)
        .filter(|&s| (bits >> (2 * s)) & 0b11 == 0b11)
        .count();
    if doublons > 0 && spec.u != 0.0 {
        out.push((bits, spec.u * doublons as f64));
    }
    if spec.t != 0.0 {
        for (i, j) in spec.bonds() {
            for spin in [Spin::Up, Spin::Down] {
                let (mi, mj) = (ModeIndex::new(i, spin), ModeIndex::new(j, spin));
                for ops in [[create(mi), annihilate(mj)], [create(mj), annihilate(mi)]] {
                    if let Some((image, sign)) = fock::ops_on_basis(bits, &ops) {
                        out.push((image, -spec.t * sign));
                    }
                }
            }
        }
    }
    out
}

/// Full `4^n x 4^n` Hamiltonian.
pub fn hubbard_hamiltonian(spec: &HubbardSpec) -> DMatrix<f64> {
    let dim = 1usize << (2 * spec.n_sites);
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for col in 0..dim {
        for (row, v) in hamiltonian_column(spec, col as u64) {
            h[(row as usize, col)] += v;
        }
    }
    h
}

/// Diagonal matrix of the total particle number.
pub fn number_operator(n_sites: usize) -> DMatrix<f64> {
    let dim = 1usize << (2 * n_sites);
    DMatrix::from_fn(
        dim,
        dim,
        |r, c| if r == c { r.count_ones() as f64 } else { 0.0 },
    )
}

/// Diagonal matrix of the total `S^z`.
pub fn total_sz_operator(n_sites: usize) -> DMatrix<f64> {
    let dim = 1usize << (2 * n_sites);
    DMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            sz_of_bits(r as u64, n_sites)
        } else {
            0.0
        }
    })
}

fn sz_of_bits(bits: u64, n_sites: usize) -> f64 {
    let up_mask: u64 = (0..n_sites).map(|s| 1u64 << (2 * s)).sum();
    let ups = (bits & up_mask).count_ones() as f64;
    let downs = (bits & (up_mask << 1)).count_ones() as f64;
    (ups - downs) / 2.0
}

/// `H |state>` without materializing `H`.
pub fn apply_hamiltonian(spec: &HubbardSpec, state: &FockVector) -> Result<FockVector> {
    if state.n_sites() != spec.n_sites {
        return domain(format!(
            "state has {} sites, Hamiltonian {}",
            state.n_sites(),
            spec.n_sites
        ));
    }
    let terms: Vec<(u64, Complex64)> = state
        .iter()
        .flat_map(|(bits, amp)| {
            hamiltonian_column(spec, bits)
                .into_iter()
                .map(move |(image, v)| (image, amp * v))
        })
        .collect();
    FockVector::from_terms(spec.n_sites, terms)
}

/// Occupation strings with `n_up` up and `n_down` down electrons.
pub fn sector_basis(n_sites: usize, n_up: usize, n_down: usize) -> Vec<u64> {
    (0..1u64 << (2 * n_sites))
        .filter(|&b| {
            let up_mask: u64 = (0..n_sites).map(|s| 1u64 << (2 * s)).sum();
            (b & up_mask).count_ones() as usize == n_up
                && (b & (up_mask << 1)).count_ones() as usize == n_down
        })
        .collect()
}

/// Ground energy and state in a fixed `(N_up, N_down)` sector.
pub fn sector_ground_state(
    spec: &HubbardSpec,
    n_up: usize,
    n_down: usize,
) -> Result<(f64, FockVector)> {
    if n_up > spec.n_sites || n_down > spec.n_sites {
        return domain("sector occupation exceeds the number of sites");
    }
    let basis = sector_basis(spec.n_sites, n_up, n_down);
    let index: HashMap<u64, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let dim = basis.len();
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for (col, &bits) in basis.iter().enumerate() {
        for (image, v) in hamiltonian_column(spec, bits) {
            h[(index[&image], col)] += v;
        }
    }
    let eig = SymmetricEigen::new(h);
    let ground = eig.eigenvalues.imin();
    let energy = eig.eigenvalues[ground];
    let vector = eig.eigenvectors.column(ground);
    let state = FockVector::from_terms(
        spec.n_sites,
        basis
            .iter()
            .zip(vector.iter())
            .map(|(&b, &a)| (b, Complex64::new(a, 0.0))),
    )?
    .normalized()?;
    Ok((energy, state))
}

/// Ground state at half filling (`n` electrons): `S^z = 0` for even `n`,
/// `S^z = +1/2` for odd `n`.
pub fn half_filling_ground_state(spec: &HubbardSpec) -> Result<(f64, FockVector)> {
    let n = spec.n_sites;
    sector_ground_state(spec, n.div_ceil(2), n / 2)
}

/// `<S^a_i S^a_j>` for `a = x, y, z` and their sum `<S_i . S_j>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinCorrelatorReport {
    pub i: usize,
    pub j: usize,
    pub czz: f64,
    pub cxx: f64,
    pub cyy: f64,
    pub total: f64,
}

fn raise(site: usize) -> [fock::LadderOp; 2] {
    [
        create(ModeIndex::up(site)),
        annihilate(ModeIndex::down(site)),
    ]
}

fn lower(site: usize) -> [fock::LadderOp; 2] {
    [
        create(ModeIndex::down(site)),
        annihilate(ModeIndex::up(site)),
    ]
}

fn number(mode: ModeIndex) -> [fock::LadderOp; 2] {
    [create(mode), annihilate(mode)]
}

fn expect_product(
    state: &FockVector,
    left: &[fock::LadderOp],
    right: &[fock::LadderOp],
) -> Result<f64> {
    let ops: Vec<_> = left.iter().chain(right).copied().collect();
    Ok(fock::expectation(state, &ops)?.re)
}

pub fn spin_correlator(state: &FockVector, i: usize, j: usize) -> Result<SpinCorrelatorReport> {
    if i == j {
        return domain("spin correlator needs two distinct sites; use onsite_spin_squared");
    }
    let (iu, id, ju, jd) = (
        ModeIndex::up(i),
        ModeIndex::down(i),
        ModeIndex::up(j),
        ModeIndex::down(j),
    );
    let czz = 0.25
        * (expect_product(state, &number(iu), &number(ju))?
            - expect_product(state, &number(iu), &number(jd))?
            - expect_product(state, &number(id), &number(ju))?
            + expect_product(state, &number(id), &number(jd))?);
    let pp = expect_product(state, &raise(i), &raise(j))?;
    let pm = expect_product(state, &raise(i), &lower(j))?;
    let mp = expect_product(state, &lower(i), &raise(j))?;
    let mm = expect_product(state, &lower(i), &lower(j))?;
    let cxx = 0.25 * (pp + pm + mp + mm);
    let cyy = -0.25 * (pp - pm - mp + mm);
    Ok(SpinCorrelatorReport {
        i,
        j,
        czz,
        cxx,
        cyy,
        total: czz + cxx + cyy,
    })
}

/// `<S^z_i>`.
pub fn site_sz(state: &FockVector, site: usize) -> Result<f64> {
    let up = fock::expectation(state, &number(ModeIndex::up(site)))?.re;
    let down = fock::expectation(state, &number(ModeIndex::down(site)))?.re;
    Ok((up - down) / 2.0)
}

/// `<S_i^2> = 3/4 <n_up + n_down - 2 n_up n_down>`.
pub fn onsite_spin_squared(state: &FockVector, site: usize) -> Result<f64> {
    let (u, d) = (ModeIndex::up(site), ModeIndex::down(site));
    let nu = fock::expectation(state, &number(u))?.re;
    let nd = fock::expectation(state, &number(d))?.re;
    let double = expect_product(state, &number(u), &number(d))?;
    Ok(0.75 * (nu + nd - 2.0 * double))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergPoint {
    pub u_over_t: f64,
    pub ground_energy: f64,
    /// `<S_0 . S_1>` in the ground state.
    pub spin_correlation: f64,
    /// `<c^dagger_{1,up} c^dagger_{1,down} c_{0,down} c_{0,up}>`.
    pub pair_correlator: f64,
}

/// Two-site half-filled ground state for each `U` in `u_list`.
pub fn heisenberg_limit_check(t: f64, u_list: &[f64]) -> Result<Vec<HeisenbergPoint>> {
    if t == 0.0 {
        return domain("hopping t must be nonzero (the t = 0 ground state is degenerate)");
    }
    u_list
        .par_iter()
        .map(|&u| {
            let spec = HubbardSpec::new(2, t, u, Geometry::OpenChain)?;
            let (ground_energy, state) = half_filling_ground_state(&spec)?;
            Ok(HeisenbergPoint {
                u_over_t: u / t,
                ground_energy,
                spin_correlation: spin_correlator(&state, 0, 1)?.total,
                pair_correlator: eta::odlro_correlator(&state, 0, 1)?.correlator.re,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaResidual {
    /// `<psi|H|psi>`.
    pub energy: f64,
    /// `|| H psi - E psi ||`.
    pub residual: f64,
}

/// How far `eta_q^k |0>` is from being an eigenstate of `H`.
///
/// On a ring the phase `e^{i q j}` must be single valued, i.e. `q n` a
/// multiple of `2 pi`; other combinations are rejected.
pub fn eta_eigenstate_residual(spec: &HubbardSpec, k: usize, q: f64) -> Result<EtaResidual> {
    if spec.geometry == Geometry::Ring {
        let winding = q * spec.n_sites as f64 / (2.0 * std::f64::consts::PI);
        if (winding - winding.round()).abs() > 1e-9 {
            return domain(format!(
                "q = {q} is not single valued on a ring of {} sites",
                spec.n_sites
            ));
        }
    }
    let psi = eta::build_eta_state(&EtaSpec::with_phase(spec.n_sites, k, q)?)?;
    let h_psi = apply_hamiltonian(spec, &psi)?;
    let energy = fock::inner_product(&psi, &h_psi)?.re;
    let diff = h_psi.add_scaled(&psi, Complex64::new(-energy, 0.0))?;
    Ok(EtaResidual {
        energy,
        residual: diff.norm(),
    })
}

/// Expectation of a dense real operator in a Fock state.
pub fn dense_expectation(op: &DMatrix<f64>, state: &FockVector) -> Result<f64> {
    let v = state.to_dense()?;
    if v.len() != op.nrows() {
        return domain("operator and state dimensions differ");
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (r, &x) in v.iter().enumerate() {
        if x.norm_sqr() == 0.0 {
            continue;
        }
        for (c, &y) in v.iter().enumerate() {
            acc += x.conj() * op[(r, c)] * y;
        }
    }
    Ok(acc.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn singlet() -> FockVector {
        let vac = FockVector::vacuum(2).unwrap();
        let a = fock::apply_ops(
            &vac,
            &[create(ModeIndex::up(0)), create(ModeIndex::down(1))],
        )
        .unwrap();
        let b = fock::apply_ops(
            &vac,
            &[create(ModeIndex::down(0)), create(ModeIndex::up(1))],
        )
        .unwrap();
        a.add_scaled(&b, Complex64::new(-1.0, 0.0))
            .unwrap()
            .scaled(Complex64::new(FRAC_1_SQRT_2, 0.0))
    }

    #[test]
    fn correlator_examples() {
        let eta = eta::build_eta_state(&EtaSpec::new(4, 2).unwrap()).unwrap();
        assert_abs_diff_eq!(
            spin_correlator(&eta, 0, 1).unwrap().total,
            0.0,
            epsilon = 1e-12
        );

        let r = spin_correlator(&singlet(), 0, 1).unwrap();
        assert_abs_diff_eq!(r.total, -0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(r.czz, -0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(r.cxx, -0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(r.cyy, -0.25, epsilon = 1e-12);

        let vac = FockVector::vacuum(3).unwrap();
        assert_eq!(spin_correlator(&vac, 0, 2).unwrap().total, 0.0);
        assert!(spin_correlator(&vac, 1, 1).is_err());
    }

    #[test]
    fn triplet_correlator() {
        // |up, up> has <S.S> = +1/4.
        let vac = FockVector::vacuum(2).unwrap();
        let s =
            fock::apply_ops(&vac, &[create(ModeIndex::up(0)), create(ModeIndex::up(1))]).unwrap();
        assert_abs_diff_eq!(
            spin_correlator(&s, 0, 1).unwrap().total,
            0.25,
            epsilon = 1e-12
        );
    }

    #[test]
    fn atomic_limit_is_diagonal() {
        let spec = HubbardSpec::new(2, 0.0, 4.0, Geometry::OpenChain).unwrap();
        let h = hubbard_hamiltonian(&spec);
        for r in 0..16 {
            for c in 0..16 {
                if r != c {
                    assert_eq!(h[(r, c)], 0.0);
                }
            }
            assert!([0.0, 4.0, 8.0].contains(&h[(r, r)]));
        }
        assert_eq!(h[(15, 15)], 8.0);
    }

    #[test]
    fn two_site_ground_energy() {
        let spec = HubbardSpec::new(2, 1.0, 8.0, Geometry::OpenChain).unwrap();
        let (e, _) = half_filling_ground_state(&spec).unwrap();
        assert_abs_diff_eq!(e, (8.0 - (64.0f64 + 16.0).sqrt()) / 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(e, -0.472_135_955, epsilon = 1e-8);
    }

    #[test]
    fn free_fermion_ground_energy() {
        // U = 0, 4-site open chain: single-particle levels -2t cos(pi m / 5).
        let spec = HubbardSpec::new(4, 1.0, 0.0, Geometry::OpenChain).unwrap();
        let levels: Vec<f64> = (1..=4)
            .map(|m| -2.0 * (PI * m as f64 / 5.0).cos())
            .collect();
        let expect = 2.0 * (levels[0] + levels[1]);
        let (e, _) = half_filling_ground_state(&spec).unwrap();
        assert_abs_diff_eq!(e, expect, epsilon = 1e-10);
    }

    #[test]
    fn hamiltonian_symmetries() {
        let spec = HubbardSpec::new(3, 1.0, 2.5, Geometry::Ring).unwrap();
        let h = hubbard_hamiltonian(&spec);
        assert!((&h - h.transpose()).amax() < 1e-12);
        let n = number_operator(3);
        let sz = total_sz_operator(3);
        assert!((&h * &n - &n * &h).amax() < 1e-12);
        assert!((&h * &sz - &sz * &h).amax() < 1e-12);
    }

    #[test]
    fn capacity_and_domain() {
        assert!(matches!(
            HubbardSpec::new(7, 1.0, 1.0, Geometry::Ring),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(
            HubbardSpec::new(1, 1.0, 1.0, Geometry::Ring),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn heisenberg_examples() {
        let pts = heisenberg_limit_check(1.0, &[0.0, 100.0]).unwrap();
        assert!(pts[0].spin_correlation > -0.75 + 1e-3);
        assert!((pts[1].spin_correlation + 0.75).abs() < 1e-2);
        assert!(pts[1].pair_correlator.abs() < 1e-2);
        assert!(heisenberg_limit_check(0.0, &[1.0]).is_err());
    }

    #[test]
    fn eta_residual_examples() {
        let spec = HubbardSpec::new(4, 1.0, 3.0, Geometry::Ring).unwrap();
        let r = eta_eigenstate_residual(&spec, 1, PI).unwrap();
        assert!(r.residual <= 1e-10);
        assert_abs_diff_eq!(r.energy, 3.0, epsilon = 1e-10);

        let r = eta_eigenstate_residual(&spec, 0, 0.0).unwrap();
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.energy, 0.0);

        let r = eta_eigenstate_residual(&spec, 1, 0.0).unwrap();
        assert!(r.residual > 1e-3);

        let odd = HubbardSpec::new(3, 1.0, 3.0, Geometry::Ring).unwrap();
        assert!(eta_eigenstate_residual(&odd, 1, PI).is_err());
        let chain = HubbardSpec::new(3, 1.0, 3.0, Geometry::OpenChain).unwrap();
        assert!(eta_eigenstate_residual(&chain, 1, PI).unwrap().residual <= 1e-10);
    }

    #[test]
    fn eta_states_have_no_local_moment() {
        let eta = eta::build_eta_state(&EtaSpec::new(4, 2).unwrap()).unwrap();
        for s in 0..4 {
            assert_abs_diff_eq!(site_sz(&eta, s).unwrap(), 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(onsite_spin_squared(&eta, s).unwrap(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn dense_and_sparse_hamiltonian_agree() {
        let spec = HubbardSpec::new(3, 0.7, 1.3, Geometry::Ring).unwrap();
        let psi = eta::build_eta_state(&EtaSpec::with_phase(3, 1, 0.4).unwrap()).unwrap();
        let h = hubbard_hamiltonian(&spec);
        let e_dense = dense_expectation(&h, &psi).unwrap();
        let e_sparse = fock::inner_product(&psi, &apply_hamiltonian(&spec, &psi).unwrap())
            .unwrap()
            .re;
        assert_abs_diff_eq!(e_dense, e_sparse, epsilon = 1e-12);
    }
}
