//! Fermionic Fock space over `2n` spin-orbital modes.
//!
//! A basis string is a `u64` whose bit `b` is the occupancy of linear mode
//! `b`, with mode `(site, spin)` mapped to `2 * site + spin`. Ladder
//! operators pick up the Jordan-Wigner parity `(-1)^N_<`, where `N_<` counts
//! the occupied modes with a strictly smaller linear index than the target.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{capacity, domain, Result};

/// Amplitudes with magnitude below this are dropped from a [`FockVector`].
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Tolerance on `sum |amp|^2 = 1` for a state to count as normalized.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Largest lattice that fits in a `u64` occupation string.
pub const MAX_SITES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    fn offset(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

/// A single spin-orbital `(site, spin)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex {
    pub site: usize,
    pub spin: Spin,
}

impl ModeIndex {
    pub fn new(site: usize, spin: Spin) -> Self {
        Self { site, spin }
    }

    pub fn up(site: usize) -> Self {
        Self::new(site, Spin::Up)
    }

    pub fn down(site: usize) -> Self {
        Self::new(site, Spin::Down)
    }

    /// Canonical linear index `2 * site + (0 | 1)`.
    pub fn linear(self) -> usize {
        2 * self.site + self.spin.offset()
    }

    pub fn from_linear(index: usize) -> Self {
        let spin = if index.is_multiple_of(2) {
            Spin::Up
        } else {
            Spin::Down
        };
        Self::new(index / 2, spin)
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.spin {
            Spin::Up => "up",
            Spin::Down => "down",
        };
        write!(f, "({}, {})", self.site, arrow)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    Create,
    Annihilate,
}

/// One factor of an operator product.
pub type LadderOp = (ModeIndex, Ladder);

pub fn create(mode: ModeIndex) -> LadderOp {
    (mode, Ladder::Create)
}

pub fn annihilate(mode: ModeIndex) -> LadderOp {
    (mode, Ladder::Annihilate)
}

/// Sparse state vector in the occupation-number basis.
///
/// Immutable once built: every operation returns a new vector. Keys are kept
/// in a `BTreeMap` so iteration follows the canonical bitstring order.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    n_sites: usize,
    amplitudes: BTreeMap<u64, Complex64>,
    normalized: bool,
}

impl FockVector {
    /// The zero vector (not a physical state).
    pub fn zero(n_sites: usize) -> Result<Self> {
        check_sites(n_sites)?;
        Ok(Self {
            n_sites,
            amplitudes: BTreeMap::new(),
            normalized: false,
        })
    }

    /// The vacuum `|0>`.
    pub fn vacuum(n_sites: usize) -> Result<Self> {
        Self::basis(n_sites, 0)
    }

    /// A single occupation string with amplitude one.
    pub fn basis(n_sites: usize, bits: u64) -> Result<Self> {
        Self::from_terms(n_sites, [(bits, Complex64::new(1.0, 0.0))])
    }

    /// Builds a state from `(bits, amplitude)` pairs, summing duplicates and
    /// pruning numerically-zero entries.
    pub fn from_terms<I>(n_sites: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Complex64)>,
    {
        check_sites(n_sites)?;
        let mask = mode_mask(n_sites);
        let mut amplitudes = BTreeMap::new();
        for (bits, amp) in terms {
            if bits & !mask != 0 {
                return domain(format!(
                    "basis string {bits:#b} has bits beyond {} modes",
                    2 * n_sites
                ));
            }
            *amplitudes.entry(bits).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        Ok(Self::from_map(n_sites, amplitudes))
    }

    fn from_map(n_sites: usize, mut amplitudes: BTreeMap<u64, Complex64>) -> Self {
        amplitudes.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
        let norm_sqr: f64 = amplitudes
            .values()
            .map(|a| a.norm_sqr())
            .fold(0.0, |acc, x| acc + x);
        Self {
            n_sites,
            amplitudes,
            normalized: (norm_sqr - 1.0).abs() <= NORM_TOLERANCE,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_modes(&self) -> usize {
        2 * self.n_sites
    }

    /// Number of stored (non-negligible) basis strings.
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn amplitude(&self, bits: u64) -> Complex64 {
        self.amplitudes
            .get(&bits)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Stored terms in canonical bitstring order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.amplitudes.iter().map(|(&b, &a)| (b, a))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes
            .values()
            .map(|a| a.norm_sqr())
            .fold(0.0, |acc, x| acc + x)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Returns the state divided by its norm.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm < PRUNE_THRESHOLD {
            return domain("cannot normalize the zero vector");
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let map = self
            .amplitudes
            .iter()
            .map(|(&b, &a)| (b, a * factor))
            .collect();
        Self::from_map(self.n_sites, map)
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &Self, factor: Complex64) -> Result<Self> {
        check_same_size(self, other)?;
        let mut map = self.amplitudes.clone();
        for (&b, &a) in &other.amplitudes {
            *map.entry(b).or_insert(Complex64::new(0.0, 0.0)) += factor * a;
        }
        Ok(Self::from_map(self.n_sites, map))
    }

    /// Total particle number if every stored string has the same popcount.
    pub fn particle_number(&self) -> Option<u32> {
        let mut counts = self.amplitudes.keys().map(|b| b.count_ones());
        let first = counts.next()?;
        counts.all(|c| c == first).then_some(first)
    }

    /// Dense amplitude vector of length `4^n`, indexed by bitstring.
    pub fn to_dense(&self) -> Result<Vec<Complex64>> {
        let dim = dense_dimension(self.n_sites)?;
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (&b, &a) in &self.amplitudes {
            out[b as usize] = a;
        }
        Ok(out)
    }

    pub fn from_dense(n_sites: usize, amplitudes: &[Complex64]) -> Result<Self> {
        let dim = dense_dimension(n_sites)?;
        if amplitudes.len() != dim {
            return domain(format!(
                "dense vector has length {}, expected {dim}",
                amplitudes.len()
            ));
        }
        Self::from_terms(
            n_sites,
            amplitudes.iter().enumerate().map(|(b, &a)| (b as u64, a)),
        )
    }
}

/// Hilbert-space dimension `4^n`, limited to what dense code in this crate
/// can hold (`n <= 12`).
pub fn dense_dimension(n_sites: usize) -> Result<usize> {
    if n_sites > 12 {
        return capacity(format!("dense Fock space for {n_sites} sites is too large"));
    }
    Ok(1usize << (2 * n_sites))
}

fn check_sites(n_sites: usize) -> Result<()> {
    if n_sites == 0 {
        return domain("a lattice needs at least one site");
    }
    if n_sites > MAX_SITES {
        return capacity(format!(
            "{n_sites} sites exceed the {MAX_SITES}-site occupation-string limit"
        ));
    }
    Ok(())
}

fn check_same_size(a: &FockVector, b: &FockVector) -> Result<()> {
    if a.n_sites != b.n_sites {
        return domain(format!(
            "states live on {} and {} sites",
            a.n_sites, b.n_sites
        ));
    }
    Ok(())
}

fn check_mode(n_sites: usize, mode: ModeIndex) -> Result<()> {
    if mode.site >= n_sites {
        return domain(format!(
            "mode {mode} is outside a lattice of {n_sites} sites"
        ));
    }
    Ok(())
}

fn mode_mask(n_sites: usize) -> u64 {
    if 2 * n_sites >= 64 {
        u64::MAX
    } else {
        (1u64 << (2 * n_sites)) - 1
    }
}

/// Action of one ladder operator on one basis string.
///
/// Returns the image string and its sign, or `None` when the operator kills
/// the string (Pauli exclusion or empty mode).
pub fn ladder_on_basis(bits: u64, mode: usize, kind: Ladder) -> Option<(u64, f64)> {
    let flag = 1u64 << mode;
    let occupied = bits & flag != 0;
    let image = match (kind, occupied) {
        (Ladder::Create, false) => bits | flag,
        (Ladder::Annihilate, true) => bits & !flag,
        _ => return None,
    };
    let below = (bits & (flag - 1)).count_ones();
    let sign = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
    Some((image, sign))
}

/// Applies a product of ladder operators (rightmost first) to a basis string.
pub fn ops_on_basis(bits: u64, ops: &[LadderOp]) -> Option<(u64, f64)> {
    ops.iter()
        .rev()
        .try_fold((bits, 1.0), |(b, s), &(mode, kind)| {
            ladder_on_basis(b, mode.linear(), kind).map(|(img, sign)| (img, s * sign))
        })
}

/// Applies `c^dagger_mode` or `c_mode` to every term of `state`.
pub fn apply_ladder(state: &FockVector, mode: ModeIndex, kind: Ladder) -> Result<FockVector> {
    apply_ops(state, &[(mode, kind)])
}

/// Applies an operator product to `state`; `ops[last]` acts first.
pub fn apply_ops(state: &FockVector, ops: &[LadderOp]) -> Result<FockVector> {
    for &(mode, _) in ops {
        check_mode(state.n_sites, mode)?;
    }
    let mut map: BTreeMap<u64, Complex64> = BTreeMap::new();
    for (&bits, &amp) in &state.amplitudes {
        if let Some((image, sign)) = ops_on_basis(bits, ops) {
            *map.entry(image).or_insert(Complex64::new(0.0, 0.0)) += amp * sign;
        }
    }
    Ok(FockVector::from_map(state.n_sites, map))
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner_product(a: &FockVector, b: &FockVector) -> Result<Complex64> {
    check_same_size(a, b)?;
    // Walk the smaller map and look up in the larger one.
    let (small, large, conj_small) = if a.len() <= b.len() {
        (a, b, true)
    } else {
        (b, a, false)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for (&bits, &x) in &small.amplitudes {
        if let Some(&y) = large.amplitudes.get(&bits) {
            acc += if conj_small {
                x.conj() * y
            } else {
                y.conj() * x
            };
        }
    }
    Ok(acc)
}

/// `<state| ops |state>` with the operators applied right to left.
pub fn expectation(state: &FockVector, ops: &[LadderOp]) -> Result<Complex64> {
    if !state.is_normalized() {
        return domain("expectation values need a normalized state");
    }
    let image = apply_ops(state, ops)?;
    inner_product(state, &image)
}

/// `P^dagger_i = c^dagger_{i,up} c^dagger_{i,down}`.
pub fn pair_creation(site: usize) -> [LadderOp; 2] {
    [create(ModeIndex::up(site)), create(ModeIndex::down(site))]
}

/// `P_i = c_{i,down} c_{i,up}`, the adjoint of [`pair_creation`].
pub fn pair_annihilation(site: usize) -> [LadderOp; 2] {
    [
        annihilate(ModeIndex::down(site)),
        annihilate(ModeIndex::up(site)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn linear_index_is_bijective() {
        for idx in 0..16 {
            assert_eq!(ModeIndex::from_linear(idx).linear(), idx);
        }
        assert_eq!(ModeIndex::down(3).linear(), 7);
    }

    #[test]
    fn create_on_vacuum() {
        let vac = FockVector::vacuum(1).unwrap();
        let s = apply_ladder(&vac, ModeIndex::up(0), Ladder::Create).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![(0b01, c(1.0))]);
        assert!(s.is_normalized());
    }

    #[test]
    fn annihilate_vacuum_is_zero() {
        let vac = FockVector::vacuum(1).unwrap();
        let s = apply_ladder(&vac, ModeIndex::up(0), Ladder::Annihilate).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn creation_order_flips_sign() {
        let vac = FockVector::vacuum(1).unwrap();
        let du = apply_ops(
            &vac,
            &[create(ModeIndex::down(0)), create(ModeIndex::up(0))],
        )
        .unwrap();
        let ud = apply_ops(
            &vac,
            &[create(ModeIndex::up(0)), create(ModeIndex::down(0))],
        )
        .unwrap();
        assert_eq!(du.len(), 1);
        assert_eq!(ud.len(), 1);
        assert_eq!(du.iter().next().unwrap().0, ud.iter().next().unwrap().0);
        assert_abs_diff_eq!(du.amplitude(0b11).re, -ud.amplitude(0b11).re);
    }

    #[test]
    fn anticommutator_on_single_site_basis() {
        // {c_a, c^dagger_b} = delta_ab on all 4 one-site strings.
        for bits in 0..4u64 {
            let s = FockVector::basis(1, bits).unwrap();
            for a in 0..2 {
                for b in 0..2 {
                    let ma = ModeIndex::from_linear(a);
                    let mb = ModeIndex::from_linear(b);
                    let x = apply_ops(&s, &[annihilate(ma), create(mb)]).unwrap();
                    let y = apply_ops(&s, &[create(mb), annihilate(ma)]).unwrap();
                    let sum = x.add_scaled(&y, c(1.0)).unwrap();
                    let expect = if a == b {
                        s.clone()
                    } else {
                        FockVector::zero(1).unwrap()
                    };
                    assert_eq!(
                        sum.iter().collect::<Vec<_>>(),
                        expect.iter().collect::<Vec<_>>()
                    );
                }
            }
        }
    }

    #[test]
    fn mode_out_of_range() {
        let vac = FockVector::vacuum(2).unwrap();
        let err = apply_ladder(&vac, ModeIndex::up(2), Ladder::Create).unwrap_err();
        assert!(matches!(err, crate::Error::Domain(_)));
    }

    #[test]
    fn inner_products() {
        let vac = FockVector::vacuum(1).unwrap();
        assert_eq!(inner_product(&vac, &vac).unwrap(), c(1.0));
        let up = apply_ladder(&vac, ModeIndex::up(0), Ladder::Create).unwrap();
        assert_eq!(inner_product(&vac, &up).unwrap(), c(0.0));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = FockVector::from_terms(1, [(0b01, c(h)), (0b10, c(h))]).unwrap();
        assert_abs_diff_eq!(inner_product(&psi, &psi).unwrap().re, 1.0, epsilon = 1e-15);
        let other = FockVector::vacuum(2).unwrap();
        assert!(inner_product(&vac, &other).is_err());
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_argument() {
        let a = FockVector::from_terms(1, [(0b01, Complex64::new(0.0, 1.0))]).unwrap();
        let b = FockVector::basis(1, 0b01).unwrap();
        assert_eq!(inner_product(&a, &b).unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(inner_product(&b, &a).unwrap(), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn number_operator_expectations() {
        let vac = FockVector::vacuum(1).unwrap();
        let up = apply_ladder(&vac, ModeIndex::up(0), Ladder::Create).unwrap();
        let n_up = [create(ModeIndex::up(0)), annihilate(ModeIndex::up(0))];
        assert_eq!(expectation(&up, &n_up).unwrap(), c(1.0));
        assert_eq!(expectation(&vac, &n_up).unwrap(), c(0.0));
    }

    #[test]
    fn pair_hop_on_two_site_eta_state() {
        let vac = FockVector::vacuum(2).unwrap();
        let p0 = apply_ops(&vac, &pair_creation(0)).unwrap();
        let p1 = apply_ops(&vac, &pair_creation(1)).unwrap();
        let psi = p0.add_scaled(&p1, c(1.0)).unwrap().normalized().unwrap();
        let mut ops = pair_creation(1).to_vec();
        ops.extend(pair_annihilation(0));
        assert_abs_diff_eq!(expectation(&psi, &ops).unwrap().re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn expectation_rejects_unnormalized() {
        let s = FockVector::from_terms(1, [(0, c(2.0))]).unwrap();
        assert!(expectation(&s, &[]).is_err());
    }

    #[test]
    fn pruning_drops_tiny_amplitudes() {
        let s = FockVector::from_terms(1, [(0, c(1.0)), (1, c(1e-15))]).unwrap();
        assert_eq!(s.len(), 1);
        let cancel = FockVector::from_terms(1, [(1, c(0.5)), (1, c(-0.5))]).unwrap();
        assert!(cancel.is_empty());
    }

    #[test]
    fn dense_round_trip() {
        let s = FockVector::from_terms(2, [(0b0011, c(0.6)), (0b1100, c(-0.8))]).unwrap();
        let dense = s.to_dense().unwrap();
        assert_eq!(dense.len(), 16);
        assert_eq!(FockVector::from_dense(2, &dense).unwrap(), s);
    }

    #[test]
    fn rejects_bits_outside_lattice() {
        assert!(FockVector::basis(1, 0b100).is_err());
        assert!(FockVector::vacuum(0).is_err());
        assert!(matches!(
            FockVector::vacuum(33),
            Err(crate::Error::Capacity(_))
        ));
    }
}
