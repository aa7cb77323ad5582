use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;

use etapair_core::dicke::{
    block_entropy, block_entropy_numeric, two_site_abc, two_site_abc_exact,
    two_site_mutual_information, DickeSpec,
};
use etapair_core::eta::{build_eta_state, odlro_correlator, EtaSpec};
use etapair_core::field::{
    clamping_needed, complement, coupling_matrix, gaussian_block_entropy, ground_covariance,
    half_chain_entropy, symplectic_eigenvalues, HarmonicChainSpec,
};
use etapair_core::fock::{
    annihilate, apply_ladder, create, ops_on_basis, pair_creation, FockVector, Ladder, ModeIndex,
    PRUNE_THRESHOLD,
};
use etapair_core::gauge::{
    allowed_flux_set, apply_pair_exchange_phase, exchange_defect, psi_plus, symmetry_defect,
    PhaseSpec, PhysicalConstants, Topology,
};
use etapair_core::spin::{
    heisenberg_limit_check, hubbard_hamiltonian, number_operator, onsite_spin_squared, site_sz,
    total_sz_operator, Geometry, HubbardSpec,
};
use etapair_core::witness::{
    is_ppt, negativity, von_neumann_entropy, DensityMatrix, PPT_TOLERANCE,
};

fn ladder(kind: bool) -> Ladder {
    if kind {
        Ladder::Create
    } else {
        Ladder::Annihilate
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `[[e^{ia} cos t, e^{ib} sin t], [-e^{-ib} sin t, e^{-ia} cos t]]`.
fn su2(theta: f64, alpha: f64, beta: f64) -> DMatrix<Complex64> {
    let e = |x: f64| Complex64::from_polar(1.0, x);
    DMatrix::from_row_slice(
        2,
        2,
        &[
            e(alpha) * theta.cos(),
            e(beta) * theta.sin(),
            -e(-beta) * theta.sin(),
            e(-alpha) * theta.cos(),
        ],
    )
}

fn random_unitary(entries: &[(f64, f64)], dim: usize) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(dim, dim, |i, j| {
        let (re, im) = entries[i * dim + j];
        Complex64::new(re, im)
    });
    m.qr().q()
}

fn two_site_density(n: usize, k: usize) -> DensityMatrix {
    two_site_abc(&DickeSpec::new(n, k).unwrap())
        .unwrap()
        .to_rho()
        .to_density_matrix()
        .unwrap()
}

// Fock engine

proptest! {
    #[test]
    fn distinct_modes_anticommute(
        bits in 0u64..256,
        a in 0usize..8,
        b in 0usize..8,
        ka: bool,
        kb: bool,
    ) {
        prop_assume!(a != b);
        let op_a = (ModeIndex::from_linear(a), ladder(ka));
        let op_b = (ModeIndex::from_linear(b), ladder(kb));
        let ab = ops_on_basis(bits, &[op_b, op_a]);
        let ba = ops_on_basis(bits, &[op_a, op_b]);
        match (ab, ba) {
            (None, None) => {}
            (Some((x, sx)), Some((y, sy))) => {
                prop_assert_eq!(x, y);
                prop_assert_eq!(sx, -sy);
            }
            other => prop_assert!(false, "one ordering vanished: {:?}", other),
        }
    }

    #[test]
    fn double_creation_vanishes(bits in 0u64..256, mode in 0usize..8) {
        let m = ModeIndex::from_linear(mode);
        prop_assert!(ops_on_basis(bits, &[create(m), create(m)]).is_none());
        prop_assert!(ops_on_basis(bits, &[annihilate(m), annihilate(m)]).is_none());
    }

    #[test]
    fn ladder_keeps_vector_pruned_and_ordered(
        terms in prop::collection::vec((0u64..64, -1.0f64..1.0, -1.0f64..1.0), 1..12),
        mode in 0usize..6,
        kind: bool,
    ) {
        let v = FockVector::from_terms(3, terms.iter().map(|&(b, re, im)| (b, Complex64::new(re, im)))).unwrap();
        let out = apply_ladder(&v, ModeIndex::from_linear(mode), ladder(kind)).unwrap();
        let keys: Vec<u64> = out.iter().map(|(b, _)| b).collect();
        prop_assert!(keys.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(out.iter().all(|(_, a)| a.norm() >= PRUNE_THRESHOLD));
        prop_assert!(keys.iter().all(|&b| b < 64));
    }
}

#[test]
fn pair_creators_commute_exhaustively() {
    for n in 1..=4usize {
        for bits in 0u64..(1 << (2 * n)) {
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    let mut ij = pair_creation(j).to_vec();
                    ij.extend(pair_creation(i));
                    let mut ji = pair_creation(i).to_vec();
                    ji.extend(pair_creation(j));
                    assert_eq!(ops_on_basis(bits, &ij), ops_on_basis(bits, &ji));
                }
            }
        }
    }
}

// Eta states

#[test]
fn odlro_is_site_independent() {
    for n in 2..=5 {
        for k in 0..=n {
            let state = build_eta_state(&EtaSpec::new(n, k).unwrap()).unwrap();
            let reference = odlro_correlator(&state, 0, 1).unwrap().correlator;
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    let z = odlro_correlator(&state, i, j).unwrap().correlator;
                    assert_abs_diff_eq!((z - reference).norm(), 0.0, epsilon = 1e-12);
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn momentum_phase_keeps_correlator_magnitude(
        n in 2usize..=5,
        k_frac in 0.0f64..=1.0,
        q in -PI..PI,
        pair in (0usize..5, 0usize..5),
    ) {
        let k = (k_frac * n as f64).round() as usize;
        let (i, j) = (pair.0 % n, pair.1 % n);
        prop_assume!(i != j);
        let plain = build_eta_state(&EtaSpec::new(n, k).unwrap()).unwrap();
        let phased = build_eta_state(&EtaSpec::with_phase(n, k, q).unwrap()).unwrap();
        let a = odlro_correlator(&plain, i, j).unwrap().correlator.norm();
        let b = odlro_correlator(&phased, i, j).unwrap().correlator.norm();
        prop_assert!((a - b).abs() <= 1e-12);
    }
}

// Dicke two-site reduction

#[test]
fn weights_sum_to_one_exactly() {
    for n in 2..=60 {
        for k in 0..=n {
            let (a, b, cc) = two_site_abc_exact(&DickeSpec::new(n, k).unwrap()).unwrap();
            assert_eq!(a + b + cc, Ratio::from_integer(1), "n={n} k={k}");
        }
    }
}

#[test]
fn block_entropy_matches_spectrum() {
    for n in 2..=12 {
        for k in 0..=n {
            let spec = DickeSpec::new(n, k).unwrap();
            for m in 1..=6.min(n - 1) {
                let closed = block_entropy(&spec, m).unwrap();
                let numeric = block_entropy_numeric(&spec, m).unwrap();
                assert_abs_diff_eq!(closed, numeric, epsilon = 1e-10);
            }
        }
    }
}

#[test]
fn coherent_states_carry_mutual_information() {
    for n in 2..=20 {
        for k in 0..=n {
            let mi = two_site_mutual_information(&DickeSpec::new(n, k).unwrap()).unwrap();
            if (1..n).contains(&k) {
                assert!(mi > 0.0, "n={n} k={k}: {mi}");
            } else {
                assert_abs_diff_eq!(mi, 0.0, epsilon = 1e-12);
            }
        }
    }
}

// Witnesses

#[test]
fn ppt_iff_zero_negativity() {
    for n in 2..=30 {
        for k in 0..=n {
            let rho = two_site_density(n, k);
            assert_eq!(is_ppt(&rho), negativity(&rho) <= 1e-12, "n={n} k={k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn negativity_ignores_local_unitaries(
        n in 2usize..=12,
        k_frac in 0.0f64..=1.0,
        ua in (0.0..PI, -PI..PI, -PI..PI),
        ub in (0.0..PI, -PI..PI, -PI..PI),
    ) {
        let k = (k_frac * n as f64).round() as usize;
        let rho = two_site_density(n, k);
        let u = su2(ua.0, ua.1, ua.2).kronecker(&su2(ub.0, ub.1, ub.2));
        let rotated = DensityMatrix::new(&u * rho.matrix() * u.adjoint(), 2, 2).unwrap();
        prop_assert!((negativity(&rho) - negativity(&rotated)).abs() <= 1e-10);
    }

    #[test]
    fn entropy_is_basis_independent(
        weights in prop::collection::vec(0.0f64..1.0, 4),
        entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
    ) {
        let total: f64 = weights.iter().sum();
        prop_assume!(total > 1e-3);
        let diag = DMatrix::from_fn(4, 4, |i, j| if i == j { c(weights[i] / total) } else { c(0.0) });
        let u = random_unitary(&entries, 4);
        let rho = DensityMatrix::new(diag.clone(), 2, 2).unwrap();
        let conjugated = &u * diag * u.adjoint();
        // Round-off leaves the conjugate Hermitian only to ~1e-16.
        let conjugated = (&conjugated + conjugated.adjoint()) * c(0.5);
        let rotated = DensityMatrix::new(conjugated, 2, 2).unwrap();
        prop_assert!((von_neumann_entropy(&rho) - von_neumann_entropy(&rotated)).abs() < 1e-10);
        prop_assert_eq!(is_ppt(&rho), negativity(&rho) <= PPT_TOLERANCE);
    }
}

// Gauge

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn exchange_phase_is_2pi_periodic(phi in -10.0f64..10.0, n in 2usize..=10, k_frac in 0.0f64..=1.0) {
        let k = (k_frac * n as f64).round() as usize;
        let rho = two_site_abc(&DickeSpec::new(n, k).unwrap()).unwrap().to_rho();
        let a = apply_pair_exchange_phase(&rho, PhaseSpec(phi));
        let b = apply_pair_exchange_phase(&rho, PhaseSpec(phi + 2.0 * PI));
        let diff = (a.matrix() - b.matrix()).camax();
        prop_assert!(diff <= 1e-12);
    }

    #[test]
    fn defect_matches_state_vector_fidelity(phi in 0.0f64..(4.0 * PI)) {
        let spec = DickeSpec::new(6, 3).unwrap();
        let d = symmetry_defect(&spec, PhaseSpec(phi)).unwrap().value().unwrap();
        let ket = psi_plus();
        let moved: Vec<Complex64> = ket
            .iter()
            .zip([0.0, phi / 2.0, -phi / 2.0, 0.0])
            .map(|(z, t)| z * Complex64::from_polar(1.0, t))
            .collect();
        let overlap: Complex64 = ket.iter().zip(&moved).map(|(a, b)| a.conj() * b).sum();
        prop_assert!((d - (1.0 - overlap.norm_sqr())).abs() <= 1e-12);
        prop_assert!((d - exchange_defect(&ket, PhaseSpec(phi))).abs() <= 1e-12);
    }
}

#[test]
fn zero_defect_means_state_restored() {
    let rho = two_site_abc(&DickeSpec::new(4, 2).unwrap())
        .unwrap()
        .to_rho();
    let spec = DickeSpec::new(4, 2).unwrap();
    for step in 0..=40 {
        let phi = step as f64 * PI / 5.0;
        let d = symmetry_defect(&spec, PhaseSpec(phi))
            .unwrap()
            .value()
            .unwrap();
        let moved = apply_pair_exchange_phase(&rho, PhaseSpec(phi));
        let restored = (moved.matrix() - rho.matrix()).camax() <= 1e-12;
        assert_eq!(d <= 1e-12, restored, "phi={phi}");
    }
}

#[test]
fn annulus_fluxes_are_symmetric() {
    for constants in [
        PhysicalConstants::si(),
        PhysicalConstants::natural(),
        PhysicalConstants::gaussian(),
    ] {
        for max_n in 0..5 {
            let set = allowed_flux_set(Topology::Annulus, max_n, &constants);
            assert!(set.allowed_fluxes.contains(&0));
            for n in &set.allowed_fluxes {
                assert!(set.allowed_fluxes.contains(&-n));
            }
        }
    }
}

// Field

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn ground_state_is_pure(n in 2usize..60, mass in 0.001f64..2.0, spacing in 0.2f64..3.0) {
        let spec = HarmonicChainSpec::new(n, mass, spacing).unwrap();
        let cov = ground_covariance(&coupling_matrix(&spec)).unwrap();
        let all: Vec<usize> = (0..n).collect();
        for nu in symplectic_eigenvalues(&cov, &all).unwrap() {
            prop_assert!((nu - 0.5).abs() <= 1e-8);
        }
        let xp = &cov.x * &cov.p;
        let quarter = DMatrix::from_diagonal_element(n, n, 0.25);
        prop_assert!((xp - quarter).amax() <= 1e-8);
    }

    #[test]
    fn block_and_complement_agree(
        n in 4usize..40,
        mass in 0.01f64..1.0,
        picks in prop::collection::vec(any::<bool>(), 40),
    ) {
        let block: Vec<usize> = (0..n).filter(|&i| picks[i]).collect();
        prop_assume!(!block.is_empty() && block.len() < n);
        let spec = HarmonicChainSpec::new(n, mass, 1.0).unwrap();
        let cov = ground_covariance(&coupling_matrix(&spec)).unwrap();
        let a = gaussian_block_entropy(&cov, &block).unwrap();
        let b = gaussian_block_entropy(&cov, &complement(n, &block)).unwrap();
        prop_assert!((a - b).abs() <= 1e-6);
    }
}

#[test]
fn entropy_falls_with_mass() {
    let masses = [0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.3, 1.0];
    let entropies: Vec<f64> = masses
        .iter()
        .map(|&m| half_chain_entropy(&HarmonicChainSpec::new(200, m, 1.0).unwrap()).unwrap())
        .collect();
    for w in entropies.windows(2) {
        assert!(w[1] <= w[0], "{entropies:?}");
    }
}

#[test]
fn interior_blocks_need_no_clamping() {
    let n = 80;
    for mass in [1e-3, 1e-2, 0.1, 1.0] {
        let cov = ground_covariance(&coupling_matrix(
            &HarmonicChainSpec::new(n, mass, 1.0).unwrap(),
        ))
        .unwrap();
        for (start, len) in [(10, 2), (20, 10), (5, 40), (30, 20)] {
            let block: Vec<usize> = (start..start + len).collect();
            assert!(
                !clamping_needed(&cov, &block).unwrap(),
                "m={mass} block {start}+{len}"
            );
        }
    }
}

// Spin sector

#[test]
fn eta_states_have_no_local_moment() {
    for n in 1..=5 {
        for k in 0..=n {
            for q in [0.0, PI / 2.0, PI] {
                let state = build_eta_state(&EtaSpec::with_phase(n, k, q).unwrap()).unwrap();
                for site in 0..n {
                    assert_abs_diff_eq!(site_sz(&state, site).unwrap(), 0.0, epsilon = 1e-12);
                    assert_abs_diff_eq!(
                        onsite_spin_squared(&state, site).unwrap(),
                        0.0,
                        epsilon = 1e-12
                    );
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hubbard_conserves_number_and_sz(n in 2usize..=4, t in -2.0f64..2.0, u in -10.0f64..10.0, ring: bool) {
        let geometry = if ring { Geometry::Ring } else { Geometry::OpenChain };
        let h = hubbard_hamiltonian(&HubbardSpec::new(n, t, u, geometry).unwrap());
        for op in [number_operator(n), total_sz_operator(n)] {
            let commutator = &h * &op - &op * &h;
            prop_assert!(commutator.amax() <= 1e-12);
        }
    }
}

#[test]
fn heisenberg_limit_is_approached_monotonically() {
    let us = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0];
    let points = heisenberg_limit_check(1.0, &us).unwrap();
    for w in points.windows(2) {
        let (d0, d1) = (
            (w[0].spin_correlation + 0.75).abs(),
            (w[1].spin_correlation + 0.75).abs(),
        );
        assert!(d1 < d0, "{:?} -> {:?}", w[0], w[1]);
    }
}
