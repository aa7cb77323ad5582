//! Qubit picture of eta states: each site is a qubit, `0` empty and `1`
//! holding a pair. `|k, n-k>` is then the Dicke state with `k` excitations.
//!
//! Qubit ordering: site `s` of an `n`-qubit register is bit `n - 1 - s` of
//! the amplitude index, so the index written in binary reads site 0 first.
//! The same convention orders the reduced matrices of [`reduce_to_sites`]
//! (first listed site is the most significant).
//!
//! The two-site reduction of a Dicke state is
//!
//! ```text
//! rho_12 = a |11><11| + b |00><00| + c |psi+><psi+|,   psi+ = (|01> + |10>)/sqrt(2)
//! a = k(k-1)/(n(n-1)),  b = (n-k)(n-k-1)/(n(n-1)),  c = 2k(n-k)/(n(n-1))
//! ```
//!
//! `a` is the probability that both sites hold a pair and `b` that both are
//! empty; the coherence `c/2` sits between `|01>` and `|10>`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive};

use crate::error::{capacity, domain, Result};
use crate::witness::{self, DensityMatrix};

/// Largest register for which [`dicke_state`] materializes `2^n` amplitudes.
pub const MAX_DENSE_QUBITS: usize = 24;

/// Largest subsystem returned by [`reduce_to_sites`].
pub const MAX_REDUCED_SITES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DickeSpec {
    n: usize,
    k: usize,
}

impl DickeSpec {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return domain("a Dicke state needs at least one qubit");
        }
        if k > n {
            return domain(format!("k = {k} exceeds n = {n}"));
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `0 < k < n`: the state carries a `|01>`/`|10>` coherence.
    pub fn has_coherence(&self) -> bool {
        self.k > 0 && self.k < self.n
    }

    fn require_pair(&self) -> Result<()> {
        if self.n < 2 {
            return domain("two-site quantities need n >= 2");
        }
        Ok(())
    }
}

/// Equal-weight superposition of every weight-`k` bitstring.
pub fn dicke_state(spec: &DickeSpec) -> Result<Vec<Complex64>> {
    if spec.n > MAX_DENSE_QUBITS {
        return capacity(format!(
            "{} qubits exceed the dense limit of {MAX_DENSE_QUBITS}",
            spec.n
        ));
    }
    let count = binomial(spec.n as u64, spec.k as u64)
        .to_f64()
        .expect("binomial of at most 24 fits in f64");
    let amp = Complex64::new(count.sqrt().recip(), 0.0);
    let zero = Complex64::new(0.0, 0.0);
    Ok((0..1u64 << spec.n)
        .map(|idx| {
            if idx.count_ones() as usize == spec.k {
                amp
            } else {
                zero
            }
        })
        .collect())
}

/// Partial trace of a pure `n`-qubit state onto `sites` (in the given order).
pub fn reduce_to_sites(state: &[Complex64], sites: &[usize]) -> Result<DMatrix<Complex64>> {
    let len = state.len();
    if len < 2 || !len.is_power_of_two() {
        return domain(format!("state length {len} is not a power of two >= 2"));
    }
    let n = len.trailing_zeros() as usize;
    if sites.is_empty() {
        return domain("no sites to keep");
    }
    if sites.len() > MAX_REDUCED_SITES {
        return capacity(format!(
            "reducing to {} sites exceeds the limit of {MAX_REDUCED_SITES}",
            sites.len()
        ));
    }
    let mut seen = 0u64;
    for &s in sites {
        if s >= n {
            return domain(format!("site {s} is outside a {n}-qubit register"));
        }
        if seen & (1 << s) != 0 {
            return domain(format!("site {s} listed twice"));
        }
        seen |= 1 << s;
    }
    let masks: Vec<u64> = sites.iter().map(|&s| 1u64 << (n - 1 - s)).collect();
    let keep_mask: u64 = masks.iter().sum();

    // Group amplitudes by the state of the traced-out environment.
    let mut by_env: BTreeMap<u64, Vec<(usize, Complex64)>> = BTreeMap::new();
    for (idx, &amp) in state.iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let idx = idx as u64;
        let sub = masks
            .iter()
            .fold(0usize, |acc, &m| (acc << 1) | usize::from(idx & m != 0));
        by_env.entry(idx & !keep_mask).or_default().push((sub, amp));
    }

    let dim = 1usize << sites.len();
    let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
    for terms in by_env.values() {
        for &(r, x) in terms {
            for &(c, y) in terms {
                rho[(r, c)] += x * y.conj();
            }
        }
    }
    Ok(rho)
}

/// The `(a, b, c)` weights of the two-site reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSiteAbc {
    /// Weight of `|11><11|` (both sites paired).
    pub a: f64,
    /// Weight of `|00><00|` (both sites empty).
    pub b: f64,
    /// Weight of `|psi+><psi+|`.
    pub c: f64,
    /// Phase of the `|01><10|` coherence, radians.
    pub coherence_phase: f64,
}

impl TwoSiteAbc {
    /// Smallest partial-transpose eigenvalue, `(a + b - sqrt((a-b)^2 + c^2)) / 2`.
    pub fn min_partial_transpose_eigenvalue(&self) -> f64 {
        let (a, b, c) = (self.a, self.b, self.c);
        (a + b - ((a - b).powi(2) + c * c).sqrt()) / 2.0
    }

    /// Closed-form negativity, `max(0, -min_eigenvalue)`.
    pub fn negativity(&self) -> f64 {
        (-self.min_partial_transpose_eigenvalue()).max(0.0)
    }

    pub fn to_rho(&self) -> TwoSiteRho {
        TwoSiteRho::from_abc(self)
    }
}

pub fn two_site_abc(spec: &DickeSpec) -> Result<TwoSiteAbc> {
    let (a, b, c) = two_site_abc_exact(spec)?;
    let f = |r: Ratio<i128>| *r.numer() as f64 / *r.denom() as f64;
    Ok(TwoSiteAbc {
        a: f(a),
        b: f(b),
        c: f(c),
        coherence_phase: 0.0,
    })
}

/// `(a, b, c)` in exact rational arithmetic.
pub fn two_site_abc_exact(spec: &DickeSpec) -> Result<(Ratio<i128>, Ratio<i128>, Ratio<i128>)> {
    spec.require_pair()?;
    let (n, k) = (spec.n as i128, spec.k as i128);
    let den = n * (n - 1);
    Ok((
        Ratio::new(k * (k - 1), den),
        Ratio::new((n - k) * (n - k - 1), den),
        Ratio::new(2 * k * (n - k), den),
    ))
}

/// A 4x4 two-qubit density matrix in the basis `|00>, |01>, |10>, |11>`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSiteRho(DMatrix<Complex64>);

impl TwoSiteRho {
    pub fn from_abc(abc: &TwoSiteAbc) -> Self {
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        m[(0, 0)] = Complex64::new(abc.b, 0.0);
        m[(3, 3)] = Complex64::new(abc.a, 0.0);
        m[(1, 1)] = Complex64::new(abc.c / 2.0, 0.0);
        m[(2, 2)] = Complex64::new(abc.c / 2.0, 0.0);
        let coherence = Complex64::from_polar(abc.c / 2.0, abc.coherence_phase);
        m[(1, 2)] = coherence;
        m[(2, 1)] = coherence.conj();
        Self(m)
    }

    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.shape() != (4, 4) {
            return domain(format!("two-site matrix must be 4x4, got {:?}", m.shape()));
        }
        DensityMatrix::new(m.clone(), 2, 2)?;
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    /// The `|01><10|` element.
    pub fn coherence(&self) -> Complex64 {
        self.0[(1, 2)]
    }

    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.0.clone(), 2, 2)
    }
}

/// Closed-form PPT verdict: entangled iff `0 < k < n` and
/// `(k-1)(n-k-1) < k(n-k)`.
///
/// The bare inequality also holds at `k = 0` and `k = n`, where both sides
/// come from dividing `ab < c^2/4` by `k(n-k) = 0`; those product states are
/// excluded explicitly.
pub fn is_two_site_entangled(spec: &DickeSpec) -> Result<bool> {
    spec.require_pair()?;
    let (n, k) = (spec.n as i128, spec.k as i128);
    Ok(k * (n - k) > 0 && (k - 1) * (n - k - 1) < k * (n - k))
}

/// Numeric PPT verdict on the assembled two-site matrix.
pub fn is_two_site_entangled_numeric(spec: &DickeSpec) -> Result<bool> {
    let rho = two_site_abc(spec)?.to_rho().to_density_matrix()?;
    Ok(!witness::is_ppt(&rho))
}

/// Negativity of the two-site reduction from the eigensolver.
pub fn two_site_negativity(spec: &DickeSpec) -> Result<f64> {
    let rho = two_site_abc(spec)?.to_rho().to_density_matrix()?;
    Ok(witness::negativity(&rho))
}

/// Mutual information between two sites, in nats.
pub fn two_site_mutual_information(spec: &DickeSpec) -> Result<f64> {
    witness::mutual_information(&two_site_abc(spec)?.to_rho().to_density_matrix()?)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `p_j = C(m, j) C(n-m, k-j) / C(n, k)` for `j = 0..=m`.
pub fn hypergeometric_weights(spec: &DickeSpec, m: usize) -> Result<Vec<f64>> {
    if m == 0 || m >= spec.n {
        return domain(format!("block size {m} must lie in 1..{}", spec.n));
    }
    let (n, k, m) = (spec.n as u64, spec.k as u64, m as u64);
    let total = BigInt::from(binomial(n, k));
    Ok((0..=m)
        .map(|j| {
            let count = if j > k {
                BigUint::default()
            } else {
                binomial(m, j) * binomial(n - m, k - j)
            };
            BigRational::new(BigInt::from(count), total.clone())
                .to_f64()
                .unwrap_or(0.0)
        })
        .collect())
}

/// Entanglement entropy (nats) between the first `m` sites and the rest.
///
/// The Dicke state Schmidt-decomposes into `|j, m-j> (x) |k-j, n-m-k+j>`
/// with weights `p_j`, so the entropy is the Shannon entropy of the
/// hypergeometric distribution.
pub fn block_entropy(spec: &DickeSpec, m: usize) -> Result<f64> {
    Ok(witness::shannon_entropy(&hypergeometric_weights(spec, m)?))
}

/// Same quantity from the spectrum of the brute-force reduction.
pub fn block_entropy_numeric(spec: &DickeSpec, m: usize) -> Result<f64> {
    if m == 0 || m >= spec.n {
        return domain(format!("block size {m} must lie in 1..{}", spec.n));
    }
    let sites: Vec<usize> = (0..m).collect();
    let rho = reduce_to_sites(&dicke_state(spec)?, &sites)?;
    Ok(witness::von_neumann_entropy(&DensityMatrix::unipartite(
        rho,
    )?))
}
