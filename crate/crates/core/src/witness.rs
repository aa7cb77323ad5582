//! Bipartite entanglement measures for small dense density matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{capacity, domain, Result};

/// Hermiticity and trace tolerance for a valid density matrix.
pub const MATRIX_TOLERANCE: f64 = 1e-12;

/// Eigenvalues in `(-PPT_TOLERANCE, 0)` count as zero in the PPT decision.
pub const PPT_TOLERANCE: f64 = 1e-10;

/// Spectrum entries below this are skipped by the entropy sum.
pub const ENTROPY_CUTOFF: f64 = 1e-14;

/// Largest dimension handled by the dense Hermitian eigensolver.
pub const MAX_DIMENSION: usize = 4096;

/// A validated density matrix with a bipartition `d = dim_a * dim_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
    dim_a: usize,
    dim_b: usize,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<Complex64>, dim_a: usize, dim_b: usize) -> Result<Self> {
        let d = matrix.nrows();
        if matrix.ncols() != d {
            return domain(format!("matrix is {}x{}, not square", d, matrix.ncols()));
        }
        if d > MAX_DIMENSION {
            return capacity(format!("dimension {d} exceeds {MAX_DIMENSION}"));
        }
        if dim_a == 0 || dim_b == 0 || dim_a * dim_b != d {
            return domain(format!(
                "bipartition {dim_a} x {dim_b} does not match dimension {d}"
            ));
        }
        let asym = (&matrix - matrix.adjoint()).camax();
        if asym > MATRIX_TOLERANCE {
            return domain(format!("matrix is not Hermitian (deviation {asym:e})"));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > MATRIX_TOLERANCE || trace.im.abs() > MATRIX_TOLERANCE {
            return domain(format!("trace is {trace}, expected 1"));
        }
        let min = hermitian_eigenvalues(&matrix)[0];
        if min < -PPT_TOLERANCE {
            return domain(format!("matrix has negative eigenvalue {min:e}"));
        }
        Ok(Self {
            matrix,
            dim_a,
            dim_b,
        })
    }

    /// A density matrix with no bipartition (`dim_b = 1`).
    pub fn unipartite(matrix: DMatrix<Complex64>) -> Result<Self> {
        let d = matrix.nrows();
        Self::new(matrix, d, 1)
    }

    /// `|psi><psi|` for a normalized vector.
    pub fn pure(psi: &[Complex64], dim_a: usize, dim_b: usize) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        Self::new(&v * v.adjoint(), dim_a, dim_b)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }
}

/// Ascending eigenvalues of a Hermitian matrix (lower triangle is used).
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Transposes the `B` factor of a `dim_a * dim_b` square matrix.
pub fn partial_transpose_matrix(
    m: &DMatrix<Complex64>,
    dim_a: usize,
    dim_b: usize,
) -> Result<DMatrix<Complex64>> {
    let d = m.nrows();
    if m.ncols() != d || dim_a * dim_b != d {
        return domain(format!(
            "bipartition {dim_a} x {dim_b} does not match a {}x{} matrix",
            d,
            m.ncols()
        ));
    }
    Ok(DMatrix::from_fn(d, d, |row, col| {
        let (a1, b1) = (row / dim_b, row % dim_b);
        let (a2, b2) = (col / dim_b, col % dim_b);
        m[(a1 * dim_b + b2, a2 * dim_b + b1)]
    }))
}

pub fn partial_transpose(rho: &DensityMatrix) -> DMatrix<Complex64> {
    partial_transpose_matrix(&rho.matrix, rho.dim_a, rho.dim_b)
        .expect("bipartition validated at construction")
}

/// Smallest eigenvalue of the partial transpose.
pub fn min_partial_transpose_eigenvalue(rho: &DensityMatrix) -> f64 {
    hermitian_eigenvalues(&partial_transpose(rho))[0]
}

/// Peres-Horodecki test: `true` when the partial transpose is PSD.
pub fn is_ppt(rho: &DensityMatrix) -> bool {
    min_partial_transpose_eigenvalue(rho) > -PPT_TOLERANCE
}

/// Sum of `|lambda|` over partial-transpose eigenvalues below `-PPT_TOLERANCE`.
pub fn negativity(rho: &DensityMatrix) -> f64 {
    hermitian_eigenvalues(&partial_transpose(rho))
        .into_iter()
        .filter(|&l| l < -PPT_TOLERANCE)
        .map(f64::abs)
        .fold(0.0, |acc, x| acc + x)
}

/// `-sum p ln p` over a probability spectrum, skipping `p < ENTROPY_CUTOFF`.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p >= ENTROPY_CUTOFF)
        .map(|&p| -p * p.ln())
        .fold(0.0, |acc, x| acc + x)
}

/// Von Neumann entropy in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(&rho.eigenvalues())
}

/// Reduced state of one factor of a bipartite density matrix.
pub fn partial_trace(rho: &DensityMatrix, keep_a: bool) -> DMatrix<Complex64> {
    let (da, db) = rho.dims();
    let m = rho.matrix();
    if keep_a {
        DMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|b| m[(i * db + b, j * db + b)]).sum()
        })
    } else {
        DMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|a| m[(a * db + i, a * db + j)]).sum()
        })
    }
}

/// `S(A) + S(B) - S(AB)`.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    let sa = von_neumann_entropy(&DensityMatrix::unipartite(partial_trace(rho, true))?);
    let sb = von_neumann_entropy(&DensityMatrix::unipartite(partial_trace(rho, false))?);
    Ok(sa + sb - von_neumann_entropy(rho))
}
