//! Python bindings: `import etapair`.
//!
//! Library errors surface as `ValueError`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use etapair_core::{dicke, eta, field, fock, gauge, spin};

fn py_err(e: etapair_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = etapair_core::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(py_err)
}

/// Sparse state over the `4^n` Fock strings of `n` sites.
#[pyclass(name = "FockVector", frozen)]
struct PyFockVector {
    inner: fock::FockVector,
}

#[pymethods]
impl PyFockVector {
    #[staticmethod]
    fn vacuum(n_sites: usize) -> PyResult<Self> {
        Ok(Self {
            inner: fock::FockVector::vacuum(n_sites).map_err(py_err)?,
        })
    }

    #[getter]
    fn n_sites(&self) -> usize {
        self.inner.n_sites()
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn is_normalized(&self) -> bool {
        self.inner.is_normalized()
    }

    fn particle_number(&self) -> Option<u32> {
        self.inner.particle_number()
    }

    /// `[(bits, amplitude), ...]` in ascending bit order; mode `2*site + spin`.
    fn amplitudes(&self) -> Vec<(u64, Complex64)> {
        self.inner.iter().collect()
    }

    fn amplitude(&self, bits: u64) -> Complex64 {
        self.inner.amplitude(bits)
    }

    fn normalized(&self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.normalized().map_err(py_err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "FockVector(n_sites={}, terms={})",
            self.inner.n_sites(),
            self.inner.len()
        )
    }
}

/// Normalized `(eta_q^dagger)^k |0>` on `n` sites.
#[pyfunction]
#[pyo3(signature = (n, k, q = 0.0))]
fn eta_state(n: usize, k: usize, q: f64) -> PyResult<PyFockVector> {
    let spec = eta::EtaSpec::with_phase(n, k, q).map_err(py_err)?;
    Ok(PyFockVector {
        inner: eta::build_eta_state(&spec).map_err(py_err)?,
    })
}

/// `(eta_q^dagger)^k |0>` without normalization.
#[pyfunction]
#[pyo3(signature = (n, k, q = 0.0))]
fn eta_power_on_vacuum(n: usize, k: usize, q: f64) -> PyResult<PyFockVector> {
    let spec = eta::EtaSpec::with_phase(n, k, q).map_err(py_err)?;
    Ok(PyFockVector {
        inner: eta::eta_power_on_vacuum(&spec).map_err(py_err)?,
    })
}

/// `<P^dagger_j P_i>` on a state.
#[pyfunction]
fn odlro_correlator(state: PyRef<'_, PyFockVector>, i: usize, j: usize) -> PyResult<Complex64> {
    Ok(eta::odlro_correlator(&state.inner, i, j)
        .map_err(py_err)?
        .correlator)
}

#[pyfunction]
fn odlro_closed_form(n: usize, k: usize) -> PyResult<f64> {
    eta::odlro_closed_form(n, k).map_err(py_err)
}

/// Weights of the two-site reduction of the `(n, k)` Dicke state.
#[pyclass(name = "TwoSiteAbc", frozen)]
struct PyTwoSiteAbc {
    inner: dicke::TwoSiteAbc,
}

#[pymethods]
impl PyTwoSiteAbc {
    #[getter]
    fn a(&self) -> f64 {
        self.inner.a
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c
    }

    fn min_partial_transpose_eigenvalue(&self) -> f64 {
        self.inner.min_partial_transpose_eigenvalue()
    }

    fn negativity(&self) -> f64 {
        self.inner.negativity()
    }

    /// The 4x4 matrix in the `|00>, |01>, |10>, |11>` basis, as nested lists.
    fn matrix(&self) -> Vec<Vec<Complex64>> {
        let m = self.inner.to_rho().into_matrix();
        m.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "TwoSiteAbc(a={}, b={}, c={})",
            self.inner.a, self.inner.b, self.inner.c
        )
    }
}

fn dicke_spec(n: usize, k: usize) -> PyResult<dicke::DickeSpec> {
    dicke::DickeSpec::new(n, k).map_err(py_err)
}

#[pyfunction]
fn two_site_abc(n: usize, k: usize) -> PyResult<PyTwoSiteAbc> {
    Ok(PyTwoSiteAbc {
        inner: dicke::two_site_abc(&dicke_spec(n, k)?).map_err(py_err)?,
    })
}

#[pyfunction]
fn is_two_site_entangled(n: usize, k: usize) -> PyResult<bool> {
    dicke::is_two_site_entangled_numeric(&dicke_spec(n, k)?).map_err(py_err)
}

#[pyfunction]
fn two_site_negativity(n: usize, k: usize) -> PyResult<f64> {
    dicke::two_site_negativity(&dicke_spec(n, k)?).map_err(py_err)
}

#[pyfunction]
fn block_entropy(n: usize, k: usize, m: usize) -> PyResult<f64> {
    dicke::block_entropy(&dicke_spec(n, k)?, m).map_err(py_err)
}

/// `sin^2(phi/2)`, or `None` when the state has no pair coherence.
#[pyfunction]
fn symmetry_defect(n: usize, k: usize, phi: f64) -> PyResult<Option<f64>> {
    Ok(
        gauge::symmetry_defect(&dicke_spec(n, k)?, gauge::PhaseSpec(phi))
            .map_err(py_err)?
            .value(),
    )
}

#[pyfunction]
fn counter_example_defect(phi: f64) -> f64 {
    gauge::counter_example_defect(gauge::PhaseSpec(phi))
}

#[pyclass(name = "FluxReport", frozen)]
struct PyFluxReport {
    inner: gauge::FluxReport,
}

#[pymethods]
impl PyFluxReport {
    #[getter]
    fn topology(&self) -> String {
        self.inner.topology.to_string()
    }

    #[getter]
    fn allowed_b_field(&self) -> f64 {
        self.inner.allowed_b_field
    }

    #[getter]
    fn allowed_fluxes(&self) -> Vec<i64> {
        self.inner.allowed_fluxes.clone()
    }

    #[getter]
    fn flux_values(&self) -> Vec<f64> {
        self.inner.flux_values.clone()
    }

    #[getter]
    fn flux_quantum(&self) -> f64 {
        self.inner.flux_quantum
    }

    #[getter]
    fn persistent_current(&self) -> bool {
        self.inner.persistent_current
    }
}

/// `topology` is `"simply-connected"` or `"annulus"`; `units` is `"si"`,
/// `"natural"` or `"gaussian"`.
#[pyfunction]
#[pyo3(signature = (topology, max_n = 2, units = "si"))]
fn allowed_flux_set(topology: &str, max_n: u32, units: &str) -> PyResult<PyFluxReport> {
    let constants = gauge::PhysicalConstants::for_units(parse(units)?);
    Ok(PyFluxReport {
        inner: gauge::allowed_flux_set(parse(topology)?, max_n, &constants),
    })
}

#[pyclass(name = "EntropyFit", frozen)]
struct PyEntropyFit {
    inner: field::EntropyFit,
}

#[pymethods]
impl PyEntropyFit {
    /// `[(mass, entropy), ...]`.
    #[getter]
    fn samples(&self) -> Vec<(f64, f64)> {
        self.inner.samples.clone()
    }

    #[getter]
    fn slope(&self) -> f64 {
        self.inner.slope
    }

    #[getter]
    fn intercept(&self) -> f64 {
        self.inner.intercept
    }

    #[getter]
    fn r_squared(&self) -> f64 {
        self.inner.r_squared
    }
}

/// Half-chain entropy fitted against `ln(1/(m a))`.
#[pyfunction]
#[pyo3(signature = (n_osc, masses, spacing = 1.0))]
fn mass_scan_fit(n_osc: usize, masses: Vec<f64>, spacing: f64) -> PyResult<PyEntropyFit> {
    Ok(PyEntropyFit {
        inner: field::mass_scan_fit(n_osc, spacing, &masses).map_err(py_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (n_osc, mass, spacing = 1.0))]
fn half_chain_entropy(n_osc: usize, mass: f64, spacing: f64) -> PyResult<f64> {
    let spec = field::HarmonicChainSpec::new(n_osc, mass, spacing).map_err(py_err)?;
    field::half_chain_entropy(&spec).map_err(py_err)
}

fn hubbard_spec(n: usize, t: f64, u: f64, geometry: &str) -> PyResult<spin::HubbardSpec> {
    spin::HubbardSpec::new(n, t, u, parse(geometry)?).map_err(py_err)
}

/// Half-filled ground state `(energy, state)`; `geometry` is `"chain"` or `"ring"`.
#[pyfunction]
#[pyo3(signature = (n, t, u, geometry = "chain"))]
fn hubbard_ground_state(n: usize, t: f64, u: f64, geometry: &str) -> PyResult<(f64, PyFockVector)> {
    let (energy, state) =
        spin::half_filling_ground_state(&hubbard_spec(n, t, u, geometry)?).map_err(py_err)?;
    Ok((energy, PyFockVector { inner: state }))
}

/// `(czz, cxx, cyy, total)` for sites `i != j`.
#[pyfunction]
fn spin_correlator(
    state: PyRef<'_, PyFockVector>,
    i: usize,
    j: usize,
) -> PyResult<(f64, f64, f64, f64)> {
    let r = spin::spin_correlator(&state.inner, i, j).map_err(py_err)?;
    Ok((r.czz, r.cxx, r.cyy, r.total))
}

/// `(energy, residual)` of `eta_q^k |0>` under the Hubbard Hamiltonian.
#[pyfunction]
#[pyo3(signature = (n, t, u, k, q, geometry = "ring"))]
fn eta_eigenstate_residual(
    n: usize,
    t: f64,
    u: f64,
    k: usize,
    q: f64,
    geometry: &str,
) -> PyResult<(f64, f64)> {
    let r =
        spin::eta_eigenstate_residual(&hubbard_spec(n, t, u, geometry)?, k, q).map_err(py_err)?;
    Ok((r.energy, r.residual))
}

#[pymodule]
fn etapair(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFockVector>()?;
    m.add_class::<PyTwoSiteAbc>()?;
    m.add_class::<PyFluxReport>()?;
    m.add_class::<PyEntropyFit>()?;
    m.add_function(wrap_pyfunction!(eta_state, m)?)?;
    m.add_function(wrap_pyfunction!(eta_power_on_vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(odlro_correlator, m)?)?;
    m.add_function(wrap_pyfunction!(odlro_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(two_site_abc, m)?)?;
    m.add_function(wrap_pyfunction!(is_two_site_entangled, m)?)?;
    m.add_function(wrap_pyfunction!(two_site_negativity, m)?)?;
    m.add_function(wrap_pyfunction!(block_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(symmetry_defect, m)?)?;
    m.add_function(wrap_pyfunction!(counter_example_defect, m)?)?;
    m.add_function(wrap_pyfunction!(allowed_flux_set, m)?)?;
    m.add_function(wrap_pyfunction!(mass_scan_fit, m)?)?;
    m.add_function(wrap_pyfunction!(half_chain_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(hubbard_ground_state, m)?)?;
    m.add_function(wrap_pyfunction!(spin_correlator, m)?)?;
    m.add_function(wrap_pyfunction!(eta_eigenstate_residual, m)?)?;
    Ok(())
}
