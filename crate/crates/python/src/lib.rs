//! Python bindings: the simulator, the reference oracle and the table
//! checks, exposed as the `rc4sim_py` extension module.

// the #[pyfunction] expansion trips this lint on current clippy
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

use rc4sim_core::hwsim::{cycles_formula as formula, CycleReport, DesignId};
use rc4sim_core::unroll::{classify_swap as classify, UnrolledIndices};
use rc4sim_core::verify::verify_tables_sampled as sampled;
use rc4sim_core::{rc4, split_key as core_split_key, KeystreamGen, SecretKey};

fn design_id(n: u8) -> PyResult<DesignId> {
    DesignId::from_number(n).map_err(value_err)
}

fn secret(key: &[u8]) -> PyResult<SecretKey> {
    SecretKey::new(key.to_vec()).map_err(value_err)
}

fn value_err(e: rc4sim_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn report_dict<'py>(py: Python<'py>, r: &CycleReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("design", r.design.number())?;
    d.set_item("ksa_clocks", r.ksa_clocks)?;
    d.set_item("prga_clocks", r.prga_clocks)?;
    d.set_item("total_clocks", r.total_clocks())?;
    d.set_item("bytes", r.bytes)?;
    d.set_item("per_byte", r.per_byte())?;
    Ok(d)
}

/// Streaming keystream generator over one of the six designs.
#[pyclass]
struct Simulator {
    gen: KeystreamGen,
    produced: u64,
}

#[pymethods]
impl Simulator {
    #[new]
    fn new(design: u8, key: &[u8]) -> PyResult<Self> {
        Ok(Simulator {
            gen: KeystreamGen::new(design_id(design)?, &secret(key)?).map_err(value_err)?,
            produced: 0,
        })
    }

    /// Next `n` octets of the continuous keystream.
    fn take<'py>(&mut self, py: Python<'py>, n: usize) -> Bound<'py, PyBytes> {
        self.produced += n as u64;
        PyBytes::new_bound(py, &self.gen.take(n))
    }

    /// XORs `data` against the next `len(data)` keystream octets.
    fn apply<'py>(&mut self, py: Python<'py>, data: &[u8]) -> Bound<'py, PyBytes> {
        let mut buf = data.to_vec();
        self.gen.apply(&mut buf);
        self.produced += buf.len() as u64;
        PyBytes::new_bound(py, &buf)
    }

    /// Measured clock counts for everything produced so far.
    fn report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        report_dict(py, &self.gen.report(self.produced))
    }

    fn design(&self) -> u8 {
        self.gen.design().number()
    }
}

/// Software-oracle keystream (no hardware model involved).
#[pyfunction]
fn reference_keystream<'py>(py: Python<'py>, key: &[u8], n: usize) -> PyResult<Bound<'py, PyBytes>> {
    Ok(PyBytes::new_bound(py, &rc4::keystream(&secret(key)?, n)))
}

/// Simulates one design end to end: returns (keystream, report dict).
#[pyfunction]
fn simulate<'py>(
    py: Python<'py>,
    design: u8,
    key: &[u8],
    n: usize,
) -> PyResult<(Bound<'py, PyBytes>, Bound<'py, PyDict>)> {
    let mut sim = Simulator::new(design, key)?;
    let ks = sim.take(py, n);
    let rep = sim.report(py)?;
    Ok((ks, rep))
}

/// XOR of equal-length byte strings (encrypt == decrypt).
#[pyfunction]
fn xor_cipher<'py>(py: Python<'py>, data: &[u8], keystream: &[u8]) -> PyResult<Bound<'py, PyBytes>> {
    Ok(PyBytes::new_bound(
        py,
        &rc4::xor_cipher(data, keystream).map_err(value_err)?,
    ))
}

/// Closed-form clock counts for `n` octets under one design.
#[pyfunction]
fn cycles_formula<'py>(py: Python<'py>, design: u8, n: u64) -> PyResult<Bound<'py, PyDict>> {
    report_dict(py, &formula(design_id(design)?, n))
}

/// Double-swap case id (1..=7) for the index triple; raises on the
/// impossible case 8 pattern.
#[pyfunction]
fn classify_swap(i1: u8, j1: u8, j2: u8) -> u8 {
    classify(UnrolledIndices::new(i1, j1, j2)).case_id()
}

/// Per-lane sub-keys for the parallel designs, remainder lanes first.
#[pyfunction]
fn split_key<'py>(py: Python<'py>, key: &[u8], lanes: usize) -> PyResult<Vec<Bound<'py, PyBytes>>> {
    Ok(core_split_key(&secret(key)?, lanes)
        .map_err(value_err)?
        .iter()
        .map(|k| PyBytes::new_bound(py, k.as_bytes()))
        .collect())
}

/// Sampled double-swap / Z2-selection verification.
#[pyfunction]
fn verify_tables_sampled<'py>(py: Python<'py>, seed: u64, trials: u64) -> PyResult<Bound<'py, PyDict>> {
    let v = sampled(seed, trials);
    let d = PyDict::new_bound(py);
    d.set_item("passed", v.passed())?;
    d.set_item("swap_case_counts", v.swap.case_counts.to_vec())?;
    d.set_item("swap_mismatches", v.swap.mismatches)?;
    d.set_item("z2_mismatches", v.z2.mismatches)?;
    d.set_item("total", v.swap.total)?;
    Ok(d)
}

#[pymodule]
fn rc4sim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Simulator>()?;
    m.add_function(wrap_pyfunction!(reference_keystream, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(xor_cipher, m)?)?;
    m.add_function(wrap_pyfunction!(cycles_formula, m)?)?;
    m.add_function(wrap_pyfunction!(classify_swap, m)?)?;
    m.add_function(wrap_pyfunction!(split_key, m)?)?;
    m.add_function(wrap_pyfunction!(verify_tables_sampled, m)?)?;
    Ok(())
}
