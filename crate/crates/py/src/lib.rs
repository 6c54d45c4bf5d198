//! Python bindings. Reports cross the boundary as JSON strings; scalars as
//! plain ints and bools. Library errors surface as `ValueError`, scale
//! guards as `RuntimeError`.

use commutant::fedder::{self, FedderConfig, DEFAULT_TERM_CEILING};
use commutant::groebner::{self, DEFAULT_MAX_PAIRS};
use commutant::lemmas;
use commutant::matrices::{build_ideal, IdealName};
use commutant::sop::{self, SopVariant};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: commutant::Error) -> PyErr {
    if e.is_scale_exceeded() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// `"full"` picks the full system for `(n, char)`; otherwise a name such as
/// `"FULL_ODD"` or `"diag_i"`.
fn variant(name: &str, n: u8, characteristic: u32) -> PyResult<SopVariant> {
    if name.eq_ignore_ascii_case("full") {
        return Ok(SopVariant::full_for(n, characteristic));
    }
    let tag = serde_json::Value::String(name.to_ascii_uppercase().replace('-', "_"));
    serde_json::from_value(tag).map_err(|_| PyValueError::new_err(format!("unknown variant {name:?}")))
}

fn ideal_name(set: &str) -> PyResult<IdealName> {
    match set.to_ascii_lowercase().as_str() {
        "i" | "diag" => Ok(IdealName::I),
        "j" | "anti" => Ok(IdealName::J),
        "full" => Ok(IdealName::Full),
        _ => Err(PyValueError::new_err(format!("unknown generator set {set:?}"))),
    }
}

/// Generators of the chosen commutator ideal, as display strings.
#[pyfunction]
#[pyo3(signature = (n, characteristic, set = "full"))]
fn ideal_dump(n: u8, characteristic: u32, set: &str) -> PyResult<Vec<String>> {
    let ideal = build_ideal(n, characteristic, ideal_name(set)?).map_err(to_py)?;
    Ok(ideal.generators.iter().map(|g| g.to_string()).collect())
}

#[pyfunction]
#[pyo3(signature = (n, characteristic, variant_name = "full", max_pairs = DEFAULT_MAX_PAIRS))]
fn sop_verify(py: Python<'_>, n: u8, characteristic: u32, variant_name: &str, max_pairs: usize) -> PyResult<String> {
    let v = variant(variant_name, n, characteristic)?;
    let rep = py.detach(|| groebner::verify_sop(n, characteristic, v, max_pairs)).map_err(to_py)?;
    to_json(&rep)
}

#[pyfunction]
#[pyo3(signature = (n, p, variant_name = "full", term_ceiling = DEFAULT_TERM_CEILING))]
fn fpure_check(py: Python<'_>, n: u8, p: u32, variant_name: &str, term_ceiling: usize) -> PyResult<String> {
    let v = variant(variant_name, n, p)?;
    let cfg = FedderConfig { term_ceiling, ..FedderConfig::default() };
    let rep = py.detach(|| fedder::fpure_check(n, p, v, &cfg)).map_err(to_py)?;
    to_json(&rep)
}

#[pyfunction]
#[pyo3(signature = (n, term_ceiling = DEFAULT_TERM_CEILING))]
fn induction_check(py: Python<'_>, n: u8, term_ceiling: usize) -> PyResult<String> {
    let cfg = FedderConfig { term_ceiling, ..FedderConfig::default() };
    let rep = py.detach(|| fedder::induction_witness_check(n, 2, &cfg)).map_err(to_py)?;
    to_json(&rep)
}

/// Coefficient of the full `(p−1)`-power monomial for `n = 4`, odd `p`.
#[pyfunction]
#[pyo3(signature = (p, term_ceiling = DEFAULT_TERM_CEILING))]
fn target_coefficient(py: Python<'_>, p: u32, term_ceiling: usize) -> PyResult<u32> {
    let cfg = FedderConfig { term_ceiling, ..FedderConfig::default() };
    py.detach(|| fedder::target_coefficient(p, &cfg)).map_err(to_py)
}

#[pyfunction]
fn binom_mod(n: u64, k: u64, p: u32) -> u32 {
    lemmas::binom_mod(n, k, p)
}

#[pyfunction]
fn lemma_table(pmax: u32) -> PyResult<String> {
    to_json(&lemmas::lemma_table(pmax).map_err(to_py)?)
}

#[pyfunction]
fn lemma_signed_sum(p: u32) -> PyResult<u32> {
    lemmas::lemma_signed_sum(p).map_err(to_py)
}

#[pyfunction]
fn n4_closed_form(p: u32) -> PyResult<u32> {
    lemmas::n4_closed_form(p).map_err(to_py)
}

#[pyfunction]
fn n4_chain(p: u32) -> PyResult<String> {
    to_json(&lemmas::n4_chain(p).map_err(to_py)?)
}

#[pyfunction]
fn recursions_verify(n: u8, characteristic: u32) -> PyResult<String> {
    to_json(&sop::verify_recursions(n, characteristic).map_err(to_py)?)
}

#[pyfunction]
fn appendix_fixture(n: u8, characteristic: u32) -> PyResult<String> {
    Ok(sop::AppendixFixture::generate(n, characteristic).map_err(to_py)?.to_json())
}

#[pymodule]
fn pycommutant(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(ideal_dump, m)?)?;
    m.add_function(wrap_pyfunction!(sop_verify, m)?)?;
    m.add_function(wrap_pyfunction!(fpure_check, m)?)?;
    m.add_function(wrap_pyfunction!(induction_check, m)?)?;
    m.add_function(wrap_pyfunction!(target_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(binom_mod, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_table, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_signed_sum, m)?)?;
    m.add_function(wrap_pyfunction!(n4_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(n4_chain, m)?)?;
    m.add_function(wrap_pyfunction!(recursions_verify, m)?)?;
    m.add_function(wrap_pyfunction!(appendix_fixture, m)?)?;
    m.add("DEFAULT_MAX_PAIRS", DEFAULT_MAX_PAIRS)?;
    m.add("DEFAULT_TERM_CEILING", DEFAULT_TERM_CEILING)?;
    Ok(())
}
