use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyTuple;

use ::cyclocond as core;
use core::{BigRational, Error, Modulus};

create_exception!(cyclocond, NonIntegralError, PyArithmeticError);
create_exception!(cyclocond, NumericalError, PyArithmeticError);

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::NonIntegral { .. } => NonIntegralError::new_err(e.to_string()),
        Error::ZeroModulus(_) | Error::EvenModulus(_) | Error::NotPrime(_) | Error::EmptyRange { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => NumericalError::new_err(e.to_string()),
    }
}

fn modulus(n: u64) -> PyResult<Modulus> {
    Modulus::new(n).map_err(to_py_err)
}

fn fraction<'py>(py: Python<'py>, q: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((q.numer().clone(), q.denom().clone()))
}

fn rows(matrix: &core::BigIntMatrix) -> Vec<Vec<BigInt>> {
    matrix.to_rows()
}

#[pyfunction]
fn factorize(n: u64) -> PyResult<Vec<(u64, u32)>> {
    core::factorize(n).map_err(to_py_err)
}

#[pyfunction]
fn euler_phi(n: u64) -> PyResult<u64> {
    Ok(modulus(n)?.phi())
}

#[pyfunction]
fn moebius(n: u64) -> PyResult<i64> {
    Ok(modulus(n)?.moebius())
}

#[pyfunction]
fn radical(n: u64) -> PyResult<u64> {
    Ok(modulus(n)?.radical())
}

#[pyfunction]
fn coprime_residues(n: u64) -> PyResult<Vec<u64>> {
    Ok(modulus(n)?.coprime_residues())
}

/// Coefficients of Φ_n, ascending degree.
#[pyfunction]
fn cyclotomic_poly(n: u64) -> PyResult<Vec<BigInt>> {
    let p = core::cyclotomic_poly(&modulus(n)?).map_err(to_py_err)?;
    Ok(p.coefficients().to_vec())
}

#[pyfunction]
fn ramanujan_sum(n: u64, t: i64) -> PyResult<i64> {
    Ok(core::ramanujan_sum(&modulus(n)?, t))
}

#[pyfunction]
fn ramanujan_sum_direct(n: u64, t: i64) -> PyResult<i64> {
    core::ramanujan_sum_direct(&modulus(n)?, t).map_err(to_py_err)
}

#[pyfunction]
fn ramanujan_row(n: u64) -> PyResult<Vec<i64>> {
    Ok(core::ramanujan_row(&modulus(n)?).values)
}

/// Dense G_n as a list of rows.
#[pyfunction]
fn gram_matrix(n: u64) -> PyResult<Vec<Vec<i64>>> {
    Ok(core::build_gram(&modulus(n)?).to_dense())
}

/// `[(eigenvalue, multiplicity), ...]`, eigenvalues ascending.
#[pyfunction]
fn spectrum(n: u64) -> PyResult<Vec<(f64, usize)>> {
    let s = core::spectrum_numeric(&core::build_gram(&modulus(n)?)).map_err(to_py_err)?;
    Ok(s.pairs)
}

#[pyfunction]
fn kronecker_check(n: u64) -> PyResult<bool> {
    Ok(core::kronecker_check(&modulus(n)?))
}

#[pyfunction]
fn j_similarity_check(n: u64) -> PyResult<bool> {
    core::j_similarity_check(&modulus(n)?).map_err(to_py_err)
}

#[pyfunction]
fn orthogonality_check(n: u64) -> PyResult<bool> {
    Ok(core::orthogonality_check(&modulus(n)?))
}

#[pyfunction]
fn structured_det(a: BigInt, b: BigInt, k: usize) -> BigInt {
    core::structured_det(a, b, k)
}

#[pyfunction]
fn det_exact(matrix: Vec<Vec<BigInt>>) -> PyResult<BigInt> {
    let size = matrix.len();
    if matrix.iter().any(|r| r.len() != size) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    let m = core::BigIntMatrix::new(size, matrix.into_iter().flatten().collect());
    core::det_exact(&m).map_err(to_py_err)
}

#[pyfunction]
fn inverse_trace_exact<'py>(py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyAny>> {
    let q = core::inverse_trace_exact(&modulus(n)?).map_err(to_py_err)?;
    fraction(py, &q)
}

#[pyfunction]
fn scaled_inverse(n: u64) -> PyResult<Vec<Vec<BigInt>>> {
    Ok(rows(&core::scaled_inverse(&modulus(n)?).map_err(to_py_err)?))
}

#[pyfunction]
fn scaled_inverse_via_recurrence(n: u64) -> PyResult<Vec<Vec<BigInt>>> {
    Ok(rows(&core::scaled_inverse_via_recurrence(&modulus(n)?).map_err(to_py_err)?))
}

/// Rows `S[i][0..=n]` for `i = 1..=m`.
#[pyfunction]
fn s_table(n: u64) -> PyResult<Vec<Vec<BigInt>>> {
    let t = core::build_s_table(&modulus(n)?).map_err(to_py_err)?;
    Ok((1..=t.m).map(|i| t.row(i).to_vec()).collect())
}

#[pyfunction]
fn trace_sequence(start: u64, stop: u64) -> PyResult<Vec<BigInt>> {
    core::trace_sequence(start, stop).map_err(to_py_err)
}

#[pyfunction]
fn cond_float(n: u64) -> PyResult<f64> {
    core::cond_float(&modulus(n)?).map_err(to_py_err)
}

/// Exact `Cond(V_n)²` as a `fractions.Fraction`.
#[pyfunction]
fn cond_exact_sq<'py>(py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyAny>> {
    let q = core::cond_exact_sq(&modulus(n)?).map_err(to_py_err)?;
    fraction(py, &q)
}

#[pyfunction]
fn cond_reduced(n: u64) -> PyResult<f64> {
    core::cond_reduced(&modulus(n)?).map_err(to_py_err)
}

#[pyfunction]
fn cond_closed_form(n: u64) -> PyResult<Option<f64>> {
    Ok(core::cond_closed_form(&modulus(n)?))
}

#[pyfunction]
fn cond_prime_closed_form(p: u64) -> PyResult<f64> {
    core::cond_prime_closed_form(&modulus(p)?).map_err(to_py_err)
}

#[pyclass(frozen, module = "cyclocond")]
struct ConditionReport {
    #[pyo3(get)]
    n: u64,
    #[pyo3(get)]
    m: u64,
    cond_sq_exact: BigRational,
    #[pyo3(get)]
    cond_exact: f64,
    #[pyo3(get)]
    cond_float: f64,
    #[pyo3(get)]
    cond_closed_form: Option<f64>,
    #[pyo3(get)]
    cond_reduced: f64,
    #[pyo3(get)]
    prior_bound: Option<f64>,
    #[pyo3(get)]
    agrees: bool,
}

#[pymethods]
impl ConditionReport {
    #[getter]
    fn cond_sq_exact<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.cond_sq_exact)
    }

    fn __repr__(&self) -> String {
        format!(
            "ConditionReport(n={}, m={}, cond_sq_exact={}/{}, cond_float={}, agrees={})",
            self.n,
            self.m,
            self.cond_sq_exact.numer(),
            self.cond_sq_exact.denom(),
            self.cond_float,
            if self.agrees { "True" } else { "False" },
        )
    }
}

#[pyfunction]
fn cond_report(n: u64) -> PyResult<ConditionReport> {
    let r = core::cond_report(&modulus(n)?).map_err(to_py_err)?;
    Ok(ConditionReport {
        n,
        m: r.m,
        agrees: r.agreement.all(),
        cond_sq_exact: r.cond_sq_exact,
        cond_exact: r.cond_exact,
        cond_float: r.cond_float,
        cond_closed_form: r.cond_closed_form,
        cond_reduced: r.cond_reduced_float,
        prior_bound: r.prior_bound,
    })
}

/// Runs verification suites over `start..=stop`; returns
/// `[(suite, passed, failed, skipped, first_counterexample_or_None), ...]`.
#[pyfunction]
#[pyo3(signature = (start, stop, suites = "all", jobs = 1))]
fn verify<'py>(py: Python<'py>, start: u64, stop: u64, suites: &str, jobs: usize) -> PyResult<Vec<Bound<'py, PyTuple>>> {
    let suites = core::verify::parse_suites(suites).map_err(PyValueError::new_err)?;
    let summaries = py
        .detach(|| core::verify::verify_range(start, stop, &suites, jobs.max(1)))
        .map_err(to_py_err)?;
    summaries
        .into_iter()
        .map(|s| {
            let first = s.first_counterexample.map(|(n, _)| n);
            PyTuple::new(py, [
                s.suite.name().into_pyobject(py)?.into_any(),
                s.passed.into_pyobject(py)?.into_any(),
                s.failed.into_pyobject(py)?.into_any(),
                s.skipped.into_pyobject(py)?.into_any(),
                first.into_pyobject(py)?.into_any(),
            ])
        })
        .collect()
}

#[pymodule]
fn cyclocond(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NonIntegralError", m.py().get_type::<NonIntegralError>())?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_class::<ConditionReport>()?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(euler_phi, m)?)?;
    m.add_function(wrap_pyfunction!(moebius, m)?)?;
    m.add_function(wrap_pyfunction!(radical, m)?)?;
    m.add_function(wrap_pyfunction!(coprime_residues, m)?)?;
    m.add_function(wrap_pyfunction!(cyclotomic_poly, m)?)?;
    m.add_function(wrap_pyfunction!(ramanujan_sum, m)?)?;
    m.add_function(wrap_pyfunction!(ramanujan_sum_direct, m)?)?;
    m.add_function(wrap_pyfunction!(ramanujan_row, m)?)?;
    m.add_function(wrap_pyfunction!(gram_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(kronecker_check, m)?)?;
    m.add_function(wrap_pyfunction!(j_similarity_check, m)?)?;
    m.add_function(wrap_pyfunction!(orthogonality_check, m)?)?;
    m.add_function(wrap_pyfunction!(structured_det, m)?)?;
    m.add_function(wrap_pyfunction!(det_exact, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_trace_exact, m)?)?;
    m.add_function(wrap_pyfunction!(scaled_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(scaled_inverse_via_recurrence, m)?)?;
    m.add_function(wrap_pyfunction!(s_table, m)?)?;
    m.add_function(wrap_pyfunction!(trace_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(cond_float, m)?)?;
    m.add_function(wrap_pyfunction!(cond_exact_sq, m)?)?;
    m.add_function(wrap_pyfunction!(cond_reduced, m)?)?;
    m.add_function(wrap_pyfunction!(cond_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(cond_prime_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(cond_report, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
