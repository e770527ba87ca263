//! Python bindings: the program type, evaluation, deciders, reductions, and
//! campaign entry points, with arbitrary-precision values crossing the
//! boundary as Python ints.

use num::bigint::BigInt;
use num::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::IntoPyObjectExt;

use slpkit::deciders::{decide, Aux, DecideCfg, OracleHandle, ProblemInstance, ProblemTag};
use slpkit::eval::{self, EvalBudget};
use slpkit::harness;
use slpkit::numtheory::{self, DensityKind, FactorBudget};
use slpkit::reductions;
use slpkit::slp::{self, Slp};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn budget(max_bits: Option<u64>) -> EvalBudget {
    match max_bits {
        Some(bits) => EvalBudget::with_max_bits(bits),
        None => EvalBudget::default(),
    }
}

/// A straight-line program over `{1, x_1, …, x_n, +, −, ×}`.
#[pyclass(name = "Slp", frozen, from_py_object)]
#[derive(Clone)]
struct PySlp {
    inner: Slp,
}

#[pymethods]
impl PySlp {
    /// Parses the text format (`slp <num_vars>` header, then one
    /// instruction per line).
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        slp::parse(text)
            .map(|inner| PySlp { inner })
            .map_err(value_err)
    }

    /// A variable-free program computing exactly `k`.
    #[staticmethod]
    fn from_int(k: BigInt) -> Self {
        PySlp {
            inner: slp::int_to_slp(&k),
        }
    }

    /// A variable-free program computing `2**t` by repeated squaring.
    #[staticmethod]
    fn pow2(t: BigUint) -> Self {
        PySlp {
            inner: slp::pow2_slp(&t),
        }
    }

    /// Canonical serialization.
    fn serialize(&self) -> String {
        slp::serialize(&self.inner)
    }

    fn __str__(&self) -> String {
        self.serialize()
    }

    fn __repr__(&self) -> String {
        format!(
            "Slp(num_vars={}, size={})",
            self.inner.num_vars,
            self.inner.size()
        )
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn num_vars(&self) -> usize {
        self.inner.num_vars
    }

    /// Violation messages; an empty list means the program is well-formed.
    fn violations(&self) -> Vec<String> {
        match self.inner.validate() {
            Ok(()) => Vec::new(),
            Err(vs) => vs.iter().map(|v| v.to_string()).collect(),
        }
    }

    /// A program computing `value + c`.
    fn shift(&self, c: BigInt) -> Self {
        PySlp {
            inner: slp::shift_slp(&self.inner, &c),
        }
    }
}

#[pyfunction]
#[pyo3(signature = (program, vars=None, max_bits=None))]
fn eval_exact(
    program: &PySlp,
    vars: Option<Vec<BigInt>>,
    max_bits: Option<u64>,
) -> PyResult<BigInt> {
    eval::eval_exact(&program.inner, &vars.unwrap_or_default(), &budget(max_bits))
        .map_err(runtime_err)
}

#[pyfunction]
#[pyo3(signature = (program, modulus, vars=None))]
fn eval_mod(program: &PySlp, modulus: BigUint, vars: Option<Vec<BigInt>>) -> PyResult<BigUint> {
    eval::eval_mod(&program.inner, &vars.unwrap_or_default(), &modulus).map_err(runtime_err)
}

/// Exact coefficients of the computed univariate polynomial, constant term
/// first.
#[pyfunction]
#[pyo3(signature = (program, max_bits=None))]
fn expand_poly(program: &PySlp, max_bits: Option<u64>) -> PyResult<Vec<BigInt>> {
    eval::expand_poly(&program.inner, &budget(max_bits))
        .map(|f| f.coeffs().to_vec())
        .map_err(runtime_err)
}

#[pyfunction]
fn degree_upper_bound(program: &PySlp) -> u64 {
    eval::degree_upper_bound(&program.inner)
}

/// Decides one of: posslp equslp bitslp div2slp 3sosslp 2sosslp squslp
/// degslp ordslp pospolyslp squpolyslp.
#[pyfunction]
#[pyo3(signature = (problem, program, l=None, d=None, n=None, i=None, seed=0, sample_exp=None, max_bits=None))]
#[allow(clippy::too_many_arguments)]
fn decide_problem(
    problem: &str,
    program: &PySlp,
    l: Option<u64>,
    d: Option<u64>,
    n: Option<u64>,
    i: Option<u64>,
    seed: u64,
    sample_exp: Option<u64>,
    max_bits: Option<u64>,
) -> PyResult<bool> {
    let tag: ProblemTag = problem.parse().map_err(value_err)?;
    let aux = match tag {
        ProblemTag::Div2 | ProblemTag::Ord => {
            Aux::Ell(l.ok_or_else(|| value_err(format!("{tag} needs l")))?)
        }
        ProblemTag::Deg => Aux::Deg(d.ok_or_else(|| value_err(format!("{tag} needs d")))?),
        ProblemTag::Bit => Aux::Bit {
            n: n.ok_or_else(|| value_err(format!("{tag} needs n")))?,
            i: i.ok_or_else(|| value_err(format!("{tag} needs i")))?,
        },
        _ => Aux::None,
    };
    let cfg = DecideCfg {
        budget: budget(max_bits),
        seed,
        sample_exp_override: sample_exp,
        ..DecideCfg::default()
    };
    decide(&ProblemInstance::new(tag, program.inner.clone(), aux), &cfg)
        .map(|v| v.answer)
        .map_err(runtime_err)
}

#[pyfunction]
fn is_3sos(n: BigInt) -> bool {
    numtheory::is_3sos(&n)
}

#[pyfunction]
fn is_2sos(n: BigInt) -> PyResult<bool> {
    numtheory::is_2sos(&n, &FactorBudget::default()).map_err(runtime_err)
}

#[pyfunction]
fn is_perfect_square(n: BigInt) -> bool {
    numtheory::is_perfect_square(&n)
}

#[pyfunction]
fn isqrt(n: BigInt) -> PyResult<BigInt> {
    numtheory::isqrt(&n).map_err(value_err)
}

/// Prime-power decomposition of `|n|` as `(sign, [(p, e), …])`.
#[pyfunction]
fn factorize(n: BigInt) -> PyResult<(i8, Vec<(BigUint, u32)>)> {
    numtheory::factorize(&n, &FactorBudget::default())
        .map(|f| (f.sign, f.factors))
        .map_err(runtime_err)
}

#[pyfunction]
fn four_square_witness(n: u64) -> (u64, u64, u64, u64) {
    numtheory::four_square_witness(n)
}

/// `("3sos" | "2sos", limit) -> (count, normalized ratio)`.
#[pyfunction]
fn density_scan(kind: &str, limit: u64) -> PyResult<(u64, f64)> {
    let kind = match kind {
        "3sos" => DensityKind::ThreeSos,
        "2sos" => DensityKind::TwoSos,
        other => return Err(value_err(format!("unknown density kind `{other}`"))),
    };
    numtheory::density_scan(kind, limit)
        .map(|s| (s.count, s.ratio))
        .map_err(value_err)
}

#[pyfunction]
fn equ_to_3sos(program: &PySlp) -> PySlp {
    PySlp {
        inner: reductions::equ_to_3sos(&program.inner),
    }
}

#[pyfunction]
fn equ_to_2sos(program: &PySlp) -> PySlp {
    PySlp {
        inner: reductions::equ_to_2sos(&program.inner),
    }
}

/// Degree bound `m` and a program for `x^m · f(1/x)`.
#[pyfunction]
fn reverse_slp(program: &PySlp) -> PyResult<(u64, PySlp)> {
    reductions::reverse_slp(&program.inner)
        .map(|(m, q)| (m, PySlp { inner: q }))
        .map_err(runtime_err)
}

#[pyfunction]
fn deg_to_ord(program: &PySlp, d: u64) -> PyResult<(PySlp, u64)> {
    reductions::deg_to_ord(&program.inner, d)
        .map(|(q, ell)| (PySlp { inner: q }, ell))
        .map_err(runtime_err)
}

/// Either `("instance", program, d)` or `("decided", answer)`.
#[pyfunction]
fn ord_to_deg(py: Python<'_>, program: &PySlp, l: u64) -> PyResult<Py<PyAny>> {
    let equ = OracleHandle::truthful(ProblemTag::Equ, DecideCfg::default());
    match reductions::ord_to_deg(&program.inner, l, &equ).map_err(runtime_err)? {
        reductions::OrdToDegOutcome::Instance { slp: q, d } => {
            ("instance", PySlp { inner: q }, d).into_py_any(py)
        }
        reductions::OrdToDegOutcome::Decided(ans) => ("decided", ans).into_py_any(py),
    }
}

#[pyfunction]
#[pyo3(signature = (program, l, override_exp=None))]
fn ord_to_div2(program: &PySlp, l: u64, override_exp: Option<u64>) -> PyResult<(PySlp, u64)> {
    reductions::ord_to_div2(&program.inner, l, override_exp)
        .map(|(q, ell)| (PySlp { inner: q }, ell))
        .map_err(runtime_err)
}

#[pyfunction]
fn mdeg_to_deg(program: &PySlp, d: u64) -> PyResult<(PySlp, u64)> {
    reductions::mdeg_to_deg(&program.inner, d)
        .map(|(q, d)| (PySlp { inner: q }, d))
        .map_err(runtime_err)
}

/// The positivity driver against a truthful 3SoS oracle; returns
/// `(answer, oracle_calls)`.
#[pyfunction]
fn pos_via_3sos(program: &PySlp) -> PyResult<(bool, u64)> {
    let oracle = OracleHandle::truthful(ProblemTag::ThreeSos, DecideCfg::default());
    let ans = reductions::pos_via_3sos(&program.inner, &oracle).map_err(runtime_err)?;
    Ok((ans, oracle.calls()))
}

/// The 3SoS driver against truthful divisibility and positivity oracles;
/// returns `(answer, div2_calls)`.
#[pyfunction]
fn three_sos_via_div2(program: &PySlp) -> PyResult<(bool, u64)> {
    let div2 = OracleHandle::truthful(ProblemTag::Div2, DecideCfg::default());
    let pos = OracleHandle::truthful(ProblemTag::Pos, DecideCfg::default());
    let ans =
        reductions::three_sos_via_div2_pos(&program.inner, &div2, &pos).map_err(runtime_err)?;
    Ok((ans, div2.calls()))
}

#[pyfunction]
#[pyo3(signature = (size, num_vars=0, seed=0))]
fn gen_random_slp(size: usize, num_vars: usize, seed: u64) -> PyResult<PySlp> {
    if size == 0 {
        return Err(value_err("size must be at least 1"));
    }
    Ok(PySlp {
        inner: harness::gen_random_slp(size, num_vars, seed, &harness::OpWeights::default()),
    })
}

/// Runs a verification campaign; returns a summary dict.
#[pyfunction]
#[pyo3(signature = (name, random_count=None, max_size=None, exhaustive=None, seed=None))]
fn run_campaign(
    py: Python<'_>,
    name: &str,
    random_count: Option<usize>,
    max_size: Option<usize>,
    exhaustive: Option<usize>,
    seed: Option<u64>,
) -> PyResult<Py<pyo3::types::PyDict>> {
    let mut cfg = harness::default_config(name)
        .ok_or_else(|| value_err(format!("unknown campaign `{name}`")))?;
    if let Some(c) = random_count {
        cfg.random_count = c;
    }
    if let Some(s) = max_size {
        cfg.random_max_size = s;
    }
    if exhaustive.is_some() {
        cfg.exhaustive_size = exhaustive;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let report = harness::run_campaign(&cfg).map_err(runtime_err)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("campaign", &report.config.campaign)?;
    dict.set_item("total", report.total)?;
    dict.set_item("pass", report.pass)?;
    dict.set_item("fail", report.fail)?;
    dict.set_item("inconclusive", report.inconclusive)?;
    dict.set_item("passed", report.passed())?;
    Ok(dict.unbind())
}

#[pyfunction]
fn campaign_names() -> Vec<&'static str> {
    harness::CAMPAIGN_NAMES.to_vec()
}

#[pymodule]
fn pyslp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySlp>()?;
    m.add_function(wrap_pyfunction!(eval_exact, m)?)?;
    m.add_function(wrap_pyfunction!(eval_mod, m)?)?;
    m.add_function(wrap_pyfunction!(expand_poly, m)?)?;
    m.add_function(wrap_pyfunction!(degree_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(decide_problem, m)?)?;
    m.add_function(wrap_pyfunction!(is_3sos, m)?)?;
    m.add_function(wrap_pyfunction!(is_2sos, m)?)?;
    m.add_function(wrap_pyfunction!(is_perfect_square, m)?)?;
    m.add_function(wrap_pyfunction!(isqrt, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(four_square_witness, m)?)?;
    m.add_function(wrap_pyfunction!(density_scan, m)?)?;
    m.add_function(wrap_pyfunction!(equ_to_3sos, m)?)?;
    m.add_function(wrap_pyfunction!(equ_to_2sos, m)?)?;
    m.add_function(wrap_pyfunction!(reverse_slp, m)?)?;
    m.add_function(wrap_pyfunction!(deg_to_ord, m)?)?;
    m.add_function(wrap_pyfunction!(ord_to_deg, m)?)?;
    m.add_function(wrap_pyfunction!(ord_to_div2, m)?)?;
    m.add_function(wrap_pyfunction!(mdeg_to_deg, m)?)?;
    m.add_function(wrap_pyfunction!(pos_via_3sos, m)?)?;
    m.add_function(wrap_pyfunction!(three_sos_via_div2, m)?)?;
    m.add_function(wrap_pyfunction!(gen_random_slp, m)?)?;
    m.add_function(wrap_pyfunction!(run_campaign, m)?)?;
    m.add_function(wrap_pyfunction!(campaign_names, m)?)?;
    Ok(())
}
