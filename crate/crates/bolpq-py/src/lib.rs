//! Python bindings for the Bol/Bruck loop classification library.
//!
//! Field elements cross the boundary as `(re, im)` tuples meaning
//! re + im·√t, with t the canonical non-square recorded by `Params`.

use pyo3::exceptions::{PyIndexError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use bolpq::{FieldParams, Fp2, GeneratorSet, LoopTable, UpTo, VerifyOptions};

fn to_py_err(e: bolpq::Error) -> PyErr {
    use bolpq::Error as E;
    match e {
        E::InvalidInput(_)
        | E::NoPrimitiveRoot { .. }
        | E::DegenerateGamma { .. }
        | E::InadmissibleTheta(_)
        | E::Parse { .. }
        | E::DivisionByZero => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse_upto(upto: &str) -> PyResult<UpTo> {
    match upto {
        "iso" | "isomorphism" => Ok(UpTo::Isomorphism),
        "isotopy" | "isotopism" => Ok(UpTo::Isotopism),
        other => Err(PyValueError::new_err(format!(
            "upto must be \"iso\"/\"isomorphism\" or \"isotopy\"/\"isotopism\", got {other:?}"
        ))),
    }
}

fn pair(x: Fp2) -> (u64, u64) {
    (x.re, x.im)
}

/// The arithmetic context for one (p, q): the canonical non-square t and
/// primitive q-th root of unity, the admissible set and its orbits.
#[pyclass(frozen)]
struct Params {
    inner: FieldParams,
}

#[pymethods]
impl Params {
    #[new]
    fn new(p: u64, q: u64) -> PyResult<Self> {
        Ok(Params { inner: FieldParams::new(p, q).map_err(to_py_err)? })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    #[getter]
    fn t(&self) -> u64 {
        self.inner.t()
    }

    #[getter]
    fn branch(&self) -> String {
        self.inner.branch().to_string()
    }

    #[getter]
    fn omega(&self) -> (u64, u64) {
        pair(self.inner.omega())
    }

    #[getter]
    fn omega_powers(&self) -> Vec<(u64, u64)> {
        self.inner.omega_powers().iter().copied().map(pair).collect()
    }

    /// The admissible parameter set, sorted by (re, im).
    fn gamma_set(&self) -> Vec<(u64, u64)> {
        bolpq::build_gamma_set(&self.inner)
            .elements()
            .iter()
            .copied()
            .map(pair)
            .collect()
    }

    /// Orbits of <f> ("iso") or <f,g> ("isotopy") on the admissible set.
    fn orbits(&self, upto: &str) -> PyResult<Vec<Vec<(u64, u64)>>> {
        let gens = match parse_upto(upto)? {
            UpTo::Isomorphism => GeneratorSet::F,
            UpTo::Isotopism => GeneratorSet::FG,
        };
        let gset = bolpq::build_gamma_set(&self.inner);
        let orbits = bolpq::orbit_partition(&self.inner, &gset, gens).map_err(to_py_err)?;
        Ok(orbits
            .orbits()
            .iter()
            .map(|o| o.iter().copied().map(pair).collect())
            .collect())
    }

    /// The sequence u(gamma) = (gamma w^i + (1-gamma) w^{-i})_i.
    fn u(&self, gamma: (u64, u64)) -> Vec<(u64, u64)> {
        let g = Fp2::new(gamma.0 % self.inner.p(), gamma.1 % self.inner.p());
        bolpq::u_from_gamma(&self.inner, g, 1)
            .entries()
            .iter()
            .copied()
            .map(pair)
            .collect()
    }

    /// Theta(gamma), the entrywise inverse of u(gamma).
    fn theta(&self, gamma: (u64, u64)) -> PyResult<Vec<(u64, u64)>> {
        let g = Fp2::new(gamma.0 % self.inner.p(), gamma.1 % self.inner.p());
        let th = bolpq::theta_from_gamma(&self.inner, g).map_err(to_py_err)?;
        Ok(th.thetas().iter().copied().map(pair).collect())
    }

    fn act_f(&self, gamma: (u64, u64)) -> (u64, u64) {
        let g = Fp2::new(gamma.0 % self.inner.p(), gamma.1 % self.inner.p());
        pair(bolpq::act_f(&self.inner, g))
    }

    fn act_g(&self, gamma: (u64, u64), r: u64) -> PyResult<(u64, u64)> {
        let g = Fp2::new(gamma.0 % self.inner.p(), gamma.1 % self.inner.p());
        Ok(pair(bolpq::act_g_r(&self.inner, g, r).map_err(to_py_err)?))
    }

    /// The loop table of the parameter gamma.
    fn table(&self, gamma: (u64, u64)) -> PyResult<Loop> {
        let g = Fp2::new(gamma.0 % self.inner.p(), gamma.1 % self.inner.p());
        Ok(Loop { inner: LoopTable::from_gamma(&self.inner, g).map_err(to_py_err)? })
    }

    fn __repr__(&self) -> String {
        format!(
            "Params(p={}, q={}, t={}, omega={}, branch=\"{}\")",
            self.inner.p(),
            self.inner.q(),
            self.inner.t(),
            self.inner.omega(),
            self.inner.branch()
        )
    }
}

/// An order-n multiplication table with identity element 0 (constructed
/// tables) or whatever the file declares by convention.
#[pyclass(frozen)]
struct Loop {
    inner: LoopTable,
}

#[pymethods]
impl Loop {
    /// The cyclic group Z_q x Z_p of order pq.
    #[staticmethod]
    fn cyclic(p: u64, q: u64) -> PyResult<Self> {
        Ok(Loop { inner: LoopTable::cyclic(p, q).map_err(to_py_err)? })
    }

    /// Build the loop of gamma over fresh parameters for (p, q).
    #[staticmethod]
    fn from_gamma(p: u64, q: u64, gamma: (u64, u64)) -> PyResult<Self> {
        let params = FieldParams::new(p, q).map_err(to_py_err)?;
        let g = Fp2::new(gamma.0 % p, gamma.1 % p);
        Ok(Loop { inner: LoopTable::from_gamma(&params, g).map_err(to_py_err)? })
    }

    /// Read a table in the shared text format.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Loop { inner: LoopTable::read_file(path).map_err(to_py_err)? })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.inner.write_file(path).map_err(to_py_err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn identity(&self) -> usize {
        self.inner.identity()
    }

    fn mul(&self, x: usize, y: usize) -> PyResult<usize> {
        let n = self.inner.n();
        if x >= n || y >= n {
            return Err(PyIndexError::new_err(format!("indices out of range 0..{n}")));
        }
        Ok(self.inner.get(x, y))
    }

    fn rows(&self) -> Vec<Vec<usize>> {
        let n = self.inner.n();
        (0..n).map(|x| (0..n).map(|y| self.inner.get(x, y)).collect()).collect()
    }

    fn is_latin(&self) -> bool {
        self.inner.is_latin()
    }

    fn is_bol(&self) -> bool {
        self.inner.is_bol()
    }

    fn is_bruck(&self) -> bool {
        self.inner.is_bruck()
    }

    fn is_associative(&self) -> bool {
        self.inner.is_associative()
    }

    fn is_commutative(&self) -> bool {
        self.inner.is_commutative()
    }

    fn element_inverse(&self, x: usize) -> PyResult<Option<usize>> {
        if x >= self.inner.n() {
            return Err(PyIndexError::new_err(format!(
                "index out of range 0..{}",
                self.inner.n()
            )));
        }
        Ok(self.inner.element_inverse(x))
    }

    fn principal_isotope(&self, a: usize, b: usize) -> PyResult<Loop> {
        Ok(Loop { inner: bolpq::principal_isotope(&self.inner, a, b).map_err(to_py_err)? })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Loop(order={})", self.inner.n())
    }
}

/// Full classification report as a JSON string.
#[pyfunction]
#[pyo3(signature = (p, q, upto = "isotopy"))]
fn classify_json(p: u64, q: u64, upto: &str) -> PyResult<String> {
    let report = bolpq::classify(p, q, parse_upto(upto)?).map_err(to_py_err)?;
    Ok(report.to_json())
}

/// (isomorphism, isotopism) class counts.
#[pyfunction]
fn counts(p: u64, q: u64) -> PyResult<(u64, u64)> {
    let report = bolpq::classify(p, q, UpTo::Isotopism).map_err(to_py_err)?;
    Ok((report.counts.isomorphism, report.counts.isotopism))
}

/// Rows (p, iso, isotopism, remark_formula, nr_lower_bound, difference) for
/// every prime q < p <= pmax.
#[pyfunction]
fn count_range(q: u64, pmax: u64) -> PyResult<Vec<(u64, u64, u64, u64, u64, i64)>> {
    let rows = bolpq::count_range(q, pmax).map_err(to_py_err)?;
    Ok(rows
        .iter()
        .map(|r| {
            (r.p, r.iso_count, r.isotop_count, r.remark_formula, r.nr_lower_bound, r.difference)
        })
        .collect())
}

/// Three-way cross-verification; returns (passed, text summary).
#[pyfunction]
#[pyo3(signature = (p, q, oracle_bound = bolpq::classify::DEFAULT_ORACLE_BOUND,
                    identity_bound = bolpq::classify::DEFAULT_IDENTITY_BOUND))]
fn cross_verify(p: u64, q: u64, oracle_bound: u64, identity_bound: u64) -> PyResult<(bool, String)> {
    let opts = VerifyOptions { oracle_bound, identity_bound };
    let summary = bolpq::cross_verify(p, q, &opts).map_err(to_py_err)?;
    Ok((summary.pass, summary.render_text()))
}

/// Backtracking isomorphism search; returns the witness permutation or None.
#[pyfunction]
fn brute_isomorphic(l1: PyRef<'_, Loop>, l2: PyRef<'_, Loop>) -> Option<Vec<usize>> {
    bolpq::brute_isomorphic(&l1.inner, &l2.inner).map(|w| w.map)
}

/// Loop isotopy via principal isotopes.
#[pyfunction]
fn brute_isotopic(l1: PyRef<'_, Loop>, l2: PyRef<'_, Loop>) -> bool {
    bolpq::brute_isotopic(&l1.inner, &l2.inner)
}

/// Smallest non-square modulo p.
#[pyfunction]
fn find_nonsquare(p: u64) -> PyResult<u64> {
    bolpq::find_nonsquare(p).map_err(to_py_err)
}

#[pyfunction]
fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

#[pymodule]
fn bolpq_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Params>()?;
    m.add_class::<Loop>()?;
    m.add_function(wrap_pyfunction!(classify_json, m)?)?;
    m.add_function(wrap_pyfunction!(counts, m)?)?;
    m.add_function(wrap_pyfunction!(count_range, m)?)?;
    m.add_function(wrap_pyfunction!(cross_verify, m)?)?;
    m.add_function(wrap_pyfunction!(brute_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(brute_isotopic, m)?)?;
    m.add_function(wrap_pyfunction!(find_nonsquare, m)?)?;
    m.add_function(wrap_pyfunction!(version, m)?)?;
    Ok(())
}
