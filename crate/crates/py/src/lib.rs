//! Python bindings over the exact engine. Algebraic objects (group
//! elements, scaled monomial maps, Laurent polynomials) become classes;
//! reports and certificates come back as plain dictionaries, so the
//! Python side needs no schema beyond the JSON one.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList, PyString};

use heisenq::cyclotomic::Cyclotomic;
use heisenq::heisenberg::{
    self, character_of_semiinvariant, invariant_dimension_bruteforce, semi_invariant_f,
    stabilizer_orbit_report, HeisenbergElement,
};
use heisenq::laurent::{parse_laurent, LaurentPolynomial, ScaledMonomialMap, VarNames};
use heisenq::linsys::{basepoint_free_certificate, even_basepoint_witness, n3_showcase};
use heisenq::rationalize;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn check_range(what: &str, v: u64, lo: u64, hi: u64) -> PyResult<()> {
    if v < lo || v > hi {
        return Err(PyValueError::new_err(format!(
            "{what} must be in {lo}..={hi}, got {v}"
        )));
    }
    Ok(())
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(x) => {
            if let Some(i) = x.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else if let Some(u) = x.as_u64() {
                u.into_pyobject(py)?.into_any()
            } else {
                x.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any()
            }
        }
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, val) in map {
                dict.set_item(k, json_to_py(py, val)?)?;
            }
            dict.into_any()
        }
    })
}

fn report_dict<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(value_err)?;
    json_to_py(py, &v)
}

/// A group element in normal form `omega^c xi^a eta^b`.
#[pyclass(frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Element(pub HeisenbergElement);

#[pymethods]
impl Element {
    #[new]
    #[pyo3(signature = (n, c=0, a=0, b=0))]
    pub fn new(n: u64, c: i64, a: i64, b: i64) -> PyResult<Self> {
        check_range("n", n, 1, 64)?;
        Ok(Element(HeisenbergElement::new(n, c, a, b)))
    }

    #[staticmethod]
    pub fn identity(n: u64) -> PyResult<Self> {
        Self::new(n, 0, 0, 0)
    }

    #[staticmethod]
    pub fn xi(n: u64) -> PyResult<Self> {
        Self::new(n, 0, 1, 0)
    }

    #[staticmethod]
    pub fn eta(n: u64) -> PyResult<Self> {
        Self::new(n, 0, 0, 1)
    }

    #[staticmethod]
    pub fn commutator(n: u64) -> PyResult<Self> {
        check_range("n", n, 1, 64)?;
        Ok(Element(heisenberg::commutator(n)))
    }

    #[getter]
    pub fn n(&self) -> u64 {
        self.0.n()
    }

    /// Normal-form exponents `(c, a, b)`, each reduced mod n.
    pub fn exponents(&self) -> (u64, u64, u64) {
        self.0.exponents()
    }

    pub fn order(&self) -> u64 {
        self.0.order()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn is_central(&self) -> bool {
        self.0.is_central()
    }

    pub fn inverse(&self) -> Element {
        Element(self.0.inverse())
    }

    pub fn __mul__(&self, other: &Element) -> PyResult<Element> {
        if self.0.n() != other.0.n() {
            return Err(PyValueError::new_err("elements live in different groups"));
        }
        Ok(Element(HeisenbergElement::multiply(&self.0, &other.0)))
    }

    pub fn __pow__(&self, k: i64, _modulo: Option<i64>) -> Element {
        Element(self.0.pow(k))
    }

    /// The Schroedinger realization as a scaled monomial map.
    pub fn realize(&self) -> Map {
        Map(self.0.realize())
    }

    pub fn __repr__(&self) -> String {
        let (c, a, b) = self.0.exponents();
        format!("Element(n={}, c={c}, a={a}, b={b})", self.0.n())
    }
}

impl std::fmt::Debug for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.__repr__())
    }
}

/// An invertible monomial map with root-of-unity scalars.
#[pyclass(frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq)]
pub struct Map(pub ScaledMonomialMap);

fn names_for(dim: usize, vars: Option<Vec<String>>) -> PyResult<VarNames> {
    match vars {
        Some(v) if v.len() != dim => Err(PyValueError::new_err(format!(
            "expected {dim} variable names, got {}",
            v.len()
        ))),
        Some(v) => Ok(VarNames::custom(v)),
        None => Ok(VarNames::x(dim)),
    }
}

#[pymethods]
impl Map {
    #[staticmethod]
    pub fn identity(dim: usize) -> Map {
        Map(ScaledMonomialMap::identity(dim))
    }

    #[staticmethod]
    pub fn xi(n: u64) -> PyResult<Map> {
        check_range("n", n, 1, 64)?;
        Ok(Map(heisenberg::xi_map(n)))
    }

    #[staticmethod]
    pub fn eta(n: u64) -> PyResult<Map> {
        check_range("n", n, 1, 64)?;
        Ok(Map(heisenberg::eta_map(n)))
    }

    #[staticmethod]
    pub fn omega(n: u64, c: i64) -> PyResult<Map> {
        check_range("n", n, 1, 64)?;
        Ok(Map(heisenberg::omega_map(n, c)))
    }

    #[getter]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Left-to-right composition of point maps: `a.compose(b)` applies
    /// `a` first, then `b` pulls back second.
    pub fn compose(&self, other: &Map) -> PyResult<Map> {
        if self.0.dim() != other.0.dim() {
            return Err(PyValueError::new_err("maps have different dimensions"));
        }
        Ok(Map(ScaledMonomialMap::compose(&self.0, &other.0)))
    }

    pub fn __matmul__(&self, other: &Map) -> PyResult<Map> {
        self.compose(other)
    }

    pub fn inverse(&self) -> PyResult<Map> {
        self.0.inverse().map(Map).map_err(value_err)
    }

    pub fn pow(&self, k: i64) -> PyResult<Map> {
        self.0.pow(k).map(Map).map_err(value_err)
    }

    pub fn pullback(&self, f: &Laurent) -> PyResult<Laurent> {
        if self.0.dim() != f.0.dim() {
            return Err(PyValueError::new_err("map and polynomial dimensions differ"));
        }
        Ok(Laurent(self.0.pullback(&f.0)))
    }

    /// Recover the group element this map realizes, if it is one.
    pub fn decompose(&self, n: u64) -> PyResult<Element> {
        check_range("n", n, 1, 64)?;
        HeisenbergElement::decompose(&self.0, n).map(Element).map_err(value_err)
    }

    #[pyo3(signature = (vars=None))]
    pub fn render(&self, vars: Option<Vec<String>>) -> PyResult<String> {
        Ok(self.0.render(&names_for(self.0.dim(), vars)?))
    }

    pub fn __repr__(&self) -> String {
        format!("Map({})", self.0.render(&VarNames::x(self.0.dim())))
    }
}

impl std::fmt::Debug for Map {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.__repr__())
    }
}

/// A Laurent polynomial with cyclotomic coefficients.
#[pyclass(frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq)]
pub struct Laurent(pub LaurentPolynomial);

#[pymethods]
impl Laurent {
    /// Parse an expression such as `x0^3 + x1^3 - 2*x0*x1` or, with `n`
    /// given, `w*x0*x1^-1` where `w` is the primitive n-th root of unity.
    #[staticmethod]
    #[pyo3(signature = (src, dim=None, vars=None, n=None))]
    pub fn parse(
        src: &str,
        dim: Option<usize>,
        vars: Option<Vec<String>>,
        n: Option<u64>,
    ) -> PyResult<Laurent> {
        let names = match (dim, vars) {
            (None, Some(v)) => VarNames::custom(v),
            (Some(d), None) => VarNames::x(d),
            (Some(d), Some(v)) => names_for(d, Some(v))?,
            (None, None) => {
                return Err(PyValueError::new_err("pass dim or vars to fix the variables"))
            }
        };
        parse_laurent(src, &names, n).map(Laurent).map_err(value_err)
    }

    #[staticmethod]
    pub fn zero(dim: usize) -> Laurent {
        Laurent(LaurentPolynomial::zero(dim))
    }

    #[staticmethod]
    pub fn one(dim: usize) -> Laurent {
        Laurent(LaurentPolynomial::one(dim))
    }

    #[getter]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn __len__(&self) -> usize {
        self.0.terms().count()
    }

    /// Total degree shared by every term, or None if inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        self.0.homogeneous_degree()
    }

    /// The rendered coefficient of the given exponent vector.
    pub fn coefficient(&self, exponents: Vec<i64>) -> PyResult<String> {
        if exponents.len() != self.0.dim() {
            return Err(PyValueError::new_err("exponent vector has the wrong length"));
        }
        Ok(self
            .0
            .coefficient(&heisenq::laurent::ExponentVector::new(exponents))
            .render())
    }

    /// The character `(k, l)` with `g*f = omega^(k*a + l*b) f` for
    /// `g = omega^c xi^a eta^b`, or None if `f` is not a semi-invariant.
    pub fn character(&self, n: u64) -> PyResult<Option<(u64, u64)>> {
        check_range("n", n, 1, 64)?;
        Ok(character_of_semiinvariant(&self.0, n))
    }

    pub fn __add__(&self, other: &Laurent) -> PyResult<Laurent> {
        if self.0.dim() != other.0.dim() {
            return Err(PyValueError::new_err("polynomials have different dimensions"));
        }
        Ok(Laurent(&self.0 + &other.0))
    }

    pub fn __sub__(&self, other: &Laurent) -> PyResult<Laurent> {
        if self.0.dim() != other.0.dim() {
            return Err(PyValueError::new_err("polynomials have different dimensions"));
        }
        Ok(Laurent(&self.0 - &other.0))
    }

    pub fn __mul__(&self, other: &Laurent) -> PyResult<Laurent> {
        if self.0.dim() != other.0.dim() {
            return Err(PyValueError::new_err("polynomials have different dimensions"));
        }
        Ok(Laurent(&self.0 * &other.0))
    }

    pub fn __neg__(&self) -> Laurent {
        Laurent(-&self.0)
    }

    pub fn __pow__(&self, k: u64, _modulo: Option<i64>) -> Laurent {
        Laurent(self.0.pow(k))
    }

    #[pyo3(signature = (vars=None))]
    pub fn render(&self, vars: Option<Vec<String>>) -> PyResult<String> {
        Ok(self.0.render(&names_for(self.0.dim(), vars)?))
    }

    pub fn __repr__(&self) -> String {
        format!("Laurent({})", self.0.render(&VarNames::x(self.0.dim())))
    }
}

impl std::fmt::Debug for Laurent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.__repr__())
    }
}

/// Structural checks on the abstract group and its realization.
#[pyfunction]
#[pyo3(signature = (n, exhaustive=None))]
pub fn group_check<'py>(
    py: Python<'py>,
    n: u64,
    exhaustive: Option<bool>,
) -> PyResult<Bound<'py, PyDict>> {
    check_range("n", n, 1, 8)?;
    let r = heisenberg::group_check(n, exhaustive.unwrap_or(n <= 4));
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("group_order", r.group_order)?;
    d.set_item("closure_is_all_normal_forms", r.closure_is_all_normal_forms)?;
    d.set_item("realize_injective", r.realize_injective)?;
    d.set_item("homomorphism_pairs_checked", r.homomorphism_pairs_checked)?;
    d.set_item("homomorphism_ok", r.homomorphism_ok)?;
    d.set_item("generator_orders_ok", r.generator_orders_ok)?;
    d.set_item("commutator", Element(r.commutator))?;
    d.set_item("commutator_scalar", r.commutator_scalar.as_cyclotomic().render())?;
    d.set_item("commutator_scalar_order_is_n", r.commutator_scalar_order_is_n)?;
    d.set_item("center_order", r.center_order)?;
    d.set_item("center_generated_by_commutator", r.center_generated_by_commutator)?;
    d.set_item("passed", r.passed())?;
    d.set_item("notes", r.notes)?;
    Ok(d)
}

/// The semi-invariant `f_k` in n variables.
#[pyfunction]
pub fn semi_invariant(n: u64, k: u64) -> PyResult<Laurent> {
    check_range("n", n, 1, 16)?;
    check_range("k", k, 1, n)?;
    Ok(Laurent(semi_invariant_f(n, k)))
}

/// Invariant dimensions per degree, from the exact Molien series.
#[pyfunction]
pub fn molien_dimensions(n: u64, max_degree: usize) -> PyResult<Vec<usize>> {
    heisenberg::molien_dimensions(n, max_degree).map_err(value_err)
}

/// Invariant dimension in one degree by brute-force Reynolds rank.
#[pyfunction]
pub fn invariant_dimension(n: u64, degree: i64) -> PyResult<usize> {
    check_range("n", n, 1, 4)?;
    if !(0..=24).contains(&degree) {
        return Err(PyValueError::new_err("brute force is capped at degree 24"));
    }
    Ok(invariant_dimension_bruteforce(n, degree))
}

/// Radical membership of every variable for the degree-n system.
#[pyfunction]
#[pyo3(signature = (n, budget=None))]
pub fn basepoint_report<'py>(
    py: Python<'py>,
    n: u64,
    budget: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    check_range("n", n, 2, 8)?;
    let budget = budget.unwrap_or(heisenq::linsys::DEFAULT_PAIR_BUDGET);
    report_dict(py, &basepoint_free_certificate(n, budget))
}

/// The verified basepoint of the degree-n system for even n >= 4,
/// rendered coordinatewise, or None when the system is basepoint-free.
#[pyfunction]
pub fn even_basepoint(n: u64) -> PyResult<Option<Vec<String>>> {
    check_range("n", n, 2, 12)?;
    Ok(even_basepoint_witness(n).map(|pt| pt.iter().map(Cyclotomic::render).collect()))
}

/// The full rationality certificate for the quotient by the group.
#[pyfunction]
pub fn certificate<'py>(py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyAny>> {
    check_range("n", n, 2, 8)?;
    report_dict(py, &rationalize::build_certificate(n))
}

/// The degree-0 lattice tower underneath the certificate.
#[pyfunction]
pub fn tower<'py>(py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyAny>> {
    check_range("n", n, 2, 8)?;
    report_dict(py, &rationalize::projective_tower(n))
}

/// The n = 3 showcase: classical generators against the Molien series.
#[pyfunction]
pub fn showcase(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    report_dict(py, &n3_showcase())
}

/// Isolated projective fixed points grouped into orbits, with points
/// rendered as ratio strings.
#[pyfunction]
pub fn orbit_summary<'py>(py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyDict>> {
    let rep = stabilizer_orbit_report(n).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("n", rep.n)?;
    let orbits = PyList::empty(py);
    for o in &rep.orbits {
        let od = PyDict::new(py);
        od.set_item("size", o.size)?;
        od.set_item("stabilizer_order", o.stabilizer_order)?;
        let points: Vec<String> = o
            .points
            .iter()
            .map(|p| {
                p.iter().map(Cyclotomic::render).collect::<Vec<_>>().join(" : ")
            })
            .collect();
        od.set_item("points", points)?;
        orbits.append(od)?;
    }
    d.set_item("orbits", orbits)?;
    d.set_item("total_points", rep.total_points)?;
    d.set_item("nonsimple_classes", rep.nonsimple_classes)?;
    Ok(d)
}

#[pymodule]
fn heisenq_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Element>()?;
    m.add_class::<Map>()?;
    m.add_class::<Laurent>()?;
    m.add_function(wrap_pyfunction!(group_check, m)?)?;
    m.add_function(wrap_pyfunction!(semi_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(molien_dimensions, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(basepoint_report, m)?)?;
    m.add_function(wrap_pyfunction!(even_basepoint, m)?)?;
    m.add_function(wrap_pyfunction!(certificate, m)?)?;
    m.add_function(wrap_pyfunction!(tower, m)?)?;
    m.add_function(wrap_pyfunction!(showcase, m)?)?;
    m.add_function(wrap_pyfunction!(orbit_summary, m)?)?;
    Ok(())
}
