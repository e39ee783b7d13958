use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use num_bigint::BigInt;
use num_rational::BigRational;
use simclass_core::classify::{self as cls, CanonForm, ClassNumber};
use simclass_core::dedekind::{self, Freeness, LElem, QuadBase};
use simclass_core::linalg::Matrix;
use simclass_core::lm::{self, IdealBasis, LmRing};
use simclass_core::oracle::{self, DEFAULT_BUDGET};
use simclass_core::parse::{parse_elem, parse_poly};
use simclass_core::rings::{Ramification, RingDesc, ScalarField, Val};

create_exception!(simclass, SimclassError, PyValueError);

fn err(e: simclass_core::Error) -> PyErr {
    SimclassError::new_err(format!("{}: {}", e.name(), e))
}

type Rows = Vec<Vec<String>>;

fn text(x: &Bound<'_, PyAny>) -> PyResult<String> {
    Ok(x.str()?.to_string())
}

fn matrix_arg<F: ScalarField>(field: &F, rows: &Bound<'_, PyAny>) -> PyResult<Matrix> {
    let mut out = Vec::new();
    for row in rows.try_iter()? {
        let mut r = Vec::new();
        for x in row?.try_iter()? {
            r.push(parse_elem(field, &text(&x?)?).map_err(err)?);
        }
        out.push(r);
    }
    Matrix::new(out).map_err(err)
}

fn rows(m: &Matrix) -> Rows {
    m.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

/// A discrete valuation ring: `Z_(p)`, `F_p[t]_(t)`, or a quadratic extension of one.
#[pyclass(frozen, eq, skip_from_py_object, module = "simclass")]
#[derive(Clone, PartialEq)]
struct Ring {
    inner: RingDesc,
}

#[pymethods]
impl Ring {
    #[staticmethod]
    fn zloc(p: u64) -> PyResult<Self> {
        Ok(Ring { inner: RingDesc::zloc(p).map_err(err)? })
    }

    #[staticmethod]
    fn fptloc(p: u64) -> PyResult<Self> {
        Ok(Ring { inner: RingDesc::fptloc(p).map_err(err)? })
    }

    /// Adjoin a root `w` of the monic quadratic `minpoly` over `base`.
    #[staticmethod]
    #[pyo3(signature = (base, minpoly, ramification = "unramified"))]
    fn quad_ext(base: &Ring, minpoly: &str, ramification: &str) -> PyResult<Self> {
        let f = parse_poly(&base.inner, minpoly).map_err(err)?;
        let (a, b) = f.quad_ab(&base.inner).map_err(err)?;
        let ram = match ramification {
            "unramified" => Ramification::Unramified,
            "eisenstein" => Ramification::Eisenstein,
            other => return Err(SimclassError::new_err(format!("unknown ramification {other:?}"))),
        };
        Ok(Ring { inner: RingDesc::quad_ext(base.inner.clone(), a, b, ram).map_err(err)? })
    }

    #[getter]
    fn prime(&self) -> u64 {
        self.inner.prime()
    }

    #[getter]
    fn characteristic(&self) -> u64 {
        self.inner.characteristic()
    }

    /// Valuation of an element; `None` for zero.
    fn valuation(&self, x: &Bound<'_, PyAny>) -> PyResult<Option<i64>> {
        let x = parse_elem(&self.inner, &text(x)?).map_err(err)?;
        Ok(match self.inner.val(&x) {
            Val::Fin(v) => Some(v),
            Val::Inf => None,
        })
    }

    fn is_unit(&self, x: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.inner.is_unit(&parse_elem(&self.inner, &text(x)?).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("Ring({:?})", self.inner)
    }
}

/// One similarity class: its label and canonical matrix.
#[pyclass(frozen, eq, skip_from_py_object, module = "simclass")]
#[derive(Clone, PartialEq)]
struct CanonicalForm {
    inner: CanonForm,
}

#[pymethods]
impl CanonicalForm {
    #[getter]
    fn name(&self) -> String {
        self.inner.to_string()
    }

    #[getter]
    fn matrix(&self) -> PyResult<Rows> {
        Ok(rows(&cls::canonical_matrix(&self.inner).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("CanonicalForm({})", self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[pyfunction]
fn classify(ring: &Ring, a: &Bound<'_, PyAny>) -> PyResult<CanonicalForm> {
    let a = matrix_arg(&ring.inner, a)?;
    Ok(CanonicalForm { inner: cls::classify(&ring.inner, &a).map_err(err)? })
}

/// The canonical form of `a` and a matrix `U` with `U a = C U`.
#[pyfunction]
fn to_canonical(ring: &Ring, a: &Bound<'_, PyAny>) -> PyResult<(CanonicalForm, Rows)> {
    let a = matrix_arg(&ring.inner, a)?;
    let (form, w) = cls::to_canonical(&ring.inner, &a).map_err(err)?;
    Ok((CanonicalForm { inner: form }, rows(&w.u)))
}

#[pyfunction]
fn similar(ring: &Ring, a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<bool> {
    let (a, b) = (matrix_arg(&ring.inner, a)?, matrix_arg(&ring.inner, b)?);
    cls::similar(&ring.inner, &a, &b).map_err(err)
}

/// A verified `U` in `GL_2(R)` with `U a = b U`, or `None`.
#[pyfunction]
fn witness(ring: &Ring, a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<Option<Rows>> {
    let (a, b) = (matrix_arg(&ring.inner, a)?, matrix_arg(&ring.inner, b)?);
    Ok(cls::witness(&ring.inner, &a, &b).map_err(err)?.map(|w| rows(&w.u)))
}

#[pyfunction]
#[pyo3(signature = (ring, poly, insep_bound = None))]
fn class_list(ring: &Ring, poly: &str, insep_bound: Option<u32>) -> PyResult<Vec<CanonicalForm>> {
    let f = parse_poly(&ring.inner, poly).map_err(err)?;
    let forms = cls::class_list(&ring.inner, &f, insep_bound).map_err(err)?;
    Ok(forms.into_iter().map(|inner| CanonicalForm { inner }).collect())
}

/// `(count, is_lower_bound)`.
#[pyfunction]
#[pyo3(signature = (ring, poly, insep_bound = None))]
fn class_number(ring: &Ring, poly: &str, insep_bound: Option<u32>) -> PyResult<(u64, bool)> {
    let f = parse_poly(&ring.inner, poly).map_err(err)?;
    Ok(match cls::class_number(&ring.inner, &f, insep_bound).map_err(err)? {
        ClassNumber::Finite(n) => (n, false),
        ClassNumber::LowerBound(n) => (n, true),
    })
}

fn lm_ring(ring: Option<&Ring>) -> LmRing {
    match ring {
        Some(r) => LmRing::Dvr(r.inner.clone()),
        None => LmRing::Integers,
    }
}

fn basis_arg(field: &LmRing, poly: &str, basis: &Bound<'_, PyAny>) -> PyResult<IdealBasis> {
    let f = parse_poly(field, poly).map_err(err)?;
    let m = matrix_arg(field, basis)?;
    Ok(IdealBasis::new(f, m.rows().to_vec()))
}

/// Basis vectors, in the power basis of `K[x]/(poly)`, of a lattice attached to `a`.
/// Without `ring` the coefficients live in `Z`.
#[pyfunction]
#[pyo3(signature = (poly, a, ring = None))]
fn matrix_to_ideal(poly: &str, a: &Bound<'_, PyAny>, ring: Option<&Ring>) -> PyResult<Rows> {
    let field = lm_ring(ring);
    let f = parse_poly(&field, poly).map_err(err)?;
    let a = matrix_arg(&field, a)?;
    let j = lm::matrix_to_ideal(&field, &f, &a).map_err(err)?;
    Ok(rows(&j.coords().map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (poly, basis, ring = None))]
fn ideal_to_matrix(poly: &str, basis: &Bound<'_, PyAny>, ring: Option<&Ring>) -> PyResult<Rows> {
    let field = lm_ring(ring);
    let j = basis_arg(&field, poly, basis)?;
    Ok(rows(&lm::ideal_to_matrix(&field, &j).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (poly, basis1, basis2, ring = None))]
fn equivalent(poly: &str, basis1: &Bound<'_, PyAny>, basis2: &Bound<'_, PyAny>, ring: Option<&Ring>) -> PyResult<bool> {
    let field = lm_ring(ring);
    let j1 = basis_arg(&field, poly, basis1)?;
    let j2 = basis_arg(&field, poly, basis2)?;
    lm::equivalent(&field, &j1, &j2).map_err(err)
}

/// The reduced binary quadratic form `(a, b, c)` of the lattice attached to an integer matrix.
#[pyfunction]
fn reduced_form(poly: &str, a: &Bound<'_, PyAny>) -> PyResult<(String, String, String)> {
    let field = LmRing::Integers;
    let f = parse_poly(&field, poly).map_err(err)?;
    let a = matrix_arg(&field, a)?;
    let j = lm::matrix_to_ideal(&field, &f, &a).map_err(err)?;
    let r = lm::reduce_form(&lm::ideal_to_form(&j).map_err(err)?).map_err(err)?;
    Ok((r.a.to_string(), r.b.to_string(), r.c.to_string()))
}

/// A residue matrix conjugating `a` to `b` modulo `pi^n`, or `None` when there is none.
#[pyfunction]
#[pyo3(signature = (ring, a, b, n, budget = DEFAULT_BUDGET))]
fn conj_search_mod(ring: &Ring, a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>, n: u32, budget: u64) -> PyResult<Option<Rows>> {
    let (a, b) = (matrix_arg(&ring.inner, a)?, matrix_arg(&ring.inner, b)?);
    Ok(oracle::conj_search_mod(&ring.inner, &a, &b, n, budget).map_err(err)?.map(|w| rows(&w.u)))
}

fn rational(s: &str) -> PyResult<BigRational> {
    let s = s.trim();
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let p = |t: &str| t.trim().parse().map_err(|_| SimclassError::new_err(format!("bad rational {s:?}")));
    let d: BigInt = p(d)?;
    if d == 0.into() {
        return Err(SimclassError::new_err("zero denominator"));
    }
    Ok(BigRational::new(p(n)?, d))
}

/// Freeness of the `R[theta]`-lattice generated by `generators` over `R = Z[sqrt d]`.
///
/// Each generator is given by its rational coordinates on `(1, w, theta, w theta)`.
/// Returns a dict with `free`, `steinitz`, and for free lattices `basis` and `matrix`.
#[pyfunction]
fn lattice_free(py: Python<'_>, d: i64, poly: &str, generators: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Py<PyAny>> {
    let base = QuadBase::new(d).map_err(err)?;
    let f = parse_poly(&base, poly).map_err(err)?;
    let mut gens = Vec::new();
    for g in &generators {
        if g.len() != 4 {
            return Err(SimclassError::new_err("generators are 4-vectors"));
        }
        let c = g.iter().map(|x| rational(&text(x)?)).collect::<PyResult<Vec<_>>>()?;
        gens.push(LElem::from_coords(&base, &[c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]));
    }
    let j = dedekind::lattice_from_generators(&base, &f, &gens).map_err(err)?;
    let x0 = dedekind::default_x0(&j);
    let out = pyo3::types::PyDict::new(py);
    out.set_item("intersection", dedekind::intersect_base(&j).to_string())?;
    out.set_item("coefficient_ideal", dedekind::coefficient_ideal(&j, &x0).map_err(err)?.to_string())?;
    out.set_item("steinitz", dedekind::steinitz(&j, &x0).map_err(err)?.to_string())?;
    match dedekind::is_free(&j) {
        Freeness::Free(b) => {
            let a = dedekind::mult_matrix(&j, &b).map_err(err)?;
            out.set_item("free", true)?;
            out.set_item("basis", (b.b1.to_string(), b.b2.to_string()))?;
            out.set_item("matrix", rows(&a))?;
        }
        Freeness::NotFree { .. } => out.set_item("free", false)?,
    }
    Ok(out.into_any().unbind())
}

#[pymodule]
#[pyo3(name = "simclass")]
pub fn simclass(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SimclassError", m.py().get_type::<SimclassError>())?;
    m.add_class::<Ring>()?;
    m.add_class::<CanonicalForm>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(to_canonical, m)?)?;
    m.add_function(wrap_pyfunction!(similar, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(class_list, m)?)?;
    m.add_function(wrap_pyfunction!(class_number, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_to_ideal, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_to_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_form, m)?)?;
    m.add_function(wrap_pyfunction!(conj_search_mod, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_free, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse() {
        assert_eq!(rational(" -2/6 ").unwrap(), BigRational::new((-1).into(), 3.into()));
        assert_eq!(rational("7").unwrap(), BigRational::from_integer(7.into()));
    }
}
