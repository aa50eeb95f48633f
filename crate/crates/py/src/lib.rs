//! Python bindings: sessions over the supersingular locus with level
//! structure, fibers of the Eichler-order map, isogeny graphs, and the
//! counting utilities.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sslevel::counting;
use sslevel::fibers;
use sslevel::fixtures::reference_config;
use sslevel::graphs;
use sslevel::level::LevelSet;
use sslevel::session::{Session as CoreSession, SessionConfig};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A deterministic computation session: the supersingular curves over
/// F_bar_p with their level-N structure, in a fixed working field.
#[pyclass]
struct Session {
    inner: CoreSession,
    set: LevelSet,
}

#[pymethods]
impl Session {
    #[new]
    #[pyo3(signature = (p, n, ell=None, fp2_modulus=None, tower_modulus=None, overrides=None, reference=false))]
    fn new(
        p: u64,
        n: u64,
        ell: Option<u64>,
        fp2_modulus: Option<String>,
        tower_modulus: Option<String>,
        overrides: Option<String>,
        reference: bool,
    ) -> PyResult<Self> {
        let cfg = if reference {
            reference_config(p, n, ell)
                .ok_or_else(|| err(format!("no bundled reference data for p = {p}")))?
        } else {
            SessionConfig {
                p,
                n,
                ell,
                fp2_modulus,
                tower_modulus,
                overrides,
            }
        };
        let inner = CoreSession::new(&cfg).map_err(err)?;
        let set = inner.level_set();
        Ok(Session { inner, set })
    }

    /// The supersingular j-invariants, as printed elements of F_{p^2}.
    fn j_invariants(&self) -> Vec<String> {
        (0..self.inner.curve_count())
            .map(|i| self.inner.curves[i].j_fp2.to_string())
            .collect()
    }

    /// Canonical labels "(E_<j>, <generator x>)" of the classes [E, G].
    fn classes(&self) -> Vec<String> {
        (0..self.set.len())
            .map(|i| self.inner.class_label(&self.set, i))
            .collect()
    }

    /// Fibers of the Eichler-order map: (size, tag, member labels) rows.
    fn fibers(&self) -> PyResult<Vec<(usize, String, Vec<String>)>> {
        let fibers = fibers::fiber_partition(&self.inner, &self.set).map_err(err)?;
        Ok(fibers
            .iter()
            .map(|f| {
                (
                    f.size,
                    f.tag.to_string(),
                    f.classes
                        .iter()
                        .map(|&c| self.inner.class_label(&self.set, c))
                        .collect(),
                )
            })
            .collect())
    }

    /// Fiber-size census (F1, F2, F4, T, #S_p); requires p = 1 mod 12.
    fn census(&self) -> PyResult<(usize, usize, usize, usize, usize)> {
        let c = fibers::fiber_census(&self.inner, &self.set).map_err(err)?;
        Ok((c.f1, c.f2, c.f4, c.t, c.s_p))
    }

    /// Direct enumeration of alpha_N and alpha'_N (degree-N isogenies onto
    /// the Frobenius conjugate; the primed count excludes j in F_p).
    fn alpha_enumerated(&self) -> (u64, u64) {
        let e = fibers::count_conjugate_isogenies(&self.inner);
        (e.alpha, e.alpha_prime)
    }

    /// DOT text of the degree-ell graph on level classes (requires ell).
    #[pyo3(signature = (undirected=false, base=false))]
    fn graph_dot(&self, undirected: bool, base: bool) -> PyResult<String> {
        let g = if base {
            graphs::build_base_graph(&self.inner).map_err(err)?
        } else {
            graphs::build_level_graph(&self.inner).map_err(err)?
        };
        graphs::export_dot(&g, undirected).map_err(err)
    }

    /// Number of connected components of the degree-ell level graph.
    fn components(&self) -> PyResult<usize> {
        let g = graphs::build_level_graph(&self.inner).map_err(err)?;
        Ok(graphs::connected_components(&g))
    }

    fn __repr__(&self) -> String {
        format!(
            "Session(p={}, n={}, curves={}, classes={})",
            self.inner.p,
            self.inner.n,
            self.inner.curve_count(),
            self.set.len()
        )
    }
}

/// Class number of the imaginary quadratic order of discriminant d.
#[pyfunction]
fn class_number(d: i64) -> PyResult<u64> {
    counting::class_number(d).map_err(err)
}

/// Exact alpha_N from the class-number formula.
#[pyfunction]
fn alpha_exact(p: u64, n: u64) -> PyResult<u64> {
    counting::alpha_exact(p, n).map_err(err)
}

/// The lower bound sqrt(Np) / (6 (N+1) log log(Np)).
#[pyfunction]
fn ehlmp_lower_bound(p: u64, n: u64) -> PyResult<f64> {
    counting::ehlmp_lower_bound(p, n).map_err(err)
}

#[pymodule]
fn sslevel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Session>()?;
    m.add_function(wrap_pyfunction!(class_number, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_exact, m)?)?;
    m.add_function(wrap_pyfunction!(ehlmp_lower_bound, m)?)?;
    Ok(())
}
