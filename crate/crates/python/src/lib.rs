use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyTimeoutError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::rngs::StdRng;
use rand::SeedableRng;

use schemata::cc::{
    cc_equations, cc_stable_models_bruteforce, cc_stable_models_via_equations,
    cc_stable_models_via_schemes, cc_theory, ccgl, is_cc_stable, nss_reduct, CcProgram,
    CcSupportFamily,
};
use schemata::equations::{equations, stable_models_via_equations, theory};
use schemata::fixpoint::{
    gl_operator, gl_reduct, is_stable_model, least_model, stable_models_bruteforce,
};
use schemata::lab::{
    exhaustive_antimonotone_tables, fsp_growth_probe, random_antimonotone_table,
    verify_operator_realization, ProgramFamily,
};
use schemata::schemes::{enumerate_schemes, stable_models_via_schemes, SupportFamily, SupportMode};
use schemata::{Error, Interpretation, Universe};

create_exception!(pyschemata, SchemataError, PyException);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Syntax { .. } | Error::CompoundHead { .. } | Error::UnknownAtom { .. } => {
            PyValueError::new_err(e.to_string())
        }
        Error::Timeout { .. } => PyTimeoutError::new_err(e.to_string()),
        _ => SchemataError::new_err(e.to_string()),
    }
}

fn interpretation(universe: &Universe, names: Vec<String>) -> PyResult<Interpretation> {
    names
        .iter()
        .map(|n| {
            universe
                .lookup(n)
                .ok_or_else(|| to_py(Error::UnknownAtom { name: n.clone() }))
        })
        .collect()
}

fn names(universe: &Universe, models: &[Interpretation]) -> Vec<Vec<String>> {
    models.iter().map(|m| universe.set_names(m)).collect()
}

fn support_mode(full: bool) -> SupportMode {
    if full {
        SupportMode::All
    } else {
        SupportMode::Minimal
    }
}

/// A normal logic program, parsed from `p :- q, not r.` syntax.
#[pyclass(name = "Program", module = "pyschemata", frozen)]
struct PyProgram {
    inner: schemata::Program,
}

#[pymethods]
impl PyProgram {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let inner = schemata::Program::parse(text).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn atoms(&self) -> Vec<String> {
        self.inner.universe().names().to_vec()
    }

    #[getter]
    fn clauses(&self) -> Vec<String> {
        let p = &self.inner;
        p.clauses().iter().map(|c| p.clause_text(c)).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Program(atoms={}, clauses={})",
            self.inner.universe().len(),
            self.inner.len()
        )
    }

    fn is_horn(&self) -> bool {
        self.inner.is_horn()
    }

    fn is_stratified(&self) -> bool {
        self.inner.is_stratified()
    }

    /// Stable models by `equations`, `bruteforce` or `schemes`.
    #[pyo3(signature = (method = "equations", full = false))]
    fn stable_models(
        &self,
        py: Python<'_>,
        method: &str,
        full: bool,
    ) -> PyResult<Vec<Vec<String>>> {
        let p = &self.inner;
        let models = py
            .detach(|| match method {
                "equations" => Ok(stable_models_via_equations(p, !full)),
                "bruteforce" => Ok(stable_models_bruteforce(p)),
                "schemes" => Ok(stable_models_via_schemes(p)),
                _ => Err(PyValueError::new_err(format!("unknown method `{method}`"))),
            })?
            .map_err(to_py)?;
        Ok(names(p.universe(), &models))
    }

    fn least_model(&self) -> PyResult<Vec<String>> {
        let m = least_model(&self.inner).map_err(to_py)?;
        Ok(self.inner.universe().set_names(&m))
    }

    fn gl(&self, model: Vec<String>) -> PyResult<Vec<String>> {
        let u = self.inner.universe();
        let m = interpretation(u, model)?;
        Ok(u.set_names(&gl_operator(&self.inner, &m)))
    }

    fn is_stable(&self, model: Vec<String>) -> PyResult<bool> {
        let m = interpretation(self.inner.universe(), model)?;
        Ok(is_stable_model(&self.inner, &m))
    }

    fn reduct(&self, model: Vec<String>) -> PyResult<PyProgram> {
        let m = interpretation(self.inner.universe(), model)?;
        Ok(PyProgram {
            inner: gl_reduct(&self.inner, &m),
        })
    }

    /// Irredundant proof schemes for `atom` as `(clauses, support)` pairs.
    #[pyo3(signature = (atom, max_steps = None))]
    fn schemes(
        &self,
        atom: &str,
        max_steps: Option<usize>,
    ) -> PyResult<Vec<(Vec<String>, Vec<String>)>> {
        let p = &self.inner;
        let target = p.atom(atom).map_err(to_py)?;
        let found = enumerate_schemes(p, target, max_steps.unwrap_or(p.universe().len()));
        Ok(found
            .iter()
            .map(|s| {
                let steps = s
                    .steps
                    .iter()
                    .map(|st| p.clause_text(&p.clauses()[st.clause]))
                    .collect();
                (steps, p.universe().set_names(&s.support))
            })
            .collect())
    }

    /// Supports of every atom, keyed by atom name in universe order.
    #[pyo3(signature = (full = false))]
    fn supports<'py>(&self, py: Python<'py>, full: bool) -> PyResult<Bound<'py, PyDict>> {
        let p = &self.inner;
        let family = SupportFamily::compute(p, support_mode(full)).map_err(to_py)?;
        let u = p.universe();
        let dict = PyDict::new(py);
        for a in u.atoms() {
            dict.set_item(u.name(a), names(u, family.of(a)))?;
        }
        Ok(dict)
    }

    #[pyo3(signature = (full = false))]
    fn equations(&self, full: bool) -> PyResult<Vec<String>> {
        let eqs = equations(&self.inner, !full).map_err(to_py)?;
        Ok(eqs
            .iter()
            .map(|e| e.to_text(self.inner.universe()))
            .collect())
    }

    /// The defining-equation theory in DIMACS CNF.
    #[pyo3(signature = (full = false))]
    fn to_dimacs(&self, full: bool) -> PyResult<String> {
        let t = theory(&self.inner, !full).map_err(to_py)?;
        Ok(t.to_cnf().to_dimacs(&t.universe))
    }
}

/// A program whose bodies are cardinality constraints `l {a; b} u`.
#[pyclass(name = "CcProgram", module = "pyschemata", frozen)]
struct PyCcProgram {
    inner: CcProgram,
}

#[pymethods]
impl PyCcProgram {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let inner = CcProgram::parse(text).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_normal(p: &PyProgram) -> Self {
        Self {
            inner: CcProgram::from_normal(&p.inner),
        }
    }

    #[getter]
    fn atoms(&self) -> Vec<String> {
        self.inner.universe().names().to_vec()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "CcProgram(atoms={}, rules={})",
            self.inner.universe().len(),
            self.inner.rules().len()
        )
    }

    #[pyo3(signature = (method = "equations", full = false))]
    fn stable_models(
        &self,
        py: Python<'_>,
        method: &str,
        full: bool,
    ) -> PyResult<Vec<Vec<String>>> {
        let p = &self.inner;
        let models = py
            .detach(|| match method {
                "equations" => Ok(cc_stable_models_via_equations(p, !full)),
                "bruteforce" => Ok(cc_stable_models_bruteforce(p)),
                "schemes" => Ok(cc_stable_models_via_schemes(p)),
                _ => Err(PyValueError::new_err(format!("unknown method `{method}`"))),
            })?
            .map_err(to_py)?;
        Ok(names(p.universe(), &models))
    }

    fn ccgl(&self, model: Vec<String>) -> PyResult<Vec<String>> {
        let u = self.inner.universe();
        let m = interpretation(u, model)?;
        Ok(u.set_names(&ccgl(&self.inner, &m)))
    }

    fn is_stable(&self, model: Vec<String>) -> PyResult<bool> {
        let m = interpretation(self.inner.universe(), model)?;
        Ok(is_cc_stable(&self.inner, &m))
    }

    /// The NSS-reduct as program text.
    fn reduct(&self, model: Vec<String>) -> PyResult<String> {
        let m = interpretation(self.inner.universe(), model)?;
        Ok(nss_reduct(&self.inner, &m).to_string())
    }

    /// Supports per atom; each support is a list of upper constraints `{a; b} u`.
    #[pyo3(signature = (full = false))]
    fn supports<'py>(&self, py: Python<'py>, full: bool) -> PyResult<Bound<'py, PyDict>> {
        let p = &self.inner;
        let family = CcSupportFamily::compute(p, support_mode(full)).map_err(to_py)?;
        let u = p.universe();
        let dict = PyDict::new(py);
        for a in u.atoms() {
            let supports: Vec<Vec<String>> = family
                .of(a)
                .iter()
                .map(|s| s.uppers().map(|up| up.display(u).to_string()).collect())
                .collect();
            dict.set_item(u.name(a), supports)?;
        }
        Ok(dict)
    }

    #[pyo3(signature = (full = false))]
    fn equations(&self, full: bool) -> PyResult<Vec<String>> {
        let eqs = cc_equations(&self.inner, !full).map_err(to_py)?;
        Ok(eqs
            .iter()
            .map(|e| e.to_text(self.inner.universe()))
            .collect())
    }

    #[pyo3(signature = (full = false))]
    fn to_dimacs(&self, full: bool) -> PyResult<String> {
        let t = cc_theory(&self.inner, !full).map_err(to_py)?;
        Ok(t.to_cnf().to_dimacs(&t.universe))
    }
}

/// Checks that antimonotone tables are realized as GL operators.
/// Returns `(tables checked, tables that failed)`.
#[pyfunction]
#[pyo3(signature = (atoms = 3, exhaustive = true, samples = 100, seed = 0))]
fn realize_antimonotone(
    py: Python<'_>,
    atoms: usize,
    exhaustive: bool,
    samples: usize,
    seed: u64,
) -> PyResult<(usize, usize)> {
    py.detach(|| {
        let tables = if exhaustive {
            exhaustive_antimonotone_tables(atoms)?
        } else {
            let mut rng = StdRng::seed_from_u64(seed);
            (0..samples)
                .map(|_| random_antimonotone_table(atoms, &mut rng))
                .collect::<Result<Vec<_>, _>>()?
        };
        let failed = tables
            .iter()
            .filter(|t| verify_operator_realization(t).is_some())
            .count();
        Ok((tables.len(), failed))
    })
    .map_err(to_py)
}

/// Minimal-support counts of a program family for n = 1..=n_max,
/// with the observed trend (`bounded` or `growing`).
#[pyfunction]
fn fsp_probe(family: &str, n_max: usize) -> PyResult<(Vec<(usize, usize)>, &'static str)> {
    let family: ProgramFamily = family.parse().map_err(PyValueError::new_err)?;
    let probe = fsp_growth_probe(family, n_max).map_err(to_py)?;
    Ok((probe.counts, probe.trend.name()))
}

#[pymodule]
fn pyschemata(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProgram>()?;
    m.add_class::<PyCcProgram>()?;
    m.add_function(wrap_pyfunction!(realize_antimonotone, m)?)?;
    m.add_function(wrap_pyfunction!(fsp_probe, m)?)?;
    m.add("SchemataError", m.py().get_type::<SchemataError>())?;
    Ok(())
}
