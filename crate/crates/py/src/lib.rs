//! Python bindings for `navlogic`.
//!
//! View-set arguments accept either a string (`"vA,vE"`, `"{vA,vE}"`) or a
//! sequence of names.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyString;

use navlogic::navigation::{
    check_memoryless_witness, check_recall_witness, navigability_table, synth_memoryless, synth_recall,
    MemorylessStrategy, RecallMachine,
};
use navlogic::proof::{self, AxiomSystem, Derivation};
use navlogic::testkit::{self, RandomParams};
use navlogic::{canonical, cli, Budget, Kind, NavStatement, TransitionSystem, ViewSet};

fn err(e: navlogic::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn views(arg: &Bound<'_, PyAny>) -> PyResult<ViewSet> {
    if let Ok(s) = arg.cast::<PyString>() {
        return cli::parse_view_list(s.to_str()?).map_err(err);
    }
    let names: Vec<String> = arg.extract()?;
    ViewSet::new(names).map_err(err)
}

fn kind(name: &str) -> PyResult<Kind> {
    name.parse().map_err(err)
}

fn axioms(name: &str) -> PyResult<AxiomSystem> {
    name.parse().map_err(err)
}

fn atoms(texts: &[String]) -> PyResult<Vec<NavStatement>> {
    texts.iter().map(|t| NavStatement::parse(t).map_err(err)).collect()
}

/// A finite transition system with indistinguishability classes and views.
#[pyclass(name = "System", frozen)]
struct PySystem {
    inner: TransitionSystem,
}

#[pymethods]
impl PySystem {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PySystem {
            inner: TransitionSystem::parse(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| PyValueError::new_err(format!("cannot read {path}: {e}")))?;
        Self::new(&text)
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn states(&self) -> Vec<String> {
        self.inner.state_names().to_vec()
    }

    #[getter]
    fn instructions(&self) -> Vec<String> {
        self.inner.instruction_names().to_vec()
    }

    #[getter]
    fn views(&self) -> Vec<String> {
        self.inner.views().map(|(n, _)| n.to_string()).collect()
    }

    /// Observation classes as lists of state names.
    #[getter]
    fn classes(&self) -> Vec<Vec<String>> {
        (0..self.inner.num_classes())
            .map(|c| {
                self.inner
                    .class_members(c)
                    .iter()
                    .map(|&s| self.inner.state_name(s).to_string())
                    .collect()
            })
            .collect()
    }

    fn successors(&self, state: &str, instruction: &str) -> PyResult<Vec<String>> {
        let s = self.inner.state_id(state).map_err(err)?;
        let i = self.inner.instruction_id(instruction).map_err(err)?;
        Ok(self
            .inner
            .successors(s, i)
            .iter()
            .map(|&t| self.inner.state_name(t).to_string())
            .collect())
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __str__(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!(
            "System(name={:?}, states={}, instructions={}, classes={})",
            self.inner.name(),
            self.inner.num_states(),
            self.inner.num_instructions(),
            self.inner.num_classes()
        )
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Canonical rendering of a formula.
#[pyfunction]
fn format_formula(text: &str) -> PyResult<String> {
    Ok(navlogic::format_formula(&navlogic::parse_formula(text).map_err(err)?))
}

#[pyfunction]
fn evaluate(system: &PySystem, formula: &str, kind: &str) -> PyResult<bool> {
    let f = navlogic::parse_formula(formula).map_err(err)?;
    navlogic::navigation::evaluate(&system.inner, &f, self::kind(kind)?, &Budget::default()).map_err(err)
}

/// Strategy or machine text, or `None` when no strategy of that kind exists.
#[pyfunction]
fn synth(
    system: &PySystem,
    from_views: &Bound<'_, PyAny>,
    to_views: &Bound<'_, PyAny>,
    kind: &str,
) -> PyResult<Option<String>> {
    let sys = &system.inner;
    let (a, b) = (views(from_views)?, views(to_views)?);
    let budget = Budget::default();
    Ok(match self::kind(kind)? {
        Kind::Memoryless => synth_memoryless(sys, &a, &b, &budget)
            .map_err(err)?
            .map(|s| s.to_text(sys)),
        Kind::Recall => synth_recall(sys, &a, &b, &budget).map_err(err)?.map(|m| m.to_text(sys)),
    })
}

#[pyfunction]
fn verify(
    system: &PySystem,
    strategy: &str,
    from_views: &Bound<'_, PyAny>,
    to_views: &Bound<'_, PyAny>,
    kind: &str,
) -> PyResult<bool> {
    let sys = &system.inner;
    let (a, b) = (views(from_views)?, views(to_views)?);
    match self::kind(kind)? {
        Kind::Memoryless => {
            check_memoryless_witness(sys, &MemorylessStrategy::parse(sys, strategy).map_err(err)?, &a, &b)
        }
        Kind::Recall => check_recall_witness(sys, &RecallMachine::parse(sys, strategy).map_err(err)?, &a, &b),
    }
    .map_err(err)
}

/// Rows of `m`/`r`/`-` symbols, one row and column per observation class.
#[pyfunction]
fn table(system: &PySystem) -> PyResult<Vec<Vec<String>>> {
    let t = navigability_table(&system.inner, &Budget::default()).map_err(err)?;
    Ok((0..t.labels.len())
        .map(|r| t.row_symbols(r).split_whitespace().map(str::to_string).collect())
        .collect())
}

#[pyfunction]
fn recall_oracle(system: &PySystem, from_views: &Bound<'_, PyAny>, to_views: &Bound<'_, PyAny>) -> PyResult<bool> {
    testkit::recall_oracle(
        &system.inner,
        &views(from_views)?,
        &views(to_views)?,
        &Budget::default(),
    )
    .map_err(err)
}

#[pyfunction]
fn derives(axioms: &str, hypotheses: Vec<String>, goal: &str) -> PyResult<bool> {
    let goal = NavStatement::parse(goal).map_err(err)?;
    Ok(proof::derives(self::axioms(axioms)?, &atoms(&hypotheses)?, &goal))
}

/// Proof text, or `None` when the goal is not derivable.
#[pyfunction]
fn derive_proof(axioms: &str, hypotheses: Vec<String>, goal: &str) -> PyResult<Option<String>> {
    let goal = NavStatement::parse(goal).map_err(err)?;
    Ok(proof::derive_proof(self::axioms(axioms)?, &atoms(&hypotheses)?, &goal).map(|d| d.to_text()))
}

/// `None` if the proof is valid, otherwise the first defect.
#[pyfunction]
fn proof_defect(axioms: &str, proof_text: &str) -> PyResult<Option<String>> {
    let d = Derivation::parse(proof_text).map_err(err)?;
    Ok(proof::check_proof(self::axioms(axioms)?, &d)
        .err()
        .map(|e| e.to_string()))
}

#[pyfunction]
fn check_proof(axioms: &str, proof_text: &str) -> PyResult<bool> {
    Ok(proof_defect(axioms, proof_text)?.is_none())
}

#[pyfunction]
#[pyo3(signature = (axioms, views, hypotheses=Vec::new()))]
fn canonical_system(axioms: &str, views: &Bound<'_, PyAny>, hypotheses: Vec<String>) -> PyResult<PySystem> {
    let universe = self::views(views)?;
    let sigma = atoms(&hypotheses)?;
    let inner = match self::axioms(axioms)? {
        AxiomSystem::Recall => canonical::build_recall_canonical(&sigma, &universe),
        AxiomSystem::Memoryless => canonical::build_memoryless_canonical(&sigma, &universe),
    }
    .map_err(err)?;
    Ok(PySystem { inner })
}

#[pyfunction]
#[pyo3(signature = (seed, max_states=6, max_instructions=3, max_classes=4, max_class_size=3, max_branching=2))]
fn random_system(
    seed: u64,
    max_states: usize,
    max_instructions: usize,
    max_classes: usize,
    max_class_size: usize,
    max_branching: usize,
) -> PyResult<PySystem> {
    let params = RandomParams {
        states: (1, max_states),
        instructions: (1, max_instructions),
        max_classes,
        max_class_size,
        branching: (1, max_branching),
    };
    Ok(PySystem {
        inner: testkit::random_system(seed, &params).map_err(err)?,
    })
}

/// Runs the command-line interface in-process: `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = cli::run_command(std::iter::once("navlogic".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule(name = "navlogic")]
fn navlogic_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystem>()?;
    m.add_function(wrap_pyfunction!(format_formula, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(synth, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(recall_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(derives, m)?)?;
    m.add_function(wrap_pyfunction!(derive_proof, m)?)?;
    m.add_function(wrap_pyfunction!(proof_defect, m)?)?;
    m.add_function(wrap_pyfunction!(check_proof, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_system, m)?)?;
    m.add_function(wrap_pyfunction!(random_system, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
