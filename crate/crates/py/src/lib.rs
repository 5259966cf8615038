//! Python bindings: `import fu_forge`.

use std::collections::{BTreeMap, BTreeSet};

use fu_forge_core::construction::{self, ConstructionTrace, SearchParams, StageConstraints};
use fu_forge_core::fu;
use fu_forge_core::meshing;
use fu_forge_core::partition::{self, Coloring, FrsOutcome, FrsQuery, Refutation};
use fu_forge_core::{DisjointSeq, Error, FSet, Universe, DEFAULT_UNIVERSE};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(fu_forge, BudgetExceeded, PyException, "A search ran out of its node budget.");
create_exception!(fu_forge, NotFound, PyException, "A search finished without a solution.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded(_) => BudgetExceeded::new_err(e.to_string()),
        Error::NotFound => NotFound::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

const DEFAULT_BUDGET: u64 = 10_000_000;

/// A finite nonempty set of naturals.
#[pyclass(name = "FSet", module = "fu_forge", frozen, eq, ord, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PyFSet(FSet);

#[pymethods]
impl PyFSet {
    #[new]
    fn new(members: Vec<u32>) -> PyResult<Self> {
        FSet::new(members).map(PyFSet).map_err(py_err)
    }

    fn min(&self) -> u32 {
        self.0.min_elem()
    }

    fn max(&self) -> u32 {
        self.0.max_elem()
    }

    fn to_list(&self) -> Vec<u32> {
        self.0.to_vec()
    }

    fn union(&self, other: &PyFSet) -> PyResult<PyFSet> {
        self.0.union(&other.0).map(PyFSet).map_err(py_err)
    }

    fn precedes(&self, other: &PyFSet) -> bool {
        self.0.precedes(&other.0)
    }

    fn meshes(&self, other: &PyFSet) -> bool {
        self.0.meshes(&other.0)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __contains__(&self, v: u32) -> bool {
        self.0.contains(v)
    }

    fn __repr__(&self) -> String {
        format!("FSet({})", self.0)
    }
}

/// A sequence of pairwise disjoint sets.
#[pyclass(name = "DisjointSeq", module = "fu_forge", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq)]
pub struct PySeq(DisjointSeq);

#[pymethods]
impl PySeq {
    #[new]
    fn new(entries: Vec<Vec<u32>>) -> PyResult<Self> {
        let sets = entries
            .into_iter()
            .map(FSet::new)
            .collect::<Result<Vec<_>, _>>()
            .map_err(py_err)?;
        DisjointSeq::new(sets).map(PySeq).map_err(py_err)
    }

    fn entries(&self) -> Vec<PyFSet> {
        self.0.iter().cloned().map(PyFSet).collect()
    }

    fn to_lists(&self) -> Vec<Vec<u32>> {
        self.0.iter().map(FSet::to_vec).collect()
    }

    fn is_ordered(&self) -> bool {
        self.0.is_ordered()
    }

    fn suffix(&self, k: usize) -> PySeq {
        PySeq(self.0.suffix(k))
    }

    /// FU of the entries from index `k` on, in set order.
    #[pyo3(signature = (k = 0))]
    fn fu_set(&self, k: usize) -> PyResult<Vec<PyFSet>> {
        let set = fu::fu_set(&self.0, k).map_err(py_err)?;
        Ok(set.into_iter().map(PyFSet).collect())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __getitem__(&self, i: usize) -> PyResult<PyFSet> {
        self.0
            .get(i)
            .cloned()
            .map(PyFSet)
            .ok_or_else(|| PyIndexError::new_err(format!("index {i} out of range")))
    }

    fn __repr__(&self) -> String {
        format!("DisjointSeq({})", self.0)
    }
}

fn seqs(v: Vec<DisjointSeq>) -> Vec<PySeq> {
    v.into_iter().map(PySeq).collect()
}

#[pyfunction]
#[pyo3(signature = (blocks, universe = DEFAULT_UNIVERSE))]
fn gen_base_sequence(blocks: usize, universe: u32) -> PyResult<PySeq> {
    let u = Universe::new(universe).map_err(py_err)?;
    meshing::gen_base_sequence(blocks, u).map(PySeq).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (y, x, drop = 0))]
fn is_condensation(y: &PySeq, x: &PySeq, drop: usize) -> bool {
    fu::is_condensation(&y.0, &x.0, drop)
}

#[pyfunction]
#[pyo3(signature = (x, n, budget = DEFAULT_BUDGET))]
fn enumerate_condensations(x: &PySeq, n: usize, budget: u64) -> PyResult<Vec<PySeq>> {
    fu::enumerate_condensations(&x.0, n, budget).map(seqs).map_err(py_err)
}

#[pyfunction]
fn x_supp(z: &PyFSet, x: &PySeq) -> PyResult<Vec<usize>> {
    fu::x_supp(&z.0, &x.0).map(|s| s.indices().to_vec()).map_err(py_err)
}

/// Edges of the meshing graph of `t` over `s` (default `t`) and whether it
/// is complete.
#[pyfunction]
#[pyo3(signature = (t, s = None))]
fn meshing_graph(t: &PySeq, s: Option<&PySeq>) -> PyResult<(Vec<(usize, usize)>, bool)> {
    let g = meshing::meshing_graph(&t.0, &s.unwrap_or(t).0).map_err(py_err)?;
    Ok((g.edges().iter().copied().collect(), g.is_complete()))
}

/// An n-witness inside FU(`within`) over base `s`, or `None`.
#[pyfunction]
#[pyo3(signature = (within, s, n, budget = DEFAULT_BUDGET))]
fn find_n_witness(within: &PySeq, s: &PySeq, n: usize, budget: u64) -> PyResult<Option<PySeq>> {
    let a = fu::fu_set(&within.0, 0).map_err(py_err)?;
    Ok(meshing::find_n_witness(&a, &s.0, n, budget).map_err(py_err)?.map(PySeq))
}

#[pyfunction]
fn make_complete_witness(v: &PySeq, n: usize) -> PyResult<PySeq> {
    meshing::make_complete_witness(&v.0, n).map(PySeq).map_err(py_err)
}

#[pyfunction]
fn minmax_witness(mins: Vec<u32>, maxes: Vec<u32>, s: &PySeq, n: usize) -> PyResult<Option<PySeq>> {
    let mins: BTreeSet<u32> = mins.into_iter().collect();
    let maxes: BTreeSet<u32> = maxes.into_iter().collect();
    Ok(meshing::minmax_witness(&mins, &maxes, &s.0, n).map_err(py_err)?.map(PySeq))
}

#[pyfunction]
fn minmax_word(seq: &PySeq) -> Vec<u8> {
    meshing::minmax_word(&seq.0)
}

#[pyfunction]
fn splitting_points(x: &PyFSet, t: &PySeq) -> PyResult<Vec<u32>> {
    Ok(partition::splitting_points(&x.0, &t.0).map_err(py_err)?.into_iter().collect())
}

#[pyfunction]
fn pi(x: &PyFSet, t: &PySeq) -> PyResult<usize> {
    partition::pi(&x.0, &t.0).map_err(py_err)
}

/// `(set, color)` cells of a coloring.
type Cells = Vec<(Vec<u32>, u32)>;

fn refutations(refs: &[Refutation]) -> Vec<(usize, Cells)> {
    refs.iter()
        .map(|r| (r.m, r.coloring.cells().iter().map(|(s, &c)| (s.to_vec(), c)).collect()))
        .collect()
}

/// Least m such that every c-coloring of m generators has a monochromatic
/// length-n condensation. Returns a dict with `outcome` and the refuting
/// colorings found below the threshold.
#[pyfunction]
#[pyo3(signature = (n, c, max_m = 6, budget = DEFAULT_BUDGET, jobs = 1))]
fn frs_number<'py>(
    py: Python<'py>,
    n: usize,
    c: u32,
    max_m: usize,
    budget: u64,
    jobs: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let query = FrsQuery { n, colors: c, max_m, budget, jobs };
    let out = py.detach(|| partition::frs_number(&query)).map_err(py_err)?;
    let d = PyDict::new(py);
    match out {
        FrsOutcome::Found { m, refutations: r } => {
            d.set_item("outcome", "found")?;
            d.set_item("m", m)?;
            d.set_item("refutations", refutations(&r))?;
        }
        FrsOutcome::Exhausted { refutations: r } => {
            d.set_item("outcome", "exhausted")?;
            d.set_item("refutations", refutations(&r))?;
        }
        FrsOutcome::BudgetExceeded { stalled_at, lower_bound, refutations: r } => {
            d.set_item("outcome", "budget_exceeded")?;
            d.set_item("stalled_at", stalled_at)?;
            d.set_item("lower_bound", lower_bound)?;
            d.set_item("refutations", refutations(&r))?;
        }
    }
    Ok(d)
}

fn coloring(colors: u32, cells: Cells) -> PyResult<Coloring> {
    let cells = cells
        .into_iter()
        .map(|(s, c)| FSet::new(s).map(|s| (s, c)))
        .collect::<Result<BTreeMap<_, _>, _>>()
        .map_err(py_err)?;
    Coloring::new(colors, cells).map_err(py_err)
}

/// The least length-n condensation of `x` with a monochromatic FU-set
/// under the coloring given as `[(set, color), ...]`, with its color.
#[pyfunction]
#[pyo3(signature = (x, colors, cells, n, budget = DEFAULT_BUDGET))]
fn homogeneous_condensation(
    x: &PySeq,
    colors: u32,
    cells: Cells,
    n: usize,
    budget: u64,
) -> PyResult<Option<(PySeq, u32)>> {
    let col = coloring(colors, cells)?;
    let found = partition::homogeneous_condensation(&x.0, &col, n, budget).map_err(py_err)?;
    Ok(found.map(|(s, c)| (PySeq(s), c)))
}

/// Canonical class name of the function given as `[(set, value), ...]`.
#[pyfunction]
fn classify_canonical(values: Vec<(Vec<u32>, u64)>) -> PyResult<String> {
    let fvals = values
        .into_iter()
        .map(|(s, v)| FSet::new(s).map(|s| (s, v)))
        .collect::<Result<BTreeMap<_, _>, _>>()
        .map_err(py_err)?;
    let domain: BTreeSet<FSet> = fvals.keys().cloned().collect();
    let class = partition::classify_canonical(&fvals, &domain).map_err(py_err)?;
    Ok(format!("{class:?}"))
}

/// Runs a tower from JSON stage constraints and returns the trace as JSON.
#[pyfunction]
#[pyo3(signature = (base, stages, target_len = 8, budget = DEFAULT_BUDGET, max_union = 2))]
fn run_tower(
    py: Python<'_>,
    base: &PySeq,
    stages: &str,
    target_len: usize,
    budget: u64,
    max_union: usize,
) -> PyResult<String> {
    let stages: Vec<StageConstraints> = serde_json::from_str(stages).map_err(json_err)?;
    let params = SearchParams { target_len, budget, max_union };
    let trace = py
        .detach(|| construction::run_tower(&base.0, &stages, &params))
        .map_err(|f| py_err(f.error))?;
    serde_json::to_string(&trace).map_err(json_err)
}

/// `(name, passed, detail)` for every fact of a JSON trace.
#[pyfunction]
fn verify_trace(trace: &str) -> PyResult<Vec<(String, bool, String)>> {
    let trace: ConstructionTrace = serde_json::from_str(trace).map_err(json_err)?;
    let report = construction::verify_trace(&trace);
    Ok(report.facts.into_iter().map(|f| (f.name, f.passed, f.detail)).collect())
}

#[pymodule]
fn fu_forge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFSet>()?;
    m.add_class::<PySeq>()?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add("NotFound", m.py().get_type::<NotFound>())?;
    m.add_function(wrap_pyfunction!(gen_base_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(is_condensation, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_condensations, m)?)?;
    m.add_function(wrap_pyfunction!(x_supp, m)?)?;
    m.add_function(wrap_pyfunction!(meshing_graph, m)?)?;
    m.add_function(wrap_pyfunction!(find_n_witness, m)?)?;
    m.add_function(wrap_pyfunction!(make_complete_witness, m)?)?;
    m.add_function(wrap_pyfunction!(minmax_witness, m)?)?;
    m.add_function(wrap_pyfunction!(minmax_word, m)?)?;
    m.add_function(wrap_pyfunction!(splitting_points, m)?)?;
    m.add_function(wrap_pyfunction!(pi, m)?)?;
    m.add_function(wrap_pyfunction!(frs_number, m)?)?;
    m.add_function(wrap_pyfunction!(homogeneous_condensation, m)?)?;
    m.add_function(wrap_pyfunction!(classify_canonical, m)?)?;
    m.add_function(wrap_pyfunction!(run_tower, m)?)?;
    m.add_function(wrap_pyfunction!(verify_trace, m)?)?;
    Ok(())
}
