//! Python bindings.
//!
//! Values cross the boundary as strings (`"3/4"`, `"0.25"`) or integers and
//! come back as exact rational strings, so no precision is lost in either
//! direction.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyAny;

use housealloc::dispatch::{self, SolveOptions};
use housealloc::experiments::{run_experiment, ExperimentParams};
use housealloc::instance::Instance as CoreInstance;
use housealloc::oracle::{self, Symmetry, DEFAULT_BUDGET};
use housealloc::separability::{make_figure_instance, Figure, FIG5_DEFAULT};
use housealloc::union::DEFAULT_UNION_BUDGET;
use housealloc::{Allocation, Error, Graph as CoreGraph, Guarantee, Rational, ValueProfile};

create_exception!(housealloc_py, HouseAllocError, PyException);
create_exception!(housealloc_py, BudgetExceeded, HouseAllocError);

fn err(e: Error) -> PyErr {
    match e {
        Error::Budget { .. } => BudgetExceeded::new_err(e.to_string()),
        other => HouseAllocError::new_err(other.to_string()),
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(i) = obj.extract::<i64>() {
        return Ok(Rational::from_integer(i));
    }
    let s: String = obj
        .str()
        .and_then(|s| s.extract())
        .map_err(|_| HouseAllocError::new_err("values must be integers or strings"))?;
    s.parse::<Rational>().map_err(err)
}

fn profile(values: &Bound<'_, PyAny>) -> PyResult<ValueProfile> {
    let mut out = Vec::new();
    for item in values.try_iter()? {
        out.push(rational(&item?)?);
    }
    ValueProfile::new(out).map_err(err)
}

fn allocation(houses: Vec<usize>) -> PyResult<Allocation> {
    Allocation::new(houses).map_err(err)
}

/// An undirected simple graph on vertices `0..n`.
#[pyclass(module = "housealloc_py", frozen, from_py_object)]
#[derive(Clone)]
struct Graph {
    inner: CoreGraph,
}

#[pymethods]
impl Graph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(Graph {
            inner: CoreGraph::new(n, edges).map_err(err)?,
        })
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        Graph {
            inner: CoreGraph::path(n),
        }
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        Ok(Graph {
            inner: CoreGraph::cycle(n).map_err(err)?,
        })
    }

    #[staticmethod]
    fn star(spokes: usize) -> Self {
        Graph {
            inner: CoreGraph::star(spokes),
        }
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        Graph {
            inner: CoreGraph::complete(n),
        }
    }

    #[staticmethod]
    fn complete_bipartite(r: usize, s: usize) -> Self {
        Graph {
            inner: CoreGraph::complete_bipartite(r, s),
        }
    }

    /// Parses `path:2+clique:3` style descriptions.
    #[staticmethod]
    fn family(spec: &str) -> PyResult<Self> {
        Ok(Graph {
            inner: housealloc::generate::parse_family(spec).map_err(err)?,
        })
    }

    #[staticmethod]
    fn disjoint_union(parts: Vec<Graph>) -> Self {
        let parts: Vec<CoreGraph> = parts.into_iter().map(|g| g.inner).collect();
        Graph {
            inner: CoreGraph::disjoint_union(&parts),
        }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    /// `(vertices, class name)` for every connected component.
    fn components(&self) -> Vec<(Vec<usize>, String)> {
        housealloc::connected_components(&self.inner)
            .into_iter()
            .map(|c| {
                let name = housealloc::classify_component(&c.graph).name();
                (c.vertices, name)
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, edges={:?})",
            self.inner.vertex_count(),
            self.inner.edges()
        )
    }
}

/// Outcome of a solver run.
#[pyclass(module = "housealloc_py", frozen, get_all)]
struct Solution {
    /// House id per vertex.
    allocation: Vec<usize>,
    /// Exact envy, e.g. `"15"` or `"7/2"`.
    envy: String,
    solver: String,
    /// `"exact"` or `"heuristic"`.
    guarantee: String,
}

#[pymethods]
impl Solution {
    fn envy_float(&self) -> f64 {
        self.envy
            .parse::<Rational>()
            .map(|r| r.to_f64())
            .unwrap_or(f64::NAN)
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(solver={:?}, envy={:?}, guarantee={:?}, allocation={:?})",
            self.solver, self.envy, self.guarantee, self.allocation
        )
    }
}

impl From<housealloc::SolveResult> for Solution {
    fn from(r: housealloc::SolveResult) -> Self {
        Solution {
            allocation: r.allocation.into_vec(),
            envy: r.envy.to_string(),
            solver: r.solver,
            guarantee: match r.guarantee {
                Guarantee::Exact => "exact".into(),
                Guarantee::Heuristic => "heuristic".into(),
            },
        }
    }
}

/// Total envy of `allocation` (house per vertex) on `graph`.
#[pyfunction]
fn total_envy(
    graph: &Graph,
    values: &Bound<'_, PyAny>,
    assignment: Vec<usize>,
) -> PyResult<String> {
    let p = profile(values)?;
    let a = allocation(assignment)?;
    Ok(housealloc::total_envy(&a, &graph.inner, &p)
        .map_err(err)?
        .to_string())
}

/// Solves with the automatically chosen solver, or the named one.
#[pyfunction]
#[pyo3(signature = (graph, values, solver = None, budget = DEFAULT_BUDGET, union_budget = DEFAULT_UNION_BUDGET))]
fn solve(
    py: Python<'_>,
    graph: &Graph,
    values: &Bound<'_, PyAny>,
    solver: Option<String>,
    budget: u128,
    union_budget: u128,
) -> PyResult<Solution> {
    let p = profile(values)?;
    let opts = SolveOptions {
        solver,
        budget,
        union_budget,
    };
    let g = graph.inner.clone();
    let res = py.detach(move || dispatch::solve(&g, &p, &opts));
    Ok(res.map_err(err)?.into())
}

/// Exhaustive minimum (lexicographically first optimal allocation).
#[pyfunction]
#[pyo3(signature = (graph, values, budget = DEFAULT_BUDGET))]
fn brute_force(
    py: Python<'_>,
    graph: &Graph,
    values: &Bound<'_, PyAny>,
    budget: u128,
) -> PyResult<Solution> {
    let p = profile(values)?;
    let g = graph.inner.clone();
    let res = py.detach(move || oracle::brute_force(&g, &p, budget));
    Ok(res.map_err(err)?.into())
}

/// `(envy, number of optima, optima)`; with `canon` set to `"cycle"` or
/// `"bipartite"`, the optima are deduplicated up to that symmetry.
#[pyfunction]
#[pyo3(signature = (graph, values, canon = None, budget = DEFAULT_BUDGET))]
fn enumerate_optima(
    py: Python<'_>,
    graph: &Graph,
    values: &Bound<'_, PyAny>,
    canon: Option<&str>,
    budget: u128,
) -> PyResult<(String, u64, Vec<Vec<usize>>)> {
    let p = profile(values)?;
    let symmetry = match canon {
        None | Some("none") => Symmetry::None,
        Some("cycle") => Symmetry::cycle_of(&graph.inner).map_err(err)?,
        Some("bipartite") => Symmetry::bipartite_of(&graph.inner).map_err(err)?,
        Some(other) => {
            return Err(HouseAllocError::new_err(format!(
                "unknown symmetry `{other}`"
            )))
        }
    };
    let g = graph.inner.clone();
    let set = py
        .detach(move || oracle::enumerate_optima(&g, &p, budget))
        .map_err(err)?;
    let mut reps = Vec::with_capacity(set.allocations.len());
    for a in &set.allocations {
        reps.push(oracle::canonicalize(a, &symmetry).map_err(err)?);
    }
    reps.sort();
    reps.dedup();
    Ok((
        set.envy.to_string(),
        set.count,
        reps.into_iter().map(Allocation::into_vec).collect(),
    ))
}

/// A figure instance as `(graph, values)`; values are rational strings in
/// house-id order.
#[pyfunction]
fn figure(name: &str) -> PyResult<(Graph, Vec<String>)> {
    let inst = match name {
        "fig1" => housealloc::generate::fig1_instance().0,
        "fig3-top" => make_figure_instance(&Figure::fig3_top()).map_err(err)?,
        "fig3-bottom" => make_figure_instance(&Figure::fig3_bottom()).map_err(err)?,
        "fig4" => make_figure_instance(&Figure::fig4()).map_err(err)?,
        "fig5" => make_figure_instance(&Figure::fig5(FIG5_DEFAULT)).map_err(err)?,
        other => {
            return Err(HouseAllocError::new_err(format!(
                "unknown figure `{other}`"
            )))
        }
    };
    split_instance(inst)
}

fn split_instance(inst: CoreInstance) -> PyResult<(Graph, Vec<String>)> {
    let values = inst
        .profile()
        .map_err(err)?
        .values_by_house()
        .iter()
        .map(|v| v.to_string())
        .collect();
    Ok((Graph { inner: inst.graph }, values))
}

/// Reads an instance document; returns `(graph, values)`.
#[pyfunction]
fn load_instance(text: &str) -> PyResult<(Graph, Vec<String>)> {
    split_instance(CoreInstance::from_json(text).map_err(err)?)
}

/// Writes an instance document.
#[pyfunction]
fn dump_instance(graph: &Graph, values: &Bound<'_, PyAny>) -> PyResult<String> {
    let p = profile(values)?;
    Ok(CoreInstance::identical(graph.inner.clone(), p)
        .map_err(err)?
        .to_json())
}

/// Runs a named experiment; returns the report as a JSON string.
#[pyfunction]
#[pyo3(signature = (name, count = 20, n = 8, seed = 0, budget = DEFAULT_BUDGET))]
fn experiment(
    py: Python<'_>,
    name: &str,
    count: usize,
    n: usize,
    seed: u64,
    budget: u128,
) -> PyResult<String> {
    let params = ExperimentParams {
        count,
        n,
        seed,
        budget,
        figure: None,
    };
    let name = name.to_string();
    let report = py
        .detach(move || run_experiment(&name, &params))
        .map_err(err)?;
    serde_json::to_string(&report).map_err(|e| HouseAllocError::new_err(e.to_string()))
}

#[pymodule]
fn housealloc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("HouseAllocError", m.py().get_type::<HouseAllocError>())?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add("SOLVERS", dispatch::SOLVERS.to_vec())?;
    m.add_class::<Graph>()?;
    m.add_class::<Solution>()?;
    m.add_function(wrap_pyfunction!(total_envy, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_optima, m)?)?;
    m.add_function(wrap_pyfunction!(figure, m)?)?;
    m.add_function(wrap_pyfunction!(load_instance, m)?)?;
    m.add_function(wrap_pyfunction!(dump_instance, m)?)?;
    m.add_function(wrap_pyfunction!(experiment, m)?)?;
    Ok(())
}
