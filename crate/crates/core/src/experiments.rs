//! Batch experiments over seeded random instances.
//!
//! Each runner draws one sub-seed per instance from the master seed, works on
//! the instances in parallel, and returns records in instance order, so a
//! report depends only on its parameters.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::allocation::Allocation;
use crate::envy::total_envy;
use crate::error::{input, Error, Result};
use crate::generate::{
    random_binary_tree, random_disconnected_graph, random_tree, random_values, seeded,
};
use crate::graph::{Graph, RootedTree};
use crate::instance::{Instance, SCHEMA_VERSION};
use crate::oracle::{brute_force, enumerate_optima};
use crate::profile::ValueProfile;
use crate::separability::{
    check_mla_contiguity, classify_separability_empirical, make_figure_instance, Figure,
};
use crate::tree::{audit_step, check_global_median, check_local_median, experiment_tree_extremes};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    pub params: BTreeMap<String, Value>,
    /// One record per generated instance, in generation order.
    pub records: Vec<Value>,
    pub summary: BTreeMap<String, Value>,
}

/// Names accepted by [`run_experiment`].
pub const EXPERIMENTS: &[&str] = &[
    "separability",
    "tree-extremes",
    "local-median",
    "mla-contiguity",
];

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentParams {
    /// Number of random instances.
    pub count: usize,
    /// Vertex count (an upper bound for disconnected graphs).
    pub n: usize,
    pub seed: u64,
    pub budget: u128,
    /// Runs the separability experiment on this figure instead of random graphs.
    pub figure: Option<Figure>,
}

pub fn run_experiment(name: &str, params: &ExperimentParams) -> Result<ExperimentReport> {
    match name {
        "tree-extremes" => tree_extremes(params),
        "local-median" => local_median(params),
        "separability" => separability(params),
        "mla-contiguity" => mla_contiguity(params),
        other => Err(Error::Input(format!(
            "unknown experiment `{other}` (known: {})",
            EXPERIMENTS.join(", ")
        ))),
    }
}

fn sub_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = seeded(seed);
    (0..count).map(|_| rng.gen()).collect()
}

fn instance_doc(graph: &Graph, profile: &ValueProfile, root: Option<usize>) -> Value {
    let mut inst = Instance::identical(graph.clone(), profile.clone()).expect("sizes agree");
    inst.root = root;
    serde_json::to_value(inst.to_file()).expect("instance serializes")
}

fn base_params(p: &ExperimentParams) -> BTreeMap<String, Value> {
    BTreeMap::from([
        ("count".to_string(), json!(p.count)),
        ("n".to_string(), json!(p.n)),
        ("seed".to_string(), json!(p.seed)),
        ("budget".to_string(), json!(p.budget.to_string())),
    ])
}

fn fraction(hits: usize, total: usize) -> Value {
    if total == 0 {
        Value::Null
    } else {
        json!(hits as f64 / total as f64)
    }
}

fn report(
    name: &str,
    params: BTreeMap<String, Value>,
    records: Vec<Value>,
    summary: BTreeMap<String, Value>,
) -> ExperimentReport {
    ExperimentReport {
        schema_version: SCHEMA_VERSION,
        experiment: name.to_string(),
        params,
        records,
        summary,
    }
}

/// Random labelled trees: does some optimum put the extreme values on leaves
/// joined by a monotone path? Failing instances are copied into the summary.
pub fn tree_extremes(p: &ExperimentParams) -> Result<ExperimentReport> {
    if p.n == 0 {
        return input("trees need at least one vertex");
    }
    let records: Result<Vec<(bool, Value, Value)>> = sub_seeds(p.seed, p.count)
        .into_par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut rng = seeded(s);
            let graph = random_tree(p.n, &mut rng);
            let profile = random_values(p.n, &mut rng);
            let r = experiment_tree_extremes(&graph, &profile, p.budget)?;
            let doc = instance_doc(&graph, &profile, None);
            let record = json!({
                "index": i,
                "instance": doc,
                "optimum": r.optimum,
                "optima": r.optima,
                "holds": r.holds,
                "witness": r.witness,
            });
            Ok((r.holds, record, doc))
        })
        .collect();
    let records = records?;
    let hits = records.iter().filter(|r| r.0).count();
    let counterexamples: Vec<Value> = records
        .iter()
        .filter(|r| !r.0)
        .map(|r| r.2.clone())
        .collect();
    let summary = BTreeMap::from([
        ("instances".to_string(), json!(records.len())),
        ("holds".to_string(), json!(hits)),
        ("fraction".to_string(), fraction(hits, records.len())),
        ("counterexamples".to_string(), Value::Array(counterexamples)),
    ]);
    Ok(report(
        "tree-extremes",
        base_params(p),
        records.into_iter().map(|r| r.1).collect(),
        summary,
    ))
}

/// Outcome of walking local-median steps from one start.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepWalk {
    pub steps: usize,
    pub all_strict: bool,
    pub all_others_weak: bool,
    pub final_is_local_median: bool,
}

/// Applies audited steps until no violation is left (at most `n^3`).
pub fn walk_steps(
    tree: &RootedTree,
    start: &Allocation,
    profile: &ValueProfile,
) -> Result<StepWalk> {
    let n = tree.len();
    let cap = n.pow(3).max(1);
    let mut cur = start.clone();
    let mut walk = StepWalk {
        steps: 0,
        all_strict: true,
        all_others_weak: true,
        final_is_local_median: false,
    };
    loop {
        match audit_step(tree, &cur, profile) {
            Ok((next, audit)) => {
                walk.steps += 1;
                walk.all_strict &= audit.strict_decrease;
                walk.all_others_weak &= audit.others_weakly_decrease;
                cur = next;
                if walk.steps >= cap {
                    return Err(Error::IterationLimit(format!("{cap} local median steps")));
                }
            }
            Err(Error::NoViolation) => break,
            Err(e) => return Err(e),
        }
    }
    walk.final_is_local_median = check_local_median(tree, &cur, profile)?;
    Ok(walk)
}

/// Random full binary trees: step audits from a random start, and whether
/// some optimum is local-median (and global-median, recorded for interest).
pub fn local_median(p: &ExperimentParams) -> Result<ExperimentReport> {
    let n = if p.n.is_multiple_of(2) {
        p.n.saturating_sub(1)
    } else {
        p.n
    };
    if n == 0 {
        return input("binary trees need at least one vertex");
    }
    let records: Result<Vec<(bool, bool, bool, Value)>> = sub_seeds(p.seed, p.count)
        .into_par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut rng = seeded(s);
            let tree = random_binary_tree(n, &mut rng)?;
            let profile = random_values(n, &mut rng);
            let mut start: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(start.as_mut_slice(), &mut rng);
            let start = Allocation::new(start)?;
            let walk = walk_steps(&tree, &start, &profile)?;
            let set = enumerate_optima(tree.graph(), &profile, p.budget)?;
            let mut local = false;
            let mut global = false;
            for a in &set.allocations {
                local |= check_local_median(&tree, a, &profile)?;
                global |= check_global_median(&tree, a, &profile)?;
            }
            let fix = crate::tree::local_median_fixpoint(&tree, &start, &profile)?;
            let audits_ok = walk.all_strict && walk.all_others_weak && walk.final_is_local_median;
            let record = json!({
                "index": i,
                "instance": instance_doc(tree.graph(), &profile, Some(tree.root())),
                "start": start,
                "walk": walk,
                "optimum": set.envy,
                "optima": set.count,
                "local_median_optimum": local,
                "global_median_optimum": global,
                "fixpoint_envy": fix.envy,
                "start_envy": total_envy(&start, tree.graph(), &profile)?,
            });
            Ok((audits_ok, local, global, record))
        })
        .collect();
    let records = records?;
    let total = records.len();
    let audits = records.iter().filter(|r| r.0).count();
    let local = records.iter().filter(|r| r.1).count();
    let global = records.iter().filter(|r| r.2).count();
    let mut params = base_params(p);
    params.insert("n".into(), json!(n));
    let summary = BTreeMap::from([
        ("instances".to_string(), json!(total)),
        ("step_audits_hold".to_string(), json!(audits)),
        ("local_median_optimum".to_string(), json!(local)),
        ("local_median_fraction".to_string(), fraction(local, total)),
        ("global_median_optimum".to_string(), json!(global)),
        (
            "global_median_fraction".to_string(),
            fraction(global, total),
        ),
    ]);
    Ok(report(
        "local-median",
        params,
        records.into_iter().map(|r| r.3).collect(),
        summary,
    ))
}

/// Either one figure instance or random disconnected graphs: exhausts the
/// optima and records contiguity witnesses and interleaving evidence.
pub fn separability(p: &ExperimentParams) -> Result<ExperimentReport> {
    let mut params = base_params(p);
    let instances: Vec<(Graph, ValueProfile)> = match &p.figure {
        Some(fig) => {
            params.insert("figure".into(), json!(fig.name()));
            let inst = make_figure_instance(fig)?;
            let profile = inst.profile()?.clone();
            vec![(inst.graph, profile)]
        }
        None => {
            if p.n < 2 {
                return input("disconnected graphs need at least 2 vertices");
            }
            let drawn: Result<Vec<_>> = sub_seeds(p.seed, p.count)
                .into_iter()
                .map(|s| {
                    let mut rng = seeded(s);
                    let g = random_disconnected_graph(p.n, 0.5, &mut rng)?;
                    let v = random_values(p.n, &mut rng);
                    Ok((g, v))
                })
                .collect();
            drawn?
        }
    };
    let records: Result<Vec<(bool, Value)>> = instances
        .par_iter()
        .enumerate()
        .map(|(i, (g, v))| {
            let r = classify_separability_empirical(g, v, p.budget)?;
            let noncontiguous = r.every_optimum_noncontiguous;
            Ok((
                noncontiguous,
                json!({ "index": i, "instance": instance_doc(g, v, None), "report": r }),
            ))
        })
        .collect();
    let records = records?;
    let nc = records.iter().filter(|r| r.0).count();
    let summary = BTreeMap::from([
        ("instances".to_string(), json!(records.len())),
        (
            "contiguous_optimum_exists".to_string(),
            json!(records.len() - nc),
        ),
        ("every_optimum_noncontiguous".to_string(), json!(nc)),
    ]);
    Ok(report(
        "separability",
        params,
        records.into_iter().map(|r| r.1).collect(),
        summary,
    ))
}

/// Random disconnected graphs under the values `1..n`: is some optimum a
/// contiguous-block allocation?
pub fn mla_contiguity(p: &ExperimentParams) -> Result<ExperimentReport> {
    if p.n < 2 {
        return input("disconnected graphs need at least 2 vertices");
    }
    let records: Result<Vec<(bool, Value)>> = sub_seeds(p.seed, p.count)
        .into_par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut rng = seeded(s);
            let n = rng.gen_range(2..=p.n);
            let g = random_disconnected_graph(n, 0.5, &mut rng)?;
            let holds = check_mla_contiguity(&g, p.budget)?;
            let profile = ValueProfile::from_ints(&(1..=n as i64).collect::<Vec<_>>())?;
            let optimum = brute_force(&g, &profile, p.budget)?.envy;
            Ok((
                holds,
                json!({ "index": i, "instance": instance_doc(&g, &profile, None), "optimum": optimum, "holds": holds }),
            ))
        })
        .collect();
    let records = records?;
    let hits = records.iter().filter(|r| r.0).count();
    let summary = BTreeMap::from([
        ("instances".to_string(), json!(records.len())),
        ("holds".to_string(), json!(hits)),
        ("fraction".to_string(), fraction(hits, records.len())),
    ]);
    Ok(report(
        "mla-contiguity",
        base_params(p),
        records.into_iter().map(|r| r.1).collect(),
        summary,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::DEFAULT_BUDGET;

    fn params(count: usize, n: usize) -> ExperimentParams {
        ExperimentParams {
            count,
            n,
            seed: 7,
            budget: DEFAULT_BUDGET,
            figure: None,
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_experiment("tree-extremes", &params(6, 6)).unwrap();
        let b = run_experiment("tree-extremes", &params(6, 6)).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.records.len(), 6);
    }

    #[test]
    fn local_median_runner() {
        let r = run_experiment("local-median", &params(5, 7)).unwrap();
        assert_eq!(r.summary["instances"], json!(5));
        assert_eq!(r.summary["step_audits_hold"], json!(5));
        assert_eq!(r.summary["local_median_optimum"], json!(5));
    }

    #[test]
    fn separability_on_a_figure() {
        let mut p = params(0, 0);
        p.figure = Some(Figure::fig3_bottom());
        let r = run_experiment("separability", &p).unwrap();
        assert_eq!(r.summary["every_optimum_noncontiguous"], json!(1));
        let r = run_experiment("separability", &params(4, 6)).unwrap();
        assert_eq!(r.records.len(), 4);
    }

    #[test]
    fn mla_runner_and_unknown_names() {
        let r = run_experiment("mla-contiguity", &params(5, 6)).unwrap();
        assert_eq!(r.summary["holds"], json!(5));
        assert!(run_experiment("nope", &params(1, 3)).is_err());
    }
}
