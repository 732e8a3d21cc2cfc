//! Flows that cross module boundaries: files in, solver out, report out.

use housealloc::dispatch::{solve_instance, SolveOptions};
use housealloc::experiments::{run_experiment, ExperimentParams, EXPERIMENTS};
use housealloc::generate::{
    fig1_instance, parse_family, random_disconnected_graph, random_values, seeded,
};
use housealloc::instance::Instance;
use housealloc::oracle::{brute_force, DEFAULT_BUDGET};
use housealloc::render::render_text;
use housealloc::separability::{make_figure_instance, Figure};
use housealloc::{total_envy, Guarantee, Rational};

#[test]
fn figure_one_survives_a_file_round_trip() {
    let (inst, alloc) = fig1_instance();
    let back = Instance::from_json(&inst.to_json()).unwrap();
    let envy = total_envy(&alloc, &back.graph, back.profile().unwrap()).unwrap();
    assert_eq!(envy, Rational::from_integer(15));
    let best = solve_instance(&back, &SolveOptions::default()).unwrap();
    assert!(best.envy < envy);
    assert_eq!(
        best.envy,
        brute_force(&back.graph, back.profile().unwrap(), DEFAULT_BUDGET)
            .unwrap()
            .envy
    );
}

#[test]
fn auto_dispatch_is_exact_on_recognised_unions() {
    let mut rng = seeded(1);
    for spec in [
        "path:3+path:2+path:1",
        "cycle:3+cycle:4",
        "star:2+star:3",
        "clique:2+clique:2+clique:2",
        "clique:3+path:2+clique:1",
    ] {
        let g = parse_family(spec).unwrap();
        let p = random_values(g.vertex_count(), &mut rng);
        let r = housealloc::dispatch::solve(&g, &p, &SolveOptions::default()).unwrap();
        assert_eq!(r.guarantee, Guarantee::Exact, "{spec}");
        assert_eq!(
            r.envy,
            brute_force(&g, &p, DEFAULT_BUDGET).unwrap().envy,
            "{spec}: {}",
            r.solver
        );
    }
}

#[test]
fn small_generic_graphs_fall_back_to_the_oracle() {
    let mut rng = seeded(2);
    for _ in 0..10 {
        let g = random_disconnected_graph(7, 0.6, &mut rng).unwrap();
        let p = random_values(7, &mut rng);
        let r = housealloc::dispatch::solve(&g, &p, &SolveOptions::default()).unwrap();
        assert_eq!(r.guarantee, Guarantee::Exact);
        assert_eq!(r.envy, brute_force(&g, &p, DEFAULT_BUDGET).unwrap().envy);
    }
}

#[test]
fn figure_instances_render_their_optimum() {
    let inst = make_figure_instance(&Figure::fig3_bottom()).unwrap();
    let r = solve_instance(&inst, &SolveOptions::default()).unwrap();
    let text = render_text(&inst.graph, inst.profile().unwrap(), &r.allocation).unwrap();
    assert!(text.contains(&format!("total envy {}", r.envy)));
}

#[test]
fn every_experiment_runs_and_is_reproducible() {
    for name in EXPERIMENTS {
        let params = ExperimentParams {
            count: 3,
            n: 5,
            seed: 4,
            budget: DEFAULT_BUDGET,
            figure: None,
        };
        let a = run_experiment(name, &params).unwrap();
        let b = run_experiment(name, &params).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap(),
            "{name}"
        );
    }
}
