//! `housealloc` command-line front end.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use housealloc::dispatch::{solve_instance, SolveOptions, SOLVERS};
use housealloc::experiments::{run_experiment, ExperimentParams};
use housealloc::generate::{
    fig1_instance, parse_family, random_connected_graph, random_graph, random_values, seeded,
};
use housealloc::instance::{Instance, Valuation, SCHEMA_VERSION};
use housealloc::oracle::{
    brute_force, canonicalize, count_classes, enumerate_optima_capped, Symmetry, DEFAULT_BUDGET,
};
use housealloc::reductions::{gen_from_binpacking, gen_from_bisection, BinFamily, BinPackingInput};
use housealloc::render::render_text;
use housealloc::separability::{make_figure_instance, Figure, FIG5_DEFAULT};
use housealloc::union::{classified_components, strongly_separable_family, DEFAULT_UNION_BUDGET};
use housealloc::{
    total_envy, total_envy_general, Allocation, Error, Rational, SolveResult, ValueProfile,
};

#[derive(Parser, Debug)]
#[command(
    name = "housealloc",
    version,
    about = "Minimum-envy house allocation on graphs"
)]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Cap on permutations explored by exhaustive search.
    #[arg(long, global = true, env = "HOUSEALLOC_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Cap on orderings, DP states and window choices in the union solvers.
    #[arg(long, global = true, default_value_t = DEFAULT_UNION_BUDGET)]
    union_budget: u128,
    /// Master seed for generators and experiments.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Leave the wall-time field out of result records.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Write the output here (atomically) instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Canon {
    None,
    Cycle,
    Bipartite,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance with the automatically chosen (or a named) solver.
    Solve {
        instance: PathBuf,
        /// Solver name; `auto` picks by graph structure.
        #[arg(long)]
        solver: Option<String>,
        /// Score this allocation (house per vertex, comma separated) instead of solving.
        #[arg(long)]
        evaluate: Option<String>,
    },
    /// Score an allocation.
    Evaluate {
        instance: PathBuf,
        /// House per vertex, comma separated or a JSON list.
        allocation: String,
    },
    /// Exhaustive minimum.
    Oracle { instance: PathBuf },
    /// All optimal allocations, optionally counted up to symmetry.
    Enumerate {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Canon::None)]
        canon: Canon,
        /// How many allocations to list in the output.
        #[arg(long, default_value_t = 50)]
        show: usize,
    },
    /// Components, their classes and the union family.
    Classify { instance: PathBuf },
    /// Write a generated instance.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Run a batch experiment.
    Experiment(ExperimentArgs),
    /// Draw an allocation on the value line.
    Render {
        instance: PathBuf,
        /// Allocation to draw; the solved optimum when omitted.
        #[arg(long)]
        allocation: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum GenerateKind {
    /// Erdos-Renyi graph with random distinct rational values.
    RandomGraph {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        /// Start from a random spanning tree so the graph is connected.
        #[arg(long)]
        connected: bool,
    },
    /// A named family (`path`, `cycle`, `star`, `clique`, `bipartite`,
    /// `binary`) or a spec such as `path:2+clique:3`.
    Family {
        kind: String,
        /// Vertex count for a named family.
        #[arg(long)]
        n: Option<usize>,
        /// Side sizes `R,S` for `bipartite`.
        #[arg(long)]
        sides: Option<String>,
        /// Values by house id, comma separated; random when omitted.
        #[arg(long)]
        values: Option<String>,
    },
    /// One of the separability counterexamples.
    Figure {
        /// fig1, fig3-top, fig3-bottom, fig4 or fig5.
        name: String,
        /// Leaf counts for fig5, comma separated.
        #[arg(long)]
        s: Option<String>,
    },
    /// Values encoding minimum bisection on a graph.
    Bisection {
        /// Graph to encode (instance file); a random graph when omitted.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Values and components encoding unary bin packing.
    Binpacking {
        /// Item sizes, comma separated.
        #[arg(long)]
        items: String,
        /// Bin capacity.
        #[arg(long)]
        bin: usize,
        #[arg(long)]
        bins: usize,
        /// paths, cycles, stars or cliques.
        #[arg(long, default_value = "paths")]
        family: String,
        /// Gap between value clusters.
        #[arg(long)]
        gap: Option<String>,
        #[arg(long)]
        epsilon: Option<String>,
    },
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// separability, tree-extremes, local-median or mla-contiguity.
    name: String,
    /// Number of random trees.
    #[arg(long)]
    trees: Option<usize>,
    /// Number of random graphs.
    #[arg(long)]
    graphs: Option<usize>,
    /// Vertex count (upper bound for random disconnected graphs).
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Run the separability experiment on a figure instance.
    #[arg(long)]
    figure: Option<String>,
}

/// Failure classes, each with its own exit status.
fn exit_status(err: &anyhow::Error) -> (u8, &'static str) {
    match err.downcast_ref::<Error>() {
        Some(Error::Input(_)) => (2, "input"),
        Some(Error::Parse(_)) => (2, "parse"),
        Some(Error::Budget { .. }) => (3, "budget"),
        Some(Error::Dispatch(_)) => (4, "dispatch"),
        Some(Error::NoViolation) => (5, "no_violation"),
        Some(Error::IterationLimit(_)) => (5, "iteration_limit"),
        None => (1, "io"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => match emit(cli.output.as_deref(), &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => report_error(&cli, &e),
        },
        Err(e) => report_error(&cli, &e),
    }
}

fn report_error(cli: &Cli, err: &anyhow::Error) -> ExitCode {
    let (code, kind) = exit_status(err);
    let message = format!("{err:#}");
    if cli.format == Format::Structured {
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "error": { "kind": kind, "message": message },
        });
        eprintln!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("error serializes")
        );
    } else {
        eprintln!("error ({kind}): {message}");
    }
    ExitCode::from(code)
}

/// Writes to the file via a sibling temporary and a rename, or to stdout.
fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
        Some(path) => {
            let name = path
                .file_name()
                .ok_or_else(|| anyhow!("output path has no file name"))?;
            let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
            std::fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
            std::fs::rename(&tmp, path)
                .with_context(|| format!("renaming onto {}", path.display()))?;
        }
    }
    Ok(())
}

fn read_instance(path: &Path) -> anyhow::Result<Instance> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(Instance::from_json(&text)?)
}

fn parse_allocation(text: &str) -> anyhow::Result<Allocation> {
    let trimmed = text.trim();
    let houses: Vec<usize> = if trimmed.starts_with('[') {
        serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        trimmed
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("`{s}` is not a house id")))
            })
            .collect::<Result<_, _>>()?
    };
    Ok(Allocation::new(houses)?)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> anyhow::Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim().parse::<T>().map_err(|_| {
                anyhow::Error::from(Error::Parse(format!(
                    "`{}` is not a valid {what}",
                    s.trim()
                )))
            })
        })
        .collect()
}

fn parse_rational(text: Option<&str>) -> anyhow::Result<Option<Rational>> {
    text.map(|t| t.parse::<Rational>().map_err(anyhow::Error::from))
        .transpose()
}

fn envy_fields(envy: &Rational) -> Value {
    json!({ "envy": envy.to_string(), "envy_decimal": envy.to_decimal_string(6) })
}

fn merge(mut base: Map<String, Value>, extra: Value) -> Map<String, Value> {
    if let Value::Object(m) = extra {
        base.extend(m);
    }
    base
}

fn record(kind: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(kind));
    m
}

fn structured(m: Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("record serializes");
    s.push('\n');
    s
}

fn fmt_alloc(a: &Allocation) -> String {
    a.as_slice()
        .iter()
        .map(|h| h.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn run(cli: &Cli) -> anyhow::Result<String> {
    match &cli.command {
        Command::Solve {
            instance,
            solver,
            evaluate,
        } => {
            let inst = read_instance(instance)?;
            if let Some(a) = evaluate {
                return evaluate_cmd(cli, &inst, a);
            }
            if let Some(name) = solver {
                if !SOLVERS.contains(&name.as_str()) {
                    return Err(Error::Dispatch(format!(
                        "unknown solver `{name}` (known: {})",
                        SOLVERS.join(", ")
                    ))
                    .into());
                }
            }
            let opts = SolveOptions {
                solver: solver.clone(),
                budget: cli.budget,
                union_budget: cli.union_budget,
            };
            let start = Instant::now();
            let res = solve_instance(&inst, &opts)?;
            let elapsed = start.elapsed();
            Ok(solve_output(
                cli,
                "solve",
                &res,
                elapsed.as_secs_f64() * 1e3,
            ))
        }
        Command::Evaluate {
            instance,
            allocation,
        } => {
            let inst = read_instance(instance)?;
            evaluate_cmd(cli, &inst, allocation)
        }
        Command::Oracle { instance } => {
            let inst = read_instance(instance)?;
            let start = Instant::now();
            let res = brute_force(&inst.graph, inst.profile()?, cli.budget)?;
            Ok(solve_output(
                cli,
                "oracle",
                &res,
                start.elapsed().as_secs_f64() * 1e3,
            ))
        }
        Command::Enumerate {
            instance,
            canon,
            show,
        } => enumerate_cmd(cli, &read_instance(instance)?, *canon, *show),
        Command::Classify { instance } => classify_cmd(cli, &read_instance(instance)?),
        Command::Generate { kind } => {
            let inst = generate_cmd(cli, kind)?;
            let mut text = inst.to_json();
            text.push('\n');
            Ok(text)
        }
        Command::Experiment(args) => experiment_cmd(cli, args),
        Command::Render {
            instance,
            allocation,
        } => {
            let inst = read_instance(instance)?;
            let profile = inst.profile()?;
            let alloc = match allocation {
                Some(a) => parse_allocation(a)?,
                None => {
                    let opts = SolveOptions {
                        solver: None,
                        budget: cli.budget,
                        union_budget: cli.union_budget,
                    };
                    solve_instance(&inst, &opts)?.allocation
                }
            };
            let drawing = render_text(&inst.graph, profile, &alloc)?;
            Ok(match cli.format {
                Format::Text => drawing,
                Format::Structured => {
                    let envy = total_envy(&alloc, &inst.graph, profile)?;
                    let mut m = record("render");
                    m.insert("allocation".into(), json!(alloc));
                    m = merge(m, envy_fields(&envy));
                    m.insert("drawing".into(), json!(drawing));
                    structured(m)
                }
            })
        }
    }
}

fn solve_output(cli: &Cli, command: &str, res: &SolveResult, wall_ms: f64) -> String {
    match cli.format {
        Format::Structured => {
            let mut m = record(command);
            m.insert("solver".into(), json!(res.solver));
            m.insert("guarantee".into(), json!(res.guarantee));
            m.insert("allocation".into(), json!(res.allocation));
            m = merge(m, envy_fields(&res.envy));
            if !cli.no_timing {
                m.insert("wall_time_ms".into(), json!(wall_ms));
            }
            structured(m)
        }
        Format::Text => {
            let guarantee = match res.guarantee {
                housealloc::Guarantee::Exact => "exact",
                housealloc::Guarantee::Heuristic => "heuristic",
            };
            let mut s = format!(
                "solver: {} ({guarantee})\nenvy: {} ({})\nallocation: {}\n",
                res.solver,
                res.envy,
                res.envy.to_decimal_string(6),
                fmt_alloc(&res.allocation)
            );
            if !cli.no_timing {
                s.push_str(&format!("wall time: {wall_ms:.3} ms\n"));
            }
            s
        }
    }
}

fn evaluate_cmd(cli: &Cli, inst: &Instance, allocation: &str) -> anyhow::Result<String> {
    let alloc = parse_allocation(allocation)?;
    let envy = match &inst.valuation {
        Valuation::Identical(p) => total_envy(&alloc, &inst.graph, p)?,
        Valuation::General(m) => total_envy_general(&alloc, &inst.graph, m)?,
    };
    Ok(match cli.format {
        Format::Structured => {
            let mut m = record("evaluate");
            m.insert("allocation".into(), json!(alloc));
            structured(merge(m, envy_fields(&envy)))
        }
        Format::Text => format!("envy: {envy} ({})\n", envy.to_decimal_string(6)),
    })
}

fn enumerate_cmd(cli: &Cli, inst: &Instance, canon: Canon, show: usize) -> anyhow::Result<String> {
    let profile = inst.profile()?;
    let symmetry = match canon {
        Canon::None => Symmetry::None,
        Canon::Cycle => Symmetry::cycle_of(&inst.graph)?,
        Canon::Bipartite => Symmetry::bipartite_of(&inst.graph)?,
    };
    let set = enumerate_optima_capped(
        &inst.graph,
        profile,
        cli.budget,
        housealloc::oracle::DEFAULT_MAX_STORED,
    )?;
    let classes = count_classes(&set.allocations, &symmetry)?;
    let mut reps: Vec<Allocation> = set
        .allocations
        .iter()
        .map(|a| canonicalize(a, &symmetry))
        .collect::<Result<_, _>>()?;
    reps.sort();
    reps.dedup();
    reps.truncate(show);
    Ok(match cli.format {
        Format::Structured => {
            let mut m = record("enumerate");
            m = merge(m, envy_fields(&set.envy));
            m.insert("optima".into(), json!(set.count));
            m.insert("truncated".into(), json!(set.truncated));
            m.insert("canon".into(), json!(format!("{canon:?}").to_lowercase()));
            m.insert("classes".into(), json!(classes));
            m.insert("representatives".into(), json!(reps));
            structured(m)
        }
        Format::Text => {
            let mut s = format!(
                "envy: {} ({})\noptima: {}{}\nclasses: {classes}\n",
                set.envy,
                set.envy.to_decimal_string(6),
                set.count,
                if set.truncated {
                    " (list truncated)"
                } else {
                    ""
                }
            );
            for r in &reps {
                s.push_str(&format!("  {}\n", fmt_alloc(r)));
            }
            s
        }
    })
}

fn classify_cmd(cli: &Cli, inst: &Instance) -> anyhow::Result<String> {
    let parts = classified_components(&inst.graph);
    let classes: Vec<_> = parts.iter().map(|p| p.1).collect();
    let family = strongly_separable_family(&classes);
    Ok(match cli.format {
        Format::Structured => {
            let mut m = record("classify");
            m.insert("n".into(), json!(inst.n()));
            m.insert(
                "components".into(),
                Value::Array(
                    parts
                        .iter()
                        .map(|(c, class)| json!({ "vertices": c.vertices, "class": class, "name": class.name() }))
                        .collect(),
                ),
            );
            m.insert("family".into(), json!(family));
            m.insert("is_tree".into(), json!(inst.graph.is_tree()));
            structured(m)
        }
        Format::Text => {
            let mut s = format!("{} vertices, {} components\n", inst.n(), parts.len());
            for (c, class) in &parts {
                s.push_str(&format!("  {}: {:?}\n", class.name(), c.vertices));
            }
            match family {
                Some(f) => s.push_str(&format!(
                    "family: {}\n",
                    serde_json::to_value(f)?.as_str().unwrap_or("")
                )),
                None => s.push_str("family: none\n"),
            }
            s
        }
    })
}

fn figure_by_name(name: &str, s: Option<&str>) -> anyhow::Result<Figure> {
    Ok(match name {
        "fig3-top" => Figure::fig3_top(),
        "fig3-bottom" => Figure::fig3_bottom(),
        "fig4" => Figure::fig4(),
        "fig5" => {
            let s = match s {
                Some(text) => {
                    let v: Vec<usize> = parse_list(text, "leaf count")?;
                    v.try_into()
                        .map_err(|_| Error::Input("fig5 needs four leaf counts".into()))?
                }
                None => FIG5_DEFAULT,
            };
            Figure::fig5(s)
        }
        other => bail!(Error::Input(format!(
            "unknown figure `{other}` (known: fig1, fig3-top, fig3-bottom, fig4, fig5)"
        ))),
    })
}

fn generate_cmd(cli: &Cli, kind: &GenerateKind) -> anyhow::Result<Instance> {
    let mut rng = seeded(cli.seed);
    let inst = match kind {
        GenerateKind::RandomGraph { n, p, connected } => {
            let g = if *connected {
                random_connected_graph(*n, *p, &mut rng)
            } else {
                random_graph(*n, *p, &mut rng)
            };
            let v = random_values(*n, &mut rng);
            Instance::identical(g, v)?
                .with_metadata("source", "random_graph")
                .with_metadata("p", *p)
                .with_metadata("connected", *connected)
                .with_metadata("seed", cli.seed)
        }
        GenerateKind::Family {
            kind,
            n,
            sides,
            values,
        } => {
            let spec = if kind.contains(':') {
                kind.clone()
            } else {
                let size =
                    |what: &str| n.ok_or_else(|| Error::Input(format!("`{what}` needs --n")));
                match kind.as_str() {
                    "star" => {
                        let n = size("star")?;
                        if n == 0 {
                            bail!(Error::Input("a star needs at least its center".into()));
                        }
                        format!("star:{}", n - 1)
                    }
                    "bipartite" => {
                        let sides = sides
                            .as_deref()
                            .ok_or_else(|| Error::Input("`bipartite` needs --sides R,S".into()))?;
                        let v: Vec<usize> = parse_list(sides, "side size")?;
                        if v.len() != 2 {
                            bail!(Error::Input("--sides needs two sizes".into()));
                        }
                        format!("bipartite:{}x{}", v[0], v[1])
                    }
                    other => format!("{other}:{}", size(other)?),
                }
            };
            let g = parse_family(&spec)?;
            let profile = match values {
                Some(text) => ValueProfile::new(parse_list(text, "value")?)?,
                None => random_values(g.vertex_count(), &mut rng),
            };
            let mut inst = Instance::identical(g, profile)?
                .with_metadata("source", "family")
                .with_metadata("family", spec);
            if values.is_none() {
                inst = inst.with_metadata("seed", cli.seed);
            }
            inst
        }
        GenerateKind::Figure { name, .. } if name == "fig1" => fig1_instance().0,
        GenerateKind::Figure { name, s } => {
            make_figure_instance(&figure_by_name(name, s.as_deref())?)?
        }
        GenerateKind::Bisection {
            graph,
            n,
            p,
            epsilon,
        } => {
            let g = match graph {
                Some(path) => read_instance(path)?.graph,
                None => random_graph(*n, *p, &mut rng),
            };
            let mut inst = gen_from_bisection(&g, parse_rational(epsilon.as_deref())?)?;
            if graph.is_none() {
                inst = inst.with_metadata("seed", cli.seed).with_metadata("p", *p);
            }
            inst
        }
        GenerateKind::Binpacking {
            items,
            bin,
            bins,
            family,
            gap,
            epsilon,
        } => {
            let bp = BinPackingInput::new(parse_list(items, "item size")?, *bin, *bins)?;
            let family = match family.as_str() {
                "paths" => BinFamily::Paths,
                "cycles" => BinFamily::Cycles,
                "stars" => BinFamily::Stars,
                "cliques" => BinFamily::Cliques,
                other => bail!(Error::Input(format!(
                    "unknown family `{other}` (known: paths, cycles, stars, cliques)"
                ))),
            };
            gen_from_binpacking(
                &bp,
                family,
                parse_rational(gap.as_deref())?,
                parse_rational(epsilon.as_deref())?,
            )?
        }
    };
    Ok(inst)
}

fn experiment_cmd(cli: &Cli, args: &ExperimentArgs) -> anyhow::Result<String> {
    let figure = args
        .figure
        .as_deref()
        .map(|f| figure_by_name(f, None))
        .transpose()?;
    let params = ExperimentParams {
        count: args.trees.or(args.graphs).unwrap_or(20),
        n: args.n,
        seed: cli.seed,
        budget: cli.budget,
        figure,
    };
    let report = run_experiment(&args.name, &params)?;
    Ok(match cli.format {
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(&report)?;
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!(
                "experiment {} ({} instances, seed {})\n",
                report.experiment,
                report.records.len(),
                cli.seed
            );
            for (k, v) in &report.summary {
                if k == "counterexamples" {
                    let count = v.as_array().map_or(0, Vec::len);
                    s.push_str(&format!("  counterexamples: {count}\n"));
                    if let Some(list) = v.as_array() {
                        for c in list {
                            s.push_str(&format!("    {}\n", serde_json::to_string(c)?));
                        }
                    }
                } else {
                    s.push_str(&format!("  {k}: {v}\n"));
                }
            }
            s
        }
    })
}
