use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tracking_core::generate::{generate_instance, GenerateParams};
use tracking_core::io::{instance_hash, parse_instance, write_instance};
use tracking_core::planar::{check_planarity, face_bound_exceeded, kernelize_planar};
use tracking_core::ppt::to_tsp_instance;
use tracking_core::preprocess::{shortest_to_dag, Reduction, ReductionLog, Status};
use tracking_core::quadratic::{
    kernelize_dag, local_excess_check, prune_for_diagnostics, total_excess_check,
};
use tracking_core::solve::{search_space_base, search_space_bound, solve_fpt, Verdict};
use tracking_core::verify::{verify, DEFAULT_PATH_LIMIT};
use tracking_core::{Error, Instance, KernelOutcome, Mode, Vertex};

#[derive(Parser)]
#[command(
    name = "tracking",
    version,
    about = "Kernelize, transform and solve path-tracking instances"
)]
struct Cli {
    /// Instance file (not needed by `generate` and `bound`).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the common reduction rules and print the reduced instance.
    Reduce,
    /// Kernelize and compare the reduced size against the bounds.
    Kernelize {
        #[arg(long)]
        planar: bool,
    },
    /// Turn a tpdag instance into an equivalent tsp instance.
    Transform,
    /// Decide the instance and print a tracking set if one exists.
    Solve {
        #[arg(long)]
        planar: bool,
        #[arg(long, default_value_t = DEFAULT_PATH_LIMIT)]
        max_paths: usize,
    },
    /// Check a tracker set.
    Verify {
        /// Comma-separated vertex ids; may be empty.
        #[arg(long, default_value = "", value_parser = parse_trackers)]
        trackers: BTreeSet<Vertex>,
        #[arg(long, default_value_t = DEFAULT_PATH_LIMIT)]
        max_paths: usize,
    },
    /// Per-vertex counting inequalities for a tracker set.
    Diagnose {
        /// Comma-separated vertex ids; may be empty.
        #[arg(long, default_value = "", value_parser = parse_trackers)]
        trackers: BTreeSet<Vertex>,
    },
    /// Print a seeded random instance.
    Generate {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        density: f64,
        #[arg(long)]
        planar: bool,
        #[arg(long)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Compare sum_{i<=k} C(10k, i) with 26^k.
    Bound {
        #[arg(long)]
        k: u32,
    },
}

/// A finished report: the JSON value and, for commands whose natural text
/// output is an instance file, that file.
struct Report {
    json: Value,
    text: Option<String>,
}

impl Report {
    fn data(json: Value) -> Self {
        Report { json, text: None }
    }

    fn render(&self, format: Format) -> String {
        match (format, &self.text) {
            (Format::Json, _) => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
                s.push('\n');
                s
            }
            (Format::Text, Some(text)) => text.clone(),
            (Format::Text, None) => {
                let mut out = String::new();
                if let Value::Object(map) = &self.json {
                    for (key, value) in map {
                        let shown = match value {
                            Value::String(s) if !s.contains('\n') => s.clone(),
                            other => other.to_string(),
                        };
                        out.push_str(&format!("{key}: {shown}\n"));
                    }
                }
                out
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn load(cli: &Cli) -> Result<Instance, String> {
    let path = cli.input.as_ref().ok_or("--input is required")?;
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_instance(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn fail(e: Error) -> String {
    e.to_string()
}

fn parse_trackers(list: &str) -> Result<BTreeSet<Vertex>, String> {
    list.split(',')
        .map(str::trim)
        .filter(|id| !id.is_empty())
        .map(|id| id.parse().map_err(|_| format!("`{id}` is not a vertex id")))
        .collect()
}

fn run(cli: &Cli) -> Result<Report, String> {
    match &cli.command {
        Command::Generate {
            seed,
            n,
            density,
            planar,
            mode,
            k,
        } => {
            let params = GenerateParams {
                seed: *seed,
                n: *n,
                density: *density,
                mode: *mode,
                planar: *planar,
                k: *k,
            };
            let inst = generate_instance(&params).map_err(fail)?;
            let text = write_instance(&inst);
            Ok(Report {
                json: json!({ "hash": instance_hash(&inst), "instance": text }),
                text: Some(text),
            })
        }
        Command::Bound { k } => {
            let b = search_space_bound(*k);
            Ok(Report::data(json!({
                "k": b.k,
                "exact_sum": b.exact_sum.to_string(),
                "bound_26k": b.bound_26k.to_string(),
                "holds": b.holds,
                "base": search_space_base(),
            })))
        }
        Command::Reduce => reduce(&load(cli)?),
        Command::Kernelize { planar } => kernelize(&load(cli)?, *planar),
        Command::Transform => {
            let inst = load(cli)?;
            let out = to_tsp_instance(&inst).map_err(fail)?;
            let text = write_instance(&out.instance);
            Ok(Report {
                json: json!({
                    "source_hash": instance_hash(&inst),
                    "hash": instance_hash(&out.instance),
                    "vertices": out.instance.graph.vertex_count(),
                    "edges": out.instance.graph.edge_count(),
                    "origin": out.origin.values().collect::<Vec<_>>(),
                    "instance": text,
                }),
                text: Some(text),
            })
        }
        Command::Solve { planar, max_paths } => {
            let inst = load(cli)?;
            let sol = solve_fpt(&inst, *planar, *max_paths).map_err(fail)?;
            Ok(Report::data(json!({
                "hash": instance_hash(&inst),
                "mode": inst.mode,
                "k": inst.k,
                "flags": { "planar": planar, "max_paths": max_paths },
                "verdict": sol.verdict,
                "trackers": sol.trackers,
                "verified": (sol.verdict == Verdict::Yes).then_some(true),
                "pipeline": sol.pipeline,
                "no_reason": sol.no_reason.as_ref().map(|r| r.to_string()),
                "no_paths": sol.no_paths,
                "forced": sol.forced,
                "kernel_vertices": sol.kernel_vertices,
                "kernel_edges": sol.kernel_edges,
                "stats": sol.stats,
                "log": sol.log,
            })))
        }
        Command::Verify {
            trackers,
            max_paths,
        } => {
            let inst = load(cli)?;
            let set = trackers.clone();
            let r = verify(&inst, &set, *max_paths).map_err(fail)?;
            Ok(Report::data(json!({
                "hash": instance_hash(&inst),
                "mode": inst.mode,
                "flags": { "max_paths": max_paths },
                "trackers": set,
                "valid": r.valid,
                "vacuous": r.vacuous,
                "paths_examined": r.paths_examined,
                "counterexample": r.counterexample,
            })))
        }
        Command::Diagnose { trackers } => {
            let inst = load(cli)?;
            let set = trackers.clone();
            let pruned = prune_for_diagnostics(&inst).map_err(fail)?;
            let kept: BTreeSet<Vertex> = set
                .iter()
                .copied()
                .filter(|&v| pruned.graph.contains(v))
                .collect();
            let l1 = local_excess_check(&pruned.graph, &kept, pruned.t).map_err(fail)?;
            let l2 = total_excess_check(&pruned.graph, &kept);
            Ok(Report::data(json!({
                "hash": instance_hash(&inst),
                "trackers": kept,
                "local_excess": l1,
                "total_excess": l2,
            })))
        }
    }
}

fn reduce(inst: &Instance) -> Result<Report, String> {
    let hash = instance_hash(inst);
    let (dag, mut log) = match inst.mode {
        Mode::Tpdag => (inst.clone(), ReductionLog::default()),
        Mode::Tsp => match shortest_to_dag(inst) {
            Ok(pair) => pair,
            Err(Error::NoPath { .. }) => return Ok(no_paths(&hash)),
            Err(e) => return Err(fail(e)),
        },
    };
    let mut red = Reduction::new(dag);
    match red.run_to_fixpoint(false) {
        Ok(()) => {}
        Err(Error::NoPath { .. }) => return Ok(no_paths(&hash)),
        Err(e) => return Err(fail(e)),
    }
    log.append(red.log.clone());
    let labels: Vec<Vertex> = red.instance.graph.vertices().collect();
    let reduced = (red.status == Status::Open).then(|| write_instance(&red.instance));
    let json = json!({
        "hash": hash,
        "status": red.status,
        "forced": log.forced_trackers(),
        "budget_spent": log.budget_spent(),
        "labels": labels,
        "instance": reduced,
        "log": log,
    });
    let text = {
        let mut out = format!("# status {}\n", json["status"].as_str().unwrap_or(""));
        out.push_str(&format!("# forced {:?}\n", log.forced_trackers()));
        out.push_str(&format!("# labels {labels:?}\n"));
        for step in log.steps() {
            out.push_str(&format!(
                "# {}\n",
                serde_json::to_string(step).expect("serializable")
            ));
        }
        if let Some(r) = &reduced {
            out.push_str(r);
        }
        out
    };
    Ok(Report {
        json,
        text: Some(text),
    })
}

fn no_paths(hash: &str) -> Report {
    Report::data(json!({
        "hash": hash,
        "status": "no_paths",
        "verdict": "yes",
        "trackers": [],
    }))
}

fn kernelize(inst: &Instance, planar: bool) -> Result<Report, String> {
    let hash = instance_hash(inst);
    let (dag, pre_log) = match inst.mode {
        Mode::Tpdag => (inst.clone(), ReductionLog::default()),
        Mode::Tsp => match shortest_to_dag(inst) {
            Ok(pair) => pair,
            Err(Error::NoPath { .. }) => return Ok(no_paths(&hash)),
            Err(e) => return Err(fail(e)),
        },
    };
    if planar && !check_planarity(&dag.graph) {
        return Err("--planar given but the graph is not planar".into());
    }
    let (outcome, log, stats, face_check) = if planar {
        let k = kernelize_planar(&dag).map_err(fail)?;
        let faces = k.stats.as_ref().map(|s| face_bound_exceeded(s).is_none());
        (k.outcome, k.log, serde_json::to_value(&k.stats), faces)
    } else {
        let k = kernelize_dag(&dag).map_err(fail)?;
        (k.outcome, k.log, serde_json::to_value(&k.stats), None)
    };
    let mut full = pre_log;
    full.append(log);
    let (kind, detail) = match &outcome {
        KernelOutcome::No(reason) => (
            "no",
            json!({ "reason": reason, "message": reason.to_string() }),
        ),
        KernelOutcome::TrivialYes { forced, no_paths } => (
            "trivial_yes",
            json!({ "forced": forced, "no_paths": no_paths }),
        ),
        KernelOutcome::Kernel {
            instance,
            forced,
            label_map,
        } => (
            "kernel",
            json!({
                "forced": forced,
                "k": instance.k,
                "vertices": instance.graph.vertex_count(),
                "edges": instance.graph.edge_count(),
                "labels": label_map.values().collect::<Vec<_>>(),
                "instance": write_instance(instance),
            }),
        ),
    };
    Ok(Report::data(json!({
        "hash": hash,
        "pipeline": if planar { "planar" } else { "quadratic" },
        "outcome": kind,
        "detail": detail,
        "stats": stats.map_err(|e| e.to_string())?,
        "within_face_bound": face_check,
        "log": full,
    })))
}
