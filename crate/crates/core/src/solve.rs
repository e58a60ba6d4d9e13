//! Kernel-then-enumerate solver and the size of its search space.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::instance::{Instance, Mode};
use crate::planar::{check_planarity, kernelize_planar, PlanarStats};
use crate::preprocess::{shortest_to_dag, ReductionLog};
use crate::quadratic::{kernelize_dag, KernelOutcome, KernelStats, NoReason};
use crate::verify::{verify, PathFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    Quadratic,
    Planar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum SizeStats {
    Quadratic(KernelStats),
    Planar(PlanarStats),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
}

#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    pub verdict: Verdict,
    /// A minimum-size tracking set on the kernel, lifted to original labels
    /// together with every forced tracker.
    pub trackers: Option<BTreeSet<Vertex>>,
    pub pipeline: Pipeline,
    pub no_reason: Option<NoReason>,
    /// s and t were disconnected, so there was nothing to track.
    pub no_paths: bool,
    pub forced: BTreeSet<Vertex>,
    pub kernel_vertices: Option<usize>,
    pub kernel_edges: Option<usize>,
    pub stats: Option<SizeStats>,
    pub log: ReductionLog,
}

impl Solution {
    fn empty(pipeline: Pipeline) -> Self {
        Solution {
            verdict: Verdict::Yes,
            trackers: Some(BTreeSet::new()),
            pipeline,
            no_reason: None,
            no_paths: true,
            forced: BTreeSet::new(),
            kernel_vertices: None,
            kernel_edges: None,
            stats: None,
            log: ReductionLog::default(),
        }
    }
}

/// Decides the instance and, on YES, returns a tracking set of size at most
/// k that has been re-verified on the original instance.
///
/// Shortest-path instances are first turned into DAG instances. With
/// `planar_hint` the planar kernel is used when the graph really is planar.
pub fn solve_fpt(inst: &Instance, planar_hint: bool, limit: usize) -> Result<Solution> {
    inst.validate()?;
    let (dag, mut log) = match inst.mode {
        Mode::Tpdag => (inst.clone(), ReductionLog::default()),
        Mode::Tsp => match shortest_to_dag(inst) {
            Ok(pair) => pair,
            Err(Error::NoPath { .. }) => {
                let pipeline = if planar_hint {
                    Pipeline::Planar
                } else {
                    Pipeline::Quadratic
                };
                return Ok(Solution::empty(pipeline));
            }
            Err(e) => return Err(e),
        },
    };

    let planar = planar_hint && check_planarity(&dag.graph);
    let (outcome, kernel_log, stats, pipeline) = if planar {
        let k = kernelize_planar(&dag)?;
        (
            k.outcome,
            k.log,
            k.stats.map(SizeStats::Planar),
            Pipeline::Planar,
        )
    } else {
        let k = kernelize_dag(&dag)?;
        (
            k.outcome,
            k.log,
            k.stats.map(SizeStats::Quadratic),
            Pipeline::Quadratic,
        )
    };
    log.append(kernel_log);

    let mut solution = Solution {
        verdict: Verdict::No,
        trackers: None,
        pipeline,
        no_reason: None,
        no_paths: false,
        forced: outcome.forced().cloned().unwrap_or_default(),
        kernel_vertices: None,
        kernel_edges: None,
        stats,
        log,
    };

    let lifted = match outcome {
        KernelOutcome::No(reason) => {
            solution.no_reason = Some(reason);
            return Ok(solution);
        }
        KernelOutcome::TrivialYes { forced, no_paths } => {
            solution.no_paths = no_paths;
            forced
        }
        KernelOutcome::Kernel {
            instance,
            forced,
            label_map,
        } => {
            solution.kernel_vertices = Some(instance.graph.vertex_count());
            solution.kernel_edges = Some(instance.graph.edge_count());
            let family = PathFamily::of_dag(&instance, limit)?;
            let candidates = family.candidates();
            match family.smallest_tracking_subset_par(&candidates, instance.k) {
                Some(found) => {
                    let mut all = forced;
                    all.extend(found.iter().map(|v| label_map[v]));
                    all
                }
                None => return Ok(solution),
            }
        }
    };

    if lifted.len() > inst.k {
        return Err(Error::InternalInconsistency(format!(
            "lifted solution has {} trackers for budget {}",
            lifted.len(),
            inst.k
        )));
    }
    let check = verify(inst, &lifted, limit)?;
    if !check.valid {
        return Err(Error::InternalInconsistency(format!(
            "lifted solution {lifted:?} fails on the original instance"
        )));
    }
    solution.verdict = Verdict::Yes;
    solution.trackers = Some(lifted);
    Ok(solution)
}

/// Exact count of candidate subsets for a 10k-vertex kernel against 26^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpaceBound {
    pub k: u32,
    /// sum_{i=1..k} C(10k, i)
    pub exact_sum: BigUint,
    pub bound_26k: BigUint,
    pub holds: bool,
}

pub fn search_space_bound(k: u32) -> SearchSpaceBound {
    let n = 10 * k;
    let mut term = BigUint::from(1u32);
    let mut exact_sum = BigUint::from(0u32);
    for i in 1..=k {
        term = term * (n - i + 1) / i;
        exact_sum += &term;
    }
    let bound_26k = BigUint::from(26u32).pow(k);
    SearchSpaceBound {
        k,
        holds: exact_sum <= bound_26k,
        exact_sum,
        bound_26k,
    }
}

/// 10^10 / 9^9, the base of the single-exponential estimate.
pub fn search_space_base() -> f64 {
    1e10 / 9f64.powi(9)
}
