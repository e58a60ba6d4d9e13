//! Quadratic kernel for tracking all s-t paths of a DAG, plus the counting
//! sets behind its size bound as executable diagnostics.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{reachable_set, Direction, Edge, Graph, Vertex};
use crate::instance::{Instance, Mode};
use crate::preprocess::{prune_non_path_dag, shortest_to_dag, Reduction, ReductionLog, Status};

/// Why a kernelization answered NO.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoReason {
    /// More forced trackers than budget.
    BudgetExceeded {
        forced: usize,
        k: usize,
    },
    VertexBound {
        vertices: usize,
        bound: i64,
    },
    EdgeBound {
        edges: usize,
        bound: i64,
    },
    FaceBound {
        faces: usize,
        bound: usize,
    },
}

impl fmt::Display for NoReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoReason::BudgetExceeded { forced, k } => {
                write!(f, "{forced} forced trackers exceed budget {k}")
            }
            NoReason::VertexBound { vertices, bound } => {
                write!(f, "{vertices} vertices exceed bound {bound}")
            }
            NoReason::EdgeBound { edges, bound } => {
                write!(f, "{edges} edges exceed bound {bound}")
            }
            NoReason::FaceBound { faces, bound } => {
                write!(f, "{faces} faces exceed bound {bound}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelOutcome {
    No(NoReason),
    /// The instance collapsed to a single path (or has none, flagged by
    /// `no_paths`); the forced trackers alone are a solution.
    TrivialYes {
        forced: BTreeSet<Vertex>,
        no_paths: bool,
    },
    Kernel {
        instance: Instance,
        forced: BTreeSet<Vertex>,
        /// Kernel label to original label.
        label_map: BTreeMap<Vertex, Vertex>,
    },
}

impl KernelOutcome {
    pub fn is_no(&self) -> bool {
        matches!(self, KernelOutcome::No(_))
    }

    pub fn forced(&self) -> Option<&BTreeSet<Vertex>> {
        match self {
            KernelOutcome::No(_) => None,
            KernelOutcome::TrivialYes { forced, .. } | KernelOutcome::Kernel { forced, .. } => {
                Some(forced)
            }
        }
    }
}

/// A kernelization result with the reductions performed and size statistics
/// of the reduced graph (absent when the instance collapsed or ran out of
/// budget first).
#[derive(Clone, Debug)]
pub struct Kernelization<S> {
    pub outcome: KernelOutcome,
    pub log: ReductionLog,
    pub stats: Option<S>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelStats {
    pub n: usize,
    pub m: usize,
    /// Residual budget the bounds are evaluated at.
    pub k: usize,
    /// Vertices with out-degree at least two.
    pub out_branching: usize,
    /// Vertices with in-degree at least two.
    pub in_branching: usize,
    pub bound_v: usize,
    pub bound_e: usize,
}

impl KernelStats {
    pub fn of(inst: &Instance) -> Self {
        let g = &inst.graph;
        let sq = (inst.k + 1) * (inst.k + 1);
        KernelStats {
            n: g.vertex_count(),
            m: g.edge_count(),
            k: inst.k,
            out_branching: g.vertices().filter(|&v| g.out_degree(v) >= 2).count(),
            in_branching: g.vertices().filter(|&v| g.in_degree(v) >= 2).count(),
            bound_v: 5 * sq,
            bound_e: 6 * sq,
        }
    }

    pub fn exceeded(&self) -> Option<NoReason> {
        if self.n > self.bound_v {
            Some(NoReason::VertexBound {
                vertices: self.n,
                bound: self.bound_v as i64,
            })
        } else if self.m > self.bound_e {
            Some(NoReason::EdgeBound {
                edges: self.m,
                bound: self.bound_e as i64,
            })
        } else {
            None
        }
    }
}

/// Settles a finished reduction into an outcome, leaving `Open` instances to
/// the caller's size checks.
pub(crate) fn settle(red: &Reduction, original_k: usize) -> Option<KernelOutcome> {
    let forced = red.log.forced_trackers();
    match red.status {
        Status::OverBudget => Some(KernelOutcome::No(NoReason::BudgetExceeded {
            forced: forced.len(),
            k: original_k,
        })),
        Status::Collapsed => Some(KernelOutcome::TrivialYes {
            forced,
            no_paths: false,
        }),
        Status::Open => None,
    }
}

pub(crate) fn no_paths<S>() -> Kernelization<S> {
    Kernelization {
        outcome: KernelOutcome::TrivialYes {
            forced: BTreeSet::new(),
            no_paths: true,
        },
        log: ReductionLog::default(),
        stats: None,
    }
}

pub(crate) fn require_dag(inst: &Instance) -> Result<()> {
    if inst.mode != Mode::Tpdag {
        return Err(Error::Precondition(
            "kernelization expects a tpdag instance".into(),
        ));
    }
    inst.validate()
}

/// Reduces with the common rules, then rejects when the reduced graph has
/// more than 5(k'+1)^2 vertices or 6(k'+1)^2 edges for the residual budget
/// k'.
pub fn kernelize_dag(inst: &Instance) -> Result<Kernelization<KernelStats>> {
    require_dag(inst)?;
    let mut red = Reduction::new(inst.clone());
    match red.run_to_fixpoint(false) {
        Err(Error::NoPath { .. }) => return Ok(no_paths()),
        other => other?,
    }
    if let Some(outcome) = settle(&red, inst.k) {
        return Ok(Kernelization {
            outcome,
            log: red.log,
            stats: None,
        });
    }
    let stats = KernelStats::of(&red.instance);
    let outcome = match stats.exceeded() {
        Some(reason) => KernelOutcome::No(reason),
        None => KernelOutcome::Kernel {
            label_map: red.label_map(),
            forced: red.log.forced_trackers(),
            instance: red.instance,
        },
    };
    Ok(Kernelization {
        outcome,
        log: red.log,
        stats: Some(stats),
    })
}

/// The graph the counting diagnostics are stated on: every vertex on a
/// tracked s-t path, directed away from s. Shortest-path instances are pruned
/// and oriented first.
pub fn prune_for_diagnostics(inst: &Instance) -> Result<Instance> {
    inst.validate()?;
    let (dag, _) = match inst.mode {
        Mode::Tpdag => prune_non_path_dag(inst)?,
        Mode::Tsp => shortest_to_dag(inst)?,
    };
    Ok(dag)
}

/// The sets Z_x, B_x and E_x for one vertex x and tracker set T.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagnosticSets {
    pub x: Vertex,
    /// Reachable from x avoiding T and t (other than x itself).
    pub z: BTreeSet<Vertex>,
    /// Trackers or t reachable from x through vertices of `z` only.
    pub b: BTreeSet<Vertex>,
    /// Edges whose tails lie in `z`.
    pub e_x: Vec<Edge>,
}

pub fn compute_diagnostics(
    g: &Graph,
    trackers: &BTreeSet<Vertex>,
    t: Vertex,
    x: Vertex,
) -> Result<DiagnosticSets> {
    g.check(x)?;
    g.check(t)?;
    if x == t {
        return Err(Error::Precondition(
            "diagnostics are defined for x other than t".into(),
        ));
    }
    let mut stops = trackers.clone();
    stops.insert(t);
    let mut blocked = stops.clone();
    blocked.remove(&x);
    let z = reachable_set(g, x, Direction::Forward, &blocked)?;
    let e_x: Vec<Edge> = z
        .iter()
        .flat_map(|&u| g.out_neighbors(u).map(move |w| (u, w)))
        .collect();
    // Every path from x into T ∪ {t} whose interior avoids it ends with an
    // edge out of Z.
    let b = e_x
        .iter()
        .map(|&(_, w)| w)
        .filter(|w| stops.contains(w) && *w != x)
        .collect();
    Ok(DiagnosticSets { x, z, b, e_x })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalExcessEntry {
    pub x: Vertex,
    /// Sum over Z_x of (out-degree - 1).
    pub excess: i64,
    /// |B_x|.
    pub boundary: usize,
}

impl LocalExcessEntry {
    pub fn holds(&self) -> bool {
        self.excess <= self.boundary as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalExcessReport {
    pub holds: bool,
    pub first_violation: Option<Vertex>,
    pub entries: Vec<LocalExcessEntry>,
}

fn excess(g: &Graph, vs: impl IntoIterator<Item = Vertex>) -> i64 {
    vs.into_iter().map(|v| g.out_degree(v) as i64 - 1).sum()
}

/// Checks sum_{z in Z_x} (deg+(z) - 1) <= |B_x| for every x other than t.
/// Valid tracking sets always pass on graphs where every vertex lies on an
/// s-t path.
pub fn local_excess_check(
    g: &Graph,
    trackers: &BTreeSet<Vertex>,
    t: Vertex,
) -> Result<LocalExcessReport> {
    let mut entries = Vec::new();
    for x in g.vertices().filter(|&x| x != t) {
        let d = compute_diagnostics(g, trackers, t, x)?;
        entries.push(LocalExcessEntry {
            x,
            excess: excess(g, d.z.iter().copied()),
            boundary: d.b.len(),
        });
    }
    let first_violation = entries.iter().find(|e| !e.holds()).map(|e| e.x);
    Ok(LocalExcessReport {
        holds: first_violation.is_none(),
        first_violation,
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TotalExcessReport {
    pub holds: bool,
    /// Sum over all vertices of (out-degree - 1).
    pub excess: i64,
    /// (|T| + 1)^2 - 1.
    pub bound: i64,
}

/// Checks sum_{z in V} (deg+(z) - 1) <= (|T| + 1)^2 - 1.
pub fn total_excess_check(g: &Graph, trackers: &BTreeSet<Vertex>) -> TotalExcessReport {
    let excess = excess(g, g.vertices());
    let side = trackers.len() as i64 + 1;
    let bound = side * side - 1;
    TotalExcessReport {
        holds: excess <= bound,
        excess,
        bound,
    }
}
