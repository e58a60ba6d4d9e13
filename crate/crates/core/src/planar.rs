//! Linear kernel for planar DAG instances: face-count rejection, triangle and
//! parallel-pair forcing rules, and the 10k-10 / 12k-12 size bounds.

use std::collections::BTreeMap;

use petgraph::graph::UnGraph;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::instance::Instance;
use crate::preprocess::{ForcingRule, Reduction};
use crate::quadratic::{no_paths, require_dag, settle, KernelOutcome, Kernelization, NoReason};

/// Planarity of the underlying undirected simple graph.
pub fn check_planarity(g: &Graph) -> bool {
    let und = g.to_undirected();
    let (n, m) = (und.vertex_count(), und.edge_count());
    if n <= 4 {
        return true;
    }
    if m > 3 * n - 6 {
        return false;
    }
    let mut pg = UnGraph::<(), ()>::with_capacity(n, m);
    let index: BTreeMap<Vertex, _> = und.vertices().map(|v| (v, pg.add_node(()))).collect();
    for (u, v) in und.edges() {
        pg.add_edge(index[&u], index[&v], ());
    }
    rustworkx_core::planar::is_planar(&pg)
}

/// Number of faces of any plane embedding of a connected planar graph,
/// m - n + 2.
pub fn face_count(g: &Graph) -> Result<usize> {
    if g.vertex_count() == 0 || !g.is_connected() {
        return Err(Error::Precondition(
            "face count needs a nonempty connected graph".into(),
        ));
    }
    if !check_planarity(g) {
        return Err(Error::Precondition(
            "face count needs a planar graph".into(),
        ));
    }
    Ok(g.to_undirected().edge_count() + 2 - g.vertex_count())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanarStats {
    pub n: usize,
    pub m: usize,
    pub faces: usize,
    /// Residual budget the bounds are evaluated at.
    pub k: usize,
    pub bound_v: i64,
    pub bound_e: i64,
    pub face_bound: usize,
}

impl PlanarStats {
    pub fn of(inst: &Instance) -> Result<Self> {
        let k = inst.k as i64;
        Ok(PlanarStats {
            n: inst.graph.vertex_count(),
            m: inst.graph.edge_count(),
            faces: face_count(&inst.graph)?,
            k: inst.k,
            bound_v: 10 * k - 10,
            bound_e: 12 * k - 12,
            face_bound: 2 * inst.k,
        })
    }

    /// Size rejection with both bounds clamped at zero.
    pub fn exceeded(&self) -> Option<NoReason> {
        if self.n as i64 > self.bound_v.max(0) {
            Some(NoReason::VertexBound {
                vertices: self.n,
                bound: self.bound_v,
            })
        } else if self.m as i64 > self.bound_e.max(0) {
            Some(NoReason::EdgeBound {
                edges: self.m,
                bound: self.bound_e,
            })
        } else {
            None
        }
    }
}

/// Rejects when the reduced graph has more than 2k faces.
pub fn face_bound_exceeded(stats: &PlanarStats) -> Option<NoReason> {
    (stats.faces > stats.face_bound).then_some(NoReason::FaceBound {
        faces: stats.faces,
        bound: stats.face_bound,
    })
}

impl Reduction {
    /// One application of the triangle rule: a degree-two vertex v outside
    /// {s, t} with edges (u, v), (v, w) and chord (u, w) is forced.
    pub fn triangle_once(&mut self) -> bool {
        if !self.is_open() {
            return false;
        }
        let g = &self.instance.graph;
        let (s, t) = (self.instance.s, self.instance.t);
        let hit = g.vertices().find(|&v| {
            v != s
                && v != t
                && g.in_degree(v) == 1
                && g.out_degree(v) == 1
                && g.in_neighbors(v)
                    .zip(g.out_neighbors(v))
                    .any(|(u, w)| g.has_edge(u, w))
        });
        match hit {
            Some(v) => {
                self.force(v, ForcingRule::Triangle);
                true
            }
            None => false,
        }
    }

    pub fn force_triangles(&mut self) -> bool {
        let mut fired = false;
        while self.triangle_once() {
            fired = true;
        }
        fired
    }

    /// One application of the parallel-pair rule: of two degree-two vertices
    /// x < y with edges (u, x), (u, y), (x, v), (y, v), x is forced.
    pub fn parallel_pair_once(&mut self) -> bool {
        if !self.is_open() {
            return false;
        }
        let g = &self.instance.graph;
        let (s, t) = (self.instance.s, self.instance.t);
        let is_link = |x: Vertex| x != s && x != t && g.in_degree(x) == 1 && g.out_degree(x) == 1;
        let hit = g.vertices().filter(|&x| is_link(x)).find(|&x| {
            let u = g.in_neighbors(x).next().expect("in-degree one");
            let v = g.out_neighbors(x).next().expect("out-degree one");
            g.out_neighbors(u)
                .any(|y| y != x && is_link(y) && g.has_edge(y, v))
        });
        match hit {
            Some(x) => {
                self.force(x, ForcingRule::ParallelPair);
                true
            }
            None => false,
        }
    }

    pub fn force_parallel_pairs(&mut self) -> bool {
        let mut fired = false;
        while self.parallel_pair_once() {
            fired = true;
        }
        fired
    }
}

pub fn force_triangles(inst: &Instance) -> Reduction {
    let mut red = Reduction::new(inst.clone());
    red.force_triangles();
    red
}

pub fn force_parallel_pairs(inst: &Instance) -> Reduction {
    let mut red = Reduction::new(inst.clone());
    red.force_parallel_pairs();
    red
}

/// Reduces with the common rules plus the triangle and parallel-pair rules,
/// then rejects on more than 2k' faces, more than 10k'-10 vertices or more
/// than 12k'-12 edges.
pub fn kernelize_planar(inst: &Instance) -> Result<Kernelization<PlanarStats>> {
    require_dag(inst)?;
    if !check_planarity(&inst.graph) {
        return Err(Error::Precondition(
            "input graph is not planar; use the general kernelization".into(),
        ));
    }
    let mut red = Reduction::new(inst.clone());
    match red.run_to_fixpoint(true) {
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
    let stats = PlanarStats::of(&red.instance)?;
    let outcome = match face_bound_exceeded(&stats).or_else(|| stats.exceeded()) {
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
