//! Common preprocessing: participation pruning, orientation of a shortest-path
//! instance away from the source, endpoint trimming and degree-two
//! contraction, applied until nothing changes.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, reachable_set, Direction, Graph, Vertex};
use crate::instance::{Instance, Mode};

/// The rule that forced a vertex into every solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcingRule {
    /// Degree-two contraction whose shortcut edge already exists.
    ContractionGuard,
    /// Degree-two vertex with a chord between its neighbours.
    Triangle,
    /// Two degree-two vertices sharing both neighbours.
    ParallelPair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Source,
    Target,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    PrunedVertex {
        vertex: Vertex,
    },
    PrunedEdge {
        tail: Vertex,
        head: Vertex,
    },
    EndpointShift {
        endpoint: Endpoint,
        from: Vertex,
        to: Vertex,
    },
    Contraction {
        x: Vertex,
        y: Vertex,
        z: Vertex,
    },
    ForcedTracker {
        vertex: Vertex,
        rule: ForcingRule,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReductionLog {
    steps: Vec<Step>,
    budget_spent: usize,
}

impl ReductionLog {
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn budget_spent(&self) -> usize {
        self.budget_spent
    }

    pub fn forced_trackers(&self) -> BTreeSet<Vertex> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::ForcedTracker { vertex, .. } => Some(*vertex),
                _ => None,
            })
            .collect()
    }

    pub fn forced_by(&self, rule: ForcingRule) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, Step::ForcedTracker { rule: r, .. } if *r == rule))
            .count()
    }

    pub(crate) fn push(&mut self, step: Step) {
        if matches!(step, Step::ForcedTracker { .. }) {
            self.budget_spent += 1;
        }
        self.steps.push(step);
    }

    pub fn append(&mut self, other: ReductionLog) {
        for step in other.steps {
            self.push(step);
        }
    }
}

/// Where a reduction pass left the instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Rules may still leave a nontrivial instance.
    Open,
    /// Source and destination merged: a single path remains.
    Collapsed,
    /// More vertices were forced than the budget allows.
    OverBudget,
}

/// An instance under reduction together with everything done to it so far.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub instance: Instance,
    pub log: ReductionLog,
    pub status: Status,
}

impl Reduction {
    pub fn new(instance: Instance) -> Self {
        let status = if instance.s == instance.t {
            Status::Collapsed
        } else {
            Status::Open
        };
        Reduction {
            instance,
            log: ReductionLog::default(),
            status,
        }
    }

    pub fn is_open(&self) -> bool {
        self.status == Status::Open
    }

    /// Original labels of the surviving vertices. Reduction rules never
    /// allocate vertices, so this is the identity on what is left.
    pub fn label_map(&self) -> BTreeMap<Vertex, Vertex> {
        self.instance.graph.vertices().map(|v| (v, v)).collect()
    }

    pub(crate) fn delete(&mut self, v: Vertex) {
        self.instance
            .graph
            .remove_vertex(v)
            .expect("deleted vertex is present");
    }

    /// Marks `v` as a tracker every solution needs, deletes it and spends one
    /// unit of budget.
    pub(crate) fn force(&mut self, v: Vertex, rule: ForcingRule) {
        self.delete(v);
        self.log.push(Step::ForcedTracker { vertex: v, rule });
        if self.instance.k == 0 {
            self.status = Status::OverBudget;
        } else {
            self.instance.k -= 1;
        }
    }

    /// Keeps exactly the vertices on some directed s-t path.
    pub fn prune_non_path(&mut self) -> Result<bool> {
        let inst = &self.instance;
        let g = &inst.graph;
        let none = BTreeSet::new();
        let fwd = reachable_set(g, inst.s, Direction::Forward, &none)?;
        if !fwd.contains(&inst.t) {
            return Err(Error::NoPath {
                s: inst.s,
                t: inst.t,
            });
        }
        let back = reachable_set(g, inst.t, Direction::Backward, &none)?;
        let doomed: Vec<Vertex> = g
            .vertices()
            .filter(|v| !(fwd.contains(v) && back.contains(v)))
            .collect();
        for &v in &doomed {
            self.delete(v);
            self.log.push(Step::PrunedVertex { vertex: v });
        }
        Ok(!doomed.is_empty())
    }

    /// One application of endpoint trimming at s or t. Returns whether it
    /// fired.
    pub fn trim_endpoint_once(&mut self) -> bool {
        if !self.is_open() {
            return false;
        }
        let g = &self.instance.graph;
        let (s, t) = (self.instance.s, self.instance.t);
        let source_shift = (g.degree(s) == 1)
            .then(|| g.out_neighbors(s).next())
            .flatten()
            .map(|u| (Endpoint::Source, s, u));
        let target_shift = (g.degree(t) == 1)
            .then(|| g.in_neighbors(t).next())
            .flatten()
            .map(|v| (Endpoint::Target, t, v));
        let Some((endpoint, from, to)) = source_shift.or(target_shift) else {
            return false;
        };
        self.delete(from);
        match endpoint {
            Endpoint::Source => self.instance.s = to,
            Endpoint::Target => self.instance.t = to,
        }
        self.log.push(Step::EndpointShift { endpoint, from, to });
        if self.instance.s == self.instance.t {
            self.status = Status::Collapsed;
        }
        true
    }

    pub fn trim_endpoints(&mut self) -> bool {
        let mut fired = false;
        while self.trim_endpoint_once() {
            fired = true;
        }
        fired
    }

    /// One application of degree-two contraction, lowest middle vertex first.
    ///
    /// For a chain x -> y -> z with deg(x) = deg(y) = 2, y is contracted into
    /// the edge (x, z) when x is neither endpoint. If (x, z) already exists
    /// the two routes differ only in y, so y is forced instead; this can only
    /// happen with x = s.
    pub fn contract_deg2_once(&mut self) -> bool {
        if !self.is_open() {
            return false;
        }
        let g = &self.instance.graph;
        let (s, t) = (self.instance.s, self.instance.t);
        let found = g.vertices().find_map(|y| {
            if y == s || y == t || g.in_degree(y) != 1 || g.out_degree(y) != 1 {
                return None;
            }
            let x = g.in_neighbors(y).next()?;
            let z = g.out_neighbors(y).next()?;
            if g.degree(x) != 2 || x == t {
                return None;
            }
            if g.has_edge(x, z) {
                Some((x, y, z, true))
            } else if x != s {
                Some((x, y, z, false))
            } else {
                None
            }
        });
        match found {
            Some((_, y, _, true)) => {
                self.force(y, ForcingRule::ContractionGuard);
                true
            }
            Some((x, y, z, false)) => {
                self.delete(y);
                self.instance
                    .graph
                    .add_edge(x, z)
                    .expect("guard excludes an existing shortcut");
                self.log.push(Step::Contraction { x, y, z });
                true
            }
            None => false,
        }
    }

    pub fn contract_deg2(&mut self) -> bool {
        let mut fired = false;
        while self.contract_deg2_once() {
            fired = true;
        }
        fired
    }

    /// Applies participation pruning, endpoint trimming and degree-two
    /// contraction in that fixed order until none of them changes anything.
    /// With `planar_rules` the triangle and parallel-pair rules join the
    /// loop after contraction.
    pub fn run_to_fixpoint(&mut self, planar_rules: bool) -> Result<()> {
        while self.is_open() {
            let mut changed = self.prune_non_path()?;
            changed |= self.trim_endpoints();
            changed |= self.contract_deg2();
            if planar_rules {
                changed |= self.force_triangles();
                changed |= self.force_parallel_pairs();
            }
            if !changed {
                break;
            }
        }
        Ok(())
    }
}

fn require_mode(inst: &Instance, mode: Mode) -> Result<()> {
    if inst.mode == mode {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "expected a {mode} instance, got {}",
            inst.mode
        )))
    }
}

/// Deletes every vertex and edge that lies on no shortest s-t path of an
/// undirected instance.
pub fn prune_non_shortest(inst: &Instance) -> Result<(Instance, ReductionLog)> {
    require_mode(inst, Mode::Tsp)?;
    let g = &inst.graph;
    let ds = bfs_distances(g, inst.s, Direction::Forward)?;
    let dt = bfs_distances(g, inst.t, Direction::Forward)?;
    let total = ds[&inst.t].ok_or(Error::NoPath {
        s: inst.s,
        t: inst.t,
    })?;
    let on_shortest = |v: &Vertex| matches!((ds[v], dt[v]), (Some(a), Some(b)) if a + b == total);

    let mut out = inst.clone();
    let mut log = ReductionLog::default();
    for v in g.vertices().filter(|v| !on_shortest(v)) {
        out.graph.remove_vertex(v)?;
        log.push(Step::PrunedVertex { vertex: v });
    }
    let dead_edges: Vec<_> = out
        .graph
        .edges()
        .filter(|&(u, v)| {
            let (su, sv) = (ds[&u].unwrap(), ds[&v].unwrap());
            let (tu, tv) = (dt[&u].unwrap(), dt[&v].unwrap());
            (su + 1 + tv).min(sv + 1 + tu) != total
        })
        .collect();
    for (u, v) in dead_edges {
        out.graph.remove_edge(u, v)?;
        log.push(Step::PrunedEdge { tail: u, head: v });
    }
    Ok((out, log))
}

/// Directs every edge from the endpoint nearer to s towards the farther one.
/// Edges between equidistant vertices are dropped (and logged).
pub fn orient_from_source(inst: &Instance) -> Result<(Instance, ReductionLog)> {
    require_mode(inst, Mode::Tsp)?;
    let g = &inst.graph;
    let ds = bfs_distances(g, inst.s, Direction::Forward)?;
    let mut dag = Graph::directed();
    for v in g.vertices() {
        dag.add_vertex(v);
    }
    let mut log = ReductionLog::default();
    for (u, v) in g.edges() {
        match (ds[&u], ds[&v]) {
            (Some(a), Some(b)) if a < b => dag.add_edge(u, v)?,
            (Some(a), Some(b)) if b < a => dag.add_edge(v, u)?,
            _ => log.push(Step::PrunedEdge { tail: u, head: v }),
        }
    }
    let out = Instance::new(dag, inst.s, inst.t, inst.k, Mode::Tpdag)?;
    Ok((out, log))
}

/// Shortest-path instance to an equivalent DAG instance: pruning followed by
/// orientation.
pub fn shortest_to_dag(inst: &Instance) -> Result<(Instance, ReductionLog)> {
    let (pruned, mut log) = prune_non_shortest(inst)?;
    let (dag, orient_log) = orient_from_source(&pruned)?;
    log.append(orient_log);
    Ok((dag, log))
}

/// Keeps exactly the vertices forward-reachable from s and backward-reachable
/// from t.
pub fn prune_non_path_dag(inst: &Instance) -> Result<(Instance, ReductionLog)> {
    require_mode(inst, Mode::Tpdag)?;
    let mut red = Reduction::new(inst.clone());
    red.prune_non_path()?;
    Ok((red.instance, red.log))
}

pub fn trim_endpoints(inst: &Instance) -> Result<Reduction> {
    require_mode(inst, Mode::Tpdag)?;
    let mut red = Reduction::new(inst.clone());
    red.trim_endpoints();
    Ok(red)
}

pub fn contract_deg2(inst: &Instance) -> Result<Reduction> {
    require_mode(inst, Mode::Tpdag)?;
    let mut red = Reduction::new(inst.clone());
    red.contract_deg2();
    Ok(red)
}

/// Fixpoint of pruning, endpoint trimming and degree-two contraction.
pub fn reduce_common(inst: &Instance) -> Result<Reduction> {
    require_mode(inst, Mode::Tpdag)?;
    let mut red = Reduction::new(inst.clone());
    red.run_to_fixpoint(false)?;
    Ok(red)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn dag(edges: &[(Vertex, Vertex)], s: Vertex, t: Vertex, k: usize) -> Instance {
        Instance::new(
            Graph::from_edges(true, edges).unwrap(),
            s,
            t,
            k,
            Mode::Tpdag,
        )
        .unwrap()
    }

    fn tsp(edges: &[(Vertex, Vertex)], s: Vertex, t: Vertex) -> Instance {
        Instance::new(Graph::from_edges(false, edges).unwrap(), s, t, 1, Mode::Tsp).unwrap()
    }

    #[test]
    fn shortest_pruning_drops_detour() {
        // s=0 a=1 t=2 b=3 c=4
        let inst = tsp(&[(0, 1), (1, 2), (0, 3), (3, 4), (4, 2)], 0, 2);
        let (out, log) = prune_non_shortest(&inst).unwrap();
        assert_eq!(out.graph.vertices().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(out.graph.edge_count(), 2);
        assert_eq!(
            log.steps(),
            &[
                Step::PrunedVertex { vertex: 3 },
                Step::PrunedVertex { vertex: 4 }
            ]
        );

        let single = tsp(&[(0, 1)], 0, 1);
        assert_eq!(prune_non_shortest(&single).unwrap().0, single);
    }

    #[test]
    fn shortest_pruning_needs_a_path() {
        let mut g = Graph::from_edges(false, &[(0, 1)]).unwrap();
        g.add_vertex(2);
        let inst = Instance::new(g, 0, 2, 0, Mode::Tsp).unwrap();
        assert_eq!(
            prune_non_shortest(&inst).unwrap_err(),
            Error::NoPath { s: 0, t: 2 }
        );
    }

    #[test]
    fn orientation_levels_and_same_level_edges() {
        let inst = tsp(&[(0, 1), (0, 2), (1, 3), (2, 3)], 0, 3);
        let (out, log) = orient_from_source(&inst).unwrap();
        assert_eq!(
            out.graph.edges().collect::<Vec<_>>(),
            vec![(0, 1), (0, 2), (1, 3), (2, 3)]
        );
        assert!(log.steps().is_empty());

        let inst = tsp(&[(0, 1), (0, 2), (1, 3), (2, 3), (1, 2)], 0, 3);
        let (out, log) = orient_from_source(&inst).unwrap();
        assert!(!out.graph.has_edge(1, 2) && !out.graph.has_edge(2, 1));
        assert_eq!(log.steps(), &[Step::PrunedEdge { tail: 1, head: 2 }]);
    }

    #[test]
    fn dag_pruning_removes_dead_ends_and_orphans() {
        // dangling sink 4, orphan 5 feeding 1
        let inst = dag(&[(0, 1), (1, 2), (0, 4), (5, 1)], 0, 2, 0);
        let (out, _) = prune_non_path_dag(&inst).unwrap();
        assert_eq!(out.graph.vertices().collect::<Vec<_>>(), vec![0, 1, 2]);

        let mut g = Graph::from_edges(true, &[(0, 1)]).unwrap();
        g.add_vertex(2);
        let inst = Instance::new(g, 0, 2, 0, Mode::Tpdag).unwrap();
        assert!(matches!(
            prune_non_path_dag(&inst),
            Err(Error::NoPath { .. })
        ));
    }

    #[test]
    fn endpoint_trimming() {
        // s=0 -> u=1 -> {2,3} -> t=4
        let inst = dag(&[(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)], 0, 4, 1);
        let red = trim_endpoints(&inst).unwrap();
        assert_eq!(red.instance.s, 1);
        assert!(!red.instance.graph.contains(0));

        let diamond = dag(&[(0, 1), (0, 2), (1, 3), (2, 3)], 0, 3, 1);
        let red = trim_endpoints(&diamond).unwrap();
        assert_eq!(red.instance, diamond);
        assert!(red.log.steps().is_empty());
    }

    #[test]
    fn chain_collapses() {
        let chain = dag(&[(0, 1), (1, 2), (2, 3)], 0, 3, 0);
        let red = reduce_common(&chain).unwrap();
        assert_eq!(red.status, Status::Collapsed);
        assert_eq!(red.log.budget_spent(), 0);
        assert_eq!(red.instance.graph.vertex_count(), 1);
    }

    #[test]
    fn contraction_fires_on_interior_chain() {
        // s=0 -> {1, 5}; 1 -> x=2 -> y=3 -> z=4; 5 -> 4; 4 -> t=6; 0 -> 6
        let inst = dag(
            &[
                (0, 1),
                (0, 5),
                (1, 2),
                (2, 3),
                (3, 4),
                (5, 4),
                (4, 6),
                (0, 6),
                (1, 6),
            ],
            0,
            6,
            3,
        );
        let red = contract_deg2(&inst).unwrap();
        assert!(red
            .log
            .steps()
            .contains(&Step::Contraction { x: 2, y: 3, z: 4 }));
        assert!(red.instance.graph.has_edge(2, 4));
        assert!(!red.instance.graph.contains(3));
    }

    #[test]
    fn contraction_needs_degree_two_tail() {
        // x=1 has degree 3
        let inst = dag(&[(0, 1), (0, 4), (1, 2), (1, 4), (2, 3), (4, 3)], 0, 3, 3);
        let red = contract_deg2(&inst).unwrap();
        assert!(red.log.steps().is_empty());
    }

    #[test]
    fn diamond_is_already_reduced() {
        let diamond = dag(&[(0, 1), (0, 2), (1, 3), (2, 3)], 0, 3, 1);
        let red = reduce_common(&diamond).unwrap();
        assert_eq!(red.status, Status::Open);
        assert_eq!(red.instance, diamond);
        assert!(red.log.steps().is_empty());
    }

    #[test]
    fn chordal_triangle_at_source_forces_tracker() {
        // s=0 -> y=1 -> z=2, chord 0 -> 2, then 2 -> {3, 4} -> t=5
        let inst = dag(
            &[(0, 1), (1, 2), (0, 2), (2, 3), (2, 4), (3, 5), (4, 5)],
            0,
            5,
            2,
        );
        let red = reduce_common(&inst).unwrap();
        assert_eq!(red.log.forced_trackers(), BTreeSet::from([1]));
        assert_eq!(red.log.forced_by(ForcingRule::ContractionGuard), 1);
        assert_eq!(red.instance.k, 1);

        let broke = reduce_common(&inst.with_budget(0)).unwrap();
        assert_eq!(broke.status, Status::OverBudget);
    }

    #[test]
    fn fixpoint_postconditions_on_small_mesh() {
        let inst = dag(
            &[
                (0, 1),
                (0, 2),
                (1, 3),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (3, 6),
                (6, 7),
            ],
            0,
            7,
            4,
        );
        let red = reduce_common(&inst).unwrap();
        let g = &red.instance.graph;
        let (s, t) = (red.instance.s, red.instance.t);
        for v in g.vertices() {
            if v != s && v != t {
                assert!(g.degree(v) >= 2);
            }
        }
        for (u, v) in g.edges() {
            let ends = [s, t];
            if g.degree(u) == 2 && g.degree(v) == 2 {
                assert!(ends.contains(&u) || ends.contains(&v));
            }
        }
    }
}
