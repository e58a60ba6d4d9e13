//! Simple graphs with stable vertex labels and the elementary traversals the
//! reduction rules are built on.
//!
//! Labels are never renumbered: deleting a vertex leaves a hole, and fresh
//! vertices are allocated above the current maximum label. All iteration is in
//! ascending label order so that every algorithm in the crate is reproducible.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Edge = (Vertex, Vertex);
pub type Path = Vec<Vertex>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// A directed or undirected simple graph.
///
/// For undirected graphs both adjacency maps hold the full neighbourhood, so
/// `out_neighbors` and `in_neighbors` agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    directed: bool,
    succ: BTreeMap<Vertex, BTreeSet<Vertex>>,
    pred: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

impl Graph {
    pub fn new(directed: bool) -> Self {
        Graph {
            directed,
            succ: BTreeMap::new(),
            pred: BTreeMap::new(),
        }
    }

    pub fn directed() -> Self {
        Self::new(true)
    }

    pub fn undirected() -> Self {
        Self::new(false)
    }

    /// Builds a graph from an edge list, adding endpoints as needed.
    pub fn from_edges(directed: bool, edges: &[Edge]) -> Result<Self> {
        let mut g = Self::new(directed);
        for &(u, v) in edges {
            g.add_vertex(u);
            g.add_vertex(v);
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.succ.contains_key(&v)
    }

    pub fn vertex_count(&self) -> usize {
        self.succ.len()
    }

    pub fn edge_count(&self) -> usize {
        let arcs: usize = self.succ.values().map(BTreeSet::len).sum();
        if self.directed {
            arcs
        } else {
            arcs / 2
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.succ.keys().copied()
    }

    /// Edges in ascending order. Undirected edges are reported once as
    /// `(min, max)`.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let directed = self.directed;
        self.succ
            .iter()
            .flat_map(|(&u, out)| out.iter().map(move |&v| (u, v)))
            .filter(move |&(u, v)| directed || u < v)
    }

    pub fn max_label(&self) -> Option<Vertex> {
        self.succ.keys().next_back().copied()
    }

    /// The label a newly allocated vertex receives: one above the current
    /// maximum.
    pub fn fresh_label(&self) -> Vertex {
        self.max_label().map_or(0, |m| m + 1)
    }

    /// Inserts `v`; returns false when it was already present.
    pub fn add_vertex(&mut self, v: Vertex) -> bool {
        if self.contains(v) {
            return false;
        }
        self.succ.insert(v, BTreeSet::new());
        self.pred.insert(v, BTreeSet::new());
        true
    }

    pub fn add_fresh_vertex(&mut self) -> Vertex {
        let v = self.fresh_label();
        self.add_vertex(v);
        v
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.succ.get(&u).is_some_and(|out| out.contains(&v))
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u, v));
        }
        self.link(u, v);
        if !self.directed {
            self.link(v, u);
        }
        Ok(())
    }

    fn link(&mut self, u: Vertex, v: Vertex) {
        self.succ.get_mut(&u).expect("checked").insert(v);
        self.pred.get_mut(&v).expect("checked").insert(u);
    }

    fn unlink(&mut self, u: Vertex, v: Vertex) {
        if let Some(out) = self.succ.get_mut(&u) {
            out.remove(&v);
        }
        if let Some(inc) = self.pred.get_mut(&v) {
            inc.remove(&u);
        }
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        if !self.has_edge(u, v) {
            return Err(Error::UnknownEdge(u, v));
        }
        self.unlink(u, v);
        if !self.directed {
            self.unlink(v, u);
        }
        Ok(())
    }

    /// Deletes `v` together with exactly its incident edges.
    pub fn remove_vertex(&mut self, v: Vertex) -> Result<()> {
        let out = self.succ.remove(&v).ok_or(Error::UnknownVertex(v))?;
        let inc = self.pred.remove(&v).expect("adjacency maps in sync");
        for w in out {
            self.pred.get_mut(&w).expect("endpoint exists").remove(&v);
            if !self.directed {
                self.succ.get_mut(&w).expect("endpoint exists").remove(&v);
            }
        }
        for w in inc {
            if let Some(ws) = self.succ.get_mut(&w) {
                ws.remove(&v);
            }
        }
        Ok(())
    }

    pub fn check(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn out_neighbors(&self, v: Vertex) -> impl DoubleEndedIterator<Item = Vertex> + '_ {
        self.succ.get(&v).into_iter().flatten().copied()
    }

    pub fn in_neighbors(&self, v: Vertex) -> impl DoubleEndedIterator<Item = Vertex> + '_ {
        self.pred.get(&v).into_iter().flatten().copied()
    }

    pub fn neighbors_in(&self, v: Vertex, dir: Direction) -> Box<dyn Iterator<Item = Vertex> + '_> {
        match dir {
            Direction::Forward => Box::new(self.out_neighbors(v)),
            Direction::Backward => Box::new(self.in_neighbors(v)),
        }
    }

    /// N(v): every vertex adjacent to `v` regardless of direction.
    pub fn neighbors(&self, v: Vertex) -> BTreeSet<Vertex> {
        self.out_neighbors(v).chain(self.in_neighbors(v)).collect()
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.succ.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.pred.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        if self.directed {
            self.neighbors(v).len()
        } else {
            self.out_degree(v)
        }
    }

    /// The underlying undirected simple graph. Antiparallel arcs collapse to
    /// one edge.
    pub fn to_undirected(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let mut g = Graph::undirected();
        for v in self.vertices() {
            g.add_vertex(v);
        }
        for (u, v) in self.edges() {
            if !g.has_edge(u, v) {
                g.link(u, v);
                g.link(v, u);
            }
        }
        g
    }

    /// Induced subgraph on `keep`; labels are preserved.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Graph {
        let mut g = Graph::new(self.directed);
        for &v in keep.iter().filter(|v| self.contains(**v)) {
            g.add_vertex(v);
        }
        for (u, v) in self.edges() {
            if keep.contains(&u) && keep.contains(&v) {
                g.link(u, v);
                if !self.directed {
                    g.link(v, u);
                }
            }
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        let Some(root) = self.vertices().next() else {
            return true;
        };
        let und = self.to_undirected();
        reachable_set(&und, root, Direction::Forward, &BTreeSet::new())
            .map(|r| r.len() == self.vertex_count())
            .unwrap_or(false)
    }

    pub fn is_acyclic(&self) -> bool {
        topological_order(self).is_ok()
    }

    /// Vertices with no in-edges.
    pub fn sources(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.pred
            .iter()
            .filter(|(_, inc)| inc.is_empty())
            .map(|(&v, _)| v)
    }
}

/// Unweighted hop distances from `root`. Every vertex of `g` appears in the
/// result; unreachable ones map to `None`. Direction is ignored for
/// undirected graphs.
pub fn bfs_distances(
    g: &Graph,
    root: Vertex,
    dir: Direction,
) -> Result<BTreeMap<Vertex, Option<usize>>> {
    g.check(root)?;
    let mut dist: BTreeMap<Vertex, Option<usize>> = g.vertices().map(|v| (v, None)).collect();
    dist.insert(root, Some(0));
    let mut queue = VecDeque::from([(root, 0usize)]);
    while let Some((u, d)) = queue.pop_front() {
        for w in g.neighbors_in(u, dir) {
            let slot = dist.get_mut(&w).expect("neighbor is a vertex");
            if slot.is_none() {
                *slot = Some(d + 1);
                queue.push_back((w, d + 1));
            }
        }
    }
    Ok(dist)
}

/// Kahn's algorithm, always emitting the smallest available label first.
pub fn topological_order(g: &Graph) -> Result<Vec<Vertex>> {
    if !g.is_directed() {
        return Err(Error::Precondition(
            "topological order requires a directed graph".into(),
        ));
    }
    let mut indeg: BTreeMap<Vertex, usize> = g.vertices().map(|v| (v, g.in_degree(v))).collect();
    let mut ready: BinaryHeap<Reverse<Vertex>> = indeg
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&v, _)| Reverse(v))
        .collect();
    let mut order = Vec::with_capacity(g.vertex_count());
    while let Some(Reverse(u)) = ready.pop() {
        order.push(u);
        for w in g.out_neighbors(u) {
            let d = indeg.get_mut(&w).expect("neighbor is a vertex");
            *d -= 1;
            if *d == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    if order.len() == g.vertex_count() {
        Ok(order)
    } else {
        Err(Error::CyclicGraph)
    }
}

/// Vertices reachable from `root` along paths that never touch a vertex of
/// `blocked`. The root itself is always included.
pub fn reachable_set(
    g: &Graph,
    root: Vertex,
    dir: Direction,
    blocked: &BTreeSet<Vertex>,
) -> Result<BTreeSet<Vertex>> {
    g.check(root)?;
    if blocked.contains(&root) {
        return Err(Error::Precondition(format!(
            "traversal root {root} is blocked"
        )));
    }
    let mut seen = BTreeSet::from([root]);
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for w in g.neighbors_in(u, dir) {
            if !blocked.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    Ok(seen)
}

/// All directed s-t paths of a DAG in lexicographic order of their label
/// sequences. Fails with `TooManyPaths` as soon as more than `limit` paths
/// exist.
pub fn enumerate_st_paths(g: &Graph, s: Vertex, t: Vertex, limit: usize) -> Result<Vec<Path>> {
    g.check(s)?;
    g.check(t)?;
    topological_order(g)?;
    let useful = reachable_set(g, t, Direction::Backward, &BTreeSet::new())?;
    enumerate_paths_by(s, t, limit, &useful, |v| g.out_neighbors(v).collect())
}

/// All shortest s-t paths (undirected, or directed along edge direction), in
/// lexicographic order.
pub fn enumerate_shortest_paths(
    g: &Graph,
    s: Vertex,
    t: Vertex,
    limit: usize,
) -> Result<Vec<Path>> {
    let from_s = bfs_distances(g, s, Direction::Forward)?;
    let to_t = bfs_distances(g, t, Direction::Backward)?;
    let Some(total) = from_s[&t] else {
        return Err(Error::NoPath { s, t });
    };
    let on_shortest: BTreeSet<Vertex> = g
        .vertices()
        .filter(|v| matches!((from_s[v], to_t[v]), (Some(a), Some(b)) if a + b == total))
        .collect();
    enumerate_paths_by(s, t, limit, &on_shortest, |v| {
        let next = from_s[&v].expect("on a shortest path") + 1;
        g.out_neighbors(v)
            .filter(|w| from_s[w] == Some(next))
            .collect()
    })
}

fn enumerate_paths_by<F>(
    s: Vertex,
    t: Vertex,
    limit: usize,
    useful: &BTreeSet<Vertex>,
    successors: F,
) -> Result<Vec<Path>>
where
    F: Fn(Vertex) -> Vec<Vertex>,
{
    let mut paths = Vec::new();
    if !useful.contains(&s) {
        return Ok(paths);
    }
    if s == t {
        paths.push(vec![s]);
        return Ok(paths);
    }
    // Iterative DFS; each frame holds the remaining successors of a path vertex.
    let mut path = vec![s];
    let mut frames: Vec<std::vec::IntoIter<Vertex>> = vec![successors(s).into_iter()];
    while let Some(frame) = frames.last_mut() {
        match frame.find(|w| useful.contains(w)) {
            Some(w) if w == t => {
                if paths.len() == limit {
                    return Err(Error::TooManyPaths { limit });
                }
                let mut p = path.clone();
                p.push(t);
                paths.push(p);
            }
            Some(w) => {
                path.push(w);
                frames.push(successors(w).into_iter());
            }
            None => {
                frames.pop();
                path.pop();
            }
        }
    }
    Ok(paths)
}

/// Replaces edge `(u, w)` by a path with `times` fresh internal vertices.
/// Returns the new graph and the allocated labels in path order.
pub fn subdivide_edge(g: &Graph, edge: Edge, times: usize) -> Result<(Graph, Vec<Vertex>)> {
    let (u, w) = edge;
    if !g.has_edge(u, w) {
        return Err(Error::UnknownEdge(u, w));
    }
    let mut out = g.clone();
    if times == 0 {
        return Ok((out, Vec::new()));
    }
    out.remove_edge(u, w)?;
    let mut fresh = Vec::with_capacity(times);
    let mut prev = u;
    for _ in 0..times {
        let v = out.add_fresh_vertex();
        out.add_edge(prev, v)?;
        fresh.push(v);
        prev = v;
    }
    out.add_edge(prev, w)?;
    Ok((out, fresh))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn diamond(directed: bool) -> Graph {
        Graph::from_edges(directed, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn bfs_on_single_edge_and_diamond() {
        let g = Graph::from_edges(false, &[(0, 1)]).unwrap();
        let d = bfs_distances(&g, 0, Direction::Forward).unwrap();
        assert_eq!(d, BTreeMap::from([(0, Some(0)), (1, Some(1))]));

        let d = bfs_distances(&diamond(false), 0, Direction::Forward).unwrap();
        assert_eq!(
            d,
            BTreeMap::from([(0, Some(0)), (1, Some(1)), (2, Some(1)), (3, Some(2))])
        );
    }

    #[test]
    fn bfs_flags_unreachable_and_rejects_unknown_root() {
        let mut g = diamond(true);
        g.add_vertex(9);
        let d = bfs_distances(&g, 0, Direction::Forward).unwrap();
        assert_eq!(d[&9], None);
        let back = bfs_distances(&g, 3, Direction::Backward).unwrap();
        assert_eq!(back[&0], Some(2));
        assert_eq!(
            bfs_distances(&g, 42, Direction::Forward),
            Err(Error::UnknownVertex(42))
        );
    }

    #[test]
    fn topological_order_cases() {
        let g = Graph::from_edges(true, &[(0, 1)]).unwrap();
        assert_eq!(topological_order(&g).unwrap(), vec![0, 1]);

        // s=0, a=1, b=2, t=3
        let g = Graph::from_edges(true, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(topological_order(&g).unwrap(), vec![0, 1, 2, 3]);

        let g = Graph::from_edges(true, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(topological_order(&g), Err(Error::CyclicGraph));
    }

    #[test]
    fn reachable_with_blocked_set() {
        let g = diamond(true);
        let r = reachable_set(&g, 0, Direction::Forward, &BTreeSet::from([1, 3])).unwrap();
        assert_eq!(r, BTreeSet::from([0, 2]));
        let r = reachable_set(&g, 3, Direction::Forward, &BTreeSet::new()).unwrap();
        assert_eq!(r, BTreeSet::from([3]));
        assert!(reachable_set(&g, 1, Direction::Forward, &BTreeSet::from([1])).is_err());
    }

    #[test]
    fn path_enumeration_cases() {
        let g = Graph::from_edges(true, &[(0, 1)]).unwrap();
        assert_eq!(enumerate_st_paths(&g, 0, 1, 10).unwrap(), vec![vec![0, 1]]);

        assert_eq!(
            enumerate_st_paths(&diamond(true), 0, 3, 10).unwrap().len(),
            2
        );

        let g = Graph::from_edges(true, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(
            enumerate_st_paths(&g, 0, 3, 3).unwrap(),
            vec![vec![0, 1, 2, 3], vec![0, 1, 3], vec![0, 2, 3]]
        );
        assert_eq!(
            enumerate_st_paths(&g, 0, 3, 2),
            Err(Error::TooManyPaths { limit: 2 })
        );
    }

    #[test]
    fn shortest_path_enumeration_ignores_detours() {
        // s=0 a=1 t=2, detour 0-3-4-2
        let g = Graph::from_edges(false, &[(0, 1), (1, 2), (0, 3), (3, 4), (4, 2)]).unwrap();
        assert_eq!(
            enumerate_shortest_paths(&g, 0, 2, 10).unwrap(),
            vec![vec![0, 1, 2]]
        );
        let mut h = g.clone();
        h.add_vertex(7);
        assert_eq!(
            enumerate_shortest_paths(&h, 0, 7, 10),
            Err(Error::NoPath { s: 0, t: 7 })
        );
    }

    #[test]
    fn subdivision() {
        let g = Graph::from_edges(true, &[(0, 1)]).unwrap();
        let (h, fresh) = subdivide_edge(&g, (0, 1), 1).unwrap();
        assert_eq!(fresh, vec![2]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 2), (2, 1)]);

        let (h, fresh) = subdivide_edge(&g, (0, 1), 0).unwrap();
        assert!(fresh.is_empty());
        assert_eq!(h, g);

        let (h, fresh) = subdivide_edge(&diamond(true), (1, 3), 2).unwrap();
        assert_eq!(fresh, vec![4, 5]);
        assert!(h.has_edge(1, 4) && h.has_edge(4, 5) && h.has_edge(5, 3) && !h.has_edge(1, 3));
        assert_eq!(enumerate_st_paths(&h, 0, 3, 10).unwrap().len(), 2);

        assert_eq!(
            subdivide_edge(&g, (1, 0), 1).unwrap_err(),
            Error::UnknownEdge(1, 0)
        );
    }

    #[test]
    fn simple_graph_invariants() {
        let mut g = diamond(false);
        assert_eq!(g.add_edge(1, 0), Err(Error::DuplicateEdge(1, 0)));
        assert_eq!(g.add_edge(2, 2), Err(Error::SelfLoop(2)));
        assert_eq!(g.add_edge(2, 8), Err(Error::UnknownVertex(8)));
        let before = g.edge_count();
        let deg = g.degree(0);
        g.remove_vertex(0).unwrap();
        assert_eq!(g.edge_count(), before - deg);
        assert_eq!(g.vertices().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(g.fresh_label(), 4);
    }
}
