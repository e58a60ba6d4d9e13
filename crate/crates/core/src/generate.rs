//! Seeded random instances for tests, benchmarks and the `generate` command.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{reachable_set, Direction, Graph, Vertex};
use crate::instance::{Instance, Mode};
use crate::planar::check_planarity;

#[derive(Clone, Debug, PartialEq)]
pub struct GenerateParams {
    pub seed: u64,
    pub n: usize,
    /// Probability of keeping each optional edge.
    pub density: f64,
    pub mode: Mode,
    pub planar: bool,
    pub k: usize,
}

/// Deterministic for fixed parameters. DAG instances are pruned so every
/// vertex lies on an s-t path (and at least one such path exists); labels are
/// compacted to `[0, n')`.
pub fn generate_instance(params: &GenerateParams) -> Result<Instance> {
    if params.n < 2 {
        return Err(Error::InvalidParameters(
            "need at least two vertices".into(),
        ));
    }
    if !(0.0..=1.0).contains(&params.density) {
        return Err(Error::InvalidParameters(format!(
            "density {} is outside [0, 1]",
            params.density
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let inst = match (params.mode, params.planar) {
        (Mode::Tpdag, false) => random_dag(&mut rng, params),
        (Mode::Tsp, false) => random_connected(&mut rng, params),
        (mode, true) => random_planar(&mut rng, params, mode),
    }?;
    if params.planar && !check_planarity(&inst.graph) {
        return Err(Error::InternalInconsistency(
            "planar generator produced a nonplanar graph".into(),
        ));
    }
    Ok(inst)
}

fn random_dag(rng: &mut ChaCha8Rng, p: &GenerateParams) -> Result<Instance> {
    let mut order: Vec<Vertex> = (0..p.n).collect();
    order.shuffle(rng);
    let mut g = Graph::directed();
    for &v in &order {
        g.add_vertex(v);
    }
    // a monotone backbone guarantees an s-t path
    let mut prev = order[0];
    for &v in &order[1..p.n - 1] {
        if rng.gen_bool(0.5) {
            g.add_edge(prev, v)?;
            prev = v;
        }
    }
    g.add_edge(prev, order[p.n - 1])?;
    for i in 0..p.n {
        for j in i + 1..p.n {
            let (u, v) = (order[i], order[j]);
            if !g.has_edge(u, v) && rng.gen_bool(p.density) {
                g.add_edge(u, v)?;
            }
        }
    }
    finish_dag(g, order[0], order[p.n - 1], p.k)
}

fn random_connected(rng: &mut ChaCha8Rng, p: &GenerateParams) -> Result<Instance> {
    let mut order: Vec<Vertex> = (0..p.n).collect();
    order.shuffle(rng);
    let mut g = Graph::undirected();
    for v in 0..p.n {
        g.add_vertex(v);
    }
    for i in 1..p.n {
        let j = rng.gen_range(0..i);
        g.add_edge(order[i], order[j])?;
    }
    for u in 0..p.n {
        for v in u + 1..p.n {
            if !g.has_edge(u, v) && rng.gen_bool(p.density) {
                g.add_edge(u, v)?;
            }
        }
    }
    let (s, t) = distinct_pair(rng, p.n);
    Instance::new(g, s, t, p.k, Mode::Tsp)
}

fn distinct_pair(rng: &mut ChaCha8Rng, n: usize) -> (Vertex, Vertex) {
    let s = rng.gen_range(0..n);
    let t = (s + rng.gen_range(1..n)) % n;
    (s, t)
}

/// A random maximal planar graph: stacked triangulation followed by random
/// edge flips.
fn triangulation(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut g = Graph::undirected();
    for v in 0..n {
        g.add_vertex(v);
    }
    if n < 3 {
        g.add_edge(0, 1).expect("fresh edge");
        return g;
    }
    for (u, v) in [(0, 1), (1, 2), (0, 2)] {
        g.add_edge(u, v).expect("fresh edge");
    }
    let mut faces: Vec<[Vertex; 3]> = vec![[0, 1, 2], [0, 1, 2]];
    for v in 3..n {
        let f = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[f];
        faces[f] = [a, b, v];
        faces.push([b, c, v]);
        faces.push([a, c, v]);
        for w in [a, b, c] {
            g.add_edge(v, w).expect("fresh edge");
        }
    }
    for _ in 0..n {
        let edges: Vec<_> = g.edges().collect();
        let (a, b) = edges[rng.gen_range(0..edges.len())];
        let sides: Vec<usize> = (0..faces.len())
            .filter(|&i| faces[i].contains(&a) && faces[i].contains(&b))
            .collect();
        let [f1, f2] = sides[..] else { continue };
        let third = |f: [Vertex; 3]| *f.iter().find(|&&x| x != a && x != b).expect("triangle");
        let (c, d) = (third(faces[f1]), third(faces[f2]));
        if c == d || g.has_edge(c, d) || g.degree(a) <= 3 || g.degree(b) <= 3 {
            continue;
        }
        g.remove_edge(a, b).expect("edge exists");
        g.add_edge(c, d).expect("checked absent");
        faces[f1] = [a, c, d];
        faces[f2] = [b, c, d];
    }
    g
}

/// BFS-tree edges of a connected graph from `root`, visiting neighbours in
/// random order.
fn random_spanning_tree(
    rng: &mut ChaCha8Rng,
    g: &Graph,
    root: Vertex,
) -> BTreeSet<(Vertex, Vertex)> {
    let mut tree = BTreeSet::new();
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let mut next: Vec<Vertex> = g.out_neighbors(u).collect();
        next.shuffle(rng);
        for w in next {
            if seen.insert(w) {
                tree.insert((u.min(w), u.max(w)));
                queue.push_back(w);
            }
        }
    }
    tree
}

fn random_planar(rng: &mut ChaCha8Rng, p: &GenerateParams, mode: Mode) -> Result<Instance> {
    let full = triangulation(rng, p.n);
    let (s, t) = distinct_pair(rng, p.n);
    let tree = random_spanning_tree(rng, &full, s);
    let mut g = Graph::undirected();
    for v in full.vertices() {
        g.add_vertex(v);
    }
    for (u, v) in full.edges() {
        if tree.contains(&(u, v)) || rng.gen_bool(p.density) {
            g.add_edge(u, v)?;
        }
    }
    match mode {
        Mode::Tsp => Instance::new(g, s, t, p.k, Mode::Tsp),
        Mode::Tpdag => {
            // orient along d(s, v) - d(v, t) with random tie-breaking: a total
            // order with s first and t last, so the result is acyclic and
            // most vertices have both a lower and a higher neighbour
            let ds = crate::graph::bfs_distances(&g, s, Direction::Forward)?;
            // a farthest vertex as destination gives longer, richer paths
            let far = ds.values().flatten().max().copied().unwrap_or(0);
            let ends: Vec<Vertex> = g.vertices().filter(|v| ds[v] == Some(far)).collect();
            let t = *ends.choose(rng).expect("s has a farthest vertex");
            let dt = crate::graph::bfs_distances(&g, t, Direction::Forward)?;
            let jitter: BTreeMap<Vertex, u32> = g.vertices().map(|v| (v, rng.gen())).collect();
            let rank = |v: Vertex| {
                let (a, b) = (ds[&v].expect("connected"), dt[&v].expect("connected"));
                (a as i64 - b as i64, jitter[&v], v)
            };
            let mut dag = Graph::directed();
            for v in g.vertices() {
                dag.add_vertex(v);
            }
            for (u, v) in g.edges() {
                if rank(u) < rank(v) {
                    dag.add_edge(u, v)?;
                } else {
                    dag.add_edge(v, u)?;
                }
            }
            finish_dag(dag, s, t, p.k)
        }
    }
}

fn finish_dag(g: Graph, s: Vertex, t: Vertex, k: usize) -> Result<Instance> {
    let none = BTreeSet::new();
    let fwd = reachable_set(&g, s, Direction::Forward, &none)?;
    let back = reachable_set(&g, t, Direction::Backward, &none)?;
    let keep: BTreeSet<Vertex> = fwd.intersection(&back).copied().collect();
    let pruned = g.induced(&keep);
    let map: BTreeMap<Vertex, Vertex> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges: Vec<_> = pruned.edges().map(|(u, v)| (map[&u], map[&v])).collect();
    let mut out = Graph::directed();
    for i in 0..keep.len() {
        out.add_vertex(i);
    }
    for (u, v) in edges {
        out.add_edge(u, v)?;
    }
    Instance::new(out, map[&s], map[&t], k, Mode::Tpdag)
}
