//! Independent reference implementations used by the integration tests and
//! the acceptance suite. None of these call into the library's algorithms;
//! they work from plain adjacency lists.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use tracking_core::generate::{generate_instance, GenerateParams};
use tracking_core::{Graph, Instance, Mode, Vertex};

pub type Adj = BTreeMap<Vertex, BTreeSet<Vertex>>;

/// Successor lists (both directions for undirected graphs).
pub fn adjacency(g: &Graph) -> Adj {
    let mut adj: Adj = g.vertices().map(|v| (v, BTreeSet::new())).collect();
    for (u, v) in g.edges() {
        adj.get_mut(&u).unwrap().insert(v);
        if !g.is_directed() {
            adj.get_mut(&v).unwrap().insert(u);
        }
    }
    adj
}

/// Number of directed s-t paths by memoised recursion.
pub fn dp_path_count(g: &Graph, s: Vertex, t: Vertex) -> u128 {
    fn go(adj: &Adj, v: Vertex, t: Vertex, memo: &mut BTreeMap<Vertex, u128>) -> u128 {
        if v == t {
            return 1;
        }
        if let Some(&c) = memo.get(&v) {
            return c;
        }
        let c = adj[&v].iter().map(|&w| go(adj, w, t, memo)).sum();
        memo.insert(v, c);
        c
    }
    go(&adjacency(g), s, t, &mut BTreeMap::new())
}

/// Every simple s-t path, by plain backtracking (works for both graph kinds).
pub fn all_simple_paths(g: &Graph, s: Vertex, t: Vertex) -> Vec<Vec<Vertex>> {
    fn go(
        adj: &Adj,
        path: &mut Vec<Vertex>,
        on: &mut BTreeSet<Vertex>,
        t: Vertex,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        for &w in &adj[&v] {
            if on.insert(w) {
                path.push(w);
                go(adj, path, on, t, out);
                path.pop();
                on.remove(&w);
            }
        }
    }
    let mut out = Vec::new();
    go(
        &adjacency(g),
        &mut vec![s],
        &mut BTreeSet::from([s]),
        t,
        &mut out,
    );
    out
}

/// Shortest s-t paths, by filtering all simple paths by length.
pub fn brute_shortest_paths(g: &Graph, s: Vertex, t: Vertex) -> Vec<Vec<Vertex>> {
    let all = all_simple_paths(g, s, t);
    let Some(best) = all.iter().map(Vec::len).min() else {
        return all;
    };
    all.into_iter().filter(|p| p.len() == best).collect()
}

/// Length of a shortest u-v path, from exhaustive enumeration.
pub fn brute_distance(g: &Graph, u: Vertex, v: Vertex) -> Option<usize> {
    all_simple_paths(g, u, v).iter().map(|p| p.len() - 1).min()
}

/// The tracked path family of an instance, computed from scratch.
pub fn tracked_paths(inst: &Instance) -> Vec<Vec<Vertex>> {
    match inst.mode {
        Mode::Tpdag => all_simple_paths(&inst.graph, inst.s, inst.t),
        Mode::Tsp => brute_shortest_paths(&inst.graph, inst.s, inst.t),
    }
}

pub fn signature(path: &[Vertex], trackers: &BTreeSet<Vertex>) -> BTreeSet<Vertex> {
    path.iter()
        .copied()
        .filter(|v| trackers.contains(v))
        .collect()
}

/// First pair of distinct paths (by index) with equal signatures.
pub fn all_pairs_collision(
    paths: &[Vec<Vertex>],
    trackers: &BTreeSet<Vertex>,
) -> Option<(usize, usize)> {
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            if signature(&paths[i], trackers) == signature(&paths[j], trackers) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Minimum tracking-set size over all subsets of the vertex set, smallest
/// first. Only for small graphs.
pub fn brute_opt(inst: &Instance) -> usize {
    brute_opt_capped(inst, usize::MAX).expect("the full vertex set always tracks")
}

pub fn brute_opt_capped(inst: &Instance, cap: usize) -> Option<usize> {
    let paths = tracked_paths(inst);
    let vs: Vec<Vertex> = inst.graph.vertices().collect();
    let n = vs.len();
    // bitmask signatures
    let masks: Vec<u64> = paths
        .iter()
        .map(|p| {
            p.iter()
                .map(|v| 1u64 << vs.binary_search(v).unwrap())
                .fold(0, |a, b| a | b)
        })
        .collect();
    assert!(n <= 63, "oracle is for small graphs");
    let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    for set in 0u64..(1 << n) {
        by_size[set.count_ones() as usize].push(set);
    }
    for (size, sets) in by_size
        .iter()
        .enumerate()
        .take(cap.saturating_add(1).min(n + 1))
    {
        for &set in sets {
            let mut seen = HashSet::new();
            if masks.iter().all(|m| seen.insert(m & set)) {
                return Some(size);
            }
        }
    }
    None
}

/// Planarity by searching for a Kuratowski subdivision: delete edges, drop
/// vertices of degree at most one and smooth degree-two vertices until the
/// graph is exactly K5 or K3,3.
pub fn kuratowski_planar(g: &Graph) -> bool {
    let edges: BTreeSet<(Vertex, Vertex)> = g.to_undirected().edges().collect();
    let mut seen = HashSet::new();
    !contains_kuratowski(simplify(edges), &mut seen)
}

fn degrees(edges: &BTreeSet<(Vertex, Vertex)>) -> BTreeMap<Vertex, usize> {
    let mut d = BTreeMap::new();
    for &(u, v) in edges {
        *d.entry(u).or_insert(0) += 1;
        *d.entry(v).or_insert(0) += 1;
    }
    d
}

/// Removes degree-one vertices and smooths degree-two vertices until neither
/// exists. Parallel edges created by smoothing are dropped; they never
/// matter for planarity.
fn simplify(mut edges: BTreeSet<(Vertex, Vertex)>) -> BTreeSet<(Vertex, Vertex)> {
    loop {
        let d = degrees(&edges);
        let Some((&v, &dv)) = d.iter().find(|(_, &dv)| dv <= 2) else {
            return edges;
        };
        let incident: Vec<_> = edges
            .iter()
            .copied()
            .filter(|&(a, b)| a == v || b == v)
            .collect();
        for e in &incident {
            edges.remove(e);
        }
        if dv == 2 {
            let other = |(a, b): (Vertex, Vertex)| if a == v { b } else { a };
            let (x, y) = (other(incident[0]), other(incident[1]));
            edges.insert((x.min(y), x.max(y)));
        }
    }
}

fn is_k5_or_k33(edges: &BTreeSet<(Vertex, Vertex)>) -> bool {
    let d = degrees(edges);
    let n = d.len();
    if n == 5 && edges.len() == 10 {
        return true;
    }
    if n == 6 && edges.len() == 9 && d.values().all(|&x| x == 3) {
        // bipartite with sides of three: 2-colour it
        let vs: Vec<Vertex> = d.keys().copied().collect();
        let side: BTreeSet<Vertex> = std::iter::once(vs[0])
            .chain(
                vs.iter()
                    .copied()
                    .filter(|&w| !edges.contains(&(vs[0].min(w), vs[0].max(w))) && w != vs[0]),
            )
            .collect();
        return side.len() == 3
            && edges
                .iter()
                .all(|(a, b)| side.contains(a) != side.contains(b));
    }
    false
}

fn contains_kuratowski(
    edges: BTreeSet<(Vertex, Vertex)>,
    seen: &mut HashSet<BTreeSet<(Vertex, Vertex)>>,
) -> bool {
    if edges.len() < 9 || !seen.insert(edges.clone()) {
        return false;
    }
    if is_k5_or_k33(&edges) {
        return true;
    }
    let list: Vec<_> = edges.iter().copied().collect();
    list.into_iter().any(|e| {
        let mut fewer = edges.clone();
        fewer.remove(&e);
        contains_kuratowski(simplify(fewer), seen)
    })
}

/// Largest face count over all rotation systems of a connected graph (its
/// face count when embedded on the sphere, if planar). Exponential; keep the
/// graph tiny.
pub fn max_faces_over_rotations(g: &Graph) -> usize {
    let g = g.to_undirected();
    let adj = adjacency(&g);
    let vs: Vec<Vertex> = adj.keys().copied().collect();
    // every cyclic order of each neighbour list, fixing the first entry
    let options: Vec<Vec<Vec<Vertex>>> = vs
        .iter()
        .map(|v| {
            let ns: Vec<Vertex> = adj[v].iter().copied().collect();
            if ns.len() <= 2 {
                return vec![ns];
            }
            let (first, rest) = ns.split_first().unwrap();
            permutations(rest)
                .into_iter()
                .map(|p| std::iter::once(*first).chain(p).collect())
                .collect()
        })
        .collect();
    let mut choice = vec![0usize; vs.len()];
    let mut best = 0;
    loop {
        let rot: BTreeMap<Vertex, &Vec<Vertex>> = vs
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, &options[i][choice[i]]))
            .collect();
        best = best.max(trace_faces(&rot));
        // odometer
        let mut i = 0;
        loop {
            if i == vs.len() {
                return best;
            }
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn permutations(items: &[Vertex]) -> Vec<Vec<Vertex>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Number of orbits of darts under "arrive at v via (u, v), leave along the
/// successor of u in v's rotation".
fn trace_faces(rot: &BTreeMap<Vertex, &Vec<Vertex>>) -> usize {
    let mut used = HashSet::new();
    let mut faces = 0;
    for (&u, ns) in rot {
        for &v in ns.iter() {
            if used.contains(&(u, v)) {
                continue;
            }
            faces += 1;
            let (mut a, mut b) = (u, v);
            while used.insert((a, b)) {
                let around = rot[&b];
                let i = around.iter().position(|&x| x == a).unwrap();
                let next = around[(i + 1) % around.len()];
                (a, b) = (b, next);
            }
        }
    }
    faces
}

pub fn generated(
    seed: u64,
    n: usize,
    density: f64,
    mode: Mode,
    planar: bool,
    k: usize,
) -> Instance {
    generate_instance(&GenerateParams {
        seed,
        n,
        density,
        mode,
        planar,
        k,
    })
    .expect("valid generator parameters")
}

/// A chain of `d` diamonds s -> {a, b} -> j -> ... sharing junctions; every
/// diamond needs its own tracker.
pub fn diamond_chain(d: usize, k: usize) -> Instance {
    let mut edges = Vec::new();
    for i in 0..d {
        let j = 3 * i;
        edges.extend([(j, j + 1), (j, j + 2), (j + 1, j + 3), (j + 2, j + 3)]);
    }
    Instance::new(
        Graph::from_edges(true, &edges).unwrap(),
        0,
        3 * d,
        k,
        Mode::Tpdag,
    )
    .unwrap()
}
