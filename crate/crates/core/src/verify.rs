//! Tracking-set verification by exhaustive path enumeration, and the
//! brute-force optimum used as an independent oracle.
//!
//! A set T tracks a family of paths when the signatures V(P) ∩ T are
//! pairwise distinct. Paths are enumerated once per instance; each candidate
//! set then costs one pass over the family.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{enumerate_shortest_paths, enumerate_st_paths, Path, Vertex};
use crate::instance::{Instance, Mode};
use crate::preprocess::shortest_to_dag;

/// Default cap on enumerated paths.
pub const DEFAULT_PATH_LIMIT: usize = 100_000;

/// An enumerated path family with per-path membership over a dense vertex
/// index.
#[derive(Clone, Debug)]
pub struct PathFamily {
    paths: Vec<Path>,
    index: BTreeMap<Vertex, usize>,
    members: Vec<Vec<bool>>,
}

impl PathFamily {
    pub fn new(paths: Vec<Path>) -> Self {
        let index: BTreeMap<Vertex, usize> = paths
            .iter()
            .flatten()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let members = paths
            .iter()
            .map(|p| {
                let mut row = vec![false; index.len()];
                for v in p {
                    row[index[v]] = true;
                }
                row
            })
            .collect();
        PathFamily {
            paths,
            index,
            members,
        }
    }

    /// Directed s-t paths of a DAG instance.
    pub fn of_dag(inst: &Instance, limit: usize) -> Result<Self> {
        Ok(Self::new(enumerate_st_paths(
            &inst.graph,
            inst.s,
            inst.t,
            limit,
        )?))
    }

    /// Shortest s-t paths; empty when s and t are disconnected.
    pub fn of_shortest(inst: &Instance, limit: usize) -> Result<Self> {
        match enumerate_shortest_paths(&inst.graph, inst.s, inst.t, limit) {
            Ok(paths) => Ok(Self::new(paths)),
            Err(Error::NoPath { .. }) => Ok(Self::new(Vec::new())),
            Err(e) => Err(e),
        }
    }

    /// The family the instance's problem quantifies over.
    pub fn of_instance(inst: &Instance, limit: usize) -> Result<Self> {
        match inst.mode {
            Mode::Tpdag => Self::of_dag(inst, limit),
            Mode::Tsp => Self::of_shortest(inst, limit),
        }
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Vertices on at least one path but not on all of them; trackers
    /// elsewhere never split a pair of paths.
    pub fn candidates(&self) -> Vec<Vertex> {
        self.index
            .iter()
            .filter(|(_, &i)| !self.members.iter().all(|row| row[i]))
            .map(|(&v, _)| v)
            .collect()
    }

    fn dense(&self, trackers: impl IntoIterator<Item = Vertex>) -> Vec<usize> {
        trackers
            .into_iter()
            .filter_map(|v| self.index.get(&v).copied())
            .collect()
    }

    /// The first pair (i, j), i < j, of paths with equal signature, in
    /// enumeration order of j.
    fn collision(&self, dense: &[usize]) -> Option<(usize, usize)> {
        if dense.len() <= 64 {
            let mut seen: HashMap<u64, usize> = HashMap::with_capacity(self.paths.len());
            for (j, row) in self.members.iter().enumerate() {
                let sig = dense
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| row[d])
                    .fold(0u64, |acc, (bit, _)| acc | 1 << bit);
                if let Some(&i) = seen.get(&sig) {
                    return Some((i, j));
                }
                seen.insert(sig, j);
            }
        } else {
            let mut seen: HashMap<Vec<bool>, usize> = HashMap::with_capacity(self.paths.len());
            for (j, row) in self.members.iter().enumerate() {
                let sig: Vec<bool> = dense.iter().map(|&d| row[d]).collect();
                if let Some(&i) = seen.get(&sig) {
                    return Some((i, j));
                }
                seen.insert(sig, j);
            }
        }
        None
    }

    pub fn tracks(&self, trackers: &BTreeSet<Vertex>) -> bool {
        self.collision(&self.dense(trackers.iter().copied()))
            .is_none()
    }

    pub fn report(&self, trackers: &BTreeSet<Vertex>) -> VerificationReport {
        let counterexample = self
            .collision(&self.dense(trackers.iter().copied()))
            .map(|(i, j)| (self.paths[i].clone(), self.paths[j].clone()));
        VerificationReport {
            valid: counterexample.is_none(),
            counterexample,
            paths_examined: self.paths.len(),
            vacuous: self.paths.is_empty(),
        }
    }

    /// Smallest tracking set drawn from `candidates`, searching sizes
    /// `0..=max_size` in lexicographic order.
    pub fn smallest_tracking_subset(
        &self,
        candidates: &[Vertex],
        max_size: usize,
    ) -> Option<BTreeSet<Vertex>> {
        let dense = self.dense(candidates.iter().copied());
        for size in 0..=max_size.min(dense.len()) {
            for combo in (0..dense.len()).combinations(size) {
                let chosen: Vec<usize> = combo.iter().map(|&c| dense[c]).collect();
                if self.collision(&chosen).is_none() {
                    return Some(combo.iter().map(|&c| candidates[c]).collect());
                }
            }
        }
        None
    }

    /// Like [`smallest_tracking_subset`](Self::smallest_tracking_subset), but
    /// candidate subsets of each size are checked in parallel chunks; the
    /// first success in enumeration order wins.
    pub fn smallest_tracking_subset_par(
        &self,
        candidates: &[Vertex],
        max_size: usize,
    ) -> Option<BTreeSet<Vertex>> {
        use rayon::prelude::*;
        const CHUNK: usize = 4096;
        let dense = self.dense(candidates.iter().copied());
        for size in 0..=max_size.min(dense.len()) {
            let combos = (0..dense.len()).combinations(size);
            for chunk in &combos.chunks(CHUNK) {
                let chunk: Vec<Vec<usize>> = chunk.collect();
                let hit = chunk.par_iter().find_first(|combo| {
                    let chosen: Vec<usize> = combo.iter().map(|&c| dense[c]).collect();
                    self.collision(&chosen).is_none()
                });
                if let Some(combo) = hit {
                    return Some(combo.iter().map(|&c| candidates[c]).collect());
                }
            }
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub valid: bool,
    /// Two distinct paths with the same signature.
    pub counterexample: Option<(Path, Path)>,
    pub paths_examined: usize,
    /// No path exists at all, so every set is trivially tracking.
    pub vacuous: bool,
}

fn check_members(inst: &Instance, trackers: &BTreeSet<Vertex>) -> Result<()> {
    trackers.iter().try_for_each(|&v| inst.graph.check(v))
}

pub fn is_tracking_set_dag(
    inst: &Instance,
    trackers: &BTreeSet<Vertex>,
    limit: usize,
) -> Result<VerificationReport> {
    if inst.mode != Mode::Tpdag {
        return Err(Error::Precondition("expected a tpdag instance".into()));
    }
    check_members(inst, trackers)?;
    Ok(PathFamily::of_dag(inst, limit)?.report(trackers))
}

/// Prunes and orients the instance, then verifies on the resulting DAG.
/// Trackers on pruned vertices have no effect.
pub fn is_tracking_set_shortest(
    inst: &Instance,
    trackers: &BTreeSet<Vertex>,
    limit: usize,
) -> Result<VerificationReport> {
    if inst.mode != Mode::Tsp {
        return Err(Error::Precondition("expected a tsp instance".into()));
    }
    check_members(inst, trackers)?;
    let dag = match shortest_to_dag(inst) {
        Ok((dag, _)) => dag,
        Err(Error::NoPath { .. }) => {
            return Ok(VerificationReport {
                valid: true,
                counterexample: None,
                paths_examined: 0,
                vacuous: true,
            })
        }
        Err(e) => return Err(e),
    };
    let kept: BTreeSet<Vertex> = trackers
        .iter()
        .copied()
        .filter(|&v| dag.graph.contains(v))
        .collect();
    is_tracking_set_dag(&dag, &kept, limit)
}

/// Verifies with the verifier matching the instance's mode.
pub fn verify(
    inst: &Instance,
    trackers: &BTreeSet<Vertex>,
    limit: usize,
) -> Result<VerificationReport> {
    match inst.mode {
        Mode::Tpdag => is_tracking_set_dag(inst, trackers, limit),
        Mode::Tsp => is_tracking_set_shortest(inst, trackers, limit),
    }
}

/// Minimum size of a tracking set, by trying all subsets in order of size.
pub fn brute_force_opt(inst: &Instance, limit: usize) -> Result<usize> {
    let family = PathFamily::of_instance(inst, limit)?;
    let candidates = family.candidates();
    let best = family
        .smallest_tracking_subset(&candidates, candidates.len())
        .ok_or_else(|| Error::InternalInconsistency("full vertex set does not track".into()))?;
    Ok(best.len())
}

/// Minimum tracking-set size if it is at most `cap`, otherwise `None`.
pub fn brute_force_opt_capped(inst: &Instance, cap: usize, limit: usize) -> Result<Option<usize>> {
    let family = PathFamily::of_instance(inst, limit)?;
    let candidates = family.candidates();
    Ok(family
        .smallest_tracking_subset(&candidates, cap)
        .map(|t| t.len()))
}
