//! Transformation from tracking paths in a DAG to tracking shortest paths:
//! layer every vertex by longest distance from s, stretch each edge across
//! the layers it skips, then forget directions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{subdivide_edge, topological_order, Edge, Graph, Vertex};
use crate::instance::{Instance, Mode};

/// L(v): longest-path layer index from the source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerAssignment {
    pub layers: BTreeMap<Vertex, usize>,
}

impl LayerAssignment {
    pub fn of(&self, v: Vertex) -> usize {
        self.layers[&v]
    }

    pub fn max_layer(&self) -> usize {
        self.layers.values().copied().max().unwrap_or(0)
    }
}

/// Where a vertex of a transformed instance came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    Original {
        vertex: Vertex,
    },
    /// The `index`-th vertex (from the tail) inserted into `edge`.
    Subdivision {
        edge: Edge,
        index: usize,
    },
}

#[derive(Clone, Debug)]
pub struct Stretched {
    pub instance: Instance,
    pub origin: BTreeMap<Vertex, Origin>,
}

impl Stretched {
    /// Original vertices among `vs`; subdivision vertices are dropped.
    pub fn project(&self, vs: impl IntoIterator<Item = Vertex>) -> Vec<Vertex> {
        vs.into_iter()
            .filter_map(|v| match self.origin.get(&v) {
                Some(Origin::Original { vertex }) => Some(*vertex),
                _ => None,
            })
            .collect()
    }
}

/// L(s) = 0 and L(v) = 1 + max over in-neighbours, in topological order.
pub fn compute_layers(inst: &Instance) -> Result<LayerAssignment> {
    if inst.mode != Mode::Tpdag {
        return Err(Error::Precondition(
            "layering expects a tpdag instance".into(),
        ));
    }
    let g = &inst.graph;
    if let Some(extra) = g.sources().find(|&v| v != inst.s) {
        return Err(Error::Precondition(format!(
            "vertex {extra} is a second source besides s"
        )));
    }
    let mut layers = BTreeMap::new();
    for v in topological_order(g)? {
        let layer = g.in_neighbors(v).map(|u| layers[&u] + 1).max().unwrap_or(0);
        layers.insert(v, layer);
    }
    Ok(LayerAssignment { layers })
}

/// Subdivides each edge (u, v) L(v) - L(u) - 1 times so that every edge joins
/// consecutive layers.
pub fn stretch_to_layers(inst: &Instance, layers: &LayerAssignment) -> Result<Stretched> {
    let mut g: Graph = inst.graph.clone();
    let mut origin: BTreeMap<Vertex, Origin> = g
        .vertices()
        .map(|v| (v, Origin::Original { vertex: v }))
        .collect();
    let edges: Vec<Edge> = inst.graph.edges().collect();
    for (u, v) in edges {
        let (lu, lv) = (layers.of(u), layers.of(v));
        if lv <= lu {
            return Err(Error::Precondition(format!(
                "edge ({u}, {v}) does not go up the layering"
            )));
        }
        let (next, fresh) = subdivide_edge(&g, (u, v), lv - lu - 1)?;
        g = next;
        for (index, w) in fresh.into_iter().enumerate() {
            origin.insert(
                w,
                Origin::Subdivision {
                    edge: (u, v),
                    index,
                },
            );
        }
    }
    let instance = Instance::new(g, inst.s, inst.t, inst.k, Mode::Tpdag)?;
    Ok(Stretched { instance, origin })
}

/// The full transformation; the result is an undirected shortest-path
/// instance with the same budget, plus provenance of every vertex.
pub fn to_tsp_instance(inst: &Instance) -> Result<Stretched> {
    let layers = compute_layers(inst)?;
    let stretched = stretch_to_layers(inst, &layers)?;
    let und = stretched.instance.graph.to_undirected();
    let instance = Instance::new(und, inst.s, inst.t, inst.k, Mode::Tsp)?;
    Ok(Stretched {
        instance,
        origin: stretched.origin,
    })
}
