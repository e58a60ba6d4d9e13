use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Which family of paths a tracking set has to tell apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Shortest s-t paths of an undirected graph.
    Tsp,
    /// All directed s-t paths of a DAG.
    Tpdag,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Tsp => "tsp",
            Mode::Tpdag => "tpdag",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsp" => Ok(Mode::Tsp),
            "tpdag" => Ok(Mode::Tpdag),
            other => Err(format!("unknown problem mode `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub s: Vertex,
    pub t: Vertex,
    pub k: usize,
    pub mode: Mode,
}

impl Instance {
    pub fn new(graph: Graph, s: Vertex, t: Vertex, k: usize, mode: Mode) -> Result<Self> {
        let inst = Instance {
            graph,
            s,
            t,
            k,
            mode,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        self.graph.check(self.s)?;
        self.graph.check(self.t)?;
        match self.mode {
            Mode::Tsp if self.graph.is_directed() => Err(Error::Precondition(
                "tsp instances must be undirected".into(),
            )),
            Mode::Tpdag if !self.graph.is_directed() => Err(Error::Precondition(
                "tpdag instances must be directed".into(),
            )),
            Mode::Tpdag if !self.graph.is_acyclic() => Err(Error::CyclicGraph),
            _ => Ok(()),
        }
    }

    pub fn with_budget(&self, k: usize) -> Instance {
        Instance { k, ..self.clone() }
    }
}
