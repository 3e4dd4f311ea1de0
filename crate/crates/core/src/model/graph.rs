use serde::{Deserialize, Serialize};

use super::{Host, MultipartiteShape};
use crate::error::{Error, Result};

/// A simple undirected graph on `0..n` stored as an adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralGraph {
    n: usize,
    adj: Vec<bool>,
}

impl GeneralGraph {
    pub fn empty(n: usize) -> Self {
        Self { n, adj: vec![false; n * n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in 0..n {
                g.adj[u * n + v] = u != v;
            }
        }
        g
    }

    pub fn from_shape(shape: &MultipartiteShape) -> Self {
        let n = shape.total();
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in 0..n {
                g.adj[u * n + v] = shape.adjacent(u, v);
            }
        }
        g
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, count: self.n });
            }
        }
        if u == v {
            return Err(Error::InvalidParameter(format!("self-loop at vertex {u}")));
        }
        self.adj[u * self.n + v] = true;
        self.adj[v * self.n + u] = true;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u * self.n + v] = false;
        self.adj[v * self.n + u] = false;
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u * self.n..(u + 1) * self.n].iter().filter(|&&a| a).count()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).min().unwrap_or(0)
    }

    /// `t = n − δ(G)`; a complete graph has `t = 1`.
    pub fn deficiency(&self) -> usize {
        self.n - self.min_degree()
    }

    /// Edges `(u, v)` with `u < v`, lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| (u + 1..self.n).filter(move |&v| self.adj[u * self.n + v]).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }
}

impl Host for GeneralGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    fn describe(&self) -> String {
        format!("graph on {} vertices with {} edges", self.n, self.edge_count())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for GeneralGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr { n: self.n, edges: self.edges().map(|(u, v)| [u, v]).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneralGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(d)?;
        GeneralGraph::from_edges(repr.n, repr.edges.into_iter().map(|[u, v]| (u, v)))
            .map_err(serde::de::Error::custom)
    }
}
