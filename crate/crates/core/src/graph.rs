//! Finite weighted graphs with a vertex measure.
//!
//! Vertices carry opaque string ids and are addressed internally by their
//! insertion index. Each vertex stores its outgoing weights `w_xy`; for
//! graphs built with symmetric weights every edge is stored in both
//! directions with the same weight. The neighbour relation itself is always
//! symmetric: asymmetric graphs must list both directions of every edge.

use std::collections::{HashMap, HashSet, VecDeque};
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest value accepted as "positive" for functions fed to the estimates.
pub const POSITIVE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureMode {
    Unit,
    Degree,
    Explicit,
}

/// Vertex measure requested at construction time.
#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    Unit,
    /// `mu(x) = deg(x)`; rejected when some vertex is isolated.
    Degree,
    Explicit(Vec<f64>),
}

impl Measure {
    pub fn mode(&self) -> MeasureMode {
        match self {
            Measure::Unit => MeasureMode::Unit,
            Measure::Degree => MeasureMode::Degree,
            Measure::Explicit(_) => MeasureMode::Explicit,
        }
    }
}

/// The sup/inf constants of a weighted graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphConstants {
    /// `sup_x deg(x)/mu(x)`
    pub d_mu: f64,
    pub mu_max: f64,
    /// smallest edge weight
    pub w_min: f64,
    /// `sup mu(x)/w_xy` over adjacent pairs
    pub d: f64,
    /// `sup deg(x)/w_xy` over adjacent pairs
    pub d_w: f64,
}

#[derive(Debug, Clone)]
pub struct WeightedGraph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<(usize, f64)>>,
    degree: Vec<f64>,
    mu: Vec<f64>,
    measure_mode: MeasureMode,
    weights_symmetric: bool,
}

/// Incremental construction of a [`WeightedGraph`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    arcs: Vec<(usize, usize, f64)>,
    seen: HashSet<(usize, usize)>,
    weights_symmetric: bool,
}

impl GraphBuilder {
    pub fn new(weights_symmetric: bool) -> Self {
        Self { ids: Vec::new(), index: HashMap::new(), arcs: Vec::new(), seen: HashSet::new(), weights_symmetric }
    }

    /// Builder with vertices named `"0"`, `"1"`, ... `n-1`.
    pub fn with_vertices(n: usize, weights_symmetric: bool) -> Self {
        let mut b = Self::new(weights_symmetric);
        for i in 0..n {
            b.vertex(i.to_string()).expect("fresh ids are unique");
        }
        b
    }

    pub fn vertex(&mut self, id: impl Into<String>) -> Result<usize> {
        let id = id.into();
        if self.index.contains_key(&id) {
            return Err(Error::DuplicateVertex(id));
        }
        let i = self.ids.len();
        self.index.insert(id.clone(), i);
        self.ids.push(id);
        Ok(i)
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.seen.contains(&(u, v))
    }

    /// Adds an edge between two existing vertices, by id.
    ///
    /// With symmetric weights this inserts `w_uv = w_vu = w`; otherwise it
    /// inserts the single directed weight `w_uv`.
    pub fn edge(&mut self, u: &str, v: &str, w: f64) -> Result<()> {
        let ui = *self.index.get(u).ok_or_else(|| Error::UnknownVertex(u.to_string()))?;
        let vi = *self.index.get(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
        self.edge_by_index(ui, vi, w)
    }

    pub fn edge_by_index(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        let n = self.ids.len();
        if u >= n {
            return Err(Error::VertexIndex(u));
        }
        if v >= n {
            return Err(Error::VertexIndex(v));
        }
        if u == v {
            return Err(Error::SelfLoop(self.ids[u].clone()));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::BadWeight(self.ids[u].clone(), self.ids[v].clone(), w));
        }
        let dup = || Error::DuplicateEdge(self.ids[u].clone(), self.ids[v].clone());
        if self.seen.contains(&(u, v)) {
            return Err(dup());
        }
        if self.weights_symmetric {
            if self.seen.contains(&(v, u)) {
                return Err(dup());
            }
            self.seen.insert((u, v));
            self.seen.insert((v, u));
            self.arcs.push((u, v, w));
            self.arcs.push((v, u, w));
        } else {
            self.seen.insert((u, v));
            self.arcs.push((u, v, w));
        }
        Ok(())
    }

    pub fn build(self, measure: Measure) -> Result<WeightedGraph> {
        let n = self.ids.len();
        for &(u, v, _) in &self.arcs {
            if !self.seen.contains(&(v, u)) {
                return Err(Error::MissingReverse(self.ids[u].clone(), self.ids[v].clone()));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in &self.arcs {
            adj[u].push((v, w));
        }
        for row in &mut adj {
            row.sort_unstable_by_key(|&(v, _)| v);
        }
        let degree: Vec<f64> = adj.iter().map(|row| row.iter().map(|&(_, w)| w).sum()).collect();
        let measure_mode = measure.mode();
        let mu = match measure {
            Measure::Unit => vec![1.0; n],
            Measure::Degree => degree.clone(),
            Measure::Explicit(values) => {
                if values.len() != n {
                    return Err(Error::DomainMismatch { expected: n, found: values.len() });
                }
                values
            }
        };
        for (i, &m) in mu.iter().enumerate() {
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::BadMeasure(self.ids[i].clone(), m));
            }
        }
        Ok(WeightedGraph {
            ids: self.ids,
            index: self.index,
            adj,
            degree,
            mu,
            measure_mode,
            weights_symmetric: self.weights_symmetric,
        })
    }
}

impl WeightedGraph {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub(crate) fn check_vertex(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::VertexIndex(x))
        }
    }

    /// Outgoing weights `(y, w_xy)` of `x`.
    pub fn neighbors(&self, x: usize) -> &[(usize, f64)] {
        &self.adj[x]
    }

    pub fn weight(&self, x: usize, y: usize) -> Option<f64> {
        self.adj[x].iter().find(|&&(z, _)| z == y).map(|&(_, w)| w)
    }

    /// `deg(x) = sum_{y~x} w_xy`, zero at isolated vertices.
    pub fn degree(&self, x: usize) -> f64 {
        self.degree[x]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degree
    }

    pub fn mu(&self, x: usize) -> f64 {
        self.mu[x]
    }

    pub fn measure(&self) -> &[f64] {
        &self.mu
    }

    pub fn measure_mode(&self) -> MeasureMode {
        self.measure_mode
    }

    pub fn weights_symmetric(&self) -> bool {
        self.weights_symmetric
    }

    /// True when `mu(x) = deg(x)` holds exactly at every vertex.
    pub fn has_degree_measure(&self) -> bool {
        self.measure_mode == MeasureMode::Degree || self.mu == self.degree
    }

    /// Number of edges, counting each adjacent pair once.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Directed arcs `(x, y, w_xy)` in vertex order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(x, row)| row.iter().map(move |&(y, w)| (x, y, w)))
    }

    pub fn total_measure(&self) -> f64 {
        self.mu.iter().sum()
    }

    /// `D_mu`, defined (as 0) even on edgeless graphs.
    pub fn d_mu(&self) -> f64 {
        self.degree.iter().zip(&self.mu).map(|(d, m)| d / m).fold(0.0, f64::max)
    }

    pub fn constants(&self) -> Result<GraphConstants> {
        if self.edge_count() == 0 {
            return Err(Error::Edgeless);
        }
        let mu_max = self.mu.iter().copied().fold(f64::MIN, f64::max);
        let mut w_min = f64::INFINITY;
        let mut d = 0.0f64;
        let mut d_w = 0.0f64;
        for (x, _, w) in self.arcs() {
            w_min = w_min.min(w);
            d = d.max(self.mu[x] / w);
            d_w = d_w.max(self.degree[x] / w);
        }
        Ok(GraphConstants { d_mu: self.d_mu(), mu_max, w_min, d, d_w })
    }

    /// Hop distances from `x`; `None` for vertices in other components.
    pub fn distances_from(&self, x: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[x] = Some(0);
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for &(y, _) in &self.adj[v] {
                if dist[y].is_none() {
                    dist[y] = Some(dv + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Hop-count distance.
    pub fn dist(&self, x: usize, y: usize) -> Result<usize> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        self.distances_from(x)[y].ok_or_else(|| Error::Unreachable(self.ids[x].clone(), self.ids[y].clone()))
    }

    /// All-pairs hop distances by repeated breadth-first search.
    pub fn distance_matrix(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.len()).map(|x| self.distances_from(x)).collect()
    }

    /// Shortest path `x = x_0, ..., x_l = y` by hop count.
    pub fn shortest_path(&self, x: usize, y: usize) -> Result<Vec<usize>> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        let mut parent = vec![usize::MAX; self.len()];
        parent[x] = x;
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            if v == y {
                break;
            }
            for &(z, _) in &self.adj[v] {
                if parent[z] == usize::MAX {
                    parent[z] = v;
                    queue.push_back(z);
                }
            }
        }
        if parent[y] == usize::MAX {
            return Err(Error::Unreachable(self.ids[x].clone(), self.ids[y].clone()));
        }
        let mut path = vec![y];
        let mut v = y;
        while v != x {
            v = parent[v];
            path.push(v);
        }
        path.reverse();
        Ok(path)
    }

    /// Closed ball `{z : dist(x, z) <= r}`; the real radius is floored.
    pub fn ball(&self, x: usize, r: f64) -> Result<Vec<usize>> {
        self.check_vertex(x)?;
        if !(r >= 0.0) {
            return Err(Error::InvalidParameter(format!("ball radius must be >= 0, got {r}")));
        }
        Ok(self
            .distances_from(x)
            .into_iter()
            .enumerate()
            .filter_map(|(z, d)| d.filter(|&d| d as f64 <= r).map(|_| z))
            .collect())
    }

    /// `Vol(B(x, r)) = sum of mu over the closed ball`.
    pub fn ball_volume(&self, x: usize, r: f64) -> Result<f64> {
        Ok(self.ball(x, r)?.into_iter().map(|z| self.mu[z]).sum())
    }

    /// Connected component label per vertex, numbered in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.len()];
        let mut next = 0;
        for s in 0..self.len() {
            if label[s] != usize::MAX {
                continue;
            }
            for (z, d) in self.distances_from(s).into_iter().enumerate() {
                if d.is_some() {
                    label[z] = next;
                }
            }
            next += 1;
        }
        label
    }
}

/// A real-valued function on the vertices of one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction(Vec<f64>);

impl VertexFunction {
    pub fn new(g: &WeightedGraph, values: Vec<f64>) -> Result<Self> {
        if values.len() != g.len() {
            return Err(Error::DomainMismatch { expected: g.len(), found: values.len() });
        }
        Ok(Self(values))
    }

    pub fn constant(g: &WeightedGraph, c: f64) -> Self {
        Self(vec![c; g.len()])
    }

    pub(crate) fn from_vec(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self(self.0.iter().map(|&v| f(v)).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn check_domain(&self, g: &WeightedGraph) -> Result<()> {
        if self.0.len() == g.len() {
            Ok(())
        } else {
            Err(Error::DomainMismatch { expected: g.len(), found: self.0.len() })
        }
    }

    /// Domain check plus `u(x) >= floor` everywhere.
    pub fn check_positive(&self, g: &WeightedGraph, floor: f64) -> Result<()> {
        self.check_domain(g)?;
        match self.0.iter().position(|&v| !(v >= floor) || !v.is_finite()) {
            None => Ok(()),
            Some(x) => Err(Error::NotPositive { vertex: g.id(x).to_string(), value: self.0[x] }),
        }
    }
}

impl Index<usize> for VertexFunction {
    type Output = f64;

    fn index(&self, x: usize) -> &f64 {
        &self.0[x]
    }
}
