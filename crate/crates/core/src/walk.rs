// Copyright 2026 The qcompile Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! One step of a coined quantum walk on an undirected graph, `Û = T̂ Ĉ`.
//!
//! The walker lives on arcs `|i, j⟩` (node `i`, coin pointing at neighbour
//! `j`), ordered by `i` then `j`. The coin `Ĉ` mixes the arcs leaving each
//! node with a Grover reflection and the translation `T̂` reverses every
//! arc. A self-loop contributes a single arc, which `T̂` leaves in place.

use std::collections::{BTreeSet, HashMap};

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::{CMat, Error, Result, Tolerances, UnitaryOperator};

/// Undirected graph on nodes `0..n`, self-loops allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    neighbors: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new(nodes: usize) -> Self {
        Graph {
            neighbors: vec![BTreeSet::new(); nodes],
        }
    }

    /// Adds the undirected edge `{i, j}` (0-based). Repeats are ignored.
    pub fn add_edge(&mut self, i: usize, j: usize) {
        self.neighbors[i].insert(j);
        self.neighbors[j].insert(i);
    }

    /// Builds a graph from a dense 0/1 adjacency matrix.
    pub fn from_adjacency(adj: &[Vec<bool>]) -> Result<Self> {
        let n = adj.len();
        let mut g = Graph::new(n);
        for (i, row) in adj.iter().enumerate() {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &a) in row.iter().enumerate() {
                if a != adj[j][i] {
                    return Err(Error::AsymmetricAdjacency { row: i + 1, col: j + 1 });
                }
                if a {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.neighbors.len()
    }

    /// Neighbours of `i` in ascending order, including `i` for a self-loop.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbors[i].iter().copied()
    }

    /// Number of arcs leaving `i`; a self-loop counts once.
    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors[i].contains(&j)
    }

    /// Edges between distinct nodes.
    pub fn edge_count(&self) -> usize {
        (self.arc_count() - self.loop_count()) / 2
    }

    pub fn loop_count(&self) -> usize {
        (0..self.node_count()).filter(|&i| self.has_edge(i, i)).count()
    }

    pub fn arc_count(&self) -> usize {
        self.neighbors.iter().map(BTreeSet::len).sum()
    }

    /// Edge-list text accepted by [`parse_graph`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.node_count());
        for i in 0..self.node_count() {
            for j in self.neighbors(i).filter(|&j| j >= i) {
                out.push_str(&format!("{} {}\n", i + 1, j + 1));
            }
        }
        out
    }
}

/// Ordered directed arcs of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcBasis {
    arcs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl ArcBasis {
    pub fn new(g: &Graph) -> Self {
        let arcs: Vec<(usize, usize)> = (0..g.node_count())
            .flat_map(|i| g.neighbors(i).map(move |j| (i, j)))
            .collect();
        let index = arcs.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        ArcBasis { arcs, index }
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        self.index.get(&(i, j)).copied()
    }

    /// Position of the reversed arc.
    pub fn translate(&self, k: usize) -> usize {
        let (i, j) = self.arcs[k];
        self.index[&(j, i)]
    }
}

/// The `d × d` reflection `2J/d − I`.
pub fn grover_coin(d: usize) -> UnitaryOperator {
    assert!(d >= 1, "coin dimension must be positive");
    let m = DMatrix::from_fn(d, d, |j, k| 2.0 / d as f64 - if j == k { 1.0 } else { 0.0 });
    UnitaryOperator::certify(CMat::from_real(&m).expect("finite"), &Tolerances::default())
        .expect("Grover coin is orthogonal")
}

/// `Û = T̂ Ĉ` in the arc basis, unpadded.
pub fn walk_unitary(g: &Graph) -> Result<(UnitaryOperator, ArcBasis)> {
    if let Some(i) = (0..g.node_count()).find(|&i| g.degree(i) == 0) {
        return Err(Error::IsolatedNode(i + 1));
    }
    let basis = ArcBasis::new(g);
    let m = basis.len();
    let mut u = DMatrix::<f64>::zeros(m, m);
    let mut start = 0;
    for i in 0..g.node_count() {
        let d = g.degree(i);
        let (diag, off) = (2.0 / d as f64 - 1.0, 2.0 / d as f64);
        for a in start..start + d {
            let row = basis.translate(a);
            for b in start..start + d {
                u[(row, b)] = if a == b { diag } else { off };
            }
        }
        start += d;
    }
    // T is a permutation, so |ÛᵀÛ - I| = |ĈᵀĈ - I|, which is block diagonal.
    let degrees: BTreeSet<usize> = (0..g.node_count()).map(|i| g.degree(i)).collect();
    let residual = degrees
        .into_iter()
        .map(|d| grover_coin(d).unitarity_residual())
        .fold(0.0, f64::max);
    let tol = Tolerances::default();
    if residual > tol.unitary {
        return Err(Error::NotUnitary {
            residual,
            tolerance: tol.unitary,
        });
    }
    Ok((UnitaryOperator::from_parts(CMat::from_real(&u)?, true, residual), basis))
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

/// Reads a graph in one of two forms, told apart by the first line:
///
/// * edge list: the node count alone, then one `i j` pair per line
///   (1-based; `i i` is a self-loop);
/// * dense adjacency: `N` rows of `N` zeros and ones.
///
/// Blank lines and `#` comments are ignored.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let rows: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
        .collect();
    let Some((first_line, first)) = rows.first() else {
        return Err(syntax(1, "empty graph file"));
    };
    if first.len() == 1 {
        let n: usize = first[0]
            .parse()
            .map_err(|_| syntax(*first_line, format!("bad node count `{}`", first[0])))?;
        let mut g = Graph::new(n);
        for (line, toks) in &rows[1..] {
            let node = |t: &str| match t.parse::<usize>() {
                Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
                _ => Err(syntax(*line, format!("bad node `{t}` (expected 1..={n})"))),
            };
            if toks.len() != 2 {
                return Err(syntax(*line, "expected an `i j` pair"));
            }
            g.add_edge(node(toks[0])?, node(toks[1])?);
        }
        Ok(g)
    } else {
        let n = first.len();
        if rows.len() != n {
            return Err(syntax(
                rows.last().map_or(1, |r| r.0),
                format!("expected {n} adjacency rows, found {}", rows.len()),
            ));
        }
        let adj = rows
            .iter()
            .map(|(line, toks)| {
                if toks.len() != n {
                    return Err(syntax(*line, format!("expected {n} entries, found {}", toks.len())));
                }
                toks.iter()
                    .map(|t| match *t {
                        "0" => Ok(false),
                        "1" => Ok(true),
                        _ => Err(syntax(*line, format!("expected 0 or 1, found `{t}`"))),
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<bool>>>>()?;
        Graph::from_adjacency(&adj)
    }
}

/// Random graph with exactly `edges` edges between distinct nodes and
/// `loops` self-loops. When `edges >= nodes - 1` a random spanning path is
/// laid first, so no node is isolated.
pub fn random_graph<R: Rng + ?Sized>(nodes: usize, edges: usize, loops: usize, rng: &mut R) -> Result<Graph> {
    let max_edges = nodes * nodes.saturating_sub(1) / 2;
    if edges > max_edges {
        return Err(Error::BadGraphRequest(format!(
            "{edges} edges requested but {nodes} nodes allow at most {max_edges}"
        )));
    }
    if loops > nodes {
        return Err(Error::BadGraphRequest(format!("{loops} loops requested on {nodes} nodes")));
    }
    let mut g = Graph::new(nodes);
    let mut order: Vec<usize> = (0..nodes).collect();
    order.shuffle(rng);
    let mut placed = 0;
    for w in order.windows(2).take(edges) {
        g.add_edge(w[0], w[1]);
        placed += 1;
    }
    while placed < edges {
        let i = rng.random_range(0..nodes);
        let j = rng.random_range(0..nodes);
        if i != j && !g.has_edge(i, j) {
            g.add_edge(i, j);
            placed += 1;
        }
    }
    order.shuffle(rng);
    for &i in order.iter().take(loops) {
        g.add_edge(i, i);
    }
    Ok(g)
}
