//! Directed feedback graphs over a finite action set.
//!
//! Playing action `i` reveals the losses of every vertex in its
//! out-neighborhood. Vertices are 0-based in the API; the text format and
//! all user-facing output use 1-based ids.

mod catalog;
mod domination;
mod independence;
mod profile;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use catalog::{catalog, CatalogGraph};
pub use domination::{
    dominates_weak_set, exact_weak_dominating_set, greedy_weak_dominating_set, min_dominating_set,
    weak_domination_number,
    DominatingSet, EXACT_DOMINATION_CAP,
};
pub use independence::{independence_number, IndependentSet, EXACT_INDEPENDENCE_CAP};
pub use profile::{
    lemma2_bound, lemma2_lhs, predict_rate, profile, GraphProfile, RateClass, RatePrediction,
};

/// Observability of a single vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexTag {
    Strong,
    Weak,
    Unobservable,
}

/// Observability of a whole graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observability {
    StronglyObservable,
    WeaklyObservable,
    NotObservable,
}

impl Observability {
    pub fn as_str(self) -> &'static str {
        match self {
            Observability::StronglyObservable => "strongly_observable",
            Observability::WeaklyObservable => "weakly_observable",
            Observability::NotObservable => "not_observable",
        }
    }

    pub fn is_observable(self) -> bool {
        self != Observability::NotObservable
    }
}

impl fmt::Display for Observability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Directed graph over `num_vertices` actions; self-loops allowed, no
/// parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedbackGraph {
    num_vertices: usize,
    adjacency: Vec<bool>,
    out_nbrs: Vec<Vec<usize>>,
    in_nbrs: Vec<Vec<usize>>,
}

impl FeedbackGraph {
    /// Edgeless graph on `num_vertices` vertices.
    pub fn new(num_vertices: usize) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::invalid("a feedback graph needs at least one vertex"));
        }
        Ok(Self {
            num_vertices,
            adjacency: vec![false; num_vertices * num_vertices],
            out_nbrs: vec![Vec::new(); num_vertices],
            in_nbrs: vec![Vec::new(); num_vertices],
        })
    }

    /// Builds a graph from 0-based directed edges. Duplicates are ignored.
    pub fn from_edges<I>(num_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(num_vertices)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// Inserts `(u, v)`. Returns whether the edge was new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let slot = u * self.num_vertices + v;
        if self.adjacency[slot] {
            return Ok(false);
        }
        self.adjacency[slot] = true;
        insert_sorted(&mut self.out_nbrs[u], v);
        insert_sorted(&mut self.in_nbrs[v], u);
        Ok(true)
    }

    /// Removes `(u, v)`. Returns whether the edge existed.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let slot = u * self.num_vertices + v;
        if !self.adjacency[slot] {
            return Ok(false);
        }
        self.adjacency[slot] = false;
        self.out_nbrs[u].retain(|&x| x != v);
        self.in_nbrs[v].retain(|&x| x != u);
        Ok(true)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.num_vertices && v < self.num_vertices && self.adjacency[u * self.num_vertices + v]
    }

    pub fn has_self_loop(&self, i: usize) -> bool {
        self.has_edge(i, i)
    }

    /// Sorted `{j : (j, i) in E}`.
    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.in_nbrs[i]
    }

    /// Sorted `{j : (i, j) in E}`.
    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out_nbrs[i]
    }

    pub fn num_edges(&self) -> usize {
        self.out_nbrs.iter().map(Vec::len).sum()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_nbrs
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, i: usize) -> Result<()> {
        if i < self.num_vertices {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: i,
                num_vertices: self.num_vertices,
            })
        }
    }

    /// Observability tag of vertex `i`.
    pub fn classify_vertex(&self, i: usize) -> Result<VertexTag> {
        self.check_vertex(i)?;
        let ins = &self.in_nbrs[i];
        if ins.is_empty() {
            return Ok(VertexTag::Unobservable);
        }
        let from_all_others = ins.iter().filter(|&&j| j != i).count() == self.num_vertices - 1;
        if self.has_self_loop(i) || from_all_others {
            Ok(VertexTag::Strong)
        } else {
            Ok(VertexTag::Weak)
        }
    }

    pub fn vertex_tags(&self) -> Vec<VertexTag> {
        (0..self.num_vertices)
            .map(|i| self.classify_vertex(i).expect("vertex in range"))
            .collect()
    }

    pub fn classify(&self) -> Observability {
        let tags = self.vertex_tags();
        if tags.contains(&VertexTag::Unobservable) {
            Observability::NotObservable
        } else if tags.iter().all(|&t| t == VertexTag::Strong) {
            Observability::StronglyObservable
        } else {
            Observability::WeaklyObservable
        }
    }

    /// Weakly observable vertices, ascending.
    pub fn weak_set(&self) -> Vec<usize> {
        self.vertex_tags()
            .into_iter()
            .enumerate()
            .filter_map(|(i, t)| (t == VertexTag::Weak).then_some(i))
            .collect()
    }

    /// Serializes to the line-oriented text format (1-based ids).
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.num_vertices);
        for (u, v) in self.edges() {
            s.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        s
    }

    /// Stable 64-bit FNV-1a fingerprint of the vertex count and edge list.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        feed(self.num_vertices as u64);
        for (u, v) in self.edges() {
            feed(u as u64);
            feed(v as u64);
        }
        h
    }
}

fn insert_sorted(list: &mut Vec<usize>, x: usize) {
    if let Err(pos) = list.binary_search(&x) {
        list.insert(pos, x);
    }
}

/// Parses the text format: first non-comment line is `K`, each following
/// non-comment line is a 1-based directed edge `u v`. `#` starts a comment.
impl FromStr for FeedbackGraph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut graph: Option<FeedbackGraph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match graph.as_mut() {
                None => {
                    if fields.len() != 1 {
                        return Err(parse_err(format!(
                            "expected the vertex count, found `{line}`"
                        )));
                    }
                    let k: usize = fields[0]
                        .parse()
                        .map_err(|_| parse_err(format!("invalid vertex count `{}`", fields[0])))?;
                    if k == 0 {
                        return Err(parse_err("vertex count must be positive".into()));
                    }
                    graph = Some(FeedbackGraph::new(k)?);
                }
                Some(g) => {
                    if fields.len() != 2 {
                        return Err(parse_err(format!("expected `u v`, found `{line}`")));
                    }
                    let mut ids = [0usize; 2];
                    for (slot, field) in ids.iter_mut().zip(&fields) {
                        let id: usize = field
                            .parse()
                            .map_err(|_| parse_err(format!("invalid vertex id `{field}`")))?;
                        if id == 0 || id > g.num_vertices() {
                            return Err(parse_err(format!(
                                "vertex id {id} outside 1..={}",
                                g.num_vertices()
                            )));
                        }
                        *slot = id - 1;
                    }
                    g.add_edge(ids[0], ids[1])?;
                }
            }
        }
        graph.ok_or(Error::Parse {
            line: text.lines().count().max(1),
            message: "missing vertex count".into(),
        })
    }
}

impl fmt::Display for FeedbackGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Bitmask over at most 64 vertices.
pub(crate) type Mask = u64;

pub(crate) fn mask_of(vertices: &[usize]) -> Mask {
    vertices.iter().fold(0, |m, &v| m | (1 << v))
}

pub(crate) fn vertices_of(mut mask: Mask) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let v = mask.trailing_zeros() as usize;
        out.push(v);
        mask &= mask - 1;
    }
    out
}
