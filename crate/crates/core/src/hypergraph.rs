//! k-uniform hypergraphs, two-colorings and the edge predicates the
//! recoloring procedure is built on.
//!
//! Vertices are `0..n` internally. The text and JSON formats in [`crate::io`]
//! use 1-based ids.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Red => f.write_str("red"),
            Color::Blue => f.write_str("blue"),
        }
    }
}

/// An immutable k-uniform multi-hypergraph.
///
/// Edges are stored flat, each as a strictly increasing k-tuple, in insertion
/// order. Duplicate edges are allowed. The per-vertex incidence index is built
/// once at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: u32,
    k: u32,
    edges: Vec<Vertex>,
    inc_offsets: Vec<usize>,
    inc: Vec<u32>,
}

impl Hypergraph {
    pub fn empty(n: u32, k: u32) -> Result<Self> {
        Self::from_flat(n, k, Vec::new())
    }

    /// Builds a hypergraph from a list of edges. Each edge is sorted; an edge
    /// with a repeated vertex, a vertex `>= n` or the wrong size is rejected.
    pub fn new(n: u32, k: u32, edges: Vec<Vec<Vertex>>) -> Result<Self> {
        let mut flat = Vec::with_capacity(edges.len() * k as usize);
        for (i, e) in edges.into_iter().enumerate() {
            if e.len() != k as usize {
                return Err(Error::input(format!(
                    "edge {i} has {} vertices, expected {k}",
                    e.len()
                )));
            }
            flat.extend(e);
        }
        Self::from_flat(n, k, flat)
    }

    /// Builds a hypergraph from `m * k` concatenated vertex ids.
    pub fn from_flat(n: u32, k: u32, mut flat: Vec<Vertex>) -> Result<Self> {
        if k < 2 {
            return Err(Error::input(format!("uniformity must be at least 2, got {k}")));
        }
        if k > n {
            return Err(Error::input(format!("uniformity {k} exceeds vertex count {n}")));
        }
        let ku = k as usize;
        if flat.len() % ku != 0 {
            return Err(Error::input("edge buffer length is not a multiple of k"));
        }
        if flat.len() / ku > u32::MAX as usize {
            return Err(Error::input("too many edges"));
        }
        for (i, e) in flat.chunks_mut(ku).enumerate() {
            e.sort_unstable();
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::input(format!("edge {i}: vertex {v} out of range 0..{n}")));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("edge {i} repeats a vertex")));
            }
        }

        let mut inc_offsets = vec![0usize; n as usize + 1];
        for &v in &flat {
            inc_offsets[v as usize + 1] += 1;
        }
        for i in 0..n as usize {
            inc_offsets[i + 1] += inc_offsets[i];
        }
        let mut fill = inc_offsets.clone();
        let mut inc = vec![0u32; flat.len()];
        for (ei, e) in flat.chunks(ku).enumerate() {
            for &v in e {
                inc[fill[v as usize]] = ei as u32;
                fill[v as usize] += 1;
            }
        }
        Ok(Hypergraph { n, k, edges: flat, inc_offsets, inc })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len() / self.k as usize
    }

    /// Vertices of edge `e`, ascending. Panics if `e` is out of range.
    pub fn edge(&self, e: usize) -> &[Vertex] {
        let k = self.k as usize;
        &self.edges[e * k..(e + 1) * k]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[Vertex]> + '_ {
        self.edges.chunks(self.k as usize)
    }

    /// Indices of the edges containing `v`, ascending.
    pub fn incident(&self, v: Vertex) -> &[u32] {
        let v = v as usize;
        &self.inc[self.inc_offsets[v]..self.inc_offsets[v + 1]]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incident(v).len()
    }

    pub fn has_duplicate_edges(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.num_edges());
        self.edges().any(|e| !seen.insert(e))
    }

    /// Same vertex set and uniformity, with the edges of `other` appended.
    pub fn with_edges_from(&self, other: &Hypergraph) -> Result<Hypergraph> {
        if other.n != self.n || other.k != self.k {
            return Err(Error::input("hypergraph shapes differ"));
        }
        let mut flat = self.edges.clone();
        flat.extend_from_slice(&other.edges);
        Hypergraph::from_flat(self.n, self.k, flat)
    }
}

/// A total two-coloring of `0..n` with a running red-class size.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<Color>,
    red: usize,
}

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        let red = colors.iter().filter(|&&c| c == Color::Red).count();
        Coloring { colors, red }
    }

    pub fn from_red_set(n: u32, reds: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut colors = vec![Color::Blue; n as usize];
        for v in reds {
            let slot = colors
                .get_mut(v as usize)
                .ok_or_else(|| Error::input(format!("vertex {v} out of range 0..{n}")))?;
            *slot = Color::Red;
        }
        Ok(Coloring::new(colors))
    }

    /// `0..n/2` red and the rest blue.
    pub fn halves(n: u32) -> Self {
        let half = (n / 2) as usize;
        let colors = (0..n as usize)
            .map(|v| if v < half { Color::Red } else { Color::Blue })
            .collect();
        Coloring::new(colors)
    }

    pub fn n(&self) -> u32 {
        self.colors.len() as u32
    }

    pub fn color(&self, v: Vertex) -> Color {
        self.colors[v as usize]
    }

    pub fn set(&mut self, v: Vertex, c: Color) {
        let slot = &mut self.colors[v as usize];
        match (*slot, c) {
            (Color::Blue, Color::Red) => self.red += 1,
            (Color::Red, Color::Blue) => self.red -= 1,
            _ => {}
        }
        *slot = c;
    }

    pub fn red_count(&self) -> usize {
        self.red
    }

    pub fn blue_count(&self) -> usize {
        self.colors.len() - self.red
    }

    pub fn is_equitable(&self) -> bool {
        self.colors.len() % 2 == 0 && self.red * 2 == self.colors.len()
    }

    pub fn vertices_of(&self, c: Color) -> Vec<Vertex> {
        (0..self.colors.len() as u32).filter(|&v| self.color(v) == c).collect()
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.colors
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Monochromatic(Color),
    /// All vertices but `head` share `majority`.
    AlmostMonochromatic { head: Vertex, majority: Color },
    Bichromatic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeStatus {
    pub edge: usize,
    pub kind: EdgeKind,
}

fn check_shape(h: &Hypergraph, c: &Coloring) -> Result<()> {
    if c.n() != h.n() {
        return Err(Error::input(format!(
            "coloring covers {} vertices, hypergraph has {}",
            c.n(),
            h.n()
        )));
    }
    Ok(())
}

fn kind_of(edge: &[Vertex], c: &Coloring) -> EdgeKind {
    let k = edge.len();
    let red = edge.iter().filter(|&&v| c.color(v) == Color::Red).count();
    if red == k {
        EdgeKind::Monochromatic(Color::Red)
    } else if red == 0 {
        EdgeKind::Monochromatic(Color::Blue)
    } else if k >= 3 && red == 1 {
        let head = *edge.iter().find(|&&v| c.color(v) == Color::Red).unwrap();
        EdgeKind::AlmostMonochromatic { head, majority: Color::Blue }
    } else if k >= 3 && red == k - 1 {
        let head = *edge.iter().find(|&&v| c.color(v) == Color::Blue).unwrap();
        EdgeKind::AlmostMonochromatic { head, majority: Color::Red }
    } else {
        // k = 2 lands here: both endpoints are minorities, so there is no head.
        EdgeKind::Bichromatic
    }
}

pub fn classify_edge(h: &Hypergraph, c: &Coloring, e: usize) -> Result<EdgeStatus> {
    check_shape(h, c)?;
    if e >= h.num_edges() {
        return Err(Error::input(format!(
            "edge index {e} out of range 0..{}",
            h.num_edges()
        )));
    }
    Ok(EdgeStatus { edge: e, kind: kind_of(h.edge(e), c) })
}

/// True iff `v` is the head of no almost-monochromatic edge under `c`.
pub fn is_safe(h: &Hypergraph, c: &Coloring, v: Vertex) -> Result<bool> {
    check_shape(h, c)?;
    if v >= h.n() {
        return Err(Error::input(format!("vertex {v} out of range 0..{}", h.n())));
    }
    Ok(h.incident(v).iter().all(|&e| {
        !matches!(
            kind_of(h.edge(e as usize), c),
            EdgeKind::AlmostMonochromatic { head, .. } if head == v
        )
    }))
}

/// Number of (red, blue) monochromatic edges.
pub fn count_monochromatic(h: &Hypergraph, c: &Coloring) -> Result<(usize, usize)> {
    check_shape(h, c)?;
    let mut red = 0;
    let mut blue = 0;
    for e in h.edges() {
        let first = c.color(e[0]);
        if e[1..].iter().all(|&v| c.color(v) == first) {
            match first {
                Color::Red => red += 1,
                Color::Blue => blue += 1,
            }
        }
    }
    Ok((red, blue))
}

pub fn is_proper(h: &Hypergraph, c: &Coloring) -> Result<bool> {
    Ok(count_monochromatic(h, c)? == (0, 0))
}
