//! Finite tile-adjacency multigraphs built from a cluster: open `m x n`
//! patches, `m x n` tori, and the Klein-bottle quotient of the triangular
//! tiling.
//!
//! Adjacency is stored as one neighbour list per vertex, with repetition.
//! Parallel edges appear once per copy. A torus self-loop puts the vertex
//! into its own list twice; the Klein quotient can produce an edge glued to
//! itself, which appears once (a half-loop). The degree of a vertex is the
//! length of its list in every case.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tessellation::{cluster_spec, ClusterSpec, TessKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quotient {
    Open,
    Torus,
    Klein,
}

impl fmt::Display for Quotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quotient::Open => "open",
            Quotient::Torus => "torus",
            Quotient::Klein => "klein",
        })
    }
}

impl FromStr for Quotient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "open" => Ok(Quotient::Open),
            "torus" => Ok(Quotient::Torus),
            "klein" => Ok(Quotient::Klein),
            other => Err(Error::schema("quotient", format!("unknown quotient `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: usize,
    pub i: usize,
    pub j: usize,
    /// 1-based tile index inside the cluster.
    pub k: usize,
    pub sides: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGraph {
    pub kind: TessKind,
    pub m: usize,
    pub n: usize,
    pub quotient: Quotient,
    pub vertices: Vec<VertexRecord>,
    pub adjacency: Vec<Vec<usize>>,
}

impl QuotientGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Number of times `v` occurs in its own neighbour list.
    pub fn loop_multiplicity(&self, v: usize) -> usize {
        self.adjacency[v].iter().filter(|&&w| w == v).count()
    }

    pub fn degree_sum(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// Id of the vertex at cluster `(i, j)`, tile `k`; `None` when the
    /// quotient has no such representative.
    pub fn vertex_id(&self, i: usize, j: usize, k: usize) -> Option<usize> {
        match self.quotient {
            Quotient::Klein => (k == 1 && i < self.n && j < self.n).then_some(i * self.n + j),
            _ => {
                let c = cluster_spec(self.kind).len();
                (i < self.m && j < self.n && (1..=c).contains(&k)).then_some((i * self.n + j) * c + k - 1)
            }
        }
    }

    /// Occurrence counts `(u, w) -> multiplicity` for `u <= w`, taken from
    /// `u`'s list.
    pub fn edge_multiplicities(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for (u, list) in self.adjacency.iter().enumerate() {
            for &w in list {
                if u <= w {
                    *out.entry((u, w)).or_insert(0) += 1;
                }
            }
        }
        out
    }

    /// True when every neighbour list relation is mirrored with the same
    /// multiplicity.
    pub fn is_symmetric(&self) -> bool {
        let mut counts: BTreeMap<(usize, usize), isize> = BTreeMap::new();
        for (u, list) in self.adjacency.iter().enumerate() {
            for &w in list {
                if u == w {
                    continue;
                }
                let key = (u.min(w), u.max(w));
                *counts.entry(key).or_insert(0) += if u < w { 1 } else { -1 };
            }
        }
        counts.values().all(|&c| c == 0)
    }
}

fn check_size(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidSize { m, n });
    }
    Ok(())
}

fn skeleton(spec: &ClusterSpec, m: usize, n: usize, quotient: Quotient) -> QuotientGraph {
    let c = spec.len();
    let mut vertices = Vec::with_capacity(m * n * c);
    for i in 0..m {
        for j in 0..n {
            for t in &spec.tiles {
                vertices.push(VertexRecord {
                    id: vertices.len(),
                    i,
                    j,
                    k: t.index,
                    sides: t.sides,
                });
            }
        }
    }
    QuotientGraph {
        kind: spec.kind,
        m,
        n,
        quotient,
        adjacency: vec![Vec::new(); vertices.len()],
        vertices,
    }
}

fn build_grid(kind: TessKind, m: usize, n: usize, wrap: bool) -> Result<QuotientGraph> {
    check_size(m, n)?;
    let spec = cluster_spec(kind);
    let c = spec.len();
    let mut g = skeleton(&spec, m, n, if wrap { Quotient::Torus } else { Quotient::Open });
    let id = |i: usize, j: usize, k: usize| (i * n + j) * c + k - 1;
    for i in 0..m {
        for j in 0..n {
            for &(a, b) in &spec.intra_edges {
                let (u, w) = (id(i, j, a), id(i, j, b));
                g.adjacency[u].push(w);
                g.adjacency[w].push(u);
            }
            for e in &spec.inter_edges {
                let ti = i as i64 + e.offset.0 as i64;
                let tj = j as i64 + e.offset.1 as i64;
                let inside = (0..m as i64).contains(&ti) && (0..n as i64).contains(&tj);
                if !wrap && !inside {
                    continue;
                }
                let ti = ti.rem_euclid(m as i64) as usize;
                let tj = tj.rem_euclid(n as i64) as usize;
                let (u, w) = (id(i, j, e.from), id(ti, tj, e.to));
                g.adjacency[u].push(w);
                g.adjacency[w].push(u);
            }
        }
    }
    for list in &mut g.adjacency {
        list.sort_unstable();
    }
    Ok(g)
}

/// The `m x n` torus: inter-cluster offsets wrap modulo `(m, n)`.
pub fn build_torus(kind: TessKind, m: usize, n: usize) -> Result<QuotientGraph> {
    build_grid(kind, m, n, true)
}

/// The open `m x n` patch: the torus vertex set, without the edges that
/// would leave the grid.
pub fn build_open(kind: TessKind, m: usize, n: usize) -> Result<QuotientGraph> {
    build_grid(kind, m, n, false)
}

/// The Klein-type quotient of the `n x n` triangular torus: triangle
/// `(i, j, 2)` is glued to `(n-1-i, n-1-j, 1)` (mod `n`), a half-turn about
/// the midpoint of the shared parallelogram. Vertices are the `(i, j, 1)`
/// representatives; the result is 3-regular with `n^2` vertices.
pub fn build_klein_3_6(n: usize) -> Result<QuotientGraph> {
    check_size(n, n)?;
    let torus = build_torus(TessKind::Triangular, n, n)?;
    let rep = |v: &VertexRecord| -> usize {
        if v.k == 1 {
            v.i * n + v.j
        } else {
            let i = (2 * n - 1 - v.i) % n;
            let j = (2 * n - 1 - v.j) % n;
            i * n + j
        }
    };
    let mut vertices = Vec::with_capacity(n * n);
    let mut adjacency = Vec::with_capacity(n * n);
    for v in torus.vertices.iter().filter(|v| v.k == 1) {
        vertices.push(VertexRecord {
            id: vertices.len(),
            i: v.i,
            j: v.j,
            k: 1,
            sides: 3,
        });
        let mut list: Vec<usize> = torus.adjacency[v.id]
            .iter()
            .map(|&w| rep(&torus.vertices[w]))
            .collect();
        list.sort_unstable();
        adjacency.push(list);
    }
    Ok(QuotientGraph {
        kind: TessKind::Triangular,
        m: n,
        n,
        quotient: Quotient::Klein,
        vertices,
        adjacency,
    })
}

/// Builds any supported quotient.
pub fn build(kind: TessKind, m: usize, n: usize, quotient: Quotient) -> Result<QuotientGraph> {
    match quotient {
        Quotient::Open => build_open(kind, m, n),
        Quotient::Torus => build_torus(kind, m, n),
        Quotient::Klein => {
            if kind != TessKind::Triangular || m != n {
                return Err(Error::KleinUnsupported);
            }
            build_klein_3_6(n)
        }
    }
}

/// Degree -> number of vertices with that degree (a self-loop counts 2).
pub fn degree_histogram(graph: &QuotientGraph) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for v in 0..graph.len() {
        *out.entry(graph.degree(v)).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tessellation::catalog;

    fn kind(s: &str) -> TessKind {
        s.parse().unwrap()
    }

    #[test]
    fn triangular_torus_2x2() {
        let g = build_torus(kind("3.3.3.3.3.3"), 2, 2).unwrap();
        assert_eq!(g.len(), 8);
        assert!((0..8).all(|v| g.degree(v) == 3));
        assert_eq!(g.degree_sum() / 2, 12);
    }

    #[test]
    fn triangular_torus_matches_row_system() {
        // triangle (i,j,1) touches (i,j,2), (i-1,j,2), (i,j-1,2)
        let n = 5;
        let g = build_torus(TessKind::Triangular, n, n).unwrap();
        for i in 0..n {
            for j in 0..n {
                let v = g.vertex_id(i, j, 1).unwrap();
                let mut want = vec![
                    g.vertex_id(i, j, 2).unwrap(),
                    g.vertex_id((i + n - 1) % n, j, 2).unwrap(),
                    g.vertex_id(i, (j + n - 1) % n, 2).unwrap(),
                ];
                want.sort_unstable();
                assert_eq!(g.neighbors(v), want.as_slice());
            }
        }
    }

    #[test]
    fn hexagonal_1x1_collapses_to_loops() {
        let g = build_torus(kind("6.6.6"), 1, 1).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.degree(0), 6);
        assert_eq!(g.loop_multiplicity(0), 6);
        assert_eq!(g.edge_multiplicities().get(&(0, 0)), Some(&6));
    }

    #[test]
    fn rhombitrihexagonal_2x2_counts() {
        let g = build_torus(kind("3.4.6.4"), 2, 2).unwrap();
        assert_eq!(g.len(), 24);
        assert_eq!(g.degree_sum(), 96);
        assert_eq!(g.degree_sum() / 2, 48);
    }

    #[test]
    fn open_patches() {
        let g = build_open(kind("3.3.3.3.6"), 4, 3).unwrap();
        assert_eq!(g.len(), 108);
        let g = build_open(kind("4.4.4.4"), 2, 2).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.degree_sum() / 2, 4);
        assert!((0..4).all(|v| g.degree(v) == 2));
        let g = build_open(kind("6.6.6"), 1, 1).unwrap();
        assert_eq!(g.degree(0), 0);
        assert_eq!(degree_histogram(&g), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn klein_sizes() {
        let g = build_klein_3_6(4).unwrap();
        assert_eq!(g.len(), 16);
        assert!((0..16).all(|v| g.degree(v) == 3));
        assert!(g.is_symmetric());
        let g = build_klein_3_6(1).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.degree(0), 3);
        let g = build_klein_3_6(13).unwrap();
        assert_eq!(g.len(), 169);
        assert!((0..169).all(|v| g.degree(v) == 3));
        assert!(g.is_symmetric());
    }

    #[test]
    fn klein_endpoint_count_matches_half_the_torus() {
        for n in 1..=6 {
            let k = build_klein_3_6(n).unwrap();
            let t = build_torus(TessKind::Triangular, n, n).unwrap();
            assert_eq!(2 * k.degree_sum(), t.degree_sum());
        }
    }

    #[test]
    fn klein_rejects_other_kinds() {
        assert!(matches!(
            build(TessKind::Square, 3, 3, Quotient::Klein),
            Err(Error::KleinUnsupported)
        ));
        assert!(matches!(
            build(TessKind::Triangular, 3, 4, Quotient::Klein),
            Err(Error::KleinUnsupported)
        ));
    }

    #[test]
    fn zero_size_is_rejected() {
        assert!(build_torus(TessKind::Square, 0, 3).is_err());
        assert!(build_open(TessKind::Square, 2, 0).is_err());
        assert!(build_klein_3_6(0).is_err());
    }

    #[test]
    fn histograms() {
        let g = build_torus(kind("3.3.3.4.4"), 3, 3).unwrap();
        assert_eq!(degree_histogram(&g), BTreeMap::from([(3, 18), (4, 9)]));
        let g = build_torus(kind("3.6.3.6"), 2, 2).unwrap();
        assert_eq!(degree_histogram(&g), BTreeMap::from([(3, 8), (6, 4)]));
    }

    #[test]
    fn torus_degrees_equal_sides_for_small_grids() {
        for kind in catalog() {
            for m in 1..=4 {
                for n in 1..=4 {
                    let g = build_torus(kind, m, n).unwrap();
                    assert_eq!(g.len(), m * n * cluster_spec(kind).len());
                    for v in &g.vertices {
                        assert_eq!(g.degree(v.id), v.sides as usize, "{kind} {m}x{n} {v:?}");
                    }
                    assert!(g.is_symmetric(), "{kind} {m}x{n}");
                    assert_eq!(g.degree_sum() % 2, 0);
                }
            }
        }
    }

    #[test]
    fn open_is_subgraph_of_torus() {
        for kind in catalog() {
            for (m, n) in [(2, 2), (3, 4), (4, 3)] {
                let open = build_open(kind, m, n).unwrap();
                let torus = build_torus(kind, m, n).unwrap();
                assert_eq!(open.vertices, torus.vertices);
                assert!(open.is_symmetric());
                let om = open.edge_multiplicities();
                let tm = torus.edge_multiplicities();
                for (e, c) in om {
                    assert!(tm.get(&e).copied().unwrap_or(0) >= c, "{kind} {e:?}");
                }
                // interior vertices keep full degree
                for v in &open.vertices {
                    if v.i > 0 && v.j > 0 && v.i + 1 < m && v.j + 1 < n {
                        assert_eq!(open.degree(v.id), v.sides as usize);
                    }
                    assert!(open.degree(v.id) <= v.sides as usize);
                }
            }
        }
    }
}
