//! The eleven edge-to-edge tessellations by regular polygons and their
//! minimal translational clusters.
//!
//! A cluster is a small set of tiles that covers the plane when translated by
//! the lattice spanned by `v1` and `v2`. Tile `b` of cluster `(i + di, j + dj)`
//! shares an edge with tile `a` of cluster `(i, j)` for every inter-cluster
//! edge `(a, b, (di, dj))`. Adjacency is encoded by hand; geometry is carried
//! along only for drawing.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TessKind {
    /// 4.4.4.4
    Square,
    /// 6.6.6
    Hexagonal,
    /// 3.3.3.3.3.3
    Triangular,
    /// 3.3.3.4.4
    ElongatedTriangular,
    /// 3.6.3.6
    Trihexagonal,
    /// 3.4.6.4
    Rhombitrihexagonal,
    /// 4.8.8
    TruncatedSquare,
    /// 4.6.12
    TruncatedTrihexagonal,
    /// 3.12.12
    TruncatedHexagonal,
    /// 3.3.4.3.4
    SnubSquare,
    /// 3.3.3.3.6
    SnubTrihexagonal,
}

const ALL: [TessKind; 11] = [
    TessKind::Square,
    TessKind::Hexagonal,
    TessKind::Triangular,
    TessKind::ElongatedTriangular,
    TessKind::Trihexagonal,
    TessKind::Rhombitrihexagonal,
    TessKind::TruncatedSquare,
    TessKind::TruncatedTrihexagonal,
    TessKind::TruncatedHexagonal,
    TessKind::SnubSquare,
    TessKind::SnubTrihexagonal,
];

/// All eleven kinds: the three regular tilings first, then the eight
/// semi-regular ones.
pub fn catalog() -> Vec<TessKind> {
    ALL.to_vec()
}

impl TessKind {
    /// Polygon side counts around a vertex, in canonical order.
    pub fn arrangement(self) -> &'static [u32] {
        match self {
            TessKind::Square => &[4, 4, 4, 4],
            TessKind::Hexagonal => &[6, 6, 6],
            TessKind::Triangular => &[3, 3, 3, 3, 3, 3],
            TessKind::ElongatedTriangular => &[3, 3, 3, 4, 4],
            TessKind::Trihexagonal => &[3, 6, 3, 6],
            TessKind::Rhombitrihexagonal => &[3, 4, 6, 4],
            TessKind::TruncatedSquare => &[4, 8, 8],
            TessKind::TruncatedTrihexagonal => &[4, 6, 12],
            TessKind::TruncatedHexagonal => &[3, 12, 12],
            TessKind::SnubSquare => &[3, 3, 4, 3, 4],
            TessKind::SnubTrihexagonal => &[3, 3, 3, 3, 6],
        }
    }

    pub fn name(self) -> String {
        self.arrangement()
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn common_name(self) -> &'static str {
        match self {
            TessKind::Square => "square",
            TessKind::Hexagonal => "hexagonal",
            TessKind::Triangular => "triangular",
            TessKind::ElongatedTriangular => "elongated triangular",
            TessKind::Trihexagonal => "trihexagonal",
            TessKind::Rhombitrihexagonal => "rhombitrihexagonal",
            TessKind::TruncatedSquare => "truncated square",
            TessKind::TruncatedTrihexagonal => "truncated trihexagonal",
            TessKind::TruncatedHexagonal => "truncated hexagonal",
            TessKind::SnubSquare => "snub square",
            TessKind::SnubTrihexagonal => "snub trihexagonal",
        }
    }

    pub fn is_regular(self) -> bool {
        matches!(self, TessKind::Square | TessKind::Hexagonal | TessKind::Triangular)
    }
}

impl fmt::Display for TessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Lexicographically smallest rotation or reflection of a cyclic sequence.
fn canonical_cycle(seq: &[u32]) -> Vec<u32> {
    let n = seq.len();
    let mut best: Option<Vec<u32>> = None;
    let reversed: Vec<u32> = seq.iter().rev().copied().collect();
    for base in [seq, reversed.as_slice()] {
        for r in 0..n {
            let cand: Vec<u32> = (0..n).map(|t| base[(r + t) % n]).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Accepts canonical names (`3.4.6.4`), any rotation or reflection of them,
/// tuple notation with exponents (`(3^3,4^2)`, `(12,6,4)`, `(8^2,4)`) and
/// common names (`snub square`, `snub-square`).
impl FromStr for TessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || Error::UnknownKind(s.to_string());
        let t = s.trim();
        let lowered = t.to_ascii_lowercase().replace(['-', '_'], " ");
        if let Some(kind) = ALL.iter().find(|k| k.common_name() == lowered) {
            return Ok(*kind);
        }
        let body = t.trim_start_matches('(').trim_end_matches(')');
        let mut seq = Vec::new();
        for part in body.split(['.', ',']) {
            let part = part.trim();
            if part.is_empty() {
                return Err(unknown());
            }
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<usize>().map_err(|_| unknown())?),
                None => (part, 1),
            };
            let base: u32 = base.parse().map_err(|_| unknown())?;
            if exp == 0 || exp > 12 {
                return Err(unknown());
            }
            seq.extend(std::iter::repeat_n(base, exp));
        }
        let canon = canonical_cycle(&seq);
        ALL.iter()
            .copied()
            .find(|k| k.arrangement() == canon.as_slice())
            .ok_or_else(unknown)
    }
}

impl Serialize for TessKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for TessKind {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TileSpec {
    /// 1-based position inside the cluster.
    pub index: usize,
    pub sides: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InterEdge {
    pub from: usize,
    pub to: usize,
    pub offset: (i32, i32),
}

/// A regular polygon with unit edges, placed by its center and the polar
/// angle (degrees) of its first corner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TileOutline {
    pub center: [f64; 2],
    pub angle_deg: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Geometry {
    pub v1: [f64; 2],
    pub v2: [f64; 2],
    pub outlines: Vec<TileOutline>,
}

impl Geometry {
    /// Corners of tile `k` (1-based) of cluster `(i, j)`, counter-clockwise.
    pub fn polygon(&self, sides: u32, k: usize, i: i64, j: i64) -> Vec<[f64; 2]> {
        let o = &self.outlines[k - 1];
        let cx = o.center[0] + i as f64 * self.v1[0] + j as f64 * self.v2[0];
        let cy = o.center[1] + i as f64 * self.v1[1] + j as f64 * self.v2[1];
        let radius = 0.5 / (std::f64::consts::PI / sides as f64).sin();
        (0..sides)
            .map(|t| {
                let a = (o.angle_deg + 360.0 * t as f64 / sides as f64).to_radians();
                [cx + radius * a.cos(), cy + radius * a.sin()]
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterSpec {
    pub kind: TessKind,
    pub tiles: Vec<TileSpec>,
    pub intra_edges: Vec<(usize, usize)>,
    pub inter_edges: Vec<InterEdge>,
    pub geometry: Geometry,
}

impl ClusterSpec {
    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn sides(&self, k: usize) -> u32 {
        self.tiles[k - 1].sides
    }
}

fn spec(
    kind: TessKind,
    sides: &[u32],
    intra: &[(usize, usize)],
    inter: &[(usize, usize, i32, i32)],
    v1: [f64; 2],
    v2: [f64; 2],
    outlines: &[([f64; 2], f64)],
) -> ClusterSpec {
    ClusterSpec {
        kind,
        tiles: sides
            .iter()
            .enumerate()
            .map(|(i, &s)| TileSpec { index: i + 1, sides: s })
            .collect(),
        intra_edges: intra.to_vec(),
        inter_edges: inter
            .iter()
            .map(|&(from, to, di, dj)| InterEdge {
                from,
                to,
                offset: (di, dj),
            })
            .collect(),
        geometry: Geometry {
            v1,
            v2,
            outlines: outlines
                .iter()
                .map(|&(center, angle_deg)| TileOutline { center, angle_deg })
                .collect(),
        },
    }
}

const S3: f64 = 1.732_050_807_568_877_2;
const S2: f64 = std::f64::consts::SQRT_2;
const H: f64 = S3 / 2.0;

/// The hard-coded cluster for `kind`.
///
/// Tile orderings that other parts of the crate rely on:
/// * `3.3.3.3.3.3`: 1 lower (upward) triangle, 2 upper (downward) triangle;
///   triangle 1 of `(i, j)` touches triangle 2 of `(i, j)`, `(i-1, j)` and
///   `(i, j-1)`.
/// * `3.3.3.4.4`: 1 square, 2 and 3 triangles.
/// * `3.4.6.4`: 1 hexagon, 2 square, 3 triangle, 4 square, 5 triangle,
///   6 square.
pub fn cluster_spec(kind: TessKind) -> ClusterSpec {
    use TessKind::*;
    match kind {
        Square => spec(
            kind,
            &[4],
            &[],
            &[(1, 1, 1, 0), (1, 1, 0, 1)],
            [1.0, 0.0],
            [0.0, 1.0],
            &[([0.5, 0.5], 45.0)],
        ),
        Hexagonal => spec(
            kind,
            &[6],
            &[],
            &[(1, 1, 1, 0), (1, 1, 0, 1), (1, 1, 1, -1)],
            [S3, 0.0],
            [H, 1.5],
            &[([0.0, 0.0], 90.0)],
        ),
        Triangular => spec(
            kind,
            &[3, 3],
            &[(1, 2)],
            &[(1, 2, -1, 0), (1, 2, 0, -1)],
            [1.0, 0.0],
            [0.5, H],
            &[([0.5, H / 3.0], -150.0), ([1.0, 2.0 * H / 3.0], -90.0)],
        ),
        ElongatedTriangular => spec(
            kind,
            &[4, 3, 3],
            &[(1, 2), (2, 3)],
            &[(1, 1, 1, 0), (1, 3, 0, 1), (2, 3, 1, 0)],
            [1.0, 0.0],
            [0.5, 1.0 + H],
            &[
                ([0.5, 0.5], -135.0),
                ([0.5, -H / 3.0], 150.0),
                ([0.0, -2.0 * H / 3.0], 90.0),
            ],
        ),
        Trihexagonal => spec(
            kind,
            &[3, 3, 6],
            &[(1, 3), (2, 3)],
            &[(1, 3, 0, 1), (1, 3, 1, 0), (2, 3, -1, 1), (2, 3, 0, 1)],
            [2.0, 0.0],
            [1.0, S3],
            &[
                ([1.0, S3 / 3.0], -90.0),
                ([0.0, 2.0 * S3 / 3.0], -150.0),
                ([0.0, 0.0], 0.0),
            ],
        ),
        Rhombitrihexagonal => {
            let l = 1.0 + S3;
            spec(
                kind,
                &[6, 4, 3, 4, 3, 4],
                &[(1, 2), (1, 4), (1, 6), (2, 3), (3, 4), (4, 5), (5, 6)],
                &[
                    (1, 2, 1, -1),
                    (1, 4, 0, -1),
                    (1, 6, -1, 0),
                    (2, 5, -1, 0),
                    (3, 6, -1, 1),
                ],
                [l, 0.0],
                [l / 2.0, l * H],
                &[
                    ([0.0, 0.0], 90.0),
                    ([-l / 4.0, l * H / 2.0], 165.0),
                    ([0.0, l / S3], -90.0),
                    ([l / 4.0, l * H / 2.0], 105.0),
                    ([l / 2.0, l / (2.0 * S3)], -150.0),
                    ([l / 2.0, 0.0], 45.0),
                ],
            )
        }
        TruncatedSquare => {
            let w = 1.0 + S2;
            spec(
                kind,
                &[4, 8],
                &[(1, 2)],
                &[
                    (1, 2, 0, 1),
                    (1, 2, 1, 0),
                    (1, 2, 1, 1),
                    (2, 2, 0, 1),
                    (2, 2, 1, 0),
                ],
                [w, 0.0],
                [0.0, w],
                &[([w / 2.0, w / 2.0], 0.0), ([0.0, 0.0], 22.5)],
            )
        }
        TruncatedTrihexagonal => {
            let d = 3.0 + S3;
            spec(
                kind,
                &[4, 4, 4, 6, 6, 12],
                &[
                    (1, 4),
                    (1, 6),
                    (2, 4),
                    (2, 5),
                    (2, 6),
                    (3, 5),
                    (3, 6),
                    (4, 6),
                    (5, 6),
                ],
                &[
                    (1, 5, 1, -1),
                    (1, 6, 1, 0),
                    (2, 6, 0, 1),
                    (3, 4, -1, 0),
                    (3, 6, -1, 1),
                    (4, 6, 0, 1),
                    (4, 6, 1, 0),
                    (5, 6, -1, 1),
                    (5, 6, 0, 1),
                ],
                [d, 0.0],
                [d / 2.0, d * H],
                &[
                    ([d / 2.0, 0.0], 45.0),
                    ([d / 4.0, d * H / 2.0], 105.0),
                    ([-d / 4.0, d * H / 2.0], 165.0),
                    ([d / 2.0, d / (2.0 * S3)], 0.0),
                    ([0.0, d / S3], 0.0),
                    ([0.0, 0.0], 15.0),
                ],
            )
        }
        TruncatedHexagonal => {
            let d = 2.0 + S3;
            spec(
                kind,
                &[3, 3, 12],
                &[(1, 3), (2, 3)],
                &[
                    (1, 3, 0, 1),
                    (1, 3, 1, 0),
                    (2, 3, -1, 1),
                    (2, 3, 0, 1),
                    (3, 3, 0, 1),
                    (3, 3, 1, -1),
                    (3, 3, 1, 0),
                ],
                [d, 0.0],
                [d / 2.0, d * H],
                &[
                    ([d / 2.0, d / (2.0 * S3)], 30.0),
                    ([0.0, d / S3], 90.0),
                    ([0.0, 0.0], 15.0),
                ],
            )
        }
        SnubSquare => {
            // Period (1 + sqrt 3) / sqrt 2; the two squares are turned by
            // +15 and -15 degrees against the lattice axes.
            let a = (1.0 + S3) / S2;
            spec(
                kind,
                &[4, 4, 3, 3, 3, 3],
                &[(1, 3), (2, 3), (2, 4), (2, 5), (2, 6)],
                &[
                    (1, 4, -1, -1),
                    (1, 5, 0, -1),
                    (1, 6, -1, 0),
                    (3, 4, 0, -1),
                    (5, 6, -1, 0),
                ],
                [a, 0.0],
                [0.0, a],
                &[
                    ([0.0, 0.0], 60.0),
                    ([a / 2.0, a / 2.0], 30.0),
                    ([0.761_801_681_057_137, 0.204_124_145_231_932], 135.0),
                    ([1.170_049_971_521, 1.727_727_507_346_205], -165.0),
                    ([0.204_124_145_231_932, 1.170_049_971_521], -75.0),
                    ([1.727_727_507_346_205, 0.761_801_681_057_137], -135.0),
                ],
            )
        }
        SnubTrihexagonal => spec(
            kind,
            &[6, 3, 3, 3, 3, 3, 3, 3, 3],
            &[
                (1, 2),
                (2, 8),
                (3, 8),
                (4, 6),
                (4, 9),
                (5, 9),
                (6, 8),
                (7, 9),
            ],
            &[
                (1, 3, 0, -1),
                (1, 4, 0, -1),
                (1, 5, -1, 0),
                (1, 6, -1, 0),
                (1, 7, -1, -1),
                (2, 7, 0, -1),
                (3, 5, -1, 0),
            ],
            [2.5, H],
            [0.5, 3.0 * H],
            &[
                ([0.0, 0.0], 0.0),
                ([1.0, S3 / 3.0], 150.0),
                ([0.5, 5.0 * S3 / 6.0], 150.0),
                ([1.5, 7.0 * S3 / 6.0], -150.0),
                ([2.5, 7.0 * S3 / 6.0], -150.0),
                ([1.5, 5.0 * S3 / 6.0], -90.0),
                ([2.0, 5.0 * S3 / 3.0], 90.0),
                ([1.0, 2.0 * S3 / 3.0], -150.0),
                ([2.0, 4.0 * S3 / 3.0], 150.0),
            ],
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    BadTileIndex { edge: String },
    OffsetOutOfRange { edge: String },
    SelfEdgeInCluster { tile: usize },
    DegreeMismatch { tile: usize, sides: u32, degree: usize },
    Handshake { side_sum: u32, edges: usize },
    UnknownPolygon { tile: usize, sides: u32 },
    MissingPolygon { sides: u32 },
    RatioMismatch { detail: String },
    GeometryLength { outlines: usize, tiles: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::BadTileIndex { edge } => write!(f, "edge {edge} refers to a missing tile"),
            Diagnostic::OffsetOutOfRange { edge } => {
                write!(f, "edge {edge} has an offset outside {{-1,0,1}}^2")
            }
            Diagnostic::SelfEdgeInCluster { tile } => {
                write!(f, "tile {tile} is listed as adjacent to itself inside the cluster")
            }
            Diagnostic::DegreeMismatch {
                tile,
                sides,
                degree,
            } => write!(f, "degree ≠ sides: tile {tile} has {sides} sides but {degree} adjacencies"),
            Diagnostic::Handshake { side_sum, edges } => write!(
                f,
                "handshake fails: side counts sum to {side_sum} but the cluster has {edges} edges"
            ),
            Diagnostic::UnknownPolygon { tile, sides } => {
                write!(f, "tile {tile} is a {sides}-gon, which does not occur in the arrangement")
            }
            Diagnostic::MissingPolygon { sides } => {
                write!(f, "the arrangement uses {sides}-gons but the cluster has none")
            }
            Diagnostic::RatioMismatch { detail } => {
                write!(f, "ratio violates vertex-configuration identity ({detail})")
            }
            Diagnostic::GeometryLength { outlines, tiles } => {
                write!(f, "{outlines} outlines for {tiles} tiles")
            }
        }
    }
}

/// Checks the structural invariants of a cluster; an empty result means the
/// spec is consistent.
pub fn validate_cluster(spec: &ClusterSpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let k = spec.tiles.len();
    let valid = |t: usize| (1..=k).contains(&t);
    let mut degree = vec![0usize; k + 1];

    for &(a, b) in &spec.intra_edges {
        if !valid(a) || !valid(b) {
            out.push(Diagnostic::BadTileIndex {
                edge: format!("({a},{b})"),
            });
            continue;
        }
        if a == b {
            out.push(Diagnostic::SelfEdgeInCluster { tile: a });
        }
        degree[a] += 1;
        degree[b] += 1;
    }
    for e in &spec.inter_edges {
        let label = format!("({},{},({},{}))", e.from, e.to, e.offset.0, e.offset.1);
        if !valid(e.from) || !valid(e.to) {
            out.push(Diagnostic::BadTileIndex { edge: label });
            continue;
        }
        if e.offset.0.abs() > 1 || e.offset.1.abs() > 1 || e.offset == (0, 0) {
            out.push(Diagnostic::OffsetOutOfRange { edge: label });
        }
        degree[e.from] += 1;
        degree[e.to] += 1;
    }
    for t in &spec.tiles {
        if degree[t.index] != t.sides as usize {
            out.push(Diagnostic::DegreeMismatch {
                tile: t.index,
                sides: t.sides,
                degree: degree[t.index],
            });
        }
    }
    let side_sum: u32 = spec.tiles.iter().map(|t| t.sides).sum();
    let edges = spec.intra_edges.len() + spec.inter_edges.len();
    if side_sum as usize != 2 * edges {
        out.push(Diagnostic::Handshake { side_sum, edges });
    }

    // n_s * s / c_s must be the same (the vertex count per cluster) for every
    // polygon size s occurring c_s times around a vertex.
    let arrangement = spec.kind.arrangement();
    let mut sizes: Vec<u32> = arrangement.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    for t in &spec.tiles {
        if !sizes.contains(&t.sides) {
            out.push(Diagnostic::UnknownPolygon {
                tile: t.index,
                sides: t.sides,
            });
        }
    }
    let mut reference: Option<(u64, u64, u32)> = None;
    for &s in &sizes {
        let occurrences = arrangement.iter().filter(|&&x| x == s).count() as u64;
        let tiles = spec.tiles.iter().filter(|t| t.sides == s).count() as u64;
        if tiles == 0 {
            out.push(Diagnostic::MissingPolygon { sides: s });
            continue;
        }
        let (num, den) = (tiles * s as u64, occurrences);
        match reference {
            None => reference = Some((num, den, s)),
            Some((rn, rd, rs)) => {
                if num * rd != rn * den {
                    out.push(Diagnostic::RatioMismatch {
                        detail: format!(
                            "{tiles} {s}-gons against {} {rs}-gons",
                            spec.tiles.iter().filter(|t| t.sides == rs).count()
                        ),
                    });
                }
            }
        }
    }
    if spec.geometry.outlines.len() != k {
        out.push(Diagnostic::GeometryLength {
            outlines: spec.geometry.outlines.len(),
            tiles: k,
        });
    }
    out
}
