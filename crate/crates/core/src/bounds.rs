//! Aggregated class LP bounds.
//!
//! Summing the per-vertex rows over every vertex of a class turns the
//! half-dependence system of a torus into a tiny LP in the class densities.
//! Classes are either polygon shapes or tile positions inside the cluster.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfdom::half_cap;
use crate::lp::{lp_optimum, LinearSystem, LpSolution};
use crate::quotient::{build_torus, Quotient, QuotientGraph};
use crate::rational::Rational;
use crate::tessellation::TessKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Polygon,
    Position,
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Granularity::Polygon => "polygon",
            Granularity::Position => "position",
        })
    }
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "polygon" => Ok(Granularity::Polygon),
            "position" => Ok(Granularity::Position),
            _ => Err(Error::schema("granularity", format!("expected polygon or position, got `{s}`"))),
        }
    }
}

pub fn polygon_name(sides: u32) -> String {
    match sides {
        3 => "triangle".into(),
        4 => "square".into(),
        6 => "hexagon".into(),
        8 => "octagon".into(),
        12 => "dodecagon".into(),
        s => format!("{s}-gon"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub label: String,
    /// Vertices of this class per cluster.
    pub count: usize,
    pub degree: usize,
    /// Every vertex of the class has the same neighbour-class profile.
    pub uniform: bool,
}

/// `incidence[a][b]` is the mean number of class-`b` neighbour entries of a
/// class-`a` vertex, exact whenever class `a` is uniform.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassIncidence {
    pub kind: TessKind,
    pub granularity: Granularity,
    pub cluster_size: usize,
    pub classes: Vec<ClassInfo>,
    pub incidence: Vec<Vec<Rational>>,
}

impl ClassIncidence {
    pub fn is_uniform(&self) -> bool {
        self.classes.iter().all(|c| c.uniform)
    }

    pub fn class_of(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    /// `f_a`: class size as a fraction of all vertices.
    pub fn fraction(&self, a: usize) -> Rational {
        Rational::ratio(self.classes[a].count, self.cluster_size)
    }
}

/// Class index of every vertex, with labels, for the given granularity.
fn classify(graph: &QuotientGraph, granularity: Granularity) -> (Vec<usize>, Vec<String>) {
    let mut keys: BTreeMap<(usize, u32), usize> = BTreeMap::new();
    for v in &graph.vertices {
        let key = match granularity {
            Granularity::Polygon => (0, v.sides),
            Granularity::Position => (v.k, v.sides),
        };
        let next = keys.len();
        keys.entry(key).or_insert(next);
    }
    // classes ordered by position, or by side count for polygons
    let ordered: Vec<(usize, u32)> = keys.keys().copied().collect();
    let index: BTreeMap<(usize, u32), usize> =
        ordered.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let labels = ordered
        .iter()
        .map(|&(k, s)| match granularity {
            Granularity::Polygon => polygon_name(s),
            Granularity::Position => format!("{}#{}", polygon_name(s), k),
        })
        .collect();
    let of = graph
        .vertices
        .iter()
        .map(|v| match granularity {
            Granularity::Polygon => index[&(0, v.sides)],
            Granularity::Position => index[&(v.k, v.sides)],
        })
        .collect();
    (of, labels)
}

/// Class incidence read off a torus graph.
pub fn class_incidence_of_graph(graph: &QuotientGraph, granularity: Granularity) -> Result<ClassIncidence> {
    if graph.quotient != Quotient::Torus {
        return Err(Error::schema("graph", "class incidence needs a torus"));
    }
    let (of, labels) = classify(graph, granularity);
    let nc = labels.len();
    let mut members = vec![0usize; nc];
    let mut profile: Vec<Option<Vec<usize>>> = vec![None; nc];
    let mut uniform = vec![true; nc];
    let mut sums = vec![vec![0usize; nc]; nc];
    let mut degree = vec![0usize; nc];
    for v in 0..graph.len() {
        let a = of[v];
        members[a] += 1;
        degree[a] = graph.degree(v);
        let mut p = vec![0usize; nc];
        for &w in graph.neighbors(v) {
            p[of[w]] += 1;
        }
        for b in 0..nc {
            sums[a][b] += p[b];
        }
        match &profile[a] {
            None => profile[a] = Some(p),
            Some(q) if *q != p => uniform[a] = false,
            _ => {}
        }
    }
    let clusters = graph.m * graph.n;
    let classes = (0..nc)
        .map(|a| ClassInfo {
            label: labels[a].clone(),
            count: members[a] / clusters,
            degree: degree[a],
            uniform: uniform[a],
        })
        .collect();
    let incidence = (0..nc)
        .map(|a| (0..nc).map(|b| Rational::ratio(sums[a][b], members[a])).collect())
        .collect();
    Ok(ClassIncidence {
        kind: graph.kind,
        granularity,
        cluster_size: graph.len() / clusters,
        classes,
        incidence,
    })
}

/// Class incidence of `kind`, read off its 3x3 torus.
pub fn class_incidence(kind: TessKind, granularity: Granularity) -> ClassIncidence {
    let g = build_torus(kind, 3, 3).expect("3x3 torus is always valid");
    class_incidence_of_graph(&g, granularity).expect("torus input")
}

/// Row `a`: `c_a y_a + sum_b M[b][a] y_b <= d_a f_a`, and `y_a <= f_a`.
pub fn class_system(inc: &ClassIncidence) -> LinearSystem {
    let nc = inc.classes.len();
    let mut sys = LinearSystem::new(nc);
    for a in 0..nc {
        let d = inc.classes[a].degree;
        let mut coeffs = vec![(a, Rational::from_integer((d - half_cap(d)) as i64))];
        for b in 0..nc {
            if !inc.incidence[b][a].is_zero() {
                coeffs.push((b, inc.incidence[b][a].clone()));
            }
        }
        sys.push_row(coeffs, Rational::from_integer(d as i64) * inc.fraction(a));
    }
    sys.upper = (0..nc).map(|a| inc.fraction(a)).collect();
    sys
}

pub fn solve_class_system(inc: &ClassIncidence) -> Result<LpSolution> {
    let sys = class_system(inc);
    lp_optimum(&sys, &vec![Rational::one(); sys.num_vars])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    AggregatedLp,
    Pinned,
    WeightedLp,
    SolverExact,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::AggregatedLp => "aggregated-lp",
            Provenance::Pinned => "pinned",
            Provenance::WeightedLp => "weighted-lp",
            Provenance::SolverExact => "solver-exact",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Certificate {
    /// Optimal class densities, one per class label.
    ClassDensities { classes: Vec<(String, Rational)> },
    /// An inner exact solve.
    Solver {
        cardinality: usize,
        free_vertices: usize,
        optimal: bool,
        witness: Vec<usize>,
    },
    /// LP optimum of the weighted objective and the total weight.
    Weighted { optimum: Rational, total_weight: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub value: Rational,
    pub provenance: Provenance,
    pub certificate: Certificate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub granularity: Option<Granularity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Upper bound on the limiting density of `kind` from the class LP.
///
/// Polygon classes that are not uniform are replaced by position classes;
/// the report records the granularity actually used.
pub fn aggregated_lp_bound(kind: TessKind, granularity: Granularity) -> Result<BoundReport> {
    let mut inc = class_incidence(kind, granularity);
    let mut note = None;
    if !inc.is_uniform() {
        let bad: Vec<&str> = inc
            .classes
            .iter()
            .filter(|c| !c.uniform)
            .map(|c| c.label.as_str())
            .collect();
        note = Some(format!(
            "non-uniform {} classes ({}); fell back to position classes",
            granularity,
            bad.join(", ")
        ));
        inc = class_incidence(kind, Granularity::Position);
    }
    let sol = solve_class_system(&inc)?;
    Ok(BoundReport {
        value: sol.value.clone(),
        provenance: Provenance::AggregatedLp,
        certificate: Certificate::ClassDensities {
            classes: inc
                .classes
                .iter()
                .map(|c| c.label.clone())
                .zip(sol.primal.iter().cloned())
                .collect(),
        },
        granularity: Some(inc.granularity),
        note,
    })
}
