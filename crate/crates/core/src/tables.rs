//! Reference tables: published densities for small tori and the aggregated
//! bounds, recomputed and compared cell by cell.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::bounds::{aggregated_lp_bound, Granularity};
use crate::error::{Error, Result};
use crate::quotient::{build, Quotient};
use crate::rational::Rational;
use crate::solver::{solve_exact, Method, SolveOptions, Status};
use crate::tessellation::TessKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableId {
    T36Torus,
    T36Klein,
    T3344Torus,
    T3464Torus,
    BoundsAll,
}

impl TableId {
    pub const ALL: [TableId; 5] = [
        TableId::T36Torus,
        TableId::T36Klein,
        TableId::T3344Torus,
        TableId::T3464Torus,
        TableId::BoundsAll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::T36Torus => "t36_torus",
            TableId::T36Klein => "t36_klein",
            TableId::T3344Torus => "t3344_torus",
            TableId::T3464Torus => "t3464_torus",
            TableId::BoundsAll => "bounds_all",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            TableId::T36Torus => "3.3.3.3.3.3 on the n x n torus",
            TableId::T36Klein => "3.3.3.3.3.3 on the n x n Klein quotient",
            TableId::T3344Torus => "3.3.3.4.4 on the n x n torus",
            TableId::T3464Torus => "3.4.6.4 on the n x n torus",
            TableId::BoundsAll => "aggregated class-LP upper bounds",
        }
    }

    fn kind_and_quotient(self) -> Option<(TessKind, Quotient)> {
        match self {
            TableId::T36Torus => Some((TessKind::Triangular, Quotient::Torus)),
            TableId::T36Klein => Some((TessKind::Triangular, Quotient::Klein)),
            TableId::T3344Torus => Some((TessKind::ElongatedTriangular, Quotient::Torus)),
            TableId::T3464Torus => Some((TessKind::Rhombitrihexagonal, Quotient::Torus)),
            TableId::BoundsAll => None,
        }
    }

    fn min_size(self) -> usize {
        match self {
            TableId::T3464Torus => 1,
            _ => 2,
        }
    }

    /// Published values by size `n` (grids are `n x n`).
    pub fn expected(self) -> Vec<(usize, Expected)> {
        use Relation::{AtLeast as Ge, Equal as Eq};
        let e = |n: usize, rel, p, q| (n, Expected { relation: rel, value: Rational::new(p, q) });
        match self {
            TableId::T36Torus | TableId::T36Klein => vec![
                e(2, Eq, 1, 2),
                e(3, Eq, 5, 9),
                e(4, Eq, 9, 16),
                e(5, Eq, 14, 25),
                e(6, Eq, 5, 9),
                e(7, Ge, 27, 49),
                e(8, Ge, 9, 16),
                e(9, Ge, 5, 9),
            ],
            TableId::T3344Torus => vec![
                e(2, Eq, 1, 2),
                e(3, Eq, 5, 9),
                e(4, Eq, 7, 12),
                e(5, Eq, 3, 5),
                e(6, Eq, 11, 18),
                e(7, Ge, 4, 7),
            ],
            TableId::T3464Torus => vec![e(1, Eq, 1, 2), e(2, Eq, 7, 12), e(3, Eq, 31, 54), e(4, Eq, 7, 12)],
            TableId::BoundsAll => Vec::new(),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|t| t.name() == s.trim())
            .ok_or_else(|| {
                let names: Vec<&str> = TableId::ALL.iter().map(|t| t.name()).collect();
                Error::schema("table id", format!("unknown table `{s}` (known: {})", names.join(", ")))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub relation: Relation,
    pub value: Rational,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.relation {
            Relation::Equal => write!(f, "{}", self.value),
            Relation::AtLeast => write!(f, ">= {}", self.value),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Matches,
    Differs,
    /// The budget ran out before the cell could be decided.
    Open,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Matches => "matches",
            Verdict::Differs => "differs",
            Verdict::Open => "open",
        })
    }
}

#[derive(Clone, Debug)]
pub struct TableSpec {
    pub id: TableId,
    /// Largest `n`; smaller published rows are always included.
    pub max_n: usize,
    pub time_limit: Option<Duration>,
    pub threads: Option<usize>,
}

impl TableSpec {
    pub fn new(id: TableId, max_n: usize) -> Self {
        TableSpec {
            id,
            max_n,
            time_limit: None,
            threads: None,
        }
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.id
            .expected()
            .into_iter()
            .map(|(n, _)| n)
            .filter(|&n| n >= self.id.min_size() && n <= self.max_n)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cardinality: Option<usize>,
    pub value: Rational,
    /// `optimal`, `lower_bound_only` or `bound`.
    pub status: String,
    pub expected: Expected,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub id: TableId,
    pub title: String,
    pub cells: Vec<Cell>,
}

impl TableReport {
    pub fn all_match(&self) -> bool {
        self.cells.iter().all(|c| c.verdict == Verdict::Matches)
    }

    pub fn any_differs(&self) -> bool {
        self.cells.iter().any(|c| c.verdict == Verdict::Differs)
    }

    pub fn to_text(&self) -> String {
        let header = ["cell", "|V|", "card", "value", "status", "expected", "verdict"];
        let rows: Vec<[String; 7]> = self
            .cells
            .iter()
            .map(|c| {
                let value = match c.status.as_str() {
                    "lower_bound_only" => format!(">= {}", c.value),
                    _ => c.value.to_string(),
                };
                [
                    c.label.clone(),
                    c.vertices.map_or("-".into(), |v| v.to_string()),
                    c.cardinality.map_or("-".into(), |v| v.to_string()),
                    value,
                    c.status.clone(),
                    c.expected.to_string(),
                    c.verdict.to_string(),
                ]
            })
            .collect();
        let mut width = header.map(str::len);
        for r in &rows {
            for (w, s) in width.iter_mut().zip(r) {
                *w = (*w).max(s.chars().count());
            }
        }
        let line = |cols: Vec<&str>| {
            cols.iter()
                .zip(width)
                .map(|(s, w)| format!("{s:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = format!("{} ({})\n", self.title, self.id);
        out.push_str(&line(header.to_vec()));
        out.push('\n');
        for r in &rows {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
            out.push('\n');
        }
        out
    }
}

fn verdict(expected: &Expected, value: &Rational, status: Status) -> Verdict {
    match (expected.relation, status) {
        (Relation::AtLeast, _) if value >= &expected.value => Verdict::Matches,
        (Relation::AtLeast, Status::Optimal) => Verdict::Differs,
        (Relation::AtLeast, Status::LowerBoundOnly) => Verdict::Open,
        (Relation::Equal, Status::Optimal) if value == &expected.value => Verdict::Matches,
        (Relation::Equal, Status::Optimal) => Verdict::Differs,
        (Relation::Equal, Status::LowerBoundOnly) if value > &expected.value => Verdict::Differs,
        (Relation::Equal, Status::LowerBoundOnly) => Verdict::Open,
    }
}

fn bounds_table() -> Result<Vec<Cell>> {
    let expected = [
        (TessKind::Hexagonal, 2, 3),
        (TessKind::Triangular, 3, 5),
        (TessKind::ElongatedTriangular, 13, 21),
        (TessKind::Trihexagonal, 2, 3),
        (TessKind::Rhombitrihexagonal, 19, 30),
        (TessKind::TruncatedHexagonal, 7, 9),
    ];
    expected
        .into_iter()
        .map(|(kind, p, q)| {
            let rep = aggregated_lp_bound(kind, Granularity::Polygon)?;
            let exp = Expected {
                relation: Relation::Equal,
                value: Rational::new(p, q),
            };
            let verdict = if rep.value == exp.value { Verdict::Matches } else { Verdict::Differs };
            Ok(Cell {
                label: kind.name(),
                size: None,
                vertices: None,
                cardinality: None,
                value: rep.value,
                status: "bound".into(),
                expected: exp,
                verdict,
                witness: Vec::new(),
            })
        })
        .collect()
}

/// Recomputes a table. Exact rows are solved to optimality within the
/// budget; `>=` rows only search for a selection reaching the published
/// density.
pub fn reproduce_table(spec: &TableSpec) -> Result<TableReport> {
    let cells = match spec.id.kind_and_quotient() {
        None => bounds_table()?,
        Some((kind, quotient)) => {
            let expected = spec.id.expected();
            let mut cells = Vec::new();
            for n in spec.sizes() {
                let exp = expected.iter().find(|(s, _)| *s == n).map(|(_, e)| e.clone()).expect("listed size");
                let g = build(kind, n, n, quotient)?;
                let mut opts = SolveOptions {
                    method: Method::Auto,
                    time_limit: spec.time_limit,
                    deterministic: true,
                    threads: spec.threads,
                    ..SolveOptions::default()
                };
                if exp.relation == Relation::AtLeast {
                    opts.target = Some(exp.value.clone());
                }
                let res = solve_exact(&g, &opts)?;
                cells.push(Cell {
                    label: format!("n={n}"),
                    size: Some(n),
                    vertices: Some(g.len()),
                    cardinality: Some(res.best_cardinality),
                    verdict: verdict(&exp, &res.density, res.status),
                    value: res.density,
                    status: res.status.to_string(),
                    expected: exp,
                    witness: res.witness.ids(),
                });
            }
            cells
        }
    };
    Ok(TableReport {
        id: spec.id,
        title: spec.id.title().to_string(),
        cells,
    })
}
