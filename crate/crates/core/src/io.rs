//! JSON documents for graphs, selections, bound reports and tables.
//!
//! Every document starts with `format` and `version`. Fractions are strings
//! `p/q` in lowest terms. Graph edges are listed once per multiplicity as
//! `[u, w]` with `u <= w`; a loop that occupies two slots of its vertex's
//! neighbour list is written `[v, v]`, and a loop that occupies a single
//! slot (the Klein quotient's half-loops) goes into `half_loops`.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::halfdom::{density, Selection};
use crate::quotient::{Quotient, QuotientGraph, VertexRecord};
use crate::rational::Rational;
use crate::tessellation::TessKind;

pub const FORMAT_VERSION: u32 = 1;

pub const GRAPH_FORMAT: &str = "tessdom-graph";
pub const SELECTION_FORMAT: &str = "tessdom-selection";
pub const BOUND_FORMAT: &str = "tessdom-bound";
pub const TABLE_FORMAT: &str = "tessdom-table";

/// Identifies the graph a document belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphHeader {
    pub kind: TessKind,
    pub m: usize,
    pub n: usize,
    pub quotient: Quotient,
    pub vertex_count: usize,
}

impl GraphHeader {
    pub fn of(graph: &QuotientGraph) -> Self {
        GraphHeader {
            kind: graph.kind,
            m: graph.m,
            n: graph.n,
            quotient: graph.quotient,
            vertex_count: graph.len(),
        }
    }

    /// Errors naming the first field that differs.
    pub fn check_against(&self, graph: &QuotientGraph) -> Result<()> {
        let other = GraphHeader::of(graph);
        let fields = [
            ("kind", self.kind.to_string(), other.kind.to_string()),
            ("m", self.m.to_string(), other.m.to_string()),
            ("n", self.n.to_string(), other.n.to_string()),
            ("quotient", self.quotient.to_string(), other.quotient.to_string()),
            ("vertex_count", self.vertex_count.to_string(), other.vertex_count.to_string()),
        ];
        for (name, doc, actual) in fields {
            if doc != actual {
                return Err(Error::HeaderMismatch(format!(
                    "{name} is {doc} in the document but {actual} in the graph"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    format: String,
    version: u32,
    #[serde(flatten)]
    body: T,
}

fn wrap<T: Serialize>(format: &str, body: T) -> String {
    let env = Envelope {
        format: format.to_string(),
        version: FORMAT_VERSION,
        body,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("serializable");
    s.push('\n');
    s
}

#[derive(Deserialize)]
struct Preamble {
    format: Option<String>,
    version: Option<u32>,
}

fn unwrap_doc<T: DeserializeOwned>(format: &str, text: &str) -> Result<T> {
    let pre: Preamble = serde_json::from_str(text)?;
    match pre.format.as_deref() {
        Some(f) if f == format => {}
        Some(f) => return Err(Error::schema("format", format!("expected `{format}`, found `{f}`"))),
        None => return Err(Error::schema("format", "missing")),
    }
    match pre.version {
        Some(FORMAT_VERSION) => {}
        Some(v) => return Err(Error::schema("version", format!("unsupported version {v}"))),
        None => return Err(Error::schema("version", "missing")),
    }
    let env: Envelope<T> = serde_json::from_str(text)?;
    Ok(env.body)
}

#[derive(Serialize, Deserialize)]
struct GraphBody {
    header: GraphHeader,
    vertices: Vec<VertexRecord>,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    half_loops: Vec<usize>,
}

pub fn graph_to_json(graph: &QuotientGraph) -> String {
    let mut edges = Vec::new();
    let mut half_loops = Vec::new();
    for v in 0..graph.len() {
        for &w in graph.neighbors(v) {
            if v < w {
                edges.push([v, w]);
            }
        }
        let loops = graph.loop_multiplicity(v);
        edges.extend(std::iter::repeat_n([v, v], loops / 2));
        if loops % 2 == 1 {
            half_loops.push(v);
        }
    }
    edges.sort_unstable();
    wrap(
        GRAPH_FORMAT,
        GraphBody {
            header: GraphHeader::of(graph),
            vertices: graph.vertices.clone(),
            edges,
            half_loops,
        },
    )
}

pub fn graph_from_json(text: &str) -> Result<QuotientGraph> {
    let body: GraphBody = unwrap_doc(GRAPH_FORMAT, text)?;
    let count = body.vertices.len();
    if body.header.vertex_count != count {
        return Err(Error::HeaderMismatch(format!(
            "vertex_count is {} but {} vertices are listed",
            body.header.vertex_count, count
        )));
    }
    for (pos, v) in body.vertices.iter().enumerate() {
        if v.id != pos {
            return Err(Error::schema(format!("vertices[{pos}].id"), format!("expected {pos}, found {}", v.id)));
        }
    }
    let out_of_range = |loc: String, id: usize| {
        Error::schema(loc, format!("vertex id out of range ({id} >= {count})"))
    };
    let mut adjacency = vec![Vec::new(); count];
    for (e, &[u, w]) in body.edges.iter().enumerate() {
        for (side, id) in [(0, u), (1, w)] {
            if id >= count {
                return Err(out_of_range(format!("edges[{e}][{side}]"), id));
            }
        }
        adjacency[u].push(w);
        adjacency[w].push(u);
    }
    for (e, &v) in body.half_loops.iter().enumerate() {
        if v >= count {
            return Err(out_of_range(format!("half_loops[{e}]"), v));
        }
        adjacency[v].push(v);
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    let h = body.header;
    Ok(QuotientGraph {
        kind: h.kind,
        m: h.m,
        n: h.n,
        quotient: h.quotient,
        vertices: body.vertices,
        adjacency,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionDoc {
    pub header: GraphHeader,
    pub selected: Vec<usize>,
    pub cardinality: usize,
    pub density: Rational,
}

impl SelectionDoc {
    pub fn to_selection(&self) -> Result<Selection> {
        let count = self.header.vertex_count;
        for (pos, &id) in self.selected.iter().enumerate() {
            if id >= count {
                return Err(Error::schema(
                    format!("selected[{pos}]"),
                    format!("vertex id out of range ({id} >= {count})"),
                ));
            }
        }
        if self.selected.len() != self.cardinality {
            return Err(Error::schema(
                "cardinality",
                format!("{} ids listed but cardinality says {}", self.selected.len(), self.cardinality),
            ));
        }
        let sel = Selection::from_ids(count, self.selected.iter().copied())?;
        if sel.count() != self.selected.len() {
            return Err(Error::schema("selected", "duplicate vertex ids"));
        }
        if count > 0 && Rational::ratio(sel.count(), count) != self.density {
            return Err(Error::schema("density", format!("{} does not match {}/{}", self.density, sel.count(), count)));
        }
        Ok(sel)
    }
}

pub fn selection_to_json(graph: &QuotientGraph, sel: &Selection) -> Result<String> {
    let d = density(graph, sel)?;
    Ok(wrap(
        SELECTION_FORMAT,
        SelectionDoc {
            header: GraphHeader::of(graph),
            selected: sel.ids(),
            cardinality: sel.count(),
            density: d,
        },
    ))
}

/// Parses a selection document; with `graph` given, the header must match it.
pub fn selection_from_json(text: &str, graph: Option<&QuotientGraph>) -> Result<(GraphHeader, Selection)> {
    let doc: SelectionDoc = unwrap_doc(SELECTION_FORMAT, text)?;
    if let Some(g) = graph {
        doc.header.check_against(g)?;
    }
    let sel = doc.to_selection()?;
    Ok((doc.header, sel))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<TessKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphHeader>,
    pub report: BoundReport,
}

pub fn bound_to_json(doc: &BoundDoc) -> String {
    wrap(BOUND_FORMAT, doc)
}

pub fn bound_from_json(text: &str) -> Result<BoundDoc> {
    let doc: BoundDoc = unwrap_doc(BOUND_FORMAT, text)?;
    if doc.report.value.is_negative() || doc.report.value > Rational::one() {
        return Err(Error::schema("report.value", "bound outside [0, 1]"));
    }
    Ok(doc)
}

pub fn table_to_json<T: Serialize>(table: &T) -> String {
    wrap(TABLE_FORMAT, table)
}

pub fn table_from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    unwrap_doc(TABLE_FORMAT, text)
}

pub fn read_text(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    Ok(fs::write(path, text)?)
}
