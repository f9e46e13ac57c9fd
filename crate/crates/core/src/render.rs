//! SVG drawings of a patch, optionally with a selection highlighted.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::halfdom::Selection;
use crate::quotient::{Quotient, QuotientGraph};
use crate::tessellation::cluster_spec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Palette {
    pub stroke: String,
    pub fill: String,
    pub highlight: String,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            stroke: "#333333".into(),
            fill: "#ffffff".into(),
            highlight: "#e4572e".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RenderSpec<'a> {
    pub graph: &'a QuotientGraph,
    pub selection: Option<&'a Selection>,
    pub palette: Palette,
    pub width: f64,
    pub height: f64,
}

impl<'a> RenderSpec<'a> {
    pub fn new(graph: &'a QuotientGraph) -> Self {
        RenderSpec {
            graph,
            selection: None,
            palette: Palette::default(),
            width: 800.0,
            height: 600.0,
        }
    }

    pub fn with_selection(mut self, sel: &'a Selection) -> Self {
        self.selection = Some(sel);
        self
    }
}

struct Tile {
    corners: Vec<[f64; 2]>,
    vertex: usize,
    selected: bool,
}

fn tiles(spec: &RenderSpec) -> Vec<Tile> {
    let g = spec.graph;
    let cluster = cluster_spec(g.kind);
    let on = |v: usize| spec.selection.is_some_and(|s| s.contains(v));
    let mut out = Vec::new();
    match g.quotient {
        Quotient::Klein => {
            // both triangles of every cell; the second one stands for its
            // glued partner
            let n = g.n;
            for i in 0..n {
                for j in 0..n {
                    for k in 1..=2 {
                        let v = if k == 1 {
                            i * n + j
                        } else {
                            ((2 * n - 1 - i) % n) * n + (2 * n - 1 - j) % n
                        };
                        out.push(Tile {
                            corners: cluster.geometry.polygon(3, k, i as i64, j as i64),
                            vertex: v,
                            selected: on(v),
                        });
                    }
                }
            }
        }
        _ => {
            for v in &g.vertices {
                out.push(Tile {
                    corners: cluster.geometry.polygon(v.sides, v.k, v.i as i64, v.j as i64),
                    vertex: v.id,
                    selected: on(v.id),
                });
            }
        }
    }
    out
}

pub fn render_svg(spec: &RenderSpec) -> Result<String> {
    if let Some(sel) = spec.selection {
        if sel.len() != spec.graph.len() {
            return Err(Error::SelectionSize {
                expected: spec.graph.len(),
                got: sel.len(),
            });
        }
    }
    let tiles = tiles(spec);
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in tiles.iter().flat_map(|t| &t.corners) {
        x0 = x0.min(p[0]);
        y0 = y0.min(p[1]);
        x1 = x1.max(p[0]);
        y1 = y1.max(p[1]);
    }
    let klein = spec.graph.quotient == Quotient::Klein;
    let legend_h = if klein { 40.0 } else { 0.0 };
    let margin = 10.0;
    let scale = ((spec.width - 2.0 * margin) / (x1 - x0).max(1e-9))
        .min((spec.height - legend_h - 2.0 * margin) / (y1 - y0).max(1e-9));
    let map = |p: &[f64; 2]| (margin + (p[0] - x0) * scale, margin + (y1 - p[1]) * scale);

    let pal = &spec.palette;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">
<title>{kind} {m}x{n} {q}</title>
<g stroke="{stroke}" stroke-width="1" stroke-linejoin="round">"#,
        w = spec.width,
        h = spec.height,
        kind = spec.graph.kind,
        m = spec.graph.m,
        n = spec.graph.n,
        q = spec.graph.quotient,
        stroke = pal.stroke,
    );
    for t in &tiles {
        let points: Vec<String> = t
            .corners
            .iter()
            .map(|p| {
                let (x, y) = map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let fill = if t.selected { &pal.highlight } else { &pal.fill };
        let class = if t.selected { "tile selected" } else { "tile" };
        let _ = writeln!(
            svg,
            r#"<polygon class="{class}" data-vertex="{}" fill="{fill}" points="{}"/>"#,
            t.vertex,
            points.join(" ")
        );
    }
    svg.push_str("</g>\n");
    if klein {
        let n = spec.graph.n;
        let _ = writeln!(
            svg,
            r#"<text x="{margin}" y="{y}" font-family="sans-serif" font-size="12">Klein quotient: triangle (i, j, 2) is the same vertex as (({n}-1-i) mod {n}, ({n}-1-j) mod {n}, 1); data-vertex gives the shared id.</text>"#,
            y = spec.height - legend_h / 2.0,
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
