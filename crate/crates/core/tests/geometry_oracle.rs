//! Adjacency recomputed from tile outlines: two tiles are adjacent once per
//! shared edge, detected by coinciding edge midpoints.

use std::collections::HashMap;

use tessdom::tessellation::Geometry;
use tessdom::{build_open, build_torus, catalog, cluster_spec, QuotientGraph};

const TOL: f64 = 1e-6;

fn key(p: [f64; 2]) -> (i64, i64) {
    ((p[0] / TOL / 10.0).round() as i64, (p[1] / TOL / 10.0).round() as i64)
}

fn midpoints(geom: &Geometry, sides: u32, k: usize, i: i64, j: i64) -> Vec<[f64; 2]> {
    let c = geom.polygon(sides, k, i, j);
    (0..c.len())
        .map(|t| {
            let (a, b) = (c[t], c[(t + 1) % c.len()]);
            [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
        })
        .collect()
}

/// Neighbour lists of the `m x n` patch, wrapping when `torus` is set.
fn oracle(g: &QuotientGraph, torus: bool) -> Vec<Vec<usize>> {
    let spec = cluster_spec(g.kind);
    let geom = &spec.geometry;
    let (m, n) = (g.m as i64, g.n as i64);
    // edge midpoint -> tiles (as vertex ids) owning an edge there
    let mut owners: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let range = |size: i64| if torus { -2..size + 2 } else { 0..size };
    for i in range(m) {
        for j in range(n) {
            let (ri, rj) = (i.rem_euclid(m) as usize, j.rem_euclid(n) as usize);
            for t in &spec.tiles {
                let id = g.vertex_id(ri, rj, t.index).unwrap();
                for p in midpoints(geom, t.sides, t.index, i, j) {
                    let mut hit = None;
                    // probe neighbouring buckets to survive rounding at bucket edges
                    'probe: for dx in -1..=1 {
                        for dy in -1..=1 {
                            let (kx, ky) = key(p);
                            if owners.contains_key(&(kx + dx, ky + dy)) {
                                hit = Some((kx + dx, ky + dy));
                                break 'probe;
                            }
                        }
                    }
                    owners.entry(hit.unwrap_or_else(|| key(p))).or_default().push(id);
                }
            }
        }
    }
    let mut adj = vec![Vec::new(); g.len()];
    for i in 0..m {
        for j in 0..n {
            for t in &spec.tiles {
                let id = g.vertex_id(i as usize, j as usize, t.index).unwrap();
                for p in midpoints(geom, t.sides, t.index, i, j) {
                    let (kx, ky) = key(p);
                    let list = (-1..=1)
                        .flat_map(|dx| (-1..=1).map(move |dy| (kx + dx, ky + dy)))
                        .find_map(|k| owners.get(&k))
                        .unwrap();
                    // the list holds this tile's own copy plus the tile across the edge
                    assert!(list.len() <= 2 * if torus { 4 } else { 1 });
                    let mut others = list.clone();
                    let pos = others.iter().position(|&x| x == id).unwrap();
                    others.remove(pos);
                    if let Some(&w) = others.first() {
                        if !torus {
                            assert_eq!(others.len(), 1);
                        }
                        adj[id].push(w);
                    }
                }
            }
        }
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    adj
}

#[test]
fn open_patches_match_geometry() {
    for kind in catalog() {
        for (m, n) in [(1, 1), (2, 3), (3, 3), (4, 2)] {
            let g = build_open(kind, m, n).unwrap();
            assert_eq!(oracle(&g, false), g.adjacency, "{kind} {m}x{n} open");
        }
    }
}

#[test]
fn tori_match_geometry() {
    // sizes >= 3 keep copies of one tile apart, so the geometric neighbour
    // across each edge is unambiguous
    for kind in catalog() {
        for (m, n) in [(3, 3), (3, 4), (5, 3)] {
            let g = build_torus(kind, m, n).unwrap();
            let geo = oracle(&g, true);
            assert_eq!(geo, g.adjacency, "{kind} {m}x{n} torus");
            for v in &g.vertices {
                assert_eq!(g.degree(v.id), v.sides as usize);
            }
        }
    }
}
