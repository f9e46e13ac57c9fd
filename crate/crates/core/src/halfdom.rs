//! The half-domination model: feasibility, the per-vertex inequality system,
//! density and the deficiency function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::LinearSystem;
use crate::quotient::QuotientGraph;
use crate::rational::Rational;

/// How many selected neighbours a selected vertex of degree `d` may have.
#[inline]
pub fn half_cap(degree: usize) -> usize {
    degree / 2
}

/// A 0/1 assignment over the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Selection {
    bits: Vec<bool>,
}

impl Selection {
    pub fn empty(len: usize) -> Self {
        Selection {
            bits: vec![false; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Selection { bits }
    }

    pub fn from_ids(len: usize, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = vec![false; len];
        for id in ids {
            if id >= len {
                return Err(Error::VertexOutOfRange { id, count: len });
            }
            bits[id] = true;
        }
        Ok(Selection { bits })
    }

    /// Selects every vertex for which `pred` holds.
    pub fn from_predicate(graph: &QuotientGraph, pred: impl Fn(&crate::VertexRecord) -> bool) -> Self {
        Selection {
            bits: graph.vertices.iter().map(pred).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits[v]
    }

    pub fn set(&mut self, v: usize, on: bool) {
        self.bits[v] = on;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Sorted ids of the selected vertices.
    pub fn ids(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    fn check(&self, graph: &QuotientGraph) -> Result<()> {
        if self.bits.len() != graph.len() {
            return Err(Error::SelectionSize {
                expected: graph.len(),
                got: self.bits.len(),
            });
        }
        Ok(())
    }
}

/// Selected entries in `v`'s neighbour list, counted with multiplicity.
pub fn selected_neighbors(graph: &QuotientGraph, sel: &Selection, v: usize) -> usize {
    graph.neighbors(v).iter().filter(|&&w| sel.contains(w)).count()
}

pub fn is_half_dependent(graph: &QuotientGraph, sel: &Selection) -> Result<bool> {
    sel.check(graph)?;
    Ok((0..graph.len())
        .filter(|&v| sel.contains(v))
        .all(|v| selected_neighbors(graph, sel, v) <= half_cap(graph.degree(v))))
}

/// One row per vertex,
/// `(d - floor(d/2)) x_v + sum_{w ~ v} x_w <= d`,
/// plus the 0/1 box. A 0/1 vector satisfies the system exactly when the
/// selection it describes is half-dependent.
pub fn constraint_system(graph: &QuotientGraph) -> LinearSystem {
    let mut sys = LinearSystem::new(graph.len());
    for v in 0..graph.len() {
        let d = graph.degree(v);
        let mut coeffs = vec![(v, Rational::from_integer((d - half_cap(d)) as i64))];
        coeffs.extend(graph.neighbors(v).iter().map(|&w| (w, Rational::one())));
        sys.push_row(coeffs, Rational::from_integer(d as i64));
    }
    sys.integer = vec![true; graph.len()];
    sys
}

pub fn density(graph: &QuotientGraph, sel: &Selection) -> Result<Rational> {
    sel.check(graph)?;
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(Rational::ratio(sel.count(), graph.len()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficiencyReport {
    pub delta: Vec<i64>,
    pub global_delta: Rational,
}

impl DeficiencyReport {
    pub fn max_delta(&self) -> Option<i64> {
        self.delta.iter().copied().max()
    }
}

/// `delta_v = s_v - floor(d/2)` for selected `v` and `s_v - d` otherwise,
/// `s_v` being the number of selected neighbours; `Delta` is the mean.
pub fn deficiency(graph: &QuotientGraph, sel: &Selection) -> Result<DeficiencyReport> {
    sel.check(graph)?;
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let delta: Vec<i64> = (0..graph.len())
        .map(|v| {
            let s = selected_neighbors(graph, sel, v) as i64;
            let d = graph.degree(v);
            if sel.contains(v) {
                s - half_cap(d) as i64
            } else {
                s - d as i64
            }
        })
        .collect();
    let total: i64 = delta.iter().sum();
    Ok(DeficiencyReport {
        global_delta: Rational::new(total, graph.len() as i64),
        delta,
    })
}

/// `Delta * |V| = sum_{v in S} (d + ceil(d/2)) - sum_v d`, which only
/// depends on how many vertices of each degree are selected.
pub fn closed_form_global_deficiency(graph: &QuotientGraph, sel: &Selection) -> Result<Rational> {
    sel.check(graph)?;
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut total: i64 = 0;
    for v in 0..graph.len() {
        let d = graph.degree(v) as i64;
        total -= d;
        if sel.contains(v) {
            total += d + (d + 1) / 2;
        }
    }
    Ok(Rational::new(total, graph.len() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::{build_open, build_torus};
    use crate::tessellation::{catalog, TessKind};
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn kind(s: &str) -> TessKind {
        s.parse().unwrap()
    }

    #[test]
    fn empty_selection_is_feasible() {
        let g = build_torus(kind("3.4.6.4"), 2, 2).unwrap();
        assert!(is_half_dependent(&g, &Selection::empty(g.len())).unwrap());
    }

    #[test]
    fn all_hexagons_are_infeasible() {
        let g = build_torus(kind("6.6.6"), 3, 3).unwrap();
        let sel = Selection::from_bits(vec![true; g.len()]);
        assert!(!is_half_dependent(&g, &sel).unwrap());
    }

    #[test]
    fn trihexagonal_triangles_are_feasible() {
        let g = build_torus(kind("3.6.3.6"), 2, 2).unwrap();
        let sel = Selection::from_predicate(&g, |v| v.sides == 3);
        for v in g.vertices.iter().filter(|v| v.sides == 3) {
            assert!(g.neighbors(v.id).iter().all(|&w| g.vertices[w].sides == 6));
        }
        assert!(is_half_dependent(&g, &sel).unwrap());
        assert_eq!(density(&g, &sel).unwrap(), Rational::new(2, 3));
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let g = build_torus(kind("4.4.4.4"), 2, 2).unwrap();
        assert!(is_half_dependent(&g, &Selection::empty(3)).is_err());
        assert!(density(&g, &Selection::empty(5)).is_err());
    }

    #[test]
    fn row_coefficients() {
        for (k, sides, coef, rhs) in [("6.6.6", 6, 3, 6), ("4.4.4.4", 4, 2, 4), ("4.6.12", 12, 6, 12)] {
            let g = build_torus(kind(k), 3, 3).unwrap();
            let sys = constraint_system(&g);
            let v = g.vertices.iter().find(|v| v.sides == sides).unwrap().id;
            let row = sys.dense_row(v);
            assert_eq!(row[v], Rational::from_integer(coef), "{k}");
            assert_eq!(sys.rows[v].rhs, Rational::from_integer(rhs));
        }
    }

    #[test]
    fn densities() {
        let g = build_torus(kind("4.8.8"), 2, 2).unwrap();
        assert_eq!(density(&g, &Selection::from_ids(8, [0, 1, 2, 3]).unwrap()).unwrap(), Rational::new(1, 2));
        let g = build_torus(TessKind::Triangular, 4, 4).unwrap();
        let sel = Selection::from_ids(32, 0..18).unwrap();
        assert_eq!(density(&g, &sel).unwrap(), Rational::new(9, 16));
        assert_eq!(density(&g, &Selection::empty(32)).unwrap(), Rational::zero());
    }

    #[test]
    fn deficiency_of_empty_selection() {
        let g = build_torus(TessKind::Triangular, 2, 2).unwrap();
        let rep = deficiency(&g, &Selection::empty(8)).unwrap();
        assert!(rep.delta.iter().all(|&d| d == -3));
        assert_eq!(rep.global_delta, Rational::from_integer(-3));
    }

    #[test]
    fn deficiency_of_a_size_four_selection_on_the_small_triangular_torus() {
        // Delta * 8 = 4 * (3 + 2) - 24
        let g = build_torus(TessKind::Triangular, 2, 2).unwrap();
        let mut found = 0;
        for mask in 0u32..256 {
            if mask.count_ones() != 4 {
                continue;
            }
            let sel = Selection::from_ids(8, (0..8).filter(|b| mask >> b & 1 == 1)).unwrap();
            if is_half_dependent(&g, &sel).unwrap() {
                found += 1;
                assert_eq!(deficiency(&g, &sel).unwrap().global_delta, Rational::new(-1, 2));
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn elongated_triangular_worked_example() {
        // three squares and four triangles on the 12-tile torus
        let g = build_torus(kind("3.3.3.4.4"), 2, 2).unwrap();
        let sel = Selection::from_ids(12, [0, 3, 6, 1, 2, 4, 5]).unwrap();
        assert_eq!(sel.ids().iter().filter(|&&v| g.vertices[v].sides == 4).count(), 3);
        assert_eq!(closed_form_global_deficiency(&g, &sel).unwrap(), Rational::new(-1, 6));
        assert_eq!(deficiency(&g, &sel).unwrap().global_delta, Rational::new(-1, 6));
    }

    #[test]
    fn hexagonal_two_thirds_has_zero_deficiency() {
        // (i - j) mod 3 != 0 on a 3x3 torus
        let g = build_torus(TessKind::Hexagonal, 3, 3).unwrap();
        let sel = Selection::from_predicate(&g, |v| (v.i + 3 - v.j) % 3 != 0);
        assert!(is_half_dependent(&g, &sel).unwrap());
        assert_eq!(density(&g, &sel).unwrap(), Rational::new(2, 3));
        let rep = deficiency(&g, &sel).unwrap();
        assert_eq!(rep.global_delta, Rational::zero());
        assert!(rep.delta.iter().all(|&d| d == 0));
    }

    fn random_feasible(g: &QuotientGraph, rng: &mut ChaCha8Rng) -> Selection {
        let mut order: Vec<usize> = (0..g.len()).collect();
        order.shuffle(rng);
        let mut sel = Selection::empty(g.len());
        for v in order {
            sel.set(v, true);
            let ok = std::iter::once(v)
                .chain(g.neighbors(v).iter().copied())
                .filter(|&w| sel.contains(w))
                .all(|w| selected_neighbors(g, &sel, w) <= half_cap(g.degree(w)));
            if !ok {
                sel.set(v, false);
            }
        }
        sel
    }

    #[test]
    fn closed_form_matches_direct_on_random_feasible_selections() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for kind in catalog() {
            for (m, n) in [(2, 3), (3, 3), (4, 2)] {
                let g = build_torus(kind, m, n).unwrap();
                for _ in 0..5 {
                    let sel = random_feasible(&g, &mut rng);
                    assert!(is_half_dependent(&g, &sel).unwrap());
                    let rep = deficiency(&g, &sel).unwrap();
                    assert_eq!(rep.global_delta, closed_form_global_deficiency(&g, &sel).unwrap());
                    assert!(rep.max_delta().unwrap() <= 0);
                }
            }
        }
    }

    fn integral_point_satisfies(sys: &LinearSystem, sel: &Selection) -> bool {
        let x: Vec<Rational> = sel.bits().iter().map(|&b| Rational::from_integer(b as i64)).collect();
        sys.is_feasible(&x)
    }

    proptest! {
        #[test]
        fn feasibility_equivalences(k in 0usize..11, m in 1usize..4, n in 1usize..4, open in any::<bool>(), bits in proptest::collection::vec(any::<bool>(), 108)) {
            let kind = catalog()[k];
            let g = if open { build_open(kind, m, n).unwrap() } else { build_torus(kind, m, n).unwrap() };
            let sel = Selection::from_bits(bits[..g.len()].to_vec());
            let feasible = is_half_dependent(&g, &sel).unwrap();
            let rep = deficiency(&g, &sel).unwrap();
            prop_assert_eq!(feasible, rep.max_delta().unwrap() <= 0);
            prop_assert_eq!(feasible, integral_point_satisfies(&constraint_system(&g), &sel));
            for v in 0..g.len() {
                if !sel.contains(v) {
                    prop_assert!(rep.delta[v] <= 0);
                }
            }
        }

        #[test]
        fn removing_a_vertex_keeps_feasibility(k in 0usize..11, seed in any::<u64>()) {
            let g = build_torus(catalog()[k], 3, 2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut sel = random_feasible(&g, &mut rng);
            for v in sel.ids() {
                sel.set(v, false);
                prop_assert!(is_half_dependent(&g, &sel).unwrap());
            }
        }
    }
}
