//! Exact rational linear programming.
//!
//! Systems have the shape `max c.x` subject to `A x <= b`, `0 <= x <= u`
//! with `b >= 0`, so the origin is always a feasible starting vertex and a
//! single-phase primal simplex suffices. Pivoting uses the largest reduced
//! cost until a degenerate pivot happens, and Bland's rule from then on until
//! the objective moves again, which rules out cycling. Every optimum is
//! returned together with a dual vector that is re-checked against the
//! original data before the result is handed out.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    /// Sparse coefficients `(variable, value)`; a variable may repeat, in
    /// which case the values add up.
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

/// `rows` are all `<=` constraints; every variable also satisfies
/// `0 <= x_j <= upper[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystem {
    pub num_vars: usize,
    pub rows: Vec<Row>,
    pub upper: Vec<Rational>,
    pub integer: Vec<bool>,
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        LinearSystem {
            num_vars,
            rows: Vec::new(),
            upper: vec![Rational::one(); num_vars],
            integer: vec![false; num_vars],
        }
    }

    pub fn push_row(&mut self, coeffs: Vec<(usize, Rational)>, rhs: Rational) {
        self.rows.push(Row { coeffs, rhs });
    }

    /// Dense coefficient vector of row `r`.
    pub fn dense_row(&self, r: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.num_vars];
        for (j, a) in &self.rows[r].coeffs {
            out[*j] = &out[*j] + a;
        }
        out
    }

    /// Checks `A x <= b` and the box constraints.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        if x.iter().zip(&self.upper).any(|(v, u)| v.is_negative() || v > u) {
            return false;
        }
        self.rows.iter().all(|row| {
            let lhs: Rational = row.coeffs.iter().map(|(j, a)| a * &x[*j]).sum();
            lhs <= row.rhs
        })
    }

    fn validate(&self, objective: &[Rational]) -> Result<()> {
        if objective.len() != self.num_vars {
            return Err(Error::Lp(format!(
                "objective has {} entries for {} variables",
                objective.len(),
                self.num_vars
            )));
        }
        if self.upper.len() != self.num_vars {
            return Err(Error::Lp("upper bound vector has the wrong length".into()));
        }
        for (r, row) in self.rows.iter().enumerate() {
            if row.rhs.is_negative() {
                return Err(Error::Lp(format!("row {r} has a negative right-hand side")));
            }
            if let Some((j, _)) = row.coeffs.iter().find(|(j, _)| *j >= self.num_vars) {
                return Err(Error::Lp(format!("row {r} refers to variable {j}")));
            }
        }
        if self.upper.iter().any(Rational::is_negative) {
            return Err(Error::Lp("negative upper bound".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub primal: Vec<Rational>,
    /// One multiplier per constraint row, followed by one per upper bound.
    pub dual: Vec<Rational>,
    pub pivots: usize,
}

struct Tableau {
    /// rows x (structural + slack) columns
    a: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    /// reduced costs
    z: Vec<BigRational>,
    value: BigRational,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, p: usize, e: usize) {
        let inv = self.a[p][e].recip();
        let cols: Vec<usize> = (0..self.a[p].len()).filter(|&c| !self.a[p][c].is_zero()).collect();
        for &c in &cols {
            self.a[p][c] *= &inv;
        }
        self.rhs[p] *= &inv;
        let prow: Vec<(usize, BigRational)> = cols.iter().map(|&c| (c, self.a[p][c].clone())).collect();
        let prhs = self.rhs[p].clone();
        for r in 0..self.a.len() {
            if r == p || self.a[r][e].is_zero() {
                continue;
            }
            let f = self.a[r][e].clone();
            for (c, v) in &prow {
                self.a[r][*c] -= &f * v;
            }
            self.rhs[r] -= &f * &prhs;
        }
        if !self.z[e].is_zero() {
            let f = self.z[e].clone();
            for (c, v) in &prow {
                self.z[*c] -= &f * v;
            }
            self.value += &f * &prhs;
        }
        self.basis[p] = e;
    }
}

/// Exact optimum of `max objective.x` over the relaxation of `system`.
pub fn lp_optimum(system: &LinearSystem, objective: &[Rational]) -> Result<LpSolution> {
    system.validate(objective)?;
    let nv = system.num_vars;
    let nr = system.rows.len() + nv;
    let width = nv + nr;

    let mut a = vec![vec![BigRational::zero(); width]; nr];
    let mut rhs = Vec::with_capacity(nr);
    for (r, row) in system.rows.iter().enumerate() {
        for (j, v) in &row.coeffs {
            a[r][*j] += v.as_big();
        }
        rhs.push(row.rhs.as_big().clone());
    }
    for (j, ub) in system.upper.iter().enumerate() {
        a[system.rows.len() + j][j] = BigRational::one();
        rhs.push(ub.as_big().clone());
    }
    for (r, row) in a.iter_mut().enumerate() {
        row[nv + r] = BigRational::one();
    }
    let mut z = vec![BigRational::zero(); width];
    for (j, c) in objective.iter().enumerate() {
        z[j] = c.as_big().clone();
    }
    let mut t = Tableau {
        a,
        rhs,
        z,
        value: BigRational::zero(),
        basis: (nv..width).collect(),
    };

    let mut bland = false;
    let mut pivots = 0usize;
    loop {
        let entering = if bland {
            (0..width).find(|&c| t.z[c].is_positive())
        } else {
            let mut best: Option<usize> = None;
            for c in 0..width {
                if t.z[c].is_positive() && best.is_none_or(|b| t.z[c] > t.z[b]) {
                    best = Some(c);
                }
            }
            best
        };
        let Some(e) = entering else { break };

        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..nr {
            if !t.a[r][e].is_positive() {
                continue;
            }
            let ratio = &t.rhs[r] / &t.a[r][e];
            let better = match &leave {
                None => true,
                Some((lr, lv)) => ratio < *lv || (ratio == *lv && t.basis[r] < t.basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let Some((p, step)) = leave else {
            return Err(Error::Lp("objective is unbounded".into()));
        };
        bland = step.is_zero();
        t.pivot(p, e);
        pivots += 1;
    }

    let mut primal = vec![BigRational::zero(); nv];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < nv {
            primal[b] = t.rhs[r].clone();
        }
    }
    let dual: Vec<BigRational> = (0..nr).map(|r| -t.z[nv + r].clone()).collect();
    let sol = LpSolution {
        value: Rational::from(t.value),
        primal: primal.into_iter().map(Rational::from).collect(),
        dual: dual.into_iter().map(Rational::from).collect(),
        pivots,
    };
    certify(system, objective, &sol)?;
    Ok(sol)
}

/// Primal feasibility, dual feasibility and equal objective values.
fn certify(system: &LinearSystem, objective: &[Rational], sol: &LpSolution) -> Result<()> {
    if !system.is_feasible(&sol.primal) {
        return Err(Error::Lp("optimal vertex failed the feasibility check".into()));
    }
    let primal_value: Rational = objective.iter().zip(&sol.primal).map(|(c, x)| c * x).sum();
    if primal_value != sol.value {
        return Err(Error::Lp("objective value does not match the primal vertex".into()));
    }
    if sol.dual.iter().any(Rational::is_negative) {
        return Err(Error::Lp("negative dual multiplier".into()));
    }
    let nrows = system.rows.len();
    let mut reduced: Vec<BigRational> = (0..system.num_vars)
        .map(|j| sol.dual[nrows + j].as_big().clone())
        .collect();
    let mut dual_value = BigRational::zero();
    for (r, row) in system.rows.iter().enumerate() {
        let y = sol.dual[r].as_big();
        if y.is_zero() {
            continue;
        }
        for (j, a) in &row.coeffs {
            reduced[*j] += y * a.as_big();
        }
        dual_value += y * row.rhs.as_big();
    }
    for j in 0..system.num_vars {
        dual_value += sol.dual[nrows + j].as_big() * system.upper[j].as_big();
        if reduced[j] < *objective[j].as_big() {
            return Err(Error::Lp(format!("dual constraint for variable {j} is violated")));
        }
    }
    if dual_value != *sol.value.as_big() {
        return Err(Error::Lp("primal and dual objective values differ".into()));
    }
    Ok(())
}

/// Least common multiple of the denominators, handy for integer scaling.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| num_integer::lcm(acc, v.denom().clone()))
}
