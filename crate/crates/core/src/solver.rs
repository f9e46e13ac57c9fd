//! Exact maximum half-dependent sets, and the density bounds built on them.
//!
//! Two exact methods are provided. `Brute` is an include-first enumeration
//! in vertex order with feasibility pruning, kept deliberately simple so it
//! can serve as an oracle. `Bnb` is a depth-first branch and bound whose
//! upper bound is a weighted sum of the per-vertex rows: with multipliers
//! `mu_v >= 0` (from the dual of the class LP) every half-dependent set obeys
//!
//! ```text
//! |S| = sum_v mu_v d_v - sum_v (mu_v s_v + (a_v - 1) x_v)
//! ```
//!
//! where `s_v` is the slack of row `v` and `a_v` the column sum of the
//! multipliers at `v`. Partial assignments give lower bounds on each slack,
//! which is what the search prunes with.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    class_incidence, class_incidence_of_graph, solve_class_system, BoundReport, Certificate,
    ClassIncidence, Granularity, Provenance,
};
use crate::error::{Error, Result};
use crate::halfdom::{constraint_system, half_cap, is_half_dependent, Selection};
use crate::lp::{common_denominator, lp_optimum};
use crate::quotient::{build, Quotient, QuotientGraph};
use crate::rational::Rational;
use crate::tessellation::TessKind;

pub const BRUTE_FORCE_LIMIT: usize = 30;
const AUTO_BRUTE_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Auto,
    Brute,
    Bnb,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Auto => "auto",
            Method::Brute => "brute",
            Method::Bnb => "bnb",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "auto" => Ok(Method::Auto),
            "brute" => Ok(Method::Brute),
            "bnb" => Ok(Method::Bnb),
            _ => Err(Error::schema("method", format!("expected auto, brute or bnb, got `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    LowerBoundOnly,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::LowerBoundOnly => "lower_bound_only",
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub method: Method,
    /// Wall-clock budget; `None` runs to completion.
    pub time_limit: Option<Duration>,
    /// Same witness for every run and every worker count.
    pub deterministic: bool,
    /// Stop as soon as a selection of at least this density is known.
    pub target: Option<Rational>,
    /// Vertices forced out of the selection.
    pub fixed_zero: Vec<usize>,
    /// Worker threads for `Bnb`; `None` uses the rayon default.
    pub threads: Option<usize>,
}

impl SolveOptions {
    pub fn method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    pub fn deterministic(mut self, on: bool) -> Self {
        self.deterministic = on;
        self
    }

    pub fn target(mut self, target: Rational) -> Self {
        self.target = Some(target);
        self
    }

    pub fn fixed_zero(mut self, ids: Vec<usize>) -> Self {
        self.fixed_zero = ids;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptResult {
    pub best_cardinality: usize,
    pub witness: Selection,
    pub status: Status,
    pub density: Rational,
    pub elapsed: Duration,
    pub nodes: u64,
    /// Method that actually ran.
    pub method: Method,
    /// The time limit expired before the search closed.
    pub budget_exhausted: bool,
}

pub fn solve_exact(graph: &QuotientGraph, options: &SolveOptions) -> Result<OptResult> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    for &v in &options.fixed_zero {
        if v >= graph.len() {
            return Err(Error::VertexOutOfRange { id: v, count: graph.len() });
        }
    }
    if let Some(t) = &options.target {
        if t.is_negative() {
            return Err(Error::schema("target", "target density must be non-negative"));
        }
    }
    let method = match options.method {
        Method::Auto if graph.len() <= AUTO_BRUTE_LIMIT && options.target.is_none() => Method::Brute,
        Method::Auto => Method::Bnb,
        m => m,
    };
    let start = Instant::now();
    let mut res = match method {
        Method::Brute => {
            if graph.len() > BRUTE_FORCE_LIMIT {
                return Err(Error::TooLargeForBruteForce {
                    count: graph.len(),
                    limit: BRUTE_FORCE_LIMIT,
                });
            }
            brute_force(graph, &options.fixed_zero)
        }
        _ => Engine::new(graph, options)?.run(options),
    };
    res.elapsed = start.elapsed();
    res.method = method;
    debug_assert!(is_half_dependent(graph, &res.witness).unwrap_or(false));
    Ok(res)
}

/// Needed cardinality for a target density on `n` vertices.
fn target_count(target: &Rational, n: usize) -> usize {
    let need = (target * &Rational::from_integer(n as i64)).ceil();
    need.to_usize().unwrap_or(usize::MAX)
}

fn brute_force(graph: &QuotientGraph, fixed_zero: &[usize]) -> OptResult {
    struct Brute<'a> {
        g: &'a QuotientGraph,
        allowed: Vec<bool>,
        on: Vec<bool>,
        sel: Vec<usize>,
        best: usize,
        best_bits: Vec<bool>,
        count: usize,
        nodes: u64,
    }

    impl Brute<'_> {
        fn can_add(&self, v: usize) -> bool {
            let loops = self.g.loop_multiplicity(v);
            if self.sel[v] + loops > half_cap(self.g.degree(v)) {
                return false;
            }
            let nb = self.g.neighbors(v);
            let mut i = 0;
            while i < nb.len() {
                let w = nb[i];
                let mut mult = 0;
                while i < nb.len() && nb[i] == w {
                    mult += 1;
                    i += 1;
                }
                if w != v && self.on[w] && self.sel[w] + mult > half_cap(self.g.degree(w)) {
                    return false;
                }
            }
            true
        }

        fn go(&mut self, v: usize) {
            self.nodes += 1;
            if self.count > self.best {
                self.best = self.count;
                self.best_bits.clone_from(&self.on);
            }
            if v == self.g.len() || self.count + (self.g.len() - v) <= self.best {
                return;
            }
            if self.allowed[v] && self.can_add(v) {
                self.on[v] = true;
                self.count += 1;
                for &w in self.g.neighbors(v) {
                    self.sel[w] += 1;
                }
                self.go(v + 1);
                for &w in self.g.neighbors(v) {
                    self.sel[w] -= 1;
                }
                self.count -= 1;
                self.on[v] = false;
            }
            self.go(v + 1);
        }
    }

    let n = graph.len();
    let mut allowed = vec![true; n];
    for &v in fixed_zero {
        allowed[v] = false;
    }
    let mut b = Brute {
        g: graph,
        allowed,
        on: vec![false; n],
        sel: vec![0; n],
        best: 0,
        best_bits: vec![false; n],
        count: 0,
        nodes: 0,
    };
    b.go(0);
    OptResult {
        best_cardinality: b.best,
        density: Rational::ratio(b.best, n),
        witness: Selection::from_bits(b.best_bits),
        status: Status::Optimal,
        elapsed: Duration::ZERO,
        nodes: b.nodes,
        method: Method::Brute,
        budget_exhausted: false,
    }
}

/// Integer row multipliers `mu_v = mult[v] / den`.
struct Multipliers {
    mult: Vec<i64>,
    den: i64,
}

fn class_multipliers(inc: &ClassIncidence) -> Result<Vec<Rational>> {
    let sol = solve_class_system(inc)?;
    Ok(sol.dual[..inc.classes.len()].to_vec())
}

fn multipliers(graph: &QuotientGraph) -> Result<Multipliers> {
    let per_vertex: Vec<Rational> = if graph.quotient == Quotient::Torus {
        let inc = class_incidence_of_graph(graph, Granularity::Position)?;
        let duals = class_multipliers(&inc)?;
        graph
            .vertices
            .iter()
            .map(|v| {
                let label = format!("{}#{}", crate::bounds::polygon_name(v.sides), v.k);
                duals[inc.class_of(&label).expect("class present")].clone()
            })
            .collect()
    } else {
        // the infinite tiling's multipliers, looked up by tile position
        let inc = class_incidence(graph.kind, Granularity::Position);
        let duals = class_multipliers(&inc)?;
        graph
            .vertices
            .iter()
            .map(|v| {
                let label = format!("{}#{}", crate::bounds::polygon_name(v.sides), v.k);
                inc.class_of(&label).map_or(Rational::zero(), |a| duals[a].clone())
            })
            .collect()
    };
    let den = common_denominator(per_vertex.iter());
    let big_den = Rational::from(num_rational::BigRational::from_integer(den.clone()));
    let mult = per_vertex
        .iter()
        .map(|mu| (mu * &big_den).floor().to_i64().ok_or_else(|| Error::Lp("multiplier overflow".into())))
        .collect::<Result<Vec<i64>>>()?;
    let den = den.to_i64().ok_or_else(|| Error::Lp("multiplier overflow".into()))?;
    // all-zero duals cannot happen for a non-empty graph, but keep the bound valid
    if mult.iter().all(|&m| m == 0) {
        return Ok(Multipliers { mult: vec![1; graph.len()], den: 1 });
    }
    let g = mult.iter().fold(den, |acc, &m| acc.gcd(&m));
    Ok(Multipliers {
        mult: mult.iter().map(|m| m / g).collect(),
        den: den / g,
    })
}

/// Immutable search data shared by every worker.
struct Problem {
    n: usize,
    start: Vec<usize>,
    nbr: Vec<u32>,
    mult: Vec<i32>,
    deg: Vec<i32>,
    cap: Vec<i32>,
    loops: Vec<i32>,
    mu: Vec<i64>,
    /// `a_v - den`
    excess: Vec<i64>,
    den: i64,
    /// `sum_v mu_v d_v`, scaled by `den`
    base: i64,
    rank: Vec<u32>,
}

impl Problem {
    fn new(graph: &QuotientGraph, mul: &Multipliers) -> Problem {
        let n = graph.len();
        let mut start = Vec::with_capacity(n + 1);
        let mut nbr = Vec::new();
        let mut mult = Vec::new();
        start.push(0);
        for v in 0..n {
            let list = graph.neighbors(v);
            let mut i = 0;
            while i < list.len() {
                let w = list[i];
                let mut c = 0;
                while i < list.len() && list[i] == w {
                    c += 1;
                    i += 1;
                }
                nbr.push(w as u32);
                mult.push(c);
            }
            start.push(nbr.len());
        }
        let deg: Vec<i32> = (0..n).map(|v| graph.degree(v) as i32).collect();
        let cap = deg.iter().map(|&d| half_cap(d as usize) as i32).collect();
        let loops = (0..n).map(|v| graph.loop_multiplicity(v) as i32).collect();
        let excess = (0..n)
            .map(|v| {
                let c = (graph.degree(v) - half_cap(graph.degree(v))) as i64;
                let mut a = mul.mult[v] * c;
                for &w in graph.neighbors(v) {
                    a += mul.mult[w];
                }
                a - mul.den
            })
            .collect();
        let base = (0..n).map(|v| mul.mult[v] * deg[v] as i64).sum();
        Problem {
            n,
            start,
            nbr,
            mult,
            deg,
            cap,
            loops,
            mu: mul.mult.clone(),
            excess,
            den: mul.den,
            base,
            rank: bfs_rank(graph),
        }
    }

    #[inline]
    fn adj(&self, v: usize) -> impl Iterator<Item = (usize, i32)> + '_ {
        let r = self.start[v]..self.start[v + 1];
        self.nbr[r.clone()]
            .iter()
            .zip(&self.mult[r])
            .map(|(&w, &c)| (w as usize, c))
    }
}

/// Breadth-first order from vertex 0, used to break branching ties.
fn bfs_rank(graph: &QuotientGraph) -> Vec<u32> {
    let n = graph.len();
    let mut rank = vec![u32::MAX; n];
    let mut next = 0u32;
    for s in 0..n {
        if rank[s] != u32::MAX {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([s]);
        rank[s] = next;
        next += 1;
        while let Some(v) = queue.pop_front() {
            for &w in graph.neighbors(v) {
                if rank[w] == u32::MAX {
                    rank[w] = next;
                    next += 1;
                    queue.push_back(w);
                }
            }
        }
    }
    rank
}

const UNDECIDED: i8 = -1;

/// One worker's mutable search state.
struct State<'p> {
    p: &'p Problem,
    val: Vec<i8>,
    sel: Vec<i32>,
    und: Vec<i32>,
    pen: Vec<i64>,
    pen_sum: i64,
    ones: usize,
    undecided: usize,
    trail: Vec<u32>,
}

impl<'p> State<'p> {
    fn new(p: &'p Problem) -> Self {
        let mut s = State {
            p,
            val: vec![UNDECIDED; p.n],
            sel: vec![0; p.n],
            und: p.deg.clone(),
            pen: vec![0; p.n],
            pen_sum: 0,
            ones: 0,
            undecided: p.n,
            trail: Vec::with_capacity(p.n),
        };
        for v in 0..p.n {
            s.pen[v] = s.penalty(v);
            s.pen_sum += s.pen[v];
        }
        // tiles whose own loops already exceed the cap
        for v in 0..p.n {
            if p.loops[v] > p.cap[v] {
                s.set(v, 0);
            }
        }
        s
    }

    /// Lower bound on `mu_v s_v + (a_v - den) x_v` under the current partial
    /// assignment.
    #[inline]
    fn penalty(&self, v: usize) -> i64 {
        let p = self.p;
        let (s, u) = (self.sel[v], self.und[v]);
        let one = p.mu[v] * (p.cap[v] - s - u).max(0) as i64 + p.excess[v];
        let zero = |loops: i32| p.mu[v] * (p.deg[v] - s - u + loops) as i64;
        match self.val[v] {
            1 => one,
            0 => zero(0),
            _ => one.min(zero(p.loops[v])),
        }
    }

    #[inline]
    fn refresh(&mut self, v: usize) {
        let new = self.penalty(v);
        self.pen_sum += new - self.pen[v];
        self.pen[v] = new;
    }

    fn set(&mut self, v: usize, x: i8) {
        debug_assert_eq!(self.val[v], UNDECIDED);
        self.val[v] = x;
        self.trail.push(v as u32);
        self.undecided -= 1;
        self.ones += x as usize;
        let p = self.p;
        for (w, c) in p.adj(v) {
            self.und[w] -= c;
            if x == 1 {
                self.sel[w] += c;
            }
        }
        self.refresh(v);
        for (w, _) in p.adj(v) {
            if w != v {
                self.refresh(w);
            }
        }
    }

    fn unset_last(&mut self) {
        let v = self.trail.pop().expect("non-empty trail") as usize;
        let x = self.val[v];
        self.val[v] = UNDECIDED;
        self.undecided += 1;
        self.ones -= (x == 1) as usize;
        let p = self.p;
        for (w, c) in p.adj(v) {
            self.und[w] += c;
            if x == 1 {
                self.sel[w] -= c;
            }
        }
        self.refresh(v);
        for (w, _) in p.adj(v) {
            if w != v {
                self.refresh(w);
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            self.unset_last();
        }
    }

    /// Selects `v` and forces out every undecided vertex that can no longer
    /// be added. Afterwards every undecided vertex is individually
    /// selectable again.
    fn select(&mut self, v: usize) {
        self.set(v, 1);
        let p = self.p;
        let touched: Vec<usize> = std::iter::once(v)
            .chain(p.adj(v).map(|(w, _)| w).filter(|&w| w != v))
            .collect();
        for &w in &touched {
            match self.val[w] {
                1 => {
                    let room = p.cap[w] - self.sel[w];
                    debug_assert!(room >= 0);
                    for (u, c) in p.adj(w) {
                        if self.val[u] == UNDECIDED && c > room {
                            self.set(u, 0);
                        }
                    }
                }
                UNDECIDED if self.sel[w] + p.loops[w] > p.cap[w] => self.set(w, 0),
                _ => {}
            }
        }
    }

    /// Applies a decision; false when it contradicts one already made.
    fn apply(&mut self, v: usize, x: bool) -> bool {
        if self.val[v] != UNDECIDED {
            return self.val[v] == x as i8;
        }
        if x {
            self.select(v);
        } else {
            self.set(v, 0);
        }
        true
    }

    #[inline]
    fn upper_bound(&self) -> usize {
        let ub = (self.p.base - self.pen_sum).div_euclid(self.p.den).max(0) as usize;
        ub.min(self.ones + self.undecided)
    }

    /// Undecided vertex with the most decided neighbour entries.
    fn branch_vertex(&self) -> Option<usize> {
        let p = self.p;
        let mut best: Option<(i32, u32, usize)> = None;
        for v in 0..p.n {
            if self.val[v] != UNDECIDED {
                continue;
            }
            let score = p.deg[v] - self.und[v];
            let key = (score, u32::MAX - p.rank[v], v);
            if best.is_none_or(|b| (key.0, key.1) > (b.0, b.1)) {
                best = Some(key);
            }
        }
        best.map(|b| b.2)
    }

    fn bits(&self) -> Vec<bool> {
        self.val.iter().map(|&x| x == 1).collect()
    }
}

type Decisions = Vec<(u32, bool)>;

/// Incumbent shared between workers: cardinality and the index of the task
/// that found it, packed so that `fetch_max` prefers larger cardinality and
/// then the smaller task index.
struct Shared {
    best: AtomicU64,
    stop: AtomicBool,
    timed_out: AtomicBool,
    target_hit: AtomicBool,
    nodes: AtomicU64,
    deadline: Option<Instant>,
    target: Option<usize>,
    deterministic: bool,
}

impl Shared {
    fn pack(card: usize, task: usize) -> u64 {
        ((card as u64) << 32) | (u32::MAX as u64 - task as u64)
    }

    fn unpack(x: u64) -> (usize, usize) {
        ((x >> 32) as usize, (u32::MAX as u64 - (x & 0xffff_ffff)) as usize)
    }

    fn offer(&self, card: usize, task: usize) {
        self.best.fetch_max(Self::pack(card, task), Ordering::Relaxed);
        if self.target.is_some_and(|t| card >= t) {
            self.target_hit.store(true, Ordering::Relaxed);
            self.stop.store(true, Ordering::Relaxed);
        }
    }

    /// Smallest cardinality still worth looking for in `task`.
    fn threshold(&self, task: usize, local: usize) -> usize {
        let (card, owner) = Self::unpack(self.best.load(Ordering::Relaxed));
        let global = if self.deterministic && owner > task { card } else { card + 1 };
        let mut t = global.max(local + 1);
        if let Some(target) = self.target {
            t = t.max(target);
        }
        t
    }
}

struct Worker<'p, 's> {
    st: State<'p>,
    shared: &'s Shared,
    task: usize,
    best: usize,
    best_bits: Option<Vec<bool>>,
    nodes: u64,
}

impl Worker<'_, '_> {
    fn record(&mut self) {
        if self.st.ones > self.best {
            self.best = self.st.ones;
            self.best_bits = Some(self.st.bits());
            self.shared.offer(self.best, self.task);
        }
    }

    fn out_of_time(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes & 1023 == 0 {
            self.shared.nodes.fetch_add(1024, Ordering::Relaxed);
            if let Some(d) = self.shared.deadline {
                if Instant::now() >= d {
                    self.shared.timed_out.store(true, Ordering::Relaxed);
                    self.shared.stop.store(true, Ordering::Relaxed);
                }
            }
        }
        self.shared.stop.load(Ordering::Relaxed)
    }

    fn dfs(&mut self) {
        if self.out_of_time() {
            return;
        }
        if self.st.ones > self.best {
            self.record();
        }
        if self.st.upper_bound() < self.shared.threshold(self.task, self.best) {
            return;
        }
        let Some(v) = self.st.branch_vertex() else {
            return;
        };
        let mark = self.st.trail.len();
        self.st.select(v);
        self.dfs();
        self.st.undo_to(mark);
        self.st.set(v, 0);
        self.dfs();
        self.st.undo_to(mark);
    }
}

struct Engine {
    problem: Problem,
    /// Decisions applied before anything else.
    base: Decisions,
    /// Root cases; their union covers every selection up to symmetry.
    cases: Vec<Decisions>,
}

impl Engine {
    fn new(graph: &QuotientGraph, options: &SolveOptions) -> Result<Self> {
        let problem = Problem::new(graph, &multipliers(graph)?);
        let base: Decisions = options.fixed_zero.iter().map(|&v| (v as u32, false)).collect();
        let cases = if graph.quotient == Quotient::Torus && options.fixed_zero.is_empty() {
            translation_cases(graph)
        } else {
            vec![Vec::new()]
        };
        Ok(Engine { problem, base, cases })
    }

    fn split(&self, prefix: &Decisions, depth: usize, threshold: usize, out: &mut Vec<Decisions>) {
        let mut st = State::new(&self.problem);
        for &(v, x) in self.base.iter().chain(prefix) {
            if !st.apply(v as usize, x) {
                return;
            }
        }
        fn rec(st: &mut State, path: &mut Decisions, depth: usize, threshold: usize, out: &mut Vec<Decisions>) {
            if st.upper_bound() < threshold {
                return;
            }
            let v = match st.branch_vertex() {
                Some(v) if depth > 0 => v,
                _ => {
                    out.push(path.clone());
                    return;
                }
            };
            for x in [true, false] {
                let mark = st.trail.len();
                st.apply(v, x);
                path.push((v as u32, x));
                rec(st, path, depth - 1, threshold, out);
                path.pop();
                st.undo_to(mark);
            }
        }
        let mut path = prefix.clone();
        rec(&mut st, &mut path, depth, threshold, out);
    }

    fn run(&self, options: &SolveOptions) -> OptResult {
        let n = self.problem.n;
        let target = options.target.as_ref().map(|t| target_count(t, n));
        let shared = Shared {
            best: AtomicU64::new(Shared::pack(0, 0)),
            stop: AtomicBool::new(false),
            timed_out: AtomicBool::new(false),
            target_hit: AtomicBool::new(target == Some(0)),
            nodes: AtomicU64::new(0),
            deadline: options.time_limit.map(|d| Instant::now() + d),
            target,
            deterministic: options.deterministic,
        };
        // the empty selection is the incumbent of "task 0"
        let root_ub = {
            let mut st = State::new(&self.problem);
            for &(v, x) in &self.base {
                st.apply(v as usize, x);
            }
            st.upper_bound()
        };
        let depth = if n <= 24 { 0 } else { 8 };
        let mut tasks = Vec::new();
        for case in &self.cases {
            self.split(case, depth, 1, &mut tasks);
        }
        let results: Mutex<Vec<(usize, usize, Vec<bool>)>> = Mutex::new(Vec::new());
        let run_task = |(idx, task): (usize, &Decisions)| {
            if shared.stop.load(Ordering::Relaxed) {
                return;
            }
            let task_id = idx + 1;
            let mut st = State::new(&self.problem);
            for &(v, x) in self.base.iter().chain(task) {
                let ok = st.apply(v as usize, x);
                debug_assert!(ok);
            }
            let mut w = Worker {
                st,
                shared: &shared,
                task: task_id,
                best: 0,
                best_bits: None,
                nodes: 0,
            };
            w.dfs();
            shared.nodes.fetch_add(w.nodes & 1023, Ordering::Relaxed);
            if let Some(bits) = w.best_bits {
                results.lock().expect("poisoned").push((w.best, task_id, bits));
            }
        };
        let threads = options.threads.unwrap_or(0);
        if threads == 1 {
            tasks.iter().enumerate().for_each(run_task);
        } else {
            match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                Ok(pool) => pool.install(|| tasks.par_iter().enumerate().for_each(run_task)),
                Err(_) => tasks.iter().enumerate().for_each(run_task),
            }
        }
        let mut results = results.into_inner().expect("poisoned");
        results.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let (card, bits) = match results.into_iter().next() {
            Some((c, _, bits)) => (c, bits),
            None => (0, vec![false; n]),
        };
        let closed = !shared.timed_out.load(Ordering::Relaxed) && !shared.target_hit.load(Ordering::Relaxed);
        let optimal = card == root_ub
            || match target {
                // a closed search under a target only rules out cardinality >= target
                Some(t) => closed && card + 1 >= t,
                None => closed,
            };
        OptResult {
            best_cardinality: card,
            density: Rational::ratio(card, n),
            witness: Selection::from_bits(bits),
            status: if optimal { Status::Optimal } else { Status::LowerBoundOnly },
            elapsed: Duration::ZERO,
            nodes: shared.nodes.load(Ordering::Relaxed),
            method: Method::Bnb,
            budget_exhausted: shared.timed_out.load(Ordering::Relaxed),
        }
    }
}

/// Root cases for a torus: some tile of position `k` is selected and no tile
/// of a smaller position is; by translation it sits in cluster `(0, 0)`.
/// The last case is the empty selection, which needs no search.
fn translation_cases(graph: &QuotientGraph) -> Vec<Decisions> {
    let c = graph.len() / (graph.m * graph.n);
    (1..=c)
        .map(|k| {
            let mut d: Decisions = graph
                .vertices
                .iter()
                .filter(|v| v.k < k)
                .map(|v| (v.id as u32, false))
                .collect();
            d.push((graph.vertex_id(0, 0, k).expect("cluster (0,0)") as u32, true));
            d
        })
        .collect()
}

/// Maximum density with `zero_set` forced out, over the free vertices.
pub fn pinned_density_bound(graph: &QuotientGraph, zero_set: &[usize], options: &SolveOptions) -> Result<(BoundReport, OptResult)> {
    for &v in zero_set {
        if v >= graph.len() {
            return Err(Error::VertexOutOfRange { id: v, count: graph.len() });
        }
    }
    let mut zeros = zero_set.to_vec();
    zeros.sort_unstable();
    zeros.dedup();
    let free = graph.len() - zeros.len();
    if free == 0 {
        return Err(Error::DegenerateBound);
    }
    let opts = SolveOptions {
        fixed_zero: zeros,
        ..options.clone()
    };
    let res = solve_exact(graph, &opts)?;
    let optimal = res.status == Status::Optimal;
    let report = BoundReport {
        value: Rational::ratio(res.best_cardinality, free),
        provenance: Provenance::Pinned,
        certificate: Certificate::Solver {
            cardinality: res.best_cardinality,
            free_vertices: free,
            optimal,
            witness: res.witness.ids(),
        },
        granularity: None,
        note: (!optimal).then(|| "inner search did not close; value is a lower estimate only".to_string()),
    };
    Ok((report, res))
}

/// `max sum w_v x_v` over the relaxation, divided by `sum w_v`.
pub fn weighted_density_bound(graph: &QuotientGraph, weights: &[Rational]) -> Result<BoundReport> {
    if weights.len() != graph.len() {
        return Err(Error::SelectionSize {
            expected: graph.len(),
            got: weights.len(),
        });
    }
    if weights.iter().any(Rational::is_negative) || weights.iter().all(Rational::is_zero) {
        return Err(Error::InvalidWeights);
    }
    let sys = constraint_system(graph);
    let sol = lp_optimum(&sys, weights)?;
    let total: Rational = weights.iter().cloned().sum();
    Ok(BoundReport {
        value: &sol.value / &total,
        provenance: Provenance::WeightedLp,
        certificate: Certificate::Weighted {
            optimum: sol.value,
            total_weight: total,
        },
        granularity: None,
        note: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub m: usize,
    pub n: usize,
    pub vertices: usize,
    pub cardinality: usize,
    pub density: Rational,
    pub status: Status,
    pub witness: Vec<usize>,
}

/// One exact solve per size; a budget hit only downgrades the status.
pub fn density_table(
    kind: TessKind,
    quotient: Quotient,
    sizes: &[(usize, usize)],
    options: &SolveOptions,
) -> Result<Vec<TableRow>> {
    sizes
        .iter()
        .map(|&(m, n)| {
            let g = build(kind, m, n, quotient)?;
            let res = solve_exact(&g, options)?;
            Ok(TableRow {
                m,
                n,
                vertices: g.len(),
                cardinality: res.best_cardinality,
                density: res.density,
                status: res.status,
                witness: res.witness.ids(),
            })
        })
        .collect()
}
