//! Certified global search over the price square.
//!
//! The square is cut into a uniform grid and cells are refined best-first.
//! Each cell is bounded by clipping it against every constraint: linear
//! constraints exactly, the two profit constraints through a tangent plane
//! shifted by the largest curvature the cell can hold. The objective is
//! concave on either side of the diagonal `p1 = p2`, so its minimum over the
//! clipped polygon sits on a vertex. That vertex minimum of the relaxed
//! polygon is the cell's lower bound; the same construction with the
//! curvature shift reversed gives a polygon of strictly feasible points
//! whose best vertex feeds the incumbent.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::geometry::{clip, clip_all, rectangle, HalfPlane, Point};
use super::{
    evaluate_point, prefer, tie_tolerance, Constraint, OptimalityCertificate, PointEvaluation,
    ReducedProblem, Tolerances,
};
use crate::market::{Manufacturer, NegotiationSolution, SolveStatus};
use crate::{Error, Result};

/// Solves the negotiation program to certified global optimality.
///
/// Infeasible scenarios still return a solution: status `INFEASIBLE`, at the
/// least-violating point the search examined.
pub fn solve(problem: &ReducedProblem, tol: &Tolerances) -> Result<NegotiationSolution> {
    check_inputs(problem, tol)?;
    let mut search = Search::new(problem, tol);
    search.run();
    Ok(search.finish())
}

fn check_inputs(problem: &ReducedProblem, tol: &Tolerances) -> Result<()> {
    let c = &problem.curve;
    let e = &problem.equilibrium;
    let s = &problem.scenario;
    let values = [
        c.a_pub,
        c.a_priv,
        c.b,
        c.c,
        e.p_priv,
        e.q_priv,
        e.surplus_bound,
        s.total_demand,
        s.r_pub,
        s.mu,
        problem.p_max,
    ];
    if !values.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("problem parameter"));
    }
    let params = s
        .manufacturers
        .iter()
        .flat_map(|m| [m.capacity, m.target_profit, m.unit_cost]);
    if !params.into_iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("manufacturer parameter"));
    }
    if !(tol.feasibility >= 0.0
        && tol.price_resolution > 0.0
        && tol.objective_gap > 0.0
        && tol.initial_grid >= 1
        && tol.max_cells >= 1)
    {
        return Err(Error::Domain("invalid solver tolerances".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    lo: Point,
    hi: Point,
    depth: u32,
    lb: f64,
    seq: u64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    // BinaryHeap is a max-heap; smallest bound (then oldest) pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .lb
            .total_cmp(&self.lb)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Bounds computed for one cell.
struct CellBound {
    lb: f64,
    relaxed_argmin: Point,
    inner_argmin: Option<Point>,
}

/// Constant data for the cell relaxations.
struct Relaxer<'a> {
    problem: &'a ReducedProblem,
    /// Linear constraints with exact right-hand sides.
    linear: Vec<HalfPlane>,
    tau: f64,
    /// Extreme eigenvalues of a profit function's Hessian.
    curvature_max: f64,
    curvature_min: f64,
}

impl<'a> Relaxer<'a> {
    fn new(problem: &'a ReducedProblem, tau: f64) -> Self {
        let c = &problem.curve;
        let s = &problem.scenario;
        let e = &problem.equilibrium;
        let (a, b, cc) = (c.a_pub, c.b, c.c);
        let mut linear = Vec::with_capacity(5);
        // q1 + q2 >= r D
        linear.push(HalfPlane::new(
            [b - cc, b - cc],
            2.0 * a - s.r_pub * s.total_demand,
        ));
        for m in Manufacturer::ALL {
            let i = m.index();
            let k = s.params(m).capacity;
            // q_i <= min(K - q_priv, K - U), written in prices
            let q_upper = (k - e.q_priv).min(k - e.surplus_bound);
            let mut n = [cc, cc];
            n[i] = -b;
            linear.push(HalfPlane::new(n, q_upper - a));
            // q_i >= 0
            linear.push(HalfPlane::new([-n[0], -n[1]], a));
        }
        let root = (b * b + cc * cc).sqrt();
        Relaxer {
            problem,
            linear,
            tau,
            curvature_max: -b + root,
            curvature_min: -b - root,
        }
    }

    /// Largest value of manufacturer `m`'s profit anywhere in the cell.
    fn max_profit(&self, m: Manufacturer, lo: Point, hi: Point) -> f64 {
        let c = &self.problem.curve;
        let d = self.problem.scenario.params(m).unit_cost;
        let i = m.index();
        let j = 1 - i;
        let mut best = f64::NEG_INFINITY;
        // linear in the rival's price, concave in the own price
        for pj in [lo[j], hi[j]] {
            let pi = ((c.a_pub + c.c * pj + c.b * d) / (2.0 * c.b)).clamp(lo[i], hi[i]);
            let mut p = [0.0; 2];
            p[i] = pi;
            p[j] = pj;
            let q = self.problem.public_quantities(p);
            best = best.max(self.problem.profits(p, q)[i]);
        }
        best
    }

    /// Tangent-plane cut for a profit constraint, shifted by `shift`.
    fn profit_plane(&self, m: Manufacturer, center: Point, shift: f64, slack: f64) -> HalfPlane {
        let k = Constraint::TargetProfit(m);
        let g = self.problem.constraint_value(k, center);
        let grad = self.problem.constraint_gradient(k, center);
        // g(c) + grad.(p - c) - shift <= slack
        HalfPlane::new(
            grad,
            slack + shift - g + grad[0] * center[0] + grad[1] * center[1],
        )
    }

    fn bound(&self, lo: Point, hi: Point) -> Option<CellBound> {
        let s = &self.problem.scenario;
        for m in Manufacturer::ALL {
            if self.max_profit(m, lo, hi) < s.params(m).target_profit - self.tau {
                return None;
            }
        }
        let center = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
        let r2 = ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)) / 4.0;

        let mut outer: Vec<HalfPlane> = self
            .linear
            .iter()
            .map(|h| HalfPlane::new(h.normal, h.offset + self.tau))
            .collect();
        for m in Manufacturer::ALL {
            outer.push(self.profit_plane(m, center, 0.5 * self.curvature_max * r2, self.tau));
        }
        let relaxed = clip_all(rectangle(lo, hi), &outer);
        let (lb, relaxed_argmin) = self.vertex_minimum(&relaxed)?;

        let mut inner = self.linear.clone();
        for m in Manufacturer::ALL {
            inner.push(self.profit_plane(m, center, 0.5 * self.curvature_min * r2, 0.0));
        }
        let strict = clip_all(rectangle(lo, hi), &inner);
        let inner_argmin = self.vertex_minimum(&strict).map(|(_, p)| p);

        Some(CellBound {
            lb: lb - 1e-12 * (1.0 + lb.abs()),
            relaxed_argmin,
            inner_argmin,
        })
    }

    /// Minimum of the objective over a convex polygon: split along the
    /// diagonal, where the objective is concave on each side, and compare
    /// vertices.
    fn vertex_minimum(&self, poly: &[Point]) -> Option<(f64, Point)> {
        if poly.is_empty() {
            return None;
        }
        let below = clip(poly, &HalfPlane::new([-1.0, 1.0], 0.0));
        let above = clip(poly, &HalfPlane::new([1.0, -1.0], 0.0));
        let mut best: Option<(f64, Point)> = None;
        for v in below.iter().chain(above.iter()) {
            let f = self.problem.objective(*v);
            if best.is_none_or(|(bf, _)| f < bf) {
                best = Some((f, *v));
            }
        }
        best
    }
}

struct Search<'a> {
    problem: &'a ReducedProblem,
    tol: &'a Tolerances,
    relaxer: Relaxer<'a>,
    heap: BinaryHeap<Cell>,
    seq: u64,
    incumbent: Option<PointEvaluation>,
    least_violation: Option<PointEvaluation>,
    leaf_lb: f64,
    open_leaves: usize,
    remaining_lb: f64,
    processed: usize,
    finest: f64,
    max_depth: u32,
    complete: bool,
}

impl<'a> Search<'a> {
    fn new(problem: &'a ReducedProblem, tol: &'a Tolerances) -> Self {
        Search {
            problem,
            tol,
            relaxer: Relaxer::new(problem, tol.feasibility),
            heap: BinaryHeap::new(),
            seq: 0,
            incumbent: None,
            least_violation: None,
            leaf_lb: f64::INFINITY,
            open_leaves: 0,
            remaining_lb: f64::INFINITY,
            processed: 0,
            finest: problem.p_max,
            max_depth: 0,
            complete: true,
        }
    }

    fn prune_margin(&self, incumbent: f64) -> f64 {
        (self.tol.objective_gap * 1e-3).max(tie_tolerance(incumbent))
    }

    fn consider(&mut self, p: Point) {
        let p = [
            p[0].clamp(0.0, self.problem.p_max),
            p[1].clamp(0.0, self.problem.p_max),
        ];
        let ev = evaluate_point(self.problem, p);
        if self
            .least_violation
            .is_none_or(|b| ev.max_violation < b.max_violation)
        {
            self.least_violation = Some(ev);
        }
        if ev.is_feasible(self.tol) {
            let better = match &self.incumbent {
                None => true,
                Some(inc) => prefer(&ev, inc, tie_tolerance(inc.objective)),
            };
            if better {
                self.incumbent = Some(ev);
            }
        }
    }

    fn push(&mut self, lo: Point, hi: Point, depth: u32) {
        self.finest = self.finest.min(hi[0] - lo[0]);
        self.max_depth = self.max_depth.max(depth);
        let center = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
        self.consider(center);
        let Some(bound) = self.relaxer.bound(lo, hi) else {
            return;
        };
        self.consider(bound.relaxed_argmin);
        if let Some(p) = bound.inner_argmin {
            self.consider(p);
        }
        if let Some(inc) = &self.incumbent {
            if bound.lb >= inc.objective - self.prune_margin(inc.objective) {
                return;
            }
        }
        self.seq += 1;
        self.heap.push(Cell {
            lo,
            hi,
            depth,
            lb: bound.lb,
            seq: self.seq,
        });
    }

    fn run(&mut self) {
        let n = self.tol.initial_grid;
        let w = self.problem.p_max / n as f64;
        for i in 0..n {
            for j in 0..n {
                let lo = [i as f64 * w, j as f64 * w];
                let hi = [
                    if i + 1 == n {
                        self.problem.p_max
                    } else {
                        (i + 1) as f64 * w
                    },
                    if j + 1 == n {
                        self.problem.p_max
                    } else {
                        (j + 1) as f64 * w
                    },
                ];
                self.push(lo, hi, 0);
            }
        }

        while let Some(cell) = self.heap.pop() {
            if let Some(inc) = &self.incumbent {
                if cell.lb >= inc.objective - self.prune_margin(inc.objective) {
                    self.remaining_lb = cell.lb;
                    break;
                }
            }
            if self.processed >= self.tol.max_cells {
                self.remaining_lb = cell.lb;
                self.complete = false;
                break;
            }
            self.processed += 1;
            let width = (cell.hi[0] - cell.lo[0]).max(cell.hi[1] - cell.lo[1]);
            if width <= self.tol.price_resolution {
                self.leaf_lb = self.leaf_lb.min(cell.lb);
                self.open_leaves += 1;
                continue;
            }
            let mid = [
                (cell.lo[0] + cell.hi[0]) / 2.0,
                (cell.lo[1] + cell.hi[1]) / 2.0,
            ];
            for (lo, hi) in [
                (cell.lo, mid),
                ([mid[0], cell.lo[1]], [cell.hi[0], mid[1]]),
                ([cell.lo[0], mid[1]], [mid[0], cell.hi[1]]),
                (mid, cell.hi),
            ] {
                self.push(lo, hi, cell.depth + 1);
            }
        }
    }

    fn finish(self) -> NegotiationSolution {
        let global_lb = self.remaining_lb.min(self.leaf_lb);
        let mut certificate = OptimalityCertificate {
            grid_resolution: self.finest,
            incumbent_objective: f64::NAN,
            lower_bound_gap: 0.0,
            refinement_rounds: self.max_depth,
            cells_processed: self.processed,
            complete: self.complete,
        };
        match self.incumbent {
            Some(inc) => {
                let best = polish(self.problem, self.tol, inc);
                let gap = if global_lb.is_finite() {
                    (best.objective - global_lb).max(0.0)
                } else {
                    0.0
                };
                certificate.incumbent_objective = best.objective;
                certificate.lower_bound_gap = gap;
                NegotiationSolution {
                    status: SolveStatus::classify(best.p_pub, best.q_pub),
                    p_pub: best.p_pub,
                    q_pub: best.q_pub,
                    z: best.z,
                    objective: best.objective,
                    realized_profit: best.profit,
                    max_violation: best.max_violation,
                    certificate_gap: gap,
                    certificate,
                }
            }
            None => {
                let diag = self
                    .least_violation
                    .unwrap_or_else(|| evaluate_point(self.problem, [0.0, 0.0]));
                certificate.incumbent_objective = diag.objective;
                certificate.complete = self.complete && self.open_leaves == 0;
                NegotiationSolution {
                    status: SolveStatus::Infeasible,
                    p_pub: diag.p_pub,
                    q_pub: diag.q_pub,
                    z: diag.z,
                    objective: diag.objective,
                    realized_profit: diag.profit,
                    max_violation: diag.max_violation,
                    certificate_gap: 0.0,
                    certificate,
                }
            }
        }
    }
}

/// An equality used by the local polish: either a program constraint held
/// at zero or the diagonal `p1 = p2` where the objective has its kink.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Active {
    Constraint(Constraint),
    Diagonal,
}

impl Active {
    fn value(self, prob: &ReducedProblem, p: Point) -> f64 {
        match self {
            Active::Constraint(k) => prob.constraint_value(k, p),
            Active::Diagonal => p[0] - p[1],
        }
    }

    fn gradient(self, prob: &ReducedProblem, p: Point) -> [f64; 2] {
        match self {
            Active::Constraint(k) => prob.constraint_gradient(k, p),
            Active::Diagonal => [1.0, -1.0],
        }
    }
}

const ACTIVE_BAND: f64 = 1e-4;
const POLISH_RADIUS: f64 = 1e-2;

/// Moves the incumbent onto the exact intersection of its nearly active
/// constraints (or the exact constrained stationary point on a single
/// profit curve) when that does not cost objective beyond the certificate.
fn polish(prob: &ReducedProblem, tol: &Tolerances, start: PointEvaluation) -> PointEvaluation {
    let p0 = start.p_pub;
    let mut active: Vec<Active> = Constraint::ALL
        .iter()
        .copied()
        .filter(|&k| prob.constraint_value(k, p0).abs() <= ACTIVE_BAND)
        .map(Active::Constraint)
        .collect();
    if (p0[0] - p0[1]).abs() <= ACTIVE_BAND {
        active.push(Active::Diagonal);
    }

    let mut candidates: Vec<Point> = Vec::new();
    for (x, &first) in active.iter().enumerate() {
        for &second in &active[x + 1..] {
            if let Some(p) = intersect_newton(prob, first, second, p0) {
                candidates.push(p);
            }
        }
        if let Active::Constraint(k @ Constraint::TargetProfit(_)) = first {
            if let Some(p) = stationary_on_curve(prob, k, p0) {
                candidates.push(p);
            }
        }
    }

    let slack = tol.objective_gap * 1e-3;
    let mut best: Option<PointEvaluation> = None;
    for p in candidates {
        if !p.iter().all(|v| v.is_finite()) {
            continue;
        }
        if ((p[0] - p0[0]).powi(2) + (p[1] - p0[1]).powi(2)).sqrt() > POLISH_RADIUS {
            continue;
        }
        let p = [p[0].max(0.0), p[1].max(0.0)];
        let ev = evaluate_point(prob, p);
        if !ev.is_feasible(tol) || ev.objective > start.objective + slack {
            continue;
        }
        let take = match &best {
            None => true,
            Some(b) => prefer(&ev, b, tie_tolerance(b.objective)),
        };
        if take {
            best = Some(ev);
        }
    }
    best.unwrap_or(start)
}

fn intersect_newton(prob: &ReducedProblem, a: Active, b: Active, start: Point) -> Option<Point> {
    let mut p = start;
    for _ in 0..50 {
        let f = [a.value(prob, p), b.value(prob, p)];
        if f[0].abs() <= 1e-13 * (1.0 + p[0].abs()) && f[1].abs() <= 1e-13 * (1.0 + p[1].abs()) {
            return Some(p);
        }
        let ga = a.gradient(prob, p);
        let gb = b.gradient(prob, p);
        let det = ga[0] * gb[1] - ga[1] * gb[0];
        let scale = (ga[0].abs() + ga[1].abs()) * (gb[0].abs() + gb[1].abs());
        if det.abs() <= 1e-12 * scale.max(1e-300) {
            return None;
        }
        let dx = (f[0] * gb[1] - f[1] * ga[1]) / det;
        let dy = (ga[0] * f[1] - gb[0] * f[0]) / det;
        p = [p[0] - dx, p[1] - dy];
    }
    let f = [a.value(prob, p), b.value(prob, p)];
    (f[0].abs() <= 1e-10 && f[1].abs() <= 1e-10).then_some(p)
}

/// Newton on the Lagrange system `grad f + lambda grad g = 0, g = 0` for a
/// profit constraint, with the objective's kink side fixed at the start.
fn stationary_on_curve(prob: &ReducedProblem, k: Constraint, start: Point) -> Option<Point> {
    let side = if start[0] > start[1] {
        1.0
    } else if start[0] < start[1] {
        -1.0
    } else {
        return None;
    };
    let Constraint::TargetProfit(m) = k else {
        return None;
    };
    let (b, c) = (prob.curve.b, prob.curve.c);
    let mu = prob.scenario.mu;
    let hf = [[-2.0 * b * mu, 2.0 * c * mu], [2.0 * c * mu, -2.0 * b * mu]];
    // Hessian of g = P - profit
    let hg = match m {
        Manufacturer::First => [[2.0 * b, -c], [-c, 0.0]],
        Manufacturer::Second => [[0.0, -c], [-c, 2.0 * b]],
    };
    let mut p = start;
    let g0 = prob.constraint_gradient(k, p);
    let f0 = prob.objective_gradient(p, side);
    let n0 = g0[0] * g0[0] + g0[1] * g0[1];
    if n0 == 0.0 {
        return None;
    }
    let mut lambda = -(f0[0] * g0[0] + f0[1] * g0[1]) / n0;
    for _ in 0..50 {
        let gf = prob.objective_gradient(p, side);
        let gg = prob.constraint_gradient(k, p);
        let gv = prob.constraint_value(k, p);
        let r = [gf[0] + lambda * gg[0], gf[1] + lambda * gg[1], gv];
        if r.iter().all(|v| v.abs() <= 1e-12 * (1.0 + lambda.abs())) {
            return Some(p);
        }
        let j = [
            [
                hf[0][0] + lambda * hg[0][0],
                hf[0][1] + lambda * hg[0][1],
                gg[0],
            ],
            [
                hf[1][0] + lambda * hg[1][0],
                hf[1][1] + lambda * hg[1][1],
                gg[1],
            ],
            [gg[0], gg[1], 0.0],
        ];
        let step = solve3(j, r)?;
        p = [p[0] - step[0], p[1] - step[1]];
        lambda -= step[2];
        if (p[0] - p[1]) * side <= 0.0 {
            return None;
        }
    }
    None
}

fn solve3(a: [[f64; 3]; 3], r: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    let norm: f64 = a.iter().flatten().map(|v| v.abs()).sum();
    if d.abs() <= 1e-14 * norm.powi(3).max(1e-300) {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut m = a;
        for row in 0..3 {
            m[row][col] = r[row];
        }
        *slot = det(m) / d;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::super::tests::reference_problem;
    use super::*;
    use crate::demand::bundled_historical;
    use crate::market::ScenarioConfig;
    use approx::assert_abs_diff_eq;

    fn solve_default(prob: &ReducedProblem) -> NegotiationSolution {
        solve(prob, &Tolerances::default()).unwrap()
    }

    #[test]
    fn scenario_2_reproduces_reference_prices() {
        let sol = solve_default(&reference_problem(2));
        assert_eq!(sol.status, SolveStatus::Interior);
        assert!((sol.p_pub[0] / 40.35 - 1.0).abs() < 0.005, "{sol:?}");
        assert!((sol.p_pub[1] / 54.92 - 1.0).abs() < 0.005, "{sol:?}");
        assert!(sol.certificate_gap <= 1e-3);
        assert!(sol.certificate.complete);
    }

    #[test]
    fn scenario_3_exceeds_first_target() {
        let sol = solve_default(&reference_problem(3));
        assert_abs_diff_eq!(sol.p_pub[0], 38.65, epsilon = 0.2);
        assert_abs_diff_eq!(sol.p_pub[1], 47.15, epsilon = 0.24);
        assert_abs_diff_eq!(sol.realized_profit[0], 1015.9, epsilon = 2.0);
        assert_abs_diff_eq!(sol.realized_profit[1], 41.4, epsilon = 2.0);
    }

    #[test]
    fn both_top_targets_are_infeasible() {
        let recs = bundled_historical();
        for (d, g, c1, c2) in [(157.05, 0.25, 0.0, 0.0), (191.95, 0.75, 31.96, 6.6)] {
            let cfg = ScenarioConfig::with_factors(1, d, g, [2570.0, 2570.0], [c1, c2]);
            let prob = ReducedProblem::from_scenario(&recs, &cfg).unwrap();
            let sol = solve_default(&prob);
            assert_eq!(sol.status, SolveStatus::Infeasible);
            assert!(sol.max_violation > 1e-6);
            assert!(sol.certificate.complete);
        }
    }

    #[test]
    fn reported_solution_is_consistent() {
        let prob = reference_problem(5);
        let sol = solve_default(&prob);
        let ev = evaluate_point(&prob, sol.p_pub);
        assert_eq!(ev.q_pub, sol.q_pub);
        assert_eq!(ev.objective, sol.objective);
        assert_eq!(sol.z, (sol.p_pub[0] - sol.p_pub[1]).abs());
        assert!(ev.max_violation <= 1e-6);
        let mu = prob.scenario.mu;
        let recomputed =
            mu * (sol.q_pub[0] * sol.p_pub[0] + sol.q_pub[1] * sol.p_pub[1]) + (1.0 - mu) * sol.z;
        assert_eq!(recomputed, sol.objective);
    }

    #[test]
    fn polish_lands_on_binding_profits() {
        // scenario 2: both profit targets bind
        let sol = solve_default(&reference_problem(2));
        assert_abs_diff_eq!(sol.realized_profit[0], 234.0, epsilon = 1e-6);
        assert_abs_diff_eq!(sol.realized_profit[1], 41.4, epsilon = 1e-6);
    }

    #[test]
    fn non_finite_input_is_an_error() {
        let mut prob = reference_problem(1);
        prob.equilibrium.surplus_bound = f64::INFINITY;
        assert!(solve(&prob, &Tolerances::default()).is_err());
        let prob = reference_problem(1);
        let bad = Tolerances {
            objective_gap: 0.0,
            ..Tolerances::default()
        };
        assert!(solve(&prob, &bad).is_err());
    }

    #[test]
    fn cell_cap_marks_certificate_incomplete() {
        let prob = reference_problem(2);
        let tol = Tolerances {
            max_cells: 3,
            ..Tolerances::default()
        };
        let sol = solve(&prob, &tol).unwrap();
        assert!(!sol.certificate.complete);
    }

    #[test]
    fn solve3_inverts() {
        let a = [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]];
        let x = [1.0, -2.0, 0.5];
        let r = [0, 1, 2].map(|i| (0..3).map(|j| a[i][j] * x[j]).sum::<f64>());
        let got = solve3(a, r).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(got[i], x[i], epsilon = 1e-12);
        }
    }
}
