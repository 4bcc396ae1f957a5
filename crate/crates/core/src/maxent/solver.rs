use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use super::constraints::{build_constraints, Comparator, LinearConstraintSystem};
use crate::af::ArgumentationFramework;
use crate::epistemic::{binary_entropy, MarginalAssignment, PartialAssignment};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::properties::PropertyId;

pub const DEFAULT_COMPLETION_TOL: f64 = 1e-8;
const MAX_ITERATIONS: usize = 100_000;
/// Spread below which an LP-derived range counts as a single value.
const PIN_TOL: f64 = 1e-9;
/// Slack below which an inequality is treated as active when polishing.
const ACTIVE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompletionStatus {
    Optimal,
    Infeasible,
}

impl CompletionStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CompletionStatus::Optimal => "optimal",
            CompletionStatus::Infeasible => "infeasible",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletionResult {
    pub status: CompletionStatus,
    pub assignment: Option<MarginalAssignment>,
    /// Sum of binary entropies, which is the entropy of the product joint.
    pub entropy: f64,
    pub kkt_residual: f64,
    pub iterations: usize,
    /// Conflicting constraints when infeasible.
    pub certificate: Vec<String>,
}

/// Maximizes the sum of binary entropies over a linear system, reporting
/// infeasibility as a status rather than an error.
pub fn solve(sys: &LinearConstraintSystem, tol: f64) -> CompletionResult {
    let Some(structure) = Structure::analyze(sys) else {
        return CompletionResult {
            status: CompletionStatus::Infeasible,
            assignment: None,
            entropy: f64::NAN,
            kkt_residual: f64::NAN,
            iterations: 0,
            certificate: sys.infeasibility_certificate().unwrap_or_default(),
        };
    };
    let (x, iterations) = structure.optimize(tol);
    let kkt_residual = structure.kkt_residual(&x);
    let entropy = x.iter().map(|&v| binary_entropy(v)).sum();
    CompletionResult {
        status: CompletionStatus::Optimal,
        assignment: Some(MarginalAssignment::new(x).expect("solver stays in [0,1]")),
        entropy,
        kkt_residual,
        iterations,
        certificate: Vec::new(),
    }
}

/// The maximum-entropy assignment with the given properties that agrees
/// with `pi`. Infeasible inputs yield [`Error::Infeasible`].
pub fn max_entropy_completion(
    af: &ArgumentationFramework,
    props: &BTreeSet<PropertyId>,
    pi: &PartialAssignment,
    tol: f64,
) -> Result<CompletionResult> {
    let sys = build_constraints(af, props, pi)?;
    let result = solve(&sys, tol);
    match result.status {
        CompletionStatus::Optimal => Ok(result),
        CompletionStatus::Infeasible => Err(Error::Infeasible {
            certificate: result.certificate,
        }),
    }
}

/// A row over the free variables: (coeffs, rhs).
pub(crate) type Row = (Vec<f64>, f64);

/// Variables pinned by the system, the remaining free ones, and the split of
/// the constraints into equalities and inequalities with room to move.
pub(crate) struct Structure {
    n: usize,
    pub(crate) fixed: Vec<Option<f64>>,
    free: Vec<usize>,
    equalities: Vec<Row>,
    inequalities: Vec<Row>,
    /// Strictly feasible for the inequalities, exact on the equalities.
    start: Vec<f64>,
}

impl Structure {
    /// `None` when infeasible.
    pub(crate) fn analyze(sys: &LinearConstraintSystem) -> Option<Structure> {
        let n = sys.num_vars();
        let lp = sys.full_lp();
        let mut points: Vec<Vec<f64>> = vec![lp.feasible_point()?];
        let optimum = |obj: &[f64], points: &mut Vec<Vec<f64>>| -> f64 {
            match lp.maximize(obj) {
                LpOutcome::Optimal { x, value } => {
                    points.push(x);
                    value
                }
                _ => unreachable!("bounded feasible LP"),
            }
        };

        let mut fixed = vec![None; n];
        for (j, slot) in fixed.iter_mut().enumerate() {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let hi = optimum(&e, &mut points);
            e[j] = -1.0;
            let lo = -optimum(&e, &mut points);
            if hi - lo <= PIN_TOL {
                *slot = Some(((hi + lo) / 2.0).clamp(0.0, 1.0));
            }
        }
        let free: Vec<usize> = (0..n).filter(|&j| fixed[j].is_none()).collect();

        let mut equalities = Vec::new();
        let mut inequalities = Vec::new();
        for c in &sys.constraints {
            let dense = c.dense(n);
            let mut rhs = c.rhs;
            for (j, f) in fixed.iter().enumerate() {
                if let Some(v) = f {
                    rhs -= dense[j] * v;
                }
            }
            let row: Vec<f64> = free.iter().map(|&j| dense[j]).collect();
            if row.iter().all(|&v| v == 0.0) {
                continue;
            }
            let tight = match c.comparator {
                Comparator::Eq => true,
                Comparator::Le => {
                    let neg: Vec<f64> = dense.iter().map(|v| -v).collect();
                    let max_slack = c.rhs + optimum(&neg, &mut points);
                    max_slack <= PIN_TOL
                }
            };
            if tight {
                equalities.push((row, rhs));
            } else {
                inequalities.push((row, rhs));
            }
        }

        let k = points.len() as f64;
        let mean: Vec<f64> = (0..n)
            .map(|j| points.iter().map(|p| p[j]).sum::<f64>() / k)
            .collect();
        let mut s = Structure {
            n,
            fixed,
            free,
            equalities,
            inequalities,
            start: Vec::new(),
        };
        let y: Vec<f64> = s.free.iter().map(|&j| mean[j]).collect();
        s.start = s.project(&y, &[]);
        Some(s)
    }

    pub(crate) fn free(&self) -> &[usize] {
        &self.free
    }

    /// Rows over the free variables that hold with equality on the whole
    /// feasible set, then the remaining inequalities.
    pub(crate) fn rows(&self) -> (&[Row], &[Row]) {
        (&self.equalities, &self.inequalities)
    }

    fn full(&self, y: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (j, f) in self.fixed.iter().enumerate() {
            if let Some(v) = f {
                x[j] = *v;
            }
        }
        for (k, &j) in self.free.iter().enumerate() {
            x[j] = y[k];
        }
        x
    }

    /// Equality rows plus the selected inequalities, as a matrix and rhs.
    fn affine(&self, active: &[usize]) -> (DMatrix<f64>, DVector<f64>) {
        let rows: Vec<&(Vec<f64>, f64)> = self
            .equalities
            .iter()
            .chain(active.iter().map(|&i| &self.inequalities[i]))
            .collect();
        let m = DMatrix::from_fn(rows.len(), self.free.len(), |r, c| rows[r].0[c]);
        let b = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
        (m, b)
    }

    /// Closest point to `y` on the affine set of equalities and `active`.
    fn project(&self, y: &[f64], active: &[usize]) -> Vec<f64> {
        let (m, b) = self.affine(active);
        let y = DVector::from_column_slice(y);
        if m.nrows() == 0 {
            return y.iter().copied().collect();
        }
        let r = &m * &y - b;
        let pinv = m.pseudo_inverse(1e-12).expect("svd");
        (y - pinv * r).iter().copied().collect()
    }

    /// Orthonormal basis of the null space of the affine rows.
    fn null_space(&self, active: &[usize]) -> DMatrix<f64> {
        let f = self.free.len();
        let (m, _) = self.affine(active);
        if m.nrows() == 0 {
            return DMatrix::identity(f, f);
        }
        let gram = m.transpose() * &m;
        let eig = SymmetricEigen::new(gram);
        let top = eig.eigenvalues.iter().copied().fold(1.0, f64::max);
        let cols: Vec<usize> = (0..f)
            .filter(|&i| eig.eigenvalues[i] <= 1e-10 * top)
            .collect();
        DMatrix::from_fn(f, cols.len(), |r, c| eig.eigenvectors[(r, cols[c])])
    }

    fn slacks(&self, y: &[f64], rows: &[usize]) -> Vec<f64> {
        rows.iter()
            .map(|&i| {
                let (a, b) = &self.inequalities[i];
                b - a.iter().zip(y).map(|(u, v)| u * v).sum::<f64>()
            })
            .collect()
    }

    /// Negative entropy plus `mu` times the log barrier of `barrier` rows.
    fn phi(&self, y: &[f64], barrier: &[usize], mu: f64) -> f64 {
        if y.iter().any(|&v| v <= 0.0 || v >= 1.0) {
            return f64::INFINITY;
        }
        let mut val: f64 = y.iter().map(|&v| -binary_entropy(v)).sum();
        if mu > 0.0 {
            for s in self.slacks(y, barrier) {
                if s <= 0.0 {
                    return f64::INFINITY;
                }
                val -= mu * s.ln();
            }
        }
        val
    }

    /// Damped Newton on `phi` restricted to `y + Z w`.
    fn newton(
        &self,
        mut y: Vec<f64>,
        z: &DMatrix<f64>,
        barrier: &[usize],
        mu: f64,
        budget: &mut usize,
    ) -> Vec<f64> {
        let f = self.free.len();
        if z.ncols() == 0 {
            return y;
        }
        for _ in 0..200 {
            if *budget == 0 {
                break;
            }
            *budget -= 1;
            let slacks = self.slacks(&y, barrier);
            let mut grad = DVector::from_fn(f, |j, _| (y[j] / (1.0 - y[j])).ln());
            let mut hess = DMatrix::from_diagonal(&DVector::from_fn(f, |j, _| 1.0 / (y[j] * (1.0 - y[j]))));
            if mu > 0.0 {
                for (&i, &s) in barrier.iter().zip(&slacks) {
                    let a = DVector::from_column_slice(&self.inequalities[i].0);
                    grad += &a * (mu / s);
                    hess += &a * a.transpose() * (mu / (s * s));
                }
            }
            let g = z.transpose() * &grad;
            let h = z.transpose() * &hess * z;
            let step = match h.clone().cholesky() {
                Some(ch) => ch.solve(&(-&g)),
                None => match h.lu().solve(&(-&g)) {
                    Some(d) => d,
                    None => -g.clone(),
                },
            };
            let dy = z * &step;
            let decrement = -g.dot(&step);
            if decrement < 1e-30 {
                break;
            }
            let mut alpha_max: f64 = 1.0;
            for j in 0..f {
                if dy[j] < 0.0 {
                    alpha_max = alpha_max.min(-y[j] / dy[j]);
                } else if dy[j] > 0.0 {
                    alpha_max = alpha_max.min((1.0 - y[j]) / dy[j]);
                }
            }
            if mu > 0.0 {
                for (&i, &s) in barrier.iter().zip(&slacks) {
                    let ad: f64 = self.inequalities[i].0.iter().zip(dy.iter()).map(|(u, v)| u * v).sum();
                    if ad > 0.0 {
                        alpha_max = alpha_max.min(s / ad);
                    }
                }
            }
            let mut alpha = if alpha_max >= 1.0 { 1.0 } else { 0.99 * alpha_max };
            // Inside the quadratic region objective changes drop below float
            // resolution, so the sufficient-decrease test is skipped there.
            if decrement < 1e-12 && alpha == 1.0 {
                let cand: Vec<f64> = y.iter().zip(dy.iter()).map(|(v, d)| v + d).collect();
                if self.phi(&cand, barrier, mu).is_finite() {
                    y = cand;
                    continue;
                }
            }
            let base = self.phi(&y, barrier, mu);
            let mut moved = false;
            while alpha > 1e-18 {
                let cand: Vec<f64> = y.iter().zip(dy.iter()).map(|(v, d)| v + alpha * d).collect();
                let val = self.phi(&cand, barrier, mu);
                if val <= base - 1e-4 * alpha * decrement {
                    y = cand;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !moved {
                break;
            }
        }
        y
    }

    /// Returns the optimum and the number of Newton steps taken.
    pub(crate) fn optimize(&self, tol: f64) -> (Vec<f64>, usize) {
        let mut budget = MAX_ITERATIONS;
        let all: Vec<usize> = (0..self.inequalities.len()).collect();
        let z = self.null_space(&[]);
        let mut y = self.start.clone();
        // A barrier weight far above a row's slack drives the central path
        // into underflow, so the schedule starts at the tightest slack.
        let mut mu = self
            .slacks(&y, &all)
            .into_iter()
            .fold(1.0, f64::min);
        while mu > 1e-15 && budget > 0 {
            y = self.newton(y, &z, &all, mu, &mut budget);
            mu *= 0.1;
        }
        let mut best = self.full(&y);
        let residual = self.kkt_residual(&best);
        // The barrier stops short of degenerate optima by about its last
        // parameter; the active-set solve lands on them exactly.
        if let Some(polished) = self.polish(&y, &mut budget) {
            let x = self.full(&polished);
            if self.kkt_residual(&x) <= residual.max(tol * 1e-3) {
                best = x;
            }
        }
        (best, MAX_ITERATIONS - budget)
    }

    /// Treats nearly tight inequalities as equalities, solves the resulting
    /// equality-constrained problem, and drops rows whose multipliers come
    /// out negative.
    fn polish(&self, y: &[f64], budget: &mut usize) -> Option<Vec<f64>> {
        let slacks = self.slacks(y, &(0..self.inequalities.len()).collect::<Vec<_>>());
        let mut active: Vec<usize> = (0..self.inequalities.len())
            .filter(|&i| slacks[i] <= 1e-5)
            .collect();
        for _ in 0..=self.inequalities.len() {
            let start = self.project(y, &active);
            if start.iter().any(|&v| v <= 0.0 || v >= 1.0) {
                return None;
            }
            let z = self.null_space(&active);
            let cand = self.newton(start, &z, &[], 0.0, budget);
            let inactive: Vec<usize> = (0..self.inequalities.len())
                .filter(|i| !active.contains(i))
                .collect();
            if self.slacks(&cand, &inactive).iter().any(|&s| s < -1e-12) {
                return None;
            }
            if self.stationarity(&cand, &active) <= 1e-12 {
                return Some(cand);
            }
            let (_, nu) = self.multipliers(&cand, &active);
            match nu
                .iter()
                .enumerate()
                .filter(|(_, &v)| v < -1e-12)
                .min_by(|a, b| a.1.total_cmp(b.1))
            {
                None => return Some(cand),
                Some((k, _)) => {
                    active.remove(k);
                }
            }
        }
        None
    }

    /// Least-squares multipliers for `grad f + M^T w = 0` with `f` the
    /// negative entropy; returns the stationarity residual and the
    /// multipliers of the `active` inequalities.
    fn multipliers(&self, y: &[f64], active: &[usize]) -> (f64, Vec<f64>) {
        let f = self.free.len();
        let grad = DVector::from_fn(f, |j, _| (y[j] / (1.0 - y[j])).ln());
        let (m, _) = self.affine(active);
        if m.nrows() == 0 {
            return (grad.amax(), Vec::new());
        }
        let mt = m.transpose();
        let w = mt.clone().pseudo_inverse(1e-12).expect("svd") * (-&grad);
        let residual = (&grad + &mt * &w).amax();
        let k = self.equalities.len();
        (residual, w.iter().skip(k).copied().collect())
    }

    /// Smallest stationarity residual over multipliers that are free on the
    /// equalities and nonnegative on the `active` inequalities. At degenerate
    /// points the least-squares multipliers can be negative even though a
    /// valid choice exists, so this is posed as an LP minimizing the L1
    /// residual.
    fn stationarity(&self, y: &[f64], active: &[usize]) -> f64 {
        let f = self.free.len();
        let grad: Vec<f64> = y.iter().map(|&v| (v / (1.0 - v)).ln()).collect();
        let (m, _) = self.affine(active);
        let k = self.equalities.len();
        let rows = m.nrows();
        // Columns: eq multipliers split in +/-, inequality multipliers,
        // residuals split in +/-.
        let width = 2 * k + (rows - k) + 2 * f;
        let mut lp = LinearProgram::new(width);
        for j in 0..f {
            let mut row = vec![0.0; width];
            for r in 0..rows {
                let v = m[(r, j)];
                if r < k {
                    row[2 * r] = v;
                    row[2 * r + 1] = -v;
                } else {
                    row[2 * k + (r - k)] = v;
                }
            }
            row[2 * k + (rows - k) + 2 * j] = 1.0;
            row[2 * k + (rows - k) + 2 * j + 1] = -1.0;
            lp.push(row, Relation::Eq, -grad[j]);
        }
        let mut objective = vec![0.0; width];
        objective[2 * k + (rows - k)..].iter_mut().for_each(|v| *v = -1.0);
        match lp.maximize(&objective) {
            LpOutcome::Optimal { x, .. } => (0..f)
                .map(|j| {
                    let base = 2 * k + (rows - k) + 2 * j;
                    (x[base] - x[base + 1]).abs()
                })
                .fold(0.0, f64::max),
            _ => f64::INFINITY,
        }
    }

    /// Worst of: stationarity on the free variables against the rows with
    /// slack at most `ACTIVE_TOL`, inequality violation, equality violation.
    pub(crate) fn kkt_residual(&self, x: &[f64]) -> f64 {
        let y: Vec<f64> = self.free.iter().map(|&j| x[j]).collect();
        if y.iter().any(|&v| v <= 0.0 || v >= 1.0) {
            return f64::INFINITY;
        }
        let all: Vec<usize> = (0..self.inequalities.len()).collect();
        let slacks = self.slacks(&y, &all);
        let active: Vec<usize> = all.iter().copied().filter(|&i| slacks[i] <= ACTIVE_TOL).collect();
        let stationarity = self.stationarity(&y, &active);
        let primal = slacks.iter().map(|&s| (-s).max(0.0)).fold(0.0, f64::max);
        let equality = self
            .equalities
            .iter()
            .map(|(a, b)| (a.iter().zip(&y).map(|(u, v)| u * v).sum::<f64>() - b).abs())
            .fold(0.0, f64::max);
        [stationarity, primal, equality]
            .into_iter()
            .fold(0.0, f64::max)
    }
}
