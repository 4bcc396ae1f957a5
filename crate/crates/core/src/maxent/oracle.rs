use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};

use super::constraints::{build_constraints, LinearConstraintSystem};
use super::solver::Structure;
use crate::af::ArgumentationFramework;
use crate::epistemic::{JointDistribution, PartialAssignment};
use crate::error::{Error, Result};
use crate::properties::PropertyId;

pub const MAX_ORACLE_ARGS: usize = 10;

/// Maximum-entropy joint distribution over all subsets whose marginals
/// satisfy the constraint system. Exponential in the number of arguments.
pub fn brute_force_joint_maxent(
    af: &ArgumentationFramework,
    props: &BTreeSet<PropertyId>,
    pi: &PartialAssignment,
    tol: f64,
) -> Result<JointDistribution> {
    if af.len() > MAX_ORACLE_ARGS {
        return Err(Error::TooLarge {
            size: af.len(),
            limit: MAX_ORACLE_ARGS,
        });
    }
    let sys = build_constraints(af, props, pi)?;
    joint_maxent(&sys, tol)
}

struct Dual {
    /// `g[e][i]`: value of row `i`'s linear form on subset `e`.
    g: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    is_eq: Vec<bool>,
}

impl Dual {
    fn log_weights(&self, lambda: &[f64]) -> (Vec<f64>, f64) {
        let raw: Vec<f64> = self
            .g
            .iter()
            .map(|ge| -ge.iter().zip(lambda).map(|(a, l)| a * l).sum::<f64>())
            .collect();
        let top = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log_z = top + raw.iter().map(|r| (r - top).exp()).sum::<f64>().ln();
        (raw, log_z)
    }

    fn value(&self, lambda: &[f64]) -> f64 {
        let (_, log_z) = self.log_weights(lambda);
        log_z + lambda.iter().zip(&self.rhs).map(|(l, b)| l * b).sum::<f64>()
    }

    fn weights(&self, lambda: &[f64]) -> Vec<f64> {
        let (raw, log_z) = self.log_weights(lambda);
        raw.iter().map(|r| (r - log_z).exp()).collect()
    }

    /// Gradient `b - E[g]` and Hessian `Cov[g]`.
    fn derivatives(&self, lambda: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let k = self.rhs.len();
        let w = self.weights(lambda);
        let mut mean = DVector::zeros(k);
        for (ge, &we) in self.g.iter().zip(&w) {
            for i in 0..k {
                mean[i] += we * ge[i];
            }
        }
        let mut cov = DMatrix::zeros(k, k);
        for (ge, &we) in self.g.iter().zip(&w) {
            for i in 0..k {
                let di = ge[i] - mean[i];
                for j in 0..k {
                    cov[(i, j)] += we * di * (ge[j] - mean[j]);
                }
            }
        }
        (DVector::from_column_slice(&self.rhs) - mean, cov)
    }

    fn project(&self, lambda: &mut [f64]) {
        for (l, &eq) in lambda.iter_mut().zip(&self.is_eq) {
            if !eq && *l < 0.0 {
                *l = 0.0;
            }
        }
    }

    /// Armijo backtracking along the projected path `P(lambda + t dir)`.
    fn search(&self, lambda: &[f64], grad: &DVector<f64>, dir: &[f64]) -> Option<Vec<f64>> {
        let base = self.value(lambda);
        let mut t = 1.0;
        while t > 1e-20 {
            let mut cand: Vec<f64> = lambda.iter().zip(dir).map(|(l, d)| l + t * d).collect();
            self.project(&mut cand);
            let decrease: f64 = (0..lambda.len()).map(|i| grad[i] * (cand[i] - lambda[i])).sum();
            if decrease < 0.0 && self.value(&cand) <= base + 1e-4 * decrease {
                return Some(cand);
            }
            t *= 0.5;
        }
        None
    }

    /// Projected Newton with an epsilon-active set; multipliers of
    /// inequality rows stay nonnegative.
    fn minimize(&self, grad_tol: f64) -> Vec<f64> {
        let k = self.rhs.len();
        let mut lambda = vec![0.0; k];
        for _ in 0..5000 {
            let (grad, hess) = self.derivatives(&lambda);
            let mut stepped: Vec<f64> = lambda.iter().zip(grad.iter()).map(|(l, g)| l - g).collect();
            self.project(&mut stepped);
            let pg = lambda
                .iter()
                .zip(&stepped)
                .map(|(l, s)| (l - s).abs())
                .fold(0.0, f64::max);
            if pg < grad_tol {
                break;
            }
            let eps = pg.min(1e-3);
            let blocked: Vec<bool> = (0..k)
                .map(|i| !self.is_eq[i] && lambda[i] <= eps && grad[i] > 0.0)
                .collect();
            let open: Vec<usize> = (0..k).filter(|&i| !blocked[i]).collect();
            let h = DMatrix::from_fn(open.len(), open.len(), |r, c| {
                hess[(open[r], open[c])] + if r == c { 1e-12 } else { 0.0 }
            });
            let g = DVector::from_fn(open.len(), |r, _| grad[open[r]]);
            let mut newton = vec![0.0; k];
            if let Some(ch) = h.cholesky() {
                let d = ch.solve(&(-&g));
                for (r, &i) in open.iter().enumerate() {
                    newton[i] = d[r];
                }
            }
            for i in (0..k).filter(|&i| blocked[i]) {
                newton[i] = -grad[i];
            }
            let gradient: Vec<f64> = grad.iter().map(|g| -g).collect();
            match self
                .search(&lambda, &grad, &newton)
                .or_else(|| self.search(&lambda, &grad, &gradient))
            {
                Some(next) => lambda = next,
                None => break,
            }
        }
        lambda
    }
}

/// Solves the joint problem through its dual over the row multipliers.
/// Variables the system pins to 0 or 1 shrink the support first, which keeps
/// the dual optimum finite.
pub(crate) fn joint_maxent(sys: &LinearConstraintSystem, tol: f64) -> Result<JointDistribution> {
    let n = sys.num_vars();
    if n > MAX_ORACLE_ARGS {
        return Err(Error::TooLarge {
            size: n,
            limit: MAX_ORACLE_ARGS,
        });
    }
    let Some(st) = Structure::analyze(sys) else {
        return Err(Error::Infeasible {
            certificate: sys.infeasibility_certificate().unwrap_or_default(),
        });
    };
    let free = st.free().to_vec();
    let mut base_mask = 0usize;
    let mut interior: Vec<(usize, f64)> = Vec::new();
    for (j, f) in st.fixed.iter().enumerate() {
        match *f {
            Some(v) if v >= 1.0 - 1e-9 => base_mask |= 1 << j,
            Some(v) if v > 1e-9 => interior.push((j, v)),
            _ => {}
        }
    }
    let support: Vec<usize> = free.iter().copied().chain(interior.iter().map(|&(j, _)| j)).collect();
    let s = support.len();

    let mut rows: Vec<(Vec<f64>, f64, bool)> = Vec::new();
    let (eqs, ineqs) = st.rows();
    for (list, is_eq) in [(eqs, true), (ineqs, false)] {
        for (a, b) in list {
            let mut coeffs = a.clone();
            coeffs.resize(s, 0.0);
            rows.push((coeffs, *b, is_eq));
        }
    }
    for (k, &(_, v)) in interior.iter().enumerate() {
        let mut coeffs = vec![0.0; s];
        coeffs[free.len() + k] = 1.0;
        rows.push((coeffs, v, true));
    }

    let g: Vec<Vec<f64>> = (0..1usize << s)
        .map(|e| {
            rows.iter()
                .map(|(a, _, _)| (0..s).filter(|t| e >> t & 1 == 1).map(|t| a[t]).sum())
                .collect()
        })
        .collect();
    let dual = Dual {
        g,
        rhs: rows.iter().map(|r| r.1).collect(),
        is_eq: rows.iter().map(|r| r.2).collect(),
    };
    let lambda = dual.minimize((tol * 1e-4).max(1e-14));
    let local = dual.weights(&lambda);

    let mut weights = vec![0.0; 1 << n];
    for (e, w) in local.into_iter().enumerate() {
        let mask = (0..s)
            .filter(|t| e >> t & 1 == 1)
            .fold(base_mask, |m, t| m | 1 << support[t]);
        weights[mask] = w;
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    JointDistribution::new(n, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epistemic::{entropy, marginals};
    use crate::fixtures::{lone_argument, single_attack, three_cycle};
    use crate::properties::PropertyId::*;

    fn props(ps: &[PropertyId]) -> BTreeSet<PropertyId> {
        ps.iter().copied().collect()
    }

    #[test]
    fn founded_lone_argument_is_point_mass() {
        let p = brute_force_joint_maxent(&lone_argument(), &props(&[Fou]), &PartialAssignment::empty(1), 1e-9)
            .unwrap();
        assert_eq!(p.weights(), &[0.0, 1.0]);
    }

    #[test]
    fn coherent_pair_is_uniform() {
        let p = brute_force_joint_maxent(&single_attack(), &props(&[Coh]), &PartialAssignment::empty(2), 1e-9)
            .unwrap();
        for &w in p.weights() {
            assert!((w - 0.25).abs() < 1e-8, "{:?}", p.weights());
        }
    }

    #[test]
    fn three_cycle_marginals() {
        let af = three_cycle();
        let pi = PartialAssignment::from_named(&af, &[("A", 0.4)]).unwrap();
        let p = brute_force_joint_maxent(&af, &props(&[Coh]), &pi, 1e-9).unwrap();
        let m = marginals(&p);
        for (g, w) in m.values().iter().zip([0.4, 0.5, 0.5]) {
            assert!((g - w).abs() < 1e-6, "{:?}", m.values());
        }
        let h = crate::epistemic::binary_entropy;
        assert!((entropy(&p) - (h(0.4) + 2.0 * h(0.5))).abs() < 1e-6);
    }

    #[test]
    fn too_large() {
        let af = ArgumentationFramework::from_edges(11, &[]);
        assert_eq!(
            brute_force_joint_maxent(&af, &BTreeSet::new(), &PartialAssignment::empty(11), 1e-9),
            Err(Error::TooLarge { size: 11, limit: 10 })
        );
    }
}
