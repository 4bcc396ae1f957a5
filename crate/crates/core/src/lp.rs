//! Dense two-phase simplex over nonnegative variables.
//!
//! Small problems only: the tableau is stored densely and pivoting follows
//! Bland's rule, so cycling cannot occur.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `{ x >= 0 : rows }`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    /// `infeasibility` is the phase-1 optimum: the least total violation.
    Infeasible { infeasibility: f64 },
    Unbounded,
}

const PIVOT_EPS: f64 = 1e-11;
const FEAS_EPS: f64 = 1e-9;
const MAX_PIVOTS: usize = 100_000;

struct Tableau {
    rows: Vec<Vec<f64>>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && row[c] != 0.0 {
                let f = row[c];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
        self.basis[r] = c;
    }

    /// Installs `c` as the objective (to minimize) and prices out the basis.
    fn set_cost(&mut self, c: &[f64]) {
        self.cost = c.to_vec();
        self.cost.resize(self.width + 1, 0.0);
        for i in 0..self.rows.len() {
            let cb = self.cost[self.basis[i]];
            if cb != 0.0 {
                for (v, rv) in self.cost.iter_mut().zip(&self.rows[i]) {
                    *v -= cb * rv;
                }
            }
        }
    }

    fn objective(&self) -> f64 {
        -self.cost[self.width]
    }

    /// Returns false when unbounded.
    fn minimize(&mut self, allowed: &[bool]) -> bool {
        for _ in 0..MAX_PIVOTS {
            let Some(c) = (0..self.width).find(|&j| allowed[j] && self.cost[j] < -PIVOT_EPS) else {
                return true;
            };
            let mut best: Option<(f64, usize)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a > PIVOT_EPS {
                    let ratio = self.rhs(i) / a;
                    let better = match best {
                        None => true,
                        Some((r, bi)) => {
                            ratio < r - PIVOT_EPS
                                || (ratio <= r + PIVOT_EPS && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
            }
            match best {
                Some((_, r)) => self.pivot(r, c),
                None => return false,
            }
        }
        true
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Maximizes `objective . x`.
    pub fn maximize(&self, objective: &[f64]) -> LpOutcome {
        let n = self.num_vars;
        let m = self.rows.len();
        // Columns: originals, one slack per inequality, one artificial per row
        // that lacks a ready basic column.
        let mut slack_of = vec![None; m];
        let mut art_of = vec![None; m];
        let mut width = n;
        let mut normalized: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(m);
        for row in &self.rows {
            let (mut coeffs, mut rel, mut rhs) = (row.coeffs.clone(), row.relation, row.rhs);
            if rhs < 0.0 {
                coeffs.iter_mut().for_each(|v| *v = -*v);
                rhs = -rhs;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            normalized.push((coeffs, rel, rhs));
        }
        for (i, (_, rel, _)) in normalized.iter().enumerate() {
            if *rel != Relation::Eq {
                slack_of[i] = Some(width);
                width += 1;
            }
        }
        let first_art = width;
        for (i, (_, rel, _)) in normalized.iter().enumerate() {
            if *rel != Relation::Le {
                art_of[i] = Some(width);
                width += 1;
            }
        }

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        for (i, (coeffs, rel, rhs)) in normalized.iter().enumerate() {
            let mut r = vec![0.0; width + 1];
            r[..n].copy_from_slice(coeffs);
            if let Some(s) = slack_of[i] {
                r[s] = if *rel == Relation::Le { 1.0 } else { -1.0 };
            }
            if let Some(a) = art_of[i] {
                r[a] = 1.0;
                basis.push(a);
            } else {
                basis.push(slack_of[i].expect("Le row has a slack"));
            }
            r[width] = *rhs;
            rows.push(r);
        }
        let mut t = Tableau {
            rows,
            cost: Vec::new(),
            basis,
            width,
        };

        let mut phase1 = vec![0.0; width];
        phase1[first_art..].iter_mut().for_each(|v| *v = 1.0);
        t.set_cost(&phase1);
        let all = vec![true; width];
        t.minimize(&all);
        let infeasibility = t.objective();
        let scale = 1.0 + self.rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);
        if infeasibility > FEAS_EPS * scale {
            return LpOutcome::Infeasible { infeasibility };
        }

        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= first_art {
                match (0..first_art).find(|&j| t.rows[i][j].abs() > 1e-9) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }

        let mut allowed = vec![true; width];
        allowed[first_art..].iter_mut().for_each(|v| *v = false);
        let mut cost = vec![0.0; width];
        for (c, o) in cost.iter_mut().zip(objective) {
            *c = -o;
        }
        t.set_cost(&cost);
        if !t.minimize(&allowed) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![0.0; n];
        for (i, &b) in t.basis.iter().enumerate() {
            if b < n {
                x[b] = t.rhs(i).max(0.0);
            }
        }
        LpOutcome::Optimal {
            value: objective.iter().zip(&x).map(|(c, v)| c * v).sum(),
            x,
        }
    }

    pub fn feasible_point(&self) -> Option<Vec<f64>> {
        match self.maximize(&vec![0.0; self.num_vars]) {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible_point().is_some()
    }

    /// Largest violation of any row (and of nonnegativity) at `x`.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let mut worst = x.iter().map(|&v| (-v).max(0.0)).fold(0.0, f64::max);
        for row in &self.rows {
            let lhs: f64 = row.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            let v = match row.relation {
                Relation::Le => lhs - row.rhs,
                Relation::Ge => row.rhs - lhs,
                Relation::Eq => (lhs - row.rhs).abs(),
            };
            worst = worst.max(v);
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;

    /// Maximum over all basic feasible points, found by solving every
    /// n-subset of tight constraints (rows plus `x_j = 0`).
    fn vertex_oracle(lp: &LinearProgram, objective: &[f64]) -> Option<f64> {
        let n = lp.num_vars;
        let mut hyperplanes: Vec<(Vec<f64>, f64)> =
            lp.rows.iter().map(|r| (r.coeffs.clone(), r.rhs)).collect();
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            hyperplanes.push((e, 0.0));
        }
        let k = hyperplanes.len();
        let mut best: Option<f64> = None;
        let mut pick = Vec::new();
        fn rec(
            start: usize,
            k: usize,
            n: usize,
            pick: &mut Vec<usize>,
            f: &mut dyn FnMut(&[usize]),
        ) {
            if pick.len() == n {
                f(pick);
                return;
            }
            for i in start..k {
                pick.push(i);
                rec(i + 1, k, n, pick, f);
                pick.pop();
            }
        }
        rec(0, k, n, &mut pick, &mut |idx: &[usize]| {
            let a = DMatrix::from_fn(n, n, |r, c| hyperplanes[idx[r]].0[c]);
            let b = DVector::from_fn(n, |r, _| hyperplanes[idx[r]].1);
            if let Some(x) = a.lu().solve(&b) {
                let x: Vec<f64> = x.iter().copied().collect();
                if lp.violation(&x) < 1e-7 {
                    let v: f64 = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                    best = Some(best.map_or(v, |b| b.max(v)));
                }
            }
        });
        best
    }

    fn boxed(n: usize) -> LinearProgram {
        let mut lp = LinearProgram::new(n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            lp.push(e, Relation::Le, 1.0);
        }
        lp
    }

    #[test]
    fn simple_maximum() {
        let mut lp = LinearProgram::new(2);
        lp.push(vec![1.0, 1.0], Relation::Le, 1.0);
        lp.push(vec![1.0, 0.0], Relation::Le, 0.7);
        match lp.maximize(&[2.0, 1.0]) {
            LpOutcome::Optimal { x, value } => {
                assert!((value - 1.7).abs() < 1e-12);
                assert!((x[0] - 0.7).abs() < 1e-12 && (x[1] - 0.3).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equalities_and_ge() {
        let mut lp = boxed(3);
        lp.push(vec![1.0, 1.0, 1.0], Relation::Eq, 1.5);
        lp.push(vec![1.0, 0.0, 0.0], Relation::Ge, 0.8);
        let LpOutcome::Optimal { x, .. } = lp.maximize(&[0.0, 0.0, 1.0]) else {
            panic!()
        };
        assert!((x[2] - 0.7).abs() < 1e-12 && (x[0] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = boxed(2);
        lp.push(vec![1.0, 1.0], Relation::Le, 1.0);
        lp.push(vec![1.0, 0.0], Relation::Eq, 0.7);
        lp.push(vec![0.0, 1.0], Relation::Eq, 0.6);
        match lp.maximize(&[0.0, 0.0]) {
            LpOutcome::Infeasible { infeasibility } => assert!((infeasibility - 0.3).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        let mut lp = LinearProgram::new(2);
        lp.push(vec![1.0, -1.0], Relation::Le, 0.0);
        assert_eq!(lp.maximize(&[1.0, 1.0]), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = boxed(2);
        lp.push(vec![1.0, 1.0], Relation::Eq, 1.0);
        lp.push(vec![2.0, 2.0], Relation::Eq, 2.0);
        lp.push(vec![-1.0, -1.0], Relation::Eq, -1.0);
        let LpOutcome::Optimal { value, .. } = lp.maximize(&[1.0, 0.0]) else {
            panic!()
        };
        assert!((value - 1.0).abs() < 1e-12);
    }

    fn coeff() -> impl Strategy<Value = f64> {
        prop_oneof![Just(0.0), Just(1.0), Just(-1.0), (-4i32..=4).prop_map(|v| v as f64 * 0.5)]
    }

    proptest! {
        #[test]
        fn agrees_with_vertex_enumeration(
            n in 1usize..4,
            raw in prop::collection::vec((prop::collection::vec(coeff(), 3), 0u8..3, -4i32..=8), 0..4),
            obj in prop::collection::vec(-3i32..=3, 3),
        ) {
            let mut lp = boxed(n);
            for (c, rel, rhs) in raw {
                let rel = [Relation::Le, Relation::Ge, Relation::Eq][rel as usize];
                lp.push(c[..n].to_vec(), rel, rhs as f64 * 0.25);
            }
            let objective: Vec<f64> = obj[..n].iter().map(|&v| v as f64).collect();
            let oracle = vertex_oracle(&lp, &objective);
            match lp.maximize(&objective) {
                LpOutcome::Optimal { x, value } => {
                    prop_assert!(lp.violation(&x) < 1e-9);
                    let o = oracle.expect("oracle finds a vertex");
                    prop_assert!((o - value).abs() < 1e-8, "oracle {} simplex {}", o, value);
                }
                LpOutcome::Infeasible { .. } => prop_assert!(oracle.is_none()),
                LpOutcome::Unbounded => prop_assert!(false, "boxed LP cannot be unbounded"),
            }
        }
    }
}
