use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::af::{ArgId, ArgumentationFramework};
use crate::epistemic::{format_probability, MarginalAssignment, PartialAssignment};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::properties::PropertyId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparator {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

/// `coeffs . p  (<= | =)  rhs`, with a note naming its origin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearConstraint {
    pub coeffs: Vec<(ArgId, f64)>,
    pub comparator: Comparator,
    pub rhs: f64,
    pub note: String,
}

impl LinearConstraint {
    pub fn lhs(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(a, c)| c * x[a]).sum()
    }

    /// Amount by which `x` violates the constraint (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let d = self.lhs(x) - self.rhs;
        match self.comparator {
            Comparator::Le => d.max(0.0),
            Comparator::Eq => d.abs(),
        }
    }

    pub(crate) fn dense(&self, n: usize) -> Vec<f64> {
        let mut row = vec![0.0; n];
        for &(a, c) in &self.coeffs {
            row[a] += c;
        }
        row
    }
}

/// Linear constraints over the marginals `P(A)`, one variable per argument,
/// each variable boxed in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearConstraintSystem {
    pub names: Vec<String>,
    pub constraints: Vec<LinearConstraint>,
}

impl fmt::Display for LinearConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.constraints {
            writeln!(f, "{}", c.note)?;
        }
        Ok(())
    }
}

struct Builder<'a> {
    af: &'a ArgumentationFramework,
    out: Vec<LinearConstraint>,
}

impl Builder<'_> {
    fn push(&mut self, terms: &[(ArgId, f64)], comparator: Comparator, rhs: f64, note: String) {
        let mut coeffs: Vec<(ArgId, f64)> = Vec::new();
        for &(a, c) in terms {
            match coeffs.iter_mut().find(|(b, _)| *b == a) {
                Some((_, v)) => *v += c,
                None => coeffs.push((a, c)),
            }
        }
        coeffs.sort_by_key(|&(a, _)| a);
        let c = LinearConstraint {
            coeffs,
            comparator,
            rhs,
            note,
        };
        if !self.out.iter().any(|o| o.note == c.note) {
            self.out.push(c);
        }
    }

    fn name(&self, a: ArgId) -> &str {
        self.af.name(a)
    }

    fn coherence(&mut self) {
        for &(a, b) in self.af.attacks() {
            let note = format!("COH {}->{}: P({}) + P({}) <= 1", self.name(a), self.name(b), self.name(a), self.name(b));
            self.push(&[(a, 1.0), (b, 1.0)], Comparator::Le, 1.0, note);
        }
    }

    fn unattacked(&mut self, tag: &str, comparator: Comparator, value: f64) {
        for a in (0..self.af.len()).filter(|&a| self.af.is_unattacked(a)) {
            let na = self.name(a).to_string();
            match comparator {
                Comparator::Le => {
                    self.push(&[(a, -1.0)], comparator, -value, format!("{tag} {na}: P({na}) >= {value}"))
                }
                Comparator::Eq => {
                    self.push(&[(a, 1.0)], comparator, value, format!("{tag} {na}: P({na}) = {value}"))
                }
            }
        }
    }

    fn optimism(&mut self, tag: &str, attacked_only: bool) {
        for a in 0..self.af.len() {
            let attackers = self.af.attackers_of(a);
            if attacked_only && attackers.is_empty() {
                continue;
            }
            let mut terms = vec![(a, -1.0)];
            terms.extend(attackers.iter().map(|&b| (b, -1.0)));
            let sum = if attackers.is_empty() {
                "0".to_string()
            } else {
                attackers
                    .iter()
                    .map(|&b| format!("P({})", self.name(b)))
                    .collect::<Vec<_>>()
                    .join(" + ")
            };
            let na = self.name(a);
            let note = format!("{tag} {na}: P({na}) >= 1 - ({sum})");
            self.push(&terms, Comparator::Le, -1.0, note);
        }
    }

    fn constant(&mut self, tag: &str, value: f64) {
        for a in 0..self.af.len() {
            let na = self.name(a).to_string();
            self.push(&[(a, 1.0)], Comparator::Eq, value, format!("{tag} {na}: P({na}) = {value}"));
        }
    }

    fn involution(&mut self) {
        for &(a, b) in self.af.attacks() {
            let note = format!("INV {}->{}: P({}) + P({}) = 1", self.name(a), self.name(b), self.name(a), self.name(b));
            self.push(&[(a, 1.0), (b, 1.0)], Comparator::Eq, 1.0, note);
        }
    }
}

/// Rejects properties whose classes are not polyhedra.
pub fn check_linear(props: &BTreeSet<PropertyId>) -> Result<()> {
    match props
        .iter()
        .find(|p| matches!(p, PropertyId::Ter | PropertyId::Rat))
    {
        Some(p) => Err(Error::UnsupportedProperty(p.to_string())),
        None => Ok(()),
    }
}

/// Constraints whose solutions are exactly the assignments that have every
/// property in `props` and agree with `pi` on its domain.
pub fn build_constraints(
    af: &ArgumentationFramework,
    props: &BTreeSet<PropertyId>,
    pi: &PartialAssignment,
) -> Result<LinearConstraintSystem> {
    check_linear(props)?;
    if pi.len() != af.len() {
        return Err(Error::SizeMismatch {
            expected: af.len(),
            got: pi.len(),
        });
    }
    let mut b = Builder {
        af,
        out: Vec::new(),
    };
    for &p in props {
        match p {
            PropertyId::Coh => b.coherence(),
            PropertyId::Sfou => b.unattacked("SFOU", Comparator::Le, 0.5),
            PropertyId::Fou => b.unattacked("FOU", Comparator::Eq, 1.0),
            PropertyId::Sopt => b.optimism("SOPT", true),
            PropertyId::Opt => b.optimism("OPT", false),
            PropertyId::Jus => {
                b.coherence();
                b.optimism("OPT", false);
            }
            PropertyId::Neu => b.constant("NEU", 0.5),
            PropertyId::Inv => b.involution(),
            PropertyId::Max => b.constant("MAX", 1.0),
            PropertyId::Min => b.constant("MIN", 0.0),
            PropertyId::Ter | PropertyId::Rat => unreachable!("rejected above"),
        }
    }
    for (a, v) in pi.domain() {
        let na = af.name(a);
        let note = format!("assigned P({na}) = {}", format_probability(v));
        b.out.push(LinearConstraint {
            coeffs: vec![(a, 1.0)],
            comparator: Comparator::Eq,
            rhs: v,
            note,
        });
    }
    Ok(LinearConstraintSystem {
        names: af.names().to_vec(),
        constraints: b.out,
    })
}

impl LinearConstraintSystem {
    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    /// Largest violation at `x`, counting the `[0, 1]` boxes.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let boxes = x
            .iter()
            .map(|&v| (-v).max(v - 1.0).max(0.0))
            .fold(0.0, f64::max);
        self.constraints
            .iter()
            .map(|c| c.violation(x))
            .fold(boxes, f64::max)
    }

    pub fn is_satisfied(&self, m: &MarginalAssignment, tol: f64) -> bool {
        m.len() == self.num_vars() && self.violation(m.values()) <= tol
    }

    /// The LP with the selected constraints plus upper bounds on the
    /// selected variables. Nonnegativity is implicit.
    pub(crate) fn to_lp(&self, rows: &[usize], upper: &[usize]) -> LinearProgram {
        let n = self.num_vars();
        let mut lp = LinearProgram::new(n);
        for &i in rows {
            let c = &self.constraints[i];
            let rel = match c.comparator {
                Comparator::Le => Relation::Le,
                Comparator::Eq => Relation::Eq,
            };
            lp.push(c.dense(n), rel, c.rhs);
        }
        for &j in upper {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            lp.push(e, Relation::Le, 1.0);
        }
        lp
    }

    pub(crate) fn full_lp(&self) -> LinearProgram {
        let rows: Vec<usize> = (0..self.constraints.len()).collect();
        let upper: Vec<usize> = (0..self.num_vars()).collect();
        self.to_lp(&rows, &upper)
    }

    /// A feasible point maximizing `objective`.
    pub fn maximize(&self, objective: &[f64]) -> Option<Vec<f64>> {
        match self.full_lp().maximize(objective) {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }

    /// A point satisfying every constraint, found by phase-1 simplex.
    pub fn feasible_point(&self) -> Option<Vec<f64>> {
        self.full_lp().feasible_point()
    }

    /// Minimal subset of constraints and upper bounds that is already
    /// infeasible (together with nonnegativity), as notes. `None` when the
    /// system is feasible.
    ///
    /// Deletion filter: drop each member in turn and keep it out whenever
    /// the rest stays infeasible.
    pub fn infeasibility_certificate(&self) -> Option<Vec<String>> {
        let mut rows: Vec<usize> = (0..self.constraints.len()).collect();
        let mut upper: Vec<usize> = (0..self.num_vars()).collect();
        if self.to_lp(&rows, &upper).is_feasible() {
            return None;
        }
        let mut i = 0;
        while i < rows.len() {
            let mut trial = rows.clone();
            trial.remove(i);
            if self.to_lp(&trial, &upper).is_feasible() {
                i += 1;
            } else {
                rows = trial;
            }
        }
        let mut j = 0;
        while j < upper.len() {
            let mut trial = upper.clone();
            trial.remove(j);
            if self.to_lp(&rows, &trial).is_feasible() {
                j += 1;
            } else {
                upper = trial;
            }
        }
        let mut notes: Vec<String> = rows.iter().map(|&i| self.constraints[i].note.clone()).collect();
        notes.extend(upper.iter().map(|&j| format!("bound P({}) <= 1", self.names[j])));
        Some(notes)
    }
}

/// True iff the system admits a point within `tol`.
pub fn is_feasible(sys: &LinearConstraintSystem, tol: f64) -> bool {
    match sys.full_lp().maximize(&vec![0.0; sys.num_vars()]) {
        LpOutcome::Optimal { x, .. } => sys.violation(&x) <= tol.max(1e-9),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{single_attack, six_args, three_cycle};
    use crate::properties::{holds, PropertyId::*};
    use proptest::prelude::*;

    fn props(ps: &[PropertyId]) -> BTreeSet<PropertyId> {
        ps.iter().copied().collect()
    }

    #[test]
    fn coherence_on_single_attack() {
        let af = single_attack();
        let sys = build_constraints(&af, &props(&[Coh]), &PartialAssignment::empty(2)).unwrap();
        assert_eq!(sys.constraints.len(), 1);
        let c = &sys.constraints[0];
        assert_eq!(c.coeffs, vec![(0, 1.0), (1, 1.0)]);
        assert_eq!((c.comparator, c.rhs), (Comparator::Le, 1.0));
    }

    #[test]
    fn justifiable_row_count() {
        let af = six_args();
        let sys = build_constraints(&af, &props(&[Jus]), &PartialAssignment::empty(6)).unwrap();
        assert_eq!(sys.constraints.len(), 14);
        let sys = build_constraints(&af, &props(&[Jus, Coh]), &PartialAssignment::empty(6)).unwrap();
        assert_eq!(sys.constraints.len(), 14);
    }

    #[test]
    fn neutral_equalities() {
        let af = three_cycle();
        let sys = build_constraints(&af, &props(&[Neu]), &PartialAssignment::empty(3)).unwrap();
        assert_eq!(sys.constraints.len(), 3);
        assert!(sys
            .constraints
            .iter()
            .all(|c| c.comparator == Comparator::Eq && c.rhs == 0.5 && c.coeffs.len() == 1));
    }

    #[test]
    fn nonlinear_properties_rejected() {
        let af = single_attack();
        for p in [Ter, Rat] {
            assert_eq!(
                build_constraints(&af, &props(&[Coh, p]), &PartialAssignment::empty(2)),
                Err(Error::UnsupportedProperty(p.to_string()))
            );
        }
    }

    #[test]
    fn feasibility_examples() {
        let af = ArgumentationFramework::new(&["A", "B", "C"], &[("A", "B"), ("B", "C")]).unwrap();
        let pi = PartialAssignment::from_named(&af, &[("B", 0.7), ("C", 0.6)]).unwrap();
        let sys = build_constraints(&af, &props(&[Coh]), &pi).unwrap();
        assert!(!is_feasible(&sys, 1e-9));
        let cert = sys.infeasibility_certificate().unwrap();
        assert_eq!(cert.len(), 3);
        assert!(cert[0].starts_with("COH B->C"));

        let af = six_args();
        let sys = build_constraints(&af, &props(&[Coh]), &PartialAssignment::empty(6)).unwrap();
        assert!(is_feasible(&sys, 1e-9));

        let af = single_attack();
        let pi = PartialAssignment::new(vec![Some(1.0), Some(1.0)]).unwrap();
        let sys = build_constraints(&af, &props(&[Coh]), &pi).unwrap();
        assert!(!is_feasible(&sys, 1e-9));
    }

    #[test]
    fn certificate_is_minimal() {
        let af = six_args();
        let pi = PartialAssignment::from_named(&af, &[("a6", 0.2), ("a1", 0.9), ("a2", 0.9)]).unwrap();
        let sys = build_constraints(&af, &props(&[Fou, Coh]), &pi).unwrap();
        let cert = sys.infeasibility_certificate().unwrap();
        assert_eq!(cert.len(), 2, "{cert:?}");
        assert!(cert.iter().any(|c| c == "FOU a6: P(a6) = 1"));
        assert!(cert.iter().any(|c| c == "assigned P(a6) = 0.2"));
    }

    proptest! {
        #[test]
        fn constraints_match_property_checks(
            values in prop::collection::vec(prop_oneof![Just(0.0), Just(0.5), Just(1.0), 0.0f64..=1.0], 6),
            mask in 0u16..(1 << 10),
        ) {
            let af = six_args();
            let linear = [Coh, Sfou, Fou, Sopt, Opt, Jus, Neu, Inv, Max, Min];
            let chosen: BTreeSet<PropertyId> =
                linear.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            let sys = build_constraints(&af, &chosen, &PartialAssignment::empty(6)).unwrap();
            let m = MarginalAssignment::new(values).unwrap();
            let by_checks = chosen.iter().all(|&p| holds(&af, &m, p, 1e-9));
            prop_assert_eq!(sys.is_satisfied(&m, 1e-9), by_checks);
        }
    }
}
