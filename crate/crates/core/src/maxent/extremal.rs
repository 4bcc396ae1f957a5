use std::collections::BTreeSet;

use crate::af::{ArgumentationFramework, MAX_POWERSET_ARGS};
use crate::epistemic::{
    congruent_assignment, entropy, epistemic_labelling, is_congruent, marginals, JointDistribution,
    PartialAssignment,
};
use crate::error::Result;
use crate::labelling::{self, Labelling, Semantics};
use crate::properties::{holds, PropertyId, DEFAULT_TOL};

use super::solver::{max_entropy_completion, DEFAULT_COMPLETION_TOL};

/// Threshold band used when reading a labelling off the solver output.
const LABEL_TOL: f64 = 1e-6;

/// Epistemic labelling of the maximum-entropy justifiable assignment, which
/// coincides with the grounded labelling.
pub fn grounded_via_maxent(af: &ArgumentationFramework) -> Result<Labelling> {
    let props = BTreeSet::from([PropertyId::Jus]);
    let r = max_entropy_completion(af, &props, &PartialAssignment::empty(af.len()), DEFAULT_COMPLETION_TOL)?;
    let m = r.assignment.expect("justifiable assignments always exist");
    Ok(epistemic_labelling(&m, LABEL_TOL))
}

/// The point-mass joint on the in-set of `l`.
pub fn point_mass_witness(af: &ArgumentationFramework, l: &Labelling) -> Result<JointDistribution> {
    JointDistribution::point_mass(af.len(), &l.in_set())
}

/// Stable labellings, each paired with a zero-entropy justifiable point mass
/// congruent with it. Labellings whose witness fails a check are dropped.
///
/// The joint is materialized only up to the power-set cap; beyond it the
/// congruent marginals are checked directly, the entropy of a point mass
/// being zero regardless.
pub fn stable_via_min_entropy(af: &ArgumentationFramework) -> Result<Vec<Labelling>> {
    let stable = labelling::select(af, Semantics::Stable)?;
    let mut out = Vec::with_capacity(stable.len());
    for l in stable {
        let ok = if af.len() <= MAX_POWERSET_ARGS {
            let p = point_mass_witness(af, &l)?;
            let m = marginals(&p);
            entropy(&p) == 0.0 && is_congruent(&l, &m) && holds(af, &m, PropertyId::Jus, DEFAULT_TOL)
        } else {
            holds(af, &congruent_assignment(&l), PropertyId::Jus, DEFAULT_TOL)
        };
        if ok {
            out.push(l);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{lone_argument, self_attacker, six_args, three_cycle};
    use crate::labelling::{grounded_fixpoint, Label};

    #[test]
    fn grounded_examples() {
        let af = six_args();
        let l = grounded_via_maxent(&af).unwrap();
        assert_eq!(l, grounded_fixpoint(&af));
        assert_eq!(l.in_set(), vec![5]);
        assert_eq!(l.out_set(), vec![4]);
        assert_eq!(grounded_via_maxent(&three_cycle()).unwrap(), Labelling::all(3, Label::Undec));
        assert_eq!(grounded_via_maxent(&self_attacker()).unwrap(), Labelling::all(1, Label::Undec));
    }

    #[test]
    fn stable_examples() {
        let af = six_args();
        let ls = stable_via_min_entropy(&af).unwrap();
        let ins: Vec<String> = ls.iter().map(|l| af.join_names(l.in_set())).collect();
        assert_eq!(ins, ["a1 a3 a6", "a2 a4 a6"]);
        for l in &ls {
            assert_eq!(entropy(&point_mass_witness(&af, l).unwrap()), 0.0);
        }
        assert!(stable_via_min_entropy(&three_cycle()).unwrap().is_empty());
        let ls = stable_via_min_entropy(&lone_argument()).unwrap();
        assert_eq!(ls, vec![Labelling::all(1, Label::In)]);
    }
}
