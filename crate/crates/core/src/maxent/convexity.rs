use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::af::{ArgId, ArgumentationFramework};
use crate::epistemic::{congruent_assignment, convex_combine, MarginalAssignment, PartialAssignment};
use crate::generate::random_values;
use crate::labelling::enumerate_complete;
use crate::properties::{holds, PropertyId, DEFAULT_TOL};

use super::constraints::build_constraints;

/// Frameworks up to this size contribute congruent complete labellings to
/// the member pool.
const LABELLING_POOL_ARGS: usize = 12;
const LP_MEMBERS: usize = 16;
const REJECTION_TRIES: usize = 8;
const MAX_REPORTED: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityViolation {
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    pub delta: f64,
    pub combined: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub property: PropertyId,
    pub pairs: usize,
    pub members: usize,
    pub violations: usize,
    /// The first few violations found.
    pub examples: Vec<ConvexityViolation>,
}

/// First attack `a -> b` between distinct arguments, neither of which
/// attacks itself. RAT restricts nothing else, so the class is convex
/// exactly when no such attack exists.
pub fn rat_witness_attack(af: &ArgumentationFramework) -> Option<(ArgId, ArgId)> {
    af.attacks()
        .iter()
        .copied()
        .find(|&(a, b)| a != b && !af.attacks_pair(a, a) && !af.attacks_pair(b, b))
}

/// Whether the class of `prop` is convex on `af`.
pub fn expected_convex(af: &ArgumentationFramework, prop: PropertyId) -> bool {
    match prop {
        PropertyId::Ter => af.is_empty(),
        PropertyId::Rat => rat_witness_attack(af).is_none(),
        _ => true,
    }
}

/// Two RAT members whose midpoint believes both ends of `a -> b`.
pub fn rat_witness_pair(
    af: &ArgumentationFramework,
    (a, b): (ArgId, ArgId),
) -> (MarginalAssignment, MarginalAssignment) {
    let mut first = vec![0.0; af.len()];
    let mut second = vec![0.0; af.len()];
    (first[a], first[b]) = (1.0, 0.4);
    (second[a], second[b]) = (0.4, 0.8);
    (
        MarginalAssignment::new(first).expect("in range"),
        MarginalAssignment::new(second).expect("in range"),
    )
}

fn constructed_members(
    af: &ArgumentationFramework,
    prop: PropertyId,
    rng: &mut ChaCha8Rng,
) -> Vec<MarginalAssignment> {
    let n = af.len();
    let mut pool = Vec::new();
    let linear = BTreeSet::from([prop]);
    if let Ok(sys) = build_constraints(af, &linear, &PartialAssignment::empty(n)) {
        for _ in 0..LP_MEMBERS {
            let obj: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if let Some(x) = sys.maximize(&obj) {
                let x: Vec<f64> = x.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
                pool.push(MarginalAssignment::new(x).expect("clamped"));
            }
        }
    }
    if prop == PropertyId::Ter {
        for _ in 0..LP_MEMBERS {
            let x = (0..n).map(|_| [0.0, 0.5, 1.0][rng.gen_range(0..3)]).collect();
            pool.push(MarginalAssignment::new(x).expect("ternary"));
        }
    }
    if prop == PropertyId::Rat {
        if let Some(attack) = rat_witness_attack(af) {
            let (p, q) = rat_witness_pair(af, attack);
            pool.push(p);
            pool.push(q);
        }
    }
    if n <= LABELLING_POOL_ARGS {
        if let Ok(ls) = enumerate_complete(af) {
            pool.extend(ls.iter().map(congruent_assignment));
        }
    }
    pool.retain(|m| holds(af, m, prop, DEFAULT_TOL));
    pool
}

/// Draws pairs of class members and mixes them with a random weight,
/// recording every mixture that leaves the class. Members come from LP
/// vertices, congruent complete labellings, the RAT witness pair and
/// rejection sampling. When the RAT witness applies, the first pair probed is
/// that pair at weight 0.5.
pub fn convexity_probe(
    af: &ArgumentationFramework,
    prop: PropertyId,
    samples: usize,
    seed: u64,
) -> ProbeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = af.len();
    let mut pool = constructed_members(af, prop, &mut rng);
    let mut report = ProbeReport {
        property: prop,
        pairs: 0,
        members: 0,
        violations: 0,
        examples: Vec::new(),
    };
    let record = |report: &mut ProbeReport, p: &MarginalAssignment, q: &MarginalAssignment, delta: f64| {
        report.pairs += 1;
        let mix = convex_combine(p, q, delta);
        if !holds(af, &mix, prop, DEFAULT_TOL) {
            report.violations += 1;
            if report.examples.len() < MAX_REPORTED {
                report.examples.push(ConvexityViolation {
                    first: p.values().to_vec(),
                    second: q.values().to_vec(),
                    delta,
                    combined: mix.values().to_vec(),
                });
            }
        }
    };

    if prop == PropertyId::Rat && samples > 0 {
        if let Some(attack) = rat_witness_attack(af) {
            let (p, q) = rat_witness_pair(af, attack);
            record(&mut report, &p, &q, 0.5);
        }
    }
    while report.pairs < samples {
        for _ in 0..REJECTION_TRIES {
            let m = MarginalAssignment::new(random_values(&mut rng, n)).expect("in range");
            if holds(af, &m, prop, DEFAULT_TOL) {
                pool.push(m);
                break;
            }
        }
        if pool.is_empty() {
            break;
        }
        let p = pool[rng.gen_range(0..pool.len())].clone();
        let q = pool[rng.gen_range(0..pool.len())].clone();
        let delta = rng.gen_range(0.0..1.0);
        record(&mut report, &p, &q, delta);
    }
    report.members = pool.len();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self_attacker, single_attack, six_args};
    use PropertyId::*;

    #[test]
    fn rat_counterexample_on_single_attack() {
        let af = single_attack();
        let r = convexity_probe(&af, Rat, 100, 1);
        assert!(r.violations > 0);
        let v = &r.examples[0];
        assert_eq!(v.delta, 0.5);
        assert!((v.combined[0] - 0.7).abs() < 1e-12 && (v.combined[1] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn linear_classes_are_convex() {
        let af = six_args();
        for p in [Coh, Sfou, Fou, Sopt, Opt, Jus, Neu, Inv, Max, Min] {
            let r = convexity_probe(&af, p, 2000, 3);
            assert_eq!(r.violations, 0, "{p}: {:?}", r.examples.first());
            assert!(r.members > 0, "{p}");
        }
    }

    #[test]
    fn ternary_is_not_convex() {
        let r = convexity_probe(&six_args(), Ter, 500, 5);
        assert!(r.violations > 0);
        assert!(!expected_convex(&six_args(), Ter));
    }

    #[test]
    fn rat_convex_when_every_attack_touches_a_self_attacker() {
        let af = self_attacker();
        assert!(expected_convex(&af, Rat));
        assert_eq!(convexity_probe(&af, Rat, 1000, 2).violations, 0);
        let af = ArgumentationFramework::from_edges(2, &[(0, 0), (0, 1)]);
        assert!(expected_convex(&af, Rat));
        assert_eq!(convexity_probe(&af, Rat, 1000, 2).violations, 0);
    }

    #[test]
    fn deterministic() {
        let af = six_args();
        assert_eq!(convexity_probe(&af, Rat, 300, 9), convexity_probe(&af, Rat, 300, 9));
    }
}
