//! The twelve rationality properties of belief assignments, the complete
//! probability function test, and restriction-based selection of complete
//! probability functions.
//!
//! Every property constrains only the marginals `P(A)`, so all checks take a
//! [`MarginalAssignment`]. Tolerances are applied uniformly: `x <= y` passes
//! when `x <= y + tol`, `x = y` when `|x - y| <= tol`, and the strict
//! antecedent `P(A) > 0.5` of RAT is read as `P(A) > 0.5 + tol`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::af::{ArgId, ArgumentationFramework};
use crate::epistemic::{congruent_assignment, MarginalAssignment, CONGRUENCE_TOL};
use crate::error::{Error, Result};
use crate::labelling::{self, Labelling, Semantics};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PropertyId {
    /// Coherent: `A -> B` implies `P(A) <= 1 - P(B)`.
    Coh,
    /// Semi-founded: unattacked arguments have `P(A) >= 0.5`.
    Sfou,
    /// Founded: unattacked arguments have `P(A) = 1`.
    Fou,
    /// Semi-optimistic: attacked `A` has `P(A) >= 1 - sum of attacker beliefs`.
    Sopt,
    /// Optimistic: the SOPT bound for every argument, attacked or not.
    Opt,
    /// Justifiable: coherent and optimistic.
    Jus,
    /// Ternary: every `P(A)` is 0, 0.5 or 1.
    Ter,
    /// Rational: `A -> B` and `P(A) > 0.5` imply `P(B) <= 0.5`.
    Rat,
    /// Neutral: every `P(A) = 0.5`.
    Neu,
    /// Involutary: `A -> B` implies `P(A) = 1 - P(B)`.
    Inv,
    /// Maximal: every `P(A) = 1`.
    Max,
    /// Minimal: every `P(A) = 0`.
    Min,
}

impl PropertyId {
    pub const ALL: [PropertyId; 12] = [
        PropertyId::Coh,
        PropertyId::Sfou,
        PropertyId::Fou,
        PropertyId::Sopt,
        PropertyId::Opt,
        PropertyId::Jus,
        PropertyId::Ter,
        PropertyId::Rat,
        PropertyId::Neu,
        PropertyId::Inv,
        PropertyId::Max,
        PropertyId::Min,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PropertyId::Coh => "COH",
            PropertyId::Sfou => "SFOU",
            PropertyId::Fou => "FOU",
            PropertyId::Sopt => "SOPT",
            PropertyId::Opt => "OPT",
            PropertyId::Jus => "JUS",
            PropertyId::Ter => "TER",
            PropertyId::Rat => "RAT",
            PropertyId::Neu => "NEU",
            PropertyId::Inv => "INV",
            PropertyId::Max => "MAX",
            PropertyId::Min => "MIN",
        }
    }

    /// Parses a comma-separated list, or `all`.
    pub fn parse_list(s: &str) -> Result<Vec<PropertyId>> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(Self::ALL.to_vec());
        }
        let mut out: Vec<PropertyId> = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let id: PropertyId = part.parse()?;
            if !out.contains(&id) {
                out.push(id);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PropertyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PropertyId::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::UnknownProperty(s.to_string()))
    }
}

/// One failing constraint instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub constraint: String,
    pub arguments: Vec<String>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property: PropertyId,
    pub holds: bool,
    pub violations: Vec<Violation>,
}

struct Checker<'a> {
    af: &'a ArgumentationFramework,
    m: &'a MarginalAssignment,
    tol: f64,
    violations: Vec<Violation>,
}

impl Checker<'_> {
    fn p(&self, a: ArgId) -> f64 {
        self.m.get(a)
    }

    fn fail(&mut self, constraint: String, args: &[ArgId], lhs: f64, rhs: f64) {
        self.violations.push(Violation {
            constraint,
            arguments: args.iter().map(|&a| self.af.name(a).to_string()).collect(),
            lhs,
            rhs,
        });
    }

    fn coherence(&mut self, tag: &str) {
        for &(a, b) in self.af.attacks() {
            let (lhs, rhs) = (self.p(a), 1.0 - self.p(b));
            if lhs > rhs + self.tol {
                let (na, nb) = (self.af.name(a), self.af.name(b));
                self.fail(format!("{tag} {na}->{nb}: P({na}) <= 1 - P({nb})"), &[a, b], lhs, rhs);
            }
        }
    }

    fn foundedness(&mut self, semi: bool) {
        let (tag, bound) = if semi { ("SFOU", 0.5) } else { ("FOU", 1.0) };
        for a in (0..self.af.len()).filter(|&a| self.af.is_unattacked(a)) {
            let lhs = self.p(a);
            let ok = if semi {
                lhs >= bound - self.tol
            } else {
                (lhs - bound).abs() <= self.tol
            };
            if !ok {
                let na = self.af.name(a);
                let rel = if semi { ">=" } else { "=" };
                self.fail(format!("{tag} {na} unattacked: P({na}) {rel} {bound}"), &[a], lhs, bound);
            }
        }
    }

    fn optimism(&mut self, tag: &str, attacked_only: bool) {
        for a in 0..self.af.len() {
            let attackers = self.af.attackers_of(a);
            if attacked_only && attackers.is_empty() {
                continue;
            }
            let lhs = self.p(a);
            let rhs = 1.0 - attackers.iter().map(|&b| self.p(b)).sum::<f64>();
            if lhs < rhs - self.tol {
                let na = self.af.name(a);
                self.fail(
                    format!("{tag} {na}: P({na}) >= 1 - sum of attacker beliefs"),
                    &[a],
                    lhs,
                    rhs,
                );
            }
        }
    }

    fn ternary(&mut self) {
        for a in 0..self.af.len() {
            let v = self.p(a);
            let nearest = snap_ternary(v);
            if (v - nearest).abs() > self.tol {
                let na = self.af.name(a);
                self.fail(format!("TER {na}: P({na}) in {{0, 0.5, 1}}"), &[a], v, nearest);
            }
        }
    }

    fn rationality(&mut self) {
        for &(a, b) in self.af.attacks() {
            let (pa, pb) = (self.p(a), self.p(b));
            if pa > 0.5 + self.tol && pb > 0.5 + self.tol {
                let (na, nb) = (self.af.name(a), self.af.name(b));
                self.fail(
                    format!("RAT {na}->{nb}: P({na}) > 0.5 implies P({nb}) <= 0.5"),
                    &[a, b],
                    pa,
                    pb,
                );
            }
        }
    }

    fn constant(&mut self, tag: &str, value: f64) {
        for a in 0..self.af.len() {
            let v = self.p(a);
            if (v - value).abs() > self.tol {
                let na = self.af.name(a);
                self.fail(format!("{tag} {na}: P({na}) = {value}"), &[a], v, value);
            }
        }
    }

    fn involution(&mut self) {
        for &(a, b) in self.af.attacks() {
            let (lhs, rhs) = (self.p(a), 1.0 - self.p(b));
            if (lhs - rhs).abs() > self.tol {
                let (na, nb) = (self.af.name(a), self.af.name(b));
                self.fail(format!("INV {na}->{nb}: P({na}) = 1 - P({nb})"), &[a, b], lhs, rhs);
            }
        }
    }
}

/// Nearest of `{0, 0.5, 1}`.
pub(crate) fn snap_ternary(v: f64) -> f64 {
    if v < 0.25 {
        0.0
    } else if v <= 0.75 {
        0.5
    } else {
        1.0
    }
}

/// Checks one property and lists every failing constraint instance.
pub fn check(
    af: &ArgumentationFramework,
    m: &MarginalAssignment,
    prop: PropertyId,
    tol: f64,
) -> Result<PropertyReport> {
    m.check_len(af)?;
    let mut c = Checker {
        af,
        m,
        tol,
        violations: Vec::new(),
    };
    match prop {
        PropertyId::Coh => c.coherence("COH"),
        PropertyId::Sfou => c.foundedness(true),
        PropertyId::Fou => c.foundedness(false),
        PropertyId::Sopt => c.optimism("SOPT", true),
        PropertyId::Opt => c.optimism("OPT", false),
        PropertyId::Jus => {
            c.coherence("COH");
            c.optimism("OPT", false);
        }
        PropertyId::Ter => c.ternary(),
        PropertyId::Rat => c.rationality(),
        PropertyId::Neu => c.constant("NEU", 0.5),
        PropertyId::Inv => c.involution(),
        PropertyId::Max => c.constant("MAX", 1.0),
        PropertyId::Min => c.constant("MIN", 0.0),
    }
    Ok(PropertyReport {
        property: prop,
        holds: c.violations.is_empty(),
        violations: c.violations,
    })
}

/// Shorthand for `check(..).holds`.
pub fn holds(af: &ArgumentationFramework, m: &MarginalAssignment, prop: PropertyId, tol: f64) -> bool {
    check(af, m, prop, tol).map(|r| r.holds).unwrap_or(false)
}

/// The set of properties that hold.
pub fn classify(
    af: &ArgumentationFramework,
    m: &MarginalAssignment,
    tol: f64,
) -> Result<BTreeSet<PropertyId>> {
    m.check_len(af)?;
    Ok(PropertyId::ALL
        .into_iter()
        .filter(|&p| holds(af, m, p, tol))
        .collect())
}

/// The five defining conditions of a complete probability function, checked
/// on the values snapped to `{0, 0.5, 1}` after a ternary test within `tol`.
pub fn is_complete_prob_function(
    af: &ArgumentationFramework,
    m: &MarginalAssignment,
    tol: f64,
) -> bool {
    if m.len() != af.len() {
        return false;
    }
    if (0..af.len()).any(|a| (m.get(a) - snap_ternary(m.get(a))).abs() > tol) {
        return false;
    }
    let p: Vec<f64> = m.values().iter().map(|&v| snap_ternary(v)).collect();
    (0..af.len()).all(|a| {
        let att = af.attackers_of(a);
        let all_attackers_zero = att.iter().all(|&b| p[b] == 0.0);
        let some_attacker_one = att.iter().any(|&b| p[b] == 1.0);
        (p[a] != 1.0 || all_attackers_zero)
            && (!all_attackers_zero || p[a] == 1.0)
            && (p[a] != 0.0 || some_attacker_one)
            && (!some_attacker_one || p[a] == 0.0)
    })
}

/// The property-based characterization `TER and COH and FOU`.
///
/// This is implied by [`is_complete_prob_function`] but does not imply it:
/// on `a <-> b` the all-zero assignment is ternary, coherent and (vacuously)
/// founded, yet `a` has no attacker believed with certainty.
pub fn satisfies_ter_coh_fou(af: &ArgumentationFramework, m: &MarginalAssignment, tol: f64) -> bool {
    [PropertyId::Ter, PropertyId::Coh, PropertyId::Fou]
        .into_iter()
        .all(|p| holds(af, m, p, tol))
}

/// Cardinality-style restrictions on complete probability functions. "Max"
/// and "min" compare the sets `{A : P(A) = v}` by inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Restriction {
    None,
    NoHalf,
    MaxOnes,
    MaxZeros,
    MaxHalves,
    MinOnes,
    MinZeros,
    MinHalves,
}

impl Restriction {
    pub const ALL: [Restriction; 8] = [
        Restriction::None,
        Restriction::NoHalf,
        Restriction::MaxOnes,
        Restriction::MaxZeros,
        Restriction::MaxHalves,
        Restriction::MinOnes,
        Restriction::MinZeros,
        Restriction::MinHalves,
    ];

    /// The classical semantics whose labellings the restriction selects.
    pub fn semantics(self) -> Semantics {
        match self {
            Restriction::None => Semantics::Complete,
            Restriction::NoHalf => Semantics::Stable,
            Restriction::MaxOnes | Restriction::MaxZeros => Semantics::Preferred,
            Restriction::MaxHalves | Restriction::MinOnes | Restriction::MinZeros => {
                Semantics::Grounded
            }
            Restriction::MinHalves => Semantics::SemiStable,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Restriction::None => "none",
            Restriction::NoHalf => "no_half",
            Restriction::MaxOnes => "max_ones",
            Restriction::MaxZeros => "max_zeros",
            Restriction::MaxHalves => "max_halves",
            Restriction::MinOnes => "min_ones",
            Restriction::MinZeros => "min_zeros",
            Restriction::MinHalves => "min_halves",
        }
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn value_mask(m: &MarginalAssignment, value: f64) -> u64 {
    m.values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| (v - value).abs() <= CONGRUENCE_TOL)
        .fold(0, |acc, (i, _)| acc | (1u64 << i))
}

/// Complete probability functions satisfying the restriction, in the order
/// of the labellings they are congruent with.
pub fn select_by_restriction(
    af: &ArgumentationFramework,
    restriction: Restriction,
) -> Result<Vec<MarginalAssignment>> {
    let complete: Vec<MarginalAssignment> = labelling::enumerate_complete(af)?
        .iter()
        .map(congruent_assignment)
        .collect();
    debug_assert!(complete
        .iter()
        .all(|m| is_complete_prob_function(af, m, CONGRUENCE_TOL)));

    let extremal = |value: f64, minimal: bool| -> Vec<MarginalAssignment> {
        let masks: Vec<u64> = complete.iter().map(|m| value_mask(m, value)).collect();
        complete
            .iter()
            .enumerate()
            .filter(|&(i, _)| {
                !masks.iter().any(|&other| {
                    other != masks[i]
                        && if minimal {
                            other & !masks[i] == 0
                        } else {
                            masks[i] & !other == 0
                        }
                })
            })
            .map(|(_, m)| m.clone())
            .collect()
    };

    Ok(match restriction {
        Restriction::None => complete,
        Restriction::NoHalf => complete
            .iter()
            .filter(|m| value_mask(m, 0.5) == 0)
            .cloned()
            .collect(),
        Restriction::MaxOnes => extremal(1.0, false),
        Restriction::MaxZeros => extremal(0.0, false),
        Restriction::MaxHalves => extremal(0.5, false),
        Restriction::MinOnes => extremal(1.0, true),
        Restriction::MinZeros => extremal(0.0, true),
        Restriction::MinHalves => extremal(0.5, true),
    })
}

/// Labellings congruent with the given assignments (which must be ternary).
pub fn congruent_labellings(ms: &[MarginalAssignment]) -> Vec<Labelling> {
    ms.iter()
        .map(|m| crate::epistemic::epistemic_labelling(m, CONGRUENCE_TOL))
        .collect()
}
