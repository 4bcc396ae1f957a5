//! Three-valued labellings and the classical semantics built on complete
//! labellings.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::af::{ArgId, ArgumentationFramework, MAX_ENUMERATION_ARGS};
use crate::error::{Error, Result};

/// Label of a single argument. The derived order `In < Out < Undec` is the
/// order used to sort enumerated labellings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    In,
    Out,
    Undec,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::In, Label::Out, Label::Undec];
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::In => "in",
            Label::Out => "out",
            Label::Undec => "undec",
        })
    }
}

/// A total labelling, index-aligned with the arguments of its framework.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Labelling {
    labels: Vec<Label>,
}

impl Labelling {
    pub fn new(labels: Vec<Label>) -> Self {
        Self { labels }
    }

    pub fn all(n: usize, label: Label) -> Self {
        Self {
            labels: vec![label; n],
        }
    }

    /// Builds a labelling from the in- and out-sets; every other argument is
    /// undecided.
    pub fn from_sets(n: usize, ins: &[ArgId], outs: &[ArgId]) -> Self {
        let mut labels = vec![Label::Undec; n];
        for &a in ins {
            labels[a] = Label::In;
        }
        for &a in outs {
            labels[a] = Label::Out;
        }
        Self { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn get(&self, a: ArgId) -> Label {
        self.labels[a]
    }

    fn set_of(&self, label: Label) -> Vec<ArgId> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == label)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn in_set(&self) -> Vec<ArgId> {
        self.set_of(Label::In)
    }

    pub fn out_set(&self) -> Vec<ArgId> {
        self.set_of(Label::Out)
    }

    pub fn undec_set(&self) -> Vec<ArgId> {
        self.set_of(Label::Undec)
    }

    fn mask_of(&self, label: Label) -> u64 {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == label)
            .fold(0u64, |m, (i, _)| m | (1u64 << i))
    }

    /// Three-line `IN:` / `OUT:` / `UNDEC:` rendering with names in framework order.
    pub fn render(&self, af: &ArgumentationFramework) -> String {
        let line = |tag: &str, ids: Vec<ArgId>| {
            let names = af.join_names(ids);
            if names.is_empty() {
                format!("{tag}:")
            } else {
                format!("{tag}: {names}")
            }
        };
        format!(
            "{}\n{}\n{}",
            line("IN", self.in_set()),
            line("OUT", self.out_set()),
            line("UNDEC", self.undec_set())
        )
    }
}

/// No attack has both ends labelled in.
pub fn is_conflict_free(af: &ArgumentationFramework, l: &Labelling) -> bool {
    af.attacks()
        .iter()
        .all(|&(a, b)| !(l.get(a) == Label::In && l.get(b) == Label::In))
}

/// Every out argument has an in attacker and every in argument has all its
/// attackers out.
pub fn is_admissible(af: &ArgumentationFramework, l: &Labelling) -> bool {
    (0..af.len()).all(|a| match l.get(a) {
        Label::Out => af.attackers_of(a).iter().any(|&b| l.get(b) == Label::In),
        Label::In => af.attackers_of(a).iter().all(|&b| l.get(b) == Label::Out),
        Label::Undec => true,
    })
}

/// Admissible, and every undec argument has no in attacker and at least one
/// attacker that is not out.
pub fn is_complete(af: &ArgumentationFramework, l: &Labelling) -> bool {
    is_admissible(af, l)
        && (0..af.len()).all(|a| {
            l.get(a) != Label::Undec || {
                let att = af.attackers_of(a);
                !att.iter().any(|&b| l.get(b) == Label::In)
                    && att.iter().any(|&b| l.get(b) != Label::Out)
            }
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    Grounded,
    Complete,
    Preferred,
    Stable,
    SemiStable,
}

impl Semantics {
    pub const ALL: [Semantics; 5] = [
        Semantics::Grounded,
        Semantics::Complete,
        Semantics::Preferred,
        Semantics::Stable,
        Semantics::SemiStable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Semantics::Grounded => "grounded",
            Semantics::Complete => "complete",
            Semantics::Preferred => "preferred",
            Semantics::Stable => "stable",
            Semantics::SemiStable => "semi-stable",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Semantics::ALL
            .into_iter()
            .find(|sem| sem.as_str() == s)
            .ok_or_else(|| format!("unknown semantics {s:?}"))
    }
}

// Candidate-label bitsets used by the enumerator.
const CAN_IN: u8 = 1;
const CAN_OUT: u8 = 2;
const CAN_UNDEC: u8 = 4;
const ANY: u8 = CAN_IN | CAN_OUT | CAN_UNDEC;

fn bit(label: Label) -> u8 {
    match label {
        Label::In => CAN_IN,
        Label::Out => CAN_OUT,
        Label::Undec => CAN_UNDEC,
    }
}

/// Shrinks candidate sets until no rule fires. Returns false on a wipe-out.
///
/// A labelling is complete iff every argument is in exactly when all its
/// attackers are out, out exactly when some attacker is in, and undec
/// otherwise; each rule below is one direction of that equivalence.
fn propagate(af: &ArgumentationFramework, dom: &mut [u8]) -> bool {
    let n = af.len();
    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..n {
            let att = af.attackers_of(a);
            let all_surely_out = att.iter().all(|&b| dom[b] == CAN_OUT);
            let all_may_be_out = att.iter().all(|&b| dom[b] & CAN_OUT != 0);
            let some_surely_in = att.iter().any(|&b| dom[b] == CAN_IN);
            let some_may_be_in = att.iter().any(|&b| dom[b] & CAN_IN != 0);
            let some_may_be_undec = att.iter().any(|&b| dom[b] & CAN_UNDEC != 0);

            let mut allowed = dom[a];
            if !all_may_be_out {
                allowed &= !CAN_IN;
            }
            if all_surely_out {
                allowed &= CAN_IN;
            }
            if !some_may_be_in {
                allowed &= !CAN_OUT;
            }
            if some_surely_in {
                allowed &= CAN_OUT;
            }
            if some_surely_in || !some_may_be_undec {
                allowed &= !CAN_UNDEC;
            }
            if allowed == 0 {
                return false;
            }
            if allowed != dom[a] {
                dom[a] = allowed;
                changed = true;
            }

            // Backward: constrain the attackers from a's fixed label.
            match dom[a] {
                CAN_IN => {
                    for &b in att {
                        if dom[b] != CAN_OUT {
                            if dom[b] & CAN_OUT == 0 {
                                return false;
                            }
                            dom[b] = CAN_OUT;
                            changed = true;
                        }
                    }
                }
                CAN_OUT => {
                    let mut candidates = att.iter().filter(|&&b| dom[b] & CAN_IN != 0);
                    if let (Some(&only), None) = (candidates.next(), candidates.next()) {
                        if dom[only] != CAN_IN {
                            dom[only] = CAN_IN;
                            changed = true;
                        }
                    }
                }
                CAN_UNDEC => {
                    for &b in att {
                        if dom[b] & CAN_IN != 0 {
                            dom[b] &= !CAN_IN;
                            if dom[b] == 0 {
                                return false;
                            }
                            changed = true;
                        }
                    }
                    let mut candidates = att.iter().filter(|&&b| dom[b] & CAN_UNDEC != 0);
                    if let (Some(&only), None) = (candidates.next(), candidates.next()) {
                        if dom[only] != CAN_UNDEC {
                            dom[only] = CAN_UNDEC;
                            changed = true;
                        }
                    }
                }
                _ => {}
            }
        }
    }
    true
}

fn search(af: &ArgumentationFramework, dom: Vec<u8>, out: &mut Vec<Labelling>) {
    let mut dom = dom;
    if !propagate(af, &mut dom) {
        return;
    }
    match dom.iter().position(|d| d.count_ones() > 1) {
        None => {
            let labelling = Labelling::new(
                dom.iter()
                    .map(|&d| match d {
                        CAN_IN => Label::In,
                        CAN_OUT => Label::Out,
                        _ => Label::Undec,
                    })
                    .collect(),
            );
            if is_complete(af, &labelling) {
                out.push(labelling);
            }
        }
        Some(a) => {
            for label in Label::ALL {
                if dom[a] & bit(label) != 0 {
                    let mut child = dom.clone();
                    child[a] = bit(label);
                    search(af, child, out);
                }
            }
        }
    }
}

fn check_enumeration_size(af: &ArgumentationFramework) -> Result<()> {
    if af.len() > MAX_ENUMERATION_ARGS {
        return Err(Error::TooLarge {
            size: af.len(),
            limit: MAX_ENUMERATION_ARGS,
        });
    }
    Ok(())
}

/// All complete labellings, sorted lexicographically with `in < out < undec`.
pub fn enumerate_complete(af: &ArgumentationFramework) -> Result<Vec<Labelling>> {
    check_enumeration_size(af)?;
    let mut out = Vec::new();
    search(af, vec![ANY; af.len()], &mut out);
    out.sort();
    out.dedup();
    Ok(out)
}

fn is_subset(a: u64, b: u64) -> bool {
    a & !b == 0
}

/// Keeps the labellings whose `key` mask is inclusion-minimal (or maximal).
pub(crate) fn extremal_by<F: Fn(&Labelling) -> u64>(
    labellings: &[Labelling],
    key: F,
    minimal: bool,
) -> Vec<Labelling> {
    let keys: Vec<u64> = labellings.iter().map(&key).collect();
    labellings
        .iter()
        .enumerate()
        .filter(|&(i, _)| {
            !keys.iter().enumerate().any(|(j, &kj)| {
                j != i
                    && kj != keys[i]
                    && if minimal {
                        is_subset(kj, keys[i])
                    } else {
                        is_subset(keys[i], kj)
                    }
            })
        })
        .map(|(_, l)| l.clone())
        .collect()
}

pub(crate) fn in_mask(l: &Labelling) -> u64 {
    l.mask_of(Label::In)
}

pub(crate) fn undec_mask(l: &Labelling) -> u64 {
    l.mask_of(Label::Undec)
}

/// Complete labellings selected by the given semantics; minimality and
/// maximality are by set inclusion.
pub fn select(af: &ArgumentationFramework, semantics: Semantics) -> Result<Vec<Labelling>> {
    let complete = enumerate_complete(af)?;
    Ok(match semantics {
        Semantics::Complete => complete,
        Semantics::Grounded => extremal_by(&complete, in_mask, true),
        Semantics::Preferred => extremal_by(&complete, in_mask, false),
        Semantics::Stable => complete
            .into_iter()
            .filter(|l| l.undec_set().is_empty())
            .collect(),
        Semantics::SemiStable => extremal_by(&complete, undec_mask, true),
    })
}

/// Grounded labelling by iterating the characteristic function from the
/// all-undec labelling. No size cap.
pub fn grounded_fixpoint(af: &ArgumentationFramework) -> Labelling {
    let n = af.len();
    let mut labels = vec![Label::Undec; n];
    loop {
        let mut changed = false;
        for a in 0..n {
            if labels[a] != Label::Undec {
                continue;
            }
            let att = af.attackers_of(a);
            if att.iter().all(|&b| labels[b] == Label::Out) {
                labels[a] = Label::In;
                changed = true;
            } else if att.iter().any(|&b| labels[b] == Label::In) {
                labels[a] = Label::Out;
                changed = true;
            }
        }
        if !changed {
            return Labelling::new(labels);
        }
    }
}
