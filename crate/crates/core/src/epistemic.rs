//! Probability functions over sets of arguments, their marginals, and the
//! labellings they induce.

use serde::Serialize;

use crate::af::{ArgId, ArgumentationFramework, MAX_POWERSET_ARGS};
use crate::error::{Error, Result};
use crate::labelling::{Label, Labelling};

/// Default half-width of the band around 0.5 that labels undec.
pub const DEFAULT_THRESHOLD_TOL: f64 = 1e-9;

/// Tolerance of the three-point congruence comparison.
pub const CONGRUENCE_TOL: f64 = 1e-12;

const SUM_TOL: f64 = 1e-9;

fn check_powerset(num_args: usize) -> Result<()> {
    if num_args > MAX_POWERSET_ARGS {
        return Err(Error::TooLarge {
            size: num_args,
            limit: MAX_POWERSET_ARGS,
        });
    }
    Ok(())
}

/// A probability function over all subsets of the arguments. Subset `E` is
/// stored at the index whose bit `i` is set iff argument `i` is in `E`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    num_args: usize,
    weights: Vec<f64>,
}

impl JointDistribution {
    pub fn new(num_args: usize, weights: Vec<f64>) -> Result<Self> {
        check_powerset(num_args)?;
        if weights.len() != 1usize << num_args {
            return Err(Error::SizeMismatch {
                expected: 1usize << num_args,
                got: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(Error::InvalidDistribution(format!("weight {w} outside [0,1]")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(Self { num_args, weights })
    }

    /// All mass on one subset.
    pub fn point_mass(num_args: usize, members: &[ArgId]) -> Result<Self> {
        check_powerset(num_args)?;
        let mask = members.iter().fold(0usize, |m, &a| m | (1 << a));
        let mut weights = vec![0.0; 1usize << num_args];
        weights[mask] = 1.0;
        Self::new(num_args, weights)
    }

    pub fn uniform(num_args: usize) -> Result<Self> {
        check_powerset(num_args)?;
        let size = 1usize << num_args;
        Self::new(num_args, vec![1.0 / size as f64; size])
    }

    pub fn num_args(&self) -> usize {
        self.num_args
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, subset_mask: usize) -> f64 {
        self.weights[subset_mask]
    }
}

/// A total map from arguments to probabilities.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MarginalAssignment {
    values: Vec<f64>,
}

impl MarginalAssignment {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, &v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::InvalidProbability {
                argument: format!("#{}", i + 1),
                value: v,
            });
        }
        Ok(Self { values })
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self::new(vec![value; n]).expect("constant in [0,1]")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, a: ArgId) -> f64 {
        self.values[a]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn check_len(&self, af: &ArgumentationFramework) -> Result<()> {
        if self.values.len() != af.len() {
            return Err(Error::SizeMismatch {
                expected: af.len(),
                got: self.values.len(),
            });
        }
        Ok(())
    }
}

/// A partial map from arguments to probabilities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PartialAssignment {
    values: Vec<Option<f64>>,
}

impl PartialAssignment {
    pub fn empty(n: usize) -> Self {
        Self {
            values: vec![None; n],
        }
    }

    pub fn new(values: Vec<Option<f64>>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if let Some(v) = v {
                if !(0.0..=1.0).contains(v) {
                    return Err(Error::InvalidProbability {
                        argument: format!("#{}", i + 1),
                        value: *v,
                    });
                }
            }
        }
        Ok(Self { values })
    }

    /// Builds from `(name, value)` pairs over the framework.
    pub fn from_named(af: &ArgumentationFramework, pairs: &[(&str, f64)]) -> Result<Self> {
        let mut values = vec![None; af.len()];
        for &(name, v) in pairs {
            values[af.id(name)?] = Some(v);
        }
        Self::new(values)
    }

    pub fn get(&self, a: ArgId) -> Option<f64> {
        self.values[a]
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(argument, value)` pairs of the domain, in framework order.
    pub fn domain(&self) -> impl Iterator<Item = (ArgId, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }
}

impl From<&MarginalAssignment> for PartialAssignment {
    fn from(m: &MarginalAssignment) -> Self {
        Self {
            values: m.values.iter().map(|&v| Some(v)).collect(),
        }
    }
}

/// `P(A) = sum of P(E) over all E containing A`.
pub fn marginals(p: &JointDistribution) -> MarginalAssignment {
    let mut values = vec![0.0; p.num_args];
    for (mask, &w) in p.weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for (i, v) in values.iter_mut().enumerate() {
            if mask & (1 << i) != 0 {
                *v += w;
            }
        }
    }
    for v in &mut values {
        *v = v.clamp(0.0, 1.0);
    }
    MarginalAssignment { values }
}

/// The joint under which arguments are independent with the given marginals.
pub fn product_joint(m: &MarginalAssignment) -> Result<JointDistribution> {
    let n = m.len();
    check_powerset(n)?;
    // Doubling per argument; argument i lands on bit i (upper half = member).
    let mut weights = vec![1.0];
    for &p in &m.values {
        let mut next = Vec::with_capacity(weights.len() * 2);
        next.extend(weights.iter().map(|w| w * (1.0 - p)));
        next.extend(weights.iter().map(|w| w * p));
        weights = next;
    }
    Ok(JointDistribution {
        num_args: n,
        weights,
    })
}

/// Shannon entropy in nats, with `0 log 0 = 0`.
pub fn entropy(p: &JointDistribution) -> f64 {
    -p.weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| w * w.ln())
        .sum::<f64>()
}

/// Binary entropy `h(x) = -x ln x - (1-x) ln (1-x)`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |v: f64| if v > 0.0 { -v * v.ln() } else { 0.0 };
    term(x) + term(1.0 - x)
}

/// Sum of binary entropies: the entropy of [`product_joint`] without
/// materializing it.
pub fn marginal_entropy(m: &MarginalAssignment) -> f64 {
    m.values.iter().map(|&x| binary_entropy(x)).sum()
}

/// in above `0.5 + tol`, out below `0.5 - tol`, undec in between.
pub fn epistemic_labelling(m: &MarginalAssignment, threshold_tol: f64) -> Labelling {
    Labelling::new(
        m.values
            .iter()
            .map(|&v| {
                if v > 0.5 + threshold_tol {
                    Label::In
                } else if v < 0.5 - threshold_tol {
                    Label::Out
                } else {
                    Label::Undec
                }
            })
            .collect(),
    )
}

/// The in-set of the epistemic labelling.
pub fn epistemic_extension(m: &MarginalAssignment, threshold_tol: f64) -> Vec<ArgId> {
    epistemic_labelling(m, threshold_tol).in_set()
}

fn label_value(label: Label) -> f64 {
    match label {
        Label::In => 1.0,
        Label::Out => 0.0,
        Label::Undec => 0.5,
    }
}

/// `L ~ P`: in iff 1, out iff 0, undec iff 0.5.
pub fn is_congruent(l: &Labelling, m: &MarginalAssignment) -> bool {
    l.len() == m.len()
        && l
            .labels()
            .iter()
            .zip(&m.values)
            .all(|(&label, &v)| (v - label_value(label)).abs() <= CONGRUENCE_TOL)
}

/// in -> 1, out -> 0, undec -> 0.5.
pub fn congruent_assignment(l: &Labelling) -> MarginalAssignment {
    MarginalAssignment {
        values: l.labels().iter().map(|&label| label_value(label)).collect(),
    }
}

/// `|p(A) - pi(A)| <= tol` on the domain of `pi`.
pub fn is_compliant(p: &MarginalAssignment, pi: &PartialAssignment, tol: f64) -> bool {
    pi.domain().all(|(a, v)| (p.get(a) - v).abs() <= tol)
}

/// Pointwise `delta * p1 + (1 - delta) * p2`.
pub fn convex_combine(
    p1: &MarginalAssignment,
    p2: &MarginalAssignment,
    delta: f64,
) -> MarginalAssignment {
    assert_eq!(p1.len(), p2.len(), "assignments over different frameworks");
    assert!((0.0..=1.0).contains(&delta), "delta {delta} outside [0,1]");
    MarginalAssignment {
        values: p1
            .values
            .iter()
            .zip(&p2.values)
            .map(|(a, b)| (delta * a + (1.0 - delta) * b).clamp(0.0, 1.0))
            .collect(),
    }
}

/// Result of reading an assignment file.
#[derive(Debug, Clone, PartialEq)]
pub enum AssignmentFile {
    Total(MarginalAssignment),
    Partial(PartialAssignment),
}

/// Parses `<argname> <probability>` lines with `#` comments.
///
/// A file that mentions every argument is total; otherwise partial.
pub fn parse_assignment(af: &ArgumentationFramework, text: &str) -> Result<AssignmentFile> {
    let mut values: Vec<Option<f64>> = vec![None; af.len()];
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = || Error::MalformedLine {
            line: idx + 1,
            text: raw.to_string(),
        };
        let mut tokens = line.split_whitespace();
        let (Some(name), Some(value), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(malformed());
        };
        let value: f64 = value.parse().map_err(|_| malformed())?;
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidProbability {
                argument: name.to_string(),
                value,
            });
        }
        let id = af.id(name)?;
        if values[id].is_some() {
            return Err(Error::DuplicateArgument(name.to_string()));
        }
        values[id] = Some(value);
    }
    if values.iter().all(Option::is_some) {
        Ok(AssignmentFile::Total(MarginalAssignment {
            values: values.into_iter().map(|v| v.unwrap()).collect(),
        }))
    } else {
        Ok(AssignmentFile::Partial(PartialAssignment { values }))
    }
}

/// Formats with 9 significant digits, trailing zeros trimmed (C `%.9g`).
pub fn format_probability(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.8e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{mantissa}e{exp}");
    }
    let decimals = (8 - exp).max(0) as usize;
    let fixed = format!("{:.*}", decimals, x);
    if fixed.contains('.') {
        fixed.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        fixed
    }
}

/// One `<name> <value>` line per argument.
pub fn render_assignment(af: &ArgumentationFramework, m: &MarginalAssignment) -> String {
    (0..af.len())
        .map(|a| format!("{} {}", af.name(a), format_probability(m.get(a))))
        .collect::<Vec<_>>()
        .join("\n")
}
