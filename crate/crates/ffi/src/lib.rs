//! C ABI over `probarg`.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free` function. Every fallible call returns a
//! [`ProbargStatus`]. On failure, [`probarg_last_error`] gives a message for
//! the calling thread, valid until that thread's next call into the library.
//!
//! Values cross the boundary as `double` arrays in framework order. Labels
//! are encoded as `0 = in`, `1 = out`, `2 = undec`. Property sets are bit
//! masks with bit `i` standing for the `i`-th entry of [`ProbargProperty`].

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use probarg::epistemic::{epistemic_labelling, MarginalAssignment, PartialAssignment};
use probarg::labelling::{select, Label, Labelling, Semantics};
use probarg::maxent::max_entropy_completion;
use probarg::properties::{check, PropertyId};
use probarg::{ArgumentationFramework, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbargStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    InvalidArgument = 3,
    TooLarge = 4,
    Infeasible = 5,
    Unsupported = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbargFormat {
    Apx = 0,
    Tgf = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbargSemantics {
    Grounded = 0,
    Complete = 1,
    Preferred = 2,
    Stable = 3,
    SemiStable = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbargProperty {
    Coh = 0,
    Sfou = 1,
    Fou = 2,
    Sopt = 3,
    Opt = 4,
    Jus = 5,
    Ter = 6,
    Rat = 7,
    Neu = 8,
    Inv = 9,
    Max = 10,
    Min = 11,
}

/// A parsed framework with its argument names as C strings.
pub struct ProbargFramework {
    af: ArgumentationFramework,
    names: Vec<CString>,
}

/// A list of labellings over one framework.
pub struct ProbargLabellings {
    labellings: Vec<Labelling>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ProbargStatus {
    match e {
        Error::MalformedLine { .. } | Error::MissingSeparator | Error::DuplicateArgument(_) => ProbargStatus::Parse,
        Error::TooLarge { .. } => ProbargStatus::TooLarge,
        Error::Infeasible { .. } => ProbargStatus::Infeasible,
        Error::UnsupportedProperty(_) => ProbargStatus::Unsupported,
        Error::NoConvergence(_) => ProbargStatus::Internal,
        _ => ProbargStatus::InvalidArgument,
    }
}

struct Failure(ProbargStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(ProbargStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, translating errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> ProbargStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => ProbargStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ProbargStatus::Internal
        }
    }
}

unsafe fn framework<'a>(af: *const ProbargFramework) -> Result<&'a ProbargFramework, Failure> {
    af.as_ref().ok_or_else(|| null("framework"))
}

unsafe fn values<'a>(af: &ProbargFramework, ptr: *const f64, len: usize) -> Result<&'a [f64], Failure> {
    if len != af.af.len() {
        return Err(Error::SizeMismatch {
            expected: af.af.len(),
            got: len,
        }
        .into());
    }
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null("values"));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

fn property(p: ProbargProperty) -> PropertyId {
    PropertyId::ALL[p as usize]
}

fn property_set(mask: u32) -> Result<BTreeSet<PropertyId>, Failure> {
    if mask >> PropertyId::ALL.len() != 0 {
        return Err(Failure(ProbargStatus::InvalidArgument, format!("unknown property bits in {mask:#x}")));
    }
    Ok(PropertyId::ALL
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, p)| p)
        .collect())
}

fn label_code(l: Label) -> u8 {
    match l {
        Label::In => 0,
        Label::Out => 1,
        Label::Undec => 2,
    }
}

/// Parses `text` (NUL-terminated UTF-8) and stores a new framework in `*out`.
///
/// # Safety
/// `text` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn probarg_framework_parse(
    text: *const c_char,
    format: ProbargFormat,
    out: *mut *mut ProbargFramework,
) -> ProbargStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure(ProbargStatus::Parse, format!("input is not UTF-8: {e}")))?;
        let af = match format {
            ProbargFormat::Apx => ArgumentationFramework::parse_apx(text),
            ProbargFormat::Tgf => ArgumentationFramework::parse_tgf(text),
        }?;
        let names = af
            .names()
            .iter()
            .map(|n| CString::new(n.as_str()).expect("names have no nul"))
            .collect();
        *out = Box::into_raw(Box::new(ProbargFramework { af, names }));
        Ok(())
    })
}

/// # Safety
/// `af` must come from [`probarg_framework_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn probarg_framework_free(af: *mut ProbargFramework) {
    if !af.is_null() {
        drop(Box::from_raw(af));
    }
}

/// Number of arguments, or 0 for a null handle.
///
/// # Safety
/// `af` must be null or a live framework handle.
#[no_mangle]
pub unsafe extern "C" fn probarg_framework_len(af: *const ProbargFramework) -> usize {
    af.as_ref().map_or(0, |f| f.af.len())
}

/// Name of argument `index`, owned by the framework; null when out of range.
///
/// # Safety
/// `af` must be null or a live framework handle.
#[no_mangle]
pub unsafe extern "C" fn probarg_framework_name(af: *const ProbargFramework, index: usize) -> *const c_char {
    af.as_ref()
        .and_then(|f| f.names.get(index))
        .map_or(std::ptr::null(), |n| n.as_ptr())
}

/// Labellings of `semantics`, stored in `*out`.
///
/// # Safety
/// `af` must be a live framework handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn probarg_semantics(
    af: *const ProbargFramework,
    semantics: ProbargSemantics,
    out: *mut *mut ProbargLabellings,
) -> ProbargStatus {
    guard(|| {
        let f = framework(af)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = match semantics {
            ProbargSemantics::Grounded => Semantics::Grounded,
            ProbargSemantics::Complete => Semantics::Complete,
            ProbargSemantics::Preferred => Semantics::Preferred,
            ProbargSemantics::Stable => Semantics::Stable,
            ProbargSemantics::SemiStable => Semantics::SemiStable,
        };
        let labellings = select(&f.af, s)?;
        *out = Box::into_raw(Box::new(ProbargLabellings { labellings }));
        Ok(())
    })
}

/// # Safety
/// `ls` must be null or a live labellings handle.
#[no_mangle]
pub unsafe extern "C" fn probarg_labellings_count(ls: *const ProbargLabellings) -> usize {
    ls.as_ref().map_or(0, |l| l.labellings.len())
}

/// Writes labelling `index` into `labels`, which holds `len` bytes.
///
/// # Safety
/// `ls` must be a live handle and `labels` must point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn probarg_labellings_get(
    ls: *const ProbargLabellings,
    index: usize,
    labels: *mut u8,
    len: usize,
) -> ProbargStatus {
    guard(|| {
        let ls = ls.as_ref().ok_or_else(|| null("labellings"))?;
        let l = ls.labellings.get(index).ok_or_else(|| {
            Failure(
                ProbargStatus::InvalidArgument,
                format!("index {index} out of range for {} labellings", ls.labellings.len()),
            )
        })?;
        if len != l.len() {
            return Err(Error::SizeMismatch {
                expected: l.len(),
                got: len,
            }
            .into());
        }
        if len > 0 {
            if labels.is_null() {
                return Err(null("labels"));
            }
            let dst = std::slice::from_raw_parts_mut(labels, len);
            for (d, &x) in dst.iter_mut().zip(l.labels()) {
                *d = label_code(x);
            }
        }
        Ok(())
    })
}

/// # Safety
/// `ls` must come from [`probarg_semantics`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn probarg_labellings_free(ls: *mut ProbargLabellings) {
    if !ls.is_null() {
        drop(Box::from_raw(ls));
    }
}

/// Epistemic labelling of a total assignment with the given threshold band.
///
/// # Safety
/// `values` must hold `len` doubles and `labels` `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn probarg_epistemic_labelling(
    af: *const ProbargFramework,
    values: *const f64,
    len: usize,
    tol: f64,
    labels: *mut u8,
) -> ProbargStatus {
    guard(|| {
        let f = framework(af)?;
        let m = MarginalAssignment::new(self::values(f, values, len)?.to_vec())?;
        if len > 0 && labels.is_null() {
            return Err(null("labels"));
        }
        let l = epistemic_labelling(&m, tol);
        for (a, &x) in l.labels().iter().enumerate() {
            *labels.add(a) = label_code(x);
        }
        Ok(())
    })
}

/// Sets `*holds` to whether the assignment has `property` within `tol`.
///
/// # Safety
/// `values` must hold `len` doubles and `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn probarg_check(
    af: *const ProbargFramework,
    values: *const f64,
    len: usize,
    property: ProbargProperty,
    tol: f64,
    holds: *mut bool,
) -> ProbargStatus {
    guard(|| {
        let f = framework(af)?;
        let m = MarginalAssignment::new(self::values(f, values, len)?.to_vec())?;
        if holds.is_null() {
            return Err(null("holds"));
        }
        *holds = check(&f.af, &m, self::property(property), tol)?.holds;
        Ok(())
    })
}

/// Bit mask of all properties the assignment has within `tol`.
///
/// # Safety
/// `values` must hold `len` doubles and `mask` must be writable.
#[no_mangle]
pub unsafe extern "C" fn probarg_classify(
    af: *const ProbargFramework,
    values: *const f64,
    len: usize,
    tol: f64,
    mask: *mut u32,
) -> ProbargStatus {
    guard(|| {
        let f = framework(af)?;
        let m = MarginalAssignment::new(self::values(f, values, len)?.to_vec())?;
        if mask.is_null() {
            return Err(null("mask"));
        }
        let set = probarg::properties::classify(&f.af, &m, tol)?;
        *mask = PropertyId::ALL
            .iter()
            .enumerate()
            .filter(|(_, p)| set.contains(p))
            .fold(0, |acc, (i, _)| acc | 1 << i);
        Ok(())
    })
}

/// Maximum-entropy completion. `partial` holds `len` values with NaN for
/// unassigned arguments; the completion is written to `out`. `entropy` may
/// be null.
///
/// # Safety
/// `partial` must hold `len` doubles and `out` `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn probarg_complete(
    af: *const ProbargFramework,
    partial: *const f64,
    len: usize,
    properties: u32,
    tol: f64,
    out: *mut f64,
    entropy: *mut f64,
) -> ProbargStatus {
    guard(|| {
        let f = framework(af)?;
        let raw = values(f, partial, len)?;
        let pi = PartialAssignment::new(raw.iter().map(|&v| (!v.is_nan()).then_some(v)).collect())?;
        let props = property_set(properties)?;
        if len > 0 && out.is_null() {
            return Err(null("out"));
        }
        let r = max_entropy_completion(&f.af, &props, &pi, tol)?;
        let m = r.assignment.expect("optimal result has an assignment");
        for (a, &v) in m.values().iter().enumerate() {
            *out.add(a) = v;
        }
        if !entropy.is_null() {
            *entropy = r.entropy;
        }
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null.
#[no_mangle]
pub extern "C" fn probarg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn property_order_matches_core() {
        let ffi = [
            ProbargProperty::Coh,
            ProbargProperty::Sfou,
            ProbargProperty::Fou,
            ProbargProperty::Sopt,
            ProbargProperty::Opt,
            ProbargProperty::Jus,
            ProbargProperty::Ter,
            ProbargProperty::Rat,
            ProbargProperty::Neu,
            ProbargProperty::Inv,
            ProbargProperty::Max,
            ProbargProperty::Min,
        ];
        for (i, p) in ffi.into_iter().enumerate() {
            assert_eq!(property(p), PropertyId::ALL[i]);
            assert_eq!(format!("{:?}", p).to_uppercase(), PropertyId::ALL[i].as_str());
        }
    }

    #[test]
    fn property_mask_rejects_unknown_bits() {
        assert!(property_set(1 << 12).is_err());
        assert_eq!(property_set(0b11).ok().unwrap().len(), 2);
    }
}
