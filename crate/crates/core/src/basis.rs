//! Basis predicates over finite windows.

use serde::Serialize;

use crate::repfn::{build_profile, Count, IntSet};
use crate::seqspec::{SeqSpec, SpecPair};

/// Reports stop collecting violations after this many.
pub const DEFAULT_VIOLATION_LIMIT: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `r_A(n, H_n) = 0`.
    BelowOne,
    /// `r_A(n, H_n) ∉ R_n`.
    NotInR,
    /// `n > max(H_n) · max(A)`; `got` holds the right-hand side.
    ReachBound,
    /// `max(H_n) · m < n` in the interval construction; `got` holds `max(H_n)`.
    Precondition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: u64,
    pub got: Count,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub ok: bool,
    /// Inclusive `[lo, hi]`; empty when `lo > hi`.
    pub window: (u64, u64),
    pub violations: Vec<Violation>,
}

impl CheckReport {
    fn new(lo: u64, hi: u64) -> Self {
        CheckReport {
            ok: true,
            window: (lo, hi),
            violations: Vec::new(),
        }
    }

    fn push(&mut self, limit: usize, v: Violation) {
        self.ok = false;
        if self.violations.len() < limit {
            self.violations.push(v);
        }
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn membership_report(set: &IntSet, pair: &SpecPair, hi: u64, limit: usize) -> CheckReport {
    let lo = pair.start_index;
    let mut report = CheckReport::new(lo, hi);
    if lo > hi {
        return report;
    }
    let profile = build_profile(set, pair.h.clone(), hi, Some(pair.count_cap()));
    for n in lo..=hi {
        let got = profile.count(n);
        if !got.member_of(&pair.r.eval(n)) {
            let kind = if got.is_zero() {
                ViolationKind::BelowOne
            } else {
                ViolationKind::NotInR
            };
            report.push(
                limit,
                Violation {
                    n,
                    got: got.clone(),
                    kind,
                },
            );
        }
    }
    report
}

/// `r_A(n, H_n) ≥ 1` for all `n ∈ [0, max(A)]`.
pub fn is_finite_basis(set: &IntSet, h: &SeqSpec) -> CheckReport {
    let hi = set.max_element().unwrap_or(0);
    let mut report = CheckReport::new(0, hi);
    let profile = build_profile(set, h.clone(), hi, Some(2));
    for n in 0..=hi {
        if profile.count(n).is_zero() {
            report.push(
                DEFAULT_VIOLATION_LIMIT,
                Violation {
                    n,
                    got: 0.into(),
                    kind: ViolationKind::BelowOne,
                },
            );
        }
    }
    report
}

/// `r_A(n, H_n) ∈ R_n` for all `n ∈ [n0, max(A)]`.
pub fn is_finite_r_basis(set: &IntSet, pair: &SpecPair) -> CheckReport {
    membership_report(set, pair, set.max_element().unwrap_or(0), DEFAULT_VIOLATION_LIMIT)
}

/// `r_A(n, H_n) ∈ R_n` for all `n ∈ [n0, window]`; the window may run past
/// `max(A)`.
pub fn check_window(set: &IntSet, pair: &SpecPair, window: u64) -> CheckReport {
    membership_report(set, pair, window, DEFAULT_VIOLATION_LIMIT)
}

pub fn check_window_limited(set: &IntSet, pair: &SpecPair, window: u64, limit: usize) -> CheckReport {
    membership_report(set, pair, window, limit)
}

/// Every `n ∈ [1, window]` representable by at most `max(H_n)` elements of
/// `A` satisfies `n ≤ max(H_n) · max(A)`. Reports each `n` that cannot be
/// reached this way.
pub fn reach_necessity(set: &IntSet, h: &SeqSpec, window: u64) -> CheckReport {
    let top = set.max_element().unwrap_or(0);
    let mut report = CheckReport::new(1, window);
    for n in 1..=window {
        let reach = h.max_at(n).saturating_mul(top);
        if n > reach {
            report.push(
                DEFAULT_VIOLATION_LIMIT,
                Violation {
                    n,
                    got: reach.into(),
                    kind: ViolationKind::ReachBound,
                },
            );
        }
    }
    report
}

/// `n = q·m + r` with `0 ≤ r < m`, spelled out as `h` parts from `[0, m]`:
/// `q` copies of `m`, one `r` when `r > 0`, and zeros.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DivisionWitness {
    pub n: u64,
    pub parts: u64,
    pub quotient: u64,
    pub remainder: u64,
}

impl DivisionWitness {
    pub fn zeros(&self) -> u64 {
        self.parts - self.quotient - u64::from(self.remainder > 0)
    }

    /// The parts in nondecreasing order.
    pub fn summands(&self, m: u64) -> Vec<u64> {
        let mut v = vec![0; self.zeros() as usize];
        if self.remainder > 0 {
            v.push(self.remainder);
        }
        v.extend(std::iter::repeat_n(m, self.quotient as usize));
        v
    }
}

#[derive(Clone, Debug)]
pub struct IntervalConstruction {
    pub report: CheckReport,
    pub witnesses: Vec<DivisionWitness>,
}

/// Checks that `[0, m]` is a basis of order `H` on `[0, window]` by writing
/// each `n` as `q·m + r` padded with zeros to `max(H_n)` parts.
///
/// Indices with `max(H_n) · m < n` violate the precondition and are reported
/// as [`ViolationKind::Precondition`]. Every constructed witness is also
/// cross-checked against the counting table.
pub fn interval_construction(m: u64, h: &SeqSpec, window: u64) -> IntervalConstruction {
    assert!(m >= 1);
    let mut report = CheckReport::new(0, window);
    let mut witnesses = Vec::with_capacity(window as usize + 1);
    for n in 0..=window {
        let parts = h.max_at(n);
        if parts.saturating_mul(m) < n {
            report.push(
                DEFAULT_VIOLATION_LIMIT,
                Violation {
                    n,
                    got: parts.into(),
                    kind: ViolationKind::Precondition,
                },
            );
            continue;
        }
        let (quotient, remainder) = (n / m, n % m);
        let w = DivisionWitness {
            n,
            parts,
            quotient,
            remainder,
        };
        debug_assert!(quotient + u64::from(remainder > 0) <= parts);
        debug_assert_eq!(quotient * m + remainder, n);
        witnesses.push(w);
    }
    if report.ok {
        let profile = build_profile(&IntSet::interval(0, m), h.clone(), window, Some(2));
        for n in 0..=window {
            if profile.count(n).is_zero() {
                report.push(
                    DEFAULT_VIOLATION_LIMIT,
                    Violation {
                        n,
                        got: 0.into(),
                        kind: ViolationKind::BelowOne,
                    },
                );
            }
        }
    }
    IntervalConstruction { report, witnesses }
}

/// `card(H_0) ∈ R_0` and `card(H_1) ∈ R_1`; required of any full-mode pair
/// admitting a finite R-basis with a positive maximum.
pub fn necessary_conditions(pair: &SpecPair) -> CheckReport {
    let mut report = CheckReport::new(0, 1);
    for n in 0..=1 {
        let card = pair.h.eval(n).len();
        if !pair.r.eval(n).contains(card) {
            report.push(
                DEFAULT_VIOLATION_LIMIT,
                Violation {
                    n,
                    got: card.into(),
                    kind: ViolationKind::NotInR,
                },
            );
        }
    }
    report
}
