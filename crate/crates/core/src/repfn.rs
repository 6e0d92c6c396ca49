//! Exact counting of unordered, ordered and generalized representations.
//!
//! The workhorse is a parts-by-sum table: after processing the elements of
//! `A` in increasing order, cell `(j, s)` holds the number of multisets of
//! `j` elements of `A` with sum `s`. Adding an element `a` is one pass
//! `new[j][s] = old[j][s] + new[j-1][s-a]` with `j` ascending, which allows
//! `a` to repeat.
//!
//! Tables run either in exact arbitrary precision or in machine words
//! saturating at a cap. A saturated count is only ever compared against
//! target sets whose maximum lies below the cap.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::SpecError;
use crate::seqspec::{FiniteSet, SeqSpec};

/// Largest element accepted in an [`IntSet`].
pub const MAX_SET_ELEMENT: u64 = u32::MAX as u64;

/// Finite set of nonnegative integers, stored sorted.
///
/// The derived ordering is lexicographic on the sorted elements, which is
/// the order used for every listing of sets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct IntSet(Vec<u64>);

impl IntSet {
    /// Requires strictly increasing elements.
    pub fn new(elements: Vec<u64>) -> Result<Self, SpecError> {
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(SpecError::BadSet(format!(
                "elements not strictly increasing at {} , {}",
                w[0], w[1]
            )));
        }
        if let Some(&m) = elements.last().filter(|&&m| m > MAX_SET_ELEMENT) {
            return Err(SpecError::BadSet(format!("element {m} exceeds {MAX_SET_ELEMENT}")));
        }
        Ok(IntSet(elements))
    }

    /// Sorts and deduplicates.
    pub fn from_unsorted(elements: impl IntoIterator<Item = u64>) -> Result<Self, SpecError> {
        let mut v: Vec<u64> = elements.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        IntSet::new(v)
    }

    /// `[lo, hi]` as a set.
    pub fn interval(lo: u64, hi: u64) -> Self {
        IntSet::new((lo..=hi).collect()).expect("interval within range")
    }

    /// Parses `0,1,3`, `[0, 1, 3]` or whitespace-separated integers.
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let body = text.trim();
        let body = body.strip_prefix('[').map_or(Ok(body), |b| {
            b.strip_suffix(']')
                .ok_or_else(|| SpecError::BadSet("unbalanced brackets".into()))
        })?;
        let elements = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| SpecError::BadSet(format!("{t:?} is not a nonnegative integer")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        IntSet::from_unsorted(elements)
    }

    pub fn elements(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_element(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn contains(&self, value: u64) -> bool {
        self.0.binary_search(&value).is_ok()
    }

    /// `self ∪ {m}` for `m > max(self)`.
    ///
    /// # Panics
    /// If `m` is not a new maximum.
    pub fn with_max(&self, m: u64) -> IntSet {
        assert!(
            self.max_element().is_none_or(|x| m > x),
            "{m} is not a new maximum of {self:?}"
        );
        assert!(m <= MAX_SET_ELEMENT);
        let mut v = self.0.clone();
        v.push(m);
        IntSet(v)
    }

    /// `self \ {max(self)}`.
    pub fn without_max(&self) -> IntSet {
        let mut v = self.0.clone();
        v.pop();
        IntSet(v)
    }

    /// `self ∩ [0, bound]`.
    pub fn truncated(&self, bound: u64) -> IntSet {
        IntSet(self.0.iter().copied().take_while(|&x| x <= bound).collect())
    }

    pub fn is_subset(&self, other: &IntSet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }
}

impl TryFrom<Vec<u64>> for IntSet {
    type Error = SpecError;

    fn try_from(v: Vec<u64>) -> Result<Self, SpecError> {
        IntSet::new(v)
    }
}

impl From<IntSet> for Vec<u64> {
    fn from(s: IntSet) -> Self {
        s.0
    }
}

impl fmt::Debug for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.0).finish()
    }
}

/// A representation count: exact, or known only to be at least `cap`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Count {
    Exact(BigUint),
    Saturated { cap: u64 },
}

impl Count {
    pub fn is_zero(&self) -> bool {
        matches!(self, Count::Exact(v) if v.is_zero())
    }

    /// Membership in a target set. Saturated counts are never members,
    /// which is correct whenever `set.max() < cap`.
    pub fn member_of(&self, set: &FiniteSet) -> bool {
        match self {
            Count::Exact(v) => v.to_u64().is_some_and(|x| set.contains(x)),
            Count::Saturated { cap } => {
                debug_assert!(set.max() < *cap, "cap {cap} too small for {set:?}");
                false
            }
        }
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Count::Exact(v) => Some(v),
            Count::Saturated { .. } => None,
        }
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Self {
        Count::Exact(v.into())
    }
}

impl PartialEq<u64> for Count {
    fn eq(&self, other: &u64) -> bool {
        matches!(self, Count::Exact(v) if v.to_u64() == Some(*other))
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Exact(v) => write!(f, "{v}"),
            Count::Saturated { cap } => write!(f, "{cap}+"),
        }
    }
}

/// Exact counts that fit in a `u64` serialize as JSON numbers, larger ones
/// as decimal strings; saturated counts as `"<cap>+"`.
impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Count::Exact(v) => match v.to_u64() {
                Some(x) => s.serialize_u64(x),
                None => s.serialize_str(&v.to_string()),
            },
            Count::Saturated { .. } => s.serialize_str(&self.to_string()),
        }
    }
}

trait Tally: Clone + fmt::Debug + Send + Sync {
    fn nil() -> Self;
    fn unit() -> Self;
    fn add(&mut self, other: &Self, cap: u64);
    fn scaled(&self, k: u64, cap: u64) -> Self;
    fn to_count(&self, cap: u64) -> Count;
}

impl Tally for u64 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn add(&mut self, other: &Self, cap: u64) {
        *self = self.saturating_add(*other).min(cap);
    }
    fn scaled(&self, k: u64, cap: u64) -> Self {
        self.saturating_mul(k).min(cap)
    }
    fn to_count(&self, cap: u64) -> Count {
        if *self >= cap {
            Count::Saturated { cap }
        } else {
            Count::from(*self)
        }
    }
}

impl Tally for BigUint {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn add(&mut self, other: &Self, _cap: u64) {
        *self += other;
    }
    fn scaled(&self, k: u64, _cap: u64) -> Self {
        self * k
    }
    fn to_count(&self, _cap: u64) -> Count {
        Count::Exact(self.clone())
    }
}

/// Parts-by-sum table. Row `j` covers `j` parts; rows stop at
/// `min(max part count, window)`: with `0 ∈ A` every row beyond the window
/// equals the last one, and without `0` they are identically zero.
#[derive(Clone, Debug)]
struct DpTable<T> {
    rows: usize,
    cols: usize,
    has_zero: bool,
    cap: u64,
    cells: Vec<T>,
}

impl<T: Tally> DpTable<T> {
    fn empty(max_parts: u64, window: u64, cap: u64) -> Self {
        let rows = max_parts.min(window) as usize + 1;
        let cols = window as usize + 1;
        let mut cells = vec![T::nil(); rows * cols];
        cells[0] = T::unit();
        DpTable {
            rows,
            cols,
            has_zero: false,
            cap,
            cells,
        }
    }

    fn build(set: &IntSet, max_parts: u64, window: u64, cap: u64) -> Self {
        let mut table = Self::empty(max_parts, window, cap);
        for &a in set.elements() {
            table.add_element(a);
        }
        table
    }

    fn add_element(&mut self, a: u64) {
        if a == 0 {
            self.has_zero = true;
        }
        if a as usize >= self.cols {
            return;
        }
        let (a, cols, cap) = (a as usize, self.cols, self.cap);
        for j in 1..self.rows {
            let (prev, cur) = self.cells.split_at_mut(j * cols);
            let prev = &prev[(j - 1) * cols..];
            for s in a..cols {
                cur[s].add(&prev[s - a], cap);
            }
        }
    }

    fn cell(&self, j: usize, s: usize) -> &T {
        &self.cells[j * self.cols + s]
    }

    /// Σ_{h ∈ hs} (multisets of h elements with sum n).
    fn generalized(&self, n: u64, hs: &FiniteSet) -> T {
        let n = n as usize;
        let top = (self.rows - 1) as u64;
        let mut acc = T::nil();
        for h in hs.iter().take_while(|&h| h <= top) {
            acc.add(self.cell(h as usize, n), self.cap);
        }
        let beyond = hs.len() - hs.count_le(top);
        if beyond > 0 && self.has_zero {
            debug_assert!(n < self.rows);
            acc.add(&self.cell(self.rows - 1, n).scaled(beyond, self.cap), self.cap);
        }
        acc
    }

    /// Count at `n = m` after adjoining a new maximum `m` (`m` within the
    /// window, `m > max(A)`): the table value plus one copy of `m` padded by
    /// zeros, i.e. the `(h-1)`-part representations of 0.
    fn with_new_max(&self, m: u64, hs: &FiniteSet) -> T {
        let mut acc = self.generalized(m, hs);
        let pads = if self.has_zero { hs.len() } else { hs.count_le(1) };
        acc.add(&T::unit().scaled(pads, self.cap), self.cap);
        acc
    }

    fn truncated(&self, window: u64) -> Self {
        let cols = window as usize + 1;
        debug_assert!(cols <= self.cols);
        let mut cells = Vec::with_capacity(self.rows * cols);
        for j in 0..self.rows {
            cells.extend_from_slice(&self.cells[j * self.cols..j * self.cols + cols]);
        }
        DpTable {
            rows: self.rows,
            cols,
            has_zero: self.has_zero,
            cap: self.cap,
            cells,
        }
    }
}

/// Number of nondecreasing `h`-tuples from `A` with sum `n`.
pub fn rep_unordered(set: &IntSet, n: u64, h: u64) -> BigUint {
    if h == 0 {
        return BigUint::from(u8::from(n == 0));
    }
    DpTable::<BigUint>::build(set, h, n, u64::MAX).generalized(n, &FiniteSet::singleton(h).expect("h ≥ 1"))
}

/// Number of ordered `h`-tuples from `A^h` with sum `n`: the coefficient of
/// `x^n` in the `h`-th power of the indicator polynomial of `A`.
pub fn rep_ordered(set: &IntSet, n: u64, h: u64) -> BigUint {
    let len = n as usize + 1;
    let mut base = vec![BigUint::zero(); len];
    for &a in set.elements().iter().take_while(|&&a| a <= n) {
        base[a as usize] = BigUint::one();
    }
    let mut acc = vec![BigUint::zero(); len];
    acc[0] = BigUint::one();
    let mut e = h;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_truncated(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul_truncated(&base, &base);
        }
    }
    acc.swap_remove(n as usize)
}

fn mul_truncated(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let len = a.len();
    let mut out = vec![BigUint::zero(); len];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b[..len - i].iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `r_A(n, H_n) = Σ_{h ∈ H_n} r_A(n, h)`.
pub fn rep_generalized(set: &IntSet, n: u64, hn: &FiniteSet) -> BigUint {
    DpTable::<BigUint>::build(set, hn.max(), n, u64::MAX).generalized(n, hn)
}

#[derive(Clone, Debug)]
enum Table {
    Exact(DpTable<BigUint>),
    Capped(DpTable<u64>),
}

impl Table {
    fn build(set: &IntSet, max_parts: u64, window: u64, cap: Option<u64>) -> Table {
        match cap {
            None => Table::Exact(DpTable::build(set, max_parts, window, u64::MAX)),
            Some(c) => Table::Capped(DpTable::build(set, max_parts, window, c)),
        }
    }

    fn truncated(&self, window: u64) -> Table {
        match self {
            Table::Exact(t) => Table::Exact(t.truncated(window)),
            Table::Capped(t) => Table::Capped(t.truncated(window)),
        }
    }

    fn add_element(&mut self, a: u64) {
        match self {
            Table::Exact(t) => t.add_element(a),
            Table::Capped(t) => t.add_element(a),
        }
    }

    fn count(&self, n: u64, hs: &FiniteSet) -> Count {
        match self {
            Table::Exact(t) => t.generalized(n, hs).to_count(t.cap),
            Table::Capped(t) => t.generalized(n, hs).to_count(t.cap),
        }
    }

    fn count_with_new_max(&self, m: u64, hs: &FiniteSet) -> Count {
        match self {
            Table::Exact(t) => t.with_new_max(m, hs).to_count(t.cap),
            Table::Capped(t) => t.with_new_max(m, hs).to_count(t.cap),
        }
    }
}

/// `r_A(n, H_n)` for every `n` in `[0, window]`, extendable by a new maximum.
#[derive(Clone, Debug)]
pub struct RepProfile {
    set: IntSet,
    h: Arc<SeqSpec>,
    window: u64,
    cap: Option<u64>,
    table: Table,
    counts: Vec<Count>,
}

/// Profile of `set` over `[0, window]`. With `cap`, counts saturate at
/// `cap`, which is enough for membership tests against any `R_n` with
/// `max(R_n) < cap`; without it they are exact.
pub fn build_profile(set: &IntSet, h: impl Into<Arc<SeqSpec>>, window: u64, cap: Option<u64>) -> RepProfile {
    let h = h.into();
    let max_parts = h.max_over(0, window);
    let table = Table::build(set, max_parts, window, cap);
    let counts = (0..=window).map(|n| table.count(n, &h.eval(n))).collect();
    RepProfile {
        set: set.clone(),
        h,
        window,
        cap,
        table,
        counts,
    }
}

/// Profile of `p.set ∪ {m}` on `[0, window]`. Counts below `m` are copied
/// from `p` unchanged: every sum involving `m` is at least `m`.
///
/// # Panics
/// If `m <= max(p.set)` or `window < m`.
pub fn extend_profile(p: &RepProfile, m: u64, window: u64) -> RepProfile {
    p.extend(m, window)
}

impl RepProfile {
    pub fn set(&self) -> &IntSet {
        &self.set
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    pub fn cap(&self) -> Option<u64> {
        self.cap
    }

    pub fn counts(&self) -> &[Count] {
        &self.counts
    }

    pub fn count(&self, n: u64) -> &Count {
        &self.counts[n as usize]
    }

    pub fn extend(&self, m: u64, window: u64) -> RepProfile {
        assert!(window >= m, "window {window} below new element {m}");
        let set = self.set.with_max(m);
        let table = if window <= self.window {
            let mut t = self.table.truncated(window);
            t.add_element(m);
            t
        } else {
            Table::build(&set, self.h.max_over(0, window), window, self.cap)
        };
        let keep = m.min(self.window + 1);
        let mut counts = self.counts[..keep as usize].to_vec();
        counts.extend((keep..=window).map(|n| table.count(n, &self.h.eval(n))));
        RepProfile {
            set,
            h: self.h.clone(),
            window,
            cap: self.cap,
            table,
            counts,
        }
    }

    /// Count at `n = m` for `set ∪ {m}`, without building the extension.
    ///
    /// # Panics
    /// If `m` is not a new maximum inside the window.
    pub fn peek_extension(&self, m: u64) -> Count {
        assert!(self.set.max_element().is_none_or(|x| m > x) && m <= self.window);
        self.table.count_with_new_max(m, &self.h.eval(m))
    }

    /// Profile of `set ∩ [0, window]` on the smaller window.
    pub fn truncate(&self, window: u64) -> RepProfile {
        assert!(window <= self.window);
        RepProfile {
            set: self.set.truncated(window),
            h: self.h.clone(),
            window,
            cap: self.cap,
            table: self.table.truncated(window),
            counts: self.counts[..=window as usize].to_vec(),
        }
    }

    /// Same set on a wider window (recomputed).
    pub fn widen(&self, window: u64) -> RepProfile {
        build_profile(&self.set, self.h.clone(), window, self.cap)
    }
}
