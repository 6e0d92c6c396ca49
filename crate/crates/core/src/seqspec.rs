//! Index-dependent rules `n -> H_n` and `n -> R_n`.
//!
//! Every rule evaluates to a nonempty finite set of positive integers at
//! every index. Rules form a closed set of kinds; there is no expression
//! language.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::SpecError;
use crate::repfn::IntSet;

/// Largest element a [`FiniteSet`] may hold. Keeps `max + 1` representable
/// as a saturation cap in machine words.
pub const MAX_ELEMENT: u64 = 1 << 62;

/// Nonempty finite set of positive integers.
///
/// Contiguous sets are held as a range so that huge intervals such as
/// `[1, 10^12]` cost nothing; everything else is a sorted list. The
/// representation is canonical, so derived equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteSet(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Range(u64, u64),
    List(Vec<u64>),
}

impl FiniteSet {
    /// Builds a set from arbitrary elements (order and duplicates ignored).
    pub fn new(mut elements: Vec<u64>) -> Result<Self, SpecError> {
        elements.sort_unstable();
        elements.dedup();
        let (Some(&lo), Some(&hi)) = (elements.first(), elements.last()) else {
            return Err(SpecError::EmptySet);
        };
        check_element(lo)?;
        check_element(hi)?;
        if hi - lo + 1 == elements.len() as u64 {
            Ok(FiniteSet(Repr::Range(lo, hi)))
        } else {
            Ok(FiniteSet(Repr::List(elements)))
        }
    }

    pub fn range(lo: u64, hi: u64) -> Result<Self, SpecError> {
        if lo > hi {
            return Err(SpecError::InvertedInterval { lo, hi });
        }
        check_element(lo)?;
        check_element(hi)?;
        Ok(FiniteSet(Repr::Range(lo, hi)))
    }

    pub fn singleton(value: u64) -> Result<Self, SpecError> {
        Self::range(value, value)
    }

    pub fn contains(&self, value: u64) -> bool {
        match &self.0 {
            Repr::Range(lo, hi) => (*lo..=*hi).contains(&value),
            Repr::List(v) => v.binary_search(&value).is_ok(),
        }
    }

    pub fn min(&self) -> u64 {
        match &self.0 {
            Repr::Range(lo, _) => *lo,
            Repr::List(v) => v[0],
        }
    }

    pub fn max(&self) -> u64 {
        match &self.0 {
            Repr::Range(_, hi) => *hi,
            Repr::List(v) => *v.last().unwrap(),
        }
    }

    /// Cardinality.
    pub fn len(&self) -> u64 {
        match &self.0 {
            Repr::Range(lo, hi) => hi - lo + 1,
            Repr::List(v) => v.len() as u64,
        }
    }

    /// Always false; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match &self.0 {
            Repr::Range(lo, hi) => Box::new(*lo..=*hi),
            Repr::List(v) => Box::new(v.iter().copied()),
        }
    }

    /// Number of elements `<= bound`.
    pub fn count_le(&self, bound: u64) -> u64 {
        match &self.0 {
            Repr::Range(lo, hi) if bound < *lo => 0,
            Repr::Range(lo, hi) => bound.min(*hi) - lo + 1,
            Repr::List(v) => v.partition_point(|&x| x <= bound) as u64,
        }
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }
}

fn check_element(value: u64) -> Result<(), SpecError> {
    if value == 0 {
        Err(SpecError::NonPositive)
    } else if value > MAX_ELEMENT {
        Err(SpecError::TooLarge(value))
    } else {
        Ok(())
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Range(lo, hi) if lo == hi => write!(f, "{{{lo}}}"),
            Repr::Range(lo, hi) => write!(f, "[{lo},{hi}]"),
            Repr::List(v) => f.debug_set().entries(v).finish(),
        }
    }
}

/// A rule assigning a [`FiniteSet`] to every nonnegative index.
///
/// `exact` documents are sugar for a table of singletons and load as
/// [`SeqSpec::Table`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RuleDoc", into = "RuleDoc")]
pub enum SeqSpec {
    Constant(FiniteSet),
    Interval {
        lo: u64,
        hi: u64,
    },
    Table {
        entries: BTreeMap<u64, FiniteSet>,
        default: Box<SeqSpec>,
    },
    /// `{1}` at index 0 and `{n}` at every index `n >= 1`.
    SingletonIndex,
}

impl SeqSpec {
    pub fn constant(elements: Vec<u64>) -> Result<Self, SpecError> {
        FiniteSet::new(elements).map(SeqSpec::Constant)
    }

    pub fn interval(lo: u64, hi: u64) -> Result<Self, SpecError> {
        FiniteSet::range(lo, hi)?;
        Ok(SeqSpec::Interval { lo, hi })
    }

    /// The table-of-singletons form of `n -> {f(n)}`.
    pub fn exact(entries: BTreeMap<u64, u64>, default: u64) -> Result<Self, SpecError> {
        let entries = entries
            .into_iter()
            .map(|(n, v)| FiniteSet::singleton(v).map(|s| (n, s)))
            .collect::<Result<_, _>>()?;
        Ok(SeqSpec::Table {
            entries,
            default: Box::new(SeqSpec::Constant(FiniteSet::singleton(default)?)),
        })
    }

    pub fn eval(&self, n: u64) -> FiniteSet {
        match self {
            SeqSpec::Constant(set) => set.clone(),
            SeqSpec::Interval { lo, hi } => FiniteSet(Repr::Range(*lo, *hi)),
            SeqSpec::Table { entries, default } => match entries.get(&n) {
                Some(set) => set.clone(),
                None => default.eval(n),
            },
            SeqSpec::SingletonIndex => FiniteSet(Repr::Range(n.max(1), n.max(1))),
        }
    }

    pub fn max_at(&self, n: u64) -> u64 {
        match self {
            SeqSpec::Constant(set) => set.max(),
            SeqSpec::Interval { hi, .. } => *hi,
            SeqSpec::Table { entries, default } => match entries.get(&n) {
                Some(set) => set.max(),
                None => default.max_at(n),
            },
            SeqSpec::SingletonIndex => n.max(1),
        }
    }

    /// Largest `max_at(n)` over `n` in `[lo, hi]`.
    pub fn max_over(&self, lo: u64, hi: u64) -> u64 {
        match self {
            SeqSpec::Constant(set) => set.max(),
            SeqSpec::Interval { hi, .. } => *hi,
            SeqSpec::SingletonIndex => hi.max(1),
            SeqSpec::Table { .. } => (lo..=hi).map(|n| self.max_at(n)).max().unwrap_or(1),
        }
    }

    /// `sup_n max_at(n)`, or `None` when unbounded.
    pub fn sup_max(&self) -> Option<u64> {
        match self {
            SeqSpec::Constant(set) => Some(set.max()),
            SeqSpec::Interval { hi, .. } => Some(*hi),
            SeqSpec::Table { entries, default } => {
                let d = default.sup_max()?;
                Some(entries.values().map(FiniteSet::max).fold(d, u64::max))
            }
            SeqSpec::SingletonIndex => None,
        }
    }
}

/// The pair of rules together with the index from which constraints apply.
///
/// `start_index == 0` is full-basis mode. A positive start index enforces
/// constraints only for `n >= start_index` and roots the search at `seed`
/// (default `{0}`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecPair {
    #[serde(rename = "H")]
    pub h: SeqSpec,
    #[serde(rename = "R")]
    pub r: SeqSpec,
    #[serde(default)]
    pub start_index: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<IntSet>,
}

impl SpecPair {
    /// Full-mode pair. Does not check the small-index conditions; see
    /// [`SpecPair::validate`].
    pub fn new(h: SeqSpec, r: SeqSpec) -> Self {
        SpecPair {
            h,
            r,
            start_index: 0,
            seed: None,
        }
    }

    pub fn asymptotic(h: SeqSpec, r: SeqSpec, start_index: u64, seed: Option<IntSet>) -> Self {
        SpecPair {
            h,
            r,
            start_index,
            seed,
        }
    }

    pub fn is_full(&self) -> bool {
        self.start_index == 0
    }

    /// Rejects full-mode pairs with `card(H_0) ∉ R_0` or `card(H_1) ∉ R_1`.
    pub fn validate(&self) -> Result<(), SpecError> {
        if self.is_full() {
            if self.seed.is_some() {
                return Err(SpecError::SeedInFullMode);
            }
            for n in 0..=1 {
                let card = self.h.eval(n).len();
                if !self.r.eval(n).contains(card) {
                    return Err(SpecError::SmallIndex { n, card });
                }
            }
        } else if let Some(seed) = &self.seed {
            if seed.is_empty() {
                return Err(SpecError::EmptySeed);
            }
        }
        Ok(())
    }

    /// Saturation cap sufficient for every membership test against `R`.
    pub fn count_cap(&self) -> u64 {
        self.r.sup_max().map_or(u64::MAX, |m| m + 1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec pair serializes")
    }
}

/// Parses and validates a configuration document.
pub fn parse_spec_pair(text: &str) -> Result<SpecPair, SpecError> {
    let pair: SpecPair = serde_json::from_str(text).map_err(|e| SpecError::Malformed(e.to_string()))?;
    pair.validate()?;
    Ok(pair)
}

// On-disk form of a rule.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RuleDoc {
    Constant {
        set: Vec<u64>,
    },
    Interval {
        lo: u64,
        hi: u64,
    },
    Table {
        entries: BTreeMap<String, Vec<u64>>,
        default: Box<RuleDoc>,
    },
    SingletonIndex {},
    Exact {
        entries: BTreeMap<String, OneValue>,
        default: OneValue,
    },
}

/// `3` or `[3]`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum OneValue {
    Scalar(u64),
    List(Vec<u64>),
}

impl OneValue {
    fn get(self) -> Result<u64, SpecError> {
        match self {
            OneValue::Scalar(v) => Ok(v),
            OneValue::List(v) if v.len() == 1 => Ok(v[0]),
            OneValue::List(v) if v.is_empty() => Err(SpecError::EmptySet),
            OneValue::List(_) => Err(SpecError::Malformed("exact rule values must be single integers".into())),
        }
    }
}

fn parse_index(key: &str) -> Result<u64, SpecError> {
    let canonical = !key.is_empty() && key.bytes().all(|b| b.is_ascii_digit()) && (key == "0" || !key.starts_with('0'));
    match key.parse() {
        Ok(n) if canonical => Ok(n),
        _ => Err(SpecError::BadIndex(key.to_string())),
    }
}

impl TryFrom<RuleDoc> for SeqSpec {
    type Error = SpecError;

    fn try_from(doc: RuleDoc) -> Result<Self, SpecError> {
        match doc {
            RuleDoc::Constant { set } => SeqSpec::constant(set),
            RuleDoc::Interval { lo, hi } => SeqSpec::interval(lo, hi),
            RuleDoc::Table { entries, default } => {
                let entries = entries
                    .into_iter()
                    .map(|(k, v)| Ok((parse_index(&k)?, FiniteSet::new(v)?)))
                    .collect::<Result<_, SpecError>>()?;
                let default = Box::new(SeqSpec::try_from(*default)?);
                Ok(SeqSpec::Table { entries, default })
            }
            RuleDoc::SingletonIndex {} => Ok(SeqSpec::SingletonIndex),
            RuleDoc::Exact { entries, default } => {
                let entries = entries
                    .into_iter()
                    .map(|(k, v)| Ok((parse_index(&k)?, v.get()?)))
                    .collect::<Result<_, SpecError>>()?;
                SeqSpec::exact(entries, default.get()?)
            }
        }
    }
}

impl From<SeqSpec> for RuleDoc {
    fn from(spec: SeqSpec) -> Self {
        match spec {
            SeqSpec::Constant(set) => RuleDoc::Constant { set: set.to_vec() },
            SeqSpec::Interval { lo, hi } => RuleDoc::Interval { lo, hi },
            SeqSpec::Table { entries, default } => RuleDoc::Table {
                entries: entries.into_iter().map(|(k, v)| (k.to_string(), v.to_vec())).collect(),
                default: Box::new(RuleDoc::from(*default)),
            },
            SeqSpec::SingletonIndex => RuleDoc::SingletonIndex {},
        }
    }
}
