//! Named instances expanded to explicit pairs.
//!
//! Grammar:
//!
//! ```text
//! dowd(h,c)                  H_n = {h}, R_n = [1,c]
//! exact-f(h,d[,n=v]...)      H_n = {h}, R_n = {f(n)} with f(n) = v at listed n, d elsewhere
//! paper-example              H_0 = R_0 = {1}, H_n = {n}, R_n = {1,2} for n ≥ 1
//! ```
//!
//! Whitespace is ignored.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::SpecError;
use crate::seqspec::{FiniteSet, SeqSpec, SpecPair};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    Dowd {
        h: u64,
        c: u64,
    },
    ExactF {
        h: u64,
        default: u64,
        entries: BTreeMap<u64, u64>,
    },
    PaperExample,
}

fn bad(text: &str, why: &str) -> SpecError {
    SpecError::BadPreset(format!("{text:?}: {why}"))
}

fn number(text: &str, s: &str) -> Result<u64, SpecError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0')) {
        return Err(bad(text, &format!("expected a decimal integer, got {s:?}")));
    }
    s.parse().map_err(|_| bad(text, &format!("integer {s} out of range")))
}

impl Preset {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "paper-example" {
            return Ok(Preset::PaperExample);
        }
        let (name, rest) = compact.split_once('(').ok_or_else(|| bad(text, "unknown preset"))?;
        let args = rest
            .strip_suffix(')')
            .ok_or_else(|| bad(text, "missing closing parenthesis"))?;
        let args: Vec<&str> = args.split(',').collect();
        match name {
            "dowd" => {
                let [h, c] = args[..] else {
                    return Err(bad(text, "dowd takes (h,c)"));
                };
                let (h, c) = (number(text, h)?, number(text, c)?);
                if h < 2 || c < 1 {
                    return Err(bad(text, "dowd needs h ≥ 2 and c ≥ 1"));
                }
                Ok(Preset::Dowd { h, c })
            }
            "exact-f" => {
                if args.len() < 2 {
                    return Err(bad(text, "exact-f takes (h,default[,n=v]...)"));
                }
                let h = number(text, args[0])?;
                let default = number(text, args[1])?;
                let mut entries = BTreeMap::new();
                for a in &args[2..] {
                    let (n, v) = a.split_once('=').ok_or_else(|| bad(text, "table entries are n=v"))?;
                    let (n, v) = (number(text, n)?, number(text, v)?);
                    if entries.insert(n, v).is_some() {
                        return Err(bad(text, &format!("index {n} given twice")));
                    }
                }
                if h < 1 {
                    return Err(bad(text, "exact-f needs h ≥ 1"));
                }
                Ok(Preset::ExactF { h, default, entries })
            }
            _ => Err(bad(text, "unknown preset")),
        }
    }

    /// The expanded pair. Fails when a value is not a valid set element
    /// (for example f(n) = 0).
    pub fn expand(&self) -> Result<SpecPair, SpecError> {
        let pair = match self {
            Preset::Dowd { h, c } => SpecPair::new(SeqSpec::constant(vec![*h])?, SeqSpec::interval(1, *c)?),
            Preset::ExactF { h, default, entries } => {
                SpecPair::new(SeqSpec::constant(vec![*h])?, SeqSpec::exact(entries.clone(), *default)?)
            }
            Preset::PaperExample => {
                let r = SeqSpec::Table {
                    entries: BTreeMap::from([(0, FiniteSet::singleton(1)?)]),
                    default: Box::new(SeqSpec::constant(vec![1, 2])?),
                };
                SpecPair::new(SeqSpec::SingletonIndex, r)
            }
        };
        pair.validate()?;
        Ok(pair)
    }
}

impl FromStr for Preset {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, SpecError> {
        Preset::parse(s)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Dowd { h, c } => write!(f, "dowd({h},{c})"),
            Preset::ExactF { h, default, entries } => {
                write!(f, "exact-f({h},{default}")?;
                for (n, v) in entries {
                    write!(f, ",{n}={v}")?;
                }
                f.write_str(")")
            }
            Preset::PaperExample => f.write_str("paper-example"),
        }
    }
}
