//! Generalized additive representation functions and finite R-bases.
//!
//! For a finite set `A` of nonnegative integers and a rule `n -> H_n` of
//! allowed summand counts, `r_A(n, H_n)` counts the representations of `n`
//! as a nondecreasing sum of `h` elements of `A`, summed over `h ∈ H_n`.
//! A finite R-basis is a set with `r_A(n, H_n) ∈ R_n` for every
//! `n ≤ max(A)`. Finite R-bases form a rooted tree (remove the maximum to
//! get the parent); an infinite path in that tree is an infinite R-basis,
//! so [`search`] looks for deep vertices or proves the tree finite.
//!
//! Modules:
//! - [`seqspec`]: the rules `H` and `R` and their JSON form.
//! - [`repfn`]: exact and saturating counting, incremental profiles.
//! - [`basis`]: basis predicates and window checks.
//! - [`tree`]: vertices, parents, children, branching bounds.
//! - [`search`]: tree search with checkpoints and deterministic parallelism.
//! - [`oracle`]: brute-force reference counts used by the test suites.
//! - [`preset`]: named instances such as `dowd(2,3)`.

pub mod basis;
pub mod error;
pub mod oracle;
pub mod preset;
pub mod repfn;
pub mod search;
pub mod seqspec;
pub mod tree;

pub use basis::{CheckReport, Violation, ViolationKind};
pub use error::{OracleError, SearchError, SpecError, TreeError};
pub use preset::Preset;
pub use repfn::{
    build_profile, extend_profile, rep_generalized, rep_ordered, rep_unordered, Count, IntSet, RepProfile,
};
pub use search::{
    enumerate_all, resume, search, Checkpoint, OutcomeKind, SearchConfig, SearchOutcome, Searcher, Strategy,
};
pub use seqspec::{parse_spec_pair, FiniteSet, SeqSpec, SpecPair};
pub use tree::{Tree, Vertex};
