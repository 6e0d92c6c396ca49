//! The tree of finite R-bases.
//!
//! Vertices are finite R-bases; the parent of `V` is `V \ {max(V)}` and the
//! children of `V` are the valid sets `V ∪ {m}` with `m > max(V)`. The root
//! is `{0}` in full mode and the seed set in asymptotic mode.
//!
//! Children are found by one sweep over candidate maxima. Adding `m` leaves
//! every count below `m` unchanged, so `V ∪ {m}` is valid exactly when
//! `r_V(n, H_n) ∈ R_n` for all `n ∈ (max(V), m)` and the extended count at
//! `m` lies in `R_m`. Once some `n` fails the first condition, no candidate
//! beyond `n` can succeed and the sweep stops.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::basis::is_finite_r_basis;
use crate::error::TreeError;
use crate::repfn::{build_profile, IntSet, RepProfile};
use crate::seqspec::SpecPair;

/// Termination knobs for the branching-bound scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundLimits {
    /// The scan stops after `stretch_factor · max(V)` consecutive failures.
    pub stretch_factor: u64,
    /// Candidates examined before giving up on a vertex.
    pub hard_cap: u64,
}

impl Default for BoundLimits {
    fn default() -> Self {
        BoundLimits {
            stretch_factor: 64,
            hard_cap: 1 << 24,
        }
    }
}

/// A finite R-basis together with its counts on `[0, max(V)]`.
#[derive(Clone, Debug)]
pub struct Vertex {
    set: IntSet,
    profile: Arc<RepProfile>,
}

impl Vertex {
    pub fn set(&self) -> &IntSet {
        &self.set
    }

    pub fn profile(&self) -> &RepProfile {
        &self.profile
    }

    pub fn max(&self) -> u64 {
        self.set.max_element().expect("vertices are nonempty")
    }

    pub fn depth(&self) -> usize {
        self.set.len()
    }
}

impl PartialEq for Vertex {
    fn eq(&self, other: &Self) -> bool {
        self.set == other.set
    }
}

impl Eq for Vertex {}

/// Serialized vertex: `{"set":[...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub set: IntSet,
}

impl From<&Vertex> for VertexDoc {
    fn from(v: &Vertex) -> Self {
        VertexDoc { set: v.set.clone() }
    }
}

/// Upper bound on the new maximum of any child.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateBound {
    pub vertex_max: u64,
    pub bound: u64,
    /// False when the scan hit the hard cap without settling.
    pub finite: bool,
}

/// The tree for one [`SpecPair`]. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Tree {
    pair: Arc<SpecPair>,
    limits: BoundLimits,
    cap: u64,
}

impl Tree {
    pub fn new(pair: SpecPair, limits: BoundLimits) -> Self {
        let cap = pair.count_cap();
        Tree {
            pair: Arc::new(pair),
            limits,
            cap,
        }
    }

    pub fn pair(&self) -> &SpecPair {
        &self.pair
    }

    pub fn limits(&self) -> BoundLimits {
        self.limits
    }

    pub fn root_set(&self) -> IntSet {
        self.pair.seed.clone().unwrap_or_else(|| IntSet::interval(0, 0))
    }

    fn profile_of(&self, set: &IntSet, window: u64) -> RepProfile {
        build_profile(set, self.pair.h.clone(), window, Some(self.cap))
    }

    /// `{0}`, or the seed in asymptotic mode.
    pub fn root(&self) -> Result<Vertex, TreeError> {
        let set = self.root_set();
        let report = is_finite_r_basis(&set, &self.pair);
        if !report.ok {
            return Err(TreeError::InvalidVertex {
                set,
                reason: report.to_json(),
            });
        }
        let profile = Arc::new(self.profile_of(&set, set.max_element().expect("root is nonempty")));
        Ok(Vertex { set, profile })
    }

    /// Rebuilds and verifies a vertex from its set.
    pub fn vertex(&self, set: IntSet) -> Result<Vertex, TreeError> {
        let Some(top) = set.max_element() else {
            return Err(TreeError::InvalidVertex {
                set,
                reason: "empty set".into(),
            });
        };
        let root = self.root_set();
        let root_max = root.max_element().expect("root is nonempty");
        if top < root_max || set.truncated(root_max) != root {
            return Err(TreeError::InvalidVertex {
                set,
                reason: format!("does not extend the root {root:?}"),
            });
        }
        let profile = self.profile_of(&set, top);
        if let Some(n) = (self.pair.start_index..=top).find(|&n| !profile.count(n).member_of(&self.pair.r.eval(n))) {
            return Err(TreeError::InvalidVertex {
                set,
                reason: format!("count at n = {n} is {}", profile.count(n)),
            });
        }
        Ok(Vertex {
            set,
            profile: Arc::new(profile),
        })
    }

    pub fn is_root(&self, v: &Vertex) -> bool {
        v.set == self.root_set()
    }

    /// `V \ {max(V)}`, with the profile truncated rather than recomputed.
    pub fn parent(&self, v: &Vertex) -> Result<Vertex, TreeError> {
        if v.set.len() <= self.root_set().len() {
            return Err(TreeError::ParentOfRoot);
        }
        let set = v.set.without_max();
        let profile = Arc::new(v.profile.truncate(set.max_element().expect("nonempty")));
        Ok(Vertex { set, profile })
    }

    /// Scans `m = max(V)+1, max(V)+2, …` while
    /// `m-1 ≤ max(H_{m-1}) · max(V)`; beyond the returned bound no child can
    /// exist because `m-1` has no representation at all.
    pub fn candidate_bound(&self, v: &Vertex) -> CandidateBound {
        let a = v.max();
        let h = &self.pair.h;
        let stretch = self.limits.stretch_factor.saturating_mul(a.max(1));
        let mut last_ok = a;
        let mut fails = 0u64;
        for scanned in 0..self.limits.hard_cap {
            let m = a + 1 + scanned;
            let n = m - 1;
            if n < self.pair.start_index || n <= h.max_at(n).saturating_mul(a) {
                last_ok = m;
                fails = 0;
            } else {
                fails += 1;
                if fails >= stretch {
                    return CandidateBound {
                        vertex_max: a,
                        bound: last_ok,
                        finite: true,
                    };
                }
            }
        }
        CandidateBound {
            vertex_max: a,
            bound: last_ok,
            finite: false,
        }
    }

    /// All children in increasing order of their new maximum.
    pub fn children(&self, v: &Vertex) -> Result<Vec<Vertex>, TreeError> {
        let bound = self.candidate_bound(v);
        if !bound.finite {
            return Err(TreeError::BoundCap {
                set: v.set.clone(),
                scanned: self.limits.hard_cap,
            });
        }
        self.scan(v.clone(), Some(bound.bound)).collect()
    }

    /// Lazy child sweep; `limit` caps the candidate maxima.
    pub fn scan(&self, v: Vertex, limit: Option<u64>) -> ChildScan {
        let next = v.max() + 1;
        self.scan_from(v, next, limit)
    }

    /// Sweep resuming at candidate `next`, re-checking the counts already
    /// passed over.
    pub fn scan_from(&self, v: Vertex, next: u64, limit: Option<u64>) -> ChildScan {
        let a = v.max();
        assert!(next > a);
        let mut scan = ChildScan {
            tree: self.clone(),
            scan: None,
            parent: v,
            next: a + 1,
            limit,
            done: false,
        };
        // replay the prefix conditions for candidates before `next`
        while scan.next < next && !scan.done {
            let m = scan.next;
            if scan.prefix_broken(m) {
                scan.done = true;
            } else {
                scan.next += 1;
            }
        }
        scan
    }
}

/// `true` iff one set is the other plus a single new maximum.
pub fn is_adjacent(a: &IntSet, b: &IntSet) -> bool {
    let step = |small: &IntSet, big: &IntSet| big.len() == small.len() + 1 && big.without_max() == *small;
    step(a, b) || step(b, a)
}

/// Iterator over the children of one vertex.
#[derive(Debug)]
pub struct ChildScan {
    tree: Tree,
    parent: Vertex,
    scan: Option<RepProfile>,
    next: u64,
    limit: Option<u64>,
    done: bool,
}

impl ChildScan {
    pub fn parent(&self) -> &Vertex {
        &self.parent
    }

    /// Next candidate maximum to be examined.
    pub fn next_candidate(&self) -> u64 {
        self.next
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    fn ensure_window(&mut self, m: u64) -> &RepProfile {
        let have = self.scan.as_ref().map_or(0, RepProfile::window);
        if self.scan.is_none() || have < m {
            let a = self.parent.max();
            let mut w = (a.saturating_mul(2) + 2).max(a + 16).max(have.saturating_mul(2)).max(m);
            if let Some(limit) = self.limit {
                w = w.min(limit.max(m));
            }
            self.scan = Some(self.tree.profile_of(&self.parent.set, w));
        }
        self.scan.as_ref().expect("just built")
    }

    // some n in (max(V), m) ∩ [n0, ∞) is already out of R_n
    fn prefix_broken(&mut self, m: u64) -> bool {
        let n = m - 1;
        let a = self.parent.max();
        if n <= a || n < self.tree.pair.start_index {
            return false;
        }
        let r = self.tree.pair.r.eval(n);
        !self.ensure_window(m).count(n).member_of(&r)
    }

    pub fn next_child(&mut self) -> Result<Option<Vertex>, TreeError> {
        let a = self.parent.max();
        while !self.done {
            let m = self.next;
            if self.limit.is_some_and(|b| m > b) {
                self.done = true;
                break;
            }
            if m - a > self.tree.limits.hard_cap {
                self.done = true;
                return Err(TreeError::BoundCap {
                    set: self.parent.set.clone(),
                    scanned: m - a - 1,
                });
            }
            if self.prefix_broken(m) {
                self.done = true;
                break;
            }
            self.next = m + 1;
            let n0 = self.tree.pair.start_index;
            let r = self.tree.pair.r.eval(m);
            let scan = self.ensure_window(m);
            if m >= n0 && !scan.peek_extension(m).member_of(&r) {
                continue;
            }
            let profile = scan.extend(m, m);
            return Ok(Some(Vertex {
                set: profile.set().clone(),
                profile: Arc::new(profile),
            }));
        }
        Ok(None)
    }
}

impl Iterator for ChildScan {
    type Item = Result<Vertex, TreeError>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_child().transpose()
    }
}
