//! Search over the tree of finite R-bases.
//!
//! A search either reaches a vertex with `max(V) ≥ N` (a finite R-basis of
//! that size), enumerates the whole tree without doing so (no infinite
//! R-basis exists when `max(H_n)/n → 0`), or stops at its expansion budget
//! with a resumable checkpoint.
//!
//! Parallel mode never changes what is computed. Worker threads expand the
//! vertices the sequential driver is about to reach and park their children
//! in a memo; the driver then replays exactly the sequential order, so
//! outcomes are byte-identical for every width.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::basis::necessary_conditions;
use crate::error::{SearchError, SpecError, TreeError};
use crate::repfn::{build_profile, IntSet};
use crate::seqspec::SpecPair;
use crate::tree::{BoundLimits, ChildScan, Tree, Vertex};

pub const CHECKPOINT_VERSION: u32 = 1;

// speculative results kept at most
const MEMO_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Depth first, least new maximum first; children are drawn lazily so
    /// no branching bound is needed until a vertex is exhausted.
    #[default]
    DfsSmallestFirst,
    DfsLargestFirst,
    Bfs,
    /// Depth-limited smallest-first passes with limits 2, 3, ….
    IterativeDeepening,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::DfsSmallestFirst,
        Strategy::DfsLargestFirst,
        Strategy::Bfs,
        Strategy::IterativeDeepening,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::DfsSmallestFirst => "dfs-smallest-first",
            Strategy::DfsLargestFirst => "dfs-largest-first",
            Strategy::Bfs => "bfs",
            Strategy::IterativeDeepening => "iterative-deepening",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown strategy {s:?}; expected one of dfs-smallest-first, dfs-largest-first, bfs, iterative-deepening"))
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub pair: SpecPair,
    /// Stop at the first vertex with `max(V) ≥ target`.
    pub target: u64,
    pub strategy: Strategy,
    /// Maximum number of expansions (children-generation calls), counted
    /// across resumes.
    pub budget: u64,
    /// Pause every this many expansions in [`Searcher::run_to_end`].
    pub checkpoint_every: Option<u64>,
    /// Worker threads; 0 runs sequentially.
    pub parallel: usize,
    pub limits: BoundLimits,
    /// Keep every visited vertex in the outcome.
    pub record_vertices: bool,
}

impl SearchConfig {
    pub fn new(pair: SpecPair, target: u64) -> Self {
        SearchConfig {
            pair,
            target,
            strategy: Strategy::default(),
            budget: 1_000_000,
            checkpoint_every: None,
            parallel: 0,
            limits: BoundLimits::default(),
            record_vertices: false,
        }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_parallel(mut self, width: usize) -> Self {
        self.parallel = width;
        self
    }

    pub fn recording(mut self) -> Self {
        self.record_vertices = true;
        self
    }

    /// Hash of everything that determines the search's trajectory. Budget,
    /// pause interval and parallel width are excluded: they only decide
    /// where a run stops or how fast it gets there.
    pub fn digest(&self) -> String {
        #[derive(Serialize)]
        struct Key<'a> {
            pair: &'a SpecPair,
            target: u64,
            strategy: Strategy,
            limits: BoundLimits,
            record_vertices: bool,
        }
        let key = Key {
            pair: &self.pair,
            target: self.target,
            strategy: self.strategy,
            limits: self.limits,
            record_vertices: self.record_vertices,
        };
        let bytes = serde_json::to_vec(&key).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchStats {
    pub expanded: u64,
    /// Distinct vertices generated, root included.
    pub vertices: u64,
    /// Largest cardinality seen.
    pub max_depth: usize,
    /// Largest maximum element seen.
    pub deepest_max: u64,
    /// First vertex reaching `max_depth`.
    pub deepest: IntSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutcomeKind {
    Found,
    Exhausted,
    Budget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Full,
    /// Exhaustion refers only to descendants of the seed.
    Asymptotic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub kind: OutcomeKind,
    pub mode: Mode,
    pub witness: Option<IntSet>,
    pub stats: SearchStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<IntSet>>,
    pub checkpoint_path: Option<String>,
    #[serde(skip)]
    pub checkpoint: Option<Checkpoint>,
}

impl SearchOutcome {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("outcome serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontierEntry {
    pub set: IntSet,
    /// Next candidate maximum of a partially scanned vertex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub next: Option<u64>,
}

/// Resumable search state. Standalone JSON; every frontier vertex is
/// re-verified on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub version: u32,
    pub digest: String,
    pub strategy: Strategy,
    /// Bottom of the stack (or front of the queue) first.
    pub frontier: Vec<FrontierEntry>,
    #[serde(default)]
    pub depth_limit: Option<usize>,
    #[serde(default)]
    pub cutoff: bool,
    pub stats: SearchStats,
    #[serde(default)]
    pub witness: Option<IntSet>,
    #[serde(default)]
    pub vertices: Option<Vec<IntSet>>,
}

impl Checkpoint {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("checkpoint serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SearchError> {
        let cp: Checkpoint = serde_json::from_str(text).map_err(|e| SearchError::BadCheckpoint(e.to_string()))?;
        if cp.version != CHECKPOINT_VERSION {
            return Err(SearchError::BadCheckpoint(format!(
                "unsupported version {}",
                cp.version
            )));
        }
        Ok(cp)
    }
}

enum CursorState {
    Pending,
    Scanning(Box<ChildScan>),
    Listed(VecDeque<Vertex>),
}

struct Cursor {
    vertex: Vertex,
    // next candidate maximum, as the lazy scan would report it
    next: u64,
    state: CursorState,
}

impl Cursor {
    fn pending(vertex: Vertex) -> Self {
        let next = vertex.max() + 1;
        Cursor {
            vertex,
            next,
            state: CursorState::Pending,
        }
    }

    fn next_child(&mut self) -> Result<Option<Vertex>, TreeError> {
        let child = match &mut self.state {
            CursorState::Pending => unreachable!("cursor advanced before start"),
            CursorState::Scanning(scan) => scan.next_child()?,
            CursorState::Listed(list) => list.pop_front(),
        };
        if let Some(c) = &child {
            self.next = c.max() + 1;
        }
        Ok(child)
    }

    fn entry(&self) -> FrontierEntry {
        let next = match self.state {
            CursorState::Pending => None,
            _ => Some(self.next),
        };
        FrontierEntry {
            set: self.vertex.set().clone(),
            next,
        }
    }
}

enum Frontier {
    Lazy(Vec<Cursor>),
    Stack(Vec<Vertex>),
    Queue(VecDeque<Vertex>),
}

type Expansion = Result<Vec<Vertex>, TreeError>;
type Memo = HashMap<IntSet, Expansion>;

/// Step-wise search driver.
pub struct Searcher {
    config: SearchConfig,
    digest: String,
    tree: Tree,
    frontier: Frontier,
    depth_limit: Option<usize>,
    cutoff: bool,
    stats: SearchStats,
    recorded: Option<BTreeSet<IntSet>>,
    root: Vertex,
    finished: Option<SearchOutcome>,
    pool: Option<rayon::ThreadPool>,
    memo: Memo,
}

fn prepare(config: &SearchConfig) -> Result<(Tree, Vertex), SearchError> {
    config.pair.validate()?;
    if config.pair.is_full() {
        let report = necessary_conditions(&config.pair);
        if let Some(v) = report.first() {
            return Err(SpecError::SmallIndex {
                n: v.n,
                card: config.pair.h.eval(v.n).len(),
            }
            .into());
        }
    }
    let tree = Tree::new(config.pair.clone(), config.limits);
    let root = tree.root()?;
    Ok((tree, root))
}

fn thread_pool(width: usize) -> Option<rayon::ThreadPool> {
    (width > 0).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(width)
            .build()
            .expect("thread pool")
    })
}

impl Searcher {
    pub fn new(config: SearchConfig) -> Result<Self, SearchError> {
        let (tree, root) = prepare(&config)?;
        let frontier = match config.strategy {
            Strategy::DfsSmallestFirst => Frontier::Lazy(vec![Cursor::pending(root.clone())]),
            Strategy::DfsLargestFirst | Strategy::IterativeDeepening => Frontier::Stack(vec![root.clone()]),
            Strategy::Bfs => Frontier::Queue(VecDeque::from([root.clone()])),
        };
        let depth_limit = (config.strategy == Strategy::IterativeDeepening).then_some(root.depth() + 1);
        let mut searcher = Searcher {
            digest: config.digest(),
            recorded: config.record_vertices.then(BTreeSet::new),
            pool: thread_pool(config.parallel),
            config,
            tree,
            frontier,
            depth_limit,
            cutoff: false,
            stats: SearchStats::default(),
            root: root.clone(),
            finished: None,
            memo: Memo::new(),
        };
        searcher.observe(&root, true);
        Ok(searcher)
    }

    /// Rebuilds a searcher from a checkpoint taken under the same config.
    pub fn resume(checkpoint: Checkpoint, config: SearchConfig) -> Result<Self, SearchError> {
        let digest = config.digest();
        if checkpoint.digest != digest {
            return Err(SearchError::DigestMismatch {
                expected: digest,
                found: checkpoint.digest,
            });
        }
        if checkpoint.strategy != config.strategy {
            return Err(SearchError::BadCheckpoint("strategy differs from configuration".into()));
        }
        let (tree, root) = prepare(&config)?;
        let load = |e: &FrontierEntry| -> Result<Vertex, SearchError> {
            tree.vertex(e.set.clone())
                .map_err(|err| SearchError::BadCheckpoint(err.to_string()))
        };
        let frontier = match config.strategy {
            Strategy::DfsSmallestFirst => {
                let mut cursors = Vec::with_capacity(checkpoint.frontier.len());
                for e in &checkpoint.frontier {
                    let vertex = load(e)?;
                    let cursor = match e.next {
                        None => Cursor::pending(vertex),
                        Some(next) if next > vertex.max() => Cursor {
                            state: CursorState::Scanning(Box::new(tree.scan_from(vertex.clone(), next, None))),
                            vertex,
                            next,
                        },
                        Some(next) => {
                            return Err(SearchError::BadCheckpoint(format!(
                                "candidate {next} below vertex maximum"
                            )))
                        }
                    };
                    cursors.push(cursor);
                }
                Frontier::Lazy(cursors)
            }
            _ => {
                if checkpoint.frontier.iter().any(|e| e.next.is_some()) {
                    return Err(SearchError::BadCheckpoint(
                        "partial scans only occur in dfs-smallest-first".into(),
                    ));
                }
                let vertices = checkpoint.frontier.iter().map(load).collect::<Result<Vec<_>, _>>()?;
                match config.strategy {
                    Strategy::Bfs => Frontier::Queue(vertices.into()),
                    _ => Frontier::Stack(vertices),
                }
            }
        };
        let depth_limit = match (config.strategy, checkpoint.depth_limit) {
            (Strategy::IterativeDeepening, Some(d)) if d > root.depth() => Some(d),
            (Strategy::IterativeDeepening, _) => {
                return Err(SearchError::BadCheckpoint(
                    "iterative deepening needs a depth limit".into(),
                ))
            }
            (_, None) => None,
            (_, Some(_)) => return Err(SearchError::BadCheckpoint("unexpected depth limit".into())),
        };
        if checkpoint.vertices.is_some() != config.record_vertices {
            return Err(SearchError::BadCheckpoint(
                "vertex recording differs from configuration".into(),
            ));
        }
        let mut searcher = Searcher {
            digest,
            recorded: checkpoint.vertices.map(|v| v.into_iter().collect()),
            pool: thread_pool(config.parallel),
            config,
            tree,
            frontier,
            depth_limit,
            cutoff: checkpoint.cutoff,
            stats: checkpoint.stats,
            root,
            finished: None,
            memo: Memo::new(),
        };
        if let Some(w) = checkpoint.witness {
            searcher.finish_found(w);
        }
        Ok(searcher)
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    pub fn checkpoint(&self) -> Checkpoint {
        let frontier = match &self.frontier {
            Frontier::Lazy(cursors) => cursors.iter().map(Cursor::entry).collect(),
            Frontier::Stack(vs) => vs
                .iter()
                .map(|v| FrontierEntry {
                    set: v.set().clone(),
                    next: None,
                })
                .collect(),
            Frontier::Queue(vs) => vs
                .iter()
                .map(|v| FrontierEntry {
                    set: v.set().clone(),
                    next: None,
                })
                .collect(),
        };
        Checkpoint {
            version: CHECKPOINT_VERSION,
            digest: self.digest.clone(),
            strategy: self.config.strategy,
            frontier,
            depth_limit: self.depth_limit,
            cutoff: self.cutoff,
            stats: self.stats.clone(),
            witness: self.finished.as_ref().and_then(|o| o.witness.clone()),
            vertices: self.recorded.as_ref().map(|r| r.iter().cloned().collect()),
        }
    }

    fn mode(&self) -> Mode {
        if self.config.pair.is_full() {
            Mode::Full
        } else {
            Mode::Asymptotic
        }
    }

    fn outcome(&self, kind: OutcomeKind, witness: Option<IntSet>) -> SearchOutcome {
        SearchOutcome {
            kind,
            mode: self.mode(),
            witness,
            stats: self.stats.clone(),
            vertices: self.recorded.as_ref().map(|r| r.iter().cloned().collect()),
            checkpoint_path: None,
            checkpoint: None,
        }
    }

    fn finish_found(&mut self, witness: IntSet) {
        self.finished = Some(self.outcome(OutcomeKind::Found, Some(witness)));
    }

    /// Records a generated vertex; `true` when it meets the target.
    fn observe(&mut self, v: &Vertex, fresh: bool) -> bool {
        if fresh {
            let s = &mut self.stats;
            s.vertices += 1;
            s.deepest_max = s.deepest_max.max(v.max());
            if v.depth() > s.max_depth {
                s.max_depth = v.depth();
                s.deepest = v.set().clone();
            }
            if let Some(r) = &mut self.recorded {
                r.insert(v.set().clone());
            }
        }
        v.max() >= self.config.target
    }

    fn found(&mut self, v: &Vertex) -> SearchOutcome {
        let witness = v.set().clone();
        assert!(
            verify_from_scratch(&witness, &self.config.pair),
            "witness {witness:?} failed re-verification"
        );
        self.finish_found(witness);
        self.finished.clone().expect("just finished")
    }

    fn stop(&mut self, kind: OutcomeKind) -> SearchOutcome {
        let mut outcome = self.outcome(kind, None);
        if kind == OutcomeKind::Budget {
            outcome.checkpoint = Some(self.checkpoint());
        }
        self.finished = Some(outcome.clone());
        outcome
    }

    fn take_children(&mut self, v: &Vertex) -> Expansion {
        match self.memo.remove(v.set()) {
            Some(r) => r,
            None => self.tree.children(v),
        }
    }

    /// Runs until an outcome is reached, or returns `None` after
    /// `pause_after` expansions with the state intact.
    pub fn run(&mut self, pause_after: Option<u64>) -> Result<Option<SearchOutcome>, SearchError> {
        if let Some(o) = &self.finished {
            return Ok(Some(o.clone()));
        }
        if self.root.max() >= self.config.target {
            let root = self.root.clone();
            return Ok(Some(self.found(&root)));
        }
        let mut expanded_here = 0u64;
        loop {
            // phase 1: pick the next vertex needing expansion, or finish
            let needs_expansion = match &mut self.frontier {
                Frontier::Lazy(cursors) => match cursors.last() {
                    None => return Ok(Some(self.stop(OutcomeKind::Exhausted))),
                    Some(c) => matches!(c.state, CursorState::Pending),
                },
                Frontier::Stack(stack) => match stack.last() {
                    Some(_) => true,
                    None if self.cutoff => {
                        self.cutoff = false;
                        self.depth_limit = self.depth_limit.map(|d| d + 1);
                        stack.push(self.root.clone());
                        continue;
                    }
                    None => return Ok(Some(self.stop(OutcomeKind::Exhausted))),
                },
                Frontier::Queue(queue) => match queue.front() {
                    Some(_) => true,
                    None => return Ok(Some(self.stop(OutcomeKind::Exhausted))),
                },
            };
            if needs_expansion {
                if self.stats.expanded >= self.config.budget {
                    return Ok(Some(self.stop(OutcomeKind::Budget)));
                }
                if pause_after.is_some_and(|p| expanded_here >= p) {
                    return Ok(None);
                }
                self.prefetch();
                self.stats.expanded += 1;
                expanded_here += 1;
            }
            // phase 2: advance
            if let Some(outcome) = self.advance(needs_expansion)? {
                return Ok(Some(outcome));
            }
        }
    }

    fn advance(&mut self, expanding: bool) -> Result<Option<SearchOutcome>, SearchError> {
        match &mut self.frontier {
            Frontier::Lazy(cursors) => {
                let top = cursors.last_mut().expect("nonempty");
                if expanding {
                    let v = top.vertex.clone();
                    top.state = match self.memo.remove(v.set()) {
                        Some(Ok(list)) => CursorState::Listed(list.into()),
                        Some(Err(e)) => return Err(e.into()),
                        None => CursorState::Scanning(Box::new(self.tree.scan(v, None))),
                    };
                }
                match top.next_child()? {
                    Some(child) => {
                        if self.observe(&child, true) {
                            return Ok(Some(self.found(&child)));
                        }
                        if let Frontier::Lazy(cursors) = &mut self.frontier {
                            cursors.push(Cursor::pending(child));
                        }
                    }
                    None => {
                        cursors.pop();
                    }
                }
            }
            Frontier::Stack(_) | Frontier::Queue(_) => {
                let v = match &mut self.frontier {
                    Frontier::Stack(s) => s.pop(),
                    Frontier::Queue(q) => q.pop_front(),
                    Frontier::Lazy(_) => unreachable!(),
                }
                .expect("nonempty");
                let children = self.take_children(&v)?;
                let limit = self.depth_limit;
                let mut keep = Vec::with_capacity(children.len());
                for c in children {
                    // under iterative deepening only the newest level is fresh
                    let fresh = limit.is_none_or(|d| c.depth() == d);
                    if self.observe(&c, fresh) {
                        return Ok(Some(self.found(&c)));
                    }
                    if limit.is_some_and(|d| c.depth() >= d) {
                        self.cutoff = true;
                    } else {
                        keep.push(c);
                    }
                }
                match &mut self.frontier {
                    Frontier::Stack(s) if self.config.strategy == Strategy::DfsLargestFirst => s.extend(keep),
                    Frontier::Stack(s) => s.extend(keep.into_iter().rev()),
                    Frontier::Queue(q) => q.extend(keep),
                    Frontier::Lazy(_) => unreachable!(),
                }
            }
        }
        Ok(None)
    }

    // Expand the vertices the driver will reach next on the worker pool.
    fn prefetch(&mut self) {
        let Some(pool) = &self.pool else { return };
        if self.memo.len() >= MEMO_LIMIT {
            return;
        }
        let width = pool.current_num_threads();
        let want = width * 2;
        let memo = &self.memo;
        let mut batch: Vec<Vertex> = Vec::with_capacity(want);
        let mut add = |v: &Vertex| {
            if batch.len() < want && !memo.contains_key(v.set()) && !batch.iter().any(|b| b.set() == v.set()) {
                batch.push(v.clone());
            }
        };
        let lazy = matches!(self.frontier, Frontier::Lazy(_));
        match &self.frontier {
            Frontier::Lazy(cursors) => {
                for c in cursors.iter().rev() {
                    match &c.state {
                        CursorState::Pending => add(&c.vertex),
                        CursorState::Listed(list) => list.iter().for_each(&mut add),
                        CursorState::Scanning(_) => {}
                    }
                }
            }
            Frontier::Stack(s) => s.iter().rev().for_each(&mut add),
            Frontier::Queue(q) => q.iter().for_each(&mut add),
        }
        if batch.len() < 2 && !batch.first().is_some_and(|v| !memo.contains_key(v.set())) {
            return;
        }
        let tree = &self.tree;
        let results: Vec<(IntSet, Option<Expansion>)> = pool.install(|| {
            batch
                .par_iter()
                .map(|v| {
                    // the lazy driver never needs a bound; skip vertices
                    // whose eager expansion would fail where a lazy one may not
                    let r = if lazy && !tree.candidate_bound(v).finite {
                        None
                    } else {
                        Some(tree.children(v))
                    };
                    (v.set().clone(), r)
                })
                .collect()
        });
        for (set, r) in results {
            if let Some(r) = r {
                self.memo.insert(set, r);
            }
        }
    }

    /// Runs to an outcome, calling `on_pause` every `checkpoint_every`
    /// expansions.
    pub fn run_to_end(&mut self, mut on_pause: impl FnMut(&Searcher)) -> Result<SearchOutcome, SearchError> {
        let every = self.config.checkpoint_every.filter(|&k| k > 0);
        loop {
            if let Some(outcome) = self.run(every)? {
                return Ok(outcome);
            }
            on_pause(self);
        }
    }
}

/// Recomputes R-membership with exact arithmetic, independent of any
/// cached profile.
pub fn verify_from_scratch(set: &IntSet, pair: &SpecPair) -> bool {
    let Some(top) = set.max_element() else { return false };
    let profile = build_profile(set, pair.h.clone(), top, None);
    (pair.start_index..=top).all(|n| profile.count(n).member_of(&pair.r.eval(n)))
}

pub fn search(config: SearchConfig) -> Result<SearchOutcome, SearchError> {
    Searcher::new(config)?.run_to_end(|_| {})
}

pub fn resume(checkpoint: Checkpoint, config: SearchConfig) -> Result<SearchOutcome, SearchError> {
    Searcher::resume(checkpoint, config)?.run_to_end(|_| {})
}

/// Every vertex with maximum at most `max_element`, in lexicographic order.
///
/// An invalid root yields an empty list.
pub fn enumerate_all(pair: &SpecPair, max_element: u64) -> Result<Vec<IntSet>, SearchError> {
    enumerate_with(pair, max_element, BoundLimits::default(), |_| {})
}

/// As [`enumerate_all`], streaming each vertex to `emit`.
pub fn enumerate_with(
    pair: &SpecPair,
    max_element: u64,
    limits: BoundLimits,
    mut emit: impl FnMut(&IntSet),
) -> Result<Vec<IntSet>, SearchError> {
    pair.validate().or_else(|e| match e {
        // enumeration reports whatever the definitions allow
        SpecError::SmallIndex { .. } => Ok(()),
        e => Err(e),
    })?;
    let tree = Tree::new(pair.clone(), limits);
    let root = match tree.root() {
        Ok(r) if r.max() <= max_element => r,
        Ok(_) | Err(TreeError::InvalidVertex { .. }) => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let mut out = vec![root.set().clone()];
    emit(root.set());
    let mut stack = vec![tree.scan(root, Some(max_element))];
    while let Some(top) = stack.last_mut() {
        match top.next_child()? {
            Some(child) => {
                emit(child.set());
                out.push(child.set().clone());
                stack.push(tree.scan(child, Some(max_element)));
            }
            None => {
                stack.pop();
            }
        }
    }
    Ok(out)
}
