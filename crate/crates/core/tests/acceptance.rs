//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rbasis::basis::{check_window, interval_construction, is_finite_r_basis, reach_necessity, ViolationKind};
use rbasis::oracle::{all_r_bases_naive, is_r_basis_naive, rep_ordered_naive, rep_unordered_naive};
use rbasis::search::{verify_from_scratch, Mode, OutcomeKind};
use rbasis::tree::{is_adjacent, BoundLimits};
use rbasis::{
    build_profile, enumerate_all, rep_ordered, rep_unordered, Checkpoint, IntSet, Preset, SearchConfig, SearchOutcome,
    Searcher, SeqSpec, SpecPair, Strategy, Tree, Vertex,
};

const LIMIT_ORACLE: Duration = Duration::from_secs(30);
const LIMIT_WINDOW: Duration = Duration::from_secs(1);
const LIMIT_CONSTRUCTION: Duration = Duration::from_secs(1);
const LIMIT_EXHAUSTION: Duration = Duration::from_secs(1);
const LIMIT_WITNESS: Duration = Duration::from_secs(10);

const BRIDGE_INSTANCES: usize = 1000;
const BRIDGE_SEED: u64 = 0x5eed_0002;
const BOUND_SLACK: u64 = 50;
const PARALLEL_WIDTH: usize = 4;
const NON_CLAIM_BUDGET: u64 = 200;

type Verdict = Result<String, String>;

fn set(v: &[u64]) -> IntSet {
    IntSet::new(v.to_vec()).unwrap()
}

fn pair(h: &[u64], r: SeqSpec) -> SpecPair {
    SpecPair::new(SeqSpec::constant(h.to_vec()).unwrap(), r)
}

fn sidon() -> SpecPair {
    pair(&[2], SeqSpec::constant(vec![1]).unwrap())
}

fn bounded(c: u64) -> SpecPair {
    Preset::Dowd { h: 2, c }.expand().unwrap()
}

fn singleton_index_pair() -> SpecPair {
    Preset::PaperExample.expand().unwrap()
}

fn timed(label: &str, limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took < limit {
        Ok(took)
    } else {
        Err(format!("{label} took {took:?}, limit {limit:?}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let mut checked = 0u64;
    for k in 0..=5 {
        for combo in (0..=12u64).combinations(k) {
            let a = IntSet::new(combo).unwrap();
            for h in 0..=4 {
                for n in 0..=24 {
                    let fast = rep_unordered(&a, n, h);
                    let naive = rep_unordered_naive(&a, n, h).map_err(|e| e.to_string())?;
                    ensure(fast == naive, || {
                        format!("unordered {a:?} n={n} h={h}: {fast} vs {naive}")
                    })?;
                    let fast = rep_ordered(&a, n, h);
                    let naive = rep_ordered_naive(&a, n, h).map_err(|e| e.to_string())?;
                    ensure(fast == naive, || {
                        format!("ordered {a:?} n={n} h={h}: {fast} vs {naive}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    let took = timed("oracle sweep", LIMIT_ORACLE, start)?;
    Ok(format!("{checked} (A, n, h) triples agree, {took:.2?}"))
}

fn multinomial(tuple: &[u64]) -> BigUint {
    let fact = |k: usize| (1..=k as u64).fold(BigUint::one(), |acc, i| acc * i);
    let denom = tuple
        .iter()
        .dedup_with_count()
        .fold(BigUint::one(), |acc, (c, _)| acc * fact(c));
    fact(tuple.len()) / denom
}

fn c2_ordered_unordered_bridge() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(BRIDGE_SEED);
    for _ in 0..BRIDGE_INSTANCES {
        let len = rng.gen_range(1..=6);
        let a = IntSet::from_unsorted((0..len).map(|_| rng.gen_range(0..=15u64))).unwrap();
        let h = rng.gen_range(0..=5u64);
        let n = rng.gen_range(0..=40u64);
        let weighted = if h == 0 {
            if n == 0 {
                BigUint::one()
            } else {
                BigUint::zero()
            }
        } else {
            a.elements()
                .iter()
                .copied()
                .combinations_with_replacement(h as usize)
                .filter(|t| t.iter().sum::<u64>() == n)
                .map(|t| multinomial(&t))
                .sum()
        };
        let ordered = rep_ordered(&a, n, h);
        ensure(ordered == weighted, || {
            format!("{a:?} n={n} h={h}: ordered {ordered} vs weighted {weighted}")
        })?;
    }
    Ok(format!("{BRIDGE_INSTANCES} seeded instances agree"))
}

fn small_pairs() -> Vec<(String, SpecPair)> {
    let mut out: Vec<(String, SpecPair)> = (1..=4).map(|c| (format!("dowd(2,{c})"), bounded(c))).collect();
    for c in [1, 2, 3] {
        out.push((format!("dowd(3,{c})"), Preset::Dowd { h: 3, c }.expand().unwrap()));
    }
    out.push((
        "H={2,3} R=[2,4]".into(),
        pair(&[2, 3], SeqSpec::interval(2, 4).unwrap()),
    ));
    out.push((
        "H=[1,2] R=[2,3]".into(),
        SpecPair::new(SeqSpec::interval(1, 2).unwrap(), SeqSpec::interval(2, 3).unwrap()),
    ));
    out.push((
        "exact-f(2,1,2=2)".into(),
        Preset::parse("exact-f(2,1,2=2)").unwrap().expand().unwrap(),
    ));
    out
}

fn c3_structure_of_finite_bases() -> Verdict {
    const M: u64 = 12;
    let mut total = 0;
    for (name, p) in small_pairs() {
        let tree = Tree::new(p.clone(), BoundLimits::default());
        let bases = enumerate_all(&p, M).map_err(|e| e.to_string())?;
        let naive = all_r_bases_naive(&p, M).map_err(|e| e.to_string())?;
        ensure(bases == naive, || {
            format!("{name}: enumeration differs from subset sweep")
        })?;
        for a in &bases {
            let top = a.max_element().unwrap();
            if top >= 1 {
                ensure(a.contains(0) && a.contains(1), || format!("{name}: {a:?} lacks 0 or 1"))?;
                let profile = build_profile(a, p.h.clone(), 1, None);
                for n in 0..=1 {
                    let card = p.h.eval(n).len();
                    ensure(*profile.count(n) == card, || {
                        format!("{name}: {a:?} r({n}) != card(H_{n})")
                    })?;
                }
            }
            for &x in a.elements() {
                let t = a.truncated(x);
                ensure(is_finite_r_basis(&t, &p).ok, || {
                    format!("{name}: truncation {t:?} of {a:?} invalid")
                })?;
            }
            let v = tree.vertex(a.clone()).map_err(|e| e.to_string())?;
            if !tree.is_root(&v) {
                let parent = tree.parent(&v).map_err(|e| e.to_string())?;
                ensure(is_finite_r_basis(parent.set(), &p).ok, || {
                    format!("{name}: parent of {a:?} invalid")
                })?;
            }
            total += 1;
        }
    }
    Ok(format!("{total} finite bases over 10 pairs, zero violations"))
}

fn c4_example_window() -> Verdict {
    let start = Instant::now();
    let p = singleton_index_pair();
    let a = set(&[0, 1]);
    let report = check_window(&a, &p, 500);
    ensure(report.ok, || format!("window check failed: {}", report.to_json()))?;
    let profile = build_profile(&a, p.h.clone(), 500, None);
    ensure(profile.counts().iter().all(|c| *c == 1), || {
        "some r != 1 on [0,500]".into()
    })?;
    let took = timed("window check", LIMIT_WINDOW, start)?;
    Ok(format!("r = 1 on [0,500], {took:.2?}"))
}

fn c5_interval_construction() -> Verdict {
    let start = Instant::now();
    let m = 3;
    let built = interval_construction(m, &SeqSpec::SingletonIndex, 500);
    ensure(built.report.ok, || {
        format!("construction failed: {}", built.report.to_json())
    })?;
    ensure(built.witnesses.len() == 501, || {
        format!("{} witnesses", built.witnesses.len())
    })?;
    for w in &built.witnesses {
        let parts = w.summands(m);
        ensure(
            parts.len() as u64 == w.parts
                && parts.iter().sum::<u64>() == w.n
                && parts.iter().all(|&x| x <= m)
                && SeqSpec::SingletonIndex.eval(w.n).contains(w.parts),
            || format!("bad witness at n={}", w.n),
        )?;
    }
    let necessity = reach_necessity(&set(&[0, 1]), &SeqSpec::constant(vec![2]).unwrap(), 10);
    let first = necessity.first().ok_or("necessity check accepted {0,1} with H={2}")?;
    ensure(first.n == 3 && first.kind == ViolationKind::ReachBound, || {
        format!("first violation {first:?}")
    })?;
    let took = timed("construction", LIMIT_CONSTRUCTION, start)?;
    Ok(format!("501 division witnesses, necessity rejects at n=3, {took:.2?}"))
}

fn c6_exhaustion() -> Result<(String, Vec<IntSet>), String> {
    let start = Instant::now();
    let out = rbasis::search(SearchConfig::new(sidon(), 10).recording()).map_err(|e| e.to_string())?;
    let took = timed("exhaustive search", LIMIT_EXHAUSTION, start)?;
    ensure(out.kind == OutcomeKind::Exhausted && out.mode == Mode::Full, || {
        format!("outcome {}", out.to_json())
    })?;
    let vertices = out.vertices.clone().unwrap();
    let expected = vec![set(&[0]), set(&[0, 1]), set(&[0, 1, 3]), set(&[0, 1, 3, 5])];
    ensure(vertices == expected, || format!("vertex set {vertices:?}"))?;
    ensure(out.stats.deepest_max == 5, || {
        format!("deepest max {}", out.stats.deepest_max)
    })?;
    let naive = all_r_bases_naive(&sidon(), 8).map_err(|e| e.to_string())?;
    ensure(naive == expected, || format!("oracle sweep {naive:?}"))?;
    Ok((
        format!("exhausted with 4 vertices, deepest max 5, oracle agrees, {took:.2?}"),
        vertices,
    ))
}

fn c7_witness() -> Result<(String, Vec<IntSet>), String> {
    for k in 1..=20u64 {
        let a = IntSet::interval(0, k);
        for n in 0..=k {
            let naive = rep_unordered_naive(&a, n, 2).map_err(|e| e.to_string())?;
            ensure(naive == BigUint::from(n / 2 + 1), || {
                format!("closed form fails at K={k} n={n}")
            })?;
        }
    }
    let p = bounded(100);
    let start = Instant::now();
    let config = SearchConfig::new(p.clone(), 100)
        .with_strategy(Strategy::DfsSmallestFirst)
        .recording();
    let out = rbasis::search(config).map_err(|e| e.to_string())?;
    let took = timed("witness search", LIMIT_WITNESS, start)?;
    ensure(out.kind == OutcomeKind::Found, || {
        format!("outcome kind {:?}", out.kind)
    })?;
    let w = out.witness.clone().unwrap();
    let top = w.max_element().unwrap();
    ensure(top >= 100, || format!("witness max {top}"))?;
    ensure(verify_from_scratch(&w, &p), || {
        "witness fails exact re-verification".into()
    })?;
    ensure(is_r_basis_naive(&w, &p).map_err(|e| e.to_string())?, || {
        "witness fails naive re-verification".into()
    })?;
    Ok((
        format!("witness max {top}, re-verified exactly and naively, {took:.2?}"),
        out.vertices.unwrap(),
    ))
}

fn profile_json(v: &Vertex, upto: u64) -> String {
    serde_json::to_string(&v.profile().counts()[..=upto as usize]).unwrap()
}

fn c8_tree_properties(instances: &[(SpecPair, Vec<IntSet>)]) -> Verdict {
    let mut checked = 0;
    for (p, sets) in instances {
        let tree = Tree::new(p.clone(), BoundLimits::default());
        for s in sets {
            let v = tree.vertex(s.clone()).map_err(|e| e.to_string())?;
            let children = tree.children(&v).map_err(|e| e.to_string())?;
            for c in &children {
                let back = tree.parent(c).map_err(|e| e.to_string())?;
                ensure(back == v && is_adjacent(v.set(), c.set()), || {
                    format!("roundtrip fails for {:?}", c.set())
                })?;
                ensure(profile_json(c, v.max()) == profile_json(&v, v.max()), || {
                    format!("locality fails for {:?}", c.set())
                })?;
            }
            let bound = tree.candidate_bound(&v);
            ensure(bound.finite, || format!("bound scan capped at {s:?}"))?;
            for m in bound.bound + 1..=bound.bound + BOUND_SLACK {
                let cand = s.with_max(m);
                ensure(!is_finite_r_basis(&cand, p).ok, || {
                    format!("{cand:?} valid beyond bound {}", bound.bound)
                })?;
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} expanded vertices: roundtrip, bound soundness (+{BOUND_SLACK}), locality hold"
    ))
}

fn run_interrupted(config: &SearchConfig, pause: u64) -> Result<SearchOutcome, String> {
    let mut searcher = Searcher::new(config.clone()).map_err(|e| e.to_string())?;
    loop {
        if let Some(out) = searcher.run(Some(pause)).map_err(|e| e.to_string())? {
            return Ok(out);
        }
        let text = searcher.checkpoint().to_json();
        let cp = Checkpoint::from_json(&text).map_err(|e| e.to_string())?;
        searcher = Searcher::resume(cp, config.clone()).map_err(|e| e.to_string())?;
    }
}

fn c9_determinism() -> Verdict {
    let mut runs = 0;
    for strategy in Strategy::ALL {
        let base = SearchConfig::new(sidon(), 10).with_strategy(strategy).recording();
        let reference = rbasis::search(base.clone()).map_err(|e| e.to_string())?.to_json();
        for width in [0, PARALLEL_WIDTH] {
            let config = base.clone().with_parallel(width);
            let straight = rbasis::search(config.clone()).map_err(|e| e.to_string())?.to_json();
            ensure(straight == reference, || {
                format!("{strategy} width {width}: uninterrupted run differs")
            })?;
            for pause in 1..=3 {
                let out = run_interrupted(&config, pause)?.to_json();
                ensure(out == reference, || {
                    format!("{strategy} width {width} pause {pause}: {out}")
                })?;
                runs += 1;
            }
            let stopped = rbasis::search(config.clone().with_budget(2)).map_err(|e| e.to_string())?;
            ensure(stopped.kind == OutcomeKind::Budget, || {
                format!("{strategy}: budget 2 did not stop")
            })?;
            let cp = Checkpoint::from_json(&stopped.checkpoint.unwrap().to_json()).map_err(|e| e.to_string())?;
            let out = rbasis::resume(cp, config.clone()).map_err(|e| e.to_string())?.to_json();
            ensure(out == reference, || {
                format!("{strategy} width {width}: budget resume differs")
            })?;
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} interrupted runs byte-identical, widths 0 and {PARALLEL_WIDTH}"
    ))
}

fn c10_non_claim() -> Verdict {
    let config = SearchConfig::new(bounded(2), u64::MAX).with_budget(NON_CLAIM_BUDGET);
    let out = rbasis::search(config.clone()).map_err(|e| e.to_string())?;
    ensure(out.kind == OutcomeKind::Budget && out.witness.is_none(), || {
        format!("outcome {}", out.to_json())
    })?;
    let cp = out.checkpoint.ok_or("no checkpoint")?;
    ensure(!cp.frontier.is_empty(), || "empty frontier".into())?;
    let cp = Checkpoint::from_json(&cp.to_json()).map_err(|e| e.to_string())?;
    let more = rbasis::resume(cp, config.with_budget(2 * NON_CLAIM_BUDGET)).map_err(|e| e.to_string())?;
    ensure(more.kind == OutcomeKind::Budget, || {
        format!("resumed outcome {:?}", more.kind)
    })?;
    ensure(more.stats.expanded == 2 * NON_CLAIM_BUDGET, || {
        format!("expanded {}", more.stats.expanded)
    })?;
    let frontier: BTreeSet<_> = more.checkpoint.unwrap().frontier.into_iter().map(|e| e.set).collect();
    Ok(format!(
        "budget {NON_CLAIM_BUDGET}: no verdict, checkpoint reloads and resumes ({} frontier vertices)",
        frontier.len()
    ))
}

fn report(id: u32, name: &str, verdict: &Verdict) -> bool {
    match verdict {
        Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail}"),
        Err(why) => println!("criterion {id:>2} FAIL  {name}: {why}"),
    }
    verdict.is_ok()
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= report(1, "counting oracle equivalence", &c1_oracle_equivalence());
    ok &= report(2, "ordered/unordered bridge", &c2_ordered_unordered_bridge());
    ok &= report(3, "structure of finite bases", &c3_structure_of_finite_bases());
    ok &= report(4, "{0,1} window for singleton-index H", &c4_example_window());
    ok &= report(
        5,
        "interval construction and reach necessity",
        &c5_interval_construction(),
    );
    let c6 = c6_exhaustion();
    ok &= report(
        6,
        "tree exhaustion for H={2}, R={1}",
        &c6.as_ref().map(|(s, _)| s.clone()).map_err(Clone::clone),
    );
    let c7 = c7_witness();
    ok &= report(
        7,
        "witness for H={2}, R=[1,100], N=100",
        &c7.as_ref().map(|(s, _)| s.clone()).map_err(Clone::clone),
    );
    let c8 = match (c6, c7) {
        (Ok((_, a)), Ok((_, b))) => c8_tree_properties(&[(sidon(), a), (bounded(100), b)]),
        _ => Err("needs the vertex sets of criteria 6 and 7".into()),
    };
    ok &= report(8, "tree structure on expanded vertices", &c8);
    ok &= report(9, "determinism and resume", &c9_determinism());
    ok &= report(10, "no verdict on the unbounded instance", &c10_non_claim());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
