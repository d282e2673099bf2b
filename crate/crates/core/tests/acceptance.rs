//! Acceptance suite. Each test prints one `PASS`/`FAIL` line and then asserts.
//! Run with `cargo test -p iocode-core --test acceptance -- --nocapture`.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use iocode::audit::{audit_graphs, audit_instance, audit_trees, AuditOptions};
use iocode::canon::canonical_graph6;
use iocode::constructive::{check_bound_for, BoundStatus};
use iocode::families::{
    build_family_tree, canonical_set, enumerate_small_graphs, enumerate_trees, gen_reduced_subdivided_star,
    gen_star_plus_edge, gen_subcubic_gp, gen_subdivided_star, gen_tight_tree_pair, random_graph, AttachmentVector,
    GraphFilter, StarEdge,
};
use iocode::solver::{solve, solve_oracle, solve_with_budget};
use iocode::verify::is_io_code;
use iocode::{Graph, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, title: &str, elapsed: Duration, limit: Duration, failures: &[String]) {
    let in_time = elapsed <= limit;
    let ok = failures.is_empty() && in_time;
    let mut line = format!(
        "{} criterion {id:>2}: {title} ({:.2?}, limit {:?})",
        if ok { "PASS" } else { "FAIL" },
        elapsed,
        limit
    );
    if !in_time {
        line.push_str(" [over time limit]");
    }
    println!("{line}");
    for f in failures.iter().take(20) {
        println!("    {f}");
    }
    assert!(ok, "criterion {id} failed: {} problem(s)", failures.len());
}

fn subdivided_star_ids(max_n: usize) -> HashSet<String> {
    (3..)
        .take_while(|d| 2 * d < max_n)
        .map(|d| canonical_graph6(&gen_subdivided_star(d).unwrap().0))
        .collect()
}

#[test]
fn criterion_01_base_values() {
    let start = Instant::now();
    let cases = [
        ("P2", Graph::path(2), 2),
        ("K3", Graph::complete(3), 2),
        ("P4", Graph::path(4), 4),
        ("P5", Graph::path(5), 4),
        ("paw", Graph::paw(), 3),
        ("C5", Graph::cycle(5), 4),
    ];
    let mut failures = Vec::new();
    for (name, g, expected) in cases {
        let res = solve(&g).unwrap();
        if res.gamma != expected || !is_io_code(&g, &res.code).unwrap().ok {
            failures.push(format!("{name}: gamma {} expected {expected}", res.gamma));
        }
    }
    report(1, "base values", start.elapsed(), Duration::from_secs(1), &failures);
}

#[test]
fn criterion_02_subdivided_stars() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for delta in 2..=6 {
        let (g, spec) = gen_subdivided_star(delta).unwrap();
        let gamma = solve(&g).unwrap().gamma;
        let c = canonical_set(&spec).unwrap();
        if gamma != 2 * delta || c.len() != 2 * delta || !is_io_code(&g, &c).unwrap().ok {
            failures.push(format!("T_{delta}: gamma {gamma}, canonical {} ", c.len()));
        }
        if delta >= 3 {
            let (h, spec) = gen_reduced_subdivided_star(delta).unwrap();
            let gamma = solve(&h).unwrap().gamma;
            let c = spec.reference_code.clone().unwrap();
            if gamma != 2 * delta - 1 || c.len() != 2 * delta - 1 || !is_io_code(&h, &c).unwrap().ok {
                failures.push(format!("T*_{delta}: gamma {gamma}, canonical {}", c.len()));
            }
        }
    }
    report(
        2,
        "subdivided stars and canonical sets",
        start.elapsed(),
        Duration::from_secs(5),
        &failures,
    );
}

fn check_member(k: AttachmentVector, failures: &mut Vec<String>) {
    let (g, spec) = build_family_tree(k);
    let c = canonical_set(&spec).unwrap();
    if !is_io_code(&g, &c).unwrap().ok {
        failures.push(format!("{:?}", k.counts()));
    }
}

#[test]
fn criterion_03_canonical_sets() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut exhaustive = 0;
    let mut k = [0usize; 6];
    loop {
        if k.iter().sum::<usize>() <= 5 && AttachmentVector::is_member(k) {
            check_member(AttachmentVector::new(k).unwrap(), &mut failures);
            exhaustive += 1;
        }
        let Some(i) = (0..6).find(|&i| k[i] < 5) else { break };
        k[i] += 1;
        k[..i].iter_mut().for_each(|x| *x = 0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x10c0de);
    let mut sampled = 0;
    while sampled < 200 {
        let total = rng.gen_range(1..=12);
        let mut k = [0usize; 6];
        for _ in 0..total {
            k[rng.gen_range(0..6)] += 1;
        }
        if AttachmentVector::is_member(k) {
            check_member(AttachmentVector::new(k).unwrap(), &mut failures);
            sampled += 1;
        }
    }
    let title = format!("canonical sets ({exhaustive} exhaustive, {sampled} sampled)");
    report(3, &title, start.elapsed(), Duration::from_secs(60), &failures);
}

#[test]
fn criterion_04_tree_audit() {
    let start = Instant::now();
    let small = audit_trees(
        12,
        AuditOptions {
            delta: None,
            workers: Some(1),
        },
    )
    .unwrap();
    let small_time = start.elapsed();
    let rep = audit_trees(
        14,
        AuditOptions {
            delta: None,
            workers: Some(1),
        },
    )
    .unwrap();
    let stars = subdivided_star_ids(14);
    let mut failures: Vec<String> = rep
        .summary
        .violation_ids
        .iter()
        .map(|id| format!("violation {id}"))
        .collect();
    for r in &rep.records {
        let star = stars.contains(&r.id);
        let exact_ok = if star {
            r.bound_status == BoundStatus::ExceptionalStar && r.gamma * (2 * r.delta + 1) == 2 * r.delta * r.n
        } else {
            r.bound_status == BoundStatus::WithinBound && 2 * r.delta * r.gamma <= (2 * r.delta - 1) * r.n
        };
        let built_ok = if star {
            r.constructor_status != BoundStatus::Violation
        } else {
            r.constructor_status == BoundStatus::WithinBound
        };
        if !exact_ok || !built_ok {
            failures.push(format!(
                "{}: gamma {} built {} delta {}",
                r.id, r.gamma, r.constructor_size, r.delta
            ));
        }
    }
    let exceptional: HashSet<String> = rep.summary.exceptional_ids.iter().cloned().collect();
    if exceptional != stars {
        failures.push(format!(
            "exceptional set {exceptional:?} differs from subdivided stars {stars:?}"
        ));
    }
    if small.summary.violations != 0 || small_time > Duration::from_secs(180) {
        failures.push(format!(
            "n <= 12 audit: {} violations in {small_time:.2?}",
            small.summary.violations
        ));
    }
    let title = format!(
        "tree audit n <= 14 ({} trees, {} exceptional)",
        rep.records.len(),
        exceptional.len()
    );
    report(4, &title, start.elapsed(), Duration::from_secs(1800), &failures);
}

#[test]
fn criterion_05_graph_audit() {
    let start = Instant::now();
    let rep = audit_graphs(7, AuditOptions::default()).unwrap();
    let stars = subdivided_star_ids(7);
    let mut failures: Vec<String> = rep
        .summary
        .violation_ids
        .iter()
        .map(|id| format!("violation {id}"))
        .collect();
    if rep.summary.violations != 0 {
        failures.push(format!("{} labeled violations", rep.summary.violations));
    }
    for id in &rep.summary.exceptional_ids {
        if !stars.contains(id) {
            failures.push(format!("exceptional non-star {id}"));
        }
    }
    if rep
        .records
        .iter()
        .any(|r| r.constructor_status == BoundStatus::Violation)
    {
        failures.push("constructor output invalid or over bound".into());
    }
    let title = format!(
        "graph audit n <= 7 ({} labeled, {} classes)",
        rep.summary.checked,
        rep.records.len()
    );
    report(5, &title, start.elapsed(), Duration::from_secs(1800), &failures);
}

#[test]
fn criterion_06_subcubic_family() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (g3, _) = gen_subcubic_gp(3).unwrap();
    let gamma = solve(&g3).unwrap().gamma;
    if gamma != 15 {
        failures.push(format!("G_3: gamma {gamma}"));
    }
    for p in 5..=7 {
        let (g, spec) = gen_subcubic_gp(p).unwrap();
        let s = spec.reference_code.clone().unwrap();
        if s.len() != 5 * p || !is_io_code(&g, &s).unwrap().ok {
            failures.push(format!("G_{p}: reference code of size {} rejected", s.len()));
        }
    }
    let (g5, _) = gen_subcubic_gp(5).unwrap();
    if let Some(code) = solve_with_budget(&g5, 24).unwrap() {
        failures.push(format!("G_5 has a code of size {}", code.len()));
    }
    report(
        6,
        "subcubic cycle family",
        start.elapsed(),
        Duration::from_secs(600),
        &failures,
    );
}

#[test]
fn criterion_07_tight_pairs() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for delta in 3..=5 {
        let (g, _) = gen_tight_tree_pair(delta).unwrap();
        let gamma = solve(&g).unwrap().gamma;
        let rec = audit_instance(&g, delta, true).unwrap();
        if gamma != 4 * delta - 2 || 2 * delta * gamma != (2 * delta - 1) * g.order() || !rec.is_extremal {
            failures.push(format!(
                "delta {delta}: gamma {gamma}, n {}, extremal {}",
                g.order(),
                rec.is_extremal
            ));
        }
    }
    report(
        7,
        "tight tree pairs",
        start.elapsed(),
        Duration::from_secs(300),
        &failures,
    );
}

#[test]
fn criterion_08_star_plus_edge() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for variant in [StarEdge::G1, StarEdge::G2, StarEdge::G3] {
        for k in 2..=5 {
            let (g, spec) = gen_star_plus_edge(variant, k).unwrap();
            let s = spec.reference_code.clone().unwrap();
            let valid = is_io_code(&g, &s).unwrap().ok;
            let gamma = solve(&g).unwrap().gamma;
            if !valid || s.len() > 2 * k - 1 || gamma > 2 * k - 1 {
                failures.push(format!(
                    "{variant:?} k={k}: reference size {} valid {valid}, gamma {gamma}, limit {}",
                    s.len(),
                    2 * k - 1
                ));
            }
        }
    }
    report(
        8,
        "subdivided star plus one edge",
        start.elapsed(),
        Duration::from_secs(60),
        &failures,
    );
}

#[test]
fn criterion_09_oracle_equivalence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut compare = |g: &Graph, label: &str| {
        let fast = solve(g).unwrap();
        let slow = solve_oracle(g).unwrap();
        if fast.gamma != slow.gamma || !is_io_code(g, &fast.code).unwrap().ok {
            failures.push(format!("{label}: solver {} oracle {}", fast.gamma, slow.gamma));
        }
    };
    let mut audited = 0;
    for n in 5..=10 {
        for t in enumerate_trees(n).unwrap().filter(|t| t.is_open_twin_free()) {
            compare(&t, &canonical_graph6(&t));
            audited += 1;
        }
    }
    let mut seen = HashSet::new();
    for n in 5..=7 {
        for g in enumerate_small_graphs(n, GraphFilter::audit_class()).unwrap() {
            let id = canonical_graph6(&g);
            if seen.insert(id.clone()) {
                compare(&g, &id);
                audited += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ac1e);
    let mut random = 0;
    while random < 500 {
        let n = rng.gen_range(11..=14);
        let p = rng.gen_range(0.15..0.5);
        let g = random_graph(n, p, &mut rng);
        if g.is_isolate_free() && g.is_open_twin_free() {
            compare(&g, &format!("random #{random} n={n}"));
            random += 1;
        }
    }
    let title = format!("oracle equivalence ({audited} audited, {random} random)");
    report(9, &title, start.elapsed(), Duration::from_secs(1200), &failures);
}

fn random_set(n: usize, rng: &mut ChaCha8Rng) -> VertexSet {
    VertexSet::from_vertices(n, (0..n).filter(|_| rng.gen_bool(0.6))).unwrap()
}

/// Compact, seeded versions of the standalone property groups.
#[test]
fn criterion_10_property_groups() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9c0de);
    for round in 0..2000 {
        let n = rng.gen_range(2..=10);
        let g = random_graph(n, rng.gen_range(0.1..0.7), &mut rng);
        let s = random_set(n, &mut rng);
        if is_io_code(&g, &s).unwrap().ok {
            let mut t = s.clone();
            t.insert(rng.gen_range(0..n));
            if !is_io_code(&g, &t).unwrap().ok {
                failures.push(format!("superset closure, round {round}"));
            }
            if !g.support_vertices().is_subset(&s) {
                failures.push(format!("forced supports, round {round}"));
            }
        }
        let twins: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| g.neighbors(u) == g.neighbors(v))
            .collect();
        if g.find_open_twins() != twins {
            failures.push(format!("twin detection, round {round}"));
        }
        let quads = (0..n).any(|a| {
            (0..n).any(|b| {
                (0..n).any(|c| {
                    (0..n).any(|d| {
                        a != c && b != d && g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(c, d) && g.has_edge(d, a)
                    })
                })
            })
        });
        if g.has_four_cycle() != quads {
            failures.push(format!("4-cycle detection, round {round}"));
        }
    }
    let known = [1usize, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551];
    for (i, &count) in known.iter().enumerate() {
        let got = enumerate_trees(i + 1).unwrap().count();
        if got != count {
            failures.push(format!("tree count n={}: {got} expected {count}", i + 1));
        }
    }
    if check_bound_for(&Graph::path(5), 4, 3) != BoundStatus::WithinBound {
        failures.push("bound check on P5".into());
    }
    report(
        10,
        "property groups",
        start.elapsed(),
        Duration::from_secs(60),
        &failures,
    );
}
