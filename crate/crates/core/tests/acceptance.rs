//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero only when a criterion outside `KNOWN_FAILING` fails.

use std::time::{Duration, Instant};

use matcolor::conflict::{build_conflict_graph, color_conflict_graph, finalize_coloring};
use matcolor::fpras::fpras_cover;
use matcolor::graph::{bipartition, brooks_color, Graph};
use matcolor::harness::commands::{self, Output};
use matcolor::harness::gen::{gen_random, gen_rota, RandomKind};
use matcolor::harness::oracle::{covlp_opt, COVLP_BUDGET};
use matcolor::harness::stats::{stat_runner, StatSpec};
use matcolor::harness::verify::verify_coloring;
use matcolor::losz::{pseudocoloring, validate_flexible, validate_flexible_in_minors, FlexMode, FlexVerdict, Pseudocoloring};
use matcolor::lp::polytope::in_matroid_polytope;
use matcolor::rational::{ceil_usize, q, qu};
use matcolor::rng::{derive_seed, rng_from};
use matcolor::swap::decompose_point;
use matcolor::union::chromatic_number;
use matcolor::{Matroid, Subset, Q};
use rand::seq::SliceRandom;
use rand::Rng;

/// Criteria that fail on this implementation for a documented reason (see
/// README, "Known gaps").
const KNOWN_FAILING: &[usize] = &[4];

const FLEX_BUDGET: usize = 200_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_kind<R: Rng>(rng: &mut R, n: usize) -> RandomKind {
    match rng.random_range(0..4) {
        0 => RandomKind::Graphic { vertices: rng.random_range(3..=5) },
        1 => RandomKind::Linear { field: 2, dim: rng.random_range(2..=3) },
        2 => RandomKind::Partition { blocks: rng.random_range(2..=4) },
        _ => RandomKind::Uniform { rank: rng.random_range(1..=n.div_ceil(3)) },
    }
}

fn random_instance(k: usize, n_max: usize, seed: u64) -> Vec<Matroid> {
    let mut rng = rng_from(seed);
    let n = rng.random_range(3..=n_max);
    let kinds: Vec<RandomKind> = (0..k).map(|_| random_kind(&mut rng, n)).collect();
    gen_random(&kinds, n, seed).unwrap().build().unwrap().matroids
}

fn chi_max(ms: &[Matroid]) -> usize {
    ms.iter().map(|m| chromatic_number(m).0).max().unwrap_or(0)
}

fn full(ms: &[Matroid]) -> Subset {
    ms[0].ground().clone()
}

/// `max ceil(|S| / r(S))` over all nonempty subsets.
fn brute_chi(m: &Matroid) -> usize {
    let ids = m.ground().to_vec();
    let mut best = 0;
    for mask in 1u32..(1 << ids.len()) {
        let s = Subset::from_ids(m.universe(), ids.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e));
        let r = m.r(&s);
        if r == 0 {
            return usize::MAX;
        }
        best = best.max(s.len().div_ceil(r));
    }
    best
}

struct PipelineRun {
    ms: Vec<Matroid>,
    chi_max: usize,
    pseudo: Pseudocoloring,
    classes: usize,
    valid: bool,
}

fn pipeline(ms: Vec<Matroid>) -> PipelineRun {
    let pseudo = pseudocoloring(&ms).unwrap();
    let coloring = finalize_coloring(&ms, &pseudo).unwrap();
    let valid = verify_coloring(&ms, &coloring, &full(&ms)).passed();
    PipelineRun { chi_max: chi_max(&ms), classes: coloring.len(), valid, pseudo, ms }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut bad = 0;
    for i in 0..200u64 {
        let mut rng = rng_from(derive_seed(1, &[i]));
        let n = rng.random_range(1..=12);
        let kind = match i % 4 {
            0 => RandomKind::Graphic { vertices: rng.random_range(2..=8) },
            1 => RandomKind::Linear { field: 2, dim: rng.random_range(1..=5) },
            2 => RandomKind::Partition { blocks: rng.random_range(1..=5) },
            _ => RandomKind::Uniform { rank: rng.random_range(1..=n) },
        };
        let m = gen_random(&[kind], n, i).unwrap().build().unwrap().matroids.remove(0);
        if chromatic_number(&m).0 != brute_chi(&m) {
            bad += 1;
        }
    }
    let t = start.elapsed();
    outcome(bad == 0 && t < Duration::from_secs(120), format!("200 matroids, {bad} mismatches, {t:.1?}"))
}

fn pipeline_check(runs: &[PipelineRun], factor: usize, budget: Duration, elapsed: Duration) -> Outcome {
    let invalid = runs.iter().filter(|r| !r.valid).count();
    let over = runs.iter().filter(|r| r.classes > factor * r.chi_max).count();
    let worst = runs.iter().map(|r| r.classes as f64 / r.chi_max.max(1) as f64).fold(0.0, f64::max);
    outcome(
        invalid == 0 && over == 0 && elapsed < budget,
        format!("{} instances, {invalid} invalid, {over} over {factor}*chi_max, worst ratio {worst:.2}, {elapsed:.1?}", runs.len()),
    )
}

fn criterion_4(runs: &[&PipelineRun]) -> Outcome {
    let (mut total, mut definition_fail, mut minor_fail) = (0, 0, 0);
    let mut first = None;
    for run in runs {
        for (class, fds) in run.pseudo.classes.iter().zip(&run.pseudo.decompositions) {
            for (m, fd) in run.ms.iter().zip(fds) {
                total += 1;
                let mode = FlexMode::Exhaustive { budget: FLEX_BUDGET };
                if let FlexVerdict::Fail { property, .. } = validate_flexible(m, class, fd, mode) {
                    definition_fail += 1;
                    first.get_or_insert(property);
                }
                if validate_flexible_in_minors(m, class, fd, mode) != FlexVerdict::Pass {
                    minor_fail += 1;
                }
            }
        }
    }
    outcome(
        definition_fail == 0,
        format!(
            "{total} decompositions, {definition_fail} fail read in the matroid itself (first property {}), {minor_fail} fail read in their minors",
            first.map_or("-".to_string(), |p| p.to_string())
        ),
    )
}

fn criterion_5(k2: &[PipelineRun], k3: &[PipelineRun]) -> Outcome {
    let mut non_bipartite = 0;
    let mut bad_k3 = 0;
    let mut worst_degree = 0;
    for run in k2 {
        for (class, fds) in run.pseudo.classes.iter().zip(&run.pseudo.decompositions) {
            let g = build_conflict_graph(&run.ms, class, fds).unwrap();
            if bipartition(&g.graph).is_none() {
                non_bipartite += 1;
            }
        }
    }
    for run in k3 {
        for (class, fds) in run.pseudo.classes.iter().zip(&run.pseudo.decompositions) {
            let g = build_conflict_graph(&run.ms, class, fds).unwrap();
            worst_degree = worst_degree.max(g.max_degree());
            let k7 = g.graph.components().iter().any(|c| c.len() == 7 && g.graph.induced(c).is_complete());
            let colored = color_conflict_graph(&g, 3).map(|c| c.count <= 6).unwrap_or(false);
            if g.max_degree() > 6 || k7 || !colored {
                bad_k3 += 1;
            }
        }
    }
    outcome(
        non_bipartite == 0 && bad_k3 == 0,
        format!("{non_bipartite} non-bipartite k=2 graphs, {bad_k3} bad k=3 graphs, max k=3 degree {worst_degree}"),
    )
}

/// Connected, non-complete, `3 <= max degree <= 8`.
fn random_brooks_graph(seed: u64) -> Graph {
    let mut rng = rng_from(seed);
    loop {
        let cap = rng.random_range(3..=8);
        let n = rng.random_range(cap + 2..=40);
        let mut g = Graph::new(n);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        for i in 1..n {
            // attach to an earlier vertex with spare degree
            let cands: Vec<usize> = order[..i].iter().copied().filter(|&u| g.degree(u) < cap).collect();
            let u = cands[rng.random_range(0..cands.len())];
            g.add_edge(u, order[i]);
        }
        let extra = rng.random_range(0..n * cap);
        for _ in 0..extra {
            let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
            if u != v && g.degree(u) < cap && g.degree(v) < cap {
                g.add_edge(u, v);
            }
        }
        if g.max_degree() >= 3 && g.is_connected() && !g.is_complete() {
            return g;
        }
    }
}

/// Random connected `d`-regular graph on an even number `n > d` of
/// vertices: a circulant shuffled by degree-preserving edge swaps.
fn random_regular(n: usize, d: usize, seed: u64) -> Graph {
    let mut rng = rng_from(seed);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 0..n {
        for s in 1..=d / 2 {
            edges.push((v, (v + s) % n));
        }
        if d % 2 == 1 && v < n / 2 {
            edges.push((v, v + n / 2));
        }
    }
    let build = |edges: &[(usize, usize)]| Graph::from_edges(n, edges);
    for _ in 0..10 * edges.len() {
        let (i, j) = (rng.random_range(0..edges.len()), rng.random_range(0..edges.len()));
        let ((a, b), (c, e)) = (edges[i], edges[j]);
        if a == c || a == e || b == c || b == e {
            continue;
        }
        let g = build(&edges);
        if g.has_edge(a, c) || g.has_edge(b, e) {
            continue;
        }
        let (old_i, old_j) = (edges[i], edges[j]);
        edges[i] = (a, c);
        edges[j] = (b, e);
        if !build(&edges).is_connected() {
            edges[i] = old_i;
            edges[j] = old_j;
        }
    }
    build(&edges)
}

fn criterion_6() -> Outcome {
    let mut failures = 0;
    let mut regular = 0;
    for i in 0..500u64 {
        let g = if i % 5 == 0 {
            regular += 1;
            let d = 3 + (i as usize / 5) % 6;
            let n = (d + 2 + (i as usize % 13)).next_multiple_of(2);
            let g = random_regular(n, d, derive_seed(6, &[i]));
            assert!(g.len() == n && (0..n).all(|v| g.degree(v) == d));
            g
        } else {
            random_brooks_graph(derive_seed(6, &[i]))
        };
        let delta = g.max_degree();
        match brooks_color(&g, delta) {
            Ok(c) if c.is_proper(&g) && c.count <= delta => {}
            _ => failures += 1,
        }
    }
    outcome(failures == 0, format!("500 graphs ({regular} regular), {failures} failures"))
}

fn criterion_7() -> Outcome {
    let (mut bad, mut uniform, mut random) = (0, 0, 0);
    let mut i = 0u64;
    while uniform + random < 50 {
        i += 1;
        let ms = random_instance(2, 10, derive_seed(7, &[i]));
        let (m1, m2) = (&ms[0], &ms[1]);
        let n = m1.universe();
        let chi = chi_max(&ms).max(1);
        let x: Vec<Q> = if i % 2 == 0 {
            uniform += 1;
            vec![q(1, chi as i64); n]
        } else {
            let mut rng = rng_from(derive_seed(7, &[i, 1]));
            let den = rng.random_range(1..=7) * chi as i64;
            let x: Vec<Q> = (0..n).map(|_| q(rng.random_range(0..=den / chi as i64 + 1), den)).collect();
            if !(in_matroid_polytope(m1, &x).unwrap() && in_matroid_polytope(m2, &x).unwrap()) {
                continue;
            }
            random += 1;
            x
        };
        match decompose_point(m1, m2, &x) {
            Ok(c) if c.is_exact(m1, m2, &x) && c.parts.iter().map(|p| &p.1).sum::<Q>() == qu(1) => {}
            _ => bad += 1,
        }
    }
    outcome(bad == 0, format!("{uniform} uniform and {random} random points, {bad} inexact"))
}

fn swap_suite() -> Vec<(String, Matroid, Matroid)> {
    let k4 = Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let rows = Matroid::partition(6, &[vec![0, 1], vec![2, 3], vec![4, 5]], &[1, 1, 1]).unwrap();
    let rota3 = gen_rota(3, 2, 1).unwrap().to_file(Some(1)).build().unwrap().matroids;
    let rota4 = gen_rota(4, 3, 2).unwrap().to_file(Some(2)).build().unwrap().matroids;
    let random = random_instance(2, 12, 88);
    let u = Matroid::uniform(8, 3).unwrap();
    let cols = Matroid::partition(8, &[vec![0, 1, 2, 3], vec![4, 5, 6, 7]], &[2, 2]).unwrap();
    vec![
        ("K4 x rows".into(), k4, rows),
        ("rota r=3 p=2".into(), rota3[0].clone(), rota3[1].clone()),
        ("rota r=4 p=3".into(), rota4[0].clone(), rota4[1].clone()),
        ("U(8,3) x blocks".into(), u, cols),
        ("random".into(), random[0].clone(), random[1].clone()),
    ]
}

fn swap_targets(m: &Matroid, seed: u64) -> Vec<Subset> {
    let ids = m.ground().to_vec();
    let mut rng = rng_from(seed);
    let mut out = vec![m.ground().clone()];
    while out.len() < 10 {
        let mut pick = ids.clone();
        pick.shuffle(&mut rng);
        pick.truncate(rng.random_range(ids.len().div_ceil(2)..=ids.len()));
        out.push(Subset::from_ids(m.universe(), pick));
    }
    out
}

fn criteria_8_9() -> (Outcome, Outcome) {
    let start = Instant::now();
    let (mut marg_fail, mut marg_total, mut tail_fail, mut tail_total) = (0, 0, 0, 0);
    for (i, (_, m1, m2)) in swap_suite().into_iter().enumerate() {
        let chi = chi_max(&[m1.clone(), m2.clone()]);
        let spec = StatSpec {
            targets: swap_targets(&m1, derive_seed(8, &[i as u64])),
            m1,
            m2,
            alpha: q(1, chi as i64),
            gamma: q(1, 4),
            trials: 20_000,
            seed: derive_seed(8, &[i as u64, 1]),
        };
        let report = stat_runner(&spec).unwrap();
        marg_total += report.marginals.len();
        marg_fail += report.marginals.iter().filter(|m| !m.pass).count();
        for c in &report.tails {
            tail_total += c.points.len();
            tail_fail += c.points.iter().filter(|p| !p.pass).count();
        }
    }
    let t = start.elapsed();
    (
        outcome(
            marg_fail == 0 && t < Duration::from_secs(900),
            format!("5 instances x 20000 trials, {marg_fail}/{marg_total} elements outside 3 sigma, {t:.1?}"),
        ),
        outcome(tail_fail == 0, format!("{tail_total} tail points, {tail_fail} above bound + 3 sigma")),
    )
}

fn criterion_10() -> Outcome {
    let (mut bad, mut count) = (0, 0);
    for i in 0..50u64 {
        let k = if i % 5 == 4 { 3 } else { 2 };
        let ms = random_instance(k, if k == 3 { 8 } else { 10 }, derive_seed(10, &[i]));
        let opt = ceil_usize(&covlp_opt(&ms, COVLP_BUDGET).unwrap());
        let run = pipeline(ms);
        count += 1;
        if opt < run.chi_max || run.classes > k * (k - 1) * opt || !run.valid {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{count} instances, {bad} violations"))
}

/// Three vertices, twenty parallel edges per pair; rows split the edges in
/// half, so both matroids have chromatic number 30.
fn triangle_multigraph() -> (Matroid, Matroid) {
    let mut ends = Vec::new();
    for (u, v) in [(0, 1), (1, 2), (0, 2)] {
        ends.extend(std::iter::repeat_n((u, v), 20));
    }
    let g = Matroid::graphic(3, &ends).unwrap();
    let p = Matroid::partition(60, &[(0..30).collect(), (30..60).collect()], &[1, 1]).unwrap();
    (g, p)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    if xs.is_empty() {
        return 0.0;
    }
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

fn criterion_11() -> Outcome {
    let (m1, m2) = triangle_multigraph();
    let chi = chi_max(&[m1.clone(), m2.clone()]);
    let mut notes = Vec::new();
    let mut pass = (30..=100).contains(&chi);
    for (num, den) in [(1, 20), (1, 10), (1, 5)] {
        let eps = q(num, den);
        let e = num as f64 / den as f64;
        let limit = 1.0 - e + 100.0 * e * e + 0.05;
        let start = Instant::now();
        let (mut invalid, mut grew, mut slow, mut worst) = (0, 0, 0, 0.0f64);
        for seed in 0..10 {
            match fpras_cover(&m1, &m2, &eps, true, seed) {
                Ok((c, report)) => {
                    if !verify_coloring(&[m1.clone(), m2.clone()], &c, m1.ground()).passed() {
                        invalid += 1;
                    }
                    if report.rounds.iter().any(|r| r.chi_after > r.chi_before) {
                        grew += 1;
                    }
                    let med = median(report.rounds.iter().map(|r| r.decay_ratio()).collect());
                    worst = worst.max(med);
                    if med > limit {
                        slow += 1;
                    }
                }
                Err(_) => invalid += 1,
            }
        }
        let t = start.elapsed();
        pass &= invalid == 0 && grew == 0 && slow == 0 && t < Duration::from_secs(1800);
        notes.push(format!("eps={num}/{den}: {invalid} invalid, {grew} growing, median decay {worst:.3} vs {limit:.3}, {t:.1?}"));
    }
    outcome(pass, format!("chi_max {chi}; {}", notes.join("; ")))
}

fn criterion_12() -> Outcome {
    let mut bad = Vec::new();
    let mut worst = 0.0f64;
    for p in [2u64, 3, 5] {
        for r in 4..=12usize {
            let ms = gen_rota(r, p, derive_seed(12, &[r as u64, p])).unwrap().to_file(None).build().unwrap().matroids;
            let chis = (chromatic_number(&ms[0]).0, chromatic_number(&ms[1]).0);
            let run = pipeline(ms);
            worst = worst.max(run.classes as f64 / r as f64);
            if chis != (r, r) || !run.valid || run.classes > 2 * r {
                bad.push(format!("r={r} p={p}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("27 instances, worst classes/r {worst:.2}, failing: [{}]", bad.join(", ")))
}

fn criterion_13() -> Outcome {
    let rota = gen_rota(3, 2, 4).unwrap().to_file(Some(4));
    let random = gen_random(&[RandomKind::Graphic { vertices: 5 }, RandomKind::Partition { blocks: 3 }], 9, 4).unwrap();
    let render = |o: matcolor::Result<Output>| o.map(|o| o.render()).unwrap_or_else(|e| format!("error {e}"));
    let runs: Vec<(&str, Box<dyn Fn(u64) -> String>)> = vec![
        ("gen rota", Box::new(|s| render(commands::gen_rota_cmd(5, 3, s)))),
        ("gen random", Box::new(|s| render(commands::gen_random_cmd(&["graphic:4".into(), "linear:2:3".into()], 10, s)))),
        ("fpras", Box::new(|s| render(commands::fpras(&rota, &q(1, 5), true, s)))),
        ("wrapper", Box::new(|s| render(commands::wrapper(&random, &q(1, 2), s, 3)))),
        ("swapround", Box::new(|s| render(commands::swapround(&rota, &q(1, 3), &q(1, 4), 300, &[], s)))),
        ("transcripts", Box::new(|s| commands::swapround_transcripts(&rota, &q(1, 3), &q(1, 4), 10, s).unwrap().join("\n"))),
        ("color", Box::new(|_| render(commands::color(&random, None)))),
    ];
    let mut differing = Vec::new();
    for (name, f) in &runs {
        for seed in [0, 1, 99] {
            if f(seed) != f(seed) {
                differing.push(format!("{name}@{seed}"));
            }
        }
    }
    outcome(differing.is_empty(), format!("{} commands x 3 seeds, differing: [{}]", runs.len(), differing.join(", ")))
}

fn main() {
    let start = Instant::now();
    let mut results: Vec<(usize, Outcome)> = Vec::new();
    let mut report = |n: usize, o: Outcome| {
        println!("criterion {n:>2}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, o));
    };

    report(1, criterion_1());

    let t = Instant::now();
    let k2: Vec<PipelineRun> = (0..100u64).map(|i| pipeline(random_instance(2, 12, derive_seed(2, &[i])))).collect();
    report(2, pipeline_check(&k2, 2, Duration::from_secs(600), t.elapsed()));

    let t = Instant::now();
    let k3: Vec<PipelineRun> = (0..50u64).map(|i| pipeline(random_instance(3, 9, derive_seed(3, &[i])))).collect();
    report(3, pipeline_check(&k3, 6, Duration::from_secs(600), t.elapsed()));

    let rota: Vec<PipelineRun> = [(5, 2), (6, 2), (8, 3), (10, 2)]
        .iter()
        .map(|&(r, p)| pipeline(gen_rota(r, p, 1).unwrap().to_file(None).build().unwrap().matroids))
        .collect();
    report(4, criterion_4(&k2.iter().chain(&k3).chain(&rota).collect::<Vec<_>>()));
    let rota_k2: Vec<PipelineRun> = k2.into_iter().chain(rota).collect();
    report(5, criterion_5(&rota_k2, &k3));
    report(6, criterion_6());
    report(7, criterion_7());
    let (c8, c9) = criteria_8_9();
    report(8, c8);
    report(9, c9);
    report(10, criterion_10());
    report(11, criterion_11());
    report(12, criterion_12());
    report(13, criterion_13());

    let unexpected: Vec<usize> = results.iter().filter(|(n, o)| !o.pass && !KNOWN_FAILING.contains(n)).map(|(n, _)| *n).collect();
    let passed = results.iter().filter(|(_, o)| o.pass).count();
    println!("acceptance: {passed}/{} criteria pass in {:.1?}", results.len(), start.elapsed());
    for n in KNOWN_FAILING {
        if results.iter().any(|(m, o)| m == n && !o.pass) {
            println!("criterion {n:>2} is a known gap, see README");
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
