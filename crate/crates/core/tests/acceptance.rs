#![allow(clippy::needless_range_loop, clippy::type_complexity)]

//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use orp_core::oracle::{
    brute_korp_value, brute_orp_value, brute_path_values, brute_svalue, has_two_edge_disjoint_paths,
};
use orp_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Instance {
    g: IntGraph,
    t: VertexId,
}

fn instance(seed: u64, n_range: (usize, usize), m_cap: usize, max_weight: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(n_range.0..=n_range.1);
    let m = rng.gen_range(n - 1..=m_cap.max(n - 1));
    let g = gen_random_graph(RandomGraphParams {
        n,
        m,
        max_weight,
        seed,
        connected: true,
    })
    .unwrap();
    Instance {
        g,
        t: rng.gen_range(0..n),
    }
}

/// n <= 50, m <= 200, weights <= 1000.
fn suite1() -> Vec<Instance> {
    (0..200)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(10_000 + i);
            let n = rng.gen_range(2..=50);
            instance(10_000 + i, (n, n), (3 * n).min(200), 1000)
        })
        .collect()
}

/// n <= 9; small weights so ties are common.
fn suite2() -> Vec<Instance> {
    (0..600)
        .map(|i| instance(20_000 + i, (2, 9), 16, if i % 2 == 0 { 5 } else { 100 }))
        .collect()
}

/// n <= 7, m <= 12.
fn suite3() -> Vec<Instance> {
    (0..150)
        .map(|i| instance(30_000 + i, (2, 7), 12, if i % 2 == 0 { 4 } else { 50 }))
        .collect()
}

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn svalue_equivalence(s1: &[Instance]) -> Outcome {
    let mut pairs = 0usize;
    for (i, inst) in s1.iter().enumerate() {
        let dt = detour_table(&inst.g, inst.t);
        for u in 0..inst.g.n() {
            for (e, _) in inst.g.incident(u) {
                let fast = dt
                    .svalue_query(&inst.g, u, e)
                    .map_err(|err| err.to_string())?;
                let slow = brute_svalue(&inst.g, inst.t, u, e);
                check(fast == slow, || {
                    format!("graph {i}: svalue({u}, {e}) = {fast}, brute {slow}")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{} graphs, {pairs} (vertex, edge) pairs", s1.len()))
}

fn orp_equivalence(s2: &[Instance]) -> Outcome {
    let mut sources = 0usize;
    for (i, inst) in s2.iter().enumerate() {
        let sol = solve_orp(&inst.g, &detour_table(&inst.g, inst.t));
        for s in 0..inst.g.n() {
            let slow = brute_orp_value(&inst.g, s, inst.t).map_err(|e| e.to_string())?;
            check(sol.y[s] == slow, || {
                format!("graph {i}: y({s}) = {}, brute {slow}", sol.y[s])
            })?;
            sources += 1;
        }
    }
    Ok(format!("{} graphs, {sources} sources", s2.len()))
}

fn korp_equivalence(s1: &[Instance], s3: &[Instance]) -> Outcome {
    for (i, inst) in s1.iter().enumerate() {
        let k1 = solve_korp(&inst.g, inst.t, 1).map_err(|e| e.to_string())?;
        let orp = solve_orp(&inst.g, &detour_table(&inst.g, inst.t));
        check(k1.yk == orp.y, || {
            format!("suite-1 graph {i}: k=1 differs from single-failure solve")
        })?;
    }
    let mut values = 0usize;
    for (i, inst) in s3.iter().enumerate() {
        let solver = KorpSolver::new(&inst.g, inst.t).map_err(|e| e.to_string())?;
        let ys: Vec<_> = (0..=2).map(|k| solver.solve(k).unwrap().yk).collect();
        for s in 0..inst.g.n() {
            for k in 0..=2 {
                let slow = brute_korp_value(&inst.g, s, inst.t, k).map_err(|e| e.to_string())?;
                check(ys[k][s] == slow, || {
                    format!("graph {i}: y^{k}({s}) = {}, brute {slow}", ys[k][s])
                })?;
                values += 1;
            }
            check(ys[0][s] <= ys[1][s] && ys[1][s] <= ys[2][s], || {
                format!("graph {i}: budget monotonicity broken at {s}")
            })?;
        }
    }
    Ok(format!(
        "k=1 agrees on {} graphs; {values} values on {} graphs; monotone",
        s1.len(),
        s3.len()
    ))
}

fn pareto_equivalence(s2: &[Instance]) -> Outcome {
    let mut queries = 0usize;
    for (i, inst) in s2.iter().enumerate() {
        let dt = detour_table(&inst.g, inst.t);
        let y = solve_orp(&inst.g, &dt).y;
        for s in 0..inst.g.n() {
            let paths = brute_path_values(&inst.g, s, inst.t).map_err(|e| e.to_string())?;
            let mut bounds: Vec<IntCost> = paths.iter().map(|p| p.1).collect();
            bounds.sort();
            bounds.dedup();
            for &b in &bounds {
                let want = paths.iter().filter(|p| p.1 <= b).map(|p| p.2).min();
                let got = solve_pareto(&inst.g, s, inst.t, b, &dt)
                    .ok()
                    .map(|p| p.length);
                check(got == want, || {
                    format!("graph {i}: s={s} B={b}: got {got:?}, want {want:?}")
                })?;
                queries += 1;
            }
            if y[s].is_finite() {
                check(solve_pareto(&inst.g, s, inst.t, y[s], &dt).is_ok(), || {
                    format!("graph {i}: B = y({s}) infeasible")
                })?;
            }
        }
    }
    Ok(format!("{queries} (source, bound) queries"))
}

fn greedy_bound(s3: &[Instance]) -> Outcome {
    for k in 1..=3usize {
        for m in [1u64, 4, 1000] {
            let ex = gen_bad_example(k, m).map_err(|e| e.to_string())?;
            let y = solve_korp(&ex.graph, ex.t, k)
                .map_err(|e| e.to_string())?
                .yk[ex.s];
            check(y == Cost::Finite(m + 1), || {
                format!("bad example k={k} M={m}: y^k = {y}")
            })?;
            let greedy = greedy_strategy(&ex.graph, ex.t);
            let wc =
                evaluate_worst_case(&ex.graph, &greedy, ex.s, ex.t, k, DEFAULT_SCENARIO_BUDGET)
                    .map_err(|e| e.to_string())?;
            let want = ((1u64 << (k + 1)) - 1) * m + 1;
            check(wc.cost == Cost::Finite(want), || {
                format!("bad example k={k} M={m}: greedy {} != {want}", wc.cost)
            })?;
        }
    }
    let mut checked = 0usize;
    for (i, inst) in s3.iter().enumerate() {
        let greedy = greedy_strategy(&inst.g, inst.t);
        for k in 1..=3usize {
            let yk = solve_korp(&inst.g, inst.t, k).unwrap().yk;
            for s in 0..inst.g.n() {
                let Cost::Finite(y) = yk[s] else { continue };
                let wc =
                    evaluate_worst_case(&inst.g, &greedy, s, inst.t, k, DEFAULT_SCENARIO_BUDGET)
                        .map_err(|e| e.to_string())?;
                let cap = ((1u64 << (k + 1)) - 1) * y;
                check(wc.cost <= Cost::Finite(cap), || {
                    format!("graph {i}: k={k} s={s}: greedy {} > {cap}", wc.cost)
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "9 tight instances exact; bound holds on {checked} random (source, k)"
    ))
}

fn finiteness(s1: &[Instance]) -> Outcome {
    let (mut finite, mut infinite) = (0usize, 0usize);
    for (i, inst) in s1.iter().enumerate() {
        let y = solve_orp(&inst.g, &detour_table(&inst.g, inst.t)).y;
        for s in 0..inst.g.n() {
            let two = has_two_edge_disjoint_paths(&inst.g, s, inst.t);
            check(y[s].is_finite() == two, || {
                format!("graph {i}: y({s}) = {}, disjoint paths {two}", y[s])
            })?;
            if two {
                finite += 1;
            } else {
                infinite += 1;
            }
        }
    }
    Ok(format!("{finite} finite, {infinite} infinite"))
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

fn timed_solve(g: &IntGraph) -> Result<Duration, String> {
    let start = Instant::now();
    let spt = dijkstra_tree(g, 0);
    let dt = build_detour_table(g, spt);
    let sol = solve_orp(g, &dt);
    let elapsed = start.elapsed();
    std::hint::black_box(&sol.y);
    let n = g.n();
    check(dt.stats().contractions < n, || {
        format!(
            "m={}: {} contractions for {n} vertices",
            g.m(),
            dt.stats().contractions
        )
    })?;
    Ok(elapsed)
}

fn scaling() -> Outcome {
    let exps: Vec<u32> = (14..=20).collect();
    let graphs: Vec<IntGraph> = exps
        .iter()
        .map(|&p| {
            let m = 1usize << p;
            gen_random_graph(RandomGraphParams {
                n: m / 4,
                m,
                max_weight: 1_000_000,
                seed: p as u64,
                connected: true,
            })
        })
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;

    // warm-up, then 5 rounds over all sizes so that background load on the
    // machine is spread over every size rather than skewing one ratio
    for g in &graphs {
        timed_solve(g)?;
    }
    let mut times = vec![Vec::new(); graphs.len()];
    for _ in 0..5 {
        for (i, g) in graphs.iter().enumerate() {
            times[i].push(timed_solve(g)?);
        }
    }
    let medians: Vec<Duration> = times.into_iter().map(median).collect();

    let mut worst_ratio: f64 = 0.0;
    for i in 1..medians.len() {
        let ratio = medians[i].as_secs_f64() / medians[i - 1].as_secs_f64();
        worst_ratio = worst_ratio.max(ratio);
        check(ratio <= 2.6, || {
            format!("m=2^{}: time ratio {ratio:.2} > 2.6", exps[i])
        })?;
    }
    let last = *medians.last().unwrap();
    check(last < Duration::from_secs(10), || {
        format!("m=2^20 took {last:?}")
    })?;
    let rows: Vec<String> = exps
        .iter()
        .zip(&medians)
        .map(|(p, t)| format!("2^{p}:{:.1}ms", t.as_secs_f64() * 1e3))
        .collect();
    Ok(format!("worst ratio {worst_ratio:.2}; {}", rows.join(" ")))
}

fn compact_storage() -> Outcome {
    let mut tables = 0usize;
    for (i, &(n, m)) in [
        (10usize, 9usize),
        (10, 40),
        (10, 400),
        (300, 299),
        (300, 3000),
        (300, 30000),
    ]
    .iter()
    .enumerate()
    {
        let g = gen_random_graph(RandomGraphParams {
            n,
            m,
            max_weight: 1000,
            seed: 40_000 + i as u64,
            connected: true,
        })
        .unwrap();
        for t in [0, n / 2, n - 1] {
            let dt = detour_table(&g, t);
            let text = write_table(&dt, None);
            let records = text
                .lines()
                .filter(|l| !l.starts_with('p') && !l.starts_with('c'))
                .count();
            check(records == n, || format!("n={n} m={m}: {records} records"))?;
            let loaded = read_table(&g, &text).map_err(|e| e.to_string())?;
            check(loaded.table.svalues() == dt.svalues(), || {
                format!("n={n} m={m} t={t}: svalues differ")
            })?;

            // bit-exact in floating point too
            let gf = FloatGraph::from_edges(
                n,
                g.edges().iter().map(|e| (e.u, e.v, e.length as f64 / 7.0)),
            )
            .unwrap();
            let dtf = detour_table(&gf, t);
            let loaded = read_table(&gf, &write_table(&dtf, None)).map_err(|e| e.to_string())?;
            let same = dtf
                .svalues()
                .iter()
                .zip(loaded.table.svalues())
                .all(|(a, b)| a.finite().map(f64::to_bits) == b.finite().map(f64::to_bits));
            check(same, || format!("n={n} m={m} t={t}: float svalues differ"))?;
            tables += 2;
        }
    }
    Ok(format!("{tables} tables, n records each"))
}

fn main() -> ExitCode {
    let s1 = suite1();
    let s2 = suite2();
    let s3 = suite3();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (
            "1 s-value oracle equivalence",
            Box::new(|| svalue_equivalence(&s1)),
        ),
        (
            "2 single-failure oracle equivalence",
            Box::new(|| orp_equivalence(&s2)),
        ),
        (
            "3 k-failure equivalence and monotonicity",
            Box::new(|| korp_equivalence(&s1, &s3)),
        ),
        (
            "4 bounded robust length",
            Box::new(|| pareto_equivalence(&s2)),
        ),
        (
            "5 greedy bound and tightness",
            Box::new(|| greedy_bound(&s3)),
        ),
        (
            "6 finiteness characterization",
            Box::new(|| finiteness(&s1)),
        ),
        ("7 near-linear scaling", Box::new(scaling)),
        ("8 compact detour-table storage", Box::new(compact_storage)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({detail}; {secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} ({secs:.1}s)");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
