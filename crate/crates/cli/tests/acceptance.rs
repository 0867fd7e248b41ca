//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use ghmst::filling::{mf, mf_upper_bound_search};
use ghmst::gh::{gh_exact, gh_scaled_pair, mst_length_via_gh, spectrum_via_gh, Algorithm};
use ghmst::partitions::spectrum_via_partitions;
use ghmst::sample;
use ghmst::steiner::{smt_finite_ambient, smt_via_gh, SteinerInstance};
use ghmst::{
    all_minimum_spanning_trees, diameter, mst_length, mst_spectrum, simplex, FiniteMetricSpace, Limits,
    SimplexSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, summary: String) -> Outcome {
    match failures.first() {
        None => Outcome { pass: true, detail: summary },
        Some(first) => Outcome {
            pass: false,
            detail: format!("{} failure(s); first: {first}", failures.len()),
        },
    }
}

fn delta(n: usize, lambda: f64) -> FiniteMetricSpace {
    simplex(SimplexSpec::new(n, lambda).unwrap())
}

fn random_mixed(rng: &mut ChaCha8Rng, n: usize, i: usize) -> FiniteMetricSpace {
    match i % 3 {
        0 => sample::random_metric(rng, n),
        1 => sample::random_metric_with_ties(rng, n),
        _ => sample::random_planar(rng, n),
    }
}

/// The 200 spaces shared by criteria 2 and 3: n in 2..=5, diameter exactly 1/2.
fn normalized_spaces() -> Vec<FiniteMetricSpace> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e02);
    (0..200)
        .map(|i| sample::random_metric_with_diameter(&mut rng, 2 + i % 4, 0.5))
        .collect()
}

fn partition_route_matches_mst() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e01);
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for i in 0..500 {
        let n = 2 + i % 7;
        let x = random_mixed(&mut rng, n, i);
        let s = mst_spectrum(&x);
        for k in 1..n {
            let v = spectrum_via_partitions(&x, k).unwrap();
            let diff = (v - s.values()[k - 1]).abs();
            worst = worst.max(diff);
            if diff > 1e-12 {
                failures.push(format!("space {i} k={k}: {v} vs {}", s.values()[k - 1]));
            }
        }
    }
    let elapsed = started.elapsed();
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("runtime {:.1}s exceeds 60s", elapsed.as_secs_f64()));
    }
    outcome(failures, format!("500 spaces, max |diff| = {worst:e}, {:.2}s", elapsed.as_secs_f64()))
}

fn simplex_distance_matches_spectrum(spaces: &[FiniteMetricSpace]) -> Outcome {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut exhaustive_runs = 0;
    for (i, x) in spaces.iter().enumerate() {
        let n = x.size();
        let s = mst_spectrum(x);
        for k in 1..n {
            let target = delta(k + 1, 1.0);
            let want = (1.0 - s.values()[k - 1]) / 2.0;
            let bb = gh_exact(x, &target, Algorithm::BranchAndBound).unwrap();
            let diff = (bb.distance - want).abs();
            worst = worst.max(diff);
            if diff > 1e-12 {
                failures.push(format!("space {i} k={k}: bnb {} vs {want}", bb.distance));
            }
            if bb.witness.collapse_indicator() {
                failures.push(format!("space {i} k={k}: optimal witness collapses"));
            }
            if n * (k + 1) <= 24 {
                exhaustive_runs += 1;
                let ex = gh_exact(x, &target, Algorithm::Exhaustive).unwrap();
                if ex.distance != bb.distance {
                    failures.push(format!("space {i} k={k}: exhaustive {} vs bnb {}", ex.distance, bb.distance));
                }
            }
        }
    }
    let elapsed = started.elapsed();
    if elapsed > Duration::from_secs(600) {
        failures.push(format!("runtime {:.1}s exceeds 10 min", elapsed.as_secs_f64()));
    }
    outcome(
        failures,
        format!(
            "200 spaces, max |diff| = {worst:e}, {exhaustive_runs} exhaustive cross-checks, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn gh_sums_recover_spectrum(spaces: &[FiniteMetricSpace]) -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (i, x) in spaces.iter().enumerate() {
        let diam = diameter(x);
        let s = mst_spectrum(x);
        let len = mst_length(x);
        for lambda in [2.0 * diam, 5.0 * diam] {
            let via = spectrum_via_gh(x, lambda).unwrap();
            for (k, (a, b)) in via.values().iter().zip(s.values()).enumerate() {
                let diff = (a - b).abs();
                worst = worst.max(diff);
                if diff > 1e-12 {
                    failures.push(format!("space {i} lambda={lambda} sigma_{}: {a} vs {b}", k + 1));
                }
            }
            if via.len() != s.len() {
                failures.push(format!("space {i}: spectrum lengths differ"));
            }
            let l = mst_length_via_gh(x, lambda).unwrap();
            let diff = (l - len).abs();
            worst = worst.max(diff);
            if diff > 1e-12 {
                failures.push(format!("space {i} lambda={lambda}: mst {l} vs {len}"));
            }
        }
    }
    outcome(failures, format!("200 spaces x 2 lambdas, max |diff| = {worst:e}"))
}

fn larger_simplex_is_half_lambda() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e04);
    let mut failures = Vec::new();
    let mut cases = 0;
    for i in 0..60 {
        let n = 1 + i % 4;
        let x = random_mixed(&mut rng, n, i);
        let diam = diameter(&x);
        let base = if diam > 0.0 { diam } else { 0.5 };
        for lambda in [2.0 * base, 3.0 * base] {
            for m in [n + 1, n + 2] {
                let r = gh_exact(&x, &delta(m, lambda), Algorithm::BranchAndBound).unwrap();
                cases += 1;
                if (r.distance - lambda / 2.0).abs() > 1e-12 {
                    failures.push(format!("space {i} n={n} m={m} lambda={lambda}: {}", r.distance));
                }
            }
        }
    }
    outcome(failures, format!("{cases} cases"))
}

fn prop_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e05);
    let mut failures = Vec::new();
    let mut with_ties = 0;
    for i in 0..200 {
        let n = 2 + i % 6;
        let x = sample::random_metric_with_ties(&mut rng, n);
        let trees = all_minimum_spanning_trees(&x).unwrap();
        if trees.len() > 1 {
            with_ties += 1;
        }
        let first = trees[0].sorted_lengths();
        if let Some(t) = trees.iter().find(|t| t.sorted_lengths() != first) {
            failures.push(format!("space {i}: {:?} vs {first:?}", t.sorted_lengths()));
        }
    }
    if with_ties == 0 {
        failures.push("no instance had more than one minimum spanning tree".into());
    }
    outcome(failures, format!("200 spaces, {with_ties} with several MSTs"))
}

fn scale_homothety() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e06);
    let limits = Limits::default();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for i in 0..100 {
        let x = random_mixed(&mut rng, 1 + i % 4, i);
        let y = random_mixed(&mut rng, 1 + (i / 4) % 4, i + 1);
        for lambda in [0.5, 2.0, 7.0] {
            let (a, b) = gh_scaled_pair(&x, &y, lambda, Algorithm::BranchAndBound, &limits).unwrap();
            let rel = if a == b { 0.0 } else { (a - b).abs() / a.abs().max(b.abs()) };
            worst = worst.max(rel);
            if rel > 1e-12 {
                failures.push(format!("pair {i} lambda={lambda}: {a} vs {b}"));
            }
        }
    }
    outcome(failures, format!("100 pairs x 3 lambdas, max rel diff = {worst:e}"))
}

fn hub(h: f64) -> SteinerInstance {
    let x = FiniteMetricSpace::new(
        ["a", "b", "c", "s"].map(String::from).to_vec(),
        &[
            vec![0.0, 1.0, 1.0, h],
            vec![1.0, 0.0, 1.0, h],
            vec![1.0, 1.0, 0.0, h],
            vec![h, h, h, 0.0],
        ],
    )
    .unwrap();
    SteinerInstance::from_labels(x, &["a", "b", "c"]).unwrap()
}

fn steiner() -> Outcome {
    let mut failures = Vec::new();
    let check = |tag: String, inst: &SteinerInstance, failures: &mut Vec<String>| {
        let exact = smt_finite_ambient(inst);
        let mst_m = mst_length(&inst.terminal_space());
        if exact.length > mst_m {
            failures.push(format!("{tag}: smt {} > mst(M) {mst_m}", exact.length));
        }
        let d0 = inst.default_d();
        for (d, lambda) in [(None, None), (Some(1.5 * d0 + 0.1), Some(4.0 * d0 + 1.0))] {
            let via = smt_via_gh(inst, d, lambda).unwrap();
            if (via - exact.length).abs() > 1e-12 {
                failures.push(format!("{tag}: gh-sum {via} vs enumerate {}", exact.length));
            }
        }
    };
    for h in [0.55, 0.6, 0.65, 0.7, 0.9] {
        check(format!("hub h={h}"), &hub(h), &mut failures);
    }
    let expected = [(0.6, 1.8), (0.7, 2.0)];
    for (h, want) in expected {
        let got = smt_finite_ambient(&hub(h)).length;
        if (got - want).abs() > 1e-12 {
            failures.push(format!("hub h={h}: smt {got}, expected {want}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e07);
    for i in 0..100 {
        let nx = 2 + i % 6;
        let x = random_mixed(&mut rng, nx, i);
        let nm = rng.random_range(1..=nx.min(4));
        let mut idx: Vec<usize> = (0..nx).collect();
        for p in 0..nm {
            let q = rng.random_range(p..nx);
            idx.swap(p, q);
        }
        let inst = SteinerInstance::new(x, idx[..nm].to_vec()).unwrap();
        check(format!("random {i}"), &inst, &mut failures);
    }
    outcome(failures, "5 hub instances + 100 random instances".into())
}

fn minimal_filling() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e08);
    for i in 0..200 {
        let x = random_mixed(&mut rng, 3, i);
        let half = (x.d(0, 1) + x.d(1, 2) + x.d(0, 2)) / 2.0;
        let got = mf(&x).unwrap().length;
        if (got - half).abs() > 1e-9 {
            failures.push(format!("triangle {i}: mf {got} vs half-perimeter {half}"));
        }
    }
    let tri = FiniteMetricSpace::from_matrix(&[vec![0.0, 3.0, 5.0], vec![3.0, 0.0, 4.0], vec![5.0, 4.0, 0.0]]).unwrap();
    let tri_mf = mf(&tri).unwrap().length;
    if (tri_mf - 6.0).abs() > 1e-9 {
        failures.push(format!("3-4-5: {tri_mf}"));
    }
    let d3 = delta(3, 1.0);
    let d3_mf = mf(&d3).unwrap().length;
    if (d3_mf - 1.5).abs() > 1e-9 {
        failures.push(format!("simplex(3,1): {d3_mf}"));
    }
    for i in 0..100 {
        let x = random_mixed(&mut rng, 2 + i % 5, i);
        let (f, m) = (mf(&x).unwrap().length, mst_length(&x));
        if f > m + 1e-9 {
            failures.push(format!("space {i}: mf {f} > mst {m}"));
        }
    }
    let mut search_cases = vec![tri, d3];
    search_cases.extend((0..4).map(|i| random_mixed(&mut rng, 3, i)));
    let mut worst = 0.0f64;
    for (i, x) in search_cases.iter().enumerate() {
        let target = mf(x).unwrap().length;
        let found = mf_upper_bound_search(x, None, 2000, 2024).unwrap().value;
        let gap = (found - target) / target;
        worst = worst.max(gap);
        if found < target - 1e-9 || gap > 0.05 {
            failures.push(format!("search case {i}: {found} vs mf {target}"));
        }
    }
    outcome(failures, format!("200 triangles, 100 mf <= mst checks, search max relative gap {worst:e}"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e09);
    let mut files = vec![std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/w4.json")];
    for i in 0..4 {
        let x = random_mixed(&mut rng, 2 + i, i);
        let path = dir.path().join(format!("space{i}.json"));
        std::fs::write(&path, ghmst::io::to_json(&x)).unwrap();
        files.push(path);
    }
    let mut failures = Vec::new();
    for path in &files {
        let run = || {
            let out = ghmst_cli::run(["ghmst", "--threads", "1", "verify", path.to_str().unwrap()]);
            let report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap_or_default();
            (out.code, serde_json::to_string(&report["payload"]).unwrap())
        };
        let (first, second) = (run(), run());
        if first.0 != 0 || first != second {
            failures.push(format!("{}: runs differ or failed", path.display()));
        }
        if !first.1.contains("\"all_pass\":true") {
            failures.push(format!("{}: verify did not pass", path.display()));
        }
    }
    outcome(failures, format!("{} inputs, byte-identical payloads", files.len()))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let spaces = normalized_spaces();
    let criteria: Vec<Criterion> = vec![
        ("1 partitions max-min = mst spectrum", Box::new(partition_route_matches_mst)),
        ("2 d_GH(X, Delta_{k+1}) = (1 - sigma_k)/2", Box::new(|| simplex_distance_matches_spectrum(&spaces))),
        ("3 spectrum and mst length via GH sums", Box::new(|| gh_sums_recover_spectrum(&spaces))),
        ("4 d_GH(X, lambda Delta_m) = lambda/2 for m > n", Box::new(larger_simplex_is_half_lambda)),
        ("5 all MSTs share one spectrum", Box::new(prop_5)),
        ("6 d_GH(lambda X, lambda Y) = lambda d_GH(X, Y)", Box::new(scale_homothety)),
        ("7 smt via GH sums = smt by enumeration", Box::new(steiner)),
        ("8 minimal filling values and bounds", Box::new(minimal_filling)),
        ("9 verify payloads are deterministic", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("[{}] criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
