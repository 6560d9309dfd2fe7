//! Acceptance checks. Runs every check, prints one PASS/FAIL line for each,
//! and exits non-zero if any failed.
//!
//!     cargo test -p colorbound-cli --test acceptance

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use colorbound::bounds::{
    ce_lipschitz_constant, classical_dudley_first_term, default_alpha_grid, dudley_bound,
    dudley_first_term, lower_bound_uniform, rescaled_ce_lipschitz, stability_bound,
    upper_bound_colors, volumetric_covering_log, DEFAULT_ALPHA_POINTS, DEFAULT_MESH_POINTS,
};
use colorbound::coloring::{is_finer, wl_refine, wl_refine_rounds, ColoringFunction};
use colorbound::graph::{generate_sample, write_jsonl, GraphFamily, RandomSampleSpec};
use colorbound::partition::{multiplicity_diff, partition_sample};
use colorbound::rademacher::{brute_force_rademacher, exact_rademacher, expected_abs_rademacher_sum, mc_rademacher};
use colorbound::{AttributedGraph, ColoringKind, GraphSample, SamplePartition};
use colorbound_cli::args::{BoundArgs, ColoringArg, Format, OutputArgs};
use colorbound_cli::commands::{self, check_chain, hierarchy_rows};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-12;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every integer partition of `m` as a non-increasing list of parts.
fn integer_partitions(m: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

/// `(1 / 2^m) sum_sigma (1/m) sum_j |sum_{i in class j} sigma_i|`, written
/// out over every sign vector independently of the library.
fn enumerate_complexity(multiplicities: &[usize]) -> f64 {
    let m: usize = multiplicities.iter().sum();
    let mut total: u64 = 0;
    for mask in 0u32..(1 << m) {
        let mut offset = 0;
        for &mu in multiplicities {
            let ones = (mask >> offset & ((1u32 << mu) - 1)).count_ones() as i64;
            total += (2 * ones - mu as i64).unsigned_abs();
            offset += mu;
        }
    }
    total as f64 / ((1u64 << m) as f64 * m as f64)
}

fn random_labels(r: &mut ChaCha8Rng, m: usize, classes: usize) -> Vec<usize> {
    (0..m).map(|_| r.gen_range(0..classes)).collect()
}

fn random_graph(r: &mut ChaCha8Rng, n: usize, edge_probability: f64) -> AttributedGraph {
    let mut edges = Vec::new();
    for v in 0..n {
        for u in 0..v {
            if r.gen_bool(edge_probability) {
                edges.push((u, v));
            }
        }
    }
    AttributedGraph::new(n, edges, None).unwrap()
}

fn cycle(n: usize) -> AttributedGraph {
    AttributedGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)), None).unwrap()
}

fn exact_matches_enumeration() -> Outcome {
    let start = Instant::now();
    let mut shapes = 0;
    let mut worst = 0.0f64;
    for m in 1..=16 {
        let mut parts = integer_partitions(m);
        if parts.len() > 300 {
            parts.shuffle(&mut rng(m as u64));
            parts.truncate(300);
        }
        for mu in parts {
            let partition = SamplePartition::from_multiplicities(&mu).unwrap();
            let exact = exact_rademacher(&partition).value;
            let brute = brute_force_rademacher(&partition).unwrap().value;
            let oracle = enumerate_complexity(&mu);
            worst = worst.max((exact - brute).abs()).max((exact - oracle).abs());
            shapes += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= TOL && elapsed <= Duration::from_secs(60),
        format!("{shapes} shapes, m <= 16, max error {worst:.1e}, {elapsed:.2?}"),
    )
}

fn exact_below_color_bound() -> Outcome {
    let mut r = rng(11);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let m = r.gen_range(1..=200);
        let classes = r.gen_range(1..=m);
        let partition = SamplePartition::from_class_labels(&random_labels(&mut r, m, classes)).unwrap();
        let exact = exact_rademacher(&partition).value;
        let bound = upper_bound_colors(partition.p(), m).unwrap();
        let independent = (partition.p() as f64 / m as f64).sqrt();
        assert!((bound - independent).abs() <= TOL);
        worst = worst.max(exact - bound);
    }
    outcome(
        worst <= TOL,
        format!("1000 random partitions, max(exact - sqrt(p/m)) = {worst:.3e}"),
    )
}

fn uniform_partitions_sandwiched() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for m in 1..=200usize {
        for p in (1..=m).filter(|p| m % p == 0) {
            let partition = SamplePartition::from_multiplicities(&vec![m / p; p]).unwrap();
            let exact = exact_rademacher(&partition).value;
            let lower = lower_bound_uniform(p, m).unwrap();
            let upper = upper_bound_colors(p, m).unwrap();
            if exact < lower - TOL || exact > upper + TOL {
                failures.push(format!("p={p} m={m}"));
            }
            checked += 1;
        }
    }
    let exact = exact_rademacher(&SamplePartition::from_multiplicities(&[2, 2]).unwrap()).value;
    let lower = lower_bound_uniform(2, 4).unwrap();
    let tight = (exact - 0.5).abs() <= TOL && (lower - 0.5).abs() <= TOL;
    outcome(
        failures.is_empty() && tight,
        format!(
            "{checked} uniform (p, m) pairs, {} outside; p=2 m=4 exact {exact} lower {lower}",
            failures.len()
        ),
    )
}

fn khintchine_constants() -> Outcome {
    // N_n = sum_k C(n, k) |2k - n|, so E|S_n| = N_n / 2^n. The bounds
    // sqrt(n/2) <= E|S_n| <= sqrt(n) become 2 N_n^2 >= n 4^n and N_n^2 <= n 4^n.
    let mut row = vec![BigUint::from(1u32)];
    let mut failures = Vec::new();
    let mut worst_float = 0.0f64;
    for n in 1..=1000usize {
        let mut next = vec![BigUint::from(1u32); n + 1];
        for k in 1..n {
            next[k] = &row[k - 1] + &row[k];
        }
        row = next;
        let total: BigUint = row
            .iter()
            .enumerate()
            .map(|(k, c)| c * BigUint::from((2 * k).abs_diff(n)))
            .sum();
        let squared = &total * &total;
        let scale = BigUint::from(n) << (2 * n);
        if BigUint::from(2u32) * &squared < scale || squared > scale {
            failures.push(n);
        }
        let value = expected_abs_rademacher_sum(n);
        let root = (n as f64).sqrt();
        if value < (n as f64 / 2.0).sqrt() - TOL * root || value > root + TOL * root {
            failures.push(n);
        }
        if n <= 64 {
            let oracle = total.to_string().parse::<f64>().unwrap() / 2f64.powi(n as i32);
            worst_float = worst_float.max((value - oracle).abs() / oracle);
        }
    }
    outcome(
        failures.is_empty() && worst_float <= 1e-12,
        format!(
            "n = 1..=1000 in exact arithmetic, {} violations, library relative error {worst_float:.1e} (n <= 64)",
            failures.len()
        ),
    )
}

fn stability_holds() -> Outcome {
    let mut r = rng(55);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let m = r.gen_range(1..=200);
        let classes = r.gen_range(1..=m.min(40));
        let a = SamplePartition::from_class_labels(&random_labels(&mut r, m, classes)).unwrap();
        let b = SamplePartition::from_class_labels(&random_labels(&mut r, m, classes)).unwrap();
        let diff = multiplicity_diff(&a, &b).unwrap();
        let bound = stability_bound(&diff, m).unwrap();
        let mut mu = vec![0i64; classes];
        for (x, y) in a.class_index().into_iter().zip(b.class_index()) {
            mu[a.classes()[x].key.entries()[0].0 .0 as usize] += 1;
            mu[b.classes()[y].key.entries()[0].0 .0 as usize] -= 1;
        }
        let independent = mu.iter().map(|d| d.unsigned_abs()).sum::<u64>() as f64 / m as f64;
        assert!((bound - independent).abs() <= TOL);
        let change = (exact_rademacher(&a).value - exact_rademacher(&b).value).abs();
        worst = worst.max(change - bound);
    }
    outcome(
        worst <= TOL,
        format!("1000 random pairs, max(|change| - bound) = {worst:.3e}"),
    )
}

fn hierarchy_monotone() -> Outcome {
    let start = Instant::now();
    let mut r = rng(66);
    let mut violations = Vec::new();
    let mut separated = 0;
    for trial in 0..200 {
        let m = r.gen_range(1..=30);
        let graphs: Vec<AttributedGraph> = (0..m)
            .map(|_| match r.gen_range(0..4) {
                0 => cycle(6),
                1 => AttributedGraph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], None).unwrap(),
                _ => {
                    let n = r.gen_range(1..=8);
                    let q = r.gen_range(0.1..0.7);
                    random_graph(&mut r, n, q)
                }
            })
            .collect();
        let sample = GraphSample::unlabeled(graphs).unwrap();
        let (rows, partitions, _) = hierarchy_rows(&sample).unwrap();
        if rows.len() != ColoringKind::HIERARCHY.len() {
            violations.push(format!("trial {trial}: missing rows"));
            continue;
        }
        if let Some(v) = check_chain(&rows, &partitions).unwrap() {
            violations.push(format!("trial {trial}: {v}"));
        }
        for i in 0..partitions.len() {
            for j in i + 1..partitions.len() {
                if !is_finer(&partitions[j], &partitions[i]).unwrap() {
                    violations.push(format!("trial {trial}: {j} not finer than {i}"));
                }
                if rows[j].p < rows[i].p || rows[j].exact + TOL < rows[i].exact {
                    violations.push(format!("trial {trial}: {j} below {i}"));
                }
            }
        }
        if rows[3].p > rows[2].p {
            separated += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        violations.is_empty() && elapsed <= Duration::from_secs(120),
        format!(
            "200 samples, {} violations, exact coloring finer than 1-WL in {separated}, {elapsed:.2?}{}",
            violations.len(),
            violations.first().map(|v| format!(", first: {v}")).unwrap_or_default()
        ),
    )
}

fn wl_invariance_and_power() -> Outcome {
    let mut r = rng(77);
    let mut mismatches = 0;
    for _ in 0..200 {
        let n = r.gen_range(1..=40);
        let q = r.gen_range(0.05..0.5);
        let g = random_graph(&mut r, n, q);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        let h = g.permute_nodes(&perm).unwrap();
        let (_, hist) = wl_refine(&GraphSample::unlabeled(vec![g, h]).unwrap());
        if hist[0] != hist[1] {
            mismatches += 1;
        }
    }

    let two_triangles =
        AttributedGraph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], None).unwrap();
    let blind = GraphSample::unlabeled(vec![cycle(6), two_triangles]).unwrap();
    let wl_p = partition_sample(&ColoringKind::Wl.histograms(&blind).unwrap()).p();
    let iso_p = partition_sample(&ColoringKind::ExactIso.histograms(&blind).unwrap()).p();

    let path3 = AttributedGraph::new(3, [(0, 1), (1, 2)], None).unwrap();
    let pair = GraphSample::unlabeled(vec![path3, cycle(3)]).unwrap();
    let (_, one_round) = wl_refine_rounds(&pair, 1);
    let separated = one_round[0] != one_round[1];

    outcome(
        mismatches == 0 && wl_p == 1 && iso_p == 2 && separated,
        format!(
            "{mismatches}/200 permutation mismatches; C6 vs 2xC3: 1-WL p={wl_p}, exact p={iso_p}; P3 vs C3 separated after one round: {separated}"
        ),
    )
}

fn dudley_terms() -> Outcome {
    let mut first_term_failures = 0;
    for m in (1..=200).step_by(7).chain([256, 1000]) {
        for alpha in default_alpha_grid(m, DEFAULT_ALPHA_POINTS) {
            let classical = 4.0 * alpha / (m as f64).sqrt();
            assert!((classical_dudley_first_term(alpha, m) - classical).abs() <= TOL * classical.max(1.0));
            for p in 1..=m {
                if dudley_first_term(alpha, p, m) > classical * (1.0 + TOL) {
                    first_term_failures += 1;
                }
            }
        }
    }
    let mut r = rng(88);
    let mut worst = f64::INFINITY;
    for _ in 0..100 {
        let m = r.gen_range(1..=200usize);
        let divisors: Vec<usize> = (1..=m).filter(|p| m % p == 0).collect();
        let p = *divisors.choose(&mut r).unwrap();
        let partition = SamplePartition::from_multiplicities(&vec![m / p; p]).unwrap();
        let exact = exact_rademacher(&partition).value;
        let dudley = dudley_bound(
            &default_alpha_grid(m, DEFAULT_ALPHA_POINTS),
            volumetric_covering_log(p, m),
            p,
            m,
            DEFAULT_MESH_POINTS,
        )
        .unwrap();
        worst = worst.min(dudley.value - exact);
    }
    outcome(
        first_term_failures == 0 && worst >= -TOL,
        format!(
            "{first_term_failures} first-term violations; 100 uniform partitions, min(dudley - exact) = {worst:.3e}"
        ),
    )
}

fn monte_carlo_coverage() -> Outcome {
    let partition = SamplePartition::from_multiplicities(&[2, 2]).unwrap();
    let exact = exact_rademacher(&partition).value;
    let covered = (0..500u64)
        .filter(|&seed| {
            mc_rademacher(&partition, 10_000, seed, 0.05)
                .unwrap()
                .interval_contains(exact)
        })
        .count();
    outcome(
        covered * 10 >= 500 * 9,
        format!("{covered}/500 intervals contain {exact}"),
    )
}

fn lipschitz_constants() -> Outcome {
    let logistic_at_one = (1.0 + 0.5f64.tanh()) / 2.0;
    let ce = ce_lipschitz_constant(1.0);
    let ce_ok = (ce - logistic_at_one).abs() <= 1e-4;
    let rescaled = rescaled_ce_lipschitz(-1.0, 1.0, 1.0, 0.0).unwrap();
    let rescaled_ok = (rescaled - 2.0).abs() <= TOL;
    outcome(
        ce_ok && rescaled_ok,
        format!(
            "ce(1) = {ce:.6} vs {logistic_at_one:.6} [{}]; rescaled(-1, 1, 1, 0) = {rescaled} vs 2 [{}]",
            if ce_ok { "ok" } else { "mismatch" },
            if rescaled_ok { "ok" } else { "mismatch" }
        ),
    )
}

fn large_sample_performance() -> Outcome {
    let spec = RandomSampleSpec {
        family: GraphFamily::ErdosRenyi {
            n: 50,
            edge_probability: 0.1,
        },
        count: 10_000,
        seed: 99,
    };
    let sample = generate_sample(&spec).unwrap();
    let start = Instant::now();
    let (coloring, histograms) = wl_refine(&sample);
    let wl_time = start.elapsed();
    let p = partition_sample(&histograms).p();

    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("er.jsonl");
    write_jsonl(&sample, &input).unwrap();
    let args = BoundArgs {
        input,
        coloring: ColoringArg::Wl,
        sup_l: Some(1.0),
        mesh_points: DEFAULT_MESH_POINTS,
        svg: None,
        out: OutputArgs {
            format: Format::Json,
            output: None,
        },
    };
    let start = Instant::now();
    let report = commands::bound(&args).unwrap();
    let bound_time = start.elapsed();
    let consistent = report.violation.is_none();
    outcome(
        wl_time <= Duration::from_secs(5) && bound_time <= Duration::from_secs(10) && consistent,
        format!(
            "10000 graphs x 50 nodes: 1-WL {wl_time:.2?} ({} rounds, p={p}); bound command {bound_time:.2?}",
            coloring.iteration_count
        ),
    )
}

fn main() -> ExitCode {
    let checks: [(&str, fn() -> Outcome); 11] = [
        ("closed form matches sign enumeration", exact_matches_enumeration),
        ("complexity at most sqrt(p/m)", exact_below_color_bound),
        ("uniform partitions between sqrt(p/2m) and sqrt(p/m)", uniform_partitions_sandwiched),
        ("sqrt(n/2) <= E|S_n| <= sqrt(n)", khintchine_constants),
        ("stability bound", stability_holds),
        ("coloring hierarchy is monotone", hierarchy_monotone),
        ("1-WL invariance and separating power", wl_invariance_and_power),
        ("entropy-integral bound", dudley_terms),
        ("Monte Carlo interval coverage", monte_carlo_coverage),
        ("loss Lipschitz constants", lipschitz_constants),
        ("large-sample performance", large_sample_performance),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let result = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                outcome(false, format!("panicked: {msg}"))
            });
        if !result.ok {
            failed += 1;
        }
        println!(
            "{} {name}: {}",
            if result.ok { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    println!("{} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
