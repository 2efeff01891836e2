//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use gaussian_tv::bounds::{diff_mean_interval, same_mean_interval};
use gaussian_tv::normal::interval_prob_scaled;
use gaussian_tv::{
    assess, bound_1d, bound_diff_mean, bound_pinsker_kl, detect_range, exact_equal_cov,
    exact_tv_1d, generate, hellinger_squared, mc_tv, oracle, relative_spectrum, EnsembleKind,
    EnsembleSpec, Gaussian, GaussianPair, MeanGapDecomposition, Tolerances,
};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{
    four_sigma, gaussian_matrix, orthonormal_columns, random_invertible, random_spd, sorted,
};

const SAMPLES: usize = 200_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    match failures.first() {
        None => Outcome {
            pass: true,
            detail: summary,
        },
        Some(first) => Outcome {
            pass: false,
            detail: format!("{} failures, first: {first}", failures.len()),
        },
    }
}

fn within_time(o: Outcome, elapsed: Duration, limit: Duration) -> Outcome {
    if o.pass && elapsed > limit {
        Outcome {
            pass: false,
            detail: format!("took {elapsed:.1?}, limit {limit:?}"),
        }
    } else {
        Outcome {
            pass: o.pass,
            detail: format!("{} ({elapsed:.1?})", o.detail),
        }
    }
}

fn pairs(kind: EnsembleKind, dims: impl Iterator<Item = usize>, seed: u64) -> Vec<GaussianPair> {
    dims.enumerate()
        .flat_map(|(i, d)| generate(&EnsembleSpec::new(kind, d, 1, seed + i as u64)).unwrap())
        .collect()
}

fn ac1() -> Outcome {
    let tol = Tolerances::default();
    let p = Gaussian::univariate(0.0, 1.0).unwrap();
    let q = Gaussian::univariate(1.0, 1.0).unwrap();
    let closed = exact_equal_cov(p.mean(), q.mean(), p.cov(), &tol)
        .unwrap()
        .lower;
    let exact = exact_tv_1d(&p, &q).unwrap().estimate;
    let mc = mc_tv(&p, &q, 1_000_000, 7, &tol).unwrap();
    let reference = 0.38292492254802624;
    let mut failures = Vec::new();
    if (closed - exact).abs() > 1e-12 {
        failures.push(format!("closed form {closed} vs exact_tv_1d {exact}"));
    }
    if (closed - reference).abs() > 1e-12 {
        failures.push(format!("closed form {closed} vs 2Phi(1/2)-1 = {reference}"));
    }
    if (mc.estimate - closed).abs() > mc.ci_halfwidth {
        failures.push(format!(
            "mc {} +/- {} misses {closed}",
            mc.estimate, mc.ci_halfwidth
        ));
    }
    outcome(
        &failures,
        format!(
            "closed {closed:.15}, exact {exact:.15}, mc {:.5} +/- {:.5}",
            mc.estimate, mc.ci_halfwidth
        ),
    )
}

fn ac2() -> Outcome {
    let tol = Tolerances::default();
    let ens = pairs(
        EnsembleKind::SameMeanPD,
        (0..300).map(|i| 1 + i % 8),
        20_000,
    );
    let failures: Vec<String> = ens
        .par_iter()
        .enumerate()
        .filter_map(|(i, p)| {
            let rho = relative_spectrum(p.first.cov(), p.second.cov(), tol.rank_tol)
                .unwrap()
                .rho;
            let b = same_mean_interval(rho);
            let e = oracle(&p.first, &p.second, SAMPLES, 100 + i as u64, &tol).unwrap();
            let w = four_sigma(&e);
            (e.estimate < b.lower - w || e.estimate > b.upper + w).then(|| {
                format!(
                    "pair {i}: {} not in [{}, {}] +/- {w}",
                    e.estimate, b.lower, b.upper
                )
            })
        })
        .collect();
    outcome(
        &failures,
        "300 same-mean pairs inside [min{1,rho}/100, 3/2 min{1,rho}]".into(),
    )
}

fn ac3() -> Outcome {
    let tol = Tolerances::default();
    let ens = pairs(EnsembleKind::DiffMean, (0..300).map(|i| 2 + i % 7), 30_000);
    let failures: Vec<String> = ens
        .par_iter()
        .enumerate()
        .filter_map(|(i, p)| {
            let t = MeanGapDecomposition::new(&p.first, &p.second, &tol)
                .unwrap()
                .tv_term();
            let b = diff_mean_interval(t);
            let direct = bound_diff_mean(&p.first, &p.second, &tol).unwrap();
            if direct != b {
                return Some(format!(
                    "pair {i}: bound_diff_mean {direct:?} vs T-interval {b:?}"
                ));
            }
            let e = oracle(&p.first, &p.second, SAMPLES, 200 + i as u64, &tol).unwrap();
            let w = four_sigma(&e);
            (e.estimate < b.lower - w || e.estimate > b.upper + w).then(|| {
                format!(
                    "pair {i}: {} not in [{}, {}] +/- {w}",
                    e.estimate, b.lower, b.upper
                )
            })
        })
        .collect();
    outcome(
        &failures,
        "300 different-mean pairs inside [min{1,T}/200, 9/2 min{1,T}]".into(),
    )
}

fn ac4() -> Outcome {
    let ens = generate(&EnsembleSpec::new(EnsembleKind::OneDim, 1, 10_000, 40_000)).unwrap();
    let mut failures = Vec::new();
    for (i, p) in ens.iter().enumerate() {
        let exact = exact_tv_1d(&p.first, &p.second).unwrap().estimate;
        for (a, b) in [(&p.first, &p.second), (&p.second, &p.first)] {
            let bound = bound_1d(a, b).unwrap();
            if !bound.contains(exact) {
                failures.push(format!(
                    "pair {i}: {exact} not in [{}, {}]",
                    bound.lower, bound.upper
                ));
            }
        }
    }
    outcome(
        &failures,
        "10000 one-dimensional pairs, both argument orders, zero tolerance".into(),
    )
}

fn ac5() -> Outcome {
    let p1 = interval_prob_scaled(0.0, 1.0, -1.0, 1.0);
    let p11 = interval_prob_scaled(0.0, 1.1, -1.0, 1.0);
    let p09 = interval_prob_scaled(0.0, 0.9, -1.0, 1.0);
    let half = interval_prob_scaled(0.0, 1.0, 0.0, 1.0);
    let checks = [
        (
            p1 > 0.68 && p1 < 0.69,
            format!("P(N(0,1) in [-1,1]) = {p1}"),
        ),
        (p11 < 0.66, format!("P(N(0,1.1) in [-1,1]) = {p11}")),
        (p09 > 0.70, format!("P(N(0,0.9) in [-1,1]) = {p09}")),
        (half > 0.2, format!("P(N(0,1) in [0,1]) = {half}")),
    ];
    let failures: Vec<String> = checks
        .iter()
        .filter(|c| !c.0)
        .map(|c| c.1.clone())
        .collect();
    outcome(&failures, format!("{p1:.5}, {p11:.5}, {p09:.5}, {half:.5}"))
}

fn ac6() -> Outcome {
    let p = Gaussian::univariate(0.0, 1.0).unwrap();
    let mut failures = Vec::new();
    let mut values = Vec::new();
    for lambda in [0.1, -0.1, 0.5, -0.5, 3.0] {
        let q = Gaussian::univariate(0.0, 1.0 + lambda).unwrap();
        let tv = exact_tv_1d(&p, &q).unwrap().estimate;
        values.push(format!("{lambda}: {tv:.5}"));
        if tv <= 0.01 {
            failures.push(format!("lambda {lambda}: {tv}"));
        }
    }
    outcome(&failures, values.join(", "))
}

/// Mixed positive definite pairs: same mean, different means, near-identical
/// and one-dimensional.
fn mixed_ensemble() -> Vec<GaussianPair> {
    let kinds = [
        EnsembleKind::SameMeanPD,
        EnsembleKind::DiffMean,
        EnsembleKind::NearIdentical,
        EnsembleKind::OneDim,
    ];
    (0..300)
        .flat_map(|i| {
            let kind = kinds[i % 4];
            let d = match kind {
                EnsembleKind::OneDim => 1,
                EnsembleKind::DiffMean => 2 + (i / 4) % 7,
                _ => 1 + (i / 4) % 8,
            };
            generate(&EnsembleSpec::new(kind, d, 1, 70_000 + i as u64)).unwrap()
        })
        .collect()
}

fn mixed_oracles(ens: &[GaussianPair]) -> Vec<gaussian_tv::OracleEstimate> {
    let tol = Tolerances::default();
    ens.par_iter()
        .enumerate()
        .map(|(i, p)| oracle(&p.first, &p.second, SAMPLES, 300 + i as u64, &tol).unwrap())
        .collect()
}

fn ac7(ens: &[GaussianPair], oracles: &[gaussian_tv::OracleEstimate]) -> Outcome {
    let tol = Tolerances::default();
    let mut failures = Vec::new();
    for (i, (p, e)) in ens.iter().zip(oracles).enumerate() {
        let w = four_sigma(e);
        for (a, b) in [(&p.first, &p.second), (&p.second, &p.first)] {
            let h2 = hellinger_squared(a, b, &tol).unwrap();
            let upper = (h2 * (2.0 - h2)).sqrt();
            if h2 > e.estimate + w || e.estimate - w > upper {
                failures.push(format!(
                    "pair {i}: {} vs [{h2}, {upper}] +/- {w}",
                    e.estimate
                ));
            }
        }
    }
    outcome(
        &failures,
        "300 mixed pairs inside [h^2, h sqrt(2-h^2)]".into(),
    )
}

fn ac8(ens: &[GaussianPair], oracles: &[gaussian_tv::OracleEstimate]) -> Outcome {
    let tol = Tolerances::default();
    let mut failures = Vec::new();
    for (i, (p, e)) in ens.iter().zip(oracles).enumerate() {
        let w = four_sigma(e);
        for (a, b) in [(&p.first, &p.second), (&p.second, &p.first)] {
            let upper = bound_pinsker_kl(a, b, &tol).unwrap().upper;
            if e.estimate - w > upper {
                failures.push(format!("pair {i}: {} above {upper} + {w}", e.estimate));
            }
        }
    }
    outcome(
        &failures,
        "300 mixed pairs below sqrt(KL/2), both orders".into(),
    )
}

fn ac9() -> Outcome {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(90_000);
    let mut failures = Vec::new();

    // congruence invariance of the relative spectrum
    for case in 0..200 {
        let d = 1 + case % 8;
        let s1 = random_spd(&mut rng, d, 100.0);
        let s2 = random_spd(&mut rng, d, 100.0);
        let a = random_invertible(&mut rng, d, 3.0);
        let base = sorted(
            relative_spectrum(&s1, &s2, tol.rank_tol)
                .unwrap()
                .lambdas
                .as_slice()
                .to_vec(),
        );
        let moved = sorted(
            relative_spectrum(
                &(&a * &s1 * a.transpose()),
                &(&a * &s2 * a.transpose()),
                tol.rank_tol,
            )
            .unwrap()
            .lambdas
            .as_slice()
            .to_vec(),
        );
        let err = base
            .iter()
            .zip(&moved)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        if err > 1e-6 {
            failures.push(format!("congruence case {case}: max deviation {err}"));
        }
    }

    // term_spec does not depend on the complement basis
    for case in 0..200 {
        let d = 2 + case % 7;
        let p = &generate(&EnsembleSpec::new(
            EnsembleKind::DiffMean,
            d,
            1,
            91_000 + case as u64,
        ))
        .unwrap()[0];
        let own = MeanGapDecomposition::new(&p.first, &p.second, &tol).unwrap();
        let other_basis =
            orthonormal_columns(own.projector() * gaussian_matrix(&mut rng, d, d - 1));
        let other =
            MeanGapDecomposition::with_basis(&p.first, &p.second, other_basis, &tol).unwrap();
        let err = (own.term_spec - other.term_spec).abs();
        if err > 1e-8 * own.term_spec.max(1.0) {
            failures.push(format!(
                "basis case {case}: {} vs {}",
                own.term_spec, other.term_spec
            ));
        }
    }

    // swapping the arguments changes min{1,rho} by at most a factor of two
    for case in 0..200 {
        let d = 1 + case % 8;
        let p = &generate(&EnsembleSpec::new(
            EnsembleKind::SameMeanPD,
            d,
            1,
            92_000 + case as u64,
        ))
        .unwrap()[0];
        let r12 = relative_spectrum(p.first.cov(), p.second.cov(), tol.rank_tol)
            .unwrap()
            .rho
            .min(1.0);
        let r21 = relative_spectrum(p.second.cov(), p.first.cov(), tol.rank_tol)
            .unwrap()
            .rho
            .min(1.0);
        let ratio = r12 / r21;
        if !(0.5..=2.0).contains(&ratio) {
            failures.push(format!("swap case {case}: ratio {ratio}"));
        }
    }

    // sum of squared lambdas equals tr((S1^{-1} S2 - I)^2), computed by LU
    for case in 0..200 {
        let d = 1 + case % 8;
        let s1 = random_spd(&mut rng, d, 100.0);
        let s2 = random_spd(&mut rng, d, 100.0);
        let rho2 = relative_spectrum(&s1, &s2, tol.rank_tol)
            .unwrap()
            .rho
            .powi(2);
        let m = s1.clone().lu().solve(&s2).unwrap() - DMatrix::identity(d, d);
        let trace = (&m * &m).trace();
        if (rho2 - trace).abs() > 1e-8 * trace.abs().max(f64::MIN_POSITIVE) {
            failures.push(format!("frobenius case {case}: {rho2} vs {trace}"));
        }
    }

    outcome(&failures, "4 x 200 cases".into())
}

fn ac10() -> Outcome {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(100_000);
    let mut failures = Vec::new();
    let mut compared = 0;
    for case in 0..100 {
        let d = 2 + case % 6;
        let p = &generate(&EnsembleSpec::new(
            EnsembleKind::SameRangeSingular,
            d,
            1,
            101_000 + case as u64,
        ))
        .unwrap()[0];
        let full = assess(&p.first, &p.second, &tol).unwrap();
        let range = detect_range(p.first.cov(), tol.rank_tol).unwrap();
        let r = range.rank();
        let basis = range.basis() * common::random_orthogonal(&mut rng, r);
        let pt = basis.transpose();
        let zero = DVector::zeros(r);
        let h1 = gaussian_tv::affine_image(&p.first, &pt, &zero).unwrap();
        let h2 = gaussian_tv::affine_image(&p.second, &pt, &zero).unwrap();
        let reduced = assess(&h1, &h2, &tol).unwrap();
        compared += 1;
        let mut diffs = vec![
            (full.best_lower - reduced.best_lower).abs(),
            (full.best_upper - reduced.best_upper).abs(),
        ];
        if full.intervals.len() != reduced.intervals.len() {
            failures.push(format!("singular case {case}: method sets differ"));
            continue;
        }
        for (a, b) in full.intervals.iter().zip(&reduced.intervals) {
            if a.method != b.method {
                failures.push(format!(
                    "singular case {case}: {:?} vs {:?}",
                    a.method, b.method
                ));
            }
            diffs.push((a.lower - b.lower).abs());
            diffs.push((a.upper - b.upper).abs());
        }
        let err = diffs.into_iter().fold(0.0, f64::max);
        if err > 1e-6 {
            failures.push(format!("singular case {case}: deviation {err}"));
        }
    }
    for case in 0..100 {
        let d = 2 + case % 6;
        let p = &generate(&EnsembleSpec::new(
            EnsembleKind::DisjointSupport,
            d,
            1,
            102_000 + case as u64,
        ))
        .unwrap()[0];
        let report = assess(&p.first, &p.second, &tol).unwrap();
        if report.best_lower != 1.0 || report.best_upper != 1.0 {
            failures.push(format!(
                "disjoint case {case}: [{}, {}]",
                report.best_lower, report.best_upper
            ));
        }
    }
    outcome(
        &failures,
        format!("{compared} singular reductions, 100 disjoint pairs at [1,1]"),
    )
}

fn ac11() -> Outcome {
    let input = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/acceptance_input.json"
    );
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_gaussian-tv"))
            .args([
                "--input",
                input,
                "--oracle",
                "auto",
                "--samples",
                "50000",
                "--seed",
                "17",
            ])
            .args(["--format", "json", "--threads", threads])
            .output()
            .expect("binary runs")
    };
    let runs = [run("1"), run("4"), run("1")];
    let mut failures = Vec::new();
    for (i, r) in runs.iter().enumerate() {
        if r.status.code() != Some(0) {
            failures.push(format!(
                "run {i} exited {:?}: {}",
                r.status.code(),
                String::from_utf8_lossy(&r.stderr)
            ));
        }
    }
    if runs[0].stdout != runs[1].stdout {
        failures.push("1 thread and 4 threads differ".into());
    }
    if runs[0].stdout != runs[2].stdout {
        failures.push("repeated single-thread runs differ".into());
    }
    outcome(
        &failures,
        format!("{} identical bytes across 3 runs", runs[0].stdout.len()),
    )
}

fn main() -> ExitCode {
    let mut results = Vec::new();
    let mut record = |name: &str, title: &str, o: Outcome| {
        println!(
            "{name} {} {title}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push(o.pass);
    };

    let t = Instant::now();
    let o = ac1();
    record(
        "AC1",
        "exact formula agreement",
        within_time(o, t.elapsed(), Duration::from_secs(5)),
    );

    let t = Instant::now();
    let o = ac2();
    record(
        "AC2",
        "same-mean sandwich",
        within_time(o, t.elapsed(), Duration::from_secs(600)),
    );

    let t = Instant::now();
    let o = ac3();
    record(
        "AC3",
        "different-mean sandwich",
        within_time(o, t.elapsed(), Duration::from_secs(600)),
    );

    let t = Instant::now();
    let o = ac4();
    record(
        "AC4",
        "one-dimensional sandwich",
        within_time(o, t.elapsed(), Duration::from_secs(30)),
    );

    record("AC5", "normal CDF facts", ac5());
    record("AC6", "small variance changes", ac6());

    let ens = mixed_ensemble();
    let oracles = mixed_oracles(&ens);
    record("AC7", "Hellinger sandwich", ac7(&ens, &oracles));
    record("AC8", "Pinsker bound", ac8(&ens, &oracles));

    record("AC9", "invariance suite", ac9());
    record("AC10", "degenerate dispatch", ac10());
    record("AC11", "CLI determinism", ac11());

    let failed = results.iter().filter(|p| !**p).count();
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
