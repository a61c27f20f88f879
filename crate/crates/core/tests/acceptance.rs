//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them). Stochastic checks
//! use fixed seeds, so every run is a reproducible pass/fail verdict.

mod common;

use std::time::Instant;

use dcor::seeding::{derive_seed, substream_rng};
use dcor::{
    bias_study, dcor, dcor_matrix, dvar2, double_center, generate, generate_matrix,
    pairwise_distances, pearson, power_study, top_eigen, BiasStudyConfig, BiasStudyResult,
    EstimatorVariant, GeneratorKind, GeneratorParams, GeneratorSpec, PairedSample,
    PowerStudyConfig, Sample, TestStatistic,
};
use ndarray::Array2;
use rand::Rng;
use rand_distr::StandardNormal;

fn check(num: u32, name: &str, limit_secs: f64, body: impl FnOnce() -> Result<(), String>) {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed().as_secs_f64();
    let ok = result.is_ok() && elapsed <= limit_secs;
    println!("criterion {num:02} {name}: {} ({elapsed:.2}s)", if ok { "PASS" } else { "FAIL" });
    if let Err(msg) = result {
        panic!("criterion {num:02} {name}: {msg}");
    }
    assert!(
        elapsed <= limit_secs,
        "criterion {num:02} {name}: took {elapsed:.2}s, limit {limit_secs}s"
    );
}

fn normal_sample(rng: &mut rand_chacha::ChaCha8Rng, n: usize, d: usize) -> Sample {
    Sample::new(Array2::from_shape_fn((n, d), |_| {
        rng.sample::<f64, _>(StandardNormal)
    }))
    .unwrap()
}

fn rows_of(s: &Sample) -> Vec<Vec<f64>> {
    (0..s.n()).map(|k| s.data().row(k).to_vec()).collect()
}

#[test]
fn criterion_01_oracle_equivalence() {
    check(1, "oracle equivalence", 10.0, || {
        let mut rng = substream_rng(0xD15C0, &[]);
        for case in 0..100u64 {
            let n = rng.random_range(2..=50);
            let dx = rng.random_range(1..=10);
            let dy = rng.random_range(1..=10);
            let x = normal_sample(&mut rng, n, dx);
            let y = normal_sample(&mut rng, n, dy);
            let (xr, yr) = (rows_of(&x), rows_of(&y));
            let pair = PairedSample::new(x, y).map_err(|e| e.to_string())?;
            for variant in [EstimatorVariant::Naive, EstimatorVariant::NoDiag] {
                let est = dcor(&pair, variant).map_err(|e| e.to_string())?;
                let want = common::estimate(&xr, &yr, variant);
                common::rel_close(est.dcov2, want.dcov2, 1e-12, want.dcov2_floor)
                    .map_err(|e| format!("case {case} {variant:?} dcov2: {e}"))?;
                common::rel_close(est.dvar2_x, want.dvar2_x, 1e-12, 0.0)
                    .map_err(|e| format!("case {case} {variant:?} dvar2_x: {e}"))?;
                common::rel_close(est.dvar2_y, want.dvar2_y, 1e-12, 0.0)
                    .map_err(|e| format!("case {case} {variant:?} dvar2_y: {e}"))?;
                common::rel_close(est.dcor, want.dcor, 1e-12, want.dcor_floor)
                    .map_err(|e| format!("case {case} {variant:?} dcor: {e}"))?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_02_orthogonal_invariance() {
    check(2, "orthogonal invariance", 5.0, || {
        let mut rng = substream_rng(0x0C7A, &[]);
        for case in 0..50u64 {
            let d = rng.random_range(1..=10);
            let spec = GeneratorSpec {
                kind: GeneratorKind::OrthogonalPair,
                n: rng.random_range(3..=100),
                dx: d,
                dy: d,
                params: GeneratorParams {
                    scale: rng.random_range(0.1..5.0),
                    shift: rng.random_range(-3.0..3.0),
                    frequency: 4.0,
                },
                seed: derive_seed(0x0C7A, &[case]),
            };
            let pair = generate(&spec).map_err(|e| e.to_string())?;
            let est = dcor(&pair, EstimatorVariant::Naive).map_err(|e| e.to_string())?;
            if (est.dcor - 1.0).abs() > 1e-9 {
                return Err(format!(
                    "case {case}: naive dcor {} differs from 1 by more than 1e-9",
                    est.dcor
                ));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_03_hand_derived_fixtures() {
    check(3, "hand-derived fixtures", f64::INFINITY, || {
        let a = double_center(&pairwise_distances(
            &Sample::from_column(&[0.0, 1.0, 3.0]).unwrap(),
        ));
        let naive = dvar2(&a, EstimatorVariant::Naive).map_err(|e| e.to_string())?;
        let nodiag = dvar2(&a, EstimatorVariant::NoDiag).map_err(|e| e.to_string())?;
        common::rel_close(naive, 32.0 / 27.0, 1e-12, 0.0)
            .map_err(|e| format!("naive dvar2: {e}"))?;
        common::rel_close(nodiag, 20.0 / 27.0, 1e-12, 0.0)
            .map_err(|e| format!("nodiag dvar2: {e}"))?;

        let mut rng = substream_rng(0xF1D0, &[]);
        for case in 0..100u64 {
            let x0: f64 = rng.random_range(-10.0..10.0);
            let dx: f64 = rng.random_range(0.05..10.0);
            let y0: f64 = rng.random_range(-10.0..10.0);
            let dy: f64 = rng.random_range(0.05..10.0);
            let pair = PairedSample::new(
                Sample::from_column(&[x0, x0 + dx]).unwrap(),
                Sample::from_column(&[y0, y0 - dy]).unwrap(),
            )
            .unwrap();
            let est = dcor(&pair, EstimatorVariant::Naive).map_err(|e| e.to_string())?;
            if (est.dcor - 1.0).abs() > 1e-12 {
                return Err(format!("case {case}: n=2 naive dcor = {}", est.dcor));
            }
        }
        Ok(())
    });
}

fn dimension_study() -> BiasStudyResult {
    bias_study(&BiasStudyConfig {
        n_grid: vec![10],
        p_grid: vec![1, 10, 100],
        replicates: 500,
        variants: vec![EstimatorVariant::Naive, EstimatorVariant::NoDiag],
        seed: 40404,
    })
    .expect("valid config")
}

fn sample_size_study() -> BiasStudyResult {
    bias_study(&BiasStudyConfig {
        n_grid: vec![10, 50, 200],
        p_grid: vec![10],
        replicates: 500,
        variants: vec![EstimatorVariant::Naive, EstimatorVariant::NoDiag],
        seed: 50505,
    })
    .expect("valid config")
}

fn naive_means(result: &BiasStudyResult) -> Vec<(usize, usize, f64)> {
    result
        .rows
        .iter()
        .filter(|r| r.variant == EstimatorVariant::Naive)
        .map(|r| (r.n, r.p, r.mean_dcor))
        .collect()
}

#[test]
fn criterion_04_bias_grows_with_dimension() {
    check(4, "bias grows with dimension", 60.0, || {
        let means = naive_means(&dimension_study());
        for w in means.windows(2) {
            if w[1].2 <= w[0].2 {
                return Err(format!(
                    "naive mean dcor not strictly increasing in p: {means:?}"
                ));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_05_bias_shrinks_with_sample_size() {
    check(5, "bias shrinks with sample size", 120.0, || {
        let means = naive_means(&sample_size_study());
        for w in means.windows(2) {
            if w[1].2 >= w[0].2 {
                return Err(format!(
                    "naive mean dcor not strictly decreasing in n: {means:?}"
                ));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_06_diagonal_exclusion_shrinks_dcov2() {
    check(6, "diagonal exclusion shrinks dcov2", f64::INFINITY, || {
        for study in [dimension_study(), sample_size_study()] {
            for pair in study.rows.chunks(2) {
                let (naive, nodiag) = (&pair[0], &pair[1]);
                assert_eq!(naive.variant, EstimatorVariant::Naive);
                assert_eq!(nodiag.variant, EstimatorVariant::NoDiag);
                if naive.mean_dcov2 <= 0.0 {
                    return Err(format!(
                        "cell (n={}, p={}): naive mean dcov2 not positive: {}",
                        naive.n, naive.p, naive.mean_dcov2
                    ));
                }
                if nodiag.mean_dcov2.abs() >= naive.mean_dcov2 {
                    return Err(format!(
                        "cell (n={}, p={}): |nodiag mean dcov2| {} >= naive {}",
                        naive.n, naive.p, nodiag.mean_dcov2.abs(), naive.mean_dcov2
                    ));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_07_permutation_test_size() {
    check(7, "permutation test size", 300.0, || {
        let rows = power_study(&PowerStudyConfig {
            n_grid: vec![30],
            p_grid: vec![1],
            replicates: 1000,
            variants: vec![EstimatorVariant::Naive, EstimatorVariant::NoDiag],
            seed: 70707,
            kind: GeneratorKind::IndependentPair,
            params: GeneratorParams::default(),
            alpha: 0.05,
            test_replicates: 199,
            statistic: TestStatistic::Dcor,
        })
        .map_err(|e| e.to_string())?;
        for row in rows {
            if !(0.03..=0.07).contains(&row.rejection_rate) {
                return Err(format!(
                    "{} empirical size {} outside [0.03, 0.07]",
                    row.variant.name(),
                    row.rejection_rate
                ));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_08_spurious_leading_component() {
    check(8, "spurious leading component", 180.0, || {
        let replicates = 200;
        let p = 20;
        let mut naive_leads = 0usize;
        let mut aligned = 0usize;
        for rep in 0..replicates {
            let sample = generate_matrix(&GeneratorSpec {
                kind: GeneratorKind::GaussianIid,
                n: 10,
                dx: p,
                dy: 1,
                params: GeneratorParams::default(),
                seed: derive_seed(80808, &[rep as u64]),
            })
            .map_err(|e| e.to_string())?;
            let m_naive =
                dcor_matrix(sample.data(), EstimatorVariant::Naive).map_err(|e| e.to_string())?;
            let m_nodiag =
                dcor_matrix(sample.data(), EstimatorVariant::NoDiag).map_err(|e| e.to_string())?;
            let e_naive = top_eigen(&m_naive, 1).map_err(|e| e.to_string())?;
            let e_nodiag = top_eigen(&m_nodiag, 1).map_err(|e| e.to_string())?;
            if e_naive.eigenvalues[0] > e_nodiag.eigenvalues[0] {
                naive_leads += 1;
            }
            // Leading eigenvector is unit length, so the cosine with the
            // uniform direction is the component sum over sqrt(p).
            let cosine = (0..p).map(|i| e_naive.eigenvectors[[i, 0]]).sum::<f64>()
                / (p as f64).sqrt();
            if cosine >= 0.9 {
                aligned += 1;
            }
        }
        let lead_rate = naive_leads as f64 / replicates as f64;
        let align_rate = aligned as f64 / replicates as f64;
        if lead_rate < 0.95 {
            return Err(format!("naive leading eigenvalue wins only {lead_rate} of runs"));
        }
        if align_rate < 0.90 {
            return Err(format!("uniform-vector cosine >= 0.9 in only {align_rate} of runs"));
        }
        Ok(())
    });
}

#[test]
fn criterion_09_monotone_vs_nonmonotone() {
    check(9, "monotone vs nonmonotone", 30.0, || {
        let replicates = 200;
        let mut monotone_gap = 0.0;
        let mut nonmonotone_gap = 0.0;
        for rep in 0..replicates {
            let spec = |kind, tag: u64| GeneratorSpec {
                kind,
                n: 100,
                dx: 1,
                dy: 1,
                params: GeneratorParams::default(),
                seed: derive_seed(90909, &[tag, rep as u64]),
            };
            let mono = generate(&spec(GeneratorKind::MonotonePair, 0)).map_err(|e| e.to_string())?;
            let est = dcor(&mono, EstimatorVariant::Naive).map_err(|e| e.to_string())?;
            let r = pearson(
                &mono.x().data().column(0).to_vec(),
                &mono.y().data().column(0).to_vec(),
            )
            .map_err(|e| e.to_string())?;
            monotone_gap += (est.dcor - r.abs()).abs();

            let bump = generate(&spec(GeneratorKind::NonmonotonePair, 1)).map_err(|e| e.to_string())?;
            let est = dcor(&bump, EstimatorVariant::Naive).map_err(|e| e.to_string())?;
            let r = pearson(
                &bump.x().data().column(0).to_vec(),
                &bump.y().data().column(0).to_vec(),
            )
            .map_err(|e| e.to_string())?;
            nonmonotone_gap += est.dcor - r.abs();
        }
        let monotone_gap = monotone_gap / replicates as f64;
        let nonmonotone_gap = nonmonotone_gap / replicates as f64;
        if monotone_gap >= 0.15 {
            return Err(format!(
                "monotone mean |dcor - |pearson|| = {monotone_gap}, expected < 0.15"
            ));
        }
        if nonmonotone_gap < 0.2 {
            return Err(format!(
                "nonmonotone mean (dcor - |pearson|) = {nonmonotone_gap}, expected >= 0.2"
            ));
        }
        Ok(())
    });
}

#[test]
fn criterion_10_byte_for_byte_determinism() {
    check(10, "byte-for-byte determinism", f64::INFINITY, || {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let path = |name: &str| dir.path().join(name).display().to_string();

        // The full argv of every stochastic acceptance-scale run, repeated
        // with identical seeds; output files must match exactly.
        let runs: Vec<Vec<String>> = vec![
            vec![
                "bias-study", "--n-grid", "10", "--p-grid", "1,10,100",
                "--replicates", "500", "--seed", "40404",
            ],
            vec![
                "bias-study", "--n-grid", "10,50,200", "--p-grid", "10",
                "--replicates", "500", "--seed", "50505",
            ],
            vec![
                "power-study", "--n-grid", "30", "--p-grid", "1",
                "--replicates", "1000", "--test-replicates", "199",
                "--kind", "independent", "--seed", "70707",
            ],
            vec![
                "generate", "--kind", "orthogonal", "--n", "50", "--dx", "4",
                "--dy", "4", "--seed", "8080",
            ],
            vec![
                "test", "--x-file", &path("gen_0.csv"), "--y-file", &path("gen_0.csv"),
                "--x", "0..4", "--y", "4..8", "--replicates", "199", "--seed", "313",
            ],
        ]
        .into_iter()
        .map(|v| v.into_iter().map(String::from).collect())
        .collect();

        for (i, run) in runs.iter().enumerate() {
            let mut outputs = Vec::new();
            for attempt in 0..2 {
                let out = path(&format!("{}_{attempt}.csv", run[0]));
                // The generate output feeds the later `test` run; write the
                // attempt-0 file under the name that run expects.
                let out = if run[0] == "generate" && attempt == 0 {
                    path("gen_0.csv")
                } else {
                    out
                };
                let mut argv: Vec<String> = vec!["dcor".into()];
                argv.extend(run.iter().cloned());
                argv.push("--out".into());
                argv.push(out.clone());
                let code = dcor::cli::run(argv);
                if code != 0 {
                    return Err(format!("run {i} attempt {attempt} exited {code}"));
                }
                outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
            }
            if outputs[0] != outputs[1] {
                return Err(format!("run {i} ({}) produced different bytes", run[0]));
            }
        }
        Ok(())
    });
}
