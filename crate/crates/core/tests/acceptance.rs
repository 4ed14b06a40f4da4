//! Acceptance checks. Each test prints one `criterion N PASS|FAIL` line.
//!
//! Run with `cargo test -p annosched-core --test acceptance -- --nocapture`
//! to see the lines.

use std::collections::BTreeMap;
use std::fs;
use std::time::{Duration, Instant};

use annosched_core::classifier::{roc_auc, ClassifierParams, OnlineClassifier};
use annosched_core::decay::{decaying_score, DecayParams, DecayPreset};
use annosched_core::oracle::{OracleConfig, OracleState};
use annosched_core::sampling::{pick_discarded, ErrorMatrix, SamplerPolicy};
use annosched_core::schedules::{
    analyze_cases, gap_accuracy_curve, lab_stream, mistake_schedule, monotone_trend, permute_targets,
    simulate_responses, slip_schedule, AnnotationSchedule, GapCurve, InstancePools, JudgeResponses, ResponseSet,
    SignificanceTest, FILLER_CLASS, TARGET_CLASS,
};
use annosched_core::simulation::{compare, replay, run, RunManifest, SimulationConfig, MANIFEST_FILE};
use annosched_core::{ClassLabel, FeatureVector, StreamInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, pass: bool, elapsed: Duration, detail: impl std::fmt::Display) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n} {status} ({:.2}s): {detail}", elapsed.as_secs_f64());
}

// The decay sigmoid evaluated independently (Python, float64) for the
// SLOW and FAST parameter sets.
const SLOW_REFERENCE: [(f64, f64); 4] = [
    (0.0, 0.21640276325234906),
    (10.0, 0.28872850116227056),
    (50.0, 0.5852358665886244),
    (200.0, 0.749685837768039),
];
const FAST_REFERENCE: [(f64, f64); 4] = [
    (0.0, 0.2689414213699951),
    (10.0, 0.3318122278318339),
    (50.0, 0.6224593312018546),
    (200.0, 0.9933071490757153),
];

#[test]
fn criterion_1_decay_constants() {
    let start = Instant::now();
    let slow = DecayParams {
        alpha: 0.0434,
        beta: 0.9025,
        gamma: 0.75,
    };
    let fast = DecayParams {
        alpha: 0.03,
        beta: 1.00,
        gamma: 1.00,
    };
    assert_eq!(DecayPreset::Slow.params(), slow);
    assert_eq!(DecayPreset::Fast.params(), fast);

    let mut worst: f64 = 0.0;
    for (params, table) in [(slow, SLOW_REFERENCE), (fast, FAST_REFERENCE)] {
        for (t, expected) in table {
            worst = worst.max((decaying_score(&params, t).unwrap() - expected).abs());
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-9 && elapsed < Duration::from_secs(1);
    report(
        1,
        pass,
        elapsed,
        format!("max abs deviation {worst:.3e} (tolerance 1e-9)"),
    );
    assert!(pass);
}

#[test]
fn criterion_2_oracle_calibration() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for preset in DecayPreset::ALL {
        for (k, t) in [1.0, 10.0, 50.0, 200.0].into_iter().enumerate() {
            let config = OracleConfig {
                params: preset.params(),
                error_target_policy: Default::default(),
                clock: Default::default(),
                seed: 1000 + k as u64,
            };
            let mut oracle = OracleState::new(config, 4).unwrap();
            let truth = ClassLabel::new(2);
            let draws = 10_000;
            let errors = (0..draws).filter(|_| oracle.draw_label(truth, t).0 != truth).count();
            let rate = errors as f64 / draws as f64;
            let expected = decaying_score(&preset.params(), t).unwrap();
            worst = worst.max((rate - expected).abs());
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= 0.02 && elapsed < Duration::from_secs(10);
    report(
        2,
        pass,
        elapsed,
        format!("max |empirical - expected| {worst:.4} over 12 cells (tolerance 0.02)"),
    );
    assert!(pass);
}

// Independent F1 for the from-scratch error-matrix recomputation.
fn brute_f1(truth: &[usize], predicted: &[usize], class: usize) -> Option<f64> {
    let tp = truth
        .iter()
        .zip(predicted)
        .filter(|(t, p)| **t == class && **p == class)
        .count();
    let fp = truth
        .iter()
        .zip(predicted)
        .filter(|(t, p)| **t != class && **p == class)
        .count();
    let fn_ = truth
        .iter()
        .zip(predicted)
        .filter(|(t, p)| **t == class && **p != class)
        .count();
    if tp + fn_ == 0 {
        return None;
    }
    let precision = if tp + fp == 0 {
        0.0
    } else {
        tp as f64 / (tp + fp) as f64
    };
    let recall = tp as f64 / (tp + fn_) as f64;
    Some(if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    })
}

fn argmax_lowest(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

struct BruteRow {
    interval: usize,
    event: usize,
    class: usize,
    x: Vec<f64>,
    grid: Vec<Vec<f64>>,
}

#[test]
fn criterion_3_error_matrix_equivalence() {
    let start = Instant::now();
    let k = 4;
    let dim = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut worst_grid: f64 = 0.0;
    let mut worst_score: f64 = 0.0;
    let mut discard_mismatches = 0;

    for seq in 0..200 {
        let n_events = rng.random_range(1..=100);
        let mut matrix = ErrorMatrix::new(k);
        let mut brute: Vec<BruteRow> = Vec::new();
        let mut last_grid = vec![vec![0.0; k]; k];
        let mut interval = 1;

        for e in 0..n_events {
            if rng.random_bool(0.15) {
                interval += rng.random_range(1..=2);
            }
            let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let class = rng.random_range(0..k);
            let weights: Vec<f64> = (0..k * dim).map(|_| rng.random_range(-2.0..2.0)).collect();
            let biases: Vec<f64> = (0..k).map(|_| rng.random_range(-0.5..0.5)).collect();
            let model =
                OnlineClassifier::from_parts(weights.clone(), biases.clone(), ClassifierParams::default()).unwrap();

            matrix.update(
                &format!("s{seq}e{e}"),
                e as f64,
                FeatureVector::new(x.clone()).unwrap(),
                ClassLabel::from_offset(class),
                &model,
                interval,
            );

            // from scratch: prune, copy forward, recompute the annotated column
            brute.retain(|r| r.interval + 2 >= interval);
            let mut grid = last_grid.clone();
            let predict = |x: &[f64]| {
                let scores: Vec<f64> = (0..k)
                    .map(|c| biases[c] + (0..dim).map(|d| weights[c * dim + d] * x[d]).sum::<f64>())
                    .collect();
                argmax_lowest(&scores)
            };
            let mut truth: Vec<usize> = brute.iter().map(|r| r.class).collect();
            let mut predicted: Vec<usize> = brute.iter().map(|r| predict(&r.x)).collect();
            truth.push(class);
            predicted.push(predict(&x));
            for (i, row) in grid.iter_mut().enumerate() {
                row[class] = brute_f1(&truth, &predicted, i).map_or(0.0, |f| 1.0 - f);
            }
            last_grid = grid.clone();
            brute.push(BruteRow {
                interval,
                event: e + 1,
                class,
                x,
                grid,
            });
        }

        assert_eq!(matrix.rows().len(), brute.len());
        for (row, b) in matrix.rows().iter().zip(&brute) {
            for i in 0..k {
                for j in 0..k {
                    worst_grid = worst_grid.max((row.errors[i * k + j] - b.grid[i][j]).abs());
                }
            }
        }

        let mut finals = Vec::new();
        for c in 0..k {
            let label = ClassLabel::from_offset(c);
            let ea: f64 = brute.iter().map(|r| (0..k).map(|i| r.grid[i][c]).sum::<f64>()).sum();
            let events: Vec<usize> = brute.iter().filter(|r| r.class == c).map(|r| r.event).collect();
            let decay = match events.len() {
                0 | 1 => 0.0,
                n => (-((events[n - 1] - events[n - 2]) as f64)).exp(),
            };
            worst_score = worst_score
                .max((matrix.error_avoidance_score(label) - ea).abs())
                .max((matrix.decay_score(label) - decay).abs())
                .max((matrix.final_score(label) - ea * decay).abs());
            finals.push(ea * decay);
        }
        let best = finals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let expected = if best > 0.0 && finals.iter().filter(|&&s| s == best).count() == 1 {
            Some(ClassLabel::from_offset(finals.iter().position(|&s| s == best).unwrap()))
        } else {
            None
        };
        if matrix.discarded_class(interval, 3) != if interval > 3 { expected } else { None } {
            discard_mismatches += 1;
        }
        assert_eq!(pick_discarded(&finals), expected);
    }

    let elapsed = start.elapsed();
    let pass =
        worst_grid <= 1e-9 && worst_score <= 1e-9 && discard_mismatches == 0 && elapsed < Duration::from_secs(60);
    report(
        3,
        pass,
        elapsed,
        format!("200 sequences; grid deviation {worst_grid:.2e}, score deviation {worst_score:.2e}, discard mismatches {discard_mismatches}"),
    );
    assert!(pass);
}

fn crowd_pools() -> InstancePools {
    InstancePools::from_instances((1..=4).flat_map(|c| {
        (0..12)
            .map(move |i| StreamInstance::new(format!("c{c}-{i}"), 0.0, format!("tweet {c} {i}"), ClassLabel::new(c)))
    }))
}

#[test]
fn criterion_4_schedule_fidelity() {
    let start = Instant::now();
    let pools = crowd_pools();
    let slip = slip_schedule(&pools).unwrap();
    let mistake = mistake_schedule(&pools).unwrap();
    let published_slip = [4, 1, 2, 3, 1, 3, 4, 1, 4, 1, 4, 2, 1, 4, 1, 2, 4, 2, 4, 3].map(ClassLabel::new);
    let published_mistake = [4, 1, 2, 1, 4, 2, 1, 4, 3, 1, 2, 4, 3, 1, 2, 1, 3, 2, 4, 4].map(ClassLabel::new);

    let mut ok = slip.classes() == published_slip
        && mistake.classes() == published_mistake
        && slip.target_positions == [4, 6, 20]
        && mistake.target_positions == [9, 13, 17];

    let targets: Vec<StreamInstance> = (0..3)
        .map(|i| StreamInstance::new(format!("target-{i}"), 0.0, "", TARGET_CLASS))
        .collect();
    for schedule in [&slip, &mistake] {
        let cases = permute_targets(schedule, &targets).unwrap();
        let distinct: std::collections::HashSet<Vec<String>> = cases
            .iter()
            .map(|c| {
                c.target_positions
                    .iter()
                    .map(|&p| c.entries[p - 1].instance.id.clone())
                    .collect()
            })
            .collect();
        ok &= cases.len() == 6 && distinct.len() == 6;
        ok &= cases.iter().all(|c| c.classes() == schedule.classes());
    }
    let elapsed = start.elapsed();
    report(
        4,
        ok,
        elapsed,
        "slip/mistake sequences, target positions and 6 distinct permutations each",
    );
    assert!(ok);
}

/// Ten judges per case; `pattern[j]` lists which target slots judge `j`
/// (numbered across all six cases) answers wrongly.
fn fixture_responses(
    cases: &[AnnotationSchedule],
    patterns: &[(usize, [bool; 3])],
) -> Vec<(AnnotationSchedule, ResponseSet)> {
    let mut per_judge: Vec<[bool; 3]> = Vec::new();
    for (count, pattern) in patterns {
        per_judge.extend(std::iter::repeat_n(*pattern, *count));
    }
    per_judge.resize(60, [false; 3]);
    cases
        .iter()
        .enumerate()
        .map(|(c, schedule)| {
            let judges = (0..10)
                .map(|j| {
                    let wrong = per_judge[c * 10 + j];
                    let mut labels = schedule.classes();
                    for (slot, &p) in schedule.target_positions.iter().enumerate() {
                        if wrong[slot] {
                            labels[p - 1] = ClassLabel::new(1);
                        }
                    }
                    JudgeResponses {
                        judge_id: format!("case{c}-judge{j}"),
                        labels,
                    }
                })
                .collect();
            (schedule.clone(), ResponseSet { judges })
        })
        .collect()
}

#[test]
fn criterion_5_table_2_fixture() {
    let start = Instant::now();
    let pools = crowd_pools();
    let targets: Vec<StreamInstance> = (0..3)
        .map(|i| StreamInstance::new(format!("target-{i}"), 0.0, "", TARGET_CLASS))
        .collect();
    let slip_cases = permute_targets(&slip_schedule(&pools).unwrap(), &targets).unwrap();
    let mistake_cases = permute_targets(&mistake_schedule(&pools).unwrap(), &targets).unwrap();

    // slip: 18 / 14 / 19 errors of 60; mistake: 16 / 23 / 17 of 60
    let slip = fixture_responses(
        &slip_cases,
        &[
            (14, [true, true, true]),
            (4, [true, false, true]),
            (1, [false, false, true]),
        ],
    );
    let mistake = fixture_responses(
        &mistake_cases,
        &[
            (16, [true, true, true]),
            (1, [false, true, true]),
            (6, [false, true, false]),
        ],
    );

    let slip_report = analyze_cases(&slip, SignificanceTest::PairedT).unwrap();
    let mistake_report = analyze_cases(&mistake, SignificanceTest::PairedT).unwrap();
    let rounded = |r: &[f64]| r.iter().map(|v| (v * 100.0).round() as i64).collect::<Vec<_>>();

    let rates_ok =
        rounded(&slip_report.error_rates) == [30, 23, 32] && rounded(&mistake_report.error_rates) == [27, 38, 28];
    let split_ok = slip_report.p_value < 0.05 && mistake_report.p_value >= 0.05;
    let z_slip = analyze_cases(&slip, SignificanceTest::TwoProportionZ).unwrap().p_value;
    let z_mistake = analyze_cases(&mistake, SignificanceTest::TwoProportionZ)
        .unwrap()
        .p_value;

    let elapsed = start.elapsed();
    let pass = rates_ok && split_ok && elapsed < Duration::from_secs(1);
    report(
        5,
        pass,
        elapsed,
        format!(
            "slip rates {:.4?} p={:.4}; mistake rates {:.4?} p={:.4} (paired t); z-test for reference: slip p={z_slip:.3}, mistake p={z_mistake:.3}",
            slip_report.error_rates, slip_report.p_value, mistake_report.error_rates, mistake_report.p_value
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_decay_curve_trend() {
    let start = Instant::now();
    let mut pooled = GapCurve::default();
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ground_truth: Vec<StreamInstance> = (0..400)
            .map(|i| StreamInstance::new(format!("g{i}"), 0.0, "", ClassLabel::new(rng.random_range(1..=3))))
            .collect();
        let noise: Vec<StreamInstance> = (0..800)
            .map(|i| StreamInstance::new(format!("n{i}"), 0.0, "", FILLER_CLASS))
            .collect();
        let stream = lab_stream(&ground_truth, &noise, 1..=4, Some(800), seed).unwrap();
        assert_eq!(stream.len(), 800);
        let config = OracleConfig {
            params: DecayPreset::Fast.params(),
            error_target_policy: Default::default(),
            clock: Default::default(),
            seed: 500 + seed,
        };
        let mut oracle = OracleState::new(config, 4).unwrap();
        let responses = ResponseSet {
            judges: vec![simulate_responses(&stream, &mut oracle, format!("sim{seed}"))],
        };
        pooled.merge(&gap_accuracy_curve(&stream, &responses).unwrap());
    }
    let rows = pooled.pooled();
    let trend = monotone_trend(&rows, 30);
    let elapsed = start.elapsed();
    let pass = trend.non_increasing && elapsed < Duration::from_secs(60);
    let shape: Vec<String> = rows
        .iter()
        .filter(|r| r.1 >= 30)
        .map(|(g, t, c)| format!("{g}:{:.2}", *c as f64 / *t as f64))
        .collect();
    report(
        6,
        pass,
        elapsed,
        format!(
            "slope {:.5} (z {:.1}), max adjacent increase z {:.2}, {} gaps; correct fraction by gap [{}]",
            trend.slope,
            trend.slope_z,
            trend.max_increase_z,
            trend.gaps_used,
            shape.join(" ")
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_policy_ordering() {
    let start = Instant::now();
    let seeds = 0..10u64;
    let mut final_auc: BTreeMap<(&str, &str), f64> = BTreeMap::new();
    let mut mean_auc: BTreeMap<(&str, &str), f64> = BTreeMap::new();
    let mut early_identical = true;
    let mut n_intervals = usize::MAX;

    for seed in seeds.clone() {
        let mut configs = Vec::new();
        for decay in [DecayPreset::Fast, DecayPreset::None] {
            for policy in SamplerPolicy::ALL {
                let mut c = SimulationConfig::synthetic(25, seed);
                c.decay = decay.into();
                c.policy = policy;
                configs.push(c);
            }
        }
        let cmp = compare(&configs).unwrap();
        n_intervals = n_intervals.min(cmp.n_intervals());
        for r in &cmp.runs {
            let key = (r.decay.as_str(), r.policy.name());
            let key = (if key.0 == "fast" { "fast" } else { "none" }, key.1);
            *final_auc.entry(key).or_default() += r.output.final_macro_auc() / 10.0;
            *mean_auc.entry(key).or_default() += r.output.mean_macro_auc() / 10.0;
        }
        for decay in ["fast", "none"] {
            let sel = |p: SamplerPolicy| {
                cmp.runs
                    .iter()
                    .find(|r| r.decay == decay && r.policy == p)
                    .unwrap()
                    .output
                    .selections()
            };
            early_identical &= sel(SamplerPolicy::ErrorAvoidance)[..3] == sel(SamplerPolicy::Uncertainty)[..3];
        }
    }

    let ea = final_auc[&("fast", "error_avoidance")];
    let unc = final_auc[&("fast", "uncertainty")];
    let rnd = final_auc[&("fast", "random")];
    let none: Vec<f64> = SamplerPolicy::ALL
        .iter()
        .map(|p| mean_auc[&("none", p.name())])
        .collect();
    let none_spread =
        none.iter().copied().fold(f64::NEG_INFINITY, f64::max) - none.iter().copied().fold(f64::INFINITY, f64::min);

    let a = ea >= unc && ea - rnd >= 0.03;
    let b = none_spread <= 0.05;
    let elapsed = start.elapsed();
    let pass = a && b && early_identical && n_intervals >= 20 && elapsed < Duration::from_secs(600);
    report(
        7,
        pass,
        elapsed,
        format!(
            "(a) fast final AUC ea {ea:.4} unc {unc:.4} rnd {rnd:.4}, ea-unc {:+.4}, ea-rnd {:+.4} [{}]; (b) none mean AUC spread {none_spread:.4} [{}]; (c) first three intervals identical [{}]; {n_intervals} intervals",
            ea - unc,
            ea - rnd,
            if a { "ok" } else { "not met" },
            if b { "ok" } else { "not met" },
            if early_identical { "ok" } else { "not met" },
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_numerical_soundness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_grad: f64 = 0.0;
    let h = 1e-6;
    for _ in 0..50 {
        let k = rng.random_range(2..=5);
        let d = rng.random_range(1..=6);
        let weights: Vec<f64> = (0..k * d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let biases: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let params = ClassifierParams {
            l2: 0.01,
            ..ClassifierParams::default()
        };
        let x = FeatureVector::new((0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
        let y = ClassLabel::from_offset(rng.random_range(0..k));
        let model = OnlineClassifier::from_parts(weights.clone(), biases.clone(), params.clone()).unwrap();
        let g = model.gradient(&x, y);

        let loss_at = |w: &[f64], b: &[f64]| {
            OnlineClassifier::from_parts(w.to_vec(), b.to_vec(), params.clone())
                .unwrap()
                .loss(&x, y)
        };
        let mut rel = |analytic: f64, plus: f64, minus: f64| {
            let numeric = (plus - minus) / (2.0 * h);
            worst_grad = worst_grad.max((analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-3));
        };
        for i in 0..weights.len() {
            let (mut p, mut m) = (weights.clone(), weights.clone());
            p[i] += h;
            m[i] -= h;
            rel(g.weights[i], loss_at(&p, &biases), loss_at(&m, &biases));
        }
        for i in 0..biases.len() {
            let (mut p, mut m) = (biases.clone(), biases.clone());
            p[i] += h;
            m[i] -= h;
            rel(g.biases[i], loss_at(&weights, &p), loss_at(&weights, &m));
        }
    }

    let mut worst_auc: f64 = 0.0;
    let mut cases = 0;
    while cases < 100 {
        let n = rng.random_range(2..=50);
        // coarse scores so ties occur
        let scores: Vec<f64> = (0..n).map(|_| (rng.random_range(0..10) as f64) / 10.0).collect();
        let positive: Vec<bool> = (0..n).map(|_| rng.random_bool(0.4)).collect();
        let (pos, neg): (Vec<_>, Vec<_>) = (0..n).partition(|&i| positive[i]);
        if pos.is_empty() || neg.is_empty() {
            assert!(roc_auc(&scores, &positive).is_none());
            continue;
        }
        let mut wins = 0.0;
        for &p in &pos {
            for &q in &neg {
                wins += if scores[p] > scores[q] {
                    1.0
                } else if scores[p] == scores[q] {
                    0.5
                } else {
                    0.0
                };
            }
        }
        let brute = wins / (pos.len() * neg.len()) as f64;
        worst_auc = worst_auc.max((roc_auc(&scores, &positive).unwrap() - brute).abs());
        cases += 1;
    }

    let elapsed = start.elapsed();
    let pass = worst_grad <= 1e-4 && worst_auc <= 1e-12 && elapsed < Duration::from_secs(30);
    report(
        8,
        pass,
        elapsed,
        format!("gradient worst relative error {worst_grad:.2e} over 50 models; AUC worst deviation {worst_auc:.1e} over 100 cases"),
    );
    assert!(pass);
}

#[test]
fn criterion_9_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = SimulationConfig::synthetic(25, 42);
    config.policy = SamplerPolicy::ErrorAvoidance;
    config.decay = DecayPreset::Slow.into();

    let first = Instant::now();
    let original = run(&config).unwrap();
    original.write(&dir.path().join("original")).unwrap();
    let original_time = first.elapsed();

    let start = Instant::now();
    let manifest = RunManifest::read(&dir.path().join("original").join(MANIFEST_FILE)).unwrap();
    replay(&manifest).unwrap().write(&dir.path().join("replay")).unwrap();
    let replay_time = start.elapsed();

    let mut differing = Vec::new();
    let mut files = 0;
    for entry in fs::read_dir(dir.path().join("original")).unwrap() {
        let name = entry.unwrap().file_name();
        if name == MANIFEST_FILE {
            continue;
        }
        files += 1;
        let a = fs::read(dir.path().join("original").join(&name)).unwrap();
        let b = fs::read(dir.path().join("replay").join(&name)).unwrap();
        if a != b {
            differing.push(name.to_string_lossy().into_owned());
        }
    }
    // the replay repeats the same work, so allow only scheduling jitter
    let bounded = replay_time <= original_time * 3 + Duration::from_secs(1);
    let pass = differing.is_empty() && files >= 4 && bounded;
    report(
        9,
        pass,
        replay_time,
        format!(
            "{files} output files compared, differing: {differing:?}; original {:.2}s, replay {:.2}s",
            original_time.as_secs_f64(),
            replay_time.as_secs_f64()
        ),
    );
    assert!(pass);
}
