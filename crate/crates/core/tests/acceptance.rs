//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! a failure status if any criterion fails.
//!
//! Simulation criteria run the full 100 replicates of 100 functions and take
//! several minutes on one core.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use elastic_boxplot::simulation::{run_table, Component, SimulationConfig, SimulationReport};
use elastic_boxplot::{
    amplitude_boxplot, amplitude_distance, decompose, exp_map, group_action, inv_exp_map,
    phase_boxplot, phase_distance, srsf, srsf_inverse, srt, srt_inverse, translation_boxplot,
    warp_apply, BoxplotOptions, Decomposition, Grid, OutlierRule, SampledFunction, Warping,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn sim(id: u8) -> SimulationReport {
    let t0 = Instant::now();
    let report = run_table(&SimulationConfig::new(id, SEED)).expect("simulation run");
    println!("{}({:.0?})", report.to_table(), t0.elapsed());
    assert!(report.failures.is_empty(), "replicate failures: {:?}", report.failures);
    report
}

fn pc(r: &SimulationReport, c: Component, k: f64) -> f64 {
    r.row(c, k).and_then(|row| row.p_c_mean).expect("p_c row")
}

fn pf(r: &SimulationReport, c: Component, k: f64) -> f64 {
    r.row(c, k).expect("p_f row").p_f_mean
}

fn criterion_1() -> Outcome {
    let r = sim(1);
    let a = Component::Amplitude;
    let (pc13, pf13, pf06, pc17) = (pc(&r, a, 1.3), pf(&r, a, 1.3), pf(&r, a, 0.6), pc(&r, a, 1.7));
    check(
        pc13 >= 99.0 && pf13 <= 0.5 && (2.0..=5.5).contains(&pf06) && (80.0..=98.0).contains(&pc17),
        format!("k_a=1.3 p_c={pc13:.2} p_f={pf13:.2}; k_a=0.6 p_f={pf06:.2}; k_a=1.7 p_c={pc17:.2}"),
    )
}

fn criterion_2() -> Outcome {
    let r = sim(2);
    let a = Component::Amplitude;
    let (pc13, pf13) = (pc(&r, a, 1.3), pf(&r, a, 1.3));
    check(pc13 >= 99.0 && pf13 <= 0.6, format!("k_a=1.3 p_c={pc13:.2} p_f={pf13:.2}"))
}

fn criterion_3() -> Outcome {
    let r = sim(3);
    let p = Component::Phase;
    let (pc07, pf07, pc05, pf05) = (pc(&r, p, 0.7), pf(&r, p, 0.7), pc(&r, p, 0.5), pf(&r, p, 0.5));
    check(
        pc07 >= 97.0 && pf07 <= 1.0 && pc05 >= 99.5 && (1.0..=5.5).contains(&pf05),
        format!("k_p=0.7 p_c={pc07:.2} p_f={pf07:.2}; k_p=0.5 p_c={pc05:.2} p_f={pf05:.2}"),
    )
}

fn criterion_4() -> Outcome {
    let r = sim(4);
    let amp_max = [0.6, 0.7, 0.8, 0.9, 1.0]
        .iter()
        .map(|&k| pf(&r, Component::Amplitude, k))
        .fold(0.0, f64::max);
    let (pf08, pf09) = (pf(&r, Component::Phase, 0.8), pf(&r, Component::Phase, 0.9));
    check(
        amp_max <= 0.2 && pf08 <= 1.5 && pf09 <= 0.3,
        format!("max amplitude p_f={amp_max:.2}; phase p_f k_p=0.8 {pf08:.2}, k_p=0.9 {pf09:.2}"),
    )
}

fn random_function(rng: &mut ChaCha8Rng, g: &Grid) -> SampledFunction {
    let c: Vec<f64> = (0..6).map(|_| rng.gen_range(-0.3..0.3)).collect();
    SampledFunction::from_fn(g, |t| {
        (1..=3)
            .map(|m| {
                let w = 2.0 * PI * m as f64 * t;
                c[2 * m - 2] * w.sin() + c[2 * m - 1] * w.cos()
            })
            .sum()
    })
    .unwrap()
}

/// Random warp with slopes in roughly [0.3, 3]: a mixture of a quadratic and
/// an exponential family member.
fn random_warp(rng: &mut ChaCha8Rng, g: &Grid) -> Warping {
    let alpha: f64 = rng.gen_range(-0.7..0.7);
    let a: f64 = rng.gen_range(-1.5..1.5);
    let mix: f64 = rng.gen_range(0.0..1.0);
    Warping::from_fn(g, |t| {
        let quad = t + alpha * t * (t - 1.0);
        let expo = if a.abs() < 1e-9 { t } else { ((a * t).exp() - 1.0) / (a.exp() - 1.0) };
        mix * quad + (1.0 - mix) * expo
    })
    .unwrap()
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let g201 = Grid::uniform(201).unwrap();
    let mut iso = 0.0f64;
    for _ in 0..200 {
        let q1 = srsf(&random_function(&mut rng, &g201)).unwrap();
        let q2 = srsf(&random_function(&mut rng, &g201)).unwrap();
        let w = random_warp(&mut rng, &g201);
        let before = q1.distance(&q2);
        let after = group_action(&q1, &w).unwrap().distance(&group_action(&q2, &w).unwrap());
        iso = iso.max((before - after).abs());
    }
    let g = Grid::uniform(101).unwrap();
    let (mut srsf_rt, mut srt_rt, mut exp_rt) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let f = random_function(&mut rng, &g);
        let back = srsf_inverse(&srsf(&f).unwrap(), f.values()[0]).unwrap();
        srsf_rt = srsf_rt.max(sup(back.values(), f.values()));
        let w = random_warp(&mut rng, &g);
        let back = srt_inverse(&srt(&w).unwrap()).unwrap();
        srt_rt = srt_rt.max(sup(back.values(), w.values()));
        let p1 = srt(&random_warp(&mut rng, &g)).unwrap();
        let p2 = srt(&random_warp(&mut rng, &g)).unwrap();
        let back = exp_map(&p1, &inv_exp_map(&p1, &p2).unwrap()).unwrap();
        exp_rt = exp_rt.max(sup(back.values(), p2.values()));
    }
    check(
        iso <= 1e-2 && srsf_rt <= 1e-2 && srt_rt <= 1e-2 && exp_rt <= 1e-3,
        format!("isometry {iso:.2e}; SRSF round trip {srsf_rt:.2e}; SRT round trip {srt_rt:.2e}; exp/log {exp_rt:.2e}"),
    )
}

fn criterion_6() -> Outcome {
    let g = Grid::uniform(101).unwrap();
    let f1 = SampledFunction::from_fn(&g, |t| t).unwrap();
    let f2 = SampledFunction::from_fn(&g, |t| 2.0 * t).unwrap();
    let da = amplitude_distance(&f1, &f2).unwrap();
    // ‖1 - √2 √γ̇‖ over γ is minimized by γ = id: √(1 - 2√2 + 2) = √2 - 1.
    let da_err = (da - (2f64.sqrt() - 1.0)).abs();
    let dp = phase_distance(&Warping::identity(&g), &Warping::from_fn(&g, |t| t * t).unwrap()).unwrap();
    // ⟨1, √(2t)⟩ = √2 ∫ t^{1/2} dt = 2√2/3.
    let dp_err = (dp - (2.0 * 2f64.sqrt() / 3.0).acos()).abs();
    check(
        da_err <= 1e-2 && dp_err <= 1e-3,
        format!("D_a(t, 2t) error {da_err:.2e}; D_p(id, t^2) error {dp_err:.2e} at T=101"),
    )
}

// Independent quartile oracle: own quadrature, own central region, own
// tangent vectors, brute force over ordered pairs.
mod oracle {
    pub fn trapz(t: &[f64], y: &[f64]) -> f64 {
        (1..t.len()).map(|i| 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1])).sum()
    }

    pub fn inner(t: &[f64], a: &[f64], b: &[f64]) -> f64 {
        let prod: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        trapz(t, &prod)
    }

    pub fn central(dist: &[f64]) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..dist.len()).collect();
        idx.sort_by(|&a, &b| dist[a].partial_cmp(&dist[b]).unwrap().then(a.cmp(&b)));
        idx.truncate(dist.len() / 2);
        idx.sort();
        idx
    }

    /// Best unordered pair of sample indices over vectors `x[i]` (i ∈ members).
    pub fn best_pair(t: &[f64], members: &[usize], x: &[Vec<f64>], lambda: f64) -> Option<(usize, usize)> {
        let norm = |i: usize| inner(t, &x[i], &x[i]).sqrt();
        let usable: Vec<usize> = members.iter().copied().filter(|&i| norm(i) >= 1e-8).collect();
        let max = usable.iter().map(|&i| norm(i)).fold(0.0, f64::max);
        let mut best: Option<((usize, usize), f64)> = None;
        for &a in &usable {
            for &b in &usable {
                if a >= b {
                    continue;
                }
                let cos = inner(t, &x[a], &x[b]) / (norm(a) * norm(b));
                let v = (1.0 - lambda) * (norm(a) + norm(b)) / max - lambda * (cos + 1.0);
                if best.is_none_or(|(_, bv)| v > bv) {
                    best = Some(((a, b), v));
                }
            }
        }
        best.map(|b| b.0)
    }
}

fn random_dataset(rng: &mut ChaCha8Rng, g: &Grid, n: usize) -> Vec<SampledFunction> {
    (0..n)
        .map(|_| {
            let (c1, c2): (f64, f64) = (rng.gen_range(0.0..0.15), rng.gen_range(0.0..0.15));
            let alpha: f64 = rng.gen_range(-1.0..1.0);
            SampledFunction::from_fn(g, |s| {
                let t = s + alpha * s * (s - 1.0);
                c1 * (2.0 * PI * t).sin() + c2 * (2.0 * PI * t).cos()
            })
            .unwrap()
        })
        .collect()
}

fn sorted_pair(a: Option<usize>, b: Option<usize>) -> Option<(usize, usize)> {
    let (a, b) = (a?, b?);
    Some((a.min(b), a.max(b)))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let g = Grid::uniform(101).unwrap();
    let t = g.points();
    let mut mismatches = Vec::new();
    for trial in 0..50 {
        let n = rng.gen_range(8..=20);
        let lambda = [0.0, 0.25, 0.5, 0.75, 1.0][trial % 5];
        let dec = decompose(&random_dataset(&mut rng, &g, n)).unwrap();
        let opts = BoxplotOptions { k: 1.0, lambda, rule: OutlierRule::Max };

        let qbar = dec.amp_median_srsf.values();
        let dx: Vec<Vec<f64>> = dec
            .amplitude_srsfs
            .iter()
            .map(|q| q.values().iter().zip(qbar).map(|(a, b)| a - b).collect())
            .collect();
        let dist: Vec<f64> = dx.iter().map(|d| oracle::inner(t, d, d).sqrt()).collect();
        let want = oracle::best_pair(t, &oracle::central(&dist), &dx, lambda);
        let bp = amplitude_boxplot(&dec, &opts).unwrap();
        if want != sorted_pair(bp.q1_index, bp.q3_index) {
            mismatches.push(format!("amplitude trial {trial}: {want:?} vs {:?}", (bp.q1_index, bp.q3_index)));
        }

        let pbar = dec.phase_median_srt.values();
        let vs: Vec<Vec<f64>> = dec
            .phases
            .iter()
            .map(|w| {
                let psi = srt(w).unwrap();
                let c = oracle::inner(t, psi.values(), pbar).clamp(-1.0, 1.0);
                let theta = c.acos();
                if theta < 1e-8 {
                    return vec![0.0; t.len()];
                }
                psi.values().iter().zip(pbar).map(|(p, b)| theta / theta.sin() * (p - c * b)).collect()
            })
            .collect();
        let pdist: Vec<f64> = vs.iter().map(|v| oracle::inner(t, v, v).sqrt()).collect();
        let want = oracle::best_pair(t, &oracle::central(&pdist), &vs, lambda);
        let bp = phase_boxplot(&dec, &opts).unwrap();
        if want != sorted_pair(bp.q1_index, bp.q3_index) {
            mismatches.push(format!("phase trial {trial}: {want:?} vs {:?}", (bp.q1_index, bp.q3_index)));
        }
    }
    let detail = if mismatches.is_empty() {
        "50 decompositions, amplitude and phase pairs all match".to_string()
    } else {
        mismatches.join("; ")
    };
    check(mismatches.is_empty(), detail)
}

fn selections(dec: &Decomposition, k: f64) -> Vec<Vec<Option<usize>>> {
    let o = BoxplotOptions::new(k);
    let a = amplitude_boxplot(dec, &o).unwrap();
    let p = phase_boxplot(dec, &o).unwrap();
    let mut out = vec![
        vec![a.q1_index, a.q3_index, a.extreme1_index, a.extreme3_index],
        vec![p.q1_index, p.q3_index, p.extreme1_index, p.extreme3_index],
    ];
    out.push(a.outlier_indices.into_iter().map(Some).collect());
    out.push(p.outlier_indices.into_iter().map(Some).collect());
    out.push(a.central_indices.into_iter().map(Some).collect());
    out.push(p.central_indices.into_iter().map(Some).collect());
    out
}

fn nested(small_k: &[usize], large_k: &[usize]) -> bool {
    large_k.iter().all(|i| small_k.contains(i))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let g = Grid::uniform(101).unwrap();
    let mut problems = Vec::new();

    // Common vertical shift.
    let shift = 3.25;
    let mut max_shift_err = 0.0f64;
    for trial in 0..5 {
        let fs = random_dataset(&mut rng, &g, 30);
        let shifted: Vec<SampledFunction> = fs.iter().map(|f| f.shifted(shift).unwrap()).collect();
        let (d0, d1) = (decompose(&fs).unwrap(), decompose(&shifted).unwrap());
        for k in [0.5, 1.0, 1.5] {
            if selections(&d0, k) != selections(&d1, k) {
                problems.push(format!("shift changed selections (trial {trial}, k={k})"));
            }
        }
        let (t0, t1) = (
            translation_boxplot(&d0.translations, 1.5).unwrap(),
            translation_boxplot(&d1.translations, 1.5).unwrap(),
        );
        for (a, b) in [
            (t0.median, t1.median),
            (t0.q1, t1.q1),
            (t0.q3, t1.q3),
            (t0.lower_whisker, t1.lower_whisker),
            (t0.upper_whisker, t1.upper_whisker),
        ] {
            max_shift_err = max_shift_err.max((b - a - shift).abs());
        }
        if t0.outlier_indices != t1.outlier_indices {
            problems.push(format!("shift changed translation outliers (trial {trial})"));
        }
    }
    if max_shift_err > 1e-12 {
        problems.push(format!("translation boxplot shift error {max_shift_err:.2e}"));
    }

    // Common warp.
    let mut max_warp_err = 0.0f64;
    for _ in 0..3 {
        let fs = random_dataset(&mut rng, &g, 20);
        let w0 = random_warp(&mut rng, &g);
        let warped: Vec<SampledFunction> = fs.iter().map(|f| warp_apply(f, &w0).unwrap()).collect();
        let (d0, d1) = (decompose(&fs).unwrap(), decompose(&warped).unwrap());
        for (a, b) in d0.amp_distances.iter().zip(&d1.amp_distances) {
            max_warp_err = max_warp_err.max((a - b).abs());
        }
        for i in 0..5 {
            let a = amplitude_distance(&fs[i], &fs[i + 5]).unwrap();
            let b = amplitude_distance(&warped[i], &warped[i + 5]).unwrap();
            max_warp_err = max_warp_err.max((a - b).abs());
        }
    }
    if max_warp_err > 5e-2 {
        problems.push(format!("common warp changed D_a by {max_warp_err:.3}"));
    }

    // Monotonicity in k.
    let ks: Vec<f64> = (1..=30).map(|i| 0.1 * i as f64).collect();
    let mut datasets = 0;
    for id in 1..=4u8 {
        let mut c = SimulationConfig::new(id, SEED);
        c.n_functions = 40;
        for r in 0..2 {
            let data = elastic_boxplot::simulation::generate(&c, r).unwrap();
            let dec = decompose(&data.functions).unwrap();
            datasets += 1;
            for rule in [OutlierRule::Max, OutlierRule::Min] {
                let flags = |k: f64| {
                    let o = BoxplotOptions { k, lambda: 0.5, rule };
                    (
                        amplitude_boxplot(&dec, &o).unwrap().outlier_indices,
                        phase_boxplot(&dec, &o).unwrap().outlier_indices,
                    )
                };
                let all: Vec<_> = ks.iter().map(|&k| flags(k)).collect();
                for w in all.windows(2) {
                    if !nested(&w[0].0, &w[1].0) || !nested(&w[0].1, &w[1].1) {
                        problems.push(format!("outlier sets not nested (sim {id}, replicate {r}, {rule:?})"));
                        break;
                    }
                }
            }
        }
    }

    let detail = if problems.is_empty() {
        format!(
            "shift: selections identical, translation error {max_shift_err:.1e}; warp: max |dD_a| {max_warp_err:.3}; monotone on {datasets} datasets"
        )
    } else {
        problems.join("; ")
    };
    check(problems.is_empty(), detail)
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("simulation 1 amplitude rates", criterion_1),
        ("simulation 2 amplitude rates", criterion_2),
        ("simulation 3 phase rates", criterion_3),
        ("simulation 4 false positives", criterion_4),
        ("isometry and round trips", criterion_5),
        ("closed-form distances", criterion_6),
        ("quartile oracle", criterion_7),
        ("invariance", criterion_8),
    ];
    let filter: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut lines = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if filter.is_some_and(|f| f != n) {
            continue;
        }
        let t0 = Instant::now();
        let outcome = run();
        let line = format!(
            "criterion {n} ({name}): {} [{}] ({:.1?})",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail,
            t0.elapsed()
        );
        println!("{line}");
        lines.push((outcome.pass, line));
    }
    println!("\nacceptance summary");
    for (_, line) in &lines {
        println!("{line}");
    }
    if lines.iter().all(|(pass, _)| *pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
