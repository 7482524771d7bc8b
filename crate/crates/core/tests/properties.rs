use std::f64::consts::PI;
use std::sync::OnceLock;

use elastic_boxplot::{
    amplitude_boxplot, amplitude_distance, central_region, decompose, exp_map, group_action,
    inv_exp_map, phase_boxplot, phase_distance, srsf, srsf_inverse, srt, srt_inverse,
    translation_boxplot, warp_apply, warp_compose, warp_invert, BoxplotOptions, Decomposition,
    Grid, OutlierRule, SampledFunction, Warping,
};
use proptest::prelude::*;

fn fourier(g: &Grid, c: &[f64]) -> SampledFunction {
    SampledFunction::from_fn(g, |t| {
        c.chunks(2)
            .enumerate()
            .map(|(m, ab)| {
                let w = 2.0 * PI * (m + 1) as f64 * t;
                ab[0] * w.sin() + ab[1] * w.cos()
            })
            .sum()
    })
    .unwrap()
}

fn warp(g: &Grid, alpha: f64, a: f64) -> Warping {
    Warping::from_fn(g, |t| {
        let quad = t + alpha * t * (t - 1.0);
        let expo = if a.abs() < 1e-6 { t } else { ((a * t).exp() - 1.0) / (a.exp() - 1.0) };
        0.5 * (quad + expo)
    })
    .unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-0.4..0.4f64, 6)
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_action_is_an_isometry(c1 in coeffs(), c2 in coeffs(), alpha in -0.8..0.8f64, a in -1.5..1.5f64) {
        let g = Grid::uniform(201).unwrap();
        let (q1, q2) = (srsf(&fourier(&g, &c1)).unwrap(), srsf(&fourier(&g, &c2)).unwrap());
        let w = warp(&g, alpha, a);
        let after = group_action(&q1, &w).unwrap().distance(&group_action(&q2, &w).unwrap());
        prop_assert!((q1.distance(&q2) - after).abs() <= 1e-2);
    }

    #[test]
    fn srsf_round_trip(c in coeffs(), f0 in -2.0..2.0f64) {
        let g = Grid::uniform(101).unwrap();
        let f = fourier(&g, &c).shifted(f0).unwrap();
        let back = srsf_inverse(&srsf(&f).unwrap(), f.values()[0]).unwrap();
        prop_assert!(sup(back.values(), f.values()) <= 1e-2);
    }

    #[test]
    fn srt_round_trip_and_inverse(alpha in -0.9..0.9f64, a in -2.0..2.0f64) {
        let g = Grid::uniform(101).unwrap();
        let w = warp(&g, alpha, a);
        let back = srt_inverse(&srt(&w).unwrap()).unwrap();
        prop_assert!(sup(back.values(), w.values()) <= 1e-2);
        let id = warp_compose(&w, &warp_invert(&w).unwrap()).unwrap();
        prop_assert!(sup(id.values(), g.points()) <= 1e-2);
    }

    #[test]
    fn exp_log_round_trip(a1 in -0.9..0.9f64, b1 in -2.0..2.0f64, a2 in -0.9..0.9f64, b2 in -2.0..2.0f64) {
        let g = Grid::uniform(101).unwrap();
        let (p1, p2) = (srt(&warp(&g, a1, b1)).unwrap(), srt(&warp(&g, a2, b2)).unwrap());
        let v = inv_exp_map(&p1, &p2).unwrap();
        prop_assert!((v.norm() - p1.distance(&p2)).abs() <= 1e-9);
        let back = exp_map(&p1, &v).unwrap();
        prop_assert!(sup(back.values(), p2.values()) <= 1e-3);
    }

    #[test]
    fn phase_distance_is_a_bounded_symmetric_metric(a1 in -0.9..0.9f64, a2 in -0.9..0.9f64, a3 in -0.9..0.9f64) {
        let g = Grid::uniform(101).unwrap();
        let (w1, w2, w3) = (warp(&g, a1, 0.0), warp(&g, a2, 0.5), warp(&g, a3, -0.5));
        let d12 = phase_distance(&w1, &w2).unwrap();
        prop_assert!((0.0..=PI / 2.0 + 1e-12).contains(&d12));
        prop_assert!((d12 - phase_distance(&w2, &w1).unwrap()).abs() <= 1e-12);
        let d13 = phase_distance(&w1, &w3).unwrap();
        let d23 = phase_distance(&w2, &w3).unwrap();
        prop_assert!(d13 <= d12 + d23 + 1e-9);
    }

    #[test]
    fn amplitude_distance_ignores_bounded_warps(c in coeffs(), alpha in -0.6..0.6f64) {
        let g = Grid::uniform(101).unwrap();
        let raw = fourier(&g, &c);
        let norm = srsf(&raw).unwrap().norm();
        prop_assume!(norm > 1e-3);
        // The lattice error grows with ‖q‖; the tolerance is stated for ‖q‖ = 1.
        let f = SampledFunction::new(g.clone(), raw.values().iter().map(|v| v / (norm * norm)).collect()).unwrap();
        let w = Warping::from_fn(&g, |t| t + alpha * t * (t - 1.0)).unwrap();
        let d = amplitude_distance(&f, &warp_apply(&f, &w).unwrap()).unwrap();
        prop_assert!(d <= 5e-2, "d = {d}");
    }

    #[test]
    fn translation_boxplot_fences(cs in prop::collection::vec(-10.0..10.0f64, 4..60), k in 0.1..3.0f64, shift in -5.0..5.0f64) {
        let b = translation_boxplot(&cs, k).unwrap();
        prop_assert!(b.q1 <= b.median && b.median <= b.q3);
        let (lo, hi) = (b.q1 - k * (b.q3 - b.q1), b.q3 + k * (b.q3 - b.q1));
        for (i, &c) in cs.iter().enumerate() {
            prop_assert_eq!(b.outlier_indices.contains(&i), c < lo || c > hi);
        }
        prop_assert!(b.lower_whisker >= lo && b.upper_whisker <= hi);
        let shifted: Vec<f64> = cs.iter().map(|c| c + shift).collect();
        let s = translation_boxplot(&shifted, k).unwrap();
        prop_assert!((s.median - b.median - shift).abs() <= 1e-9);
        prop_assert!((s.q1 - b.q1 - shift).abs() <= 1e-9 && (s.q3 - b.q3 - shift).abs() <= 1e-9);
    }

    #[test]
    fn translation_quartiles_match_type7_oracle(cs in prop::collection::vec(-10.0..10.0f64, 4..40)) {
        let mut s = cs.clone();
        s.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let h = (s.len() - 1) as f64 * p;
            let (lo, frac) = (h.floor() as usize, h - h.floor());
            if lo + 1 < s.len() { s[lo] + frac * (s[lo + 1] - s[lo]) } else { s[lo] }
        };
        let b = translation_boxplot(&cs, 1.5).unwrap();
        prop_assert!((b.q1 - q(0.25)).abs() <= 1e-12);
        prop_assert!((b.median - q(0.5)).abs() <= 1e-12);
        prop_assert!((b.q3 - q(0.75)).abs() <= 1e-12);
    }

    #[test]
    fn central_region_is_the_nearest_half(ds in prop::collection::vec(0.0..5.0f64, 1..60)) {
        let c = central_region(&ds);
        prop_assert_eq!(c.len(), ds.len() / 2);
        let worst_in = c.iter().map(|&i| ds[i]).fold(f64::NEG_INFINITY, f64::max);
        for i in (0..ds.len()).filter(|i| !c.contains(i)) {
            prop_assert!(ds[i] >= worst_in);
        }
    }
}

/// A decomposition shared by the k-sweep properties.
fn fixture() -> &'static Decomposition {
    static DEC: OnceLock<Decomposition> = OnceLock::new();
    DEC.get_or_init(|| {
        let g = Grid::uniform(101).unwrap();
        let fs: Vec<SampledFunction> = (0..24)
            .map(|i| {
                let x = i as f64;
                let amp = 1.0 + 0.08 * (x * 1.7).sin() + if i == 5 { 1.5 } else { 0.0 };
                let alpha = 0.6 * (x * 2.3).cos() + if i == 9 { 0.35 } else { 0.0 };
                SampledFunction::from_fn(&g, |s| {
                    let t = s + alpha.clamp(-0.95, 0.95) * s * (s - 1.0);
                    amp * (2.0 * PI * t).sin() + 0.3 * (4.0 * PI * t).cos() + 0.1 * x
                })
                .unwrap()
            })
            .collect();
        decompose(&fs).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn outlier_sets_shrink_as_k_grows(k1 in 0.05..3.0f64, dk in 0.0..2.0f64, lambda in 0.0..=1.0f64) {
        let dec = fixture();
        for rule in [OutlierRule::Max, OutlierRule::Min] {
            let o = |k| BoxplotOptions { k, lambda, rule };
            let (a1, a2) = (amplitude_boxplot(dec, &o(k1)).unwrap(), amplitude_boxplot(dec, &o(k1 + dk)).unwrap());
            prop_assert!(a2.outlier_indices.iter().all(|i| a1.outlier_indices.contains(i)));
            let (p1, p2) = (phase_boxplot(dec, &o(k1)).unwrap(), phase_boxplot(dec, &o(k1 + dk)).unwrap());
            prop_assert!(p2.outlier_indices.iter().all(|i| p1.outlier_indices.contains(i)));
        }
    }

    #[test]
    fn min_rule_flags_a_superset_of_max(k in 0.05..3.0f64, lambda in 0.0..=1.0f64) {
        let dec = fixture();
        let o = |rule| BoxplotOptions { k, lambda, rule };
        let (max, min) = (amplitude_boxplot(dec, &o(OutlierRule::Max)).unwrap(), amplitude_boxplot(dec, &o(OutlierRule::Min)).unwrap());
        prop_assert!(max.outlier_indices.iter().all(|i| min.outlier_indices.contains(i)));
        let (max, min) = (phase_boxplot(dec, &o(OutlierRule::Max)).unwrap(), phase_boxplot(dec, &o(OutlierRule::Min)).unwrap());
        prop_assert!(max.outlier_indices.iter().all(|i| min.outlier_indices.contains(i)));
    }

    #[test]
    fn boxplot_structure(k in 0.05..3.0f64, lambda in 0.0..=1.0f64) {
        let dec = fixture();
        let o = BoxplotOptions { k, lambda, rule: OutlierRule::Max };
        let a = amplitude_boxplot(dec, &o).unwrap();
        let p = phase_boxplot(dec, &o).unwrap();
        for (central, q1, q3, e1, e3, out, dist, thr) in [
            (&a.central_indices, a.q1_index, a.q3_index, a.extreme1_index, a.extreme3_index, &a.outlier_indices, &dec.amp_distances, a.threshold),
            (&p.central_indices, p.q1_index, p.q3_index, p.extreme1_index, p.extreme3_index, &p.outlier_indices, &dec.phase_distances, p.threshold),
        ] {
            prop_assert_eq!(central.len(), dec.len() / 2);
            prop_assert!(central.contains(&q1.unwrap()) && central.contains(&q3.unwrap()));
            prop_assert!(q1 != q3);
            for &i in out {
                prop_assert!(!central.contains(&i) && dist[i] > thr);
            }
            for e in [e1, e3].into_iter().flatten() {
                prop_assert!(!central.contains(&e) && !out.contains(&e));
            }
        }
    }
}

#[test]
fn fixture_flags_the_planted_outliers() {
    let dec = fixture();
    let a = amplitude_boxplot(dec, &BoxplotOptions::new(1.3)).unwrap();
    assert_eq!(a.outlier_indices, [5]);
    let t = translation_boxplot(&dec.translations, 1.5).unwrap();
    assert!(t.outlier_indices.is_empty());
}
