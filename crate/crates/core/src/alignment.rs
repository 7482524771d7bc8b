//! Elastic alignment of SRSFs by dynamic programming.
//!
//! The warping `γ` minimizing `‖q1 - (q2, γ)‖` is searched over
//! piecewise-linear paths on the `T × T` grid lattice from `(0, 0)` to
//! `(1, 1)`. Each path segment spans `k` grid cells in `t` and `l` cells in
//! `γ(t)` with `k, l ≤ 5` coprime, so admissible slopes range over `[1/5, 5]`.

use crate::error::{Error, Result};
use crate::functions::{group_action, srsf, SampledFunction, Srsf, Warping};
use crate::grid::Grid;

/// Lattice steps `(k, l)`: `k` cells along `t`, `l` cells along `γ(t)`.
///
/// Ordered by distance of the slope from 1 so that, among equal-cost
/// predecessors, the one closest to the identity wins.
pub(crate) const STEPS: [(usize, usize); 19] = [
    (1, 1),
    (1, 2),
    (2, 1),
    (2, 3),
    (3, 2),
    (3, 4),
    (4, 3),
    (4, 5),
    (5, 4),
    (1, 3),
    (3, 1),
    (3, 5),
    (5, 3),
    (1, 4),
    (4, 1),
    (2, 5),
    (5, 2),
    (1, 5),
    (5, 1),
];

const MAX_STEP: usize = 5;

/// Optimal warping of `q2` onto `q1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentResult {
    /// `γ*` with `(q2, γ*) ≈ q1`.
    pub gamma: Warping,
    /// `(q2, γ*)`.
    pub aligned_q: Srsf,
    /// `‖q1 - (q2, γ*)‖`, the amplitude distance.
    pub distance: f64,
}

/// Aligns `q2` to `q1`.
pub fn align(q1: &Srsf, q2: &Srsf) -> Result<AlignmentResult> {
    if q1.grid() != q2.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = q1.grid();
    let path = dp_warping(grid, q1.values(), q2.values());
    let mut best: Option<AlignmentResult> = None;
    for width in SMOOTHING_WIDTHS {
        let values = if width == 1 {
            path.clone()
        } else {
            smooth_slopes(grid, &path, width)
        };
        let gamma = Warping::pinned(grid.clone(), values)?;
        let aligned_q = group_action(q2, &gamma)?;
        let distance = q1.distance(&aligned_q);
        if best.as_ref().is_none_or(|b| distance < b.distance) {
            best = Some(AlignmentResult {
                gamma,
                aligned_q,
                distance,
            });
        }
    }
    Ok(best.unwrap())
}

/// Moving-average widths (in cells) tried on the lattice path's slopes. The
/// path only has slopes `l/k`, so a smooth optimum is tracked by alternating
/// slopes; averaging them removes the resulting ripple in `√γ̇`. Width 1
/// keeps the raw path, so the refinement never does worse than it.
const SMOOTHING_WIDTHS: [usize; 6] = [1, 3, 5, 9, 17, 33];

fn smooth_slopes(grid: &Grid, gamma: &[f64], width: usize) -> Vec<f64> {
    let t = grid.points();
    let cells = t.len() - 1;
    let slopes: Vec<f64> = (0..cells)
        .map(|i| (gamma[i + 1] - gamma[i]) / (t[i + 1] - t[i]))
        .collect();
    let mut prefix = vec![0.0; cells + 1];
    for i in 0..cells {
        prefix[i + 1] = prefix[i] + slopes[i];
    }
    let half = width / 2;
    let mut out = vec![0.0; t.len()];
    for i in 0..cells {
        let lo = i.saturating_sub(half);
        let hi = (i + half).min(cells - 1);
        let avg = (prefix[hi + 1] - prefix[lo]) / (hi + 1 - lo) as f64;
        out[i + 1] = out[i] + avg * (t[i + 1] - t[i]);
    }
    let total = out[cells];
    for v in out.iter_mut() {
        *v /= total;
    }
    out
}

/// Elastic amplitude distance between two functions on the same grid.
pub fn amplitude_distance(f1: &SampledFunction, f2: &SampledFunction) -> Result<f64> {
    if f1.grid() != f2.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(align(&srsf(f1)?, &srsf(f2)?)?.distance)
}

/// Warping samples at the grid points for the optimal lattice path.
pub(crate) fn dp_warping(grid: &Grid, q1: &[f64], q2: &[f64]) -> Vec<f64> {
    let path = if grid.is_uniform() {
        let table = UniformSteps::new(grid);
        dp_path(grid.len(), |i0, j0, r| table.edge_cost(q1, q2, i0, j0, r))
    } else {
        dp_path(grid.len(), |i0, j0, r| edge_cost_general(grid, q1, q2, i0, j0, r))
    };
    path_to_warping(grid, &path)
}

/// Lattice nodes of the minimum-cost path, from `(0, 0)` to `(n-1, n-1)`.
pub(crate) fn dp_path(n: usize, edge_cost: impl Fn(usize, usize, usize) -> f64) -> Vec<(usize, usize)> {
    let last = n - 1;
    let mut cost = vec![f64::INFINITY; n * n];
    let mut from = vec![u8::MAX; n * n];
    cost[0] = 0.0;

    // A node can lie on a full path only if it sits inside the slope cone of
    // both endpoints.
    let in_cone = |a: usize, b: usize| (a == 0 && b == 0) || (a > 0 && b > 0 && a <= MAX_STEP * b && b <= MAX_STEP * a);

    for i in 1..n {
        for j in 1..n {
            if !in_cone(i, j) || !in_cone(last - i, last - j) {
                continue;
            }
            let mut best = f64::INFINITY;
            let mut arg = u8::MAX;
            for (r, &(k, l)) in STEPS.iter().enumerate() {
                if k > i || l > j {
                    continue;
                }
                let prev = cost[(i - k) * n + (j - l)];
                if !prev.is_finite() {
                    continue;
                }
                let c = prev + edge_cost(i - k, j - l, r);
                if c < best {
                    best = c;
                    arg = r as u8;
                }
            }
            cost[i * n + j] = best;
            from[i * n + j] = arg;
        }
    }

    let mut path = vec![(last, last)];
    let (mut i, mut j) = (last, last);
    while i > 0 || j > 0 {
        let r = from[i * n + j];
        debug_assert!(r != u8::MAX, "unreachable lattice node ({i}, {j})");
        let (k, l) = STEPS[r as usize];
        i -= k;
        j -= l;
        path.push((i, j));
    }
    path.reverse();
    path
}

fn path_to_warping(grid: &Grid, path: &[(usize, usize)]) -> Vec<f64> {
    let t = grid.points();
    let mut gamma = vec![0.0; t.len()];
    for seg in path.windows(2) {
        let ((i0, j0), (i1, j1)) = (seg[0], seg[1]);
        let slope = (t[j1] - t[j0]) / (t[i1] - t[i0]);
        gamma[i0] = t[j0];
        for m in i0 + 1..i1 {
            gamma[m] = t[j0] + slope * (t[m] - t[i0]);
        }
        gamma[i1] = t[j1];
    }
    gamma
}

/// Precomputed interpolation weights for each lattice step on a uniform
/// grid: the interior points of a `(k, l)` segment land at fractional grid
/// offsets `s·l/k` that do not depend on where the segment starts.
struct UniformSteps {
    h: f64,
    sqrt_slope: [f64; 19],
    /// Per step, for `s = 0..=k`: (integer offset, fractional weight).
    offsets: Vec<Vec<(usize, f64)>>,
}

impl UniformSteps {
    fn new(grid: &Grid) -> Self {
        let h = 1.0 / (grid.len() - 1) as f64;
        let mut sqrt_slope = [0.0; 19];
        let mut offsets = Vec::with_capacity(STEPS.len());
        for (r, &(k, l)) in STEPS.iter().enumerate() {
            sqrt_slope[r] = (l as f64 / k as f64).sqrt();
            offsets.push(
                (0..=k)
                    .map(|s| {
                        let whole = s * l / k;
                        let frac = (s * l % k) as f64 / k as f64;
                        (whole, frac)
                    })
                    .collect(),
            );
        }
        Self {
            h,
            sqrt_slope,
            offsets,
        }
    }

    #[inline]
    fn edge_cost(&self, q1: &[f64], q2: &[f64], i0: usize, j0: usize, r: usize) -> f64 {
        let rs = self.sqrt_slope[r];
        let offs = &self.offsets[r];
        let mut sum = 0.0;
        let mut ends = 0.0;
        let k = offs.len() - 1;
        for (s, &(whole, frac)) in offs.iter().enumerate() {
            let a = j0 + whole;
            let v = if frac == 0.0 {
                q2[a]
            } else {
                q2[a] + frac * (q2[a + 1] - q2[a])
            };
            let e = q1[i0 + s] - rs * v;
            let e2 = e * e;
            sum += e2;
            if s == 0 || s == k {
                ends += e2;
            }
        }
        self.h * (sum - 0.5 * ends)
    }
}

/// Trapezoidal cost of one lattice segment on an arbitrary grid.
fn edge_cost_general(grid: &Grid, q1: &[f64], q2: &[f64], i0: usize, j0: usize, r: usize) -> f64 {
    let t = grid.points();
    let (k, l) = STEPS[r];
    let (i1, j1) = (i0 + k, j0 + l);
    let slope = (t[j1] - t[j0]) / (t[i1] - t[i0]);
    let rs = slope.sqrt();
    let mut a = j0;
    let mut prev_e2 = 0.0;
    let mut acc = 0.0;
    for m in i0..=i1 {
        let x = if m == i1 { t[j1] } else { t[j0] + slope * (t[m] - t[i0]) };
        while a + 1 < j1 && t[a + 1] < x {
            a += 1;
        }
        let w = if a + 1 < t.len() { (x - t[a]) / (t[a + 1] - t[a]) } else { 0.0 };
        let v = if w <= 0.0 { q2[a] } else { q2[a] + w * (q2[a + 1] - q2[a]) };
        let e = q1[m] - rs * v;
        let e2 = e * e;
        if m > i0 {
            acc += 0.5 * (t[m] - t[m - 1]) * (prev_e2 + e2);
        }
        prev_e2 = e2;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{warp_apply, SampledFunction};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn grid() -> Grid {
        Grid::uniform(101).unwrap()
    }

    fn sup(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    fn bumps(g: &Grid) -> SampledFunction {
        SampledFunction::from_fn(g, |t| (2.0 * PI * t).sin() + 0.5 * (4.0 * PI * t).cos()).unwrap()
    }

    #[test]
    fn steps_are_coprime_and_distinct() {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        for (i, &(k, l)) in STEPS.iter().enumerate() {
            assert_eq!(gcd(k, l), 1);
            assert!(!STEPS[i + 1..].contains(&(k, l)));
        }
    }

    #[test]
    fn self_alignment_is_identity() {
        let g = grid();
        let q = srsf(&bumps(&g)).unwrap();
        let res = align(&q, &q).unwrap();
        assert!(res.distance < 1e-12);
        assert!(sup(res.gamma.values(), g.points()) < 1e-12);
    }

    #[test]
    fn linear_pair_closed_form() {
        let g = grid();
        let q1 = srsf(&SampledFunction::from_fn(&g, |t| t).unwrap()).unwrap();
        let q2 = srsf(&SampledFunction::from_fn(&g, |t| 2.0 * t).unwrap()).unwrap();
        let res = align(&q1, &q2).unwrap();
        assert_abs_diff_eq!(res.distance, 2f64.sqrt() - 1.0, epsilon = 1e-2);
        assert!(sup(res.gamma.values(), g.points()) < 1e-2);
    }

    #[test]
    fn same_orbit_distance_is_small() {
        let g = grid();
        // Scaled to ‖q‖ ≈ 1; the lattice error grows with ‖q‖.
        let f = SampledFunction::from_fn(&g, |t| 0.2 * bumps(&g).eval(t)).unwrap();
        for alpha in [-0.7, -0.2, 0.5, 0.7] {
            let w = Warping::from_fn(&g, |t| t + alpha * t * (t - 1.0)).unwrap();
            let fw = warp_apply(&f, &w).unwrap();
            let d = amplitude_distance(&f, &fw).unwrap();
            assert!(d <= 5e-2, "alpha={alpha} d={d}");
        }
    }

    #[test]
    fn never_worse_than_identity() {
        let g = grid();
        let q1 = srsf(&bumps(&g)).unwrap();
        let q2 = srsf(&SampledFunction::from_fn(&g, |t| (3.0 * PI * t).sin() * t).unwrap()).unwrap();
        let res = align(&q1, &q2).unwrap();
        assert!(res.distance <= q1.distance(&q2) + 1e-2);
        assert_abs_diff_eq!(res.distance, q1.distance(&res.aligned_q), epsilon = 1e-15);
    }

    #[test]
    fn translation_is_invisible() {
        let g = grid();
        let f = bumps(&g);
        assert!(amplitude_distance(&f, &f.shifted(3.0).unwrap()).unwrap() < 1e-6);
    }

    #[test]
    fn uniform_and_general_costs_agree() {
        let g = grid();
        let q1 = srsf(&bumps(&g)).unwrap();
        let q2 = srsf(&SampledFunction::from_fn(&g, |t| (3.0 * PI * t).sin()).unwrap()).unwrap();
        let table = UniformSteps::new(&g);
        for (r, &(k, l)) in STEPS.iter().enumerate() {
            for &(i0, j0) in &[(0, 0), (10, 13), (40, 37), (90, 91)] {
                if i0 + k > 100 || j0 + l > 100 {
                    continue;
                }
                let a = table.edge_cost(q1.values(), q2.values(), i0, j0, r);
                let b = edge_cost_general(&g, q1.values(), q2.values(), i0, j0, r);
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn nonuniform_grid_alignment() {
        let mut pts: Vec<f64> = (0..61).map(|i| {
            let u = i as f64 / 60.0;
            u + 0.1 * (PI * u).sin() / PI * 0.5
        }).collect();
        pts[60] = 1.0;
        let g = Grid::new(pts).unwrap();
        assert!(!g.is_uniform());
        let f = bumps(&g);
        let q = srsf(&f).unwrap();
        let res = align(&q, &q).unwrap();
        assert!(res.distance < 1e-9);
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let a = srsf(&bumps(&Grid::uniform(51).unwrap())).unwrap();
        let b = srsf(&bumps(&grid())).unwrap();
        assert_eq!(align(&a, &b), Err(Error::GridMismatch));
    }
}
