//! Projected gradient ascent for distance-sum energies on products of
//! spheres, plus structural checks on the resulting configurations:
//! hemisphere balance, antipodal symmetry defect, and the value/balance/
//! coplanarity report for odd-size maximizer candidates.

use rayon::prelude::*;

use crate::energy::{discrete_energy, Kernel, WeightedMeasure};
use crate::error::{Error, Result};
use crate::numerics::NeumaierSum;
use crate::sphere_geom::{dot, geodesic_distance, sample_direction, PointSet, RandomSeed, SpherePoint};

/// Ascent parameters. Defaults: 5000 steps, step 0.05 with backtracking,
/// 8 restarts, gradient tolerance 1e-8, improvement cutoff 1e-10.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub max_steps: usize,
    pub step_size: f64,
    pub restarts: usize,
    pub seed: RandomSeed,
    pub grad_tol: f64,
    pub value_tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            max_steps: 5000,
            step_size: 0.05,
            restarts: 8,
            seed: RandomSeed(0),
            grad_tol: 1e-8,
            value_tol: 1e-10,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(Error::OutOfRange {
                name: "max_steps",
                value: 0.0,
                range: "at least 1",
            });
        }
        if self.restarts == 0 {
            return Err(Error::OutOfRange {
                name: "restarts",
                value: 0.0,
                range: "at least 1",
            });
        }
        if !(self.step_size > 0.0) || !self.step_size.is_finite() {
            return Err(Error::OutOfRange {
                name: "step_size",
                value: self.step_size,
                range: "(0, inf)",
            });
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::OutOfRange {
                name: "grad_tol",
                value: self.grad_tol,
                range: "(0, inf)",
            });
        }
        if !(self.value_tol > 0.0) {
            return Err(Error::OutOfRange {
                name: "value_tol",
                value: self.value_tol,
                range: "(0, inf)",
            });
        }
        Ok(())
    }
}

/// Best configuration found, its energy, and the accepted-step history.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub points: PointSet,
    pub value: f64,
    /// (step index, energy) after the initial state and each accepted step;
    /// values are nondecreasing.
    pub trace: Vec<(usize, f64)>,
    pub converged: bool,
}

/// Structural report for an odd-size candidate maximizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OddStructureReport {
    /// (1/2 - 1/(2N^2)) minus the configuration's geodesic energy.
    pub value_gap: f64,
    /// Hemisphere counts differ by at most one over sampled directions.
    pub balance_ok: bool,
    /// Third singular value of the residual points after stripping
    /// near-antipodal pairs; near zero when they share a great circle.
    pub coplanarity_residual: f64,
}

fn kernel_derivative(kernel: &Kernel, t: f64) -> f64 {
    match kernel {
        Kernel::GeodesicPow(delta) => {
            // Exact poles contribute a zero subgradient; the derivative of
            // arccos blows up there and maximizers sit on the singularity.
            if t >= 1.0 || t <= -1.0 {
                return 0.0;
            }
            let one_minus = (1.0 - t * t).max(1e-14);
            let u = (t.acos() / std::f64::consts::PI).max(1e-300);
            let base = if *delta == 1.0 {
                1.0
            } else {
                u.powf(delta - 1.0)
            };
            -delta * base / (std::f64::consts::PI * one_minus.sqrt())
        }
        Kernel::EuclideanPow(delta) => {
            if t >= 1.0 {
                return 0.0;
            }
            let s = (2.0 - 2.0 * t).max(1e-14);
            if *delta == 2.0 {
                -2.0
            } else {
                -delta * s.powf(delta / 2.0 - 1.0)
            }
        }
        _ => 0.0,
    }
}

fn energy_of(points: &[Vec<f64>], kernel: &Kernel) -> f64 {
    let n = points.len();
    let mut total = NeumaierSum::new();
    total.add(n as f64 * kernel.eval(1.0));
    for i in 0..n {
        for j in (i + 1)..n {
            total.add(2.0 * kernel.eval(dot(&points[i], &points[j]).clamp(-1.0, 1.0)));
        }
    }
    total.value() / (n * n) as f64
}

struct RestartRun {
    points: Vec<Vec<f64>>,
    value: f64,
    trace: Vec<(usize, f64)>,
    converged: bool,
}

fn run_restart(
    n: usize,
    d: usize,
    kernel: &Kernel,
    cfg: &OptimizerConfig,
    restart: usize,
) -> RestartRun {
    let mut rng = cfg.seed.rng(1000 + restart as u64);
    let mut points: Vec<Vec<f64>> = (0..n).map(|_| sample_direction(&mut rng, d)).collect();
    let mut energy = energy_of(&points, kernel);
    let mut trace = vec![(0usize, energy)];
    let mut converged = false;
    let scale = 2.0 / (n * n) as f64;
    let dim_c = d + 1;

    for step in 1..=cfg.max_steps {
        let mut grads = vec![vec![0.0f64; dim_c]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let t = dot(&points[i], &points[j]).clamp(-1.0, 1.0);
                let kp = scale * kernel_derivative(kernel, t);
                for c in 0..dim_c {
                    grads[i][c] += kp * points[j][c];
                    grads[j][c] += kp * points[i][c];
                }
            }
        }
        let mut grad_sup: f64 = 0.0;
        for i in 0..n {
            let radial = dot(&grads[i], &points[i]);
            let mut norm_sq = 0.0;
            for c in 0..dim_c {
                grads[i][c] -= radial * points[i][c];
                norm_sq += grads[i][c] * grads[i][c];
            }
            grad_sup = grad_sup.max(norm_sq.sqrt());
        }
        if grad_sup <= cfg.grad_tol {
            converged = true;
            break;
        }

        let mut eta = cfg.step_size;
        let mut accepted = false;
        for _ in 0..30 {
            let candidate: Vec<Vec<f64>> = points
                .iter()
                .zip(&grads)
                .map(|(p, g)| {
                    let moved: Vec<f64> =
                        p.iter().zip(g).map(|(pc, gc)| pc + eta * gc).collect();
                    let norm = dot(&moved, &moved).sqrt();
                    moved.iter().map(|c| c / norm).collect()
                })
                .collect();
            let next = energy_of(&candidate, kernel);
            if next > energy {
                let gain = next - energy;
                points = candidate;
                energy = next;
                trace.push((step, energy));
                accepted = true;
                if gain < cfg.value_tol {
                    converged = true;
                }
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            // No improving step at line-search resolution: local maximum.
            converged = true;
            break;
        }
        if converged {
            break;
        }
    }
    RestartRun {
        points,
        value: energy,
        trace,
        converged,
    }
}

/// Maximize the pairwise distance-sum energy (geodesic or chordal power
/// kernels) over n-point configurations on S^d by projected gradient ascent
/// with backtracking, best over independent seeded restarts. Ties across
/// restarts resolve to the lowest restart index.
pub fn maximize_distance_sum(
    n: usize,
    d: usize,
    kernel: &Kernel,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult> {
    if !matches!(kernel, Kernel::GeodesicPow(_) | Kernel::EuclideanPow(_)) {
        return Err(Error::UnsupportedKernel {
            kernel: kernel.name(),
            operation: "maximize_distance_sum",
        });
    }
    kernel.validate()?;
    if n < 2 {
        return Err(Error::TooFewPoints { min: 2, got: n });
    }
    if d < 1 {
        return Err(Error::InvalidDimension { min: 1, got: d });
    }
    cfg.validate()?;

    let runs: Vec<RestartRun> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(n, d, kernel, cfg, r))
        .collect();
    let mut best: Option<RestartRun> = None;
    for run in runs {
        let better = match &best {
            None => true,
            Some(b) => run.value > b.value,
        };
        if better {
            best = Some(run);
        }
    }
    let best = best.expect("at least one restart");
    let points = PointSet::new(
        best.points
            .into_iter()
            .map(SpherePoint::from_direction)
            .collect::<Result<Vec<_>>>()?,
    )?;
    // Report the value through the shared energy path so it is bit-identical
    // to discrete_energy on the returned points.
    let value = discrete_energy(&WeightedMeasure::equal_weights(&points), kernel)?;
    Ok(OptimizationResult {
        points,
        value,
        trace: best.trace,
        converged: best.converged,
    })
}

/// Max over random directions x (with no point exactly on the boundary
/// hyperplane; such draws are rejected and resampled) of the difference
/// between the point counts of the open hemispheres around x and -x.
pub fn verify_hemisphere_balance(
    z: &PointSet,
    num_directions: usize,
    seed: RandomSeed,
) -> Result<usize> {
    if num_directions == 0 {
        return Err(Error::TooFewSamples { min: 1, got: 0 });
    }
    let d = z.dim();
    let budget = num_directions * 10 + 1000;
    let mut attempts = 0usize;
    let mut rng = seed.rng(0);
    let mut worst = 0usize;
    for _ in 0..num_directions {
        let x = loop {
            attempts += 1;
            if attempts > budget {
                return Err(Error::DirectionResampleExhausted { attempts });
            }
            let x = sample_direction(&mut rng, d);
            if z.points().iter().all(|p| dot(p.coords(), &x).abs() >= 1e-12) {
                break x;
            }
        };
        let plus = z
            .points()
            .iter()
            .filter(|p| dot(p.coords(), &x) > 0.0)
            .count();
        let minus = z.len() - plus;
        worst = worst.max(plus.abs_diff(minus));
    }
    Ok(worst)
}

/// Geodesic distance from z_i to the antipode of z_j.
fn antipode_cost_matrix(z: &PointSet) -> Vec<Vec<f64>> {
    let n = z.len();
    let mut costs = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            costs[i][j] =
                geodesic_distance(&z.points()[i], &z.points()[j].antipode()).expect("same dim");
        }
    }
    costs
}

fn exact_minmax_matching(costs: &[Vec<f64>], members: &[usize]) -> f64 {
    let k = members.len();
    debug_assert!(k % 2 == 0);
    if k == 0 {
        return 0.0;
    }
    let full: usize = (1 << k) - 1;
    let mut memo = vec![f64::NAN; 1 << k];

    fn solve(mask: usize, k: usize, full: usize, costs: &[Vec<f64>], members: &[usize], memo: &mut [f64]) -> f64 {
        if mask == full {
            return 0.0;
        }
        if !memo[mask].is_nan() {
            return memo[mask];
        }
        let i = (0..k).find(|b| mask & (1 << b) == 0).expect("non-full mask");
        let mut best = f64::INFINITY;
        for j in (i + 1)..k {
            if mask & (1 << j) != 0 {
                continue;
            }
            let pair_cost = costs[members[i]][members[j]];
            if pair_cost >= best {
                continue;
            }
            let rest = solve(mask | (1 << i) | (1 << j), k, full, costs, members, memo);
            best = best.min(pair_cost.max(rest));
        }
        memo[mask] = best;
        best
    }

    solve(0, k, full, costs, members, &mut memo)
}

fn greedy_minmax_matching(costs: &[Vec<f64>], members: &[usize]) -> f64 {
    let mut avail: Vec<usize> = members.to_vec();
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(avail.len() / 2);
    while avail.len() >= 2 {
        let mut best = (0usize, 1usize, f64::INFINITY);
        for a in 0..avail.len() {
            for b in (a + 1)..avail.len() {
                let c = costs[avail[a]][avail[b]];
                if c < best.2 {
                    best = (a, b, c);
                }
            }
        }
        let (a, b, _) = best;
        let (pa, pb) = (avail[a], avail[b]);
        avail.swap_remove(b);
        avail.swap_remove(a);
        pairs.push((pa, pb));
    }
    // 2-opt on the min-max objective: repeatedly try to relieve the worst
    // pair by swapping partners with another pair.
    for _ in 0..200 {
        let worst_idx = (0..pairs.len())
            .max_by(|&a, &b| {
                costs[pairs[a].0][pairs[a].1].total_cmp(&costs[pairs[b].0][pairs[b].1])
            })
            .expect("non-empty");
        let (a, b) = pairs[worst_idx];
        let worst_cost = costs[a][b];
        let mut improved = false;
        for idx in 0..pairs.len() {
            if idx == worst_idx {
                continue;
            }
            let (c, d) = pairs[idx];
            let local_max = worst_cost.max(costs[c][d]);
            let swap1 = costs[a][c].max(costs[b][d]);
            let swap2 = costs[a][d].max(costs[b][c]);
            if swap1.min(swap2) < local_max {
                if swap1 <= swap2 {
                    pairs[worst_idx] = (a, c);
                    pairs[idx] = (b, d);
                } else {
                    pairs[worst_idx] = (a, d);
                    pairs[idx] = (b, c);
                }
                improved = true;
                break;
            }
        }
        if !improved {
            break;
        }
    }
    pairs
        .iter()
        .map(|&(a, b)| costs[a][b])
        .fold(0.0, f64::max)
}

const EXACT_MATCHING_LIMIT: usize = 20;

/// How far the configuration is from being centrally symmetric: the minimum
/// over pairings of the maximum geodesic distance from each point to its
/// partner's antipode. Odd sizes leave one point unmatched; it contributes
/// its distance to the nearest antipode of the set. Exact search up to 20
/// points, greedy matching with 2-opt refinement beyond (an upper bound).
pub fn symmetry_defect(z: &PointSet) -> Result<f64> {
    let n = z.len();
    let costs = antipode_cost_matrix(z);
    let all: Vec<usize> = (0..n).collect();
    let matching = |members: &[usize]| -> f64 {
        if members.len() <= EXACT_MATCHING_LIMIT {
            exact_minmax_matching(&costs, members)
        } else {
            greedy_minmax_matching(&costs, members)
        }
    };
    if n % 2 == 0 {
        return Ok(matching(&all));
    }
    let unmatched_cost = |u: usize| -> f64 {
        (0..n).map(|j| costs[u][j]).fold(f64::INFINITY, f64::min)
    };
    if n <= EXACT_MATCHING_LIMIT {
        let mut best = f64::INFINITY;
        for u in 0..n {
            let rest: Vec<usize> = (0..n).filter(|&i| i != u).collect();
            best = best.min(unmatched_cost(u).max(matching(&rest)));
        }
        Ok(best)
    } else {
        let u = (0..n)
            .min_by(|&a, &b| unmatched_cost(a).total_cmp(&unmatched_cost(b)))
            .expect("non-empty");
        let rest: Vec<usize> = (0..n).filter(|&i| i != u).collect();
        Ok(unmatched_cost(u).max(matching(&rest)))
    }
}

const ODD_BALANCE_DIRECTIONS: usize = 2000;
const ODD_BALANCE_SEED: RandomSeed = RandomSeed(0xB41A4CE);
const ANTIPODAL_STRIP_TOL: f64 = 1e-4;

/// For an odd-size configuration: gap to the odd-N geodesic optimum
/// 1/2 - 1/(2N^2), hemisphere balance over a fixed internal direction
/// sample, and a great-circle residual for the points left after stripping
/// near-antipodal pairs (third singular value of their coordinate matrix).
pub fn check_odd_maximizer_structure(z: &PointSet) -> Result<OddStructureReport> {
    let n = z.len();
    if n % 2 == 0 {
        return Err(Error::EvenPointCount(n));
    }
    let energy = discrete_energy(
        &WeightedMeasure::equal_weights(z),
        &Kernel::GeodesicPow(1.0),
    )?;
    let nf = n as f64;
    let value_gap = (0.5 - 1.0 / (2.0 * nf * nf)) - energy;
    let balance =
        verify_hemisphere_balance(z, ODD_BALANCE_DIRECTIONS, ODD_BALANCE_SEED)?;

    let costs = antipode_cost_matrix(z);
    let mut remaining: Vec<usize> = (0..n).collect();
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for a in 0..remaining.len() {
            for b in (a + 1)..remaining.len() {
                let c = costs[remaining[a]][remaining[b]];
                if best.is_none_or(|(_, _, bc)| c < bc) {
                    best = Some((a, b, c));
                }
            }
        }
        match best {
            Some((a, b, c)) if c <= ANTIPODAL_STRIP_TOL => {
                remaining.swap_remove(b);
                remaining.swap_remove(a);
            }
            _ => break,
        }
    }
    let cols = z.dim() + 1;
    let coplanarity_residual = if remaining.len() < 3 || cols <= 2 {
        0.0
    } else {
        let mat = nalgebra::DMatrix::from_fn(remaining.len(), cols, |r, c| {
            z.points()[remaining[r]].coords()[c]
        });
        let mut sv: Vec<f64> = mat.svd(false, false).singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv[2]
    };
    Ok(OddStructureReport {
        value_gap,
        balance_ok: balance <= 1,
        coplanarity_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_geom::sample_uniform;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn circle_point(angle: f64) -> SpherePoint {
        SpherePoint::new(vec![angle.cos(), angle.sin()]).unwrap()
    }

    fn quick_cfg(seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            max_steps: 2000,
            restarts: 4,
            seed: RandomSeed(seed),
            ..OptimizerConfig::default()
        }
    }

    #[test]
    fn two_points_become_antipodal() {
        for d in [1usize, 2, 3] {
            let res =
                maximize_distance_sum(2, d, &Kernel::GeodesicPow(1.0), &quick_cfg(d as u64))
                    .unwrap();
            assert!((res.value - 0.5).abs() < 1e-6, "d={d}: value {}", res.value);
            let t = res.points.points()[0].dot(&res.points.points()[1]);
            assert!(t < -1.0 + 1e-6, "d={d}: dot {t}");
        }
    }

    #[test]
    fn three_points_on_circle_reach_four_ninths() {
        let res =
            maximize_distance_sum(3, 1, &Kernel::GeodesicPow(1.0), &quick_cfg(7)).unwrap();
        assert!(
            (res.value - 4.0 / 9.0).abs() < 1e-6,
            "value {}",
            res.value
        );
    }

    #[test]
    fn four_points_chordal_form_a_square() {
        let res =
            maximize_distance_sum(4, 1, &Kernel::EuclideanPow(1.0), &quick_cfg(11)).unwrap();
        let target = (2.0f64.sqrt() + 1.0) / 2.0;
        assert!(
            (res.value - target).abs() < 1e-6,
            "value {} vs {target}",
            res.value
        );
    }

    #[test]
    fn rejected_inputs() {
        let cfg = OptimizerConfig::default();
        assert!(matches!(
            maximize_distance_sum(4, 2, &Kernel::WedgeSquare, &cfg),
            Err(Error::UnsupportedKernel { .. })
        ));
        assert!(matches!(
            maximize_distance_sum(1, 2, &Kernel::GeodesicPow(1.0), &cfg),
            Err(Error::TooFewPoints { .. })
        ));
        assert!(matches!(
            maximize_distance_sum(4, 0, &Kernel::GeodesicPow(1.0), &cfg),
            Err(Error::InvalidDimension { .. })
        ));
        let bad = OptimizerConfig {
            step_size: 0.0,
            ..OptimizerConfig::default()
        };
        assert!(maximize_distance_sum(4, 2, &Kernel::GeodesicPow(1.0), &bad).is_err());
    }

    #[test]
    fn trace_is_nondecreasing_and_geodesic_capped() {
        let cfg = OptimizerConfig {
            max_steps: 400,
            restarts: 2,
            seed: RandomSeed(3),
            ..OptimizerConfig::default()
        };
        let res = maximize_distance_sum(6, 2, &Kernel::GeodesicPow(1.0), &cfg).unwrap();
        for w in res.trace.windows(2) {
            assert!(w[1].1 >= w[0].1, "trace decreased: {:?}", w);
        }
        assert!(res.value <= 0.5 + 1e-12);
    }

    #[test]
    fn even_outputs_are_centrally_symmetric() {
        let res =
            maximize_distance_sum(4, 2, &Kernel::GeodesicPow(1.0), &quick_cfg(19)).unwrap();
        assert!((res.value - 0.5).abs() < 1e-6, "value {}", res.value);
        assert!(
            symmetry_defect(&res.points).unwrap() < 1e-3,
            "defect {}",
            symmetry_defect(&res.points).unwrap()
        );
    }

    #[test]
    fn balance_examples() {
        let p = SpherePoint::new(vec![0.0, 0.0, 1.0]).unwrap();
        let pair = PointSet::new(vec![p.clone(), p.antipode()]).unwrap();
        assert_eq!(
            verify_hemisphere_balance(&pair, 500, RandomSeed(1)).unwrap(),
            0
        );

        // Acute triangle on S^1: every two consecutive central gaps sum to
        // at least pi (gaps 85, 95, 180 degrees).
        let tri = PointSet::new(vec![
            circle_point(0.0),
            circle_point(85.0 * PI / 180.0),
            circle_point(PI),
        ])
        .unwrap();
        assert!(verify_hemisphere_balance(&tri, 2000, RandomSeed(2)).unwrap() <= 1);

        // Four points clustered in one small cap are badly unbalanced.
        let clustered = PointSet::new(
            (0..4)
                .map(|k| {
                    let phi = PI / 2.0 * k as f64;
                    let theta = 0.05f64;
                    SpherePoint::new(vec![
                        theta.sin() * phi.cos(),
                        theta.sin() * phi.sin(),
                        theta.cos(),
                    ])
                    .unwrap()
                })
                .collect(),
        )
        .unwrap();
        assert!(verify_hemisphere_balance(&clustered, 2000, RandomSeed(3)).unwrap() >= 2);
        assert!(verify_hemisphere_balance(&pair, 0, RandomSeed(1)).is_err());
    }

    #[test]
    fn symmetry_defect_examples() {
        let half = sample_uniform(2, 5, RandomSeed(4)).unwrap();
        let mut pts = Vec::new();
        for p in half.points() {
            pts.push(p.clone());
            pts.push(p.antipode());
        }
        let sym = PointSet::new(pts).unwrap();
        assert!(symmetry_defect(&sym).unwrap() < 1e-15);

        // Two points: the defect is the distance from q to -p.
        let p = circle_point(0.3);
        let q = circle_point(1.1);
        let two = PointSet::new(vec![p.clone(), q.clone()]).unwrap();
        assert_abs_diff_eq!(
            symmetry_defect(&two).unwrap(),
            geodesic_distance(&q, &p.antipode()).unwrap(),
            epsilon = 1e-15
        );

        // Large even sets take the greedy + 2-opt path; antipodally paired
        // inputs still come out exact.
        let big_half = sample_uniform(2, 11, RandomSeed(5)).unwrap();
        let mut big = Vec::new();
        for p in big_half.points() {
            big.push(p.clone());
            big.push(p.antipode());
        }
        let big = PointSet::new(big).unwrap();
        assert!(symmetry_defect(&big).unwrap() < 1e-15);

        // Greedy is an upper bound for the exact optimum on small sets.
        let z = sample_uniform(2, 8, RandomSeed(6)).unwrap();
        let costs = antipode_cost_matrix(&z);
        let members: Vec<usize> = (0..8).collect();
        let exact = exact_minmax_matching(&costs, &members);
        let greedy = greedy_minmax_matching(&costs, &members);
        assert!(greedy >= exact - 1e-15);
        assert!(symmetry_defect(&z).unwrap() <= greedy + 1e-15);
    }

    #[test]
    fn odd_structure_examples() {
        // Antipodal pair plus a free point: exact maximizer, empty residual.
        let p = SpherePoint::new(vec![0.0, 0.0, 1.0]).unwrap();
        let q = SpherePoint::new(vec![0.8, 0.6, 0.0]).unwrap();
        let z = PointSet::new(vec![p.clone(), p.antipode(), q]).unwrap();
        let report = check_odd_maximizer_structure(&z).unwrap();
        assert_abs_diff_eq!(report.value_gap, 0.0, epsilon = 1e-12);
        assert!(report.balance_ok);
        assert_eq!(report.coplanarity_residual, 0.0);

        // Regular pentagon on a great circle of S^2: maximizer, coplanar.
        let pentagon = PointSet::new(
            (0..5)
                .map(|k| {
                    let a = 2.0 * PI * k as f64 / 5.0;
                    SpherePoint::new(vec![a.cos(), a.sin(), 0.0]).unwrap()
                })
                .collect(),
        )
        .unwrap();
        let report = check_odd_maximizer_structure(&pentagon).unwrap();
        assert_abs_diff_eq!(report.value_gap, 0.0, epsilon = 1e-9);
        assert!(report.balance_ok);
        assert!(report.coplanarity_residual < 1e-12);

        // Random five points almost surely fall short of the maximum.
        let random = sample_uniform(2, 5, RandomSeed(8)).unwrap();
        let report = check_odd_maximizer_structure(&random).unwrap();
        assert!(report.value_gap > 1e-3, "gap {}", report.value_gap);

        assert!(matches!(
            check_odd_maximizer_structure(&sample_uniform(2, 4, RandomSeed(1)).unwrap()),
            Err(Error::EvenPointCount(4))
        ));
    }

    #[test]
    fn antipodal_pair_augmentation_identity() {
        // Adding {p, -p} to any N-point set adds exactly 2(N+1) to the
        // ordered-pair geodesic distance sum.
        let z = sample_uniform(2, 6, RandomSeed(9)).unwrap();
        let p = SpherePoint::new(vec![0.0, 1.0, 0.0]).unwrap();
        let mut augmented = z.points().to_vec();
        augmented.push(p.clone());
        augmented.push(p.antipode());
        let augmented = PointSet::new(augmented).unwrap();

        let raw_sum = |set: &PointSet| -> f64 {
            let mut acc = NeumaierSum::new();
            for a in set.points() {
                for b in set.points() {
                    acc.add(geodesic_distance(a, b).unwrap());
                }
            }
            acc.value()
        };
        let n = z.len() as f64;
        assert_abs_diff_eq!(
            raw_sum(&augmented),
            raw_sum(&z) + 2.0 * (n + 1.0),
            epsilon = 1e-12
        );
    }
}
