//! Closed-form L^2 discrepancies via invariance identities, and independent
//! Monte Carlo estimators of the defining integrals, for caps, fixed-height
//! caps, hemispheres, wedges, and slices.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::energy::{discrete_energy, continuous_energy_sigma, vd, Kernel, WeightedMeasure};
use crate::error::{Error, Result};
use crate::numerics::NeumaierSum;
use crate::sphere_geom::{
    cap_intersection_measure, cap_measure, constant_cd, dot, sample_direction, PointSet,
    RandomSeed, SpherePoint,
};

/// Test-set family whose L^2 discrepancy is being measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiscrepancyFamily {
    /// All caps, integrated over center and height t in [-1, 1] (unnormalized dt).
    Cap,
    /// Caps of one fixed height t, integrated over centers.
    CapFixedT(f64),
    /// Hemispheres (caps at t = 0).
    Hemisphere,
    /// Wedges between two hyperplanes, integrated over center pairs.
    Wedge,
    /// Slices (half-wedges), integrated over center pairs.
    Slice,
}

/// A Monte Carlo value with its standard error and provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: RandomSeed,
}

pub(crate) const MC_CHUNK: usize = 4096;

/// Chunked mean estimator: each fixed-size chunk draws from its own counter
/// substream and chunks are combined in index order, so the estimate is
/// reproducible and independent of the worker count.
pub(crate) fn chunked_mc<F>(
    samples: usize,
    seed: RandomSeed,
    stream_lo: u64,
    per_sample: F,
) -> MCEstimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let n_chunks = samples.div_ceil(MC_CHUNK);
    let chunk_stats = |chunk: usize| -> (f64, f64) {
        let len = MC_CHUNK.min(samples - chunk * MC_CHUNK);
        let mut rng = seed.rng(stream_lo + 1 + chunk as u64);
        let mut sum = NeumaierSum::new();
        let mut sum_sq = NeumaierSum::new();
        for _ in 0..len {
            let v = per_sample(&mut rng);
            sum.add(v);
            sum_sq.add(v * v);
        }
        (sum.value(), sum_sq.value())
    };
    let stats: Vec<(f64, f64)> = if n_chunks > 1 {
        (0..n_chunks).into_par_iter().map(chunk_stats).collect()
    } else {
        (0..n_chunks).map(chunk_stats).collect()
    };
    let mut sum = NeumaierSum::new();
    let mut sum_sq = NeumaierSum::new();
    for (s, s2) in stats {
        sum.add(s);
        sum_sq.add(s2);
    }
    let n = samples as f64;
    let total = sum.value();
    let mean = total / n;
    let var = ((sum_sq.value() - total * total / n) / (n - 1.0)).max(0.0);
    MCEstimate {
        value: mean,
        std_error: (var / n).sqrt(),
        samples,
        seed,
    }
}

/// Squared L^2 cap discrepancy via the invariance identity
/// D^2 = C_d (I(sigma) - I(mu)) for the chordal distance kernel.
///
/// Valid for signed mass-1 measures as well: integrating the cap-overlap
/// kernel over the height gives 1 - C_d |x - y|, and the cross terms cancel
/// by rotational invariance, so the identity survives the extension.
pub fn cap_discrepancy_sq(mu: &WeightedMeasure) -> Result<f64> {
    let d = mu.dim();
    let kernel = Kernel::EuclideanPow(1.0);
    let i_sigma = continuous_energy_sigma(&kernel, d)?;
    let energy = discrete_energy(mu, &kernel)?;
    Ok(constant_cd(d)? * (i_sigma - energy))
}

/// Squared L^2 hemisphere discrepancy: (1/2)(1/2 - I_geodesic(mu)).
pub fn hemisphere_discrepancy_sq(mu: &WeightedMeasure) -> Result<f64> {
    let energy = discrete_energy(mu, &Kernel::GeodesicPow(1.0))?;
    Ok(0.5 * (0.5 - energy))
}

/// Squared L^2 wedge discrepancy: E_{(1/2 - d)^2}(Z) - (V_d - 1/4).
pub fn wedge_discrepancy_sq(z: &PointSet) -> Result<f64> {
    let mu = WeightedMeasure::equal_weights(z);
    let energy = discrete_energy(&mu, &Kernel::WedgeSquare)?;
    Ok(energy - (vd(z.dim())? - 0.25))
}

/// Squared L^2 slice discrepancy: (E_{(1 - d)^2}(Z) - V_d) / 4.
pub fn slice_discrepancy_sq(z: &PointSet) -> Result<f64> {
    let mu = WeightedMeasure::equal_weights(z);
    let energy = discrete_energy(&mu, &Kernel::SliceSquare)?;
    Ok(0.25 * (energy - vd(z.dim())?))
}

/// Squared discrepancy over caps of one fixed height:
/// (1/N^2) Sum_{i,j} sigma(C(z_i,t) n C(z_j,t)) - sigma(C(.,t))^2.
pub fn cap_fixed_t_discrepancy_sq(z: &PointSet, t: f64) -> Result<f64> {
    let d = z.dim();
    let single = cap_measure(t, d)?;
    let pts = z.points();
    let n = pts.len();
    let mut sum = NeumaierSum::new();
    for i in 0..n {
        sum.add(cap_intersection_measure(&pts[i], &pts[i], t)?);
        for j in (i + 1)..n {
            sum.add(2.0 * cap_intersection_measure(&pts[i], &pts[j], t)?);
        }
    }
    Ok(sum.value() / (n * n) as f64 - single * single)
}

/// Fraction of the configuration's hyperplanes z_k^perp that strictly
/// separate x from y; boundary contacts count in the denominator only.
pub fn hamming_distance(x: &SpherePoint, y: &SpherePoint, z: &PointSet) -> Result<f64> {
    if x.dim() != z.dim() || y.dim() != z.dim() {
        return Err(Error::DimensionMismatch {
            expected: z.dim(),
            got: if x.dim() != z.dim() { x.dim() } else { y.dim() },
        });
    }
    let mut separating = 0usize;
    for p in z.points() {
        let a = x.dot(p);
        let b = y.dot(p);
        if (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0) {
            separating += 1;
        }
    }
    Ok(separating as f64 / z.len() as f64)
}

/// Monte Carlo estimate of the defining integral of the squared discrepancy.
///
/// Point sets enter as equal-weight measures (`WeightedMeasure::equal_weights`).
/// Indicators use strict inequalities; exact-zero dot products fall on neither
/// side. Cap integrates the unnormalized height measure dt on [-1, 1].
pub fn mc_discrepancy_sq(
    mu: &WeightedMeasure,
    family: DiscrepancyFamily,
    samples: usize,
    seed: RandomSeed,
) -> Result<MCEstimate> {
    if samples < 100 {
        return Err(Error::TooFewSamples {
            min: 100,
            got: samples,
        });
    }
    let d = mu.dim();
    let coords: Vec<&[f64]> = mu.atoms().iter().map(|(p, _)| p.coords()).collect();
    let weights: Vec<f64> = mu.atoms().iter().map(|(_, w)| *w).collect();

    let signed_mass_above = |x: &[f64], t: f64| -> f64 {
        let mut m = NeumaierSum::new();
        for (zc, w) in coords.iter().zip(&weights) {
            if dot(zc, x) > t {
                m.add(*w);
            }
        }
        m.value()
    };

    let estimate = match family {
        DiscrepancyFamily::Cap => {
            // Validate once; heights drawn inside stay in range.
            cap_measure(0.0, d)?;
            chunked_mc(samples, seed, 0, |rng| {
                let x = sample_direction(rng, d);
                let t: f64 = rand::Rng::random_range(rng, -1.0..1.0);
                let expected = cap_measure(t, d).expect("height t within [-1, 1]");
                let local = signed_mass_above(&x, t) - expected;
                2.0 * local * local
            })
        }
        DiscrepancyFamily::CapFixedT(t) => {
            let expected = cap_measure(t, d)?;
            chunked_mc(samples, seed, 0, |rng| {
                let x = sample_direction(rng, d);
                let local = signed_mass_above(&x, t) - expected;
                local * local
            })
        }
        DiscrepancyFamily::Hemisphere => chunked_mc(samples, seed, 0, |rng| {
            let x = sample_direction(rng, d);
            let local = signed_mass_above(&x, 0.0) - 0.5;
            local * local
        }),
        DiscrepancyFamily::Wedge => chunked_mc(samples, seed, 0, |rng| {
            let x = sample_direction(rng, d);
            let y = sample_direction(rng, d);
            let expected = dot(&x, &y).clamp(-1.0, 1.0).acos() / std::f64::consts::PI;
            let mut mass = NeumaierSum::new();
            for (zc, w) in coords.iter().zip(&weights) {
                let a = dot(zc, &x);
                let b = dot(zc, &y);
                if (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0) {
                    mass.add(*w);
                }
            }
            let local = mass.value() - expected;
            local * local
        }),
        DiscrepancyFamily::Slice => chunked_mc(samples, seed, 0, |rng| {
            let x = sample_direction(rng, d);
            let y = sample_direction(rng, d);
            let expected = dot(&x, &y).clamp(-1.0, 1.0).acos() / (2.0 * std::f64::consts::PI);
            let mut mass = NeumaierSum::new();
            for (zc, w) in coords.iter().zip(&weights) {
                if dot(zc, &x) > 0.0 && dot(zc, &y) < 0.0 {
                    mass.add(*w);
                }
            }
            let local = mass.value() - expected;
            local * local
        }),
    };
    Ok(estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_geom::{geodesic_distance, sample_uniform, fibonacci_points};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn pt(coords: &[f64]) -> SpherePoint {
        SpherePoint::new(coords.to_vec()).unwrap()
    }

    fn delta_at(coords: &[f64]) -> WeightedMeasure {
        WeightedMeasure::new(vec![(pt(coords), 1.0)]).unwrap()
    }

    fn symmetric_set(d: usize, pairs: usize, seed: u64) -> PointSet {
        let half = sample_uniform(d, pairs, RandomSeed(seed)).unwrap();
        let mut pts = Vec::new();
        for p in half.points() {
            pts.push(p.clone());
            pts.push(p.antipode());
        }
        PointSet::new(pts).unwrap()
    }

    #[test]
    fn cap_discrepancy_examples() {
        // Single point on S^1: C_1 (4/pi - 0).
        let single = delta_at(&[1.0, 0.0]);
        assert_abs_diff_eq!(
            cap_discrepancy_sq(&single).unwrap(),
            4.0 / (PI * PI),
            epsilon = 1e-8
        );

        // Antipodal pair on S^1: (1/pi)(4/pi - 1).
        let pair = crate::energy::antipodal_pair_measure(1).unwrap();
        assert_abs_diff_eq!(
            cap_discrepancy_sq(&pair).unwrap(),
            (4.0 / PI - 1.0) / PI,
            epsilon = 1e-8
        );

        // Duplicating a point changes nothing.
        let dup = WeightedMeasure::new(vec![
            (pt(&[1.0, 0.0]), 0.25),
            (pt(&[1.0, 0.0]), 0.25),
            (pt(&[1.0, 0.0]), 0.5),
        ])
        .unwrap();
        assert_abs_diff_eq!(
            cap_discrepancy_sq(&dup).unwrap(),
            cap_discrepancy_sq(&single).unwrap(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn hemisphere_discrepancy_examples() {
        let sym = WeightedMeasure::equal_weights(&symmetric_set(2, 4, 5));
        assert_abs_diff_eq!(hemisphere_discrepancy_sq(&sym).unwrap(), 0.0, epsilon = 1e-14);

        let single = delta_at(&[0.0, 0.0, 1.0]);
        assert_eq!(hemisphere_discrepancy_sq(&single).unwrap(), 0.25);

        // Regular pentagon on S^1 attains the odd-N floor 1/(4 N^2).
        let pentagon: Vec<_> = (0..5)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / 5.0;
                pt(&[a.cos(), a.sin()])
            })
            .collect();
        let mu = WeightedMeasure::equal_weights(&PointSet::new(pentagon).unwrap());
        assert_abs_diff_eq!(
            hemisphere_discrepancy_sq(&mu).unwrap(),
            1.0 / 100.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn wedge_and_slice_antipodal_pair() {
        let p = pt(&[0.0, 0.0, 1.0]);
        let z = PointSet::new(vec![p.clone(), p.antipode()]).unwrap();
        assert_abs_diff_eq!(
            wedge_discrepancy_sq(&z).unwrap(),
            2.0 / (PI * PI),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            slice_discrepancy_sq(&z).unwrap(),
            1.0 / (2.0 * PI * PI),
            epsilon = 1e-12
        );

        let singleton = PointSet::new(vec![p]).unwrap();
        assert_abs_diff_eq!(
            wedge_discrepancy_sq(&singleton).unwrap(),
            2.0 / (PI * PI),
            epsilon = 1e-12
        );
        let v2 = vd(2).unwrap();
        assert_abs_diff_eq!(
            slice_discrepancy_sq(&singleton).unwrap(),
            (1.0 - v2) / 4.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn wedge_discrepancy_small_for_fibonacci() {
        let z = fibonacci_points(1600).unwrap();
        let w = wedge_discrepancy_sq(&z).unwrap();
        assert!(w >= -1e-12 && w < 1e-3, "wedge discrepancy {w}");
    }

    #[test]
    fn cap_fixed_t_examples() {
        let z = sample_uniform(2, 5, RandomSeed(2)).unwrap();
        // At t = 0 this is the hemisphere discrepancy.
        let fixed = cap_fixed_t_discrepancy_sq(&z, 0.0).unwrap();
        let hemi = hemisphere_discrepancy_sq(&WeightedMeasure::equal_weights(&z)).unwrap();
        assert_abs_diff_eq!(fixed, hemi, epsilon = 1e-9);

        // Single point: sigma(C)(1 - sigma(C)).
        let single = PointSet::new(vec![pt(&[0.0, 1.0, 0.0])]).unwrap();
        for t in [-0.6, 0.0, 0.3, 0.9] {
            let m = cap_measure(t, 2).unwrap();
            assert_abs_diff_eq!(
                cap_fixed_t_discrepancy_sq(&single, t).unwrap(),
                m * (1.0 - m),
                epsilon = 1e-9
            );
        }

        let sym = symmetric_set(2, 3, 8);
        assert_abs_diff_eq!(
            cap_fixed_t_discrepancy_sq(&sym, 0.0).unwrap(),
            0.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn cap_equals_height_average_of_fixed_heights() {
        let z = sample_uniform(2, 6, RandomSeed(12)).unwrap();
        let averaged = crate::numerics::integrate_adaptive(
            &|t: f64| cap_fixed_t_discrepancy_sq(&z, t).unwrap(),
            -1.0,
            1.0,
            1e-7,
        )
        .unwrap();
        let closed = cap_discrepancy_sq(&WeightedMeasure::equal_weights(&z)).unwrap();
        assert_abs_diff_eq!(averaged, closed, epsilon = 1e-6);
    }

    #[test]
    fn hamming_examples() {
        let z = sample_uniform(2, 7, RandomSeed(4)).unwrap();
        let x = pt(&[1.0, 0.0, 0.0]);
        assert_eq!(hamming_distance(&x, &x, &z).unwrap(), 0.0);
        assert_eq!(hamming_distance(&x, &x.antipode(), &z).unwrap(), 1.0);
    }

    #[test]
    fn mc_matches_closed_forms() {
        let z = sample_uniform(2, 12, RandomSeed(100)).unwrap();
        let mu = WeightedMeasure::equal_weights(&z);
        let cases = [
            (DiscrepancyFamily::Cap, cap_discrepancy_sq(&mu).unwrap()),
            (
                DiscrepancyFamily::Hemisphere,
                hemisphere_discrepancy_sq(&mu).unwrap(),
            ),
            (DiscrepancyFamily::Wedge, wedge_discrepancy_sq(&z).unwrap()),
            (DiscrepancyFamily::Slice, slice_discrepancy_sq(&z).unwrap()),
            (
                DiscrepancyFamily::CapFixedT(0.35),
                cap_fixed_t_discrepancy_sq(&z, 0.35).unwrap(),
            ),
        ];
        for (family, closed) in cases {
            let mc = mc_discrepancy_sq(&mu, family, 200_000, RandomSeed(555)).unwrap();
            assert!(
                (mc.value - closed).abs() <= 3.0 * mc.std_error,
                "{family:?}: closed {closed}, mc {} +- {}",
                mc.value,
                mc.std_error
            );
        }
    }

    #[test]
    fn mc_matches_closed_forms_other_dims() {
        for (d, n) in [(1usize, 8usize), (3, 8)] {
            let z = sample_uniform(d, n, RandomSeed(40 + d as u64)).unwrap();
            let mu = WeightedMeasure::equal_weights(&z);
            let closed = cap_discrepancy_sq(&mu).unwrap();
            let mc = mc_discrepancy_sq(&mu, DiscrepancyFamily::Cap, 200_000, RandomSeed(9)).unwrap();
            assert!(
                (mc.value - closed).abs() <= 3.0 * mc.std_error,
                "d={d}: closed {closed}, mc {} +- {}",
                mc.value,
                mc.std_error
            );
        }
    }

    #[test]
    fn mc_symmetric_hemisphere_is_zero() {
        let sym = WeightedMeasure::equal_weights(&symmetric_set(2, 4, 21));
        let mc = mc_discrepancy_sq(&sym, DiscrepancyFamily::Hemisphere, 50_000, RandomSeed(3))
            .unwrap();
        assert!(mc.value.abs() <= 3.0 * mc.std_error.max(1e-15));
    }

    #[test]
    fn mc_deterministic_given_seed() {
        let z = sample_uniform(2, 6, RandomSeed(71)).unwrap();
        let mu = WeightedMeasure::equal_weights(&z);
        let a = mc_discrepancy_sq(&mu, DiscrepancyFamily::Wedge, 30_000, RandomSeed(1)).unwrap();
        let b = mc_discrepancy_sq(&mu, DiscrepancyFamily::Wedge, 30_000, RandomSeed(1)).unwrap();
        assert_eq!(a, b);
        assert!(mc_discrepancy_sq(&mu, DiscrepancyFamily::Wedge, 50, RandomSeed(1)).is_err());
    }

    #[test]
    fn closed_forms_nonnegative_on_random_configurations() {
        for seed in 0..12u64 {
            let d = 1 + (seed as usize) % 3;
            let n = 1 + (seed as usize) % 9;
            let z = sample_uniform(d, n, RandomSeed(900 + seed)).unwrap();
            let mu = WeightedMeasure::equal_weights(&z);
            assert!(cap_discrepancy_sq(&mu).unwrap() >= -1e-12);
            assert!(hemisphere_discrepancy_sq(&mu).unwrap() >= -1e-12);
            assert!(wedge_discrepancy_sq(&z).unwrap() >= -1e-12);
            assert!(slice_discrepancy_sq(&z).unwrap() >= -1e-12);
            assert!(cap_fixed_t_discrepancy_sq(&z, -0.4).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn closed_forms_rotation_invariant() {
        use nalgebra::{Rotation3, Vector3};
        let z = sample_uniform(2, 9, RandomSeed(15)).unwrap();
        let rot = Rotation3::from_axis_angle(
            &nalgebra::Unit::new_normalize(Vector3::new(1.0, 2.0, -0.7)),
            0.77,
        );
        let rotated = PointSet::new(
            z.points()
                .iter()
                .map(|p| {
                    let v = rot * Vector3::new(p.coords()[0], p.coords()[1], p.coords()[2]);
                    SpherePoint::new(vec![v.x, v.y, v.z]).unwrap()
                })
                .collect(),
        )
        .unwrap();
        let mu = WeightedMeasure::equal_weights(&z);
        let mu_rot = WeightedMeasure::equal_weights(&rotated);
        assert_abs_diff_eq!(
            cap_discrepancy_sq(&mu).unwrap(),
            cap_discrepancy_sq(&mu_rot).unwrap(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            hemisphere_discrepancy_sq(&mu).unwrap(),
            hemisphere_discrepancy_sq(&mu_rot).unwrap(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            wedge_discrepancy_sq(&z).unwrap(),
            wedge_discrepancy_sq(&rotated).unwrap(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            slice_discrepancy_sq(&z).unwrap(),
            slice_discrepancy_sq(&rotated).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn wedge_mc_agrees_with_hamming_view() {
        // The wedge integrand is exactly (hamming - geodesic)^2 for
        // equal-weight sets; spot-check the estimator against a direct
        // average over an independent pair stream.
        let z = sample_uniform(2, 6, RandomSeed(33)).unwrap();
        let mu = WeightedMeasure::equal_weights(&z);
        let mc = mc_discrepancy_sq(&mu, DiscrepancyFamily::Wedge, 100_000, RandomSeed(8)).unwrap();
        let mut rng = RandomSeed(4242).rng(0);
        let mut acc = NeumaierSum::new();
        let n = 100_000;
        for _ in 0..n {
            let x = SpherePoint::from_direction(sample_direction(&mut rng, 2)).unwrap();
            let y = SpherePoint::from_direction(sample_direction(&mut rng, 2)).unwrap();
            let diff = hamming_distance(&x, &y, &z).unwrap()
                - geodesic_distance(&x, &y).unwrap();
            acc.add(diff * diff);
        }
        let direct = acc.value() / n as f64;
        assert!(
            (mc.value - direct).abs() <= 4.0 * mc.std_error,
            "wedge mc {} vs hamming view {direct}",
            mc.value
        );
    }
}
