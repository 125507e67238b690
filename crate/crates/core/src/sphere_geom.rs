//! Geometry primitives on S^d: points, distances, uniform sampling, cap
//! measures, cap intersection measures, and the distance-integral constant C_d.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::numerics::{integrate_adaptive, surface_ratio, NeumaierSum};

use std::f64::consts::PI;

/// Inputs whose norm deviates from 1 by more than this are rejected as
/// malformed; smaller deviations are silently renormalized.
pub const NORM_REJECT_TOL: f64 = 1e-6;

/// A unit vector in R^(d+1) representing a point on the sphere S^d.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    dim: usize,
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Builds a point from coordinates, renormalizing round-off-sized norm
    /// deviations and rejecting anything farther than `NORM_REJECT_TOL` from
    /// the sphere.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidDimension {
                min: 1,
                got: coords.len().saturating_sub(1),
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoords);
        }
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_REJECT_TOL {
            return Err(Error::BadNorm { norm });
        }
        let dim = coords.len() - 1;
        let coords = coords.into_iter().map(|c| c / norm).collect();
        Ok(Self { dim, coords })
    }

    /// Builds a point from any nonzero direction vector by normalizing it.
    pub fn from_direction(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidDimension {
                min: 1,
                got: coords.len().saturating_sub(1),
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoords);
        }
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::BadNorm { norm });
        }
        let dim = coords.len() - 1;
        let coords = coords.into_iter().map(|c| c / norm).collect();
        Ok(Self { dim, coords })
    }

    /// Sphere dimension d (the ambient space is R^(d+1)).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Raw inner product; callers validate dimensions.
    pub fn dot(&self, other: &SpherePoint) -> f64 {
        dot(&self.coords, &other.coords)
    }

    /// Inner product clamped to [-1, 1], shielding arccos/sqrt from round-off.
    pub fn clamped_dot(&self, other: &SpherePoint) -> f64 {
        self.dot(other).clamp(-1.0, 1.0)
    }

    pub fn antipode(&self) -> SpherePoint {
        SpherePoint {
            dim: self.dim,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// An ordered configuration of points sharing one sphere dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    points: Vec<SpherePoint>,
    label: Option<String>,
}

impl PointSet {
    pub fn new(points: Vec<SpherePoint>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyPointSet)?;
        let dim = first.dim();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
        }
        Ok(Self {
            dim,
            points,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }
}

/// Seed for every randomized operation; identical seeds reproduce identical
/// sample streams regardless of thread count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSeed(pub u64);

impl RandomSeed {
    /// A generator on an independent substream. Parallel consumers take
    /// distinct streams so results never depend on scheduling.
    pub fn rng(self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(stream);
        rng
    }
}

/// One uniform direction on S^d from normalized i.i.d. Gaussians.
pub(crate) fn sample_direction(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..=d).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// Normalized geodesic distance arccos(x.y)/pi; antipodal points are at
/// distance 1.
pub fn geodesic_distance(x: &SpherePoint, y: &SpherePoint) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    Ok(x.clamped_dot(y).acos() / PI)
}

/// Euclidean (chordal) distance sqrt(2 - 2 x.y) in [0, 2].
pub fn euclidean_distance(x: &SpherePoint, y: &SpherePoint) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    Ok((2.0 - 2.0 * x.clamped_dot(y)).max(0.0).sqrt())
}

/// `n` i.i.d. uniform points on S^d, deterministic in the seed.
pub fn sample_uniform(d: usize, n: usize, seed: RandomSeed) -> Result<PointSet> {
    if d < 1 {
        return Err(Error::InvalidDimension { min: 1, got: d });
    }
    if n < 1 {
        return Err(Error::TooFewPoints { min: 1, got: n });
    }
    let mut rng = seed.rng(0);
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        points.push(SpherePoint::from_direction(sample_direction(&mut rng, d))?);
    }
    PointSet::new(points)
}

/// The constant C_d = Gamma((d+1)/2) / (d sqrt(pi) Gamma(d/2)) relating the
/// cap identity's energy gap to the squared cap discrepancy. Equals half the
/// mean absolute single coordinate under the uniform measure.
pub fn constant_cd(d: usize) -> Result<f64> {
    if d < 1 {
        return Err(Error::InvalidDimension { min: 1, got: d });
    }
    Ok(surface_ratio(d) / d as f64)
}

/// Normalized surface measure of the cap C(x, t) = { z : x.z > t }.
///
/// Independent of the center; computed as (omega_{d-1}/omega_d)
/// Int_t^1 (1-s^2)^{(d-2)/2} ds, with exact forms for d <= 3 and adaptive
/// quadrature beyond.
pub fn cap_measure(t: f64, d: usize) -> Result<f64> {
    validate_height(t)?;
    if d < 1 {
        return Err(Error::InvalidDimension { min: 1, got: d });
    }
    let value = match d {
        1 => t.acos() / PI,
        2 => (1.0 - t) / 2.0,
        3 => (2.0 / PI) * (PI / 4.0 - t.asin() / 2.0 - t * (1.0 - t * t).max(0.0).sqrt() / 2.0),
        _ => cap_measure_quadrature(t, d)?,
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Quadrature path for the cap measure, exposed for cross-checking the
/// closed forms.
///
/// Substituting s = sin(theta) turns the weight (1-s^2)^{(d-2)/2} into
/// cos^{d-1}(theta), which is smooth up to the boundary for every d >= 1
/// (the raw weight is singular at s = 1 when d = 1).
pub fn cap_measure_quadrature(t: f64, d: usize) -> Result<f64> {
    validate_height(t)?;
    if d < 1 {
        return Err(Error::InvalidDimension { min: 1, got: d });
    }
    let power = d as i32 - 1;
    let integral = integrate_adaptive(
        &|theta: f64| theta.cos().powi(power),
        t.asin(),
        PI / 2.0,
        1e-12,
    )?;
    Ok((surface_ratio(d) * integral).clamp(0.0, 1.0))
}

fn validate_height(t: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&t) || t.is_nan() {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            range: "[-1, 1]",
        });
    }
    Ok(())
}

/// Int_{psi0}^{pi/2} cos^m(psi) dpsi via the stable upward recurrence.
fn cos_power_tail(m: usize, psi0: f64) -> f64 {
    let s0 = psi0.sin();
    let c0 = psi0.cos();
    let mut w_even = PI / 2.0 - psi0; // W_0
    let mut w_odd = 1.0 - s0; // W_1
    if m == 0 {
        return w_even;
    }
    if m == 1 {
        return w_odd;
    }
    // c0^{k-1} maintained incrementally for W_k = ((k-1) W_{k-2} - c0^{k-1} s0) / k.
    let mut c_pow = c0; // c0^1, used for k = 2
    for k in 2..=m {
        let w = ((k as f64 - 1.0) * if k % 2 == 0 { w_even } else { w_odd } - c_pow * s0)
            / k as f64;
        if k % 2 == 0 {
            w_even = w;
        } else {
            w_odd = w;
        }
        c_pow *= c0;
    }
    if m % 2 == 0 {
        w_even
    } else {
        w_odd
    }
}

/// Normalized measure of the intersection C(x,t) n C(y,t) of two equal-height
/// caps. Symmetric, depends on (x, y) only through their inner product, and
/// accurate to about 1e-9 absolute.
pub fn cap_intersection_measure(x: &SpherePoint, y: &SpherePoint, t: f64) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    validate_height(t)?;
    let d = x.dim();
    let rho = x.clamped_dot(y);
    if t >= 1.0 {
        return Ok(0.0);
    }
    let single = cap_measure(t, d)?;
    if rho >= 1.0 - 1e-13 {
        return Ok(single);
    }
    if rho <= -1.0 + 1e-13 {
        let opposite = cap_measure(-t, d)?;
        return Ok((single - opposite).max(0.0));
    }
    if d == 1 {
        // Exact arc overlap: half-width alpha around each center, separation
        // gamma; a second overlap window can appear around the far side.
        let alpha = t.acos();
        let gamma = rho.acos();
        let near = (2.0 * alpha - gamma).max(0.0);
        let far = (2.0 * alpha - (2.0 * PI - gamma)).max(0.0);
        return Ok(((near + far) / (2.0 * PI)).clamp(0.0, single));
    }
    // Coordinates a = z.x and the component of z along y's part orthogonal to
    // x reduce the measure to a 1D integral: the inner angular integral is the
    // cosine-power tail, leaving
    //   ((d-1)/(2 pi)) Int_t^1 (1-a^2)^{(d-2)/2} W_{d-2}(psi_min(a)) da.
    let sin_sep = (1.0 - rho * rho).max(0.0).sqrt();
    let expo = (d as f64 - 2.0) / 2.0;
    let m = d - 2;
    let integrand = |a: f64| {
        let ra = (1.0 - a * a).max(0.0);
        if ra == 0.0 {
            return 0.0;
        }
        let ratio = ((t - a * rho) / (sin_sep * ra.sqrt())).clamp(-1.0, 1.0);
        ra.powf(expo) * cos_power_tail(m, ratio.asin())
    };
    // The inner angle saturates (ratio hits +-1) exactly where the two cap
    // boundary circles cross, at a = t rho -+ sin_sep sqrt(1 - t^2); the
    // integrand is smooth between those heights, so integrate each piece
    // separately rather than asking the estimator to resolve the kinks.
    let spread = sin_sep * (1.0 - t * t).max(0.0).sqrt();
    let mut cuts = [t, 1.0, f64::NAN, f64::NAN];
    let mut n_cuts = 2;
    for root in [t * rho - spread, t * rho + spread] {
        if root > t + 1e-15 && root < 1.0 - 1e-15 {
            cuts[n_cuts] = root;
            n_cuts += 1;
        }
    }
    let cuts = &mut cuts[..n_cuts];
    cuts.sort_by(f64::total_cmp);
    let mut integral = 0.0;
    for pair in cuts.windows(2) {
        integral += integrate_adaptive(&integrand, pair[0], pair[1], 1e-11)?;
    }
    let value = (d as f64 - 1.0) / (2.0 * PI) * integral;
    Ok(value.clamp(0.0, single))
}

/// Golden-angle spiral lattice on S^2 (midpoint latitudes); a well-distributed
/// deterministic family for discrepancy scaling studies.
pub fn fibonacci_points(n: usize) -> Result<PointSet> {
    if n < 1 {
        return Err(Error::TooFewPoints { min: 1, got: n });
    }
    if n == 1 {
        // The one-point spiral degenerates to the equator; use the pole.
        return PointSet::new(vec![SpherePoint::new(vec![0.0, 0.0, 1.0])?]);
    }
    let golden_angle = PI * (3.0 - 5.0f64.sqrt());
    let mut points = Vec::with_capacity(n);
    for k in 0..n {
        let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let phi = golden_angle * k as f64;
        points.push(SpherePoint::from_direction(vec![
            r * phi.cos(),
            r * phi.sin(),
            z,
        ])?);
    }
    PointSet::new(points)
}

/// Mean over a sample of |p.z| / 2, an independent Monte Carlo view of C_d.
/// Returns (estimate, standard error).
pub fn constant_cd_mc(d: usize, samples: usize, seed: RandomSeed) -> Result<(f64, f64)> {
    if d < 1 {
        return Err(Error::InvalidDimension { min: 1, got: d });
    }
    if samples < 2 {
        return Err(Error::TooFewSamples {
            min: 2,
            got: samples,
        });
    }
    let mut rng = seed.rng(0);
    let mut sum = NeumaierSum::new();
    let mut sum_sq = NeumaierSum::new();
    for _ in 0..samples {
        let z = sample_direction(&mut rng, d);
        let v = z[0].abs() / 2.0;
        sum.add(v);
        sum_sq.add(v * v);
    }
    let n = samples as f64;
    let mean = sum.value() / n;
    let var = ((sum_sq.value() - sum.value() * sum.value() / n) / (n - 1.0)).max(0.0);
    Ok((mean, (var / n).sqrt()))
}
