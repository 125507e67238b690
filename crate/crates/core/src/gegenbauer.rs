//! Zonal expansions of inner-product kernels on S^d (d >= 2) in the
//! Gegenbauer basis: projection coefficients by quadrature, Schoenberg-style
//! positive-definiteness verdicts, square-root kernels under spherical
//! convolution, the induced f-discrepancy, the generalized Stolarsky gap,
//! and Funk-Hecke cross-checks.

use crate::discrepancy::{chunked_mc, MCEstimate};
use crate::energy::{discrete_energy, Kernel, WeightedMeasure};
use crate::error::{Error, Result};
use crate::numerics::{cached_gauss_legendre, NeumaierSum};
use crate::sphere_geom::{dot, sample_direction, RandomSeed};

/// Default tolerance below which a coefficient counts as a genuine negative.
pub const DEFAULT_PD_TOL: f64 = 1e-9;

/// Coefficients must move less than this under order doubling.
const EXPANSION_STABLE_TOL: f64 = 1e-7;

/// Highest supported truncation order (quadrature stays exact well past it).
const MAX_EXPANSION_ORDER: usize = 512;

/// Gegenbauer parameter for the sphere S^d: lambda = (d - 1)/2, positive
/// only for d >= 2. Dimension 1 is served by the closed-form module.
pub fn lambda_for_dim(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::ExpansionDimensionTooSmall(d));
    }
    Ok((d - 1) as f64 / 2.0)
}

fn dim_for_lambda(lambda: f64) -> usize {
    (2.0 * lambda + 1.0).round() as usize
}

fn raw_gegenbauer(n: usize, lambda: f64, t: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut curr = 2.0 * lambda * t;
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 * (kf + lambda - 1.0) * t * curr - (kf + 2.0 * lambda - 2.0) * prev) / kf;
        prev = curr;
        curr = next;
    }
    curr
}

/// C_n^lambda(t) by the three-term recurrence
/// n C_n = 2(n + lambda - 1) t C_{n-1} - (n + 2 lambda - 2) C_{n-2}.
pub fn gegenbauer_poly(n: usize, lambda: f64, t: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            range: "(0, inf)",
        });
    }
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            range: "[-1, 1]",
        });
    }
    Ok(raw_gegenbauer(n, lambda, t))
}

/// Truncated zonal expansion Sum_n a_n ((n + lambda)/lambda) C_n^lambda(t).
///
/// The normalization makes the degree-n term reproduce itself under
/// spherical convolution, so convolving two expansions multiplies
/// coefficients degree by degree.
#[derive(Debug, Clone, PartialEq)]
pub struct GegenbauerExpansion {
    lambda: f64,
    coeffs: Vec<f64>,
}

impl GegenbauerExpansion {
    pub fn new(lambda: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
                range: "(0, inf)",
            });
        }
        if coeffs.is_empty() {
            return Err(Error::OutOfRange {
                name: "coefficient count",
                value: 0.0,
                range: "at least 1",
            });
        }
        if let Some(&bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::OutOfRange {
                name: "coefficient",
                value: bad,
                range: "finite reals",
            });
        }
        Ok(GegenbauerExpansion { lambda, coeffs })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Whether this expansion's parameter corresponds to the sphere S^d.
    pub fn matches_dim(&self, d: usize) -> bool {
        (2.0 * self.lambda + 1.0 - d as f64).abs() < 1e-9
    }

    /// Evaluate the truncated series at t (forward recurrence, one pass).
    pub fn eval(&self, t: f64) -> f64 {
        let l = self.lambda;
        let mut acc = NeumaierSum::new();
        acc.add(self.coeffs[0]);
        if self.coeffs.len() == 1 {
            return acc.value();
        }
        let mut prev = 1.0;
        let mut curr = 2.0 * l * t;
        acc.add(self.coeffs[1] * ((1.0 + l) / l) * curr);
        for n in 2..self.coeffs.len() {
            let nf = n as f64;
            let next = (2.0 * (nf + l - 1.0) * t * curr - (nf + 2.0 * l - 2.0) * prev) / nf;
            prev = curr;
            curr = next;
            acc.add(self.coeffs[n] * ((nf + l) / l) * curr);
        }
        acc.value()
    }

    /// Scan coefficients for the first one below -tol.
    pub fn pd_verdict(&self, tol: f64) -> PDVerdict {
        let first_negative = self
            .coeffs
            .iter()
            .enumerate()
            .find(|(_, &a)| a < -tol)
            .map(|(n, &a)| (n, a));
        PDVerdict {
            is_pd: first_negative.is_none(),
            first_negative,
            tolerance: tol,
        }
    }
}

/// Outcome of a positive-definiteness check on expansion coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PDVerdict {
    pub is_pd: bool,
    /// First (n, a_n) with a_n < -tolerance, when not positive definite.
    pub first_negative: Option<(usize, f64)>,
    pub tolerance: f64,
}

/// Quadrature grid with the weight (1 - t^2)^{lambda - 1/2} folded in,
/// split at t = 0 so piecewise-defined kernels are integrated exactly on
/// each smooth piece.
fn weighted_nodes(lambda: f64, order: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = cached_gauss_legendre(order);
    let exponent = lambda - 0.5;
    let mut ts = Vec::with_capacity(2 * order);
    let mut ws = Vec::with_capacity(2 * order);
    for (lo, hi) in [(-1.0f64, 0.0f64), (0.0, 1.0)] {
        let mid = 0.5 * (lo + hi);
        let hl = 0.5 * (hi - lo);
        for &(x, w) in rule {
            let t = mid + hl * x;
            let weight = if exponent == 0.0 {
                1.0
            } else {
                (1.0 - t * t).max(0.0).powf(exponent)
            };
            ts.push(t);
            ws.push(hl * w * weight);
        }
    }
    (ts, ws)
}

fn project_coefficients<F: Fn(f64) -> f64>(
    f: &F,
    lambda: f64,
    n_max: usize,
    order: usize,
) -> Vec<f64> {
    let (ts, ws) = weighted_nodes(lambda, order);
    let fv: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let m = ts.len();
    let mut prev = vec![1.0f64; m];
    let mut curr: Vec<f64> = ts.iter().map(|&t| 2.0 * lambda * t).collect();
    let mut coeffs = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let poly: &[f64] = match n {
            0 => &prev,
            1 => &curr,
            _ => {
                let nf = n as f64;
                for i in 0..m {
                    let next = (2.0 * (nf + lambda - 1.0) * ts[i] * curr[i]
                        - (nf + 2.0 * lambda - 2.0) * prev[i])
                        / nf;
                    prev[i] = curr[i];
                    curr[i] = next;
                }
                &curr
            }
        };
        let mut num = NeumaierSum::new();
        let mut den = NeumaierSum::new();
        for i in 0..m {
            num.add(ws[i] * fv[i] * poly[i]);
            den.add(ws[i] * poly[i] * poly[i]);
        }
        let nf = n as f64;
        coeffs.push((lambda / (nf + lambda)) * num.value() / den.value());
    }
    coeffs
}

/// Project a kernel onto the zonal basis:
/// a_n = (lambda/(n+lambda)) <F, C_n> / <C_n, C_n> under the weight
/// (1 - t^2)^{lambda - 1/2}.
///
/// Coefficients are accepted only if doubling the quadrature order moves
/// none of them by more than 1e-7. Returns the expansion together with the
/// weighted-L^2 norm of the truncation residual F - S (estimated on the
/// fine grid).
pub fn expand_kernel<F: Fn(f64) -> f64>(
    f: &F,
    lambda: f64,
    n_max: usize,
) -> Result<(GegenbauerExpansion, f64)> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            range: "(0, inf)",
        });
    }
    if n_max > MAX_EXPANSION_ORDER {
        return Err(Error::OutOfRange {
            name: "n_max",
            value: n_max as f64,
            range: "0..=512",
        });
    }
    let coarse = project_coefficients(f, lambda, n_max, 1024);
    let fine = project_coefficients(f, lambda, n_max, 2048);
    for n in 0..=n_max {
        let delta = (fine[n] - coarse[n]).abs();
        if !fine[n].is_finite() || delta > EXPANSION_STABLE_TOL {
            return Err(Error::ExpansionNonConvergence {
                n,
                delta,
                threshold: EXPANSION_STABLE_TOL,
            });
        }
    }
    let expansion = GegenbauerExpansion::new(lambda, fine)?;
    let (ts, ws) = weighted_nodes(lambda, 2048);
    let mut resid = NeumaierSum::new();
    for (t, w) in ts.iter().zip(&ws) {
        let diff = f(*t) - expansion.eval(*t);
        resid.add(w * diff * diff);
    }
    Ok((expansion, resid.value().max(0.0).sqrt()))
}

/// Positive-definiteness verdict for a kernel on S^d with d = 2 lambda + 1:
/// expand and require every coefficient >= -tol.
pub fn is_positive_definite<F: Fn(f64) -> f64>(
    f: &F,
    lambda: f64,
    n_max: usize,
    tol: f64,
) -> Result<PDVerdict> {
    if !(tol > 0.0) {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            range: "(0, inf)",
        });
    }
    let (expansion, _) = expand_kernel(f, lambda, n_max)?;
    Ok(expansion.pd_verdict(tol))
}

/// Coefficient-wise nonnegative square root: the returned f satisfies
/// f convolved with itself = F on the sphere, since convolution multiplies
/// coefficients degree by degree. Small negatives within [-tol, 0) are
/// clipped to zero; anything lower is a genuine PD violation.
pub fn sqrt_kernel(fexp: &GegenbauerExpansion) -> Result<GegenbauerExpansion> {
    if let Some((n, value)) = fexp.pd_verdict(DEFAULT_PD_TOL).first_negative {
        return Err(Error::NotPositiveDefinite {
            n,
            value,
            tol: DEFAULT_PD_TOL,
        });
    }
    let roots = fexp.coeffs.iter().map(|&a| a.max(0.0).sqrt()).collect();
    GegenbauerExpansion::new(fexp.lambda, roots)
}

/// Spherical self-convolution: squares each coefficient.
pub fn convolution_square(fexp: &GegenbauerExpansion) -> GegenbauerExpansion {
    GegenbauerExpansion {
        lambda: fexp.lambda,
        coeffs: fexp.coeffs.iter().map(|&b| b * b).collect(),
    }
}

/// Monte Carlo estimate of the squared f-discrepancy
/// D_f^2(mu) = integral over x of (Sum_i w_i f(x . z_i) - a_0)^2,
/// using that the sigma-average of f(x . y) is the constant a_0.
pub fn f_discrepancy_sq(
    mu: &WeightedMeasure,
    fexp: &GegenbauerExpansion,
    samples: usize,
    seed: RandomSeed,
) -> Result<MCEstimate> {
    if samples < 100 {
        return Err(Error::TooFewSamples {
            min: 100,
            got: samples,
        });
    }
    let d = dim_for_lambda(fexp.lambda);
    if !fexp.matches_dim(mu.dim()) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: mu.dim(),
        });
    }
    let a0 = fexp.coeffs[0];
    let coords: Vec<&[f64]> = mu.atoms().iter().map(|(p, _)| p.coords()).collect();
    let weights: Vec<f64> = mu.atoms().iter().map(|(_, w)| *w).collect();
    Ok(chunked_mc(samples, seed, 0, |rng| {
        let x = sample_direction(rng, d);
        let mut field = NeumaierSum::new();
        for (zc, w) in coords.iter().zip(&weights) {
            field.add(w * fexp.eval(dot(zc, &x).clamp(-1.0, 1.0)));
        }
        let local = field.value() - a0;
        local * local
    }))
}

/// Energy gap E_F(mu) - I_F(sigma) for a positive-definite expansion kernel.
/// Nonnegative for every mass-1 (possibly signed) measure; equals the
/// squared f-discrepancy of the square-root kernel.
pub fn generalized_stolarsky_gap(
    mu: &WeightedMeasure,
    fexp: &GegenbauerExpansion,
    d: usize,
) -> Result<f64> {
    if !fexp.matches_dim(d) {
        return Err(Error::DimensionMismatch {
            expected: dim_for_lambda(fexp.lambda),
            got: d,
        });
    }
    if mu.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: mu.dim(),
        });
    }
    if let Some((n, value)) = fexp.pd_verdict(DEFAULT_PD_TOL).first_negative {
        return Err(Error::NotPositiveDefinite {
            n,
            value,
            tol: DEFAULT_PD_TOL,
        });
    }
    let energy = discrete_energy(mu, &Kernel::ExpansionKernel(fexp.clone()))?;
    Ok(energy - fexp.coeffs[0])
}

const FUNK_HECKE_TEST_POINTS: usize = 8;

/// Max residual of the Funk-Hecke identity over a fixed slate of test
/// points: with the zonal harmonic Y(x) = C_n^lambda(x . e),
/// the sigma-average of f(x . y) Y(x) must equal a_n Y(y).
pub fn funk_hecke_residual(
    fexp: &GegenbauerExpansion,
    n: usize,
    d: usize,
    samples: usize,
    seed: RandomSeed,
) -> Result<f64> {
    if n > fexp.n_max() {
        return Err(Error::CoefficientIndexOutOfRange {
            n,
            n_max: fexp.n_max(),
        });
    }
    if !fexp.matches_dim(d) {
        return Err(Error::DimensionMismatch {
            expected: dim_for_lambda(fexp.lambda),
            got: d,
        });
    }
    if samples < 100 {
        return Err(Error::TooFewSamples {
            min: 100,
            got: samples,
        });
    }
    let lambda = fexp.lambda;
    let mut point_rng = seed.rng(77_000);
    let mut worst: f64 = 0.0;
    for j in 0..FUNK_HECKE_TEST_POINTS {
        let y = sample_direction(&mut point_rng, d);
        let estimate = chunked_mc(samples, seed, 80_000 + 1_000_000 * j as u64, |rng| {
            let x = sample_direction(rng, d);
            fexp.eval(dot(&x, &y).clamp(-1.0, 1.0))
                * raw_gegenbauer(n, lambda, x[d].clamp(-1.0, 1.0))
        });
        let rhs = fexp.coeffs[n] * raw_gegenbauer(n, lambda, y[d].clamp(-1.0, 1.0));
        worst = worst.max((estimate.value - rhs).abs());
    }
    Ok(worst)
}

/// Monte Carlo estimate of a_n via Funk-Hecke at y = e:
/// mean of f(u) C_n^lambda(u) / C_n^lambda(1) with u the last coordinate
/// of a uniform point.
pub fn funk_hecke_coefficient_estimate(
    fexp: &GegenbauerExpansion,
    n: usize,
    d: usize,
    samples: usize,
    seed: RandomSeed,
) -> Result<MCEstimate> {
    if n > fexp.n_max() {
        return Err(Error::CoefficientIndexOutOfRange {
            n,
            n_max: fexp.n_max(),
        });
    }
    if !fexp.matches_dim(d) {
        return Err(Error::DimensionMismatch {
            expected: dim_for_lambda(fexp.lambda),
            got: d,
        });
    }
    if samples < 100 {
        return Err(Error::TooFewSamples {
            min: 100,
            got: samples,
        });
    }
    let lambda = fexp.lambda;
    let cn_at_one = raw_gegenbauer(n, lambda, 1.0);
    Ok(chunked_mc(samples, seed, 0, |rng| {
        let x = sample_direction(rng, d);
        let u = x[d].clamp(-1.0, 1.0);
        fexp.eval(u) * raw_gegenbauer(n, lambda, u) / cn_at_one
    }))
}
