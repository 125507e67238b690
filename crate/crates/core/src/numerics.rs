//! Shared numerical kernels: Gauss-Legendre rules, adaptive quadrature,
//! half-integer Gamma ratios, and compensated summation.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Legendre polynomial value and derivative at `x` via the three-term recurrence.
fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let deriv = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, deriv)
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration from the Chebyshev initial guess.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "rule order must be positive");
    let mut rule = Vec::with_capacity(n);
    let half = n / 2;
    for k in 0..half {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre_with_deriv(n, x);
            deriv = dp;
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p2, dp2) = legendre_with_deriv(n, x);
                deriv = dp2;
                x -= p2 / dp2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        rule.push((x, w));
    }
    if n % 2 == 1 {
        let (_, dp) = legendre_with_deriv(n, 0.0);
        rule.push((0.0, 2.0 / (dp * dp)));
    }
    for k in (0..half).rev() {
        let (x, w) = rule[k];
        rule.push((-x, w));
    }
    rule.sort_by(|p, q| p.0.total_cmp(&q.0));
    rule
}

fn cached_rule(cell: &'static OnceLock<Vec<(f64, f64)>>, n: usize) -> &'static [(f64, f64)] {
    cell.get_or_init(|| gauss_legendre(n))
}

static GL7: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
static GL15: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
static GL64: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
static GL128: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
static GL1024: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
static GL2048: OnceLock<Vec<(f64, f64)>> = OnceLock::new();

/// Frequently used rules, cached after first construction.
pub fn cached_gauss_legendre(n: usize) -> &'static [(f64, f64)] {
    match n {
        7 => cached_rule(&GL7, 7),
        15 => cached_rule(&GL15, 15),
        64 => cached_rule(&GL64, 64),
        128 => cached_rule(&GL128, 128),
        1024 => cached_rule(&GL1024, 1024),
        2048 => cached_rule(&GL2048, 2048),
        _ => panic!("no cache slot for a {n}-point rule"),
    }
}

/// Fixed-order Gauss-Legendre integral of `f` over [a, b].
pub fn integrate_fixed<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let rule = cached_gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let mut sum = NeumaierSum::new();
    for &(x, w) in rule {
        sum.add(w * f(mid + hl * x));
    }
    hl * sum.value()
}

fn gl_pair<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let lo = cached_gauss_legendre(7);
    let hi = cached_gauss_legendre(15);
    let mid = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let mut coarse = 0.0;
    for &(x, w) in lo {
        coarse += w * f(mid + hl * x);
    }
    let mut fine = 0.0;
    for &(x, w) in hi {
        fine += w * f(mid + hl * x);
    }
    (hl * coarse, hl * fine)
}

const MAX_INTERVALS: usize = 20_000;

struct Interval {
    err: f64,
    lo: f64,
    hi: f64,
    fine: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn evaluate_interval<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Interval {
    let (coarse, fine) = gl_pair(f, lo, hi);
    Interval {
        err: (fine - coarse).abs(),
        lo,
        hi,
        fine,
    }
}

/// Interior split fractions for the initial partition: multiples of the
/// golden ratio conjugate, reduced mod 1. A single starting panel is unsafe
/// because a symmetric Gauss rule integrates the odd part of an integrand
/// exactly, so two rules of different order can agree to machine precision
/// while both miss narrow features near the endpoints (beyond the outermost
/// nodes). Irrational split points give starting cells with no symmetry
/// relation to the integrand and push nodes close to both endpoints.
const SEED_FRACTIONS: [f64; 8] = [
    0.090169943749475,
    0.236067977499790,
    0.326237921249264,
    0.472135954999580,
    0.618033988749895,
    0.708203932499370,
    0.854101966249685,
    0.944271909999159,
];

/// Adaptive quadrature of `f` over [a, b] to absolute tolerance `tol`.
///
/// Intervals are judged by the disagreement between 7- and 15-point
/// Gauss-Legendre values; the worst interval is bisected until the summed
/// error estimate meets the tolerance. Exhausting the interval budget is
/// reported as an error rather than returning a silently inaccurate value.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let tol = tol.max(1e-15);
    let mut cuts: Vec<f64> = Vec::with_capacity(SEED_FRACTIONS.len() + 2);
    cuts.push(a);
    for &s in &SEED_FRACTIONS {
        let c = a + (b - a) * s;
        if c > *cuts.last().expect("cuts starts non-empty") && c < b {
            cuts.push(c);
        }
    }
    cuts.push(b);
    let mut heap = std::collections::BinaryHeap::new();
    let mut total_err = 0.0;
    for pair in cuts.windows(2) {
        let cell = evaluate_interval(f, pair[0], pair[1]);
        if !cell.fine.is_finite() || !cell.err.is_finite() {
            return Err(Error::QuadratureNonConvergence {
                a,
                b,
                residual: f64::NAN,
                subdivisions: heap.len() + 1,
                tol,
            });
        }
        total_err += cell.err;
        heap.push(cell);
    }
    while total_err > tol {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureNonConvergence {
                a,
                b,
                residual: total_err,
                subdivisions: heap.len(),
                tol,
            });
        }
        let worst = heap.pop().expect("heap non-empty while error remains");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Interval no longer splittable in f64; give up on improving it.
            let residual = total_err;
            if residual > tol {
                return Err(Error::QuadratureNonConvergence {
                    a,
                    b,
                    residual,
                    subdivisions: heap.len() + 1,
                    tol,
                });
            }
            heap.push(worst);
            break;
        }
        let left = evaluate_interval(f, worst.lo, mid);
        let right = evaluate_interval(f, mid, worst.hi);
        if !left.fine.is_finite()
            || !right.fine.is_finite()
            || !left.err.is_finite()
            || !right.err.is_finite()
        {
            return Err(Error::QuadratureNonConvergence {
                a,
                b,
                residual: f64::NAN,
                subdivisions: heap.len(),
                tol,
            });
        }
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }
    let mut total = NeumaierSum::new();
    for iv in heap {
        total.add(iv.fine);
    }
    Ok(total.value())
}

/// R(d) = Gamma((d+1)/2) / Gamma(d/2), computed exactly by the half-integer
/// recursion R(d) = (d-1) / (2 R(d-1)), R(1) = 1/sqrt(pi).
///
/// This ratio carries every surface-area factor in the crate:
/// omega_{d-1}/omega_d = R(d)/sqrt(pi).
pub fn gamma_half_ratio(d: usize) -> f64 {
    assert!(d >= 1);
    let mut r = 1.0 / std::f64::consts::PI.sqrt();
    for k in 2..=d {
        r = (k as f64 - 1.0) / (2.0 * r);
    }
    r
}

/// omega_{d-1}/omega_d: ratio of sphere surface areas one dimension apart.
pub fn surface_ratio(d: usize) -> f64 {
    gamma_half_ratio(d) / std::f64::consts::PI.sqrt()
}

/// Neumaier (improved Kahan) compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of an iterator of f64.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut s = NeumaierSum::new();
    for x in iter {
        s.add(x);
    }
    s.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn gauss_legendre_small_rules_match_known_values() {
        let r2 = gauss_legendre(2);
        assert_abs_diff_eq!(r2[0].0, -(1.0f64 / 3.0).sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(r2[0].1, 1.0, epsilon = 1e-14);
        let r3 = gauss_legendre(3);
        assert_abs_diff_eq!(r3[1].0, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r3[1].1, 8.0 / 9.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r3[0].0, -(0.6f64).sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(r3[0].1, 5.0 / 9.0, epsilon = 1e-14);
    }

    #[test]
    fn rules_integrate_polynomials_exactly() {
        // An n-point rule is exact through degree 2n-1.
        for n in [7usize, 15, 64] {
            let rule = gauss_legendre(n);
            for deg in [0usize, 1, 5, 2 * n - 1] {
                let exact = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                let got: f64 = rule.iter().map(|&(x, w)| w * x.powi(deg as i32)).sum();
                assert_abs_diff_eq!(got, exact, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1usize, 2, 7, 15, 64, 128, 1024, 2048] {
            let total: f64 = gauss_legendre(n).iter().map(|&(_, w)| w).sum();
            assert_abs_diff_eq!(total, 2.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn adaptive_matches_analytic_integrals() {
        let sin_int = integrate_adaptive(&|x: f64| x.sin(), 0.0, PI, 1e-12).unwrap();
        assert_abs_diff_eq!(sin_int, 2.0, epsilon = 1e-10);

        let poly = integrate_adaptive(&|x: f64| 3.0 * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert_abs_diff_eq!(poly, 8.0, epsilon = 1e-10);

        // Integrable endpoint singularity.
        let root = integrate_adaptive(&|x: f64| x.sqrt().recip(), 1e-300, 1.0, 1e-9).unwrap();
        assert_abs_diff_eq!(root, 2.0, epsilon = 1e-6);

        // Oscillatory.
        let osc = integrate_adaptive(&|x: f64| (10.0 * x).cos(), 0.0, PI, 1e-12).unwrap();
        assert_abs_diff_eq!(osc, (10.0 * PI).sin() / 10.0, epsilon = 1e-10);
    }

    #[test]
    fn adaptive_handles_concentrated_mass() {
        // (1 - s^2)^{(d-2)/2} integrates to sqrt(pi)/R(d); at d = 10^4 the mass
        // sits in a width-0.02 spike around the origin.
        let d = 10_000usize;
        let exact = PI.sqrt() / gamma_half_ratio(d);
        let got = integrate_adaptive(
            &|s: f64| (1.0 - s * s).max(0.0).powf((d as f64 - 2.0) / 2.0),
            -1.0,
            1.0,
            1e-12,
        )
        .unwrap();
        assert_abs_diff_eq!(got, exact, epsilon = 1e-10);
    }

    #[test]
    fn gamma_half_ratio_matches_closed_forms() {
        let sp = PI.sqrt();
        assert_abs_diff_eq!(gamma_half_ratio(1), 1.0 / sp, epsilon = 1e-15);
        assert_abs_diff_eq!(gamma_half_ratio(2), sp / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gamma_half_ratio(3), 2.0 / sp, epsilon = 1e-15);
        assert_abs_diff_eq!(gamma_half_ratio(4), 3.0 * sp / 4.0, epsilon = 1e-14);
        // Gamma(100.5)/Gamma(100) via the asymptotic series for
        // Gamma(x+1/2)/Gamma(x) = sqrt(x) (1 - 1/(8x) + 1/(128x^2) + 5/(1024x^3) - ...),
        // accurate to ~1e-12 relative at x = 100.
        let r200 = gamma_half_ratio(200);
        let x: f64 = 100.0;
        let reference =
            x.sqrt() * (1.0 - 1.0 / (8.0 * x) + 1.0 / (128.0 * x * x) + 5.0 / (1024.0 * x * x * x));
        assert!((r200 - reference).abs() / reference < 1e-9);
    }

    #[test]
    fn surface_ratio_known_dimensions() {
        // omega_0/omega_1 = 2/(2 pi), omega_1/omega_2 = 2 pi/(4 pi), omega_2/omega_3 = 4 pi/(2 pi^2).
        assert_abs_diff_eq!(surface_ratio(1), 1.0 / PI, epsilon = 1e-15);
        assert_abs_diff_eq!(surface_ratio(2), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(surface_ratio(3), 2.0 / PI, epsilon = 1e-15);
    }

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let mut s = NeumaierSum::new();
        s.add(1.0);
        s.add(1e100);
        s.add(1.0);
        s.add(-1e100);
        assert_eq!(s.value(), 2.0);
    }
}
