//! Discrete pairwise energies of weighted measures, continuous energies under
//! the uniform measure, and the mean-squared-geodesic-distance constants V_d.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gegenbauer::GegenbauerExpansion;
use crate::numerics::{integrate_adaptive, surface_ratio, NeumaierSum};
use crate::sphere_geom::{PointSet, SpherePoint};

use std::f64::consts::PI;

/// Zonal kernel F evaluated at the inner product t = x.y.
#[derive(Debug, Clone)]
pub enum Kernel {
    /// |x - y|^delta = (2 - 2t)^(delta/2), delta > 0.
    EuclideanPow(f64),
    /// (arccos(t)/pi)^delta, delta > 0.
    GeodesicPow(f64),
    /// (1/2 - arccos(t)/pi)^2.
    WedgeSquare,
    /// (1 - arccos(t)/pi)^2.
    SliceSquare,
    /// t^k, k >= 1; k = 2 is the frame potential integrand.
    InnerProdPow(u32),
    /// Truncated ultraspherical expansion evaluated as a kernel.
    ExpansionKernel(GegenbauerExpansion),
}

impl Kernel {
    /// Rejects out-of-domain parameters (delta <= 0, k = 0).
    pub fn validate(&self) -> Result<()> {
        match self {
            Kernel::EuclideanPow(delta) | Kernel::GeodesicPow(delta) => {
                if !delta.is_finite() || *delta <= 0.0 {
                    return Err(Error::InvalidDelta(*delta));
                }
            }
            Kernel::InnerProdPow(k) => {
                if *k < 1 {
                    return Err(Error::InvalidPower(*k));
                }
            }
            Kernel::WedgeSquare | Kernel::SliceSquare | Kernel::ExpansionKernel(_) => {}
        }
        Ok(())
    }

    /// Kernel value at a clamped inner product.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(-1.0, 1.0);
        match self {
            Kernel::EuclideanPow(delta) => {
                let sq = (2.0 - 2.0 * t).max(0.0);
                if *delta == 2.0 {
                    sq
                } else if *delta == 1.0 {
                    sq.sqrt()
                } else {
                    sq.powf(delta / 2.0)
                }
            }
            Kernel::GeodesicPow(delta) => {
                let g = t.acos() / PI;
                if *delta == 1.0 {
                    g
                } else if *delta == 2.0 {
                    g * g
                } else {
                    g.powf(*delta)
                }
            }
            Kernel::WedgeSquare => {
                let v = 0.5 - t.acos() / PI;
                v * v
            }
            Kernel::SliceSquare => {
                let v = 1.0 - t.acos() / PI;
                v * v
            }
            Kernel::InnerProdPow(k) => t.powi(*k as i32),
            Kernel::ExpansionKernel(exp) => exp.eval(t),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kernel::EuclideanPow(_) => "euclidean-pow",
            Kernel::GeodesicPow(_) => "geodesic-pow",
            Kernel::WedgeSquare => "wedge-square",
            Kernel::SliceSquare => "slice-square",
            Kernel::InnerProdPow(_) => "inner-prod-pow",
            Kernel::ExpansionKernel(_) => "expansion",
        }
    }
}

/// Finitely supported signed measure with total mass 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMeasure {
    dim: usize,
    atoms: Vec<(SpherePoint, f64)>,
}

impl WeightedMeasure {
    pub fn new(atoms: Vec<(SpherePoint, f64)>) -> Result<Self> {
        let first = atoms.first().ok_or(Error::EmptyMeasure)?;
        let dim = first.0.dim();
        let mut mass = NeumaierSum::new();
        for (p, w) in &atoms {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            if !w.is_finite() {
                return Err(Error::NonFiniteCoords);
            }
            mass.add(*w);
        }
        let sum = mass.value();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::BadTotalMass { sum });
        }
        Ok(Self { dim, atoms })
    }

    /// Equal weights 1/N on a configuration.
    pub fn equal_weights(set: &PointSet) -> Self {
        let w = 1.0 / set.len() as f64;
        // Equal weights on validated points always satisfy the invariants.
        Self::new(set.points().iter().map(|p| (p.clone(), w)).collect())
            .expect("equal weights form a probability measure")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[(SpherePoint, f64)] {
        &self.atoms
    }

    /// True if any atom carries negative weight.
    pub fn is_signed(&self) -> bool {
        self.atoms.iter().any(|(_, w)| *w < 0.0)
    }
}

/// Discrete energy, continuous energy under the uniform measure, and their gap.
#[derive(Debug, Clone)]
pub struct EnergyReport {
    pub kernel: Kernel,
    pub discrete: f64,
    pub continuous_sigma: f64,
    pub gap: f64,
}

const PARALLEL_THRESHOLD: usize = 128;

/// Double sum Sum_i Sum_j w_i w_j K(z_i . z_j), diagonal included.
///
/// Row sums are compensated and combined in index order, so the value is
/// independent of the worker count.
pub fn discrete_energy(mu: &WeightedMeasure, kernel: &Kernel) -> Result<f64> {
    kernel.validate()?;
    let atoms = mu.atoms();
    let n = atoms.len();
    let row_sum = |i: usize| -> f64 {
        let (zi, wi) = &atoms[i];
        let mut row = NeumaierSum::new();
        for (zj, wj) in atoms {
            row.add(wi * wj * kernel.eval(zi.dot(zj)));
        }
        row.value()
    };
    let rows: Vec<f64> = if n >= PARALLEL_THRESHOLD {
        (0..n).into_par_iter().map(row_sum).collect()
    } else {
        (0..n).map(row_sum).collect()
    };
    let mut total = NeumaierSum::new();
    for r in rows {
        total.add(r);
    }
    Ok(total.value())
}

/// Continuous energy I_F(sigma) = (omega_{d-1}/omega_d) Int_0^pi F(cos theta)
/// sin^{d-1}(theta) dtheta, short-circuited to closed forms where they exist.
pub fn continuous_energy_sigma(kernel: &Kernel, d: usize) -> Result<f64> {
    kernel.validate()?;
    if d < 1 {
        return Err(Error::InvalidDimension { min: 1, got: d });
    }
    match kernel {
        Kernel::GeodesicPow(delta) if *delta == 1.0 => Ok(0.5),
        Kernel::GeodesicPow(delta) if *delta == 2.0 => vd(d),
        Kernel::EuclideanPow(delta) if *delta == 2.0 => Ok(2.0),
        Kernel::WedgeSquare => Ok(vd(d)? - 0.25),
        Kernel::SliceSquare => vd(d),
        Kernel::ExpansionKernel(exp) if exp.matches_dim(d) => Ok(exp.coeffs()[0]),
        _ => continuous_energy_sigma_quadrature(kernel, d),
    }
}

/// Always-quadrature evaluation of the continuous energy; retained alongside
/// the closed forms so each path can validate the other.
pub fn continuous_energy_sigma_quadrature(kernel: &Kernel, d: usize) -> Result<f64> {
    kernel.validate()?;
    if d < 1 {
        return Err(Error::InvalidDimension { min: 1, got: d });
    }
    let power = d as f64 - 1.0;
    let integral = integrate_adaptive(
        &|theta: f64| kernel.eval(theta.cos()) * theta.sin().powf(power),
        0.0,
        PI,
        1e-10,
    )?;
    Ok(surface_ratio(d) * integral)
}

/// Mean squared normalized geodesic distance V_d under sigma x sigma,
/// by the two-step recursion V_d = V_{d-2} - 2 / (pi^2 (d-1)^2) from
/// V_0 = 1/2, V_1 = 1/3. Decreases to 1/4 along each parity.
pub fn vd(d: usize) -> Result<f64> {
    let mut values = [0.5, 1.0 / 3.0]; // [even chain, odd chain] seeds
    if d <= 1 {
        return Ok(values[d]);
    }
    let mut k = d % 2;
    while k < d {
        k += 2;
        let denom = (k as f64 - 1.0) * PI;
        values[d % 2] -= 2.0 / (denom * denom);
    }
    Ok(values[d % 2])
}

/// Discrete and continuous energies with their gap.
pub fn energy_gap(mu: &WeightedMeasure, kernel: &Kernel, d: usize) -> Result<EnergyReport> {
    if mu.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: mu.dim(),
        });
    }
    let discrete = discrete_energy(mu, kernel)?;
    let continuous_sigma = continuous_energy_sigma(kernel, d)?;
    Ok(EnergyReport {
        kernel: kernel.clone(),
        discrete,
        continuous_sigma,
        gap: discrete - continuous_sigma,
    })
}

/// The two competing geodesic-power energies: the uniform measure's
/// I_sigma(delta) and the antipodal-pair measure's value (always 1/2).
/// Their order flips as delta crosses 1.
pub fn measure_energy_extremes(delta: f64, d: usize) -> Result<(f64, f64)> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidDelta(delta));
    }
    if d < 1 {
        return Err(Error::InvalidDimension { min: 1, got: d });
    }
    let kernel = Kernel::GeodesicPow(delta);
    let i_sigma = continuous_energy_sigma(&kernel, d)?;
    let i_pair = discrete_energy(&antipodal_pair_measure(d)?, &kernel)?;
    Ok((i_sigma, i_pair))
}

/// The measure with mass 1/2 at each of two antipodal poles.
pub fn antipodal_pair_measure(d: usize) -> Result<WeightedMeasure> {
    let mut coords = vec![0.0; d + 1];
    coords[0] = 1.0;
    let p = SpherePoint::new(coords)?;
    let q = p.antipode();
    WeightedMeasure::new(vec![(p, 0.5), (q, 0.5)])
}
