//! Shared fixtures for the benchmark suite.

use sphere_disc::{fibonacci_points, sample_uniform, PointSet, RandomSeed, WeightedMeasure};

/// Equal-weight measure on an N-point Fibonacci configuration on S^2.
pub fn fibonacci_measure(n: usize) -> WeightedMeasure {
    WeightedMeasure::equal_weights(&fibonacci_points(n).expect("valid size"))
}

/// Uniformly random configuration with a fixed benchmark seed.
pub fn random_points(d: usize, n: usize) -> PointSet {
    sample_uniform(d, n, RandomSeed(0xBE_7C4)).expect("valid parameters")
}
