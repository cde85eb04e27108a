//! Benchmark fixtures shared by the criterion targets.

use hochschild::algebra::TruncatedPolyAlgebra;
use hochschild::RingSpec;

/// `(ring, n, m)` triples sized to finish in milliseconds per iteration.
pub const INSTANCES: [(RingSpec, usize, usize); 4] = [
    (RingSpec::Integers, 2, 1),
    (RingSpec::Integers, 4, 2),
    (RingSpec::Rationals, 3, 1),
    (RingSpec::PrimeField(3), 2, 1),
];

pub fn algebra(ring: RingSpec, n: usize, m: usize) -> TruncatedPolyAlgebra {
    TruncatedPolyAlgebra::new(ring, n, m).expect("fixture parameters are valid")
}

pub fn label(ring: RingSpec, n: usize, m: usize) -> String {
    format!("{ring}/n={n}/m={m}")
}
