//! Deterministic rational sample points for evaluation-based checks.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{Rational, RationalPoint};

/// Random points with coordinates in `(−1/2, 1/2)` and pairwise distinct.
///
/// Every difference of two coordinates then lies in `(−1, 1) \ {0}`, away
/// from the poles of the `Ř` normalization and of the Pfaffian kernel.
pub fn generic_points(dim: usize, count: usize, seed: u64) -> Vec<RationalPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let values: Vec<Rational> = (0..dim)
                .map(|_| {
                    let den: i64 = rng.gen_range(2..=29);
                    let num: i64 = rng.gen_range(-(den - 1) / 2..=(den - 1) / 2);
                    Rational::new(BigInt::from(num), BigInt::from(den))
                })
                .collect();
            let distinct = (0..dim).all(|i| (i + 1..dim).all(|j| values[i] != values[j]));
            if distinct {
                break RationalPoint::new(values);
            }
        })
        .collect()
}

/// A random rational in `(−1, 1)` with denominator at most 31.
pub fn small_rational(rng: &mut impl Rng) -> Rational {
    let den: i64 = rng.gen_range(2..=31);
    let num: i64 = rng.gen_range(-(den - 1)..=den - 1);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_are_deterministic_and_generic() {
        let a = generic_points(6, 10, 1);
        assert_eq!(a, generic_points(6, 10, 1));
        for p in &a {
            for i in 0..6 {
                for j in i + 1..6 {
                    let d = &p[i] - &p[j];
                    assert!(d != Rational::from_integer(0.into()));
                    assert!(d < Rational::from_integer(1.into()) && d > Rational::from_integer((-1).into()));
                }
            }
        }
    }
}
