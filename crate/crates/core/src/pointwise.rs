//! The ground state at a single rational point, as the fixed vector of `T′_n(z)`.
//!
//! This route needs no symbolic build. The kernel of `T′_n(z) − I` is found
//! modulo a sequence of word-sized primes, lifted by Chinese remaindering and
//! rational reconstruction, and then certified by applying `T′_n(z)` exactly.
//! The overall scale is fixed by the closed form of the `π_0` entry.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::brauer::{self, BrauerError, PatternVector};
use crate::groundstate::psi_pi0_at;
use crate::linkpat::LinkPattern;
use crate::poly::{Rational, RationalPoint};

#[derive(Debug, Error)]
pub enum PointwiseError {
    #[error(transparent)]
    Singular(#[from] BrauerError),
    #[error("fixed space of T′ has dimension {0} at this point")]
    Degenerate(usize),
    #[error("the π_0 entry vanishes at this point, so the scale is undetermined")]
    Unnormalizable,
    #[error("samples do not lie on a polynomial of degree {0}")]
    Interpolation(usize),
    #[error("no certified lift after {0} primes")]
    NoLift(usize),
}

const MAX_PRIMES: usize = 400;

/// Sparse images of every basis pattern under one factor, reduced mod `p`.
type FactorMod = Vec<Vec<(usize, u64)>>;

struct TprimeFactors {
    patterns: Vec<LinkPattern>,
    /// Per factor, leftmost first: images as `(pattern index, rational weight)`.
    images: Vec<Vec<Vec<(usize, Rational)>>>,
}

impl TprimeFactors {
    fn new(n: usize, pt: &RationalPoint) -> Result<Self, BrauerError> {
        let patterns = LinkPattern::enumerate(n);
        let index: BTreeMap<&LinkPattern, usize> = patterns.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut images = Vec::new();
        for op in brauer::tprime_factors(n, pt) {
            let mut per = Vec::with_capacity(patterns.len());
            for p in &patterns {
                let img = brauer::basis_image(&op, p)?;
                per.push(img.into_iter().map(|(q, c)| (index[&q], c)).collect());
            }
            images.push(per);
        }
        Ok(TprimeFactors { patterns, images })
    }

    fn reduce(&self, p: u64) -> Option<Vec<FactorMod>> {
        self.images
            .iter()
            .map(|per| {
                per.iter()
                    .map(|img| img.iter().map(|(q, c)| Some((*q, rational_mod(c, p)?))).collect())
                    .collect()
            })
            .collect()
    }

    /// `T′ − I` mod `p` as a dense matrix; `None` if a weight has a denominator divisible by `p`.
    fn shifted_matrix_mod(&self, p: u64) -> Option<Vec<Vec<u64>>> {
        let factors = self.reduce(p)?;
        let d = self.patterns.len();
        let mut m = vec![vec![0u64; d]; d];
        for j in 0..d {
            let mut v = vec![0u64; d];
            v[j] = 1;
            for f in factors.iter().rev() {
                let mut w = vec![0u64; d];
                for (k, &x) in v.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for &(q, c) in &f[k] {
                        w[q] = (w[q] + x * c) % p;
                    }
                }
                v = w;
            }
            for (i, x) in v.into_iter().enumerate() {
                m[i][j] = x;
            }
            m[j][j] = (m[j][j] + p - 1) % p;
        }
        Some(m)
    }
}

/// `Ψ_n(z)` as a pattern vector, computed without the symbolic ground state.
pub fn ground_state_at(n: usize, pt: &RationalPoint) -> Result<PatternVector<Rational>, PointwiseError> {
    let factors = TprimeFactors::new(n, pt)?;
    let patterns = &factors.patterns;
    let d = patterns.len();
    let root = patterns.iter().position(|p| *p == LinkPattern::pi0(n)).unwrap();
    let scale = psi_pi0_at(n, pt);
    if scale.is_zero() {
        return Err(PointwiseError::Unnormalizable);
    }

    let mut residues: Vec<BigInt> = vec![BigInt::zero(); d];
    let mut modulus = BigInt::one();
    let mut previous: Option<Vec<Rational>> = None;
    let mut bad_nullity = 0;
    for p in primes().take(MAX_PRIMES) {
        let Some(a) = factors.shifted_matrix_mod(p) else { continue };
        let kernel = match kernel_mod(a, p) {
            Kernel::One(v) => v,
            Kernel::Other(k) => {
                bad_nullity += 1;
                if bad_nullity >= 3 {
                    return Err(PointwiseError::Degenerate(k));
                }
                continue;
            }
        };
        if kernel[root] == 0 {
            continue;
        }
        let inv = inv_mod(kernel[root], p);
        let pb = BigInt::from(p);
        for (r, &k) in residues.iter_mut().zip(&kernel) {
            *r = crt(r, &modulus, k * inv % p, p);
        }
        modulus *= &pb;
        let lifted: Option<Vec<Rational>> = residues.iter().map(|r| reconstruct(r, &modulus)).collect();
        let Some(lifted) = lifted else { continue };
        if previous.as_ref() == Some(&lifted) {
            let v = PatternVector::from_entries(n, patterns.iter().cloned().zip(lifted.iter().map(|x| x * &scale)));
            if brauer::tprime_apply(n, pt, &v)? == v {
                return Ok(v);
            }
        }
        previous = Some(lifted);
    }
    Err(PointwiseError::NoLift(MAX_PRIMES))
}

/// Coefficients (constant first) of the polynomial of degree at most `degree`
/// through the first `degree + 1` samples, provided every further sample lies on it.
pub fn fit_polynomial(xs: &[Rational], ys: &[Rational], degree: usize) -> Option<Vec<Rational>> {
    let k = degree + 1;
    assert!(xs.len() >= k && xs.len() == ys.len(), "need at least {k} samples");
    // Newton divided differences, then expansion in the monomial basis.
    let mut dd: Vec<Rational> = ys[..k].to_vec();
    for level in 1..k {
        for i in (level..k).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut coeffs = vec![Rational::zero(); k];
    for i in (0..k).rev() {
        // coeffs <- coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![Rational::zero(); k];
        for j in 0..k - 1 {
            next[j + 1] += &coeffs[j];
            next[j] -= &coeffs[j] * &xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    let eval = |x: &Rational| coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c);
    xs[k..].iter().zip(&ys[k..]).all(|(x, y)| eval(x) == *y).then_some(coeffs)
}

/// `Ψ_n(0, …, 0)`, where `T′` is degenerate, by interpolation along a generic line through the origin.
///
/// Entries have total degree at most `2n(n−1)`, so that many plus one samples
/// determine each restriction; two more samples confirm it.
pub fn homogeneous_values(n: usize, seed: u64) -> Result<BTreeMap<LinkPattern, Rational>, PointwiseError> {
    let degree = 2 * n * (n - 1);
    let count = degree + 3;
    let direction = crate::points::generic_points(2 * n, 1, seed).remove(0);
    let xs: Vec<Rational> = (1..=count)
        .map(|k| Rational::new(BigInt::from(k), BigInt::from(count + 1)))
        .collect();
    let samples: Vec<PatternVector<Rational>> = xs
        .iter()
        .map(|s| ground_state_at(n, &RationalPoint::new(direction.values().iter().map(|w| w * s).collect())))
        .collect::<Result<_, _>>()?;
    let mut out = BTreeMap::new();
    for p in LinkPattern::enumerate(n) {
        let ys: Vec<Rational> = samples.iter().map(|v| v.get(&p).cloned().unwrap_or_default()).collect();
        let coeffs = fit_polynomial(&xs, &ys, degree).ok_or(PointwiseError::Interpolation(degree))?;
        out.insert(p, coeffs[0].clone());
    }
    Ok(out)
}

/// Primes below `2^31`, in decreasing order.
fn primes() -> impl Iterator<Item = u64> {
    (1u64 << 20..1u64 << 31).rev().filter(|&k| is_prime(k))
}

fn is_prime(k: u64) -> bool {
    if k % 2 == 0 {
        return k == 2;
    }
    let mut d = 3;
    while d * d <= k {
        if k % d == 0 {
            return false;
        }
        d += 2;
    }
    k > 1
}

fn rational_mod(x: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = x.denom().mod_floor(&pb).to_u64().unwrap();
    if den == 0 {
        return None;
    }
    let num = x.numer().mod_floor(&pb).to_u64().unwrap();
    Some(num * inv_mod(den, p) % p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

enum Kernel {
    One(Vec<u64>),
    Other(usize),
}

/// Kernel of a square matrix over `F_p`, returned only when it is a line.
fn kernel_mod(mut a: Vec<Vec<u64>>, p: u64) -> Kernel {
    let d = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..d {
        let Some(k) = (row..d).find(|&k| a[k][col] != 0) else { continue };
        a.swap(row, k);
        let inv = inv_mod(a[row][col], p);
        for x in a[row].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = a[row].clone();
        for (k, r) in a.iter_mut().enumerate() {
            if k == row || r[col] == 0 {
                continue;
            }
            let f = r[col];
            for (x, &y) in r.iter_mut().zip(&pivot_row) {
                *x = (*x + p - f * y % p) % p;
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
    if free.len() != 1 {
        return Kernel::Other(free.len());
    }
    let f = free[0];
    let mut v = vec![0; d];
    v[f] = 1;
    for (i, &c) in pivots.iter().enumerate() {
        v[c] = (p - a[i][f]) % p;
    }
    Kernel::One(v)
}

/// The residue mod `m·p` congruent to `r` mod `m` and `k` mod `p`.
fn crt(r: &BigInt, m: &BigInt, k: u64, p: u64) -> BigInt {
    let pb = BigInt::from(p);
    let r_mod_p = r.mod_floor(&pb).to_u64().unwrap();
    let m_mod_p = m.mod_floor(&pb).to_u64().unwrap();
    let t = (k + p - r_mod_p) % p * inv_mod(m_mod_p, p) % p;
    r + m * BigInt::from(t)
}

/// The fraction `a/b ≡ r (mod m)` with `|a|, b ≤ sqrt(m/2)`, if one exists.
fn reconstruct(r: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn reconstruction_round_trip() {
        let ps: Vec<u64> = primes().take(2).collect();
        let m = BigInt::from(ps[0]) * BigInt::from(ps[1]);
        for x in [rat(3, 7), rat(-22, 91), rat(0, 1), rat(12345, 2)] {
            let r0 = BigInt::from(rational_mod(&x, ps[0]).unwrap());
            let r = crt(&r0, &BigInt::from(ps[0]), rational_mod(&x, ps[1]).unwrap(), ps[1]);
            assert_eq!(reconstruct(&r, &m), Some(x));
        }
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let p = 101;
        let a = vec![vec![1, 2], vec![2, 4]];
        match kernel_mod(a, p) {
            Kernel::One(v) => assert_eq!((v[0] + 2 * v[1]) % p, 0),
            Kernel::Other(_) => panic!("expected a line"),
        }
        assert!(matches!(kernel_mod(vec![vec![0, 0], vec![0, 0]], p), Kernel::Other(2)));
    }

    #[test]
    fn fits_and_rejects() {
        let xs: Vec<Rational> = (0..6).map(|k| rat(k, 3)).collect();
        let f = |x: &Rational| x * x * x - rat(1, 2) * x + rat(7, 1);
        let ys: Vec<Rational> = xs.iter().map(f).collect();
        let c = fit_polynomial(&xs, &ys, 3).unwrap();
        assert_eq!(c, vec![rat(7, 1), rat(-1, 2), rat(0, 1), rat(1, 1)]);
        assert!(fit_polynomial(&xs, &ys, 2).is_none());
    }

    #[test]
    fn agrees_with_symbolic_build() {
        for n in 1..=3 {
            let gs = crate::groundstate::build(n).unwrap();
            for pt in crate::points::generic_points(2 * n, 2, 11) {
                assert_eq!(ground_state_at(n, &pt).unwrap(), gs.evaluate(&pt));
            }
        }
    }

    #[test]
    fn homogeneous_point_small() {
        let v = homogeneous_values(2, 3).unwrap();
        let total: Rational = v.values().sum();
        assert_eq!(total, rat(7, 1));
    }

    #[test]
    fn primes_are_prime() {
        let ps: Vec<u64> = primes().take(3).collect();
        assert_eq!(ps[0], 2_147_483_647);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
    }
}
