//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`Poly`] is a hash map from [`Monomial`] to [`Rational`] together with a
//! list of variable names. Exponent vectors are stored with trailing zeros
//! trimmed, so polynomials living in different (prefix-compatible) variable
//! universes combine without any conversion step.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;
use thiserror::Error;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial is not divisible by {divisor}")]
    NotDivisible { divisor: String },
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("divisor {0} is not an affine-linear form")]
    NotLinear(String),
    #[error("degenerate linear-fractional map (ad - bc = 0)")]
    DegenerateMap,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("malformed polynomial JSON: {0}")]
    Malformed(String),
}

/// Exponent vector, trailing zeros trimmed.
///
/// The derived ordering is lexicographic with variable 0 most significant,
/// which coincides with the lexicographic order of zero-padded vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut m = Monomial(SmallVec::from_slice(exps));
        m.trim();
        m
    }

    pub fn var(i: usize, e: u32) -> Self {
        let mut m = Monomial::one();
        m.set(i, e);
        m
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Number of slots actually used (index of the last nonzero exponent + 1).
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn set(&mut self, i: usize, e: u32) {
        if i >= self.0.len() {
            if e == 0 {
                return;
            }
            self.0.resize(i + 1, 0);
        }
        self.0[i] = e;
        self.trim();
    }

    pub fn with_exponent(&self, i: usize, e: u32) -> Self {
        let mut m = self.clone();
        m.set(i, e);
        m
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = long.0.clone();
        for (e, s) in out.iter_mut().zip(short.0.iter()) {
            *e += s;
        }
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut out = self.0.clone();
        for (e, s) in out.iter_mut().zip(other.0.iter()) {
            *e -= s;
        }
        let mut m = Monomial(out);
        m.trim();
        Some(m)
    }

    pub fn swap(&self, i: usize, j: usize) -> Monomial {
        let (a, b) = (self.exponent(i), self.exponent(j));
        if a == b {
            return self.clone();
        }
        let mut m = self.clone();
        m.set(i, b);
        m.set(j, a);
        m
    }

    pub fn padded(&self, len: usize) -> Vec<u32> {
        let mut v = self.0.to_vec();
        if v.len() < len {
            v.resize(len, 0);
        }
        v
    }
}

/// Ordered variable names of a polynomial universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    /// `prefix1, prefix2, ..., prefix{count}`.
    pub fn indexed(prefix: &str, count: usize) -> Self {
        Vars((1..=count).map(|i| format!("{prefix}{i}")).collect())
    }

    /// Spectral parameters `z1..z{2n}`.
    pub fn z(count: usize) -> Self {
        Self::indexed("z", count)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, i: usize) -> String {
        self.0.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    fn wider(a: &Vars, b: &Vars) -> Vars {
        if a.len() >= b.len() {
            a.clone()
        } else {
            b.clone()
        }
    }
}

/// A point at which polynomials are evaluated, one rational per variable slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint(pub Vec<Rational>);

impl RationalPoint {
    pub fn new(values: Vec<Rational>) -> Self {
        RationalPoint(values)
    }

    pub fn zeros(len: usize) -> Self {
        RationalPoint(vec![Rational::zero(); len])
    }

    pub fn from_fractions(values: &[(i64, i64)]) -> Self {
        RationalPoint(values.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    /// Exchanges coordinates `i` and `j`.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut v = self.0.clone();
        v.swap(i, j);
        RationalPoint(v)
    }
}

impl std::ops::Index<usize> for RationalPoint {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

/// Sign convention for divided differences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DdConvention {
    /// `(F^τ - F) / (z_i - z_j)`, the convention entering the loop-model operators.
    Loop,
    /// `(F - F^τ) / (z_i - z_j)`, the classical Schubert-calculus convention.
    Classical,
}

/// The linear-fractional map `s ↦ (a s + b) / (c s + d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl Mobius {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Mobius { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mobius::new(int(a), int(b), int(c), int(d))
    }

    /// `s ↦ (s - 1) / (s + 1)`.
    pub fn cayley() -> Self {
        Mobius::from_ints(1, -1, 1, 1)
    }

    /// The constant map `s ↦ value`.
    pub fn constant(value: Rational) -> Self {
        Mobius::new(Rational::zero(), value, Rational::zero(), Rational::one())
    }

    pub fn is_constant(&self) -> bool {
        self.a.is_zero() && self.c.is_zero()
    }

    pub fn determinant(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    /// The inverse map, `s ↦ (d s - b) / (-c s + a)`.
    pub fn inverse(&self) -> Mobius {
        Mobius::new(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone())
    }
}

/// Internal coefficient: machine integer when possible, exact rational otherwise.
///
/// Canonical: an integer that fits in `i64` is always `Small`.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Coeff {
    Small(i64),
    Big(Rational),
}

impl Coeff {
    fn from_rational(r: Rational) -> Coeff {
        if r.is_integer() {
            if let Some(v) = r.numer().to_i64() {
                return Coeff::Small(v);
            }
        }
        Coeff::Big(r)
    }

    fn to_rational(&self) -> Rational {
        match self {
            Coeff::Small(v) => Rational::from_integer(BigInt::from(*v)),
            Coeff::Big(r) => r.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Coeff::Small(0))
    }

    fn is_integer(&self) -> bool {
        match self {
            Coeff::Small(_) => true,
            Coeff::Big(r) => r.is_integer(),
        }
    }

    fn is_negative(&self) -> bool {
        match self {
            Coeff::Small(v) => *v < 0,
            Coeff::Big(r) => r.is_negative(),
        }
    }

    fn add(&self, other: &Coeff) -> Coeff {
        if let (Coeff::Small(a), Coeff::Small(b)) = (self, other) {
            if let Some(v) = a.checked_add(*b) {
                return Coeff::Small(v);
            }
        }
        Coeff::from_rational(self.to_rational() + other.to_rational())
    }

    fn mul(&self, other: &Coeff) -> Coeff {
        if let (Coeff::Small(a), Coeff::Small(b)) = (self, other) {
            if let Some(v) = a.checked_mul(*b) {
                return Coeff::Small(v);
            }
        }
        Coeff::from_rational(self.to_rational() * other.to_rational())
    }

    fn neg(&self) -> Coeff {
        match self {
            Coeff::Small(v) => match v.checked_neg() {
                Some(w) => Coeff::Small(w),
                None => Coeff::from_rational(-self.to_rational()),
            },
            Coeff::Big(r) => Coeff::from_rational(-r.clone()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Poly {
    vars: Vars,
    terms: FxHashMap<Monomial, Coeff>,
}

impl PartialEq for Poly {
    /// Equality of the term maps; variable labels are not compared.
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly {
            vars: vars.clone(),
            terms: FxHashMap::default(),
        }
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let mut p = Poly::zero(vars);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Poly::constant(vars, Rational::one())
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut p = Poly::zero(vars);
        p.add_term(Monomial::var(i, 1), Rational::one());
        p
    }

    /// `c0 + Σ c_k x_k`.
    pub fn affine(vars: &Vars, c0: Rational, coeffs: &[(usize, Rational)]) -> Self {
        let mut p = Poly::constant(vars, c0);
        for (k, c) in coeffs {
            p.add_term(Monomial::var(*k, 1), c.clone());
        }
        p
    }

    /// `c + x_i - x_j`, the ubiquitous shifted difference.
    pub fn shifted_difference(vars: &Vars, c: i64, i: usize, j: usize) -> Self {
        Poly::affine(vars, int(c), &[(i, int(1)), (j, int(-1))])
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(vars: &Vars, terms: I) -> Self {
        let mut p = Poly::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Same terms, relabeled variable universe.
    pub fn with_vars(mut self, vars: &Vars) -> Self {
        self.vars = vars.clone();
        self
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        self.add_coeff(m, Coeff::from_rational(c));
    }

    fn add_coeff(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Rational)> {
        self.terms.iter().map(|(m, c)| (m, c.to_rational()))
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).map(Coeff::to_rational).unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Lowest degree among the terms; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn partial_degree(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(i)).max().unwrap_or(0)
    }

    /// Highest variable slot used plus one.
    pub fn width(&self) -> usize {
        self.terms.keys().map(Monomial::width).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn homogeneous_component(&self, d: u32) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The terms of maximal total degree.
    pub fn top_component(&self) -> Poly {
        match self.total_degree() {
            Some(d) => self.homogeneous_component(d),
            None => self.clone(),
        }
    }

    /// The terms of minimal total degree.
    pub fn bottom_component(&self) -> Poly {
        match self.min_degree() {
            Some(d) => self.homogeneous_component(d),
            None => self.clone(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        let c = Coeff::from_rational(c.clone());
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.mul(&c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        let c = Coeff::from_rational(c.clone());
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.mul(&c))).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Product of a list of factors.
    pub fn product<'a, I: IntoIterator<Item = &'a Poly>>(vars: &Vars, factors: I) -> Poly {
        let mut acc = Poly::one(vars);
        for f in factors {
            acc = &acc * f;
        }
        acc
    }

    /// Exchanges variables `i` and `j` (the transposition τ).
    pub fn swap_vars(&self, i: usize, j: usize) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.swap(i, j), c.clone())).collect(),
        }
    }

    /// Renames variable `k` to `target[k].0`, multiplying it by `-1` when
    /// `target[k].1` is set. Variables beyond `target` are left alone.
    pub fn signed_rename(&self, target: &[(usize, bool)], vars: &Vars) -> Poly {
        let mut out = Poly::zero(vars);
        for (m, c) in &self.terms {
            let mut nm = Monomial::one();
            let mut negate = false;
            for (k, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (t, neg) = target.get(k).copied().unwrap_or((k, false));
                nm.set(t, nm.exponent(t) + e);
                if neg && e % 2 == 1 {
                    negate = !negate;
                }
            }
            out.add_coeff(nm, if negate { c.neg() } else { c.clone() });
        }
        out
    }

    /// Renames variable `k` to `target[k]`.
    pub fn rename(&self, target: &[usize], vars: &Vars) -> Poly {
        let t: Vec<(usize, bool)> = target.iter().map(|&k| (k, false)).collect();
        self.signed_rename(&t, vars)
    }

    /// Divided difference with respect to the pair `(i, j)`; always exact.
    pub fn divided_difference(&self, i: usize, j: usize, convention: DdConvention) -> Poly {
        let swapped = self.swap_vars(i, j);
        let numerator = match convention {
            DdConvention::Loop => &swapped - self,
            DdConvention::Classical => self - &swapped,
        };
        let divisor = Poly::affine(&self.vars, Rational::zero(), &[(i, int(1)), (j, int(-1))]);
        numerator
            .exact_div_linear(&divisor)
            .expect("antisymmetric numerator is divisible by x_i - x_j")
    }

    /// Splits an affine-linear form into constant and per-variable coefficients.
    fn linear_parts(&self) -> Result<(Rational, Vec<(usize, Rational)>), PolyError> {
        let mut c0 = Rational::zero();
        let mut lin = Vec::new();
        for (m, c) in &self.terms {
            match m.degree() {
                0 => c0 = c.to_rational(),
                1 => {
                    let k = m.exponents().iter().position(|&e| e == 1).unwrap();
                    lin.push((k, c.to_rational()));
                }
                _ => return Err(PolyError::NotLinear(self.to_string())),
            }
        }
        lin.sort_by_key(|(k, _)| *k);
        Ok((c0, lin))
    }

    /// Exact quotient by an affine-linear form `ell`.
    ///
    /// Reduction is done with respect to the lexicographically leading variable
    /// of `ell`; a nonzero remainder yields [`PolyError::NotDivisible`].
    pub fn exact_div_linear(&self, ell: &Poly) -> Result<Poly, PolyError> {
        if ell.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        let (c0, lin) = ell.linear_parts()?;
        let vars = Vars::wider(&self.vars, &ell.vars);
        if lin.is_empty() {
            return Ok(self.scale(&c0.recip()).with_vars(&vars));
        }
        let (v, cv) = lin[0].clone();
        let inv = Coeff::from_rational(cv.recip());
        // ell = cv * x_v + rest
        let rest: Vec<(Monomial, Coeff)> = std::iter::once((Monomial::one(), c0))
            .chain(lin[1..].iter().map(|(k, c)| (Monomial::var(*k, 1), c.clone())))
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, Coeff::from_rational(c)))
            .collect();

        let top = self.partial_degree(v) as usize;
        let mut slices: Vec<FxHashMap<Monomial, Coeff>> = vec![FxHashMap::default(); top + 1];
        for (m, c) in &self.terms {
            let k = m.exponent(v) as usize;
            slices[k].insert(m.with_exponent(v, 0), c.clone());
        }
        let mut quotient = Poly::zero(&vars);
        for k in (1..=top).rev() {
            let slice = std::mem::take(&mut slices[k]);
            for (m, c) in slice {
                let q = c.mul(&inv);
                for (rm, rc) in &rest {
                    let target = &mut slices[k - 1];
                    let key = m.mul(rm);
                    let delta = q.mul(rc).neg();
                    match target.entry(key) {
                        std::collections::hash_map::Entry::Occupied(mut e) => {
                            let sum = e.get().add(&delta);
                            if sum.is_zero() {
                                e.remove();
                            } else {
                                *e.get_mut() = sum;
                            }
                        }
                        std::collections::hash_map::Entry::Vacant(e) => {
                            e.insert(delta);
                        }
                    }
                }
                quotient.add_coeff(m.with_exponent(v, (k - 1) as u32), q);
            }
        }
        if slices[0].is_empty() {
            Ok(quotient)
        } else {
            Err(PolyError::NotDivisible {
                divisor: ell.to_string(),
            })
        }
    }

    /// Exact quotient by an arbitrary polynomial, by lexicographic
    /// leading-term reduction.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        if divisor.total_degree() == Some(1) {
            return self.exact_div_linear(divisor);
        }
        let vars = Vars::wider(&self.vars, &divisor.vars);
        let (lead_m, lead_c) = divisor
            .terms
            .iter()
            .max_by(|a, b| a.0.cmp(b.0))
            .map(|(m, c)| (m.clone(), c.to_rational()))
            .unwrap();
        let lead_inv = lead_c.recip();
        let bound = self
            .total_degree()
            .unwrap_or(0)
            .saturating_sub(divisor.total_degree().unwrap_or(0));
        let mut rem: BTreeMap<Monomial, Rational> =
            self.terms.iter().map(|(m, c)| (m.clone(), c.to_rational())).collect();
        let mut quotient = Poly::zero(&vars);
        let not_divisible = || PolyError::NotDivisible {
            divisor: divisor.to_string(),
        };
        while let Some((m, c)) = rem.pop_last() {
            let t = m.div(&lead_m).ok_or_else(not_divisible)?;
            if t.degree() > bound {
                return Err(not_divisible());
            }
            let q = &c * &lead_inv;
            for (dm, dc) in divisor.terms() {
                if *dm == lead_m {
                    continue;
                }
                let key = t.mul(dm);
                let delta = &q * &dc;
                let entry = rem.entry(key).or_insert_with(Rational::zero);
                *entry -= delta;
                if entry.is_zero() {
                    let key = t.mul(dm);
                    rem.remove(&key);
                }
            }
            quotient.add_term(t, q);
        }
        Ok(quotient)
    }

    /// Exact rational value at `point`.
    ///
    /// # Panics
    /// If the point has fewer coordinates than the polynomial uses.
    pub fn evaluate(&self, point: &RationalPoint) -> Rational {
        let width = self.width();
        assert!(
            point.len() >= width,
            "point has {} coordinates, polynomial uses {}",
            point.len(),
            width
        );
        // Integer arithmetic over the common denominator
        // L * Π den_i^{D_i}, with D_i the partial degrees and L the lcm of
        // the coefficient denominators.
        let mut top = vec![0u32; width];
        let mut lcm = BigInt::one();
        for (m, c) in &self.terms {
            for (i, &e) in m.exponents().iter().enumerate() {
                top[i] = top[i].max(e);
            }
            if let Coeff::Big(r) = c {
                lcm = lcm.lcm(r.denom());
            }
        }
        let table: Vec<Vec<BigInt>> = (0..width)
            .map(|i| {
                let (num, den) = (point[i].numer(), point[i].denom());
                (0..=top[i])
                    .map(|e| num.pow(e) * den.pow(top[i] - e))
                    .collect()
            })
            .collect();
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = match c {
                Coeff::Small(v) => &lcm * BigInt::from(*v),
                Coeff::Big(r) => r.numer() * (&lcm / r.denom()),
            };
            for (i, row) in table.iter().enumerate() {
                let e = m.exponent(i) as usize;
                if top[i] > 0 {
                    t *= &row[e];
                }
            }
            acc += t;
        }
        let mut denominator = lcm;
        for (i, &d) in top.iter().enumerate() {
            denominator *= point[i].denom().pow(d);
        }
        Rational::new(acc, denominator)
    }

    /// Replaces variable `var` by the polynomial `q`.
    pub fn compose(&self, var: usize, q: &Poly) -> Poly {
        let vars = Vars::wider(&self.vars, &q.vars);
        let top = self.partial_degree(var);
        let mut powers = vec![Poly::one(&vars)];
        for k in 1..=top as usize {
            let next = &powers[k - 1] * q;
            powers.push(next);
        }
        let mut grouped: Vec<Poly> = vec![Poly::zero(&vars); top as usize + 1];
        for (m, c) in &self.terms {
            let k = m.exponent(var) as usize;
            grouped[k].add_coeff(m.with_exponent(var, 0), c.clone());
        }
        let mut out = Poly::zero(&vars);
        for (k, g) in grouped.iter().enumerate() {
            if !g.is_zero() {
                out += &(g * &powers[k]);
            }
        }
        out
    }

    /// Substitutes a constant for variable `var`.
    pub fn substitute_constant(&self, var: usize, value: &Rational) -> Poly {
        self.compose(var, &Poly::constant(&self.vars, value.clone()))
    }

    /// Substitutes `x_var ↦ (a s + b)/(c s + d)` with `s = x_new_var`.
    ///
    /// Returns `(N, e)` with `p = N / (c s + d)^e`, where `e` is the partial
    /// degree of `p` in `var`. Maps with `c = 0` have a constant denominator,
    /// which is folded into `N`, and `e = 0`.
    pub fn substitute_linear_fraction(
        &self,
        var: usize,
        map: &Mobius,
        new_var: usize,
    ) -> Result<(Poly, u32), PolyError> {
        if map.c.is_zero() {
            if map.d.is_zero() {
                return Err(PolyError::DegenerateMap);
            }
            let q = Poly::affine(
                &self.vars,
                &map.b / &map.d,
                &[(new_var, &map.a / &map.d)],
            );
            return Ok((self.compose(var, &q), 0));
        }
        if map.determinant().is_zero() {
            return Err(PolyError::DegenerateMap);
        }
        let e = self.partial_degree(var);
        let num = Poly::affine(&self.vars, map.b.clone(), &[(new_var, map.a.clone())]);
        let den = Poly::affine(&self.vars, map.d.clone(), &[(new_var, map.c.clone())]);
        let num_pows = powers_of(&num, e);
        let den_pows = powers_of(&den, e);
        let mut grouped: Vec<Poly> = vec![Poly::zero(&self.vars); e as usize + 1];
        for (m, c) in &self.terms {
            let k = m.exponent(var) as usize;
            grouped[k].add_coeff(m.with_exponent(var, 0), c.clone());
        }
        let mut out = Poly::zero(&self.vars);
        for (k, g) in grouped.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let factor = &num_pows[k] * &den_pows[e as usize - k];
            out += &(g * &factor);
        }
        Ok((out, e))
    }

    /// Substitutes `x_k ↦ L_k / D` for every `(k, L_k)` in `numerators`,
    /// with one common denominator `D`.
    ///
    /// Returns `(N, e)` with `p = N / D^e`, where `e` is the largest total
    /// degree of a term in the substituted variables.
    pub fn substitute_common_denominator(
        &self,
        numerators: &[(usize, Poly)],
        denominator: &Poly,
        vars: &Vars,
    ) -> (Poly, u32) {
        let substituted: Vec<usize> = numerators.iter().map(|(k, _)| *k).collect();
        let sub_degree =
            |m: &Monomial| -> u32 { substituted.iter().map(|&k| m.exponent(k)).sum() };
        let e = self.terms.keys().map(sub_degree).max().unwrap_or(0);
        let den_pows = powers_of(&denominator.clone().with_vars(vars), e);
        let mut num_pows: Vec<Vec<Poly>> = Vec::new();
        for (k, l) in numerators {
            num_pows.push(powers_of(&l.clone().with_vars(vars), self.partial_degree(*k)));
        }
        let mut grouped: FxHashMap<Vec<u32>, Poly> = FxHashMap::default();
        for (m, c) in &self.terms {
            let key: Vec<u32> = substituted.iter().map(|&k| m.exponent(k)).collect();
            let mut rest = m.clone();
            for &k in &substituted {
                rest.set(k, 0);
            }
            grouped
                .entry(key)
                .or_insert_with(|| Poly::zero(vars))
                .add_coeff(rest, c.clone());
        }
        let mut keys: Vec<&Vec<u32>> = grouped.keys().collect();
        keys.sort();
        let mut out = Poly::zero(vars);
        for key in keys {
            let mut factor = den_pows[(e - key.iter().sum::<u32>()) as usize].clone();
            for (slot, &k) in key.iter().enumerate() {
                if k > 0 {
                    factor = &factor * &num_pows[slot][k as usize];
                }
            }
            out += &(&grouped[key] * &factor);
        }
        (out, e)
    }

    /// Terms sorted lexicographically on exponents (ascending).
    pub fn sorted_terms(&self) -> Vec<(&Monomial, Rational)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// Parses an expression such as `(1+z1-z2)*(2-z3)^2 - 1/2*z4` over `vars`.
    pub fn parse(src: &str, vars: &Vars) -> Result<Poly, PolyError> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
            vars,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serializes")
    }
}

fn powers_of(p: &Poly, e: u32) -> Vec<Poly> {
    let mut out = vec![Poly::one(p.vars())];
    for k in 1..=e as usize {
        let next = &out[k - 1] * p;
        out.push(next);
    }
    out
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        let vars = Vars::wider(&self.vars, &rhs.vars);
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = Poly::zero(&vars);
        out.terms.reserve(big.terms.len() * small.terms.len().min(4));
        for (sm, sc) in &small.terms {
            for (bm, bc) in &big.terms {
                out.add_coeff(bm.mul(sm), bc.mul(sc));
            }
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        if rhs.vars.len() > self.vars.len() {
            self.vars = rhs.vars.clone();
        }
        for (m, c) in &rhs.terms {
            self.add_coeff(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        if rhs.vars.len() > self.vars.len() {
            self.vars = rhs.vars.clone();
        }
        for (m, c) in &rhs.terms {
            self.add_coeff(m.clone(), c.neg());
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    /// Terms by decreasing degree, lexicographically within a degree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by(|a, b| match b.0.degree().cmp(&a.0.degree()) {
            Ordering::Equal => b.0.cmp(a.0),
            o => o,
        });
        for (idx, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(fmt_rational(&abs));
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.name(i)),
                    _ => factors.push(format!("{}^{}", self.vars.name(i), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    vars: Vec<String>,
    terms: Vec<TermRepr>,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let width = self.vars.len().max(self.width());
        let repr = PolyRepr {
            vars: (0..width).map(|i| self.vars.name(i)).collect(),
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(m, c)| TermRepr {
                    exp: m.padded(width),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = PolyRepr::deserialize(deserializer)?;
        let vars = Vars::new(&repr.vars);
        let mut p = Poly::zero(&vars);
        for t in repr.terms {
            if t.exp.len() != vars.len() {
                return Err(D::Error::custom(PolyError::Malformed(
                    "exponent vector length differs from variable count".into(),
                )));
            }
            let num: BigInt = t.num.parse().map_err(D::Error::custom)?;
            let den: BigInt = t.den.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom(PolyError::Malformed("zero denominator".into())));
            }
            p.add_term(Monomial::from_exponents(&t.exp), Rational::new(num, den));
        }
        Ok(p)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = Poly::zero(self.vars);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            if sign < 0 {
                acc -= &t;
            } else {
                acc += &t;
            }
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let f = self.power()?;
                    if f.total_degree().unwrap_or(0) > 0 || f.is_zero() {
                        return Err(self.error("division only by nonzero constants"));
                    }
                    acc = acc.scale(&f.constant_term().recip());
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() || c == b'_' => {
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.uint()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                Ok(Poly::constant(self.vars, Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let i = self
                    .vars
                    .index_of(name)
                    .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
                Ok(Poly::var(self.vars, i))
            }
            _ => Err(self.error("expected a number, variable or `(`")),
        }
    }
}

impl<'a> std::iter::Sum<&'a Poly> for Poly {
    fn sum<I: Iterator<Item = &'a Poly>>(iter: I) -> Poly {
        let mut acc: Option<Poly> = None;
        for p in iter {
            match acc.as_mut() {
                Some(a) => *a += p,
                None => acc = Some(p.clone()),
            }
        }
        acc.unwrap_or_else(|| Poly::zero(&Vars::new::<&str>(&[])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zs(n: usize) -> Vars {
        Vars::z(n)
    }

    fn p(s: &str, n: usize) -> Poly {
        Poly::parse(s, &zs(n)).unwrap()
    }

    #[test]
    fn additive_inverse_and_identity() {
        assert!((&p("z1", 2) + &p("-z1", 2)).is_zero());
        assert_eq!(&p("1+z1-z2", 2) * &Poly::one(&zs(2)), p("1+z1-z2", 2));
        assert_eq!(&p("z1-z2", 2) * &p("z1+z2", 2), p("z1^2-z2^2", 2));
    }

    #[test]
    fn swap_examples() {
        assert_eq!(p("z1", 2).swap_vars(0, 1), p("z2", 2));
        assert_eq!(p("z1+z2", 2).swap_vars(0, 1), p("z1+z2", 2));
        assert_eq!(p("1+z1-z2", 2).swap_vars(0, 1), p("1+z2-z1", 2));
    }

    #[test]
    fn divided_difference_examples() {
        let dd = |s: &str| p(s, 2).divided_difference(0, 1, DdConvention::Loop);
        assert!(dd("z1*z2 + 3*z1 + 3*z2").is_zero());
        assert_eq!(dd("z1"), p("-1", 2));
        assert_eq!(dd("z1^2"), p("-z1-z2", 2));
        assert_eq!(
            p("z1^2", 2).divided_difference(0, 1, DdConvention::Classical),
            p("z1+z2", 2)
        );
    }

    #[test]
    fn exact_division_examples() {
        let l = p("1+z1-z2", 3);
        assert_eq!(p("(1+z1-z2)*z3", 3).exact_div_linear(&l).unwrap(), p("z3", 3));
        let d = p("z1-z2", 2);
        assert_eq!(p("(z1-z2)^2", 2).exact_div_linear(&d).unwrap(), d);
        assert!(matches!(
            p("z1", 2).exact_div_linear(&p("1+z1-z2", 2)),
            Err(PolyError::NotDivisible { .. })
        ));
        assert!(matches!(
            p("z1", 2).exact_div_linear(&Poly::zero(&zs(2))),
            Err(PolyError::ZeroDivisor)
        ));
    }

    #[test]
    fn general_division_by_bilinear_form() {
        let d = p("1 - z1 + 3*z2 + z1*z2", 3);
        let q = p("z3^2 - 2*z1 + 7", 3);
        assert_eq!((&d * &q).exact_div(&d).unwrap(), q);
        assert!((&(&d * &q) + &p("z3", 3)).exact_div(&d).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let pt = RationalPoint::from_fractions(&[(1, 2), (1, 3)]);
        assert_eq!(p("1+z1-z2", 2).evaluate(&pt), rat(7, 6));
        assert_eq!(Poly::zero(&zs(2)).evaluate(&pt), rat(0, 1));
    }

    #[test]
    fn linear_fraction_examples() {
        let vars = Vars::new(&["z", "t"]);
        let one_plus_z = Poly::parse("1+z", &vars).unwrap();
        let (n, e) = one_plus_z
            .substitute_linear_fraction(0, &Mobius::cayley(), 1)
            .unwrap();
        assert_eq!((n, e), (Poly::parse("2*t", &vars).unwrap(), 1));

        let (n, e) = p("1+z1-z2", 2)
            .substitute_linear_fraction(1, &Mobius::constant(int(0)), 1)
            .unwrap();
        assert_eq!((n, e), (p("1+z1", 2), 0));

        let ab = Vars::new(&["z1", "z2", "A", "B"]);
        let f = Poly::parse("1+z1-z2", &ab).unwrap();
        let (n, e) = f.substitute_common_denominator(
            &[(0, Poly::var(&ab, 3)), (1, Poly::var(&ab, 2))],
            &Poly::parse("A+B", &ab).unwrap(),
            &ab,
        );
        assert_eq!((n, e), (Poly::parse("2*B", &ab).unwrap(), 1));
    }

    #[test]
    fn degenerate_map_is_rejected() {
        let m = Mobius::from_ints(1, 1, 2, 2);
        assert_eq!(
            p("z1", 2).substitute_linear_fraction(0, &m, 1),
            Err(PolyError::DegenerateMap)
        );
    }

    #[test]
    fn compose_shifts_a_variable() {
        // z2 -> z1 + 1 kills z2 - z1 - 1
        let f = p("z2 - z1 - 1", 2);
        assert!(f.compose(1, &p("z1 + 1", 2)).is_zero());
    }

    #[test]
    fn display_and_parse_agree() {
        let f = p("3/2*z1^2*z3 - z2 + 7 - 1/3*z1", 3);
        assert_eq!(Poly::parse(&f.to_string(), &zs(3)).unwrap(), f);
        assert_eq!(p("(z1+1)(z1-1)", 1), p("z1^2-1", 1));
    }

    #[test]
    fn json_shape() {
        let f = p("1/2 + z2", 2);
        assert_eq!(
            f.to_json(),
            r#"{"vars":["z1","z2"],"terms":[{"exp":[0,0],"num":"1","den":"2"},{"exp":[0,1],"num":"1","den":"1"}]}"#
        );
        let back: Poly = serde_json::from_str(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Poly::parse("z9", &zs(2)), Err(PolyError::UnknownVariable(_))));
        assert!(matches!(Poly::parse("(z1", &zs(2)), Err(PolyError::Parse { .. })));
        assert!(Poly::parse("z1/z2", &zs(2)).is_err());
    }
}
