//! Operators on the span of link patterns: `e_i`, `f_i`, the face operator
//! `X_i(u)`, its normalized form `Ř_i(z, w)` and the transfer matrix `T′_n`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde_json::json;
use thiserror::Error;

use crate::linkpat::LinkPattern;
use crate::poly::{int, rat, Poly, Rational, RationalPoint};
use crate::report::CheckReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BrauerError {
    #[error("Ř normalization vanishes at z = {z}, w = {w}")]
    SingularNormalization { z: Rational, w: Rational },
}

/// Coefficient types a [`PatternVector`] can carry.
pub trait Scalar: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
}

impl Scalar for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
}

impl Scalar for Poly {
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, c: &Rational) -> Self {
        Poly::scale(self, c)
    }
}

/// A vector in the span of `CP_n`; absent patterns have coefficient zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternVector<S: Scalar> {
    pub n: usize,
    entries: BTreeMap<LinkPattern, S>,
}

impl<S: Scalar> PatternVector<S> {
    pub fn new(n: usize) -> Self {
        PatternVector {
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn basis(pattern: &LinkPattern, one: S) -> Self {
        let mut v = Self::new(pattern.n());
        v.add_to(pattern.clone(), one);
        v
    }

    pub fn from_entries<I: IntoIterator<Item = (LinkPattern, S)>>(n: usize, entries: I) -> Self {
        let mut v = Self::new(n);
        for (p, s) in entries {
            v.add_to(p, s);
        }
        v
    }

    pub fn add_to(&mut self, pattern: LinkPattern, s: S) {
        debug_assert_eq!(pattern.n(), self.n);
        if s.is_zero() {
            return;
        }
        match self.entries.entry(pattern) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&s);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(s);
            }
        }
    }

    pub fn get(&self, pattern: &LinkPattern) -> Option<&S> {
        self.entries.get(pattern)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LinkPattern, &S)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_entries(self.n, self.entries.iter().map(|(p, s)| (p.clone(), s.scale(c))))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, s) in &other.entries {
            out.add_to(p.clone(), s.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    /// Linear extension of a map on basis patterns producing `(pattern, weight)` pairs.
    pub fn map_linear<F>(&self, f: F) -> Self
    where
        F: Fn(&LinkPattern) -> Vec<(LinkPattern, Rational)>,
    {
        let mut out = Self::new(self.n);
        for (p, s) in &self.entries {
            for (q, c) in f(p) {
                out.add_to(q, s.scale(&c));
            }
        }
        out
    }
}

impl PatternVector<Rational> {
    /// Pairing with a linear form given as a pattern-indexed weight function.
    pub fn pair<F: Fn(&LinkPattern) -> Rational>(&self, form: F) -> Rational {
        self.entries.iter().map(|(p, c)| c * form(p)).sum()
    }
}

/// A single operator on pattern space; sites are 1-based and cyclic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorSpec {
    Identity,
    E(usize),
    F(usize),
    /// `X_i(u) = (1−u) I + (u/2)(1−u) f_i + u e_i`.
    X(usize, Rational),
    /// `Ř_i(z, w) = X_i(w − z) / ((1 − (w−z)/2)(1 + w − z))`.
    Rcheck(usize, Rational, Rational),
    /// Cyclic relabeling `i → i + 1` of every pattern.
    Rotate,
}

/// Image of one basis pattern, as weighted patterns.
pub fn basis_image(op: &OperatorSpec, p: &LinkPattern) -> Result<Vec<(LinkPattern, Rational)>, BrauerError> {
    let one = Rational::one();
    Ok(match op {
        OperatorSpec::Identity => vec![(p.clone(), one)],
        OperatorSpec::E(i) => vec![(p.apply_e(*i), one)],
        OperatorSpec::F(i) => vec![(p.apply_f(*i), one)],
        OperatorSpec::Rotate => vec![(p.rotate(), one)],
        OperatorSpec::X(i, u) => x_image(*i, u, p, &one),
        OperatorSpec::Rcheck(i, z, w) => {
            let u = w - z;
            let norm = (&one - &u / int(2)) * (&one + &u);
            if Zero::is_zero(&norm) {
                return Err(BrauerError::SingularNormalization {
                    z: z.clone(),
                    w: w.clone(),
                });
            }
            x_image(*i, &u, p, &norm.recip())
        }
    })
}

fn x_image(i: usize, u: &Rational, p: &LinkPattern, factor: &Rational) -> Vec<(LinkPattern, Rational)> {
    let one = Rational::one();
    let a = (&one - u) * factor;
    let b = u * (&one - u) / int(2) * factor;
    let c = u * factor;
    vec![(p.clone(), a), (p.apply_f(i), b), (p.apply_e(i), c)]
}

pub fn apply<S: Scalar>(op: &OperatorSpec, v: &PatternVector<S>) -> Result<PatternVector<S>, BrauerError> {
    let mut out = PatternVector::new(v.n);
    for (p, s) in v.iter() {
        for (q, c) in basis_image(op, p)? {
            out.add_to(q, s.scale(&c));
        }
    }
    Ok(out)
}

/// Applies `ops` right to left, as in an operator product.
pub fn apply_product<S: Scalar>(ops: &[OperatorSpec], v: &PatternVector<S>) -> Result<PatternVector<S>, BrauerError> {
    let mut cur = v.clone();
    for op in ops.iter().rev() {
        cur = apply(op, &cur)?;
    }
    Ok(cur)
}

/// The factors of `T′_n`, leftmost first.
///
/// The displayed double product `Π_{i=1}^{n} Π_{j=1}^{n} Ř_{i+2j−2}(z_{2j−1}, z_{2i+2j−2})`
/// (leftmost factor acting last) followed by the rotation `ρ^n`. The rotation
/// completes the product so that the result commutes with relabeling: the
/// bare product maps `Ψ(z_{n+1}, …, z_{2n}, z_1, …, z_n)` to `Ψ(z)`, and `ρ^n`
/// supplies that shift of arguments.
pub fn tprime_factors(n: usize, z: &RationalPoint) -> Vec<OperatorSpec> {
    let m = 2 * n;
    let wrap = |k: usize| (k - 1) % m + 1;
    let mut ops = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let site = wrap(i + 2 * j - 2);
            let a = wrap(2 * j - 1);
            let b = wrap(2 * i + 2 * j - 2);
            ops.push(OperatorSpec::Rcheck(site, z[a - 1].clone(), z[b - 1].clone()));
        }
    }
    ops.extend(std::iter::repeat(OperatorSpec::Rotate).take(n));
    ops
}

pub fn tprime_apply<S: Scalar>(
    n: usize,
    z: &RationalPoint,
    v: &PatternVector<S>,
) -> Result<PatternVector<S>, BrauerError> {
    apply_product(&tprime_factors(n, z), v)
}

/// The all-ones form `v_n`.
pub fn v_form(_: &LinkPattern) -> Rational {
    Rational::one()
}

/// The indicator form `b_n` of permutation patterns.
pub fn b_form(p: &LinkPattern) -> Rational {
    if p.is_permutation_pattern() {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// Pullback of a linear form under an operator, as a pattern-indexed table.
pub fn pullback<F: Fn(&LinkPattern) -> Rational>(
    n: usize,
    op: &OperatorSpec,
    form: F,
) -> Result<BTreeMap<LinkPattern, Rational>, BrauerError> {
    let mut out = BTreeMap::new();
    for p in LinkPattern::enumerate(n) {
        let image = apply(op, &PatternVector::basis(&p, Rational::one()))?;
        out.insert(p, image.pair(&form));
    }
    Ok(out)
}

/// `b_n Ř_i(z, w) = [(1 + (w−z)/2)(1 + z − w)] / [(1 − (w−z)/2)(1 + w − z)] b_n` for `i ≠ n, 2n`.
pub fn check_bn_relation(n: usize, i: usize, z: &Rational, w: &Rational) -> Result<CheckReport, BrauerError> {
    let mut r = CheckReport::new(
        "bn-pullback",
        n,
        json!({"i": i, "z": z.to_string(), "w": w.to_string()}),
    );
    let one = Rational::one();
    let u = w - z;
    let scalar = (&one + &u / int(2)) * (&one - &u) / ((&one - &u / int(2)) * (&one + &u));
    let pulled = pullback(n, &OperatorSpec::Rcheck(i, z.clone(), w.clone()), b_form)?;
    for (p, value) in pulled {
        let expected = &scalar * b_form(&p);
        r.expect(value == expected, || format!("pattern {p}: {value} vs {expected}"));
    }
    Ok(r)
}

/// `v_n Ř_i(z, w) = v_n`.
pub fn check_vn_invariance(n: usize, i: usize, z: &Rational, w: &Rational) -> Result<CheckReport, BrauerError> {
    let mut r = CheckReport::new(
        "vn-invariance",
        n,
        json!({"i": i, "z": z.to_string(), "w": w.to_string()}),
    );
    for (p, value) in pullback(n, &OperatorSpec::Rcheck(i, z.clone(), w.clone()), v_form)? {
        r.expect(value.is_one(), || format!("pattern {p}: column sum {value}"));
    }
    Ok(r)
}

fn basis_equal(n: usize, lhs: &[OperatorSpec], rhs: &[OperatorSpec]) -> Option<LinkPattern> {
    for p in LinkPattern::enumerate(n) {
        let v = PatternVector::basis(&p, Rational::one());
        let a = apply_product(lhs, &v).expect("no normalization in relation check");
        let b = apply_product(rhs, &v).expect("no normalization in relation check");
        if a != b {
            return Some(p);
        }
    }
    None
}

/// Yang–Baxter at every site and unitarity of `X_i(u)`.
pub fn check_yang_baxter(n: usize, u: &Rational, v: &Rational) -> CheckReport {
    use OperatorSpec::X;
    let mut r = CheckReport::new(
        "yang-baxter-unitarity",
        n,
        json!({"u": u.to_string(), "v": v.to_string()}),
    );
    let m = 2 * n;
    let uv = u + v;
    for i in 1..=m {
        let j = i % m + 1;
        let lhs = [X(i, u.clone()), X(j, uv.clone()), X(i, v.clone())];
        let rhs = [X(j, v.clone()), X(i, uv.clone()), X(j, u.clone())];
        if let Some(p) = basis_equal(n, &lhs, &rhs) {
            r.fail(format!("Yang-Baxter at site {i}, pattern {p}"));
        }
        let one = Rational::one();
        let u2 = u * u;
        let scalar = (&one - &u2) * (&one - &u2 / int(4));
        for p in LinkPattern::enumerate(n) {
            let b = PatternVector::basis(&p, Rational::one());
            let got = apply_product(&[X(i, u.clone()), X(i, -u.clone())], &b).unwrap();
            let want = b.scale(&scalar);
            r.expect(got == want, || format!("unitarity at site {i}, pattern {p}"));
        }
    }
    r
}

/// `Ř_i(w, z) Ř_i(z, w) = I` on every basis pattern.
pub fn check_rcheck_unitarity(n: usize, i: usize, z: &Rational, w: &Rational) -> Result<CheckReport, BrauerError> {
    use OperatorSpec::Rcheck;
    let mut r = CheckReport::new(
        "rcheck-unitarity",
        n,
        json!({"i": i, "z": z.to_string(), "w": w.to_string()}),
    );
    let ops = [Rcheck(i, w.clone(), z.clone()), Rcheck(i, z.clone(), w.clone())];
    for p in LinkPattern::enumerate(n) {
        let b = PatternVector::basis(&p, Rational::one());
        r.expect(apply_product(&ops, &b)? == b, || format!("pattern {p}"));
    }
    Ok(r)
}

/// The defining relations of the Brauer algebra, on every pattern and site.
pub fn check_brauer_relations(n: usize) -> CheckReport {
    use OperatorSpec::{E, F};
    let mut r = CheckReport::new("brauer-relations", n, json!({}));
    let m = 2 * n;
    let cyc = |i: usize, d: usize| (i + d - 1) % m + 1;
    let mut relations: Vec<(String, Vec<OperatorSpec>, Vec<OperatorSpec>)> = Vec::new();
    for i in 1..=m {
        relations.push((format!("e{i}^2=e{i}"), vec![E(i), E(i)], vec![E(i)]));
        relations.push((format!("f{i}^2=1"), vec![F(i), F(i)], vec![]));
        relations.push((format!("f{i}e{i}=e{i}"), vec![F(i), E(i)], vec![E(i)]));
        relations.push((format!("e{i}f{i}=e{i}"), vec![E(i), F(i)], vec![E(i)]));
        if m > 2 {
            let j = cyc(i, 1);
            relations.push((format!("e{i}e{j}e{i}=e{i}"), vec![E(i), E(j), E(i)], vec![E(i)]));
            relations.push((format!("e{j}e{i}e{j}=e{j}"), vec![E(j), E(i), E(j)], vec![E(j)]));
            relations.push((
                format!("f{i}f{j}f{i}=f{j}f{i}f{j}"),
                vec![F(i), F(j), F(i)],
                vec![F(j), F(i), F(j)],
            ));
        }
        for d in 2..m.saturating_sub(1) {
            let j = cyc(i, d);
            relations.push((format!("[e{i},e{j}]"), vec![E(i), E(j)], vec![E(j), E(i)]));
            relations.push((format!("[e{i},f{j}]"), vec![E(i), F(j)], vec![F(j), E(i)]));
            relations.push((format!("[f{i},f{j}]"), vec![F(i), F(j)], vec![F(j), F(i)]));
        }
    }
    for (name, lhs, rhs) in relations {
        if let Some(p) = basis_equal(n, &lhs, &rhs) {
            r.fail(format!("{name} on {p}"));
        }
    }
    r
}

/// Checks that every matrix entry of `T′_n(z)` is nonnegative.
pub fn check_positive_cone(n: usize, z: &RationalPoint) -> Result<CheckReport, BrauerError> {
    let mut r = CheckReport::new(
        "tprime-positive-cone",
        n,
        json!({"z": z.values().iter().map(|x| x.to_string()).collect::<Vec<_>>()}),
    );
    for p in LinkPattern::enumerate(n) {
        let image = tprime_apply(n, z, &PatternVector::basis(&p, Rational::one()))?;
        for (q, c) in image.iter() {
            r.expect(!c.is_negative(), || format!("entry ({q}, {p}) = {c}"));
        }
    }
    Ok(r)
}

/// A point with `z_odd = 0` and `z_even` in `(0, 1)`, where every factor of `T′_n` is entrywise positive.
pub fn positive_point(n: usize, seed: u64) -> RationalPoint {
    RationalPoint::new(
        (1..=2 * n)
            .map(|k| {
                if k % 2 == 1 {
                    Rational::zero()
                } else {
                    rat(1 + ((seed + k as u64) % 7) as i64, 9)
                }
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> LinkPattern {
        LinkPattern::parse(s).unwrap()
    }

    #[test]
    fn x_normalization_and_face_limit() {
        let p = LinkPattern::pi0(2);
        let b = PatternVector::basis(&p, Rational::one());
        assert_eq!(apply(&OperatorSpec::X(1, int(0)), &b).unwrap(), b);
        assert_eq!(
            apply(&OperatorSpec::X(1, int(1)), &b).unwrap(),
            PatternVector::basis(&p.apply_e(1), Rational::one())
        );
    }

    #[test]
    fn singular_normalization() {
        let b = PatternVector::basis(&LinkPattern::pi0(2), Rational::one());
        assert!(apply(&OperatorSpec::Rcheck(1, int(0), int(2)), &b).is_err());
        assert!(apply(&OperatorSpec::Rcheck(1, int(0), int(-1)), &b).is_err());
    }

    #[test]
    fn relations_hold_for_small_sizes() {
        for n in 2..=3 {
            assert!(check_brauer_relations(n).pass);
        }
        assert!(check_yang_baxter(2, &rat(1, 3), &rat(1, 5)).pass);
        assert!(check_yang_baxter(2, &int(0), &rat(2, 7)).pass);
    }

    #[test]
    fn rcheck_unitarity_and_forms() {
        let (z, w) = (rat(1, 2), rat(1, 5));
        assert!(check_rcheck_unitarity(2, 1, &z, &w).unwrap().pass);
        assert!(check_bn_relation(2, 1, &z, &w).unwrap().pass);
        assert!(check_bn_relation(3, 4, &z, &w).unwrap().pass);
        assert!(check_bn_relation(2, 1, &z, &z).unwrap().pass);
        for i in 1..=4 {
            assert!(check_vn_invariance(2, i, &rat(1, 3), &rat(-2, 7)).unwrap().pass);
        }
    }

    #[test]
    fn tprime_size_one_is_identity() {
        let z = RationalPoint::from_fractions(&[(1, 3), (1, 5)]);
        let b = PatternVector::basis(&pat("(1 2)"), Rational::one());
        assert_eq!(tprime_apply(1, &z, &b).unwrap(), b);
    }

    #[test]
    fn tprime_positivity() {
        for seed in 0..3 {
            assert!(check_positive_cone(2, &positive_point(2, seed)).unwrap().pass);
        }
    }
}
