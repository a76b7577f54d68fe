//! Sum rules for the entries of `Ψ_n`, the size recursion, and the
//! homogeneous integer sequence with its lattice-path interpretation.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::groundstate::{a_factor, GroundState};
use crate::linkpat::LinkPattern;
use crate::pointwise::{ground_state_at, PointwiseError};
use crate::points::{generic_points, rng, small_rational};
use crate::poly::{int, Poly, Rational, RationalPoint};
use crate::report::CheckReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SumRuleError {
    #[error("point {0:?} makes z_i − z_j vanish or equal ±1")]
    SingularPoint(Vec<String>),
}

/// An even-dimensional skew-symmetric matrix stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix {
    dim: usize,
    a: Vec<Vec<Rational>>,
}

impl SkewMatrix {
    pub fn zero(dim: usize) -> Self {
        assert!(dim % 2 == 0, "skew matrix of odd dimension {dim}");
        SkewMatrix {
            dim,
            a: vec![vec![Rational::zero(); dim]; dim],
        }
    }

    /// Builds the matrix from its strict upper triangle `upper(i, j)`, `i < j`.
    pub fn from_upper<F: Fn(usize, usize) -> Rational>(dim: usize, upper: F) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            for j in i + 1..dim {
                m.set(i, j, upper(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets `a[i][j] = v` and `a[j][i] = −v`.
    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(i != j, "diagonal entries of a skew matrix are zero");
        self.a[j][i] = -v.clone();
        self.a[i][j] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.a[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.a
    }
}

/// Pfaffian by skew elimination: pivot on `a[0][1]`, recurse on the Schur complement.
pub fn pfaffian(m: &SkewMatrix) -> Rational {
    let mut a = m.a.clone();
    let mut result = Rational::one();
    while !a.is_empty() {
        let d = a.len();
        let Some(j) = (1..d).find(|&j| !a[0][j].is_zero()) else {
            return Rational::zero();
        };
        if j != 1 {
            a.swap(1, j);
            for row in a.iter_mut() {
                row.swap(1, j);
            }
            result = -result;
        }
        let p = a[0][1].clone();
        result *= &p;
        let mut next = vec![vec![Rational::zero(); d - 2]; d - 2];
        for i in 2..d {
            for k in i + 1..d {
                let v = &a[i][k] + (&a[1][i] * &a[0][k] - &a[0][i] * &a[1][k]) / &p;
                next[i - 2][k - 2] = v.clone();
                next[k - 2][i - 2] = -v;
            }
        }
        a = next;
    }
    result
}

/// Pfaffian as the signed sum over perfect matchings, with sign `(−1)^{crossings}`.
pub fn pfaffian_by_matchings(m: &SkewMatrix) -> Rational {
    if m.dim == 0 {
        return Rational::one();
    }
    LinkPattern::enumerate(m.dim / 2)
        .iter()
        .map(|p| {
            let mut t = Rational::one();
            for (a, b) in p.chords() {
                t *= &m.a[a - 1][b - 1];
            }
            if p.crossings() % 2 == 1 {
                -t
            } else {
                t
            }
        })
        .sum()
}

/// Exact determinant by Gaussian elimination over the rationals.
pub fn determinant(rows: &[Vec<Rational>]) -> Rational {
    let d = rows.len();
    let mut a = rows.to_vec();
    let mut det = Rational::one();
    for c in 0..d {
        let Some(r) = (c..d).find(|&r| !a[r][c].is_zero()) else {
            return Rational::zero();
        };
        if r != c {
            a.swap(r, c);
            det = -det;
        }
        let p = a[c][c].clone();
        det *= &p;
        for r in c + 1..d {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &p;
            for k in c..d {
                let v = &f * &a[c][k];
                a[r][k] -= v;
            }
        }
    }
    det
}

/// `Π_{1≤i<j≤n}(1+z_i−z_j)(2−z_i+z_j) · Π_{n<k<l≤2n}(1+z_k−z_l)(2−z_k+z_l)`.
pub fn permutation_sum_formula(n: usize) -> Poly {
    let vars = crate::poly::Vars::z(2 * n);
    let mut out = Poly::one(&vars);
    for half in [0, n] {
        for i in 1..=n {
            for j in i + 1..=n {
                let (a, b) = (half + i - 1, half + j - 1);
                out = &out * &Poly::shifted_difference(&vars, 1, a, b);
                out = &out * &Poly::shifted_difference(&vars, 2, b, a);
            }
        }
    }
    out
}

/// The sum of permutation-sector entries against its product formula.
pub fn perm_sum_check(gs: &GroundState) -> CheckReport {
    let mut r = CheckReport::new("permutation-sum", gs.n, json!({}));
    let lhs = gs.permutation_sum();
    r.expect(lhs == permutation_sum_formula(gs.n), || "sum differs from the product formula".into());
    r
}

fn differences(pt: &RationalPoint) -> Result<Vec<Vec<Rational>>, SumRuleError> {
    let m = pt.len();
    let one = Rational::one();
    let mut x = vec![vec![Rational::zero(); m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let d = &pt[i] - &pt[j];
            if d.is_zero() || d.abs() == one {
                return Err(SumRuleError::SingularPoint(pt.values().iter().map(|v| v.to_string()).collect()));
            }
            x[i][j] = d;
        }
    }
    Ok(x)
}

/// `Pf[(z_i−z_j)/(1−(z_i−z_j)²)] · Π_{i<j}(1−(z_i−z_j)²)/(z_i−z_j)` at a point.
pub fn pfaffian_total(pt: &RationalPoint) -> Result<Rational, SumRuleError> {
    let x = differences(pt)?;
    let m = pt.len();
    let one = Rational::one();
    let kernel = SkewMatrix::from_upper(m, |i, j| &x[i][j] / (&one - &x[i][j] * &x[i][j]));
    let mut out = pfaffian(&kernel);
    for i in 0..m {
        for j in i + 1..m {
            out *= (&one - &x[i][j] * &x[i][j]) / &x[i][j];
        }
    }
    Ok(out)
}

/// `Σ_m (−1)^{c(m)} Π_{{i,j} ∉ m, i<j} (1−(z_i−z_j)²)/(z_i−z_j)` at a point.
pub fn matching_total(pt: &RationalPoint) -> Result<Rational, SumRuleError> {
    let x = differences(pt)?;
    let m = pt.len();
    let one = Rational::one();
    let weight = |i: usize, j: usize| (&one - &x[i][j] * &x[i][j]) / &x[i][j];
    Ok(LinkPattern::enumerate(m / 2)
        .par_iter()
        .map(|p| {
            let mut t = Rational::one();
            for i in 1..=m {
                for j in i + 1..=m {
                    if p.partner(i) != j {
                        t *= weight(i - 1, j - 1);
                    }
                }
            }
            if p.crossings() % 2 == 1 {
                -t
            } else {
                t
            }
        })
        .reduce(Rational::zero, |a, b| a + b))
}

/// Points for certifying the Pfaffian sum rule.
///
/// For every variable, a sweep of `2n(n−1)+1` distinct values of that
/// coordinate with the others held at a random base point; then `random`
/// generic points. All coordinates lie in `(−1/2, 1/2)`.
pub fn sum_rule_points(n: usize, random: usize, seed: u64) -> Vec<RationalPoint> {
    let m = 2 * n;
    let count = 2 * n * (n - 1) + 1;
    let mut out = Vec::new();
    let bases = generic_points(m, m, seed);
    for (k, base) in bases.iter().enumerate() {
        for s in 0..count {
            let v = rat_frac(-1, 2) + Rational::new(BigInt::from(s + 1), BigInt::from(count + 1)) + rat_frac(1, 1009);
            let mut values = base.values().to_vec();
            values[k] = v;
            out.push(RationalPoint::new(values));
        }
    }
    out.extend(generic_points(m, random, seed.wrapping_add(1)));
    out
}

fn rat_frac(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

/// Sum of all entries against the Pfaffian formula and its matching
/// expansion, plus invariance of the sum under adjacent coordinate swaps.
pub fn full_sum_check(gs: &GroundState, points: &[RationalPoint]) -> Result<CheckReport, SumRuleError> {
    let n = gs.n;
    let mut r = CheckReport::new("pfaffian-sum", n, json!({"points": points.len()}));
    let total = gs.total();
    let results: Vec<Result<Option<String>, SumRuleError>> = points
        .par_iter()
        .map(|pt| {
            let z = total.evaluate(pt);
            let pf = pfaffian_total(pt)?;
            if z != pf {
                return Ok(Some(format!("Pfaffian side {pf} vs sum {z}")));
            }
            let mt = matching_total(pt)?;
            if mt != pf {
                return Ok(Some(format!("matching expansion {mt} vs Pfaffian side {pf}")));
            }
            for i in 0..2 * n - 1 {
                if total.evaluate(&pt.swapped(i, i + 1)) != z {
                    return Ok(Some(format!("sum not symmetric under z_{} <-> z_{}", i + 1, i + 2)));
                }
            }
            Ok(None)
        })
        .collect();
    for res in results {
        if let Some(w) = res? {
            r.fail(w);
        }
    }
    Ok(r)
}

/// `Π_{1≤i<j≤n}(1+z_i−z_j)(2−z_i+z_j) · Π_{n<k<l≤2n}(1+z_k−z_l)(2−z_k+z_l)` at a point.
pub fn permutation_sum_at(n: usize, pt: &RationalPoint) -> Rational {
    let mut out = Rational::one();
    for half in [0, n] {
        for i in half..half + n {
            for j in i + 1..half + n {
                let d = &pt[i] - &pt[j];
                out *= (int(1) + &d) * (int(2) - &d);
            }
        }
    }
    out
}

/// Both sum rules against ground states computed pointwise from `T′`, so
/// that sizes beyond the symbolic build are covered.
pub fn pointwise_sum_check(n: usize, points: &[RationalPoint]) -> Result<CheckReport, PointwiseError> {
    let mut r = CheckReport::new("pointwise-sums", n, json!({"points": points.len()}));
    let results: Vec<Result<Option<String>, PointwiseError>> = points
        .par_iter()
        .map(|pt| {
            let psi = ground_state_at(n, pt)?;
            let perm: Rational = psi.iter().filter(|(p, _)| p.is_permutation_pattern()).map(|(_, c)| c.clone()).sum();
            let expected = permutation_sum_at(n, pt);
            if perm != expected {
                return Ok(Some(format!("permutation sum {perm} vs {expected}")));
            }
            let total: Rational = psi.iter().map(|(_, c)| c.clone()).sum();
            match pfaffian_total(pt) {
                Ok(pf) if pf != total => Ok(Some(format!("Pfaffian side {pf} vs sum {total}"))),
                Ok(_) => Ok(None),
                Err(e) => Ok(Some(e.to_string())),
            }
        })
        .collect();
    for res in results {
        if let Some(w) = res? {
            r.fail(w);
        }
    }
    Ok(r)
}

/// Removes the arch starting at site `i`, relabeling the remaining sites in cyclic order from `i+2`.
fn remove_arch(p: &LinkPattern, i: usize) -> (LinkPattern, Vec<usize>) {
    let m = p.size();
    let mut kept: Vec<usize> = (1..=m).filter(|&s| s != i && s != p.next_site(i)).collect();
    kept.sort();
    let pos = |s: usize| kept.iter().position(|&x| x == s).unwrap() + 1;
    let chords: Vec<_> = p
        .chords()
        .into_iter()
        .filter(|&(a, _)| a != i && a != p.next_site(i))
        .map(|(a, b)| (pos(a), pos(b)))
        .collect();
    (LinkPattern::from_chords(m / 2 - 1, &chords).unwrap(), kept)
}

/// At `z_{i+1} = z_i + 1`: entries without the arch `(i, i+1)` vanish, the
/// others reduce to a product times the entry of size `n−1` with the arch removed.
pub fn recursion_check(gs: &GroundState, prev: &GroundState, i: usize) -> CheckReport {
    let n = gs.n;
    let m = 2 * n;
    let mut r = CheckReport::new("size-recursion", n, json!({"site": i}));
    let vars = &gs.vars;
    let j = i % m + 1;
    let shifted = Poly::affine(vars, int(1), &[(i - 1, int(1))]);
    let mut prefactor = Poly::one(vars);
    for k in (1..=m).filter(|&k| k != i && k != j) {
        prefactor = &prefactor * &a_factor(vars, j, k);
        prefactor = &prefactor * &a_factor(vars, k, i);
    }
    let prefactor = prefactor.compose(j - 1, &shifted);
    for (p, f) in &gs.entries {
        let restricted = f.compose(j - 1, &shifted);
        if !p.has_arch(i) {
            r.expect(restricted.is_zero(), || format!("{p} does not vanish"));
            continue;
        }
        let (smaller, kept) = remove_arch(p, i);
        let target: Vec<usize> = kept.iter().map(|s| s - 1).collect();
        let expected = &prefactor * &prev.entry(&smaller).rename(&target, vars);
        r.expect(restricted == expected, || format!("{p} against {smaller}"));
    }
    r
}

/// `det[C(2i+2j+1, 2i)]_{0≤i,j<n}`.
pub fn homogeneous_by_determinant(n: usize) -> BigInt {
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Rational::from_integer(binomial(BigInt::from(2 * i + 2 * j + 1), BigInt::from(2 * i))))
                .collect()
        })
        .collect();
    let d = determinant(&rows);
    assert!(d.is_integer());
    d.to_integer()
}

/// `(−1)^n Pf[(−1)^j C(i+j, i) [i+j odd]]_{0≤i,j<2n}`.
pub fn homogeneous_by_pfaffian(n: usize) -> BigInt {
    let m = SkewMatrix::from_upper(2 * n, |i, j| {
        if (i + j) % 2 == 0 {
            return Rational::zero();
        }
        let c = binomial(BigInt::from(i + j), BigInt::from(i));
        Rational::from_integer(if j % 2 == 1 { -c } else { c })
    });
    let pf = pfaffian(&m);
    assert!(pf.is_integer());
    let v = pf.to_integer();
    if n % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Both closed forms of the homogeneous sum; panics if they disagree.
pub fn homogeneous_number(n: usize) -> BigInt {
    let det = homogeneous_by_determinant(n);
    assert_eq!(det, homogeneous_by_pfaffian(n), "determinant and Pfaffian forms disagree at n={n}");
    det
}

/// Counts `n`-tuples of vertex-disjoint lattice paths, path `k` running from
/// `(2k, 0)` to `(0, 2k+1)` with unit steps left or up.
///
/// Plain depth-first enumeration; cost grows like the product of the
/// single-path counts, so it is meant for `n ≤ 4`.
pub fn lgv_count(n: usize) -> u64 {
    if n == 0 {
        return 1;
    }
    let w = 2 * n - 1;
    let h = 2 * n;
    let used = vec![vec![false; h]; w];
    // The first path is chosen in parallel; the rest by sequential search.
    let firsts = all_paths(n - 1);
    firsts
        .par_iter()
        .map(|path| {
            let mut used = used.clone();
            if path.iter().any(|&(x, y)| std::mem::replace(&mut used[x][y], true)) {
                return 0;
            }
            count_rest(n - 1, &mut used)
        })
        .sum()
}

fn all_paths(k: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(x: usize, y: usize, ty: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        cur.push((x, y));
        if x == 0 && y == ty {
            out.push(cur.clone());
        } else {
            if x > 0 {
                rec(x - 1, y, ty, cur, out);
            }
            if y < ty {
                rec(x, y + 1, ty, cur, out);
            }
        }
        cur.pop();
    }
    let mut out = Vec::new();
    rec(2 * k, 0, 2 * k + 1, &mut Vec::new(), &mut out);
    out
}

/// Number of ways to add disjoint paths `0..k` given the occupied vertices.
fn count_rest(k: usize, used: &mut [Vec<bool>]) -> u64 {
    if k == 0 {
        return 1;
    }
    let k = k - 1;
    walk(2 * k, 0, k, used)
}

fn walk(x: usize, y: usize, k: usize, used: &mut [Vec<bool>]) -> u64 {
    if used[x][y] {
        return 0;
    }
    used[x][y] = true;
    let total = if x == 0 && y == 2 * k + 1 {
        count_rest(k, used)
    } else {
        let mut t = 0;
        if x > 0 {
            t += walk(x - 1, y, k, used);
        }
        if y < 2 * k + 1 {
            t += walk(x, y + 1, k, used);
        }
        t
    };
    used[x][y] = false;
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticRow {
    pub n: usize,
    pub value: String,
    /// `ln Z_n(0) / (2n²)`, to be compared with `ln(π/2)`.
    pub rate: f64,
}

/// Growth of the homogeneous numbers against `(π/2)^{2n²}`; informational.
pub fn asymptotic_report(n_max: usize) -> Vec<AsymptoticRow> {
    (1..=n_max)
        .map(|n| {
            let v = homogeneous_by_determinant(n);
            let rate = ln_bigint(&v) / (2.0 * (n * n) as f64);
            AsymptoticRow {
                n,
                value: v.to_string(),
                rate,
            }
        })
        .collect()
}

pub fn limit_rate() -> f64 {
    (std::f64::consts::PI / 2.0).ln()
}

fn ln_bigint(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return v.to_f64().unwrap().ln();
    }
    let shift = bits - 60;
    (v >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// A random skew matrix with small rational entries, for cross-checks.
pub fn random_skew(dim: usize, seed: u64) -> SkewMatrix {
    let mut g = rng(seed);
    let mut m = SkewMatrix::zero(dim);
    for i in 0..dim {
        for j in i + 1..dim {
            m.set(i, j, small_rational(&mut g));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn small_pfaffians() {
        let m = SkewMatrix::from_upper(2, |_, _| rat(3, 4));
        assert_eq!(pfaffian(&m), rat(3, 4));
        let v = [[0, 2, 3, 5], [0, 0, 7, 11], [0, 0, 0, 13]];
        let m = SkewMatrix::from_upper(4, |i, j| int(v[i][j]));
        assert_eq!(pfaffian(&m), int(2 * 13 - 3 * 11 + 5 * 7));
        assert_eq!(pfaffian_by_matchings(&m), pfaffian(&m));
    }

    #[test]
    fn pivoting_on_zero_entry() {
        let mut m = SkewMatrix::zero(4);
        m.set(0, 2, int(1));
        m.set(1, 3, int(1));
        assert_eq!(pfaffian(&m), int(-1));
        assert_eq!(pfaffian_by_matchings(&m), int(-1));
    }

    #[test]
    fn random_pfaffian_squares_to_determinant() {
        for seed in 0..5 {
            let m = random_skew(6, seed);
            let pf = pfaffian(&m);
            assert_eq!(&pf * &pf, determinant(m.rows()));
            assert_eq!(pf, pfaffian_by_matchings(&m));
        }
    }

    #[test]
    fn homogeneous_sequence() {
        let expected = [1u64, 7, 307, 82977, 137460201, 1392263902567];
        for (k, &e) in expected.iter().enumerate() {
            assert_eq!(homogeneous_number(k + 1), BigInt::from(e));
        }
    }

    #[test]
    fn lattice_paths_small() {
        assert_eq!(lgv_count(1), 1);
        assert_eq!(lgv_count(2), 7);
        assert_eq!(lgv_count(3), 307);
    }

    #[test]
    fn pfaffian_total_at_size_one_is_one() {
        let pt = RationalPoint::from_fractions(&[(1, 3), (-1, 5)]);
        assert_eq!(pfaffian_total(&pt).unwrap(), int(1));
        assert!(pfaffian_total(&RationalPoint::from_fractions(&[(0, 1), (1, 1)])).is_err());
    }

    #[test]
    fn factored_permutation_sum() {
        let pt = RationalPoint::from_fractions(&[(1, 3), (-1, 5), (2, 7), (0, 1), (1, 9), (-3, 11)]);
        assert_eq!(permutation_sum_at(3, &pt), permutation_sum_formula(3).evaluate(&pt));
        assert!(pointwise_sum_check(2, &generic_points(4, 3, 2)).unwrap().pass);
    }

    #[test]
    fn asymptotics_rows() {
        assert!(asymptotic_report(0).is_empty());
        let rows = asymptotic_report(6);
        assert_eq!(rows[5].value, "1392263902567");
        assert!(rows[5].rate > 0.0 && limit_rate() > 0.0);
    }
}
