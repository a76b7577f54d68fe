//! Permutation-sector specializations of the ground state.
//!
//! For `π ∈ P_n` the entry factors as
//! `Ψ_π = Π_{i<j≤n}(1+z_i−z_j) · Π_{n<k<l}(1+z_k−z_l) · δ_π(p, q)` with
//! `p_i = z_{n+1−i}` and `q_i = z_{n+i}`. The family `δ_π` obeys its own
//! divided-difference recursion, which is the cheap route to `n = 4`.
//! Specializations of `δ_π` give the bidegrees `d_π(A, B)`, the polynomials
//! `s_π(t)`, and the refined polynomials `P_n(t)`.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::groundstate::{a_factor, GroundState};
use crate::linkpat::{LinkPattern, PatternError, PermHat};
use crate::pointwise::{fit_polynomial, ground_state_at, PointwiseError};
use crate::poly::{int, DdConvention, Mobius, Monomial, Poly, PolyError, Rational, Vars};
use crate::report::CheckReport;

#[derive(Debug, Error)]
pub enum DegreeError {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("exact division failed for {pattern}: {source}")]
    NotDivisible { pattern: String, source: PolyError },
    #[error("{pattern} reached along p-swap {k} disagrees with its tree value")]
    Inconsistent { pattern: String, k: usize },
    #[error("denominator left after clearing: {0}")]
    DenominatorResidue(String),
    #[error(transparent)]
    Pointwise(#[from] PointwiseError),
}

/// Variables `p_1..p_n, q_1..q_n`.
pub fn pq_vars(n: usize) -> Vars {
    let names: Vec<String> = (1..=n)
        .map(|i| format!("p{i}"))
        .chain((1..=n).map(|i| format!("q{i}")))
        .collect();
    Vars::new(&names)
}

/// Variables `t_1..t_n`.
pub fn t_vars(n: usize) -> Vars {
    Vars::indexed("t", n)
}

pub fn ab_vars() -> Vars {
    Vars::new(&["A", "B"])
}

fn p_slot(i: usize) -> usize {
    i - 1
}

fn q_slot(n: usize, i: usize) -> usize {
    n + i - 1
}

/// `c + x_a − x_b` on 0-based slots.
fn lin(vars: &Vars, c: i64, a: usize, b: usize) -> Poly {
    Poly::shifted_difference(vars, c, a, b)
}

/// The link-pattern site moved when `p_k` and `p_{k+1}` are exchanged.
pub fn site_of_p_swap(k: usize, n: usize) -> usize {
    n - k
}

/// `δ_{π_0} = Π_{i+j<n+1}(1+p_i−q_j) · Π_{i+j>n+1}(1+q_i−p_j)`.
pub fn delta_pi0(n: usize) -> Poly {
    let vars = pq_vars(n);
    let mut out = Poly::one(&vars);
    for i in 1..=n {
        for j in 1..=n {
            if i + j < n + 1 {
                out = &out * &lin(&vars, 1, p_slot(i), q_slot(n, j));
            } else if i + j > n + 1 {
                out = &out * &lin(&vars, 1, q_slot(n, i), p_slot(j));
            }
        }
    }
    out
}

/// `(2∂_k − τ_k) F` in the `p` variables, with `∂_k = (τ_k − 1)/(p_{k+1} − p_k)`.
pub fn delta_step(f: &Poly, k: usize) -> Poly {
    let (a, b) = (p_slot(k), p_slot(k + 1));
    &f.divided_difference(a, b, DdConvention::Classical).scale(&int(2)) - &f.swap_vars(a, b)
}

/// `((1+t_k)(1+t_{k+1})∂_k − τ_k) F`.
pub fn theta_t(f: &Poly, k: usize) -> Poly {
    let vars = f.vars();
    let (a, b) = (k - 1, k);
    let weight = &Poly::affine(vars, int(1), &[(a, int(1))]) * &Poly::affine(vars, int(1), &[(b, int(1))]);
    &(&weight * &f.divided_difference(a, b, DdConvention::Classical)) - &f.swap_vars(a, b)
}

/// `δ_π` obtained from the full entry by exact division and renaming.
pub fn delta_from_psi(gs: &GroundState, pattern: &LinkPattern) -> Result<Poly, DegreeError> {
    if !pattern.is_permutation_pattern() {
        return Err(PatternError::NotPermutationPattern(pattern.to_string()).into());
    }
    let n = gs.n;
    let mut f = gs.entry(pattern).clone();
    for half in [0, n] {
        for i in 1..=n {
            for j in i + 1..=n {
                f = f
                    .exact_div_linear(&a_factor(&gs.vars, half + i, half + j))
                    .map_err(|source| DegreeError::NotDivisible {
                        pattern: pattern.to_string(),
                        source,
                    })?;
            }
        }
    }
    // z_a (0-based a < n) is p_{n−a}; z_a with a ≥ n is q_{a−n+1}.
    let target: Vec<usize> = (0..2 * n).map(|a| if a < n { n - a - 1 } else { a }).collect();
    Ok(f.rename(&target, &pq_vars(n)))
}

/// A family of polynomials indexed by the permutation patterns of size `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Family {
    pub n: usize,
    pub vars: Vars,
    pub entries: BTreeMap<LinkPattern, Poly>,
}

impl Family {
    pub fn get(&self, p: &LinkPattern) -> &Poly {
        &self.entries[p]
    }

    pub fn sum(&self) -> Poly {
        self.entries.values().fold(Poly::zero(&self.vars), |acc, f| &acc + f)
    }
}

/// Breadth-first construction over `f`-moves on sites `1..n-1`, then a
/// check of every edge (tree and non-tree) against `step`.
fn recursive_family<F>(n: usize, vars: Vars, base: Poly, step: F) -> Result<Family, DegreeError>
where
    F: Fn(&Poly, usize) -> Poly + Sync,
{
    let root = LinkPattern::pi0(n);
    let mut entries = BTreeMap::new();
    entries.insert(root.clone(), base);
    let mut queue = VecDeque::from([root]);
    while let Some(p) = queue.pop_front() {
        for k in 1..n {
            let q = p.apply_f(site_of_p_swap(k, n));
            if !entries.contains_key(&q) {
                let f = step(&entries[&p], k);
                entries.insert(q.clone(), f);
                queue.push_back(q);
            }
        }
    }
    let edges: Vec<(&LinkPattern, usize)> = entries.keys().flat_map(|p| (1..n).map(move |k| (p, k))).collect();
    let bad = edges.par_iter().find_any(|(p, k)| {
        let q = p.apply_f(site_of_p_swap(*k, n));
        step(&entries[*p], *k) != entries[&q]
    });
    if let Some((p, k)) = bad {
        return Err(DegreeError::Inconsistent {
            pattern: p.to_string(),
            k: *k,
        });
    }
    Ok(Family { n, vars, entries })
}

/// All `δ_π` from `δ_{π_0}` by `δ_{f·π} = (2∂_k − τ_k) δ_π`.
pub fn build_delta_recursive(n: usize) -> Result<Family, DegreeError> {
    recursive_family(n, pq_vars(n), delta_pi0(n), delta_step)
}

/// All `δ_π` by division of the full entries.
pub fn delta_family_from_psi(gs: &GroundState) -> Result<Family, DegreeError> {
    let mut entries = BTreeMap::new();
    for p in gs.entries.keys().filter(|p| p.is_permutation_pattern()) {
        entries.insert(p.clone(), delta_from_psi(gs, p)?);
    }
    Ok(Family {
        n: gs.n,
        vars: pq_vars(gs.n),
        entries,
    })
}

/// `Π_{i<j}(2+p_i−p_j)(2−q_i+q_j)`.
pub fn delta_sum_formula(n: usize) -> Poly {
    let vars = pq_vars(n);
    let mut out = Poly::one(&vars);
    for i in 1..=n {
        for j in i + 1..=n {
            out = &out * &lin(&vars, 2, p_slot(i), p_slot(j));
            out = &out * &lin(&vars, 2, q_slot(n, j), q_slot(n, i));
        }
    }
    out
}

/// `(−1)^{c(π)} Π_{i, j≠π̂(i)} (p_i − q_j)`.
pub fn delta_top_formula(p: &LinkPattern) -> Result<Poly, PatternError> {
    let n = p.n();
    let hat = p.perm_hat()?;
    let vars = pq_vars(n);
    let mut out = Poly::one(&vars);
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != hat.perm[i - 1]) {
            out = &out * &lin(&vars, 0, p_slot(i), q_slot(n, j));
        }
    }
    Ok(if p.crossings() % 2 == 1 { -out } else { out })
}

pub fn check_delta_sum(fam: &Family) -> CheckReport {
    let mut r = CheckReport::new("multidegree-sum", fam.n, json!({}));
    r.expect(fam.sum() == delta_sum_formula(fam.n), || "sum differs from the product formula".into());
    r
}

/// Integer coefficients, total degree `n(n−1)`, and the top-degree terms.
pub fn check_delta_shape(fam: &Family) -> CheckReport {
    let n = fam.n;
    let deg = (n * (n - 1)) as u32;
    let mut r = CheckReport::new("multidegree-shape", n, json!({}));
    for (p, f) in &fam.entries {
        r.expect(f.is_integral(), || format!("{p}: non-integral coefficient"));
        r.expect(f.total_degree() == Some(deg), || format!("{p}: degree {:?}", f.total_degree()));
        let top = delta_top_formula(p).unwrap();
        r.expect(f.top_component() == top, || format!("{p}: top-degree terms"));
    }
    r
}

/// `(2∂_k − τ_k)² = 1` and `δ_{f·π} + δ_π = (2 + p_k − p_{k+1}) ∂_k δ_π` on every entry.
pub fn check_delta_operators(fam: &Family) -> CheckReport {
    let n = fam.n;
    let mut r = CheckReport::new("multidegree-operators", n, json!({}));
    for (p, f) in &fam.entries {
        for k in 1..n {
            r.expect(delta_step(&delta_step(f, k), k) == *f, || format!("{p}: square of step {k}"));
            let q = p.apply_f(site_of_p_swap(k, n));
            let lhs = fam.get(&q) + f;
            let rhs = &lin(&fam.vars, 2, p_slot(k), p_slot(k + 1))
                * &f.divided_difference(p_slot(k), p_slot(k + 1), DdConvention::Classical);
            r.expect(lhs == rhs, || format!("{p}: split form at {k}"));
        }
    }
    r
}

fn longest(n: usize) -> PermHat {
    PermHat::new((1..=n).rev().collect()).unwrap()
}

fn compose(a: &PermHat, b: &PermHat) -> PermHat {
    PermHat::new(b.perm.iter().map(|&i| a.perm[i - 1]).collect()).unwrap()
}

/// The three reflection symmetries and the block factorization.
///
/// `smaller` must hold the families of every size below `fam.n`.
pub fn verify_delta_symmetries(fam: &Family, smaller: &BTreeMap<usize, Family>) -> CheckReport {
    let n = fam.n;
    let mut r = CheckReport::new("multidegree-symmetries", n, json!({}));
    let w0 = longest(n);
    // (a): p_i ↦ q_{n+1−i}, q_i ↦ p_{n+1−i}.
    let map_a: Vec<(usize, bool)> = (1..=n)
        .map(|i| (q_slot(n, n + 1 - i), false))
        .chain((1..=n).map(|i| (p_slot(n + 1 - i), false)))
        .collect();
    // (b): p_i ↦ −q_i, q_i ↦ −p_i.
    let map_b: Vec<(usize, bool)> = (1..=n)
        .map(|i| (q_slot(n, i), true))
        .chain((1..=n).map(|i| (p_slot(i), true)))
        .collect();
    // (c): p_i ↦ −p_{n+1−i}, q_i ↦ −q_{n+1−i}.
    let map_c: Vec<(usize, bool)> = (1..=n)
        .map(|i| (p_slot(n + 1 - i), true))
        .chain((1..=n).map(|i| (q_slot(n, n + 1 - i), true)))
        .collect();
    for (p, f) in &fam.entries {
        let hat = p.perm_hat().unwrap();
        let images = [
            ("a", compose(&compose(&w0, &hat.inverse()), &w0), &map_a),
            ("b", hat.inverse(), &map_b),
            ("c", compose(&compose(&w0, &hat), &w0), &map_c),
        ];
        for (label, image, map) in images {
            let other = fam.get(&LinkPattern::from_perm_hat(&image));
            r.expect(other.signed_rename(map, &fam.vars) == *f, || format!("({label}) at {p}"));
        }
        let mut rotated = p.clone();
        for _ in 0..n {
            rotated = rotated.rotate();
        }
        r.expect(
            rotated == LinkPattern::from_perm_hat(&compose(&compose(&w0, &hat.inverse()), &w0)),
            || format!("half-turn of {p}"),
        );
        r.expect(
            p.reflect() == LinkPattern::from_perm_hat(&hat.inverse()),
            || format!("reflection of {p}"),
        );
        for split in 1..n {
            if (1..=split).all(|i| p.partner(i) > n && p.partner(i) <= n + split) {
                r.expect(
                    *f == factorized_delta(p, split, &fam.vars, smaller),
                    || format!("block factorization of {p} at {split}"),
                );
            }
        }
    }
    r
}

fn restrict(p: &LinkPattern, sites: &[usize]) -> LinkPattern {
    let pos = |s: usize| sites.iter().position(|&x| x == s).unwrap() + 1;
    let chords: Vec<_> = p
        .chords()
        .into_iter()
        .filter(|(a, _)| sites.contains(a))
        .map(|(a, b)| (pos(a), pos(b)))
        .collect();
    LinkPattern::from_chords(sites.len() / 2, &chords).unwrap()
}

fn factorized_delta(p: &LinkPattern, r: usize, vars: &Vars, smaller: &BTreeMap<usize, Family>) -> Poly {
    let n = p.n();
    let mut out = Poly::one(vars);
    for i in 1..=n - r {
        for j in 1..=r {
            out = &out * &lin(vars, 1, p_slot(i), q_slot(n, j));
        }
    }
    for i in r + 1..=n {
        for j in n - r + 1..=n {
            out = &out * &lin(vars, 1, q_slot(n, i), p_slot(j));
        }
    }
    let block1: Vec<usize> = (1..=r).chain(n + 1..=n + r).collect();
    let block2: Vec<usize> = (r + 1..=n).chain(n + r + 1..=2 * n).collect();
    // δ_{π1}(p_{n−r+1..n}, q_{1..r}) and δ_{π2}(p_{1..n−r}, q_{r+1..n}).
    let t1: Vec<usize> = (1..=r).map(|a| p_slot(n - r + a)).chain((1..=r).map(|a| q_slot(n, a))).collect();
    let m = n - r;
    let t2: Vec<usize> = (1..=m).map(p_slot).chain((1..=m).map(|a| q_slot(n, r + a))).collect();
    let d1 = smaller[&r].get(&restrict(p, &block1)).rename(&t1, vars);
    let d2 = smaller[&m].get(&restrict(p, &block2)).rename(&t2, vars);
    &(&out * &d1) * &d2
}

/// Repeatedly divides by the affine form `ell`, or multiplies when `times` is negative.
fn adjust_power(f: Poly, ell: &Poly, times: i64) -> Result<Poly, DegreeError> {
    if times >= 0 {
        return Ok(&f * &ell.pow(times as u32));
    }
    let mut f = f;
    for _ in 0..(-times) {
        f = f
            .exact_div_linear(ell)
            .map_err(|e| DegreeError::DenominatorResidue(format!("{ell} does not divide: {e}")))?;
    }
    Ok(f)
}

fn integral_or_residue(f: Poly) -> Result<Poly, DegreeError> {
    if f.is_integral() {
        Ok(f)
    } else {
        Err(DegreeError::DenominatorResidue(format!("non-integral coefficients in {f}")))
    }
}

fn two_power(e: usize) -> Rational {
    Rational::from_integer(BigInt::one() << e)
}

/// `d_π(A, B) = ((A+B)/2)^{n(n−1)} δ_π` at `p_i = A/(A+B)`, `q_i = B/(A+B)`.
///
/// This orientation puts `A` on the sites `1..n`. It is the one under which
/// `B^{n(n−1)} s_π(A/B, …)` reproduces `d_π`; the opposite assignment gives
/// `d_π(B, A)`.
pub fn bidegree(delta: &Poly, n: usize) -> Result<Poly, DegreeError> {
    let ab = ab_vars();
    let a = Poly::var(&ab, 0);
    let b = Poly::var(&ab, 1);
    let subs: Vec<(usize, Poly)> = (1..=n)
        .map(|i| (p_slot(i), a.clone()))
        .chain((1..=n).map(|i| (q_slot(n, i), b.clone())))
        .collect();
    let (num, e) = delta.substitute_common_denominator(&subs, &(&a + &b), &ab);
    let deg = n * (n - 1);
    let f = adjust_power(num, &(&a + &b), deg as i64 - e as i64)?;
    integral_or_residue(f.scale(&two_power(deg).recip()))
}

pub fn bidegree_table(fam: &Family) -> Result<BTreeMap<LinkPattern, Poly>, DegreeError> {
    fam.entries.iter().map(|(p, d)| Ok((p.clone(), bidegree(d, fam.n)?))).collect()
}

/// Bidegrees are homogeneous of degree `n(n−1)` and sum to `(A+B)^{n(n−1)}`.
pub fn check_bidegrees(n: usize, table: &BTreeMap<LinkPattern, Poly>) -> CheckReport {
    let mut r = CheckReport::new("bidegree-sum", n, json!({}));
    let ab = ab_vars();
    let deg = (n * (n - 1)) as u32;
    let mut sum = Poly::zero(&ab);
    for (p, d) in table {
        r.expect(d.is_homogeneous() && d.total_degree() == Some(deg), || format!("{p}: not homogeneous"));
        sum += d;
    }
    let expected = (&Poly::var(&ab, 0) + &Poly::var(&ab, 1)).pow(deg);
    r.expect(sum == expected, || "sum differs from (A+B)^{n(n-1)}".into());
    r
}

/// `s_{π_0} = Π t_i^{n−i}`.
pub fn s_pi0(n: usize) -> Poly {
    let vars = t_vars(n);
    let exps: Vec<u32> = (1..=n).map(|i| (n - i) as u32).collect();
    Poly::from_terms(&vars, [(Monomial::from_exponents(&exps), int(1))])
}

/// All `s_π` from `s_{π_0}` by the `θ_k` recursion.
pub fn schubert_family_recursive(n: usize) -> Result<Family, DegreeError> {
    recursive_family(n, t_vars(n), s_pi0(n), theta_t)
}

/// Substitutes `t_i ↦ (t_i − 1)/(t_i + 1)` for all `i` in a polynomial over `t_1..t_n`
/// and rescales so that every variable carries the factor `(1 + t_i)^{weight}`.
fn cayley_all(f: &Poly, n: usize, weight: u32) -> Result<Poly, DegreeError> {
    let vars = f.vars().clone();
    let mut out = f.clone();
    for i in 0..n {
        let (num, e) = out
            .substitute_linear_fraction(i, &Mobius::cayley(), i)
            .map_err(|e| DegreeError::DenominatorResidue(e.to_string()))?;
        let one_plus = Poly::affine(&vars, int(1), &[(i, int(1))]);
        out = adjust_power(num, &one_plus, weight as i64 - e as i64)?;
    }
    Ok(out)
}

/// `s_π = 2^{−n(n−1)} Π(1+t_i)^{n−1} δ_π(p_i = (t_i−1)/(t_i+1), q = 0)`.
pub fn schubert_from_delta(delta: &Poly, n: usize) -> Result<Poly, DegreeError> {
    let tv = t_vars(n);
    let mut f = delta.clone();
    for i in 1..=n {
        f = f.substitute_constant(q_slot(n, i), &Rational::zero());
    }
    let f = f.with_vars(&tv);
    let f = cayley_all(&f, n, (n - 1) as u32)?;
    integral_or_residue(f.scale(&two_power(n * (n - 1)).recip()))
}

/// `s_π` by direct specialization of the full entry:
/// `z_{n+1−i} = (t_i−1)/(t_i+1)`, `z_{n+i} = 0`, times
/// `2^{−n(n−1)} Π(1+t_i)^{2(n−1)} / Π_{i<j}(1 − t_i + 3t_j + t_i t_j)`.
pub fn schubert_from_psi(gs: &GroundState, pattern: &LinkPattern) -> Result<Poly, DegreeError> {
    if !pattern.is_permutation_pattern() {
        return Err(PatternError::NotPermutationPattern(pattern.to_string()).into());
    }
    let n = gs.n;
    let tv = t_vars(n);
    let mut f = gs.entry(pattern).clone();
    for i in 1..=n {
        f = f.substitute_constant(n + i - 1, &Rational::zero());
    }
    let target: Vec<usize> = (0..2 * n).map(|a| if a < n { n - a - 1 } else { a }).collect();
    let f = f.rename(&target, &tv).with_vars(&tv);
    let f = cayley_all(&f, n, 2 * (n - 1) as u32)?;
    let mut divisor = Poly::one(&tv);
    for i in 0..n {
        for j in i + 1..n {
            let ti = Poly::var(&tv, i);
            let tj = Poly::var(&tv, j);
            let q = &(&(&Poly::one(&tv) - &ti) + &tj.scale(&int(3))) + &(&ti * &tj);
            divisor = &divisor * &q;
        }
    }
    let f = f.exact_div(&divisor).map_err(|source| DegreeError::NotDivisible {
        pattern: pattern.to_string(),
        source,
    })?;
    integral_or_residue(f.scale(&two_power(n * (n - 1)).recip()))
}

/// `B^{n(n−1)} s_π(A/B, …, A/B)`.
pub fn bidegree_from_schubert(s: &Poly, n: usize) -> Result<Poly, DegreeError> {
    let ab = ab_vars();
    let deg = (n * (n - 1)) as u32;
    let mut out = Poly::zero(&ab);
    for (m, c) in s.terms() {
        let d = m.degree();
        if d > deg {
            return Err(DegreeError::DenominatorResidue(format!("term of degree {d} exceeds {deg}")));
        }
        out.add_term(Monomial::from_exponents(&[d, deg - d]), c);
    }
    Ok(out)
}

/// `Σ_π s_π = Π_{i<j}(1 + 2t_i + t_i t_j)`.
pub fn schubert_sum_formula(n: usize) -> Poly {
    let tv = t_vars(n);
    let mut out = Poly::one(&tv);
    for i in 0..n {
        for j in i + 1..n {
            let ti = Poly::var(&tv, i);
            let tj = Poly::var(&tv, j);
            let f = &(&Poly::one(&tv) + &ti.scale(&int(2))) + &(&ti * &tj);
            out = &out * &f;
        }
    }
    out
}

/// The Schubert polynomial `𝔖_w` in `t_1..t_n` by the classical recursion
/// `𝔖_{w s_i} = ∂_i 𝔖_w` for `w(i) > w(i+1)`, starting at `𝔖_{w_0} = Π t_i^{n−i}`.
pub fn schubert_polynomial(w: &PermHat) -> Poly {
    let n = w.n();
    let mut perm = w.perm.clone();
    let mut ops = Vec::new();
    // Climb to w_0 by right multiplication with ascents, recording the steps.
    while let Some(i) = (0..n.saturating_sub(1)).find(|&i| perm[i] < perm[i + 1]) {
        perm.swap(i, i + 1);
        ops.push(i);
    }
    let mut f = s_pi0(n);
    for &i in ops.iter().rev() {
        f = f.divided_difference(i, i + 1, DdConvention::Classical);
    }
    f
}

/// Lowest-degree terms of `s_π` against the Schubert polynomial of `π̂`.
pub fn check_schubert_lowest(fam: &Family) -> CheckReport {
    let mut r = CheckReport::new("schubert-lowest-terms", fam.n, json!({}));
    for (p, s) in &fam.entries {
        let w = p.perm_hat().unwrap();
        r.expect(s.bottom_component() == schubert_polynomial(&w), || format!("{p}"));
    }
    r
}

pub fn check_schubert_sum(fam: &Family) -> CheckReport {
    let mut r = CheckReport::new("schubert-sum", fam.n, json!({}));
    r.expect(fam.sum() == schubert_sum_formula(fam.n), || "sum differs from the product formula".into());
    r
}

/// Observation: every coefficient of every `s_π` is nonnegative.
pub fn observe_schubert_positivity(fam: &Family) -> CheckReport {
    let mut r = CheckReport::new("schubert-positivity", fam.n, json!({})).conjecture();
    for (p, s) in &fam.entries {
        r.expect(s.has_nonnegative_coefficients(), || format!("{p}"));
    }
    r
}

/// Substitutes `x_k = 0` for every slot `k` not in `keep`.
fn keep_only(f: &Poly, keep: &[usize]) -> Poly {
    let vars = f.vars().clone();
    let terms = f.terms().filter(|(m, _)| {
        m.exponents()
            .iter()
            .enumerate()
            .all(|(k, &e)| e == 0 || keep.contains(&k))
    });
    Poly::from_terms(&vars, terms.map(|(m, c)| (m.clone(), c)))
}

/// Entry `Ψ_π` at `z_1 = (t−1)/(t+1)`, other `z_i = 0`, times `((1+t)/2)^{2(n−1)}`.
pub fn refined_entry(f: &Poly, n: usize) -> Result<Poly, DegreeError> {
    let tv = Vars::new(&["t"]);
    let g = keep_only(f, &[0]).rename(&[0], &tv).with_vars(&tv);
    let g = cayley_all(&g, 1, 2 * (n - 1) as u32)?;
    integral_or_residue(g.scale(&two_power(2 * (n - 1)).recip()))
}

/// Entry `Ψ_π` at `z_1 = (t−1)/(t+1)`, `z_{n+1} = (u−1)/(u+1)`, other `z_i = 0`,
/// times `4 ((1+t)/2)^{2(n−1)} ((1+u)/2)^{2(n−1)}`.
///
/// The extra factor 4 is the smallest power of two giving integer
/// coefficients for every entry at `n = 2, 3`; it is omitted at `n = 1`.
pub fn doubly_refined_entry(f: &Poly, n: usize) -> Result<Poly, DegreeError> {
    let tu = Vars::new(&["t", "u"]);
    let mut target = vec![0; 2 * n];
    target[n] = 1;
    let g = keep_only(f, &[0, n]).rename(&target, &tu).with_vars(&tu);
    let g = cayley_all(&g, 2, 2 * (n - 1) as u32)?;
    integral_or_residue(g.scale(&two_power((4 * (n - 1)).saturating_sub(2)).recip()))
}

pub fn refined_entries(gs: &GroundState) -> Result<BTreeMap<LinkPattern, Poly>, DegreeError> {
    gs.entries.iter().map(|(p, f)| Ok((p.clone(), refined_entry(f, gs.n)?))).collect()
}

pub fn doubly_refined_entries(gs: &GroundState) -> Result<BTreeMap<LinkPattern, Poly>, DegreeError> {
    gs.entries.iter().map(|(p, f)| Ok((p.clone(), doubly_refined_entry(f, gs.n)?))).collect()
}

/// `P_n(t)`, the sum of all refined entries.
pub fn refined_poly(gs: &GroundState) -> Result<Poly, DegreeError> {
    let tv = Vars::new(&["t"]);
    Ok(refined_entries(gs)?.values().fold(Poly::zero(&tv), |acc, f| &acc + f))
}

/// `P_n(t)` from pointwise ground states at `t = 2, 3, …`, without the symbolic build.
///
/// `P_n` has degree at most `2(n−1)`; two samples beyond that confirm the fit.
pub fn refined_poly_pointwise(n: usize) -> Result<Poly, DegreeError> {
    let degree = 2 * (n - 1);
    let one = Rational::one();
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 2..degree as i64 + 5 {
        let t = int(k);
        let mut z = vec![Rational::zero(); 2 * n];
        z[0] = (&t - &one) / (&t + &one);
        let psi = ground_state_at(n, &crate::poly::RationalPoint::new(z))?;
        let total: Rational = psi.iter().map(|(_, c)| c.clone()).sum();
        let norm = num_traits::pow((&one + &t) * &half, degree);
        xs.push(t);
        ys.push(total * norm);
    }
    let coeffs = fit_polynomial(&xs, &ys, degree).ok_or(PointwiseError::Interpolation(degree))?;
    let tv = Vars::new(&["t"]);
    let p = Poly::from_terms(
        &tv,
        coeffs.into_iter().enumerate().map(|(e, c)| (Monomial::var(0, e as u32), c)),
    );
    integral_or_residue(p)
}

/// Observation: refined and doubly refined entries have nonnegative coefficients.
pub fn observe_refined_positivity(gs: &GroundState) -> Result<CheckReport, DegreeError> {
    let mut r = CheckReport::new("refined-positivity", gs.n, json!({})).conjecture();
    for (p, f) in refined_entries(gs)? {
        r.expect(f.has_nonnegative_coefficients(), || format!("{p} (t)"));
    }
    for (p, f) in doubly_refined_entries(gs)? {
        r.expect(f.has_nonnegative_coefficients(), || format!("{p} (t, u)"));
    }
    Ok(r)
}

/// The exponent `2n(n−1) − (n−2) − (n mod 2)` of the global `(A+B)` factor.
pub fn global_ab_exponent(n: usize) -> i64 {
    2 * (n * (n - 1)) as i64 - (n as i64 - 2) - (n % 2) as i64
}

/// Entry at `z_i = A/(A+B)` (`i ≤ n`), `z_i = B/(A+B)` (`i > n`), times
/// `(A+B)^{global_ab_exponent(n)} 2^{−n(n−1)}`.
pub fn ab_normalized_entry(f: &Poly, n: usize) -> Result<Poly, DegreeError> {
    let ab = ab_vars();
    let a = Poly::var(&ab, 0);
    let b = Poly::var(&ab, 1);
    let subs: Vec<(usize, Poly)> = (0..2 * n).map(|k| (k, if k < n { a.clone() } else { b.clone() })).collect();
    let (num, e) = f.substitute_common_denominator(&subs, &(&a + &b), &ab);
    let g = adjust_power(num, &(&a + &b), global_ab_exponent(n) - e as i64)?;
    Ok(g.scale(&two_power(n * (n - 1)).recip()))
}

/// Observation: the global normalization gives homogeneous polynomials with
/// nonnegative integer coefficients for every entry.
pub fn observe_ab_normalization(gs: &GroundState) -> CheckReport {
    let n = gs.n;
    let mut r = CheckReport::new("global-ab-normalization", n, json!({"exponent": global_ab_exponent(n)})).conjecture();
    for (p, f) in &gs.entries {
        match ab_normalized_entry(f, n) {
            Ok(g) => r.expect(
                g.is_integral() && g.is_homogeneous() && g.has_nonnegative_coefficients(),
                || format!("{p}: {g}"),
            ),
            Err(e) => r.fail(format!("{p}: {e}")),
        }
    }
    r
}

/// Everything checkable on the `δ` and `s` families of size `n` without the full build.
pub fn verify_families(
    n: usize,
    deltas: &BTreeMap<usize, Family>,
    schuberts: &Family,
) -> Result<Vec<CheckReport>, DegreeError> {
    let fam = &deltas[&n];
    let mut checks = vec![
        check_delta_sum(fam),
        check_delta_shape(fam),
        check_delta_operators(fam),
        verify_delta_symmetries(fam, deltas),
    ];
    let table = bidegree_table(fam)?;
    checks.push(check_bidegrees(n, &table));
    let mut r = CheckReport::new("schubert-routes", n, json!({}));
    for (p, d) in &fam.entries {
        let direct = schubert_from_delta(d, n)?;
        r.expect(direct == *schuberts.get(p), || format!("{p}: specialization vs recursion"));
        let from_s = bidegree_from_schubert(schuberts.get(p), n)?;
        r.expect(from_s == table[p], || format!("{p}: bidegree from s"));
    }
    checks.push(r);
    checks.push(check_schubert_sum(schuberts));
    checks.push(check_schubert_lowest(schuberts));
    checks.push(observe_schubert_positivity(schuberts));
    Ok(checks)
}

/// Homogeneous value of a bidegree, `d_π(1, 1)`.
pub fn bidegree_at_one(d: &Poly) -> BigInt {
    let v = d.terms().fold(Rational::zero(), |acc, (_, c)| acc + c);
    v.to_integer()
}
