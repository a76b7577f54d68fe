//! Hand-transcribed reference tables shipped with the crate, and diffs against them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::json;

use crate::degrees::ab_vars;
use crate::groundstate::{delta_apply, psi_pi0, theta_apply, GroundState};
use crate::linkpat::{LinkPattern, ThetaWord};
use crate::poly::{Poly, Vars};
use crate::report::CheckReport;

#[derive(Debug, Deserialize)]
pub struct Psi2 {
    pub description: String,
    pub n: usize,
    pub entries: Vec<Psi2Entry>,
}

#[derive(Debug, Deserialize)]
pub struct Psi2Entry {
    pub pattern: String,
    pub value: String,
}

#[derive(Debug, Deserialize)]
pub struct Words3 {
    pub description: String,
    pub n: usize,
    /// Operator products, rightmost acting first.
    pub words: Vec<Vec<usize>>,
    pub corrections: Vec<Correction>,
    pub identities: Vec<DeltaIdentity>,
}

#[derive(Debug, Deserialize)]
pub struct Correction {
    pub listed: Vec<usize>,
    pub used: Vec<usize>,
    pub reason: String,
}

/// `Ψ_target = (Δ_site Θ_operand − Σ Θ_subtract) Ψ_{π_0}`.
#[derive(Debug, Deserialize)]
pub struct DeltaIdentity {
    pub description: String,
    pub target: Vec<usize>,
    pub delta_site: usize,
    pub delta_operand: Vec<usize>,
    pub subtract: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
pub struct Bidegrees3 {
    pub description: String,
    pub n: usize,
    pub entries: Vec<WordValue>,
}

#[derive(Debug, Deserialize)]
pub struct WordValue {
    pub word: Vec<usize>,
    pub value: String,
}

#[derive(Debug, Deserialize)]
pub struct Bidegrees4 {
    pub description: String,
    pub n: usize,
    pub entries: Vec<CrossingClass>,
}

#[derive(Debug, Deserialize)]
pub struct CrossingClass {
    pub crossings: usize,
    pub multiplicity: usize,
    pub value: String,
}

#[derive(Debug, Deserialize)]
pub struct Numbers {
    pub description: String,
    pub values: Vec<String>,
}

#[derive(Debug, Deserialize)]
pub struct Refined {
    pub description: String,
    pub entries: Vec<RefinedEntry>,
}

#[derive(Debug, Deserialize)]
pub struct RefinedEntry {
    pub n: usize,
    pub value: String,
}

fn parse<T: for<'de> Deserialize<'de>>(src: &str, name: &str) -> T {
    serde_json::from_str(src).unwrap_or_else(|e| panic!("fixture {name} is malformed: {e}"))
}

pub fn psi2() -> Psi2 {
    parse(include_str!("../fixtures/psi2.json"), "psi2")
}

pub fn words3() -> Words3 {
    parse(include_str!("../fixtures/words3.json"), "words3")
}

pub fn bidegrees3() -> Bidegrees3 {
    parse(include_str!("../fixtures/bidegrees3.json"), "bidegrees3")
}

pub fn bidegrees4() -> Bidegrees4 {
    parse(include_str!("../fixtures/bidegrees4.json"), "bidegrees4")
}

pub fn numbers() -> Numbers {
    parse(include_str!("../fixtures/numbers.json"), "numbers")
}

pub fn refined() -> Refined {
    parse(include_str!("../fixtures/refined.json"), "refined")
}

fn ab(s: &str) -> Poly {
    Poly::parse(s, &ab_vars()).unwrap_or_else(|e| panic!("fixture value {s:?}: {e}"))
}

/// The size-2 entries in canonical text form, keyed by pattern.
pub fn psi2_canonical() -> BTreeMap<String, String> {
    let vars = Vars::z(4);
    psi2()
        .entries
        .iter()
        .map(|e| {
            let p = Poly::parse(&e.value, &vars).unwrap_or_else(|err| panic!("fixture value {:?}: {err}", e.value));
            let pattern = LinkPattern::parse(&e.pattern).unwrap_or_else(|err| panic!("fixture pattern {:?}: {err}", e.pattern));
            (pattern.to_string(), p.to_string())
        })
        .collect()
}

/// Compares canonical entry strings, as written by `gen`, with the size-2 table.
pub fn check_psi2(generated: &BTreeMap<String, String>) -> CheckReport {
    let mut r = CheckReport::new("fixture-psi2", 2, json!({}));
    let expected = psi2_canonical();
    r.expect(generated.len() == expected.len(), || {
        format!("{} entries, expected {}", generated.len(), expected.len())
    });
    for (p, s) in &expected {
        match generated.get(p) {
            Some(g) => r.expect(g == s, || format!("{p}: {g} vs {s}")),
            None => r.fail(format!("{p} missing")),
        }
    }
    r
}

/// `Θ_{w_1} ⋯ Θ_{w_k} Ψ_{π_0}` for a word in display order.
pub fn apply_word(display: &[usize], n: usize) -> Result<Poly, String> {
    let mut f = psi_pi0(n);
    for &i in display.iter().rev() {
        f = theta_apply(&f, i, n).map_err(|e| format!("Θ_{i}: {e}"))?;
    }
    Ok(f)
}

/// Every listed word reaches a distinct pattern, together all of them, and
/// the product of `Θ` operators along it gives the built entry. The `Δ`
/// identities are checked on the same entries.
pub fn check_words3(gs: &GroundState) -> CheckReport {
    let fx = words3();
    let n = fx.n;
    let mut r = CheckReport::new("fixture-words3", n, json!({"words": fx.words.len()}));
    if gs.n != n {
        r.fail(format!("ground state has size {}", gs.n));
        return r;
    }
    let mut reached = BTreeMap::new();
    for w in &fx.words {
        let word = ThetaWord::from_display_order(w);
        let p = match word.replay(n) {
            Ok(p) => p,
            Err(e) => {
                r.fail(format!("{w:?}: {e}"));
                continue;
            }
        };
        if let Some(prev) = reached.insert(p.clone(), w.clone()) {
            r.fail(format!("{w:?} and {prev:?} both reach {p}"));
        }
        match apply_word(w, n) {
            Ok(f) => r.expect(f == *gs.entry(&p), || format!("{w:?} disagrees with the entry of {p}")),
            Err(e) => r.fail(format!("{w:?}: {e}")),
        }
    }
    r.expect(reached.len() == gs.entries.len(), || {
        format!("{} patterns reached of {}", reached.len(), gs.entries.len())
    });
    for c in &fx.corrections {
        let listed = ThetaWord::from_display_order(&c.listed).replay(n);
        let used = ThetaWord::from_display_order(&c.used).replay(n);
        r.expect(listed.is_ok() && used.is_ok() && listed != used, || {
            format!("correction {:?} -> {:?} is not a change of pattern", c.listed, c.used)
        });
    }
    for id in &fx.identities {
        let target = ThetaWord::from_display_order(&id.target).replay(n);
        let operand = apply_word(&id.delta_operand, n);
        let (Ok(target), Ok(operand)) = (target, operand) else {
            r.fail(format!("identity for {:?} cannot be evaluated", id.target));
            continue;
        };
        let mut lhs = delta_apply(&operand, id.delta_site, n);
        for w in &id.subtract {
            match apply_word(w, n) {
                Ok(f) => lhs = &lhs - &f,
                Err(e) => r.fail(format!("{w:?}: {e}")),
            }
        }
        r.expect(lhs == *gs.entry(&target), || format!("identity for {:?}", id.target));
    }
    r
}

/// Size-3 bidegrees against the table keyed by word; `route` names the computation.
pub fn check_bidegrees3(table: &BTreeMap<LinkPattern, Poly>, route: &str) -> CheckReport {
    let fx = bidegrees3();
    let mut r = CheckReport::new("fixture-bidegrees3", fx.n, json!({"route": route}));
    r.expect(table.len() == fx.entries.len(), || format!("{} bidegrees, expected {}", table.len(), fx.entries.len()));
    for e in &fx.entries {
        let p = match ThetaWord::from_display_order(&e.word).replay(fx.n) {
            Ok(p) => p,
            Err(err) => {
                r.fail(format!("{:?}: {err}", e.word));
                continue;
            }
        };
        let expected = ab(&e.value);
        match table.get(&p) {
            Some(d) => r.expect(*d == expected, || format!("{p}: {d} vs {expected}")),
            None => r.fail(format!("{p} missing")),
        }
    }
    r
}

/// Size-4 bidegrees as multisets within each crossing class.
pub fn check_bidegrees4(table: &BTreeMap<LinkPattern, Poly>, route: &str) -> CheckReport {
    let fx = bidegrees4();
    let mut r = CheckReport::new("fixture-bidegrees4", fx.n, json!({"route": route}));
    let mut expected: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for e in &fx.entries {
        let v = ab(&e.value).to_string();
        expected.entry(e.crossings).or_default().extend(std::iter::repeat(v).take(e.multiplicity));
    }
    let mut actual: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (p, d) in table {
        actual.entry(p.crossings()).or_default().push(d.to_string());
    }
    for v in expected.values_mut().chain(actual.values_mut()) {
        v.sort();
    }
    let total: usize = expected.values().map(Vec::len).sum();
    r.expect(total == table.len(), || format!("{} bidegrees, expected {total}", table.len()));
    for (c, want) in &expected {
        let got = actual.get(c).cloned().unwrap_or_default();
        r.expect(got == *want, || format!("crossing class {c} differs"));
    }
    r
}

pub fn check_numbers(values: &[BigInt]) -> CheckReport {
    let fx = numbers();
    let mut r = CheckReport::new("fixture-numbers", values.len(), json!({}));
    for (k, (v, e)) in values.iter().zip(&fx.values).enumerate() {
        r.expect(v.to_string() == *e, || format!("n={}: {v} vs {e}", k + 1));
    }
    r
}

/// `P_n(t)` against the table; sizes not listed there are skipped.
pub fn check_refined(n: usize, p: &Poly) -> CheckReport {
    let mut r = CheckReport::new("fixture-refined", n, json!({}));
    match refined().entries.iter().find(|e| e.n == n) {
        Some(e) => {
            let tv = Vars::new(&["t"]);
            let expected = Poly::parse(&e.value, &tv).expect("fixture value parses");
            r.expect(*p == expected, || format!("{p} vs {expected}"));
        }
        None => r.fail(format!("no reference value at n={n}")),
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        assert_eq!(psi2().entries.len(), 3);
        assert_eq!(words3().words.len(), 15);
        assert_eq!(bidegrees3().entries.len(), 6);
        let b4 = bidegrees4();
        assert_eq!(b4.entries.iter().map(|e| e.multiplicity).sum::<usize>(), 24);
        assert_eq!(numbers().values.len(), 6);
        assert_eq!(refined().entries.len(), 4);
    }

    #[test]
    fn size_four_values_are_homogeneous_of_degree_twelve() {
        for e in bidegrees4().entries {
            let d = ab(&e.value);
            assert!(d.is_homogeneous());
            assert_eq!(d.total_degree(), Some(12));
        }
    }
}
