//! Crossing link patterns: fixed-point-free involutions of `{1, ..., 2n}`.
//!
//! Sites are 1-based everywhere in the public API and cyclic, so site `2n`
//! is adjacent to site `1`. Internally the partner table is 0-based.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("invalid link pattern: {0}")]
    Invalid(String),
    #[error("pattern {0} has a chord inside one half, so it is not a permutation pattern")]
    NotPermutationPattern(String),
    #[error("site {site} out of range 1..={max}")]
    SiteOutOfRange { site: usize, max: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkPattern {
    partner: Vec<u8>,
}

impl LinkPattern {
    /// Builds a pattern from a 1-based partner table.
    pub fn from_partners(partner: &[usize]) -> Result<Self, PatternError> {
        let len = partner.len();
        if len == 0 || len % 2 != 0 || len > 254 {
            return Err(PatternError::Invalid(format!("length {len} is not a positive even number")));
        }
        for (i, &p) in partner.iter().enumerate() {
            if p < 1 || p > len {
                return Err(PatternError::Invalid(format!("partner {p} of site {} out of range", i + 1)));
            }
            if p == i + 1 {
                return Err(PatternError::Invalid(format!("site {p} is a fixed point")));
            }
            if partner[p - 1] != i + 1 {
                return Err(PatternError::Invalid(format!("partner table is not an involution at site {}", i + 1)));
            }
        }
        Ok(LinkPattern {
            partner: partner.iter().map(|&p| (p - 1) as u8).collect(),
        })
    }

    /// Builds a pattern of size `2n` from 1-based chords.
    pub fn from_chords(n: usize, chords: &[(usize, usize)]) -> Result<Self, PatternError> {
        let mut partner = vec![0usize; 2 * n];
        for &(a, b) in chords {
            for s in [a, b] {
                if s < 1 || s > 2 * n {
                    return Err(PatternError::SiteOutOfRange { site: s, max: 2 * n });
                }
                if partner[s - 1] != 0 {
                    return Err(PatternError::Invalid(format!("site {s} used twice")));
                }
            }
            partner[a - 1] = b;
            partner[b - 1] = a;
        }
        if partner.contains(&0) {
            return Err(PatternError::Invalid("not every site is matched".into()));
        }
        Self::from_partners(&partner)
    }

    /// Parses the canonical form `(1 4)(2 3)`.
    pub fn parse(s: &str) -> Result<Self, PatternError> {
        let mut chords = Vec::new();
        for group in s.split('(').map(str::trim).filter(|g| !g.is_empty()) {
            let inner = group
                .strip_suffix(')')
                .ok_or_else(|| PatternError::Invalid(format!("unbalanced group in `{s}`")))?;
            let nums: Vec<usize> = inner
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| PatternError::Invalid(format!("bad site `{t}`"))))
                .collect::<Result<_, _>>()?;
            if nums.len() != 2 {
                return Err(PatternError::Invalid(format!("chord `({inner})` needs two sites")));
            }
            chords.push((nums[0], nums[1]));
        }
        Self::from_chords(chords.len(), &chords)
    }

    /// The pattern `π_0` with `i ↔ i + n`.
    pub fn pi0(n: usize) -> Self {
        let chords: Vec<_> = (1..=n).map(|i| (i, i + n)).collect();
        Self::from_chords(n, &chords).unwrap()
    }

    /// All `(2n-1)!!` patterns, pairing the smallest unmatched site first.
    pub fn enumerate(n: usize) -> Vec<LinkPattern> {
        fn rec(partner: &mut Vec<u8>, out: &mut Vec<LinkPattern>) {
            let Some(a) = partner.iter().position(|&p| p == u8::MAX) else {
                out.push(LinkPattern { partner: partner.clone() });
                return;
            };
            for b in a + 1..partner.len() {
                if partner[b] == u8::MAX {
                    partner[a] = b as u8;
                    partner[b] = a as u8;
                    rec(partner, out);
                    partner[a] = u8::MAX;
                    partner[b] = u8::MAX;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut vec![u8::MAX; 2 * n], &mut out);
        out
    }

    pub fn n(&self) -> usize {
        self.partner.len() / 2
    }

    /// Number of sites, `2n`.
    pub fn size(&self) -> usize {
        self.partner.len()
    }

    /// 1-based partner of the 1-based site `i`.
    pub fn partner(&self, i: usize) -> usize {
        self.partner[i - 1] as usize + 1
    }

    pub fn partners(&self) -> Vec<usize> {
        self.partner.iter().map(|&p| p as usize + 1).collect()
    }

    /// Chords `(a, b)` with `a < b`, sorted by `a`.
    pub fn chords(&self) -> Vec<(usize, usize)> {
        (1..=self.size())
            .filter_map(|a| {
                let b = self.partner(a);
                (a < b).then_some((a, b))
            })
            .collect()
    }

    /// The cyclic successor of site `i`.
    pub fn next_site(&self, i: usize) -> usize {
        i % self.size() + 1
    }

    fn check_site(&self, i: usize) {
        assert!(
            (1..=self.size()).contains(&i),
            "site {i} out of range 1..={}",
            self.size()
        );
    }

    /// Whether the little arch `{i, i+1}` (cyclically) is a chord.
    pub fn has_arch(&self, i: usize) -> bool {
        self.check_site(i);
        self.partner(i) == self.next_site(i)
    }

    /// The Brauer generator `e_i`: join `i` with `i+1` and join their old partners.
    pub fn apply_e(&self, i: usize) -> LinkPattern {
        self.check_site(i);
        let j = self.next_site(i);
        if self.partner(i) == j {
            return self.clone();
        }
        let (a, b) = (self.partner(i), self.partner(j));
        let mut partner = self.partner.clone();
        partner[i - 1] = (j - 1) as u8;
        partner[j - 1] = (i - 1) as u8;
        partner[a - 1] = (b - 1) as u8;
        partner[b - 1] = (a - 1) as u8;
        LinkPattern { partner }
    }

    /// The Brauer generator `f_i`: conjugation by the transposition `(i, i+1)`.
    pub fn apply_f(&self, i: usize) -> LinkPattern {
        self.check_site(i);
        let j = self.next_site(i);
        let sigma = |x: usize| {
            if x == i {
                j
            } else if x == j {
                i
            } else {
                x
            }
        };
        self.relabel(sigma)
    }

    /// The pattern with chord `{σ(a), σ(b)}` for every chord `{a, b}`.
    pub fn relabel<F: Fn(usize) -> usize>(&self, sigma: F) -> LinkPattern {
        let mut partner = vec![0u8; self.size()];
        for a in 1..=self.size() {
            partner[sigma(a) - 1] = (sigma(self.partner(a)) - 1) as u8;
        }
        LinkPattern { partner }
    }

    /// Cyclic rotation `i → i + 1`.
    pub fn rotate(&self) -> LinkPattern {
        let m = self.size();
        self.relabel(|x| x % m + 1)
    }

    /// Reflection `i → 2n + 1 − i`.
    pub fn reflect(&self) -> LinkPattern {
        let m = self.size();
        self.relabel(|x| m + 1 - x)
    }

    /// Number of crossing chord pairs.
    pub fn crossings(&self) -> usize {
        let chords = self.chords();
        let mut c = 0;
        for (k, &(a, b)) in chords.iter().enumerate() {
            for &(x, y) in &chords[k + 1..] {
                if (a < x && x < b && b < y) || (x < a && a < y && y < b) {
                    c += 1;
                }
            }
        }
        c
    }

    /// Whether every chord joins `{1..n}` to `{n+1..2n}`.
    pub fn is_permutation_pattern(&self) -> bool {
        let n = self.n();
        (1..=n).all(|i| self.partner(i) > n)
    }

    /// `π̂` with `π(i) = π̂(n+1−i) + n`.
    pub fn perm_hat(&self) -> Result<PermHat, PatternError> {
        if !self.is_permutation_pattern() {
            return Err(PatternError::NotPermutationPattern(self.to_string()));
        }
        let n = self.n();
        Ok(PermHat {
            perm: (1..=n).map(|k| self.partner(n + 1 - k) - n).collect(),
        })
    }

    pub fn from_perm_hat(hat: &PermHat) -> LinkPattern {
        let n = hat.perm.len();
        let chords: Vec<_> = (1..=n).map(|i| (i, hat.perm[n - i] + n)).collect();
        LinkPattern::from_chords(n, &chords).unwrap()
    }

    /// Patterns `π'` with `e_i π' = π`, `π' ≠ π`.
    pub fn preimages_e(&self, i: usize) -> Vec<LinkPattern> {
        if !self.has_arch(i) {
            return Vec::new();
        }
        LinkPattern::enumerate(self.n())
            .into_iter()
            .filter(|p| p != self && p.apply_e(i) == *self)
            .collect()
    }

    /// Sites `i` for which the pattern has the little arch `{i, i+1}`.
    pub fn arches(&self) -> Vec<usize> {
        (1..=self.size()).filter(|&i| self.has_arch(i)).collect()
    }
}

impl fmt::Display for LinkPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in self.chords() {
            write!(f, "({a} {b})")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PatternRepr {
    n: usize,
    partner: Vec<usize>,
}

impl Serialize for LinkPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PatternRepr {
            n: self.n(),
            partner: self.partners(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinkPattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = PatternRepr::deserialize(deserializer)?;
        if repr.partner.len() != 2 * repr.n {
            return Err(D::Error::custom("partner length differs from 2n"));
        }
        LinkPattern::from_partners(&repr.partner).map_err(D::Error::custom)
    }
}

/// A permutation of `{1..n}`, stored 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PermHat {
    pub perm: Vec<usize>,
}

impl PermHat {
    pub fn new(perm: Vec<usize>) -> Result<Self, PatternError> {
        let n = perm.len();
        let mut seen = vec![false; n + 1];
        for &p in &perm {
            if p < 1 || p > n || seen[p] {
                return Err(PatternError::Invalid(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        Ok(PermHat { perm })
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn inverse(&self) -> PermHat {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p - 1] = i + 1;
        }
        PermHat { perm: inv }
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let p = &self.perm;
        (0..p.len())
            .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count()
    }
}

/// Sites of `f`-moves, in application order: the first index acts first on `π_0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThetaWord(pub Vec<usize>);

impl ThetaWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The same word written as an operator product, rightmost factor first.
    pub fn display_order(&self) -> Vec<usize> {
        self.0.iter().rev().copied().collect()
    }

    pub fn from_display_order(ops: &[usize]) -> Self {
        ThetaWord(ops.iter().rev().copied().collect())
    }

    /// Replays the `f`-moves on `π_0`, rejecting moves at a little arch.
    pub fn replay(&self, n: usize) -> Result<LinkPattern, PatternError> {
        let mut p = LinkPattern::pi0(n);
        for &i in &self.0 {
            if i < 1 || i > 2 * n {
                return Err(PatternError::SiteOutOfRange { site: i, max: 2 * n });
            }
            if p.has_arch(i) {
                return Err(PatternError::Invalid(format!("move {i} acts on the arch of {p}")));
            }
            p = p.apply_f(i);
        }
        Ok(p)
    }
}

impl fmt::Display for ThetaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Shortest `f`-move words from `π_0` to every pattern.
///
/// Breadth-first search; each level is processed by decreasing crossing
/// number, then by partner table, with sites tried in increasing order. The
/// first word to reach a pattern is kept.
pub fn word_table(n: usize) -> BTreeMap<LinkPattern, ThetaWord> {
    let root = LinkPattern::pi0(n);
    let mut words = BTreeMap::new();
    words.insert(root.clone(), ThetaWord::default());
    let mut frontier = vec![root];
    while !frontier.is_empty() {
        frontier.sort_by(|a, b| b.crossings().cmp(&a.crossings()).then_with(|| a.cmp(b)));
        let mut next = Vec::new();
        for p in &frontier {
            for i in 1..=2 * n {
                if p.has_arch(i) {
                    continue;
                }
                let q = p.apply_f(i);
                if !words.contains_key(&q) {
                    let mut w = words[p].clone();
                    w.0.push(i);
                    words.insert(q.clone(), w);
                    next.push(q);
                }
            }
        }
        frontier = next;
    }
    words
}

/// Shortest word producing `pi` from `π_0`.
pub fn word_from_pi0(pi: &LinkPattern) -> ThetaWord {
    word_table(pi.n()).remove(pi).expect("the f-move graph is connected")
}

/// The `n!` permutation patterns.
pub fn permutation_patterns(n: usize) -> BTreeSet<LinkPattern> {
    LinkPattern::enumerate(n)
        .into_iter()
        .filter(LinkPattern::is_permutation_pattern)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> LinkPattern {
        LinkPattern::parse(s).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(LinkPattern::enumerate(1), vec![pat("(1 2)")]);
        assert_eq!(LinkPattern::enumerate(2).len(), 3);
        assert_eq!(LinkPattern::enumerate(3).len(), 15);
        assert_eq!(LinkPattern::enumerate(4).len(), 105);
        let all: BTreeSet<_> = LinkPattern::enumerate(4).into_iter().collect();
        assert_eq!(all.len(), 105);
    }

    #[test]
    fn generator_examples() {
        let pi0 = LinkPattern::pi0(2);
        assert_eq!(pi0, pat("(1 3)(2 4)"));
        assert_eq!(pi0.apply_e(1), pat("(1 2)(3 4)"));
        assert_eq!(pat("(1 2)(3 4)").apply_e(1), pat("(1 2)(3 4)"));
        assert_eq!(pat("(1 2)(3 4)").apply_e(2), pat("(2 3)(1 4)"));
        assert_eq!(pi0.apply_f(1), pat("(1 4)(2 3)"));
        assert_eq!(pat("(1 2)(3 4)").apply_f(1), pat("(1 2)(3 4)"));
        assert_eq!(pat("(1 2)(3 4)").apply_e(4), pat("(1 4)(2 3)"));
    }

    #[test]
    fn crossing_examples() {
        assert_eq!(LinkPattern::pi0(3).crossings(), 3);
        assert_eq!(pat("(1 4)(2 3)").crossings(), 0);
        assert_eq!(pat("(1 3)(2 4)").crossings(), 1);
    }

    #[test]
    fn rotation_and_reflection() {
        assert_eq!(pat("(1 2)(3 4)").rotate(), pat("(2 3)(4 1)"));
        assert_eq!(pat("(1 2)(3 4)").reflect(), pat("(1 2)(3 4)"));
        assert_eq!(pat("(1 2)(3 5)(4 6)").reflect(), pat("(5 6)(2 4)(1 3)"));
    }

    #[test]
    fn words_replay_and_are_shortest() {
        let table = word_table(3);
        assert_eq!(table.len(), 15);
        assert!(table[&LinkPattern::pi0(3)].is_empty());
        for (p, w) in &table {
            assert_eq!(&w.replay(3).unwrap(), p);
        }
        assert_eq!(word_from_pi0(&LinkPattern::pi0(3).apply_f(3)), ThetaWord(vec![3]));
    }

    #[test]
    fn preimage_examples() {
        let p = pat("(1 2)(3 4)");
        let mut pre = p.preimages_e(1);
        pre.sort();
        assert_eq!(pre, vec![pat("(1 3)(2 4)"), pat("(1 4)(2 3)")]);
        assert!(p.preimages_e(2).is_empty());
        assert!(pat("(1 2)").preimages_e(1).is_empty());
    }

    #[test]
    fn perm_hat_examples() {
        assert_eq!(LinkPattern::pi0(3).perm_hat().unwrap().perm, vec![3, 2, 1]);
        assert!(matches!(
            pat("(1 2)(3 4)").perm_hat(),
            Err(PatternError::NotPermutationPattern(_))
        ));
        for n in 1..=4 {
            let perms = permutation_patterns(n);
            assert_eq!(perms.len(), (1..=n).product::<usize>());
            for p in perms {
                assert_eq!(LinkPattern::from_perm_hat(&p.perm_hat().unwrap()), p);
            }
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(LinkPattern::from_partners(&[1, 2]).is_err());
        assert!(LinkPattern::from_partners(&[2, 3, 1]).is_err());
        assert!(LinkPattern::parse("(1 2)(2 3)").is_err());
        assert!(PermHat::new(vec![1, 1]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = pat("(1 4)(2 3)");
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"n":2,"partner":[4,3,2,1]}"#);
        assert_eq!(serde_json::from_str::<LinkPattern>(&s).unwrap(), p);
    }
}
