//! Named groups of checks, shared by the command line and the test targets.

use std::collections::BTreeMap;

use serde_json::json;
use thiserror::Error;

use crate::brauer;
use crate::degrees::{self, DegreeError, Family};
use crate::fixtures;
use crate::groundstate::{self, BuildError, GroundState};
use crate::points::{generic_points, rng, small_rational};
use crate::linkpat::LinkPattern;
use crate::pointwise::{self, PointwiseError};
use crate::poly::{int, Poly, Rational};
use crate::report::CheckReport;
use crate::sumrules::{self, SumRuleError};

pub const SUITES: &[&str] = &["build", "sums", "recursion", "brauer", "degrees", "pointwise", "fixtures"];

/// Largest size built symbolically unless the caller opts in.
pub const DEFAULT_SYMBOLIC_MAX: usize = 3;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}")]
    Unknown(String),
    #[error("size {0} needs the full symbolic build, which is disabled")]
    Gated(usize),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    SumRule(#[from] SumRuleError),
    #[error(transparent)]
    Pointwise(#[from] PointwiseError),
    #[error(transparent)]
    Brauer(#[from] brauer::BrauerError),
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random points for evaluation checks.
    pub random_points: usize,
    /// Every `edge_stride`-th pattern has all its edges checked.
    pub edge_stride: usize,
    /// Largest `n` for which the symbolic ground state may be built.
    pub symbolic_max: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            random_points: 100,
            edge_stride: 1,
            symbolic_max: DEFAULT_SYMBOLIC_MAX,
        }
    }
}

/// Ground states and `δ` families built so far, by size.
#[derive(Default)]
pub struct Cache {
    ground: BTreeMap<usize, GroundState>,
    deltas: BTreeMap<usize, Family>,
}

impl Cache {
    pub fn ground_state(&mut self, n: usize, cfg: &SuiteConfig) -> Result<&GroundState, SuiteError> {
        if n > cfg.symbolic_max {
            return Err(SuiteError::Gated(n));
        }
        if !self.ground.contains_key(&n) {
            let gs = groundstate::build(n)?;
            self.ground.insert(n, gs);
        }
        Ok(&self.ground[&n])
    }

    /// Ground states of every size below `n`.
    fn smaller(&mut self, n: usize, cfg: &SuiteConfig) -> Result<BTreeMap<usize, GroundState>, SuiteError> {
        let mut out = BTreeMap::new();
        for k in 1..n {
            out.insert(k, self.ground_state(k, cfg)?.clone());
        }
        Ok(out)
    }

    /// Recursive `δ` families of every size up to `n`.
    pub fn deltas(&mut self, n: usize) -> Result<&BTreeMap<usize, Family>, SuiteError> {
        for k in 1..=n {
            if !self.deltas.contains_key(&k) {
                let fam = degrees::build_delta_recursive(k)?;
                self.deltas.insert(k, fam);
            }
        }
        Ok(&self.deltas)
    }
}

pub fn run(name: &str, n: usize, cfg: &SuiteConfig, cache: &mut Cache) -> Result<Vec<CheckReport>, SuiteError> {
    match name {
        "build" => build_suite(n, cfg, cache),
        "sums" => sums_suite(n, cfg, cache),
        "recursion" => recursion_suite(n, cfg, cache),
        "brauer" => brauer_suite(n, cfg),
        "degrees" => degrees_suite(n, cfg, cache),
        "pointwise" => pointwise_suite(n, cfg),
        "fixtures" => fixtures_suite(n, cfg, cache),
        other => Err(SuiteError::Unknown(other.to_string())),
    }
}

fn build_suite(n: usize, cfg: &SuiteConfig, cache: &mut Cache) -> Result<Vec<CheckReport>, SuiteError> {
    let smaller = cache.smaller(n, cfg)?;
    let gs = cache.ground_state(n, cfg)?;
    let points = generic_points(2 * n, 20, cfg.seed);
    let mut checks = gs.verify(&points, cfg.edge_stride).checks;
    checks.push(gs.check_factorization(&smaller));
    Ok(checks)
}

fn sums_suite(n: usize, cfg: &SuiteConfig, cache: &mut Cache) -> Result<Vec<CheckReport>, SuiteError> {
    let gs = cache.ground_state(n, cfg)?;
    let points = sumrules::sum_rule_points(n, cfg.random_points, cfg.seed);
    let mut checks = vec![sumrules::perm_sum_check(gs), sumrules::full_sum_check(gs, &points)?];
    let mut r = CheckReport::new("homogeneous-sum", n, json!({}));
    let expected = sumrules::homogeneous_number(n);
    let got = gs.homogeneous_sum();
    r.expect(got == expected, || format!("{got} vs {expected}"));
    checks.push(r);
    Ok(checks)
}

fn recursion_suite(n: usize, cfg: &SuiteConfig, cache: &mut Cache) -> Result<Vec<CheckReport>, SuiteError> {
    if n < 2 {
        return Ok(Vec::new());
    }
    let prev = cache.ground_state(n - 1, cfg)?.clone();
    let gs = cache.ground_state(n, cfg)?;
    Ok((1..=2 * n).map(|i| sumrules::recursion_check(gs, &prev, i)).collect())
}

fn brauer_suite(n: usize, cfg: &SuiteConfig) -> Result<Vec<CheckReport>, SuiteError> {
    let mut checks = vec![brauer::check_brauer_relations(n)];
    let mut g = rng(cfg.seed);
    let mut ybe = CheckReport::new("yang-baxter-unitarity", n, json!({"pairs": 50}));
    for _ in 0..50 {
        let (u, v) = (small_rational(&mut g), small_rational(&mut g));
        let r = brauer::check_yang_baxter(n, &u, &v);
        if !r.pass {
            ybe.fail(r.witness.unwrap_or_default());
        }
    }
    checks.push(ybe);
    for i in 1..=2 * n {
        let (z, w) = (small_rational(&mut g), small_rational(&mut g));
        checks.push(brauer::check_rcheck_unitarity(n, i, &z, &w)?);
        checks.push(brauer::check_vn_invariance(n, i, &z, &w)?);
        if i != n && i != 2 * n {
            checks.push(brauer::check_bn_relation(n, i, &z, &w)?);
        }
    }
    checks.push(brauer::check_positive_cone(n, &brauer::positive_point(n, cfg.seed))?);
    Ok(checks)
}

fn degrees_suite(n: usize, cfg: &SuiteConfig, cache: &mut Cache) -> Result<Vec<CheckReport>, SuiteError> {
    let schuberts = degrees::schubert_family_recursive(n)?;
    let deltas = cache.deltas(n)?.clone();
    let mut checks = degrees::verify_families(n, &deltas, &schuberts)?;
    if n <= cfg.symbolic_max {
        let gs = cache.ground_state(n, cfg)?;
        let mut r = CheckReport::new("delta-routes", n, json!({}));
        let from_psi = degrees::delta_family_from_psi(gs)?;
        for (p, d) in &deltas[&n].entries {
            r.expect(from_psi.get(p) == d, || format!("{p}: recursion vs ground state"));
        }
        checks.push(r);
        let mut r = CheckReport::new("schubert-from-ground-state", n, json!({}));
        for (p, s) in &schuberts.entries {
            r.expect(degrees::schubert_from_psi(gs, p)? == *s, || format!("{p}"));
        }
        checks.push(r);
        checks.push(degrees::observe_refined_positivity(gs)?);
        checks.push(degrees::observe_ab_normalization(gs));
    }
    Ok(checks)
}

fn pointwise_suite(n: usize, cfg: &SuiteConfig) -> Result<Vec<CheckReport>, SuiteError> {
    let points = generic_points(2 * n, cfg.random_points.min(20), cfg.seed);
    let mut checks = vec![sumrules::pointwise_sum_check(n, &points)?];
    let values = pointwise::homogeneous_values(n, cfg.seed)?;
    let mut r = CheckReport::new("pointwise-homogeneous", n, json!({}));
    let total: Rational = values.values().sum();
    let expected = Rational::from_integer(sumrules::homogeneous_number(n));
    r.expect(total == expected, || format!("{total} vs {expected}"));
    let min = values.values().min().cloned().unwrap_or_default();
    r.expect(min == int(1), || format!("smallest entry {min}"));
    checks.push(r);
    Ok(checks)
}

fn fixtures_suite(n: usize, cfg: &SuiteConfig, cache: &mut Cache) -> Result<Vec<CheckReport>, SuiteError> {
    let mut checks = Vec::new();
    match n {
        2 => {
            let gs = cache.ground_state(2, cfg)?;
            let generated = gs.entries.iter().map(|(p, f)| (p.to_string(), f.to_string())).collect();
            checks.push(fixtures::check_psi2(&generated));
        }
        3 => {
            checks.push(fixtures::check_words3(cache.ground_state(3, cfg)?));
            let (delta, schubert) = bidegree_routes(3, cache)?;
            checks.push(fixtures::check_bidegrees3(&delta, "delta"));
            checks.push(fixtures::check_bidegrees3(&schubert, "schubert"));
        }
        4 => {
            let (delta, schubert) = bidegree_routes(4, cache)?;
            checks.push(fixtures::check_bidegrees4(&delta, "delta"));
            checks.push(fixtures::check_bidegrees4(&schubert, "schubert"));
        }
        _ => {}
    }
    if n <= 4 {
        checks.push(fixtures::check_refined(n, &degrees::refined_poly_pointwise(n)?));
    }
    let numbers: Vec<_> = (1..=6).map(sumrules::homogeneous_number).collect();
    checks.push(fixtures::check_numbers(&numbers));
    Ok(checks)
}

pub type BidegreeTable = BTreeMap<LinkPattern, Poly>;

/// Bidegree tables from the `δ` recursion and from the `s` recursion.
pub fn bidegree_routes(n: usize, cache: &mut Cache) -> Result<(BidegreeTable, BidegreeTable), SuiteError> {
    let delta = degrees::bidegree_table(&cache.deltas(n)?[&n])?;
    let schuberts = degrees::schubert_family_recursive(n)?;
    let schubert = schuberts
        .entries
        .iter()
        .map(|(p, s)| Ok((p.clone(), degrees::bidegree_from_schubert(s, n)?)))
        .collect::<Result<_, DegreeError>>()?;
    Ok((delta, schubert))
}
