//! Exhaustive and seeded random scans over set systems.
//!
//! Every family is evaluated independently; results are merged and sorted
//! by canonical family order (fewer members first, then member masks), so a
//! report depends only on its inputs, not on the worker count.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::corollaries::{verify_corollaries, CorollaryId, Direction};
use super::{check_atom_agreement, verify_lemma_3_1, verify_theorem_3_1, Verdict};
use crate::closure::Nullary;
use crate::error::{Error, Result};
use crate::sets::{bits, EmptyMeetPolicy, SetFamily, Universe, MAX_POINTS};

/// Largest universe for exhaustive enumeration (2^(2^4) = 65,536 families).
pub const EXHAUSTIVE_MAX_N: usize = 4;
/// Largest universe on which scans also run the G construction checks,
/// which enumerate σ(C) explicitly.
pub const LEMMA_MAX_N: usize = 6;
/// Up to this size random families draw each of the 2^n subsets
/// independently; above it they draw a few random members.
pub const DENSE_MAX_N: usize = 6;
pub const SPARSE_MAX_MEMBERS: usize = 8;
pub const DEFAULT_WITNESS_CAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    pub policy: EmptyMeetPolicy,
    pub nullary: Nullary,
    pub jobs: usize,
    pub witness_cap: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            policy: EmptyMeetPolicy::Universe,
            nullary: Nullary::Include,
            jobs: 1,
            witness_cap: DEFAULT_WITNESS_CAP,
        }
    }
}

impl ScanOptions {
    pub fn new(policy: EmptyMeetPolicy, nullary: Nullary) -> Self {
        ScanOptions {
            policy,
            nullary,
            ..ScanOptions::default()
        }
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Enumeration {
    Exhaustive,
    Random { seed: u64, count: usize },
}

/// Where a family sits with respect to the degenerate cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stratum {
    /// No members at all.
    EmptyFamily,
    /// Some point lies in no member.
    Uncovered,
    Covered,
}

impl Stratum {
    fn of(family: &SetFamily) -> Stratum {
        if family.is_empty() {
            Stratum::EmptyFamily
        } else if !family.covers_universe() {
            Stratum::Uncovered
        } else {
            Stratum::Covered
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub families_total: u64,
    pub hypothesis_holds: u64,
    pub atoms_agree: u64,
    pub both: u64,
    /// Families on which at least one check failed.
    pub violations: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Strata {
    pub empty_family: u64,
    pub uncovered: u64,
    /// Uncovered families whose agreement verdict flips with the empty-meet
    /// policy.
    pub policy_sensitive: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: u64,
    pub fail: u64,
    pub not_applicable: u64,
    pub fail_forward: u64,
    pub fail_reverse: u64,
    pub fail_empty_family: u64,
    pub fail_uncovered: u64,
}

impl Tally {
    fn record(&mut self, verdict: Verdict, direction: Option<Direction>, stratum: Stratum) {
        match verdict {
            Verdict::Pass => self.pass += 1,
            Verdict::NotApplicable => self.not_applicable += 1,
            Verdict::Fail => {
                self.fail += 1;
                match direction {
                    Some(Direction::Reverse) => self.fail_reverse += 1,
                    _ => self.fail_forward += 1,
                }
                match stratum {
                    Stratum::EmptyFamily => self.fail_empty_family += 1,
                    Stratum::Uncovered => self.fail_uncovered += 1,
                    Stratum::Covered => {}
                }
            }
        }
    }
}

/// κ(C) = σ(C) against the complement hypothesis, family by family.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EquivalenceTally {
    pub checked: u64,
    pub mismatches: u64,
    pub mismatches_empty_family: u64,
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LemmaTally {
    pub points_checked: u64,
    pub failures: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationWitness {
    pub family: String,
    pub stratum: Stratum,
    /// Failed checks, e.g. `theorem31`, `cor44:reverse`, `lemma31@b`.
    pub failed: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub universe_size: usize,
    pub enumeration: Enumeration,
    pub policy: EmptyMeetPolicy,
    pub nullary: Nullary,
    pub counters: Counters,
    pub strata: Strata,
    pub tallies: BTreeMap<String, Tally>,
    pub equivalence: EquivalenceTally,
    pub lemma: Option<LemmaTally>,
    pub witness_cap: usize,
    pub witnesses: Vec<ViolationWitness>,
}

impl ScanReport {
    pub fn tally(&self, check: &str) -> Tally {
        self.tallies.get(check).copied().unwrap_or_default()
    }

    pub fn theorem_failures(&self) -> u64 {
        self.tally("theorem31").fail
    }
}

struct Outcome {
    key: (usize, Vec<u64>),
    stratum: Stratum,
    hypothesis: bool,
    agree: bool,
    policy_sensitive: bool,
    theorem: Verdict,
    corollaries: Vec<(CorollaryId, Verdict, Option<Direction>)>,
    equivalence_mismatch: bool,
    lemma_points: u64,
    lemma_failed_points: Vec<usize>,
}

fn evaluate(family: &SetFamily, opts: &ScanOptions) -> Outcome {
    let stratum = Stratum::of(family);
    let theorem = verify_theorem_3_1(family, opts.policy, opts.nullary);
    let cors = verify_corollaries(family, opts.policy, opts.nullary);
    let policy_sensitive = stratum != Stratum::Covered && {
        let other = match opts.policy {
            EmptyMeetPolicy::Universe => EmptyMeetPolicy::Empty,
            EmptyMeetPolicy::Empty => EmptyMeetPolicy::Universe,
        };
        check_atom_agreement(family, other).agree != theorem.agreement.agree
    };

    let n = family.universe().len();
    let (lemma_points, lemma_failed_points) = if n <= LEMMA_MAX_N {
        let failed = (0..n)
            .filter(|&p| {
                verify_lemma_3_1(family, p)
                    .map(|r| !r.checks.all_pass())
                    .unwrap_or(true)
            })
            .collect();
        (n as u64, failed)
    } else {
        (0, Vec::new())
    };

    Outcome {
        key: (family.len(), family.masks().to_vec()),
        stratum,
        hypothesis: theorem.hypothesis.holds,
        agree: theorem.agreement.agree,
        policy_sensitive,
        theorem: theorem.verdict,
        corollaries: cors
            .checks
            .iter()
            .map(|c| (c.id, c.verdict, c.failed_direction))
            .collect(),
        equivalence_mismatch: cors.kappa_equals_sigma != theorem.hypothesis.holds,
        lemma_points,
        lemma_failed_points,
    }
}

fn run_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(work))
}

fn aggregate(
    universe: &Universe,
    enumeration: Enumeration,
    opts: &ScanOptions,
    outcomes: Vec<Outcome>,
) -> ScanReport {
    let mut counters = Counters::default();
    let mut strata = Strata::default();
    let mut tallies: BTreeMap<String, Tally> = BTreeMap::new();
    let mut equivalence = EquivalenceTally::default();
    let mut lemma = LemmaTally::default();
    let mut witnesses: Vec<((usize, Vec<u64>), ViolationWitness)> = Vec::new();
    let mut eq_witnesses: Vec<(usize, Vec<u64>)> = Vec::new();

    for o in outcomes {
        counters.families_total += 1;
        counters.hypothesis_holds += u64::from(o.hypothesis);
        counters.atoms_agree += u64::from(o.agree);
        counters.both += u64::from(o.hypothesis && o.agree);
        match o.stratum {
            Stratum::EmptyFamily => strata.empty_family += 1,
            Stratum::Uncovered => strata.uncovered += 1,
            Stratum::Covered => {}
        }
        strata.policy_sensitive += u64::from(o.policy_sensitive);

        let mut failed = Vec::new();
        tallies
            .entry("theorem31".into())
            .or_default()
            .record(o.theorem, None, o.stratum);
        if o.theorem == Verdict::Fail {
            failed.push("theorem31".to_string());
        }
        for (id, verdict, direction) in &o.corollaries {
            tallies
                .entry(id.name().into())
                .or_default()
                .record(*verdict, *direction, o.stratum);
            if *verdict == Verdict::Fail {
                let dir = match direction {
                    Some(Direction::Reverse) => "reverse",
                    _ => "forward",
                };
                failed.push(format!("{}:{dir}", id.name()));
            }
        }
        lemma.points_checked += o.lemma_points;
        lemma.failures += o.lemma_failed_points.len() as u64;
        for &p in &o.lemma_failed_points {
            failed.push(format!("lemma31@{}", universe.label(p)));
        }

        equivalence.checked += 1;
        if o.equivalence_mismatch {
            equivalence.mismatches += 1;
            if o.stratum == Stratum::EmptyFamily {
                equivalence.mismatches_empty_family += 1;
            }
            eq_witnesses.push(o.key.clone());
        }

        if !failed.is_empty() {
            counters.violations += 1;
            let family = SetFamily::from_masks_unchecked(universe.clone(), o.key.1.clone());
            witnesses.push((
                o.key,
                ViolationWitness {
                    family: family.render(),
                    stratum: o.stratum,
                    failed,
                },
            ));
        }
    }

    witnesses.sort_by(|a, b| a.0.cmp(&b.0));
    witnesses.truncate(opts.witness_cap);
    eq_witnesses.sort();
    eq_witnesses.truncate(opts.witness_cap);
    equivalence.witnesses = eq_witnesses
        .into_iter()
        .map(|(_, masks)| SetFamily::from_masks_unchecked(universe.clone(), masks).render())
        .collect();

    ScanReport {
        universe_size: universe.len(),
        enumeration,
        policy: opts.policy,
        nullary: opts.nullary,
        counters,
        strata,
        tallies,
        equivalence,
        lemma: (universe.len() <= LEMMA_MAX_N).then_some(lemma),
        witness_cap: opts.witness_cap,
        witnesses: witnesses.into_iter().map(|(_, w)| w).collect(),
    }
}

/// Every family over the canonical `n`-point universe, by family code: bit
/// `s` of the code selects the subset with mask `s`.
pub fn family_from_code(universe: &Universe, code: u64) -> SetFamily {
    SetFamily::from_masks_unchecked(universe.clone(), bits(code).map(|b| b as u64).collect())
}

pub fn exhaustive_scan(n: usize, opts: ScanOptions) -> Result<ScanReport> {
    if n == 0 || n > EXHAUSTIVE_MAX_N {
        return Err(Error::BudgetExceeded {
            n,
            max: EXHAUSTIVE_MAX_N,
        });
    }
    let universe = Universe::canonical(n)?;
    let codes = 1u64 << (1u64 << n);
    let outcomes = run_pool(opts.jobs, || {
        (0..codes)
            .into_par_iter()
            .map(|code| evaluate(&family_from_code(&universe, code), &opts))
            .collect::<Vec<_>>()
    })?;
    Ok(aggregate(&universe, Enumeration::Exhaustive, &opts, outcomes))
}

/// Seeded stream of random families over the canonical universe.
///
/// For `n <= DENSE_MAX_N` each family draws an inclusion probability and
/// then includes each of the 2^n subsets independently. Larger universes
/// draw up to [`SPARSE_MAX_MEMBERS`] members with a per-family point density.
pub struct RandomFamilies {
    universe: Universe,
    rng: ChaCha8Rng,
}

impl RandomFamilies {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        Ok(RandomFamilies {
            universe: Universe::canonical(n)?,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }
}

impl Iterator for RandomFamilies {
    type Item = SetFamily;

    fn next(&mut self) -> Option<SetFamily> {
        let n = self.universe.len();
        let p: f64 = self.rng.random();
        let masks: Vec<u64> = if n <= DENSE_MAX_N {
            (0..1u64 << n).filter(|_| self.rng.random_bool(p)).collect()
        } else {
            let count = self.rng.random_range(0..=SPARSE_MAX_MEMBERS);
            (0..count)
                .map(|_| (0..n).filter(|_| self.rng.random_bool(p)).fold(0, |m, i| m | 1 << i))
                .collect()
        };
        Some(SetFamily::from_masks_unchecked(self.universe.clone(), masks))
    }
}

pub fn random_scan(n: usize, count: usize, seed: u64, opts: ScanOptions) -> Result<ScanReport> {
    if n == 0 || n > MAX_POINTS {
        return Err(Error::InvalidArgument(format!(
            "random scans need 1 <= n <= {MAX_POINTS}, got {n}"
        )));
    }
    if count == 0 {
        return Err(Error::InvalidArgument("random scans need count >= 1".into()));
    }
    let sampler = RandomFamilies::new(n, seed)?;
    let universe = sampler.universe().clone();
    let families: Vec<SetFamily> = sampler.take(count).collect();
    let outcomes = run_pool(opts.jobs, || {
        families
            .par_iter()
            .map(|f| evaluate(f, &opts))
            .collect::<Vec<_>>()
    })?;
    Ok(aggregate(&universe, Enumeration::Random { seed, count }, &opts, outcomes))
}
