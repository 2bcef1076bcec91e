//! Executable checks of the generator-atom results, plus scans over every
//! small set system.

mod blackwell;
mod corollaries;
mod lemma;
mod scan;

use serde::Serialize;

use crate::atoms::{atom_partition, generator_atom_mask};
use crate::closure::Nullary;
use crate::predicates::{hypothesis_t31, HypothesisCheck};
use crate::sets::{EmptyMeetPolicy, SetFamily, Subset};

pub use blackwell::{blackwell_compare, BlackwellReport, Relation};
pub use corollaries::{verify_corollaries, CorollaryCheck, CorollaryId, CorollaryReport, Direction};
pub use lemma::{verify_lemma_3_1, LemmaChecks, LemmaReport};
pub use scan::{
    exhaustive_scan, family_from_code, random_scan, Counters, Enumeration, EquivalenceTally, LemmaTally, RandomFamilies,
    ScanOptions, ScanReport, Strata, Stratum, Tally, ViolationWitness, EXHAUSTIVE_MAX_N,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "NOT_APPLICABLE",
        }
    }
}

/// A point where the generator atom and the σ-atom differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Disagreement {
    pub point: usize,
    pub generator_atom: Subset,
    pub sigma_atom: Subset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementReport {
    pub policy: EmptyMeetPolicy,
    pub agree: bool,
    pub disagreements: Vec<Disagreement>,
}

/// Compares A_C(ω) with the atom of σ(C) through ω at every point.
pub fn check_atom_agreement(family: &SetFamily, policy: EmptyMeetPolicy) -> AgreementReport {
    let u = family.universe();
    let partition = atom_partition(family);
    let disagreements: Vec<Disagreement> = (0..u.len())
        .filter_map(|p| {
            let g = generator_atom_mask(family, p, policy);
            let block = partition.block_mask_of(p);
            (g != block).then(|| Disagreement {
                point: p,
                generator_atom: u.subset_unchecked(g),
                sigma_atom: u.subset_unchecked(block),
            })
        })
        .collect();
    AgreementReport {
        policy,
        agree: disagreements.is_empty(),
        disagreements,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremCheck {
    pub verdict: Verdict,
    pub nullary: Nullary,
    pub hypothesis: HypothesisCheck,
    pub agreement: AgreementReport,
}

/// `NOT_APPLICABLE` when some member's complement is outside κ(C);
/// otherwise `PASS` exactly when every generator atom is a σ-atom.
pub fn verify_theorem_3_1(family: &SetFamily, policy: EmptyMeetPolicy, nullary: Nullary) -> TheoremCheck {
    let hypothesis = hypothesis_t31(family, nullary);
    let agreement = check_atom_agreement(family, policy);
    let verdict = match (hypothesis.holds, agreement.agree) {
        (false, _) => Verdict::NotApplicable,
        (true, true) => Verdict::Pass,
        (true, false) => Verdict::Fail,
    };
    TheoremCheck {
        verdict,
        nullary,
        hypothesis,
        agreement,
    }
}
