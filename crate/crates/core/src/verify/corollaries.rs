use serde::Serialize;

use super::{check_atom_agreement, AgreementReport, Verdict};
use crate::closure::Nullary;
use crate::predicates::{classify, kappa_equals_sigma, ClassProfile};
use crate::sets::{EmptyMeetPolicy, SetFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorollaryId {
    /// Semi-algebra ⇒ agreement.
    Cor41,
    /// Semi-ring covering Ω ⇒ agreement.
    Cor42,
    /// Cor42 with differences only required in C_σδ.
    Cor42Weak,
    /// κ(C) = σ(C) ⇒ agreement.
    Cor43,
    /// Semi-ring ⇒ (agreement ⟺ covers Ω).
    Cor44,
    /// Agreement ⟺ κ(C) = σ(C).
    Cor45,
}

impl CorollaryId {
    pub const ALL: [CorollaryId; 6] = [
        CorollaryId::Cor41,
        CorollaryId::Cor42,
        CorollaryId::Cor42Weak,
        CorollaryId::Cor43,
        CorollaryId::Cor44,
        CorollaryId::Cor45,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CorollaryId::Cor41 => "cor41",
            CorollaryId::Cor42 => "cor42",
            CorollaryId::Cor42Weak => "cor42_weak",
            CorollaryId::Cor43 => "cor43",
            CorollaryId::Cor44 => "cor44",
            CorollaryId::Cor45 => "cor45",
        }
    }
}

/// Which half of a claim failed. `Forward`: the structural condition holds
/// but atoms disagree. `Reverse`: atoms agree but the condition fails (only
/// for the iff corollaries).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorollaryCheck {
    pub id: CorollaryId,
    pub verdict: Verdict,
    /// Whether the corollary's hypothesis (its applicability gate) holds.
    pub applicable: bool,
    /// The structural condition the conclusion is tied to.
    pub condition: bool,
    pub agreement: bool,
    pub failed_direction: Option<Direction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorollaryReport {
    pub policy: EmptyMeetPolicy,
    pub nullary: Nullary,
    pub profile: ClassProfile,
    pub kappa_equals_sigma: bool,
    pub agreement: AgreementReport,
    pub checks: Vec<CorollaryCheck>,
}

impl CorollaryReport {
    pub fn get(&self, id: CorollaryId) -> &CorollaryCheck {
        self.checks.iter().find(|c| c.id == id).expect("every corollary is evaluated")
    }

    pub fn any_fail(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Fail)
    }
}

fn implication(id: CorollaryId, condition: bool, agreement: bool) -> CorollaryCheck {
    let verdict = match (condition, agreement) {
        (false, _) => Verdict::NotApplicable,
        (true, true) => Verdict::Pass,
        (true, false) => Verdict::Fail,
    };
    CorollaryCheck {
        id,
        verdict,
        applicable: condition,
        condition,
        agreement,
        failed_direction: (verdict == Verdict::Fail).then_some(Direction::Forward),
    }
}

fn equivalence(id: CorollaryId, applicable: bool, condition: bool, agreement: bool) -> CorollaryCheck {
    let failed_direction = match (condition, agreement) {
        _ if !applicable => None,
        (true, false) => Some(Direction::Forward),
        (false, true) => Some(Direction::Reverse),
        _ => None,
    };
    let verdict = match (applicable, failed_direction) {
        (false, _) => Verdict::NotApplicable,
        (true, None) => Verdict::Pass,
        (true, Some(_)) => Verdict::Fail,
    };
    CorollaryCheck {
        id,
        verdict,
        applicable,
        condition,
        agreement,
        failed_direction,
    }
}

/// Evaluates every corollary's hypothesis and conclusion on one family.
/// Finite families are countable and have finitely many atoms, so the
/// countability gates of the iff corollaries always hold.
pub fn verify_corollaries(family: &SetFamily, policy: EmptyMeetPolicy, nullary: Nullary) -> CorollaryReport {
    let profile = classify(family, nullary);
    let kes = kappa_equals_sigma(family, nullary);
    let agreement = check_atom_agreement(family, policy);
    let agree = agreement.agree;
    let covers = profile.covers_universe;
    let checks = vec![
        implication(CorollaryId::Cor41, profile.semi_algebra, agree),
        implication(CorollaryId::Cor42, profile.semi_ring && covers, agree),
        implication(CorollaryId::Cor42Weak, profile.weak_semi_ring && covers, agree),
        implication(CorollaryId::Cor43, kes, agree),
        equivalence(CorollaryId::Cor44, profile.semi_ring, covers, agree),
        equivalence(CorollaryId::Cor45, true, kes, agree),
    ];
    CorollaryReport {
        policy,
        nullary,
        profile,
        kappa_equals_sigma: kes,
        agreement,
        checks,
    }
}
