//! Structural predicates on set families and the generator hypotheses.
//!
//! Semi-rings follow the usual textbook definition: ∅ ∈ C, C is closed under
//! pairwise intersection, and every difference `A ∩ B^c` is a finite disjoint
//! union of members. Differences are checked for all ordered pairs `(A, B)`.
//! A weak semi-ring relaxes the last clause to `A ∩ B^c ∈ C_σδ`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::atoms::atom_partition;
use crate::closure::{named_closure, KappaIndex, NamedClass, Nullary, SigmaDeltaIndex};
use crate::sets::{SetFamily, SetOpKind, Subset, Universe};

/// One-line statement of the semi-ring definition in force, for reports.
pub const SEMI_RING_DEFINITION: &str =
    "semi-ring: empty set present, closed under pairwise intersection, A minus B a finite disjoint union of members for all ordered pairs (A, B)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassFlag {
    PiSystem,
    SemiRing,
    WeakSemiRing,
    SemiAlgebra,
    Algebra,
    SigmaAlgebra,
    KappaClass,
    LambdaClass,
    MonotoneClass,
    CoversUniverse,
}

impl ClassFlag {
    pub const ALL: [ClassFlag; 10] = [
        ClassFlag::PiSystem,
        ClassFlag::SemiRing,
        ClassFlag::WeakSemiRing,
        ClassFlag::SemiAlgebra,
        ClassFlag::Algebra,
        ClassFlag::SigmaAlgebra,
        ClassFlag::KappaClass,
        ClassFlag::LambdaClass,
        ClassFlag::MonotoneClass,
        ClassFlag::CoversUniverse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassFlag::PiSystem => "pi_system",
            ClassFlag::SemiRing => "semi_ring",
            ClassFlag::WeakSemiRing => "weak_semi_ring",
            ClassFlag::SemiAlgebra => "semi_algebra",
            ClassFlag::Algebra => "algebra",
            ClassFlag::SigmaAlgebra => "sigma_algebra",
            ClassFlag::KappaClass => "kappa_class",
            ClassFlag::LambdaClass => "lambda_class",
            ClassFlag::MonotoneClass => "monotone_class",
            ClassFlag::CoversUniverse => "covers_universe",
        }
    }
}

/// Why a flag is false.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// A set the definition requires is absent.
    Missing(Subset),
    /// `op(left, right)` (or `op(left)`) is not where it must be.
    Unclosed {
        op: SetOpKind,
        left: Subset,
        right: Option<Subset>,
        result: Subset,
    },
    /// Points in no member.
    Uncovered(Subset),
}

impl Witness {
    pub fn describe(&self, universe: &Universe) -> String {
        let r = |s: &Subset| universe.render_mask(s.mask());
        match self {
            Witness::Missing(s) => format!("missing {}", r(s)),
            Witness::Unclosed {
                op,
                left,
                right: Some(right),
                result,
            } => {
                let sym = match op {
                    SetOpKind::Union => "∪",
                    SetOpKind::Intersection => "∩",
                    SetOpKind::Difference => "∖",
                    _ => "?",
                };
                format!("{} {sym} {} = {} not available", r(left), r(right), r(result))
            }
            Witness::Unclosed {
                left, result, ..
            } => format!("complement of {} = {} missing", r(left), r(result)),
            Witness::Uncovered(s) => format!("points {} are in no member", r(s)),
        }
    }
}

/// Every structural flag of a family, with a witness for each false flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassProfile {
    pub pi_system: bool,
    pub semi_ring: bool,
    pub weak_semi_ring: bool,
    pub semi_algebra: bool,
    pub algebra: bool,
    pub sigma_algebra: bool,
    pub kappa_class: bool,
    pub lambda_class: bool,
    pub monotone_class: bool,
    pub covers_universe: bool,
    pub witnesses: BTreeMap<ClassFlag, Witness>,
    pub nullary: Nullary,
}

impl ClassProfile {
    pub fn flag(&self, flag: ClassFlag) -> bool {
        match flag {
            ClassFlag::PiSystem => self.pi_system,
            ClassFlag::SemiRing => self.semi_ring,
            ClassFlag::WeakSemiRing => self.weak_semi_ring,
            ClassFlag::SemiAlgebra => self.semi_algebra,
            ClassFlag::Algebra => self.algebra,
            ClassFlag::SigmaAlgebra => self.sigma_algebra,
            ClassFlag::KappaClass => self.kappa_class,
            ClassFlag::LambdaClass => self.lambda_class,
            ClassFlag::MonotoneClass => self.monotone_class,
            ClassFlag::CoversUniverse => self.covers_universe,
        }
    }
}

/// Checks closure of `family` under one pairwise op, returning the first
/// violation in canonical pair order. `want` decides where the result must
/// land; `applies` filters pairs.
fn first_pair_violation(
    family: &SetFamily,
    op: SetOpKind,
    ordered: bool,
    applies: impl Fn(u64, u64) -> bool,
    apply: impl Fn(u64, u64) -> u64,
    want: impl Fn(u64) -> bool,
) -> Option<Witness> {
    let u = family.universe();
    let masks = family.masks();
    for (i, &a) in masks.iter().enumerate() {
        let rest = if ordered { masks } else { &masks[i..] };
        for &b in rest {
            if !applies(a, b) {
                continue;
            }
            let r = apply(a, b);
            if !want(r) {
                return Some(Witness::Unclosed {
                    op,
                    left: u.subset_unchecked(a),
                    right: Some(u.subset_unchecked(b)),
                    result: u.subset_unchecked(r),
                });
            }
        }
    }
    None
}

fn require(family: &SetFamily, mask: u64) -> Option<Witness> {
    (!family.contains_mask(mask)).then(|| Witness::Missing(family.universe().subset_unchecked(mask)))
}

fn intersection_violation(family: &SetFamily) -> Option<Witness> {
    first_pair_violation(
        family,
        SetOpKind::Intersection,
        false,
        |_, _| true,
        |a, b| a & b,
        |r| family.contains_mask(r),
    )
}

fn union_violation(family: &SetFamily) -> Option<Witness> {
    first_pair_violation(
        family,
        SetOpKind::Union,
        false,
        |_, _| true,
        |a, b| a | b,
        |r| family.contains_mask(r),
    )
}

fn difference_violation(family: &SetFamily, lands: impl Fn(u64) -> bool) -> Option<Witness> {
    first_pair_violation(family, SetOpKind::Difference, true, |_, _| true, |a, b| a & !b, lands)
}

fn semi_ring_violation(family: &SetFamily) -> Option<Witness> {
    if let Some(w) = require(family, 0).or_else(|| intersection_violation(family)) {
        return Some(w);
    }
    let disjoint_unions = named_closure(family, NamedClass::DisjunionF);
    difference_violation(family, |r| disjoint_unions.contains_mask(r))
}

fn weak_semi_ring_violation(family: &SetFamily) -> Option<Witness> {
    if let Some(w) = require(family, 0).or_else(|| intersection_violation(family)) {
        return Some(w);
    }
    let index = SigmaDeltaIndex::new(family);
    difference_violation(family, |r| index.contains(r))
}

/// Evaluates every structural flag.
pub fn classify(family: &SetFamily, nullary: Nullary) -> ClassProfile {
    let u = family.universe();
    let full = u.full_mask();
    let mut witnesses = BTreeMap::new();
    let mut record = |flag: ClassFlag, w: Option<Witness>| -> bool {
        match w {
            Some(w) => {
                witnesses.insert(flag, w);
                false
            }
            None => true,
        }
    };

    let pi_system = record(ClassFlag::PiSystem, intersection_violation(family));
    let semi_violation = semi_ring_violation(family);
    let semi_ring = record(ClassFlag::SemiRing, semi_violation);
    let weak_semi_ring = record(ClassFlag::WeakSemiRing, weak_semi_ring_violation(family));
    let semi_algebra = record(ClassFlag::SemiAlgebra, semi_violation.or_else(|| require(family, full)));

    let complement_violation = || {
        family.masks().iter().find_map(|&a| {
            (!family.contains_mask(full & !a)).then(|| Witness::Unclosed {
                op: SetOpKind::Complement,
                left: u.subset_unchecked(a),
                right: None,
                result: u.subset_unchecked(full & !a),
            })
        })
    };
    let algebra_violation = require(family, full)
        .or_else(complement_violation)
        .or_else(|| union_violation(family));
    let algebra = record(ClassFlag::Algebra, algebra_violation);
    let sigma_algebra = record(ClassFlag::SigmaAlgebra, algebra_violation);

    let nullary_violation = match nullary {
        Nullary::Include => require(family, 0).or_else(|| require(family, full)),
        Nullary::Exclude => None,
    };
    let kappa_class = record(
        ClassFlag::KappaClass,
        nullary_violation
            .or_else(|| union_violation(family))
            .or_else(|| intersection_violation(family)),
    );

    let proper_difference = first_pair_violation(
        family,
        SetOpKind::Difference,
        true,
        |a, b| b & !a == 0,
        |a, b| a & !b,
        |r| family.contains_mask(r),
    );
    let lambda_class = record(
        ClassFlag::LambdaClass,
        require(family, full).or(proper_difference),
    );

    let uncovered = full & !family.union_all();
    let covers_universe = record(
        ClassFlag::CoversUniverse,
        (uncovered != 0).then(|| Witness::Uncovered(u.subset_unchecked(uncovered))),
    );

    ClassProfile {
        pi_system,
        semi_ring,
        weak_semi_ring,
        semi_algebra,
        algebra,
        sigma_algebra,
        kappa_class,
        lambda_class,
        // Monotone sequences of subsets of a finite set are eventually
        // constant, so every family is a monotone class.
        monotone_class: true,
        covers_universe,
        witnesses,
        nullary,
    }
}

pub fn is_semi_ring(family: &SetFamily) -> bool {
    semi_ring_violation(family).is_none()
}

/// The weak semi-ring flag: semi-ring with differences only required to lie
/// in C_σδ.
pub fn weak_semi_ring_note(family: &SetFamily) -> bool {
    weak_semi_ring_violation(family).is_none()
}

/// Outcome of the complement hypothesis `∀A ∈ C: A^c ∈ κ(C)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypothesisCheck {
    pub holds: bool,
    /// First member (canonical order) whose complement is outside κ(C).
    pub witness: Option<Subset>,
}

pub fn hypothesis_t31(family: &SetFamily, nullary: Nullary) -> HypothesisCheck {
    let full = family.universe().full_mask();
    let index = KappaIndex::new(family, nullary);
    let witness = family
        .masks()
        .iter()
        .find(|&&a| !index.contains(full & !a))
        .map(|&a| family.universe().subset_unchecked(a));
    HypothesisCheck {
        holds: witness.is_none(),
        witness,
    }
}

/// κ(C) = σ(C). Since κ(C) ⊆ σ(C) and κ(C) is closed under nonempty unions,
/// equality holds exactly when ∅ and every atom block are in κ(C).
pub fn kappa_equals_sigma(family: &SetFamily, nullary: Nullary) -> bool {
    let index = KappaIndex::new(family, nullary);
    index.contains(0) && atom_partition(family).block_masks().iter().all(|&b| index.contains(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::named_closure_with;
    use crate::sets::bits;

    fn fam(n: usize, masks: &[u64]) -> SetFamily {
        SetFamily::from_masks(Universe::canonical(n).unwrap(), masks.iter().copied()).unwrap()
    }

    fn intervals_0123() -> SetFamily {
        let mut masks = vec![0u64];
        for i in 0..4 {
            for j in i..4 {
                masks.push(((1u64 << (j + 1)) - 1) & !((1u64 << i) - 1));
            }
        }
        fam(4, &masks)
    }

    #[test]
    fn finite_semi_ring_missing_universe() {
        let p = classify(&fam(3, &[0, 0b001, 0b010, 0b011]), Nullary::Include);
        assert!(p.semi_ring);
        assert!(!p.semi_algebra);
        assert!(!p.covers_universe);
        assert_eq!(
            p.witnesses[&ClassFlag::CoversUniverse],
            Witness::Uncovered(Universe::canonical(3).unwrap().subset(0b100).unwrap())
        );
        assert_eq!(
            p.witnesses[&ClassFlag::SemiAlgebra],
            Witness::Missing(Universe::canonical(3).unwrap().full())
        );
    }

    #[test]
    fn intervals_form_a_semi_algebra() {
        let f = intervals_0123();
        assert_eq!(f.len(), 11);
        let p = classify(&f, Nullary::Include);
        assert!(p.semi_algebra && p.semi_ring && p.covers_universe && p.pi_system);
        assert!(!p.algebra);
    }

    #[test]
    fn powerset_has_every_flag() {
        let f = SetFamily::powerset(Universe::canonical(2).unwrap()).unwrap();
        for nullary in Nullary::ALL {
            let p = classify(&f, nullary);
            for flag in ClassFlag::ALL {
                assert!(p.flag(flag), "{flag:?}");
            }
            assert!(p.witnesses.is_empty());
        }
    }

    #[test]
    fn weak_semi_ring_examples() {
        assert!(weak_semi_ring_note(&fam(3, &[0, 0b001, 0b010, 0b011])));
        // {∅,{a},{b,c},Ω}: differences {b,c}, {a} and ∅ are members.
        let f = fam(3, &[0, 0b001, 0b110, 0b111]);
        let sd = named_closure(&f, NamedClass::SigmaDelta);
        let by_definition = f.masks().iter().all(|&a| f.masks().iter().all(|&b| sd.contains_mask(a & !b)));
        assert!(by_definition);
        assert!(weak_semi_ring_note(&f));
        assert!(!weak_semi_ring_note(&fam(3, &[])));
    }

    #[test]
    fn hypothesis_examples() {
        assert!(hypothesis_t31(&fam(3, &[1, 2, 4]), Nullary::Include).holds);
        let h = hypothesis_t31(&fam(3, &[0b011, 0b110]), Nullary::Include);
        assert!(!h.holds);
        assert_eq!(h.witness.map(|s| s.mask()), Some(0b011));
        assert!(hypothesis_t31(&fam(3, &[0b111]), Nullary::Include).holds);
        assert!(!hypothesis_t31(&fam(3, &[0b111]), Nullary::Exclude).holds);
    }

    #[test]
    fn kappa_sigma_examples() {
        assert!(kappa_equals_sigma(&fam(3, &[1, 2, 4]), Nullary::Include));
        let f = fam(3, &[0b011, 0b110]);
        assert!(!kappa_equals_sigma(&f, Nullary::Include));
        assert_eq!(named_closure_with(&f, NamedClass::Kappa, Nullary::Exclude).len(), 4);
        // Ω = {a,b} ∪ {b,c} is already in the lattice, so INCLUDE only adds ∅.
        assert_eq!(named_closure_with(&f, NamedClass::Kappa, Nullary::Include).len(), 5);
        let power = SetFamily::powerset(Universe::canonical(3).unwrap()).unwrap();
        assert!(kappa_equals_sigma(&power, Nullary::Exclude));
    }

    /// Direct definitions over explicit closures, for the exhaustive checks.
    fn oracle_profile(f: &SetFamily, nullary: Nullary) -> [bool; 10] {
        let full = f.universe().full_mask();
        let has = |m: u64| f.contains_mask(m);
        let pairs = || f.masks().iter().flat_map(|&a| f.masks().iter().map(move |&b| (a, b)));
        let pi = pairs().all(|(a, b)| has(a & b));
        let du = named_closure(f, NamedClass::DisjunionF);
        let sd = named_closure(f, NamedClass::SigmaDelta);
        let semi = has(0) && pi && pairs().all(|(a, b)| du.contains_mask(a & !b));
        let weak = has(0) && pi && pairs().all(|(a, b)| sd.contains_mask(a & !b));
        let algebra = has(full) && f.masks().iter().all(|&a| has(full & !a)) && pairs().all(|(a, b)| has(a | b));
        let kappa = pairs().all(|(a, b)| has(a | b) && has(a & b))
            && (nullary == Nullary::Exclude || (has(0) && has(full)));
        let lambda = has(full) && pairs().all(|(a, b)| b & !a != 0 || has(a & !b));
        [
            pi,
            semi,
            weak,
            semi && has(full),
            algebra,
            algebra,
            kappa,
            lambda,
            true,
            f.union_all() == full,
        ]
    }

    #[test]
    fn profile_matches_definitions_and_lattice_n3() {
        let u = Universe::canonical(3).unwrap();
        for code in 0u64..256 {
            let f = SetFamily::from_masks(u.clone(), bits(code).map(|b| b as u64)).unwrap();
            for nullary in Nullary::ALL {
                let p = classify(&f, nullary);
                let flags: Vec<bool> = ClassFlag::ALL.iter().map(|&fl| p.flag(fl)).collect();
                assert_eq!(flags, oracle_profile(&f, nullary).to_vec(), "{f:?}");
                assert!(!p.semi_algebra || p.semi_ring);
                assert!(!p.semi_ring || p.weak_semi_ring);
                assert!(!p.algebra || (p.kappa_class && p.lambda_class && p.pi_system));
                assert_eq!(p.sigma_algebra, p.algebra);
                for flag in ClassFlag::ALL {
                    assert_eq!(p.flag(flag), !p.witnesses.contains_key(&flag));
                }
            }
        }
    }

    #[test]
    fn hypothesis_and_equality_match_explicit_closures_n3() {
        let u = Universe::canonical(3).unwrap();
        for code in 0u64..256 {
            let f = SetFamily::from_masks(u.clone(), bits(code).map(|b| b as u64)).unwrap();
            let sigma = named_closure(&f, NamedClass::Sigma);
            for nullary in Nullary::ALL {
                let kappa = named_closure_with(&f, NamedClass::Kappa, nullary);
                let explicit = f.masks().iter().all(|&a| kappa.contains_mask(u.full_mask() & !a));
                assert_eq!(hypothesis_t31(&f, nullary).holds, explicit);
                assert_eq!(kappa_equals_sigma(&f, nullary), kappa == sigma);
            }
        }
    }

    #[test]
    fn complement_equivalence_for_nonempty_families_n4() {
        let u = Universe::canonical(4).unwrap();
        for code in 1u64..1 << 16 {
            let f = SetFamily::from_masks(u.clone(), bits(code).map(|b| b as u64)).unwrap();
            assert_eq!(
                kappa_equals_sigma(&f, Nullary::Include),
                hypothesis_t31(&f, Nullary::Include).holds,
                "{f:?}"
            );
        }
    }

    #[test]
    fn classify_is_relabeling_invariant() {
        let u = Universe::canonical(3).unwrap();
        let perms = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        for code in 0u64..256 {
            let f = SetFamily::from_masks(u.clone(), bits(code).map(|b| b as u64)).unwrap();
            let base = classify(&f, Nullary::Include);
            for perm in &perms {
                let p = classify(&f.permute(perm).unwrap(), Nullary::Include);
                for flag in ClassFlag::ALL {
                    assert_eq!(p.flag(flag), base.flag(flag));
                }
            }
        }
    }
}
