//! Fixed-point closure of set families and the named closure classes.
//!
//! Every universe here is finite, so countable unions and intersections are
//! finite ones: κ closes under pairwise ∪ and ∩, C_σ is C_∪f, C_δ is C_∩f,
//! C_Σσ is C_Σf, and a σ-algebra is just an algebra. A monotone sequence of
//! subsets of a finite set is eventually constant, so the monotone class
//! generated by a family is the family itself.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::atoms::atom_partition;
use crate::error::{Error, Result};
use crate::sets::{bits, SetFamily};

/// Whether empty unions (∅) and empty intersections (Ω) are granted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nullary {
    #[default]
    Include,
    Exclude,
}

impl Nullary {
    pub const ALL: [Nullary; 2] = [Nullary::Include, Nullary::Exclude];

    pub fn name(self) -> &'static str {
        match self {
            Nullary::Include => "include",
            Nullary::Exclude => "exclude",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureOp {
    PairUnion,
    PairIntersection,
    Complement,
    /// `A ∩ B^c` for `B ⊆ A`.
    ProperDifference,
    /// `A ∪ B` for disjoint `A`, `B`.
    DisjointPairUnion,
    AdjoinUniverse,
    AdjoinEmpty,
}

/// Which operations a closure must be stable under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureSpec {
    ops: BTreeSet<ClosureOp>,
    nullary: Nullary,
}

impl ClosureSpec {
    pub fn new<I: IntoIterator<Item = ClosureOp>>(ops: I, nullary: Nullary) -> Self {
        ClosureSpec {
            ops: ops.into_iter().collect(),
            nullary,
        }
    }

    pub fn has(&self, op: ClosureOp) -> bool {
        self.ops.contains(&op)
    }

    pub fn nullary(&self) -> Nullary {
        self.nullary
    }

    pub fn ops(&self) -> impl Iterator<Item = ClosureOp> + '_ {
        self.ops.iter().copied()
    }
}

/// The least family containing `family` and closed under every op in `spec`.
///
/// Worst case is the full powerset, so this is only practical when the
/// result is small.
pub fn close(family: &SetFamily, spec: &ClosureSpec) -> SetFamily {
    let masks = close_masks(family.masks(), family.universe().full_mask(), spec);
    SetFamily::from_masks_unchecked(family.universe().clone(), masks)
}

/// Mask-level worklist fixed point. Returns a sorted, duplicate-free vector.
pub fn close_masks(seed: &[u64], full: u64, spec: &ClosureSpec) -> Vec<u64> {
    let union = spec.has(ClosureOp::PairUnion);
    let inter = spec.has(ClosureOp::PairIntersection);
    let compl = spec.has(ClosureOp::Complement);
    let pdiff = spec.has(ClosureOp::ProperDifference);
    let dunion = spec.has(ClosureOp::DisjointPairUnion);

    let mut initial: Vec<u64> = seed.to_vec();
    if spec.has(ClosureOp::AdjoinUniverse) {
        initial.push(full);
    }
    if spec.has(ClosureOp::AdjoinEmpty) {
        initial.push(0);
    }
    if spec.nullary == Nullary::Include {
        if inter {
            initial.push(full);
        }
        if union {
            initial.push(0);
        }
    }
    initial.sort_unstable();
    initial.dedup();

    let mut seen: HashSet<u64> = initial.iter().copied().collect();
    let mut known = initial.clone();
    let mut frontier = initial;

    while !frontier.is_empty() {
        let mut fresh = BTreeSet::new();
        let mut offer = |m: u64| {
            if !seen.contains(&m) {
                fresh.insert(m);
            }
        };
        for &x in &frontier {
            if compl {
                offer(!x & full);
            }
            for &y in &known {
                if union {
                    offer(x | y);
                }
                if inter {
                    offer(x & y);
                }
                if dunion && x & y == 0 {
                    offer(x | y);
                }
                if pdiff {
                    if y & !x == 0 {
                        offer(x & !y);
                    }
                    if x & !y == 0 {
                        offer(y & !x);
                    }
                }
            }
        }
        seen.extend(fresh.iter().copied());
        frontier = fresh.into_iter().collect();
        known.extend_from_slice(&frontier);
        known.sort_unstable();
    }
    known
}

/// The closure classes with names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedClass {
    /// Closed under (countable, here finite) unions and intersections.
    Kappa,
    Sigma,
    Lambda,
    Monotone,
    UnionF,
    InterF,
    DisjunionF,
    /// `(C_σ)_δ`: finite intersections of finite unions.
    SigmaDelta,
}

impl NamedClass {
    pub const ALL: [NamedClass; 8] = [
        NamedClass::Kappa,
        NamedClass::Sigma,
        NamedClass::Lambda,
        NamedClass::Monotone,
        NamedClass::UnionF,
        NamedClass::InterF,
        NamedClass::DisjunionF,
        NamedClass::SigmaDelta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedClass::Kappa => "kappa",
            NamedClass::Sigma => "sigma",
            NamedClass::Lambda => "lambda",
            NamedClass::Monotone => "monotone",
            NamedClass::UnionF => "union-f",
            NamedClass::InterF => "inter-f",
            NamedClass::DisjunionF => "disjunion-f",
            NamedClass::SigmaDelta => "sigma-delta",
        }
    }

    pub fn from_name(name: &str) -> Option<NamedClass> {
        NamedClass::ALL.into_iter().find(|c| c.name() == name)
    }

    /// The `ClosureSpec` for single-pass classes. `Monotone` is the identity and
    /// `SigmaDelta` is two passes, so neither has one. `nullary` only
    /// matters for `Kappa`.
    pub fn spec(self, nullary: Nullary) -> Option<ClosureSpec> {
        use ClosureOp::*;
        let ex = Nullary::Exclude;
        Some(match self {
            NamedClass::Kappa => ClosureSpec::new([PairUnion, PairIntersection], nullary),
            NamedClass::Sigma => ClosureSpec::new([PairUnion, Complement, AdjoinUniverse], ex),
            NamedClass::Lambda => ClosureSpec::new([ProperDifference, AdjoinUniverse], ex),
            NamedClass::UnionF => ClosureSpec::new([PairUnion], ex),
            NamedClass::InterF => ClosureSpec::new([PairIntersection], ex),
            NamedClass::DisjunionF => ClosureSpec::new([DisjointPairUnion], ex),
            NamedClass::Monotone | NamedClass::SigmaDelta => return None,
        })
    }
}

/// Named closure with the default nullary mode (`Include`) for κ.
pub fn named_closure(family: &SetFamily, class: NamedClass) -> SetFamily {
    named_closure_with(family, class, Nullary::Include)
}

pub fn named_closure_with(family: &SetFamily, class: NamedClass, nullary: Nullary) -> SetFamily {
    match class {
        NamedClass::Monotone => family.clone(),
        NamedClass::SigmaDelta => {
            let unions = named_closure_with(family, NamedClass::UnionF, nullary);
            named_closure_with(&unions, NamedClass::InterF, nullary)
        }
        other => close(family, &other.spec(nullary).expect("single-pass class")),
    }
}

pub const DEFAULT_SIGMA_BUDGET: u64 = 1 << 20;

/// σ(C) as every union of atom blocks, ∅ included.
pub fn sigma_via_atoms(family: &SetFamily) -> Result<SetFamily> {
    sigma_via_atoms_with_budget(family, DEFAULT_SIGMA_BUDGET)
}

pub fn sigma_via_atoms_with_budget(family: &SetFamily, budget: u64) -> Result<SetFamily> {
    let blocks = atom_partition(family).block_masks().to_vec();
    let k = blocks.len();
    if k >= 64 || (1u64 << k) > budget {
        return Err(Error::OverflowGuard { atoms: k, budget });
    }
    let masks = (0u64..1 << k)
        .map(|choice| bits(choice).fold(0, |acc, b| acc | blocks[b]))
        .collect();
    Ok(SetFamily::from_masks_unchecked(family.universe().clone(), masks))
}

/// Membership in κ(C) without enumerating it.
///
/// A nonempty set lies in the ∪/∩ lattice generated by C exactly when each
/// of its points is covered by some member and the intersection of all
/// members through that point stays inside the set; ∅ lies in it exactly when
/// some finite intersection of members, hence the intersection of all of
/// them, is empty. `Include` adds ∅ and Ω on top.
#[derive(Debug, Clone)]
pub struct KappaIndex {
    /// Per point: meet of the members containing it, if any.
    meets: Vec<Option<u64>>,
    meet_all: Option<u64>,
    full: u64,
    nullary: Nullary,
}

impl KappaIndex {
    pub fn new(family: &SetFamily, nullary: Nullary) -> Self {
        let n = family.universe().len();
        let full = family.universe().full_mask();
        let mut meets: Vec<Option<u64>> = vec![None; n];
        let mut meet_all = None;
        for &m in family.masks() {
            meet_all = Some(meet_all.unwrap_or(full) & m);
            for p in bits(m) {
                meets[p] = Some(meets[p].unwrap_or(full) & m);
            }
        }
        KappaIndex {
            meets,
            meet_all,
            full,
            nullary,
        }
    }

    pub fn contains(&self, mask: u64) -> bool {
        if self.nullary == Nullary::Include && (mask == 0 || mask == self.full) {
            return true;
        }
        if mask == 0 {
            return self.meet_all == Some(0);
        }
        bits(mask).all(|p| matches!(self.meets[p], Some(meet) if meet & !mask == 0))
    }
}

/// Membership in C_σδ without enumerating it.
///
/// `S` is an intersection of finite unions of members exactly when some
/// union covers it and, for every point `x` outside `S`, the union of the
/// members avoiding `x` is nonempty-indexed and still covers `S`.
#[derive(Debug, Clone)]
pub struct SigmaDeltaIndex {
    nonempty: bool,
    cover: u64,
    /// Per point: union of the members not containing it, if any.
    avoiding: Vec<Option<u64>>,
    full: u64,
}

impl SigmaDeltaIndex {
    pub fn new(family: &SetFamily) -> Self {
        let n = family.universe().len();
        let mut avoiding: Vec<Option<u64>> = vec![None; n];
        for &m in family.masks() {
            for (x, slot) in avoiding.iter_mut().enumerate() {
                if m >> x & 1 == 0 {
                    *slot = Some(slot.unwrap_or(0) | m);
                }
            }
        }
        SigmaDeltaIndex {
            nonempty: !family.is_empty(),
            cover: family.union_all(),
            avoiding,
            full: family.universe().full_mask(),
        }
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.nonempty
            && mask & !self.cover == 0
            && bits(!mask & self.full)
                .all(|x| matches!(self.avoiding[x], Some(w) if mask & !w == 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::Universe;
    use proptest::prelude::*;

    fn abc(masks: &[u64]) -> SetFamily {
        SetFamily::from_masks(Universe::canonical(3).unwrap(), masks.iter().copied()).unwrap()
    }

    /// Oracle: repeat full pairwise sweeps until nothing changes.
    fn naive_close(seed: &[u64], full: u64, spec: &ClosureSpec) -> Vec<u64> {
        let mut set: BTreeSet<u64> = seed.iter().copied().collect();
        if spec.has(ClosureOp::AdjoinUniverse) {
            set.insert(full);
        }
        if spec.has(ClosureOp::AdjoinEmpty) {
            set.insert(0);
        }
        if spec.nullary() == Nullary::Include {
            if spec.has(ClosureOp::PairIntersection) {
                set.insert(full);
            }
            if spec.has(ClosureOp::PairUnion) {
                set.insert(0);
            }
        }
        loop {
            let cur: Vec<u64> = set.iter().copied().collect();
            let before = set.len();
            for &a in &cur {
                if spec.has(ClosureOp::Complement) {
                    set.insert(full & !a);
                }
                for &b in &cur {
                    if spec.has(ClosureOp::PairUnion) {
                        set.insert(a | b);
                    }
                    if spec.has(ClosureOp::PairIntersection) {
                        set.insert(a & b);
                    }
                    if spec.has(ClosureOp::DisjointPairUnion) && a & b == 0 {
                        set.insert(a | b);
                    }
                    if spec.has(ClosureOp::ProperDifference) && b & !a == 0 {
                        set.insert(a & !b);
                    }
                }
            }
            if set.len() == before {
                return set.into_iter().collect();
            }
        }
    }

    #[test]
    fn union_intersection_example() {
        // {a,b}, {b,c} → adds {b} and {a,b,c}
        let f = abc(&[0b011, 0b110]);
        let spec = ClosureSpec::new([ClosureOp::PairUnion, ClosureOp::PairIntersection], Nullary::Exclude);
        assert_eq!(close(&f, &spec).masks(), &[0b010, 0b011, 0b110, 0b111]);
        assert_eq!(naive_close(f.masks(), 0b111, &spec), vec![0b010, 0b011, 0b110, 0b111]);
    }

    #[test]
    fn empty_union_only() {
        let f = abc(&[]);
        let spec = ClosureSpec::new([ClosureOp::PairUnion], Nullary::Include);
        assert_eq!(close(&f, &spec).masks(), &[0]);
    }

    #[test]
    fn kappa_of_singletons_is_powerset() {
        let f = abc(&[0b001, 0b010, 0b100]);
        let k = named_closure(&f, NamedClass::Kappa);
        assert_eq!(k.masks(), (0..8).collect::<Vec<_>>().as_slice());
        let k = named_closure_with(&f, NamedClass::Kappa, Nullary::Exclude);
        assert_eq!(k.len(), 8);
    }

    #[test]
    fn sigma_of_one_proper_set() {
        let u = Universe::canonical(2).unwrap();
        let f = SetFamily::from_masks(u, [0b01]).unwrap();
        assert_eq!(named_closure(&f, NamedClass::Sigma).masks(), &[0, 1, 2, 3]);
    }

    #[test]
    fn monotone_is_identity() {
        for raw in 0u64..256 {
            let f = abc(&bits(raw).map(|b| b as u64).collect::<Vec<_>>());
            assert_eq!(named_closure(&f, NamedClass::Monotone), f);
        }
    }

    #[test]
    fn sigma_via_atoms_examples() {
        assert_eq!(sigma_via_atoms(&abc(&[0b011, 0b110])).unwrap().len(), 8);
        let u = Universe::canonical(2).unwrap();
        assert_eq!(sigma_via_atoms(&SetFamily::empty(u)).unwrap().masks(), &[0, 0b11]);
        assert_eq!(
            sigma_via_atoms(&abc(&[0b011])).unwrap().masks(),
            &[0, 0b011, 0b100, 0b111]
        );
    }

    #[test]
    fn sigma_via_atoms_budget() {
        let u = Universe::canonical(30).unwrap();
        let singles: Vec<u64> = (0..30).map(|i| 1u64 << i).collect();
        let f = SetFamily::from_masks(u, singles).unwrap();
        assert_eq!(
            sigma_via_atoms(&f),
            Err(Error::OverflowGuard {
                atoms: 30,
                budget: DEFAULT_SIGMA_BUDGET
            })
        );

        let u = Universe::canonical(12).unwrap();
        let f = SetFamily::from_masks(u, (0..12).map(|i| 1u64 << i)).unwrap();
        assert_eq!(sigma_via_atoms_with_budget(&f, 1 << 12).unwrap().len(), 1 << 12);
        assert!(sigma_via_atoms_with_budget(&f, (1 << 12) - 1).is_err());
    }

    /// Every family on three points, as member masks.
    fn all_families_n3() -> impl Iterator<Item = SetFamily> {
        (0u64..256).map(|code| abc(&bits(code).map(|b| b as u64).collect::<Vec<_>>()))
    }

    #[test]
    fn sigma_routes_agree_exhaustively_n3() {
        for f in all_families_n3() {
            assert_eq!(sigma_via_atoms(&f).unwrap(), named_closure(&f, NamedClass::Sigma), "{f:?}");
        }
    }

    #[test]
    fn sigma_size_is_power_of_atom_count() {
        for n in 1..=4 {
            let u = Universe::canonical(n).unwrap();
            let subsets = 1u64 << n;
            for code in 0u64..1 << subsets {
                let f = SetFamily::from_masks(u.clone(), bits(code).map(|b| b as u64)).unwrap();
                let atoms = atom_partition(&f).len();
                assert_eq!(named_closure(&f, NamedClass::Sigma).len(), 1 << atoms);
            }
        }
    }

    #[test]
    fn inclusion_chain_n3() {
        for f in all_families_n3() {
            let sigma = named_closure(&f, NamedClass::Sigma);
            let unions = named_closure(&f, NamedClass::UnionF);
            for nullary in Nullary::ALL {
                let kappa = named_closure_with(&f, NamedClass::Kappa, nullary);
                let m = named_closure(&f, NamedClass::Monotone);
                assert!(m.is_subfamily_of(&kappa).unwrap());
                assert!(kappa.is_subfamily_of(&sigma).unwrap());
                assert_eq!(named_closure_with(&unions, NamedClass::Kappa, nullary), kappa);
            }
            let lambda = named_closure(&unions, NamedClass::Lambda);
            assert!(lambda.is_subfamily_of(&sigma).unwrap());
        }
    }

    #[test]
    fn fast_membership_matches_explicit_closures() {
        for n in 1..=4 {
            let u = Universe::canonical(n).unwrap();
            let subsets = 1u64 << n;
            let step = if n == 4 { 7 } else { 1 };
            for code in (0u64..1 << subsets).step_by(step) {
                let f = SetFamily::from_masks(u.clone(), bits(code).map(|b| b as u64)).unwrap();
                for nullary in Nullary::ALL {
                    let kappa = named_closure_with(&f, NamedClass::Kappa, nullary);
                    let idx = KappaIndex::new(&f, nullary);
                    for s in 0..subsets {
                        assert_eq!(idx.contains(s), kappa.contains_mask(s), "{f:?} {s:b} {nullary:?}");
                    }
                }
                let sd = named_closure(&f, NamedClass::SigmaDelta);
                let idx = SigmaDeltaIndex::new(&f);
                for s in 0..subsets {
                    assert_eq!(idx.contains(s), sd.contains_mask(s), "{f:?} {s:b}");
                }
            }
        }
    }

    fn arb_family() -> impl Strategy<Value = SetFamily> {
        (1usize..=6).prop_flat_map(|n| {
            proptest::collection::vec(0u64..1 << n, 0..10).prop_map(move |masks| {
                SetFamily::from_masks(Universe::canonical(n).unwrap(), masks).unwrap()
            })
        })
    }

    fn arb_spec() -> impl Strategy<Value = ClosureSpec> {
        use ClosureOp::*;
        let all = [
            PairUnion,
            PairIntersection,
            Complement,
            ProperDifference,
            DisjointPairUnion,
            AdjoinUniverse,
            AdjoinEmpty,
        ];
        (any::<u8>(), any::<bool>()).prop_map(move |(pick, inc)| {
            let ops = all.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &o)| o);
            ClosureSpec::new(ops, if inc { Nullary::Include } else { Nullary::Exclude })
        })
    }

    proptest! {
        #[test]
        fn closure_laws(f in arb_family(), spec in arb_spec(), extra in any::<u64>()) {
            let c = close(&f, &spec);
            prop_assert!(f.is_subfamily_of(&c).unwrap());
            prop_assert_eq!(&close(&c, &spec), &c);
            let full = f.universe().full_mask();
            let oracle = naive_close(f.masks(), full, &spec);
            prop_assert_eq!(c.masks(), oracle.as_slice());
            let bigger = f.with_masks([extra & full]).unwrap();
            prop_assert!(c.is_subfamily_of(&close(&bigger, &spec)).unwrap());
        }

        #[test]
        fn closure_commutes_with_relabeling(f in arb_family(), seed in any::<u64>(), class_idx in 0usize..8) {
            let n = f.universe().len();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let class = NamedClass::ALL[class_idx];
            let lhs = named_closure(&f.permute(&perm).unwrap(), class);
            let rhs = named_closure(&f, class).permute(&perm).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
