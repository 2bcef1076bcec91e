//! Atoms of generated σ-algebras and generator atoms.
//!
//! On a finite universe the atom of σ(C) through ω is the set of points that
//! lie in exactly the same members of C as ω. [`atom_partition`] groups
//! points by that incidence signature instead of enumerating σ(C).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::sets::{bits, EmptyMeetPolicy, SetFamily, Subset, Universe};

/// Which members of a family contain a point (bit j ⟺ point ∈ member j, in
/// canonical member order).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    pub point: usize,
    pub incidence: Vec<u64>,
}

impl Signature {
    pub fn contains_member(&self, j: usize) -> bool {
        self.incidence.get(j / 64).is_some_and(|w| w >> (j % 64) & 1 == 1)
    }
}

/// Signatures of every point, by transposing the membership matrix.
pub fn signatures(family: &SetFamily) -> Vec<Signature> {
    let n = family.universe().len();
    let words = family.len().div_ceil(64);
    let mut out: Vec<Signature> = (0..n)
        .map(|point| Signature {
            point,
            incidence: vec![0; words],
        })
        .collect();
    for (j, &m) in family.masks().iter().enumerate() {
        for p in bits(m) {
            out[p].incidence[j / 64] |= 1 << (j % 64);
        }
    }
    out
}

/// A partition of a universe into nonempty blocks, ordered by smallest point.
#[derive(Clone, PartialEq, Eq)]
pub struct Partition {
    universe: Universe,
    blocks: Vec<u64>,
}

impl std::fmt::Debug for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Partition{}", self.render())
    }
}

impl Partition {
    /// Validates and canonicalizes a list of blocks.
    pub fn from_blocks<I: IntoIterator<Item = u64>>(universe: Universe, blocks: I) -> Result<Self> {
        let mut blocks: Vec<u64> = blocks.into_iter().collect();
        let mut seen = 0u64;
        for &b in &blocks {
            if b == 0 || b & seen != 0 || b & !universe.full_mask() != 0 {
                return Err(Error::InvalidArgument(
                    "blocks must be nonempty, disjoint and inside the universe".into(),
                ));
            }
            seen |= b;
        }
        if seen != universe.full_mask() {
            return Err(Error::InvalidArgument("blocks do not cover the universe".into()));
        }
        blocks.sort_unstable_by_key(|b| b.trailing_zeros());
        Ok(Partition { universe, blocks })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn block_masks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn blocks(&self) -> impl Iterator<Item = Subset> + '_ {
        self.blocks.iter().map(|&b| self.universe.subset_unchecked(b))
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_mask_of(&self, point: usize) -> u64 {
        self.blocks
            .iter()
            .copied()
            .find(|b| b >> point & 1 == 1)
            .expect("partition covers the universe")
    }

    pub fn block_of(&self, point: usize) -> Result<Subset> {
        self.universe.check_point(point)?;
        Ok(self.universe.subset_unchecked(self.block_mask_of(point)))
    }

    /// True when every block of `self` sits inside some block of `coarse`.
    pub fn refines(&self, coarse: &Partition) -> Result<bool> {
        self.universe.check_same(&coarse.universe)?;
        Ok(self.blocks.iter().all(|&b| {
            let p = b.trailing_zeros() as usize;
            b & !coarse.block_mask_of(p) == 0
        }))
    }

    pub fn render(&self) -> String {
        let inner: Vec<String> = self.blocks.iter().map(|&b| self.universe.render_mask(b)).collect();
        format!("{{{}}}", inner.join(" | "))
    }
}

pub fn refines(fine: &Partition, coarse: &Partition) -> Result<bool> {
    fine.refines(coarse)
}

/// The atoms of σ(C): points grouped by equal signature.
pub fn atom_partition(family: &SetFamily) -> Partition {
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut blocks: Vec<u64> = Vec::new();
    // Points are visited in ascending order, so blocks come out sorted by
    // smallest point.
    for sig in signatures(family) {
        let next = blocks.len();
        let slot = *index.entry(sig.incidence).or_insert(next);
        if slot == next {
            blocks.push(0);
        }
        blocks[slot] |= 1 << sig.point;
    }
    Partition {
        universe: family.universe().clone(),
        blocks,
    }
}

/// Mask-level generator atom: meet of the members containing `point`.
pub fn generator_atom_mask(family: &SetFamily, point: usize, policy: EmptyMeetPolicy) -> u64 {
    let full = family.universe().full_mask();
    family
        .masks()
        .iter()
        .filter(|&&m| m >> point & 1 == 1)
        .fold(None, |acc: Option<u64>, &m| Some(acc.unwrap_or(full) & m))
        .unwrap_or_else(|| policy.empty_meet(full))
}

/// A_C(ω): the intersection of the members of C containing ω. When no member
/// contains ω the result is set by `policy`.
pub fn generator_atom(family: &SetFamily, point: usize, policy: EmptyMeetPolicy) -> Result<Subset> {
    family.universe().check_point(point)?;
    Ok(family
        .universe()
        .subset_unchecked(generator_atom_mask(family, point, policy)))
}

/// Literal intersection of every member of `explicit_family` containing
/// `point`, Ω when there is none.
pub fn naive_atom(explicit_family: &SetFamily, point: usize) -> Result<Subset> {
    generator_atom(explicit_family, point, EmptyMeetPolicy::Universe)
}

/// True when every atom of σ(C) is a single point.
pub fn is_hausdorff(family: &SetFamily) -> bool {
    atom_partition(family).len() == family.universe().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::{named_closure, NamedClass};

    fn fam(n: usize, masks: &[u64]) -> SetFamily {
        SetFamily::from_masks(Universe::canonical(n).unwrap(), masks.iter().copied()).unwrap()
    }

    #[test]
    fn partition_examples() {
        assert_eq!(atom_partition(&fam(3, &[0b011, 0b110])).block_masks(), &[1, 2, 4]);
        assert_eq!(atom_partition(&fam(3, &[])).block_masks(), &[0b111]);
        assert_eq!(atom_partition(&fam(3, &[0b011])).block_masks(), &[0b011, 0b100]);
    }

    #[test]
    fn generator_atom_examples() {
        let f = fam(3, &[0b011, 0b110]);
        assert_eq!(generator_atom(&f, 1, EmptyMeetPolicy::Universe).unwrap().mask(), 0b010);

        // {∅,{a},{b},{a,b}}: c is in no member.
        let f = fam(3, &[0, 0b001, 0b010, 0b011]);
        assert_eq!(generator_atom(&f, 2, EmptyMeetPolicy::Universe).unwrap().mask(), 0b111);
        assert_eq!(generator_atom(&f, 2, EmptyMeetPolicy::Empty).unwrap().mask(), 0);
        let sigma = named_closure(&f, NamedClass::Sigma);
        assert_eq!(naive_atom(&sigma, 2).unwrap().mask(), 0b100);

        let f = fam(1, &[]);
        assert_eq!(generator_atom(&f, 0, EmptyMeetPolicy::Universe).unwrap().mask(), 1);
        assert!(generator_atom(&f, 1, EmptyMeetPolicy::Universe).is_err());
    }

    #[test]
    fn naive_atom_examples() {
        let u = Universe::canonical(3).unwrap();
        let power = SetFamily::powerset(u).unwrap();
        assert_eq!(naive_atom(&power, 0).unwrap().mask(), 0b001);
        let f = fam(3, &[0, 0b011, 0b100, 0b111]);
        assert_eq!(naive_atom(&f, 0).unwrap().mask(), 0b011);
        let sigma = named_closure(&fam(3, &[0b011, 0b110]), NamedClass::Sigma);
        assert_eq!(naive_atom(&sigma, 2).unwrap().mask(), 0b100);
    }

    #[test]
    fn refinement() {
        let u = Universe::canonical(3).unwrap();
        let fine = Partition::from_blocks(u.clone(), [1, 2, 4]).unwrap();
        let coarse = Partition::from_blocks(u.clone(), [4, 3]).unwrap();
        assert_eq!(coarse.block_masks(), &[3, 4]);
        assert!(refines(&fine, &coarse).unwrap());
        assert!(!refines(&coarse, &fine).unwrap());
        assert!(refines(&fine, &fine).unwrap());
        let other = Partition::from_blocks(Universe::canonical(2).unwrap(), [3]).unwrap();
        assert_eq!(refines(&fine, &other), Err(Error::UniverseMismatch));
        assert!(Partition::from_blocks(u.clone(), [1, 2]).is_err());
        assert!(Partition::from_blocks(u, [3, 6]).is_err());
    }

    #[test]
    fn hausdorff() {
        assert!(is_hausdorff(&fam(2, &[1, 2])));
        assert!(!is_hausdorff(&fam(2, &[])));
        assert!(is_hausdorff(&fam(3, &[0b011, 0b110])));
    }

    #[test]
    fn signature_incidence_spans_words() {
        let masks: Vec<u64> = (0..100).collect();
        let f = fam(7, &masks);
        let sigs = signatures(&f);
        assert_eq!(sigs[0].incidence.len(), 2);
        for (j, &m) in f.masks().iter().enumerate() {
            for s in &sigs {
                assert_eq!(s.contains_member(j), m >> s.point & 1 == 1);
            }
        }
    }

    #[test]
    fn oracle_equivalence_and_generator_bounds_n3() {
        let u = Universe::canonical(3).unwrap();
        for code in 0u64..256 {
            let f = SetFamily::from_masks(u.clone(), bits(code).map(|b| b as u64)).unwrap();
            let part = atom_partition(&f);
            let sigma = named_closure(&f, NamedClass::Sigma);
            let padded = f.with_masks([0, u.full_mask()]).unwrap();
            assert_eq!(atom_partition(&padded), part);
            let unions = named_closure(&f, NamedClass::UnionF);
            for p in 0..3 {
                let block = part.block_mask_of(p);
                assert_eq!(naive_atom(&sigma, p).unwrap().mask(), block);
                let g = generator_atom_mask(&f, p, EmptyMeetPolicy::Universe);
                assert_eq!(block & !g, 0, "generator atom contains the σ-atom");
                assert!(g >> p & 1 == 1);
                let covered = f.masks().iter().any(|m| m >> p & 1 == 1);
                let ge = generator_atom_mask(&f, p, EmptyMeetPolicy::Empty);
                assert_eq!(ge >> p & 1 == 1, covered);
                assert_eq!(generator_atom_mask(&unions, p, EmptyMeetPolicy::Universe), g);
            }
        }
    }
}
