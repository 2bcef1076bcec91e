use serde::Serialize;

use crate::atoms::{atom_partition, Partition};
use crate::closure::{named_closure, NamedClass};
use crate::error::Result;
use crate::sets::SetFamily;

/// How σ(f1) relates to σ(f2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    /// σ(f1) ⊊ σ(f2).
    ProperSubset,
    /// σ(f1) ⊋ σ(f2).
    ProperSuperset,
    Incomparable,
}

impl Relation {
    fn from_inclusions(first_in_second: bool, second_in_first: bool) -> Relation {
        match (first_in_second, second_in_first) {
            (true, true) => Relation::Equal,
            (true, false) => Relation::ProperSubset,
            (false, true) => Relation::ProperSuperset,
            (false, false) => Relation::Incomparable,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Relation::Equal => "equal",
            Relation::ProperSubset => "proper_subset",
            Relation::ProperSuperset => "proper_superset",
            Relation::Incomparable => "incomparable",
        }
    }
}

/// Above this many atoms the explicit σ enumeration is skipped.
pub const ENUMERATION_MAX_ATOMS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlackwellReport {
    pub atoms_first: Partition,
    pub atoms_second: Partition,
    /// Verdict from partition refinement.
    pub relation: Relation,
    /// Verdict from enumerating both σ-algebras; `None` when too large.
    pub by_enumeration: Option<Relation>,
}

impl BlackwellReport {
    pub fn consistent(&self) -> bool {
        self.by_enumeration.is_none_or(|r| r == self.relation)
    }
}

/// Decides inclusion between σ(f1) and σ(f2) by comparing atom partitions:
/// σ(f1) ⊆ σ(f2) exactly when the atoms of f2 refine those of f1.
pub fn blackwell_compare(f1: &SetFamily, f2: &SetFamily) -> Result<BlackwellReport> {
    f1.universe().check_same(f2.universe())?;
    let atoms_first = atom_partition(f1);
    let atoms_second = atom_partition(f2);
    let relation = Relation::from_inclusions(
        atoms_second.refines(&atoms_first)?,
        atoms_first.refines(&atoms_second)?,
    );
    let by_enumeration = if atoms_first.len().max(atoms_second.len()) <= ENUMERATION_MAX_ATOMS {
        let s1 = named_closure(f1, NamedClass::Sigma);
        let s2 = named_closure(f2, NamedClass::Sigma);
        Some(Relation::from_inclusions(s1.is_subfamily_of(&s2)?, s2.is_subfamily_of(&s1)?))
    } else {
        None
    };
    Ok(BlackwellReport {
        atoms_first,
        atoms_second,
        relation,
        by_enumeration,
    })
}
