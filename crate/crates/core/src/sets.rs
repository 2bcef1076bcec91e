//! Finite universes, subsets as bit masks, and canonical set families.
//!
//! A [`Universe`] is an ordered list of distinct labels. Points are addressed
//! by index everywhere except at I/O boundaries, and a [`Subset`] is a `u64`
//! membership mask, so a universe holds at most [`MAX_POINTS`] points.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on universe size: one machine word per subset.
pub const MAX_POINTS: usize = 64;

/// Mask with the low `len` bits set.
#[inline]
pub fn full_mask(len: usize) -> u64 {
    debug_assert!(len <= MAX_POINTS);
    if len == MAX_POINTS {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Iterates the indices of set bits, lowest first.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Structural identity of a universe: a fingerprint of its label sequence.
///
/// Two universes built from the same labels in the same order compare equal,
/// so families parsed from different documents can be combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UniverseId {
    fingerprint: u64,
    len: u8,
}

impl UniverseId {
    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    fn of_labels(labels: &[String]) -> Self {
        // FNV-1a, with a separator byte so ["ab"] and ["a", "b"] differ.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for label in labels {
            for b in label.bytes().chain(std::iter::once(0xff)) {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        UniverseId {
            fingerprint: h,
            len: labels.len() as u8,
        }
    }
}

fn is_valid_label(label: &str) -> bool {
    !label.is_empty()
        && label
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// An ordered finite ground set of labeled points.
#[derive(Clone, PartialEq, Eq)]
pub struct Universe {
    id: UniverseId,
    labels: Arc<[String]>,
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Universe").field(&self.labels).finish()
    }
}

impl Universe {
    /// Builds a universe from distinct labels matching `[A-Za-z0-9_]+`.
    ///
    /// `DuplicateLabel` errors from here carry line 0; the document parser
    /// reports real line numbers.
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        if labels.len() > MAX_POINTS {
            return Err(Error::TooManyPoints {
                count: labels.len(),
                max: MAX_POINTS,
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if !is_valid_label(label) {
                return Err(Error::InvalidLabel(label.clone()));
            }
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel {
                    line: 0,
                    label: label.clone(),
                });
            }
        }
        Ok(Universe {
            id: UniverseId::of_labels(&labels),
            labels: labels.into(),
        })
    }

    /// The canonical `n`-point universe used by the scans: `a`, `b`, ... for
    /// `n <= 26`, otherwise `p0`, `p1`, ...
    pub fn canonical(n: usize) -> Result<Self> {
        if n <= 26 {
            Universe::new((0..n).map(|i| char::from(b'a' + i as u8).to_string()))
        } else {
            Universe::new((0..n).map(|i| format!("p{i}")))
        }
    }

    pub fn id(&self) -> UniverseId {
        self.id
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full_mask(&self) -> u64 {
        full_mask(self.len())
    }

    /// Ω as a subset.
    pub fn full(&self) -> Subset {
        Subset {
            mask: self.full_mask(),
            universe: self.id,
        }
    }

    /// ∅ as a subset.
    pub fn empty_set(&self) -> Subset {
        Subset {
            mask: 0,
            universe: self.id,
        }
    }

    pub fn subset(&self, mask: u64) -> Result<Subset> {
        if mask & !self.full_mask() != 0 {
            return Err(Error::MaskOutOfRange {
                mask,
                len: self.len(),
            });
        }
        Ok(Subset {
            mask,
            universe: self.id,
        })
    }

    /// Caller guarantees `mask` lies within the universe.
    pub(crate) fn subset_unchecked(&self, mask: u64) -> Subset {
        debug_assert_eq!(mask & !self.full_mask(), 0);
        Subset {
            mask,
            universe: self.id,
        }
    }

    pub fn subset_of_labels(&self, labels: &[&str]) -> Result<Subset> {
        let mut mask = 0u64;
        for label in labels {
            let i = self.index_of(label).ok_or_else(|| Error::UnknownLabel {
                line: 0,
                label: (*label).to_string(),
            })?;
            mask |= 1 << i;
        }
        Ok(self.subset_unchecked(mask))
    }

    pub fn check_point(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::PointOutOfRange {
                index,
                len: self.len(),
            })
        }
    }

    /// Labels of the members of `mask`, in universe order.
    pub fn labels_of(&self, mask: u64) -> Vec<String> {
        bits(mask).map(|i| self.labels[i].clone()).collect()
    }

    /// Renders a mask as `{a, b}`.
    pub fn render_mask(&self, mask: u64) -> String {
        format!("{{{}}}", self.labels_of(mask).join(", "))
    }

    pub fn check_same(&self, other: &Universe) -> Result<()> {
        if self.id == other.id {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }
}

/// A subset of a universe, stored as a membership mask (bit i ⟺ point i).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset {
    mask: u64,
    universe: UniverseId,
}

/// The Boolean operations of [`set_op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetOpKind {
    Union,
    Intersection,
    Difference,
    Complement,
    IsSubset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOpValue {
    Set(Subset),
    Truth(bool),
}

impl Subset {
    pub fn mask(self) -> u64 {
        self.mask
    }

    pub fn universe(self) -> UniverseId {
        self.universe
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    pub fn contains_point(self, index: usize) -> bool {
        index < 64 && self.mask >> index & 1 == 1
    }

    pub fn points(self) -> impl Iterator<Item = usize> {
        bits(self.mask)
    }

    fn same(self, other: Subset) -> Result<()> {
        if self.universe == other.universe {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    fn with_mask(self, mask: u64) -> Subset {
        Subset {
            mask,
            universe: self.universe,
        }
    }

    pub fn union(self, other: Subset) -> Result<Subset> {
        self.same(other)?;
        Ok(self.with_mask(self.mask | other.mask))
    }

    pub fn intersection(self, other: Subset) -> Result<Subset> {
        self.same(other)?;
        Ok(self.with_mask(self.mask & other.mask))
    }

    /// `self ∩ other^c`.
    pub fn difference(self, other: Subset) -> Result<Subset> {
        self.same(other)?;
        Ok(self.with_mask(self.mask & !other.mask))
    }

    /// Complement relative to Ω.
    pub fn complement(self) -> Subset {
        self.with_mask(!self.mask & full_mask(self.universe.len()))
    }

    pub fn is_subset(self, other: Subset) -> Result<bool> {
        self.same(other)?;
        Ok(self.mask & !other.mask == 0)
    }
}

/// Applies one Boolean operation. `Complement` ignores `b`; every other kind
/// requires it.
pub fn set_op(a: Subset, b: Option<Subset>, kind: SetOpKind) -> Result<SetOpValue> {
    let need = |b: Option<Subset>| {
        b.ok_or_else(|| Error::InvalidArgument(format!("{kind:?} needs a second operand")))
    };
    Ok(match kind {
        SetOpKind::Complement => SetOpValue::Set(a.complement()),
        SetOpKind::Union => SetOpValue::Set(a.union(need(b)?)?),
        SetOpKind::Intersection => SetOpValue::Set(a.intersection(need(b)?)?),
        SetOpKind::Difference => SetOpValue::Set(a.difference(need(b)?)?),
        SetOpKind::IsSubset => SetOpValue::Truth(a.is_subset(need(b)?)?),
    })
}

/// The value of an intersection over an empty index family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmptyMeetPolicy {
    /// The empty meet is Ω (the usual convention).
    #[default]
    Universe,
    /// The empty meet is ∅.
    Empty,
}

impl EmptyMeetPolicy {
    pub const ALL: [EmptyMeetPolicy; 2] = [EmptyMeetPolicy::Universe, EmptyMeetPolicy::Empty];

    pub fn empty_meet(self, full: u64) -> u64 {
        match self {
            EmptyMeetPolicy::Universe => full,
            EmptyMeetPolicy::Empty => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EmptyMeetPolicy::Universe => "universe",
            EmptyMeetPolicy::Empty => "empty",
        }
    }
}

/// A duplicate-free collection of subsets of one universe, kept sorted by
/// mask value.
#[derive(Clone, PartialEq, Eq)]
pub struct SetFamily {
    universe: Universe,
    masks: Vec<u64>,
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetFamily{}", self.render())
    }
}

impl SetFamily {
    pub fn empty(universe: Universe) -> Self {
        SetFamily {
            universe,
            masks: Vec::new(),
        }
    }

    pub fn from_masks<I: IntoIterator<Item = u64>>(universe: Universe, masks: I) -> Result<Self> {
        let full = universe.full_mask();
        let masks: Vec<u64> = masks.into_iter().collect();
        if let Some(&bad) = masks.iter().find(|&&m| m & !full != 0) {
            return Err(Error::MaskOutOfRange {
                mask: bad,
                len: universe.len(),
            });
        }
        Ok(SetFamily::from_masks_unchecked(universe, masks))
    }

    /// Caller guarantees every mask lies within the universe.
    pub(crate) fn from_masks_unchecked(universe: Universe, mut masks: Vec<u64>) -> Self {
        debug_assert!(masks.iter().all(|&m| m & !universe.full_mask() == 0));
        masks.sort_unstable();
        masks.dedup();
        SetFamily { universe, masks }
    }

    pub fn from_subsets<I: IntoIterator<Item = Subset>>(universe: Universe, subsets: I) -> Result<Self> {
        let mut masks = Vec::new();
        for s in subsets {
            if s.universe() != universe.id() {
                return Err(Error::UniverseMismatch);
            }
            masks.push(s.mask());
        }
        Ok(SetFamily::from_masks_unchecked(universe, masks))
    }

    /// Every subset of the universe. Only sensible for small universes.
    pub fn powerset(universe: Universe) -> Result<Self> {
        if universe.len() > 20 {
            return Err(Error::InvalidArgument(format!(
                "powerset of {} points is too large to enumerate",
                universe.len()
            )));
        }
        let masks = (0..=universe.full_mask()).collect();
        Ok(SetFamily { universe, masks })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn members(&self) -> impl Iterator<Item = Subset> + '_ {
        self.masks.iter().map(|&m| self.universe.subset_unchecked(m))
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        self.masks.binary_search(&mask).is_ok()
    }

    pub fn contains(&self, set: Subset) -> bool {
        set.universe() == self.universe.id() && self.contains_mask(set.mask())
    }

    /// Union of all members (∅ for the empty family).
    pub fn union_all(&self) -> u64 {
        self.masks.iter().fold(0, |acc, &m| acc | m)
    }

    /// True when the members cover Ω.
    pub fn covers_universe(&self) -> bool {
        self.union_all() == self.universe.full_mask()
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> Result<bool> {
        self.universe.check_same(&other.universe)?;
        Ok(self.masks.iter().all(|&m| other.contains_mask(m)))
    }

    /// A new family with `extra` masks added.
    pub fn with_masks<I: IntoIterator<Item = u64>>(&self, extra: I) -> Result<SetFamily> {
        SetFamily::from_masks(
            self.universe.clone(),
            self.masks.iter().copied().chain(extra),
        )
    }

    /// Relabels points: point `i` moves to index `perm[i]`. The universe
    /// labels are permuted along with the points.
    pub fn permute(&self, perm: &[usize]) -> Result<SetFamily> {
        let n = self.universe.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidArgument("not a permutation of the universe".into()));
        }
        let mut labels = vec![String::new(); n];
        for (i, &p) in perm.iter().enumerate() {
            labels[p] = self.universe.label(i).to_string();
        }
        let universe = Universe::new(labels)?;
        let masks = self.masks.iter().map(|&m| permute_mask(m, perm)).collect();
        Ok(SetFamily::from_masks_unchecked(universe, masks))
    }

    /// Shortlex ordering key: fewer members first, then member masks.
    pub fn shortlex_key(&self) -> (usize, &[u64]) {
        (self.masks.len(), &self.masks)
    }

    /// Renders the family inline as `{{}, {a}, {a, b}}`.
    pub fn render(&self) -> String {
        let inner: Vec<String> = self
            .masks
            .iter()
            .map(|&m| self.universe.render_mask(m))
            .collect();
        format!("{{{}}}", inner.join(", "))
    }
}

/// Moves bit `i` of `mask` to bit `perm[i]`.
pub fn permute_mask(mask: u64, perm: &[usize]) -> u64 {
    bits(mask).fold(0, |acc, i| acc | 1 << perm[i])
}
