use crate::atoms::generator_atom_mask;
use crate::closure::{named_closure, sigma_via_atoms, NamedClass};
use crate::error::Result;
use crate::sets::{EmptyMeetPolicy, SetFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaChecks {
    pub contains_c: bool,
    pub contains_c_sigma: bool,
    pub closed_pair_union: bool,
    pub closed_pair_intersection: bool,
    /// A_C(ω) = A_{C_σ}(ω), with C_σ realized as the finite-union closure.
    pub claim_ac_sigma_equal: bool,
}

impl LemmaChecks {
    pub fn all_pass(&self) -> bool {
        self.contains_c
            && self.contains_c_sigma
            && self.closed_pair_union
            && self.closed_pair_intersection
            && self.claim_ac_sigma_equal
    }

    pub fn entries(&self) -> [(&'static str, bool); 5] {
        [
            ("contains_c", self.contains_c),
            ("contains_c_sigma", self.contains_c_sigma),
            ("closed_pair_union", self.closed_pair_union),
            ("closed_pair_intersection", self.closed_pair_intersection),
            ("claim_ac_sigma_equal", self.claim_ac_sigma_equal),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub point: usize,
    /// A_C(ω) under the Ω empty-meet convention.
    pub generator_atom: u64,
    /// G = {B ∈ σ(C) : ω ∉ B, or A_C(ω) ⊆ B}.
    pub g_family: SetFamily,
    pub checks: LemmaChecks,
}

/// Builds G for `point` from the enumerated σ(C) and checks its closure
/// properties and the C_σ claim.
pub fn verify_lemma_3_1(family: &SetFamily, point: usize) -> Result<LemmaReport> {
    let u = family.universe();
    u.check_point(point)?;
    let policy = EmptyMeetPolicy::Universe;
    let sigma = sigma_via_atoms(family)?;
    let atom = generator_atom_mask(family, point, policy);
    let in_g = |b: u64| b >> point & 1 == 0 || atom & !b == 0;
    let g_family = SetFamily::from_masks_unchecked(
        u.clone(),
        sigma.masks().iter().copied().filter(|&b| in_g(b)).collect(),
    );
    let unions = named_closure(family, NamedClass::UnionF);

    let g = g_family.masks();
    let pairs = || g.iter().enumerate().flat_map(|(i, &a)| g[i..].iter().map(move |&b| (a, b)));
    let checks = LemmaChecks {
        contains_c: family.masks().iter().all(|&m| g_family.contains_mask(m)),
        contains_c_sigma: unions.masks().iter().all(|&m| g_family.contains_mask(m)),
        closed_pair_union: pairs().all(|(a, b)| g_family.contains_mask(a | b)),
        closed_pair_intersection: pairs().all(|(a, b)| g_family.contains_mask(a & b)),
        claim_ac_sigma_equal: generator_atom_mask(&unions, point, policy) == atom,
    };
    Ok(LemmaReport {
        point,
        generator_atom: atom,
        g_family,
        checks,
    })
}
