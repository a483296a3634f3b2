//! Preservation criteria for localizations.
//!
//! A verdict is either a certificate that the sufficient double-coset
//! condition holds, or [`Verdict::NoGuarantee`] with the instances where it
//! fails. The criterion is one-directional, so there is no negative verdict.

mod cyclic;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::group::{ElementId, SubgroupId, SubgroupLattice};
use crate::spectrum::{BalmerPrime, ChromaticPoint, EllVector, LocusViolation, SpectrumError, SupportData, VanishingLocus};
use crate::transfer::{TransferError, TransferSystem};

pub use cyclic::{
    cross_validate_cpn, ell_commutative_condition, ell_norm_condition, enumerate_commutative_ell, enumerate_ell,
    CrossValidationReport, Disagreement, MAX_CROSS_BOUND, MAX_CROSS_N, MAX_ENUM_BOUND, MAX_ENUM_N,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("subgroup {k} is not contained in {h}")]
    NotNested { k: SubgroupId, h: SubgroupId },
    #[error("invalid vanishing locus: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidLocus(Vec<LocusViolation>),
    #[error("inputs live on different subgroup lattices")]
    LatticeMismatch,
    #[error("indices k = {k}, j = {j} out of range for n = {n}")]
    IndexOutOfRange { k: usize, j: usize, n: usize },
    #[error("ℓ-vector {0} violates ℓ_i ≤ ℓ_(i+1) + 1")]
    InvalidEll(EllVector),
    #[error("{what} = {value} exceeds the maximum {max}")]
    BoundTooLarge { what: &'static str, value: usize, max: usize },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Transfer(#[from] TransferError),
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    CertifiedPreserves,
    NoGuarantee,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedPreserves => "certified-preserves",
            Verdict::NoGuarantee => "no-guarantee",
        })
    }
}

/// One failing instance: for the norm along `(k, h)` and the prime
/// `𝒫(j, m, p)` of the locus, no listed `K^g ∩ J` carries `𝒫(·, m, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub k: SubgroupId,
    pub h: SubgroupId,
    pub j: SubgroupId,
    pub prime: BalmerPrime,
    /// `(g, K^g ∩ J)` for each chosen double-coset representative `g`.
    pub checked: Vec<(ElementId, SubgroupId)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
}

impl Decision {
    pub fn certified() -> Self {
        Self {
            verdict: Verdict::CertifiedPreserves,
            witnesses: Vec::new(),
        }
    }

    pub fn from_witnesses(witnesses: Vec<Witness>) -> Self {
        let verdict = if witnesses.is_empty() {
            Verdict::CertifiedPreserves
        } else {
            Verdict::NoGuarantee
        };
        Self { verdict, witnesses }
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::CertifiedPreserves
    }
}

/// Chooses the representative of each double coset that the engine uses.
pub trait RepresentativeChoice {
    /// `double_coset` is nonempty and sorted.
    fn pick(&mut self, double_coset: &[ElementId]) -> ElementId;
}

/// The least element of each double coset.
#[derive(Debug, Clone, Copy, Default)]
pub struct MinimalRepresentative;

impl RepresentativeChoice for MinimalRepresentative {
    fn pick(&mut self, double_coset: &[ElementId]) -> ElementId {
        double_coset[0]
    }
}

fn nested(lattice: &SubgroupLattice, k: SubgroupId, h: SubgroupId) -> Result<(), EngineError> {
    if lattice.leq(k, h) {
        Ok(())
    } else {
        Err(EngineError::NotNested { k, h })
    }
}

fn same_lattice(a: &SubgroupLattice, b: &SubgroupLattice) -> Result<(), EngineError> {
    if std::ptr::eq(a, b) || a == b {
        Ok(())
    } else {
        Err(EngineError::LatticeMismatch)
    }
}

/// Support of `Φ^J N_K^H E`: the intersection over `g ∈ K\H/J` of the support
/// of `Φ^{K^g ∩ J} E`.
pub fn norm_support(
    support: &SupportData,
    k: SubgroupId,
    h: SubgroupId,
    j: SubgroupId,
) -> Result<BTreeSet<ChromaticPoint>, EngineError> {
    let l = support.lattice();
    nested(l, k, h)?;
    nested(l, j, h)?;
    let mut out: Option<BTreeSet<ChromaticPoint>> = None;
    for g in l.double_cosets(k, j, h)? {
        let factor = support.at_subgroup(l.intersect(l.conjugate_subgroup(k, g), j));
        out = Some(match out {
            None => factor.clone(),
            Some(acc) => acc.intersection(factor).copied().collect(),
        });
    }
    Ok(out.unwrap_or_default())
}

/// Whether `N_K^H` provably preserves the thick subcategory with vanishing
/// locus `locus`: for every `𝒫(J, m, p)` in the locus with `J ≤ H`, some
/// `g ∈ H` has `𝒫(K^g ∩ J, m, p)` in the locus.
pub fn norm_preserves_locus(locus: &VanishingLocus, k: SubgroupId, h: SubgroupId) -> Result<Decision, EngineError> {
    norm_preserves_locus_with(locus, k, h, &mut MinimalRepresentative)
}

pub fn norm_preserves_locus_with(
    locus: &VanishingLocus,
    k: SubgroupId,
    h: SubgroupId,
    choice: &mut dyn RepresentativeChoice,
) -> Result<Decision, EngineError> {
    let l = locus.lattice();
    nested(l, k, h)?;
    let violations = locus.validate();
    if !violations.is_empty() {
        return Err(EngineError::InvalidLocus(violations));
    }
    Ok(Decision::from_witnesses(norm_witnesses(locus, k, h, choice)?))
}

fn norm_witnesses(
    locus: &VanishingLocus,
    k: SubgroupId,
    h: SubgroupId,
    choice: &mut dyn RepresentativeChoice,
) -> Result<Vec<Witness>, EngineError> {
    let l = locus.lattice();
    let mut witnesses = Vec::new();
    if k == h {
        return Ok(witnesses);
    }
    // the checked intersections depend only on J, not on the prime
    let mut per_class: Vec<Option<Vec<(SubgroupId, Vec<(ElementId, SubgroupId)>)>>> = vec![None; l.classes().len()];
    for &prime in locus.iter() {
        let conjugates = per_class[prime.class.0].get_or_insert_with(|| {
            l.class_members_below(prime.class, h)
                .map(|j| {
                    let partition = l.double_coset_partition(k, j, h).expect("k, j ≤ h");
                    let checked = partition
                        .iter()
                        .map(|dc| {
                            let g = choice.pick(dc);
                            (g, l.intersect(l.conjugate_subgroup(k, g), j))
                        })
                        .collect();
                    (j, checked)
                })
                .collect()
        });
        for (j, checked) in conjugates.iter() {
            if !checked.iter().any(|&(_, s)| locus.contains_subgroup(s, prime.point())) {
                witnesses.push(Witness {
                    k,
                    h,
                    j: *j,
                    prime,
                    checked: checked.clone(),
                });
            }
        }
    }
    Ok(witnesses)
}

/// Whether localizing at `locus` (Bousfield or finite) provably preserves
/// algebras over the operad with transfer system `system`: every admissible
/// norm must preserve the locus.
pub fn localization_preserves(locus: &VanishingLocus, system: &TransferSystem) -> Result<Decision, EngineError> {
    localization_preserves_with(locus, system, &mut MinimalRepresentative)
}

pub fn localization_preserves_with(
    locus: &VanishingLocus,
    system: &TransferSystem,
    choice: &mut dyn RepresentativeChoice,
) -> Result<Decision, EngineError> {
    same_lattice(locus.lattice(), system.lattice())?;
    let violations = locus.validate();
    if !violations.is_empty() {
        return Err(EngineError::InvalidLocus(violations));
    }
    let mut witnesses = Vec::new();
    for (k, h) in system.nontrivial_pairs() {
        witnesses.extend(norm_witnesses(locus, k, h, choice)?);
    }
    Ok(Decision::from_witnesses(witnesses))
}
