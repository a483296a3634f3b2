//! Specializations to `G = C_{p^n}`, where the double-coset criterion
//! collapses to inequalities between the entries of an ℓ-vector.

use std::sync::Arc;

use super::{localization_preserves, norm_preserves_locus, EngineError, Verdict};
use crate::group::{FiniteGroup, SubgroupId, SubgroupLattice};
use crate::spectrum::{ell_succ, ell_to_locus, is_prime, EllVector, Height, SpectrumError};
use crate::transfer::TransferSystem;

pub const MAX_ENUM_N: usize = 6;
pub const MAX_ENUM_BOUND: u32 = 10;
pub const MAX_CROSS_N: usize = 3;
pub const MAX_CROSS_BOUND: u32 = 5;

/// `N_{C_{p^k}}^{C_{p^j}}` preserves `X_ℓ` when `ℓ_k ≥ ℓ_i` for `k < i ≤ j`.
pub fn ell_norm_condition(ell: &EllVector, k: usize, j: usize) -> Result<bool, EngineError> {
    let n = ell.n();
    if k > j || j > n {
        return Err(EngineError::IndexOutOfRange { k, j, n });
    }
    let e = ell.entries();
    Ok(e[k + 1..=j].iter().all(|&x| x <= e[k]))
}

/// `ℓ_{i+1} ≤ ℓ_i ≤ ℓ_{i+1} + 1` for all `i < n`.
pub fn ell_commutative_condition(ell: &EllVector) -> Result<bool, EngineError> {
    if !ell.validate_ell() {
        return Err(EngineError::InvalidEll(ell.clone()));
    }
    Ok(ell
        .entries()
        .windows(2)
        .all(|w| w[1] <= w[0] && w[0] <= ell_succ(w[1])))
}

fn value_domain(height_bound: u32, include_infinity: bool) -> Vec<Option<Height>> {
    std::iter::once(None)
        .chain((0..=height_bound).map(|m| Some(Height::Finite(m))))
        .chain(include_infinity.then_some(Some(Height::Infinity)))
        .collect()
}

fn check_prime(p: u32) -> Result<(), EngineError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(SpectrumError::InvalidPrime(p).into())
    }
}

/// Every ℓ-vector of length `n + 1` over `{None, 0..=height_bound}` (and
/// `∞` if asked) accepted pairwise by `step`, in lexicographic order.
fn enumerate_filtered(
    p: u32,
    n: usize,
    height_bound: u32,
    include_infinity: bool,
    step: impl Fn(Option<Height>, Option<Height>) -> bool,
) -> Vec<EllVector> {
    let domain = value_domain(height_bound, include_infinity);
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n + 1);

    fn rec(
        domain: &[Option<Height>],
        len: usize,
        step: &dyn Fn(Option<Height>, Option<Height>) -> bool,
        current: &mut Vec<Option<Height>>,
        out: &mut Vec<Vec<Option<Height>>>,
    ) {
        if current.len() == len {
            out.push(current.clone());
            return;
        }
        for &v in domain {
            if current.last().is_none_or(|&prev| step(prev, v)) {
                current.push(v);
                rec(domain, len, step, current, out);
                current.pop();
            }
        }
    }

    let mut raw = Vec::new();
    rec(&domain, n + 1, &step, &mut current, &mut raw);
    for entries in raw {
        out.push(EllVector::new(p, entries).expect("prime checked"));
    }
    out
}

fn check_enum_bounds(n: usize, height_bound: u32) -> Result<(), EngineError> {
    if n > MAX_ENUM_N {
        return Err(EngineError::BoundTooLarge {
            what: "n",
            value: n,
            max: MAX_ENUM_N,
        });
    }
    if height_bound > MAX_ENUM_BOUND {
        return Err(EngineError::BoundTooLarge {
            what: "height bound",
            value: height_bound as usize,
            max: MAX_ENUM_BOUND as usize,
        });
    }
    Ok(())
}

/// All ℓ-vectors on `C_{p^n}` passing `validate_ell`, lexicographic order.
pub fn enumerate_ell(p: u32, n: usize, height_bound: u32, include_infinity: bool) -> Result<Vec<EllVector>, EngineError> {
    check_enum_bounds(n, height_bound)?;
    check_prime(p)?;
    Ok(enumerate_filtered(p, n, height_bound, include_infinity, |a, b| a <= ell_succ(b)))
}

/// All ℓ-vectors on `C_{p^n}` that define a valid locus and satisfy the
/// commutative condition, lexicographic order with `None` first.
pub fn enumerate_commutative_ell(
    p: u32,
    n: usize,
    height_bound: u32,
    include_infinity: bool,
) -> Result<Vec<EllVector>, EngineError> {
    check_enum_bounds(n, height_bound)?;
    check_prime(p)?;
    Ok(enumerate_filtered(p, n, height_bound, include_infinity, |a, b| b <= a && a <= ell_succ(b)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Disagreement {
    /// The general engine and `ell_norm_condition` differ for `N_{C_{p^k}}^{C_{p^j}}`.
    Norm { ell: EllVector, k: usize, j: usize, engine: Verdict, inequality: bool },
    /// The complete-system verdict and `ell_commutative_condition` differ.
    Commutative { ell: EllVector, engine: Verdict, inequality: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossValidationReport {
    pub n: usize,
    pub p: u32,
    pub height_bound: u32,
    pub vectors: usize,
    pub norm_checks: usize,
    pub commutative_checks: usize,
    pub disagreements: Vec<Disagreement>,
}

impl CrossValidationReport {
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compares the general double-coset engine with the ℓ-inequalities on
/// `C_{p^n}` for every valid ℓ over `{None, 0..=height_bound, ∞}`.
pub fn cross_validate_cpn(n: usize, p: u32, height_bound: u32) -> Result<CrossValidationReport, EngineError> {
    if n > MAX_CROSS_N {
        return Err(EngineError::BoundTooLarge {
            what: "n",
            value: n,
            max: MAX_CROSS_N,
        });
    }
    if height_bound > MAX_CROSS_BOUND {
        return Err(EngineError::BoundTooLarge {
            what: "height bound",
            value: height_bound as usize,
            max: MAX_CROSS_BOUND as usize,
        });
    }
    check_prime(p)?;
    let order = (p as usize).pow(n as u32);
    let lattice = Arc::new(SubgroupLattice::new(FiniteGroup::cyclic(order)?)?);
    let complete = TransferSystem::complete(lattice.clone());

    let vectors = enumerate_ell(p, n, height_bound, true)?;
    let mut report = CrossValidationReport {
        n,
        p,
        height_bound,
        vectors: vectors.len(),
        norm_checks: 0,
        commutative_checks: 0,
        disagreements: Vec::new(),
    };
    for ell in vectors {
        let locus = ell_to_locus(&lattice, &ell)?;
        for j in 0..=n {
            for k in 0..=j {
                let engine = norm_preserves_locus(&locus, SubgroupId(k), SubgroupId(j))?.verdict;
                let inequality = ell_norm_condition(&ell, k, j)?;
                report.norm_checks += 1;
                if (engine == Verdict::CertifiedPreserves) != inequality {
                    report.disagreements.push(Disagreement::Norm {
                        ell: ell.clone(),
                        k,
                        j,
                        engine,
                        inequality,
                    });
                }
            }
        }
        let engine = localization_preserves(&locus, &complete)?.verdict;
        let inequality = ell_commutative_condition(&ell)?;
        report.commutative_checks += 1;
        if (engine == Verdict::CertifiedPreserves) != inequality {
            report.disagreements.push(Disagreement::Commutative { ell, engine, inequality });
        }
    }
    Ok(report)
}
