use std::collections::BTreeSet;
use std::sync::Arc;

use super::{cyclic_p_chain, BalmerPrime, ChromaticPoint, Height, SpectrumError, VanishingLocus};
use crate::group::{ClassId, SubgroupId, SubgroupLattice};

/// Chromatic support of `Φ^H E` for each conjugacy class of `H`.
#[derive(Clone, PartialEq, Eq)]
pub struct SupportData {
    lattice: Arc<SubgroupLattice>,
    supports: Vec<BTreeSet<ChromaticPoint>>,
}

impl SupportData {
    /// `supports[c]` is the support at class `c`.
    pub fn new(lattice: Arc<SubgroupLattice>, supports: Vec<BTreeSet<ChromaticPoint>>) -> Result<Self, SpectrumError> {
        let expected = lattice.classes().len();
        if supports.len() != expected {
            return Err(SpectrumError::LengthMismatch {
                expected,
                found: supports.len(),
            });
        }
        Ok(Self { lattice, supports })
    }

    pub fn empty(lattice: Arc<SubgroupLattice>) -> Self {
        let n = lattice.classes().len();
        Self {
            lattice,
            supports: vec![BTreeSet::new(); n],
        }
    }

    /// Support `at_trivial` on the trivial subgroup, empty elsewhere.
    pub fn underlying(lattice: Arc<SubgroupLattice>, at_trivial: BTreeSet<ChromaticPoint>) -> Self {
        let mut s = Self::empty(lattice);
        let e = s.lattice.class_of(s.lattice.trivial());
        s.supports[e.0] = at_trivial;
        s
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn at(&self, class: ClassId) -> &BTreeSet<ChromaticPoint> {
        &self.supports[class.0]
    }

    pub fn at_subgroup(&self, h: SubgroupId) -> &BTreeSet<ChromaticPoint> {
        self.at(self.lattice.class_of(h))
    }

    pub fn supports(&self) -> &[BTreeSet<ChromaticPoint>] {
        &self.supports
    }

    /// True iff every nontrivial geometric fixed point has empty support, so
    /// acyclicity is detected on the underlying spectrum.
    pub fn is_underlying_determined(&self) -> bool {
        let e = self.lattice.class_of(self.lattice.trivial());
        self.supports
            .iter()
            .enumerate()
            .all(|(c, s)| c == e.0 || s.is_empty())
    }

    /// Model of the Real Johnson–Wilson theory `E_ℝ(n)`: underlying
    /// support `{0, …, n}` at 2, trivial nontrivial geometric fixed points.
    pub fn real_johnson_wilson(lattice: Arc<SubgroupLattice>, n: u32) -> Result<Self, SpectrumError> {
        require_cyclic_two_group(&lattice)?;
        let at_e = (0..=n).map(|m| ChromaticPoint::new(Height::Finite(m), 2)).collect();
        Ok(Self::underlying(lattice, at_e))
    }

    /// Model of `K_ℝ(0) ∨ … ∨ K_ℝ(n)` as the union of the summands'
    /// single-height supports.
    pub fn real_morava_wedge(lattice: Arc<SubgroupLattice>, n: u32) -> Result<Self, SpectrumError> {
        require_cyclic_two_group(&lattice)?;
        let mut wedge = Self::empty(lattice.clone());
        for m in 0..=n {
            let summand = Self::underlying(lattice.clone(), BTreeSet::from([ChromaticPoint::new(Height::Finite(m), 2)]));
            wedge = wedge.wedge(&summand)?;
        }
        Ok(wedge)
    }

    /// Support of a wedge: class-wise union.
    pub fn wedge(&self, other: &SupportData) -> Result<SupportData, SpectrumError> {
        same_lattice(self, other)?;
        Ok(SupportData {
            lattice: self.lattice.clone(),
            supports: self
                .supports
                .iter()
                .zip(&other.supports)
                .map(|(a, b)| a.union(b).copied().collect())
                .collect(),
        })
    }
}

impl std::fmt::Debug for SupportData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries(self.supports.iter().enumerate().map(|(c, s)| {
                let pts: Vec<String> = s.iter().map(|p| p.to_string()).collect();
                (ClassId(c), pts)
            }))
            .finish()
    }
}

fn require_cyclic_two_group(lattice: &SubgroupLattice) -> Result<(), SpectrumError> {
    match cyclic_p_chain(lattice) {
        Some((2, _)) => Ok(()),
        _ => Err(SpectrumError::NotCyclicPGroupLattice {
            group: lattice.group().name().to_string(),
            order: lattice.group().order(),
            p: 2,
        }),
    }
}

fn same_lattice(a: &SupportData, b: &SupportData) -> Result<(), SpectrumError> {
    if Arc::ptr_eq(&a.lattice, &b.lattice) || a.lattice == b.lattice {
        Ok(())
    } else {
        Err(SpectrumError::LatticeMismatch)
    }
}

/// The profile of a pushforward `i_* E`: the same support at every class.
pub fn support_of_pushforward(lattice: Arc<SubgroupLattice>, support: &BTreeSet<ChromaticPoint>) -> SupportData {
    let n = lattice.classes().len();
    SupportData {
        lattice,
        supports: vec![support.clone(); n],
    }
}

pub fn supports_equal(a: &SupportData, b: &SupportData) -> Result<bool, SpectrumError> {
    same_lattice(a, b)?;
    Ok(a.supports == b.supports)
}

impl VanishingLocus {
    /// Vanishing locus of the finite `E`-acyclics for a support profile:
    /// a finite spectrum is acyclic iff it vanishes at every supported point,
    /// which for finite spectra means its type exceeds the top supported
    /// height at each prime. Per class this is the downward closure of the
    /// support, closed up under the locus rules.
    pub fn of_finite_acyclics(support: &SupportData) -> VanishingLocus {
        let primes = support
            .supports
            .iter()
            .enumerate()
            .flat_map(|(c, s)| s.iter().map(move |&pt| BalmerPrime::at(ClassId(c), pt)));
        VanishingLocus::closure(support.lattice.clone(), primes).expect("support points have valid classes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::spectrum::ChromaticPrime;

    fn lattice(spec: &str) -> Arc<SubgroupLattice> {
        Arc::new(SubgroupLattice::new(spec.parse::<GroupSpec>().unwrap().build().unwrap()).unwrap())
    }

    fn heights(p: u32, hs: impl IntoIterator<Item = u32>) -> BTreeSet<ChromaticPoint> {
        hs.into_iter().map(|m| ChromaticPoint::new(Height::Finite(m), p)).collect()
    }

    #[test]
    fn pushforward_is_uniform() {
        let l = lattice("symmetric:3");
        let s = heights(3, 0..=2);
        let d = support_of_pushforward(l.clone(), &s);
        assert!(d.supports().iter().all(|x| *x == s));
        for h in l.ids() {
            for g in l.group().elements() {
                assert_eq!(d.at_subgroup(h), d.at_subgroup(l.conjugate_subgroup(h, g)));
            }
        }
        assert!(!d.is_underlying_determined());
        let empty = support_of_pushforward(l.clone(), &BTreeSet::new());
        assert_eq!(empty, SupportData::empty(l));
        assert!(empty.is_underlying_determined());
    }

    #[test]
    fn real_theories_agree_at_support_level() {
        let l = lattice("cyclic:2");
        for n in 0..=5 {
            let e = SupportData::real_johnson_wilson(l.clone(), n).unwrap();
            let k = SupportData::real_morava_wedge(l.clone(), n).unwrap();
            assert!(e.is_underlying_determined());
            assert!(k.is_underlying_determined());
            assert!(supports_equal(&e, &k).unwrap());
        }
        assert!(SupportData::real_johnson_wilson(lattice("cyclic:3"), 1).is_err());
    }

    #[test]
    fn lattice_mismatch() {
        let a = SupportData::empty(lattice("cyclic:2"));
        let b = SupportData::empty(lattice("cyclic:3"));
        assert_eq!(supports_equal(&a, &b), Err(SpectrumError::LatticeMismatch));
        assert!(supports_equal(&a, &a.clone()).unwrap());
    }

    #[test]
    fn finite_acyclics_are_downward_closure() {
        let l = lattice("cyclic:4");
        let s = BTreeSet::from([ChromaticPoint::new(Height::Finite(2), 2)]);
        let vl = VanishingLocus::of_finite_acyclics(&support_of_pushforward(l.clone(), &s));
        assert!(vl.is_valid());
        for h in l.ids() {
            assert_eq!(vl.max_height(h, 2), Some(Height::Finite(2)));
        }
        let inf = BTreeSet::from([ChromaticPoint {
            height: Height::Infinity,
            prime: ChromaticPrime::P(3),
        }]);
        let vl = VanishingLocus::of_finite_acyclics(&support_of_pushforward(l.clone(), &inf));
        assert_eq!(vl.len(), 3);
        assert!(vl.is_valid());
    }

    #[test]
    fn new_checks_length() {
        let l = lattice("symmetric:3");
        assert!(matches!(
            SupportData::new(l, vec![BTreeSet::new()]),
            Err(SpectrumError::LengthMismatch { expected: 4, found: 1 })
        ));
    }
}
