use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::{chain_length_for, is_prime, BalmerPrime, ChromaticPrime, Height, SpectrumError, VanishingLocus};
use crate::group::{SubgroupId, SubgroupLattice};

/// `x + 1` on `{None} ∪ Height`, where `None` plays the role of `-1`.
pub fn ell_succ(x: Option<Height>) -> Option<Height> {
    Some(x.map_or(Height::Finite(0), Height::succ))
}

/// Maximal heights `(ℓ_0, …, ℓ_n)` along the chain `C_{p^0} ≤ … ≤ C_{p^n}`.
/// `None` means no prime at that subgroup. Derived ordering puts `None`
/// below every height.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EllVector {
    p: u32,
    entries: Vec<Option<Height>>,
}

impl EllVector {
    pub fn new(p: u32, entries: Vec<Option<Height>>) -> Result<Self, SpectrumError> {
        if !is_prime(p) {
            return Err(SpectrumError::InvalidPrime(p));
        }
        if entries.is_empty() {
            return Err(SpectrumError::LengthMismatch { expected: 1, found: 0 });
        }
        Ok(Self { p, entries })
    }

    /// Shorthand over finite values, with `-1` for `None`.
    pub fn finite(p: u32, values: &[i64]) -> Result<Self, SpectrumError> {
        Self::new(
            p,
            values
                .iter()
                .map(|&v| (v >= 0).then_some(Height::Finite(v as u32)))
                .collect(),
        )
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// The `n` of `C_{p^n}`.
    pub fn n(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[Option<Height>] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Option<Option<Height>> {
        self.entries.get(i).copied()
    }

    pub fn has_sentinel(&self) -> bool {
        self.entries.iter().any(Option::is_none)
    }

    /// `ℓ_i ≤ ℓ_{i+1} + 1` for all `i < n`.
    pub fn validate_ell(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] <= ell_succ(w[1]))
    }
}

fn show(h: Option<Height>) -> String {
    h.map_or("none".into(), |h| h.to_string())
}

impl fmt::Display for EllVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|&h| show(h)).collect();
        write!(f, "{}:{}", self.p, parts.join(","))
    }
}

/// Parses `P:E0,E1,…` with entries an integer, `inf`, or `none`
/// (`-1` is accepted for `none`).
impl FromStr for EllVector {
    type Err = SpectrumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, list) = s
            .split_once(':')
            .ok_or_else(|| SpectrumError::Parse(format!("expected P:ENTRIES, got {s:?}")))?;
        let p: u32 = p
            .trim()
            .parse()
            .map_err(|_| SpectrumError::Parse(format!("bad prime {p:?}")))?;
        let list = list.trim().trim_start_matches('(').trim_end_matches(')');
        let entries = list
            .split(',')
            .map(|t| match t.trim() {
                "none" | "-1" => Ok(None),
                t => t.parse::<Height>().map(Some),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(p, entries)
    }
}

/// The locus `⋃_i ⋃_{j ≤ ℓ_i} 𝒫(C_{p^i}, j, p)`; an `∞` entry becomes a
/// single `∞` prime.
pub fn ell_to_locus(lattice: &Arc<SubgroupLattice>, ell: &EllVector) -> Result<VanishingLocus, SpectrumError> {
    let n = chain_length_for(lattice, ell.p)?;
    if n != ell.n() {
        return Err(SpectrumError::LengthMismatch {
            expected: n + 1,
            found: ell.entries.len(),
        });
    }
    let mut primes = Vec::new();
    for (i, &top) in ell.entries.iter().enumerate() {
        let class = lattice.class_of(SubgroupId(i));
        match top {
            None => {}
            Some(Height::Infinity) => primes.push(BalmerPrime::new(class, Height::Infinity, ell.p)),
            Some(Height::Finite(m)) => {
                primes.extend((0..=m).map(|j| BalmerPrime::new(class, Height::Finite(j), ell.p)));
            }
        }
    }
    Ok(VanishingLocus::new(lattice.clone(), primes))
}

/// `ℓ_k = max{ m : 𝒫(C_{p^k}, m, p) ∈ VL }`.
pub fn locus_to_ell(locus: &VanishingLocus, p: u32) -> Result<EllVector, SpectrumError> {
    if !is_prime(p) {
        return Err(SpectrumError::InvalidPrime(p));
    }
    let n = chain_length_for(locus.lattice(), p)?;
    if let Some(q) = locus.iter().find_map(|b| match b.prime {
        ChromaticPrime::P(q) if q != p => Some(q),
        _ => None,
    }) {
        return Err(SpectrumError::NotPLocal { p, found: q });
    }
    EllVector::new(p, (0..=n).map(|i| locus.max_height(SubgroupId(i), p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::spectrum::ChromaticPoint;

    fn lattice(spec: &str) -> Arc<SubgroupLattice> {
        Arc::new(SubgroupLattice::new(spec.parse::<GroupSpec>().unwrap().build().unwrap()).unwrap())
    }

    #[test]
    fn validate_examples() {
        assert!(EllVector::finite(2, &[3, 2]).unwrap().validate_ell());
        assert!(!EllVector::finite(2, &[2, 0]).unwrap().validate_ell());
        assert!("2:inf,inf".parse::<EllVector>().unwrap().validate_ell());
        assert!(EllVector::finite(2, &[0, -1]).unwrap().validate_ell());
        assert!(!EllVector::finite(2, &[1, -1]).unwrap().validate_ell());
        assert!(!"3:inf,4".parse::<EllVector>().unwrap().validate_ell());
    }

    #[test]
    fn parse_and_display() {
        let e: EllVector = "2:(1,0,inf,none)".parse().unwrap();
        assert_eq!(e.to_string(), "2:1,0,inf,none");
        assert_eq!(e.to_string().parse::<EllVector>().unwrap(), e);
        assert_eq!(e.n(), 3);
        assert!(e.has_sentinel());
        assert!(matches!("4:1".parse::<EllVector>(), Err(SpectrumError::InvalidPrime(4))));
        assert!("2:x".parse::<EllVector>().is_err());
        assert!("21".parse::<EllVector>().is_err());
    }

    #[test]
    fn sentinels_give_empty_locus() {
        let l = lattice("cyclic:3");
        let vl = ell_to_locus(&l, &EllVector::finite(3, &[-1, -1]).unwrap()).unwrap();
        assert!(vl.is_empty());
    }

    #[test]
    fn one_zero_on_cp() {
        let l = lattice("cyclic:2");
        let vl = ell_to_locus(&l, &EllVector::finite(2, &[1, 0]).unwrap()).unwrap();
        let (e, cp) = (l.class_of(SubgroupId(0)), l.class_of(SubgroupId(1)));
        let expected = [
            BalmerPrime::at(e, ChromaticPoint::rational()),
            BalmerPrime::new(e, Height::Finite(1), 2),
            BalmerPrime::at(cp, ChromaticPoint::rational()),
        ];
        assert_eq!(vl.primes().iter().copied().collect::<Vec<_>>(), expected.to_vec());
        assert!(vl.is_valid());
    }

    #[test]
    fn wrong_lattice_or_prime() {
        let e = EllVector::finite(2, &[0, 0]).unwrap();
        assert!(matches!(ell_to_locus(&lattice("cyclic:3"), &e), Err(SpectrumError::NotCyclicPGroupLattice { .. })));
        assert!(matches!(ell_to_locus(&lattice("symmetric:3"), &e), Err(SpectrumError::NotCyclicPGroupLattice { .. })));
        assert!(matches!(ell_to_locus(&lattice("cyclic:4"), &e), Err(SpectrumError::LengthMismatch { .. })));
        let l = lattice("cyclic:2");
        let vl = VanishingLocus::new(l.clone(), [BalmerPrime::new(l.class_of(SubgroupId(0)), Height::Finite(1), 3)]);
        assert_eq!(locus_to_ell(&vl, 2), Err(SpectrumError::NotPLocal { p: 2, found: 3 }));
    }

    #[test]
    fn exhaustive_round_trip() {
        let values: Vec<Option<Height>> = [None]
            .into_iter()
            .chain((0..=3).map(|m| Some(Height::Finite(m))))
            .chain([Some(Height::Infinity)])
            .collect();
        for (p, n) in [(2u32, 0usize), (2, 1), (3, 2), (2, 3)] {
            let l = lattice(&format!("cyclic:{}", p.pow(n as u32)));
            let total = values.len().pow(n as u32 + 1);
            for code in 0..total {
                let entries: Vec<_> = (0..=n).map(|i| values[code / values.len().pow(i as u32) % values.len()]).collect();
                let ell = EllVector::new(p, entries).unwrap();
                let vl = ell_to_locus(&l, &ell).unwrap();
                assert_eq!(locus_to_ell(&vl, p).unwrap(), ell);
                if ell.validate_ell() {
                    assert!(vl.is_valid(), "{ell}: {:?}", vl.validate());
                } else {
                    assert!(!vl.is_valid(), "{ell}");
                }
            }
        }
    }
}
