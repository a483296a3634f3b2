//! Chromatic points, Balmer primes `𝒫(H, m, p)`, vanishing loci and support
//! profiles.
//!
//! Heights are Morava-K-indexed: [`Height::Finite`]`(m)` is the point at
//! which `K(m, p)_*` of the relevant geometric fixed points vanishes. At
//! height 0 all primes coincide, so height-0 points always carry
//! [`ChromaticPrime::Any`].

mod ell;
mod support;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{ClassId, SubgroupId, SubgroupLattice};

pub use ell::{ell_succ, ell_to_locus, locus_to_ell, EllVector};
pub use support::{support_of_pushforward, supports_equal, SupportData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("lattice of {group} (order {order}) is not the subgroup chain of a cyclic {p}-group")]
    NotCyclicPGroupLattice { group: String, order: usize, p: u32 },
    #[error("locus is not {p}-local: found prime {found}")]
    NotPLocal { p: u32, found: u32 },
    #[error("supports live on different lattices")]
    LatticeMismatch,
    #[error("{0} is not a prime")]
    InvalidPrime(u32),
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("conjugacy class {0} is out of range")]
    UnknownClass(ClassId),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A chromatic height: a natural number or a formal top element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Height {
    Finite(u32),
    Infinity,
}

impl Height {
    pub fn is_finite(self) -> bool {
        matches!(self, Height::Finite(_))
    }

    pub fn succ(self) -> Height {
        match self {
            Height::Finite(m) => Height::Finite(m + 1),
            Height::Infinity => Height::Infinity,
        }
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(m) => write!(f, "{m}"),
            Height::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Height {
    type Err = SpectrumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Height::Infinity),
            t => t
                .parse()
                .map(Height::Finite)
                .map_err(|_| SpectrumError::Parse(format!("bad height {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChromaticPrime {
    Any,
    P(u32),
}

impl fmt::Display for ChromaticPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChromaticPrime::Any => f.write_str("any"),
            ChromaticPrime::P(p) => write!(f, "{p}"),
        }
    }
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// A point `(m, p)` of the nonequivariant chromatic picture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChromaticPoint {
    pub height: Height,
    pub prime: ChromaticPrime,
}

impl ChromaticPoint {
    /// Normalized point: height 0 forgets the prime.
    pub fn new(height: Height, p: u32) -> Self {
        let prime = if height == Height::Finite(0) {
            ChromaticPrime::Any
        } else {
            ChromaticPrime::P(p)
        };
        Self { height, prime }
    }

    pub fn rational() -> Self {
        Self {
            height: Height::Finite(0),
            prime: ChromaticPrime::Any,
        }
    }

    pub fn is_normalized(&self) -> bool {
        (self.height == Height::Finite(0)) == (self.prime == ChromaticPrime::Any)
    }
}

impl fmt::Display for ChromaticPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.height, self.prime)
    }
}

/// `𝒫(H, m, p)` for `H` in the given conjugacy class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BalmerPrime {
    pub class: ClassId,
    pub height: Height,
    pub prime: ChromaticPrime,
}

impl BalmerPrime {
    pub fn new(class: ClassId, height: Height, p: u32) -> Self {
        Self::at(class, ChromaticPoint::new(height, p))
    }

    pub fn at(class: ClassId, point: ChromaticPoint) -> Self {
        Self {
            class,
            height: point.height,
            prime: point.prime,
        }
    }

    pub fn point(&self) -> ChromaticPoint {
        ChromaticPoint {
            height: self.height,
            prime: self.prime,
        }
    }
}

impl fmt::Display for BalmerPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({}, {}, {})", self.class, self.height, self.prime)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocusViolation {
    UnknownClass(ClassId),
    /// Height 0 with a concrete prime, or a positive height marked `Any`.
    Unnormalized(BalmerPrime),
    NotPrime(BalmerPrime),
    /// `present` is in the locus but the lower `missing` is not.
    NotDownwardClosed { present: BalmerPrime, missing: BalmerPrime },
    /// On `C_{p^n}`, `ℓ_i ≤ ℓ_{i+1} + 1` fails.
    EllInequality { p: u32, i: usize, lower: Option<Height>, upper: Option<Height> },
}

impl fmt::Display for LocusViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |h: &Option<Height>| h.map_or("none".to_string(), |h| h.to_string());
        match self {
            LocusViolation::UnknownClass(c) => write!(f, "unknown conjugacy class {c}"),
            LocusViolation::Unnormalized(b) => write!(f, "{b}: height 0 must carry prime `any`, other heights a concrete prime"),
            LocusViolation::NotPrime(b) => write!(f, "{b}: not a prime number"),
            LocusViolation::NotDownwardClosed { present, missing } => {
                write!(f, "{present} present but {missing} missing")
            }
            LocusViolation::EllInequality { p, i, lower, upper } => write!(
                f,
                "at p = {p}: ℓ_{i} = {} exceeds ℓ_{} + 1 = {} + 1",
                show(lower),
                i + 1,
                show(upper)
            ),
        }
    }
}

/// A set of Balmer primes, stored per conjugacy class.
///
/// An entry at height `∞` for `(class, p)` contains every finite height at
/// `(class, p)` implicitly, including the shared height-0 point.
#[derive(Clone)]
pub struct VanishingLocus {
    lattice: Arc<SubgroupLattice>,
    primes: BTreeSet<BalmerPrime>,
}

impl VanishingLocus {
    pub fn new(lattice: Arc<SubgroupLattice>, primes: impl IntoIterator<Item = BalmerPrime>) -> Self {
        Self {
            lattice,
            primes: primes.into_iter().collect(),
        }
    }

    pub fn empty(lattice: Arc<SubgroupLattice>) -> Self {
        Self::new(lattice, [])
    }

    /// The smallest valid locus containing `primes` (normalized first).
    /// Finite entries implied by an `∞` entry are dropped.
    pub fn closure(lattice: Arc<SubgroupLattice>, primes: impl IntoIterator<Item = BalmerPrime>) -> Result<Self, SpectrumError> {
        // (class, p) -> top height; height-0-only classes tracked separately
        let mut tops: BTreeMap<(ClassId, u32), Height> = BTreeMap::new();
        let mut rational: BTreeSet<ClassId> = BTreeSet::new();
        for b in primes {
            if b.class.0 >= lattice.classes().len() {
                return Err(SpectrumError::UnknownClass(b.class));
            }
            match (b.height, b.prime) {
                (Height::Finite(0), _) | (_, ChromaticPrime::Any) => {
                    rational.insert(b.class);
                }
                (h, ChromaticPrime::P(p)) => {
                    if !is_prime(p) {
                        return Err(SpectrumError::InvalidPrime(p));
                    }
                    let e = tops.entry((b.class, p)).or_insert(h);
                    *e = (*e).max(h);
                }
            }
        }

        if let Some((p, n)) = cyclic_p_chain(&lattice) {
            let ps: BTreeSet<u32> = tops.keys().map(|&(_, q)| q).filter(|&q| q == p).collect();
            for p in ps {
                // ℓ_{i+1} ≥ ℓ_i − 1, raised bottom-up
                let ell = |i: usize, tops: &BTreeMap<(ClassId, u32), Height>, rational: &BTreeSet<ClassId>| {
                    let c = lattice.class_of(SubgroupId(i));
                    let nonempty = rational.contains(&c) || tops.keys().any(|&(d, _)| d == c);
                    tops.get(&(c, p)).copied().or(nonempty.then_some(Height::Finite(0)))
                };
                for i in 0..n {
                    let need = match ell(i, &tops, &rational) {
                        Some(Height::Infinity) => Some(Height::Infinity),
                        Some(Height::Finite(m)) if m >= 2 => Some(Height::Finite(m - 1)),
                        Some(Height::Finite(1)) => Some(Height::Finite(0)),
                        _ => None,
                    };
                    let Some(need) = need else { continue };
                    if ell(i + 1, &tops, &rational).is_none_or(|cur| cur < need) {
                        let c = lattice.class_of(SubgroupId(i + 1));
                        if need == Height::Finite(0) {
                            rational.insert(c);
                        } else {
                            tops.insert((c, p), need);
                        }
                    }
                }
            }
        }

        let mut out = BTreeSet::new();
        for (&(class, p), &top) in &tops {
            match top {
                Height::Infinity => {
                    out.insert(BalmerPrime::new(class, Height::Infinity, p));
                }
                Height::Finite(m) => {
                    out.extend((1..=m).map(|j| BalmerPrime::new(class, Height::Finite(j), p)));
                }
            }
        }
        let with_infinity: BTreeSet<ClassId> = tops
            .iter()
            .filter(|(_, &h)| h == Height::Infinity)
            .map(|(&(c, _), _)| c)
            .collect();
        rational.extend(tops.keys().map(|&(c, _)| c));
        for class in rational {
            if !with_infinity.contains(&class) {
                out.insert(BalmerPrime::at(class, ChromaticPoint::rational()));
            }
        }
        Ok(Self { lattice, primes: out })
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn primes(&self) -> &BTreeSet<BalmerPrime> {
        &self.primes
    }

    pub fn iter(&self) -> impl Iterator<Item = &BalmerPrime> {
        self.primes.iter()
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Membership of `𝒫(class, point)`, honouring implicit entries below `∞`.
    pub fn contains(&self, class: ClassId, point: ChromaticPoint) -> bool {
        let point = match point.height {
            Height::Finite(0) => ChromaticPoint::rational(),
            _ => point,
        };
        if self.primes.contains(&BalmerPrime::at(class, point)) {
            return true;
        }
        if point.height == Height::Infinity {
            return false;
        }
        let lo = BalmerPrime {
            class,
            height: Height::Infinity,
            prime: ChromaticPrime::Any,
        };
        self.primes
            .range(lo..)
            .take_while(|b| b.class == class && b.height == Height::Infinity)
            .any(|b| point.prime == ChromaticPrime::Any || b.prime == point.prime)
    }

    pub fn contains_subgroup(&self, h: SubgroupId, point: ChromaticPoint) -> bool {
        self.contains(self.lattice.class_of(h), point)
    }

    /// Every violated closure condition. On lattices of cyclic `p`-groups the
    /// inequality `ℓ_i ≤ ℓ_{i+1} + 1` is checked for the group's prime.
    pub fn validate(&self) -> Vec<LocusViolation> {
        let mut out = Vec::new();
        let classes = self.lattice.classes().len();
        for &b in &self.primes {
            if b.class.0 >= classes {
                out.push(LocusViolation::UnknownClass(b.class));
                continue;
            }
            if !b.point().is_normalized() {
                out.push(LocusViolation::Unnormalized(b));
                continue;
            }
            let ChromaticPrime::P(p) = b.prime else { continue };
            if !is_prime(p) {
                out.push(LocusViolation::NotPrime(b));
                continue;
            }
            let below: Vec<ChromaticPoint> = match b.height {
                Height::Finite(m) => (0..m).map(|j| ChromaticPoint::new(Height::Finite(j), p)).collect(),
                Height::Infinity => Vec::new(),
            };
            for point in below {
                if !self.contains(b.class, point) {
                    out.push(LocusViolation::NotDownwardClosed {
                        present: b,
                        missing: BalmerPrime::at(b.class, point),
                    });
                }
            }
        }
        if out.is_empty() {
            if let Some((p, n)) = cyclic_p_chain(&self.lattice) {
                let ell: Vec<Option<Height>> = (0..=n).map(|i| self.max_height(SubgroupId(i), p)).collect();
                for i in 0..n {
                    if ell[i] > ell_succ(ell[i + 1]) {
                        out.push(LocusViolation::EllInequality {
                            p,
                            i,
                            lower: ell[i],
                            upper: ell[i + 1],
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Largest height `m` with `𝒫(H, m, p)` present, `None` if there is none.
    pub fn max_height(&self, h: SubgroupId, p: u32) -> Option<Height> {
        let class = self.lattice.class_of(h);
        self.primes
            .iter()
            .filter(|b| b.class == class && b.prime == ChromaticPrime::P(p))
            .map(|b| b.height)
            .max()
            .or_else(|| self.contains(class, ChromaticPoint::rational()).then_some(Height::Finite(0)))
    }
}

impl PartialEq for VanishingLocus {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice) && self.primes == other.primes
    }
}

impl Eq for VanishingLocus {}

impl fmt::Debug for VanishingLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.primes.iter().map(|b| b.to_string())).finish()
    }
}

/// `Some((p, n))` when the lattice is that of `C_{p^n}`, `n ≥ 1`. Subgroup
/// `i` is then `C_{p^i}`.
pub fn cyclic_p_chain(lattice: &SubgroupLattice) -> Option<(u32, usize)> {
    let g = lattice.group();
    let order = g.order();
    if order < 2 || !g.is_cyclic() {
        return None;
    }
    let p = (2..=order).find(|d| order.is_multiple_of(*d))? as u32;
    let mut rest = order;
    let mut n = 0;
    while rest.is_multiple_of(p as usize) {
        rest /= p as usize;
        n += 1;
    }
    (rest == 1).then_some((p, n))
}

/// Like [`cyclic_p_chain`] for a given `p`; the trivial group counts as
/// `C_{p^0}`.
pub fn chain_length_for(lattice: &SubgroupLattice, p: u32) -> Result<usize, SpectrumError> {
    if lattice.group().order() == 1 {
        return Ok(0);
    }
    match cyclic_p_chain(lattice) {
        Some((q, n)) if q == p => Ok(n),
        _ => Err(SpectrumError::NotCyclicPGroupLattice {
            group: lattice.group().name().to_string(),
            order: lattice.group().order(),
            p,
        }),
    }
}

/// The poset of Balmer primes over every class, for the given primes and
/// finite heights `0..=height_bound`. Edges `(a, b)` are covering
/// inclusions `𝒫(H, m+1, p) ⊂ 𝒫(H, m, p)`.
pub fn prime_poset(lattice: &SubgroupLattice, primes: &[u32], height_bound: u32) -> (Vec<BalmerPrime>, Vec<(usize, usize)>) {
    let mut nodes = BTreeSet::new();
    for c in lattice.classes() {
        nodes.insert(BalmerPrime::at(c.id, ChromaticPoint::rational()));
        for &p in primes {
            for m in 1..=height_bound {
                nodes.insert(BalmerPrime::new(c.id, Height::Finite(m), p));
            }
        }
    }
    let nodes: Vec<BalmerPrime> = nodes.into_iter().collect();
    let index: BTreeMap<BalmerPrime, usize> = nodes.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let mut edges = Vec::new();
    for (i, b) in nodes.iter().enumerate() {
        if let (Height::Finite(m), ChromaticPrime::P(p)) = (b.height, b.prime) {
            let lower = BalmerPrime::new(b.class, Height::Finite(m - 1), p);
            edges.push((i, index[&lower]));
        }
    }
    (nodes, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn lattice(spec: &str) -> Arc<SubgroupLattice> {
        Arc::new(SubgroupLattice::new(spec.parse::<GroupSpec>().unwrap().build().unwrap()).unwrap())
    }

    fn fin(m: u32) -> Height {
        Height::Finite(m)
    }

    #[test]
    fn height_order() {
        assert!(fin(0) < fin(7));
        assert!(fin(1_000) < Height::Infinity);
        assert_eq!(Height::Infinity.succ(), Height::Infinity);
        assert_eq!("inf".parse::<Height>().unwrap(), Height::Infinity);
        assert_eq!("3".parse::<Height>().unwrap(), fin(3));
        assert!("x".parse::<Height>().is_err());
    }

    #[test]
    fn height_zero_forgets_prime() {
        assert_eq!(ChromaticPoint::new(fin(0), 2), ChromaticPoint::new(fin(0), 3));
        assert_ne!(ChromaticPoint::new(fin(1), 2), ChromaticPoint::new(fin(1), 3));
    }

    #[test]
    fn primality() {
        let primes: Vec<u32> = (0..20).filter(|&p| is_prime(p)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn empty_and_full_loci_are_valid() {
        let l = lattice("symmetric:3");
        assert!(VanishingLocus::empty(l.clone()).is_valid());
        let full = l.classes().iter().flat_map(|c| {
            [2, 3, 5].into_iter().flat_map(move |p| (0..=4).map(move |m| BalmerPrime::new(c.id, fin(m), p)))
        });
        let full: Vec<_> = full.collect();
        assert!(VanishingLocus::new(l, full).is_valid());
    }

    #[test]
    fn missing_lower_heights_are_reported() {
        let l = lattice("cyclic:2");
        let e = l.class_of(l.trivial());
        let vl = VanishingLocus::new(l, [BalmerPrime::new(e, fin(2), 2)]);
        let v = vl.validate();
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|x| matches!(x, LocusViolation::NotDownwardClosed { .. })));
    }

    #[test]
    fn unnormalized_and_nonprime_entries() {
        let l = lattice("cyclic:2");
        let e = l.class_of(l.trivial());
        let bad = BalmerPrime {
            class: e,
            height: fin(0),
            prime: ChromaticPrime::P(2),
        };
        assert_eq!(VanishingLocus::new(l.clone(), [bad]).validate(), vec![LocusViolation::Unnormalized(bad)]);
        let np = BalmerPrime::new(e, fin(1), 4);
        assert_eq!(
            VanishingLocus::new(l.clone(), [BalmerPrime::at(e, ChromaticPoint::rational()), np]).validate(),
            vec![LocusViolation::NotPrime(np)]
        );
        assert!(matches!(
            VanishingLocus::new(l, [BalmerPrime::new(ClassId(9), fin(0), 2)]).validate()[..],
            [LocusViolation::UnknownClass(ClassId(9))]
        ));
    }

    #[test]
    fn infinity_contains_finite_heights() {
        let l = lattice("cyclic:2");
        let e = l.class_of(l.trivial());
        let vl = VanishingLocus::new(l, [BalmerPrime::new(e, Height::Infinity, 3)]);
        assert!(vl.is_valid());
        assert!(vl.contains(e, ChromaticPoint::new(fin(0), 3)));
        assert!(vl.contains(e, ChromaticPoint::new(fin(40), 3)));
        assert!(!vl.contains(e, ChromaticPoint::new(fin(1), 2)));
        assert!(vl.contains(e, ChromaticPoint::new(Height::Infinity, 3)));
        assert!(!vl.contains(e, ChromaticPoint::new(Height::Infinity, 2)));
    }

    #[test]
    fn ell_inequality_checked_on_cyclic_p_groups() {
        let l = lattice("cyclic:4");
        let (e, c2) = (l.class_of(SubgroupId(0)), l.class_of(SubgroupId(1)));
        let primes = [
            BalmerPrime::at(e, ChromaticPoint::rational()),
            BalmerPrime::new(e, fin(1), 2),
            BalmerPrime::new(e, fin(2), 2),
        ];
        let vl = VanishingLocus::new(l.clone(), primes);
        assert!(matches!(vl.validate()[..], [LocusViolation::EllInequality { p: 2, i: 0, .. }]));
        let closed = VanishingLocus::closure(l.clone(), primes).unwrap();
        assert!(closed.is_valid());
        assert_eq!(closed.max_height(SubgroupId(1), 2), Some(fin(1)));
        assert_eq!(closed.max_height(SubgroupId(2), 2), Some(fin(0)));
        assert!(closed.contains(c2, ChromaticPoint::new(fin(1), 2)));
    }

    #[test]
    fn closure_is_idempotent_and_drops_redundant_entries() {
        let l = lattice("symmetric:3");
        let c = l.class_of(SubgroupId(1));
        let seed = [BalmerPrime::new(c, fin(3), 5), BalmerPrime::new(c, Height::Infinity, 5), BalmerPrime::new(c, fin(2), 3)];
        let once = VanishingLocus::closure(l.clone(), seed).unwrap();
        assert!(once.is_valid());
        let twice = VanishingLocus::closure(l.clone(), once.primes().iter().copied()).unwrap();
        assert_eq!(once, twice);
        let listed: Vec<String> = once.iter().map(|b| b.to_string()).collect();
        assert_eq!(listed, vec!["P([1], 1, 3)", "P([1], 2, 3)", "P([1], inf, 5)"]);
    }

    #[test]
    fn cyclic_chain_detection() {
        assert_eq!(cyclic_p_chain(&lattice("cyclic:8")), Some((2, 3)));
        assert_eq!(cyclic_p_chain(&lattice("cyclic:9")), Some((3, 2)));
        assert_eq!(cyclic_p_chain(&lattice("cyclic:6")), None);
        assert_eq!(cyclic_p_chain(&lattice("cyclic:2*cyclic:2")), None);
        assert_eq!(chain_length_for(&lattice("trivial"), 5), Ok(0));
        assert!(chain_length_for(&lattice("cyclic:4"), 3).is_err());
    }

    #[test]
    fn prime_poset_of_c2() {
        let l = lattice("cyclic:2");
        let (nodes, edges) = prime_poset(&l, &[2], 2);
        assert_eq!(nodes.len(), 6);
        assert_eq!(edges.len(), 4);
        for (a, b) in edges {
            assert_eq!(nodes[a].class, nodes[b].class);
            assert!(nodes[a].height > nodes[b].height);
        }
    }
}
