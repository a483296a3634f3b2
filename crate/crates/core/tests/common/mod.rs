#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use chromloc::bitset::BitSet;
use chromloc::group::{GroupSpec, SubgroupId, SubgroupLattice};
use chromloc::spectrum::{BalmerPrime, ChromaticPoint, ChromaticPrime, Height, SupportData, VanishingLocus};
use rand::Rng;

pub const CORPUS: [&str; 7] = ["cyclic:4", "cyclic:6", "symmetric:3", "dihedral:8", "quaternion", "cyclic:8", "cyclic:9"];

pub fn lattice(spec: &str) -> Arc<SubgroupLattice> {
    let group = spec.parse::<GroupSpec>().unwrap().build().unwrap();
    Arc::new(SubgroupLattice::new(group).unwrap())
}

pub fn random_point(rng: &mut impl Rng, primes: &[u32], max_height: u32) -> ChromaticPoint {
    let p = primes[rng.gen_range(0..primes.len())];
    if rng.gen_ratio(1, 12) {
        ChromaticPoint {
            height: Height::Infinity,
            prime: ChromaticPrime::P(p),
        }
    } else {
        ChromaticPoint::new(Height::Finite(rng.gen_range(0..=max_height)), p)
    }
}

/// A random nonequivariant support of up to five points at 2, 3, 5.
pub fn random_support_set(rng: &mut impl Rng) -> BTreeSet<ChromaticPoint> {
    let n = rng.gen_range(0..=5);
    (0..n).map(|_| random_point(rng, &[2, 3, 5], 4)).collect()
}

pub fn random_support_data(rng: &mut impl Rng, lattice: &Arc<SubgroupLattice>) -> SupportData {
    let supports = (0..lattice.classes().len()).map(|_| random_support_set(rng)).collect();
    SupportData::new(lattice.clone(), supports).unwrap()
}

/// The closure of a few random primes; primes 2 and 3 are both used so that
/// cyclic p-group rules are exercised on C_8 and C_9.
pub fn random_locus(rng: &mut impl Rng, lattice: &Arc<SubgroupLattice>) -> VanishingLocus {
    let classes = lattice.classes().len();
    let n = rng.gen_range(0..=4);
    let seed: Vec<BalmerPrime> = (0..n)
        .map(|_| {
            let c = lattice.classes()[rng.gen_range(0..classes)].id;
            BalmerPrime::at(c, random_point(rng, &[2, 3], 4))
        })
        .collect();
    VanishingLocus::closure(lattice.clone(), seed).unwrap()
}

pub type Pairs = BTreeSet<(SubgroupId, SubgroupId)>;

/// The four axioms checked directly on a pair set, with restriction over
/// every `h ∈ H` rather than double-coset representatives.
pub fn satisfies_axioms(l: &SubgroupLattice, pairs: &Pairs) -> bool {
    let g = l.group();
    let has = |k: SubgroupId, h: SubgroupId| k == h || pairs.contains(&(k, h));
    let meet = |a: SubgroupId, b: SubgroupId| {
        let m: BitSet = l.subgroup(a).members.intersection(&l.subgroup(b).members);
        l.find(&m).unwrap()
    };
    let conj = |k: SubgroupId, x: usize| {
        let m = BitSet::from_indices(g.order(), l.subgroup(k).members.iter().map(|y| g.mul(g.mul(g.inverse(x), y), x)));
        l.find(&m).unwrap()
    };
    for &(k, h) in pairs {
        for &(k2, h2) in pairs {
            if h == k2 && !has(k, h2) {
                return false;
            }
        }
        for x in g.elements() {
            if !has(conj(k, x), conj(h, x)) {
                return false;
            }
        }
        for j in l.ids().filter(|&j| l.leq(j, h)) {
            for x in l.subgroup(h).members.iter() {
                if !has(meet(conj(k, x), j), j) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every subset of the proper pairs that satisfies the axioms, sorted by size
/// then by sorted pair list.
pub fn subset_filter(l: &SubgroupLattice) -> Vec<Pairs> {
    let candidates: Vec<(SubgroupId, SubgroupId)> = l
        .ids()
        .flat_map(|h| l.ids().filter(move |&k| k != h).map(move |k| (k, h)))
        .filter(|&(k, h)| l.leq(k, h))
        .collect();
    assert!(candidates.len() <= 20);
    let mut out: Vec<Pairs> = (0u32..1 << candidates.len())
        .map(|mask| {
            (0..candidates.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| candidates[i])
                .collect::<Pairs>()
        })
        .filter(|s| satisfies_axioms(l, s))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    out
}

/// Preservation condition evaluated literally: every conjugate `J` of every prime's
/// class with `J ≤ H`, and every `g ∈ H`.
pub fn brute_force_preserves(locus: &VanishingLocus, k: SubgroupId, h: SubgroupId) -> bool {
    let l = locus.lattice();
    locus.iter().all(|prime| {
        l.class(prime.class).members.iter().filter(|&&j| l.leq(j, h)).all(|&j| {
            l.subgroup(h)
                .members
                .iter()
                .any(|g| locus.contains_subgroup(l.intersect(l.conjugate_subgroup(k, g), j), prime.point()))
        })
    })
}

pub fn brute_force_norm_support(s: &SupportData, k: SubgroupId, h: SubgroupId, j: SubgroupId) -> BTreeSet<ChromaticPoint> {
    let l = s.lattice();
    let mut out: Option<BTreeSet<ChromaticPoint>> = None;
    for g in l.subgroup(h).members.iter() {
        let f = s.at_subgroup(l.intersect(l.conjugate_subgroup(k, g), j));
        out = Some(match out {
            None => f.clone(),
            Some(acc) => acc.intersection(f).copied().collect(),
        });
    }
    out.unwrap()
}

