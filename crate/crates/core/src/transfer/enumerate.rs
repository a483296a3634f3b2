use std::sync::Arc;

use super::{Relation, TransferError, TransferSystem};
use crate::bitset::BitSet;
use crate::group::{SubgroupId, SubgroupLattice};

/// Default cap on the number of candidate pair classes (conjugacy orbits of
/// pairs `K < H`).
pub const DEFAULT_MAX_PAIRS: usize = 30;

/// All transfer systems on a lattice, with their inclusion order.
#[derive(Debug, Clone)]
pub struct TransferPoset {
    /// Sorted by number of pairs, then lexicographically by sorted pair list.
    /// The first entry is the trivial system and the last the complete one.
    pub systems: Vec<TransferSystem>,
    /// `leq[i]` holds every `j` with `systems[i] ⊆ systems[j]`.
    pub leq: Vec<BitSet>,
}

impl TransferPoset {
    pub fn len(&self) -> usize {
        self.systems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.systems.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i].contains(j)
    }

    /// Covering relations `(i, j)` of the inclusion order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.systems.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in self.leq[i].iter().filter(|&j| j != i) {
                if !(0..n).any(|m| m != i && m != j && self.leq(i, m) && self.leq(m, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn position(&self, system: &TransferSystem) -> Option<usize> {
        self.systems.iter().position(|s| s == system)
    }
}

pub fn enumerate_transfer_systems(lattice: &Arc<SubgroupLattice>) -> Result<TransferPoset, TransferError> {
    enumerate_with_bound(lattice, DEFAULT_MAX_PAIRS)
}

/// Enumerates every transfer system. Transfer systems are exactly the closed
/// sets of [`Relation::close`], so they are listed with Ganter's NextClosure
/// over conjugacy orbits of candidate pairs, then sorted.
pub fn enumerate_with_bound(
    lattice: &Arc<SubgroupLattice>,
    max_pairs: usize,
) -> Result<TransferPoset, TransferError> {
    let orbits = candidate_orbits(lattice);
    let bound = max_pairs.min(64);
    if orbits.len() > bound {
        return Err(TransferError::LatticeTooLarge {
            pairs: orbits.len(),
            bound,
        });
    }
    let n = orbits.len();

    let closure = |mask: u64| -> (u64, TransferSystem) {
        let seed = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .flat_map(|i| orbits[i].iter().copied());
        let system = Relation::from_pairs(lattice.clone(), seed)
            .close()
            .expect("candidate pairs are nested");
        let closed = (0..n)
            .filter(|&i| system.contains(orbits[i][0].0, orbits[i][0].1))
            .fold(0u64, |m, i| m | 1 << i);
        (closed, system)
    };

    let (mut current, first) = closure(0);
    let mut systems = vec![first];
    'next: loop {
        for i in (0..n).rev() {
            let bit = 1u64 << i;
            if current & bit != 0 {
                continue;
            }
            let lower = bit - 1;
            let (candidate, system) = closure((current & lower) | bit);
            if candidate & lower == current & lower {
                current = candidate;
                systems.push(system);
                continue 'next;
            }
        }
        break;
    }

    systems.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.pairs().cmp(&b.pairs())));

    let leq = systems
        .iter()
        .map(|a| {
            BitSet::from_indices(
                systems.len(),
                systems.iter().enumerate().filter(|(_, b)| a.is_subsystem(b)).map(|(j, _)| j),
            )
        })
        .collect();
    Ok(TransferPoset { systems, leq })
}

/// Orbits of `(K, H)`, `K < H`, under simultaneous conjugation, each sorted,
/// ordered by least member.
fn candidate_orbits(lattice: &SubgroupLattice) -> Vec<Vec<(SubgroupId, SubgroupId)>> {
    let mut out: Vec<Vec<(SubgroupId, SubgroupId)>> = Vec::new();
    for h in lattice.ids() {
        for k in lattice.below(h).filter(|&k| k != h) {
            let orbit = TransferSystem::expand_orbit(lattice, (k, h));
            if orbit[0] == (k, h) {
                out.push(orbit);
            }
        }
    }
    out.sort();
    out
}
