//! Transfer systems: indexing systems (equivalently N∞ operads) stored as a
//! relation `K → H` on the subgroup lattice, read "`H/K` is admissible".
//!
//! A [`Relation`] is an arbitrary set of nested pairs; [`Relation::validate`]
//! reports every failed axiom instance. A [`TransferSystem`] is a relation
//! known to satisfy all of them.

mod enumerate;
mod gset;

use std::fmt;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::group::{ElementId, SubgroupId, SubgroupLattice};

pub use enumerate::{enumerate_transfer_systems, enumerate_with_bound, TransferPoset, DEFAULT_MAX_PAIRS};
pub use gset::{indexing_closure_oracle, ClosureKind, Counterexample, GSet, MAX_ORACLE_BOUND};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransferError {
    #[error("pair ({k}, {h}) is not nested")]
    NotNested { k: SubgroupId, h: SubgroupId },
    #[error("{pairs} candidate pair classes exceed the enumeration bound {bound}")]
    LatticeTooLarge { pairs: usize, bound: usize },
    #[error("size bound {bound} exceeds the maximum {max}")]
    BoundTooLarge { bound: usize, max: usize },
    #[error("relation is not a transfer system ({} violations, first: {})", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
}

/// One failed instance of a transfer-system axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotNested {
        k: SubgroupId,
        h: SubgroupId,
    },
    NotReflexive {
        h: SubgroupId,
    },
    /// `(lower, middle)` and `(middle, upper)` present, `(lower, upper)` missing.
    NotTransitive {
        lower: SubgroupId,
        middle: SubgroupId,
        upper: SubgroupId,
    },
    /// `(k, h)` present but `(k^g, h^g)` missing.
    NotConjugationClosed {
        k: SubgroupId,
        h: SubgroupId,
        g: ElementId,
    },
    /// `(k, h)` present, `j ≤ h`, but `(k^rep ∩ j, j)` missing for the
    /// double coset `K rep J` in `H`.
    NotRestrictionClosed {
        k: SubgroupId,
        h: SubgroupId,
        j: SubgroupId,
        rep: ElementId,
        missing: SubgroupId,
    },
}

impl Violation {
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::NotNested { .. } => "nested",
            Violation::NotReflexive { .. } => "reflexive",
            Violation::NotTransitive { .. } => "transitive",
            Violation::NotConjugationClosed { .. } => "conjugation",
            Violation::NotRestrictionClosed { .. } => "restriction",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotNested { k, h } => write!(f, "nested: {k} is not a subgroup of {h}"),
            Violation::NotReflexive { h } => write!(f, "reflexive: ({h}, {h}) missing"),
            Violation::NotTransitive { lower, middle, upper } => write!(
                f,
                "transitive: ({lower}, {middle}) and ({middle}, {upper}) present, ({lower}, {upper}) missing"
            ),
            Violation::NotConjugationClosed { k, h, g } => {
                write!(f, "conjugation: ({k}, {h}) present, its conjugate by element {g} missing")
            }
            Violation::NotRestrictionClosed { k, h, j, rep, missing } => write!(
                f,
                "restriction: ({k}, {h}) present, restricting to {j} along {rep} needs ({missing}, {j})"
            ),
        }
    }
}

/// A set of pairs `(k, h)` of subgroup ids.
#[derive(Clone)]
pub struct Relation {
    lattice: Arc<SubgroupLattice>,
    /// `rows[h]` = the `k` with `(k, h)` in the relation.
    rows: Vec<BitSet>,
}

impl Relation {
    pub fn empty(lattice: Arc<SubgroupLattice>) -> Self {
        let n = lattice.len();
        Self {
            lattice,
            rows: vec![BitSet::new(n); n],
        }
    }

    /// Relation with exactly these pairs. Pairs need not be nested; that is
    /// reported by [`Relation::validate`].
    pub fn from_pairs(
        lattice: Arc<SubgroupLattice>,
        pairs: impl IntoIterator<Item = (SubgroupId, SubgroupId)>,
    ) -> Self {
        let mut r = Self::empty(lattice);
        for (k, h) in pairs {
            r.insert(k, h);
        }
        r
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    #[inline]
    pub fn contains(&self, k: SubgroupId, h: SubgroupId) -> bool {
        self.rows[h.0].contains(k.0)
    }

    pub fn insert(&mut self, k: SubgroupId, h: SubgroupId) -> bool {
        self.rows[h.0].insert(k.0)
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(BitSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(BitSet::is_empty)
    }

    /// All pairs, sorted by `(k, h)`.
    pub fn pairs(&self) -> Vec<(SubgroupId, SubgroupId)> {
        let mut out: Vec<_> = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(h, row)| row.iter().map(move |k| (SubgroupId(k), SubgroupId(h))))
            .collect();
        out.sort();
        out
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    /// Every violated instance of the transfer-system axioms.
    pub fn validate(&self) -> Vec<Violation> {
        let l = &*self.lattice;
        let g = l.group();
        let pairs = self.pairs();
        let mut out = Vec::new();

        for &(k, h) in &pairs {
            if !l.leq(k, h) {
                out.push(Violation::NotNested { k, h });
            }
        }
        for h in l.ids() {
            if !self.contains(h, h) {
                out.push(Violation::NotReflexive { h });
            }
        }
        for &(lower, middle) in &pairs {
            for upper in self.rows.iter().enumerate().filter(|(_, row)| row.contains(middle.0)).map(|(u, _)| SubgroupId(u)) {
                if !self.contains(lower, upper) {
                    out.push(Violation::NotTransitive { lower, middle, upper });
                }
            }
        }
        for &(k, h) in &pairs {
            for x in g.elements() {
                if !self.contains(l.conjugate_subgroup(k, x), l.conjugate_subgroup(h, x)) {
                    out.push(Violation::NotConjugationClosed { k, h, g: x });
                }
            }
        }
        for &(k, h) in &pairs {
            if !l.leq(k, h) {
                continue;
            }
            for j in l.below(h) {
                let reps = l.double_cosets(k, j, h).expect("k, j ≤ h");
                for rep in reps {
                    let missing = l.intersect(l.conjugate_subgroup(k, rep), j);
                    if !self.contains(missing, j) {
                        out.push(Violation::NotRestrictionClosed { k, h, j, rep, missing });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Smallest transfer system containing this relation. Fails only if some
    /// pair is not nested.
    pub fn close(&self) -> Result<TransferSystem, TransferError> {
        let l = &*self.lattice;
        for (k, h) in self.pairs() {
            if !l.leq(k, h) {
                return Err(TransferError::NotNested { k, h });
            }
        }
        let mut r = self.clone();
        for h in l.ids() {
            r.insert(h, h);
        }
        // Restricting along K ∩ J is enough once the relation is conjugation
        // closed: (K^h, H) is then present for every h ∈ H.
        loop {
            let mut changed = false;
            for (k, h) in r.pairs() {
                for x in l.group().elements() {
                    changed |= r.insert(l.conjugate_subgroup(k, x), l.conjugate_subgroup(h, x));
                }
                for j in l.below(h) {
                    changed |= r.insert(l.intersect(k, j), j);
                }
            }
            for h in 0..r.rows.len() {
                let mut row = r.rows[h].clone();
                for k in r.rows[h].iter() {
                    row.union_with(&r.rows[k]);
                }
                if row != r.rows[h] {
                    r.rows[h] = row;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(TransferSystem { relation: r })
    }
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && *self.lattice == *other.lattice
    }
}

impl Eq for Relation {}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs().iter().map(|(k, h)| (k.0, h.0))).finish()
    }
}

/// A relation satisfying the transfer-system axioms: reflexive, transitive,
/// closed under conjugation and under restriction to subgroups.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransferSystem {
    relation: Relation,
}

impl TransferSystem {
    /// Only the reflexive pairs: the initial system, corresponding to a
    /// trivial E∞ operad.
    pub fn trivial(lattice: Arc<SubgroupLattice>) -> Self {
        let pairs: Vec<_> = lattice.ids().map(|h| (h, h)).collect();
        Self {
            relation: Relation::from_pairs(lattice, pairs),
        }
    }

    /// Every nested pair: the terminal system, corresponding to genuine
    /// commutative rings.
    pub fn complete(lattice: Arc<SubgroupLattice>) -> Self {
        let pairs: Vec<_> = lattice
            .ids()
            .flat_map(|h| lattice.below(h).map(move |k| (k, h)).collect::<Vec<_>>())
            .collect();
        Self {
            relation: Relation::from_pairs(lattice, pairs),
        }
    }

    pub fn close(
        lattice: Arc<SubgroupLattice>,
        seed: impl IntoIterator<Item = (SubgroupId, SubgroupId)>,
    ) -> Result<Self, TransferError> {
        Relation::from_pairs(lattice, seed).close()
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.relation.lattice
    }

    pub fn contains(&self, k: SubgroupId, h: SubgroupId) -> bool {
        self.relation.contains(k, h)
    }

    pub fn pairs(&self) -> Vec<(SubgroupId, SubgroupId)> {
        self.relation.pairs()
    }

    /// Pairs with `k ≠ h`, sorted.
    pub fn nontrivial_pairs(&self) -> Vec<(SubgroupId, SubgroupId)> {
        self.relation.pairs().into_iter().filter(|(k, h)| k != h).collect()
    }

    pub fn len(&self) -> usize {
        self.relation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relation.is_empty()
    }

    pub fn is_subsystem(&self, other: &TransferSystem) -> bool {
        self.relation.is_subset(&other.relation)
    }

    /// One pair per orbit of simultaneous conjugation, the least in each.
    pub fn orbit_representatives(&self) -> Vec<(SubgroupId, SubgroupId)> {
        let l = self.lattice();
        self.pairs()
            .into_iter()
            .filter(|&(k, h)| {
                l.group()
                    .elements()
                    .all(|x| (k, h) <= (l.conjugate_subgroup(k, x), l.conjugate_subgroup(h, x)))
            })
            .collect()
    }

    /// The full conjugation orbit of a pair.
    pub fn expand_orbit(lattice: &SubgroupLattice, pair: (SubgroupId, SubgroupId)) -> Vec<(SubgroupId, SubgroupId)> {
        let mut out: Vec<_> = lattice
            .group()
            .elements()
            .map(|x| (lattice.conjugate_subgroup(pair.0, x), lattice.conjugate_subgroup(pair.1, x)))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

impl TryFrom<Relation> for TransferSystem {
    type Error = TransferError;

    fn try_from(relation: Relation) -> Result<Self, TransferError> {
        let violations = relation.validate();
        if violations.is_empty() {
            Ok(Self { relation })
        } else {
            Err(TransferError::Invalid(violations))
        }
    }
}
