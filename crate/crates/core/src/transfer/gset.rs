//! Finite `H`-sets, admissibility, and a set-level oracle for the indexing
//! system a relation determines.
//!
//! The oracle never consults the relational axioms. It builds concrete
//! permutation actions (cosets, products, restrictions, inductions), reads
//! off point stabilizers, and asks only whether each stabilizer pair lies in
//! the relation.

use std::collections::HashMap;
use std::fmt;

use super::{Relation, TransferError, TransferSystem};
use crate::bitset::BitSet;
use crate::group::{ElementId, SubgroupId, SubgroupLattice};

/// Largest accepted `size_bound` for [`indexing_closure_oracle`].
pub const MAX_ORACLE_BOUND: usize = 8;

/// A finite `H`-set as a multiset of orbits `H/K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSet {
    pub base: SubgroupId,
    pub orbits: Vec<SubgroupId>,
}

impl GSet {
    pub fn new(lattice: &SubgroupLattice, base: SubgroupId, orbits: Vec<SubgroupId>) -> Result<Self, TransferError> {
        if let Some(&k) = orbits.iter().find(|&&k| !lattice.leq(k, base)) {
            return Err(TransferError::NotNested { k, h: base });
        }
        Ok(Self { base, orbits })
    }

    pub fn cardinality(&self, lattice: &SubgroupLattice) -> usize {
        let h = lattice.order_of(self.base);
        self.orbits.iter().map(|&k| h / lattice.order_of(k)).sum()
    }

    /// The `H^g`-set obtained by transporting along conjugation by `g`.
    pub fn conjugate(&self, lattice: &SubgroupLattice, g: ElementId) -> GSet {
        GSet {
            base: lattice.conjugate_subgroup(self.base, g),
            orbits: self.orbits.iter().map(|&k| lattice.conjugate_subgroup(k, g)).collect(),
        }
    }

    /// Every orbit `H/K` has `(K', H)` admissible for some `H`-conjugate `K'`
    /// of `K`.
    pub fn is_admissible(&self, system: &TransferSystem) -> bool {
        is_admissible_in(system.relation(), self)
    }
}

fn is_admissible_in(relation: &Relation, t: &GSet) -> bool {
    let l = relation.lattice();
    let base = l.subgroup(t.base);
    t.orbits.iter().all(|&k| {
        base.members
            .iter()
            .any(|h| relation.contains(l.conjugate_subgroup(k, h), t.base))
    })
}

/// Which part of the indexing-system definition a counterexample breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureKind {
    /// The one-point set is not admissible.
    Terminal,
    /// A sub-`H`-set of an admissible set is not admissible.
    Subobject,
    /// A disjoint union of admissible sets is not admissible.
    Coproduct,
    /// A product of admissible sets is not admissible.
    Product,
    /// The restriction of an admissible `H`-set to `J ≤ H` is not admissible.
    Restriction,
    /// A conjugate of an admissible set is not admissible.
    Conjugation,
    /// `H ×_K T` is not admissible for admissible `H/K` and `T`.
    SelfInduction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub kind: ClosureKind,
    pub base: SubgroupId,
    /// Stabilizer of a point of the offending set whose pair with the acting
    /// subgroup is missing from the relation.
    pub bad_stabilizer: SubgroupId,
    pub acting: SubgroupId,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} at {}: {} (stabilizer {} not admissible in {})",
            self.kind, self.base, self.detail, self.bad_stabilizer, self.acting
        )
    }
}

/// A permutation action of the subgroup `acting` on `0..points`.
#[derive(Clone)]
struct Action {
    acting: SubgroupId,
    points: usize,
    /// `act[g][x]`, populated for `g` in `acting`.
    act: Vec<Vec<usize>>,
}

impl Action {
    fn empty(lattice: &SubgroupLattice, acting: SubgroupId) -> Self {
        Self {
            acting,
            points: 0,
            act: build_rows(lattice, acting, |_| Vec::new()),
        }
    }

    /// `H/K` as left cosets `hK`, `g·hK = ghK`.
    fn orbit(lattice: &SubgroupLattice, h: SubgroupId, k: SubgroupId) -> Self {
        let g = lattice.group();
        let kset = &lattice.subgroup(k).members;
        let mut coset_of: HashMap<ElementId, usize> = HashMap::new();
        let mut cosets = 0;
        for x in lattice.subgroup(h).members.iter() {
            if coset_of.contains_key(&x) {
                continue;
            }
            for y in kset.iter() {
                coset_of.insert(g.mul(x, y), cosets);
            }
            cosets += 1;
        }
        let reps: Vec<ElementId> = {
            let mut r = vec![usize::MAX; cosets];
            for (&x, &c) in &coset_of {
                r[c] = r[c].min(x);
            }
            r
        };
        Self {
            acting: h,
            points: cosets,
            act: build_rows(lattice, h, |a| reps.iter().map(|&r| coset_of[&g.mul(a, r)]).collect()),
        }
    }

    fn from_gset(lattice: &SubgroupLattice, t: &GSet) -> Self {
        t.orbits.iter().fold(Self::empty(lattice, t.base), |acc, &k| {
            acc.coproduct(&Self::orbit(lattice, t.base, k))
        })
    }

    fn members<'a>(&self, lattice: &'a SubgroupLattice) -> &'a BitSet {
        &lattice.subgroup(self.acting).members
    }

    fn coproduct(&self, other: &Action) -> Action {
        let act = self
            .act
            .iter()
            .zip(&other.act)
            .map(|(a, b)| {
                if a.is_empty() && b.is_empty() {
                    Vec::new()
                } else {
                    a.iter().copied().chain(b.iter().map(|&y| y + self.points)).collect()
                }
            })
            .collect();
        Action {
            acting: self.acting,
            points: self.points + other.points,
            act,
        }
    }

    fn product(&self, lattice: &SubgroupLattice, other: &Action) -> Action {
        let n = other.points;
        Action {
            acting: self.acting,
            points: self.points * n,
            act: build_rows(lattice, self.acting, |g| {
                (0..self.points * n)
                    .map(|p| self.act[g][p / n] * n + other.act[g][p % n])
                    .collect()
            }),
        }
    }

    fn restrict(&self, lattice: &SubgroupLattice, j: SubgroupId) -> Action {
        Action {
            acting: j,
            points: self.points,
            act: build_rows(lattice, j, |g| self.act[g].clone()),
        }
    }

    /// The same points with `H^c` acting by `x ↦ (c x c⁻¹)·p`.
    fn conjugate(&self, lattice: &SubgroupLattice, c: ElementId) -> Action {
        let grp = lattice.group();
        let acting = lattice.conjugate_subgroup(self.acting, c);
        Action {
            acting,
            points: self.points,
            act: build_rows(lattice, acting, |x| self.act[grp.mul(grp.mul(c, x), grp.inverse(c))].clone()),
        }
    }

    /// `H ×_K T` for a `K`-set `T`: pairs `(h, t)` modulo `(hk, t) ~ (h, kt)`.
    fn induce(lattice: &SubgroupLattice, h: SubgroupId, t: &Action) -> Action {
        let grp = lattice.group();
        let k = t.acting;
        let kset: Vec<ElementId> = lattice.subgroup(k).members.iter().collect();
        let canon = |x: ElementId, p: usize| -> (ElementId, usize) {
            kset.iter()
                .map(|&y| (grp.mul(x, y), t.act[grp.inverse(y)][p]))
                .min()
                .unwrap()
        };
        let mut index: HashMap<(ElementId, usize), usize> = HashMap::new();
        for x in lattice.subgroup(h).members.iter() {
            for p in 0..t.points {
                let c = canon(x, p);
                let next = index.len();
                index.entry(c).or_insert(next);
            }
        }
        let mut classes: Vec<(ElementId, usize)> = vec![(0, 0); index.len()];
        for (&c, &i) in &index {
            classes[i] = c;
        }
        Action {
            acting: h,
            points: classes.len(),
            act: build_rows(lattice, h, |g| {
                classes.iter().map(|&(x, p)| index[&canon(grp.mul(g, x), p)]).collect()
            }),
        }
    }

    fn stabilizer(&self, lattice: &SubgroupLattice, p: usize) -> SubgroupId {
        let g = lattice.group();
        let stab = BitSet::from_indices(g.order(), self.members(lattice).iter().filter(|&x| self.act[x][p] == p));
        lattice.find(&stab).expect("point stabilizers are subgroups")
    }

    /// The first point whose stabilizer pair is missing from `relation`.
    fn inadmissible_point(&self, relation: &Relation) -> Option<SubgroupId> {
        let l = relation.lattice();
        (0..self.points)
            .map(|p| self.stabilizer(l, p))
            .find(|&s| !relation.contains(s, self.acting))
    }
}

fn build_rows(
    lattice: &SubgroupLattice,
    acting: SubgroupId,
    mut row: impl FnMut(ElementId) -> Vec<usize>,
) -> Vec<Vec<usize>> {
    let members = &lattice.subgroup(acting).members;
    lattice
        .group()
        .elements()
        .map(|g| if members.contains(g) { row(g) } else { Vec::new() })
        .collect()
}

/// All `H`-sets of cardinality `≤ bound` up to isomorphism, as multisets of
/// orbit types (one `K` per `H`-conjugacy class).
fn small_gsets(lattice: &SubgroupLattice, h: SubgroupId, bound: usize) -> Vec<GSet> {
    let hmembers = &lattice.subgroup(h).members;
    let mut types: Vec<SubgroupId> = Vec::new();
    for k in lattice.below(h) {
        let least = hmembers.iter().map(|x| lattice.conjugate_subgroup(k, x)).min().unwrap();
        if least == k {
            types.push(k);
        }
    }
    let size = |k: SubgroupId| lattice.order_of(h) / lattice.order_of(k);

    fn rec(
        types: &[SubgroupId],
        size: &dyn Fn(SubgroupId) -> usize,
        i: usize,
        remaining: usize,
        current: &mut Vec<SubgroupId>,
        out: &mut Vec<Vec<SubgroupId>>,
    ) {
        if i == types.len() {
            out.push(current.clone());
            return;
        }
        let s = size(types[i]);
        let mut used = 0;
        loop {
            rec(types, size, i + 1, remaining - used, current, out);
            if used + s > remaining {
                break;
            }
            used += s;
            current.push(types[i]);
        }
        for _ in 0..used / s {
            current.pop();
        }
    }

    let mut out = Vec::new();
    rec(&types, &size, 0, bound, &mut Vec::new(), &mut out);
    out.into_iter().map(|orbits| GSet { base: h, orbits }).collect()
}

/// Checks, by brute force over all `H`-sets of cardinality `≤ size_bound`,
/// that the sets admissible under `relation` form an indexing system at `H`:
/// the point is admissible, and admissible sets are closed under subobjects,
/// coproducts, products, restriction to subgroups of `H`, conjugation, and
/// self-induction `H ×_K T`. Returns the first counterexample found.
pub fn indexing_closure_oracle(
    relation: &Relation,
    h: SubgroupId,
    size_bound: usize,
) -> Result<Option<Counterexample>, TransferError> {
    if size_bound > MAX_ORACLE_BOUND {
        return Err(TransferError::BoundTooLarge {
            bound: size_bound,
            max: MAX_ORACLE_BOUND,
        });
    }
    let l = &**relation.lattice();
    let fail = |kind, action: &Action, bad, detail: String| {
        Some(Counterexample {
            kind,
            base: h,
            bad_stabilizer: bad,
            acting: action.acting,
            detail,
        })
    };
    let describe = |t: &GSet| {
        let parts: Vec<String> = t.orbits.iter().map(|k| format!("{}/{}", t.base, k)).collect();
        if parts.is_empty() {
            "∅".to_string()
        } else {
            parts.join(" ⊔ ")
        }
    };

    let point = Action::orbit(l, h, h);
    if let Some(bad) = point.inadmissible_point(relation) {
        return Ok(fail(ClosureKind::Terminal, &point, bad, format!("{h}/{h}")));
    }

    let all = small_gsets(l, h, size_bound);
    let admissible: Vec<(GSet, Action)> = all
        .into_iter()
        .map(|t| {
            let a = Action::from_gset(l, &t);
            (t, a)
        })
        .filter(|(_, a)| a.inadmissible_point(relation).is_none())
        .collect();

    for (t, _) in &admissible {
        for skip in 0..t.orbits.len() {
            let mut sub = t.clone();
            sub.orbits.remove(skip);
            let a = Action::from_gset(l, &sub);
            if let Some(bad) = a.inadmissible_point(relation) {
                return Ok(fail(ClosureKind::Subobject, &a, bad, format!("{} ⊂ {}", describe(&sub), describe(t))));
            }
        }
    }

    for (t1, a1) in &admissible {
        for (t2, a2) in &admissible {
            let sum = a1.coproduct(a2);
            if let Some(bad) = sum.inadmissible_point(relation) {
                return Ok(fail(ClosureKind::Coproduct, &sum, bad, format!("({}) ⊔ ({})", describe(t1), describe(t2))));
            }
            let prod = a1.product(l, a2);
            if let Some(bad) = prod.inadmissible_point(relation) {
                return Ok(fail(ClosureKind::Product, &prod, bad, format!("({}) × ({})", describe(t1), describe(t2))));
            }
        }
    }

    for j in l.below(h).filter(|&j| j != h) {
        for (t, a) in &admissible {
            let r = a.restrict(l, j);
            if let Some(bad) = r.inadmissible_point(relation) {
                return Ok(fail(ClosureKind::Restriction, &r, bad, format!("restriction of {} to {j}", describe(t))));
            }
        }
    }

    for c in l.group().elements() {
        for (t, a) in &admissible {
            let conj = a.conjugate(l, c);
            if let Some(bad) = conj.inadmissible_point(relation) {
                return Ok(fail(ClosureKind::Conjugation, &conj, bad, format!("conjugate of {} by element {c}", describe(t))));
            }
        }
    }

    for k in l.below(h).filter(|&k| k != h) {
        let orbit = Action::orbit(l, h, k);
        if orbit.inadmissible_point(relation).is_some() {
            continue;
        }
        for t in small_gsets(l, k, size_bound) {
            let a = Action::from_gset(l, &t);
            if a.inadmissible_point(relation).is_some() {
                continue;
            }
            let induced = Action::induce(l, h, &a);
            if let Some(bad) = induced.inadmissible_point(relation) {
                return Ok(fail(ClosureKind::SelfInduction, &induced, bad, format!("{h} ×_{k} ({})", describe(&t))));
            }
        }
    }

    Ok(None)
}
