use std::collections::{HashMap, HashSet};
use std::fmt;

use super::{ElementId, FiniteGroup, GroupError};
use crate::bitset::BitSet;

/// Default bound on `|G|` for lattice construction.
pub const DEFAULT_MAX_ORDER: usize = 64;

/// Position of a subgroup in its lattice's deterministic ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubgroupId(pub usize);

impl fmt::Display for SubgroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Index of a conjugacy class of subgroups. Classes are numbered in the
/// order of their smallest member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId(pub usize);

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub id: SubgroupId,
    pub members: BitSet,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: ElementId) -> bool {
        self.members.contains(g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub id: ClassId,
    /// Smallest subgroup id in the class.
    pub representative: SubgroupId,
    /// Ascending.
    pub members: Vec<SubgroupId>,
}

/// All subgroups of a finite group, ordered by `(order, members)` with
/// members compared lexicographically, together with inclusion and the
/// conjugation action.
#[derive(Clone)]
pub struct SubgroupLattice {
    group: FiniteGroup,
    subgroups: Vec<Subgroup>,
    index: HashMap<BitSet, SubgroupId>,
    /// `supergroups[h]` = ids of subgroups containing `h` (including `h`).
    supergroups: Vec<BitSet>,
    /// `conj[h * order + g]` = id of `g⁻¹ h g`.
    conj: Vec<SubgroupId>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<ClassId>,
    names: Vec<String>,
}

impl SubgroupLattice {
    pub fn new(group: FiniteGroup) -> Result<Self, GroupError> {
        Self::with_bound(group, DEFAULT_MAX_ORDER)
    }

    pub fn with_bound(group: FiniteGroup, max_order: usize) -> Result<Self, GroupError> {
        if group.order() > max_order {
            return Err(GroupError::GroupTooLarge {
                order: group.order(),
                bound: max_order,
            });
        }
        let mut member_sets = enumerate_subgroups(&group);
        member_sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

        let subgroups: Vec<Subgroup> = member_sets
            .into_iter()
            .enumerate()
            .map(|(i, members)| Subgroup {
                id: SubgroupId(i),
                members,
            })
            .collect();
        let index: HashMap<BitSet, SubgroupId> =
            subgroups.iter().map(|s| (s.members.clone(), s.id)).collect();

        let count = subgroups.len();
        let mut supergroups = vec![BitSet::new(count); count];
        for a in &subgroups {
            for b in &subgroups {
                if a.order() <= b.order() && a.members.is_subset(&b.members) {
                    supergroups[a.id.0].insert(b.id.0);
                }
            }
        }

        let n = group.order();
        let mut conj = Vec::with_capacity(count * n);
        for s in &subgroups {
            for g in group.elements() {
                let image = BitSet::from_indices(n, s.members.iter().map(|a| group.conjugate(a, g)));
                conj.push(index[&image]);
            }
        }

        let mut class_of = vec![ClassId(usize::MAX); count];
        let mut classes = Vec::new();
        for s in &subgroups {
            if class_of[s.id.0].0 != usize::MAX {
                continue;
            }
            let cid = ClassId(classes.len());
            let mut members: Vec<SubgroupId> = conj[s.id.0 * n..(s.id.0 + 1) * n].to_vec();
            members.sort();
            members.dedup();
            for m in &members {
                class_of[m.0] = cid;
            }
            classes.push(ConjugacyClass {
                id: cid,
                representative: s.id,
                members,
            });
        }

        let mut per_order: HashMap<usize, usize> = HashMap::new();
        let names = subgroups
            .iter()
            .map(|s| {
                let k = per_order.entry(s.order()).or_insert(0);
                let name = format!("C{}#{}", s.order(), k);
                *k += 1;
                name
            })
            .collect();

        Ok(Self {
            group,
            subgroups,
            index,
            supergroups,
            conj,
            classes,
            class_of,
            names,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn ids(&self) -> impl Iterator<Item = SubgroupId> + '_ {
        (0..self.subgroups.len()).map(SubgroupId)
    }

    pub fn subgroup(&self, id: SubgroupId) -> &Subgroup {
        &self.subgroups[id.0]
    }

    pub fn order_of(&self, id: SubgroupId) -> usize {
        self.subgroups[id.0].order()
    }

    pub fn trivial(&self) -> SubgroupId {
        SubgroupId(0)
    }

    pub fn whole(&self) -> SubgroupId {
        SubgroupId(self.subgroups.len() - 1)
    }

    /// Looks up the lattice member with exactly these elements.
    pub fn find(&self, members: &BitSet) -> Option<SubgroupId> {
        self.index.get(members).copied()
    }

    /// Canonical name `C{order}#{k}`, where `k` counts earlier subgroups of the
    /// same order in the lattice ordering.
    pub fn name(&self, id: SubgroupId) -> &str {
        &self.names[id.0]
    }

    pub fn by_name(&self, name: &str) -> Option<SubgroupId> {
        self.names.iter().position(|n| n == name).map(SubgroupId)
    }

    /// `k ≤ h`.
    #[inline]
    pub fn leq(&self, k: SubgroupId, h: SubgroupId) -> bool {
        self.supergroups[k.0].contains(h.0)
    }

    /// Ids of all subgroups of `h`, ascending.
    pub fn below(&self, h: SubgroupId) -> impl Iterator<Item = SubgroupId> + '_ {
        self.ids().filter(move |&k| self.leq(k, h))
    }

    /// Covering pairs `(k, h)`: `k < h` with nothing strictly between.
    pub fn covers(&self) -> Vec<(SubgroupId, SubgroupId)> {
        let mut out = Vec::new();
        for k in self.ids() {
            for h in self.ids() {
                if k != h
                    && self.leq(k, h)
                    && !self.ids().any(|m| m != k && m != h && self.leq(k, m) && self.leq(m, h))
                {
                    out.push((k, h));
                }
            }
        }
        out
    }

    /// `h^g = g⁻¹ h g`.
    #[inline]
    pub fn conjugate_subgroup(&self, h: SubgroupId, g: ElementId) -> SubgroupId {
        self.conj[h.0 * self.group.order() + g]
    }

    pub fn intersect(&self, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        let meet = self.subgroups[a.0].members.intersection(&self.subgroups[b.0].members);
        self.index[&meet]
    }

    /// Smallest `g` with `k^g ≤ h`, if any.
    pub fn is_subconjugate(&self, k: SubgroupId, h: SubgroupId) -> Option<ElementId> {
        self.group
            .elements()
            .find(|&g| self.leq(self.conjugate_subgroup(k, g), h))
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, h: SubgroupId) -> ClassId {
        self.class_of[h.0]
    }

    pub fn class(&self, c: ClassId) -> &ConjugacyClass {
        &self.classes[c.0]
    }

    pub fn is_normal(&self, h: SubgroupId) -> bool {
        self.classes[self.class_of[h.0].0].members.len() == 1
    }

    /// Members of class `c` that are contained in `h`.
    pub fn class_members_below(&self, c: ClassId, h: SubgroupId) -> impl Iterator<Item = SubgroupId> + '_ {
        self.classes[c.0].members.iter().copied().filter(move |&j| self.leq(j, h))
    }

    /// The double cosets `K a H` partitioning `A`, each sorted ascending, listed
    /// in order of their least element. Requires `K, H ≤ A`.
    pub fn double_coset_partition(
        &self,
        k: SubgroupId,
        h: SubgroupId,
        ambient: SubgroupId,
    ) -> Result<Vec<Vec<ElementId>>, GroupError> {
        for s in [k, h] {
            if !self.leq(s, ambient) {
                return Err(GroupError::NotSubgroupOfAmbient {
                    subgroup: s,
                    ambient,
                });
            }
        }
        let g = &self.group;
        let kset = &self.subgroups[k.0].members;
        let hset = &self.subgroups[h.0].members;
        let mut seen = BitSet::new(g.order());
        let mut out = Vec::new();
        for a in self.subgroups[ambient.0].members.iter() {
            if seen.contains(a) {
                continue;
            }
            let mut coset = BitSet::new(g.order());
            for x in kset.iter() {
                let xa = g.mul(x, a);
                for y in hset.iter() {
                    coset.insert(g.mul(xa, y));
                }
            }
            seen.union_with(&coset);
            out.push(coset.iter().collect());
        }
        Ok(out)
    }

    /// Representatives of `K\A/H`, the least element of each double coset,
    /// ascending. Requires `K, H ≤ A`.
    pub fn double_cosets(
        &self,
        k: SubgroupId,
        h: SubgroupId,
        ambient: SubgroupId,
    ) -> Result<Vec<ElementId>, GroupError> {
        Ok(self
            .double_coset_partition(k, h, ambient)?
            .into_iter()
            .map(|c| c[0])
            .collect())
    }
}

/// Lattices are equal when built from the same multiplication table.
impl PartialEq for SubgroupLattice {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group
    }
}

impl Eq for SubgroupLattice {}

impl fmt::Debug for SubgroupLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubgroupLattice")
            .field("group", &self.group)
            .field("subgroups", &self.subgroups.len())
            .field("classes", &self.classes.len())
            .finish()
    }
}

/// Subgroup generated by `seed` ∪ `gens`, where `seed` is already a
/// subgroup generated by `gens[..gens.len() - 1]`.
fn close(group: &FiniteGroup, seed: &BitSet, gens: &[ElementId]) -> BitSet {
    let mut members = seed.clone();
    let mut frontier: Vec<ElementId> = seed.iter().collect();
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = group.mul(x, s);
            if members.insert(y) {
                frontier.push(y);
            }
        }
    }
    members
}

/// Every subgroup's member set, in discovery order: start from the trivial
/// subgroup and repeatedly adjoin one element.
fn enumerate_subgroups(group: &FiniteGroup) -> Vec<BitSet> {
    let n = group.order();
    let trivial = BitSet::from_indices(n, [group.identity()]);
    let mut seen: HashSet<BitSet> = HashSet::new();
    let mut found: Vec<(BitSet, Vec<ElementId>)> = vec![(trivial.clone(), Vec::new())];
    seen.insert(trivial);
    let mut next = 0;
    while next < found.len() {
        let (members, gens) = found[next].clone();
        next += 1;
        for g in group.elements() {
            if members.contains(g) {
                continue;
            }
            let mut new_gens = gens.clone();
            new_gens.push(g);
            let mut seed = members.clone();
            seed.insert(g);
            let sub = close(group, &seed, &new_gens);
            if seen.insert(sub.clone()) {
                found.push((sub, new_gens));
            }
        }
    }
    found.into_iter().map(|(m, _)| m).collect()
}
