//! Finite groups given by multiplication tables, their subgroup lattices,
//! conjugation, and double cosets.
//!
//! Conjugation is a right action throughout: `H^g := g⁻¹ H g`. Permutation
//! products are composed left to right (`i^(στ) = (i^σ)^τ`), so that
//! `⟨(1 2)⟩^(1 2 3) = ⟨(2 3)⟩` in `S_3`.

mod builders;
mod lattice;
mod spec;

use std::fmt;

pub use lattice::{ClassId, ConjugacyClass, Subgroup, SubgroupId, SubgroupLattice, DEFAULT_MAX_ORDER};
pub use spec::GroupSpec;

/// Index of an element of a [`FiniteGroup`], in `0..order`.
pub type ElementId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("unsupported group spec: {0}")]
    UnsupportedSpec(String),
    #[error("group of order {order} exceeds the configured bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },
    #[error("subgroup {subgroup} is not contained in the ambient subgroup {ambient}")]
    NotSubgroupOfAmbient { subgroup: SubgroupId, ambient: SubgroupId },
    #[error("subset is not a subgroup of the lattice's group")]
    NotASubgroup,
}

/// A finite group presented by its full multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<ElementId>,
    identity: ElementId,
    inverses: Vec<ElementId>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Validates `table` (row-major, `table[i * n + j] = i·j`) and builds the
    /// group. Fails with [`GroupError::InvalidTable`] if the table is not a
    /// group law.
    pub fn from_table(
        name: impl Into<String>,
        order: usize,
        table: Vec<ElementId>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::InvalidTable("empty group".into()));
        }
        if table.len() != order * order {
            return Err(GroupError::InvalidTable(format!(
                "expected {} entries for order {order}, found {}",
                order * order,
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&x| x >= order) {
            return Err(GroupError::InvalidTable(format!("entry {bad} is not an element index")));
        }
        let mul = |a: usize, b: usize| table[a * order + b];

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or_else(|| GroupError::InvalidTable("no two-sided identity".into()))?;

        let mut inverses = Vec::with_capacity(order);
        for a in 0..order {
            let inv = (0..order)
                .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .ok_or_else(|| GroupError::InvalidTable(format!("element {a} has no inverse")))?;
            inverses.push(inv);
        }

        for a in 0..order {
            for b in 0..order {
                let ab = mul(a, b);
                for c in 0..order {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(GroupError::InvalidTable(format!(
                            "not associative: ({a}·{b})·{c} ≠ {a}·({b}·{c})"
                        )));
                    }
                }
            }
        }

        let labels = match labels {
            Some(l) if l.len() == order => l,
            Some(l) => {
                return Err(GroupError::InvalidTable(format!(
                    "{} labels supplied for {order} elements",
                    l.len()
                )))
            }
            None => (0..order).map(|i| i.to_string()).collect(),
        };

        Ok(Self {
            name: name.into(),
            order,
            table,
            identity,
            inverses,
            labels,
        })
    }

    /// Parses a multiplication table from CSV: row `i`, column `j` holds the
    /// index of `i·j`. No header row.
    pub fn from_csv(name: impl Into<String>, reader: impl std::io::Read) -> Result<Self, GroupError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut table = Vec::new();
        let mut rows = 0;
        let mut width = None;
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| GroupError::InvalidTable(format!("csv: {e}")))?;
            if *width.get_or_insert(record.len()) != record.len() {
                return Err(GroupError::InvalidTable(format!("row {line} has {} columns", record.len())));
            }
            for field in record.iter() {
                let v = field.parse::<usize>().map_err(|_| {
                    GroupError::InvalidTable(format!("row {line}: {field:?} is not an element index"))
                })?;
                table.push(v);
            }
            rows += 1;
        }
        if width != Some(rows) {
            return Err(GroupError::InvalidTable(format!("table is not square ({rows} rows)")));
        }
        Self::from_table(name, rows, table, None)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> ElementId {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inverse(&self, a: ElementId) -> ElementId {
        self.inverses[a]
    }

    /// `g⁻¹ a g`.
    #[inline]
    pub fn conjugate(&self, a: ElementId, g: ElementId) -> ElementId {
        self.mul(self.mul(self.inverse(g), a), g)
    }

    pub fn elements(&self) -> std::ops::Range<ElementId> {
        0..self.order
    }

    pub fn table(&self) -> &[ElementId] {
        &self.table
    }

    pub fn label(&self, a: ElementId) -> &str {
        &self.labels[a]
    }

    pub fn element_by_label(&self, label: &str) -> Option<ElementId> {
        self.labels.iter().position(|l| l == label)
    }

    /// Order of `a` as a group element.
    pub fn element_order(&self, a: ElementId) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.elements().any(|a| self.element_order(a) == self.order)
    }

    /// The same group with element `i` renamed to `perm[i]`.
    pub fn relabeled(&self, perm: &[ElementId]) -> Result<Self, GroupError> {
        let n = self.order;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(GroupError::InvalidTable("relabeling is not a permutation".into()));
        }
        let mut table = vec![0; n * n];
        let mut labels = vec![String::new(); n];
        for a in 0..n {
            labels[perm[a]] = self.labels[a].clone();
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        Self::from_table(self.name.clone(), n, table, Some(labels))
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish_non_exhaustive()
    }
}
