//! Reports: serde documents with plain-text renderings.

use std::fmt::Write as _;

use chromloc::engine::{ell_commutative_condition, CrossValidationReport, Decision, Disagreement};
use chromloc::group::{GroupSpec, SubgroupId, SubgroupLattice};
use chromloc::spectrum::{cyclic_p_chain, locus_to_ell, BalmerPrime, EllVector, Height, LocusViolation, VanishingLocus};
use chromloc::transfer::{TransferPoset, TransferSystem, Violation};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::input::SCHEMA_VERSION;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Report {
    Lattice(LatticeReport),
    TransferSystems(TransferReport),
    LocusValidation(LocusReport),
    Decision(DecisionReport),
    EllEnumeration(EllReport),
    CrossValidation(CrossReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupEntry {
    pub name: String,
    pub order: usize,
    pub class: usize,
    pub normal: bool,
    pub elements: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeReport {
    pub schema_version: u32,
    pub group: String,
    pub order: usize,
    pub group_digest: String,
    pub subgroups: Vec<SubgroupEntry>,
    /// Member names of each conjugacy class, in class order.
    pub classes: Vec<Vec<String>>,
    /// Covering pairs `[lower, upper]`.
    pub covers: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemEntry {
    pub index: usize,
    pub digest: String,
    /// Nontrivial pairs `[K, H]` with `K < H`.
    pub pairs: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferReport {
    pub schema_version: u32,
    pub group: String,
    pub group_digest: String,
    pub count: usize,
    pub systems: Vec<SystemEntry>,
    /// Covering pairs of the inclusion order, by system index.
    pub covers: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocusReport {
    pub schema_version: u32,
    pub group: String,
    pub group_digest: String,
    pub locus_digest: String,
    pub primes: Vec<String>,
    pub valid: bool,
    pub violations: Vec<String>,
    /// The ℓ-vector, when the group is a cyclic p-group and the locus is p-local.
    pub ell: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Subject {
    /// `system` or `norm`.
    pub kind: String,
    pub label: String,
    pub digest: String,
    pub pairs: Vec<[String; 2]>,
}

impl Subject {
    pub fn system(label: &str, system: &TransferSystem) -> Self {
        let pairs = names_of_pairs(system.lattice(), &system.nontrivial_pairs());
        Self {
            kind: "system".into(),
            label: label.into(),
            digest: pairs_digest(&pairs),
            pairs,
        }
    }

    pub fn norm(lattice: &SubgroupLattice, k: SubgroupId, h: SubgroupId) -> Self {
        let pairs = vec![[lattice.name(k).to_string(), lattice.name(h).to_string()]];
        Self {
            kind: "norm".into(),
            label: format!("{},{}", pairs[0][0], pairs[0][1]),
            digest: pairs_digest(&pairs),
            pairs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckedEntry {
    /// Element index of the double-coset representative `g`.
    pub representative: usize,
    /// `K^g ∩ J`.
    pub intersection: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessEntry {
    /// `[K, H]`.
    pub norm: [String; 2],
    pub target: String,
    pub prime: String,
    pub checked: Vec<CheckedEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionReport {
    pub schema_version: u32,
    pub group: String,
    pub group_digest: String,
    pub subject: Subject,
    pub locus_digest: String,
    pub primes: Vec<String>,
    pub verdict: String,
    pub witnesses: Vec<WitnessEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllEntry {
    pub ell: String,
    pub commutative: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllReport {
    pub schema_version: u32,
    pub p: u32,
    pub n: usize,
    pub height_bound: u32,
    pub include_infinity: bool,
    pub commutative_only: bool,
    pub count: usize,
    /// Vectors with no `none` entry.
    pub vectors: Vec<EllEntry>,
    /// Vectors with at least one `none` entry.
    pub sentinel_vectors: Vec<EllEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossReport {
    pub schema_version: u32,
    pub p: u32,
    pub n: usize,
    pub height_bound: u32,
    pub vectors: usize,
    pub norm_checks: usize,
    pub commutative_checks: usize,
    pub clean: bool,
    pub disagreements: Vec<String>,
}

fn hex_digest(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

/// Digest of the order followed by the row-major multiplication table.
pub fn group_digest(lattice: &SubgroupLattice) -> String {
    let g = lattice.group();
    let table: Vec<String> = g.table().iter().map(|x| x.to_string()).collect();
    hex_digest(format!("{}\n{}", g.order(), table.join(",")).as_bytes())
}

/// Digest of the sorted, newline-joined canonical prime names.
pub fn locus_digest(primes: &[String]) -> String {
    let mut sorted = primes.to_vec();
    sorted.sort();
    hex_digest(sorted.join("\n").as_bytes())
}

/// Digest of the sorted, newline-joined `K<H` pair names.
pub fn pairs_digest(pairs: &[[String; 2]]) -> String {
    let mut lines: Vec<String> = pairs.iter().map(|[k, h]| format!("{k}<{h}")).collect();
    lines.sort();
    hex_digest(lines.join("\n").as_bytes())
}

fn names_of_pairs(lattice: &SubgroupLattice, pairs: &[(SubgroupId, SubgroupId)]) -> Vec<[String; 2]> {
    pairs
        .iter()
        .map(|&(k, h)| [lattice.name(k).to_string(), lattice.name(h).to_string()])
        .collect()
}

/// `P(NAME,HEIGHT,PRIME)` with the class named by its representative.
pub fn prime_name(lattice: &SubgroupLattice, b: &BalmerPrime) -> String {
    let rep = lattice.class(b.class).representative;
    format!("P({},{},{})", lattice.name(rep), b.height, b.prime)
}

fn show_height(h: &Option<Height>) -> String {
    h.map_or("none".into(), |h| h.to_string())
}

pub fn violation_text(l: &SubgroupLattice, v: &Violation) -> String {
    let n = |id: &SubgroupId| l.name(*id).to_string();
    match v {
        Violation::NotNested { k, h } => format!("nested: {} is not a subgroup of {}", n(k), n(h)),
        Violation::NotReflexive { h } => format!("reflexive: ({0}, {0}) missing", n(h)),
        Violation::NotTransitive { lower, middle, upper } => format!(
            "transitive: ({0}, {1}) and ({1}, {2}) present, ({0}, {2}) missing",
            n(lower),
            n(middle),
            n(upper)
        ),
        Violation::NotConjugationClosed { k, h, g } => format!(
            "conjugation: ({}, {}) present, its conjugate by element {g} missing",
            n(k),
            n(h)
        ),
        Violation::NotRestrictionClosed { k, h, j, rep, missing } => format!(
            "restriction: ({}, {}) present, restricting to {} along element {rep} needs ({}, {})",
            n(k),
            n(h),
            n(j),
            n(missing),
            n(j)
        ),
    }
}

pub fn locus_violation_text(l: &SubgroupLattice, v: &LocusViolation) -> String {
    match v {
        LocusViolation::UnknownClass(c) => format!("unknown conjugacy class {}", c.0),
        LocusViolation::Unnormalized(b) => {
            format!("{}: height 0 must carry prime `any`, other heights a concrete prime", prime_name(l, b))
        }
        LocusViolation::NotPrime(b) => format!("{}: not a prime number", prime_name(l, b)),
        LocusViolation::NotDownwardClosed { present, missing } => {
            format!("{} present but {} missing", prime_name(l, present), prime_name(l, missing))
        }
        LocusViolation::EllInequality { p, i, lower, upper } => format!(
            "at p = {p}: l_{i} = {} exceeds l_{} + 1 = {} + 1",
            show_height(lower),
            i + 1,
            show_height(upper)
        ),
    }
}

fn prime_names(locus: &VanishingLocus) -> Vec<String> {
    let l = locus.lattice();
    locus.iter().map(|b| prime_name(l, b)).collect()
}

pub fn lattice(spec: &GroupSpec, l: &SubgroupLattice) -> Report {
    let subgroups = l
        .ids()
        .map(|h| SubgroupEntry {
            name: l.name(h).to_string(),
            order: l.order_of(h),
            class: l.class_of(h).0,
            normal: l.is_normal(h),
            elements: l.subgroup(h).members.iter().collect(),
        })
        .collect();
    let classes = l
        .classes()
        .iter()
        .map(|c| c.members.iter().map(|&m| l.name(m).to_string()).collect())
        .collect();
    Report::Lattice(LatticeReport {
        schema_version: SCHEMA_VERSION,
        group: spec.to_string(),
        order: l.group().order(),
        group_digest: group_digest(l),
        subgroups,
        classes,
        covers: names_of_pairs(l, &l.covers()),
    })
}

pub fn transfer_systems(spec: &GroupSpec, l: &SubgroupLattice, poset: &TransferPoset) -> Report {
    let systems = poset
        .systems
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let pairs = names_of_pairs(l, &s.nontrivial_pairs());
            SystemEntry {
                index,
                digest: pairs_digest(&pairs),
                pairs,
            }
        })
        .collect();
    Report::TransferSystems(TransferReport {
        schema_version: SCHEMA_VERSION,
        group: spec.to_string(),
        group_digest: group_digest(l),
        count: poset.len(),
        systems,
        covers: poset.covers().into_iter().map(|(i, j)| [i, j]).collect(),
    })
}

pub fn locus_validation(spec: &GroupSpec, locus: &VanishingLocus) -> Report {
    let l = locus.lattice();
    let primes = prime_names(locus);
    let violations: Vec<String> = locus.validate().iter().map(|v| locus_violation_text(l, v)).collect();
    let ell = cyclic_p_chain(l)
        .and_then(|(p, _)| locus_to_ell(locus, p).ok())
        .map(|e| e.to_string());
    Report::LocusValidation(LocusReport {
        schema_version: SCHEMA_VERSION,
        group: spec.to_string(),
        group_digest: group_digest(l),
        locus_digest: locus_digest(&primes),
        primes,
        valid: violations.is_empty(),
        violations,
        ell,
    })
}

pub fn decision(spec: &GroupSpec, locus: &VanishingLocus, subject: Subject, d: &Decision) -> Report {
    let l = locus.lattice();
    let primes = prime_names(locus);
    let witnesses = d
        .witnesses
        .iter()
        .map(|w| WitnessEntry {
            norm: [l.name(w.k).to_string(), l.name(w.h).to_string()],
            target: l.name(w.j).to_string(),
            prime: prime_name(l, &w.prime),
            checked: w
                .checked
                .iter()
                .map(|&(g, s)| CheckedEntry {
                    representative: g,
                    intersection: l.name(s).to_string(),
                })
                .collect(),
        })
        .collect();
    Report::Decision(DecisionReport {
        schema_version: SCHEMA_VERSION,
        group: spec.to_string(),
        group_digest: group_digest(l),
        subject,
        locus_digest: locus_digest(&primes),
        primes,
        verdict: d.verdict.to_string(),
        witnesses,
    })
}

pub fn ell_enumeration(
    p: u32,
    n: usize,
    height_bound: u32,
    include_infinity: bool,
    commutative_only: bool,
    found: &[EllVector],
) -> Result<Report, CliError> {
    let mut vectors = Vec::new();
    let mut sentinel_vectors = Vec::new();
    for e in found {
        let entry = EllEntry {
            ell: e.to_string(),
            commutative: ell_commutative_condition(e)?,
        };
        if e.has_sentinel() {
            sentinel_vectors.push(entry);
        } else {
            vectors.push(entry);
        }
    }
    Ok(Report::EllEnumeration(EllReport {
        schema_version: SCHEMA_VERSION,
        p,
        n,
        height_bound,
        include_infinity,
        commutative_only,
        count: found.len(),
        vectors,
        sentinel_vectors,
    }))
}

pub fn cross_validation(r: &CrossValidationReport) -> Report {
    let disagreements = r
        .disagreements
        .iter()
        .map(|d| match d {
            Disagreement::Norm {
                ell,
                k,
                j,
                engine,
                inequality,
            } => format!("{ell}: norm C_(p^{k}) -> C_(p^{j}): engine {engine}, inequality {inequality}"),
            Disagreement::Commutative { ell, engine, inequality } => {
                format!("{ell}: complete system: engine {engine}, inequality {inequality}")
            }
        })
        .collect();
    Report::CrossValidation(CrossReport {
        schema_version: SCHEMA_VERSION,
        p: r.p,
        n: r.n,
        height_bound: r.height_bound,
        vectors: r.vectors,
        norm_checks: r.norm_checks,
        commutative_checks: r.commutative_checks,
        clean: r.is_clean(),
        disagreements,
    })
}

/// Parses a structured report emitted by [`Report::to_json`].
pub fn parse_report(text: &str) -> Result<Report, CliError> {
    let r: Report = serde_json::from_str(text).map_err(|e| CliError::Parse {
        origin: "report".into(),
        message: format!("line {} column {}: {e}", e.line(), e.column()),
    })?;
    if r.schema_version() != SCHEMA_VERSION {
        return Err(CliError::Parse {
            origin: "report".into(),
            message: format!("unsupported schema_version {}", r.schema_version()),
        });
    }
    Ok(r)
}

fn pair_list(pairs: &[[String; 2]]) -> String {
    if pairs.is_empty() {
        return "(none)".into();
    }
    pairs.iter().map(|[k, h]| format!("{k} -> {h}")).collect::<Vec<_>>().join(", ")
}

impl Report {
    pub fn schema_version(&self) -> u32 {
        match self {
            Report::Lattice(r) => r.schema_version,
            Report::TransferSystems(r) => r.schema_version,
            Report::LocusValidation(r) => r.schema_version,
            Report::Decision(r) => r.schema_version,
            Report::EllEnumeration(r) => r.schema_version,
            Report::CrossValidation(r) => r.schema_version,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let o = &mut out;
        match self {
            Report::Lattice(r) => {
                let _ = writeln!(o, "group {} (order {})", r.group, r.order);
                let _ = writeln!(o, "subgroups are named C<order>#<k>, k counting subgroups of that order in lattice order");
                let _ = writeln!(o, "{} subgroups in {} conjugacy classes", r.subgroups.len(), r.classes.len());
                for s in &r.subgroups {
                    let normal = if s.normal { " normal" } else { "" };
                    let elems: Vec<String> = s.elements.iter().map(|e| e.to_string()).collect();
                    let _ = writeln!(o, "  {:<8} order {:<3} class {:<3}{normal} {{{}}}", s.name, s.order, s.class, elems.join(","));
                }
                let _ = writeln!(o, "covers:");
                for [a, b] in &r.covers {
                    let _ = writeln!(o, "  {a} < {b}");
                }
            }
            Report::TransferSystems(r) => {
                let _ = writeln!(o, "group {}: {} transfer systems", r.group, r.count);
                for s in &r.systems {
                    let _ = writeln!(o, "  T{}: {}", s.index, pair_list(&s.pairs));
                }
                let covers: Vec<String> = r.covers.iter().map(|[i, j]| format!("T{i} < T{j}")).collect();
                let _ = writeln!(o, "covers: {}", if covers.is_empty() { "(none)".into() } else { covers.join(", ") });
            }
            Report::LocusValidation(r) => {
                let _ = writeln!(o, "group {}", r.group);
                let _ = writeln!(o, "locus ({} primes): {}", r.primes.len(), r.primes.join(" "));
                if let Some(e) = &r.ell {
                    let _ = writeln!(o, "ell: {e}");
                }
                let _ = writeln!(o, "valid: {}", r.valid);
                for v in &r.violations {
                    let _ = writeln!(o, "  violation: {v}");
                }
            }
            Report::Decision(r) => {
                let _ = writeln!(o, "group {}", r.group);
                let _ = writeln!(o, "{} {}: {}", r.subject.kind, r.subject.label, pair_list(&r.subject.pairs));
                let _ = writeln!(o, "locus ({} primes): {}", r.primes.len(), r.primes.join(" "));
                let _ = writeln!(o, "verdict: {}", r.verdict);
                for w in &r.witnesses {
                    let checked: Vec<String> = w
                        .checked
                        .iter()
                        .map(|c| format!("g={} gives {}", c.representative, c.intersection))
                        .collect();
                    let _ = writeln!(
                        o,
                        "  witness: norm {} -> {} at {} on {}; {}",
                        w.norm[0],
                        w.norm[1],
                        w.prime,
                        w.target,
                        checked.join(", ")
                    );
                }
            }
            Report::EllEnumeration(r) => {
                let what = if r.commutative_only { "commutative ell-vectors" } else { "valid ell-vectors" };
                let inf = if r.include_infinity { " and inf" } else { "" };
                let _ = writeln!(o, "{} {what} on C_({}^{}) with heights <= {}{inf}", r.count, r.p, r.n, r.height_bound);
                for (title, list) in [("vectors", &r.vectors), ("with none entries", &r.sentinel_vectors)] {
                    let _ = writeln!(o, "{title} ({}):", list.len());
                    for e in list {
                        let mark = if e.commutative { "  commutative" } else { "" };
                        let _ = writeln!(o, "  {}{mark}", e.ell);
                    }
                }
            }
            Report::CrossValidation(r) => {
                let _ = writeln!(
                    o,
                    "C_({}^{}) heights <= {}: {} vectors, {} norm checks, {} complete-system checks",
                    r.p, r.n, r.height_bound, r.vectors, r.norm_checks, r.commutative_checks
                );
                let _ = writeln!(o, "disagreements: {}", r.disagreements.len());
                for d in &r.disagreements {
                    let _ = writeln!(o, "  {d}");
                }
            }
        }
        out
    }
}
