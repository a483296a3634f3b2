//! Input documents: group specs, transfer systems and vanishing loci.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use chromloc::group::{FiniteGroup, GroupSpec, SubgroupId, SubgroupLattice};
use chromloc::spectrum::{ell_to_locus, BalmerPrime, ChromaticPoint, EllVector, Height, VanishingLocus};
use chromloc::transfer::{TransferError, TransferSystem};
use serde::Deserialize;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

fn parse_err(source: &str, message: impl Into<String>) -> CliError {
    CliError::Parse {
        origin: source.to_string(),
        message: message.into(),
    }
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_string(),
        message: e.to_string(),
    })
}

fn from_toml<T: for<'de> Deserialize<'de>>(path: &str, text: &str) -> Result<T, CliError> {
    toml::from_str(text).map_err(|e| parse_err(path, e.to_string().trim_end()))
}

fn check_version(path: &str, v: u32) -> Result<(), CliError> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(parse_err(path, format!("unsupported schema_version {v} (expected {SCHEMA_VERSION})")))
    }
}

fn is_document(arg: &str) -> bool {
    arg.ends_with(".toml") && Path::new(arg).is_file()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    schema_version: u32,
    group: String,
}

/// A group spec string, or a `.toml` document with a `group` field.
pub fn load_group(arg: &str) -> Result<(GroupSpec, FiniteGroup), CliError> {
    let (source, text) = if is_document(arg) {
        let doc: GroupDoc = from_toml(arg, &read(arg)?)?;
        check_version(arg, doc.schema_version)?;
        (arg.to_string(), doc.group)
    } else {
        ("--group".to_string(), arg.to_string())
    };
    let spec: GroupSpec = text.parse().map_err(|e: chromloc::group::GroupError| parse_err(&source, e.to_string()))?;
    let group = spec.build()?;
    Ok((spec, group))
}

fn subgroup_by_name(lattice: &SubgroupLattice, source: &str, field: &str, name: &str) -> Result<SubgroupId, CliError> {
    lattice
        .by_name(name)
        .ok_or_else(|| parse_err(source, format!("{field}: unknown subgroup {name:?} (see the `lattice` command)")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransferDoc {
    schema_version: u32,
    #[serde(default)]
    preset: Option<String>,
    #[serde(default)]
    pairs: Vec<[String; 2]>,
    #[serde(default)]
    close: bool,
}

/// `complete`, `trivial`, or a transfer-system document.
pub fn load_operad(lattice: &Arc<SubgroupLattice>, arg: &str) -> Result<TransferSystem, CliError> {
    match arg {
        "complete" => return Ok(TransferSystem::complete(lattice.clone())),
        "trivial" => return Ok(TransferSystem::trivial(lattice.clone())),
        _ => {}
    }
    let doc: TransferDoc = from_toml(arg, &read(arg)?)?;
    check_version(arg, doc.schema_version)?;
    let mut relation = match doc.preset.as_deref() {
        None | Some("trivial") => TransferSystem::trivial(lattice.clone()).relation().clone(),
        Some("complete") => TransferSystem::complete(lattice.clone()).relation().clone(),
        Some(other) => return Err(parse_err(arg, format!("preset: expected \"trivial\" or \"complete\", got {other:?}"))),
    };
    for (i, [k, h]) in doc.pairs.iter().enumerate() {
        let k = subgroup_by_name(lattice, arg, &format!("pairs[{i}][0]"), k)?;
        let h = subgroup_by_name(lattice, arg, &format!("pairs[{i}][1]"), h)?;
        if !lattice.leq(k, h) {
            return Err(parse_err(
                arg,
                format!("pairs[{i}]: {} is not contained in {}", lattice.name(k), lattice.name(h)),
            ));
        }
        relation.insert(k, h);
    }
    if doc.close {
        Ok(relation.close()?)
    } else {
        TransferSystem::try_from(relation).map_err(|e| match e {
            TransferError::Invalid(v) => CliError::InvalidInput {
                origin: arg.to_string(),
                problems: v.iter().map(|x| crate::report::violation_text(lattice, x)).collect(),
            },
            other => other.into(),
        })
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum HeightsSpec {
    Text(String),
    List(Vec<u32>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PrimeSpec {
    Number(u32),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LocusEntry {
    subgroup: String,
    heights: HeightsSpec,
    prime: PrimeSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LocusDoc {
    schema_version: u32,
    #[serde(default)]
    entries: Vec<LocusEntry>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EllEntry {
    Number(i64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EllDoc {
    schema_version: u32,
    p: u32,
    ell: Vec<EllEntry>,
}

fn parse_heights(source: &str, field: &str, spec: &HeightsSpec) -> Result<Vec<Height>, CliError> {
    match spec {
        HeightsSpec::List(v) => Ok(v.iter().map(|&m| Height::Finite(m)).collect()),
        HeightsSpec::Text(t) if t == "all" => Ok(vec![Height::Infinity]),
        HeightsSpec::Text(t) => {
            let bad = || parse_err(source, format!("{field}: expected \"0..k\", \"all\" or a list, got {t:?}"));
            let (lo, hi) = t.split_once("..").ok_or_else(bad)?;
            let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
            let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            Ok((lo..=hi).map(Height::Finite).collect())
        }
    }
}

fn locus_from_doc(lattice: &Arc<SubgroupLattice>, source: &str, doc: LocusDoc) -> Result<VanishingLocus, CliError> {
    check_version(source, doc.schema_version)?;
    let mut primes = BTreeSet::new();
    for (i, entry) in doc.entries.iter().enumerate() {
        let h = subgroup_by_name(lattice, source, &format!("entries[{i}].subgroup"), &entry.subgroup)?;
        let class = lattice.class_of(h);
        let heights = parse_heights(source, &format!("entries[{i}].heights"), &entry.heights)?;
        match &entry.prime {
            PrimeSpec::Number(p) => {
                primes.extend(heights.into_iter().map(|m| BalmerPrime::new(class, m, *p)));
            }
            PrimeSpec::Text(t) if t == "any" => {
                if heights != [Height::Finite(0)] {
                    return Err(parse_err(source, format!("entries[{i}]: prime \"any\" requires heights = [0]")));
                }
                primes.insert(BalmerPrime::at(class, ChromaticPoint::rational()));
            }
            PrimeSpec::Text(t) => {
                return Err(parse_err(source, format!("entries[{i}].prime: expected an integer or \"any\", got {t:?}")))
            }
        }
    }
    Ok(VanishingLocus::new(lattice.clone(), primes))
}

fn ell_from_doc(source: &str, doc: EllDoc) -> Result<EllVector, CliError> {
    check_version(source, doc.schema_version)?;
    let entries = doc
        .ell
        .iter()
        .enumerate()
        .map(|(i, e)| match e {
            EllEntry::Number(-1) => Ok(None),
            EllEntry::Number(m) if *m >= 0 && *m <= u32::MAX as i64 => Ok(Some(Height::Finite(*m as u32))),
            EllEntry::Text(t) if t == "none" => Ok(None),
            EllEntry::Text(t) if t == "inf" => Ok(Some(Height::Infinity)),
            _ => Err(parse_err(source, format!("ell[{i}]: expected a natural number, -1, \"inf\" or \"none\""))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EllVector::new(doc.p, entries)?)
}

/// An inline `P:LIST` ℓ-vector or an ℓ-vector document.
pub fn load_ell(arg: &str) -> Result<EllVector, CliError> {
    if is_document(arg) {
        let doc: EllDoc = from_toml(arg, &read(arg)?)?;
        ell_from_doc(arg, doc)
    } else {
        parse_inline_ell("--ell", arg)
    }
}

/// `P:E0,E1,…`, also accepting `P,(E0,E1,…)`.
fn parse_inline_ell(source: &str, text: &str) -> Result<EllVector, CliError> {
    let normalized = match (text.contains(':'), text.split_once(',')) {
        (false, Some((p, rest))) if rest.trim_start().starts_with('(') => format!("{p}:{rest}"),
        _ => text.to_string(),
    };
    normalized
        .parse()
        .map_err(|e: chromloc::spectrum::SpectrumError| parse_err(source, e.to_string()))
}

/// `ell:P:LIST`, or a locus or ℓ-vector document.
pub fn load_locus(lattice: &Arc<SubgroupLattice>, arg: &str) -> Result<VanishingLocus, CliError> {
    if let Some(inline) = arg.strip_prefix("ell:") {
        let ell = parse_inline_ell("--locus", inline)?;
        return Ok(ell_to_locus(lattice, &ell)?);
    }
    let text = read(arg)?;
    let table: toml::Table = from_toml(arg, &text)?;
    if table.contains_key("ell") {
        let ell = ell_from_doc(arg, from_toml(arg, &text)?)?;
        Ok(ell_to_locus(lattice, &ell)?)
    } else {
        locus_from_doc(lattice, arg, from_toml(arg, &text)?)
    }
}
