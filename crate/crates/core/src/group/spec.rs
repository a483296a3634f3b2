use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::{FiniteGroup, GroupError};

/// Textual description of a group.
///
/// Grammar (whitespace around `*` ignored):
///
/// ```text
/// spec    := factor ('*' factor)*
/// factor  := 'trivial' | 'cyclic:' N | 'dihedral:' N | 'symmetric:' N
///          | 'quaternion' [':8'] | 'table:' PATH
/// ```
///
/// `dihedral:N` is the dihedral group of order `N`; `table:PATH` reads a CSV
/// multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Quaternion,
    Product(Vec<GroupSpec>),
    Table(PathBuf),
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n),
            GroupSpec::Dihedral(n) => FiniteGroup::dihedral(*n),
            GroupSpec::Symmetric(n) => FiniteGroup::symmetric(*n),
            GroupSpec::Quaternion => FiniteGroup::quaternion(),
            GroupSpec::Product(factors) => {
                let mut iter = factors.iter();
                let first = iter
                    .next()
                    .ok_or_else(|| GroupError::UnsupportedSpec("empty product".into()))?
                    .build()?;
                iter.try_fold(first, |acc, f| FiniteGroup::direct_product(&acc, &f.build()?))
            }
            GroupSpec::Table(path) => {
                let file = std::fs::File::open(path).map_err(|e| {
                    GroupError::UnsupportedSpec(format!("cannot read table {}: {e}", path.display()))
                })?;
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "table".into());
                FiniteGroup::from_csv(name, file)
            }
        }
    }
}

fn parse_factor(s: &str) -> Result<GroupSpec, GroupError> {
    let unsupported = || GroupError::UnsupportedSpec(s.to_string());
    let (kind, arg) = match s.split_once(':') {
        Some((k, a)) => (k.trim(), Some(a.trim())),
        None => (s.trim(), None),
    };
    let num = || -> Result<usize, GroupError> {
        arg.ok_or_else(unsupported)?.parse().map_err(|_| unsupported())
    };
    Ok(match kind {
        "trivial" if arg.is_none() => GroupSpec::Cyclic(1),
        "cyclic" => GroupSpec::Cyclic(num()?),
        "dihedral" => GroupSpec::Dihedral(num()?),
        "symmetric" => GroupSpec::Symmetric(num()?),
        "quaternion" => match arg {
            None | Some("8") => GroupSpec::Quaternion,
            _ => return Err(unsupported()),
        },
        "table" => GroupSpec::Table(PathBuf::from(arg.filter(|a| !a.is_empty()).ok_or_else(unsupported)?)),
        _ => return Err(unsupported()),
    })
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, GroupError> {
        let factors: Vec<GroupSpec> = s.split('*').map(parse_factor).collect::<Result<_, _>>()?;
        Ok(if factors.len() == 1 {
            factors.into_iter().next().unwrap()
        } else {
            GroupSpec::Product(factors)
        })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupSpec::Quaternion => write!(f, "quaternion:8"),
            GroupSpec::Product(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            GroupSpec::Table(p) => write!(f, "table:{}", p.display()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!("cyclic:4".parse::<GroupSpec>().unwrap(), GroupSpec::Cyclic(4));
        assert_eq!("trivial".parse::<GroupSpec>().unwrap(), GroupSpec::Cyclic(1));
        assert_eq!("quaternion".parse::<GroupSpec>().unwrap(), GroupSpec::Quaternion);
        assert_eq!(
            "cyclic:2 * symmetric:3".parse::<GroupSpec>().unwrap(),
            GroupSpec::Product(vec![GroupSpec::Cyclic(2), GroupSpec::Symmetric(3)])
        );
        assert_eq!(
            "table:foo.csv".parse::<GroupSpec>().unwrap(),
            GroupSpec::Table("foo.csv".into())
        );
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "cyclic", "cyclic:x", "alternating:4", "quaternion:16", "table:"] {
            assert!(
                matches!(bad.parse::<GroupSpec>(), Err(GroupError::UnsupportedSpec(_))),
                "{bad:?} should be rejected"
            );
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["cyclic:9", "dihedral:8", "symmetric:3", "quaternion:8", "cyclic:2*cyclic:2"] {
            assert_eq!(s.parse::<GroupSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn product_builds() {
        let g = "cyclic:2*cyclic:3".parse::<GroupSpec>().unwrap().build().unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.is_cyclic());
    }
}
