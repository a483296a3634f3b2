//! DOT renderings. Node ids are canonical names; edges are covering
//! relations, drawn from the smaller object to the larger.

use std::fmt::Write as _;

use chromloc::group::SubgroupLattice;
use chromloc::spectrum::prime_poset as balmer_poset;
use chromloc::transfer::TransferPoset;

use crate::report::prime_name;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn digraph(name: &str, nodes: &[(String, String)], edges: &[(String, String)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    let _ = writeln!(out, "  rankdir=BT;");
    for (id, label) in nodes {
        let _ = writeln!(out, "  {} [label={}];", quote(id), quote(label));
    }
    for (a, b) in edges {
        let _ = writeln!(out, "  {} -> {};", quote(a), quote(b));
    }
    out.push_str("}\n");
    out
}

pub fn subgroup_lattice(l: &SubgroupLattice) -> String {
    let nodes: Vec<(String, String)> = l
        .ids()
        .map(|h| {
            let name = l.name(h).to_string();
            let label = if l.is_normal(h) { name.clone() } else { format!("{name} [{}]", l.class_of(h).0) };
            (name, label)
        })
        .collect();
    let edges: Vec<(String, String)> = l
        .covers()
        .into_iter()
        .map(|(a, b)| (l.name(a).to_string(), l.name(b).to_string()))
        .collect();
    digraph("subgroup-lattice", &nodes, &edges)
}

pub fn transfer_poset(l: &SubgroupLattice, poset: &TransferPoset) -> String {
    let nodes: Vec<(String, String)> = poset
        .systems
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let pairs: Vec<String> = s
                .nontrivial_pairs()
                .into_iter()
                .map(|(k, h)| format!("{}->{}", l.name(k), l.name(h)))
                .collect();
            let label = if pairs.is_empty() { format!("T{i}: trivial") } else { format!("T{i}: {}", pairs.join(" ")) };
            (format!("T{i}"), label)
        })
        .collect();
    let edges: Vec<(String, String)> = poset
        .covers()
        .into_iter()
        .map(|(i, j)| (format!("T{i}"), format!("T{j}")))
        .collect();
    digraph("transfer-poset", &nodes, &edges)
}

/// Balmer primes at `primes` with finite heights up to `height_bound`;
/// an edge `a -> b` means `a ⊂ b`.
pub fn prime_poset(l: &SubgroupLattice, primes: &[u32], height_bound: u32) -> String {
    let (nodes, edges) = balmer_poset(l, primes, height_bound);
    let names: Vec<String> = nodes.iter().map(|b| prime_name(l, b)).collect();
    let node_list: Vec<(String, String)> = names.iter().map(|n| (n.clone(), n.clone())).collect();
    let edge_list: Vec<(String, String)> = edges.into_iter().map(|(a, b)| (names[a].clone(), names[b].clone())).collect();
    digraph("prime-poset", &node_list, &edge_list)
}
