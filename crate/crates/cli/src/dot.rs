//! Graphviz export of group elements.

use std::collections::BTreeSet;
use std::fmt::Write;

use ftrees_core::{GroupElement, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum DotKind {
    /// Domain words on top, range words below, one arrow per term.
    Bipartite,
    /// The domain and range trees, leaves numbered by the bijection.
    Treepair,
}

pub fn export_dot(kind: DotKind, f: &GroupElement) -> String {
    match kind {
        DotKind::Bipartite => bipartite(f),
        DotKind::Treepair => treepair(f),
    }
}

fn bipartite(f: &GroupElement) -> String {
    let mut domains: Vec<&Word> = f.terms().iter().map(|t| &t.domain).collect();
    domains.sort();
    let ranges: Vec<&Word> = f.terms().iter().map(|t| &t.range).collect();
    let mut out = String::new();
    out.push_str("digraph bipartite {\n  rankdir=TB;\n  node [shape=plaintext];\n");
    let row = |out: &mut String, prefix: &str, words: &[&Word]| {
        out.push_str("  { rank=same;");
        for (i, w) in words.iter().enumerate() {
            write!(out, " {prefix}{i} [label=\"{w}\"];").unwrap();
        }
        out.push_str(" }\n");
        if words.len() > 1 {
            let chain: Vec<String> = (0..words.len()).map(|i| format!("{prefix}{i}")).collect();
            writeln!(out, "  {} [style=invis];", chain.join(" -> ")).unwrap();
        }
    };
    row(&mut out, "b", &domains);
    row(&mut out, "a", &ranges);
    for (j, t) in f.terms().iter().enumerate() {
        let i = domains.binary_search(&&t.domain).expect("domain present");
        writeln!(out, "  b{i} -> a{j};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn treepair(f: &GroupElement) -> String {
    let mut out = String::new();
    out.push_str("digraph treepair {\n  node [shape=circle, label=\"\"];\n");
    let ranges: Vec<Word> = f.terms().iter().map(|t| t.range.clone()).collect();
    let domains: Vec<Word> = f.terms().iter().map(|t| t.domain.clone()).collect();
    tree(&mut out, "domain", "D", &domains);
    tree(&mut out, "range", "R", &ranges);
    out.push_str("}\n");
    out
}

/// `leaves[i]` gets ordinal `i`.
fn tree(out: &mut String, name: &str, prefix: &str, leaves: &[Word]) {
    let mut nodes: BTreeSet<Word> = BTreeSet::new();
    for w in leaves {
        for j in 0..=w.len() {
            nodes.insert(w.prefix(j));
        }
    }
    writeln!(out, "  subgraph cluster_{name} {{\n    label=\"{name}\";").unwrap();
    for n in &nodes {
        match leaves.iter().position(|l| l == n) {
            Some(i) => writeln!(out, "    {prefix}_{n} [shape=box, label=\"{i}\"];").unwrap(),
            None => writeln!(out, "    {prefix}_{n};").unwrap(),
        }
    }
    for n in &nodes {
        if let Some(parent) = n.parent() {
            writeln!(out, "    {prefix}_{parent} -> {prefix}_{n} [label=\"{}\"];", n.last().unwrap()).unwrap();
        }
    }
    out.push_str("  }\n");
}
