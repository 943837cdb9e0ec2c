//! DOT rendering of parse states: derivation forests for CFG states, word
//! and type rows with contraction arcs for pregroup states. Node order is
//! a preorder walk, so output is deterministic.

use std::fmt::Write as _;

use crate::grammar::{Grammar, ParseState, Structure, Tree, WordSlot};

pub fn parse_state_dot(g: &Grammar, p: &ParseState) -> String {
    let mut out = String::from("digraph derivation {\n");
    match &p.structure {
        Structure::Forest(trees) => {
            out.push_str("  rankdir=TB;\n");
            let mut next_id = 0usize;
            for tree in trees {
                forest_nodes(g, tree, &mut next_id, &mut out);
            }
        }
        Structure::Pregroup(st) => {
            out.push_str("  rankdir=TB;\n");
            let slots = g.slots(&p.prefix, st);
            for (w, word) in p.prefix.iter().enumerate() {
                let _ = writeln!(out, "  w{w} [label=\"{word}\" shape=box];");
            }
            let mut flat = std::collections::BTreeMap::new();
            for (i, slot) in slots.iter().enumerate() {
                flat.insert(slot.id, i);
                if matches!(st.choices[slot.id.0], WordSlot::Entry(_)) {
                    let _ = writeln!(out, "  t{i} [label=\"{}\"];", slot.obj);
                    let _ = writeln!(out, "  w{} -> t{i};", slot.id.0);
                }
            }
            for (a, b) in &st.links {
                let _ = writeln!(
                    out,
                    "  t{} -> t{} [dir=none constraint=false label=\"cup\"];",
                    flat[a], flat[b]
                );
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Emits one node per generator application and one box per word leaf;
/// returns the new node id counter.
fn forest_nodes(g: &Grammar, tree: &Tree, next_id: &mut usize, out: &mut String) -> usize {
    let id = *next_id;
    *next_id += 1;
    match tree {
        Tree::Leaf(obj) => {
            let _ = writeln!(out, "  n{id} [label=\"{obj}\" shape=box];");
        }
        Tree::Node { children, .. } => {
            let root = g.tree_root(tree);
            let _ = writeln!(out, "  n{id} [label=\"{root}\"];");
            for child in children {
                let child_id = forest_nodes(g, child, next_id, out);
                let _ = writeln!(out, "  n{id} -> n{child_id};");
            }
        }
    }
    id
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::load_grammar;

    #[test]
    fn cfg_dot_counts_nodes_and_edges() {
        let g =
            load_grammar("mode: cfg\nstart: s\nrule: s -> np vp\nrule: np -> a\nrule: vp -> b\n")
                .unwrap();
        let p = g.state_from_str("s(np(a) vp(b))").unwrap();
        let dot = parse_state_dot(&g, &p);
        let boxes = dot.matches("shape=box").count();
        let edges = dot.matches("->").count();
        assert_eq!(boxes, 2);
        assert_eq!(edges, 4);
        assert_eq!(dot, parse_state_dot(&g, &p));
    }

    #[test]
    fn pregroup_dot_draws_cup_arcs() {
        let g = load_grammar("mode: pregroup\nstart: s\nword: a : s n^l\nword: b : n\n").unwrap();
        let p = g.state_from_str("a[s n^l] b[n] {(1,2)}").unwrap();
        let dot = parse_state_dot(&g, &p);
        assert_eq!(dot.matches("label=\"cup\"").count(), 1);
        assert_eq!(dot.matches("shape=box").count(), 2);
    }
}
