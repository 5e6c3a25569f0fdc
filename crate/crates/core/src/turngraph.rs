//! The turn graph of a cyclic word, with its dual-edge involution.
//!
//! A turn is a position between consecutive letters of the cyclic word;
//! turn `i` sits just after letter `x_i` and is labeled by the two-letter
//! subword straddling it. There is a directed edge from turn `i` to turn
//! `j` exactly when `x_i^{-1} = x_{j+1}`. Turns are identified by index,
//! never by label: distinct turns can share a label.
//!
//! All indices are 1-based; wraparound maps 0 to `len` and `len + 1` to 1.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::word::{CyclicWord, Letter};

/// 1-based turn index.
pub type TurnIndex = usize;

/// Index into [`TurnGraph::edges`].
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Turn {
    pub index: TurnIndex,
    pub label: (Letter, Letter),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TurnEdge {
    pub from: TurnIndex,
    pub to: TurnIndex,
    /// Transverse label of the corresponding 1-handle, `x_from^{-1}`.
    pub transverse: Letter,
}

#[derive(Clone, Debug)]
pub struct TurnGraph {
    word: CyclicWord,
    turns: Vec<Turn>,
    edges: Vec<TurnEdge>,
    dual: Vec<EdgeId>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

impl TurnGraph {
    pub fn word(&self) -> &CyclicWord {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.turns.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a cyclic word has at least two letters, hence two turns
    }

    pub fn turns(&self) -> &[Turn] {
        &self.turns
    }

    pub fn turn(&self, i: TurnIndex) -> &Turn {
        &self.turns[i - 1]
    }

    /// Edges sorted by `(from, to)`; ids are positions in this slice.
    pub fn edges(&self) -> &[TurnEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> TurnEdge {
        self.edges[id]
    }

    pub fn edge_id(&self, from: TurnIndex, to: TurnIndex) -> Option<EdgeId> {
        self.edges
            .binary_search_by_key(&(from, to), |e| (e.from, e.to))
            .ok()
    }

    pub fn dual_id(&self, id: EdgeId) -> EdgeId {
        self.dual[id]
    }

    pub fn out_edges(&self, i: TurnIndex) -> &[EdgeId] {
        &self.out_edges[i - 1]
    }

    pub fn in_edges(&self, i: TurnIndex) -> &[EdgeId] {
        &self.in_edges[i - 1]
    }

    /// Successor turn index, wrapping `len` to 1.
    pub fn succ(&self, i: TurnIndex) -> TurnIndex {
        i % self.len() + 1
    }

    /// Predecessor turn index, wrapping 1 to `len`.
    pub fn pred(&self, i: TurnIndex) -> TurnIndex {
        (i + self.len() - 2) % self.len() + 1
    }
}

/// Build the turn graph of `word`.
pub fn build_turn_graph(word: &CyclicWord) -> TurnGraph {
    let l = word.len();
    let turns: Vec<Turn> = (1..=l)
        .map(|i| Turn {
            index: i,
            label: (word.letter(i), word.letter(i + 1)),
        })
        .collect();

    let mut edges = Vec::new();
    for i in 1..=l {
        let wanted = word.letter(i).inverse();
        for j in 1..=l {
            if word.letter(j + 1) == wanted {
                edges.push(TurnEdge {
                    from: i,
                    to: j,
                    transverse: wanted,
                });
            }
        }
    }
    edges.sort_by_key(|e| (e.from, e.to));

    let graph_stub = |edges: &[TurnEdge]| {
        let mut out_edges = vec![Vec::new(); l];
        let mut in_edges = vec![Vec::new(); l];
        for (id, e) in edges.iter().enumerate() {
            out_edges[e.from - 1].push(id);
            in_edges[e.to - 1].push(id);
        }
        (out_edges, in_edges)
    };
    let (out_edges, in_edges) = graph_stub(&edges);

    let mut dual = vec![0; edges.len()];
    for (id, e) in edges.iter().enumerate() {
        let df = e.to % l + 1;
        let dt = (e.from + l - 2) % l + 1;
        let did = edges
            .binary_search_by_key(&(df, dt), |x| (x.from, x.to))
            .expect("dual edge must exist: the edge condition is symmetric");
        dual[id] = did;
    }

    TurnGraph {
        word: word.clone(),
        turns,
        edges,
        dual,
        out_edges,
        in_edges,
    }
}

/// The dual of edge `i -> j`: the edge `j+1 -> i-1`. An involution.
pub fn dual_edge(graph: &TurnGraph, edge: TurnEdge) -> Result<TurnEdge> {
    let id = graph
        .edge_id(edge.from, edge.to)
        .ok_or_else(|| Error::InvalidArgument(format!("no edge {} -> {}", edge.from, edge.to)))?;
    Ok(graph.edge(graph.dual_id(id)))
}

/// DOT export. Node names are turn indices, node labels are turn labels,
/// and the two edges of each dual pair share a `dualpair` attribute.
pub fn export_dot(graph: &TurnGraph) -> String {
    let mut out = String::new();
    out.push_str("digraph turn_graph {\n");
    for turn in graph.turns() {
        let _ = writeln!(
            out,
            "  {} [label=\"{}{}\"];",
            turn.index, turn.label.0, turn.label.1
        );
    }
    let mut pair_of = vec![usize::MAX; graph.edges().len()];
    let mut next_pair = 0;
    for id in 0..graph.edges().len() {
        if pair_of[id] == usize::MAX {
            pair_of[id] = next_pair;
            pair_of[graph.dual_id(id)] = next_pair;
            next_pair += 1;
        }
    }
    for (id, e) in graph.edges().iter().enumerate() {
        let _ = writeln!(out, "  {} -> {} [dualpair={}];", e.from, e.to, pair_of[id]);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::reduced_word;

    fn graph(text: &str) -> TurnGraph {
        build_turn_graph(&reduced_word(text).unwrap().0)
    }

    fn edge_pairs(g: &TurnGraph) -> Vec<(usize, usize)> {
        g.edges().iter().map(|e| (e.from, e.to)).collect()
    }

    #[test]
    fn commutator_graph_is_a_four_cycle() {
        let g = graph("abAB");
        assert_eq!(g.len(), 4);
        assert_eq!(edge_pairs(&g), vec![(1, 2), (2, 3), (3, 4), (4, 1)]);
    }

    #[test]
    fn twelve_letter_example_labels() {
        let g = graph("ababABaBAbAB");
        assert_eq!(g.len(), 12);
        let labels: Vec<String> = g
            .turns()
            .iter()
            .map(|t| format!("{}{}", t.label.0, t.label.1))
            .collect();
        assert_eq!(
            labels,
            vec!["ab", "ba", "ab", "bA", "AB", "Ba", "aB", "BA", "Ab", "bA", "AB", "Ba"]
        );
    }

    #[test]
    fn no_loops() {
        for text in ["abAB", "ababABaBAbAB", "aabbAABB", "abcABC"] {
            let g = graph(text);
            assert!(g.edges().iter().all(|e| e.from != e.to), "loop in {}", text);
        }
    }

    #[test]
    fn edge_rule_is_recheckable() {
        for text in ["abAB", "ababABaBAbAB", "aabAbABB"] {
            let g = graph(text);
            let w = g.word();
            for e in g.edges() {
                assert_eq!(w.letter(e.from).inverse(), w.letter(e.to + 1));
                assert_eq!(e.transverse, w.letter(e.from).inverse());
            }
            // Completeness: every (i, j) satisfying the rule is present.
            for i in 1..=w.len() {
                for j in 1..=w.len() {
                    let holds = w.letter(i).inverse() == w.letter(j + 1);
                    assert_eq!(g.edge_id(i, j).is_some(), holds);
                }
            }
        }
    }

    #[test]
    fn dual_of_first_commutator_edge() {
        let g = graph("abAB");
        let e = g.edge(g.edge_id(1, 2).unwrap());
        let d = dual_edge(&g, e).unwrap();
        assert_eq!((d.from, d.to), (3, 4));
    }

    #[test]
    fn dual_is_an_involution() {
        for text in ["abAB", "ababABaBAbAB", "aabbAABB"] {
            let g = graph(text);
            for id in 0..g.edges().len() {
                assert_eq!(g.dual_id(g.dual_id(id)), id);
                let e = g.edge(id);
                let dd = dual_edge(&g, dual_edge(&g, e).unwrap()).unwrap();
                assert_eq!(dd, e);
            }
        }
    }

    #[test]
    fn dual_rejects_non_edges() {
        let g = graph("abAB");
        let bogus = TurnEdge {
            from: 1,
            to: 3,
            transverse: g.word().letter(1).inverse(),
        };
        assert!(dual_edge(&g, bogus).is_err());
    }

    #[test]
    fn dual_bijects_out_edges_with_in_edges_at_previous_turn() {
        for text in ["abAB", "ababABaBAbAB", "aabAbABB"] {
            let g = graph(text);
            for i in 1..=g.len() {
                let prev = g.pred(i);
                let mut images: Vec<EdgeId> =
                    g.out_edges(i).iter().map(|&id| g.dual_id(id)).collect();
                images.sort_unstable();
                let mut expected = g.in_edges(prev).to_vec();
                expected.sort_unstable();
                assert_eq!(images, expected, "turn {} of {}", i, text);
            }
        }
    }

    #[test]
    fn rotation_gives_isomorphic_graph() {
        let w = reduced_word("aabAbABB").unwrap().0;
        let g = build_turn_graph(&w);
        for k in 0..w.len() {
            let h = build_turn_graph(&w.rotated(k));
            // Turn i of the rotated word is turn i + k of the original.
            let shift = |i: usize| (i + k + w.len() - 1) % w.len() + 1;
            let mut mapped: Vec<(usize, usize)> = h
                .edges()
                .iter()
                .map(|e| (shift(e.from), shift(e.to)))
                .collect();
            mapped.sort_unstable();
            assert_eq!(mapped, edge_pairs(&g));
        }
    }

    #[test]
    fn dot_export_of_commutator() {
        let g = graph("abAB");
        let dot = export_dot(&g);
        assert!(dot.starts_with("digraph turn_graph {\n"));
        assert!(dot.ends_with("}\n"));
        assert_eq!(dot.matches("label=").count(), 4);
        assert_eq!(dot.matches(" -> ").count(), 4);
        // Two dual pairs: {1->2, 3->4} and {2->3, 4->1}.
        assert_eq!(dot.matches("dualpair=0").count(), 2);
        assert_eq!(dot.matches("dualpair=1").count(), 2);
        assert!(dot.contains("1 [label=\"ab\"];"));
        assert!(dot.contains("4 [label=\"Ba\"];"));
        assert!(dot.contains("1 -> 2 [dualpair=0];"));
        assert!(dot.contains("3 -> 4 [dualpair=0];"));
    }

    #[test]
    fn dot_export_is_structurally_wellformed() {
        for text in ["abAB", "ababABaBAbAB"] {
            let dot = export_dot(&graph(text));
            let mut lines = dot.lines();
            assert_eq!(lines.next(), Some("digraph turn_graph {"));
            let body: Vec<&str> = lines.collect();
            assert_eq!(*body.last().unwrap(), "}");
            for line in &body[..body.len() - 1] {
                assert!(line.ends_with("];"), "bad statement: {}", line);
                assert!(
                    line.contains(" -> ") || line.contains("[label=\""),
                    "bad statement: {}",
                    line
                );
            }
        }
    }

    #[test]
    fn twelve_letter_dot_has_published_labels() {
        let dot = export_dot(&graph("ababABaBAbAB"));
        for (i, label) in ["ab", "ba", "ab", "bA", "AB", "Ba", "aB", "BA", "Ab", "bA", "AB", "Ba"]
            .iter()
            .enumerate()
        {
            assert!(dot.contains(&format!("{} [label=\"{}\"];", i + 1, label)));
        }
    }

    mod properties {
        use super::*;
        use crate::word::{cyclically_reduce, Letter};
        use proptest::prelude::*;

        fn arb_word() -> impl Strategy<Value = CyclicWord> {
            proptest::collection::vec((1u32..=3, proptest::bool::ANY), 2..24).prop_filter_map(
                "must stay a word after reduction",
                |v| {
                    let raw: Vec<Letter> =
                        v.into_iter().map(|(g, inv)| Letter::new(g, inv)).collect();
                    cyclically_reduce(&raw).ok().map(|(w, _)| w)
                },
            )
        }

        proptest! {
            #[test]
            fn duality_is_an_involution_everywhere(word in arb_word()) {
                let g = build_turn_graph(&word);
                for id in 0..g.edges().len() {
                    prop_assert_eq!(g.dual_id(g.dual_id(id)), id);
                }
            }

            #[test]
            fn every_edge_satisfies_the_rule_and_no_loops(word in arb_word()) {
                let g = build_turn_graph(&word);
                for e in g.edges() {
                    prop_assert_ne!(e.from, e.to);
                    prop_assert_eq!(word.letter(e.from).inverse(), word.letter(e.to + 1));
                }
            }

            #[test]
            fn dual_maps_out_edges_onto_previous_in_edges(word in arb_word()) {
                let g = build_turn_graph(&word);
                for i in 1..=g.len() {
                    let mut images: Vec<EdgeId> =
                        g.out_edges(i).iter().map(|&id| g.dual_id(id)).collect();
                    images.sort_unstable();
                    let mut expected = g.in_edges(g.pred(i)).to_vec();
                    expected.sort_unstable();
                    prop_assert_eq!(images, expected);
                }
            }
        }
    }
}
