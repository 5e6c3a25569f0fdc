//! Enumeration of the embedded directed circuits of a turn graph, and
//! their vertex/edge incidence vectors.
//!
//! Circuits are cyclic objects; the canonical form starts at the smallest
//! turn index. Enumeration is Johnson-style: start vertices are processed
//! in increasing order and each search runs in the strongly connected
//! component of the start vertex within the subgraph on larger-or-equal
//! vertices, with blocking lists to avoid re-walking dead ends. Output is
//! sorted lexicographically by turn sequence, so it is deterministic.

use crate::error::{Error, Result};
use crate::turngraph::{EdgeId, TurnGraph, TurnIndex};

/// An embedded (vertex-simple) directed circuit, canonically rotated to
/// start at its smallest turn index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Circuit {
    turns: Vec<TurnIndex>,
    edges: Vec<EdgeId>,
}

impl Circuit {
    /// Canonicalize a turn sequence against `graph`. Fails if the turns are
    /// not distinct or some consecutive pair (including the wrap) is not an
    /// edge.
    pub fn new(graph: &TurnGraph, turns: Vec<TurnIndex>) -> Result<Circuit> {
        if turns.len() < 2 {
            return Err(Error::InvalidArgument(
                "a circuit visits at least two turns".into(),
            ));
        }
        let mut seen = vec![false; graph.len() + 1];
        for &t in &turns {
            if t < 1 || t > graph.len() {
                return Err(Error::InvalidArgument(format!("turn {} out of range", t)));
            }
            if seen[t] {
                return Err(Error::InvalidArgument(format!("turn {} repeats", t)));
            }
            seen[t] = true;
        }
        let min_pos = turns
            .iter()
            .enumerate()
            .min_by_key(|&(_, t)| t)
            .map(|(p, _)| p)
            .unwrap();
        let rotated: Vec<TurnIndex> = turns[min_pos..]
            .iter()
            .chain(turns[..min_pos].iter())
            .copied()
            .collect();
        let mut edges = Vec::with_capacity(rotated.len());
        for (t, &v) in rotated.iter().enumerate() {
            let w = rotated[(t + 1) % rotated.len()];
            let id = graph.edge_id(v, w).ok_or_else(|| {
                Error::InvalidArgument(format!("no edge {} -> {} in the turn graph", v, w))
            })?;
            edges.push(id);
        }
        Ok(Circuit {
            turns: rotated,
            edges,
        })
    }

    pub fn len(&self) -> usize {
        self.turns.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least two turns
    }

    pub fn turns(&self) -> &[TurnIndex] {
        &self.turns
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }
}

/// 0/1 incidence vectors of a circuit: how often it passes each turn and
/// traverses each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceProfile {
    pub vertex_counts: Vec<u32>,
    pub edge_counts: Vec<u32>,
}

pub fn incidence(circuit: &Circuit, graph: &TurnGraph) -> IncidenceProfile {
    let mut vertex_counts = vec![0u32; graph.len()];
    let mut edge_counts = vec![0u32; graph.edges().len()];
    for &t in circuit.turns() {
        vertex_counts[t - 1] += 1;
    }
    for &e in circuit.edges() {
        edge_counts[e] += 1;
    }
    IncidenceProfile {
        vertex_counts,
        edge_counts,
    }
}

pub const DEFAULT_CIRCUIT_CAP: usize = 1_000_000;

/// All embedded directed circuits of `graph`, canonical and sorted.
///
/// Errors out as soon as more than `cap` circuits have been found; the
/// count can grow exponentially in the word length.
pub fn enumerate_embedded_circuits(graph: &TurnGraph, cap: usize) -> Result<Vec<Circuit>> {
    if cap < 1 {
        return Err(Error::InvalidArgument("circuit cap must be at least 1".into()));
    }
    let n = graph.len();
    let mut found: Vec<Circuit> = Vec::new();
    let mut search = BlockingSearch {
        graph,
        start: 0,
        component: vec![false; n + 1],
        blocked: vec![false; n + 1],
        block_lists: vec![Vec::new(); n + 1],
        turn_stack: Vec::new(),
        edge_stack: Vec::new(),
    };
    for s in 1..=n {
        let component = scc_containing(graph, s);
        if component.len() < 2 {
            continue;
        }
        search.start = s;
        for v in 1..=n {
            search.component[v] = false;
            search.blocked[v] = false;
            search.block_lists[v].clear();
        }
        for &v in &component {
            search.component[v] = true;
        }
        search.dive(s, cap, &mut found)?;
    }
    found.sort();
    Ok(found)
}

struct BlockingSearch<'a> {
    graph: &'a TurnGraph,
    start: TurnIndex,
    component: Vec<bool>,
    blocked: Vec<bool>,
    block_lists: Vec<Vec<TurnIndex>>,
    turn_stack: Vec<TurnIndex>,
    edge_stack: Vec<EdgeId>,
}

impl BlockingSearch<'_> {
    fn dive(&mut self, v: TurnIndex, cap: usize, found: &mut Vec<Circuit>) -> Result<bool> {
        let mut closed = false;
        self.turn_stack.push(v);
        self.blocked[v] = true;
        for &eid in self.graph.out_edges(v) {
            let w = self.graph.edge(eid).to;
            if !self.component[w] {
                continue;
            }
            if w == self.start {
                self.edge_stack.push(eid);
                // The stack starts at the smallest vertex, so it is already
                // in canonical rotation.
                found.push(Circuit {
                    turns: self.turn_stack.clone(),
                    edges: self.edge_stack.clone(),
                });
                self.edge_stack.pop();
                if found.len() > cap {
                    return Err(Error::CircuitCapExceeded {
                        cap,
                        reached: found.len(),
                    });
                }
                closed = true;
            } else if !self.blocked[w] {
                self.edge_stack.push(eid);
                let sub = self.dive(w, cap, found)?;
                self.edge_stack.pop();
                closed |= sub;
            }
        }
        if closed {
            self.unblock(v);
        } else {
            for &eid in self.graph.out_edges(v) {
                let w = self.graph.edge(eid).to;
                if self.component[w] && !self.block_lists[w].contains(&v) {
                    self.block_lists[w].push(v);
                }
            }
        }
        self.turn_stack.pop();
        Ok(closed)
    }

    fn unblock(&mut self, v: TurnIndex) {
        self.blocked[v] = false;
        while let Some(w) = self.block_lists[v].pop() {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }
}

/// Vertices of the strongly connected component containing `s` in the
/// subgraph induced on turns `>= s`. Iterative Tarjan.
fn scc_containing(graph: &TurnGraph, s: TurnIndex) -> Vec<TurnIndex> {
    let n = graph.len();
    let mut index = vec![usize::MAX; n + 1];
    let mut lowlink = vec![usize::MAX; n + 1];
    let mut on_stack = vec![false; n + 1];
    let mut stack: Vec<TurnIndex> = Vec::new();
    let mut counter = 0;
    let mut result = Vec::new();

    // call frames: (vertex, next out-edge offset)
    let mut frames: Vec<(TurnIndex, usize)> = vec![(s, 0)];
    index[s] = counter;
    lowlink[s] = counter;
    counter += 1;
    stack.push(s);
    on_stack[s] = true;

    while let Some(&mut (v, ref mut next)) = frames.last_mut() {
        let outs = graph.out_edges(v);
        if *next < outs.len() {
            let w = graph.edge(outs[*next]).to;
            *next += 1;
            if w < s {
                continue;
            }
            if index[w] == usize::MAX {
                index[w] = counter;
                lowlink[w] = counter;
                counter += 1;
                stack.push(w);
                on_stack[w] = true;
                frames.push((w, 0));
            } else if on_stack[w] {
                lowlink[v] = lowlink[v].min(index[w]);
            }
        } else {
            frames.pop();
            if let Some(&mut (p, _)) = frames.last_mut() {
                lowlink[p] = lowlink[p].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                if component.contains(&s) {
                    result = component;
                }
            }
        }
    }
    result.sort_unstable();
    result
}
