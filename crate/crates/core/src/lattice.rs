//! The lattice of canonical centralisers.
//!
//! `C(Y) = G(Y^⊥)` for every `Y ⊆ X`, so canonical centralisers correspond
//! to the orthogonally closed vertex sets `{Y^⊥ : Y ⊆ X}`. These form a
//! Moore family: it contains `X = ∅^⊥` and is closed under intersection,
//! and every member is an intersection of vertex stars `{x}^⊥`. The height
//! of this lattice is the centraliser dimension of the group.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{CommutationGraph, GeneratorSet, VertexSet};

/// An orthogonally closed set together with a set `Y` such that
/// `Y^⊥ = carrier`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedSet {
    pub carrier: GeneratorSet,
    pub witness: GeneratorSet,
}

#[derive(Clone, Debug)]
pub struct CanonicalLattice {
    graph: CommutationGraph,
    /// Sorted by carrier size descending, then lexicographically.
    elements: Vec<VertexSet>,
    index: HashMap<VertexSet, usize>,
    /// `lower_covers[i]`: indices of the elements covered by element `i`.
    lower_covers: Vec<Vec<usize>>,
    /// Longest strictly descending chain from each element to the bottom.
    heights: Vec<usize>,
}

impl CanonicalLattice {
    pub fn build(graph: &CommutationGraph) -> CanonicalLattice {
        let all = graph.vertices();
        let stars: Vec<VertexSet> = (0..graph.len()).map(|v| graph.star(v)).collect();

        let mut seen: HashMap<VertexSet, ()> = HashMap::new();
        seen.insert(all, ());
        let mut stack = vec![all];
        while let Some(s) = stack.pop() {
            for &star in &stars {
                let t = s & star;
                if seen.insert(t, ()).is_none() {
                    stack.push(t);
                }
            }
        }

        let mut elements: Vec<VertexSet> = seen.into_keys().collect();
        elements.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.lex_cmp(*b)));
        let index: HashMap<VertexSet, usize> = elements.iter().enumerate().map(|(i, &s)| (s, i)).collect();

        // A cover of S is always S ∩ {x}^⊥ for some x: the maximal proper
        // one-step intersections.
        let lower_covers: Vec<Vec<usize>> = elements
            .iter()
            .map(|&s| {
                let mut candidates: Vec<VertexSet> = stars.iter().map(|&star| s & star).filter(|&t| t != s).collect();
                candidates.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.lex_cmp(*b)));
                candidates.dedup();
                let maximal: Vec<usize> = candidates
                    .iter()
                    .filter(|&&t| !candidates.iter().any(|&u| t.is_strict_subset(u)))
                    .map(|t| index[t])
                    .collect();
                maximal
            })
            .collect();

        // Elements are sorted by size descending, so lower covers come later.
        let mut heights = vec![0; elements.len()];
        for i in (0..elements.len()).rev() {
            heights[i] = lower_covers[i].iter().map(|&j| heights[j] + 1).max().unwrap_or(0);
        }

        CanonicalLattice { graph: graph.clone(), elements, index, lower_covers, heights }
    }

    pub fn graph(&self) -> &CommutationGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn carriers(&self) -> &[VertexSet] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> ClosedSet {
        let carrier = self.elements[i];
        ClosedSet {
            carrier: self.graph.bind(carrier).unwrap(),
            witness: self.graph.bind(self.graph.orth(carrier)).unwrap(),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = ClosedSet> + '_ {
        (0..self.len()).map(|i| self.element(i))
    }

    pub fn position(&self, carrier: VertexSet) -> Option<usize> {
        self.index.get(&carrier).copied()
    }

    /// Index of `X`.
    pub fn top(&self) -> usize {
        0
    }

    /// Index of `X^⊥`, the generators of the centre.
    pub fn bottom(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower_covers[i]
    }

    pub fn height_of(&self, i: usize) -> usize {
        self.heights[i]
    }

    pub fn height(&self) -> usize {
        self.heights[self.top()]
    }

    pub fn height_of_set(&self, carrier: VertexSet) -> Option<usize> {
        self.position(carrier).map(|i| self.heights[i])
    }

    fn locate(&self, set: &GeneratorSet) -> Result<usize> {
        self.graph.check_set(set).map_err(|_| Error::ForeignElement)?;
        self.position(set.set()).ok_or(Error::ForeignElement)
    }

    pub fn meet(&self, a: &GeneratorSet, b: &GeneratorSet) -> Result<ClosedSet> {
        let (i, j) = (self.locate(a)?, self.locate(b)?);
        Ok(self.element(self.index[&(self.elements[i] & self.elements[j])]))
    }

    /// Least element containing both: `(a ∪ b)^⊥⊥`.
    pub fn join(&self, a: &GeneratorSet, b: &GeneratorSet) -> Result<ClosedSet> {
        let (i, j) = (self.locate(a)?, self.locate(b)?);
        let closure = self.graph.orth(self.graph.orth(self.elements[i] | self.elements[j]));
        Ok(self.element(self.index[&closure]))
    }

    pub fn edge_count(&self) -> usize {
        self.lower_covers.iter().map(Vec::len).sum()
    }

    /// Hasse diagram as an undirected DOT graph; nodes in element order,
    /// edges from each element to its lower covers.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph lattice {\n  rankdir=TB;\n  node [shape=box];\n");
        for (i, &s) in self.elements.iter().enumerate() {
            let label = self.graph.format_set(s).replace('"', "\\\"");
            out.push_str(&format!("  n{i} [label=\"{label}\"];\n"));
        }
        for (i, covers) in self.lower_covers.iter().enumerate() {
            for &j in covers {
                out.push_str(&format!("  n{i} -- n{j};\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_lattice(graph: &CommutationGraph) -> CanonicalLattice {
    CanonicalLattice::build(graph)
}

/// Centraliser dimension: the height of the canonical lattice.
pub fn cdim(graph: &CommutationGraph) -> usize {
    CanonicalLattice::build(graph).height()
}

/// A longest chain `X = S_0 ⊋ S_1 ⊋ ... ⊋ S_d = X^⊥` with
/// `S_i = {x_1, ..., x_i}^⊥`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxChain {
    pub sets: Vec<VertexSet>,
    pub witness: Vec<usize>,
}

impl CanonicalLattice {
    /// Greedy descent, taking the least vertex whose star cuts the current
    /// set down to an element exactly one level lower.
    pub fn max_chain(&self) -> MaxChain {
        let mut current = self.elements[self.top()];
        let mut sets = vec![current];
        let mut witness = Vec::new();
        let mut h = self.height();
        while h > 0 {
            let (x, next) = (0..self.graph.len())
                .map(|x| (x, current & self.graph.star(x)))
                .find(|&(_, t)| t != current && self.height_of_set(t) == Some(h - 1))
                .expect("a longest chain continues through a single star");
            witness.push(x);
            sets.push(next);
            current = next;
            h -= 1;
        }
        MaxChain { sets, witness }
    }
}

pub fn max_chain(graph: &CommutationGraph) -> MaxChain {
    CanonicalLattice::build(graph).max_chain()
}

/// Largest graph accepted by [`brute_force_cdim`].
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// Independent computation of the centraliser dimension: memoised descent
/// from `X`, branching on every vertex whose star strictly shrinks the
/// current set.
pub fn brute_force_cdim(graph: &CommutationGraph) -> Result<usize> {
    if graph.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeGuard { what: "brute-force cdim", limit: BRUTE_FORCE_LIMIT, got: graph.len() });
    }
    fn descend(graph: &CommutationGraph, s: VertexSet, memo: &mut HashMap<VertexSet, usize>) -> usize {
        if let Some(&d) = memo.get(&s) {
            return d;
        }
        let mut best = 0;
        for x in 0..graph.len() {
            let t = s & graph.star(x);
            if t != s {
                best = best.max(1 + descend(graph, t, memo));
            }
        }
        memo.insert(s, best);
        best
    }
    Ok(descend(graph, graph.vertices(), &mut HashMap::new()))
}
