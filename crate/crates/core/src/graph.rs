//! Commutation graphs and generator sets.
//!
//! A [`CommutationGraph`] is the defining graph of a partially commutative
//! group: vertices are the canonical generators and two generators commute
//! exactly when they are adjacent. Vertex subsets are stored as 64-bit masks
//! ([`VertexSet`]); a [`GeneratorSet`] is such a mask tagged with the graph it
//! belongs to.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{BitAnd, BitOr, Not, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest number of vertices a graph may have.
pub const CAPACITY: usize = 64;

/// A subset of `0..64`, one bit per vertex index.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= CAPACITY);
        if n == CAPACITY {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < CAPACITY);
        VertexSet(1u64 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < CAPACITY && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn with(self, i: usize) -> Self {
        VertexSet(self.0 | 1u64 << i)
    }

    pub fn without(self, i: usize) -> Self {
        VertexSet(self.0 & !(1u64 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_strict_subset(self, other: VertexSet) -> bool {
        self.is_subset(other) && self != other
    }

    /// Least member.
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Members in increasing order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    /// Order used for deterministic listings: compare the sorted member
    /// lists lexicographically.
    pub fn lex_cmp(self, other: VertexSet) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) if x != y => return x.cmp(&y),
                _ => {}
            }
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & rhs.0)
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 | rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & !rhs.0)
    }
}

impl Not for VertexSet {
    type Output = VertexSet;
    fn not(self) -> VertexSet {
        VertexSet(!self.0)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Members;
    fn into_iter(self) -> Members {
        self.iter()
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// Structural fingerprint of a graph. Two graphs with the same vertex names
/// and the same edges share an id, so sets built against one are valid for
/// the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GraphId(u64);

/// A vertex subset bound to a particular graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    graph: GraphId,
    set: VertexSet,
}

impl GeneratorSet {
    pub fn graph_id(&self) -> GraphId {
        self.graph
    }

    pub fn set(&self) -> VertexSet {
        self.set
    }

    pub fn contains(&self, i: usize) -> bool {
        self.set.contains(i)
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn iter(&self) -> Members {
        self.set.iter()
    }

    fn same_graph(&self, other: &GeneratorSet) -> Result<()> {
        if self.graph == other.graph {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    pub fn union(&self, other: &GeneratorSet) -> Result<GeneratorSet> {
        self.same_graph(other)?;
        Ok(GeneratorSet { graph: self.graph, set: self.set | other.set })
    }

    pub fn intersection(&self, other: &GeneratorSet) -> Result<GeneratorSet> {
        self.same_graph(other)?;
        Ok(GeneratorSet { graph: self.graph, set: self.set & other.set })
    }

    pub fn difference(&self, other: &GeneratorSet) -> Result<GeneratorSet> {
        self.same_graph(other)?;
        Ok(GeneratorSet { graph: self.graph, set: self.set - other.set })
    }

    pub fn is_subset(&self, other: &GeneratorSet) -> Result<bool> {
        self.same_graph(other)?;
        Ok(self.set.is_subset(other.set))
    }
}

/// Named families of commutation graphs on `x1..xn`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `x_i` and `x_j` commute iff `|i - j| >= 2`.
    Semibraid,
    Complete,
    Empty,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "semibraid" => Ok(Family::Semibraid),
            "complete" => Ok(Family::Complete),
            "empty" => Ok(Family::Empty),
            other => Err(Error::Precondition(format!("unknown graph family `{other}`"))),
        }
    }
}

/// A finite simple graph on named generators.
///
/// Vertex order is fixed at construction and every [`VertexSet`] indexes
/// against it. Graphs may be empty (deleting the only vertex of `K1` gives
/// the trivial group), but the text parser rejects empty input.
#[derive(Clone)]
pub struct CommutationGraph {
    id: GraphId,
    names: Vec<String>,
    adj: Vec<VertexSet>,
    index: HashMap<String, usize>,
}

impl fmt::Debug for CommutationGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CommutationGraph").field("vertices", &self.names).field("edges", &self.edges()).finish()
    }
}

impl PartialEq for CommutationGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.adj == other.adj
    }
}

impl Eq for CommutationGraph {}

pub(crate) fn validate_name(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || matches!(c, '^' | '-' | '#')) {
        return Err(Error::InvalidName(name.to_string()));
    }
    Ok(())
}

impl CommutationGraph {
    /// Builds a graph from vertex names and index pairs. Repeated edges are
    /// merged.
    pub fn new<S: Into<String>>(names: Vec<S>, edges: &[(usize, usize)]) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > CAPACITY {
            return Err(Error::Capacity(names.len()));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            validate_name(name)?;
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let mut adj = vec![VertexSet::EMPTY; names.len()];
        for &(u, v) in edges {
            if u >= names.len() {
                return Err(Error::VertexIndex(u));
            }
            if v >= names.len() {
                return Err(Error::VertexIndex(v));
            }
            if u == v {
                return Err(Error::SelfLoop(names[u].clone()));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Self::assemble(names, adj, index))
    }

    fn assemble(names: Vec<String>, adj: Vec<VertexSet>, index: HashMap<String, usize>) -> Self {
        let mut hasher = DefaultHasher::new();
        names.hash(&mut hasher);
        adj.hash(&mut hasher);
        CommutationGraph { id: GraphId(hasher.finish()), names, adj, index }
    }

    /// Graph on `x1..xn` with edges given by `mask`, one bit per pair in the
    /// order of [`edge_pairs`].
    pub fn labeled(n: usize, mask: u128) -> Result<Self> {
        let pairs = edge_pairs(n);
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &p)| p).collect();
        Self::new(numbered_names(n), &edges)
    }

    pub fn family(kind: Family, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("family size must be positive".into()));
        }
        let edges: Vec<(usize, usize)> = edge_pairs(n)
            .into_iter()
            .filter(|&(i, j)| match kind {
                Family::Semibraid => j - i >= 2,
                Family::Complete => true,
                Family::Empty => false,
            })
            .collect();
        Self::new(numbered_names(n), &edges)
    }

    pub fn id(&self) -> GraphId {
        self.id
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn check_vertex(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::VertexIndex(i))
        }
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Neighbours of `v`, not including `v`.
    pub fn neighbours(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    /// `{v}^⊥`: the neighbours of `v` together with `v` itself.
    pub fn star(&self, v: usize) -> VertexSet {
        self.adj[v].with(v)
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    /// Edges as index pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.len() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// Binds a raw mask to this graph.
    pub fn bind(&self, set: VertexSet) -> Result<GeneratorSet> {
        if !set.is_subset(self.vertices()) {
            return Err(Error::VertexIndex(set.iter().last().unwrap_or(0)));
        }
        Ok(GeneratorSet { graph: self.id, set })
    }

    pub fn set_of<I: IntoIterator<Item = usize>>(&self, members: I) -> Result<GeneratorSet> {
        let mut set = VertexSet::EMPTY;
        for i in members {
            self.check_vertex(i)?;
            set.insert(i);
        }
        Ok(GeneratorSet { graph: self.id, set })
    }

    pub fn set_of_names(&self, names: &[&str]) -> Result<GeneratorSet> {
        let indices = names.iter().map(|n| self.vertex(n)).collect::<Result<Vec<_>>>()?;
        self.set_of(indices)
    }

    pub fn empty_set(&self) -> GeneratorSet {
        GeneratorSet { graph: self.id, set: VertexSet::EMPTY }
    }

    pub fn full_set(&self) -> GeneratorSet {
        GeneratorSet { graph: self.id, set: self.vertices() }
    }

    pub(crate) fn check_set(&self, set: &GeneratorSet) -> Result<()> {
        if set.graph == self.id {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    /// Orthogonal complement on raw masks: every vertex commuting with all of
    /// `set`. A vertex always commutes with itself.
    pub fn orth(&self, set: VertexSet) -> VertexSet {
        set.iter().fold(self.vertices(), |acc, y| acc & self.star(y))
    }

    pub fn orthogonal(&self, set: &GeneratorSet) -> Result<GeneratorSet> {
        self.check_set(set)?;
        Ok(GeneratorSet { graph: self.id, set: self.orth(set.set) })
    }

    /// Generators adjacent to every other generator; spans the centre.
    pub fn center_bits(&self) -> VertexSet {
        self.orth(self.vertices())
    }

    pub fn center(&self) -> GeneratorSet {
        GeneratorSet { graph: self.id, set: self.center_bits() }
    }

    /// Components of the complement graph restricted to `set`, ordered by
    /// least member.
    pub fn components(&self, set: VertexSet) -> Vec<VertexSet> {
        let mut remaining = set;
        let mut out = Vec::new();
        while let Some(start) = remaining.first() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while let Some(v) = frontier.first() {
                frontier.remove(v);
                let fresh = (remaining - self.star(v)) - comp;
                comp = comp | fresh;
                frontier = frontier | fresh;
            }
            remaining = remaining - comp;
            out.push(comp);
        }
        out
    }

    pub fn non_commutation_components(&self, set: &GeneratorSet) -> Result<Vec<GeneratorSet>> {
        self.check_set(set)?;
        Ok(self.components(set.set).into_iter().map(|c| GeneratorSet { graph: self.id, set: c }).collect())
    }

    /// Induced subgraph on `keep`, preserving vertex order. Returns the
    /// subgraph and the original index of each of its vertices.
    pub fn induced(&self, keep: VertexSet) -> (CommutationGraph, Vec<usize>) {
        let map: Vec<usize> = keep.iter().filter(|&v| v < self.len()).collect();
        let mut back = vec![usize::MAX; self.len()];
        for (new, &old) in map.iter().enumerate() {
            back[old] = new;
        }
        let names: Vec<String> = map.iter().map(|&v| self.names[v].clone()).collect();
        let adj: Vec<VertexSet> = map.iter().map(|&v| (self.adj[v] & keep).iter().map(|u| back[u]).collect()).collect();
        let index = names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        (Self::assemble(names, adj, index), map)
    }

    /// The graph with vertex `x` and its edges removed.
    pub fn delete_vertex(&self, x: usize) -> Result<CommutationGraph> {
        self.check_vertex(x)?;
        Ok(self.induced(self.vertices().without(x)).0)
    }

    pub fn delete_vertex_named(&self, name: &str) -> Result<CommutationGraph> {
        self.delete_vertex(self.vertex(name)?)
    }

    /// Graph of `G × F_k`: `k` new pairwise non-adjacent vertices, each
    /// adjacent to every old vertex. New vertices are named `f1, f2, ...`,
    /// skipping names already in use.
    pub fn join_free(&self, k: usize) -> Result<CommutationGraph> {
        if k == 0 {
            return Err(Error::Precondition("join_free needs k >= 1".into()));
        }
        let n = self.len();
        if n + k > CAPACITY {
            return Err(Error::Capacity(n + k));
        }
        let mut names = self.names.clone();
        let mut counter = 1;
        for _ in 0..k {
            loop {
                let candidate = format!("f{counter}");
                counter += 1;
                if !self.index.contains_key(&candidate) {
                    names.push(candidate);
                    break;
                }
            }
        }
        let mut edges = self.edges();
        for new in n..n + k {
            edges.extend((0..n).map(|old| (old, new)));
        }
        Self::new(names, &edges)
    }

    /// Serialises in the line-based edge-list format accepted by
    /// [`crate::parse::parse_graph`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("vertices: {}\n", self.names.join(" "));
        for (u, v) in self.edges() {
            out.push_str(&format!("edge {} {}\n", self.names[u], self.names[v]));
        }
        out
    }

    pub fn format_set(&self, set: VertexSet) -> String {
        let names: Vec<&str> = set.iter().map(|i| self.names[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn set_names(&self, set: VertexSet) -> Vec<String> {
        set.iter().map(|i| self.names[i].clone()).collect()
    }
}

/// All pairs `(i, j)` with `i < j < n`, in lexicographic order.
pub fn edge_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

fn numbered_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}
