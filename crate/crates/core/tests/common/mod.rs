//! Brute-force oracles written against the definitions, sharing nothing with
//! the library beyond reading a graph's adjacency.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use cdim_core::CommutationGraph;
use rand::Rng;

/// Adjacency as plain bitmasks.
#[derive(Clone, Debug)]
pub struct Adj {
    pub n: usize,
    pub adj: Vec<u64>,
}

impl Adj {
    pub fn from_graph(g: &CommutationGraph) -> Adj {
        let n = g.len();
        let mut adj = vec![0u64; n];
        for (i, row) in adj.iter_mut().enumerate() {
            for j in 0..n {
                if i != j && g.adjacent(i, j) {
                    *row |= 1 << j;
                }
            }
        }
        Adj { n, adj }
    }

    pub fn all(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        a == b || self.adj[a] >> b & 1 == 1
    }

    /// Vertices commuting with every member of `y`.
    pub fn orth(&self, y: u64) -> u64 {
        let mut out = 0;
        for x in 0..self.n {
            if (0..self.n).filter(|&v| y >> v & 1 == 1).all(|v| self.commute(x, v)) {
                out |= 1 << x;
            }
        }
        out
    }

    pub fn star(&self, v: usize) -> u64 {
        self.adj[v] | 1 << v
    }

    pub fn center(&self) -> u64 {
        self.orth(self.all())
    }

    /// `{Y^⊥ : Y ⊆ X}` by running over every subset.
    pub fn closed_sets(&self) -> Vec<u64> {
        let mut seen = HashSet::new();
        for y in 0..=self.all() {
            seen.insert(self.orth(y));
        }
        let mut v: Vec<u64> = seen.into_iter().collect();
        v.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));
        v
    }

    /// Longest strictly descending chain of closed sets.
    pub fn cdim(&self) -> usize {
        let sets = self.closed_sets();
        let mut height = vec![0usize; sets.len()];
        for i in (0..sets.len()).rev() {
            for j in i + 1..sets.len() {
                if sets[j] & sets[i] == sets[j] && sets[j] != sets[i] {
                    height[i] = height[i].max(height[j] + 1);
                }
            }
        }
        let top = sets.iter().position(|&s| s == self.all()).unwrap();
        height[top]
    }

    /// Drop vertex `x`, renumbering the rest in order.
    pub fn delete(&self, x: usize) -> Adj {
        let squeeze = |m: u64| -> u64 {
            let low = m & ((1u64 << x) - 1);
            let high = (m >> (x + 1)) << x;
            low | high
        };
        let adj = (0..self.n).filter(|&v| v != x).map(|v| squeeze(self.adj[v])).collect();
        Adj { n: self.n - 1, adj }
    }

    pub fn induced(&self, keep: u64) -> Adj {
        let idx: Vec<usize> = (0..self.n).filter(|&v| keep >> v & 1 == 1).collect();
        let adj = idx
            .iter()
            .map(|&v| {
                idx.iter()
                    .enumerate()
                    .filter(|&(_, &u)| u != v && self.commute(u, v))
                    .fold(0u64, |m, (j, _)| m | 1 << j)
            })
            .collect();
        Adj { n: idx.len(), adj }
    }

    /// Every parameter system: sequences of distinct vertices with strictly
    /// descending `C_i`. Returned as `(sequence, chain)`.
    pub fn parameter_systems(&self) -> Vec<(Vec<usize>, Vec<u64>)> {
        let mut out = Vec::new();
        let mut seq = Vec::new();
        let mut chain = vec![self.all()];
        self.extend(&mut seq, &mut chain, &mut out);
        out
    }

    fn extend(&self, seq: &mut Vec<usize>, chain: &mut Vec<u64>, out: &mut Vec<(Vec<usize>, Vec<u64>)>) {
        out.push((seq.clone(), chain.clone()));
        let cur = *chain.last().unwrap();
        for v in 0..self.n {
            if seq.contains(&v) {
                continue;
            }
            let next = self.orth(seq.iter().fold(1u64 << v, |m, &u| m | 1 << u));
            if next != cur {
                seq.push(v);
                chain.push(next);
                self.extend(seq, chain, out);
                seq.pop();
                chain.pop();
            }
        }
    }
}

/// Locked/tied flags of one parameter system of `G_x`, following the
/// definitions word by word. `y` and `w` index into `G_x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LockTie {
    pub locked: bool,
    pub t1a: bool,
    pub t1b: bool,
    pub t2: bool,
}

impl LockTie {
    pub fn tied(&self) -> bool {
        self.t1a || self.t1b || self.t2
    }

    pub fn t1(&self) -> bool {
        self.t1a || self.t1b
    }

    pub fn t1_exclusive(&self) -> bool {
        self.t1() && !self.t2
    }
}

pub fn lock_tie(gx: &Adj, y: u64, w: u64, seq: &[usize], chain: &[u64]) -> LockTie {
    let n = seq.len();
    let inside = |m: u64, s: u64| m & s == m;
    let mut locked = false;
    for l in 0..=n {
        if !seq[..l].iter().all(|&v| y >> v & 1 == 1) {
            break;
        }
        if (0..gx.n).any(|k| w >> k & 1 == 1 && inside(chain[l], gx.star(k))) {
            locked = true;
        }
    }
    let Some(k) = (0..=n).filter(|&i| !inside(chain[i], y)).max() else {
        return LockTie { locked, t1a: false, t1b: false, t2: false };
    };
    let t1a = k < n && (chain[k] & !chain[k + 1] & y) != 0;
    let t1b = k == n && (w & chain[n]) != 0;
    let t2 = k < n && seq[..k].iter().all(|&v| y >> v & 1 == 1) && w >> seq[k] & 1 == 1;
    LockTie { locked, t1a, t1b, t2 }
}

/// `(clause 1, clause 2a, clause 2b)` over every parameter system of
/// `G_x`; `strong` decides what counts as "locked and tied of type T1-exclusive".
pub fn clause_evidence(g: &Adj, x: usize, strong: impl Fn(&LockTie) -> bool) -> (bool, bool, bool) {
    let gx = g.delete(x);
    let nbrs = g.delete_mask(x, g.adj[x]);
    let (y, w) = (nbrs, gx.all() & !nbrs);
    let d = gx.cdim();
    let center = gx.center();
    let (mut c1, mut c2a, mut c2b) = (false, false, false);
    for (seq, chain) in gx.parameter_systems() {
        let lt = lock_tie(&gx, y, w, &seq, &chain);
        if seq.len() == d {
            if strong(&lt) {
                c1 = true;
            } else if lt.locked || lt.tied() {
                c2a = true;
            }
        }
        if d >= 1 && seq.len() == d - 1 && *chain.last().unwrap() == center && strong(&lt) {
            c2b = true;
        }
    }
    (c1, c2a, c2b)
}

impl Adj {
    /// Re-index a mask of `G` into `G_x`.
    pub fn delete_mask(&self, x: usize, m: u64) -> u64 {
        let m = m & !(1u64 << x);
        (m & ((1u64 << x) - 1)) | ((m >> (x + 1)) << x)
    }
}

/// Raw letters: `+(g+1)` for a generator, `-(g+1)` for its inverse.
pub type Raw = Vec<i8>;

pub fn random_raw(rng: &mut impl Rng, n: usize, max_len: usize) -> Raw {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            let g = rng.gen_range(1..=n as i8);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect()
}

fn commute_raw(a: &Adj, p: i8, q: i8) -> bool {
    a.commute(p.unsigned_abs() as usize - 1, q.unsigned_abs() as usize - 1)
}

/// Neighbours of a word in the move graph: swap adjacent commuting letters,
/// delete an adjacent `a a^-1`, insert `a a^-1` anywhere (within `bound`).
fn moves(a: &Adj, w: &Raw, bound: usize, out: &mut Vec<Raw>) {
    for i in 0..w.len().saturating_sub(1) {
        if w[i] != w[i + 1] && commute_raw(a, w[i], w[i + 1]) {
            let mut v = w.clone();
            v.swap(i, i + 1);
            out.push(v);
        }
        if w[i] == -w[i + 1] {
            let mut v = w.clone();
            v.drain(i..i + 2);
            out.push(v);
        }
    }
    if w.len() + 2 <= bound {
        for i in 0..=w.len() {
            for g in 1..=a.n as i8 {
                for s in [g, -g] {
                    let mut v = w.clone();
                    v.splice(i..i, [s, -s]);
                    out.push(v);
                }
            }
        }
    }
}

/// Whether `u` reaches `v` in the move graph restricted to words of length
/// at most `bound`. `None` if the search exceeds `budget` states.
pub fn bfs_equal(a: &Adj, u: &Raw, v: &Raw, bound: usize, budget: usize) -> Option<bool> {
    if u == v {
        return Some(true);
    }
    let mut seen: HashSet<Raw> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(u.clone());
    queue.push_back(u.clone());
    let mut buf = Vec::new();
    while let Some(w) = queue.pop_front() {
        buf.clear();
        moves(a, &w, bound, &mut buf);
        for next in buf.drain(..) {
            if next == *v {
                return Some(true);
            }
            if seen.insert(next.clone()) {
                if seen.len() > budget {
                    return None;
                }
                queue.push_back(next);
            }
        }
    }
    Some(false)
}

/// Reduce by the same moves without insertion: search the swap class for
/// a cancelling neighbour pair and delete it, until none is reachable.
pub fn bfs_reduce(a: &Adj, w: &Raw, budget: usize) -> Option<Raw> {
    let mut current = w.clone();
    'outer: loop {
        let mut seen: HashSet<Raw> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(current.clone());
        queue.push_back(current.clone());
        while let Some(word) = queue.pop_front() {
            if let Some(i) = (0..word.len().saturating_sub(1)).find(|&i| word[i] == -word[i + 1]) {
                let mut v = word;
                v.drain(i..i + 2);
                current = v;
                continue 'outer;
            }
            for i in 0..word.len().saturating_sub(1) {
                if word[i] != word[i + 1] && commute_raw(a, word[i], word[i + 1]) {
                    let mut v = word.clone();
                    v.swap(i, i + 1);
                    if seen.insert(v.clone()) {
                        if seen.len() > budget {
                            return None;
                        }
                        queue.push_back(v);
                    }
                }
            }
        }
        return Some(current);
    }
}

/// Every word obtained from `w` by swapping adjacent commuting letters.
pub fn swap_class(a: &Adj, w: &Raw, budget: usize) -> Option<HashSet<Raw>> {
    let mut seen: HashSet<Raw> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(w.clone());
    queue.push_back(w.clone());
    while let Some(word) = queue.pop_front() {
        for i in 0..word.len().saturating_sub(1) {
            if word[i] != word[i + 1] && commute_raw(a, word[i], word[i + 1]) {
                let mut v = word.clone();
                v.swap(i, i + 1);
                if seen.insert(v.clone()) {
                    if seen.len() > budget {
                        return None;
                    }
                    queue.push_back(v);
                }
            }
        }
    }
    Some(seen)
}

pub fn random_labeled(rng: &mut impl Rng, n: usize) -> CommutationGraph {
    let pairs = cdim_core::graph::edge_pairs(n).len();
    let mask: u128 = (0..pairs).filter(|_| rng.gen_bool(0.5)).fold(0u128, |m, i| m | 1 << i);
    CommutationGraph::labeled(n, mask).unwrap()
}
