//! Group elements as canonical minimal words.
//!
//! A raw word is reduced in two phases. First, cancelling pairs
//! `x^e ... x^-e` whose intervening letters all commute with `x` are deleted
//! (leftmost pair first) until none remain; the result has minimal length.
//! Second, the letters are re-emitted greedily: at each step the least letter
//! that can be moved to the front by commutations is taken. Letters are
//! ordered by vertex index, then `x` before `x^-1`. Since all minimal words
//! of an element differ only by commutations, this picks one representative
//! per element.
//!
//! Divisibility is the prefix order on minimal words modulo commutation:
//! `p` left-divides `u` when `l(p^-1 u) = l(u) - l(p)`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{CommutationGraph, GeneratorSet, VertexSet};

/// A generator or its inverse. The derived order is the canonical letter
/// order: by vertex index, then positive before negative.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u16);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        Letter((generator as u16) << 1 | inverse as u16)
    }

    pub fn pos(generator: usize) -> Letter {
        Letter::new(generator, false)
    }

    pub fn neg(generator: usize) -> Letter {
        Letter::new(generator, true)
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// Dense code `2 * generator + is_inverse`.
    pub fn code(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "{}^-1", self.generator())
        } else {
            write!(f, "{}", self.generator())
        }
    }
}

fn cancel_saturate(g: &CommutationGraph, w: &mut Vec<Letter>) {
    'restart: loop {
        for i in 0..w.len() {
            let x = w[i];
            let star = g.star(x.generator());
            for j in i + 1..w.len() {
                let y = w[j];
                if y == x.inverse() {
                    w.remove(j);
                    w.remove(i);
                    continue 'restart;
                }
                if !star.contains(y.generator()) {
                    break;
                }
            }
        }
        return;
    }
}

/// Positions of `w` holding letters that commute past everything before
/// them. The first occurrence of a generator is the only candidate for it.
fn front_positions(g: &CommutationGraph, w: &[Letter]) -> Vec<usize> {
    let mut seen = VertexSet::EMPTY;
    let mut out = Vec::new();
    for (p, l) in w.iter().enumerate() {
        let v = l.generator();
        if seen.is_subset(g.neighbours(v)) {
            out.push(p);
        }
        seen.insert(v);
        if seen == g.vertices() {
            break;
        }
    }
    out
}

fn back_positions(g: &CommutationGraph, w: &[Letter]) -> Vec<usize> {
    let mut seen = VertexSet::EMPTY;
    let mut out = Vec::new();
    for (p, l) in w.iter().enumerate().rev() {
        let v = l.generator();
        if seen.is_subset(g.neighbours(v)) {
            out.push(p);
        }
        seen.insert(v);
        if seen == g.vertices() {
            break;
        }
    }
    out
}

fn linearize(g: &CommutationGraph, mut rest: Vec<Letter>) -> Vec<Letter> {
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let p =
            front_positions(g, &rest).into_iter().min_by_key(|&p| rest[p]).expect("nonempty word has a front letter");
        out.push(rest.remove(p));
    }
    out
}

/// An element of the group, held as its canonical minimal word.
#[derive(Clone)]
pub struct NormalForm {
    graph: Arc<CommutationGraph>,
    letters: Vec<Letter>,
}

impl PartialEq for NormalForm {
    fn eq(&self, other: &Self) -> bool {
        self.graph.id() == other.graph.id() && self.letters == other.letters
    }
}

impl Eq for NormalForm {}

impl std::hash::Hash for NormalForm {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

impl PartialOrd for NormalForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex on the canonical letters.
impl Ord for NormalForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.letters.len(), &self.letters).cmp(&(other.letters.len(), &other.letters))
    }
}

impl fmt::Debug for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NormalForm(\"{self}\")")
    }
}

/// Space-separated tokens `name` / `name^-1`; the identity prints as `1`.
impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.graph.name(l.generator()))?;
            if l.is_inverse() {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

impl NormalForm {
    pub fn identity(graph: &Arc<CommutationGraph>) -> NormalForm {
        NormalForm { graph: Arc::clone(graph), letters: Vec::new() }
    }

    pub fn normalize(graph: &Arc<CommutationGraph>, raw: &[Letter]) -> Result<NormalForm> {
        if let Some(bad) = raw.iter().find(|l| l.generator() >= graph.len()) {
            return Err(Error::VertexIndex(bad.generator()));
        }
        Ok(Self::normalize_unchecked(graph, raw.to_vec()))
    }

    fn normalize_unchecked(graph: &Arc<CommutationGraph>, mut raw: Vec<Letter>) -> NormalForm {
        cancel_saturate(graph, &mut raw);
        NormalForm { letters: linearize(graph, raw), graph: Arc::clone(graph) }
    }

    /// Wraps letters already known to form a minimal word.
    fn from_minimal(graph: &Arc<CommutationGraph>, minimal: Vec<Letter>) -> NormalForm {
        NormalForm { letters: linearize(graph, minimal), graph: Arc::clone(graph) }
    }

    pub fn generator(graph: &Arc<CommutationGraph>, v: usize) -> Result<NormalForm> {
        Self::normalize(graph, &[Letter::pos(v)])
    }

    /// Parses whitespace-separated tokens `name` or `name^-1`. The token `1`
    /// denotes the identity unless `1` is a vertex name.
    pub fn parse(graph: &Arc<CommutationGraph>, text: &str) -> Result<NormalForm> {
        Ok(Self::normalize_unchecked(graph, parse_letters(graph, text)?))
    }

    pub fn graph(&self) -> &Arc<CommutationGraph> {
        &self.graph
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// `l(g)`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn alpha_bits(&self) -> VertexSet {
        self.letters.iter().map(|l| l.generator()).collect()
    }

    /// Generators occurring in the element.
    pub fn alpha(&self) -> GeneratorSet {
        self.graph.bind(self.alpha_bits()).expect("letters are valid generators")
    }

    pub fn same_graph(&self, other: &NormalForm) -> Result<()> {
        if self.graph.id() == other.graph.id() {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    pub fn multiply(&self, other: &NormalForm) -> Result<NormalForm> {
        self.same_graph(other)?;
        Ok(self.mul(other))
    }

    pub(crate) fn mul(&self, other: &NormalForm) -> NormalForm {
        let mut raw = self.letters.clone();
        raw.extend_from_slice(&other.letters);
        Self::normalize_unchecked(&self.graph, raw)
    }

    pub fn inverse(&self) -> NormalForm {
        let raw: Vec<Letter> = self.letters.iter().rev().map(|l| l.inverse()).collect();
        Self::from_minimal(&self.graph, raw)
    }

    /// `g^-1 * self * g`.
    pub fn conjugate(&self, g: &NormalForm) -> Result<NormalForm> {
        self.same_graph(g)?;
        Ok(g.inverse().mul(self).mul(g))
    }

    pub fn power(&self, n: i64) -> NormalForm {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut raw = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            raw.extend_from_slice(&base.letters);
        }
        Self::normalize_unchecked(&self.graph, raw)
    }

    /// Image under the retraction onto `G(keep)` that deletes every other
    /// generator.
    pub fn project(&self, keep: VertexSet) -> NormalForm {
        let raw = self.letters.iter().copied().filter(|l| keep.contains(l.generator())).collect();
        Self::normalize_unchecked(&self.graph, raw)
    }

    pub fn left_divisor_letters(&self) -> BTreeSet<Letter> {
        front_positions(&self.graph, &self.letters).into_iter().map(|p| self.letters[p]).collect()
    }

    pub fn right_divisor_letters(&self) -> BTreeSet<Letter> {
        back_positions(&self.graph, &self.letters).into_iter().map(|p| self.letters[p]).collect()
    }

    /// `y^-1 * self` when `y` is a left divisor.
    pub fn strip_left(&self, y: Letter) -> Option<NormalForm> {
        let p = front_positions(&self.graph, &self.letters).into_iter().find(|&p| self.letters[p] == y)?;
        let mut rest = self.letters.clone();
        rest.remove(p);
        Some(Self::from_minimal(&self.graph, rest))
    }

    /// `self * y^-1` when `y` is a right divisor.
    pub fn strip_right(&self, y: Letter) -> Option<NormalForm> {
        let p = back_positions(&self.graph, &self.letters).into_iter().find(|&p| self.letters[p] == y)?;
        let mut rest = self.letters.clone();
        rest.remove(p);
        Some(Self::from_minimal(&self.graph, rest))
    }

    pub fn is_left_divisor_of(&self, u: &NormalForm) -> Result<bool> {
        self.same_graph(u)?;
        Ok(self.len() <= u.len() && self.inverse().mul(u).len() == u.len() - self.len())
    }

    pub fn is_right_divisor_of(&self, u: &NormalForm) -> Result<bool> {
        self.same_graph(u)?;
        Ok(self.len() <= u.len() && u.mul(&self.inverse()).len() == u.len() - self.len())
    }

    /// Every left divisor, grouped by length: `result[k]` holds the divisors
    /// of length `k`, sorted. Stops after length `max_len`.
    pub fn left_divisors_by_length(&self, max_len: usize) -> Vec<Vec<NormalForm>> {
        let mut levels = vec![vec![(NormalForm::identity(&self.graph), self.clone())]];
        for _ in 0..max_len.min(self.len()) {
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for (prefix, rest) in levels.last().unwrap() {
                for y in rest.left_divisor_letters() {
                    let mut letters = prefix.letters.clone();
                    letters.push(y);
                    let extended = Self::from_minimal(&self.graph, letters);
                    if seen.insert(extended.letters.clone()) {
                        next.push((extended, rest.strip_left(y).unwrap()));
                    }
                }
            }
            next.sort_by(|a, b| a.0.cmp(&b.0));
            levels.push(next);
        }
        levels.into_iter().map(|lvl| lvl.into_iter().map(|(p, _)| p).collect()).collect()
    }

    pub fn left_divisors(&self) -> Vec<NormalForm> {
        self.left_divisors_by_length(self.len()).into_iter().flatten().collect()
    }

    /// Greatest common left divisor, built by repeatedly stripping the least
    /// letter that left-divides both residuals.
    pub fn gcd_left(&self, other: &NormalForm) -> Result<NormalForm> {
        self.same_graph(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut acc = Vec::new();
        loop {
            let common = a.left_divisor_letters().intersection(&b.left_divisor_letters()).next().copied();
            let Some(y) = common else { break };
            a = a.strip_left(y).unwrap();
            b = b.strip_left(y).unwrap();
            acc.push(y);
        }
        Ok(Self::from_minimal(&self.graph, acc))
    }

    pub fn gcd_right(&self, other: &NormalForm) -> Result<NormalForm> {
        Ok(self.inverse().gcd_left(&other.inverse())?.inverse())
    }

    /// Greatest left divisor lying in `G(Y)`.
    pub fn gcd_left_parabolic(&self, y: &GeneratorSet) -> Result<NormalForm> {
        self.graph.check_set(y)?;
        let mut rest = self.clone();
        let mut acc = Vec::new();
        while let Some(&l) = rest.left_divisor_letters().iter().find(|l| y.contains(l.generator())) {
            rest = rest.strip_left(l).unwrap();
            acc.push(l);
        }
        Ok(Self::from_minimal(&self.graph, acc))
    }

    /// The least letter `y` with `y` a left divisor and `y^-1` a right
    /// divisor, if any.
    fn cyclic_obstruction(&self) -> Option<Letter> {
        if self.len() < 2 {
            return None;
        }
        let rights = self.right_divisor_letters();
        self.left_divisor_letters().into_iter().find(|y| rights.contains(&y.inverse()))
    }

    /// No letter `y` is a left divisor while `y^-1` is a right divisor.
    pub fn is_cyclically_minimal(&self) -> bool {
        self.cyclic_obstruction().is_none()
    }

    /// Returns `(u, v)` with `self = u^-1 ∘ v ∘ u` and `v` cyclically minimal.
    pub fn cyclic_reduce(&self) -> (NormalForm, NormalForm) {
        let mut v = self.clone();
        let mut stripped = Vec::new();
        while let Some(y) = v.cyclic_obstruction() {
            v = v.strip_left(y).unwrap().strip_right(y.inverse()).unwrap();
            stripped.push(y);
        }
        let u = Self::from_minimal(&self.graph, stripped).inverse();
        (u, v)
    }

    /// All elements `t ∘ s` where `self = s ∘ t`, sorted.
    pub fn cyclic_permutations(&self) -> Result<Vec<NormalForm>> {
        if !self.is_cyclically_minimal() {
            return Err(Error::Precondition(format!("`{self}` is not cyclically minimal")));
        }
        let mut out: Vec<NormalForm> =
            self.left_divisors().into_iter().map(|s| s.inverse().mul(self).mul(&s)).collect();
        out.sort();
        out.dedup();
        Ok(out)
    }
}

pub fn parse_letters(graph: &CommutationGraph, text: &str) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        let (name, inverse) = match tok.split_once('^') {
            None => (tok, false),
            Some((name, "-1")) => (name, true),
            Some(_) => return Err(Error::BadToken(tok.to_string())),
        };
        if name.is_empty() {
            return Err(Error::BadToken(tok.to_string()));
        }
        if name == "1" && !inverse && graph.vertex("1").is_err() {
            continue;
        }
        out.push(Letter::new(graph.vertex(name)?, inverse));
    }
    Ok(out)
}

/// Given `a ∘ b = c ∘ d`, finds `c1, c2, d1, d2` with `a = c1 ∘ d1`,
/// `b = c2 ∘ d2`, `c = c1 ∘ c2`, `d = d1 ∘ d2` and every generator of `c2`
/// commuting with every generator of `d1`. Searches over the common left
/// divisors of `a` and `c`, longest first.
pub fn factor_split(
    a: &NormalForm,
    b: &NormalForm,
    c: &NormalForm,
    d: &NormalForm,
) -> Result<(NormalForm, NormalForm, NormalForm, NormalForm)> {
    for x in [b, c, d] {
        a.same_graph(x)?;
    }
    let ab = a.mul(b);
    let cd = c.mul(d);
    if ab.len() != a.len() + b.len() || cd.len() != c.len() + d.len() {
        return Err(Error::Precondition("factorisations are not length-additive".into()));
    }
    if ab != cd {
        return Err(Error::Precondition("products differ".into()));
    }
    let graph = a.graph();
    let common = a.gcd_left(c)?;
    let mut candidates = common.left_divisors();
    candidates.reverse();
    for c1 in candidates {
        let d1 = c1.inverse().mul(a);
        let c2 = c1.inverse().mul(c);
        if !d1.is_left_divisor_of(d)? {
            continue;
        }
        let d2 = d1.inverse().mul(d);
        if c2.mul(&d2) != *b || b.len() != c2.len() + d2.len() {
            continue;
        }
        let commuting = c2.alpha_bits().iter().all(|s| d1.alpha_bits().is_subset(graph.star(s)));
        if commuting {
            return Ok((c1, c2, d1, d2));
        }
    }
    Err(Error::Precondition("no factor split found".into()))
}
