//! Blocks, roots and centralisers of single elements.
//!
//! For a cyclically minimal `w` with blocks `w_1 ... w_k` and block roots
//! `v_i`, the centraliser is `<v_1> × ... × <v_k> × G(A(w))`, where `A(w)`
//! is the set of generators outside `α(w)` commuting with all of `α(w)`. A
//! general element `g = z^-1 ∘ w ∘ z` has centraliser `z^-1 C(w) z`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{CommutationGraph, GeneratorSet, VertexSet};
use crate::word::NormalForm;

/// `g = conjugator^-1 ∘ (blocks[0] ⋯ blocks[k-1]) ∘ conjugator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub conjugator: NormalForm,
    /// The cyclically minimal core `blocks[0] ⋯ blocks[k-1]`.
    pub core: NormalForm,
    /// Ordered by least generator index.
    pub blocks: Vec<NormalForm>,
}

impl BlockDecomposition {
    pub fn reassemble(&self) -> NormalForm {
        let core = self.blocks.iter().fold(NormalForm::identity(self.conjugator.graph()), |acc, b| acc.mul(b));
        core.conjugate(&self.conjugator).expect("same graph")
    }
}

pub fn block_decomposition(g: &NormalForm) -> BlockDecomposition {
    let (conjugator, core) = g.cyclic_reduce();
    let graph = g.graph();
    let blocks = graph.components(core.alpha_bits()).into_iter().map(|c| core.project(c)).collect();
    BlockDecomposition { conjugator, core, blocks }
}

/// Root `v` and exponent `m` of a cyclically minimal block `w`, with
/// `v^m = w` and `m` maximal.
pub fn block_root_exponent(w: &NormalForm) -> Result<(NormalForm, u32)> {
    if w.is_identity() {
        return Err(Error::Identity);
    }
    if !w.is_cyclically_minimal() {
        return Err(Error::Precondition(format!("`{w}` is not cyclically minimal")));
    }
    if w.graph().components(w.alpha_bits()).len() != 1 {
        return Err(Error::Precondition(format!("`{w}` is not a block")));
    }
    let len = w.len();
    let levels = w.left_divisors_by_length(len);
    for m in (1..=len).rev().filter(|&m| len.is_multiple_of(m)) {
        for v in &levels[len / m] {
            if v.power(m as i64) == *w {
                return Ok((v.clone(), m as u32));
            }
        }
    }
    unreachable!("m = 1 always succeeds")
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(r, m)` with `r^m = g` and `m` maximal.
pub fn root(g: &NormalForm) -> Result<(NormalForm, u32)> {
    if g.is_identity() {
        return Err(Error::Identity);
    }
    let dec = block_decomposition(g);
    let parts = dec.blocks.iter().map(block_root_exponent).collect::<Result<Vec<_>>>()?;
    let m = parts.iter().fold(0, |acc, &(_, e)| gcd(acc, e));
    let core_root = parts.iter().fold(NormalForm::identity(g.graph()), |acc, (v, e)| acc.mul(&v.power((e / m) as i64)));
    Ok((core_root.conjugate(&dec.conjugator)?, m))
}

pub(crate) fn abelianizing_bits(graph: &CommutationGraph, support: VertexSet) -> VertexSet {
    graph.orth(support) - support
}

/// `A(S)`: generators outside `α(S)` that commute with every generator of
/// `α(S)`. `A` of the empty collection is every generator.
pub fn a_of(graph: &Arc<CommutationGraph>, elements: &[NormalForm]) -> Result<GeneratorSet> {
    let mut support = VertexSet::EMPTY;
    for e in elements {
        if e.graph().id() != graph.id() {
            return Err(Error::GraphMismatch);
        }
        support = support | e.alpha_bits();
    }
    graph.bind(abelianizing_bits(graph, support))
}

/// `[u, v] = 1`.
pub fn commutes(u: &NormalForm, v: &NormalForm) -> Result<bool> {
    u.same_graph(v)?;
    Ok(u.mul(v) == v.mul(u))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicPart {
    /// Root of a block of the core.
    pub root: NormalForm,
    /// The block equals `root^exponent`.
    pub exponent: u32,
}

/// `C(g) = z^-1 (<v_1> × ... × <v_k> × G(A)) z` where `g = z^-1 ∘ w ∘ z`.
#[derive(Clone, Debug)]
pub struct CentraliserDescription {
    pub element: NormalForm,
    pub conjugator: NormalForm,
    pub cyclic_parts: Vec<CyclicPart>,
    pub abelianizing_set: GeneratorSet,
    /// Set for the identity, whose centraliser is the whole group.
    pub whole_group: bool,
}

/// A witness that `h` lies in a described centraliser:
/// `h = z^-1 (v_1^{e_1} ⋯ v_k^{e_k} a) z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub exponents: Vec<i64>,
    pub abelian_part: NormalForm,
}

#[derive(Serialize)]
pub struct CentraliserSummary {
    pub element: String,
    pub conjugator: String,
    pub roots: Vec<String>,
    pub exponents: Vec<u32>,
    pub abelianizing: Vec<String>,
    pub whole_group: bool,
}

pub fn centraliser_of_element(g: &NormalForm) -> CentraliserDescription {
    let graph = g.graph();
    if g.is_identity() {
        return CentraliserDescription {
            element: g.clone(),
            conjugator: g.clone(),
            cyclic_parts: Vec::new(),
            abelianizing_set: graph.full_set(),
            whole_group: true,
        };
    }
    let dec = block_decomposition(g);
    let cyclic_parts = dec
        .blocks
        .iter()
        .map(|b| {
            let (root, exponent) = block_root_exponent(b).expect("blocks of a cyclically minimal core");
            CyclicPart { root, exponent }
        })
        .collect();
    let abelianizing_set = graph.bind(abelianizing_bits(graph, dec.core.alpha_bits())).unwrap();
    CentraliserDescription {
        element: g.clone(),
        conjugator: dec.conjugator,
        cyclic_parts,
        abelianizing_set,
        whole_group: false,
    }
}

impl CentraliserDescription {
    /// Membership decided by the commutator.
    pub fn contains(&self, h: &NormalForm) -> Result<bool> {
        commutes(&self.element, h)
    }

    /// Splits `h` along the direct product, using the retractions onto the
    /// supports of the factors. Returns `None` when `h` is not in the
    /// described subgroup.
    pub fn decompose(&self, h: &NormalForm) -> Result<Option<Membership>> {
        self.element.same_graph(h)?;
        if self.whole_group {
            return Ok(Some(Membership { exponents: Vec::new(), abelian_part: h.clone() }));
        }
        let z = &self.conjugator;
        let inner = h.conjugate(&z.inverse())?;
        let a_bits = self.abelianizing_set.set();
        let allowed = self.cyclic_parts.iter().fold(a_bits, |acc, p| acc | p.root.alpha_bits());
        if !inner.alpha_bits().is_subset(allowed) {
            return Ok(None);
        }
        let mut exponents = Vec::with_capacity(self.cyclic_parts.len());
        let mut rebuilt = NormalForm::identity(h.graph());
        for part in &self.cyclic_parts {
            let proj = inner.project(part.root.alpha_bits());
            if proj.len() % part.root.len() != 0 {
                return Ok(None);
            }
            let k = (proj.len() / part.root.len()) as i64;
            let e = if part.root.power(k) == proj {
                k
            } else if part.root.power(-k) == proj {
                -k
            } else {
                return Ok(None);
            };
            exponents.push(e);
            rebuilt = rebuilt.mul(&proj);
        }
        let abelian_part = inner.project(a_bits);
        rebuilt = rebuilt.mul(&abelian_part);
        if rebuilt != inner {
            return Ok(None);
        }
        Ok(Some(Membership { exponents, abelian_part }))
    }

    /// `z^-1 (v_1^{e_1} ⋯ v_k^{e_k} a) z`.
    pub fn element_of(&self, exponents: &[i64], abelian_part: &NormalForm) -> Result<NormalForm> {
        if exponents.len() != self.cyclic_parts.len() {
            return Err(Error::Precondition("one exponent per cyclic part".into()));
        }
        if !abelian_part.alpha_bits().is_subset(self.abelianizing_set.set()) {
            return Err(Error::Precondition("abelian part leaves the abelianizing set".into()));
        }
        let inner = self
            .cyclic_parts
            .iter()
            .zip(exponents)
            .fold(NormalForm::identity(self.element.graph()), |acc, (p, &e)| acc.mul(&p.root.power(e)))
            .mul(abelian_part);
        inner.conjugate(&self.conjugator)
    }

    pub fn summary(&self) -> CentraliserSummary {
        let graph = self.element.graph();
        CentraliserSummary {
            element: self.element.to_string(),
            conjugator: self.conjugator.to_string(),
            roots: self.cyclic_parts.iter().map(|p| p.root.to_string()).collect(),
            exponents: self.cyclic_parts.iter().map(|p| p.exponent).collect(),
            abelianizing: graph.set_names(self.abelianizing_set.set()),
            whole_group: self.whole_group,
        }
    }
}
