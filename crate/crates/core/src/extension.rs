//! Effect of deleting a vertex `x` on the centraliser dimension.
//!
//! `G` is the group of the full graph and `G_x` the group of the graph with
//! `x` removed. `Y` holds the neighbours of `x`, `W` the remaining vertices
//! of `G_x`. A parameter system of `G_x` is a vertex sequence whose
//! canonical centralisers `C_i = {x_1..x_i}^⊥` strictly descend.
//! Locked and tied systems are the ones that lengthen when `x` is restored.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{CommutationGraph, GeneratorSet, GraphId, VertexSet};
use crate::lattice::CanonicalLattice;

/// Default bound on enumeration nodes for witness searches.
pub const DEFAULT_CAP: usize = 1_000_000;

pub fn partition_yw(g: &CommutationGraph, x: usize) -> Result<(GeneratorSet, GeneratorSet)> {
    g.check_vertex(x)?;
    let y = g.neighbours(x);
    let w = g.vertices().without(x) - y;
    Ok((g.bind(y)?, g.bind(w)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterSystem {
    graph: GraphId,
    pub sequence: Vec<usize>,
    /// `chain[i] = {x_1..x_i}^⊥`; `chain[0]` is every vertex.
    pub chain: Vec<VertexSet>,
    /// Length equals the centraliser dimension.
    pub maximal: bool,
    pub ends_in_center: bool,
}

impl ParameterSystem {
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn graph_id(&self) -> GraphId {
        self.graph
    }

    pub fn last(&self) -> VertexSet {
        *self.chain.last().unwrap()
    }
}

fn chain_of(g: &CommutationGraph, seq: &[usize]) -> Option<Vec<VertexSet>> {
    let mut chain = vec![g.vertices()];
    for &v in seq {
        let prev = *chain.last().unwrap();
        let next = prev & g.star(v);
        if next == prev {
            return None;
        }
        chain.push(next);
    }
    Some(chain)
}

fn system_from(g: &CommutationGraph, cdim: usize, sequence: Vec<usize>, chain: Vec<VertexSet>) -> ParameterSystem {
    let ends_in_center = *chain.last().unwrap() == g.center_bits();
    ParameterSystem { graph: g.id(), maximal: sequence.len() == cdim, sequence, chain, ends_in_center }
}

fn check_sequence(g: &CommutationGraph, seq: &[usize]) -> Result<()> {
    let mut seen = VertexSet::EMPTY;
    for &v in seq {
        g.check_vertex(v)?;
        if seen.contains(v) {
            return Err(Error::Precondition(format!("vertex {} repeated in parameter system", g.name(v))));
        }
        seen.insert(v);
    }
    Ok(())
}

pub fn is_parameter_system(g: &CommutationGraph, seq: &[usize]) -> Result<Option<ParameterSystem>> {
    check_sequence(g, seq)?;
    Ok(chain_of(g, seq).map(|chain| system_from(g, crate::lattice::cdim(g), seq.to_vec(), chain)))
}

/// Which parameter systems an enumeration produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// Length equal to the centraliser dimension.
    Maximal,
    /// Exactly this length, finishing at the centre.
    EndingInCenter(usize),
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub systems: Vec<ParameterSystem>,
    pub truncated: bool,
}

struct Search<'a> {
    graph: &'a CommutationGraph,
    lattice: &'a CanonicalLattice,
    len: usize,
    cap: usize,
    nodes: usize,
    truncated: bool,
}

impl Search<'_> {
    fn descend(
        &mut self,
        seq: &mut Vec<usize>,
        chain: &mut Vec<VertexSet>,
        visit: &mut dyn FnMut(&[usize], &[VertexSet]) -> bool,
    ) -> bool {
        let current = *chain.last().unwrap();
        if seq.len() == self.len {
            if current != self.lattice.carriers()[self.lattice.bottom()] {
                return true;
            }
            return visit(seq, chain);
        }
        let remaining = self.len - seq.len();
        for v in 0..self.graph.len() {
            let next = current & self.graph.star(v);
            if next == current || self.lattice.height_of_set(next).unwrap() + 1 < remaining {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                self.truncated = true;
                return false;
            }
            seq.push(v);
            chain.push(next);
            let go_on = self.descend(seq, chain, visit);
            seq.pop();
            chain.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// Depth-first, least vertex first. `visit` returns `false` to stop early.
/// Returns `true` when the search hit `cap` nodes.
pub fn for_each_parameter_system(
    g: &CommutationGraph,
    lattice: &CanonicalLattice,
    target: Target,
    cap: usize,
    visit: &mut dyn FnMut(ParameterSystem) -> bool,
) -> bool {
    let cdim = lattice.height();
    let len = match target {
        Target::Maximal => cdim,
        Target::EndingInCenter(len) => len,
    };
    if len > cdim {
        return false;
    }
    let mut search = Search { graph: g, lattice, len, cap, nodes: 0, truncated: false };
    let mut seq = Vec::new();
    let mut chain = vec![g.vertices()];
    search.descend(&mut seq, &mut chain, &mut |s, c| visit(system_from(g, cdim, s.to_vec(), c.to_vec())));
    search.truncated
}

pub fn enumerate_parameter_systems(g: &CommutationGraph, target: Target, cap: usize) -> Enumeration {
    let lattice = CanonicalLattice::build(g);
    let mut systems = Vec::new();
    let truncated = for_each_parameter_system(g, &lattice, target, cap, &mut |p| {
        systems.push(p);
        true
    });
    Enumeration { systems, truncated }
}

pub fn enumerate_maximal_parameter_systems(g: &CommutationGraph, cap: usize) -> Result<Enumeration> {
    if cap == 0 {
        return Err(Error::Precondition("enumeration cap must be positive".into()));
    }
    Ok(enumerate_parameter_systems(g, Target::Maximal, cap))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lock {
    pub l: usize,
    pub keys: VertexSet,
    /// `l` is the longest prefix inside `Y`.
    pub right_locked: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TieTypes {
    pub t1a: bool,
    pub t1b: bool,
    pub t2: bool,
}

impl TieTypes {
    pub fn any(self) -> bool {
        self.t1a || self.t1b || self.t2
    }

    pub fn t1(self) -> bool {
        self.t1a || self.t1b
    }

    pub fn t1_exclusive(self) -> bool {
        self.t1() && !self.t2
    }

    pub fn labels(self) -> Vec<&'static str> {
        [(self.t1a, "T1a"), (self.t1b, "T1b"), (self.t2, "T2")]
            .into_iter()
            .filter_map(|(on, name)| on.then_some(name))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Tie {
    pub k: usize,
    pub types: TieTypes,
}

/// Locked/tied data of one parameter system of `G_x`, in `G_x` indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LockTieReport {
    pub vertex: usize,
    pub y: VertexSet,
    pub w: VertexSet,
    pub locked: Option<Lock>,
    pub tied: Option<Tie>,
}

impl LockTieReport {
    pub fn is_locked(&self) -> bool {
        self.locked.is_some()
    }

    pub fn is_tied(&self) -> bool {
        self.tied.is_some()
    }

    pub fn t1_exclusive(&self) -> bool {
        self.tied.is_some_and(|t| t.types.t1_exclusive())
    }

    pub fn locked_and_t1_exclusive(&self) -> bool {
        self.is_locked() && self.t1_exclusive()
    }
}

/// Which construction of the extended system applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SCase {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
    #[serde(rename = "v")]
    V,
}

impl SCase {
    /// How many vertices the case adds.
    pub fn growth(self) -> usize {
        match self {
            SCase::I | SCase::II => 2,
            SCase::III | SCase::IV => 1,
            SCase::V => 0,
        }
    }
}

/// `G`, the vertex `x`, and `G_x` with the index translation between them.
#[derive(Clone, Debug)]
pub struct ExtensionContext {
    g: CommutationGraph,
    x: usize,
    gx: CommutationGraph,
    y: VertexSet,
    w: VertexSet,
}

impl ExtensionContext {
    pub fn new(g: &CommutationGraph, x: usize) -> Result<ExtensionContext> {
        g.check_vertex(x)?;
        let gx = g.delete_vertex(x)?;
        let down = |s: VertexSet| -> VertexSet { s.iter().map(|v| if v > x { v - 1 } else { v }).collect() };
        let y = down(g.neighbours(x));
        let w = gx.vertices() - y;
        Ok(ExtensionContext { g: g.clone(), x, gx, y, w })
    }

    pub fn g(&self) -> &CommutationGraph {
        &self.g
    }

    pub fn gx(&self) -> &CommutationGraph {
        &self.gx
    }

    pub fn vertex(&self) -> usize {
        self.x
    }

    /// `Y` in `G_x` indices.
    pub fn y(&self) -> VertexSet {
        self.y
    }

    /// `W` in `G_x` indices.
    pub fn w(&self) -> VertexSet {
        self.w
    }

    /// Index in `G` of vertex `v` of `G_x`.
    pub fn lift(&self, v: usize) -> usize {
        if v >= self.x {
            v + 1
        } else {
            v
        }
    }

    pub fn lift_set(&self, s: VertexSet) -> VertexSet {
        s.iter().map(|v| self.lift(v)).collect()
    }

    fn check_system(&self, p: &ParameterSystem) -> Result<()> {
        if p.graph != self.gx.id() {
            return Err(Error::GraphMismatch);
        }
        Ok(())
    }

    fn y_prefix(&self, p: &ParameterSystem) -> usize {
        p.sequence.iter().take_while(|&&v| self.y.contains(v)).count()
    }

    /// Right-locked position and every key, if any key exists.
    pub fn lock_status(&self, p: &ParameterSystem) -> Result<Option<Lock>> {
        self.check_system(p)?;
        let l = self.y_prefix(p);
        let cl = p.chain[l];
        let keys: VertexSet = self.w.iter().filter(|&w| cl.is_subset(self.gx.star(w))).collect();
        Ok((!keys.is_empty()).then_some(Lock { l, keys, right_locked: true }))
    }

    pub fn tie_status(&self, p: &ParameterSystem) -> Result<Option<Tie>> {
        self.check_system(p)?;
        let n = p.len();
        let Some(k) = (0..=n).rev().find(|&i| !p.chain[i].is_subset(self.y)) else {
            return Ok(None);
        };
        let types = TieTypes {
            t1a: k < n && !((p.chain[k] - p.chain[k + 1]) & self.y).is_empty(),
            t1b: k == n && !(self.w & p.chain[n]).is_empty(),
            t2: k < n && self.y_prefix(p) >= k && self.w.contains(p.sequence[k]),
        };
        Ok(types.any().then_some(Tie { k, types }))
    }

    pub fn lock_tie_report(&self, p: &ParameterSystem) -> Result<LockTieReport> {
        Ok(LockTieReport {
            vertex: self.x,
            y: self.y,
            w: self.w,
            locked: self.lock_status(p)?,
            tied: self.tie_status(p)?,
        })
    }

    /// Extends `q` to a parameter system of `G` by inserting `x` after
    /// position `k` and/or the least key after position `l`. The result is
    /// in `G` indices and is checked to be a parameter system of `G`.
    pub fn build_s(&self, q: &ParameterSystem, report: &LockTieReport) -> Result<(ParameterSystem, SCase)> {
        self.check_system(q)?;
        let lifted: Vec<usize> = q.sequence.iter().map(|&v| self.lift(v)).collect();
        let n = lifted.len();
        let t1 = report.tied.is_some_and(|t| t.types.t1());
        let t1b = report.tied.is_some_and(|t| t.types.t1b);
        let t2 = report.tied.is_some_and(|t| t.types.t2);

        let insert = |after_k: Option<usize>, after_l: Option<(usize, usize)>| -> Vec<usize> {
            let mut out = Vec::with_capacity(n + 2);
            for pos in 0..=n {
                if after_k == Some(pos) {
                    out.push(self.x);
                }
                if let Some((l, w)) = after_l {
                    if l == pos {
                        out.push(w);
                    }
                }
                if let Some(&v) = lifted.get(pos) {
                    out.push(v);
                }
            }
            out
        };

        let (seq, case) = match (report.locked, report.tied) {
            (Some(lock), Some(tie)) if t1 && (tie.k < lock.l || (t1b && tie.k == lock.l && lock.l == n)) => {
                let w = self.lift(lock.keys.first().unwrap());
                (insert(Some(tie.k), Some((lock.l, w))), SCase::I)
            }
            (Some(lock), Some(tie)) if t1 && tie.k > lock.l => {
                let w = self.lift(lock.keys.first().unwrap());
                (insert(Some(tie.k), Some((lock.l, w))), SCase::II)
            }
            (Some(lock), None) => {
                let w = self.lift(lock.keys.first().unwrap());
                (insert(None, Some((lock.l, w))), SCase::III)
            }
            (None, Some(tie)) if t1 || t2 => (insert(Some(tie.k), None), SCase::IV),
            (Some(_), Some(tie)) if t2 => (insert(Some(tie.k), None), SCase::IV),
            (None, None) => (lifted.clone(), SCase::V),
            _ => {
                return Err(Error::Precondition("no construction case applies to this locked/tied combination".into()))
            }
        };
        match is_parameter_system(&self.g, &seq)? {
            Some(s) => Ok((s, case)),
            None => {
                Err(Error::Precondition(format!("case {case:?} produced a sequence that is not a parameter system")))
            }
        }
    }
}

/// Graph-level tests for the four simple criteria.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QuickChecks {
    /// The centre of `G` is strictly smaller than the centre of `G_x`.
    pub c1a: bool,
    /// `cdim(G(Y)) = cdim(G_x)` with `W` nonempty.
    pub c1b: bool,
    /// `G_x = G(Y) × G(W)` and `G(W)` has trivial centre.
    pub c2a: bool,
    /// `C_G(x) = C_G(S)` for some `S ⊆ X∖{x}`; holds the `S` found, in `G` indices.
    pub c2b: Option<VertexSet>,
}

impl QuickChecks {
    pub fn labels(&self) -> Vec<&'static str> {
        [(self.c1a, "1a"), (self.c1b, "1b"), (self.c2a, "2a"), (self.c2b.is_some(), "2b")]
            .into_iter()
            .filter_map(|(on, name)| on.then_some(name))
            .collect()
    }

    pub fn predicts_two(&self) -> bool {
        self.c1a || self.c1b
    }

    pub fn predicts_zero(&self) -> bool {
        self.c2a || self.c2b.is_some()
    }
}

fn quick_checks_in(ctx: &ExtensionContext, cdim_gx: usize) -> QuickChecks {
    let (g, gx) = (ctx.g(), ctx.gx());
    let center_gx = ctx.lift_set(gx.center_bits());
    let c1a = g.center_bits().is_strict_subset(center_gx);

    // The argument needs a key in W; with W empty x is central and G = G_x × Z.
    let (a_graph, _) = gx.induced(ctx.y());
    let c1b = !ctx.w().is_empty() && crate::lattice::cdim(&a_graph) == cdim_gx;

    let product = ctx.y().iter().all(|y| ctx.w().is_subset(gx.neighbours(y)));
    let (b_graph, _) = gx.induced(ctx.w());
    let c2a = product && b_graph.center_bits().is_empty();

    // If any S works then so does the largest candidate, `star(x)^⊥ ∖ {x}`.
    let star = g.star(ctx.vertex());
    let c2b = if star == g.vertices() {
        Some(VertexSet::EMPTY)
    } else {
        let s = g.orth(star).without(ctx.vertex());
        (g.orth(s) == star).then_some(s)
    };

    QuickChecks { c1a, c1b, c2a, c2b }
}

pub fn quick_checks(g: &CommutationGraph, x: usize) -> Result<QuickChecks> {
    let ctx = ExtensionContext::new(g, x)?;
    let cdim_gx = crate::lattice::cdim(ctx.gx());
    Ok(quick_checks_in(&ctx, cdim_gx))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Clause {
    #[serde(rename = "clause1")]
    Clause1,
    #[serde(rename = "clause2a")]
    Clause2a,
    #[serde(rename = "clause2b")]
    Clause2b,
    #[serde(rename = "clause3")]
    Clause3,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub clause: Clause,
    pub system: ParameterSystem,
    pub report: LockTieReport,
}

/// How strictly clause 1 reads "locked and tied of type T1-exclusive".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reading {
    /// As stated: tied of type T1 and not of type T2.
    #[serde(rename = "literal")]
    Literal,
    /// Tied of type T1, whether or not also of type T2.
    #[serde(rename = "t2-permitted")]
    T2Permitted,
}

impl Reading {
    fn strong(self, r: &LockTieReport) -> bool {
        match self {
            Reading::Literal => r.locked_and_t1_exclusive(),
            Reading::T2Permitted => r.is_locked() && r.tied.is_some_and(|t| t.types.t1()),
        }
    }
}

/// Which clauses the witness search found evidence for.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClauseEvidence {
    pub clause1: bool,
    pub clause2a: bool,
    pub clause2b: bool,
}

impl ClauseEvidence {
    pub fn predicted_delta(&self) -> usize {
        if self.clause1 {
            2
        } else if self.clause2a || self.clause2b {
            1
        } else {
            0
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtensionReport {
    pub vertex: usize,
    pub cdim_g: usize,
    pub cdim_gx: usize,
    pub delta: usize,
    pub clause: Clause,
    pub evidence: ClauseEvidence,
    pub evidence_t2_permitted: ClauseEvidence,
    /// Literal-reading witnesses for the clause matching `delta`, falling
    /// back to the T2-permitted reading when the literal search finds none.
    pub witnesses: Vec<Witness>,
    /// The witness search finished within its cap.
    pub witnesses_complete: bool,
    /// The literal clauses predict `delta`.
    pub consistent: bool,
    pub consistent_t2_permitted: bool,
    pub quick_checks: QuickChecks,
}

#[derive(Default)]
struct Collector {
    evidence: [ClauseEvidence; 2],
    // [reading][clause 1, 2a, 2b]
    first: [[Option<Witness>; 3]; 2],
}

impl Collector {
    fn maximal(&mut self, p: &ParameterSystem, report: &LockTieReport) {
        for (i, reading) in [Reading::Literal, Reading::T2Permitted].into_iter().enumerate() {
            let (slot, clause) = if reading.strong(report) {
                self.evidence[i].clause1 = true;
                (0, Clause::Clause1)
            } else if report.is_locked() || report.is_tied() {
                self.evidence[i].clause2a = true;
                (1, Clause::Clause2a)
            } else {
                continue;
            };
            self.first[i][slot].get_or_insert_with(|| Witness { clause, system: p.clone(), report: *report });
        }
    }

    fn short(&mut self, p: &ParameterSystem, report: &LockTieReport) {
        for (i, reading) in [Reading::Literal, Reading::T2Permitted].into_iter().enumerate() {
            if reading.strong(report) {
                self.evidence[i].clause2b = true;
                self.first[i][2].get_or_insert_with(|| Witness {
                    clause: Clause::Clause2b,
                    system: p.clone(),
                    report: *report,
                });
            }
        }
    }

    fn settled_maximal(&self) -> bool {
        self.evidence.iter().all(|e| e.clause1 && e.clause2a)
    }

    fn settled_short(&self) -> bool {
        self.evidence.iter().all(|e| e.clause2b)
    }
}

pub fn classify_extension(g: &CommutationGraph, x: usize, cap: usize) -> Result<ExtensionReport> {
    let ctx = ExtensionContext::new(g, x)?;
    let cdim_g = CanonicalLattice::build(g).height();
    let lattice_x = CanonicalLattice::build(ctx.gx());
    let cdim_gx = lattice_x.height();
    let delta = cdim_g
        .checked_sub(cdim_gx)
        .ok_or_else(|| Error::Precondition("deleting a vertex raised the centraliser dimension".into()))?;

    let mut c = Collector::default();
    let mut truncated = for_each_parameter_system(ctx.gx(), &lattice_x, Target::Maximal, cap, &mut |p| {
        let report = ctx.lock_tie_report(&p).expect("system built on G_x");
        c.maximal(&p, &report);
        !c.settled_maximal()
    });
    if cdim_gx >= 1 {
        let target = Target::EndingInCenter(cdim_gx - 1);
        truncated |= for_each_parameter_system(ctx.gx(), &lattice_x, target, cap, &mut |p| {
            let report = ctx.lock_tie_report(&p).expect("system built on G_x");
            c.short(&p, &report);
            !c.settled_short()
        });
    }

    let [literal, permitted] = c.first;
    let pick = |slot: usize| literal[slot].clone().or_else(|| permitted[slot].clone());
    let (clause, witnesses) = match delta {
        2 => (Clause::Clause1, pick(0).into_iter().collect()),
        1 if pick(1).is_none() && pick(2).is_some() => (Clause::Clause2b, pick(2).into_iter().collect()),
        1 => (Clause::Clause2a, pick(1).into_iter().chain(pick(2)).collect()),
        _ => (Clause::Clause3, Vec::new()),
    };

    let [evidence, evidence_t2_permitted] = c.evidence;
    Ok(ExtensionReport {
        vertex: x,
        cdim_g,
        cdim_gx,
        delta,
        clause,
        evidence,
        evidence_t2_permitted,
        witnesses,
        witnesses_complete: !truncated,
        consistent: evidence.predicted_delta() == delta,
        consistent_t2_permitted: evidence_t2_permitted.predicted_delta() == delta,
        quick_checks: quick_checks_in(&ctx, cdim_gx),
    })
}
