//! Property scans over small graphs: every labeled graph up to
//! [`EXHAUSTIVE_MAX_N`] vertices, seeded random graphs above that.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::extension::ExtensionContext;
use crate::graph::{edge_pairs, CommutationGraph};
use crate::lattice::{brute_force_cdim, cdim, BRUTE_FORCE_LIMIT};

pub const EXHAUSTIVE_MAX_N: usize = 6;
pub const DEFAULT_SEED: u64 = 0x5eed_cd1a;
pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    ForbiddenDims,
    DeltaBound,
    Oracle,
    JoinF2,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::ForbiddenDims => "forbidden-dims",
            Check::DeltaBound => "delta-bound",
            Check::Oracle => "oracle",
            Check::JoinF2 => "joinf2",
        }
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Check> {
        match s {
            "forbidden-dims" => Ok(Check::ForbiddenDims),
            "delta-bound" => Ok(Check::DeltaBound),
            "oracle" => Ok(Check::Oracle),
            "joinf2" => Ok(Check::JoinF2),
            other => Err(Error::Precondition(format!("unknown scan check `{other}`"))),
        }
    }
}

/// Uniform random graph on `x1..xn`, each edge present with probability 1/2.
pub fn random_graph(n: usize, rng: &mut impl Rng) -> Result<CommutationGraph> {
    let edges: Vec<(usize, usize)> = edge_pairs(n).into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    CommutationGraph::new(names, &edges)
}

/// Every graph the scan visits, in a fixed order: all labeled graphs for
/// `n ≤ min(max_n, 6)` by mask, then `samples` random graphs for each larger
/// `n`, drawn from one generator seeded with `seed`.
pub fn scan_graphs(max_n: usize, seed: u64, samples: usize) -> Result<Vec<CommutationGraph>> {
    let mut out = Vec::new();
    for n in 1..=max_n.min(EXHAUSTIVE_MAX_N) {
        let pairs = edge_pairs(n).len();
        for mask in 0..(1u128 << pairs) {
            out.push(CommutationGraph::labeled(n, mask)?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in EXHAUSTIVE_MAX_N + 1..=max_n {
        for _ in 0..samples {
            out.push(random_graph(n, &mut rng)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub cdim: usize,
    /// Description of the violation, if any.
    pub violation: Option<String>,
}

pub fn check_graph(check: Check, g: &CommutationGraph) -> Result<Outcome> {
    let d = cdim(g);
    let violation = match check {
        Check::ForbiddenDims => (d == 1 || d == 3).then(|| format!("cdim = {d}")),
        Check::DeltaBound => {
            let mut bad = None;
            for x in 0..g.len() {
                let ctx = ExtensionContext::new(g, x)?;
                let dx = cdim(ctx.gx());
                if dx > d || d - dx > 2 {
                    bad = Some(format!("vertex {}: cdim {d} vs {dx} after deletion", g.name(x)));
                    break;
                }
            }
            bad
        }
        Check::Oracle => {
            if g.len() > BRUTE_FORCE_LIMIT {
                return Err(Error::SizeGuard { what: "oracle scan", limit: BRUTE_FORCE_LIMIT, got: g.len() });
            }
            let b = brute_force_cdim(g)?;
            (b != d).then(|| format!("lattice height {d}, brute force {b}"))
        }
        Check::JoinF2 => {
            let j = cdim(&g.join_free(2)?);
            (j != d + 2).then(|| format!("cdim {d}, after joining F2 {j}"))
        }
    };
    Ok(Outcome { cdim: d, violation })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub graphs: usize,
    /// `(graph, description)` for every violation, in scan order.
    pub counterexamples: Vec<(CommutationGraph, String)>,
    pub histogram: BTreeMap<usize, usize>,
}

impl Summary {
    /// Folds outcomes in scan order.
    pub fn collect<'a>(items: impl IntoIterator<Item = (&'a CommutationGraph, Outcome)>) -> Summary {
        let mut s = Summary::default();
        for (g, o) in items {
            s.graphs += 1;
            *s.histogram.entry(o.cdim).or_default() += 1;
            if let Some(v) = o.violation {
                s.counterexamples.push((g.clone(), v));
            }
        }
        s
    }
}

/// Sequential scan; the CLI runs the same checks in parallel.
pub fn scan(check: Check, max_n: usize, seed: u64, samples: usize) -> Result<Summary> {
    let graphs = scan_graphs(max_n, seed, samples)?;
    let outcomes = graphs.iter().map(|g| check_graph(check, g)).collect::<Result<Vec<_>>>()?;
    Ok(Summary::collect(graphs.iter().zip(outcomes)))
}
