//! Centraliser dimension and centraliser lattices of free partially
//! commutative groups, computed from their commutation graphs.

pub mod centraliser;
pub mod error;
pub mod extension;
pub mod graph;
pub mod lattice;
pub mod parse;
pub mod scan;
pub mod word;

pub use centraliser::{
    a_of, block_decomposition, block_root_exponent, centraliser_of_element, commutes, root, BlockDecomposition,
    CentraliserDescription, CyclicPart, Membership,
};
pub use error::{Error, Result};
pub use extension::{
    classify_extension, enumerate_maximal_parameter_systems, is_parameter_system, partition_yw, quick_checks, Clause,
    ExtensionContext, ExtensionReport, LockTieReport, ParameterSystem, QuickChecks, Reading, SCase,
};
pub use graph::{CommutationGraph, Family, GeneratorSet, GraphId, VertexSet, CAPACITY};
pub use lattice::{brute_force_cdim, build_lattice, cdim, max_chain, CanonicalLattice, ClosedSet, MaxChain};
pub use parse::{parse_graph, GraphFormat};
pub use word::{factor_split, parse_letters, Letter, NormalForm};
