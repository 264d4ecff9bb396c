//! Lattices, generating sets and the Golay code.

mod checks;
mod golay;
pub mod hnf;
mod spec;

pub use checks::{
    check_crossing_adjacency, check_slice_connectivity, crossing_adjacency_brute_force, hypothesis_report,
    slice_generation, verified_symmetries, CrossingResult, CrossingWitness, HypothesisReport, Mode,
    SliceCertificate, Theorem, Verdict,
};
pub use golay::{
    build_golay, dodecad_decomposition, golay, parse_generators, parse_word, word_bits, GolayCode, ICOSAHEDRON,
};
pub use spec::{
    bit, is_normalized, leech_contains, leech_minimal_vectors, leech_shape_counts, minimal_vectors,
    normalize_coordinates, span_index, standard_lattice, standard_spec, GenSet, LatticeKind, LatticeSpec, PNorm, Vector,
};
