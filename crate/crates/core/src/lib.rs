//! Exact search, checkable certificates and probability bounds for the
//! (k, l)-rainbow index of complete bipartite and complete multipartite graphs.

pub mod bounds;
pub mod certificate;
pub mod graph;
pub mod index;
pub mod montecarlo;
pub mod packing;
pub mod ramsey;
mod parallel;
pub mod steiner;
pub mod symmetry;
pub mod tree;

pub use graph::{Coloring, Edge, GraphError, MultipartiteGraph, VertexId};
pub use steiner::{enumerate_rainbow_trees, enumerate_steiner_trees};
pub use tree::{is_rainbow, STree, TerminalSet, TreeError};
pub use packing::{has_l_packing, internally_disjoint, max_rainbow_packing, max_tree_packing, verify_packing, Packing, PackingError, PackingResult, Violation};
pub use certificate::{Certificate, CertificateError};
pub use index::{
    balanced_terminal_set, lower_bound_structural, max_small_tree_packing, packing_upper_bound, rx_exact, rx_exact_par,
    verify_coloring, verify_coloring_par, IndexError, RxResult, RxValue,
};
pub use bounds::{
    double_star_rainbow_prob, evaluate as evaluate_bound, find_threshold, star_rainbow_prob, union_success_bound, BoundCase,
    BoundKind, BoundReport, BoundsError, EvalScheme, Scope,
};
pub use montecarlo::{
    estimate_event, estimate_event_par, exact_probability, random_coloring, search_good_coloring, search_good_coloring_par, trial_rng, Event,
    McConfig, McError, McEstimate, SearchOutcome, Selector, SetCase,
};
pub use ramsey::{find_mono_biclique, refute_with_mono_biclique, Biclique, RamseyError, Refutation};
