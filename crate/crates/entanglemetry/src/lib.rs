//! Bipartite concurrence profiles and planar geometric measures of genuine
//! multipartite entanglement for small pure qubit registers.
//!
//! The crate revolves around four-qubit pure states. Their seven bipartite
//! I-concurrences assemble into three quadrilaterals (one per two-to-two
//! cut, which acts as the pinned diagonal), and the geometric mean of the
//! six triangle areas gives the entanglement measures `F` (squared
//! concurrence sides) and `F1` (plain concurrence sides), normalized so
//! the four-qubit GHZ state scores exactly 1.
//!
//! Modules:
//!
//! * [`state`]: dense pure-state algebra (partial traces, purity, tensor
//!   products, qubit permutations),
//! * [`bipartition`]: canonical cuts, concurrences, profiles,
//! * [`geometry`]: stable triangle areas, inequality margins,
//!   quadrilateral assembly with planar coordinates,
//! * [`measures`]: `F`, `F1`, the three-qubit concurrence fill, and
//!   separability classification,
//! * [`catalog`]: named benchmark states, parametric families, seeded
//!   ensembles,
//! * [`verify`]: reproducible constraint-checking campaigns over
//!   ensembles,
//! * [`kets`]: Dirac-notation parsing and printing,
//! * [`report`]: versioned JSON envelopes and SVG export.

pub mod bipartition;
pub mod catalog;
pub mod error;
pub mod geometry;
pub mod kets;
pub mod measures;
pub mod report;
pub mod state;
pub mod tolerances;
pub mod verify;

pub use bipartition::{
    concurrence, concurrence_squared, enumerate_bipartitions, profile, schmidt_weight_from_squared,
    squared_from_schmidt_weight, Bipartition, BipartitionKind, ConcurrenceProfile,
};
pub use error::{Error, Result};
pub use geometry::{
    build_quadrilateral, heron_area, polygon_margin, strictness_margins, sum_of_three_margin,
    triangle_margins, QuadrilateralGeometry, TriangleSides,
};
pub use measures::{
    classify_separability, concurrence_fill_3q, fill_report, gme_f, gme_f1, gme_report,
    FillReport, GmeReport, SeparabilityClass, NORMALIZATION,
};
pub use state::{DensityMatrix, QubitSubset, StateFile, StateVector, MAX_QUBITS};
pub use verify::{run_campaign, saturation_probe, CampaignConfig, CampaignResult, Check};
