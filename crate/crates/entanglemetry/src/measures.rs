//! Geometric measures of genuine multipartite entanglement.
//!
//! For a four-qubit pure state, each two-to-two cut pins a quadrilateral
//! whose two triangle halves have well-defined areas. `F` is the geometric
//! mean of the six areas scaled by `4/√3`, with squared concurrences as
//! side lengths; `F1` is the same construction with plain concurrences.
//! The scaling normalizes the four-qubit GHZ state to exactly 1, and both
//! measures vanish exactly on biseparable states because a separable cut
//! forces at least two of the six triangles degenerate.
//!
//! The three-qubit reduction of the same idea is the concurrence fill:
//! the normalized area of the triangle with the three squared one-to-rest
//! concurrences as sides, on the fourth root so the W state lands at 8/9.
//!
//! Measure evaluation ties into the separability classification: a
//! triangle whose cuts include one below the zero-concurrence threshold
//! has its area taken as exactly zero, so `F`/`F1`/fill vanish identically
//! on states classified separable instead of leaving rounding dust.

use serde::{Deserialize, Serialize};

use crate::bipartition::{profile, BipartitionKind, ConcurrenceProfile};
use crate::error::{Error, Result};
use crate::geometry::{build_quadrilateral, heron_area, TriangleSides};
use crate::tolerances;

/// Area scaling `4/√3` that normalizes GHZ₄ to 1.
pub const NORMALIZATION: f64 = 2.309_401_076_758_503;

/// The six concurrence triangles of a four-qubit profile, diagonal-major:
/// `(AB|CD, AC|BD, AD|BC) × (first pair, second pair)`.
pub fn six_triangles(
    profile: &ConcurrenceProfile,
    use_squared: bool,
) -> Result<[TriangleSides; 6]> {
    let diagonals: Vec<_> = profile.two_to_two().map(|e| e.cut).collect();
    if diagonals.len() != 3 {
        return Err(Error::UnsupportedSize {
            n: profile.n_qubits(),
            min: 4,
            max: 4,
        });
    }
    let mut out = Vec::with_capacity(6);
    for diag in &diagonals {
        let quad = build_quadrilateral(profile, diag, use_squared)?;
        out.push(quad.triangle_1);
        out.push(quad.triangle_2);
    }
    Ok(out.try_into().expect("exactly six triangles"))
}

/// The six triangle areas entering the measures, diagonal-major, with the
/// separability threshold applied: a triangle containing a cut whose
/// concurrence is below [`tolerances::ZERO_CONCURRENCE`] contributes
/// exactly zero area.
pub fn measure_areas(profile: &ConcurrenceProfile, use_squared: bool) -> Result<[f64; 6]> {
    let diagonals: Vec<_> = profile.two_to_two().map(|e| e.cut).collect();
    if diagonals.len() != 3 {
        return Err(Error::UnsupportedSize {
            n: profile.n_qubits(),
            min: 4,
            max: 4,
        });
    }
    let mut out = [0.0f64; 6];
    for (di, diag) in diagonals.iter().enumerate() {
        let quad = build_quadrilateral(profile, diag, use_squared)?;
        let diag_c = profile.get(diag).expect("diagonal in profile").concurrence;
        for (half, area) in [(0usize, quad.area_1), (1usize, quad.area_2)] {
            let parties = [quad.side_parties[2 * half], quad.side_parties[2 * half + 1]];
            let separable_cut = diag_c < tolerances::ZERO_CONCURRENCE
                || parties
                    .iter()
                    .any(|&p| profile.one_to_rest(p).concurrence < tolerances::ZERO_CONCURRENCE);
            out[2 * di + half] = if separable_cut { 0.0 } else { area };
        }
    }
    Ok(out)
}

/// Geometric mean of the six scaled triangle areas from `profile`.
///
/// Computed in log space; any zero area short-circuits to 0.
pub fn gme_from_profile(profile: &ConcurrenceProfile, use_squared: bool) -> Result<f64> {
    let areas = measure_areas(profile, use_squared)?;
    let mut log_sum = 0.0f64;
    for &area in &areas {
        let scaled = NORMALIZATION * area;
        if scaled == 0.0 {
            return Ok(0.0);
        }
        log_sum += scaled.ln();
    }
    Ok((log_sum / 6.0).exp())
}

/// `F`: squared-concurrence sides.
pub fn gme_f(state: &crate::state::StateVector) -> Result<f64> {
    gme_from_profile(&four_qubit_profile(state)?, true)
}

/// `F1`: plain-concurrence sides.
pub fn gme_f1(state: &crate::state::StateVector) -> Result<f64> {
    gme_from_profile(&four_qubit_profile(state)?, false)
}

fn four_qubit_profile(state: &crate::state::StateVector) -> Result<ConcurrenceProfile> {
    if state.n_qubits() != 4 {
        return Err(Error::UnsupportedSize {
            n: state.n_qubits(),
            min: 4,
            max: 4,
        });
    }
    profile(state)
}

/// Three-qubit concurrence fill from an already-computed profile.
pub fn fill_from_profile(profile: &ConcurrenceProfile) -> Result<f64> {
    if profile.n_qubits() != 3 {
        return Err(Error::UnsupportedSize {
            n: profile.n_qubits(),
            min: 3,
            max: 3,
        });
    }
    if profile
        .entries()
        .iter()
        .any(|e| e.concurrence < tolerances::ZERO_CONCURRENCE)
    {
        return Ok(0.0);
    }
    let triangle = fill_triangle(profile);
    Ok((NORMALIZATION * heron_area(&triangle)?).sqrt())
}

/// The fill triangle of a three-qubit profile: squared one-to-rest
/// concurrences as sides.
pub fn fill_triangle(profile: &ConcurrenceProfile) -> TriangleSides {
    fill_triangle_from_parties(profile, [0, 1, 2])
}

/// Fill triangle over three chosen parties of any profile. Used when a
/// four-qubit state factors out one party: the remaining three one-to-rest
/// squared concurrences are exactly the fill sides of the residual state.
pub fn fill_triangle_from_parties(
    profile: &ConcurrenceProfile,
    parties: [usize; 3],
) -> TriangleSides {
    let entry = |p: usize| profile.one_to_rest(p);
    TriangleSides::new(
        entry(parties[0]).squared,
        entry(parties[1]).squared,
        entry(parties[2]).squared,
        [
            entry(parties[0]).cut.label(),
            entry(parties[1]).cut.label(),
            entry(parties[2]).cut.label(),
        ],
    )
}

/// Concurrence fill of a three-qubit pure state. GHZ₃ maps to exactly 1,
/// any biseparable state to 0.
pub fn concurrence_fill_3q(state: &crate::state::StateVector) -> Result<f64> {
    if state.n_qubits() != 3 {
        return Err(Error::UnsupportedSize {
            n: state.n_qubits(),
            min: 3,
            max: 3,
        });
    }
    fill_from_profile(&profile(state)?)
}

/// Separability classification of a profile at the zero-concurrence
/// threshold. Carries the labels of every vanishing cut.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "cuts", rename_all = "snake_case")]
pub enum SeparabilityClass {
    GenuinelyEntangled,
    OneToThreeSeparable(Vec<String>),
    TwoToTwoSeparable(Vec<String>),
    FullyProduct,
}

/// Lists every cut with concurrence below the threshold and classifies.
pub fn classify_separability(profile: &ConcurrenceProfile) -> SeparabilityClass {
    let vanished: Vec<&crate::bipartition::ProfileEntry> = profile
        .entries()
        .iter()
        .filter(|e| e.concurrence < tolerances::ZERO_CONCURRENCE)
        .collect();
    if vanished.is_empty() {
        return SeparabilityClass::GenuinelyEntangled;
    }
    if vanished.len() == profile.entries().len() {
        return SeparabilityClass::FullyProduct;
    }
    let labels: Vec<String> = vanished.iter().map(|e| e.cut.label()).collect();
    if vanished
        .iter()
        .any(|e| e.cut.kind() == BipartitionKind::OneToRest)
    {
        SeparabilityClass::OneToThreeSeparable(labels)
    } else {
        SeparabilityClass::TwoToTwoSeparable(labels)
    }
}

/// One triangle row of a [`GmeReport`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TriangleReport {
    pub diagonal: String,
    /// 1 for the canonical pair of the diagonal, 2 for the complement.
    pub half: u8,
    /// Cut labels of the two sides and the diagonal.
    pub sides: [String; 3],
    pub sides_sq: [f64; 3],
    pub sides_c: [f64; 3],
    pub area_sq_mode: f64,
    pub area_c_mode: f64,
}

/// Full analysis of a four-qubit state: both measures, all six triangles
/// in both side conventions, and the separability classification.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GmeReport {
    pub f: f64,
    pub f1: f64,
    pub normalization: f64,
    pub triangles: Vec<TriangleReport>,
    pub class: SeparabilityClass,
    /// Per-triangle degeneracy flags, aligned with `triangles`.
    pub degenerate: Vec<bool>,
}

/// Builds the full report for a four-qubit state.
pub fn gme_report(state: &crate::state::StateVector) -> Result<GmeReport> {
    let prof = four_qubit_profile(state)?;
    let f = gme_from_profile(&prof, true)?;
    let f1 = gme_from_profile(&prof, false)?;
    let class = classify_separability(&prof);

    let mut triangles = Vec::with_capacity(6);
    let mut degenerate = Vec::with_capacity(6);
    let areas_sq = measure_areas(&prof, true)?;
    let areas_c = measure_areas(&prof, false)?;
    let diagonals: Vec<_> = prof.two_to_two().map(|e| e.cut).collect();
    for (di, diag) in diagonals.iter().enumerate() {
        let quad_sq = build_quadrilateral(&prof, diag, true)?;
        let quad_c = build_quadrilateral(&prof, diag, false)?;
        for (half, t_sq, t_c, degen) in [
            (1u8, &quad_sq.triangle_1, &quad_c.triangle_1, quad_sq.degenerate[0]),
            (2u8, &quad_sq.triangle_2, &quad_c.triangle_2, quad_sq.degenerate[1]),
        ] {
            let slot = 2 * di + (half as usize - 1);
            triangles.push(TriangleReport {
                diagonal: diag.label(),
                half,
                sides: t_sq.labels.clone(),
                sides_sq: [t_sq.a, t_sq.b, t_sq.c],
                sides_c: [t_c.a, t_c.b, t_c.c],
                area_sq_mode: areas_sq[slot],
                area_c_mode: areas_c[slot],
            });
            degenerate.push(degen);
        }
    }
    Ok(GmeReport {
        f,
        f1,
        normalization: NORMALIZATION,
        triangles,
        class,
        degenerate,
    })
}

/// Analysis of a three-qubit state: the concurrence fill and its triangle.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FillReport {
    pub fill: f64,
    pub sides: [String; 3],
    pub sides_sq: [f64; 3],
    pub area: f64,
    pub class: SeparabilityClass,
}

/// Builds the fill report for a three-qubit state.
pub fn fill_report(state: &crate::state::StateVector) -> Result<FillReport> {
    if state.n_qubits() != 3 {
        return Err(Error::UnsupportedSize {
            n: state.n_qubits(),
            min: 3,
            max: 3,
        });
    }
    let prof = profile(state)?;
    let fill = fill_from_profile(&prof)?;
    let triangle = fill_triangle(&prof);
    Ok(FillReport {
        fill,
        sides: triangle.labels.clone(),
        sides_sq: [triangle.a, triangle.b, triangle.c],
        area: fill * fill / NORMALIZATION,
        class: classify_separability(&prof),
    })
}
