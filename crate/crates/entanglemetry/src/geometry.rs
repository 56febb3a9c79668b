//! Triangle and quadrilateral geometry over concurrence profiles.
//!
//! Every four-qubit pure state yields three quadrilaterals, one per
//! two-to-two cut: the four one-to-rest (squared) concurrences are the
//! sides and the two-to-two (squared) concurrence is the diagonal, pinning
//! the shape. Each quadrilateral splits into two triangles sharing the
//! diagonal; their areas feed the entanglement measures.
//!
//! Areas come from a numerically stable Heron evaluation: with the sides
//! sorted `a ≥ b ≥ c`, the radicand is computed as
//! `(a+(b+c)) (c−(a−b)) (c+(a−b)) (a+(b−c))` so near-degenerate triangles
//! lose no precision to cancellation, and a tiny negative radicand from
//! rounding is clamped to zero instead of producing NaN.

use crate::bipartition::{Bipartition, BipartitionKind, ConcurrenceProfile};
use crate::error::{Error, Result};
use crate::tolerances;

/// Three side lengths with the bipartition labels they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleSides {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub labels: [String; 3],
}

impl TriangleSides {
    pub fn new(a: f64, b: f64, c: f64, labels: [String; 3]) -> Self {
        TriangleSides { a, b, c, labels }
    }

    /// Smallest of the three triangle-inequality margins.
    pub fn min_margin(&self) -> f64 {
        let (a, b, c) = (self.a, self.b, self.c);
        (a + b - c).min(b + c - a).min(c + a - b)
    }
}

/// Stable Heron area. Sides are sorted internally, so the result is
/// bit-exact under any permutation of the inputs.
pub fn heron_area(t: &TriangleSides) -> Result<f64> {
    for &side in &[t.a, t.b, t.c] {
        if side < 0.0 {
            return Err(Error::NegativeSide { value: side });
        }
    }
    let margin = t.min_margin();
    if margin < tolerances::INEQUALITY_MARGIN {
        return Err(Error::TriangleViolation { margin });
    }
    let mut s = [t.a, t.b, t.c];
    s.sort_by(|x, y| y.partial_cmp(x).expect("sides are finite"));
    let [a, b, c] = s;
    // The smallest factor carries the degeneracy: for sides built as
    // c = a + b it lands within one rounding of zero, possibly positive.
    // Anything below the rounding floor of the largest side is a
    // degenerate triangle, and so is a tolerated negative radicand.
    let smallest = c - (a - b);
    if smallest <= 4.0 * f64::EPSILON * a {
        return Ok(0.0);
    }
    let radicand = (a + (b + c)) * smallest * (c + (a - b)) * (a + (b - c));
    if radicand <= 0.0 {
        return Ok(0.0);
    }
    Ok(0.25 * radicand.sqrt())
}

/// Polygon-inequality margin for `party`:
/// `Σ_{j≠i} C²_{j|rest} − C²_{i|rest}`, nonnegative for pure states.
pub fn polygon_margin(profile: &ConcurrenceProfile, party: usize) -> Result<f64> {
    require_four_qubits(profile)?;
    let squared = profile.one_to_rest_squared();
    let rest: f64 = squared
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != party)
        .map(|(_, &v)| v)
        .sum();
    Ok(rest - squared[party])
}

/// The ordered parties of a two-to-two diagonal: the pair on the canonical
/// side, then the complementary pair, both ascending.
pub fn diagonal_pairs(diag: &Bipartition) -> Result<([usize; 2], [usize; 2])> {
    if diag.kind() != BipartitionKind::TwoToTwo {
        return Err(Error::NotTwoToTwo { cut: diag.label() });
    }
    let first = diag.side_a().qubits();
    let second = diag.complement().qubits();
    Ok(([first[0], first[1]], [second[0], second[1]]))
}

/// Triangle-inequality margins for both halves of the quadrilateral on
/// `diag`. For the pair `{i, j}` sharing the diagonal `d` the triple is
/// `(xᵢ + xⱼ − x_d, x_d + xᵢ − xⱼ, x_d + xⱼ − xᵢ)` where `x` is the squared
/// concurrence, or the plain concurrence when `use_squared` is false.
pub fn triangle_margins(
    profile: &ConcurrenceProfile,
    diag: &Bipartition,
    use_squared: bool,
) -> Result<([f64; 3], [f64; 3])> {
    require_four_qubits(profile)?;
    let (first, second) = diagonal_pairs(diag)?;
    let d = side_value(profile.get(diag).expect("diagonal in profile"), use_squared);
    let margins = |pair: [usize; 2]| -> [f64; 3] {
        let x = side_value(profile.one_to_rest(pair[0]), use_squared);
        let y = side_value(profile.one_to_rest(pair[1]), use_squared);
        [x + y - d, d + x - y, d + y - x]
    };
    Ok((margins(first), margins(second)))
}

fn side_value(entry: &crate::bipartition::ProfileEntry, use_squared: bool) -> f64 {
    if use_squared {
        entry.squared
    } else {
        entry.concurrence
    }
}

fn require_four_qubits(profile: &ConcurrenceProfile) -> Result<()> {
    if profile.n_qubits() != 4 {
        return Err(Error::UnsupportedSize {
            n: profile.n_qubits(),
            min: 4,
            max: 4,
        });
    }
    Ok(())
}

/// A quadrilateral pinned by its diagonal, with planar coordinates.
///
/// The diagonal runs from `(0, 0)` to `(d, 0)`; the apex of the first
/// triangle (parties `side_parties[0..2]`) sits on or above the axis, the
/// apex of the second below. Vertices are ordered around the perimeter:
/// `(0,0)`, first apex, `(d, 0)`, second apex.
#[derive(Debug, Clone)]
pub struct QuadrilateralGeometry {
    pub diagonal_cut: Bipartition,
    /// Parties in side order `(i, j, k, l)`: `{i, j}` is the canonical side
    /// of the diagonal, `{k, l}` the complement.
    pub side_parties: [usize; 4],
    /// Side lengths in the same order (perimeter walk `i, j, k, l`).
    pub side_lengths: [f64; 4],
    pub diagonal: f64,
    pub triangle_1: TriangleSides,
    pub triangle_2: TriangleSides,
    pub area_1: f64,
    pub area_2: f64,
    pub vertices: [[f64; 2]; 4],
    /// A half is degenerate when its area vanishes or one of its cuts is
    /// separable at the zero-concurrence threshold.
    pub degenerate: [bool; 2],
}

/// Builds the quadrilateral for `diag` from a four-qubit profile.
pub fn build_quadrilateral(
    profile: &ConcurrenceProfile,
    diag: &Bipartition,
    use_squared: bool,
) -> Result<QuadrilateralGeometry> {
    require_four_qubits(profile)?;
    let (first, second) = diagonal_pairs(diag)?;
    let diag_entry = profile.get(diag).expect("diagonal in profile");
    let d = side_value(diag_entry, use_squared);

    let party_label = |p: usize| profile.one_to_rest(p).cut.label();
    let side = |p: usize| side_value(profile.one_to_rest(p), use_squared);

    let triangle_1 = TriangleSides::new(
        side(first[0]),
        side(first[1]),
        d,
        [party_label(first[0]), party_label(first[1]), diag.label()],
    );
    let triangle_2 = TriangleSides::new(
        side(second[0]),
        side(second[1]),
        d,
        [party_label(second[0]), party_label(second[1]), diag.label()],
    );
    let area_1 = heron_area(&triangle_1)?;
    let area_2 = heron_area(&triangle_2)?;

    // Apex of a triangle with base (0,0)-(d,0), first side from the origin.
    let apex = |from_origin: f64, from_end: f64, sign: f64| -> [f64; 2] {
        if d <= tolerances::STRICT_MARGIN {
            // Zero diagonal collapses the figure onto the axis; the
            // triangle inequality forces from_origin ≈ from_end.
            return [sign * from_origin, 0.0];
        }
        let x = (from_origin * from_origin - from_end * from_end + d * d) / (2.0 * d);
        let y = (from_origin * from_origin - x * x).max(0.0).sqrt();
        [x, sign * y]
    };

    let v1 = apex(triangle_1.a, triangle_1.b, 1.0);
    let v3 = apex(triangle_2.b, triangle_2.a, -1.0);
    let vertices = [[0.0, 0.0], v1, [d, 0.0], [v3[0], if d <= tolerances::STRICT_MARGIN { 0.0 } else { v3[1] }]];

    let is_degenerate = |t: &TriangleSides, area: f64, parties: [usize; 2]| {
        area == 0.0
            || parties
                .iter()
                .any(|&p| profile.one_to_rest(p).concurrence < tolerances::ZERO_CONCURRENCE)
            || diag_entry.concurrence < tolerances::ZERO_CONCURRENCE
            || t.min_margin() < 0.0
    };
    let degenerate = [
        is_degenerate(&triangle_1, area_1, first),
        is_degenerate(&triangle_2, area_2, second),
    ];

    Ok(QuadrilateralGeometry {
        diagonal_cut: *diag,
        side_parties: [first[0], first[1], second[0], second[1]],
        side_lengths: [
            triangle_1.a,
            triangle_1.b,
            triangle_2.a,
            triangle_2.b,
        ],
        diagonal: d,
        triangle_1,
        triangle_2,
        area_1,
        area_2,
        vertices,
        degenerate,
    })
}

/// Mirror placement for the second apex: its first side (`k`) meets the
/// diagonal's far endpoint and its second side (`l`) returns to the origin,
/// so the perimeter walk `(0,0) → apex₁ → (d,0) → apex₂ → (0,0)` traverses
/// sides `i, j, k, l` in order.
impl QuadrilateralGeometry {
    /// Checks that the exported vertices reproduce the declared side
    /// lengths; returns the worst absolute deviation.
    pub fn vertex_residual(&self) -> f64 {
        let dist = |p: [f64; 2], q: [f64; 2]| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
        let [v0, v1, v2, v3] = self.vertices;
        let walk = [
            dist(v0, v1) - self.side_lengths[0],
            dist(v1, v2) - self.side_lengths[1],
            dist(v2, v3) - self.side_lengths[2],
            dist(v3, v0) - self.side_lengths[3],
            dist(v0, v2) - self.diagonal,
        ];
        walk.iter().fold(0.0f64, |m, r| m.max(r.abs()))
    }
}

/// Which inequality an [`InequalityReport`] refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InequalityKind {
    /// Polygon inequality for one party's one-to-rest cut.
    Polygon(usize),
    /// Triangle inequality `(diagonal label, half, index 0..3)`.
    Triangle(String, u8, u8),
    /// Strict upper bound: sum of two sides exceeds the diagonal.
    StrictSum(String, u8),
    /// Strict lower bound: the diagonal exceeds the side difference.
    StrictDiff(String, u8),
    /// Sharpened subadditivity margin in linear-entropy units.
    SharpenedSubadditivity(String, u8),
    /// One one-to-rest squared concurrence against the sum of the others.
    SumOfThree(usize),
}

/// A single evaluated inequality: nonnegative margin means satisfied.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub kind: InequalityKind,
    pub margin: f64,
    /// Whether the strict (`> 1e-12`) bar applied; false means the
    /// inequality was only held to the tolerance band, for instance when a
    /// vanishing concurrence legitimately allows saturation.
    pub strict: bool,
    pub satisfied: bool,
}

/// Evaluates the strictness claims on `diag`: for each half, the sum bound
/// `C²ᵢ + C²ⱼ − C²_d`, the difference bound `C²_d − |C²ᵢ − C²ⱼ|`, and the
/// sharpened subadditivity margin
/// `Sᵢ + Sⱼ − 2(1−√(1−Sᵢ))(1−√(1−Sⱼ)) − S_d` with `S = C²/2`.
///
/// The first two are strict (margin must exceed `1e-12`) only when all
/// three concurrences involved exceed `zero_threshold`; saturation is
/// allowed when one vanishes.
pub fn strictness_margins(
    profile: &ConcurrenceProfile,
    diag: &Bipartition,
    zero_threshold: f64,
) -> Result<Vec<InequalityReport>> {
    require_four_qubits(profile)?;
    let (first, second) = diagonal_pairs(diag)?;
    let diag_entry = profile.get(diag).expect("diagonal in profile");
    let mut reports = Vec::with_capacity(6);

    for (half, pair) in [(1u8, first), (2u8, second)] {
        let ei = profile.one_to_rest(pair[0]);
        let ej = profile.one_to_rest(pair[1]);
        let strict = ei.concurrence > zero_threshold
            && ej.concurrence > zero_threshold
            && diag_entry.concurrence > zero_threshold;

        let sum_margin = ei.squared + ej.squared - diag_entry.squared;
        let diff_margin = diag_entry.squared - (ei.squared - ej.squared).abs();

        let s_i = ei.squared / 2.0;
        let s_j = ej.squared / 2.0;
        let s_d = diag_entry.squared / 2.0;
        let sharp_rhs =
            s_i + s_j - 2.0 * (1.0 - (1.0 - s_i).max(0.0).sqrt()) * (1.0 - (1.0 - s_j).max(0.0).sqrt());
        let sharp_margin = sharp_rhs - s_d;

        let judge = |margin: f64, strict: bool| {
            if strict {
                margin > tolerances::STRICT_MARGIN
            } else {
                margin >= tolerances::INEQUALITY_MARGIN
            }
        };
        reports.push(InequalityReport {
            kind: InequalityKind::StrictSum(diag.label(), half),
            margin: sum_margin,
            strict,
            satisfied: judge(sum_margin, strict),
        });
        reports.push(InequalityReport {
            kind: InequalityKind::StrictDiff(diag.label(), half),
            margin: diff_margin,
            strict,
            satisfied: judge(diff_margin, strict),
        });
        reports.push(InequalityReport {
            kind: InequalityKind::SharpenedSubadditivity(diag.label(), half),
            margin: sharp_margin,
            strict: false,
            satisfied: sharp_margin >= tolerances::INEQUALITY_MARGIN,
        });
    }
    Ok(reports)
}

/// `|C²_{i|rest} − Σ_{j≠i} C²_{j|rest}|`. Bounded away from zero whenever
/// at least three one-to-rest squared concurrences are nonzero; vacuous
/// otherwise.
pub fn sum_of_three_margin(profile: &ConcurrenceProfile, party: usize) -> Result<f64> {
    Ok(polygon_margin(profile, party)?.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartition::profile;
    use crate::state::{QubitSubset, StateVector};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn labels() -> [String; 3] {
        ["a".into(), "b".into(), "c".into()]
    }

    fn ghz(n: usize) -> StateVector {
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[0] = c(1.0, 0.0);
        amps[(1 << n) - 1] = c(1.0, 0.0);
        StateVector::from_amplitudes(n, amps).unwrap()
    }

    fn w4() -> StateVector {
        let mut amps = vec![c(0.0, 0.0); 16];
        for i in [1usize, 2, 4, 8] {
            amps[i] = c(0.5, 0.0);
        }
        StateVector::from_amplitudes(4, amps).unwrap()
    }

    fn bell_x_bell() -> StateVector {
        let bell = StateVector::from_amplitudes(
            2,
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        bell.tensor(&bell).unwrap()
    }

    fn diag(label_mask: u16) -> Bipartition {
        Bipartition::new(4, QubitSubset::from_mask(label_mask)).unwrap()
    }

    #[test]
    fn heron_examples() {
        let eq = heron_area(&TriangleSides::new(1.0, 1.0, 1.0, labels())).unwrap();
        assert!((eq - 3f64.sqrt() / 4.0).abs() < 1e-15);

        let collinear = heron_area(&TriangleSides::new(1.0, 1.0, 2.0, labels())).unwrap();
        assert_eq!(collinear, 0.0);

        let w = heron_area(&TriangleSides::new(0.75, 0.75, 1.0, labels())).unwrap();
        assert!((w - 0.2795084971874737).abs() < 1e-15);
    }

    #[test]
    fn heron_errors() {
        assert!(matches!(
            heron_area(&TriangleSides::new(-0.1, 1.0, 1.0, labels())),
            Err(Error::NegativeSide { .. })
        ));
        assert!(matches!(
            heron_area(&TriangleSides::new(1.0, 1.0, 2.5, labels())),
            Err(Error::TriangleViolation { .. })
        ));
    }

    #[test]
    fn polygon_margins() {
        let g = profile(&ghz(4)).unwrap();
        assert!((polygon_margin(&g, 0).unwrap() - 2.0).abs() < 1e-12);

        let sep = profile(
            &StateVector::basis_state(1, 0)
                .unwrap()
                .tensor(&ghz(3))
                .unwrap(),
        )
        .unwrap();
        assert!((polygon_margin(&sep, 0).unwrap() - 3.0).abs() < 1e-12);

        let w = profile(&w4()).unwrap();
        assert!((polygon_margin(&w, 0).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn triangle_margin_examples() {
        let g = profile(&ghz(4)).unwrap();
        let (m1, m2) = triangle_margins(&g, &diag(0b0011), true).unwrap();
        for m in m1.iter().chain(m2.iter()) {
            assert!((m - 1.0).abs() < 1e-12);
        }

        let bb = profile(&bell_x_bell()).unwrap();
        let (m1, _) = triangle_margins(&bb, &diag(0b0011), true).unwrap();
        assert!((m1[0] - 2.0).abs() < 1e-12);
        assert!(m1[1].abs() < 1e-12);
        assert!(m1[2].abs() < 1e-12);

        let w = profile(&w4()).unwrap();
        let (m1, _) = triangle_margins(&w, &diag(0b0011), true).unwrap();
        assert!((m1[0] - 0.5).abs() < 1e-12);
        assert!((m1[1] - 1.0).abs() < 1e-12);
        assert!((m1[2] - 1.0).abs() < 1e-12);

        let not_diag = Bipartition::new(4, QubitSubset::from_qubits(&[0])).unwrap();
        assert!(matches!(
            triangle_margins(&g, &not_diag, true),
            Err(Error::NotTwoToTwo { .. })
        ));
    }

    #[test]
    fn ghz_quadrilateral() {
        let g = profile(&ghz(4)).unwrap();
        let q = build_quadrilateral(&g, &diag(0b0011), true).unwrap();
        let t = 3f64.sqrt() / 4.0;
        assert!((q.area_1 - t).abs() < 1e-14);
        assert!((q.area_2 - t).abs() < 1e-14);
        assert_eq!(q.degenerate, [false, false]);
        assert!(q.vertex_residual() < 1e-12);
        assert!(q.vertices[1][1] > 0.0);
        assert!(q.vertices[3][1] < 0.0);
    }

    #[test]
    fn separated_party_degenerates_one_half() {
        let state = StateVector::basis_state(1, 0)
            .unwrap()
            .tensor(&ghz(3))
            .unwrap();
        let p = profile(&state).unwrap();
        let q = build_quadrilateral(&p, &diag(0b0011), true).unwrap();
        // Side A vanishes: its half collapses, side B equals the diagonal.
        assert_eq!(q.area_1, 0.0);
        assert!(q.degenerate[0]);
        assert!(!q.degenerate[1]);
        assert!((q.triangle_1.b - q.diagonal).abs() < 1e-12);
        assert!(q.area_2 > 0.1);
    }

    #[test]
    fn zero_diagonal_collapses_to_a_line() {
        let p = profile(&bell_x_bell()).unwrap();
        let q = build_quadrilateral(&p, &diag(0b0011), true).unwrap();
        assert!(q.diagonal < 1e-12);
        assert_eq!(q.degenerate, [true, true]);
        for v in q.vertices {
            assert_eq!(v[1], 0.0);
        }
    }

    #[test]
    fn strictness_examples() {
        let g = profile(&ghz(4)).unwrap();
        for r in strictness_margins(&g, &diag(0b0011), 1e-7).unwrap() {
            assert!(r.satisfied, "{:?}", r);
            if let InequalityKind::StrictSum(..) = r.kind {
                assert!((r.margin - 1.0).abs() < 1e-12);
                assert!(r.strict);
            }
        }

        let sep = profile(
            &StateVector::basis_state(1, 0)
                .unwrap()
                .tensor(&ghz(3))
                .unwrap(),
        )
        .unwrap();
        let reports = strictness_margins(&sep, &diag(0b0011), 1e-7).unwrap();
        let sum_first = reports
            .iter()
            .find(|r| r.kind == InequalityKind::StrictSum("AB|CD".into(), 1))
            .unwrap();
        assert!(sum_first.margin.abs() < 1e-12);
        assert!(!sum_first.strict);
        assert!(sum_first.satisfied);
    }

    #[test]
    fn sum_of_three_examples() {
        let g = profile(&ghz(4)).unwrap();
        assert!((sum_of_three_margin(&g, 0).unwrap() - 2.0).abs() < 1e-12);

        let w = profile(&w4()).unwrap();
        assert!((sum_of_three_margin(&w, 0).unwrap() - 1.5).abs() < 1e-12);

        let product = StateVector::basis_state(4, 0).unwrap();
        let p = profile(&product).unwrap();
        assert!(sum_of_three_margin(&p, 0).unwrap() < 1e-12);
        assert_eq!(p.one_to_rest_nonzero(1e-7), 0);
    }

    fn arb_state(n: usize) -> impl Strategy<Value = StateVector> {
        let dim = 1usize << n;
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim..=dim)
            .prop_filter("norm too small", |v| {
                v.iter().map(|(re, im)| re * re + im * im).sum::<f64>() > 1e-3
            })
            .prop_map(move |v| {
                StateVector::from_amplitudes(n, v.into_iter().map(|(re, im)| c(re, im)).collect())
                    .unwrap()
            })
    }

    proptest! {
        #[test]
        fn heron_is_permutation_invariant(a in 0.1f64..2.0, b in 0.1f64..2.0) {
            // Build a valid third side, then compare all orderings bit-exactly.
            let cc = (a - b).abs() + 0.8 * (a.min(b));
            let base = heron_area(&TriangleSides::new(a, b, cc, labels())).unwrap();
            for (x, y, z) in [(a, cc, b), (b, a, cc), (b, cc, a), (cc, a, b), (cc, b, a)] {
                let v = heron_area(&TriangleSides::new(x, y, z, labels())).unwrap();
                prop_assert!(v.to_bits() == base.to_bits());
            }
        }

        #[test]
        fn degenerate_heron_is_exactly_zero(a in 0.1f64..2.0, b in 0.1f64..2.0) {
            let v = heron_area(&TriangleSides::new(a, b, a + b, labels())).unwrap();
            prop_assert_eq!(v, 0.0);
        }

        #[test]
        fn pure_states_satisfy_all_margins(state in arb_state(4)) {
            let p = profile(&state).unwrap();
            for party in 0..4 {
                prop_assert!(polygon_margin(&p, party).unwrap() >= tolerances::INEQUALITY_MARGIN);
            }
            for entry in p.two_to_two() {
                for use_squared in [true, false] {
                    let (m1, m2) = triangle_margins(&p, &entry.cut, use_squared).unwrap();
                    for m in m1.iter().chain(m2.iter()) {
                        prop_assert!(*m >= tolerances::INEQUALITY_MARGIN);
                    }
                }
            }
        }

        #[test]
        fn vertices_reproduce_side_lengths(state in arb_state(4)) {
            let p = profile(&state).unwrap();
            for entry in p.two_to_two() {
                for use_squared in [true, false] {
                    let q = build_quadrilateral(&p, &entry.cut, use_squared).unwrap();
                    prop_assert!(q.vertex_residual() < tolerances::VERTEX_RECONSTRUCTION);
                }
            }
        }
    }
}
