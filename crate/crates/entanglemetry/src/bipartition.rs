//! Canonical bipartitions, I-concurrences, and full concurrence profiles.
//!
//! A bipartition splits the register into two complementary nonempty
//! subsets. The canonical representative is the side containing qubit 0,
//! so `AB|CD` and `CD|AB` are one entry; pure-state purity symmetry makes
//! their concurrences equal anyway. The I-concurrence across a cut is
//! `C = √(2(1 − Tr ρ²))` with ρ the reduced state of either side.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{QubitSubset, StateVector, MAX_QUBITS};
use crate::tolerances;

/// Cut shape: one qubit against the rest, a balanced two-against-two
/// four-qubit cut, or anything else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BipartitionKind {
    OneToRest,
    TwoToTwo,
    Other,
}

/// A canonical bipartition of an `n`-qubit register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bipartition {
    n_qubits: usize,
    side_a: QubitSubset,
}

impl Bipartition {
    /// Canonicalizes `side` (flipping to its complement if it does not
    /// contain qubit 0) and validates it as a proper nonempty subset.
    pub fn new(n_qubits: usize, side: QubitSubset) -> Result<Self> {
        if !(2..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::UnsupportedSize {
                n: n_qubits,
                min: 2,
                max: MAX_QUBITS,
            });
        }
        if side.mask() >> n_qubits != 0 {
            return Err(Error::SubsetOutOfRange {
                mask: side.mask(),
                n: n_qubits,
            });
        }
        if side.is_empty() {
            return Err(Error::EmptySubset);
        }
        if side.len() == n_qubits {
            return Err(Error::FullSubset);
        }
        let side_a = if side.contains(0) {
            side
        } else {
            side.complement(n_qubits)
        };
        Ok(Bipartition { n_qubits, side_a })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// The canonical side (always contains qubit 0).
    pub fn side_a(&self) -> QubitSubset {
        self.side_a
    }

    pub fn complement(&self) -> QubitSubset {
        self.side_a.complement(self.n_qubits)
    }

    /// The side with fewer qubits; ties go to the canonical side.
    pub fn smaller_side(&self) -> QubitSubset {
        if self.side_a.len() * 2 <= self.n_qubits {
            self.side_a
        } else {
            self.complement()
        }
    }

    pub fn kind(&self) -> BipartitionKind {
        let k = self.side_a.len().min(self.n_qubits - self.side_a.len());
        if k == 1 {
            BipartitionKind::OneToRest
        } else if self.n_qubits == 4 && k == 2 {
            BipartitionKind::TwoToTwo
        } else {
            BipartitionKind::Other
        }
    }

    /// For a one-to-rest cut, the index of the lone party.
    pub fn lone_party(&self) -> Option<usize> {
        match self.kind() {
            BipartitionKind::OneToRest => Some(self.smaller_side().qubits()[0]),
            _ => None,
        }
    }

    /// Display label, smaller side first: `"B|ACD"`, `"AB|CD"`.
    pub fn label(&self) -> String {
        let letters = |s: &QubitSubset| -> String {
            s.qubits().iter().map(|&q| (b'A' + q as u8) as char).collect()
        };
        let small = self.smaller_side();
        let large = small.complement(self.n_qubits);
        format!("{}|{}", letters(&small), letters(&large))
    }

    /// Maps this cut through a qubit relabeling (input qubit `i` becomes
    /// output qubit `perm[i]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Bipartition> {
        let qubits: Vec<usize> = self.side_a.qubits().iter().map(|&q| perm[q]).collect();
        Bipartition::new(self.n_qubits, QubitSubset::from_qubits(&qubits))
    }
}

/// All canonical bipartitions of an `n`-qubit register, in a fixed order:
/// by ascending smaller-side size, then ascending mask. For `n = 4` this is
/// `A|BCD, B|ACD, C|ABD, D|ABC, AB|CD, AC|BD, AD|BC`.
pub fn enumerate_bipartitions(n: usize) -> Result<Vec<Bipartition>> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(Error::UnsupportedSize { n, min: 2, max: MAX_QUBITS });
    }
    let mut cuts = Vec::new();
    for k in 1..=n / 2 {
        for mask in 1u16..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            // A balanced split is its own complement's partner; keep the
            // representative containing qubit 0.
            if 2 * k == n && mask & 1 == 0 {
                continue;
            }
            cuts.push(Bipartition::new(n, QubitSubset::from_mask(mask))?);
        }
    }
    debug_assert_eq!(cuts.len(), (1 << (n - 1)) - 1);
    Ok(cuts)
}

/// I-concurrence across `cut`: `√(2(1 − Tr ρ²))`, computed on the smaller
/// side. Clamped at zero against purity overshoot from rounding.
pub fn concurrence(state: &StateVector, cut: &Bipartition) -> Result<f64> {
    Ok(concurrence_squared(state, cut)?.sqrt())
}

/// Squared I-concurrence across `cut`.
pub fn concurrence_squared(state: &StateVector, cut: &Bipartition) -> Result<f64> {
    if state.n_qubits() != cut.n_qubits() {
        return Err(Error::SubsetOutOfRange {
            mask: cut.side_a().mask(),
            n: state.n_qubits(),
        });
    }
    let rho = state.reduced_density(cut.smaller_side())?;
    Ok((2.0 * (1.0 - rho.purity())).max(0.0))
}

/// Normalized Schmidt weight of a one-to-rest marginal: `Y = 1 − √(1 − C²)`.
///
/// Only defined for `C² ∈ [0, 1]`; two-to-two squared concurrences can
/// exceed 1 and must not be passed here.
pub fn schmidt_weight_from_squared(c2: f64) -> Result<f64> {
    if !(-tolerances::STRICT_MARGIN..=1.0 + tolerances::STRICT_MARGIN).contains(&c2) {
        return Err(Error::DomainError {
            value: c2,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let clamped = c2.clamp(0.0, 1.0);
    Ok(1.0 - (1.0 - clamped).sqrt())
}

/// Inverse map: `C²(Y) = Y(2 − Y)`, monotone increasing and concave on [0, 1].
pub fn squared_from_schmidt_weight(y: f64) -> Result<f64> {
    if !(-tolerances::STRICT_MARGIN..=1.0 + tolerances::STRICT_MARGIN).contains(&y) {
        return Err(Error::DomainError {
            value: y,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let clamped = y.clamp(0.0, 1.0);
    Ok(clamped * (2.0 - clamped))
}

/// One cut's entry in a concurrence profile.
#[derive(Debug, Clone)]
pub struct ProfileEntry {
    pub cut: Bipartition,
    pub concurrence: f64,
    pub squared: f64,
    /// Populated for one-to-rest cuts only; the Schmidt-weight machinery
    /// applies to single-qubit marginals.
    pub schmidt_weight: Option<f64>,
}

/// All bipartite concurrences of a 3- or 4-qubit pure state, in
/// enumeration order.
#[derive(Debug, Clone)]
pub struct ConcurrenceProfile {
    n_qubits: usize,
    entries: Vec<ProfileEntry>,
}

/// Computes the complete concurrence profile of a 3- or 4-qubit state.
pub fn profile(state: &StateVector) -> Result<ConcurrenceProfile> {
    let n = state.n_qubits();
    if n != 3 && n != 4 {
        return Err(Error::UnsupportedSize { n, min: 3, max: 4 });
    }
    let mut entries = Vec::new();
    for cut in enumerate_bipartitions(n)? {
        let squared = concurrence_squared(state, &cut)?;
        let schmidt_weight = match cut.kind() {
            BipartitionKind::OneToRest => Some(schmidt_weight_from_squared(squared.min(1.0))?),
            _ => None,
        };
        entries.push(ProfileEntry {
            cut,
            concurrence: squared.sqrt(),
            squared,
            schmidt_weight,
        });
    }
    Ok(ConcurrenceProfile { n_qubits: n, entries })
}

impl ConcurrenceProfile {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn entries(&self) -> &[ProfileEntry] {
        &self.entries
    }

    pub fn get(&self, cut: &Bipartition) -> Option<&ProfileEntry> {
        self.entries.iter().find(|e| e.cut == *cut)
    }

    /// Entry for the cut isolating `party` from the rest.
    pub fn one_to_rest(&self, party: usize) -> &ProfileEntry {
        self.entries
            .iter()
            .find(|e| e.cut.lone_party() == Some(party))
            .expect("profile holds every one-to-rest cut")
    }

    /// The two-to-two entries, in enumeration order (empty for 3 qubits).
    pub fn two_to_two(&self) -> impl Iterator<Item = &ProfileEntry> {
        self.entries
            .iter()
            .filter(|e| e.cut.kind() == BipartitionKind::TwoToTwo)
    }

    /// Squared concurrences of the one-to-rest cuts, indexed by party.
    pub fn one_to_rest_squared(&self) -> Vec<f64> {
        (0..self.n_qubits)
            .map(|p| self.one_to_rest(p).squared)
            .collect()
    }

    /// Number of one-to-rest cuts whose concurrence exceeds `threshold`.
    pub fn one_to_rest_nonzero(&self, threshold: f64) -> usize {
        (0..self.n_qubits)
            .filter(|&p| self.one_to_rest(p).concurrence > threshold)
            .count()
    }
}
