//! Pure-state tensor algebra: amplitudes, partial traces, purity.
//!
//! # Qubit ordering convention
//!
//! Qubit 0 (party A) is the **most significant bit** of the basis index;
//! parties B, C, D, ... follow in significance order. The basis label read
//! left to right is therefore the binary expansion of the index:
//! `|0110⟩` is index 6, its leftmost character belongs to party A.
//!
//! Subset masks use the opposite, conventional packing: bit `i` of a
//! [`QubitSubset`] mask is set when qubit `i` is in the subset, so qubit 0
//! is the mask's least significant bit. The two encodings never mix; all
//! translation happens through [`bit_position`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances;

/// Largest register size handled by the dense representation.
pub const MAX_QUBITS: usize = 8;

/// Basis-index bit position of `qubit` in an `n`-qubit register.
#[inline]
pub fn bit_position(n: usize, qubit: usize) -> usize {
    n - 1 - qubit
}

/// A subset of qubit indices packed as a bitmask (bit `i` set ⇔ qubit `i`
/// in the subset).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitSubset {
    mask: u16,
}

impl QubitSubset {
    pub fn from_mask(mask: u16) -> Self {
        QubitSubset { mask }
    }

    pub fn from_qubits(qubits: &[usize]) -> Self {
        let mut mask = 0u16;
        for &q in qubits {
            mask |= 1 << q;
        }
        QubitSubset { mask }
    }

    pub fn mask(&self) -> u16 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, qubit: usize) -> bool {
        self.mask & (1 << qubit) != 0
    }

    pub fn complement(&self, n: usize) -> Self {
        QubitSubset {
            mask: !self.mask & ((1 << n) - 1),
        }
    }

    /// Qubit indices in ascending order.
    pub fn qubits(&self) -> Vec<usize> {
        (0..16).filter(|&q| self.contains(q)).collect()
    }

    fn check_in_register(&self, n: usize) -> Result<()> {
        if self.mask >> n != 0 {
            return Err(Error::SubsetOutOfRange { mask: self.mask, n });
        }
        Ok(())
    }
}

/// A normalized pure state of `n` qubits as `2^n` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, renormalizing any nonzero vector.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::build(n_qubits, amplitudes, false)
    }

    /// Builds a state from raw amplitudes, rejecting vectors whose norm
    /// deviates from 1 by [`tolerances::NORM_INPUT`] or more.
    pub fn from_amplitudes_strict(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::build(n_qubits, amplitudes, true)
    }

    fn build(n_qubits: usize, mut amplitudes: Vec<Complex64>, strict: bool) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::UnsupportedSize {
                n: n_qubits,
                min: 1,
                max: MAX_QUBITS,
            });
        }
        let dim = 1usize << n_qubits;
        if amplitudes.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: amplitudes.len(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq == 0.0 {
            return Err(Error::ZeroVector);
        }
        let norm = norm_sq.sqrt();
        let deviation = (norm - 1.0).abs();
        if strict && deviation >= tolerances::NORM_INPUT {
            return Err(Error::NormOutOfTolerance { norm, deviation });
        }
        if deviation > 0.0 {
            let inv = 1.0 / norm;
            for a in amplitudes.iter_mut() {
                *a *= inv;
            }
        }
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// The computational basis state `|index⟩`.
    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::UnsupportedSize {
                n: n_qubits,
                min: 1,
                max: MAX_QUBITS,
            });
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: index,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Reduced density matrix on `keep`, tracing out the complement.
    ///
    /// Works by direct index arithmetic on the amplitude vector; the full
    /// `2^n × 2^n` projector is never materialized. The first kept qubit
    /// (lowest index, i.e. earliest party) is the most significant bit of
    /// the reduced basis, consistent with the register convention.
    pub fn reduced_density(&self, keep: QubitSubset) -> Result<DensityMatrix> {
        let n = self.n_qubits;
        keep.check_in_register(n)?;
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        if keep.len() == n {
            return Err(Error::FullSubset);
        }

        let kept_positions: Vec<usize> = keep.qubits().iter().map(|&q| bit_position(n, q)).collect();
        let env_positions: Vec<usize> = keep
            .complement(n)
            .qubits()
            .iter()
            .map(|&q| bit_position(n, q))
            .collect();

        let k = kept_positions.len();
        let dk = 1usize << k;
        let de = 1usize << env_positions.len();

        // Scatter a compact index into its register bit positions. Position
        // lists are ascending in qubit index, hence descending in bit
        // position, so compact bit (len-1-j) maps to positions[j].
        let scatter = |positions: &[usize], compact: usize| -> usize {
            let mut full = 0usize;
            for (j, &p) in positions.iter().enumerate() {
                let bit = (compact >> (positions.len() - 1 - j)) & 1;
                full |= bit << p;
            }
            full
        };

        let kept_index: Vec<usize> = (0..dk).map(|r| scatter(&kept_positions, r)).collect();
        let env_index: Vec<usize> = (0..de).map(|e| scatter(&env_positions, e)).collect();

        let mut entries = vec![Complex64::new(0.0, 0.0); dk * dk];
        for r in 0..dk {
            for c in 0..dk {
                let mut acc = Complex64::new(0.0, 0.0);
                for &env in &env_index {
                    let a = self.amplitudes[kept_index[r] | env];
                    let b = self.amplitudes[kept_index[c] | env];
                    acc += a * b.conj();
                }
                entries[r * dk + c] = acc;
            }
        }
        Ok(DensityMatrix {
            n_qubits: k,
            entries,
        })
    }

    /// Tensor product with `self`'s qubits more significant.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let total = self.n_qubits + other.n_qubits;
        if total > MAX_QUBITS {
            return Err(Error::SizeOverflow { total });
        }
        let dim_other = other.dim();
        let mut amplitudes = Vec::with_capacity(self.dim() * dim_other);
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(StateVector {
            n_qubits: total,
            amplitudes,
        })
    }

    /// Relabels qubits: input qubit `i` becomes output qubit `perm[i]`.
    ///
    /// Pure amplitude permutation, no arithmetic, so a permutation followed
    /// by its inverse is the exact identity.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<StateVector> {
        let n = self.n_qubits;
        let valid = perm.len() == n && {
            let mut seen = vec![false; n];
            perm.iter().all(|&p| p < n && !std::mem::replace(&mut seen[p], true))
        };
        if !valid {
            return Err(Error::InvalidPermutation {
                perm: perm.to_vec(),
                n,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (index, &amp) in self.amplitudes.iter().enumerate() {
            let mut target = 0usize;
            for (i, &p) in perm.iter().enumerate() {
                let bit = (index >> bit_position(n, i)) & 1;
                target |= bit << bit_position(n, p);
            }
            amplitudes[target] = amp;
        }
        Ok(StateVector {
            n_qubits: n,
            amplitudes,
        })
    }

    /// Applies a 2×2 unitary to one qubit, returning the new state.
    pub fn apply_single_qubit(&self, qubit: usize, u: &[[Complex64; 2]; 2]) -> Result<StateVector> {
        let n = self.n_qubits;
        if qubit >= n {
            return Err(Error::SubsetOutOfRange {
                mask: 1 << qubit,
                n,
            });
        }
        let pos = bit_position(n, qubit);
        let stride = 1usize << pos;
        let mut amplitudes = self.amplitudes.clone();
        for base in 0..self.dim() {
            if base & stride != 0 {
                continue;
            }
            let upper = base | stride;
            let a0 = self.amplitudes[base];
            let a1 = self.amplitudes[upper];
            amplitudes[base] = u[0][0] * a0 + u[0][1] * a1;
            amplitudes[upper] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ok(StateVector {
            n_qubits: n,
            amplitudes,
        })
    }
}

/// A density matrix on a small register, stored dense row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    /// `Tr(ρ²) = Σ |ρ_jk|²` for Hermitian ρ.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    /// Linear entropy `S_L = 1 − Tr(ρ²)`.
    pub fn linear_entropy(&self) -> f64 {
        1.0 - self.purity()
    }

    /// Largest elementwise deviation from Hermiticity.
    pub fn hermiticity_residual(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in r..dim {
                let d = (self.entry(r, c) - self.entry(c, r).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Checks the cheap structural invariants (Hermiticity, unit trace).
    /// Positivity is guaranteed by construction from pure states and is
    /// cross-checked against an eigenvalue oracle in the test suites.
    pub fn is_valid(&self) -> bool {
        self.hermiticity_residual() <= tolerances::DENSITY_RESIDUAL
            && (self.trace() - Complex64::new(1.0, 0.0)).norm() <= tolerances::DENSITY_RESIDUAL
    }
}

/// On-disk JSON form of a state: `{"n_qubits": n, "amplitudes": [[re, im], ...]}`
/// in basis-index order under the most-significant-qubit-first convention.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StateFile {
    pub n_qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &StateVector) -> Self {
        StateFile {
            n_qubits: state.n_qubits(),
            amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    /// Rebuilds the state, renormalizing under the lenient constructor rule.
    pub fn into_state(self) -> Result<StateVector> {
        let amplitudes = self
            .amplitudes
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        StateVector::from_amplitudes(self.n_qubits, amplitudes)
    }
}
