//! Named benchmark states, parametric families, and seeded ensembles.
//!
//! Every sampler draw is keyed by `(master seed, sample index, stream)`
//! through a fresh ChaCha8 instance, so sample `k` of a spec is the same
//! bit pattern whether the ensemble is generated sequentially, in
//! parallel, or one state at a time.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{StateVector, MAX_QUBITS};

/// Primitive cube root of unity `ω = exp(2πi/3)`.
pub const OMEGA: Complex64 = Complex64::new(-0.5, 0.866_025_403_784_438_6);

/// `ω² = conj(ω)`.
pub const OMEGA2: Complex64 = Complex64::new(-0.5, -0.866_025_403_784_438_6);

/// Catalog of exactly-constructed benchmark states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedState {
    Ghz(usize),
    W(usize),
    Cluster4,
    HiguchiSudbery,
    BellPairProduct,
    Basis(String),
}

/// Parses a state name as accepted by the command line: `ghz3`, `ghz4`,
/// `w3`, `w4`, `cluster4`, `hs`, `bellxbell`, or `basis:BITS`.
pub fn parse_named(name: &str) -> Result<NamedState> {
    let lower = name.to_ascii_lowercase();
    if let Some(bits) = lower.strip_prefix("basis:") {
        return Ok(NamedState::Basis(bits.to_string()));
    }
    if let Some(n) = lower.strip_prefix("ghz") {
        if let Ok(n) = n.parse::<usize>() {
            return Ok(NamedState::Ghz(n));
        }
    }
    if let Some(n) = lower.strip_prefix('w') {
        if let Ok(n) = n.parse::<usize>() {
            return Ok(NamedState::W(n));
        }
    }
    match lower.as_str() {
        "cluster4" => Ok(NamedState::Cluster4),
        "hs" => Ok(NamedState::HiguchiSudbery),
        "bellxbell" => Ok(NamedState::BellPairProduct),
        _ => Err(Error::UnknownName {
            name: name.to_string(),
        }),
    }
}

/// Builds the exact amplitudes of a named state.
pub fn build_named(name: &NamedState) -> Result<StateVector> {
    let c = |re: f64| Complex64::new(re, 0.0);
    match name {
        NamedState::Ghz(n) => {
            check_range(*n)?;
            let mut amps = vec![c(0.0); 1 << n];
            amps[0] = c(1.0);
            amps[(1 << n) - 1] = c(1.0);
            StateVector::from_amplitudes(*n, amps)
        }
        NamedState::W(n) => {
            check_range(*n)?;
            let mut amps = vec![c(0.0); 1 << n];
            for k in 0..*n {
                amps[1 << k] = c(1.0);
            }
            StateVector::from_amplitudes(*n, amps)
        }
        NamedState::Cluster4 => {
            let mut amps = vec![c(0.0); 16];
            amps[0b0000] = c(0.5);
            amps[0b0011] = c(0.5);
            amps[0b1100] = c(0.5);
            amps[0b1111] = c(-0.5);
            StateVector::from_amplitudes(4, amps)
        }
        NamedState::HiguchiSudbery => {
            let r = 1.0 / 6f64.sqrt();
            let mut amps = vec![Complex64::new(0.0, 0.0); 16];
            amps[0b0011] = c(r);
            amps[0b1100] = c(r);
            amps[0b0101] = OMEGA * r;
            amps[0b1010] = OMEGA * r;
            amps[0b0110] = OMEGA2 * r;
            amps[0b1001] = OMEGA2 * r;
            StateVector::from_amplitudes(4, amps)
        }
        NamedState::BellPairProduct => {
            let bell = StateVector::from_amplitudes(
                2,
                vec![c(1.0), c(0.0), c(0.0), c(1.0)],
            )?;
            bell.tensor(&bell)
        }
        NamedState::Basis(bits) => {
            let n = bits.len();
            check_range(n)?;
            let mut index = 0usize;
            for ch in bits.chars() {
                index = (index << 1)
                    | match ch {
                        '0' => 0,
                        '1' => 1,
                        _ => {
                            return Err(Error::UnknownName {
                                name: format!("basis:{bits}"),
                            })
                        }
                    };
            }
            StateVector::basis_state(n, index)
        }
    }
}

fn check_range(n: usize) -> Result<()> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(Error::UnsupportedSize {
            n,
            min: 2,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// The two parametric four-qubit families exposed by the catalog, built
/// on the listed basis pairs and normalized afterwards.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Coefficients `(a+d)/2` on `|0000⟩+|1111⟩`, `(a−d)/2` on
    /// `|0011⟩+|1100⟩`, `(b+c)/2` on `|0101⟩+|1010⟩`, `(b−c)/2` on
    /// `|0110⟩+|1001⟩`.
    Gabcd {
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
    },
    /// Coefficients `a` on `|0000⟩+|1111⟩`, `(a+b)/2` on `|0101⟩+|1010⟩`,
    /// `(a−b)/2` on `|0110⟩+|1001⟩`, `i/√2` on
    /// `|0001⟩+|0010⟩+|0111⟩+|1011⟩`.
    Lab3 { a: Complex64, b: Complex64 },
}

/// Builds a family member; rejects parameter combinations whose raw
/// vector vanishes.
pub fn build_family(family: &Family) -> Result<StateVector> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    match family {
        Family::Gabcd { a, b, c, d } => {
            let half = Complex64::new(0.5, 0.0);
            let pairs = [
                ((a + d) * half, [0b0000usize, 0b1111]),
                ((a - d) * half, [0b0011, 0b1100]),
                ((b + c) * half, [0b0101, 0b1010]),
                ((b - c) * half, [0b0110, 0b1001]),
            ];
            for (coeff, indices) in pairs {
                for i in indices {
                    amps[i] = coeff;
                }
            }
        }
        Family::Lab3 { a, b } => {
            let half = Complex64::new(0.5, 0.0);
            amps[0b0000] = *a;
            amps[0b1111] = *a;
            let plus = (a + b) * half;
            let minus = (a - b) * half;
            amps[0b0101] = plus;
            amps[0b1010] = plus;
            amps[0b0110] = minus;
            amps[0b1001] = minus;
            let edge = Complex64::new(0.0, 1.0 / 2f64.sqrt());
            for i in [0b0001usize, 0b0010, 0b0111, 0b1011] {
                amps[i] = edge;
            }
        }
    }
    StateVector::from_amplitudes(4, amps)
}

/// Parses `gabcd:a,b,c,d` or `lab3:a,b` with complex literals like
/// `1`, `-0.5`, `2i`, `1+2i`, `0.5-0.25i`.
pub fn parse_family(spec: &str) -> Result<Family> {
    let (name, params) = spec.split_once(':').ok_or_else(|| Error::UnknownName {
        name: spec.to_string(),
    })?;
    let values: Vec<Complex64> = params
        .split(',')
        .map(parse_complex)
        .collect::<Result<_>>()?;
    match (name.to_ascii_lowercase().as_str(), values.as_slice()) {
        ("gabcd", [a, b, c, d]) => Ok(Family::Gabcd {
            a: *a,
            b: *b,
            c: *c,
            d: *d,
        }),
        ("lab3", [a, b]) => Ok(Family::Lab3 { a: *a, b: *b }),
        _ => Err(Error::UnknownName {
            name: spec.to_string(),
        }),
    }
}

/// Parses a complex literal of the form `re`, `imi`, or `re±imi`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s = text.trim();
    let syntax = || Error::Syntax {
        position: 0,
        message: format!("invalid complex literal '{s}'"),
    };
    if s.is_empty() {
        return Err(syntax());
    }
    if let Some(im_part) = s.strip_suffix(['i', 'I']) {
        // Find a '+'/'-' separating real and imaginary parts; skip the
        // leading sign and exponent signs.
        let bytes = im_part.as_bytes();
        let mut split = None;
        for (k, &ch) in bytes.iter().enumerate().skip(1) {
            if (ch == b'+' || ch == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
            }
        }
        let (re_str, im_str) = match split {
            Some(k) => (&im_part[..k], &im_part[k..]),
            None => ("0", im_part),
        };
        let re: f64 = re_str.parse().map_err(|_| syntax())?;
        let im: f64 = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse().map_err(|_| syntax())?,
        };
        Ok(Complex64::new(re, im))
    } else {
        let re: f64 = s.parse().map_err(|_| syntax())?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Which distribution an ensemble draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    /// Uniform (Haar) pure states on `n` qubits.
    Haar(usize),
    /// A Haar single qubit tensored with a Haar 3-qubit state, the lone
    /// party position drawn per sample.
    ProductOneThree,
    /// Two Haar qubit pairs across a per-sample two-to-two cut.
    ProductTwoTwo,
    /// Four independent Haar qubits.
    FullyProduct,
    /// Random members of the parametric families.
    FamilySweep,
}

/// A reproducible ensemble: identical specs yield bit-identical samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub seed: u64,
    pub count: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, seed: u64, count: u64) -> Self {
        EnsembleSpec { kind, seed, count }
    }

    /// Short human-readable echo, e.g. `haar4(seed=7, count=1000)`.
    pub fn describe(&self) -> String {
        let kind = match self.kind {
            EnsembleKind::Haar(n) => format!("haar{n}"),
            EnsembleKind::ProductOneThree => "product13".to_string(),
            EnsembleKind::ProductTwoTwo => "product22".to_string(),
            EnsembleKind::FullyProduct => "fullyproduct".to_string(),
            EnsembleKind::FamilySweep => "familysweep".to_string(),
        };
        format!("{kind}(seed={}, count={})", self.seed, self.count)
    }
}

/// Parses an ensemble name: `haar2`..`haar8`, `product13`, `product22`,
/// `fullyproduct`, `familysweep`.
pub fn parse_ensemble(name: &str) -> Result<EnsembleKind> {
    let lower = name.to_ascii_lowercase();
    if let Some(n) = lower.strip_prefix("haar") {
        if let Ok(n) = n.parse::<usize>() {
            if (2..=MAX_QUBITS).contains(&n) {
                return Ok(EnsembleKind::Haar(n));
            }
        }
        return Err(Error::UnknownName {
            name: name.to_string(),
        });
    }
    match lower.as_str() {
        "product13" => Ok(EnsembleKind::ProductOneThree),
        "product22" => Ok(EnsembleKind::ProductTwoTwo),
        "fullyproduct" => Ok(EnsembleKind::FullyProduct),
        "familysweep" => Ok(EnsembleKind::FamilySweep),
        _ => Err(Error::UnknownName {
            name: name.to_string(),
        }),
    }
}

/// Derivation streams within one sample's randomness.
pub mod stream {
    /// State generation.
    pub const STATE: u64 = 0;
    /// Local unitaries for invariance checks.
    pub const UNITARIES: u64 = 1;
}

/// RNG keyed by `(seed, sample index, stream)`.
pub fn sample_rng(seed: u64, index: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&index.to_le_bytes());
    key[16..24].copy_from_slice(&stream.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// A Haar-uniform pure state: `2^n` complex standard-normal draws,
/// normalized. Draw order is fixed (real then imaginary, ascending basis
/// index).
pub fn haar_state<R: Rng>(n: usize, rng: &mut R) -> StateVector {
    let dim = 1usize << n;
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    StateVector::from_amplitudes(n, amps).expect("gaussian vector is nonzero")
}

/// A Haar-random 2×2 unitary: two complex Gaussian columns through
/// Gram-Schmidt.
pub fn random_single_qubit_unitary<R: Rng>(rng: &mut R) -> [[Complex64; 2]; 2] {
    loop {
        let mut draw = || -> Complex64 {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        };
        let c0 = [draw(), draw()];
        let c1 = [draw(), draw()];
        let n0 = (c0[0].norm_sqr() + c0[1].norm_sqr()).sqrt();
        if n0 < 1e-6 {
            continue;
        }
        let u0 = [c0[0] / n0, c0[1] / n0];
        let overlap = u0[0].conj() * c1[0] + u0[1].conj() * c1[1];
        let mut v = [c1[0] - overlap * u0[0], c1[1] - overlap * u0[1]];
        let n1 = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if n1 < 1e-6 {
            continue;
        }
        v = [v[0] / n1, v[1] / n1];
        return [[u0[0], v[0]], [u0[1], v[1]]];
    }
}

/// Applies an independent random unitary to every qubit.
pub fn apply_random_local_unitaries<R: Rng>(
    state: &StateVector,
    rng: &mut R,
) -> Result<StateVector> {
    let mut out = state.clone();
    for q in 0..state.n_qubits() {
        let u = random_single_qubit_unitary(rng);
        out = out.apply_single_qubit(q, &u)?;
    }
    Ok(out)
}

/// Generates sample `index` of `spec` from scratch.
pub fn sample_one(spec: &EnsembleSpec, index: u64) -> Result<StateVector> {
    let mut rng = sample_rng(spec.seed, index, stream::STATE);
    match spec.kind {
        EnsembleKind::Haar(n) => {
            if !(2..=MAX_QUBITS).contains(&n) {
                return Err(Error::UnsupportedSize {
                    n,
                    min: 2,
                    max: MAX_QUBITS,
                });
            }
            Ok(haar_state(n, &mut rng))
        }
        EnsembleKind::ProductOneThree => {
            let lone: usize = rng.gen_range(0..4);
            let single = haar_state(1, &mut rng);
            let rest = haar_state(3, &mut rng);
            let product = single.tensor(&rest)?;
            product.permute_qubits(&placement(&[lone]))
        }
        EnsembleKind::ProductTwoTwo => {
            let partner: usize = rng.gen_range(1..4);
            let first = haar_state(2, &mut rng);
            let second = haar_state(2, &mut rng);
            let product = first.tensor(&second)?;
            product.permute_qubits(&placement(&[0, partner]))
        }
        EnsembleKind::FullyProduct => {
            let mut state = haar_state(1, &mut rng);
            for _ in 1..4 {
                state = state.tensor(&haar_state(1, &mut rng))?;
            }
            Ok(state)
        }
        EnsembleKind::FamilySweep => {
            let which: usize = rng.gen_range(0..2);
            let mut draw = || -> Complex64 {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            };
            let family = if which == 0 {
                Family::Gabcd {
                    a: draw(),
                    b: draw(),
                    c: draw(),
                    d: draw(),
                }
            } else {
                Family::Lab3 {
                    a: draw(),
                    b: draw(),
                }
            };
            build_family(&family)
        }
    }
}

/// Permutation sending the first qubits of a product state onto the given
/// target positions, remaining qubits onto the remaining positions in
/// ascending order.
fn placement(targets: &[usize]) -> Vec<usize> {
    let n = 4usize;
    let mut perm = Vec::with_capacity(n);
    perm.extend_from_slice(targets);
    for q in 0..n {
        if !targets.contains(&q) {
            perm.push(q);
        }
    }
    perm
}

/// Materializes the whole ensemble.
pub fn sample(spec: &EnsembleSpec) -> Result<Vec<StateVector>> {
    if spec.count == 0 {
        return Err(Error::InvalidCount);
    }
    (0..spec.count).map(|i| sample_one(spec, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartition::{concurrence, enumerate_bipartitions, profile};

    #[test]
    fn named_amplitude_spot_checks() {
        let ghz4 = build_named(&NamedState::Ghz(4)).unwrap();
        let r = 0.5f64.sqrt();
        assert!((ghz4.amplitude(0).re - r).abs() < 1e-15);
        assert!((ghz4.amplitude(15).re - r).abs() < 1e-15);

        let w4 = build_named(&NamedState::W(4)).unwrap();
        for i in [1usize, 2, 4, 8] {
            assert!((w4.amplitude(i).re - 0.5).abs() < 1e-15);
        }

        let hs = build_named(&NamedState::HiguchiSudbery).unwrap();
        let expected = OMEGA / 6f64.sqrt();
        assert!((hs.amplitude(0b0101) - expected).norm() < 1e-15);

        let cluster = build_named(&NamedState::Cluster4).unwrap();
        assert!((cluster.amplitude(0b1111).re + 0.5).abs() < 1e-15);

        let basis = build_named(&NamedState::Basis("0101".into())).unwrap();
        assert_eq!(basis.amplitude(5).re, 1.0);

        assert!(matches!(
            parse_named("nope"),
            Err(Error::UnknownName { .. })
        ));
        assert_eq!(parse_named("ghz4").unwrap(), NamedState::Ghz(4));
    }

    #[test]
    fn family_examples() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);

        let ghz_like = build_family(&Family::Gabcd {
            a: one,
            b: zero,
            c: zero,
            d: one,
        })
        .unwrap();
        let ghz = build_named(&NamedState::Ghz(4)).unwrap();
        for i in 0..16 {
            assert!((ghz_like.amplitude(i) - ghz.amplitude(i)).norm() < 1e-15);
        }

        let all_ones = build_family(&Family::Gabcd {
            a: one,
            b: one,
            c: one,
            d: one,
        })
        .unwrap();
        for i in [0usize, 5, 10, 15] {
            assert!((all_ones.amplitude(i).re - 0.5).abs() < 1e-15);
        }

        let edge_only = build_family(&Family::Lab3 { a: zero, b: zero }).unwrap();
        for i in [0b0001usize, 0b0010, 0b0111, 0b1011] {
            assert!((edge_only.amplitude(i) - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        }

        assert!(matches!(
            build_family(&Family::Gabcd {
                a: zero,
                b: zero,
                c: zero,
                d: zero
            }),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn family_parsing() {
        let f = parse_family("gabcd:1,0,0,1").unwrap();
        assert_eq!(
            f,
            Family::Gabcd {
                a: Complex64::new(1.0, 0.0),
                b: Complex64::new(0.0, 0.0),
                c: Complex64::new(0.0, 0.0),
                d: Complex64::new(1.0, 0.0),
            }
        );
        let g = parse_family("lab3:0.5+0.5i,-2i").unwrap();
        assert_eq!(
            g,
            Family::Lab3 {
                a: Complex64::new(0.5, 0.5),
                b: Complex64::new(0.0, -2.0),
            }
        );
        assert!(parse_family("gabcd:1,2").is_err());
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = EnsembleSpec::new(EnsembleKind::Haar(4), 42, 3);
        let a = sample(&spec).unwrap();
        let b = sample(&spec).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.amplitudes(), y.amplitudes());
        }
        // Per-index generation matches the batch.
        let lone = sample_one(&spec, 2).unwrap();
        assert_eq!(lone.amplitudes(), a[2].amplitudes());

        assert!(matches!(
            sample(&EnsembleSpec::new(EnsembleKind::Haar(4), 1, 0)),
            Err(Error::InvalidCount)
        ));
    }

    #[test]
    fn product_ensembles_are_separable_where_promised() {
        // Purity on the product cut is 1 well below 1e-9; the concurrence
        // carries the square root of that residual.
        let spec = EnsembleSpec::new(EnsembleKind::ProductTwoTwo, 9, 20);
        for state in sample(&spec).unwrap() {
            let p = profile(&state).unwrap();
            let vanished: Vec<_> = p.two_to_two().filter(|e| e.concurrence < 1e-7).collect();
            assert_eq!(vanished.len(), 1);
            let rho = state
                .reduced_density(vanished[0].cut.side_a())
                .unwrap();
            assert!((rho.purity() - 1.0).abs() < 1e-9);
        }

        let spec = EnsembleSpec::new(EnsembleKind::FullyProduct, 9, 10);
        for state in sample(&spec).unwrap() {
            for cut in enumerate_bipartitions(4).unwrap() {
                assert!(concurrence(&state, &cut).unwrap() < 1e-7);
            }
        }

        let spec = EnsembleSpec::new(EnsembleKind::ProductOneThree, 9, 20);
        for state in sample(&spec).unwrap() {
            let p = profile(&state).unwrap();
            assert_eq!(p.one_to_rest_nonzero(1e-7), 3);
        }
    }

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = sample_rng(5, 0, stream::UNITARIES);
        let u = random_single_qubit_unitary(&mut rng);
        let dot = |a: [Complex64; 2], b: [Complex64; 2]| a[0].conj() * b[0] + a[1].conj() * b[1];
        let col0 = [u[0][0], u[1][0]];
        let col1 = [u[0][1], u[1][1]];
        assert!((dot(col0, col0).re - 1.0).abs() < 1e-12);
        assert!((dot(col1, col1).re - 1.0).abs() < 1e-12);
        assert!(dot(col0, col1).norm() < 1e-12);
    }

    #[test]
    fn haar_mean_is_self_consistent() {
        // Means of the one-to-rest squared concurrence from two
        // independently seeded runs agree within three standard errors.
        let run = |seed: u64| -> (f64, f64) {
            let spec = EnsembleSpec::new(EnsembleKind::Haar(4), seed, 10_000);
            let mut values = Vec::new();
            for state in sample(&spec).unwrap() {
                let p = profile(&state).unwrap();
                for party in 0..4 {
                    values.push(p.one_to_rest(party).squared);
                }
            }
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
                / (values.len() as f64 - 1.0);
            (mean, (var / values.len() as f64).sqrt())
        };
        let (m1, se1) = run(11);
        let (m2, se2) = run(12);
        let combined = (se1 * se1 + se2 * se2).sqrt();
        assert!(
            (m1 - m2).abs() <= 3.0 * combined,
            "means {m1} vs {m2}, 3se = {}",
            3.0 * combined
        );
    }
}
