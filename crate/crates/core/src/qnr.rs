//! Sampling the quadratic numerical range
//! `W²(S) = ⋃ σ(S_{f,g})` over unit `f ∈ ℂⁿ`, `g ∈ ℂᵐ`, where
//! `S_{f,g} = [[(Af,f), (Bg,f)], [(-B*f,g), (Dg,g)]]`.
//!
//! Every eigenvector `(x₊, x₋)` of `S` with both parts nonzero gives a pair
//! `f = x₊/‖x₊‖`, `g = x₋/‖x₋‖` for which its eigenvalue is an eigenvalue of
//! `S_{f,g}`; [`eigen_witness_check`] verifies this directly.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fixtures::complex_gaussian;
use crate::linalg::{eigenpairs_general, operator_norm, BlockOperator, CVector};

pub const DEFAULT_SEED: u64 = 0x5eed_b10c;
/// Relative threshold below which an eigenvector block counts as zero.
pub const WIT_TOL: f64 = 1e-8;
/// Allowed distance between an eigenvalue and its witness, relative to `max(1, ‖S‖)`.
pub const WIT_CHECK: f64 = 1e-8;

/// The compression `S_{f,g}` as `[[s00, s01], [s10, s11]]`.
pub type Compression = [[Complex64; 2]; 2];

fn dotc(x: &CVector, y: &CVector) -> Complex64 {
    x.dotc(y)
}

fn check_unit(v: &CVector) -> Result<()> {
    let n = v.norm();
    if (n - 1.0).abs() > 1e-12 {
        Err(Error::NotUnit(n))
    } else {
        Ok(())
    }
}

pub fn s_fg(s: &BlockOperator, f: &CVector, g: &CVector) -> Result<Compression> {
    if f.len() != s.n() || g.len() != s.m() {
        return Err(Error::Dimension(format!(
            "vectors of length {}, {} for blocks of size {}, {}",
            f.len(),
            g.len(),
            s.n(),
            s.m()
        )));
    }
    check_unit(f)?;
    check_unit(g)?;
    let af = s.a().matrix() * f;
    let bg = s.b() * g;
    let dg = s.d().matrix() * g;
    let fbg = dotc(f, &bg);
    Ok([
        [dotc(f, &af), fbg],
        [-fbg.conj(), dotc(g, &dg)],
    ])
}

/// Both eigenvalues of a 2×2 matrix, `tr/2 ± √(((a-d)/2)² + bc)`.
pub fn eig2(m: &Compression) -> [Complex64; 2] {
    let half = (m[0][0] + m[1][1]) * 0.5;
    let diff = (m[0][0] - m[1][1]) * 0.5;
    let r = (diff * diff + m[0][1] * m[1][0]).sqrt();
    [half + r, half - r]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QnrStrategy {
    RandomUnit,
    EigenvectorDirected,
    Mixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessPair {
    pub f: CVector,
    pub g: CVector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QnrSample {
    pub strategy: QnrStrategy,
    pub seed: u64,
    /// Number of `(f, g)` pairs; each contributes two points.
    pub count: usize,
    pub points: Vec<Complex64>,
    /// `pairs[k]` produced `points[2k]` and `points[2k + 1]`.
    pub pairs: Vec<WitnessPair>,
}

impl QnrSample {
    fn merge(strategy: QnrStrategy, seed: u64, parts: Vec<(WitnessPair, [Complex64; 2])>) -> Self {
        let mut points = Vec::with_capacity(2 * parts.len());
        let mut pairs = Vec::with_capacity(parts.len());
        for (p, z) in parts {
            points.extend(z);
            pairs.push(p);
        }
        Self {
            strategy,
            seed,
            count: pairs.len(),
            points,
            pairs,
        }
    }
}

fn normalized(v: CVector) -> CVector {
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// The `k`-th random pair of a seeded stream; independent of evaluation order.
pub fn random_pair(seed: u64, k: usize, n: usize, m: usize) -> WitnessPair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    let f = CVector::from_fn(n, |_, _| complex_gaussian(&mut rng));
    let g = CVector::from_fn(m, |_, _| complex_gaussian(&mut rng));
    WitnessPair {
        f: normalized(f),
        g: normalized(g),
    }
}

/// Eigenvalue, its witness pair if both blocks are non-degenerate, and the
/// two block norms of the eigenvector.
pub type EigenWitness = (Complex64, Option<WitnessPair>, f64, f64);

/// Unit block parts of the eigenvectors of `S` with both parts above
/// `WIT_TOL`.
pub fn eigenvector_pairs(s: &BlockOperator) -> Result<Vec<EigenWitness>> {
    let n = s.n();
    let pairs = eigenpairs_general(&s.assemble())?;
    Ok(pairs
        .into_iter()
        .map(|(lambda, x)| {
            let xp: CVector = x.rows(0, n).into_owned();
            let xm: CVector = x.rows(n, x.len() - n).into_owned();
            let (np, nm) = (xp.norm(), xm.norm());
            let tol = WIT_TOL * x.norm();
            let pair = (np > tol && nm > tol).then(|| WitnessPair {
                f: normalized(xp),
                g: normalized(xm),
            });
            (lambda, pair, np, nm)
        })
        .collect())
}

fn evaluate(s: &BlockOperator, p: WitnessPair) -> Result<(WitnessPair, [Complex64; 2])> {
    let m = s_fg(s, &p.f, &p.g)?;
    Ok((p, eig2(&m)))
}

/// Points of `W²(S)`. `RandomUnit` draws `count` pairs of normalized complex
/// Gaussian vectors; `EigenvectorDirected` uses every eligible eigenvector of
/// `S` (and ignores `count`); `Mixed` does both.
pub fn qnr_sample(
    s: &BlockOperator,
    count: usize,
    strategy: QnrStrategy,
    seed: u64,
    exec: Execution,
) -> Result<QnrSample> {
    let mut parts = Vec::new();
    if matches!(strategy, QnrStrategy::EigenvectorDirected | QnrStrategy::Mixed) {
        for (_, pair, _, _) in eigenvector_pairs(s)? {
            if let Some(p) = pair {
                parts.push(evaluate(s, p)?);
            }
        }
    }
    if matches!(strategy, QnrStrategy::RandomUnit | QnrStrategy::Mixed) {
        if count == 0 {
            return Err(Error::Invalid("QNR sample count must be at least 1".into()));
        }
        let (n, m) = (s.n(), s.m());
        let random = exec.map(count, |k| evaluate(s, random_pair(seed, k, n, m)));
        for r in random {
            parts.push(r?);
        }
    }
    Ok(QnrSample::merge(strategy, seed, parts))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WitnessStatus {
    /// `λ` is an eigenvalue of `S_{f,g}` to within `residual`.
    Witnessed { residual: f64 },
    /// A block of every computed eigenvector is (numerically) zero.
    Skipped { upper_norm: f64, lower_norm: f64 },
    Failed { residual: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub lambda: Complex64,
    #[serde(flatten)]
    pub status: WitnessStatus,
}

/// For every eigenpair of `S`, checks that `λ ∈ σ(S_{f,g})` for the
/// normalized block parts of its eigenvector.
pub fn eigen_witness_check(s: &BlockOperator) -> Result<Vec<WitnessRecord>> {
    let tol = WIT_CHECK * operator_norm(&s.assemble()).max(1.0);
    eigenvector_pairs(s)?
        .into_iter()
        .map(|(lambda, pair, np, nm)| {
            let status = match pair {
                None => WitnessStatus::Skipped {
                    upper_norm: np,
                    lower_norm: nm,
                },
                Some(p) => {
                    let ev = eig2(&s_fg(s, &p.f, &p.g)?);
                    let residual = (ev[0] - lambda).norm().min((ev[1] - lambda).norm());
                    if residual <= tol {
                        WitnessStatus::Witnessed { residual }
                    } else {
                        WitnessStatus::Failed { residual }
                    }
                }
            };
            Ok(WitnessRecord { lambda, status })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enclosure::qnr_enclosure;
    use crate::fixtures;
    use crate::linalg::{c, real_diagonal, CMatrix};

    fn e(n: usize, k: usize) -> CVector {
        CVector::from_fn(n, |i, _| if i == k { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    #[test]
    fn basis_compression_of_diagonal_fixture() {
        let s = fixtures::diagonal_boundary();
        let m = s_fg(&s, &e(2, 0), &e(2, 0)).unwrap();
        assert_eq!(m, [[c(1.0, 0.0), c(1.0 / 3.0, 0.0)], [c(-1.0 / 3.0, 0.0), c(1.0, 0.0)]]);
        assert!(matches!(s_fg(&s, &(e(2, 0) * c(2.0, 0.0)), &e(2, 0)), Err(Error::NotUnit(_))));
    }

    #[test]
    fn zero_coupling_compression_is_diagonal() {
        let s = BlockOperator::from_matrices(real_diagonal(&[1.0, 4.0]), CMatrix::zeros(2, 3), real_diagonal(&[-1.0, 0.0, 2.0])).unwrap();
        let sample = qnr_sample(&s, 200, QnrStrategy::RandomUnit, 1, Execution::default()).unwrap();
        assert_eq!(sample.points.len(), 400);
        for z in sample.points {
            assert_eq!(z.im, 0.0);
            assert!((-1.0..=4.0).contains(&z.re));
        }
    }

    #[test]
    fn coupling_entry_bounded_by_norm() {
        let mut rng = <ChaCha8Rng as SeedableRng>::seed_from_u64(2);
        let s = fixtures::random_instance(&mut rng, 5, 4, 1.7);
        for k in 0..1000 {
            let p = random_pair(3, k, 5, 4);
            let m = s_fg(&s, &p.f, &p.g).unwrap();
            assert!(m[0][1].norm() <= 1.7 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn eigenvector_directed_recovers_spectrum() {
        let s = fixtures::diagonal_boundary();
        let sample = qnr_sample(&s, 1, QnrStrategy::EigenvectorDirected, 0, Execution::Sequential).unwrap();
        let expected = [
            c(1.0, 1.0 / 3.0),
            c(1.0, -1.0 / 3.0),
            c(1.5, 7f64.sqrt() / 6.0),
            c(1.5, -(7f64.sqrt()) / 6.0),
        ];
        for w in expected {
            assert!(sample.points.iter().any(|z| (z - w).norm() < 1e-10), "{w}");
        }
    }

    #[test]
    fn random_points_bounded_by_operator_norm() {
        let s = fixtures::complex_coupled();
        let norm = operator_norm(&s.assemble());
        let sample = qnr_sample(&s, 5000, QnrStrategy::RandomUnit, 4, Execution::default()).unwrap();
        assert_eq!(sample.count, 5000);
        for z in &sample.points {
            assert!(z.norm() <= norm * (1.0 + 1e-12));
        }
        let region = qnr_enclosure(&s.spectra().unwrap());
        for z in &sample.points {
            assert!(region.contains_within(*z, 1e-9), "{z}");
        }
    }

    #[test]
    fn sampling_is_deterministic_and_mode_independent() {
        let s = fixtures::complex_coupled();
        let a = qnr_sample(&s, 300, QnrStrategy::Mixed, 9, Execution::Sequential).unwrap();
        let b = qnr_sample(&s, 300, QnrStrategy::Mixed, 9, Execution::default()).unwrap();
        assert_eq!(a, b);
        let c2 = qnr_sample(&s, 300, QnrStrategy::Mixed, 10, Execution::default()).unwrap();
        assert_ne!(a.points, c2.points);
    }

    #[test]
    fn witnesses() {
        let recs = eigen_witness_check(&fixtures::diagonal_boundary()).unwrap();
        assert_eq!(recs.len(), 4);
        assert!(recs.iter().all(|r| matches!(r.status, WitnessStatus::Witnessed { .. })));

        let degenerate = BlockOperator::from_matrices(real_diagonal(&[1.0]), CMatrix::zeros(1, 1), real_diagonal(&[2.0])).unwrap();
        let recs = eigen_witness_check(&degenerate).unwrap();
        assert!(recs.iter().all(|r| matches!(r.status, WitnessStatus::Skipped { .. })));

        let recs = eigen_witness_check(&fixtures::rotation()).unwrap();
        assert_eq!(recs.len(), 2);
        for r in recs {
            assert!(matches!(r.status, WitnessStatus::Witnessed { .. }));
            assert!((r.lambda.norm() - 1.0).abs() < 1e-14);
        }
    }
}
