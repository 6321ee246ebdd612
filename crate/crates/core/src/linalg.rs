//! Dense complex linear algebra for the block operator
//! `S = [[A, B], [-B*, D]]`: Hermitian eigendecompositions, operator norms,
//! resolvent- and weight-scaled norms, block assembly and the general
//! eigenvalue oracle every enclosure is checked against.
//!
//! Everything is `f64`/`Complex64`. The decompositions come from `nalgebra`;
//! this module adds the validation, ordering and spectral bookkeeping.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative Hermitian-symmetry tolerance on input blocks.
pub const TOL_HERM: f64 = 1e-10;
/// Relative residual tolerance for eigen-decompositions.
pub const TOL_EIG: f64 = 1e-10;
/// Absolute distance below which a shift is treated as hitting the spectrum.
pub const TOL_POLE: f64 = 1e-12;
/// Default relative threshold for the support `sigma_V(T)`.
pub const TOL_SUPPORT: f64 = 1e-10;
/// Eigenvalues closer than this fraction of the spectral spread are clustered.
pub const TOL_CLUSTER: f64 = 1e-8;

const ITER_CAP: usize = 10_000;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn check_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Builds a complex matrix from real row-major data.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    assert_eq!(data.len(), rows * cols, "row-major data length");
    CMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| c(x, 0.0)))
}

pub fn real_diagonal(diag: &[f64]) -> CMatrix {
    let n = diag.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { c(diag[i], 0.0) } else { c(0.0, 0.0) })
}

/// A validated Hermitian matrix. Inputs within [`TOL_HERM`] of Hermitian are
/// symmetrized as `(H + H*)/2`; anything further off is rejected.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, TOL_HERM)
    }

    pub fn with_tolerance(m: CMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        check_finite(&m)?;
        let adj = m.adjoint();
        let scale = m.norm();
        let deviation = (&m - &adj).norm();
        if deviation > tol * scale {
            return Err(Error::NotHermitian {
                deviation: if scale > 0.0 { deviation / scale } else { deviation },
                tolerance: tol,
            });
        }
        Ok(Self((m + adj) * c(0.5, 0.0)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self(real_diagonal(diag))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }
}

/// `H = U diag(eigenvalues) U*` with eigenvalues ascending and `U` unitary.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }

    pub fn reconstruct(&self) -> CMatrix {
        let u = &self.eigenvectors;
        let lam = real_diagonal(&self.eigenvalues);
        u * lam * u.adjoint()
    }

    /// Expresses `V` in the eigenbasis: the returned [`Coupling`] holds `U* V`.
    pub fn couple(&self, v: &CMatrix) -> Result<Coupling> {
        if v.nrows() != self.dim() {
            return Err(Error::Dimension(format!(
                "coupling has {} rows, operator has dimension {}",
                v.nrows(),
                self.dim()
            )));
        }
        Ok(Coupling {
            eigenvalues: self.eigenvalues.clone(),
            projected: self.eigenvectors.adjoint() * v,
        })
    }

    /// `f(T)` assembled densely. Used by oracles and the J-frame inverse.
    pub fn apply_function(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&t| f(t)).collect();
        let u = &self.eigenvectors;
        u * real_diagonal(&vals) * u.adjoint()
    }
}

/// A coupling operator `V` expressed in the eigenbasis of a Hermitian `T`,
/// so that `‖g(T) V‖ = ‖diag(g(t_i)) U* V‖` costs one small SVD.
#[derive(Clone, Debug)]
pub struct Coupling {
    eigenvalues: Vec<f64>,
    projected: CMatrix,
}

impl Coupling {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `U* V`.
    pub fn projected(&self) -> &CMatrix {
        &self.projected
    }

    /// `‖(T - λ)^{-1} V‖`.
    pub fn resolvent_norm(&self, lambda: Complex64) -> Result<f64> {
        let scaled = self.resolvent_scaled(lambda)?;
        Ok(operator_norm(&scaled))
    }

    /// `diag((t_i - λ)^{-1}) U* V`.
    pub fn resolvent_scaled(&self, lambda: Complex64) -> Result<CMatrix> {
        let mut out = self.projected.clone();
        for (i, &t) in self.eigenvalues.iter().enumerate() {
            let gap = c(t, 0.0) - lambda;
            if gap.norm() <= TOL_POLE {
                return Err(Error::Pole {
                    lambda,
                    eigenvalue: t,
                    tolerance: TOL_POLE,
                });
            }
            let inv = gap.inv();
            out.row_mut(i).iter_mut().for_each(|z| *z *= inv);
        }
        Ok(out)
    }

    /// `‖f(T) V‖` for a weight positive on the spectrum.
    pub fn function_norm(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        let mut out = self.projected.clone();
        for (i, &t) in self.eigenvalues.iter().enumerate() {
            let w = f(t);
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::NonPositiveWeight { point: t, value: w });
            }
            out.row_mut(i).iter_mut().for_each(|z| *z *= w);
        }
        Ok(operator_norm(&out))
    }
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
pub fn hermitian_eig(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = h.dim();
    if n == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: vec![],
            eigenvectors: CMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(h.matrix().clone(), f64::EPSILON, ITER_CAP)
        .ok_or_else(|| Error::EigenFailure("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Largest singular value; `0` for an empty matrix.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    if m.ncols() == 1 || m.nrows() == 1 {
        return m.norm();
    }
    let svd = SVD::try_new_unordered(m.clone(), false, false, f64::EPSILON, ITER_CAP)
        .expect("SVD of a finite matrix converges");
    svd.singular_values.iter().copied().fold(0.0, f64::max)
}

/// `‖(T - λ)^{-1} V‖` through the spectral decomposition of `T`.
pub fn weighted_resolvent_norm(
    t: &SpectralDecomposition,
    lambda: Complex64,
    v: &CMatrix,
) -> Result<f64> {
    t.couple(v)?.resolvent_norm(lambda)
}

/// `‖f(T) V‖` through the spectral decomposition of `T`.
pub fn weighted_function_norm(
    t: &SpectralDecomposition,
    f: impl Fn(f64) -> f64,
    v: &CMatrix,
) -> Result<f64> {
    t.couple(v)?.function_norm(f)
}

/// Eigenvalues `t` of `T` whose spectral projection does not annihilate `V`:
/// `‖P_t V‖ > tol_support · ‖V‖`. Eigenvalues within [`TOL_CLUSTER`] times the
/// spectral spread are treated as one cluster; every member of a supported
/// cluster is returned, so the result is always a subset of `σ(T)`.
pub fn sigma_v(t: &SpectralDecomposition, v: &CMatrix, tol_support: f64) -> Result<Vec<f64>> {
    let coupling = t.couple(v)?;
    Ok(support_rows(&t.eigenvalues, coupling.projected(), operator_norm(v), tol_support))
}

/// `S = [[A, B], [-B*, D]]` with Hermitian `A` (n×n), `D` (m×m) and `B` (n×m).
#[derive(Clone, Debug, PartialEq)]
pub struct BlockOperator {
    a: HermitianMatrix,
    b: CMatrix,
    d: HermitianMatrix,
}

impl BlockOperator {
    pub fn new(a: HermitianMatrix, b: CMatrix, d: HermitianMatrix) -> Result<Self> {
        if a.dim() == 0 || d.dim() == 0 {
            return Err(Error::Dimension("diagonal blocks must be non-empty".into()));
        }
        if b.nrows() != a.dim() || b.ncols() != d.dim() {
            return Err(Error::Dimension(format!(
                "B is {}x{} but A is {}x{} and D is {}x{}",
                b.nrows(),
                b.ncols(),
                a.dim(),
                a.dim(),
                d.dim(),
                d.dim()
            )));
        }
        check_finite(&b)?;
        Ok(Self { a, b, d })
    }

    /// Convenience constructor from raw matrices; `A` and `D` are validated.
    pub fn from_matrices(a: CMatrix, b: CMatrix, d: CMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(a)?, b, HermitianMatrix::new(d)?)
    }

    pub fn a(&self) -> &HermitianMatrix {
        &self.a
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn d(&self) -> &HermitianMatrix {
        &self.d
    }

    /// Dimension of the upper space (rows of `A`).
    pub fn n(&self) -> usize {
        self.a.dim()
    }

    /// Dimension of the lower space (rows of `D`).
    pub fn m(&self) -> usize {
        self.d.dim()
    }

    pub fn b_norm(&self) -> f64 {
        operator_norm(&self.b)
    }

    pub fn assemble(&self) -> CMatrix {
        assemble(self)
    }

    pub fn spectra(&self) -> Result<BlockSpectra> {
        BlockSpectra::new(self)
    }
}

/// Spectral data of `A` and `D` shared by the enclosures and certificates.
/// `coupling` is `G = U_A* B U_D`, so every norm of the form
/// `‖g(A) B h(D)‖` becomes `‖diag(g(a_i)) G diag(h(d_j))‖`.
#[derive(Clone, Debug)]
pub struct BlockSpectra {
    pub a: SpectralDecomposition,
    pub d: SpectralDecomposition,
    pub coupling: CMatrix,
    pub b_norm: f64,
}

impl BlockSpectra {
    pub fn new(s: &BlockOperator) -> Result<Self> {
        let a = hermitian_eig(s.a())?;
        let d = hermitian_eig(s.d())?;
        let coupling = a.eigenvectors.adjoint() * s.b() * &d.eigenvectors;
        let b_norm = operator_norm(s.b());
        Ok(Self {
            a,
            d,
            coupling,
            b_norm,
        })
    }

    /// `‖g(A) B‖` for a weight positive on `σ(A)`.
    pub fn a_weighted_norm(&self, g: impl Fn(f64) -> f64) -> Result<f64> {
        scaled_rows_norm(&self.a.eigenvalues, &self.coupling, g)
    }

    /// `‖h(D) B*‖` for a weight positive on `σ(D)`.
    pub fn d_weighted_norm(&self, h: impl Fn(f64) -> f64) -> Result<f64> {
        scaled_rows_norm(&self.d.eigenvalues, &self.coupling.adjoint(), h)
    }

    /// Support of `B` over `σ(A)`.
    pub fn a_support(&self, tol_support: f64) -> Vec<f64> {
        support_rows(&self.a.eigenvalues, &self.coupling, self.b_norm, tol_support)
    }

    /// Support of `B*` over `σ(D)`.
    pub fn d_support(&self, tol_support: f64) -> Vec<f64> {
        support_rows(&self.d.eigenvalues, &self.coupling.adjoint(), self.b_norm, tol_support)
    }
}

fn scaled_rows_norm(vals: &[f64], g: &CMatrix, f: impl Fn(f64) -> f64) -> Result<f64> {
    let mut out = g.clone();
    for (i, &t) in vals.iter().enumerate() {
        let w = f(t);
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::NonPositiveWeight { point: t, value: w });
        }
        out.row_mut(i).iter_mut().for_each(|z| *z *= w);
    }
    Ok(operator_norm(&out))
}

fn support_rows(vals: &[f64], g: &CMatrix, vnorm: f64, tol_support: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if vals.is_empty() {
        return out;
    }
    let gap = TOL_CLUSTER * (vals[vals.len() - 1] - vals[0]);
    let mut start = 0;
    while start < vals.len() {
        let mut end = start + 1;
        while end < vals.len() && vals[end] - vals[end - 1] <= gap {
            end += 1;
        }
        let rows = g.rows(start, end - start).into_owned();
        if operator_norm(&rows) > tol_support * vnorm {
            for &x in &vals[start..end] {
                if out.last() != Some(&x) {
                    out.push(x);
                }
            }
        }
        start = end;
    }
    out
}

pub fn assemble(s: &BlockOperator) -> CMatrix {
    let (n, m) = (s.n(), s.m());
    let mut out = CMatrix::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(s.a.matrix());
    out.view_mut((0, n), (n, m)).copy_from(&s.b);
    out.view_mut((n, 0), (m, n)).copy_from(&(-s.b.adjoint()));
    out.view_mut((n, n), (m, m)).copy_from(s.d.matrix());
    out
}

fn eig_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Eigenvalues of a general square matrix with multiplicity, sorted by
/// `(Re, Im)`. Every eigenvalue is checked to satisfy
/// `σ_min(M - λ) ≤ TOL_EIG · ‖M‖`; failure is an error, never a truncation.
pub fn eigenvalues_general(m: &CMatrix) -> Result<Vec<Complex64>> {
    let vals = sorted_schur_values(m)?;
    let scale = operator_norm(m).max(f64::MIN_POSITIVE);
    let checks = crate::Execution::default().map_slice(&vals, |&lambda| {
        let smin = singular_residual(m, lambda, TOL_EIG * scale)?;
        residual_ok(lambda, smin, scale)
    });
    checks.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(vals)
}

fn sorted_schur_values(m: &CMatrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    check_finite(m)?;
    if m.nrows() == 0 {
        return Ok(vec![]);
    }
    let mut vals = schur_diagonal(m)?;
    vals.sort_by(eig_order);
    Ok(vals)
}

fn residual_ok(lambda: Complex64, smin: f64, scale: f64) -> Result<()> {
    if smin > TOL_EIG * scale {
        return Err(Error::EigenFailure(format!(
            "eigenvalue {lambda} has residual {smin:.3e} relative to norm {scale:.3e}"
        )));
    }
    Ok(())
}

/// Eigenvalues together with unit right eigenvectors (the right singular
/// vector of `M - λ` for its smallest singular value).
pub fn eigenpairs_general(m: &CMatrix) -> Result<Vec<(Complex64, CVector)>> {
    let vals = sorted_schur_values(m)?;
    let scale = operator_norm(m).max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(vals.len());
    for lambda in vals {
        let (smin, v) = smallest_singular_pair(m, lambda)?;
        residual_ok(lambda, smin, scale)?;
        out.push((lambda, v));
    }
    Ok(out)
}

/// Diagonal of a Schur form of `m`. Shifted QR can stall on matrices with
/// many exactly repeated eigenvalues; a seeded random unitary similarity
/// breaks the structure without changing the spectrum.
fn schur_diagonal(m: &CMatrix) -> Result<Vec<Complex64>> {
    use rand::SeedableRng;
    let n = m.nrows();
    // QR needs a handful of sweeps per eigenvalue; a stall is better broken early
    let cap = 100 * n.max(4);
    if let Some(s) = Schur::try_new(m.clone(), f64::EPSILON, cap) {
        let t = s.unpack().1;
        return Ok((0..n).map(|i| t[(i, i)]).collect());
    }
    for attempt in 0..3u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(attempt);
        let q = crate::fixtures::random_unitary(&mut rng, n);
        if let Some(s) = Schur::try_new(q.adjoint() * m * &q, f64::EPSILON, cap) {
            let t = s.unpack().1;
            return Ok((0..n).map(|i| t[(i, i)]).collect());
        }
    }
    Err(Error::EigenFailure("Schur iteration did not converge".into()))
}

/// Upper bound on `σ_min(M - λ)`. Any `x` gives `σ_min ≤ ‖(M-λ)x‖/‖x‖`, so a
/// few LU inverse-iteration steps usually certify `target` cheaply; otherwise
/// the exact value comes from an SVD.
fn singular_residual(m: &CMatrix, lambda: Complex64, target: f64) -> Result<f64> {
    let n = m.nrows();
    let shifted = m - CMatrix::identity(n, n) * lambda;
    let lu = shifted.clone().lu();
    let mut x = CVector::from_fn(n, |i, _| c(1.0, 0.1 * i as f64 / n as f64));
    for _ in 0..3 {
        let Some(y) = lu.solve(&x) else { break };
        let ny = y.norm();
        if !(ny.is_finite() && ny > 0.0) {
            break;
        }
        x = y / c(ny, 0.0);
        let r = (&shifted * &x).norm();
        if r <= target {
            return Ok(r);
        }
    }
    let svd = SVD::try_new_unordered(shifted, false, false, f64::EPSILON, ITER_CAP)
        .ok_or_else(|| Error::EigenFailure("SVD did not converge".into()))?;
    Ok(svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min))
}

fn smallest_singular_pair(m: &CMatrix, lambda: Complex64) -> Result<(f64, CVector)> {
    let n = m.nrows();
    let shifted = m - CMatrix::identity(n, n) * lambda;
    if n == 1 {
        return Ok((shifted[(0, 0)].norm(), CVector::from_element(1, c(1.0, 0.0))));
    }
    let svd = SVD::try_new_unordered(shifted, false, true, f64::EPSILON, ITER_CAP)
        .ok_or_else(|| Error::EigenFailure("SVD did not converge".into()))?;
    let (k, smin) = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty");
    let v_t = svd.v_t.expect("requested");
    let v: CVector = v_t.row(k).adjoint();
    Ok((smin, v))
}

/// Dense inverse via LU; used by oracles and bound checks.
pub fn dense_inverse(m: &CMatrix) -> Result<CMatrix> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::Invalid("matrix is singular".into()))
}

/// `‖(M - λ)^{-1}‖` by dense inversion.
pub fn dense_resolvent_norm(m: &CMatrix, lambda: Complex64) -> Result<f64> {
    let n = m.nrows();
    let inv = dense_inverse(&(m - CMatrix::identity(n, n) * lambda))?;
    Ok(operator_norm(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, k: usize) -> CMatrix {
        CMatrix::from_fn(r, k, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
        let m = random_matrix(rng, n, n);
        HermitianMatrix::new(&m + m.adjoint()).unwrap()
    }

    #[test]
    fn diagonal_eigendecomposition() {
        let e = hermitian_eig(&HermitianMatrix::from_real_diagonal(&[2.0, 1.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0]);
        // columns swapped relative to the input order
        assert!((e.eigenvectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((e.eigenvectors[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_by_two_hermitian_matches_characteristic_polynomial() {
        // trace 1, determinant -4
        let a = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(-1.0, 0.0)]);
        let e = hermitian_eig(&HermitianMatrix::new(a).unwrap()).unwrap();
        let r = 17f64.sqrt();
        assert!((e.eigenvalues[0] - (1.0 - r) / 2.0).abs() < 1e-13);
        assert!((e.eigenvalues[1] - (1.0 + r) / 2.0).abs() < 1e-13);
    }

    #[test]
    fn zero_matrix_spectrum() {
        let e = hermitian_eig(&HermitianMatrix::new(CMatrix::zeros(3, 3)).unwrap()).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
        let ok = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 1e-13), c(1.0, 0.0), c(1.0, 0.0)]);
        let h = HermitianMatrix::new(ok).unwrap();
        assert_eq!(h.matrix()[(0, 1)], h.matrix()[(1, 0)].conj());
    }

    #[test]
    fn reconstruction_and_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 5, 17, 30] {
            let h = random_hermitian(&mut rng, n);
            let e = hermitian_eig(&h).unwrap();
            let hn = operator_norm(h.matrix());
            assert!(operator_norm(&(e.reconstruct() - h.matrix())) <= TOL_EIG * hn);
            let u = &e.eigenvectors;
            assert!(operator_norm(&(u.adjoint() * u - CMatrix::identity(n, n))) <= TOL_EIG);
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn operator_norm_examples() {
        assert!((operator_norm(&real_diagonal(&[1.0 / 3.0, 2.0 / 3.0])) - 2.0 / 3.0).abs() < 1e-15);
        assert!((operator_norm(&CMatrix::identity(4, 4)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn operator_norm_matches_gram_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_matrix(&mut rng, 5, 3);
        let gram = HermitianMatrix::new(m.adjoint() * &m).unwrap();
        let top = hermitian_eig(&gram).unwrap().max();
        assert!((operator_norm(&m) - top.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn resolvent_norm_on_diagonal_data() {
        let t = hermitian_eig(&HermitianMatrix::from_real_diagonal(&[1.0, 2.0])).unwrap();
        let v = real_diagonal(&[1.0 / 3.0, 2.0 / 3.0]);
        let lambda = c(1.0, 1.0);
        let got = weighted_resolvent_norm(&t, lambda, &v).unwrap();
        let expected = f64::max(1.0 / 3.0, (2.0 / 3.0) / 2f64.sqrt());
        assert!((got - expected).abs() < 1e-14);
        assert!((got - 0.4714045207910317).abs() < 1e-12);
        assert_eq!(weighted_resolvent_norm(&t, lambda, &CMatrix::zeros(2, 2)).unwrap(), 0.0);
    }

    #[test]
    fn resolvent_norm_matches_dense_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let h = random_hermitian(&mut rng, 6);
            let v = random_matrix(&mut rng, 6, 4);
            let lambda = c(rng.random::<f64>() - 0.5, 0.1 + rng.random::<f64>());
            let t = hermitian_eig(&h).unwrap();
            let shifted = h.matrix() - CMatrix::identity(6, 6) * lambda;
            let oracle = operator_norm(&(dense_inverse(&shifted).unwrap() * &v));
            let got = weighted_resolvent_norm(&t, lambda, &v).unwrap();
            assert!((got - oracle).abs() <= 1e-10 * oracle.max(1.0));
        }
    }

    #[test]
    fn resolvent_pole_detected() {
        let t = hermitian_eig(&HermitianMatrix::from_real_diagonal(&[1.0, 2.0])).unwrap();
        let err = weighted_resolvent_norm(&t, c(2.0, 0.0), &CMatrix::identity(2, 2));
        assert!(matches!(err, Err(Error::Pole { .. })));
    }

    #[test]
    fn function_norm_examples() {
        let t = hermitian_eig(&HermitianMatrix::from_real_diagonal(&[1.0, 2.0])).unwrap();
        let v = real_diagonal(&[1.0 / 3.0, 2.0 / 3.0]);
        let one = weighted_function_norm(&t, |_| 1.0, &v).unwrap();
        assert!((one - operator_norm(&v)).abs() < 1e-15);
        let inv = weighted_function_norm(&t, |x: f64| 1.0 / x.abs(), &v).unwrap();
        assert!((inv - 1.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            weighted_function_norm(&t, |x| x - 1.5, &v),
            Err(Error::NonPositiveWeight { .. })
        ));
    }

    #[test]
    fn function_norm_matches_dense_functional_calculus() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_hermitian(&mut rng, 7);
        let v = random_matrix(&mut rng, 7, 3);
        let t = hermitian_eig(&h).unwrap();
        // piecewise-linear table through a few knots, positive everywhere
        let f = |x: f64| if x < 0.0 { 1.0 - 0.3 * x } else { 1.0 + 0.5 * x * x };
        let oracle = operator_norm(&(t.apply_function(f) * &v));
        let got = weighted_function_norm(&t, f, &v).unwrap();
        assert!((got - oracle).abs() < 1e-12 * oracle);
    }

    #[test]
    fn assemble_blocks() {
        let s = BlockOperator::from_matrices(
            real_matrix(1, 1, &[0.0]),
            real_matrix(1, 1, &[1.0]),
            real_matrix(1, 1, &[0.0]),
        )
        .unwrap();
        assert_eq!(s.assemble(), real_matrix(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        let s46 = BlockOperator::from_matrices(
            real_diagonal(&[1.0, 2.0]),
            real_diagonal(&[1.0 / 3.0, 2.0 / 3.0]),
            real_diagonal(&[1.0, 1.0]),
        )
        .unwrap();
        let t = 1.0 / 3.0;
        let expected = real_matrix(
            4,
            4,
            &[1.0, 0.0, t, 0.0, 0.0, 2.0, 0.0, 2.0 * t, -t, 0.0, 1.0, 0.0, 0.0, -2.0 * t, 0.0, 1.0],
        );
        assert_eq!(s46.assemble(), expected);
        let zero_b = BlockOperator::from_matrices(
            real_diagonal(&[1.0, 2.0]),
            CMatrix::zeros(2, 1),
            real_diagonal(&[3.0]),
        )
        .unwrap();
        assert_eq!(zero_b.assemble(), real_diagonal(&[1.0, 2.0, 3.0]));
    }

    #[test]
    fn block_dimension_mismatch_rejected() {
        let err = BlockOperator::from_matrices(
            real_diagonal(&[1.0, 2.0]),
            CMatrix::zeros(1, 2),
            real_diagonal(&[1.0, 1.0]),
        );
        assert!(matches!(err, Err(Error::Dimension(_))));
    }

    #[test]
    fn general_eigenvalues_agree_with_hermitian_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = random_hermitian(&mut rng, 9);
        let herm = hermitian_eig(&h).unwrap().eigenvalues;
        let gen = eigenvalues_general(h.matrix()).unwrap();
        for (x, z) in herm.iter().zip(&gen) {
            assert!((z.re - x).abs() < 1e-10 && z.im.abs() < 1e-10);
        }
    }

    #[test]
    fn general_eigenpairs_have_small_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let m = random_matrix(&mut rng, 12, 12);
        let scale = operator_norm(&m);
        for (lambda, v) in eigenpairs_general(&m).unwrap() {
            assert!((v.norm() - 1.0).abs() < 1e-12);
            assert!((&m * &v - &v * lambda).norm() <= TOL_EIG * scale);
        }
    }

    #[test]
    fn sigma_v_supports() {
        let t = hermitian_eig(&HermitianMatrix::from_real_diagonal(&[1.0, 2.0])).unwrap();
        let full = sigma_v(&t, &real_diagonal(&[1.0 / 3.0, 2.0 / 3.0]), TOL_SUPPORT).unwrap();
        assert_eq!(full, vec![1.0, 2.0]);
        let half = sigma_v(&t, &real_diagonal(&[1.0 / 3.0, 0.0]), TOL_SUPPORT).unwrap();
        assert_eq!(half, vec![1.0]);
        assert!(sigma_v(&t, &CMatrix::zeros(2, 2), TOL_SUPPORT).unwrap().is_empty());
    }

    #[test]
    fn block_spectra_norms_match_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = random_hermitian(&mut rng, 5);
        let d = random_hermitian(&mut rng, 3);
        let b = random_matrix(&mut rng, 5, 3);
        let s = BlockOperator::new(a.clone(), b.clone(), d.clone()).unwrap();
        let sp = s.spectra().unwrap();
        assert!((sp.b_norm - operator_norm(&b)).abs() < 1e-13);
        let f = |t: f64| 1.0 + t * t;
        let dense_a = operator_norm(&(sp.a.apply_function(f) * &b));
        let dense_d = operator_norm(&(sp.d.apply_function(f) * b.adjoint()));
        assert!((sp.a_weighted_norm(f).unwrap() - dense_a).abs() < 1e-12 * dense_a);
        assert!((sp.d_weighted_norm(f).unwrap() - dense_d).abs() < 1e-12 * dense_d);
        assert_eq!(sp.a_support(TOL_SUPPORT), sp.a.eigenvalues);
    }

    #[test]
    fn sigma_v_merges_clusters() {
        // eigenvalues 1 and 1 + 1e-12 form one cluster; V only touches the second
        let t = hermitian_eig(&HermitianMatrix::from_real_diagonal(&[1.0, 1.0 + 1e-12, 3.0])).unwrap();
        let v = real_matrix(3, 1, &[0.0, 1.0, 0.0]);
        let s = sigma_v(&t, &v, TOL_SUPPORT).unwrap();
        assert_eq!(s, vec![1.0, 1.0 + 1e-12]);
    }
}
