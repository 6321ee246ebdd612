//! Pointwise certificates for the non-real spectrum.
//!
//! A non-real eigenvalue `λ` of `S` must satisfy both
//! `‖(A-λ)⁻¹B‖ ≥ 1` and `‖(D-λ)⁻¹B*‖ ≥ 1` (the resolvent certificate), and
//! also `min{N(λ), N(λ̄), M(λ), M(λ̄)} ≥ 1` with
//! `N(μ) = ‖B*(A-μ)⁻¹B(D-μ)⁻¹‖` and `M(μ) = ‖B(D-μ)⁻¹B*(A-μ)⁻¹‖` (the Neumann
//! certificate). Where a resolvent norm is below one it yields an explicit
//! bound on `‖(S-λ)⁻¹‖`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{operator_norm, BlockSpectra, CMatrix, TOL_POLE};
use crate::region::{Rect, Region};

/// Width of the band around 1 reported as `Boundary`.
pub const TOL_CERT: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Inside,
    Boundary,
    Outside,
}

impl Verdict {
    /// `Inside` if `x ≥ 1 + tol`, `Outside` if `x < 1 - tol`.
    pub fn of(x: f64, tol: f64) -> Self {
        if x >= 1.0 + tol {
            Verdict::Inside
        } else if x >= 1.0 - tol {
            Verdict::Boundary
        } else {
            Verdict::Outside
        }
    }

    pub fn admits(self) -> bool {
        self != Verdict::Outside
    }

    fn meet(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Outside, _) | (_, Verdict::Outside) => Verdict::Outside,
            (Verdict::Boundary, _) | (_, Verdict::Boundary) => Verdict::Boundary,
            _ => Verdict::Inside,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub lambda: Complex64,
    /// `‖(A-λ)⁻¹B‖`
    pub n_a: f64,
    /// `‖(D-λ)⁻¹B*‖`
    pub n_d: f64,
    /// `[N(λ), N(λ̄), M(λ), M(λ̄)]`
    pub n_s: [f64; 4],
    pub best: Verdict,
    pub neumann: Verdict,
    /// `best` admits `λ` (boundary included).
    pub in_best: bool,
    /// `neumann` admits `λ` (boundary included).
    pub in_neumann: bool,
    pub resolvent_bound: Option<f64>,
}

fn scale_rows(m: &mut CMatrix, r: &[Complex64]) {
    for (i, &w) in r.iter().enumerate() {
        m.row_mut(i).iter_mut().for_each(|z| *z *= w);
    }
}

fn scale_cols(m: &mut CMatrix, r: &[Complex64]) {
    for (j, &w) in r.iter().enumerate() {
        m.column_mut(j).iter_mut().for_each(|z| *z *= w);
    }
}

fn resolvent_diag(vals: &[f64], mu: Complex64) -> Result<Vec<Complex64>> {
    vals.iter()
        .map(|&t| {
            let gap = Complex64::new(t, 0.0) - mu;
            if gap.norm() <= TOL_POLE {
                Err(Error::Pole {
                    lambda: mu,
                    eigenvalue: t,
                    tolerance: TOL_POLE,
                })
            } else {
                Ok(gap.inv())
            }
        })
        .collect()
}

/// `(‖R_A G‖, ‖R_D G*‖)` at `λ`.
fn resolvent_norms(sp: &BlockSpectra, lambda: Complex64) -> Result<(f64, f64)> {
    let ra = resolvent_diag(&sp.a.eigenvalues, lambda)?;
    let rd = resolvent_diag(&sp.d.eigenvalues, lambda)?;
    let mut x = sp.coupling.clone();
    scale_rows(&mut x, &ra);
    let mut y = sp.coupling.adjoint();
    scale_rows(&mut y, &rd);
    Ok((operator_norm(&x), operator_norm(&y)))
}

/// `(N(μ), M(μ))` in the eigenbases: `‖G* R_A G R_D‖` and `‖G R_D G* R_A‖`.
fn neumann_norms(sp: &BlockSpectra, mu: Complex64) -> Result<(f64, f64)> {
    let g = &sp.coupling;
    let ra = resolvent_diag(&sp.a.eigenvalues, mu)?;
    let rd = resolvent_diag(&sp.d.eigenvalues, mu)?;
    let mut x = g.clone();
    scale_rows(&mut x, &ra);
    let mut n = g.adjoint() * x;
    scale_cols(&mut n, &rd);
    let mut y = g.adjoint();
    scale_rows(&mut y, &rd);
    let mut m = g * y;
    scale_cols(&mut m, &ra);
    Ok((operator_norm(&n), operator_norm(&m)))
}

fn bound_from(n: f64, im: f64) -> Option<f64> {
    (n < 1.0).then(|| (1.0 + n + n * n) / (im.abs() * (1.0 - n * n)))
}

fn combine_bounds(n_a: f64, n_d: f64, im: f64) -> Option<f64> {
    match (bound_from(n_a, im), bound_from(n_d, im)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

fn require_nonreal(lambda: Complex64) -> Result<()> {
    if lambda.im == 0.0 || !lambda.im.is_finite() || !lambda.re.is_finite() {
        Err(Error::RealLambda(lambda))
    } else {
        Ok(())
    }
}

pub fn certify(sp: &BlockSpectra, lambda: Complex64) -> Result<Certificate> {
    certify_with(sp, lambda, TOL_CERT)
}

/// Evaluates all five norms at a non-real `λ`; `tol` is the boundary band.
pub fn certify_with(sp: &BlockSpectra, lambda: Complex64, tol: f64) -> Result<Certificate> {
    require_nonreal(lambda)?;
    let (n_a, n_d) = resolvent_norms(sp, lambda)?;
    let (n1, m1) = neumann_norms(sp, lambda)?;
    let (n2, m2) = neumann_norms(sp, lambda.conj())?;
    let n_s = [n1, n2, m1, m2];
    let best = Verdict::of(n_a, tol).meet(Verdict::of(n_d, tol));
    let neumann = Verdict::of(n_s.iter().copied().fold(f64::INFINITY, f64::min), tol);
    Ok(Certificate {
        lambda,
        n_a,
        n_d,
        n_s,
        best,
        neumann,
        in_best: best.admits(),
        in_neumann: neumann.admits(),
        resolvent_bound: combine_bounds(n_a, n_d, lambda.im),
    })
}

/// Upper bound on `‖(S-λ)⁻¹‖` from whichever resolvent norm is below one:
/// `(1 + n + n²)/(|Im λ|(1 - n²))`, the smaller of the two when both apply.
pub fn resolvent_bound(sp: &BlockSpectra, lambda: Complex64) -> Result<Option<f64>> {
    require_nonreal(lambda)?;
    let (n_a, n_d) = resolvent_norms(sp, lambda)?;
    Ok(combine_bounds(n_a, n_d, lambda.im))
}

/// `(‖S‖ + |λ|)/dist(λ, R)²` for a closed superset `R` of the quadratic
/// numerical range; when `R` is a union of two parts with disjoint bounding
/// boxes, `(‖S‖ + |λ|)/(dist(λ, R₁)·dist(λ, R₂))`.
pub fn qnr_resolvent_bound(s_norm: f64, lambda: Complex64, region: &Region) -> Result<f64> {
    if region.contains(lambda) {
        return Err(Error::InsideRegion(lambda));
    }
    let num = s_norm + lambda.norm();
    if let Region::Union { children } = region {
        if let [r1, r2] = children.as_slice() {
            if let (Some(e1), Some(e2)) = (r1.extent(), r2.extent()) {
                if e1.meet(&e2).is_none() {
                    return Ok(num / (r1.distance(lambda)? * r2.distance(lambda)?));
                }
            }
        }
    }
    let d = region.distance(lambda)?;
    Ok(num / (d * d))
}

/// Certificates on an `nx × ny` node grid spanning `rect` (endpoints
/// included). Nodes on the real axis are left undefined.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateGrid {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
    /// Row-major over `y`, then `x`.
    pub nodes: Vec<Option<Certificate>>,
}

impl CertificateGrid {
    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        grid_node(&self.rect, self.nx, self.ny, i, j)
    }

    pub fn best_mask(&self) -> Vec<Option<bool>> {
        self.nodes.iter().map(|c| c.map(|c| c.in_best)).collect()
    }

    pub fn neumann_mask(&self) -> Vec<Option<bool>> {
        self.nodes.iter().map(|c| c.map(|c| c.in_neumann)).collect()
    }

    pub fn bound_layer(&self) -> Vec<Option<f64>> {
        self.nodes
            .iter()
            .map(|c| c.and_then(|c| c.resolvent_bound))
            .collect()
    }
}

pub fn grid_node(rect: &Rect, nx: usize, ny: usize, i: usize, j: usize) -> Complex64 {
    let t = |k: usize, n: usize| if n <= 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
    Complex64::new(
        rect.xmin + t(i, nx) * rect.width(),
        rect.ymin + t(j, ny) * rect.height(),
    )
}

pub fn grid_certify(
    sp: &BlockSpectra,
    rect: Rect,
    nx: usize,
    ny: usize,
    exec: Execution,
) -> Result<CertificateGrid> {
    grid_certify_with(sp, rect, nx, ny, TOL_CERT, exec)
}

/// [`grid_certify`] with boundary band `tol`. Nodes on the real axis are `None`.
pub fn grid_certify_with(
    sp: &BlockSpectra,
    rect: Rect,
    nx: usize,
    ny: usize,
    tol: f64,
    exec: Execution,
) -> Result<CertificateGrid> {
    let results = exec.map(nx * ny, |k| {
        let z = grid_node(&rect, nx, ny, k % nx, k / nx);
        if z.im == 0.0 {
            Ok(None)
        } else {
            certify_with(sp, z, tol).map(Some)
        }
    });
    let nodes = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(CertificateGrid { rect, nx, ny, nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enclosure::qnr_enclosure;
    use crate::fixtures;
    use crate::linalg::{dense_resolvent_norm, eigenvalues_general, real_diagonal, BlockOperator, CMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_fixture_boundary_point() {
        let sp = fixtures::diagonal_boundary().spectra().unwrap();
        let cert = certify(&sp, c(1.0, 1.0 / 3.0)).unwrap();
        assert!((cert.n_a - 1.0).abs() < 1e-14);
        assert!(cert.in_best);
        assert_eq!(cert.best, Verdict::Boundary);
    }

    #[test]
    fn zero_coupling_certificate() {
        let s = BlockOperator::from_matrices(real_diagonal(&[1.0, 2.0]), CMatrix::zeros(2, 1), real_diagonal(&[0.0])).unwrap();
        let sp = s.spectra().unwrap();
        let cert = certify(&sp, c(0.5, 0.7)).unwrap();
        assert_eq!((cert.n_a, cert.n_d), (0.0, 0.0));
        assert!(!cert.in_best && !cert.in_neumann);
        assert!((cert.resolvent_bound.unwrap() - 1.0 / 0.7).abs() < 1e-14);
    }

    #[test]
    fn eigenvalue_of_complex_fixture_is_certified() {
        let s = fixtures::complex_coupled();
        let sp = s.spectra().unwrap();
        for z in eigenvalues_general(&s.assemble()).unwrap() {
            if z.im.abs() > 1e-6 {
                let cert = certify(&sp, z).unwrap();
                assert!(cert.in_best && cert.in_neumann, "{cert:?}");
            }
        }
    }

    #[test]
    fn real_lambda_rejected() {
        let sp = fixtures::rotation().spectra().unwrap();
        assert_eq!(certify(&sp, c(1.0, 0.0)), Err(Error::RealLambda(c(1.0, 0.0))));
    }

    #[test]
    fn rotation_resolvent_bound() {
        let s = fixtures::rotation();
        let sp = s.spectra().unwrap();
        let b = resolvent_bound(&sp, c(0.0, 10.0)).unwrap().unwrap();
        assert!((b - 1.11 / 9.9).abs() < 1e-14);
        let truth = dense_resolvent_norm(&s.assemble(), c(0.0, 10.0)).unwrap();
        assert!((truth - 1.0 / 9.0).abs() < 1e-14);
        assert!(truth <= b);
    }

    #[test]
    fn diagonal_fixture_bound_at_3i() {
        let s = fixtures::diagonal_boundary();
        let sp = s.spectra().unwrap();
        let b = resolvent_bound(&sp, c(0.0, 3.0)).unwrap().unwrap();
        assert!(dense_resolvent_norm(&s.assemble(), c(0.0, 3.0)).unwrap() <= b);
    }

    #[test]
    fn qnr_bound_examples() {
        let zero = BlockOperator::from_matrices(real_diagonal(&[0.0]), real_diagonal(&[0.0]), real_diagonal(&[0.0])).unwrap();
        let r = Region::interval(0.0, 0.0);
        let b = qnr_resolvent_bound(0.0, c(0.0, 1.0), &r).unwrap();
        assert_eq!(b, 1.0);
        assert_eq!(dense_resolvent_norm(&zero.assemble(), c(0.0, 1.0)).unwrap(), 1.0);

        let gap = fixtures::scalar_gap();
        let sp = gap.spectra().unwrap();
        let region = qnr_enclosure(&sp);
        let s = gap.assemble();
        let sn = operator_norm(&s);
        let b = qnr_resolvent_bound(sn, c(1.0, 0.0), &region).unwrap();
        let w = 0.75f64.sqrt();
        assert!((b - (sn + 1.0) / (w * w)).abs() < 1e-12);
        assert!(dense_resolvent_norm(&s, c(1.0, 0.0)).unwrap() <= b);

        let diag = fixtures::diagonal_boundary();
        let region = qnr_enclosure(&diag.spectra().unwrap());
        let s = diag.assemble();
        let b = qnr_resolvent_bound(operator_norm(&s), c(5.0, 0.0), &region).unwrap();
        assert!(dense_resolvent_norm(&s, c(5.0, 0.0)).unwrap() <= b);
        assert!(qnr_resolvent_bound(1.0, c(1.5, 0.0), &region).is_err());
    }

    #[test]
    fn grid_masks_zero_coupling_all_false() {
        let s = BlockOperator::from_matrices(real_diagonal(&[1.0]), CMatrix::zeros(1, 1), real_diagonal(&[2.0])).unwrap();
        let g = grid_certify(&s.spectra().unwrap(), Rect::new(0.0, 3.0, -1.0, 1.0), 11, 5, Execution::default()).unwrap();
        // the middle row is the real axis
        assert!(g.best_mask()[2 * 11..3 * 11].iter().all(Option::is_none));
        assert!(g.best_mask().iter().flatten().all(|&b| !b));
        assert!(g.neumann_mask().iter().flatten().all(|&b| !b));
    }

    #[test]
    fn grid_is_deterministic_across_execution_modes() {
        let sp = fixtures::complex_coupled().spectra().unwrap();
        let r = Rect::new(-2.0, 1.0, 0.1, 2.0);
        let a = grid_certify(&sp, r, 17, 9, Execution::Sequential).unwrap();
        let b = grid_certify(&sp, r, 17, 9, Execution::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn best_implies_distance_to_spectrum_at_most_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..4 {
            let s = fixtures::random_instance(&mut rng, 5, 4, 1.0);
            let sp = s.spectra().unwrap();
            for _ in 0..500 {
                let z = c(rng.random::<f64>() * 8.0 - 4.0, rng.random::<f64>() * 3.0 + 1e-3);
                let cert = certify_with(&sp, z, 0.0).unwrap();
                let dist = |v: &[f64]| v.iter().map(|t| (z - t).norm()).fold(f64::INFINITY, f64::min);
                if cert.n_a >= 1.0 {
                    assert!(dist(&sp.a.eigenvalues) <= sp.b_norm * (1.0 + 1e-12));
                }
                if cert.n_d >= 1.0 {
                    assert!(dist(&sp.d.eigenvalues) <= sp.b_norm * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn resolvent_bound_dominates_dense_norm_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..4 {
            let s = fixtures::random_instance(&mut rng, 4, 3, 0.8);
            let sp = s.spectra().unwrap();
            let m = s.assemble();
            for _ in 0..300 {
                let z = c(rng.random::<f64>() * 8.0 - 4.0, (rng.random::<f64>() - 0.5) * 4.0);
                if z.im == 0.0 {
                    continue;
                }
                if let Some(b) = resolvent_bound(&sp, z).unwrap() {
                    let truth = dense_resolvent_norm(&m, z).unwrap();
                    assert!(truth <= b * (1.0 + 1e-10), "{z}: {truth} > {b}");
                }
            }
        }
    }
}
