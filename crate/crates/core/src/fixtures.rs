//! Reference operators and seeded random instance generators shared by the
//! tests, benchmarks and CLI.

use nalgebra::QR;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::jframe::{JFrameData, JFrameVariant};
use crate::linalg::{
    c, operator_norm, real_diagonal, real_matrix, BlockOperator, CMatrix, HermitianMatrix,
};

/// `A = diag(1, 2)`, `B = diag(1/3, 2/3)`, `D = I₂`. Its four eigenvalues
/// `1 ± i/3` and `3/2 ± i√7/6` all sit on the boundary of the inverse-abs
/// ball-union enclosure.
pub fn diagonal_boundary() -> BlockOperator {
    BlockOperator::from_matrices(
        real_diagonal(&[1.0, 2.0]),
        real_diagonal(&[1.0 / 3.0, 2.0 / 3.0]),
        real_diagonal(&[1.0, 1.0]),
    )
    .expect("valid fixture")
}

/// Non-diagonal 2+2 fixture with complex coupling; two real eigenvalues
/// (≈ -4.73166, 2.38898) and a conjugate pair ≈ -0.328657 ± 1.03244i.
pub fn complex_coupled() -> BlockOperator {
    let a = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(-1.0, 0.0)]);
    let b = CMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(1.0, 0.5), c(-1.0, -1.0), c(-0.4, 0.0)]);
    BlockOperator::from_matrices(a, b, real_diagonal(&[1.0, -5.0])).expect("valid fixture")
}

/// `S = [[0, 1], [-1, 0]]`, eigenvalues `±i`.
pub fn rotation() -> BlockOperator {
    BlockOperator::from_matrices(real_matrix(1, 1, &[0.0]), real_matrix(1, 1, &[1.0]), real_matrix(1, 1, &[0.0]))
        .expect("valid fixture")
}

/// Scalars `a = 2`, `b = 1/2`, `d = 0`: separated ranges, real spectrum `1 ± √(3)/2`.
pub fn scalar_gap() -> BlockOperator {
    BlockOperator::from_matrices(real_matrix(1, 1, &[2.0]), real_matrix(1, 1, &[0.5]), real_matrix(1, 1, &[0.0]))
        .expect("valid fixture")
}

/// `A = diag(1, 2)`, `K = I/2`, `D = I₂` in the `[[A, -AK], [K*A, D]]` form.
pub fn jframe_diagonal() -> JFrameData {
    JFrameData::new(
        JFrameVariant::Cork,
        real_diagonal(&[1.0, 2.0]),
        real_diagonal(&[0.5, 0.5]),
        real_diagonal(&[1.0, 1.0]),
    )
    .expect("valid fixture")
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix
/// (columns rephased so the diagonal of `R` is positive).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let qr = QR::new(gaussian_matrix(rng, n, n));
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    q
}

/// `U diag(eigs) U*` for a random unitary `U`.
pub fn hermitian_with_spectrum<R: Rng + ?Sized>(rng: &mut R, eigs: &[f64]) -> HermitianMatrix {
    let u = random_unitary(rng, eigs.len());
    HermitianMatrix::new(&u * real_diagonal(eigs) * u.adjoint()).expect("Hermitian by construction")
}

fn uniform_spectrum<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Gaussian `n×m` matrix rescaled to operator norm `b_norm`.
pub fn coupling_with_norm<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, b_norm: f64) -> CMatrix {
    let g = gaussian_matrix(rng, n, m);
    let s = operator_norm(&g);
    g * c(b_norm / s, 0.0)
}

/// Random blocks: `σ(A)` and `σ(D)` uniform on random subintervals of
/// `[-3, 3]`, Gaussian coupling with `‖B‖ = b_norm`.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, b_norm: f64) -> BlockOperator {
    let interval = |rng: &mut R| {
        let x = -3.0 + 6.0 * rng.random::<f64>();
        let y = -3.0 + 6.0 * rng.random::<f64>();
        (x.min(y), x.max(y))
    };
    let (alo, ahi) = interval(rng);
    let (dlo, dhi) = interval(rng);
    let ae = uniform_spectrum(rng, n, alo, ahi);
    let de = uniform_spectrum(rng, m, dlo, dhi);
    let a = hermitian_with_spectrum(rng, &ae);
    let d = hermitian_with_spectrum(rng, &de);
    let b = coupling_with_norm(rng, n, m, b_norm);
    BlockOperator::new(a, b, d).expect("compatible dimensions")
}

/// Dimensions with `n + m ≤ max_total` and `‖B‖` log-uniform on `[0.05, 4]`.
pub fn random_sized_instance<R: Rng + ?Sized>(rng: &mut R, max_total: usize) -> BlockOperator {
    let n = rng.random_range(1..max_total);
    let m = rng.random_range(1..=max_total - n);
    let b_norm = (0.05f64.ln() + (80f64).ln() * rng.random::<f64>()).exp();
    random_instance(rng, n, m, b_norm)
}

/// Ranges separated by a gap `2·ell > 0` and `‖B‖ = t·ell` with `t ∈ (0, 1]`.
pub fn random_gap_instance<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> BlockOperator {
    let a_lo = 0.5 + rng.random::<f64>();
    let a_hi = a_lo + 2.0 * rng.random::<f64>();
    let gap = 0.1 + 2.0 * rng.random::<f64>();
    let d_hi = a_lo - gap;
    let d_lo = d_hi - 2.0 * rng.random::<f64>();
    let mut ae = uniform_spectrum(rng, n, a_lo, a_hi);
    let mut de = uniform_spectrum(rng, m, d_lo, d_hi);
    // pin the inner ends so the gap is exactly `gap`
    ae[0] = a_lo;
    de[m - 1] = d_hi;
    let t = 1.0 - rng.random::<f64>();
    let a = hermitian_with_spectrum(rng, &ae);
    let d = hermitian_with_spectrum(rng, &de);
    let b = coupling_with_norm(rng, n, m, t * 0.5 * gap);
    if rng.random::<bool>() {
        BlockOperator::new(a, b, d).expect("compatible dimensions")
    } else {
        // same instance with the roles of the ranges swapped
        BlockOperator::new(d, b.adjoint(), a).expect("compatible dimensions")
    }
}

/// Valid `[[A, -AK], [K*A, D]]` data: `A ≻ 0`, `‖K‖ ≤ 0.9`,
/// `D = M + K*AK + εI` with `M ⪰ 0`.
pub fn random_cork<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> JFrameData {
    let ae = uniform_spectrum(rng, n, 0.2, 3.0);
    let a = hermitian_with_spectrum(rng, &ae).into_inner();
    let k_norm = 0.9 * rng.random::<f64>();
    let k = coupling_with_norm(rng, n, m, k_norm);
    let g = gaussian_matrix(rng, m, m) * c(0.5, 0.0);
    let eps = 0.05 + 0.5 * rng.random::<f64>();
    let d = &g * g.adjoint() + k.adjoint() * &a * &k + CMatrix::identity(m, m) * c(eps, 0.0);
    let d = (&d + d.adjoint()) * c(0.5, 0.0);
    JFrameData::new(JFrameVariant::Cork, a, k, d).expect("valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigenvalues_general, hermitian_eig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_unitary(&mut rng, 12);
        assert!(operator_norm(&(u.adjoint() * &u - CMatrix::identity(12, 12))) < 1e-13);
    }

    #[test]
    fn prescribed_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = hermitian_with_spectrum(&mut rng, &[-1.0, 0.5, 2.0]);
        let e = hermitian_eig(&h).unwrap().eigenvalues;
        for (x, y) in e.iter().zip([-1.0, 0.5, 2.0]) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn gap_instances_have_gap() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let s = random_gap_instance(&mut rng, 3, 4);
            let sp = s.spectra().unwrap();
            let rc = crate::enclosure::range_constants(&sp);
            assert!(rc.ell > 0.0);
            assert!(sp.b_norm <= rc.ell * (1.0 + 1e-12));
        }
    }

    #[test]
    fn fixture_spectra() {
        let e = eigenvalues_general(&complex_coupled().assemble()).unwrap();
        let expected = [
            c(-4.73166, 0.0),
            c(-0.328657, -1.03244),
            c(-0.328657, 1.03244),
            c(2.38898, 0.0),
        ];
        for (z, w) in e.iter().zip(expected) {
            assert!((z - w).norm() < 1e-4, "{z} vs {w}");
        }
        let r = eigenvalues_general(&rotation().assemble()).unwrap();
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-14 && (r[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn random_cork_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let data = random_cork(&mut rng, 4, 3);
            assert!(data.validate().valid);
        }
    }
}
