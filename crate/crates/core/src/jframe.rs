//! J-frame operators in their two block representations.
//!
//! * `Cork`: `S = [[A, -AK], [K*A, D]]` with `A ≻ 0`, `‖K‖ < 1` and
//!   `D + K*AK ≻ 0`. Stored as `P = A`, `coupling = K`, `Q = D`.
//! * `Corky`: `S = [[A', LD'], [-D'L*, D']]` with `D' ≻ 0`, `‖L‖ < 1` and
//!   `A' + LD'L* ≻ 0`. Stored as `P = D'`, `coupling = L`, `Q = A'`.
//!
//! Frame bounds are extreme eigenvalues of `P` and of the Schur-type
//! combination `Q + coupling·P·coupling*` (or its cork analogue); the
//! enclosure is an intersection of two cone ball unions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, check_finite, hermitian_eig, operator_norm, BlockOperator, CMatrix, HermitianMatrix,
};
use crate::region::{Region, Side};

const MARGIN: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JFrameVariant {
    Cork,
    Corky,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JFrameData {
    pub variant: JFrameVariant,
    /// `A` (cork) or `D'` (corky).
    pub p: HermitianMatrix,
    /// `K` (cork, `n×m`) or `L` (corky, `n×m`).
    pub coupling: CMatrix,
    /// `D` (cork) or `A'` (corky).
    pub q: HermitianMatrix,
}

/// Margins of the three positivity conditions; valid iff all exceed `1e-10`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub valid: bool,
    /// `min σ(P)`
    pub p_min_eig: f64,
    /// `1 - ‖coupling‖`
    pub contraction_margin: f64,
    /// `min σ(D + K*AK)` or `min σ(A' + LD'L*)`
    pub schur_min_eig: f64,
}

/// `(alpha, beta)` bound the Schur-type combination, `(gamma, delta)` are the
/// reciprocals of the extreme eigenvalues of `P`. For `Cork` these are
/// `(α₋, β₋, γ₊, δ₊)`, for `Corky` `(α₊, β₊, γ₋, δ₋)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub variant: JFrameVariant,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl JFrameData {
    pub fn new(variant: JFrameVariant, p: CMatrix, coupling: CMatrix, q: CMatrix) -> Result<Self> {
        let p = HermitianMatrix::new(p)?;
        let q = HermitianMatrix::new(q)?;
        check_finite(&coupling)?;
        let (rows, cols) = match variant {
            JFrameVariant::Cork => (p.dim(), q.dim()),
            JFrameVariant::Corky => (q.dim(), p.dim()),
        };
        if p.dim() == 0 || q.dim() == 0 {
            return Err(Error::Dimension("J-frame blocks must be non-empty".into()));
        }
        if coupling.nrows() != rows || coupling.ncols() != cols {
            return Err(Error::Dimension(format!(
                "coupling is {}x{}, expected {rows}x{cols}",
                coupling.nrows(),
                coupling.ncols()
            )));
        }
        Ok(Self {
            variant,
            p,
            coupling,
            q,
        })
    }

    /// `D + K*AK` (cork) or `A' + LD'L*` (corky).
    fn schur(&self) -> CMatrix {
        let p = self.p.matrix();
        let k = &self.coupling;
        match self.variant {
            JFrameVariant::Cork => self.q.matrix() + k.adjoint() * p * k,
            JFrameVariant::Corky => self.q.matrix() + k * p * k.adjoint(),
        }
    }

    fn schur_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.schur())
    }

    pub fn validate(&self) -> ValidityReport {
        let p_min_eig = hermitian_eig(&self.p).map(|e| e.min()).unwrap_or(f64::NAN);
        let contraction_margin = 1.0 - operator_norm(&self.coupling);
        let schur_min_eig = self
            .schur_hermitian()
            .and_then(|h| hermitian_eig(&h))
            .map(|e| e.min())
            .unwrap_or(f64::NAN);
        ValidityReport {
            valid: p_min_eig > MARGIN && contraction_margin > MARGIN && schur_min_eig > MARGIN,
            p_min_eig,
            contraction_margin,
            schur_min_eig,
        }
    }

    fn require_valid(&self) -> Result<()> {
        let r = self.validate();
        if r.valid {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "J-frame data violates positivity: min σ(P) = {:.3e}, 1 - ‖coupling‖ = {:.3e}, min σ(Schur) = {:.3e}",
                r.p_min_eig, r.contraction_margin, r.schur_min_eig
            )))
        }
    }

    pub fn coupling_norm(&self) -> f64 {
        operator_norm(&self.coupling)
    }
}

/// The block operator of valid J-frame data.
pub fn assemble_jframe(data: &JFrameData) -> Result<BlockOperator> {
    data.require_valid()?;
    let p = data.p.matrix();
    match data.variant {
        JFrameVariant::Cork => BlockOperator::new(
            data.p.clone(),
            -(p * &data.coupling),
            data.q.clone(),
        ),
        JFrameVariant::Corky => {
            BlockOperator::new(data.q.clone(), &data.coupling * p, data.p.clone())
        }
    }
}

pub fn frame_bounds(data: &JFrameData) -> Result<FrameBounds> {
    data.require_valid()?;
    let p = hermitian_eig(&data.p)?;
    let z = hermitian_eig(&data.schur_hermitian()?)?;
    Ok(FrameBounds {
        variant: data.variant,
        alpha: z.min(),
        beta: z.max(),
        gamma: 1.0 / p.max(),
        delta: 1.0 / p.min(),
    })
}

/// `S⁻¹` by the block formula: with `Z = (D + K*AK)⁻¹`,
/// `[[A⁻¹ - KZK*, KZ], [-ZK*, Z]]`; with `Z' = (A' + LD'L*)⁻¹`,
/// `[[Z', -Z'L], [L*Z', D'⁻¹ - L*Z'L]]`.
pub fn jframe_inverse(data: &JFrameData) -> Result<CMatrix> {
    data.require_valid()?;
    let p_inv = hermitian_eig(&data.p)?.apply_function(|t| 1.0 / t);
    let z = hermitian_eig(&data.schur_hermitian()?)?.apply_function(|t| 1.0 / t);
    let k = &data.coupling;
    let (n, m) = (k.nrows(), k.ncols());
    let mut out = CMatrix::zeros(n + m, n + m);
    match data.variant {
        JFrameVariant::Cork => {
            let kz = k * &z;
            out.view_mut((0, 0), (n, n)).copy_from(&(&p_inv - &kz * k.adjoint()));
            out.view_mut((0, n), (n, m)).copy_from(&kz);
            out.view_mut((n, 0), (m, n)).copy_from(&(-(&z * k.adjoint())));
            out.view_mut((n, n), (m, m)).copy_from(&z);
        }
        JFrameVariant::Corky => {
            let zl = &z * k;
            out.view_mut((0, 0), (n, n)).copy_from(&z);
            out.view_mut((0, n), (n, m)).copy_from(&(-&zl));
            out.view_mut((n, 0), (m, n)).copy_from(&(k.adjoint() * &z));
            out.view_mut((n, n), (m, m)).copy_from(&(&p_inv - k.adjoint() * &zl));
        }
    }
    Ok(out)
}

/// Intersection of `⋃_{a ∈ σ-range(P)} B_{ka}(a)` with
/// `⋃_{b ∈ [alpha, beta]} B_{kb/(1-k²)}(b/(1-k²))`, `k = ‖coupling‖`.
pub fn lemmens_enclosure(data: &JFrameData) -> Result<Region> {
    let fb = frame_bounds(data)?;
    let k = data.coupling_norm();
    let s = 1.0 - k * k;
    Ok(Region::intersection(vec![
        Region::cone_ball_union(1.0 / fb.delta, 1.0 / fb.gamma, 1.0, k),
        Region::cone_ball_union(fb.alpha, fb.beta, 1.0 / s, k / s),
    ]))
}

/// Half opening slope `‖K‖/√(1-‖K‖²)` of the sector containing the
/// non-real spectrum.
pub fn sector_slope(data: &JFrameData) -> f64 {
    let k = data.coupling_norm();
    k / (1.0 - k * k).sqrt()
}

/// Earlier enclosure: the open disc `B̊_r(r)`, `r = min(1/γ₊, 1/γ₋)`, cut by
/// `Re z ≥ max(α₊, α₋)/2`. Cork data supplies `γ₊, α₋`; the other side's
/// bounds are supplied by the caller.
pub fn prior_bound_region(cork: &FrameBounds, gamma_m: f64, alpha_p: f64) -> Result<Region> {
    if cork.variant != JFrameVariant::Cork {
        return Err(Error::Invalid("prior bound needs cork-side frame bounds".into()));
    }
    if !(gamma_m > 0.0 && alpha_p > 0.0) {
        return Err(Error::Invalid(format!(
            "supplied bounds must be positive (gamma_m = {gamma_m}, alpha_p = {alpha_p})"
        )));
    }
    let r = (1.0 / cork.gamma).min(1.0 / gamma_m);
    Ok(Region::intersection(vec![
        Region::open_disc(Complex64::new(r, 0.0), r),
        Region::half_plane(alpha_p.max(cork.alpha) / 2.0, Side::Right),
    ]))
}

/// The same data with `P` scaled by `t`.
pub fn scale_p(data: &JFrameData, t: f64) -> Result<JFrameData> {
    JFrameData::new(
        data.variant,
        data.p.matrix() * c(t, 0.0),
        data.coupling.clone(),
        data.q.matrix().clone(),
    )
}
