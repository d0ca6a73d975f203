//! Dense truncated-Fock-space primitives.
//!
//! Everything in the crate works in the number basis `{|0>, ..., |dim-1>}` with
//! the convention that an operator acting on the truncated space is the
//! top-left `dim x dim` block of its infinite-dimensional matrix (for ladder
//! operators) or the exponential of such a block (for displacement/squeeze).
//! Truncation artifacts concentrate in the top rows/columns, so correctness
//! statements are made on the "safe block" — the top-left `(dim/2) x (dim/2)`
//! sub-matrix — and states are expected to keep negligible mass near `dim`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Default truncation used by the reference tables and the CLI.
pub const DEFAULT_DIM: usize = 100;

fn require_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, min: 2 });
    }
    Ok(())
}

/// A (usually normalized) pure state in the truncated number basis.
///
/// `scale` carries the norm the amplitudes had *before* the last
/// normalization; circuit simulation uses it to record the un-normalized
/// magnitude of a conditionally prepared state (proportional to the heralding
/// amplitude). Freshly constructed states have `scale = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: DVector<C64>,
    scale: f64,
}

impl StateVector {
    /// Wraps raw amplitudes (scale 1). The vector must have at least two slots
    /// and contain only finite entries.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        Self::with_scale(amps, 1.0)
    }

    /// Wraps raw amplitudes with an explicit pre-normalization scale.
    pub fn with_scale(amps: Vec<C64>, scale: f64) -> Result<Self> {
        require_dim(amps.len())?;
        if !amps.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::InvalidParameter {
                reason: "non-finite amplitude".into(),
            });
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter {
                reason: format!("scale must be finite and positive, got {scale}"),
            });
        }
        Ok(Self {
            amps: DVector::from_vec(amps),
            scale,
        })
    }

    pub(crate) fn from_dvector(amps: DVector<C64>, scale: f64) -> Self {
        debug_assert!(amps.len() >= 2);
        Self { amps, scale }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn amps(&self) -> &DVector<C64> {
        &self.amps
    }

    /// Amplitude on `|n>`.
    pub fn amp(&self, n: usize) -> C64 {
        self.amps[n]
    }

    /// Fraction of probability mass sitting in the top eighth of the basis —
    /// the truncation-health diagnostic. Values near zero mean the cutoff is
    /// comfortable; anything above ~1e-8 means `dim` is too small.
    pub fn tail_mass(&self) -> f64 {
        let dim = self.dim();
        let start = dim - dim.div_ceil(8);
        let total: f64 = self.amps.iter().map(|c| c.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let tail: f64 = self.amps.as_slice()[start..]
            .iter()
            .map(|c| c.norm_sqr())
            .sum();
        tail / total
    }
}

/// A dense operator on the truncated space.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    mat: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn from_matrix(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                left: mat.nrows(),
                right: mat.ncols(),
            });
        }
        require_dim(mat.nrows())?;
        Ok(Self { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            mat: self.mat.adjoint(),
        }
    }

    /// `self * other` (apply `other` first).
    pub fn compose(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(OperatorMatrix {
            mat: &self.mat * &other.mat,
        })
    }

    /// Max-entry deviation of `U^dagger U` from the identity on the top-left
    /// `block x block` sub-matrix. For the exponentials built here this stays
    /// below 1e-8 on the half-dimension block whenever the truncation
    /// preconditions hold.
    pub fn unitarity_defect(&self, block: usize) -> f64 {
        let block = block.min(self.dim());
        let prod = self.mat.adjoint() * &self.mat;
        let mut worst = 0.0f64;
        for i in 0..block {
            for j in 0..block {
                let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                worst = worst.max((prod[(i, j)] - expect).norm());
            }
        }
        worst
    }
}

/// A density operator on the truncated space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: DMatrix<C64>,
}

impl DensityMatrix {
    /// Wraps a matrix after checking Hermiticity (defect < 1e-12), unit trace
    /// (|tr - 1| < 1e-10) and positivity (all eigenvalues >= -1e-10).
    pub fn from_matrix(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                left: mat.nrows(),
                right: mat.ncols(),
            });
        }
        require_dim(mat.nrows())?;
        let dm = Self { mat };
        dm.validate()?;
        Ok(dm)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn trace(&self) -> C64 {
        self.mat.diagonal().sum()
    }

    /// tr(rho^2); 1 for pure states.
    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).diagonal().sum().re
    }

    /// Structural checks: Hermitian to 1e-12, trace 1 to 1e-10, positive
    /// semi-definite to -1e-10 (verified via a Cholesky factorization of
    /// `rho + 1e-10 I`, which succeeds exactly when every eigenvalue exceeds
    /// -1e-10).
    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        let mut herm = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                herm = herm.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        if herm >= 1e-12 {
            return Err(Error::BadDensityMatrix {
                reason: format!("hermiticity defect {herm:.3e}"),
            });
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() >= 1e-10 || tr.im.abs() >= 1e-10 {
            return Err(Error::BadDensityMatrix {
                reason: format!("trace {tr} != 1"),
            });
        }
        let mut shifted = self.mat.clone();
        for i in 0..dim {
            shifted[(i, i)] += C64::new(1e-10, 0.0);
        }
        if shifted.cholesky().is_none() {
            return Err(Error::BadDensityMatrix {
                reason: "eigenvalue below -1e-10".into(),
            });
        }
        Ok(())
    }
}

/// Creation operator `a^dagger` truncated to `dim`: entry `(n+1, n)` is
/// `sqrt(n+1)`; the top row of the infinite matrix is cut off, so `|dim-1>`
/// maps to zero.
pub fn create_op(dim: usize) -> Result<OperatorMatrix> {
    require_dim(dim)?;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for n in 0..dim - 1 {
        m[(n + 1, n)] = C64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    Ok(OperatorMatrix { mat: m })
}

/// Annihilation operator `a` (adjoint of [`create_op`]).
pub fn annihilate_op(dim: usize) -> Result<OperatorMatrix> {
    Ok(create_op(dim)?.adjoint())
}

/// Displacement `D(alpha) = exp(alpha a^dagger - alpha^* a)` as a truncated
/// matrix exponential.
///
/// Truncation is comfortable when `|alpha|^2 <= dim/4`; larger displacements
/// are still returned but a warning is logged and the top block of the result
/// is unreliable.
pub fn displacement_op(alpha: C64, dim: usize) -> Result<OperatorMatrix> {
    require_dim(dim)?;
    if !(alpha.re.is_finite() && alpha.im.is_finite()) {
        return Err(Error::InvalidParameter {
            reason: "non-finite displacement".into(),
        });
    }
    let limit = dim as f64 / 4.0;
    if alpha.norm_sqr() > limit {
        log::warn!(
            "displacement |alpha|^2 = {:.3} exceeds dim/4 = {:.3}; truncated exponential degrades",
            alpha.norm_sqr(),
            limit
        );
    }
    let adag = create_op(dim)?;
    let mut gen = adag.mat.clone() * alpha;
    gen += adag.mat.adjoint() * (-alpha.conj());
    Ok(OperatorMatrix {
        mat: matrix_exp(&gen),
    })
}

/// Largest squeeze magnitude accepted by [`squeeze_op`].
pub const MAX_SQUEEZE: f64 = 1.5;

/// Squeeze `S(r) = exp((r/2)(a^dagger^2 - a^2))` (real squeeze parameter) as a
/// truncated matrix exponential. `|r| <= 1.5` keeps the exponential norm
/// manageable at the default dimension.
pub fn squeeze_op(r: f64, dim: usize) -> Result<OperatorMatrix> {
    require_dim(dim)?;
    if !r.is_finite() || r.abs() > MAX_SQUEEZE {
        return Err(Error::SqueezeOutOfRange { r, max: MAX_SQUEEZE });
    }
    let adag = create_op(dim)?;
    let up = &adag.mat * &adag.mat;
    let gen = (&up - up.adjoint()) * C64::new(r / 2.0, 0.0);
    Ok(OperatorMatrix {
        mat: matrix_exp(&gen),
    })
}

/// Photon-number parity `diag((-1)^n)`.
pub fn parity_op(dim: usize) -> Result<OperatorMatrix> {
    require_dim(dim)?;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for n in 0..dim {
        m[(n, n)] = C64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    }
    Ok(OperatorMatrix { mat: m })
}

/// `<bra|ket>` (conjugate-linear in the first argument).
pub fn inner(bra: &StateVector, ket: &StateVector) -> Result<C64> {
    if bra.dim() != ket.dim() {
        return Err(Error::DimensionMismatch {
            left: bra.dim(),
            right: ket.dim(),
        });
    }
    Ok(bra.amps.dotc(&ket.amps))
}

/// Euclidean norm of the amplitudes.
pub fn norm(v: &StateVector) -> f64 {
    v.amps.norm()
}

/// Returns the unit-norm version of `v`, folding the removed norm into
/// `scale` (so `scale * amps` is preserved).
pub fn normalize(v: &StateVector) -> Result<StateVector> {
    let n = norm(v);
    if n < 1e-150 {
        return Err(Error::ZeroNorm { norm: n });
    }
    Ok(StateVector {
        amps: &v.amps / C64::new(n, 0.0),
        scale: v.scale * n,
    })
}

/// Applies an operator to a state (scale is carried through unchanged).
pub fn apply(op: &OperatorMatrix, v: &StateVector) -> Result<StateVector> {
    if op.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: op.dim(),
            right: v.dim(),
        });
    }
    Ok(StateVector {
        amps: &op.mat * &v.amps,
        scale: v.scale,
    })
}

/// Projector `|v><v| / <v|v>` as a density matrix.
pub fn outer(v: &StateVector) -> Result<DensityMatrix> {
    let n2 = v.amps.norm_squared();
    if n2 < 1e-300 {
        return Err(Error::ZeroNorm { norm: n2.sqrt() });
    }
    let mat = (&v.amps * v.amps.adjoint()) / C64::new(n2, 0.0);
    DensityMatrix::from_matrix(mat)
}

/// Convex mixture `sum_k w_k rho_k`. Weights must be non-negative and sum to
/// one within 1e-12.
pub fn mix(parts: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
    if parts.is_empty() {
        return Err(Error::BadWeights {
            reason: "empty mixture".into(),
        });
    }
    let dim = parts[0].1.dim();
    let mut total = 0.0;
    for (w, rho) in parts {
        if !(w.is_finite() && *w >= 0.0) {
            return Err(Error::BadWeights {
                reason: format!("weight {w} is negative or non-finite"),
            });
        }
        if rho.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: rho.dim(),
            });
        }
        total += w;
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::BadWeights {
            reason: format!("weights sum to {total}, expected 1"),
        });
    }
    let mut acc = DMatrix::<C64>::zeros(dim, dim);
    for (w, rho) in parts {
        acc += &rho.mat * C64::new(*w, 0.0);
    }
    DensityMatrix::from_matrix(acc)
}

/// Matrix exponential via scaling-and-squaring with a Taylor core evaluated to
/// working precision. Adequate for the anti-Hermitian generators used here
/// (validated against closed-form matrix elements in the tests).
pub fn matrix_exp(m: &DMatrix<C64>) -> DMatrix<C64> {
    let dim = m.nrows();
    // 1-norm (max column sum) controls the scaling step count.
    let mut norm1 = 0.0f64;
    for j in 0..dim {
        let col: f64 = m.column(j).iter().map(|c| c.norm()).sum();
        norm1 = norm1.max(col);
    }
    let s = if norm1 > 0.25 {
        ((norm1 / 0.25).log2().ceil() as i32).clamp(0, 60)
    } else {
        0
    };
    let scaled = m / C64::new(2f64.powi(s), 0.0);

    let mut acc = DMatrix::<C64>::identity(dim, dim);
    let mut term = DMatrix::<C64>::identity(dim, dim);
    for k in 1..=40u32 {
        term = (&term * &scaled) / C64::new(k as f64, 0.0);
        acc += &term;
        if term.norm() <= 1e-17 * acc.norm() {
            break;
        }
    }
    for _ in 0..s {
        acc = &acc * &acc;
    }
    acc
}

/// `exp(G) v` for a banded generator given as `apply(src, dst)`, via scaling
/// plus a Taylor sum per sub-step. `norm_bound` must upper-bound a matrix norm
/// of `G`. Matches `matrix_exp(G) * v` to roundoff while staying O(dim) per
/// sub-step; this is the hot path of the fidelity optimizer.
fn exp_action<F>(apply: F, norm_bound: f64, v: &DVector<C64>) -> DVector<C64>
where
    F: Fn(&DVector<C64>, &mut DVector<C64>),
{
    let steps_log2 = if norm_bound > 0.5 {
        ((norm_bound / 0.5).log2().ceil() as i32).clamp(0, 40)
    } else {
        0
    };
    let substeps = 1u64 << steps_log2;
    let h = 1.0 / substeps as f64;

    let mut acc = v.clone();
    let mut term = DVector::<C64>::zeros(v.len());
    let mut next = DVector::<C64>::zeros(v.len());
    for _ in 0..substeps {
        term.copy_from(&acc);
        let base = acc.clone();
        let mut out = base;
        for k in 1..=30u32 {
            apply(&term, &mut next);
            next *= C64::new(h / k as f64, 0.0);
            std::mem::swap(&mut term, &mut next);
            out += &term;
            if term.norm() <= 1e-17 * out.norm() {
                break;
            }
        }
        acc = out;
    }
    acc
}

/// `D(alpha) v` without building the matrix (exactly the exponential of the
/// truncated generator, like [`displacement_op`]).
pub(crate) fn displacement_action(alpha: C64, v: &DVector<C64>) -> DVector<C64> {
    let dim = v.len();
    let bound = 2.0 * alpha.norm() * (dim as f64).sqrt();
    let conj = alpha.conj();
    exp_action(
        |src, dst| {
            for n in 0..dim {
                let mut t = C64::new(0.0, 0.0);
                if n > 0 {
                    t += alpha * C64::new((n as f64).sqrt(), 0.0) * src[n - 1];
                }
                if n + 1 < dim {
                    t -= conj * C64::new(((n + 1) as f64).sqrt(), 0.0) * src[n + 1];
                }
                dst[n] = t;
            }
        },
        bound,
        v,
    )
}

/// `S(r) v` without building the matrix (exactly the exponential of the
/// truncated generator, like [`squeeze_op`]).
pub(crate) fn squeeze_action(r: f64, v: &DVector<C64>) -> DVector<C64> {
    let dim = v.len();
    let half = r / 2.0;
    let bound = r.abs() * dim as f64;
    exp_action(
        |src, dst| {
            for n in 0..dim {
                let mut t = 0.0f64.into();
                if n >= 2 {
                    let c = ((n * (n - 1)) as f64).sqrt();
                    t += C64::new(half * c, 0.0) * src[n - 2];
                }
                if n + 2 < dim {
                    let c = (((n + 1) * (n + 2)) as f64).sqrt();
                    t -= C64::new(half * c, 0.0) * src[n + 2];
                }
                dst[n] = t;
            }
        },
        bound,
        v,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn basis(n: usize, dim: usize) -> StateVector {
        let mut v = vec![C64::default(); dim];
        v[n] = c(1.0, 0.0);
        StateVector::new(v).unwrap()
    }

    #[test]
    fn create_op_dim2_matrix() {
        let op = create_op(2).unwrap();
        assert_eq!(op.matrix()[(1, 0)], c(1.0, 0.0));
        assert_eq!(op.matrix()[(0, 0)], c(0.0, 0.0));
        assert_eq!(op.matrix()[(0, 1)], c(0.0, 0.0));
        assert_eq!(op.matrix()[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn create_op_raises_with_sqrt_weight() {
        let op = create_op(4).unwrap();
        let v = apply(&op, &basis(2, 4)).unwrap();
        assert_abs_diff_eq!(v.amp(3).re, 3f64.sqrt(), epsilon = 1e-15);
        // top state is annihilated by the truncation
        let top = apply(&op, &basis(3, 4)).unwrap();
        assert_eq!(norm(&top), 0.0);
    }

    #[test]
    fn dim_one_rejected_everywhere() {
        assert!(create_op(1).is_err());
        assert!(displacement_op(c(0.1, 0.0), 1).is_err());
        assert!(squeeze_op(0.1, 1).is_err());
        assert!(parity_op(1).is_err());
        assert!(StateVector::new(vec![c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn displacement_identity_at_zero() {
        let op = displacement_op(c(0.0, 0.0), 16).unwrap();
        let id = DMatrix::<C64>::identity(16, 16);
        assert!((op.matrix() - id).norm() < 1e-14);
    }

    #[test]
    fn displacement_vacuum_overlap() {
        // <0|D(1)|0> = e^{-1/2}
        let op = displacement_op(c(1.0, 0.0), 60).unwrap();
        assert_abs_diff_eq!(op.matrix()[(0, 0)].re, (-0.5f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(op.matrix()[(0, 0)].im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn displacement_column_zero_is_coherent_state() {
        let alpha = c(0.6, -0.4);
        let op = displacement_op(alpha, 64).unwrap();
        let pref = (-alpha.norm_sqr() / 2.0).exp();
        let mut expect = c(pref, 0.0);
        for n in 0..20 {
            assert!((op.matrix()[(n, 0)] - expect).norm() < 1e-12, "n = {n}");
            expect = expect * alpha / c(((n + 1) as f64).sqrt(), 0.0);
        }
    }

    #[test]
    fn displacement_inverse_on_safe_block() {
        let alpha = c(0.0, 1.5);
        let d = displacement_op(alpha, 100).unwrap();
        let dinv = displacement_op(-alpha, 100).unwrap();
        let prod = d.compose(&dinv).unwrap();
        let mut worst = 0.0f64;
        for i in 0..50 {
            for j in 0..50 {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod.matrix()[(i, j)] - c(expect, 0.0)).norm());
            }
        }
        assert!(worst < 1e-10, "defect {worst}");
    }

    #[test]
    fn displacement_unitarity_defect_on_safe_block() {
        let op = displacement_op(c(0.9, 0.7), 100).unwrap();
        assert!(op.unitarity_defect(50) < 1e-8);
    }

    #[test]
    fn displacement_conjugates_creation() {
        // D^dagger(alpha) a^dagger D(alpha) = a^dagger + alpha^* on low-lying vectors.
        let dim = 80;
        let alpha = c(0.7, 0.3);
        let d = displacement_op(alpha, dim).unwrap();
        let adag = create_op(dim).unwrap();
        let lhs = d.adjoint().compose(&adag).unwrap().compose(&d).unwrap();
        for n in [0usize, 3, 17, 39] {
            let v = basis(n, dim);
            let got = apply(&lhs, &v).unwrap();
            let mut want = apply(&adag, &v).unwrap();
            want = StateVector::from_dvector(want.amps + v.amps() * alpha.conj(), 1.0);
            let diff = (got.amps() - want.amps()).norm();
            assert!(diff < 1e-8, "n = {n}, diff = {diff}");
        }
    }

    #[test]
    fn displacement_composition_bch_phase() {
        // D(a) D(b) = exp(i Im(a b^*)) D(a+b) on the safe block.
        let dim = 80;
        let a = c(0.4, 0.9);
        let b = c(-0.3, 0.5);
        let lhs = displacement_op(a, dim)
            .unwrap()
            .compose(&displacement_op(b, dim).unwrap())
            .unwrap();
        let phase = C64::from_polar(1.0, (a * b.conj()).im);
        let rhs = displacement_op(a + b, dim).unwrap();
        let mut worst = 0.0f64;
        for i in 0..dim / 2 {
            for j in 0..dim / 2 {
                worst = worst.max((lhs.matrix()[(i, j)] - phase * rhs.matrix()[(i, j)]).norm());
            }
        }
        assert!(worst < 1e-9, "worst {worst}");
    }

    #[test]
    fn squeeze_identity_and_vacuum_overlap() {
        let id = squeeze_op(0.0, 30).unwrap();
        assert!((id.matrix() - DMatrix::<C64>::identity(30, 30)).norm() < 1e-14);
        // <0|S(r)|0> = sech(r)^{1/2}
        let r = -0.445031;
        let s = squeeze_op(r, 80).unwrap();
        assert_abs_diff_eq!(
            s.matrix()[(0, 0)].re,
            1.0 / r.cosh().sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn squeeze_preserves_parity_exactly() {
        let s = squeeze_op(-0.38, 60).unwrap();
        for i in 0..60 {
            for j in 0..60 {
                if (i + j) % 2 == 1 {
                    assert_eq!(s.matrix()[(i, j)], c(0.0, 0.0), "entry ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn squeeze_inverse_on_safe_block() {
        let s = squeeze_op(0.4, 100).unwrap();
        let sinv = squeeze_op(-0.4, 100).unwrap();
        let prod = s.compose(&sinv).unwrap();
        let mut worst = 0.0f64;
        for i in 0..50 {
            for j in 0..50 {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod.matrix()[(i, j)] - c(expect, 0.0)).norm());
            }
        }
        assert!(worst < 1e-9, "defect {worst}");
    }

    #[test]
    fn squeeze_magnitude_limit() {
        assert!(squeeze_op(1.51, 40).is_err());
        assert!(squeeze_op(-1.6, 40).is_err());
        assert!(squeeze_op(1.5, 40).is_ok());
    }

    #[test]
    fn parity_properties() {
        let p = parity_op(40).unwrap();
        assert_eq!(p.matrix()[(0, 0)], c(1.0, 0.0));
        assert_eq!(p.matrix()[(1, 1)], c(-1.0, 0.0));
        let sq = p.compose(&p).unwrap();
        assert!((sq.matrix() - DMatrix::<C64>::identity(40, 40)).norm() == 0.0);
        // Pi D(alpha) Pi = D(-alpha)
        let alpha = c(0.3, 0.8);
        let d = displacement_op(alpha, 40).unwrap();
        let lhs = p.compose(&d).unwrap().compose(&p).unwrap();
        let rhs = displacement_op(-alpha, 40).unwrap();
        assert!((lhs.matrix() - rhs.matrix()).norm() < 1e-12);
    }

    #[test]
    fn inner_and_norm_basics() {
        let v = StateVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        assert_abs_diff_eq!(norm(&v), 1.0, epsilon = 1e-15);
        let w = StateVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        // conjugate-linear in the first slot
        assert_eq!(inner(&v, &w).unwrap(), c(0.6, 0.0));
        let u = StateVector::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(inner(&v, &u).unwrap(), c(0.0, -0.8));
        assert!(inner(&v, &basis(0, 3)).is_err());
    }

    #[test]
    fn normalize_tracks_scale() {
        let v = StateVector::new(vec![c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        let n = normalize(&v).unwrap();
        assert_abs_diff_eq!(norm(&n), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n.scale(), 5.0, epsilon = 1e-15);
        let zero = StateVector::new(vec![c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(normalize(&zero).is_err());
    }

    #[test]
    fn outer_and_mix_are_valid_density_matrices() {
        let v = normalize(&StateVector::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(0.5, 0.0)]).unwrap())
            .unwrap();
        let rho = outer(&v).unwrap();
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
        let w = normalize(&StateVector::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap())
            .unwrap();
        let sigma = outer(&w).unwrap();
        let mixed = mix(&[(0.25, rho), (0.75, sigma)]).unwrap();
        assert_abs_diff_eq!(mixed.trace().re, 1.0, epsilon = 1e-12);
        assert!(mixed.purity() < 1.0);
        let bad = mix(&[(0.5, mixed)]);
        assert!(bad.is_err());
    }

    #[test]
    fn tail_mass_diagnostic() {
        let mut amps = vec![C64::default(); 16];
        amps[0] = c(1.0, 0.0);
        amps[15] = c(0.5, 0.0);
        let v = StateVector::new(amps).unwrap();
        assert_abs_diff_eq!(v.tail_mass(), 0.25 / 1.25, epsilon = 1e-15);
    }

    #[test]
    fn actions_match_matrix_operators() {
        let dim = 90;
        let mut amps = vec![C64::default(); dim];
        amps[0] = c(0.3, 0.1);
        amps[1] = c(-0.5, 0.4);
        amps[2] = c(0.2, -0.6);
        let v = normalize(&StateVector::new(amps).unwrap()).unwrap();

        let alpha = c(0.4, -2.1);
        let via_matrix = apply(&displacement_op(alpha, dim).unwrap(), &v).unwrap();
        let via_action = displacement_action(alpha, v.amps());
        assert!((via_matrix.amps() - &via_action).norm() < 1e-11);

        let r = -0.52;
        let via_matrix = apply(&squeeze_op(r, dim).unwrap(), &v).unwrap();
        let via_action = squeeze_action(r, v.amps());
        assert!((via_matrix.amps() - &via_action).norm() < 1e-11);
    }

    #[test]
    fn operators_are_deterministic() {
        let a = displacement_op(c(0.3, 1.1), 64).unwrap();
        let b = displacement_op(c(0.3, 1.1), 64).unwrap();
        assert_eq!(a.matrix(), b.matrix()); // bitwise identical
    }
}
