//! Dense symmetric eigenanalysis, null-space detection and generalized
//! condition numbers of semidefinite pencils.
//!
//! The finite generalized spectrum of `(A, B)` is computed by restricting both
//! matrices to an orthonormal basis `Q` of the complement of their shared null
//! space and whitening the right-hand side with a Cholesky factor:
//!
//! ```text
//! QᵀBQ = L Lᵀ,   C = L⁻¹ (QᵀAQ) L⁻ᵀ,   Λ(A, B) = eig(C)
//! ```
//!
//! Every routine here is a pure function of its inputs.

use crate::error::{Error, Result};
use crate::matrix::{Mat, SymMatrix};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Relative slack used by [`is_psd`] callers that do not pick their own.
pub const DEFAULT_PSD_TOL: f64 = 1e-11;

/// Largest principal angle tolerated between two "equal" null spaces.
pub const NULLSPACE_ANGLE_TOL: f64 = 1e-8;

/// Threshold below which an eigenvalue counts as zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ZeroTol<T> {
    /// `n · machine_epsilon · max(1, |λ|_max)`.
    #[default]
    Default,
    /// Fixed absolute threshold.
    Absolute(T),
}

impl<T: Real> ZeroTol<T> {
    pub fn resolve(&self, n: usize, lambda_abs_max: T) -> T {
        match *self {
            ZeroTol::Default => T::from_count(n) * T::epsilon() * T::one().max(lambda_abs_max),
            ZeroTol::Absolute(t) => t,
        }
    }
}

/// Full eigendecomposition `A = V diag(λ) Vᵀ` with nondecreasing eigenvalues.
#[derive(Debug, Clone)]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<T>,
    /// Column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: Mat<T>,
    pub zero_tol: T,
}

impl<T: Real> Spectrum<T> {
    pub fn lambda_max(&self) -> T {
        *self
            .eigenvalues
            .last()
            .expect("spectrum of a nonempty matrix")
    }

    pub fn lambda_min(&self) -> T {
        self.eigenvalues[0]
    }

    /// Indices of eigenvalues above the zero threshold, ascending.
    pub fn nonzero_indices(&self) -> Vec<usize> {
        (0..self.eigenvalues.len())
            .filter(|&k| self.eigenvalues[k] > self.zero_tol)
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.nonzero_indices().len()
    }

    /// Smallest eigenvalue above the zero threshold.
    pub fn lambda_min_nonzero(&self) -> Option<T> {
        self.eigenvalues
            .iter()
            .copied()
            .find(|&l| l > self.zero_tol)
    }

    pub fn eigenvector(&self, k: usize) -> Vec<T> {
        self.eigenvectors.column(k)
    }

    /// Rebuilds `V diag(λ) Vᵀ`.
    pub fn reconstruct(&self) -> SymMatrix<T> {
        let v = &self.eigenvectors;
        let n = v.rows();
        SymMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v.get(i, k) * self.eigenvalues[k] * v.get(j, k))
                .sum()
        })
        .expect("reconstruction of a finite spectrum is finite")
    }
}

/// Orthonormal bases of the detected null space and of its complement.
#[derive(Debug, Clone)]
pub struct NullSpaceInfo<T> {
    /// `n × k`.
    pub basis: Mat<T>,
    /// `n × (n − k)`.
    pub complement_basis: Mat<T>,
    pub zero_tol: T,
    pub spectrum: Spectrum<T>,
}

impl<T: Real> NullSpaceInfo<T> {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

/// Generalized finite spectrum of a pencil and its condition number.
#[derive(Debug, Clone)]
pub struct PencilReport<T> {
    /// Ascending.
    pub finite_spectrum: Vec<T>,
    pub lambda_min: T,
    pub lambda_max: T,
    /// `+∞` when `lambda_min <= 0`.
    pub kappa: T,
    pub shared_nullspace_dim: usize,
    pub zero_tol_a: T,
    pub zero_tol_b: T,
}

impl<T: Real> PencilReport<T> {
    fn from_eigenvalues(
        mut finite_spectrum: Vec<T>,
        shared_nullspace_dim: usize,
        zero_tol_a: T,
        zero_tol_b: T,
    ) -> Self {
        finite_spectrum.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        let lambda_min = finite_spectrum[0];
        let lambda_max = *finite_spectrum.last().unwrap();
        let kappa = if lambda_min > T::zero() {
            lambda_max / lambda_min
        } else {
            T::infinity()
        };
        Self {
            finite_spectrum,
            lambda_min,
            lambda_max,
            kappa,
            shared_nullspace_dim,
            zero_tol_a,
            zero_tol_b,
        }
    }
}

/// Cyclic Jacobi eigensolver. Returns unsorted eigenvalues and the
/// accumulated rotation matrix.
fn jacobi<T: Real>(a: &SymMatrix<T>) -> Result<(Vec<T>, Mat<T>)> {
    let n = a.order();
    let mut m = a.to_mat();
    let mut v = Mat::identity(n);
    let target = T::tol_at_least(1e-14, 4.0) * a.norm_frobenius();
    let two = T::lit(2.0);

    let off_norm = |m: &Mat<T>| -> T {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s = s + m.get(i, j) * m.get(i, j);
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&m) <= target {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq == T::zero() {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (two * apq);
                let t = if theta.abs() > T::lit(1e150).min(T::max_value().sqrt()) {
                    T::one() / (two * theta)
                } else {
                    let t = T::one() / (theta.abs() + (T::one() + theta * theta).sqrt());
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m.get(k, p), m.get(k, q));
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let (mpk, mqk) = (m.get(p, k), m.get(q, k));
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
                m.set(p, q, T::zero());
                m.set(q, p, T::zero());
                for k in 0..n {
                    let (vkp, vkq) = (v.get(k, p), v.get(k, q));
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    if !converged && off_norm(&m) > target {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    Ok(((0..n).map(|i| m.get(i, i)).collect(), v))
}

/// Eigendecomposition with the default zero threshold.
pub fn eigendecompose<T: Real>(a: &SymMatrix<T>) -> Result<Spectrum<T>> {
    eigendecompose_with(a, ZeroTol::Default)
}

pub fn eigendecompose_with<T: Real>(a: &SymMatrix<T>, zero_tol: ZeroTol<T>) -> Result<Spectrum<T>> {
    let n = a.order();
    let (values, vectors) = jacobi(a)?;
    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps ties in rotation order, so output is deterministic.
    order.sort_by(|&i, &j| {
        values[i]
            .partial_cmp(&values[j])
            .expect("finite eigenvalues")
    });
    let eigenvalues: Vec<T> = order.iter().map(|&k| values[k]).collect();
    let eigenvectors = vectors.select_columns(&order);
    let abs_max = eigenvalues.iter().fold(T::zero(), |m, l| m.max(l.abs()));
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        zero_tol: zero_tol.resolve(n, abs_max),
    })
}

fn require_psd<T: Real>(spec: &Spectrum<T>) -> Result<()> {
    if spec.lambda_min() < -spec.zero_tol {
        return Err(Error::IndefiniteMatrix {
            eigenvalue: spec.lambda_min().to_f64().unwrap_or(f64::NAN),
            zero_tol: spec.zero_tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Splits an already computed spectrum into null space and complement.
pub fn nullspace_from_spectrum<T: Real>(spec: Spectrum<T>) -> Result<NullSpaceInfo<T>> {
    require_psd(&spec)?;
    let (null_idx, comp_idx): (Vec<usize>, Vec<usize>) =
        (0..spec.eigenvalues.len()).partition(|&k| spec.eigenvalues[k] <= spec.zero_tol);
    Ok(NullSpaceInfo {
        basis: spec.eigenvectors.select_columns(&null_idx),
        complement_basis: spec.eigenvectors.select_columns(&comp_idx),
        zero_tol: spec.zero_tol,
        spectrum: spec,
    })
}

/// Null space of an SPSD matrix: eigenvectors whose eigenvalues are at most
/// the zero threshold.
pub fn nullspace<T: Real>(a: &SymMatrix<T>, zero_tol: ZeroTol<T>) -> Result<NullSpaceInfo<T>> {
    nullspace_from_spectrum(eigendecompose_with(a, zero_tol)?)
}

/// `λ_max / λ_min_nonzero` of an SPSD matrix.
pub fn kappa_single<T: Real>(a: &SymMatrix<T>) -> Result<T> {
    kappa_single_with(a, ZeroTol::Default)
}

pub fn kappa_single_with<T: Real>(a: &SymMatrix<T>, zero_tol: ZeroTol<T>) -> Result<T> {
    let spec = eigendecompose_with(a, zero_tol)?;
    require_psd(&spec)?;
    match spec.lambda_min_nonzero() {
        Some(lo) => Ok(spec.lambda_max() / lo),
        None => Err(Error::ZeroMatrix {
            zero_tol: spec.zero_tol.to_f64().unwrap_or(f64::NAN),
        }),
    }
}

/// `λ_min(A) ≥ −tol · max(1, |λ_max(A)|)`.
pub fn is_psd<T: Real>(a: &SymMatrix<T>, tol: T) -> bool {
    match eigendecompose(a) {
        Ok(spec) => {
            let scale = T::one().max(spec.lambda_max().abs());
            spec.lambda_min() >= -tol * scale
        }
        Err(_) => false,
    }
}

/// Largest principal angle between the spans of two orthonormal blocks of
/// equal width, computed as `asin ‖(I − P_a) Q_b‖₂` so that small angles keep
/// full precision.
pub fn max_principal_angle<T: Real>(qa: &Mat<T>, qb: &Mat<T>) -> T {
    assert_eq!(qa.rows(), qb.rows(), "bases must live in the same space");
    assert_eq!(
        qa.cols(),
        qb.cols(),
        "principal angles need equal dimensions"
    );
    if qa.cols() == 0 {
        return T::zero();
    }
    let proj = qa.matmul(&qa.transpose().matmul(qb));
    let mut resid = qb.clone();
    for i in 0..resid.rows() {
        for j in 0..resid.cols() {
            resid.set(i, j, qb.get(i, j) - proj.get(i, j));
        }
    }
    let gram = SymMatrix::symmetrize(&resid.transpose().matmul(&resid));
    let top = jacobi(&gram)
        .map(|(vals, _)| vals.into_iter().fold(T::zero(), T::max))
        .unwrap_or_else(|_| T::one());
    top.max(T::zero()).sqrt().min(T::one()).asin()
}

/// Lower-triangular Cholesky factor of an SPD matrix, or `None` when a pivot
/// falls below `m · eps · max_diag`.
fn cholesky<T: Real>(b: &SymMatrix<T>) -> Option<Mat<T>> {
    let m = b.order();
    let floor = T::from_count(m) * T::epsilon() * b.diagonal().into_iter().fold(T::zero(), T::max);
    let mut l = Mat::zeros(m, m);
    for j in 0..m {
        let mut d = b.get(j, j);
        for k in 0..j {
            d = d - l.get(j, k) * l.get(j, k);
        }
        if !(d > floor) {
            return None;
        }
        let ljj = d.sqrt();
        l.set(j, j, ljj);
        for i in (j + 1)..m {
            let mut s = b.get(i, j);
            for k in 0..j {
                s = s - l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, s / ljj);
        }
    }
    Some(l)
}

/// Solves `L X = R` for lower-triangular `L`.
fn forward_solve<T: Real>(l: &Mat<T>, r: &Mat<T>) -> Mat<T> {
    let m = l.rows();
    let mut x = Mat::zeros(m, r.cols());
    for c in 0..r.cols() {
        for i in 0..m {
            let mut s = r.get(i, c);
            for k in 0..i {
                s = s - l.get(i, k) * x.get(k, c);
            }
            x.set(i, c, s / l.get(i, i));
        }
    }
    x
}

/// Eigenvalues of the pencil `(QᵀAQ, QᵀBQ)` for an explicit orthonormal
/// block `Q`, ascending.
pub fn restricted_pencil_eigenvalues<T: Real>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    q: &Mat<T>,
) -> Result<Vec<T>> {
    if a.order() != b.order() {
        return Err(Error::DimensionMismatch {
            expected: a.order(),
            got: b.order(),
        });
    }
    if q.cols() == 0 {
        return Err(Error::ZeroMatrix { zero_tol: 0.0 });
    }
    let ar = a.congruence(q);
    let br = b.congruence(q);
    let l = cholesky(&br).ok_or(Error::SingularRestriction)?;
    let x = forward_solve(&l, &ar.to_mat());
    let c = forward_solve(&l, &x.transpose());
    let c = SymMatrix::symmetrize(&c);
    let (mut vals, _) = jacobi(&c)?;
    vals.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(vals)
}

/// Finite generalized spectrum `Λ(A, B)` and `κ(A, B)` with default zero
/// thresholds.
pub fn generalized_spectrum<T: Real>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
) -> Result<PencilReport<T>> {
    generalized_spectrum_with(a, b, ZeroTol::Default)
}

pub fn generalized_spectrum_with<T: Real>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    zero_tol: ZeroTol<T>,
) -> Result<PencilReport<T>> {
    if a.order() != b.order() {
        return Err(Error::DimensionMismatch {
            expected: a.order(),
            got: b.order(),
        });
    }
    let na = nullspace(a, zero_tol)?;
    let nb = nullspace(b, zero_tol)?;
    check_same_nullspace(&na, &nb)?;
    if na.complement_basis.cols() == 0 {
        return Err(Error::ZeroMatrix {
            zero_tol: na.zero_tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    let vals = restricted_pencil_eigenvalues(a, b, &na.complement_basis)?;
    Ok(PencilReport::from_eigenvalues(
        vals,
        na.dim(),
        na.zero_tol,
        nb.zero_tol,
    ))
}

/// Errors with [`Error::NullSpaceMismatch`] unless both null spaces have the
/// same dimension and lie within [`NULLSPACE_ANGLE_TOL`] of each other.
pub fn check_same_nullspace<T: Real>(na: &NullSpaceInfo<T>, nb: &NullSpaceInfo<T>) -> Result<()> {
    let mismatch = |angle: f64| Error::NullSpaceMismatch {
        dim_a: na.dim(),
        dim_b: nb.dim(),
        angle,
    };
    if na.dim() != nb.dim() {
        return Err(mismatch(f64::NAN));
    }
    let angle = max_principal_angle(&na.basis, &nb.basis);
    if angle > T::lit(NULLSPACE_ANGLE_TOL) {
        return Err(mismatch(angle.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}
