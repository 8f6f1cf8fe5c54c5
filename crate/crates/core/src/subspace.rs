//! Linear subspaces of `C^d` carried by orthonormal frames.
//!
//! Frames are not canonical, so two subspaces are compared through their
//! orthogonal projectors: `gap(A, B) = ||P_A - P_B||` in operator norm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// Numerical thresholds behind every predicate in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceConfig {
    /// Relative singular-value cutoff for rank decisions.
    pub rank_tol: f64,
    /// Eigenvalue floor for semidefiniteness tests.
    pub psd_tol: f64,
    /// Projector distance below which two subspaces are equal.
    pub gap_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_tol: 1e-10,
            psd_tol: 1e-10,
            gap_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn new(rank_tol: f64, psd_tol: f64, gap_tol: f64) -> Result<Self> {
        let cfg = Self {
            rank_tol,
            psd_tol,
            gap_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_tol", self.rank_tol),
            ("psd_tol", self.psd_tol),
            ("gap_tol", self.gap_tol),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Precondition(format!(
                    "{name} must be a finite nonnegative number, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// A linear subspace of `C^d`, stored as a `d x r` matrix with orthonormal columns.
#[derive(Debug, Clone)]
pub struct Subspace {
    frame: CMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            frame: CMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            frame: CMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// Span of standard basis vectors, given by 0-based index.
    pub fn coordinate<I: IntoIterator<Item = usize>>(ambient_dim: usize, indices: I) -> Self {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        assert!(
            idx.iter().all(|&i| i < ambient_dim),
            "coordinate index out of range"
        );
        let mut frame = CMatrix::zeros(ambient_dim, idx.len());
        for (col, &i) in idx.iter().enumerate() {
            frame[(i, col)] = linalg::c(1.0, 0.0);
        }
        Self { frame }
    }

    /// Span of a finite family of vectors in `C^d`.
    ///
    /// The dimension is the numerical rank under `cfg.rank_tol`, relative to
    /// the largest singular value of the family.
    pub fn orthonormalize(
        ambient_dim: usize,
        vectors: &[CVector],
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::AmbientMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
        }
        let mut m = CMatrix::zeros(ambient_dim, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            m.set_column(j, v);
        }
        Self::from_columns(&m, cfg)
    }

    /// Column span of `m`, with the relative rank cutoff.
    pub fn from_columns(m: &CMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        if !linalg::is_finite(m) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            frame: linalg::column_space(m, cfg.rank_tol, 0.0),
        })
    }

    /// Column span of data derived from orthonormal frames (entries of order one).
    pub(crate) fn span_unit_scale(m: &CMatrix, cfg: &ToleranceConfig) -> Self {
        Self {
            frame: linalg::column_space(m, cfg.rank_tol, 1.0),
        }
    }

    /// Wraps a matrix whose columns are already orthonormal.
    pub(crate) fn from_orthonormal(frame: CMatrix) -> Self {
        Self { frame }
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.nrows()
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn frame(&self) -> &CMatrix {
        &self.frame
    }

    pub fn projector(&self) -> CMatrix {
        &self.frame * self.frame.adjoint()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::AmbientMismatch {
                expected: self.ambient_dim(),
                found: other.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Largest subspace contained in both.
    ///
    /// With `A` the smaller of the two, the singular values of `(I - P_B) Q_A`
    /// are the sines of the principal angles; the right singular vectors for
    /// sines at or below `rank_tol` give the intersection inside `A`.
    pub fn intersect(&self, other: &Subspace, cfg: &ToleranceConfig) -> Result<Subspace> {
        self.check_ambient(other)?;
        let d = self.ambient_dim();
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(d));
        }
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        let (a, b) = if self.dim() <= other.dim() {
            (self, other)
        } else {
            (other, self)
        };
        let outside = &a.frame - &b.frame * (b.frame.adjoint() * &a.frame);
        let coefficients = linalg::null_space(&outside, cfg.rank_tol);
        Ok(Subspace {
            frame: &a.frame * coefficients,
        })
    }

    pub fn sum(&self, other: &Subspace, cfg: &ToleranceConfig) -> Result<Subspace> {
        self.check_ambient(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        Ok(Subspace::span_unit_scale(
            &linalg::hstack(&self.frame, &other.frame),
            cfg,
        ))
    }

    /// Orthogonal complement in `C^d`.
    pub fn complement(&self) -> Subspace {
        let d = self.ambient_dim();
        if self.is_zero() {
            return Subspace::full(d);
        }
        // Singular values of an orthonormal frame are exactly one.
        Subspace {
            frame: linalg::null_space(&self.frame.adjoint(), 0.5),
        }
    }

    pub fn project(&self, v: &CVector) -> Result<CVector> {
        if v.len() != self.ambient_dim() {
            return Err(Error::AmbientMismatch {
                expected: self.ambient_dim(),
                found: v.len(),
            });
        }
        Ok(&self.frame * (self.frame.adjoint() * v))
    }

    /// Norm of the component of `v` orthogonal to this subspace.
    pub fn distance_to(&self, v: &CVector) -> Result<f64> {
        Ok((v - self.project(v)?).norm())
    }

    /// `||(I - P_self) Q_other||`: zero exactly when `other` lies in `self`.
    pub fn containment_residual(&self, other: &Subspace) -> Result<f64> {
        self.check_ambient(other)?;
        if other.is_zero() {
            return Ok(0.0);
        }
        if other.dim() > self.dim() {
            // Some unit vector of `other` is orthogonal to `self`.
            return Ok(1.0);
        }
        let resid = &other.frame - &self.frame * (self.frame.adjoint() * &other.frame);
        Ok(linalg::spectral_norm(&resid))
    }

    /// `other ⊂ self` within `gap_tol`.
    pub fn contains(&self, other: &Subspace, cfg: &ToleranceConfig) -> Result<bool> {
        Ok(self.containment_residual(other)? < cfg.gap_tol)
    }

    /// `||P_A - P_B||`, computed as the larger of the two one-sided residuals.
    pub fn gap(&self, other: &Subspace) -> Result<f64> {
        Ok(self
            .containment_residual(other)?
            .max(other.containment_residual(self)?))
    }

    pub fn approx_eq(&self, other: &Subspace, cfg: &ToleranceConfig) -> Result<bool> {
        Ok(self.gap(other)? < cfg.gap_tol)
    }

    /// `||Q_A^H Q_B||`; zero exactly when the subspaces are orthogonal.
    pub fn overlap(&self, other: &Subspace) -> Result<f64> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(0.0);
        }
        Ok(linalg::spectral_norm(
            &(self.frame.adjoint() * &other.frame),
        ))
    }

    /// Orthogonal and with zero intersection.
    pub fn direct_sum_check(&self, other: &Subspace, cfg: &ToleranceConfig) -> Result<bool> {
        Ok(self.overlap(other)? < cfg.gap_tol && self.intersect(other, cfg)?.is_zero())
    }

    /// Image under a unitary matrix.
    pub fn transform(&self, unitary: &CMatrix) -> Result<Subspace> {
        if unitary.ncols() != self.ambient_dim() || unitary.nrows() != self.ambient_dim() {
            return Err(Error::AmbientMismatch {
                expected: self.ambient_dim(),
                found: unitary.ncols(),
            });
        }
        Ok(Subspace {
            frame: unitary * &self.frame,
        })
    }

    /// Keeps only the listed coordinates (0-based) and re-orthonormalizes.
    pub(crate) fn compress_coordinates(&self, keep: &[usize], cfg: &ToleranceConfig) -> Subspace {
        let mut m = CMatrix::zeros(keep.len(), self.dim());
        for (r, &i) in keep.iter().enumerate() {
            m.set_row(r, &self.frame.row(i));
        }
        Subspace::span_unit_scale(&m, cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn v(xs: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(xs.len(), xs.iter().map(|&(a, b)| c(a, b)))
    }

    #[test]
    fn standard_basis_spans_everything() {
        let s = Subspace::orthonormalize(
            2,
            &[v(&[(1., 0.), (0., 0.)]), v(&[(0., 0.), (1., 0.)])],
            &cfg(),
        )
        .unwrap();
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn nearly_parallel_pair_collapses() {
        let s = Subspace::orthonormalize(
            2,
            &[v(&[(1., 0.), (0., 0.)]), v(&[(1., 0.), (1e-14, 0.)])],
            &cfg(),
        )
        .unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.gap(&Subspace::coordinate(2, [0])).unwrap() < 1e-12);
    }

    #[test]
    fn zero_vector_spans_zero_space() {
        let s = Subspace::orthonormalize(3, &[CVector::zeros(3)], &cfg()).unwrap();
        assert!(s.is_zero());
        let empty = Subspace::orthonormalize(0, &[], &cfg()).unwrap();
        assert_eq!(empty.ambient_dim(), 0);
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let err = Subspace::orthonormalize(2, &[CVector::zeros(3)], &cfg()).unwrap_err();
        assert!(matches!(err, Error::AmbientMismatch { .. }));
    }

    #[test]
    fn non_finite_rejected() {
        let m = CMatrix::from_element(2, 1, c(f64::NAN, 0.0));
        assert_eq!(
            Subspace::from_columns(&m, &cfg()).unwrap_err(),
            Error::NonFinite
        );
    }

    #[test]
    fn line_intersections() {
        let e1 = Subspace::coordinate(2, [0]);
        let diag = Subspace::orthonormalize(2, &[v(&[(1., 0.), (1., 0.)])], &cfg()).unwrap();
        assert!(e1.intersect(&diag, &cfg()).unwrap().is_zero());
        let whole = Subspace::full(2);
        assert!(whole.intersect(&e1, &cfg()).unwrap().gap(&e1).unwrap() < 1e-14);
        assert_eq!(e1.sum(&diag, &cfg()).unwrap().dim(), 2);
    }

    #[test]
    fn complement_and_gap() {
        let e1 = Subspace::coordinate(2, [0]);
        let e2 = Subspace::coordinate(2, [1]);
        assert!(e1.complement().gap(&e2).unwrap() < 1e-14);
        assert_eq!(e1.gap(&e1).unwrap(), 0.0);
        assert!((e1.gap(&e2).unwrap() - 1.0).abs() < 1e-14);
        assert!(Subspace::zero(3).complement().is_full());
        assert!(Subspace::full(3).complement().is_zero());
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert!(a.intersect(&b, &cfg()).is_err());
        assert!(a.sum(&b, &cfg()).is_err());
        assert!(a.gap(&b).is_err());
    }

    #[test]
    fn direct_sum_of_orthogonal_lines() {
        let e1 = Subspace::coordinate(3, [0]);
        let e2 = Subspace::coordinate(3, [1]);
        assert!(e1.direct_sum_check(&e2, &cfg()).unwrap());
        assert!(!e1.direct_sum_check(&e1, &cfg()).unwrap());
    }

    #[test]
    fn tolerance_validation() {
        assert!(ToleranceConfig::new(1e-10, -1.0, 1e-8).is_err());
        assert!(ToleranceConfig::new(1e-10, 1e-10, f64::NAN).is_err());
        assert!(ToleranceConfig::new(0.0, 0.0, 0.0).is_ok());
    }
}
