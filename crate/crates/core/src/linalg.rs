//! Dense complex helpers shared by the subspace and relation layers.

use faer::{Mat, MatRef, Side};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn to_faer(m: &CMatrix) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: MatRef<'_, C64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// SVD `m = U diag(s) V^H` with `s` nonincreasing. The thin form is used
/// unless `full_v` asks for all of `V` on a wide matrix.
///
/// nalgebra's complex SVD loses accuracy on some rank-deficient inputs (errors
/// of order 1e-3 were observed), so decompositions go through faer.
fn svd(m: &CMatrix, full_v: bool) -> (Vec<f64>, CMatrix, CMatrix) {
    let a = to_faer(m);
    let d = if full_v && m.nrows() < m.ncols() {
        a.svd()
    } else {
        a.thin_svd()
    };
    match d {
        Ok(d) => {
            let s = (0..m.nrows().min(m.ncols())).map(|k| d.S()[k].re).collect();
            (s, from_faer(d.U()), from_faer(d.V()))
        }
        Err(_) => svd_via_qr(m, full_v),
    }
}

/// Fallback for inputs on which faer's SVD reports no convergence: reduce to
/// the square triangular factor of a QR decomposition first.
fn svd_via_qr(m: &CMatrix, full_v: bool) -> (Vec<f64>, CMatrix, CMatrix) {
    let (rows, cols) = m.shape();
    if rows < cols {
        // m^H = U S V^H, so m = V S U^H.
        let (s, u, v) = svd_via_qr(&m.adjoint(), false);
        if !full_v {
            return (s, v, u);
        }
        let q = to_faer(&u).qr().compute_Q();
        let full = hstack(
            &u,
            &from_faer(q.as_ref())
                .columns(rows, cols - rows)
                .into_owned(),
        );
        return (s, v, full);
    }
    let qr = to_faer(m).qr();
    let q = from_faer(qr.compute_thin_Q().as_ref());
    let r = from_faer(qr.thin_R());
    let d = to_faer(&r)
        .thin_svd()
        .expect("SVD of the triangular factor did not converge");
    let s = (0..cols).map(|k| d.S()[k].re).collect();
    (s, q * from_faer(d.U()), from_faer(d.V()))
}

/// Orthonormal basis of the column space.
///
/// Singular values at or below `tol * max(sigma_max, scale)` are discarded.
/// `scale = 0` gives a purely relative cutoff; frames built from orthonormal
/// data pass `scale = 1` so that rounding noise on a vanishing block is not
/// mistaken for rank.
pub(crate) fn column_space(m: &CMatrix, tol: f64, scale: f64) -> CMatrix {
    let rows = m.nrows();
    if rows == 0 || m.ncols() == 0 {
        return CMatrix::zeros(rows, 0);
    }
    let (sigma, u, _) = svd(m, false);
    let cutoff = tol * sigma[0].max(scale);
    let rank = sigma.iter().take_while(|&&s| s > cutoff && s > 0.0).count();
    u.columns(0, rank).into_owned()
}

/// Orthonormal basis of the right null space, with an absolute cutoff.
pub(crate) fn null_space(m: &CMatrix, tol: f64) -> CMatrix {
    let cols = m.ncols();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMatrix::identity(cols, cols);
    }
    let (sigma, _, v) = svd(m, true);
    // Columns of V beyond the row count carry no singular value at all.
    let rank = sigma.iter().take_while(|&&s| s > tol).count();
    v.columns(rank, cols - rank).into_owned()
}

pub(crate) fn spectral_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    match to_faer(m).singular_values() {
        Ok(s) => s.first().copied().unwrap_or(0.0),
        Err(_) => svd_via_qr(m, false).0[0],
    }
}

/// Eigenvalues (nondecreasing) and eigenvectors of a Hermitian matrix; the
/// matrix is symmetrized first.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    if m.nrows() == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = to_faer(&sym)
        .self_adjoint_eigen(Side::Lower)
        .expect("eigensolver did not converge");
    let values = (0..m.nrows()).map(|k| eig.S()[k].re).collect();
    (values, from_faer(eig.U()))
}

pub(crate) fn vstack(top: &CMatrix, bottom: &CMatrix) -> CMatrix {
    assert_eq!(top.ncols(), bottom.ncols());
    let mut out = CMatrix::zeros(top.nrows() + bottom.nrows(), top.ncols());
    out.rows_mut(0, top.nrows()).copy_from(top);
    out.rows_mut(top.nrows(), bottom.nrows()).copy_from(bottom);
    out
}

pub(crate) fn hstack(left: &CMatrix, right: &CMatrix) -> CMatrix {
    assert_eq!(left.nrows(), right.nrows());
    let mut out = CMatrix::zeros(left.nrows(), left.ncols() + right.ncols());
    out.columns_mut(0, left.ncols()).copy_from(left);
    out.columns_mut(left.ncols(), right.ncols())
        .copy_from(right);
    out
}

pub(crate) fn block_diag(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), (b.nrows(), b.ncols()))
        .copy_from(b);
    out
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}
