//! Closed linear relations in `H ⊕ H` with `H = C^n`.
//!
//! A relation is a subspace of `C^{2n}`. Its orthonormal frame splits into a
//! top block `F` and a bottom block `G`, so that `T = {(Fx, Gx)}`. Every
//! relation stored this way is closed.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, I};
use crate::subspace::{Subspace, ToleranceConfig};

#[derive(Debug, Clone)]
pub struct Relation {
    n: usize,
    graph: Subspace,
}

/// `dom`, `ran`, `ker` and `mul` of a relation.
#[derive(Debug, Clone)]
pub struct GraphParts {
    pub dom: Subspace,
    pub ran: Subspace,
    pub ker: Subspace,
    pub mul: Subspace,
}

/// Pointwise spectral class of `ζ` for a relation.
///
/// Ranges are closed in finite dimension, so the continuous spectrum is empty
/// and `QuasiRegularOnly` is never produced by [`Relation::classify_point`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralPointClass {
    Regular,
    Point,
    Residual,
    QuasiRegularOnly,
}

/// Extreme eigenvalues of the two Hermitian forms of a relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormBounds {
    pub dissipative_min_eig: f64,
    pub symmetric_max_abs: f64,
    pub contraction_min_eig: f64,
    pub isometry_max_abs: f64,
}

/// Boolean classification of a relation together with the numbers behind it.
#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub is_operator: bool,
    pub is_bounded: bool,
    pub is_contraction: bool,
    pub is_isometry: bool,
    pub is_unitary: bool,
    pub is_dissipative: bool,
    pub is_symmetric: bool,
    pub is_selfadjoint: bool,
    pub is_maximal_dissipative: bool,
    /// A graph vector `(f, g)` stacked in `C^{2n}` violating dissipativity,
    /// or failing that, contractivity.
    pub witness: Option<CVector>,
    pub residuals: ClassificationResiduals,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ClassificationResiduals {
    /// Smallest eigenvalue of `(F^H G - G^H F) / 2i`.
    pub dissipative_min_eig: f64,
    /// Largest |eigenvalue| of the same form.
    pub symmetric_max_abs: f64,
    /// Smallest eigenvalue of `F^H F - G^H G`.
    pub contraction_min_eig: f64,
    /// Largest |eigenvalue| of the same form.
    pub isometry_max_abs: f64,
    /// `gap(T, T*)`.
    pub adjoint_gap: f64,
    pub dom_dim: usize,
    pub ran_dim: usize,
    pub mul_dim: usize,
    /// `dim ran(T + iI)`.
    pub ran_plus_i_dim: usize,
}

impl Relation {
    pub fn from_graph(n: usize, graph: Subspace) -> Result<Self> {
        if graph.ambient_dim() != 2 * n {
            return Err(Error::AmbientMismatch {
                expected: 2 * n,
                found: graph.ambient_dim(),
            });
        }
        Ok(Self { n, graph })
    }

    /// `{0} × {0}`.
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            graph: Subspace::zero(2 * n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_operator(&CMatrix::identity(n, n)).expect("square")
    }

    /// Graph `{(x, Mx)}` of a square matrix.
    pub fn from_operator(m: &CMatrix) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "operator must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if !linalg::is_finite(m) {
            return Err(Error::NonFinite);
        }
        let stacked = linalg::vstack(&CMatrix::identity(n, n), m);
        // Columns have norm >= 1 and are independent; only the frame is needed.
        let frame = stacked.qr().q();
        Ok(Self {
            n,
            graph: Subspace::from_orthonormal(frame),
        })
    }

    /// Span of the given `(f, g)` pairs.
    pub fn from_pairs(
        n: usize,
        pairs: &[(CVector, CVector)],
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        let mut m = CMatrix::zeros(2 * n, pairs.len());
        for (j, (f, g)) in pairs.iter().enumerate() {
            if f.len() != n || g.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "pair {j} has lengths ({}, {}), expected {n}",
                    f.len(),
                    g.len()
                )));
            }
            m.view_mut((0, j), (n, 1)).copy_from(f);
            m.view_mut((n, j), (n, 1)).copy_from(g);
        }
        Ok(Self {
            n,
            graph: Subspace::from_columns(&m, cfg)?,
        })
    }

    /// Span of the columns of `[F; G]`, for arbitrary (not necessarily
    /// orthonormal) generator matrices of shape `n x r`.
    pub fn from_generators(f: &CMatrix, g: &CMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        if f.shape() != g.shape() {
            return Err(Error::DimensionMismatch(format!(
                "generator blocks differ in shape: {:?} vs {:?}",
                f.shape(),
                g.shape()
            )));
        }
        Ok(Self {
            n: f.nrows(),
            graph: Subspace::from_columns(&linalg::vstack(f, g), cfg)?,
        })
    }

    fn from_unit_columns(n: usize, m: &CMatrix, cfg: &ToleranceConfig) -> Self {
        Self {
            n,
            graph: Subspace::span_unit_scale(m, cfg),
        }
    }

    pub fn space_dim(&self) -> usize {
        self.n
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    /// Dimension of the graph.
    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    /// Top block of the frame.
    pub fn f(&self) -> CMatrix {
        self.graph.frame().rows(0, self.n).into_owned()
    }

    /// Bottom block of the frame.
    pub fn g(&self) -> CMatrix {
        self.graph.frame().rows(self.n, self.n).into_owned()
    }

    fn check_same_space(&self, other: &Relation) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    fn check_subspace(&self, k: &Subspace) -> Result<()> {
        if k.ambient_dim() != self.n {
            return Err(Error::AmbientMismatch {
                expected: self.n,
                found: k.ambient_dim(),
            });
        }
        Ok(())
    }

    pub fn dom(&self, cfg: &ToleranceConfig) -> Subspace {
        Subspace::span_unit_scale(&self.f(), cfg)
    }

    pub fn ran(&self, cfg: &ToleranceConfig) -> Subspace {
        Subspace::span_unit_scale(&self.g(), cfg)
    }

    /// `{Fx : Gx = 0}`.
    pub fn ker(&self, cfg: &ToleranceConfig) -> Subspace {
        let null = linalg::null_space(&self.g(), cfg.rank_tol);
        Subspace::span_unit_scale(&(self.f() * null), cfg)
    }

    /// `{Gx : Fx = 0}`.
    pub fn mul(&self, cfg: &ToleranceConfig) -> Subspace {
        let null = linalg::null_space(&self.f(), cfg.rank_tol);
        Subspace::span_unit_scale(&(self.g() * null), cfg)
    }

    pub fn parts(&self, cfg: &ToleranceConfig) -> GraphParts {
        GraphParts {
            dom: self.dom(cfg),
            ran: self.ran(cfg),
            ker: self.ker(cfg),
            mul: self.mul(cfg),
        }
    }

    pub fn is_operator(&self, cfg: &ToleranceConfig) -> bool {
        self.mul(cfg).is_zero()
    }

    /// `T + S = {(f, g + h) : (f, g) ∈ T, (f, h) ∈ S}`.
    pub fn add(&self, other: &Relation, cfg: &ToleranceConfig) -> Result<Relation> {
        self.check_same_space(other)?;
        let (ft, gt, fs, gs) = (self.f(), self.g(), other.f(), other.g());
        let constraint = linalg::hstack(&ft, &(-&fs));
        let null = linalg::null_space(&constraint, cfg.rank_tol);
        let x = null.rows(0, ft.ncols()).into_owned();
        let y = null.rows(ft.ncols(), fs.ncols()).into_owned();
        let top = &ft * &x;
        let bottom = &gt * &x + &gs * &y;
        Ok(Self::from_unit_columns(
            self.n,
            &linalg::vstack(&top, &bottom),
            cfg,
        ))
    }

    /// `ζT = {(f, ζg)}`. Note `scale(0)` is `dom T × {0}`, not the zero relation.
    pub fn scale(&self, zeta: C64, cfg: &ToleranceConfig) -> Relation {
        let bottom = self.g() * zeta;
        Self::from_unit_columns(self.n, &linalg::vstack(&self.f(), &bottom), cfg)
    }

    /// `self ∘ inner = {(f, k) : (f, g) ∈ inner, (g, k) ∈ self}`.
    pub fn compose(&self, inner: &Relation, cfg: &ToleranceConfig) -> Result<Relation> {
        self.check_same_space(inner)?;
        let (ft, gt, fs, gs) = (inner.f(), inner.g(), self.f(), self.g());
        let constraint = linalg::hstack(&gt, &(-&fs));
        let null = linalg::null_space(&constraint, cfg.rank_tol);
        let x = null.rows(0, ft.ncols()).into_owned();
        let y = null.rows(ft.ncols(), fs.ncols()).into_owned();
        let top = &ft * &x;
        let bottom = &gs * &y;
        Ok(Self::from_unit_columns(
            self.n,
            &linalg::vstack(&top, &bottom),
            cfg,
        ))
    }

    /// `T^{-1} = {(g, f)}`.
    pub fn inverse(&self) -> Relation {
        let frame = linalg::vstack(&self.g(), &self.f());
        Relation {
            n: self.n,
            graph: Subspace::from_orthonormal(frame),
        }
    }

    /// `T - ζI = {(f, g - ζf)}`.
    pub fn minus_identity(&self, zeta: C64, cfg: &ToleranceConfig) -> Relation {
        let f = self.f();
        let bottom = self.g() - &f * zeta;
        Self::from_unit_columns(self.n, &linalg::vstack(&f, &bottom), cfg)
    }

    /// `T* = (-T^{-1})^⊥`.
    pub fn adjoint(&self) -> Relation {
        let rotated = Subspace::from_orthonormal(linalg::vstack(&self.g(), &(-self.f())));
        Relation {
            n: self.n,
            graph: rotated.complement(),
        }
    }

    /// Closed relations are their own closure; every stored relation is closed.
    pub fn closure(&self) -> Relation {
        self.clone()
    }

    /// `T_K = T ∩ (K ⊕ K)`.
    pub fn restrict(&self, k: &Subspace, cfg: &ToleranceConfig) -> Result<Relation> {
        self.check_subspace(k)?;
        let kk = Subspace::from_orthonormal(linalg::block_diag(k.frame(), k.frame()));
        Ok(Relation {
            n: self.n,
            graph: self.graph.intersect(&kk, cfg)?,
        })
    }

    /// `T ∩ (K ⊕ H)`: the restriction of the domain to `K`.
    pub fn restrict_domain(&self, k: &Subspace, cfg: &ToleranceConfig) -> Result<Relation> {
        self.check_subspace(k)?;
        let coefficients = self.domain_coefficients(k, cfg);
        Ok(Relation {
            n: self.n,
            graph: Subspace::from_orthonormal(self.graph.frame() * coefficients),
        })
    }

    /// Orthonormal coefficient vectors `c` with `F c ∈ K`, i.e. the graph
    /// frame columns combinations lying in `K ⊕ H`.
    fn domain_coefficients(&self, k: &Subspace, cfg: &ToleranceConfig) -> CMatrix {
        let f = self.f();
        let outside = &f - k.frame() * (k.frame().adjoint() * &f);
        linalg::null_space(&outside, cfg.rank_tol)
    }

    /// `N_ζ(T) = {(f, ζf) ∈ T}`; its domain is `ker(T - ζI)`.
    pub fn deficiency(&self, zeta: C64, cfg: &ToleranceConfig) -> Relation {
        let n = self.n;
        let norm = (1.0 + zeta.norm_sqr()).sqrt();
        let id = CMatrix::identity(n, n);
        let diag = linalg::vstack(&id, &(&id * zeta)).unscale(norm);
        let line = Subspace::from_orthonormal(diag);
        Relation {
            n,
            graph: self.graph.intersect(&line, cfg).expect("same ambient"),
        }
    }

    /// `{g : (f, g) ∈ T, f ∈ U}`.
    pub fn image(&self, u: &Subspace, cfg: &ToleranceConfig) -> Result<Subspace> {
        self.check_subspace(u)?;
        let g = self.g() * self.domain_coefficients(u, cfg);
        Ok(Subspace::span_unit_scale(&g, cfg))
    }

    pub fn gap(&self, other: &Relation) -> Result<f64> {
        self.check_same_space(other)?;
        self.graph.gap(&other.graph)
    }

    pub fn approx_eq(&self, other: &Relation, cfg: &ToleranceConfig) -> Result<bool> {
        Ok(self.gap(other)? < cfg.gap_tol)
    }

    /// `other ⊂ self` within `gap_tol`.
    pub fn contains(&self, other: &Relation, cfg: &ToleranceConfig) -> Result<bool> {
        self.check_same_space(other)?;
        self.graph.contains(&other.graph, cfg)
    }

    /// Sum of graphs, without any independence requirement.
    pub fn graph_sum(&self, other: &Relation, cfg: &ToleranceConfig) -> Result<Relation> {
        self.check_same_space(other)?;
        Ok(Relation {
            n: self.n,
            graph: self.graph.sum(&other.graph, cfg)?,
        })
    }

    /// `T ∔ S`: graph sum of relations whose graphs intersect trivially.
    pub fn direct_sum(&self, other: &Relation, cfg: &ToleranceConfig) -> Result<Relation> {
        self.check_same_space(other)?;
        if !self.graph.intersect(&other.graph, cfg)?.is_zero() {
            return Err(Error::Precondition(
                "direct sum of relations with intersecting graphs".into(),
            ));
        }
        self.graph_sum(other, cfg)
    }

    /// `T ⊕ S`: graph sum of relations with orthogonal graphs.
    pub fn orthogonal_sum(&self, other: &Relation, cfg: &ToleranceConfig) -> Result<Relation> {
        self.check_same_space(other)?;
        let overlap = self.graph.overlap(&other.graph)?;
        if overlap >= cfg.gap_tol {
            return Err(Error::Precondition(format!(
                "orthogonal sum of non-orthogonal graphs (overlap {overlap:.3e})"
            )));
        }
        self.graph_sum(other, cfg)
    }

    /// Matrix of an operator defined on all of `C^n`.
    pub fn operator_matrix(&self, cfg: &ToleranceConfig) -> Result<CMatrix> {
        if !self.dom(cfg).is_full() || !self.mul(cfg).is_zero() || self.dim() != self.n {
            return Err(Error::Precondition(
                "operator_matrix needs an operator with full domain".into(),
            ));
        }
        let inv = self
            .f()
            .try_inverse()
            .ok_or_else(|| Error::Precondition("singular domain block".into()))?;
        Ok(self.g() * inv)
    }

    /// The relation viewed inside `K` as a Hilbert space of dimension `dim K`,
    /// using the frame of `K` as coordinates. Requires `T ⊂ K ⊕ K`.
    pub fn compress(&self, k: &Subspace, cfg: &ToleranceConfig) -> Result<Relation> {
        self.check_subspace(k)?;
        let kk = Subspace::from_orthonormal(linalg::block_diag(k.frame(), k.frame()));
        let resid = kk.containment_residual(&self.graph)?;
        if resid >= cfg.gap_tol {
            return Err(Error::Precondition(format!(
                "graph is not contained in K ⊕ K (residual {resid:.3e})"
            )));
        }
        let qh = k.frame().adjoint();
        let frame = linalg::vstack(&(&qh * self.f()), &(&qh * self.g()));
        Ok(Self::from_unit_columns(k.dim(), &frame, cfg))
    }

    /// Inverse of [`Relation::compress`]: a relation on `C^{dim K}` placed into `K ⊕ K`.
    pub fn embed(&self, k: &Subspace) -> Result<Relation> {
        if k.dim() != self.n {
            return Err(Error::AmbientMismatch {
                expected: k.dim(),
                found: self.n,
            });
        }
        let q = k.frame();
        let frame = linalg::vstack(&(q * self.f()), &(q * self.g()));
        Ok(Relation {
            n: k.ambient_dim(),
            graph: Subspace::from_orthonormal(frame),
        })
    }

    /// `{(Qf, Qg)}` for a unitary `Q`.
    pub fn transform(&self, unitary: &CMatrix) -> Result<Relation> {
        let qq = linalg::block_diag(unitary, unitary);
        Ok(Relation {
            n: self.n,
            graph: self.graph.transform(&qq)?,
        })
    }

    /// Extreme eigenvalues of the imaginary form `(F^H G - G^H F) / 2i` and
    /// of `F^H F - G^H G`, without the subspace work done by [`Relation::classify`].
    pub fn form_bounds(&self) -> FormBounds {
        let f = self.f();
        let g = self.g();
        let fh_g = f.adjoint() * &g;
        let form = (&fh_g - fh_g.adjoint()) * (-I * 0.5);
        let gram = f.adjoint() * &f - g.adjoint() * &g;
        let (diss, _) = linalg::hermitian_eigen(&form);
        let (contr, _) = linalg::hermitian_eigen(&gram);
        let min = |e: &[f64]| e.iter().copied().fold(0.0_f64, f64::min);
        let max_abs = |e: &[f64]| e.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        FormBounds {
            dissipative_min_eig: min(&diss),
            symmetric_max_abs: max_abs(&diss),
            contraction_min_eig: min(&contr),
            isometry_max_abs: max_abs(&contr),
        }
    }

    pub fn is_dissipative(&self, cfg: &ToleranceConfig) -> bool {
        self.form_bounds().dissipative_min_eig >= -cfg.psd_tol
    }

    pub fn is_symmetric(&self, cfg: &ToleranceConfig) -> bool {
        self.form_bounds().symmetric_max_abs <= cfg.psd_tol
    }

    pub fn is_contraction(&self, cfg: &ToleranceConfig) -> bool {
        self.form_bounds().contraction_min_eig >= -cfg.psd_tol
    }

    pub fn is_isometry(&self, cfg: &ToleranceConfig) -> bool {
        self.form_bounds().isometry_max_abs <= cfg.psd_tol
    }

    pub fn is_unitary(&self, cfg: &ToleranceConfig) -> bool {
        self.is_isometry(cfg) && self.dom(cfg).is_full() && self.ran(cfg).is_full()
    }

    pub fn classify(&self, cfg: &ToleranceConfig) -> ClassificationReport {
        let f = self.f();
        let g = self.g();
        let fh_g = f.adjoint() * &g;
        let form = (&fh_g - fh_g.adjoint()) * (-I * 0.5);
        let (diss_eigs, diss_vecs) = linalg::hermitian_eigen(&form);
        let gram = f.adjoint() * &f - g.adjoint() * &g;
        let (contr_eigs, contr_vecs) = linalg::hermitian_eigen(&gram);

        let min_idx = |e: &[f64]| {
            e.iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, &v)| (i, v))
        };
        let max_abs = |e: &[f64]| e.iter().fold(0.0_f64, |m, v| m.max(v.abs()));

        let (diss_idx, diss_min) = min_idx(&diss_eigs).unwrap_or((0, 0.0));
        let (contr_idx, contr_min) = min_idx(&contr_eigs).unwrap_or((0, 0.0));
        let sym_abs = max_abs(&diss_eigs);
        let iso_abs = max_abs(&contr_eigs);

        let parts = self.parts(cfg);
        let ran_plus_i = self.minus_identity(-I, cfg).ran(cfg);
        let adjoint_gap = self.gap(&self.adjoint()).expect("same space");

        let is_operator = parts.mul.is_zero();
        let is_dissipative = diss_min >= -cfg.psd_tol;
        let is_symmetric = is_dissipative && sym_abs <= cfg.psd_tol;
        let is_selfadjoint = is_symmetric && adjoint_gap < cfg.gap_tol;
        let is_contraction = contr_min >= -cfg.psd_tol;
        let is_isometry = is_contraction && iso_abs <= cfg.psd_tol;
        let is_unitary = is_isometry && parts.dom.is_full() && parts.ran.is_full();
        let is_maximal_dissipative = is_dissipative && ran_plus_i.is_full();

        let frame = self.graph.frame();
        let witness = if !is_dissipative {
            Some(frame * diss_vecs.column(diss_idx))
        } else if !is_contraction {
            Some(frame * contr_vecs.column(contr_idx))
        } else {
            None
        };

        ClassificationReport {
            is_operator,
            is_bounded: is_operator,
            is_contraction,
            is_isometry,
            is_unitary,
            is_dissipative,
            is_symmetric,
            is_selfadjoint,
            is_maximal_dissipative,
            witness,
            residuals: ClassificationResiduals {
                dissipative_min_eig: diss_min,
                symmetric_max_abs: sym_abs,
                contraction_min_eig: contr_min,
                isometry_max_abs: iso_abs,
                adjoint_gap,
                dom_dim: parts.dom.dim(),
                ran_dim: parts.ran.dim(),
                mul_dim: parts.mul.dim(),
                ran_plus_i_dim: ran_plus_i.dim(),
            },
        }
    }

    /// Point if `ker(T - ζ) ≠ {0}`; otherwise Regular when `ran(T - ζ) = H`
    /// and Residual when not.
    pub fn classify_point(&self, zeta: C64, cfg: &ToleranceConfig) -> SpectralPointClass {
        if !self.deficiency(zeta, cfg).dom(cfg).is_zero() {
            SpectralPointClass::Point
        } else if self.minus_identity(zeta, cfg).ran(cfg).is_full() {
            SpectralPointClass::Regular
        } else {
            SpectralPointClass::Residual
        }
    }
}
