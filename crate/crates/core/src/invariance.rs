//! Invariant and reducing subspaces of relations.

use crate::error::{Error, Result};
use crate::linalg::I;
use crate::relation::Relation;
use crate::subspace::{Subspace, ToleranceConfig};
use crate::ztransform::z_transform;

/// The three conditions of invariance, each as a separate verdict.
#[derive(Debug, Clone)]
pub struct InvarianceReport {
    /// `dom T = (dom T ∩ K) ⊕ (dom T ∩ K⊥)`.
    pub dom_splits: bool,
    /// `mul T = (mul T ∩ K) ⊕ (mul T ∩ K⊥)`.
    pub mul_splits: bool,
    /// `dom T_K = dom T ∩ K`.
    pub restricted_domain: bool,
    pub residuals: [f64; 3],
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        self.dom_splits && self.mul_splits && self.restricted_domain
    }
}

fn check_k(t: &Relation, k: &Subspace) -> Result<()> {
    if k.ambient_dim() != t.space_dim() {
        return Err(Error::AmbientMismatch {
            expected: t.space_dim(),
            found: k.ambient_dim(),
        });
    }
    Ok(())
}

fn splitting_gap(
    whole: &Subspace,
    k: &Subspace,
    kperp: &Subspace,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    let split = whole
        .intersect(k, cfg)?
        .sum(&whole.intersect(kperp, cfg)?, cfg)?;
    whole.gap(&split)
}

pub fn invariance(t: &Relation, k: &Subspace, cfg: &ToleranceConfig) -> Result<InvarianceReport> {
    check_k(t, k)?;
    let kperp = k.complement();
    let dom = t.dom(cfg);
    let mul = t.mul(cfg);
    let r_dom = splitting_gap(&dom, k, &kperp, cfg)?;
    let r_mul = splitting_gap(&mul, k, &kperp, cfg)?;
    let r_restr = t.restrict(k, cfg)?.dom(cfg).gap(&dom.intersect(k, cfg)?)?;
    Ok(InvarianceReport {
        dom_splits: r_dom < cfg.gap_tol,
        mul_splits: r_mul < cfg.gap_tol,
        restricted_domain: r_restr < cfg.gap_tol,
        residuals: [r_dom, r_mul, r_restr],
    })
}

pub fn is_invariant(t: &Relation, k: &Subspace, cfg: &ToleranceConfig) -> Result<bool> {
    Ok(invariance(t, k, cfg)?.holds())
}

/// `gap(T, T_K ⊕ T_{K⊥})`.
pub fn reduction_residual(t: &Relation, k: &Subspace, cfg: &ToleranceConfig) -> Result<f64> {
    check_k(t, k)?;
    let inside = t.restrict(k, cfg)?;
    let outside = t.restrict(&k.complement(), cfg)?;
    // The two parts live in orthogonal blocks, so their graphs are orthogonal.
    t.gap(&inside.graph_sum(&outside, cfg)?)
}

pub fn is_reducing(t: &Relation, k: &Subspace, cfg: &ToleranceConfig) -> Result<bool> {
    Ok(reduction_residual(t, k, cfg)? < cfg.gap_tol)
}

/// Adjoint of `T ⊂ K ⊕ K` taken in `K` as a Hilbert space, re-embedded in `H ⊕ H`.
pub fn adjoint_within(t: &Relation, k: &Subspace, cfg: &ToleranceConfig) -> Result<Relation> {
    check_k(t, k)?;
    t.compress(k, cfg)?.adjoint().embed(k)
}

/// One named certificate with the residual it compared against its tolerance.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
}

impl Certificate {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            passed: residual < tolerance,
            residual,
            tolerance,
        }
    }

    /// A yes/no fact with no continuous residual (dimension counts and the like).
    pub fn flag(name: impl Into<String>, passed: bool) -> Self {
        Self {
            name: name.into(),
            passed,
            residual: if passed { 0.0 } else { 1.0 },
            tolerance: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub reduces: bool,
    pub k_invariant: InvarianceReport,
    pub kperp_invariant: InvarianceReport,
    pub certificates: Vec<Certificate>,
}

impl ReductionReport {
    pub fn all_passed(&self) -> bool {
        self.certificates.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.name == name)
    }
}

/// Runs every consequence of `K` reducing `T`: invariance of `K` and `K⊥`,
/// reduction of `T*` and of `Z_{±i}(T)`, the adjoint distributing over the
/// parts, and the orthogonal splitting of `dom`, `ran`, `ker` and `mul`.
///
/// Nothing here errors on a failed check; failures are reported.
pub fn reduction_certificates(
    t: &Relation,
    k: &Subspace,
    cfg: &ToleranceConfig,
) -> Result<ReductionReport> {
    check_k(t, k)?;
    let tol = cfg.gap_tol;
    let kperp = k.complement();
    let mut certs = Vec::new();

    let reduce_res = reduction_residual(t, k, cfg)?;
    certs.push(Certificate::new("K reduces T", reduce_res, tol));

    let k_inv = invariance(t, k, cfg)?;
    let kp_inv = invariance(t, &kperp, cfg)?;
    certs.push(Certificate::flag("K is T-invariant", k_inv.holds()));
    certs.push(Certificate::flag("K⊥ is T-invariant", kp_inv.holds()));

    let adj = t.adjoint();
    certs.push(Certificate::new(
        "K reduces T*",
        reduction_residual(&adj, k, cfg)?,
        tol,
    ));
    certs.push(Certificate::new(
        "K reduces Z_i(T)",
        reduction_residual(&z_transform(t, I, cfg), k, cfg)?,
        tol,
    ));
    certs.push(Certificate::new(
        "K reduces Z_-i(T)",
        reduction_residual(&z_transform(t, -I, cfg), k, cfg)?,
        tol,
    ));

    let t_k = t.restrict(k, cfg)?;
    let t_kp = t.restrict(&kperp, cfg)?;
    let parts_k = t_k.parts(cfg);
    let parts_kp = t_kp.parts(cfg);
    let parts = t.parts(cfg);
    for (name, whole, a, b) in [
        ("dom splits", &parts.dom, &parts_k.dom, &parts_kp.dom),
        ("ran splits", &parts.ran, &parts_k.ran, &parts_kp.ran),
        ("ker splits", &parts.ker, &parts_k.ker, &parts_kp.ker),
        ("mul splits", &parts.mul, &parts_k.mul, &parts_kp.mul),
    ] {
        certs.push(Certificate::new(name, whole.gap(&a.sum(b, cfg)?)?, tol));
    }

    // The adjoint of each part is only defined when the part sits in its block,
    // which is automatic for restrictions.
    let adj_k = adjoint_within(&t_k, k, cfg)?;
    let adj_kp = adjoint_within(&t_kp, &kperp, cfg)?;
    certs.push(Certificate::new(
        "(T_K ⊕ T_K⊥)* = (T_K)* ⊕ (T_K⊥)*",
        t_k.graph_sum(&t_kp, cfg)?
            .adjoint()
            .gap(&adj_k.graph_sum(&adj_kp, cfg)?)?,
        tol,
    ));
    certs.push(Certificate::new(
        "(T_K)* = (T*)_K",
        adj_k.gap(&adj.restrict(k, cfg)?)?,
        tol,
    ));
    certs.push(Certificate::new(
        "(T_K⊥)* = (T*)_K⊥",
        adj_kp.gap(&adj.restrict(&kperp, cfg)?)?,
        tol,
    ));

    Ok(ReductionReport {
        reduces: reduce_res < tol,
        k_invariant: k_inv,
        kperp_invariant: kp_inv,
        certificates: certs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CMatrix};

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn op(n: usize, entries: &[(f64, f64)]) -> Relation {
        Relation::from_operator(&CMatrix::from_row_iterator(
            n,
            n,
            entries.iter().map(|&(a, b)| c(a, b)),
        ))
        .unwrap()
    }

    fn jordan() -> Relation {
        op(2, &[(0., 0.), (1., 0.), (0., 0.), (0., 0.)])
    }

    #[test]
    fn trivial_subspaces_are_invariant() {
        let t = jordan();
        assert!(is_invariant(&t, &Subspace::full(2), &cfg()).unwrap());
        assert!(is_invariant(&t, &Subspace::zero(2), &cfg()).unwrap());
    }

    #[test]
    fn axis_of_diagonal_is_invariant() {
        let t = op(2, &[(1., 0.), (0., 0.), (0., 0.), (2., 0.)]);
        assert!(is_invariant(&t, &Subspace::coordinate(2, [0]), &cfg()).unwrap());
    }

    #[test]
    fn jordan_second_axis_fails_restricted_domain() {
        let r = invariance(&jordan(), &Subspace::coordinate(2, [1]), &cfg()).unwrap();
        assert!(r.dom_splits && r.mul_splits);
        assert!(!r.restricted_domain);
    }

    #[test]
    fn block_diagonal_reduces() {
        let t = op(
            3,
            &[
                (1., 1.),
                (2., 0.),
                (0., 0.),
                (0., -1.),
                (3., 0.),
                (0., 0.),
                (0., 0.),
                (0., 0.),
                (5., 2.),
            ],
        );
        let k = Subspace::coordinate(3, [0, 1]);
        assert!(is_reducing(&t, &k, &cfg()).unwrap());
        let report = reduction_certificates(&t, &k, &cfg()).unwrap();
        assert!(report.all_passed(), "{:?}", report.certificates);
    }

    #[test]
    fn jordan_first_axis_does_not_reduce() {
        let k = Subspace::coordinate(2, [0]);
        assert!(!is_reducing(&jordan(), &k, &cfg()).unwrap());
        let report = reduction_certificates(&jordan(), &k, &cfg()).unwrap();
        assert!(report.k_invariant.holds());
        assert!(!report.kperp_invariant.holds());
        assert!(!report.reduces);
    }

    #[test]
    fn adjoint_within_a_line() {
        let t = op(2, &[(0., 1.), (0., 0.), (0., 0.), (5., 0.)]);
        let k = Subspace::coordinate(2, [0]);
        let part = t.restrict(&k, &cfg()).unwrap();
        let adj = adjoint_within(&part, &k, &cfg()).unwrap();
        let mut f = crate::linalg::CVector::zeros(2);
        f[0] = c(1.0, 0.0);
        let expected = Relation::from_pairs(2, &[(f.clone(), f * c(0.0, -1.0))], &cfg()).unwrap();
        assert!(adj.gap(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn adjoint_within_whole_space_is_adjoint() {
        let t = jordan();
        let adj = adjoint_within(&t, &Subspace::full(2), &cfg()).unwrap();
        assert!(adj.gap(&t.adjoint()).unwrap() < 1e-12);
    }

    #[test]
    fn adjoint_within_rejects_escaping_graph() {
        assert!(adjoint_within(&jordan(), &Subspace::coordinate(2, [0]), &cfg()).is_err());
    }

    #[test]
    fn ambient_mismatch() {
        assert!(is_reducing(&jordan(), &Subspace::full(3), &cfg()).is_err());
    }
}
