//! Truncated `ℓ²(ℕ)` model of the elementary maximal operator and the shift.
//!
//! Basis vectors are written `δ_1, …, δ_N` and every public index in this
//! module is 1-based. Truncation distorts the last few coordinates, so
//! identities are asserted only after compressing onto the window
//! `δ_1, …, δ_{N - margin}`.

use crate::decompose::{dissipative_decompose, symmetric_wold_core, wold_structure};
use crate::error::{Error, Result};
use crate::invariance::{adjoint_within, Certificate};
use crate::linalg::{c, CMatrix, CVector, C64, I};
use crate::relation::Relation;
use crate::subspace::{Subspace, ToleranceConfig};
use crate::ztransform::z_transform;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowConfig {
    pub n: usize,
    pub margin: usize,
}

impl WindowConfig {
    pub const DEFAULT_MARGIN: usize = 4;

    pub fn new(n: usize, margin: usize) -> Result<Self> {
        let w = Self { n, margin };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 8 {
            return Err(Error::InvalidWindow(format!("N = {} is below 8", self.n)));
        }
        if self.margin < 2 {
            return Err(Error::InvalidWindow(format!(
                "margin = {} is below 2",
                self.margin
            )));
        }
        if self.margin >= self.n {
            return Err(Error::InvalidWindow(format!(
                "margin {} leaves no window in N = {}",
                self.margin, self.n
            )));
        }
        Ok(())
    }

    /// Last index covered by exact assertions.
    pub fn window(&self) -> usize {
        self.n - self.margin
    }

    fn keep(&self) -> Vec<usize> {
        (0..self.window()).collect()
    }
}

fn delta(n: usize, k: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[k - 1] = c(1.0, 0.0);
    v
}

/// `span{δ_k : k ∈ indices}`, 1-based.
pub fn span_deltas<It: IntoIterator<Item = usize>>(n: usize, indices: It) -> Subspace {
    Subspace::coordinate(n, indices.into_iter().map(|k| k - 1))
}

fn generated(n: usize, pairs: Vec<(CVector, CVector)>, cfg: &ToleranceConfig) -> Relation {
    Relation::from_pairs(n, &pairs, cfg).expect("generators have length n")
}

/// `S δ_k = δ_{k+1}` for `k < N`.
pub fn build_shift(w: &WindowConfig, cfg: &ToleranceConfig) -> Relation {
    let n = w.n;
    generated(
        n,
        (1..n).map(|k| (delta(n, k), delta(n, k + 1))).collect(),
        cfg,
    )
}

fn a_generators(n: usize, from: usize) -> Vec<(CVector, CVector)> {
    (from..n)
        .map(|k| {
            let f = delta(n, k) - delta(n, k + 1) * I;
            let g = delta(n, k) * I - delta(n, k + 1);
            (f, g)
        })
        .collect()
}

/// `A(δ_k - iδ_{k+1}) = iδ_k - δ_{k+1}` for `k < N`.
pub fn build_a(w: &WindowConfig, cfg: &ToleranceConfig) -> Relation {
    generated(w.n, a_generators(w.n, 1), cfg)
}

/// `A` with its domain restricted to `span{δ_2, …, δ_N}`.
pub fn build_b(w: &WindowConfig, cfg: &ToleranceConfig) -> Relation {
    generated(w.n, a_generators(w.n, 2), cfg)
}

/// `span{(0, δ_1)}`.
pub fn build_y(w: &WindowConfig, cfg: &ToleranceConfig) -> Relation {
    generated(w.n, vec![(CVector::zeros(w.n), delta(w.n, 1))], cfg)
}

pub fn build_a_inf(w: &WindowConfig, cfg: &ToleranceConfig) -> Relation {
    build_b(w, cfg)
        .orthogonal_sum(&build_y(w, cfg), cfg)
        .expect("B and Y live in orthogonal blocks")
}

/// Orthogonal compression of a subspace of `C^N` onto the window coordinates.
pub fn compress_subspace(s: &Subspace, w: &WindowConfig, cfg: &ToleranceConfig) -> Subspace {
    s.compress_coordinates(&w.keep(), cfg)
}

/// Compression of a relation: the window coordinates of both components.
pub fn compress_relation(t: &Relation, w: &WindowConfig, cfg: &ToleranceConfig) -> Subspace {
    let keep: Vec<usize> = w
        .keep()
        .into_iter()
        .chain(w.keep().into_iter().map(|i| i + w.n))
        .collect();
    t.graph().compress_coordinates(&keep, cfg)
}

/// An identity to be checked on the window.
#[derive(Debug, Clone, Copy)]
pub enum WindowClaim<'a> {
    Subspaces(&'a Subspace, &'a Subspace),
    Relations(&'a Relation, &'a Relation),
    /// A subspace against `span{δ_k}` for the listed 1-based indices.
    Spans(&'a Subspace, &'a [usize]),
}

/// Gap between the two sides of `claim` after compression onto the window.
pub fn window_residual(
    claim: WindowClaim<'_>,
    w: &WindowConfig,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    w.validate()?;
    let check = |dim: usize, expected: usize| {
        if dim == expected {
            Ok(())
        } else {
            Err(Error::AmbientMismatch {
                expected,
                found: dim,
            })
        }
    };
    match claim {
        WindowClaim::Subspaces(a, b) => {
            check(a.ambient_dim(), w.n)?;
            check(b.ambient_dim(), w.n)?;
            compress_subspace(a, w, cfg).gap(&compress_subspace(b, w, cfg))
        }
        WindowClaim::Relations(a, b) => {
            check(a.space_dim(), w.n)?;
            check(b.space_dim(), w.n)?;
            compress_relation(a, w, cfg).gap(&compress_relation(b, w, cfg))
        }
        WindowClaim::Spans(a, indices) => {
            check(a.ambient_dim(), w.n)?;
            if let Some(&bad) = indices.iter().find(|&&k| k == 0 || k > w.window()) {
                return Err(Error::OutsideWindow {
                    index: bad,
                    window: w.window(),
                });
            }
            let expected = span_deltas(w.n, indices.iter().copied());
            compress_subspace(a, w, cfg).gap(&compress_subspace(&expected, w, cfg))
        }
    }
}

pub fn window_assert(
    claim: WindowClaim<'_>,
    w: &WindowConfig,
    cfg: &ToleranceConfig,
) -> Result<bool> {
    Ok(window_residual(claim, w, cfg)? < cfg.gap_tol)
}

#[derive(Debug, Clone)]
pub struct SpectralProbe {
    /// `(ζ, dim ker(A - ζ))`; all asserted zero.
    pub kernels_of_a: Vec<(C64, usize)>,
    /// Distance of `δ_1` from `ker(A* + i)`.
    pub delta1_residual: f64,
    /// `(ζ, dim ker(A* - ζ))` for sampled `ζ` in the lower half-plane; reported only.
    pub adjoint_kernels: Vec<(C64, usize)>,
    pub passed: bool,
}

pub fn spectral_window_probe(w: &WindowConfig, cfg: &ToleranceConfig) -> Result<SpectralProbe> {
    w.validate()?;
    let a = build_a(w, cfg);
    let adj = a.adjoint();
    let kernels_of_a: Vec<(C64, usize)> = [I, -I, c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0)]
        .into_iter()
        .map(|z| (z, a.deficiency(z, cfg).dim()))
        .collect();
    let delta1_residual = adj
        .deficiency(-I, cfg)
        .dom(cfg)
        .distance_to(&delta(w.n, 1))?;
    let adjoint_kernels = [c(0.0, -2.0), c(1.0, -1.0), c(-1.0, -0.5)]
        .into_iter()
        .map(|z| (z, adj.deficiency(z, cfg).dim()))
        .collect();
    let passed = kernels_of_a.iter().all(|&(_, d)| d == 0) && delta1_residual < cfg.gap_tol;
    Ok(SpectralProbe {
        kernels_of_a,
        delta1_residual,
        adjoint_kernels,
        passed,
    })
}

/// Every check of the shift model, with the dimensions of the main spaces.
#[derive(Debug, Clone)]
pub struct ShiftModelReport {
    pub window: WindowConfig,
    pub certificates: Vec<Certificate>,
    pub probe: SpectralProbe,
    /// `dim K` and `dim L` of the symmetric decomposition of `A∞`.
    pub k_dim: usize,
    pub l_dim: usize,
    pub iterations: usize,
}

impl ShiftModelReport {
    pub fn all_passed(&self) -> bool {
        self.probe.passed && self.certificates.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.name == name)
    }
}

/// Builds the model and runs all window checks.
///
/// Exact checks (no compression) use `gap_tol`; window checks compress both
/// sides first.
pub fn run_shift_model(w: &WindowConfig, cfg: &ToleranceConfig) -> Result<ShiftModelReport> {
    w.validate()?;
    let n = w.n;
    let top = w.window();
    let tol = cfg.gap_tol;
    let mut certs = Vec::new();
    let windowed = |name: &str, claim: WindowClaim<'_>| -> Result<Certificate> {
        Ok(Certificate::new(name, window_residual(claim, w, cfg)?, tol))
    };

    let s = build_shift(w, cfg);
    let a = build_a(w, cfg);
    let b = build_b(w, cfg);
    let y = build_y(w, cfg);
    let a_inf = build_a_inf(w, cfg);
    let a_adj = a.adjoint();

    let s_class = s.classify(cfg);
    certs.push(Certificate::flag(
        "S is a non-unitary isometry",
        s_class.is_isometry && !s_class.is_unitary,
    ));
    let a_class = a.classify(cfg);
    certs.push(Certificate::flag(
        "A is a symmetric operator with proper domain",
        a_class.is_symmetric && a_class.is_operator && !a.dom(cfg).is_full(),
    ));
    certs.push(Certificate::new(
        "Z_i(A) = S",
        z_transform(&a, I, cfg).gap(&s)?,
        tol,
    ));
    certs.push(windowed(
        "Z_i(A) = S on the window",
        WindowClaim::Relations(&z_transform(&a, I, cfg), &s),
    )?);

    let l_a = a_adj.deficiency(-I, cfg).dom(cfg);
    certs.push(windowed(
        "ker(A* + i) = span{δ1}",
        WindowClaim::Spans(&l_a, &[1]),
    )?);

    let n_minus = a_adj.deficiency(-I, cfg);
    certs.push(windowed(
        "A* = A ∔ span{(δ1, -iδ1)}",
        WindowClaim::Relations(&a_adj, &a.graph_sum(&n_minus, cfg)?),
    )?);

    let k_space = span_deltas(n, 2..=n);
    certs.push(Certificate::flag(
        "ran B ⊂ span{δ2..δN}",
        k_space.contains(&b.ran(cfg), cfg)?,
    ));
    let d2 = delta(n, 2);
    let edge = generated(n, vec![(d2.clone(), d2 * -I)], cfg);
    certs.push(windowed(
        "B* in span{δ2..δN} = B ⊕ span{(δ2, -iδ2)}",
        WindowClaim::Relations(
            &adjoint_within(&b, &k_space, cfg)?,
            &b.graph_sum(&edge, cfg)?,
        ),
    )?);
    certs.push(windowed(
        "B* = A* ∔ Y",
        WindowClaim::Relations(&b.adjoint(), &a_adj.direct_sum(&y, cfg)?),
    )?);

    let inf_class = a_inf.classify(cfg);
    certs.push(Certificate::flag(
        "A∞ is symmetric and multivalued",
        inf_class.is_symmetric && !inf_class.is_operator,
    ));
    certs.push(Certificate::new(
        "mul A∞ = span{δ1}",
        a_inf.mul(cfg).gap(&span_deltas(n, [1]))?,
        tol,
    ));
    let expected_adj = b.graph_sum(&edge, cfg)?.orthogonal_sum(&y, cfg)?;
    certs.push(windowed(
        "A∞* = (B ⊕ span{(δ2, -iδ2)}) ⊕ Y",
        WindowClaim::Relations(&a_inf.adjoint(), &expected_adj),
    )?);

    let sym = symmetric_wold_core(&a_inf, cfg)?;
    let wandering = sym.wandering.clone().expect("symmetric engine reports L");
    certs.push(windowed(
        "L = span{δ2}",
        WindowClaim::Spans(&wandering, &[2]),
    )?);
    let k_indices: Vec<usize> = (2..=top).collect();
    certs.push(windowed(
        "K = span{δ2..δ(N-margin)}",
        WindowClaim::Spans(&sym.k, &k_indices),
    )?);
    certs.push(Certificate::new(
        "K⊥ = span{δ1}",
        sym.k.complement().gap(&span_deltas(n, [1]))?,
        tol,
    ));
    certs.push(Certificate::new(
        "A∞ restricted to K⊥ is Y",
        sym.part_kperp.gap(&y)?,
        tol,
    ));
    for cert in &sym.certificates {
        certs.push(Certificate {
            name: format!("symmetric decomposition of A∞: {}", cert.name),
            ..cert.clone()
        });
    }

    let diss = dissipative_decompose(&a, cfg)?;
    certs.push(Certificate::flag(
        "A is completely nonselfadjoint (K = {0})",
        compress_subspace(&diss.k, w, cfg).is_zero(),
    ));

    let wold = wold_structure(&s, cfg)?;
    certs.push(Certificate::flag(
        "S has trivial unitary part",
        wold.unitary_part.is_zero(),
    ));
    certs.push(windowed(
        "S has wandering space span{δ1}",
        WindowClaim::Spans(&wold.wandering, &[1]),
    )?);
    certs.push(Certificate::new(
        "S^m L are mutually orthogonal on the window",
        wandering_overlap(&s, &wold.wandering, w, cfg)?,
        tol,
    ));

    let probe = spectral_window_probe(w, cfg)?;
    Ok(ShiftModelReport {
        window: *w,
        certificates: certs,
        probe,
        k_dim: sym.k.dim(),
        l_dim: wandering.dim(),
        iterations: sym.iterations,
    })
}

/// Overlap bound `||X^H X - I||` for the window compressions of `S^m L`,
/// `m <= N - margin - 2`. Each layer must also survive compression.
fn wandering_overlap(
    s: &Relation,
    l: &Subspace,
    w: &WindowConfig,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    let mut layers = Vec::new();
    let mut current = l.clone();
    for _ in 0..=w.window().saturating_sub(2) {
        let compressed = compress_subspace(&current, w, cfg);
        if compressed.is_zero() {
            return Ok(1.0);
        }
        layers.push(compressed);
        current = s.image(&current, cfg)?;
    }
    let mut stacked = CMatrix::zeros(w.window(), 0);
    for layer in &layers {
        stacked = crate::linalg::hstack(&stacked, layer.frame());
    }
    let k = stacked.ncols();
    Ok(crate::linalg::spectral_norm(
        &(stacked.adjoint() * &stacked - CMatrix::identity(k, k)),
    ))
}

/// Runs the model at each size and checks that it passes everywhere and that
/// the operator agrees on the window of the smallest size.
pub fn window_monotonicity(sizes: &[usize], margin: usize, cfg: &ToleranceConfig) -> Result<bool> {
    let Some(&smallest) = sizes.iter().min() else {
        return Ok(true);
    };
    let base = WindowConfig::new(smallest, margin)?;
    let reference = compress_relation(&build_a(&base, cfg), &base, cfg);
    for &n in sizes {
        let w = WindowConfig::new(n, margin)?;
        if !run_shift_model(&w, cfg)?.all_passed() {
            return Ok(false);
        }
        // Compress the larger model onto the smallest window by embedding it.
        let larger = build_a(&w, cfg);
        let keep: Vec<usize> = (0..base.window())
            .chain((0..base.window()).map(|i| i + n))
            .collect();
        let inner = larger.graph().compress_coordinates(&keep, cfg);
        if inner.gap(&reference)? >= cfg.gap_tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Matrix of the truncated shift, for callers that want the operator itself.
pub fn shift_matrix(n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n.saturating_sub(1) {
        m[(k + 1, k)] = c(1.0, 0.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn w(n: usize) -> WindowConfig {
        WindowConfig::new(n, 4).unwrap()
    }

    #[test]
    fn window_config_validation() {
        assert!(WindowConfig::new(7, 2).is_err());
        assert!(WindowConfig::new(8, 1).is_err());
        assert!(WindowConfig::new(8, 8).is_err());
        assert_eq!(WindowConfig::new(16, 4).unwrap().window(), 12);
    }

    #[test]
    fn shift_structure() {
        let w = w(10);
        let s = build_shift(&w, &cfg());
        let class = s.classify(&cfg());
        assert!(class.is_isometry && !class.is_unitary);
        assert!(s.ker(&cfg()).is_zero());
        assert!(s.ran(&cfg()).gap(&span_deltas(10, 2..=10)).unwrap() < 1e-12);
        assert!(
            s.ran(&cfg())
                .complement()
                .gap(&span_deltas(10, [1]))
                .unwrap()
                < 1e-12
        );
        let direct = Relation::from_operator(&shift_matrix(10)).unwrap();
        assert!(s
            .contains(
                &direct
                    .restrict_domain(&span_deltas(10, 1..=9), &cfg())
                    .unwrap(),
                &cfg()
            )
            .unwrap());
    }

    #[test]
    fn transform_of_a_is_the_shift() {
        let w = w(12);
        let z = z_transform(&build_a(&w, &cfg()), I, &cfg());
        assert!(z.gap(&build_shift(&w, &cfg())).unwrap() < 1e-12);
    }

    #[test]
    fn a_is_symmetric_operator() {
        let a = build_a(&w(12), &cfg());
        let class = a.classify(&cfg());
        assert!(class.is_symmetric && class.is_operator && !class.is_maximal_dissipative);
        assert_eq!(a.dom(&cfg()).dim(), 11);
    }

    #[test]
    fn outside_window_is_an_error() {
        let w = w(12);
        let s = span_deltas(12, [1]);
        assert!(matches!(
            window_assert(WindowClaim::Spans(&s, &[9]), &w, &cfg()),
            Err(Error::OutsideWindow {
                index: 9,
                window: 8
            })
        ));
        assert!(window_assert(WindowClaim::Spans(&s, &[1]), &w, &cfg()).unwrap());
    }

    #[test]
    fn compression_hides_edge_artifact() {
        let w = w(12);
        let a = build_a(&w, &cfg());
        let plus = a.adjoint().deficiency(I, &cfg()).dom(&cfg());
        assert!(plus.gap(&span_deltas(12, [12])).unwrap() < 1e-12);
        assert!(compress_subspace(&plus, &w, &cfg()).is_zero());
    }

    #[test]
    fn probe_at_small_size() {
        let p = spectral_window_probe(&w(16), &cfg()).unwrap();
        assert!(p.passed, "{p:?}");
    }

    #[test]
    fn full_model_small() {
        let report = run_shift_model(&w(16), &cfg()).unwrap();
        let failed: Vec<_> = report.certificates.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert_eq!(report.k_dim, 15);
        assert_eq!(report.l_dim, 1);
    }
}
