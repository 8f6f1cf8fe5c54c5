//! Seeded random instances for property suites and benchmarks.
//!
//! Every generator builds its object directly (unitaries from QR, dissipative
//! operators as `H + iP`, and so on), never through the Z transform, so the
//! transform can be tested against them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, c, CMatrix, I};
use crate::relation::Relation;
use crate::subspace::{Subspace, ToleranceConfig};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed unitary (QR of a Gaussian matrix with the phases of
/// `diag R` removed).
pub fn unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    let qr = gaussian(n, n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c(1.0, 0.0)
        };
        let col = q.column(j) * phase;
        q.set_column(j, &col);
    }
    q
}

pub fn hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
    let g = gaussian(n, n, rng);
    (&g + g.adjoint()).scale(0.5)
}

pub fn positive_semidefinite(n: usize, rng: &mut impl Rng) -> CMatrix {
    let rank = rng.random_range(0..=n);
    let g = gaussian(n, rank, rng);
    &g * g.adjoint()
}

/// Matrix with spectral norm exactly `bound`.
pub fn contraction_matrix(n: usize, bound: f64, rng: &mut impl Rng) -> CMatrix {
    let g = gaussian(n, n, rng);
    let norm = linalg::spectral_norm(&g);
    if norm == 0.0 {
        g
    } else {
        g * c(bound / norm, 0.0)
    }
}

/// Random subspace of the given dimension.
pub fn subspace(n: usize, dim: usize, rng: &mut impl Rng) -> Subspace {
    let q = unitary(n, rng);
    Subspace::from_orthonormal(q.columns(0, dim).into_owned())
}

/// Span of `r` random generator pairs, with a random share of the pairs
/// having zero first component (so the multivalued part is often nontrivial).
pub fn relation(n: usize, rng: &mut impl Rng, cfg: &ToleranceConfig) -> Relation {
    let r = rng.random_range(0..=2 * n);
    let mut f = gaussian(n, r, rng);
    let g = gaussian(n, r, rng);
    for j in 0..r {
        if rng.random_bool(0.2) {
            f.column_mut(j).fill(c(0.0, 0.0));
        }
    }
    Relation::from_generators(&f, &g, cfg).expect("finite generators")
}

/// `{(f, Af + m) : f ∈ D, m ∈ M}` where `M` is a random multivalued part,
/// `D ⊂ M⊥` a random domain and `A` the compression of `base` to `M⊥`.
fn structured(
    n: usize,
    base: &CMatrix,
    full_domain: bool,
    rng: &mut impl Rng,
    cfg: &ToleranceConfig,
) -> Relation {
    let q = unitary(n, rng);
    let mul_dim = if rng.random_bool(0.3) {
        rng.random_range(1..=n)
    } else {
        0
    };
    let k = n - mul_dim;
    let kframe = q.columns(0, k).into_owned();
    let mframe = q.columns(k, mul_dim).into_owned();
    let dom_dim = if full_domain || k == 0 {
        k
    } else {
        rng.random_range(0..=k)
    };
    let inner = unitary(k, rng);
    let dframe = &kframe * inner.columns(0, dom_dim);
    let compressed = &kframe * (kframe.adjoint() * base * &kframe) * kframe.adjoint();
    let top = linalg::hstack(&dframe, &CMatrix::zeros(n, mul_dim));
    let bottom = linalg::hstack(&(&compressed * &dframe), &mframe);
    Relation::from_generators(&top, &bottom, cfg).expect("finite generators")
}

/// Dissipative relation with random multivalued part and domain.
pub fn dissipative(n: usize, rng: &mut impl Rng, cfg: &ToleranceConfig) -> Relation {
    let base = hermitian(n, rng) + positive_semidefinite(n, rng) * I;
    structured(n, &base, false, rng, cfg)
}

/// Symmetric relation; the domain is usually proper, so it is rarely selfadjoint.
pub fn symmetric(n: usize, rng: &mut impl Rng, cfg: &ToleranceConfig) -> Relation {
    let base = hermitian(n, rng);
    structured(n, &base, false, rng, cfg)
}

/// Selfadjoint relation: a Hermitian operator on `M⊥` plus `{0} × M`.
pub fn selfadjoint(n: usize, rng: &mut impl Rng, cfg: &ToleranceConfig) -> Relation {
    let base = hermitian(n, rng);
    structured(n, &base, true, rng, cfg)
}

/// Contraction relation: a strict contraction restricted to a random domain.
pub fn contraction(n: usize, rng: &mut impl Rng, cfg: &ToleranceConfig) -> Relation {
    let bound = rng.random_range(0.0..1.0);
    let m = contraction_matrix(n, bound, rng);
    restrict_randomly(&m, rng, cfg)
}

/// Isometric relation: a unitary restricted to a random domain.
pub fn isometry(n: usize, rng: &mut impl Rng, cfg: &ToleranceConfig) -> Relation {
    let u = unitary(n, rng);
    restrict_randomly(&u, rng, cfg)
}

pub fn unitary_relation(n: usize, rng: &mut impl Rng) -> Relation {
    Relation::from_operator(&unitary(n, rng)).expect("square")
}

fn restrict_randomly(m: &CMatrix, rng: &mut impl Rng, cfg: &ToleranceConfig) -> Relation {
    let n = m.nrows();
    let dim = rng.random_range(0..=n);
    let d = subspace(n, dim, rng);
    Relation::from_generators(d.frame(), &(m * d.frame()), cfg).expect("finite generators")
}

/// `V = Q diag(U, C) Q^H` with `U` a `k x k` unitary and `C` an `m x m`
/// matrix of norm at most `bound`. Returns `V` and `Q span{e_1..e_k}`.
pub fn nfl_instance(k: usize, m: usize, bound: f64, rng: &mut impl Rng) -> (Relation, Subspace) {
    let n = k + m;
    let q = unitary(n, rng);
    let u = unitary(k, rng);
    let scale = rng.random_range(0.0..=bound);
    let cm = contraction_matrix(m, scale, rng);
    let v = &q * linalg::block_diag(&u, &cm) * q.adjoint();
    let k_space = Subspace::from_orthonormal(q.columns(0, k).into_owned());
    (Relation::from_operator(&v).expect("square"), k_space)
}

/// A relation `T` with a reducing subspace `K`: `T = Q(T_1 ⊕ T_2)Q^H` where
/// `T_1`, `T_2` are random relations on `C^k` and `C^{n-k}`.
pub fn reducing_pair(n: usize, rng: &mut impl Rng, cfg: &ToleranceConfig) -> (Relation, Subspace) {
    let k = rng.random_range(0..=n);
    let first = relation(k, rng, cfg);
    let second = relation(n - k, rng, cfg);
    let f = linalg::block_diag(&first.f(), &second.f());
    let g = linalg::block_diag(&first.g(), &second.g());
    let q = unitary(n, rng);
    let t = Relation::from_generators(&(&q * f), &(&q * g), cfg).expect("finite generators");
    let k_space = Subspace::from_orthonormal(q.columns(0, k).into_owned());
    (t, k_space)
}

/// A pair where `K` is invariant for `T` but does not reduce it: an upper
/// block-triangular operator with a nonzero coupling block.
pub fn invariant_not_reducing(n: usize, rng: &mut impl Rng) -> (Relation, Subspace) {
    assert!(n >= 2, "needs two nontrivial blocks");
    let k = rng.random_range(1..n);
    let mut m = gaussian(n, n, rng);
    for i in k..n {
        for j in 0..k {
            m[(i, j)] = c(0.0, 0.0);
        }
    }
    // Make the coupling block clearly nonzero.
    m[(0, k)] += c(1.0, 0.0);
    let q = unitary(n, rng);
    let t = Relation::from_operator(&(&q * m * q.adjoint())).expect("square");
    (t, Subspace::from_orthonormal(q.columns(0, k).into_owned()))
}
