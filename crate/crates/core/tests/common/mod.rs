#![allow(dead_code)]

use linrel::sample::{self, SampleRng};
use linrel::{c, Relation, SpectralPointClass, Subspace, ToleranceConfig, C64, I};
use rand::Rng;

pub fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

pub fn zetas() -> [C64; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [I, -I, c(0.0, 2.0), c(h, h)]
}

/// A random relation in the orthogonal complement of `t`'s graph.
pub fn orthogonal_partner(t: &Relation, rng: &mut SampleRng, cfg: &ToleranceConfig) -> Relation {
    let n = t.space_dim();
    let perp = t.graph().complement();
    let dim = rng.random_range(0..=perp.dim());
    let mix = sample::gaussian(perp.dim(), dim, rng);
    let graph = Subspace::from_columns(&(perp.frame() * mix), cfg).unwrap();
    Relation::from_graph(n, graph).unwrap()
}

/// Whenever `ζ` is classified residual for `T`, `ζ̄` must be an eigenvalue of `T*`.
/// Returns the number of residual verdicts seen, or `Err` with the offending point.
pub fn conjugate_residual(t: &Relation, zeta: C64, cfg: &ToleranceConfig) -> Result<usize, C64> {
    if t.classify_point(zeta, cfg) != SpectralPointClass::Residual {
        return Ok(0);
    }
    if t.adjoint().deficiency(zeta.conj(), cfg).dom(cfg).is_zero() {
        return Err(zeta);
    }
    Ok(1)
}
