//! Canonical decompositions along a distinguished reducing subspace `K`.
//!
//! * [`nfl_decompose`]: closed contraction = unitary part on `K` ⊕ completely
//!   nonunitary part on `K⊥`.
//! * [`wold_decompose`]: full-domain isometry = unitary part on `K` ⊕ shift on `K⊥`.
//! * [`dissipative_decompose`]: closed dissipative relation = selfadjoint part
//!   on `K` ⊕ completely nonselfadjoint part on `K⊥`, obtained by running the
//!   contraction engine on `Z_i(L)`.
//! * [`symmetric_wold_decompose`]: maximal symmetric relation = elementary
//!   maximal part on `K` ⊕ selfadjoint part on `K⊥`. Note the orientation is
//!   the reverse of the Wold case: here `K` carries the shift.
//!
//! "Completely nonunitary" and "completely nonselfadjoint" are certified by
//! re-running the engine on the complementary part and observing `K' = {0}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::invariance::{reduction_residual, Certificate};
use crate::linalg::{self, CMatrix, I};
use crate::relation::Relation;
use crate::subspace::{Subspace, ToleranceConfig};
use crate::ztransform::z_transform;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionMode {
    Nfl,
    Wold,
    Dissipative,
    Symmetric,
}

impl FromStr for DecompositionMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "nfl" => Ok(Self::Nfl),
            "wold" => Ok(Self::Wold),
            "dissipative" => Ok(Self::Dissipative),
            "symmetric" => Ok(Self::Symmetric),
            other => Err(format!(
                "unknown mode `{other}` (expected nfl|wold|dissipative|symmetric)"
            )),
        }
    }
}

impl fmt::Display for DecompositionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Nfl => "nfl",
            Self::Wold => "wold",
            Self::Dissipative => "dissipative",
            Self::Symmetric => "symmetric",
        })
    }
}

#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub mode: DecompositionMode,
    /// The distinguished reducing subspace.
    pub k: Subspace,
    /// `T_K`.
    pub part_k: Relation,
    /// `T_{K⊥}`.
    pub part_kperp: Relation,
    /// Wandering space, for the Wold-type engines.
    pub wandering: Option<Subspace>,
    pub certificates: Vec<Certificate>,
    /// Doubling stages taken by the subspace iteration.
    pub iterations: usize,
}

impl DecompositionResult {
    pub fn all_passed(&self) -> bool {
        self.certificates.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.name == name)
    }
}

/// Iterates a monotone subspace chain by doubling.
///
/// Each stage calls `step(current, power)` and then replaces `power` by its
/// square, so a chain indexed by `m` advances `m -> 2m + 1` per stage and a
/// chain of length `n` stabilizes in about `log2 n` stages. Stops as soon as
/// the dimension does not change, which for a monotone chain means the whole
/// chain is stationary.
fn stabilize<P, F, Q>(
    start: Subspace,
    power: P,
    cap: usize,
    what: &'static str,
    mut step: F,
    mut square: Q,
) -> Result<(Subspace, usize)>
where
    F: FnMut(&Subspace, &P) -> Result<Subspace>,
    Q: FnMut(&P) -> Result<P>,
{
    let mut current = start;
    let mut power = power;
    for stage in 1..=cap.max(1) {
        let next = step(&current, &power)?;
        if next.dim() == current.dim() {
            return Ok((next, stage));
        }
        current = next;
        power = square(&power)?;
    }
    Err(Error::NoStabilization { what, cap })
}

fn chain_cap(n: usize) -> usize {
    2 * (usize::BITS - n.leading_zeros()) as usize + 2
}

/// `V̂ = V ⊕ {(h, 0) : h ⊥ dom V}`: the maximal contraction padding `V` by zero.
pub fn maximalize_contraction(v: &Relation, cfg: &ToleranceConfig) -> Result<Relation> {
    let bounds = v.form_bounds();
    if bounds.contraction_min_eig < -cfg.psd_tol {
        return Err(Error::Precondition(format!(
            "not a contraction (min eigenvalue of F^H F - G^H G is {:.3e})",
            bounds.contraction_min_eig
        )));
    }
    let n = v.space_dim();
    let pad = v.dom(cfg).complement();
    let zeros = CMatrix::zeros(n, pad.dim());
    let w = Relation::from_graph(
        n,
        Subspace::from_orthonormal(linalg::vstack(pad.frame(), &zeros)),
    )?;
    v.orthogonal_sum(&w, cfg)
}

/// Largest subspace `A ⊂ ker(I - M^H M)` with `M A ⊂ A`.
///
/// This is the limit of `A_j = ∩_{i <= j} ker(D M^i)`, `D = I - M^H M`.
/// The chain is decreasing and satisfies `A_{2j+1} = A_j ∩ (M^{j+1})^{-1} A_j`,
/// which is what each doubling stage computes.
fn isometric_orbit_kernel(m: &CMatrix, cfg: &ToleranceConfig) -> Result<(Subspace, usize)> {
    let n = m.nrows();
    let defect = CMatrix::identity(n, n) - m.adjoint() * m;
    let start = Subspace::from_orthonormal(linalg::null_space(&defect, cfg.rank_tol));
    stabilize(
        start,
        m.clone(),
        chain_cap(n),
        "unitary-part iteration",
        |a, p| {
            let q = a.frame();
            let image = p * q;
            let leave = &image - q * (q.adjoint() * &image);
            let coefficients = linalg::null_space(&leave, cfg.rank_tol);
            Ok(Subspace::from_orthonormal(q * coefficients))
        },
        |p| Ok(p * p),
    )
}

fn unitary_part_with_steps(vhat: &Relation, cfg: &ToleranceConfig) -> Result<(Subspace, usize)> {
    let m = vhat.operator_matrix(cfg)?;
    if !vhat.is_contraction(cfg) {
        return Err(Error::Precondition("not a contraction".into()));
    }
    let (forward, s1) = isometric_orbit_kernel(&m, cfg)?;
    let (backward, s2) = isometric_orbit_kernel(&m.adjoint(), cfg)?;
    Ok((forward.intersect(&backward, cfg)?, s1.max(s2)))
}

/// Largest reducing subspace on which a full-domain contraction is unitary:
/// the vectors whose forward and backward orbits stay in the defect kernels.
pub fn unitary_part_subspace(vhat: &Relation, cfg: &ToleranceConfig) -> Result<Subspace> {
    Ok(unitary_part_with_steps(vhat, cfg)?.0)
}

/// Unitary part of a contraction that lives in `space`, computed in the
/// coordinates of `space` and re-embedded.
fn unitary_part_in(v: &Relation, space: &Subspace, cfg: &ToleranceConfig) -> Result<Subspace> {
    let local = v.compress(space, cfg)?;
    let hat = maximalize_contraction(&local, cfg)?;
    let k = unitary_part_subspace(&hat, cfg)?;
    Ok(Subspace::from_orthonormal(space.frame() * k.frame()))
}

fn restrict_both(
    t: &Relation,
    k: &Subspace,
    cfg: &ToleranceConfig,
) -> Result<(Relation, Relation, Subspace)> {
    let kperp = k.complement();
    Ok((t.restrict(k, cfg)?, t.restrict(&kperp, cfg)?, kperp))
}

/// Selfadjointness of a part, measured inside its own block.
fn selfadjoint_within(part: &Relation, space: &Subspace, cfg: &ToleranceConfig) -> Result<f64> {
    let local = part.compress(space, cfg)?;
    local.gap(&local.adjoint())
}

pub fn nfl_decompose(v: &Relation, cfg: &ToleranceConfig) -> Result<DecompositionResult> {
    let vhat = maximalize_contraction(v, cfg)?;
    let (k, iterations) = unitary_part_with_steps(&vhat, cfg)?;
    let (part_k, part_kperp, kperp) = restrict_both(v, &k, cfg)?;
    let tol = cfg.gap_tol;

    let mut certs = vec![Certificate::new(
        "K reduces V",
        reduction_residual(v, &k, cfg)?,
        tol,
    )];
    certs.push(Certificate::new(
        "K ⊂ dom V",
        v.dom(cfg).containment_residual(&k)?,
        tol,
    ));
    let local = part_k.compress(&k, cfg)?;
    certs.push(Certificate::flag(
        "V_K is unitary in K",
        local.is_unitary(cfg),
    ));
    let inner = unitary_part_in(&part_kperp, &kperp, cfg)?;
    certs.push(Certificate::flag(
        "V_K⊥ is completely nonunitary",
        inner.is_zero(),
    ));

    Ok(DecompositionResult {
        mode: DecompositionMode::Nfl,
        k,
        part_k,
        part_kperp,
        wandering: None,
        certificates: certs,
        iterations,
    })
}

/// Unitary part and wandering space of an isometric relation.
#[derive(Debug, Clone)]
pub struct WoldStructure {
    /// `∩ ran V^m`.
    pub unitary_part: Subspace,
    /// `H ⊖ ran V`.
    pub wandering: Subspace,
    /// `Σ V^m L`.
    pub orbit_sum: Subspace,
    /// `||X^H X - I||` for the concatenated frames `X` of the layers `V^m L`;
    /// an upper bound on every pairwise overlap.
    pub wandering_overlap: f64,
    /// `gap(K⊥, Σ V^m L)`.
    pub orbit_gap: f64,
    pub iterations: usize,
}

/// Wold data for any isometric relation, including ones with a proper
/// domain (such as truncated shifts). The ranges `ran V^m` are computed as
/// iterated images, so they shrink for partially defined maps as well.
pub fn wold_structure(v: &Relation, cfg: &ToleranceConfig) -> Result<WoldStructure> {
    if !v.is_isometry(cfg) {
        return Err(Error::Precondition("not an isometry".into()));
    }
    let n = v.space_dim();
    let ran = v.ran(cfg);
    // ran V^{2m} = V^m(ran V^m).
    let (unitary_part, iterations) = stabilize(
        ran.clone(),
        v.clone(),
        chain_cap(n),
        "range iteration",
        |r, p| p.image(r, cfg),
        |p| p.compose(p, cfg),
    )?;
    let wandering = ran.complement();

    let mut layers = vec![wandering.clone()];
    let mut total = wandering.dim();
    while total <= n {
        let next = v.image(layers.last().expect("nonempty"), cfg)?;
        if next.is_zero() {
            break;
        }
        total += next.dim();
        layers.push(next);
    }
    // With X = [Q_0 Q_1 …], the diagonal blocks of X^H X are identities and
    // the off-diagonal blocks are the pairwise overlaps; ||X^H X - I|| bounds
    // them all and vanishes exactly when the layers are mutually orthogonal.
    let mut stacked = CMatrix::zeros(n, 0);
    for layer in &layers {
        stacked = linalg::hstack(&stacked, layer.frame());
    }
    let k = stacked.ncols();
    let overlap = linalg::spectral_norm(&(stacked.adjoint() * &stacked - CMatrix::identity(k, k)));
    let sum = Subspace::span_unit_scale(&stacked, cfg);
    let orbit_gap = unitary_part.complement().gap(&sum)?;
    Ok(WoldStructure {
        unitary_part,
        wandering,
        orbit_sum: sum,
        wandering_overlap: overlap,
        orbit_gap,
        iterations,
    })
}

/// Wold decomposition of an isometry defined on all of `C^n`.
///
/// Such an isometry is unitary in finite dimension, so `K = C^n` and
/// `L = {0}` always; this is recorded as a certificate rather than assumed.
pub fn wold_decompose(v: &Relation, cfg: &ToleranceConfig) -> Result<DecompositionResult> {
    if !v.is_isometry(cfg) || !v.dom(cfg).is_full() {
        return Err(Error::Precondition(
            "wold_decompose needs an isometry defined on the whole space".into(),
        ));
    }
    let wold = wold_structure(v, cfg)?;
    let k = wold.unitary_part.clone();
    let (part_k, part_kperp, _) = restrict_both(v, &k, cfg)?;
    let tol = cfg.gap_tol;
    let certs = vec![
        Certificate::new("K reduces V", reduction_residual(v, &k, cfg)?, tol),
        Certificate::flag(
            "V_K is unitary in K",
            part_k.compress(&k, cfg)?.is_unitary(cfg),
        ),
        Certificate::new("K⊥ = ⊕ V^m L", wold.orbit_gap, tol),
        Certificate::new("V^m L mutually orthogonal", wold.wandering_overlap, tol),
        Certificate::flag(
            "finite dimension: K = C^n and L = {0}",
            k.is_full() && wold.wandering.is_zero(),
        ),
    ];
    Ok(DecompositionResult {
        mode: DecompositionMode::Wold,
        k,
        part_k,
        part_kperp,
        wandering: Some(wold.wandering),
        certificates: certs,
        iterations: wold.iterations,
    })
}

pub fn dissipative_decompose(l: &Relation, cfg: &ToleranceConfig) -> Result<DecompositionResult> {
    let bounds = l.form_bounds();
    if bounds.dissipative_min_eig < -cfg.psd_tol {
        return Err(Error::Precondition(format!(
            "not dissipative (min eigenvalue of the imaginary form is {:.3e})",
            bounds.dissipative_min_eig
        )));
    }
    let transformed = z_transform(l, I, cfg);
    let nfl = nfl_decompose(&transformed, cfg)?;
    let k = nfl.k;
    let (part_k, part_kperp, kperp) = restrict_both(l, &k, cfg)?;
    let tol = cfg.gap_tol;

    let local_z = z_transform(&part_kperp.compress(&kperp, cfg)?, I, cfg);
    let hat = maximalize_contraction(&local_z, cfg)?;
    let certs = vec![
        Certificate::new("K reduces L", reduction_residual(l, &k, cfg)?, tol),
        Certificate::new(
            "L_K is selfadjoint in K",
            selfadjoint_within(&part_k, &k, cfg)?,
            tol,
        ),
        Certificate::flag(
            "Z_i(L_K⊥) is completely nonunitary",
            unitary_part_subspace(&hat, cfg)?.is_zero(),
        ),
        Certificate::flag("mul L_K⊥ = {0}", part_kperp.mul(cfg).is_zero()),
    ];
    Ok(DecompositionResult {
        mode: DecompositionMode::Dissipative,
        k,
        part_k,
        part_kperp,
        wandering: None,
        certificates: certs,
        iterations: nfl.iterations,
    })
}

/// The symmetric Wold construction without the maximality precondition.
///
/// `L = dom N_{-i}(A*)` and `K` is the smallest subspace containing `L` and
/// closed under taking images by `Z_i(A)`. For maximal symmetric `A` this is
/// [`symmetric_wold_decompose`]; truncated models of unbounded operators are
/// never maximal, and use this entry point directly.
pub fn symmetric_wold_core(a: &Relation, cfg: &ToleranceConfig) -> Result<DecompositionResult> {
    if !a.is_symmetric(cfg) {
        return Err(Error::Precondition("not symmetric".into()));
    }
    let n = a.space_dim();
    let wandering = a.adjoint().deficiency(-I, cfg).dom(cfg);
    let v = z_transform(a, I, cfg);
    // Σ_m = L + V L + … + V^m L, and Σ_{2m+1} = Σ_m + V^{m+1} Σ_m.
    let (k, iterations) = stabilize(
        wandering.clone(),
        v.clone(),
        chain_cap(n),
        "wandering-orbit iteration",
        |s, p| s.sum(&p.image(s, cfg)?, cfg),
        |p| p.compose(p, cfg),
    )?;
    let (part_k, part_kperp, kperp) = restrict_both(a, &k, cfg)?;
    let tol = cfg.gap_tol;

    let local = part_k.compress(&k, cfg)?;
    let local_z = z_transform(&local, I, cfg);
    let z_isometric = local_z.is_isometry(cfg);
    let shift_unitary_part = if z_isometric {
        wold_structure(&local_z, cfg)?.unitary_part.dim()
    } else {
        usize::MAX
    };
    let certs = vec![
        Certificate::new("K reduces A", reduction_residual(a, &k, cfg)?, tol),
        Certificate::new(
            "A_K⊥ is selfadjoint in K⊥",
            selfadjoint_within(&part_kperp, &kperp, cfg)?,
            tol,
        ),
        Certificate::flag("A_K is symmetric", local.is_symmetric(cfg)),
        Certificate::flag("Z_i(A_K) is an isometry in K", z_isometric),
        Certificate::flag("Z_i(A_K) has trivial unitary part", shift_unitary_part == 0),
    ];
    Ok(DecompositionResult {
        mode: DecompositionMode::Symmetric,
        k,
        part_k,
        part_kperp,
        wandering: Some(wandering),
        certificates: certs,
        iterations,
    })
}

/// Decomposition of a maximal symmetric relation.
///
/// A maximal symmetric relation on `C^n` is selfadjoint, so `K = {0}`; the
/// result carries that fact as a certificate.
pub fn symmetric_wold_decompose(
    a: &Relation,
    cfg: &ToleranceConfig,
) -> Result<DecompositionResult> {
    let class = a.classify(cfg);
    if !class.is_symmetric || !class.is_maximal_dissipative {
        return Err(Error::Precondition(
            "symmetric_wold_decompose needs a maximal symmetric relation".into(),
        ));
    }
    let mut result = symmetric_wold_core(a, cfg)?;
    let degenerate = result.k.is_zero();
    result
        .certificates
        .push(Certificate::flag("finite dimension: K = {0}", degenerate));
    Ok(result)
}

pub fn decompose(
    t: &Relation,
    mode: DecompositionMode,
    cfg: &ToleranceConfig,
) -> Result<DecompositionResult> {
    match mode {
        DecompositionMode::Nfl => nfl_decompose(t, cfg),
        DecompositionMode::Wold => wold_decompose(t, cfg),
        DecompositionMode::Dissipative => dissipative_decompose(t, cfg),
        DecompositionMode::Symmetric => symmetric_wold_decompose(t, cfg),
    }
}

/// First von Neumann formula for a symmetric relation:
/// `A* = A ∔ N_i(A*) ∔ N_{-i}(A*)`, with `A ⊥ N_{±i}(A*)` in the graph sense.
#[derive(Debug, Clone)]
pub struct VonNeumannReport {
    pub deficiency_plus: Relation,
    pub deficiency_minus: Relation,
    /// `gap(A*, A + N_i(A*) + N_{-i}(A*))`.
    pub sum_gap: f64,
    /// `dim A* = dim A + dim N_i + dim N_{-i}`.
    pub dimensions_add_up: bool,
    /// Overlap between the graphs of `A` and `N_{-i}(A*)`.
    pub overlap_minus: f64,
    /// Overlap between the graphs of `A` and `N_i(A*)`.
    pub overlap_plus: f64,
    pub passed: bool,
}

pub fn von_neumann_check(a: &Relation, cfg: &ToleranceConfig) -> Result<VonNeumannReport> {
    if !a.is_symmetric(cfg) {
        return Err(Error::Precondition(
            "von_neumann_check needs a symmetric relation".into(),
        ));
    }
    let adj = a.adjoint();
    let plus = adj.deficiency(I, cfg);
    let minus = adj.deficiency(-I, cfg);
    let sum = a.graph_sum(&plus, cfg)?.graph_sum(&minus, cfg)?;
    let sum_gap = adj.gap(&sum)?;
    let dimensions_add_up = adj.dim() == a.dim() + plus.dim() + minus.dim();
    let overlap_minus = a.graph().overlap(minus.graph())?;
    let overlap_plus = a.graph().overlap(plus.graph())?;
    let passed = sum_gap < cfg.gap_tol
        && dimensions_add_up
        && overlap_minus < cfg.gap_tol
        && overlap_plus < cfg.gap_tol;
    Ok(VonNeumannReport {
        deficiency_plus: plus,
        deficiency_minus: minus,
        sum_gap,
        dimensions_add_up,
        overlap_minus,
        overlap_plus,
        passed,
    })
}
