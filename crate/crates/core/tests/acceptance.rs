//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::time::{Duration, Instant};

use common::{cfg, orthogonal_partner, zetas};
use linrel::shiftmodel::{run_shift_model, WindowConfig};
use linrel::{
    adjoint_within, c, dissipative_decompose, is_invariant, is_reducing, nfl_decompose,
    reduction_certificates, sample, symmetric_wold_decompose, wold_decompose, z_properties_check,
    z_transform, Relation, SpectralPointClass, Subspace, ToleranceConfig, C64, I,
};
use rand::Rng;

type Outcome = Result<String, String>;

/// Residual verdicts met along the way, checked against the conjugate point of the adjoint.
#[derive(Default)]
struct ResidualLog {
    seen: usize,
    violations: Vec<String>,
}

impl ResidualLog {
    fn observe(&mut self, t: &Relation, zeta: C64, cfg: &ToleranceConfig) {
        if t.classify_point(zeta, cfg) != SpectralPointClass::Residual {
            return;
        }
        self.seen += 1;
        if t.adjoint().deficiency(zeta.conj(), cfg).dom(cfg).is_zero() {
            self.violations
                .push(format!("n={} zeta={zeta}", t.space_dim()));
        }
    }

    fn observe_pm_i(&mut self, t: &Relation, cfg: &ToleranceConfig) {
        self.observe(t, I, cfg);
        self.observe(t, -I, cfg);
    }
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(elapsed: Duration, limit: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit, || {
        format!("took {:.2} s, limit {limit} s", elapsed.as_secs_f64())
    })
}

fn z_identities(log: &mut ResidualLog) -> Outcome {
    let cfg = cfg();
    let mut rng = sample::rng(1);
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut evaluated = 0;
    for trial in 0..200 {
        let n = 1 + trial % 8;
        let t = sample::relation(n, &mut rng, &cfg);
        let s = match trial % 3 {
            0 => orthogonal_partner(&t, &mut rng, &cfg),
            1 => sample::relation(n, &mut rng, &cfg),
            _ => t
                .graph_sum(&sample::relation(n, &mut rng, &cfg), &cfg)
                .unwrap(),
        };
        for zeta in zetas() {
            let report = z_properties_check(&t, &s, zeta, &cfg).map_err(|e| e.to_string())?;
            evaluated += report.checks.iter().filter(|c| c.passed.is_some()).count();
            worst = worst.max(report.max_residual());
            if let Some(bad) = report.checks.iter().find(|c| c.passed == Some(false)) {
                return Err(format!(
                    "({}) failed at n={n} zeta={zeta}: {:.2e}",
                    bad.id, bad.residual
                ));
            }
            log.observe(&t, zeta, &cfg);
        }
    }
    ensure(worst < 1e-9, || format!("max residual {worst:.2e}"))?;
    within(start.elapsed(), 10.0)?;
    Ok(format!(
        "{evaluated} identity checks, max residual {worst:.1e}, {:.2} s",
        start.elapsed().as_secs_f64()
    ))
}

fn adjoint_identities(log: &mut ResidualLog) -> Outcome {
    let cfg = cfg();
    let mut rng = sample::rng(2);
    let mut worst = 0.0_f64;
    for trial in 0..200 {
        let n = 1 + trial % 8;
        let t = sample::relation(n, &mut rng, &cfg);
        let adj = t.adjoint();
        let neg_inv = t.inverse().scale(c(-1.0, 0.0), &cfg);
        let perp = Relation::from_graph(n, neg_inv.graph().complement()).unwrap();
        let keep = rng.random_range(0..=t.dim());
        let mix = sample::gaussian(t.dim(), keep, &mut rng);
        let sub = Relation::from_generators(&(t.f() * &mix), &(t.g() * &mix), &cfg).unwrap();
        let alpha = c(rng.random_range(-2.0..2.0), rng.random_range(0.1..2.0));
        let residuals = [
            adj.gap(&perp).unwrap(),
            sub.adjoint()
                .graph()
                .containment_residual(adj.graph())
                .unwrap(),
            t.scale(alpha, &cfg)
                .adjoint()
                .gap(&adj.scale(alpha.conj(), &cfg))
                .unwrap(),
            adj.inverse().gap(&t.inverse().adjoint()).unwrap(),
            adj.ker(&cfg).gap(&t.ran(&cfg).complement()).unwrap(),
        ];
        for (i, r) in residuals.iter().enumerate() {
            ensure(*r < 1e-9, || {
                format!("identity {} at n={n}: {r:.2e}", i + 1)
            })?;
            worst = worst.max(*r);
        }
        log.observe_pm_i(&t, &cfg);
    }
    Ok(format!(
        "5 identities x 200 relations, max residual {worst:.1e}"
    ))
}

fn cayley_correspondence(log: &mut ResidualLog) -> Outcome {
    let cfg = cfg();
    let mut rng = sample::rng(3);
    for trial in 0..100 {
        let n = 1 + trial % 8;
        let d = sample::dissipative(n, &mut rng, &cfg);
        let v = z_transform(&d, I, &cfg);
        let eig = v.form_bounds().contraction_min_eig;
        ensure(eig >= -1e-10, || {
            format!("dissipative -> contraction: {eig:.2e}")
        })?;

        let v = sample::contraction(n, &mut rng, &cfg);
        let back = z_transform(&v, I, &cfg);
        let eig = back.form_bounds().dissipative_min_eig;
        ensure(eig >= -1e-10, || {
            format!("contraction -> dissipative: {eig:.2e}")
        })?;

        let s = sample::symmetric(n, &mut rng, &cfg);
        ensure(z_transform(&s, I, &cfg).is_isometry(&cfg), || {
            "symmetric -> isometry".into()
        })?;
        let w = sample::isometry(n, &mut rng, &cfg);
        ensure(z_transform(&w, I, &cfg).is_symmetric(&cfg), || {
            "isometry -> symmetric".into()
        })?;

        let a = sample::selfadjoint(n, &mut rng, &cfg);
        ensure(z_transform(&a, I, &cfg).classify(&cfg).is_unitary, || {
            "selfadjoint -> unitary".into()
        })?;
        let u = sample::unitary_relation(n, &mut rng);
        ensure(
            z_transform(&u, I, &cfg).classify(&cfg).is_selfadjoint,
            || "unitary -> selfadjoint".into(),
        )?;

        for t in [&d, &v, &s, &w, &a] {
            log.observe_pm_i(t, &cfg);
        }
    }
    Ok("100 instances of each of the six directions".into())
}

struct Instance {
    v: Relation,
    planted: Subspace,
    k: usize,
    m: usize,
}

fn instances() -> Vec<Instance> {
    let mut rng = sample::rng(4);
    (0..50)
        .map(|i| {
            let k = if i % 10 == 0 {
                0
            } else {
                rng.random_range(1..=20)
            };
            let m = if i % 10 == 5 {
                0
            } else {
                rng.random_range(1..=30)
            };
            let (v, planted) = sample::nfl_instance(k, m, 0.9, &mut rng);
            Instance { v, planted, k, m }
        })
        .collect()
}

fn nfl_recovery(cases: &[Instance], log: &mut ResidualLog) -> Outcome {
    let cfg = cfg();
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for case in cases {
        let result = nfl_decompose(&case.v, &cfg).map_err(|e| e.to_string())?;
        let gap = result.k.gap(&case.planted).unwrap();
        ensure(gap < 1e-8, || {
            format!("k={} m={}: gap {gap:.2e}", case.k, case.m)
        })?;
        ensure(result.all_passed(), || {
            format!("k={} m={}: certificate failed", case.k, case.m)
        })?;
        let again = nfl_decompose(&result.part_kperp, &cfg).map_err(|e| e.to_string())?;
        ensure(again.k.is_zero(), || {
            format!("k={} m={}: c.n.u. part not c.n.u.", case.k, case.m)
        })?;
        worst = worst.max(gap);
    }
    within(start.elapsed(), 5.0)?;
    for case in cases.iter().take(10) {
        log.observe_pm_i(&case.v, &cfg);
    }
    Ok(format!(
        "50 instances, max gap {worst:.1e}, {:.2} s",
        start.elapsed().as_secs_f64()
    ))
}

fn dissipative_agreement(cases: &[Instance], log: &mut ResidualLog) -> Outcome {
    let cfg = cfg();
    let mut worst = 0.0_f64;
    for case in cases {
        let nfl = nfl_decompose(&case.v, &cfg).map_err(|e| e.to_string())?;
        let l = z_transform(&case.v, I, &cfg);
        let diss = dissipative_decompose(&l, &cfg).map_err(|e| e.to_string())?;
        let gap = diss.k.gap(&nfl.k).unwrap();
        ensure(gap < 1e-10, || {
            format!("k={} m={}: K differs by {gap:.2e}", case.k, case.m)
        })?;
        let local = diss.part_k.compress(&diss.k, &cfg).unwrap();
        let sa = local.gap(&local.adjoint()).unwrap();
        ensure(sa < 1e-8, || format!("part_K not selfadjoint: {sa:.2e}"))?;
        ensure(diss.part_kperp.mul(&cfg).is_zero(), || {
            "part_K⊥ is multivalued".into()
        })?;
        worst = worst.max(gap);
        log.observe_pm_i(&l, &cfg);
    }
    Ok(format!("50 instances, max gap to NFL K {worst:.1e}"))
}

fn reduction_checks(log: &mut ResidualLog) -> Outcome {
    let cfg = cfg();
    let mut rng = sample::rng(6);
    let equivalences = |t: &Relation, k: &Subspace| -> Result<bool, String> {
        let reduces = is_reducing(t, k, &cfg).unwrap();
        let both =
            is_invariant(t, k, &cfg).unwrap() && is_invariant(t, &k.complement(), &cfg).unwrap();
        ensure(reduces == both, || {
            format!("reducing {reduces} but invariance of K and K⊥ {both}")
        })?;
        for zeta in [I, -I] {
            let z = is_reducing(&z_transform(t, zeta, &cfg), k, &cfg).unwrap();
            ensure(reduces == z, || {
                format!("reducing {reduces} but for Z at {zeta} {z}")
            })?;
        }
        Ok(reduces)
    };
    for trial in 0..100 {
        let n = 1 + trial % 8;
        let (t, k) = sample::reducing_pair(n, &mut rng, &cfg);
        ensure(equivalences(&t, &k)?, || {
            format!("constructed pair at n={n} not reducing")
        })?;
        let report = reduction_certificates(&t, &k, &cfg).unwrap();
        for cert in &report.certificates {
            ensure(cert.residual < 1e-9, || {
                format!("{}: {:.2e}", cert.name, cert.residual)
            })?;
        }
        let kp = k.complement();
        let split = adjoint_within(&t.restrict(&k, &cfg).unwrap(), &k, &cfg)
            .unwrap()
            .orthogonal_sum(
                &adjoint_within(&t.restrict(&kp, &cfg).unwrap(), &kp, &cfg).unwrap(),
                &cfg,
            )
            .unwrap();
        let gap = t.adjoint().gap(&split).unwrap();
        ensure(gap < 1e-9, || {
            format!("adjoint does not distribute: {gap:.2e}")
        })?;
        log.observe_pm_i(&t, &cfg);
    }
    for trial in 0..100 {
        let n = 2 + trial % 7;
        let (t, k) = sample::invariant_not_reducing(n, &mut rng);
        ensure(!equivalences(&t, &k)?, || {
            format!("adversarial pair at n={n} reported reducing")
        })?;
        ensure(
            !reduction_certificates(&t, &k, &cfg).unwrap().all_passed(),
            || "certificates passed".into(),
        )?;
    }
    Ok("100 reducing pairs pass, 100 adversarial pairs fail".into())
}

fn shift_model(log: &mut ResidualLog) -> Outcome {
    let cfg = cfg();
    let start = Instant::now();
    let w = WindowConfig::new(64, 4).unwrap();
    let report = run_shift_model(&w, &cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if let Some(bad) = report.certificates.iter().find(|c| !c.passed) {
        return Err(format!("{}: {:.2e}", bad.name, bad.residual));
    }
    let exact = report.get("Z_i(A) = S").unwrap().residual;
    ensure(exact < 1e-12, || format!("gap(Z_i(A), S) = {exact:.2e}"))?;
    for name in [
        "A* = A ∔ span{(δ1, -iδ1)}",
        "B* = A* ∔ Y",
        "A∞* = (B ⊕ span{(δ2, -iδ2)}) ⊕ Y",
    ] {
        let r = report.get(name).unwrap().residual;
        ensure(r < 1e-10, || format!("{name}: {r:.2e}"))?;
    }
    ensure(report.probe.passed, || "spectral probe failed".into())?;
    within(elapsed, 2.0)?;
    let a = linrel::shiftmodel::build_a(&w, &cfg);
    log.observe_pm_i(&a, &cfg);
    Ok(format!(
        "{} certificates, dim K = {}, dim L = {}, {:.2} s",
        report.certificates.len(),
        report.k_dim,
        report.l_dim,
        elapsed.as_secs_f64()
    ))
}

fn degeneracies(log: &mut ResidualLog) -> Outcome {
    let cfg = cfg();
    let mut rng = sample::rng(8);
    for n in 1..=12 {
        let u = sample::unitary_relation(n, &mut rng);
        let result = wold_decompose(&u, &cfg).map_err(|e| e.to_string())?;
        ensure(result.k.is_full(), || format!("Wold K is not C^{n}"))?;
        ensure(
            result.wandering.as_ref().is_some_and(Subspace::is_zero),
            || format!("L nonzero at n={n}"),
        )?;

        let a = sample::selfadjoint(n, &mut rng, &cfg);
        let result = symmetric_wold_decompose(&a, &cfg).map_err(|e| e.to_string())?;
        ensure(result.k.is_zero(), || {
            format!("symmetric K nonzero at n={n}")
        })?;
        log.observe_pm_i(&a, &cfg);
    }
    Ok("isometries give K = C^n, L = {0}; maximal symmetric gives K = {0}".into())
}

fn main() {
    let mut log = ResidualLog::default();
    let cases = instances();
    let mut results: Vec<(u8, &str, Outcome)> = vec![
        (1, "Z-transform identities", z_identities(&mut log)),
        (2, "adjoint identities", adjoint_identities(&mut log)),
        (
            3,
            "dissipative/contraction correspondence",
            cayley_correspondence(&mut log),
        ),
        (4, "unitary-part recovery", nfl_recovery(&cases, &mut log)),
        (
            5,
            "dissipative decomposition",
            dissipative_agreement(&cases, &mut log),
        ),
        (6, "reducing subspaces", reduction_checks(&mut log)),
        (7, "shift model end to end", shift_model(&mut log)),
        (8, "finite-dimensional degeneracies", degeneracies(&mut log)),
    ];
    let residual = if log.violations.is_empty() {
        Ok(format!(
            "{} residual verdicts, each with conjugate eigenvalue of T*",
            log.seen
        ))
    } else {
        Err(format!(
            "{} of {} residual verdicts fail: {}",
            log.violations.len(),
            log.seen,
            log.violations[0]
        ))
    };
    results.push((9, "residual spectrum", residual));

    let mut failed = false;
    for (id, title, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS {id} {title}: {detail}"),
            Err(why) => {
                failed = true;
                println!("FAIL {id} {title}: {why}");
            }
        }
    }
    if failed {
        std::process::exit(1);
    }
}
