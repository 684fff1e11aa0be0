//! Acceptance criteria 1-9. Each criterion prints one PASS/FAIL line on
//! stdout (bypassing the test harness capture).

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use cremona::birep::{BirationalRep, Letter, RelationOptions, Word};
use cremona::flows::{
    backlund_flow_commutation, continuum_limit_experiment, rk4_integrate, verify_derivation_equivariance,
    ContinuumParams, Family, FlowSpec,
};
use cremona::latticedyn::{
    commute, dp2_orbit, orbit_iterate, translation_word, verify_dal, verify_g_identities, verify_reference_l2,
    AffineA, Direction, Dp2Params, OrbitState,
};
use cremona::rootdata::{CartanMatrix, DiagramAutomorphism, OrientationMatrix, OrientationMode, WeightVector};
use cremona::symfield::{Rf, VarRegistry};
use cremona::taucocycle::{f_from_tau, scan_conjecture, verify_cocycle_condition, verify_well_definedness};
use num_rational::BigRational;

/// Criteria expected to report FAIL. Criterion 4 contains a sub-check
/// against two printed reference formulas that disagree with the group
/// action; see the README.
const EXPECTED_RED: &[u32] = &[4];

struct Outcome {
    passed: bool,
    detail: String,
}

fn report(id: u32, title: &str, run: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = run();
    let line = format!(
        "{} criterion {id}: {title} ({}) [{:.1}s]\n",
        if o.passed { "PASS" } else { "FAIL" },
        o.detail,
        t.elapsed().as_secs_f64()
    );
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    o.passed
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Rank-2 representation with `u_10 = t` and `u_01 = -ratio t`.
fn rank2(a01: i64, a10: i64, ratio: BigRational) -> BirationalRep {
    let a = CartanMatrix::rank2(a01, a10).unwrap();
    let reg = Arc::new(VarRegistry::with_rank(2));
    let t = Rf::var(reg.atom("u").unwrap());
    let rows = vec![vec![Rf::zero(), -&t.scale(&ratio)], vec![t.clone(), Rf::zero()]];
    let u = OrientationMatrix::new(rows, &a, OrientationMode::ThmA).unwrap();
    BirationalRep::new(a, u, reg).unwrap()
}

fn coxeter_suite() -> Outcome {
    let mut cases: Vec<(String, BirationalRep, RelationOptions)> = vec![
        (
            "A2".into(),
            BirationalRep::symbolic(CartanMatrix::finite_a(2).unwrap(), OrientationMode::ThmA).unwrap(),
            RelationOptions::default(),
        ),
        (
            "A1xA1".into(),
            BirationalRep::symbolic(CartanMatrix::rank2(0, 0).unwrap(), OrientationMode::ThmA).unwrap(),
            RelationOptions::default(),
        ),
    ];
    for r in [q(1, 1), q(2, 1)] {
        cases.push((format!("B2 u01=-{r}u10"), rank2(-2, -1, r), RelationOptions::default()));
    }
    for r in [q(1, 1), q(3, 2), q(2, 1), q(3, 1)] {
        cases.push((format!("G2 u01=-{r}u10"), rank2(-3, -1, r), RelationOptions::default()));
    }
    for l in [2, 3] {
        let rep = BirationalRep::affine_cyclic(l, OrientationMode::ThmA).unwrap();
        let pi = DiagramAutomorphism::rotation(rep.cartan(), 1).unwrap();
        cases.push((format!("A(1)_{l}"), rep, RelationOptions { diagrams: vec![pi] }));
    }
    let mut checks = 0;
    let mut bad = Vec::new();
    for (name, rep, opts) in &cases {
        let r = rep.verify_coxeter_relations(opts).unwrap();
        checks += r.checks.len();
        if !r.all_passed() {
            bad.push(name.clone());
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: format!("{} root data, {checks} relations, failing: {bad:?}", cases.len()),
    }
}

fn words_up_to(n: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::<usize>::new()];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w| {
                (0..n).map(move |i| {
                    let mut v = w.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out.iter().map(|w| Word::from_indices(w)).collect()
}

fn cocycle_suite() -> Outcome {
    let rep = BirationalRep::affine_cyclic(2, OrientationMode::ThmA).unwrap();
    let words = words_up_to(3, 3);
    let weights: Vec<_> = (0..3).map(|k| WeightVector::basis(3, k)).collect();
    let mut fails = 0;
    let mut total = 0;
    for w1 in &words {
        for w2 in &words {
            for lam in &weights {
                total += 1;
                if !verify_cocycle_condition(&rep, w1, w2, lam).unwrap().passed {
                    fails += 1;
                }
            }
        }
    }
    // Braid-equivalent pairs: p (s_i s_j s_i) q ~ p (s_j s_i s_j) q and
    // p s_i s_i q ~ p q, with p, q of length <= 1.
    let short = words_up_to(3, 1);
    let mut pairs = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            pairs.push((Word::from_indices(&[i, j, i]), Word::from_indices(&[j, i, j])));
        }
        pairs.push((Word::from_indices(&[i, i]), Word::empty()));
    }
    for p in &short {
        for s in &short {
            for (a, b) in &pairs {
                for lam in &weights {
                    total += 1;
                    let wa = p.concat(a).concat(s);
                    let wb = p.concat(b).concat(s);
                    if !verify_well_definedness(&rep, &wa, &wb, lam).unwrap().passed {
                        fails += 1;
                    }
                }
            }
        }
    }
    for j in 0..3 {
        total += 1;
        if !f_from_tau(&rep, j).unwrap().passed {
            fails += 1;
        }
    }
    Outcome {
        passed: fails == 0,
        detail: format!("{total} exact checks, {fails} failed"),
    }
}

fn conjecture_scan() -> Outcome {
    let rep = BirationalRep::symbolic(CartanMatrix::affine_a(2).unwrap(), OrientationMode::Conjecture).unwrap();
    let r = scan_conjecture(&rep, 6).unwrap();
    let bad = r.failures();
    Outcome {
        passed: bad == 0 && !r.rows.is_empty(),
        detail: format!("{} (word, k) rows up to length 6, {bad} non-polynomial", r.rows.len()),
    }
}

fn discrete_dynamics() -> Outcome {
    let mut dal = 0;
    let mut dal_bad = 0;
    let mut g = 0;
    let mut g_bad = 0;
    for l in 2..=4 {
        let ctx = AffineA::new(l).unwrap();
        let r = verify_dal(&ctx).unwrap();
        dal += r.lines.len();
        dal_bad += r.lines.iter().filter(|x| !x.passed).count();
        let ids = verify_g_identities(&ctx).unwrap();
        g += ids.len();
        g_bad += ids.iter().filter(|x| !x.passed).count();
    }
    let ctx = AffineA::new(2).unwrap();
    let refs = verify_reference_l2(&ctx).unwrap();
    let ref_bad: Vec<&str> = refs.iter().filter(|x| !x.passed).map(|x| x.name).collect();
    Outcome {
        passed: dal_bad == 0 && g_bad == 0 && ref_bad.is_empty(),
        detail: format!(
            "closed forms {}/{dal}, g identities {}/{g}, printed l=2 lines {}/{} (mismatch: {ref_bad:?})",
            dal - dal_bad,
            g - g_bad,
            refs.len() - ref_bad.len(),
            refs.len()
        ),
    }
}

fn dp2_consistency() -> Outcome {
    let p = Dp2Params {
        c: q(2, 1),
        alpha0: q(1, 4),
        alpha1: q(1, 4),
        delta: q(1, 2),
    };
    let ctx = AffineA::new(2).unwrap();
    let t1 = translation_word(&ctx, 1).unwrap();
    let start = (q(1, 1), q(1, 1));
    let (alpha, f) = p.lift(start.0.clone(), start.1.clone());
    let group = orbit_iterate(ctx.rep(), &OrbitState::start(2, alpha, f), &t1, 20).unwrap();
    let d = dp2_orbit(start, &p, 0, 20, Direction::Forward);
    let complete = group.pole.is_none() && d.stopped.is_none() && d.states.len() == 21 && group.states.len() == 21;
    let agree = group
        .states
        .iter()
        .zip(&d.states)
        .all(|(g, (n, f0, f1))| g.mu[0] == *n && &g.f[0] == f0 && &g.f[1] == f1);
    let r0 = Word::from_indices(&[0, 1, 0]);
    let r1 = Word::from_indices(&[2]);
    let c0 = commute(ctx.rep(), &r0, &t1.word).unwrap();
    let c1 = commute(ctx.rep(), &r1, &t1.word).unwrap();
    Outcome {
        passed: complete && agree && c0 && c1,
        detail: format!("20 exact steps agree: {agree}, r0 T1 = T1 r0: {c0}, r1 T1 = T1 r1: {c1}"),
    }
}

fn ode_equivariance() -> Outcome {
    let fams = [Family::AEven(1), Family::AEven(2), Family::AOdd(1), Family::AOdd(2)];
    let mut checks = 0;
    let mut bad = Vec::new();
    for fam in fams {
        let r = verify_derivation_equivariance(fam).unwrap();
        checks += r.checks.len();
        if !r.all_passed() {
            bad.push(fam.to_string());
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: format!("{checks} generator checks over 4 families, failing: {bad:?}"),
    }
}

fn numeric_conservation() -> Outcome {
    let sp4 = FlowSpec::affine(Family::AEven(1), vec![0.2, 0.3, 0.4]).unwrap();
    let y0 = [0.5, -0.3, 0.8];
    let t = rk4_integrate(&sp4, &y0, 0.0, 1.0, 1e-3).unwrap();
    let s0: f64 = y0.iter().sum();
    let drift = t
        .xs
        .iter()
        .zip(&t.states)
        .map(|(x, s)| (s.iter().sum::<f64>() - (s0 + sp4.delta() * x)).abs())
        .fold(0.0, f64::max);

    let pv = FlowSpec::affine(Family::AOdd(1), vec![0.1, 0.2, 0.3, 0.15]).unwrap();
    let z0 = [0.4, 0.3, -0.2, 0.5];
    let t = rk4_integrate(&pv, &z0, 0.0, 1.0, 1e-3).unwrap();
    let c0 = z0[0] + z0[2];
    let rel = t
        .xs
        .iter()
        .zip(&t.states)
        .map(|(x, s)| (((s[0] + s[2]) * (-pv.delta() / 2.0 * x).exp() - c0) / c0).abs())
        .fold(0.0, f64::max);

    // Endpoint self-convergence at steps 0.02, 0.01, 0.005: at 1e-3 the
    // successive differences sit at the roundoff floor.
    let ratio_of = |spec: &FlowSpec, y: &[f64]| {
        let end = |h: f64| rk4_integrate(spec, y, 0.0, 1.0, h).unwrap().last().to_vec();
        let (a, b, c) = (end(0.02), end(0.01), end(0.005));
        let num = a.iter().zip(&b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        let den = b.iter().zip(&c).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        num / den
    };
    let ratios = [
        ratio_of(&sp4, &y0),
        ratio_of(&pv, &z0),
        ratio_of(&FlowSpec::p2(0.6), &[0.3, 0.1]),
    ];
    let order_ok = ratios.iter().all(|r| (12.0..=20.0).contains(r));
    Outcome {
        passed: drift < 1e-8 && rel < 1e-6 && order_ok,
        detail: format!(
            "SP4 drift {drift:.1e}, P_V relative {rel:.1e}, RK4 ratios {:.2}/{:.2}/{:.2}",
            ratios[0], ratios[1], ratios[2]
        ),
    }
}

fn backlund_commutation() -> Outcome {
    let spec = FlowSpec::affine(Family::AEven(1), vec![0.3, 0.25, 0.45]).unwrap();
    let y0 = [0.7, 1.1, 0.9];
    let pi = DiagramAutomorphism::rotation(&CartanMatrix::affine_a(2).unwrap(), 1).unwrap();
    let words = [Word::from_indices(&[1]), Word::new(vec![Letter::Diagram(pi)])];
    let devs: Vec<f64> = words
        .iter()
        .map(|w| backlund_flow_commutation(&spec, w, &y0, 0.0, 0.5, 1e-3).unwrap().max_deviation)
        .collect();
    Outcome {
        passed: devs.iter().all(|d| *d < 1e-6),
        detail: format!("max deviation s1 {:.1e}, pi {:.1e}", devs[0], devs[1]),
    }
}

fn continuum_limit() -> Outcome {
    let r = continuum_limit_experiment(0.1, &ContinuumParams::default()).unwrap();
    Outcome {
        passed: (1.5..=2.5).contains(&r.ratio),
        detail: format!(
            "max error {:.3e} at eps 0.1, {:.3e} at 0.05, ratio {:.3}",
            r.coarse.max_error, r.fine.max_error, r.ratio
        ),
    }
}

#[test]
fn acceptance_criteria() {
    let results = [
        (1, report(1, "Coxeter relations", coxeter_suite)),
        (2, report(2, "tau cocycle on A(1)_2", cocycle_suite)),
        (3, report(3, "polynomiality scan", conjecture_scan)),
        (4, report(4, "discrete dynamics", discrete_dynamics)),
        (5, report(5, "dP2 against the T1 orbit", dp2_consistency)),
        (6, report(6, "flow equivariance", ode_equivariance)),
        (7, report(7, "numeric conservation", numeric_conservation)),
        (8, report(8, "Backlund-flow commutation", backlund_commutation)),
        (9, report(9, "continuum limit", continuum_limit)),
    ];
    let red: Vec<u32> = results.iter().filter(|(_, ok)| !ok).map(|(id, _)| *id).collect();
    assert_eq!(red, EXPECTED_RED, "unexpected set of failing criteria");
}
