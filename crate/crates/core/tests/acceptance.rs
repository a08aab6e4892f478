//! Acceptance harness: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use chiral_core::brst::{divergence_check, BrstComplex, Potential};
use chiral_core::characters::{
    direct_character, theorem_check, theta_monomial, theta_oracle, theta_quotient, QSeries,
};
use chiral_core::cohomology::{
    bv_cohomology, bv_identities, cohomology, jacobian_ring_dims, tensor_check, Window,
};
use chiral_core::conformal::{check_virasoro, lambda_bracket, AlgebraContext, Profile, VAElement};
use chiral_core::freefield::{mirror, omega_currents, theta_currents, verify_top_facts, CurrentSet};
use chiral_core::polynomial::{Polynomial, Polyvector};
use chiral_core::rational::{fmt_q, q, qf};
use chiral_core::Q;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn poly(dim: usize, terms: &[(&[u32], i64)]) -> Polynomial {
    let mut p = Polynomial::zero(dim);
    for (e, c) in terms {
        p.add_term(e.to_vec(), q(*c));
    }
    p
}

fn potential(dim: usize, terms: &[(&[u32], i64)], weights: &[i64]) -> Potential {
    Potential::new(poly(dim, terms), weights.to_vec()).expect("homogeneous")
}

fn currents(dim: usize, profile: Profile) -> CurrentSet {
    let ctx = AlgebraContext::new(dim, profile).unwrap();
    match profile {
        Profile::DeRham => omega_currents(ctx).unwrap(),
        Profile::Polyvector => theta_currents(ctx).unwrap(),
    }
}

fn random_polyvectors(dim: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Polyvector> {
    (0..count)
        .map(|_| {
            let mut p = Polyvector::zero(dim);
            for _ in 0..rng.gen_range(1..=3) {
                let x: Vec<u32> = (0..dim).map(|_| rng.gen_range(0..=3)).collect();
                let mask: u32 = rng.gen_range(0..(1 << dim));
                let psi: Vec<u32> = (0..dim as u32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
                let c = qf(rng.gen_range(-5..=5), rng.gen_range(1..=3));
                p = p.add(&Polyvector::term(dim, x, psi, c));
            }
            p
        })
        .collect()
}

fn criterion_1() -> Outcome {
    for dim in 1..=3usize {
        for profile in [Profile::DeRham, Profile::Polyvector] {
            let cs = currents(dim, profile);
            let r = verify_top_facts(&cs);
            ensure(r.passed(), format!("D={dim} {profile:?}: {}", r.render()))?;
            let c = check_virasoro(&cs.l).map_err(|e| format!("{e:?}"))?;
            ensure(c == q(0), format!("D={dim} {profile:?}: c = {}", fmt_q(&c)))?;
            ensure(cs.rank == q(dim as i64), "J level")?;
            let jj = lambda_bracket(&cs.j, &cs.j).map_err(err)?;
            let level = jj.entry(1).map(VAElement::vacuum_coefficient).unwrap_or_default();
            ensure(level == q(dim as i64), format!("J_(1)J = {}", fmt_q(&level)))?;
            let qg = lambda_bracket(&cs.q, &cs.g).map_err(err)?;
            let triple = qg.entry(2).map(VAElement::vacuum_coefficient).unwrap_or_default();
            ensure(triple == q(dim as i64), format!("Q_(2)G = {}", fmt_q(&triple)))?;
        }
    }
    Ok("D = 1, 2, 3 in both profiles: c = 0, J level D, Q-G triple pole D".into())
}

fn criterion_2() -> Outcome {
    for dim in 1..=3usize {
        let omega = currents(dim, Profile::DeRham);
        let theta = currents(dim, Profile::Polyvector);
        ensure(mirror(&mirror(&omega)) == omega, format!("D={dim}: mirror^2 on omega"))?;
        ensure(mirror(&mirror(&theta)) == theta, format!("D={dim}: mirror^2 on theta"))?;
        ensure(mirror(&omega) == theta, format!("D={dim}: theta != mirror(omega)"))?;
    }
    Ok("D <= 3".into())
}

fn brst_cases() -> Vec<(&'static str, Potential)> {
    vec![
        ("x^2", potential(1, &[(&[2], 1)], &[1])),
        ("x^3", potential(1, &[(&[3], 1)], &[1])),
        ("x1^3+x2^3", potential(2, &[(&[3, 0], 1), (&[0, 3], 1)], &[1, 1])),
        ("x1^4+x2^2", potential(2, &[(&[4, 0], 1), (&[0, 2], 1)], &[1, 2])),
    ]
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, pot) in brst_cases() {
        let bc = BrstComplex::new(pot.clone()).map_err(err)?;
        ensure(bc.square_zero(), format!("{name}: charge does not square to zero"))?;
        for p in random_polyvectors(pot.dim(), 50, &mut rng) {
            ensure(bc.weight_zero_check(&p).map_err(err)?, format!("{name}: weight zero on {}", p.render()))?;
            ensure(divergence_check(&bc.currents, &p).map_err(err)?, format!("{name}: G_(1) on {}", p.render()))?;
        }
        let compat = bc.compat_suite();
        ensure(compat.passed(), format!("{name}: {}", compat.render()))?;
    }
    Ok("4 potentials, 50 random polyvectors each".into())
}

fn criterion_4() -> Outcome {
    let cases = [
        (potential(1, &[(&[2], 1)], &[1]), q(0)),
        (potential(1, &[(&[3], 1)], &[1]), qf(1, 3)),
        (potential(1, &[(&[5], 1)], &[1]), qf(3, 5)),
        (potential(2, &[(&[3, 0], 1), (&[0, 3], 1)], &[1, 1]), qf(2, 3)),
        (potential(2, &[(&[4, 0], 1), (&[0, 2], 1)], &[1, 2]), qf(1, 2)),
    ];
    let mut ranks = Vec::new();
    for (pot, d) in cases {
        let bc = BrstComplex::new(pot.clone()).and_then(|b| b.with_twist()).map_err(err)?;
        let r = bc.verify_theorem().map_err(err)?;
        ensure(r.passed(), format!("{}: {}", pot.render(), r.render()))?;
        let rank = bc.twisted.as_ref().unwrap().rank.clone();
        ensure(rank == d, format!("{}: rank {} expected {}", pot.render(), fmt_q(&rank), fmt_q(&d)))?;
        ranks.push(fmt_q(&rank));
    }
    Ok(format!("ranks {}", ranks.join(", ")))
}

fn criterion_5() -> Outcome {
    let smooth = BrstComplex::new(potential(1, &[(&[1], 1)], &[1])).map_err(err)?;
    let h = cohomology(&smooth, Window::new(3, -6, 6)).map_err(err)?;
    ensure(h.total_dim() == 0, format!("x: {:?}", h.classes()))?;
    let quad = BrstComplex::new(potential(1, &[(&[2], 1)], &[1])).map_err(err)?;
    let h = cohomology(&quad, Window::new(3, -6, 6)).map_err(err)?;
    ensure(h.classes() == vec![(0, 0, 0, 1)], format!("x^2: {:?}", h.classes()))?;
    let x2 = potential(1, &[(&[2], 1)], &[1]);
    let x3 = potential(1, &[(&[3], 1)], &[1]);
    for (f, g) in [(&x2, &x2), (&x3, &x2)] {
        let a = f.direct_sum(g).map_err(err)?.a();
        let r = tensor_check(f, g, Window::new(2, -2 * a, 2 * a)).map_err(err)?;
        ensure(r.passed(), r.render())?;
    }
    Ok("x acyclic, x^2 one class, x^2+x^2 and x^3+x^2 tensor checks".into())
}

fn criterion_6() -> Outcome {
    let f = poly(1, &[(&[3], 1)]);
    let bc = BrstComplex::new(Potential::new(f.clone(), vec![1]).map_err(err)?).map_err(err)?;
    let h = cohomology(&bc, Window::new(0, -3, 6)).map_err(err)?;
    let mut chiral: BTreeMap<i64, usize> = BTreeMap::new();
    for (n, m, j, d) in h.classes() {
        ensure(n == 0 && j == 0, format!("unexpected class ({n},{m},{j})"))?;
        chiral.insert(m, d);
    }
    let oracle: BTreeMap<i64, usize> = jacobian_ring_dims(&f, &[1], 6).into_iter().filter(|(_, d)| *d > 0).collect();
    ensure(chiral == oracle, format!("chiral {chiral:?} vs Jacobian {oracle:?}"))?;
    Ok(format!("weight-zero table {chiral:?}"))
}

fn criterion_7() -> Outcome {
    let quad = BrstComplex::new(potential(1, &[(&[2], 1)], &[1])).map_err(err)?;
    let d = direct_character(&quad, 4, None, None).map_err(err)?;
    ensure(d.sound() && d.series == QSeries::one(2, 4), format!("x^2 character {:?}", d.series))?;
    let mut lines = 0;
    for (pot, window) in [
        (potential(1, &[(&[2], 1)], &[1]), Window::new(3, -4, 8)),
        (potential(1, &[(&[3], 1)], &[1]), Window::new(3, -6, 12)),
        (potential(2, &[(&[3, 0], 1), (&[0, 3], 1)], &[1, 1]), Window::new(2, -6, 9)),
    ] {
        let h = cohomology(&BrstComplex::new(pot.clone()).map_err(err)?, window).map_err(err)?;
        ensure(h.euler_consistent(), format!("{}: Euler-Poincare fails", pot.render()))?;
        ensure(h.d_squared_zero, "d^2 != 0")?;
        lines += h.twisted_euler.len();
    }
    for e in [(1, 0), (2, 0), (-1, 0), (3, 0), (1, 1), (-2, 1)] {
        ensure(theta_monomial(e, 3, 6) == theta_oracle(e, 3, 6), format!("theta {e:?}"))?;
    }
    for (num, den) in [(1, 1), (-1, 3), (1, 3), (2, 3), (-2, 3), (4, 3)] {
        let alpha: Q = qf(num, den);
        let a = 3;
        let big = theta_quotient(&[alpha.clone()], a, 6).map_err(err)?;
        let ua = |r: &Q| chiral_core::characters::u_exponent(r, a).unwrap();
        let lhs = big.mul(&theta_oracle((ua(&alpha), 0), a, 6)).map_err(err)?;
        let rhs = theta_oracle((ua(&(alpha.clone() + q(1))), 0), a, 6);
        ensure(lhs == rhs, format!("Theta{{{}}}", fmt_q(&alpha)))?;
    }
    Ok(format!("x^2 character = 1 through q^4, {lines} Euler lines, theta/Theta through q^6"))
}

fn criterion_8() -> Outcome {
    let check = theorem_check(3, &[3, 5], 4, None).map_err(err)?;
    for line in check.report.render().lines().skip(1) {
        println!("      {line}");
    }
    ensure(check.report.passed(), "localization mismatch")?;
    let conv = check.chosen.ok_or("no convention")?;
    Ok(format!("convention {}", conv.describe(3)))
}

fn criterion_9() -> Outcome {
    let x3 = BrstComplex::new(potential(1, &[(&[3], 1)], &[1])).map_err(err)?;
    let window = Window::new(3, -6, 12);
    let ids = bv_identities(&x3, window).map_err(err)?;
    ensure(ids.passed(), ids.render())?;
    let bv = bv_cohomology(&x3, 3, window).map_err(err)?;
    let ns: Vec<u32> = bv.e1.iter().filter(|c| c.passed).map(|c| c.n).collect();
    ensure(ns == vec![1, 2, 3], format!("E1 certificates {}", bv.to_check_report().render()))?;
    let mut ranks = Vec::new();
    for a in 2..=4u32 {
        let bc = BrstComplex::new(potential(1, &[(&[a], 1)], &[1])).map_err(err)?;
        let r = bv_cohomology(&bc, 0, Window::default_for(a as i64)).map_err(err)?;
        let rank = r.classical_rank.ok_or(format!("x^{a}: classical rank unstable"))?;
        ensure(rank == a as usize - 1, format!("x^{a}: classical rank {rank}"))?;
        ensure(r.classical.iter().all(|c| c.matches_chiral), "classical operator mismatch")?;
        ranks.push(rank.to_string());
    }
    Ok(format!("identities (i)-(iii), E1 at n = 1..3, classical ranks {}", ranks.join(", ")))
}

fn criterion_10() -> Outcome {
    let cases = 256;
    common::skew_symmetry(cases)?;
    common::borcherds_commutator(cases)?;
    common::zero_mode_derivation(cases)?;
    common::translation_covariance(cases)?;
    common::normal_form_confluence(cases)?;
    Ok(format!("5 suites x {cases} cases, seed {:?}", &common::SEED[..1]))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome); 10] = [
        ("1", "top fact suite", criterion_1),
        ("2", "mirror involution", criterion_2),
        ("3", "BRST lemmas", criterion_3),
        ("4", "twisted currents at rank d", criterion_4),
        ("5", "cohomology examples", criterion_5),
        ("6", "Jacobian-ring oracle", criterion_6),
        ("7", "character coherence", criterion_7),
        ("8", "localization cross-check", criterion_8),
        ("9", "BV suite", criterion_9),
        ("10", "engine property suites", criterion_10),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS  {id:>2} {name} (exact, {secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {id:>2} {name} (exact, {secs:.2}s): {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
