#![allow(dead_code)]

use std::collections::BTreeMap;

use chiral_core::cohomology::m_min;
use chiral_core::conformal::{
    mode_commutator, normal_product, nth_product, skew_product, translate, AlgebraContext,
    Generator, Kind, Profile, VAElement,
};
use chiral_core::polynomial::Polyvector;
use chiral_core::rational::{q, qf};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const SEED: [u8; 32] = [17; 32];

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

pub fn kind(k: u8) -> Kind {
    Kind::ALL[k as usize % 4]
}

fn monomial_strategy(dim: usize, max_deriv: u32) -> impl Strategy<Value = (i64, Vec<Generator>)> {
    let gen = (0u8..4, 1..=dim as u32, 0..=max_deriv).prop_map(|(k, i, d)| Generator::new(kind(k), i, d));
    (-3i64..=3, prop::collection::vec(gen, 1..=3))
}

/// A parity-homogeneous element in a random context.
pub fn element(dim: usize, profile: Profile) -> impl Strategy<Value = VAElement> {
    let ctx = AlgebraContext::new(dim, profile).unwrap();
    prop::collection::vec(monomial_strategy(dim, 2), 1..=3).prop_map(move |terms| {
        let mut out = VAElement::zero(ctx);
        let parity = terms[0].1.iter().filter(|g| g.is_odd()).count() % 2;
        for (c, fs) in terms {
            if c == 0 || fs.iter().filter(|g| g.is_odd()).count() % 2 != parity {
                continue;
            }
            out = out.add(&VAElement::monomial(ctx, qf(c, 1), fs).unwrap()).unwrap();
        }
        out
    })
}

pub fn any_profile() -> impl Strategy<Value = Profile> {
    prop_oneof![Just(Profile::DeRham), Just(Profile::Polyvector)]
}

pub fn triple() -> impl Strategy<Value = (VAElement, VAElement, VAElement)> {
    (1usize..=2, any_profile()).prop_flat_map(|(d, p)| (element(d, p), element(d, p), element(d, p)))
}

pub fn pair() -> impl Strategy<Value = (VAElement, VAElement)> {
    (1usize..=2, any_profile()).prop_flat_map(|(d, p)| (element(d, p), element(d, p)))
}

/// Random polyvector with x-degree ≤ 3 per term.
pub fn polyvector(dim: usize) -> impl Strategy<Value = Polyvector> {
    let term = (prop::collection::vec(0u32..=3, dim), 0u32..(1 << dim), -4i64..=4);
    prop::collection::vec(term, 1..=3).prop_map(move |terms| {
        let mut out = Polyvector::zero(dim);
        for (x, mask, c) in terms {
            let psi: Vec<u32> = (0..dim as u32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            out = out.add(&Polyvector::term(dim, x, psi, qf(c, 1)));
        }
        out
    })
}

/// Slice dimensions per (n, m, j) of the free Fock space by partition
/// products over the four generator families.
pub fn fock_counts(weights: &[i64], n_max: u32, m_max: i64) -> BTreeMap<(u32, i64, i64), u64> {
    let cap = m_max - m_min(weights, n_max);
    let mut acc: BTreeMap<(u32, i64, i64), u64> = BTreeMap::new();
    acc.insert((0, 0, 0), 1);
    let mut families = Vec::new();
    for &w in weights {
        for k in 0..=n_max {
            // (conformal weight, m, j, fermionic)
            families.push((k, w, 0, false));
            families.push((k + 1, -w, 0, false));
            families.push((k + 1, w, -1, true));
            families.push((k, -w, 1, true));
        }
    }
    for (cw, dm, dj, odd) in families {
        if cw > n_max {
            continue;
        }
        let mut next: BTreeMap<(u32, i64, i64), u64> = BTreeMap::new();
        for (&(n, m, j), &c) in &acc {
            let mut p = 0i64;
            loop {
                let (nn, mm) = (n + cw * p as u32, m + dm * p);
                if nn > n_max || mm > cap || (odd && p > 1) {
                    break;
                }
                *next.entry((nn, mm, j + dj * p)).or_default() += c;
                p += 1;
                if cw == 0 && dm <= 0 && !odd {
                    break;
                }
            }
        }
        acc = next;
    }
    acc.retain(|&(_, m, _), _| m <= m_max);
    acc
}

fn sign(a: &VAElement, b: &VAElement) -> i64 {
    if a.is_odd().unwrap() && b.is_odd().unwrap() {
        -1
    } else {
        1
    }
}

pub fn skew_symmetry(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(pair(), -2i64..4), |((a, b), n)| {
            let lhs = nth_product(&b, n, &a).unwrap();
            let rhs = skew_product(&a, n, &b).unwrap();
            prop_assert_eq!(lhs, rhs, "n = {}", n);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn borcherds_commutator(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(triple(), -2i64..3, -2i64..3), |((a, b, c), m, n)| {
            prop_assert!(mode_commutator(&a, m, &b, n, &c).is_ok());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn zero_mode_derivation(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&triple(), |(a, b, c)| {
            let lhs = nth_product(&a, 0, &normal_product(&b, &c).unwrap()).unwrap();
            let first = normal_product(&nth_product(&a, 0, &b).unwrap(), &c).unwrap();
            let second = normal_product(&b, &nth_product(&a, 0, &c).unwrap()).unwrap();
            let rhs = first.add(&second.scale(&q(sign(&a, &b)))).unwrap();
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn translation_covariance(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(pair(), -2i64..4), |((a, b), n)| {
            let da = translate(&a);
            let lhs = nth_product(&da, n, &b).unwrap();
            let rhs = nth_product(&a, n - 1, &b).unwrap().scale(&q(-n));
            prop_assert_eq!(lhs, rhs);
            let whole = translate(&nth_product(&a, n, &b).unwrap());
            let split = nth_product(&da, n, &b).unwrap().add(&nth_product(&a, n, &translate(&b)).unwrap()).unwrap();
            prop_assert_eq!(whole, split);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Factor order only changes the Koszul sign, and nested normal products of
/// mutually local generators reach the same normal form.
pub fn normal_form_confluence(cases: u32) -> Result<(), String> {
    let strategy = (1usize..=2, any_profile()).prop_flat_map(|(d, p)| {
        let gen = (0u8..4, 1..=d as u32, 0u32..=2).prop_map(|(k, i, dd)| Generator::new(kind(k), i, dd));
        (Just(d), Just(p), prop::collection::vec(gen, 1..=4)).prop_flat_map(|(d, p, fs)| {
            let len = fs.len();
            (Just(d), Just(p), Just(fs), Just((0..len).collect::<Vec<_>>()).prop_shuffle())
        })
    });
    runner(cases)
        .run(&strategy, |(d, p, fs, perm)| {
            let ctx = AlgebraContext::new(d, p).unwrap();
            let base = VAElement::monomial(ctx, q(1), fs.clone()).unwrap();
            let permuted: Vec<Generator> = perm.iter().map(|&i| fs[i]).collect();
            let mut s = 1i64;
            for x in 0..perm.len() {
                for y in x + 1..perm.len() {
                    if perm[x] > perm[y] && fs[perm[x]].is_odd() && fs[perm[y]].is_odd() {
                        s = -s;
                    }
                }
            }
            let other = VAElement::monomial(ctx, q(s), permuted).unwrap();
            prop_assert_eq!(&base, &other);

            let paired = fs.iter().enumerate().any(|(i, g)| {
                fs[i + 1..].iter().any(|h| h.index == g.index && g.kind.pairing(h.kind) != 0)
            });
            if !paired {
                let mut nested = VAElement::vacuum(ctx);
                for g in fs.iter().rev() {
                    let e = VAElement::monomial(ctx, q(1), vec![*g]).unwrap();
                    nested = normal_product(&e, &nested).unwrap();
                }
                prop_assert_eq!(nested, base);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

