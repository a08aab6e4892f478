//! Mode action on the Fock space.
//!
//! Creation modes `a_(-1-k)` of the free generators supercommute, so a
//! canonical monomial `:δ^{k₁}a₁ … δ^{kᵣ}aᵣ:` is `Π kᵢ! · aᵢ_(-1-kᵢ) Ω`.
//! Annihilation modes act as super-derivations through the pairing table.
//! The modes of a composite monomial are obtained by peeling its first factor
//! `X` off the rest `Y` (the state is `X_(-1) Y`) and using
//!
//! `(X_(-1)Y)_(n) = Σ_{j≥0} X_(-1-j) Y_(n+j) + (-1)^{|X||Y|} Σ_{j≥0} Y_(n-1-j) X_(j)`.
//!
//! Both sums are finite on any state: a mode `A_(p)` lowers the conformal
//! weight by `p + 1 - wt(A)` and every state has nonnegative weight.

use num_traits::{One, Zero};

use super::element::{parity_of, weight_of, VAElement};
use super::generator::{Generator, Kind};
use crate::rational::{factorial, falling, Q};

/// `a_(p)` applied to `c`, for a bare (underived) generator `a`.
fn raw_mode(kind: Kind, index: u32, p: i64, c: &VAElement) -> VAElement {
    let mut out = VAElement::zero(c.context());
    if p < 0 {
        let l = (-1 - p) as u32;
        let g = Generator::new(kind, index, l);
        let scale = factorial(l).recip();
        for (factors, coeff) in c.terms() {
            let mut f = Vec::with_capacity(factors.len() + 1);
            f.push(g);
            f.extend_from_slice(factors);
            out.add_factors(f, coeff * &scale);
        }
        return out;
    }
    let p = p as u32;
    let odd = kind.is_odd();
    for (factors, coeff) in c.terms() {
        let mut odd_before = 0usize;
        for (pos, b) in factors.iter().enumerate() {
            if b.index == index && b.deriv == p {
                let pair = kind.pairing(b.kind);
                if pair != 0 {
                    let mut rest = factors.clone();
                    rest.remove(pos);
                    let mut v = coeff * factorial(p) * Q::from_integer(pair.into());
                    if odd && odd_before % 2 == 1 {
                        v = -v;
                    }
                    out.add_canonical(rest, v);
                }
            }
            if b.is_odd() {
                odd_before += 1;
            }
        }
    }
    out
}

/// `(δ^k a)_(n) = (-1)^k n(n-1)…(n-k+1) a_(n-k)`.
fn generator_mode(g: &Generator, n: i64, c: &VAElement) -> VAElement {
    let mut factor = falling(n, g.deriv);
    if factor.is_zero() {
        return VAElement::zero(c.context());
    }
    if g.deriv % 2 == 1 {
        factor = -factor;
    }
    let mut out = raw_mode(g.kind, g.index, n - g.deriv as i64, c);
    if !factor.is_one() {
        out = out.scale(&factor);
    }
    out
}

/// `M_(n) C` for the canonical monomial with the given factors (coefficient 1).
pub(crate) fn monomial_mode(factors: &[Generator], n: i64, c: &VAElement) -> VAElement {
    if c.is_zero() {
        return VAElement::zero(c.context());
    }
    match factors {
        [] => {
            if n == -1 {
                c.clone()
            } else {
                VAElement::zero(c.context())
            }
        }
        [g] => generator_mode(g, n, c),
        [x, rest @ ..] => {
            let profile = c.context().profile();
            let wc = c.max_weight() as i64;
            let wx = x.weight(profile) as i64;
            let wy = weight_of(profile, rest) as i64;
            let mut out = VAElement::zero(c.context());

            // Σ_j X_(-1-j) Y_(n+j) C, nonzero only while n + j ≤ wt(Y) + wt(C) - 1.
            let top = wy + wc - 1 - n;
            for j in 0..=top.max(-1) {
                let inner = monomial_mode(rest, n + j, c);
                if inner.is_zero() {
                    continue;
                }
                out.add_assign_owned(generator_mode(x, -1 - j, &inner));
            }

            // ± Σ_j Y_(n-1-j) X_(j) C, nonzero only while j ≤ wt(X) + wt(C) - 1.
            let negate = x.is_odd() && parity_of(rest);
            let top = wx + wc - 1;
            for j in 0..=top.max(-1) {
                let inner = generator_mode(x, j, c);
                if inner.is_zero() {
                    continue;
                }
                let term = monomial_mode(rest, n - 1 - j, &inner);
                if negate {
                    out.add_scaled(&term, &-Q::one());
                } else {
                    out.add_assign_owned(term);
                }
            }
            out
        }
    }
}
