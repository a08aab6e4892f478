use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::element::VAElement;
use super::generator::{AlgebraContext, Generator};
use super::modes::monomial_mode;
use crate::error::{Error, Result};
use crate::rational::{binom, factorial, Q};

/// Ω, the unit of the (−1)-product.
pub fn vacuum(ctx: AlgebraContext) -> VAElement {
    VAElement::vacuum(ctx)
}

/// δA: the infinitesimal translation, a derivation of every product.
pub fn translate(a: &VAElement) -> VAElement {
    let mut out = VAElement::zero(a.context());
    for (factors, c) in a.terms() {
        for i in 0..factors.len() {
            let mut f = factors.clone();
            f[i].deriv += 1;
            out.add_factors(f, c.clone());
        }
    }
    out
}

/// δ^k A / k!.
pub fn divided_translate(a: &VAElement, k: u32) -> VAElement {
    let mut out = a.clone();
    for _ in 0..k {
        out = translate(&out);
    }
    out.scale(&factorial(k).recip())
}

/// `A_(n) B` for any integer `n`.
pub fn nth_product(a: &VAElement, n: i64, b: &VAElement) -> Result<VAElement> {
    a.check_same_context(b)?;
    Ok(apply_mode(a, n, b))
}

/// Mode action without the context check; callers guarantee a shared context.
pub(crate) fn apply_mode(a: &VAElement, n: i64, b: &VAElement) -> VAElement {
    let mut out = VAElement::zero(b.context());
    for (factors, c) in a.terms() {
        let term = monomial_mode(factors, n, b);
        out.add_scaled(&term, c);
    }
    out
}

/// `:AB: = A_(-1) B` in normal form.
pub fn normal_product(a: &VAElement, b: &VAElement) -> Result<VAElement> {
    nth_product(a, -1, b)
}

/// All singular products `A_(n) B`, `n ≥ 0`; entry `n` is the coefficient of
/// `λⁿ/n!` in `[A λ B]`.
#[derive(Clone, PartialEq, Eq)]
pub struct LambdaPolynomial {
    entries: BTreeMap<u32, VAElement>,
}

impl LambdaPolynomial {
    pub fn from_entries(entries: impl IntoIterator<Item = (u32, VAElement)>) -> Self {
        Self {
            entries: entries.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn entry(&self, n: u32) -> Option<&VAElement> {
        self.entries.get(&n)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&u32, &VAElement)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest `n` with a nonzero entry.
    pub fn degree(&self) -> Option<u32> {
        self.entries.keys().next_back().copied()
    }

    /// True when the nonzero entries are exactly `expected` (zero entries in
    /// `expected` are ignored).
    pub fn matches(&self, expected: &[(u32, VAElement)]) -> bool {
        let want = LambdaPolynomial::from_entries(expected.iter().cloned());
        *self == want
    }

    pub fn render(&self) -> String {
        if self.entries.is_empty() {
            return "{}".to_string();
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(n, v)| format!("{n} ↦ {}", v.render()))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl fmt::Debug for LambdaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `[A λ B]`, computed mode by mode; only `n < wt(A) + wt(B)` can contribute.
pub fn lambda_bracket(a: &VAElement, b: &VAElement) -> Result<LambdaPolynomial> {
    a.check_same_context(b)?;
    let top = a.max_weight() + b.max_weight();
    Ok(LambdaPolynomial::from_entries(
        (0..top).map(|n| (n, apply_mode(a, n as i64, b))),
    ))
}

fn koszul(a: &VAElement, b: &VAElement) -> Result<Q> {
    let odd = a.is_odd()? && b.is_odd()?;
    Ok(if odd { -Q::one() } else { Q::one() })
}

/// `[A_(m), B_(n)] C`, evaluated by direct composition and by the Borcherds
/// commutator expansion `Σ_k binom(m,k) (A_(k)B)_(m+n-k) C`. The two routes
/// must agree; a disagreement is reported as an engine error.
pub fn mode_commutator(
    a: &VAElement,
    m: i64,
    b: &VAElement,
    n: i64,
    c: &VAElement,
) -> Result<VAElement> {
    a.check_same_context(b)?;
    a.check_same_context(c)?;
    let sign = koszul(a, b)?;
    let direct = apply_mode(a, m, &apply_mode(b, n, c))
        .sub(&apply_mode(b, n, &apply_mode(a, m, c)).scale(&sign))?;

    let mut expanded = VAElement::zero(c.context());
    let top = a.max_weight() + b.max_weight();
    for k in 0..top {
        let coeff = binom(m, k);
        if coeff.is_zero() {
            continue;
        }
        let ab = apply_mode(a, k as i64, b);
        if ab.is_zero() {
            continue;
        }
        expanded.add_scaled(&apply_mode(&ab, m + n - k as i64, c), &coeff);
    }
    if direct != expanded {
        return Err(Error::EngineDisagreement(format!(
            "[A_({m}), B_({n})]C: direct {} vs Borcherds {}",
            direct.render(),
            expanded.render()
        )));
    }
    Ok(direct)
}

/// The right-hand side of skew-symmetry:
/// `B_(n) A = -(-1)^{|A||B|} Σ_j (-1)^{n+j} δ^j/j! (A_(n+j) B)`.
pub fn skew_product(a: &VAElement, n: i64, b: &VAElement) -> Result<VAElement> {
    a.check_same_context(b)?;
    let sign = -koszul(a, b)?;
    let mut out = VAElement::zero(a.context());
    let top = (a.max_weight() + b.max_weight()) as i64;
    let mut j = 0i64;
    while n + j < top {
        let prod = apply_mode(a, n + j, b);
        if !prod.is_zero() {
            let mut s = sign.clone();
            if (n + j).rem_euclid(2) == 1 {
                s = -s;
            }
            out.add_scaled(&divided_translate(&prod, j as u32), &s);
        }
        j += 1;
    }
    Ok(out)
}

/// Applies `A_(n)` to each generator δ^k g with k ≤ `max_deriv`.
pub(crate) fn generator_basis(ctx: AlgebraContext, max_deriv: u32) -> Vec<VAElement> {
    let mut out = Vec::new();
    for kind in super::generator::Kind::ALL {
        for index in 1..=ctx.dim() as u32 {
            for k in 0..=max_deriv {
                let mut e = VAElement::zero(ctx);
                e.add_canonical(vec![Generator::new(kind, index, k)], Q::one());
                out.push(e);
            }
        }
    }
    out
}

/// Sum of `coeff · element` pairs.
pub fn linear_combination(ctx: AlgebraContext, parts: &[(Q, &VAElement)]) -> Result<VAElement> {
    let mut out = VAElement::zero(ctx);
    for (c, e) in parts {
        if e.context() != ctx {
            return Err(Error::ContextMismatch);
        }
        if !c.is_zero() {
            out.add_scaled(e, c);
        }
    }
    Ok(out)
}
