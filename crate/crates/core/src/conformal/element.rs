use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::generator::{canonicalize, AlgebraContext, Generator, Kind, Profile};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

/// A coefficient times a right-nested normally ordered product of generators
/// applied to the vacuum. The empty factor list is the vacuum Ω.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coefficient: Q,
    pub factors: Vec<Generator>,
}

impl Monomial {
    pub fn is_odd(&self) -> bool {
        self.factors.iter().filter(|g| g.is_odd()).count() % 2 == 1
    }
}

/// Exact finite sum of canonical monomials.
///
/// Terms are kept in canonical factor order with nonzero coefficients, so two
/// elements are equal exactly when they are structurally equal.
#[derive(Clone, PartialEq, Eq)]
pub struct VAElement {
    ctx: AlgebraContext,
    terms: BTreeMap<Vec<Generator>, Q>,
}

pub(crate) fn parity_of(factors: &[Generator]) -> bool {
    factors.iter().filter(|g| g.is_odd()).count() % 2 == 1
}

pub(crate) fn weight_of(profile: Profile, factors: &[Generator]) -> u32 {
    factors.iter().map(|g| g.weight(profile)).sum()
}

impl VAElement {
    pub fn zero(ctx: AlgebraContext) -> Self {
        Self { ctx, terms: BTreeMap::new() }
    }

    pub fn vacuum(ctx: AlgebraContext) -> Self {
        Self::scalar(ctx, Q::one())
    }

    pub fn scalar(ctx: AlgebraContext, c: Q) -> Self {
        let mut out = Self::zero(ctx);
        out.add_canonical(Vec::new(), c);
        out
    }

    pub fn generator(ctx: AlgebraContext, kind: Kind, index: u32, deriv: u32) -> Result<Self> {
        check_index(&ctx, index)?;
        let mut out = Self::zero(ctx);
        out.add_canonical(vec![Generator::new(kind, index, deriv)], Q::one());
        Ok(out)
    }

    /// Builds `coeff · :f₁ f₂ … fₖ:` from factors in any order.
    pub fn monomial(ctx: AlgebraContext, coeff: Q, factors: Vec<Generator>) -> Result<Self> {
        for g in &factors {
            check_index(&ctx, g.index)?;
        }
        let mut out = Self::zero(ctx);
        out.add_factors(factors, coeff);
        Ok(out)
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Generator>, &Q)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms
            .iter()
            .map(|(f, c)| Monomial { coefficient: c.clone(), factors: f.clone() })
            .collect()
    }

    pub fn coefficient(&self, factors: &[Generator]) -> Q {
        self.terms.get(factors).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of the vacuum.
    pub fn vacuum_coefficient(&self) -> Q {
        self.coefficient(&[])
    }

    /// `Some(true)` when every term is odd, `Some(false)` when every term is
    /// even, `None` for mixed parity. Zero counts as even.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|f| parity_of(f));
        match it.next() {
            None => Some(false),
            Some(p) => it.all(|q| q == p).then_some(p),
        }
    }

    pub fn is_odd(&self) -> Result<bool> {
        self.parity().ok_or(Error::MixedParity)
    }

    /// Largest conformal weight among the terms (0 for the zero element).
    pub fn max_weight(&self) -> u32 {
        self.terms
            .keys()
            .map(|f| weight_of(self.ctx.profile(), f))
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn add_canonical(&mut self, factors: Vec<Generator>, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(factors) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub(crate) fn add_factors(&mut self, mut factors: Vec<Generator>, c: Q) {
        if c.is_zero() {
            return;
        }
        if let Some(sign) = canonicalize(self.ctx.profile(), &mut factors) {
            let c = if sign < 0 { -c } else { c };
            self.add_canonical(factors, c);
        }
    }

    pub(crate) fn add_scaled(&mut self, other: &VAElement, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (f, v) in &other.terms {
            self.add_canonical(f.clone(), v * c);
        }
    }

    pub(crate) fn add_assign_owned(&mut self, other: VAElement) {
        if self.terms.is_empty() {
            self.terms = other.terms;
            return;
        }
        for (f, v) in other.terms {
            self.add_canonical(f, v);
        }
    }

    pub fn check_same_context(&self, other: &VAElement) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn scale(&self, c: &Q) -> VAElement {
        let mut out = VAElement::zero(self.ctx);
        out.add_scaled(self, c);
        out
    }

    pub fn add(&self, other: &VAElement) -> Result<VAElement> {
        self.check_same_context(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &Q::one());
        Ok(out)
    }

    pub fn sub(&self, other: &VAElement) -> Result<VAElement> {
        self.check_same_context(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        Ok(out)
    }

    pub fn neg(&self) -> VAElement {
        self.scale(&-Q::one())
    }

    /// Re-expresses the element in another profile of the same dimension.
    /// The state is unchanged; only the canonical factor order moves.
    pub fn with_profile(&self, profile: Profile) -> VAElement {
        let ctx = self.ctx.with_profile(profile);
        let mut out = VAElement::zero(ctx);
        for (f, c) in &self.terms {
            out.add_factors(f.clone(), c.clone());
        }
        out
    }

    /// Keeps only the terms for which `keep` holds.
    pub fn filter_terms(&self, mut keep: impl FnMut(&[Generator]) -> bool) -> VAElement {
        VAElement {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .filter(|(f, _)| keep(f))
                .map(|(f, c)| (f.clone(), c.clone()))
                .collect(),
        }
    }

    /// Debug rendering, e.g. `-3/2 :dx1 y1: + :phi1 psi1:`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (factors, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if factors.is_empty() {
                out.push_str(&fmt_q(&mag));
                continue;
            }
            if !mag.is_one() {
                out.push_str(&fmt_q(&mag));
                out.push(' ');
            }
            out.push(':');
            let names: Vec<String> = factors.iter().map(|g| g.to_string()).collect();
            out.push_str(&names.join(" "));
            out.push(':');
        }
        out
    }
}

fn check_index(ctx: &AlgebraContext, index: u32) -> Result<()> {
    if index == 0 || index as usize > ctx.dim() {
        return Err(Error::IndexOutOfRange { index, dim: ctx.dim() });
    }
    Ok(())
}

impl fmt::Debug for VAElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VAElement({})", self.render())
    }
}

impl fmt::Display for VAElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn ctx() -> AlgebraContext {
        AlgebraContext::new(2, Profile::Polyvector).unwrap()
    }

    #[test]
    fn generator_index_is_checked() {
        assert!(VAElement::generator(ctx(), Kind::X, 3, 0).is_err());
        assert!(VAElement::generator(ctx(), Kind::X, 0, 0).is_err());
        let y = VAElement::generator(ctx(), Kind::Y, 2, 1).unwrap();
        assert_eq!(y.render(), ":dy2:");
    }

    #[test]
    fn odd_square_vanishes() {
        let p = Generator::new(Kind::Psi, 1, 0);
        let e = VAElement::monomial(ctx(), Q::one(), vec![p, p]).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn render_signs_and_fractions() {
        let c = AlgebraContext::new(1, Profile::DeRham).unwrap();
        let e = VAElement::monomial(
            c,
            qf(-3, 2),
            vec![Generator::new(Kind::X, 1, 1), Generator::new(Kind::Y, 1, 0)],
        )
        .unwrap();
        assert_eq!(e.render(), "-3/2 :y1 dx1:");
        let v = VAElement::vacuum(c).add(&e).unwrap();
        assert_eq!(v.render(), "1 - 3/2 :y1 dx1:");
    }

    #[test]
    fn parity_detection() {
        let x = VAElement::generator(ctx(), Kind::X, 1, 0).unwrap();
        let psi = VAElement::generator(ctx(), Kind::Psi, 1, 0).unwrap();
        assert_eq!(x.parity(), Some(false));
        assert_eq!(psi.parity(), Some(true));
        assert_eq!(x.add(&psi).unwrap().parity(), None);
    }
}
