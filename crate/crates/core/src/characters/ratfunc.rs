//! Laurent polynomials in (u, t) and rational functions whose denominators
//! are products of binomials (1 − uⁱtᵏ).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

/// Exponent pair (u, t).
pub type Exp = (i64, i64);

fn add_exp(a: Exp, b: Exp) -> Exp {
    (a.0 + b.0, a.1 + b.1)
}

fn neg_exp(a: Exp) -> Exp {
    (-a.0, -a.1)
}

fn lex_positive(e: Exp) -> bool {
    e > (0, 0)
}

#[derive(Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<Exp, Q>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial((0, 0), Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial((0, 0), c)
    }

    pub fn monomial(e: Exp, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// 1 − uⁱtᵏ.
    pub fn one_minus(e: Exp) -> Self {
        let mut p = Self::one();
        p.add_term(e, -Q::one());
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: Exp) -> Q {
        self.terms.get(&e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, e: Exp, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(add_exp(*e1, *e2), c1 * c2);
            }
        }
        out
    }

    pub fn shift(&self, e: Exp) -> Self {
        Self { terms: self.terms.iter().map(|(k, v)| (add_exp(*k, e), v.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Applies an exponent map; colliding terms are summed.
    pub fn map_exponents(&self, f: impl Fn(Exp) -> Exp) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(f(*e), c.clone());
        }
        out
    }

    /// `c·uⁱtᵏ` if the polynomial has exactly one term.
    pub fn single_term(&self) -> Option<(Exp, Q)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c.clone()))
        } else {
            None
        }
    }

    pub fn uses_t(&self) -> bool {
        self.terms.keys().any(|e| e.1 != 0)
    }

    /// Exact quotient by (1 − M) for nonzero M, or `None` if it does not divide.
    pub fn div_one_minus(&self, m: Exp) -> Option<Self> {
        // Split along cosets of ZM; each coset is a univariate polynomial in x^M.
        let mut cosets: BTreeMap<Exp, BTreeMap<i64, Q>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = if m.0 != 0 { e.0.div_euclid(m.0) } else { e.1.div_euclid(m.1) };
            let r = (e.0 - k * m.0, e.1 - k * m.1);
            cosets.entry(r).or_default().insert(k, c.clone());
        }
        let mut out = Self::zero();
        for (r, g) in cosets {
            let mut acc = Q::zero();
            for (k, c) in &g {
                if !acc.is_zero() {
                    let prev = *g.range(..k).next_back().expect("running sum").0;
                    for i in prev + 1..*k {
                        out.add_term((r.0 + i * m.0, r.1 + i * m.1), acc.clone());
                    }
                }
                acc += c;
                out.add_term((r.0 + k * m.0, r.1 + k * m.1), acc.clone());
            }
            if !acc.is_zero() {
                return None;
            }
        }
        Some(out)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mono = render_monomial(*e);
            let mag = c.abs();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => fmt_q(&mag),
                (false, true) => mono,
                (false, false) => format!("{}*{}", fmt_q(&mag), mono),
            };
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

fn render_monomial(e: Exp) -> String {
    let part = |name: &str, k: i64| match k {
        0 => String::new(),
        1 => name.to_string(),
        k => format!("{name}^{k}"),
    };
    let parts: Vec<String> = [part("u", e.0), part("t", e.1)].into_iter().filter(|s| !s.is_empty()).collect();
    parts.join("*")
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// numerator / Π (1 − M)^e with every M lexicographically positive.
#[derive(Clone, Default)]
pub struct RatFunc {
    num: LaurentPoly,
    den: BTreeMap<Exp, u32>,
}

impl RatFunc {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self { num: p, den: BTreeMap::new() }
    }

    pub fn monomial(e: Exp, c: Q) -> Self {
        Self::from_poly(LaurentPoly::monomial(e, c))
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<Exp, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn den_poly(den: &BTreeMap<Exp, u32>) -> LaurentPoly {
        let mut p = LaurentPoly::one();
        for (m, e) in den {
            p = p.mul(&LaurentPoly::one_minus(*m).pow(*e));
        }
        p
    }

    /// Cancels every denominator factor that divides the numerator.
    pub fn normalized(&self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        let mut num = self.num.clone();
        let mut den = BTreeMap::new();
        for (m, e) in &self.den {
            let mut left = *e;
            while left > 0 {
                match num.div_one_minus(*m) {
                    Some(qt) => {
                        num = qt;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                den.insert(*m, left);
            }
        }
        Self { num, den }
    }

    fn lift(&self, den: &BTreeMap<Exp, u32>) -> LaurentPoly {
        let mut extra = BTreeMap::new();
        for (m, e) in den {
            let have = self.den.get(m).copied().unwrap_or(0);
            if *e > have {
                extra.insert(*m, e - have);
            }
        }
        self.num.mul(&Self::den_poly(&extra))
    }

    fn common_den(&self, other: &Self) -> BTreeMap<Exp, u32> {
        let mut den = self.den.clone();
        for (m, e) in &other.den {
            let v = den.entry(*m).or_insert(0);
            *v = (*v).max(*e);
        }
        den
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let den = self.common_den(other);
        Self { num: self.lift(&den).add(&other.lift(&den)), den }.normalized()
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self { num: self.num.scale(c), den: self.den.clone() }.normalized()
    }

    pub fn shift(&self, e: Exp) -> Self {
        Self { num: self.num.shift(e), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut den = self.den.clone();
        for (m, e) in &other.den {
            *den.entry(*m).or_insert(0) += e;
        }
        Self { num: self.num.mul(&other.num), den }.normalized()
    }

    /// 1/self; the numerator must be c·X or c·X·(1 − M) up to sign.
    pub fn inverse(&self) -> Result<Self> {
        let num = &self.num;
        let back = Self::den_poly(&self.den);
        if let Some((e, c)) = num.single_term() {
            return Ok(Self::from_poly(back.shift(neg_exp(e)).scale(&c.recip())));
        }
        let terms: Vec<(Exp, Q)> = num.terms().map(|(e, c)| (*e, c.clone())).collect();
        if terms.len() != 2 || terms[0].1 != -terms[1].1.clone() {
            return Err(Error::NonInvertible);
        }
        // num = c·X₀(1 − X₁/X₀) with X₁/X₀ lexicographically positive.
        let (x0, c) = (terms[0].0, terms[0].1.clone());
        let m = add_exp(terms[1].0, neg_exp(x0));
        let mut den = BTreeMap::new();
        den.insert(m, 1);
        Ok(Self { num: back.shift(neg_exp(x0)).scale(&c.recip()), den }.normalized())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Substitutes an exponent map into numerator and denominator, then
    /// reorients denominator binomials to lexicographically positive form.
    pub fn map_exponents(&self, f: impl Fn(Exp) -> Exp) -> Result<Self> {
        let mut num = self.num.map_exponents(&f);
        let mut den = BTreeMap::new();
        for (m, e) in &self.den {
            let fm = f(*m);
            if fm == (0, 0) {
                return Err(Error::VanishingDenominator);
            }
            if lex_positive(fm) {
                *den.entry(fm).or_insert(0) += e;
            } else {
                // 1/(1 − M⁻¹) = −M/(1 − M)
                let pos = neg_exp(fm);
                for _ in 0..*e {
                    num = num.shift(pos).neg();
                }
                *den.entry(pos).or_insert(0) += e;
            }
        }
        Ok(Self { num, den }.normalized())
    }

    pub fn uses_t(&self) -> bool {
        self.num.uses_t() || self.den.keys().any(|m| m.1 != 0)
    }

    /// The Laurent polynomial, when the normalized denominator is trivial.
    pub fn to_poly(&self) -> Option<LaurentPoly> {
        let n = self.normalized();
        n.den.is_empty().then_some(n.num)
    }

    pub fn render(&self) -> String {
        let n = self.normalized();
        if n.den.is_empty() {
            return n.num.render();
        }
        let factors: Vec<String> = n
            .den
            .iter()
            .map(|(m, e)| {
                let b = format!("(1 - {})", render_monomial(*m));
                if *e == 1 {
                    b
                } else {
                    format!("{b}^{e}")
                }
            })
            .collect();
        format!("({}) / ({})", n.num.render(), factors.join(" "))
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        let den = self.common_den(other);
        self.lift(&den) == other.lift(&den)
    }
}

impl Eq for RatFunc {}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn exact_division() {
        let p = LaurentPoly::one_minus((3, 0));
        let qt = p.div_one_minus((1, 0)).unwrap();
        assert_eq!(qt.render(), "1 + u + u^2");
        assert!(LaurentPoly::one().add(&LaurentPoly::monomial((1, 0), q(1))).div_one_minus((1, 0)).is_none());
    }

    #[test]
    fn inverse_of_binomials() {
        let b = RatFunc::from_poly(LaurentPoly::one_minus((2, 0)));
        let inv = b.inverse().unwrap();
        assert_eq!(inv.mul(&b), RatFunc::one());
        let neg = RatFunc::from_poly(LaurentPoly::one_minus((-1, 0)));
        let prod = neg.inverse().unwrap().mul(&neg);
        assert_eq!(prod, RatFunc::one());
        let bad = RatFunc::from_poly(LaurentPoly::one().add(&LaurentPoly::monomial((1, 0), q(2))));
        assert_eq!(bad.inverse().unwrap_err(), Error::NonInvertible);
    }

    #[test]
    fn quotient_simplifies() {
        let num = RatFunc::from_poly(LaurentPoly::one_minus((2, 0)));
        let den = RatFunc::from_poly(LaurentPoly::one_minus((1, 0)));
        let r = num.div(&den).unwrap();
        assert_eq!(r.to_poly().unwrap().render(), "1 + u");
    }

    #[test]
    fn substitution_reorients() {
        let r = RatFunc::one().div(&RatFunc::from_poly(LaurentPoly::one_minus((-1, 1)))).unwrap();
        assert!(r.map_exponents(|e| (e.0 + e.1, 0)).is_err());
        let r = RatFunc::one().div(&RatFunc::from_poly(LaurentPoly::one_minus((0, 1)))).unwrap();
        let s = r.map_exponents(|e| (-e.0 - e.1, 0)).unwrap();
        let expect = RatFunc::one().div(&RatFunc::from_poly(LaurentPoly::one_minus((-1, 0)))).unwrap();
        assert_eq!(s, expect);
    }
}
