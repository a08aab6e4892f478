//! Truncated q-series with rational-function coefficients, theta products
//! and Θ quotients.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::ratfunc::{Exp, LaurentPoly, RatFunc};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

/// Σ_{n ≤ N} cₙ qⁿ with coefficients in u = z^{1/a} and an auxiliary t.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    a: u32,
    coeffs: Vec<RatFunc>,
}

impl QSeries {
    pub fn zero(a: u32, n: usize) -> Self {
        Self { a, coeffs: vec![RatFunc::zero(); n + 1] }
    }

    pub fn one(a: u32, n: usize) -> Self {
        Self::constant(a, n, RatFunc::one())
    }

    pub fn constant(a: u32, n: usize, c: RatFunc) -> Self {
        let mut s = Self::zero(a, n);
        s.coeffs[0] = c;
        s
    }

    /// Builds a series from explicit coefficients (missing orders are zero).
    pub fn from_coeffs(a: u32, n: usize, coeffs: Vec<RatFunc>) -> Self {
        let mut s = Self::zero(a, n);
        for (i, c) in coeffs.into_iter().enumerate().take(n + 1) {
            s.coeffs[i] = c.normalized();
        }
        s
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    /// Truncation order N.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &RatFunc {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_zero)
    }

    /// True when every coefficient is a Laurent polynomial.
    pub fn denominator_free(&self) -> bool {
        self.coeffs.iter().all(|c| c.to_poly().is_some())
    }

    pub fn uses_t(&self) -> bool {
        self.coeffs.iter().any(RatFunc::uses_t)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::TruncationMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn truncate(&self, n: usize) -> Self {
        Self { a: self.a, coeffs: self.coeffs[..=n.min(self.order())].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { a: self.a, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x.add(y)).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(RatFunc::neg)
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        self.map(|x| x.mul(c))
    }

    fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        Self { a: self.a, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.order();
        let mut out = Self::zero(self.a, n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for k in 0..=n - i {
                if !other.coeffs[k].is_zero() {
                    out.coeffs[i + k] = out.coeffs[i + k].add(&self.coeffs[i].mul(&other.coeffs[k]));
                }
            }
        }
        Ok(out)
    }

    /// self / other; the leading coefficient of `other` must be invertible.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let inv = other.coeffs[0].inverse()?;
        let n = self.order();
        let mut out: Vec<RatFunc> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut acc = self.coeffs[i].clone();
            for k in 1..=i {
                if !other.coeffs[k].is_zero() && !out[i - k].is_zero() {
                    acc = acc.sub(&other.coeffs[k].mul(&out[i - k]));
                }
            }
            out.push(acc.mul(&inv));
        }
        Ok(Self { a: self.a, coeffs: out })
    }

    /// Applies an exponent map to every coefficient.
    pub fn map_exponents(&self, f: impl Fn(Exp) -> Exp + Copy) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.map_exponents(f)).collect::<Result<Vec<_>>>()?;
        Ok(Self { a: self.a, coeffs })
    }

    /// u ↦ u⁻¹.
    pub fn invert_u(&self) -> Result<Self> {
        self.map_exponents(|(i, k)| (-i, k))
    }

    /// Expands every coefficient into a Laurent polynomial, if possible.
    pub fn expanded(&self) -> Option<Vec<LaurentPoly>> {
        self.coeffs.iter().map(RatFunc::to_poly).collect()
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| {
                let c = c.normalized();
                let mut term = json!({ "q": n, "coeff": poly_json(c.numerator()) });
                if !c.denominator().is_empty() {
                    let den: Vec<Value> = c
                        .denominator()
                        .iter()
                        .map(|(m, e)| json!({ "u": m.0, "t": m.1, "power": e }))
                        .collect();
                    term["denominator"] = Value::Array(den);
                }
                term
            })
            .collect();
        json!({ "a": self.a, "N": self.order(), "terms": terms })
    }

    /// Aligned `q^n | coefficient` table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for (n, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("q^{n:<3} {}\n", c.render()));
        }
        out
    }
}

fn poly_json(p: &LaurentPoly) -> Vec<Value> {
    p.terms().map(|(e, c)| json!({ "u": e.0, "t": e.1, "c": fmt_q(c) })).collect()
}

impl std::fmt::Debug for QSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| format!("q^{n}[{}]", c.render()))
            .collect();
        write!(f, "QSeries(a={}, N={}: {})", self.a, self.order(), parts.join(" + "))
    }
}

/// Truncated product θ(X; q) for X = uⁱtᵏ.
pub fn theta_monomial(x: Exp, a: u32, n: usize) -> QSeries {
    let inv = (-x.0, -x.1);
    let mut acc = QSeries::one(a, n);
    let factor = |qpow: usize, e: Exp| {
        let mut s = QSeries::one(a, n);
        if qpow <= n {
            s.coeffs[qpow] = s.coeffs[qpow].sub(&RatFunc::monomial(e, Q::one()));
        }
        s
    };
    for i in 0..=n {
        acc = acc.mul(&factor(i, x)).expect("same order");
        if i < n {
            acc = acc.mul(&factor(i + 1, inv)).expect("same order");
            acc = acc.mul(&factor(i + 1, (0, 0))).expect("same order");
        }
    }
    acc
}

/// Converts a rational z-exponent into a u-exponent.
pub fn u_exponent(r: &Q, a: u32) -> Result<i64> {
    let scaled = r * Q::from_integer(a.into());
    if !scaled.is_integer() {
        return Err(Error::FractionalExponent(fmt_q(r), a));
    }
    i64::try_from(scaled.numer().clone()).map_err(|_| Error::FractionalExponent(fmt_q(r), a))
}

/// θ(z^r; q) in u = z^{1/a}, through qᴺ.
pub fn theta(r: &Q, a: u32, n: usize) -> Result<QSeries> {
    Ok(theta_monomial((u_exponent(r, a)?, 0), a, n))
}

/// Jacobi triple product Σ (−1)ᵏ q^{k(k−1)/2} Xᵏ, the closed form of θ.
pub fn theta_oracle(x: Exp, a: u32, n: usize) -> QSeries {
    let mut s = QSeries::zero(a, n);
    let bound = n as i64 + 2;
    for k in -bound..=bound {
        let order = k * (k - 1) / 2;
        if order <= n as i64 {
            let c = if k % 2 == 0 { Q::one() } else { -Q::one() };
            let o = order as usize;
            s.coeffs[o] = s.coeffs[o].add(&RatFunc::monomial((k * x.0, k * x.1), c));
        }
    }
    s
}

/// Θ{α} = Πᵢ θ(z^{1+αᵢ}) / θ(z^{αᵢ}).
pub fn theta_quotient(alphas: &[Q], a: u32, n: usize) -> Result<QSeries> {
    let mut acc = QSeries::one(a, n);
    for alpha in alphas {
        if alpha.is_zero() {
            return Err(Error::ThetaPole(String::new()));
        }
        let top = theta(&(alpha + Q::one()), a, n)?;
        let bottom = theta(alpha, a, n)?;
        acc = acc.mul(&top.div(&bottom)?)?;
    }
    Ok(acc)
}
