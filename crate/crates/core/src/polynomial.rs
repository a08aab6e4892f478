//! Commutative polynomials in x¹..x^D and polyvectors (polynomials in the
//! commuting x's and anticommuting ψ's).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{fmt_q, q, Q};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Q) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The coordinate x^i, 1-based.
    pub fn var(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i - 1] = 1;
        let mut p = Self::zero(dim);
        p.add_term(e, Q::one());
        p
    }

    pub fn monomial(dim: usize, exps: Vec<u32>, c: Q) -> Self {
        assert_eq!(exps.len(), dim);
        let mut p = Self::zero(dim);
        p.add_term(exps, c);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
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

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.dim = self.dim.max(other.dim);
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::constant(self.dim, Q::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// ∂/∂x^i, 1-based.
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i - 1] > 0 {
                let mut f = e.clone();
                f[i - 1] -= 1;
                out.add_term(f, c * q(e[i - 1] as i64));
            }
        }
        out
    }

    /// Equivariant weight Σ eᵢwᵢ of a single exponent vector.
    pub fn exponent_weight(exps: &[u32], weights: &[i64]) -> i64 {
        exps.iter().zip(weights).map(|(e, w)| *e as i64 * w).sum()
    }

    /// Embeds into `dim` variables starting at coordinate `offset + 1`.
    pub fn shifted(&self, dim: usize, offset: usize) -> Polynomial {
        let mut out = Polynomial::zero(dim);
        for (e, c) in &self.terms {
            let mut f = vec![0; dim];
            f[offset..offset + e.len()].copy_from_slice(e);
            out.add_term(f, c.clone());
        }
        out
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (i, k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    k => factors.push(format!("x{}^{}", i + 1, k)),
                }
            }
            let mono = factors.join("*");
            let mag = c.abs();
            let body = if mono.is_empty() {
                fmt_q(&mag)
            } else if mag.is_one() {
                mono
            } else {
                format!("{}*{}", fmt_q(&mag), mono)
            };
            parts.push((c.is_negative(), body));
        }
        let mut out = String::new();
        for (i, (neg, body)) in parts.into_iter().enumerate() {
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.render())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A basis element x^e ψ^{i₁}…ψ^{iₖ} with i₁ < … < iₖ.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PvKey {
    pub x: Vec<u32>,
    pub psi: Vec<u32>,
}

/// Polynomial polyvector field on affine D-space: ψ^i stands for ∂/∂x^i.
#[derive(Clone, PartialEq, Eq)]
pub struct Polyvector {
    dim: usize,
    terms: BTreeMap<PvKey, Q>,
}

/// Sign of sorting the concatenation of two strictly increasing index lists,
/// or `None` if they share an index.
fn merge_sign(a: &[u32], b: &[u32]) -> Option<(i32, Vec<u32>)> {
    let mut sign = 1;
    for x in a {
        if b.contains(x) {
            return None;
        }
        let crossings = b.iter().filter(|y| *y < x).count();
        if crossings % 2 == 1 {
            sign = -sign;
        }
    }
    let mut merged: Vec<u32> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((sign, merged))
}

impl Polyvector {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn from_polynomial(p: &Polynomial) -> Self {
        let mut out = Self::zero(p.dim());
        for (e, c) in p.terms() {
            out.add_term(PvKey { x: e.clone(), psi: vec![] }, c.clone());
        }
        out
    }

    /// ψ^i as a polyvector.
    pub fn psi(dim: usize, i: u32) -> Self {
        let mut out = Self::zero(dim);
        out.add_term(PvKey { x: vec![0; dim], psi: vec![i] }, Q::one());
        out
    }

    pub fn x(dim: usize, i: usize) -> Self {
        Self::from_polynomial(&Polynomial::var(dim, i))
    }

    pub fn term(dim: usize, x: Vec<u32>, psi: Vec<u32>, c: Q) -> Self {
        let mut out = Self::zero(dim);
        let mut sorted = psi.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != psi.len() {
            return out;
        }
        // sign of the permutation sorting psi
        let mut sign = 1;
        for i in 0..psi.len() {
            for j in i + 1..psi.len() {
                if psi[i] > psi[j] {
                    sign = -sign;
                }
            }
        }
        let c = if sign < 0 { -c } else { c };
        out.add_term(PvKey { x, psi: sorted }, c);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PvKey, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: PvKey, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
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

    pub fn add(&self, other: &Polyvector) -> Polyvector {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Polyvector {
        let mut out = Polyvector::zero(self.dim);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, other: &Polyvector) -> Polyvector {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn mul(&self, other: &Polyvector) -> Polyvector {
        let mut out = Polyvector::zero(self.dim);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                if let Some((sign, psi)) = merge_sign(&k1.psi, &k2.psi) {
                    let x = k1.x.iter().zip(&k2.x).map(|(a, b)| a + b).collect();
                    let c = c1 * c2;
                    out.add_term(PvKey { x, psi }, if sign < 0 { -c } else { c });
                }
            }
        }
        out
    }

    /// Homogeneous ψ-degree, or `None` if mixed (zero has degree 0).
    pub fn psi_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|k| k.psi.len());
        match it.next() {
            None => Some(0),
            Some(d) => it.all(|e| e == d).then_some(d),
        }
    }

    pub fn d_dx(&self, i: usize) -> Polyvector {
        let mut out = Polyvector::zero(self.dim);
        for (k, c) in &self.terms {
            let e = k.x[i - 1];
            if e > 0 {
                let mut x = k.x.clone();
                x[i - 1] -= 1;
                out.add_term(PvKey { x, psi: k.psi.clone() }, c * q(e as i64));
            }
        }
        out
    }

    /// Left derivative ∂/∂ψ^i.
    pub fn d_dpsi(&self, i: u32) -> Polyvector {
        let mut out = Polyvector::zero(self.dim);
        for (k, c) in &self.terms {
            if let Some(pos) = k.psi.iter().position(|&p| p == i) {
                let mut psi = k.psi.clone();
                psi.remove(pos);
                let c = if pos % 2 == 1 { -c.clone() } else { c.clone() };
                out.add_term(PvKey { x: k.x.clone(), psi }, c);
            }
        }
        out
    }

    /// {f, −} = Σⱼ ∂ⱼf ∂/∂ψʲ.
    pub fn contract_df(&self, f: &Polynomial) -> Polyvector {
        let mut out = Polyvector::zero(self.dim);
        for j in 1..=self.dim {
            let df = Polyvector::from_polynomial(&f.partial(j));
            out = out.add(&df.mul(&self.d_dpsi(j as u32)));
        }
        out
    }

    /// Δ = Σᵢ ∂/∂xⁱ ∂/∂ψⁱ.
    pub fn divergence(&self) -> Polyvector {
        let mut out = Polyvector::zero(self.dim);
        for i in 1..=self.dim {
            out = out.add(&self.d_dpsi(i as u32).d_dx(i));
        }
        out
    }

    /// Coefficient functions ξ^i of a vector field ξ = Σ ξ^i ψ^i.
    pub fn vector_components(&self) -> Vec<Polynomial> {
        let mut comps = vec![Polynomial::zero(self.dim); self.dim];
        for (k, c) in &self.terms {
            if k.psi.len() == 1 {
                comps[k.psi[0] as usize - 1].add_term(k.x.clone(), c.clone());
            }
        }
        comps
    }

    /// Lie bracket of two vector fields.
    pub fn lie_bracket(&self, other: &Polyvector) -> Polyvector {
        let a = self.vector_components();
        let b = other.vector_components();
        let apply = |v: &[Polynomial], h: &Polynomial| {
            let mut out = Polynomial::zero(self.dim);
            for (j, vj) in v.iter().enumerate() {
                out = out.add(&vj.mul(&h.partial(j + 1)));
            }
            out
        };
        let mut out = Polyvector::zero(self.dim);
        for i in 0..self.dim {
            let comp = apply(&a, &b[i]).sub(&apply(&b, &a[i]));
            let field =
                Polyvector::from_polynomial(&comp).mul(&Polyvector::psi(self.dim, i as u32 + 1));
            out = out.add(&field);
        }
        out
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut f = vec![fmt_q(c)];
                for (i, e) in k.x.iter().enumerate() {
                    for _ in 0..*e {
                        f.push(format!("x{}", i + 1));
                    }
                }
                for p in &k.psi {
                    f.push(format!("psi{p}"));
                }
                f.join("*")
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Debug for Polyvector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polyvector({})", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_anticommute() {
        let a = Polyvector::psi(2, 1);
        let b = Polyvector::psi(2, 2);
        assert_eq!(a.mul(&b), b.mul(&a).scale(&q(-1)));
        assert!(a.mul(&a).is_zero());
    }

    #[test]
    fn left_derivative_signs() {
        let p = Polyvector::term(2, vec![0, 0], vec![1, 2], Q::one());
        assert_eq!(p.d_dpsi(1), Polyvector::psi(2, 2));
        assert_eq!(p.d_dpsi(2), Polyvector::psi(2, 1).scale(&q(-1)));
    }

    #[test]
    fn divergence_of_scaling_field() {
        let xi = Polyvector::x(1, 1).mul(&Polyvector::psi(1, 1));
        assert_eq!(xi.divergence(), Polyvector::from_polynomial(&Polynomial::constant(1, q(1))));
    }

    #[test]
    fn contraction_with_df() {
        let f = Polynomial::var(1, 1).pow(2);
        let p = Polyvector::psi(1, 1);
        assert_eq!(p.contract_df(&f), Polyvector::from_polynomial(&Polynomial::var(1, 1).scale(&q(2))));
    }

    #[test]
    fn lie_bracket_of_coordinate_fields() {
        // [∂₁, x¹∂₁] = ∂₁
        let d1 = Polyvector::psi(1, 1);
        let e = Polyvector::x(1, 1).mul(&d1);
        assert_eq!(d1.lie_bracket(&e), d1);
        assert!(e.lie_bracket(&e).is_zero());
    }

    #[test]
    fn polynomial_partials_and_render() {
        let f = Polynomial::var(2, 1).pow(3).add(&Polynomial::var(2, 2).pow(3));
        assert_eq!(f.partial(1), Polynomial::var(2, 1).pow(2).scale(&q(3)));
        assert_eq!(f.render(), "x1^3 + x2^3");
    }
}
