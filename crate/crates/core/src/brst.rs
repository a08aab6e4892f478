//! The chiral critical locus: BRST charge G_(0)f, its differential, the
//! compatibility lemmas, the Euler field and the twisted topological currents.

use num_traits::One;

use crate::conformal::{
    apply_mode, grading, is_primary, lambda_bracket, translate, AlgebraContext, Generator, Grade,
    GradingKind, Kind, Profile, VAElement,
};
use crate::error::{Error, Result};
use crate::freefield::{embed_polyvector, theta_currents, verify_top_facts, CurrentSet};
use crate::polynomial::{Polynomial, Polyvector};
use crate::rational::{fmt_q, q, Q};
use crate::report::CheckReport;

/// A potential f on affine D-space, homogeneous of weight `a` for the
/// coordinate weights w₁..w_D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Potential {
    f: Polynomial,
    weights: Vec<i64>,
    a: i64,
    b: i64,
}

impl Potential {
    /// Infers `a` as the largest term weight of `f` and checks homogeneity.
    pub fn new(f: Polynomial, weights: Vec<i64>) -> Result<Self> {
        let a = f
            .terms()
            .map(|(e, _)| Polynomial::exponent_weight(e, &weights))
            .max()
            .unwrap_or(0);
        Self::with_weight(f, weights, a)
    }

    pub fn with_weight(f: Polynomial, weights: Vec<i64>, a: i64) -> Result<Self> {
        if weights.len() != f.dim() {
            return Err(Error::WeightCount { expected: f.dim(), found: weights.len() });
        }
        if weights.iter().any(|w| *w == 0) {
            return Err(Error::ZeroWeight);
        }
        if a <= 0 {
            return Err(Error::NonPositiveHomogeneity(a));
        }
        let offending: Vec<String> = f
            .terms()
            .filter_map(|(e, c)| {
                let w = Polynomial::exponent_weight(e, &weights);
                (w != a).then(|| {
                    format!("{} (weight {w})", Polynomial::monomial(f.dim(), e.clone(), c.clone()).render())
                })
            })
            .collect();
        if !offending.is_empty() {
            return Err(Error::Inhomogeneous { expected: a, offending: offending.join(", ") });
        }
        let b = weights.iter().sum();
        Ok(Self { f, weights, a, b })
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    /// f ⊕ g on D₁ + D₂ coordinates. Weights are rescaled so both summands
    /// share the homogeneity weight lcm(a_f, a_g).
    pub fn direct_sum(&self, other: &Potential) -> Result<Potential> {
        let l = lcm(self.a, other.a);
        let (sf, sg) = (l / self.a, l / other.a);
        let dim = self.dim() + other.dim();
        let f = self.f.shifted(dim, 0).add(&other.f.shifted(dim, self.dim()));
        let weights = self
            .weights
            .iter()
            .map(|w| w * sf)
            .chain(other.weights.iter().map(|w| w * sg))
            .collect();
        Potential::with_weight(f, weights, l)
    }

    pub fn render(&self) -> String {
        self.f.render()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// d = D − 2b/a.
pub fn rank(d: i64, b: i64, a: i64) -> Result<Q> {
    if a == 0 {
        return Err(Error::ZeroHomogeneity);
    }
    Ok(q(d) - qf_checked(2 * b, a))
}

fn qf_checked(n: i64, d: i64) -> Q {
    crate::rational::qf(n, d)
}

/// ξ = Σᵢ wᵢ xⁱψⁱ.
pub fn euler_field(weights: &[i64]) -> Result<Polyvector> {
    if weights.iter().any(|w| *w == 0) {
        return Err(Error::ZeroWeight);
    }
    let d = weights.len();
    let mut out = Polyvector::zero(d);
    for (i, w) in weights.iter().enumerate() {
        let field = Polyvector::x(d, i + 1).mul(&Polyvector::psi(d, i as u32 + 1));
        out = out.add(&field.scale(&q(*w)));
    }
    Ok(out)
}

/// G_(0) f, checked against the local formula Σⱼ :∂ⱼf φʲ: and against being
/// a weight one primary of fermion degree −1.
pub fn brst_charge(f: &Polynomial, cs: &CurrentSet) -> Result<VAElement> {
    let ctx = cs.context();
    if ctx.profile() != Profile::Polyvector {
        return Err(Error::ProfileMismatch { expected: Profile::Polyvector, found: ctx.profile() });
    }
    let embedded = embed_polyvector(&Polyvector::from_polynomial(f), ctx)?;
    let charge = apply_mode(&cs.g, 0, &embedded);

    let mut local = VAElement::zero(ctx);
    for j in 1..=f.dim() {
        let df = embed_polyvector(&Polyvector::from_polynomial(&f.partial(j)), ctx)?;
        let phi = VAElement::generator(ctx, Kind::Phi, j as u32, 0)?;
        local.add_assign_owned(apply_mode(&df, -1, &phi));
    }
    if charge != local {
        return Err(Error::EngineDisagreement(format!(
            "G_(0)f = {} but the local formula gives {}",
            charge.render(),
            local.render()
        )));
    }
    if !charge.is_zero() {
        if !is_primary(&charge, &cs.l, &q(1)) {
            return Err(Error::EngineDisagreement(format!(
                "G_(0)f = {} is not a weight one primary",
                charge.render()
            )));
        }
        if grading(&charge, &GradingKind::Fermion) != Grade::Homogeneous(q(-1)) {
            return Err(Error::EngineDisagreement(format!(
                "G_(0)f = {} does not have fermion degree -1",
                charge.render()
            )));
        }
    }
    Ok(charge)
}

/// The BRST complex (Θᶜʰ, ∂ᶜʰ_f) for a polynomial f; `potential` is present
/// when f is homogeneous for a chosen set of weights.
#[derive(Debug, Clone)]
pub struct BrstComplex {
    pub f: Polynomial,
    pub potential: Option<Potential>,
    pub currents: CurrentSet,
    pub charge: VAElement,
    pub twisted: Option<CurrentSet>,
}

impl BrstComplex {
    pub fn new(potential: Potential) -> Result<Self> {
        let mut bc = Self::from_polynomial(potential.f().clone())?;
        bc.potential = Some(potential);
        Ok(bc)
    }

    /// Ungraded complex, for the identities that need no homogeneity.
    pub fn from_polynomial(f: Polynomial) -> Result<Self> {
        let ctx = AlgebraContext::new(f.dim(), Profile::Polyvector)?;
        let currents = theta_currents(ctx)?;
        let charge = brst_charge(&f, &currents)?;
        Ok(Self { f, potential: None, currents, charge, twisted: None })
    }

    pub fn context(&self) -> AlgebraContext {
        self.currents.context()
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    fn require_potential(&self) -> Result<&Potential> {
        self.potential.as_ref().ok_or(Error::NonPositiveHomogeneity(0))
    }

    /// ∂ᶜʰ_f A = (G_(0)f)_(0) A.
    pub fn differential(&self, a: &VAElement) -> Result<VAElement> {
        self.charge.check_same_context(a)?;
        Ok(apply_mode(&self.charge, 0, a))
    }

    pub fn embed(&self, p: &Polyvector) -> Result<VAElement> {
        embed_polyvector(p, self.context())
    }

    /// True iff all singular products of the charge with itself vanish.
    pub fn square_zero(&self) -> bool {
        lambda_bracket(&self.charge, &self.charge).map(|b| b.is_zero()).unwrap_or(false)
    }

    /// ∂ᶜʰ_f restricted to weight zero equals {f, −} = Σⱼ ∂ⱼf ∂/∂ψʲ.
    pub fn weight_zero_check(&self, p: &Polyvector) -> Result<bool> {
        let lhs = self.differential(&self.embed(p)?)?;
        let rhs = self.embed(&p.contract_df(&self.f))?;
        Ok(lhs == rhs)
    }

    /// ξ for the potential's weights, with ∂ᶜʰ_f ξ = a·f asserted.
    pub fn euler_field(&self) -> Result<Polyvector> {
        let pot = self.require_potential()?;
        let xi = euler_field(pot.weights())?;
        let lhs = self.differential(&self.embed(&xi)?)?;
        let rhs = self.embed(&Polyvector::from_polynomial(&self.f.scale(&q(pot.a()))))?;
        if lhs != rhs {
            return Err(Error::Inhomogeneous {
                expected: pot.a(),
                offending: format!("∂ξ = {} but a·f = {}", lhs.render(), rhs.render()),
            });
        }
        Ok(xi)
    }

    /// Compatibilities of ∂ with the currents: ∂L = 0, ∂G = 0, ∂J = G_(0)f, ∂Q = δf.
    pub fn compat_suite(&self) -> CheckReport {
        let mut r = CheckReport::new("compat");
        let cs = &self.currents;
        let ctx = self.context();
        let zero = VAElement::zero(ctx);
        let df = self.embed(&Polyvector::from_polynomial(&self.f)).map(|e| translate(&e));
        let pairs: [(&str, &VAElement, VAElement); 4] = [
            ("dL=0", &cs.l, zero.clone()),
            ("dG=0", &cs.g, zero),
            ("dJ=G0f", &cs.j, self.charge.clone()),
            ("dQ=delta f", &cs.q, df.unwrap_or_else(|_| VAElement::zero(ctx))),
        ];
        for (name, current, expected) in pairs {
            let got = apply_mode(&self.charge, 0, current);
            let ok = got == expected;
            let detail = if ok {
                String::new()
            } else {
                format!("found {} expected {}", got.render(), expected.render())
            };
            r.check(name, ok, detail);
        }
        if !self.charge.is_zero() {
            r.note("dJ = +G_(0)f with this engine's sign conventions; dJ = -G_(0)f does not hold");
        }
        r
    }

    /// Twisted currents: ᶠL = L, ᶠG = G, ᶠJ = J + (1/a)G_(0)ξ,
    /// ᶠQ = Q − (1/a)δξ, at rank d = D − 2b/a.
    pub fn twisted_currents(&self) -> Result<CurrentSet> {
        let pot = self.require_potential()?;
        let xi = self.embed(&self.euler_field()?)?;
        let inv_a = Q::one() / q(pot.a());
        let cs = &self.currents;
        let g0xi = apply_mode(&cs.g, 0, &xi);
        let mut j = cs.j.clone();
        j.add_scaled(&g0xi, &inv_a);
        let mut qq = cs.q.clone();
        qq.add_scaled(&translate(&xi), &-inv_a);
        Ok(CurrentSet {
            l: cs.l.clone(),
            j,
            q: qq,
            g: cs.g.clone(),
            rank: rank(self.dim() as i64, pot.b(), pot.a())?,
            profile: Profile::Polyvector,
        })
    }

    pub fn with_twist(mut self) -> Result<Self> {
        self.twisted = Some(self.twisted_currents()?);
        Ok(self)
    }

    /// ∂-closedness of the twisted currents, the intermediate identities of
    /// the twist and the full topological OPE suite at rank d.
    pub fn verify_theorem(&self) -> Result<CheckReport> {
        let pot = self.require_potential()?;
        let tw = self.twisted.as_ref().ok_or(Error::MissingTwist)?;
        let mut r = CheckReport::new("theorem");
        let ctx = self.context();
        let cs = &self.currents;
        let a = q(pot.a());
        let b = q(pot.b());
        let xi = self.embed(&self.euler_field()?)?;
        let g0xi = apply_mode(&cs.g, 0, &xi);
        let dxi = translate(&xi);
        let f = self.embed(&Polyvector::from_polynomial(&self.f))?;

        for (name, cur) in [("fL", &tw.l), ("fJ", &tw.j), ("fQ", &tw.q), ("fG", &tw.g)] {
            let d = self.differential(cur)?;
            r.check(format!("closed:{name}"), d.is_zero(), if d.is_zero() { String::new() } else { d.render() });
        }
        let lhs = self.differential(&g0xi)?;
        let rhs = self.charge.scale(&-a.clone());
        r.check("d(G0 xi)=-a G0f", lhs == rhs, mismatch(&lhs, &rhs));
        let lhs = self.differential(&dxi)?;
        let rhs = translate(&f).scale(&a);
        r.check("d(delta xi)=a delta f", lhs == rhs, mismatch(&lhs, &rhs));

        let minus_b = VAElement::scalar(ctx, -b.clone());
        let lhs = apply_mode(&cs.j, 1, &g0xi);
        r.check("J_(1)G0xi=-b", lhs == minus_b, mismatch(&lhs, &minus_b));
        let lhs = apply_mode(&g0xi, 1, &cs.j);
        r.check("(G0xi)_(1)J=-b", lhs == minus_b, mismatch(&lhs, &minus_b));
        let lhs = apply_mode(&cs.g, 1, &xi);
        let want_b = VAElement::scalar(ctx, b);
        r.check("G_(1)xi=b", lhs == want_b, mismatch(&lhs, &want_b));

        let mut aux_ok = true;
        let mut probes = vec![cs.l.clone(), cs.j.clone(), cs.q.clone(), cs.g.clone()];
        probes.extend(probe_states(ctx));
        for c in &probes {
            let ok1 = apply_mode(&dxi, 1, c) == apply_mode(&xi, 0, c).neg();
            let ok2 = apply_mode(&dxi, 2, c) == apply_mode(&xi, 1, c).scale(&q(-2));
            let ok3 = apply_mode(&dxi, 0, c).is_zero();
            aux_ok &= ok1 && ok2 && ok3;
        }
        r.check("(delta xi) modes", aux_ok, "");
        let mut zero_mode_ok = true;
        for c in &probes {
            zero_mode_ok &= apply_mode(&tw.q, 0, c) == apply_mode(&cs.q, 0, c);
        }
        r.check("fQ_(0)=Q_(0)", zero_mode_ok, "");

        r.merge(verify_top_facts(tw));
        r.note(format!("rank d = {}", fmt_q(&tw.rank)));
        Ok(r)
    }

    /// Compatibilities, square-zero, weight-zero and divergence checks on a
    /// deterministic probe set of polyvectors.
    pub fn brst_suite(&self) -> Result<CheckReport> {
        let mut r = CheckReport::new("brst");
        r.merge(self.compat_suite());
        r.check("charge-square-zero", self.square_zero(), "");
        let probes = probe_polyvectors(self.dim(), 2);
        let mut bad = Vec::new();
        for p in &probes {
            if !self.weight_zero_check(p)? {
                bad.push(p.render());
            }
        }
        r.check("weight-zero={f,-}", bad.is_empty(), bad.join("; "));
        let mut bad = Vec::new();
        for p in &probes {
            if !divergence_check(&self.currents, p)? {
                bad.push(p.render());
            }
        }
        r.check("G_(1)=divergence", bad.is_empty(), bad.join("; "));
        Ok(r)
    }
}

fn mismatch(found: &VAElement, expected: &VAElement) -> String {
    if found == expected {
        String::new()
    } else {
        format!("found {} expected {}", found.render(), expected.render())
    }
}

/// G_(1) on weight zero is Δ = Σᵢ ∂/∂xⁱ ∂/∂ψⁱ.
pub fn divergence_check(cs: &CurrentSet, p: &Polyvector) -> Result<bool> {
    let ctx = cs.context();
    let lhs = apply_mode(&cs.g, 1, &embed_polyvector(p, ctx)?);
    let rhs = embed_polyvector(&p.divergence(), ctx)?;
    Ok(lhs == rhs)
}

/// Every monomial x^e ψ^I with |e| ≤ `max_x` and any ψ subset.
pub fn probe_polyvectors(dim: usize, max_x: u32) -> Vec<Polyvector> {
    let mut exps = vec![vec![0u32; dim]];
    for _ in 0..max_x {
        let mut next = Vec::new();
        for e in &exps {
            for i in 0..dim {
                let mut f = e.clone();
                f[i] += 1;
                next.push(f);
            }
        }
        exps.extend(next);
    }
    exps.sort();
    exps.dedup();
    let mut out = Vec::new();
    for e in &exps {
        for mask in 0..(1u32 << dim) {
            let psi: Vec<u32> = (0..dim as u32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            out.push(Polyvector::term(dim, e.clone(), psi, q(1)));
        }
    }
    out
}

/// Generators, first derivatives and products of two underived generators.
fn probe_states(ctx: AlgebraContext) -> Vec<VAElement> {
    let mut gens = Vec::new();
    for kind in Kind::ALL {
        for i in 1..=ctx.dim() as u32 {
            for k in 0..2 {
                gens.push(Generator::new(kind, i, k));
            }
        }
    }
    let mut out = Vec::new();
    for (n, a) in gens.iter().enumerate() {
        out.push(VAElement::monomial(ctx, q(1), vec![*a]).expect("index in range"));
        for b in &gens[n..] {
            if a.deriv == 0 && b.deriv == 0 {
                let m = VAElement::monomial(ctx, q(1), vec![*a, *b]).expect("index in range");
                if !m.is_zero() {
                    out.push(m);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn x(d: usize, i: usize) -> Polynomial {
        Polynomial::var(d, i)
    }

    fn pot(f: Polynomial, w: Vec<i64>) -> BrstComplex {
        BrstComplex::new(Potential::new(f, w).unwrap()).unwrap()
    }

    #[test]
    fn potential_validation() {
        let p = Potential::new(x(2, 1).pow(4).add(&x(2, 2).pow(2)), vec![1, 2]).unwrap();
        assert_eq!((p.a(), p.b()), (4, 3));
        let bad = Potential::new(x(1, 1).pow(2).add(&x(1, 1)), vec![1]);
        assert!(matches!(bad, Err(Error::Inhomogeneous { expected: 2, .. })));
        assert_eq!(Potential::new(x(1, 1), vec![0]), Err(Error::ZeroWeight));
        assert!(matches!(Potential::new(x(2, 1), vec![1]), Err(Error::WeightCount { .. })));
        assert_eq!(
            Potential::new(Polynomial::constant(1, q(1)), vec![1]),
            Err(Error::NonPositiveHomogeneity(0))
        );
    }

    #[test]
    fn rank_values() {
        assert_eq!(rank(1, 1, 3).unwrap(), qf(1, 3));
        assert_eq!(rank(2, 2, 3).unwrap(), qf(2, 3));
        assert_eq!(rank(1, 1, 2).unwrap(), q(0));
        assert_eq!(rank(1, 1, 0), Err(Error::ZeroHomogeneity));
    }

    #[test]
    fn charge_of_square_and_constant() {
        let bc = pot(x(1, 1).pow(2), vec![1]);
        assert_eq!(bc.charge.render(), "2 :phi1 x1:");
        let c = BrstComplex::from_polynomial(Polynomial::constant(1, q(5))).unwrap();
        assert!(c.charge.is_zero());
    }

    #[test]
    fn differential_on_generators() {
        let bc = pot(x(1, 1).pow(3), vec![1]);
        let ctx = bc.context();
        let gen = |k| VAElement::generator(ctx, k, 1, 0).unwrap();
        assert!(bc.differential(&gen(Kind::X)).unwrap().is_zero());
        assert!(bc.differential(&gen(Kind::Phi)).unwrap().is_zero());
        let xx = bc.embed(&Polyvector::from_polynomial(&x(1, 1).pow(2).scale(&q(3)))).unwrap();
        assert_eq!(bc.differential(&gen(Kind::Psi)).unwrap(), xx);
        let dy = bc.differential(&gen(Kind::Y)).unwrap();
        assert_eq!(dy.render(), "-6 :phi1 x1:");
    }

    #[test]
    fn euler_fields() {
        assert_eq!(euler_field(&[1]).unwrap(), Polyvector::x(1, 1).mul(&Polyvector::psi(1, 1)));
        let bc = pot(x(2, 1).pow(4).add(&x(2, 2).pow(2)), vec![1, 2]);
        bc.euler_field().unwrap();
        let ungraded = BrstComplex::from_polynomial(x(1, 1).pow(3)).unwrap();
        assert!(ungraded.euler_field().is_err());
    }

    #[test]
    fn compat_holds_without_homogeneity() {
        for f in [x(1, 1).pow(2), x(2, 1).mul(&x(2, 2)), x(1, 1).pow(3).add(&x(1, 1))] {
            let bc = BrstComplex::from_polynomial(f).unwrap();
            let r = bc.compat_suite();
            assert!(r.passed(), "{}", r.render());
        }
    }

    #[test]
    fn square_zero_and_probes() {
        let bc = pot(x(2, 1).pow(3).add(&x(2, 2).pow(3)), vec![1, 1]);
        let r = bc.brst_suite().unwrap();
        assert!(r.passed(), "{}", r.render());
    }

    #[test]
    fn divergence_examples() {
        let cs = theta_currents(AlgebraContext::new(2, Profile::Polyvector).unwrap()).unwrap();
        let xi = euler_field(&[1, 2]).unwrap();
        let lhs = apply_mode(&cs.g, 1, &embed_polyvector(&xi, cs.context()).unwrap());
        assert_eq!(lhs, VAElement::scalar(cs.context(), q(3)));
        assert!(divergence_check(&cs, &Polyvector::x(2, 1)).unwrap());
    }

    #[test]
    fn theorem_cases() {
        let cases: Vec<(Polynomial, Vec<i64>, Q)> = vec![
            (x(1, 1).pow(2), vec![1], q(0)),
            (x(1, 1).pow(3), vec![1], qf(1, 3)),
            (x(2, 1).pow(3).add(&x(2, 2).pow(3)), vec![1, 1], qf(2, 3)),
            (x(2, 1).pow(4).add(&x(2, 2).pow(2)), vec![1, 2], qf(1, 2)),
        ];
        for (f, w, d) in cases {
            let bc = pot(f, w).with_twist().unwrap();
            assert_eq!(bc.twisted.as_ref().unwrap().rank, d);
            let r = bc.verify_theorem().unwrap();
            assert!(r.passed(), "{}", r.render());
        }
    }

    #[test]
    fn twisted_j_formula() {
        let bc = pot(x(1, 1).pow(3), vec![1]);
        let tw = bc.twisted_currents().unwrap();
        let xi = bc.embed(&euler_field(&[1]).unwrap()).unwrap();
        let g0xi = apply_mode(&bc.currents.g, 0, &xi);
        assert_eq!(tw.j.sub(&bc.currents.j).unwrap(), g0xi.scale(&qf(1, 3)));
    }

    #[test]
    fn direct_sum_rescales_weights() {
        let f = Potential::new(x(1, 1).pow(3), vec![1]).unwrap();
        let g = Potential::new(x(1, 1).pow(2), vec![1]).unwrap();
        let s = f.direct_sum(&g).unwrap();
        assert_eq!(s.a(), 6);
        assert_eq!(s.weights(), &[2, 3]);
    }
}
