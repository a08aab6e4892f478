//! Current sets of the chiral de Rham complex Ωᶜʰ and of chiral polyvectors
//! Θᶜʰ on affine D-space, the mirror involution between them, and the
//! embedding of classical polyvectors as conformal weight zero states.

use num_traits::{One, Zero};

use crate::conformal::{
    apply_mode, check_virasoro, is_primary, lambda_bracket, translate, AlgebraContext, Generator,
    Kind, Profile, VAElement,
};
use crate::error::{Error, Result};
use crate::polynomial::Polyvector;
use crate::rational::{fmt_q, q, Q};
use crate::report::CheckReport;

/// The four currents {L, J, Q, G} presenting a topological structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurrentSet {
    pub l: VAElement,
    pub j: VAElement,
    pub q: VAElement,
    pub g: VAElement,
    /// Declared Heisenberg level of J.
    pub rank: Q,
    pub profile: Profile,
}

impl CurrentSet {
    pub fn context(&self) -> AlgebraContext {
        self.l.context()
    }

    /// Named access used by the CLI (`L`, `J`, `Q`, `G`).
    pub fn get(&self, name: &str) -> Option<&VAElement> {
        match name {
            "L" => Some(&self.l),
            "J" => Some(&self.j),
            "Q" => Some(&self.q),
            "G" => Some(&self.g),
            _ => None,
        }
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut VAElement> {
        match name {
            "L" => Some(&mut self.l),
            "J" => Some(&mut self.j),
            "Q" => Some(&mut self.q),
            "G" => Some(&mut self.g),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        format!(
            "profile: {:?}\nrank: {}\nL = {}\nJ = {}\nQ = {}\nG = {}\n",
            self.profile,
            fmt_q(&self.rank),
            self.l.render(),
            self.j.render(),
            self.q.render(),
            self.g.render()
        )
    }
}

fn gen(kind: Kind, index: u32, deriv: u32) -> Generator {
    Generator::new(kind, index, deriv)
}

/// Σᵢ c · :a(i) b(i): with the factors in the written order.
fn summed_pair(ctx: AlgebraContext, c: i64, a: (Kind, u32), b: (Kind, u32)) -> VAElement {
    let mut out = VAElement::zero(ctx);
    for i in 1..=ctx.dim() as u32 {
        out.add_factors(vec![gen(a.0, i, a.1), gen(b.0, i, b.1)], q(c));
    }
    out
}

fn require_profile(ctx: AlgebraContext, expected: Profile) -> Result<()> {
    if ctx.profile() != expected {
        return Err(Error::ProfileMismatch { expected, found: ctx.profile() });
    }
    Ok(())
}

/// Ωᶜʰ currents: L = δxⁱyⁱ + δφⁱψⁱ, J = φⁱψⁱ, Q = yⁱφⁱ, G = δxⁱψⁱ.
pub fn omega_currents(ctx: AlgebraContext) -> Result<CurrentSet> {
    require_profile(ctx, Profile::DeRham)?;
    let mut l = summed_pair(ctx, 1, (Kind::X, 1), (Kind::Y, 0));
    l.add_scaled(&summed_pair(ctx, 1, (Kind::Phi, 1), (Kind::Psi, 0)), &Q::one());
    Ok(CurrentSet {
        l,
        j: summed_pair(ctx, 1, (Kind::Phi, 0), (Kind::Psi, 0)),
        q: summed_pair(ctx, 1, (Kind::Y, 0), (Kind::Phi, 0)),
        g: summed_pair(ctx, 1, (Kind::X, 1), (Kind::Psi, 0)),
        rank: q(ctx.dim() as i64),
        profile: Profile::DeRham,
    })
}

/// G ↦ Q, Q ↦ G, J ↦ −J, L ↦ L − δJ, with the profile toggled.
pub fn mirror(cs: &CurrentSet) -> CurrentSet {
    let profile = cs.profile.toggled();
    let l = cs.l.sub(&translate(&cs.j)).expect("currents share a context");
    CurrentSet {
        l: l.with_profile(profile),
        j: cs.j.neg().with_profile(profile),
        q: cs.g.with_profile(profile),
        g: cs.q.with_profile(profile),
        rank: cs.rank.clone(),
        profile,
    }
}

/// Θᶜʰ currents: L = δxⁱyⁱ + δψⁱφⁱ, J = −φⁱψⁱ, G = yⁱφⁱ, Q = δxⁱψⁱ.
///
/// Built from the local formulas and checked against the mirror of the Ωᶜʰ
/// currents; any difference is an engine error.
pub fn theta_currents(ctx: AlgebraContext) -> Result<CurrentSet> {
    require_profile(ctx, Profile::Polyvector)?;
    let mut l = summed_pair(ctx, 1, (Kind::X, 1), (Kind::Y, 0));
    // :δψ φ: = −:φ δψ:
    l.add_scaled(&summed_pair(ctx, 1, (Kind::Psi, 1), (Kind::Phi, 0)), &Q::one());
    let direct = CurrentSet {
        l,
        j: summed_pair(ctx, -1, (Kind::Phi, 0), (Kind::Psi, 0)),
        g: summed_pair(ctx, 1, (Kind::Y, 0), (Kind::Phi, 0)),
        q: summed_pair(ctx, 1, (Kind::X, 1), (Kind::Psi, 0)),
        rank: q(ctx.dim() as i64),
        profile: Profile::Polyvector,
    };
    let mirrored = mirror(&omega_currents(ctx.with_profile(Profile::DeRham))?);
    if mirrored != direct {
        return Err(Error::EngineDisagreement(format!(
            "theta currents differ from the mirrored de Rham currents:\n{}\nvs\n{}",
            direct.render(),
            mirrored.render()
        )));
    }
    Ok(direct)
}

fn expect_bracket(
    report: &mut CheckReport,
    name: &str,
    a: &VAElement,
    b: &VAElement,
    expected: &[(u32, VAElement)],
) {
    match lambda_bracket(a, b) {
        Ok(got) => {
            let ok = got.matches(expected);
            let detail = if ok {
                String::new()
            } else {
                let want = crate::conformal::LambdaPolynomial::from_entries(expected.iter().cloned());
                format!("found {} expected {}", got.render(), want.render())
            };
            report.check(name, ok, detail);
        }
        Err(e) => report.check(name, false, e.to_string()),
    }
}

/// Checks the defining facts of a topological structure at the declared rank:
///
/// * (a) L is Virasoro with c = 0;
/// * (b) G, Q are primaries of weights 2, 1;
/// * (c) `[J λ J] = {1 ↦ rank}`;
/// * (d) `[Q λ G] = {0 ↦ L, 1 ↦ J, 2 ↦ rank}`;
/// * (e) `[G λ G] = [Q λ Q] = 0`;
/// * (f) J_(0) charges +1 on Q and −1 on G.
pub fn verify_top_facts(cs: &CurrentSet) -> CheckReport {
    let mut r = CheckReport::new("top-facts");
    let ctx = cs.context();
    let omega = VAElement::vacuum(ctx);

    let parity_ok = cs.l.parity() == Some(false)
        && cs.j.parity() == Some(false)
        && cs.q.parity() == Some(true)
        && cs.g.parity() == Some(true);
    r.check("parity", parity_ok, if parity_ok { "" } else { "L, J must be even and Q, G odd" });

    match check_virasoro(&cs.l) {
        Ok(c) => r.check(
            "a:virasoro",
            c.is_zero(),
            if c.is_zero() { String::new() } else { format!("central charge {}", fmt_q(&c)) },
        ),
        Err(f) => r.check("a:virasoro", false, f.to_string()),
    }

    let g_primary = is_primary(&cs.g, &cs.l, &q(2));
    r.check("b:G-primary-2", g_primary, if g_primary { String::new() } else { bracket_detail(&cs.l, &cs.g) });
    let q_primary = is_primary(&cs.q, &cs.l, &q(1));
    r.check("b:Q-primary-1", q_primary, if q_primary { String::new() } else { bracket_detail(&cs.l, &cs.q) });

    let level = omega.scale(&cs.rank);
    expect_bracket(&mut r, "c:J-J", &cs.j, &cs.j, &[(1, level.clone())]);
    expect_bracket(
        &mut r,
        "d:Q-G",
        &cs.q,
        &cs.g,
        &[(0, cs.l.clone()), (1, cs.j.clone()), (2, level)],
    );
    expect_bracket(&mut r, "e:G-G", &cs.g, &cs.g, &[]);
    expect_bracket(&mut r, "e:Q-Q", &cs.q, &cs.q, &[]);

    let jq = apply_mode(&cs.j, 0, &cs.q);
    r.check(
        "f:J-charge-Q",
        jq == cs.q,
        if jq == cs.q { String::new() } else { format!("J_(0)Q = {}", jq.render()) },
    );
    let jg = apply_mode(&cs.j, 0, &cs.g);
    let minus_g = cs.g.neg();
    r.check(
        "f:J-charge-G",
        jg == minus_g,
        if jg == minus_g { String::new() } else { format!("J_(0)G = {}", jg.render()) },
    );
    r
}

fn bracket_detail(l: &VAElement, a: &VAElement) -> String {
    match lambda_bracket(l, a) {
        Ok(b) => format!("[L λ A] = {}", b.render()),
        Err(e) => e.to_string(),
    }
}

/// x^e ψ^{i₁}…ψ^{iₖ} ↦ :ψ^{i₁}…ψ^{iₖ} x…x: with ψ's in ascending index order.
pub fn embed_polyvector(p: &Polyvector, ctx: AlgebraContext) -> Result<VAElement> {
    require_profile(ctx, Profile::Polyvector)?;
    if p.dim() > ctx.dim() {
        return Err(Error::IndexOutOfRange { index: p.dim() as u32, dim: ctx.dim() });
    }
    let mut out = VAElement::zero(ctx);
    for (key, c) in p.terms() {
        let mut factors: Vec<Generator> = key.psi.iter().map(|&i| gen(Kind::Psi, i, 0)).collect();
        for (i, e) in key.x.iter().enumerate() {
            for _ in 0..*e {
                factors.push(gen(Kind::X, i as u32 + 1, 0));
            }
        }
        out.add_factors(factors, c.clone());
    }
    Ok(out)
}

/// ξᶜʰ := G_(0) ξ for a vector field ξ, with its self-locality checked:
/// `[ξᶜʰ λ ξᶜʰ]` must equal `{0 ↦ [ξ, ξ]ᶜʰ}`, which is zero.
pub fn chiral_lift(v: &Polyvector, cs: &CurrentSet) -> Result<VAElement> {
    let lift = lift_unchecked(v, cs)?;
    let self_bracket = lambda_bracket(&lift, &lift)?;
    let expected = lift_unchecked(&v.lie_bracket(v), cs)?;
    if !self_bracket.matches(&[(0, expected)]) {
        return Err(Error::EngineDisagreement(format!(
            "chiral lift {} is not self-local: {}",
            lift.render(),
            self_bracket.render()
        )));
    }
    Ok(lift)
}

fn lift_unchecked(v: &Polyvector, cs: &CurrentSet) -> Result<VAElement> {
    require_profile(cs.context(), Profile::Polyvector)?;
    if !v.is_zero() && v.psi_degree() != Some(1) {
        return Err(Error::NotVectorField);
    }
    let e = embed_polyvector(v, cs.context())?;
    Ok(apply_mode(&cs.g, 0, &e))
}

/// Checks `ξᶜʰ_(n) χᶜʰ = 0` for `n ≥ 1` and `ξᶜʰ_(0) χᶜʰ = [ξ, χ]ᶜʰ`.
pub fn lift_bracket_check(v: &Polyvector, w: &Polyvector, cs: &CurrentSet) -> Result<bool> {
    let a = lift_unchecked(v, cs)?;
    let b = lift_unchecked(w, cs)?;
    let expected = lift_unchecked(&v.lie_bracket(w), cs)?;
    Ok(lambda_bracket(&a, &b)?.matches(&[(0, expected)]))
}
