//! Virasoro, primary-field and grading checks.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::element::{weight_of, VAElement};
use super::generator::{Generator, Kind, Profile};
use super::products::{apply_mode, generator_basis, lambda_bracket, translate};
use crate::rational::{q, Q};

/// Which grading [`grading`] reads off.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GradingKind {
    Conformal,
    Fermion,
    /// Coordinate weights w₁..w_D: x and φ carry +wᵢ, y and ψ carry −wᵢ.
    Equivariant(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Grade {
    Homogeneous(Q),
    Inhomogeneous,
}

impl Grade {
    pub fn value(&self) -> Option<&Q> {
        match self {
            Grade::Homogeneous(v) => Some(v),
            Grade::Inhomogeneous => None,
        }
    }
}

/// Fermion degree of a single factor: the J_(0) charge. In the polyvector
/// profile ψ carries +1 and φ carries −1; the de Rham profile is reversed.
pub fn fermion_charge(profile: Profile, g: &Generator) -> i64 {
    let sign = match profile {
        Profile::Polyvector => 1,
        Profile::DeRham => -1,
    };
    match g.kind {
        Kind::Psi => sign,
        Kind::Phi => -sign,
        _ => 0,
    }
}

pub fn equivariant_charge(weights: &[i64], g: &Generator) -> i64 {
    let w = weights.get(g.index as usize - 1).copied().unwrap_or(0);
    match g.kind {
        Kind::X | Kind::Phi => w,
        Kind::Y | Kind::Psi => -w,
    }
}

pub fn monomial_grade(profile: Profile, kind: &GradingKind, factors: &[Generator]) -> i64 {
    match kind {
        GradingKind::Conformal => weight_of(profile, factors) as i64,
        GradingKind::Fermion => factors.iter().map(|g| fermion_charge(profile, g)).sum(),
        GradingKind::Equivariant(w) => factors.iter().map(|g| equivariant_charge(w, g)).sum(),
    }
}

/// Common eigenvalue of the requested grading over all terms.
pub fn grading(a: &VAElement, kind: &GradingKind) -> Grade {
    let profile = a.context().profile();
    let mut value: Option<i64> = None;
    for (factors, _) in a.terms() {
        let g = monomial_grade(profile, kind, factors);
        match value {
            None => value = Some(g),
            Some(v) if v != g => return Grade::Inhomogeneous,
            _ => {}
        }
    }
    Grade::Homogeneous(q(value.unwrap_or(0)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirasoroFailure {
    pub mode: String,
    pub found: String,
    pub expected: String,
}

impl std::fmt::Display for VirasoroFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: found {}, expected {}", self.mode, self.found, self.expected)
    }
}

/// Verifies that `L` is a Virasoro vector and returns its central charge.
///
/// Checks `[L λ L] = {0 ↦ δL, 1 ↦ 2L, 3 ↦ (c/2)Ω}`, that `L_(0)` acts as δ on
/// generators and that `L_(1)` multiplies canonical monomials by their weight.
pub fn check_virasoro(l: &VAElement) -> Result<Q, VirasoroFailure> {
    let ctx = l.context();
    let fail = |mode: &str, found: &VAElement, expected: &VAElement| VirasoroFailure {
        mode: mode.to_string(),
        found: found.render(),
        expected: expected.render(),
    };
    if l.parity() != Some(false) {
        return Err(VirasoroFailure {
            mode: "parity".into(),
            found: "odd or mixed".into(),
            expected: "even".into(),
        });
    }
    let bracket = lambda_bracket(l, l).map_err(|e| VirasoroFailure {
        mode: "context".into(),
        found: e.to_string(),
        expected: String::new(),
    })?;
    let zero = VAElement::zero(ctx);
    let entry = |n: u32| bracket.entry(n).cloned().unwrap_or_else(|| zero.clone());

    let dl = translate(l);
    if entry(0) != dl {
        return Err(fail("L_(0)L", &entry(0), &dl));
    }
    let two_l = l.scale(&q(2));
    if entry(1) != two_l {
        return Err(fail("L_(1)L", &entry(1), &two_l));
    }
    if !entry(2).is_zero() {
        return Err(fail("L_(2)L", &entry(2), &zero));
    }
    let third = entry(3);
    let half_c = third.vacuum_coefficient();
    let expect3 = VAElement::scalar(ctx, half_c.clone());
    if third != expect3 {
        return Err(fail("L_(3)L", &third, &expect3));
    }
    if let Some(d) = bracket.degree() {
        if d > 3 {
            return Err(fail(&format!("L_({d})L"), &entry(d), &zero));
        }
    }

    for g in generator_basis(ctx, 1) {
        let got = apply_mode(l, 0, &g);
        let want = translate(&g);
        if got != want {
            return Err(fail(&format!("L_(0) on {}", g.render()), &got, &want));
        }
    }
    for m in diagonal_probe_states(ctx) {
        let got = apply_mode(l, 1, &m);
        let (factors, _) = m.terms().next().expect("probe states are nonzero");
        let w = weight_of(ctx.profile(), factors);
        let want = m.scale(&q(w as i64));
        if got != want {
            return Err(fail(&format!("L_(1) on {}", m.render()), &got, &want));
        }
    }
    Ok(half_c * q(2))
}

/// Generators, their derivatives and pairwise products of underived generators.
fn diagonal_probe_states(ctx: super::generator::AlgebraContext) -> Vec<VAElement> {
    let gens = generator_basis(ctx, 1);
    let mut out = gens.clone();
    let bare: Vec<Generator> = gens
        .iter()
        .filter_map(|g| g.terms().next().map(|(f, _)| f[0]))
        .filter(|g| g.deriv == 0)
        .collect();
    for (i, a) in bare.iter().enumerate() {
        for b in &bare[i..] {
            let m = VAElement::monomial(ctx, Q::one(), vec![*a, *b]).expect("indices in range");
            if !m.is_zero() {
                out.push(m);
            }
        }
    }
    out
}

/// True iff `[L λ A] = {0 ↦ δA, 1 ↦ w·A}` with no higher poles.
pub fn is_primary(a: &VAElement, l: &VAElement, w: &Q) -> bool {
    let Ok(bracket) = lambda_bracket(l, a) else {
        return false;
    };
    let expected = [(0, translate(a)), (1, a.scale(w))];
    bracket.matches(&expected)
}

/// Eigenvalue of `op_(n)` on `a` if `a` is an eigenvector, else `None`.
pub fn mode_eigenvalue(op: &VAElement, n: i64, a: &VAElement) -> Option<Q> {
    let image = apply_mode(op, n, a);
    let (factors, c) = a.terms().next()?;
    let ratio = image.coefficient(factors) / c;
    if image == a.scale(&ratio) {
        Some(ratio)
    } else if image.is_zero() {
        Some(Q::zero())
    } else {
        None
    }
}
