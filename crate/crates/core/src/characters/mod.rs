//! Characters of the chiral critical locus: theta quotients, the fixed-point
//! localization formula, the t = z^{1/a} substitution and the direct Euler
//! character assembled from slices.
//!
//! All series live in u = z^{1/a}. The direct character is
//! Σₙ qⁿ Σ_c χ(n, c) u^{−c}, where χ(n, c) is the Euler characteristic of the
//! (n, c) line of the complex.

mod ratfunc;
mod series;

use std::collections::BTreeSet;

use num_traits::{One, Signed};
use serde::Serialize;

use crate::brst::{BrstComplex, Potential};
use crate::cohomology::{j_range, m_min, SliceCache};
use crate::cohomology::{check_weights, load_slices, require_graded};
use crate::error::{Error, Result};
use crate::polynomial::Polynomial;
use crate::rational::{fmt_q, q, Q};
use crate::report::CheckReport;

pub use ratfunc::{Exp, LaurentPoly, RatFunc};
pub use series::{theta, theta_monomial, theta_oracle, theta_quotient, u_exponent, QSeries};

/// Weights of the torus action at a fixed point y: tangent weights on T_yY
/// and the weight of the fibre direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointDatum {
    pub tangent: Vec<i64>,
    pub fibre: i64,
}

impl FixedPointDatum {
    pub fn new(tangent: Vec<i64>, fibre: i64) -> Self {
        Self { tangent, fibre }
    }

    /// The displayed formula w_tot = (1/a) Σ wᵢ, with no fibre term.
    pub fn literal(tangent: Vec<i64>) -> Self {
        Self { tangent, fibre: 0 }
    }

    pub fn w_tot(&self, a: u32) -> Q {
        let s: i64 = self.tangent.iter().sum::<i64>() + self.fibre;
        Q::new(s.into(), i64::from(a).into())
    }

    pub fn alphas(&self, a: u32) -> Vec<Q> {
        self.tangent.iter().map(|w| Q::new((*w).into(), i64::from(a).into())).collect()
    }
}

fn pole(i: usize) -> Error {
    Error::ThetaPole(format!(" at fixed point {}", i + 1))
}

/// Σ_y Θ{w̲(y)} Θ{−w_tot(y)} through qᴺ.
pub fn localization_character(points: &[FixedPointDatum], a: u32, n: usize) -> Result<QSeries> {
    let mut acc = QSeries::zero(a, n);
    for (i, y) in points.iter().enumerate() {
        let mut alphas = y.alphas(a);
        alphas.push(-y.w_tot(a));
        let term = theta_quotient(&alphas, a, n).map_err(|e| match e {
            Error::ThetaPole(_) => pole(i),
            e => e,
        })?;
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Σ_y Πᵢ θ(z t^{wᵢ})/θ(t^{wᵢ}) · θ(z t^{−W})/θ(t^{−W}) with z = uᵃ and
/// W = a·w_tot(y), before setting t = u.
pub fn pre_substitution(points: &[FixedPointDatum], a: u32, n: usize) -> Result<QSeries> {
    let z = i64::from(a);
    let mut acc = QSeries::zero(a, n);
    for (i, y) in points.iter().enumerate() {
        let total: i64 = y.tangent.iter().sum::<i64>() + y.fibre;
        let mut term = QSeries::one(a, n);
        for w in y.tangent.iter().copied().chain([-total]) {
            if w == 0 {
                return Err(pole(i));
            }
            let top = theta_monomial((z, w), a, n);
            let bottom = theta_monomial((0, w), a, n);
            term = term.mul(&top.div(&bottom)?)?;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// t ↦ u: uⁱtᵏ becomes u^{i+k}.
pub fn substitute_t(s: &QSeries) -> Result<QSeries> {
    s.map_exponents(|(i, k)| (i + k, 0))
}

/// Euler character through qᴺ with the (n, c) range used at each order.
#[derive(Debug, Clone)]
pub struct DirectCharacter {
    pub series: QSeries,
    pub c_ranges: Vec<(i64, i64)>,
    /// Orders whose top band of c values is nonzero (truncation unsound).
    pub insufficient: Vec<usize>,
}

impl DirectCharacter {
    pub fn sound(&self) -> bool {
        self.insufficient.is_empty()
    }
}

/// Default upper end of the c range at conformal weight n.
pub fn default_c_max(weights: &[i64], a: i64, n: u32) -> i64 {
    let w: i64 = weights.iter().sum();
    (n as i64 + 2) * a + w
}

/// Direct character of the chiral critical locus: Euler characteristics of
/// the (n, c) lines, which by Euler–Poincaré equal those of cohomology.
pub fn direct_character(
    bc: &BrstComplex,
    n: usize,
    c_max: Option<i64>,
    cache: Option<&SliceCache>,
) -> Result<DirectCharacter> {
    let pot = require_graded(bc)?;
    euler_series(pot.weights(), pot.a(), n, c_max, cache)
}

/// Σₙ qⁿ Σ_c χ(n, c) u^{−c} counted from slice bases.
pub fn euler_series(
    weights: &[i64],
    a: i64,
    n: usize,
    c_max: Option<i64>,
    cache: Option<&SliceCache>,
) -> Result<DirectCharacter> {
    check_weights(weights)?;
    let dim = weights.len();
    let au = u32::try_from(a).map_err(|_| Error::NonPositiveHomogeneity(a))?;
    let mut ranges = Vec::new();
    let mut keys = BTreeSet::new();
    for k in 0..=n as u32 {
        let lo = m_min(weights, k) - a * k as i64;
        let hi = c_max.unwrap_or_else(|| default_c_max(weights, a, k));
        for c in lo..=hi {
            for j in j_range(dim, k) {
                let m = c - a * j;
                if m >= m_min(weights, k) {
                    keys.insert((k, m));
                }
            }
        }
        ranges.push((lo, hi));
    }
    let keys: Vec<(u32, i64)> = keys.into_iter().collect();
    let slices = load_slices(weights, &keys, cache)?;

    let mut coeffs = Vec::new();
    let mut insufficient = Vec::new();
    for (k, &(lo, hi)) in ranges.iter().enumerate() {
        let mut poly = LaurentPoly::zero();
        let mut top_band = false;
        for c in lo..=hi {
            let chi: i64 = j_range(dim, k as u32)
                .map(|j| {
                    let d = slices.get(&(k as u32, c - a * j)).map_or(0, |s| s.bucket(j).len()) as i64;
                    if j.rem_euclid(2) == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .sum();
            if chi != 0 {
                poly.add_term((-c, 0), q(chi));
                if c > hi - a {
                    top_band = true;
                }
            }
        }
        if top_band {
            insufficient.push(k);
        }
        coeffs.push(RatFunc::from_poly(poly));
    }
    Ok(DirectCharacter { series: QSeries::from_coeffs(au, n, coeffs), c_ranges: ranges, insufficient })
}

/// Normalization linking the A¹ localization series to the direct
/// character: direct(u) = sign · u^shift · loc(u^orientation), where loc
/// uses a single fixed point with empty tangent and the given fibre weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Convention {
    pub orientation: i64,
    pub fibre: i64,
    pub sign: i64,
    pub shift: i64,
}

impl Convention {
    pub fn datum(&self) -> FixedPointDatum {
        FixedPointDatum::new(Vec::new(), self.fibre)
    }

    pub fn apply(&self, s: &QSeries) -> Result<QSeries> {
        let o = self.orientation;
        let moved = s.map_exponents(move |(i, k)| (o * i, k))?;
        let factor = RatFunc::monomial((self.shift, 0), q(self.sign));
        Ok(moved.scale(&factor))
    }

    /// Normalized A¹ localization series for f = xᵃ.
    pub fn series(&self, a: u32, n: usize) -> Result<QSeries> {
        self.apply(&localization_character(&[self.datum()], a, n)?)
    }

    pub fn describe(&self, a: u32) -> String {
        let w_tot = self.datum().w_tot(a);
        let var = if self.orientation > 0 { "u" } else { "u^-1" };
        let factor = LaurentPoly::monomial((self.shift, 0), q(self.sign)).render();
        format!(
            "fibre weight {} (w_tot = {}), direct(u) = {} * Theta{{-w_tot}}({})",
            self.fibre,
            fmt_q(&w_tot),
            factor,
            var
        )
    }
}

/// x^a on A¹ with unit weight.
pub fn a1_potential(a: u32) -> Result<Potential> {
    Potential::new(Polynomial::monomial(1, vec![a], Q::one()), vec![1])
}

/// Candidates reproducing a direct character, ordered by |shift|, then
/// orientation (+1 first), then |fibre| (positive first).
pub fn fitting_conventions(direct: &QSeries, a: u32) -> Result<Vec<Convention>> {
    let n = direct.order();
    let target = direct.expanded().ok_or_else(|| Error::EngineDisagreement("direct character has denominators".into()))?;
    let lowest = |p: &LaurentPoly| p.terms().next().map(|(e, c)| (*e, c.clone()));
    let Some((d_exp, d_c)) = lowest(&target[0]) else {
        return Ok(Vec::new());
    };
    let mut found = Vec::new();
    for orientation in [1, -1] {
        for f in 1..=i64::from(a) {
            for fibre in [f, -f] {
                let base = Convention { orientation, fibre, sign: 1, shift: 0 };
                let loc = match localization_character(&[base.datum()], a, n) {
                    Ok(s) => s,
                    Err(Error::ThetaPole(_)) => continue,
                    Err(e) => return Err(e),
                };
                let Some(lead) = base.apply(&loc)?.coeff(0).to_poly() else { continue };
                let Some((l_exp, l_c)) = lowest(&lead) else { continue };
                let ratio = d_c.clone() / l_c;
                if ratio.abs() != Q::one() || d_exp.1 != l_exp.1 {
                    continue;
                }
                let conv = Convention {
                    orientation,
                    fibre,
                    sign: if ratio.is_one() { 1 } else { -1 },
                    shift: d_exp.0 - l_exp.0,
                };
                if conv.apply(&loc)? == *direct {
                    found.push(conv);
                }
            }
        }
    }
    found.sort_by_key(|c| (c.shift.abs(), -c.orientation, c.fibre.abs(), -c.fibre));
    Ok(found)
}

/// Outcome of the localization cross-check.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremCheck {
    pub fit_a: u32,
    pub order: usize,
    pub candidates: Vec<Convention>,
    pub chosen: Option<Convention>,
    #[serde(skip)]
    pub report: CheckReport,
}

/// Fixes the convention on x^{fit_a} and compares against each x^a in `tests`.
pub fn theorem_check(fit_a: u32, tests: &[u32], n: usize, cache: Option<&SliceCache>) -> Result<TheoremCheck> {
    let mut report = CheckReport::new("localization");
    let direct_for = |a: u32| -> Result<DirectCharacter> {
        let pot = a1_potential(a)?;
        euler_series(pot.weights(), pot.a(), n, None, cache)
    };

    let fit = direct_for(fit_a)?;
    report.check(format!("direct x^{fit_a} window"), fit.sound(), format!("{:?}", fit.c_ranges));
    let candidates = fitting_conventions(&fit.series, fit_a)?;
    let chosen = candidates.first().copied();
    report.check(
        format!("fit x^{fit_a}"),
        chosen.is_some(),
        chosen.map_or("no convention reproduces the direct character".into(), |c| c.describe(fit_a)),
    );

    for &a in tests {
        let direct = direct_for(a)?;
        report.check(format!("direct x^{a} window"), direct.sound(), format!("{:?}", direct.c_ranges));
        let Some(conv) = chosen else {
            report.check(format!("x^{a} through q^{n}"), false, "no convention");
            continue;
        };
        let loc = conv.series(a, n)?;
        let diff = direct.series.sub(&loc)?;
        report.check(format!("x^{a} through q^{n}"), diff.is_zero(), first_difference(&diff));

        let post = localization_character(&[conv.datum()], a, n)?;
        let pre = substitute_t(&pre_substitution(&[conv.datum()], a, n)?)?;
        report.check(format!("x^{a} pre-substitution"), pre == post, "z = u^a, t = u form agrees");

        let raw = direct.series.sub(&post)?;
        report.note(format!("x^{a}: direct - raw Theta{{-w_tot}} = {}", first_difference(&raw)));
        for alt in candidates.iter().skip(1) {
            let same = alt.series(a, n)? == direct.series;
            report.note(format!("x^{a}: alternative [{}] {}", alt.describe(a), if same { "matches" } else { "fails" }));
        }
        match localization_character(&[FixedPointDatum::literal(Vec::new())], a, n) {
            Err(e) => report.note(format!("x^{a}: literal w_tot = 0 gives {e}")),
            Ok(s) => report.note(format!("x^{a}: literal formula = {}", first_difference(&s))),
        }
    }
    for c in candidates.iter().skip(1) {
        report.note(format!("also fits x^{fit_a}: {}", c.describe(fit_a)));
    }
    Ok(TheoremCheck { fit_a, order: n, candidates, chosen, report })
}

/// Lowest nonzero order of a series, rendered.
pub fn first_difference(s: &QSeries) -> String {
    s.coeffs()
        .iter()
        .enumerate()
        .find(|(_, c)| !c.is_zero())
        .map_or("0".into(), |(k, c)| format!("q^{k}: {}", c.render()))
}
