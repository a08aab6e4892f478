//! Front end for the chiral critical locus calculator.

pub mod parse;

use std::path::PathBuf;

use chiral_core::brst::{rank, BrstComplex, Potential};
use chiral_core::characters::{
    direct_character, localization_character, pre_substitution, substitute_t, theorem_check,
    FixedPointDatum,
};
use chiral_core::cohomology::{
    bv_cohomology, bv_identities, cohomology_with, CohomologyOptions, SliceCache, Window,
};
use chiral_core::conformal::{lambda_bracket, nth_product, AlgebraContext, Profile};
use chiral_core::freefield::{mirror, omega_currents, theta_currents, verify_top_facts, CurrentSet};
use chiral_core::polynomial::Polynomial;
use chiral_core::rational::fmt_q;
use chiral_core::report::CheckReport;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub use parse::{parse_polynomial, parse_potential, parse_state, InputError, ParseError};

#[derive(Debug, Parser)]
#[command(name = "chiral-calc", version, about = "Exact calculus for the chiral critical locus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Number of coordinates D.
    #[arg(short = 'D', long = "dim", global = true)]
    pub dim: Option<usize>,
    /// Coordinate weights as a comma list.
    #[arg(short = 'w', long = "weights", global = true)]
    pub weights: Option<String>,
    /// Potential, e.g. "x1^3 + x2^3".
    #[arg(short = 'f', long = "potential", global = true)]
    pub potential: Option<String>,
    #[arg(long, global = true)]
    pub nmax: Option<u32>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mmin: Option<i64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mmax: Option<i64>,
    /// q-series truncation order.
    #[arg(short = 'N', long = "order", global = true)]
    pub order: Option<usize>,
    #[arg(long, global = true)]
    pub json: bool,
    /// Directory for cached slice bases.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Replace a current before checking, NAME=EXPR.
    #[arg(long = "override", global = true)]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Derham,
    Polyvector,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Profile {
        match p {
            ProfileArg::Derham => Profile::DeRham,
            ProfileArg::Polyvector => Profile::Polyvector,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Topological OPE facts for both free-field current sets.
    VerifyTop,
    /// BRST charge checks for a potential.
    BrstSuite,
    /// Twisted currents and the topological structure at rank d.
    Twist,
    /// Exact slice cohomology over a window.
    Cohomology,
    /// Direct character, localization series and their comparison.
    Character {
        /// Fixed point as TANGENT:FIBRE, e.g. "1,2:3" or ":1".
        #[arg(long = "fixed", allow_hyphen_values = true)]
        fixed: Vec<String>,
        /// Fit the fibre convention on x1^3 and compare with this potential.
        #[arg(long)]
        compare: bool,
    },
    /// BV homotopy identities and E1 / classical certificates.
    Bv,
    /// Print current sets.
    ShowCurrents {
        #[arg(long, value_enum)]
        profile: Option<ProfileArg>,
    },
    /// n-th products or the λ-bracket of two states.
    Eval {
        a: String,
        b: String,
        /// Mode index; the full λ-bracket when omitted.
        #[arg(short = 'n', long = "mode", allow_hyphen_values = true)]
        n: Option<i64>,
        #[arg(long, value_enum, default_value = "polyvector")]
        profile: ProfileArg,
    },
}

/// Rendered output and verdict of one run.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
    pub warnings: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

struct Ctx<'a> {
    opts: &'a Options,
    warnings: Vec<String>,
}

impl Ctx<'_> {
    fn weights(&self) -> Result<Option<Vec<i64>>, InputError> {
        self.opts.weights.as_deref().map(parse::parse_weights).transpose()
    }

    fn potential(&self) -> Result<Potential, InputError> {
        let text = self
            .opts
            .potential
            .as_deref()
            .ok_or_else(|| InputError::Invalid("this command needs a potential (-f)".into()))?;
        let weights = self.weights()?;
        let p = parse_potential(text, self.opts.dim, weights.as_deref())?;
        if let Some(d) = self.opts.dim {
            if d != p.dim() {
                return Err(InputError::Invalid(format!("-D {d} but the potential has {} variables", p.dim())));
            }
        }
        Ok(p)
    }

    fn dim(&self) -> Result<usize, InputError> {
        if let Some(d) = self.opts.dim {
            return Ok(d);
        }
        if let Some(w) = self.weights()? {
            return Ok(w.len());
        }
        match &self.opts.potential {
            Some(text) => Ok(parse_polynomial(text, None)?.dim()),
            None => Ok(1),
        }
    }

    fn window(&self, a: i64) -> Window {
        let d = Window::default_for(a);
        Window::new(
            self.opts.nmax.unwrap_or(d.n_max),
            self.opts.mmin.unwrap_or(d.m_min),
            self.opts.mmax.unwrap_or(d.m_max),
        )
    }

    fn cache(&self) -> Result<Option<SliceCache>, InputError> {
        Ok(self.opts.cache.as_ref().map(SliceCache::new).transpose()?)
    }

    fn apply_overrides(&mut self, cs: &mut CurrentSet) -> Result<(), InputError> {
        for o in &self.opts.overrides {
            let (name, expr) = parse::split_override(o)?;
            let (state, warns) = parse_state(&expr, cs.context())?;
            self.warnings.extend(warns);
            *cs.get_mut(&name).expect("validated name") = state;
        }
        Ok(())
    }
}

fn render_reports(reports: &[CheckReport], extra: &str) -> String {
    let mut out = extra.to_string();
    for r in reports {
        out.push_str(&r.render());
    }
    out
}

fn finish(ctx: Ctx, command: &str, reports: Vec<CheckReport>, extra_text: String, extra_json: Value, passed: bool) -> Outcome {
    let passed = passed && reports.iter().all(CheckReport::passed);
    let text = if ctx.opts.json {
        let mut v = json!({
            "command": command,
            "passed": passed,
            "reports": reports,
        });
        if !extra_json.is_null() {
            v["result"] = extra_json;
        }
        serde_json::to_string_pretty(&v).expect("json") + "\n"
    } else {
        let body = render_reports(&reports, &extra_text);
        if reports.is_empty() {
            body
        } else {
            format!("{body}{}\n", if passed { "PASS" } else { "FAIL" })
        }
    };
    Outcome { text, passed, warnings: ctx.warnings }
}

/// Executes one command.
pub fn run(cli: &Cli) -> Result<Outcome, InputError> {
    let mut ctx = Ctx { opts: &cli.opts, warnings: Vec::new() };
    match &cli.command {
        Command::VerifyTop => verify_top(ctx),
        Command::BrstSuite => {
            let bc = BrstComplex::new(ctx.potential()?)?;
            let r = bc.brst_suite()?;
            Ok(finish(ctx, "brst-suite", vec![r], String::new(), Value::Null, true))
        }
        Command::Twist => twist(ctx),
        Command::Cohomology => cohomology_cmd(ctx),
        Command::Character { fixed, compare } => character(ctx, fixed, *compare),
        Command::Bv => {
            let pot = ctx.potential()?;
            let window = ctx.window(pot.a());
            let bc = BrstComplex::new(pot)?;
            let ids = bv_identities(&bc, window)?;
            let bv = bv_cohomology(&bc, window.n_max, window)?;
            let json = serde_json::to_value(&bv).expect("json");
            Ok(finish(ctx, "bv", vec![ids, bv.to_check_report()], String::new(), json, true))
        }
        Command::ShowCurrents { profile } => {
            let dim = ctx.dim()?;
            let mut sets = Vec::new();
            if ctx.opts.potential.is_some() {
                let bc = BrstComplex::new(ctx.potential()?)?.with_twist()?;
                let mut tw = bc.twisted.clone().expect("twisted");
                ctx.apply_overrides(&mut tw)?;
                sets.push(("twisted", tw));
            } else {
                let profiles = match profile {
                    Some(p) => vec![Profile::from(*p)],
                    None => vec![Profile::DeRham, Profile::Polyvector],
                };
                for p in profiles {
                    let mut cs = currents_for(AlgebraContext::new(dim, p)?)?;
                    ctx.apply_overrides(&mut cs)?;
                    sets.push((if p == Profile::DeRham { "omega" } else { "theta" }, cs));
                }
            }
            let text: String = sets.iter().map(|(n, cs)| format!("[{n}]\n{}", cs.render())).collect();
            let json: Vec<Value> = sets
                .iter()
                .map(|(n, cs)| {
                    json!({
                        "set": n,
                        "rank": fmt_q(&cs.rank),
                        "L": cs.l.render(), "J": cs.j.render(), "Q": cs.q.render(), "G": cs.g.render(),
                    })
                })
                .collect();
            Ok(finish(ctx, "show-currents", Vec::new(), text, Value::Array(json), true))
        }
        Command::Eval { a, b, n, profile } => {
            let c = AlgebraContext::new(ctx.dim()?, Profile::from(*profile))?;
            let (sa, wa) = parse_state(a, c)?;
            let (sb, wb) = parse_state(b, c)?;
            ctx.warnings.extend(wa.into_iter().chain(wb));
            let (text, json) = match n {
                Some(n) => {
                    let r = nth_product(&sa, *n, &sb)?.render();
                    (format!("A_({n})B = {r}\n"), json!({ "n": n, "product": r }))
                }
                None => {
                    let r = lambda_bracket(&sa, &sb)?.render();
                    (format!("[A_lambda B] = {r}\n"), json!({ "bracket": r }))
                }
            };
            Ok(finish(ctx, "eval", Vec::new(), text, json, true))
        }
    }
}

fn currents_for(c: AlgebraContext) -> Result<CurrentSet, InputError> {
    Ok(match c.profile() {
        Profile::DeRham => omega_currents(c)?,
        Profile::Polyvector => theta_currents(c)?,
    })
}

fn verify_top(mut ctx: Ctx) -> Result<Outcome, InputError> {
    let dim = ctx.dim()?;
    let mut reports = Vec::new();
    let omega = omega_currents(AlgebraContext::new(dim, Profile::DeRham)?)?;
    let theta = theta_currents(AlgebraContext::new(dim, Profile::Polyvector)?)?;
    let mut mirror_report = CheckReport::new("mirror");
    mirror_report.check("mirror^2=id", mirror(&mirror(&omega)) == omega, "");
    mirror_report.check("theta=mirror(omega)", mirror(&omega) == theta, "");
    for (name, mut cs) in [("omega", omega), ("theta", theta)] {
        ctx.apply_overrides(&mut cs)?;
        let mut r = verify_top_facts(&cs);
        r.suite = format!("{name}:{}", r.suite);
        reports.push(r);
    }
    reports.push(mirror_report);
    Ok(finish(ctx, "verify-top", reports, String::new(), Value::Null, true))
}

fn twist(mut ctx: Ctx) -> Result<Outcome, InputError> {
    let pot = ctx.potential()?;
    let d = rank(pot.dim() as i64, pot.b(), pot.a())?;
    let mut bc = BrstComplex::new(pot.clone())?.with_twist()?;
    if !ctx.opts.overrides.is_empty() {
        let mut tw = bc.twisted.take().expect("twisted");
        ctx.apply_overrides(&mut tw)?;
        bc.twisted = Some(tw);
    }
    let r = bc.verify_theorem()?;
    let tw = bc.twisted.as_ref().expect("twisted");
    let text = format!("f = {}\nrank d = {}\n{}", pot.render(), fmt_q(&d), tw.render());
    let json = json!({ "potential": pot.render(), "rank": fmt_q(&d) });
    Ok(finish(ctx, "twist", vec![r], text, json, true))
}

fn cohomology_cmd(ctx: Ctx) -> Result<Outcome, InputError> {
    let pot = ctx.potential()?;
    let window = ctx.window(pot.a());
    let cache = ctx.cache()?;
    let bc = BrstComplex::new(pot.clone())?;
    let opts = CohomologyOptions { cache: cache.as_ref(), reverse_basis: false };
    let report = cohomology_with(&bc, window, &opts)?;
    let mut checks = CheckReport::new("cohomology");
    checks.check("d^2=0", report.d_squared_zero, "");
    let bad: Vec<String> = report
        .twisted_euler
        .iter()
        .filter(|e| e.from_slices != e.from_cohomology)
        .map(|e| format!("(n={}, c={}): {} vs {}", e.n, e.c, e.from_slices, e.from_cohomology))
        .collect();
    checks.check("euler-poincare", bad.is_empty(), bad.join("; "));
    let mut text = format!(
        "f = {}  weights {:?}  a = {}  window n<={} m in [{}, {}]\n",
        report.potential, report.weights, report.a, window.n_max, window.m_min, window.m_max
    );
    text.push_str(&format!("{:>4} {:>5} {:>5} {:>6}\n", "n", "m", "j", "dim"));
    for (n, m, j, d) in report.classes() {
        text.push_str(&format!("{n:>4} {m:>5} {j:>5} {d:>6}\n"));
    }
    text.push_str(&format!("total {}\n", report.total_dim()));
    Ok(finish(ctx, "cohomology", vec![checks], text, report.to_json(), true))
}

fn parse_fixed(text: &str) -> Result<FixedPointDatum, InputError> {
    let (tangent, fibre) = text
        .split_once(':')
        .ok_or_else(|| InputError::Invalid(format!("fixed point '{text}' is not TANGENT:FIBRE")))?;
    let tangent = if tangent.trim().is_empty() { Vec::new() } else { parse::parse_weights(tangent)? };
    let fibre = fibre
        .trim()
        .parse()
        .map_err(|_| InputError::Invalid(format!("bad fibre weight in '{text}'")))?;
    Ok(FixedPointDatum::new(tangent, fibre))
}

fn character(ctx: Ctx, fixed: &[String], compare: bool) -> Result<Outcome, InputError> {
    let n = ctx.opts.order.unwrap_or(6);
    let pot = ctx.potential()?;
    let a = u32::try_from(pot.a()).expect("positive");
    let cache = ctx.cache()?;
    let bc = BrstComplex::new(pot.clone())?;
    let direct = direct_character(&bc, n, None, cache.as_ref())?;
    let mut reports = Vec::new();
    let mut window = CheckReport::new("character");
    let detail: Vec<String> = direct.insufficient.iter().map(|k| format!("q^{k}")).collect();
    window.check("c-window", direct.sound(), detail.join(", "));
    reports.push(window);

    let mut text = format!("direct character of {} (u = z^(1/{a}))\n{}", pot.render(), direct.series.table());
    let mut json = json!({ "direct": direct.series.to_json() });

    if !fixed.is_empty() {
        let points = fixed.iter().map(|s| parse_fixed(s)).collect::<Result<Vec<_>, _>>()?;
        let loc = localization_character(&points, a, n)?;
        let pre = pre_substitution(&points, a, n)?;
        let mut r = CheckReport::new("localization-input");
        r.check("pre-substitution", substitute_t(&pre)? == loc, "t = u");
        reports.push(r);
        text.push_str(&format!("localization\n{}", loc.table()));
        json["localization"] = loc.to_json();
        json["pre_substitution"] = pre.to_json();
    }
    if compare {
        let is_a1 = pot.dim() == 1 && pot.weights() == [1] && pot.f() == &Polynomial::monomial(1, vec![a], num_traits::One::one());
        if !is_a1 {
            return Err(InputError::Invalid("--compare needs f = x1^a on A^1 with weight 1".into()));
        }
        let check = theorem_check(3, &[a], n, cache.as_ref())?;
        json["convention"] = serde_json::to_value(&check.chosen).expect("json");
        reports.push(check.report);
    }
    Ok(finish(ctx, "character", reports, text, json, true))
}
