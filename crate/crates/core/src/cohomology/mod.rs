//! Exact cohomology of the chiral critical locus on finite tri-graded slices,
//! Euler characters, the direct-sum check and the BV complex.
//!
//! Grading conventions: n is the conformal weight, m the equivariant weight
//! (x, φ carry +wᵢ and y, ψ carry −wᵢ) and j = #ψ − #φ the fermion degree.
//! The differential maps (n, m, j) to (n, m + a, j − 1), so the twisted charge
//! c = m + a·j is preserved and each (n, c) is a finite complex.

mod bv;
mod slice;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::brst::{BrstComplex, Potential};
use crate::conformal::apply_mode;
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::report::CheckReport;

pub use bv::{
    bv_cohomology, bv_identities, classical_bv, jacobian_ring_dims, BvReport, ClassicalBv,
    E1Certificate,
};
pub use slice::{
    basis_state, enumerate_slice, j_range, m_min, operator_matrix, Factors, GradingKey, Slice,
    SliceCache,
};

pub(crate) use slice::{check_weights, load_slices};

/// Conformal weights 0..=n_max and equivariant weights m_min..=m_max.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub n_max: u32,
    pub m_min: i64,
    pub m_max: i64,
}

impl Window {
    pub fn new(n_max: u32, m_min: i64, m_max: i64) -> Self {
        Self { n_max, m_min, m_max }
    }

    /// n ≤ 3, m ∈ [−2a, 4a].
    pub fn default_for(a: i64) -> Self {
        Self { n_max: 3, m_min: -2 * a, m_max: 4 * a }
    }

    pub fn keys(&self) -> Vec<GradingKey> {
        let mut out = Vec::new();
        for n in 0..=self.n_max {
            for m in self.m_min..=self.m_max {
                out.push(GradingKey { n, m, j: None });
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default)]
pub struct CohomologyOptions<'a> {
    pub cache: Option<&'a SliceCache>,
    /// Use every slice basis in reversed order.
    pub reverse_basis: bool,
}

/// Cohomology of one (n, m) slice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceCohomology {
    pub n: u32,
    pub m: i64,
    /// Nonzero cohomology dimensions by fermion degree.
    pub dims: BTreeMap<i64, usize>,
    /// Chain dimensions by fermion degree.
    pub slice_dims: BTreeMap<i64, usize>,
    /// Σⱼ (−1)ʲ dim Hʲ.
    pub euler: i64,
}

/// Euler characteristic of the finite complex at (n, c), from chains and
/// from cohomology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerEntry {
    pub n: u32,
    pub c: i64,
    pub from_slices: i64,
    pub from_cohomology: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub potential: String,
    pub weights: Vec<i64>,
    pub a: i64,
    pub window: Window,
    pub slices: Vec<SliceCohomology>,
    /// Only complexes lying entirely inside the computed range are listed.
    pub twisted_euler: Vec<EulerEntry>,
    /// ∂∘∂ = 0 on every composable pair of computed boundary matrices.
    pub d_squared_zero: bool,
}

impl CohomologyReport {
    pub fn dim(&self, n: u32, m: i64, j: i64) -> usize {
        self.slices
            .iter()
            .find(|s| s.n == n && s.m == m)
            .and_then(|s| s.dims.get(&j).copied())
            .unwrap_or(0)
    }

    /// All nonzero (n, m, j, dim).
    pub fn classes(&self) -> Vec<(u32, i64, i64, usize)> {
        let mut out = Vec::new();
        for s in &self.slices {
            for (j, d) in &s.dims {
                out.push((s.n, s.m, *j, *d));
            }
        }
        out
    }

    pub fn total_dim(&self) -> usize {
        self.slices.iter().flat_map(|s| s.dims.values()).sum()
    }

    pub fn euler_consistent(&self) -> bool {
        self.twisted_euler.iter().all(|e| e.from_slices == e.from_cohomology)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

pub(crate) fn require_graded(bc: &BrstComplex) -> Result<&Potential> {
    let pot = bc.potential.as_ref().ok_or(Error::NonPositiveHomogeneity(0))?;
    check_weights(pot.weights())?;
    Ok(pot)
}

/// Boundary matrices (n, m, j) → (n, m + a, j − 1) for all slices in range.
pub(crate) struct Boundaries {
    pub slices: HashMap<(u32, i64), Slice>,
    pub matrices: HashMap<(u32, i64, i64), SparseMatrix>,
}

impl Boundaries {
    pub fn slice_dim(&self, n: u32, m: i64, j: i64) -> usize {
        self.slices.get(&(n, m)).map(|s| s.bucket(j).len()).unwrap_or(0)
    }
}

/// Slices for n ≤ n_max and m ∈ [lo, hi + a], with boundary matrices from
/// every m ∈ [lo, hi].
pub(crate) fn boundaries(
    bc: &BrstComplex,
    n_max: u32,
    lo: i64,
    hi: i64,
    opts: &CohomologyOptions,
) -> Result<Boundaries> {
    let pot = require_graded(bc)?;
    let a = pot.a();
    let w = pot.weights();
    let mut keys = Vec::new();
    for n in 0..=n_max {
        for m in lo.max(m_min(w, n))..=hi + a {
            keys.push((n, m));
        }
    }
    let mut slices = load_slices(w, &keys, opts.cache)?;
    if opts.reverse_basis {
        for s in slices.values_mut() {
            *s = s.reversed();
        }
    }
    let ctx = bc.context();
    let charge = &bc.charge;
    let op = move |s: &crate::conformal::VAElement| apply_mode(charge, 0, s);
    let mut tasks = Vec::new();
    for (&(n, m), s) in &slices {
        if m > hi {
            continue;
        }
        for &j in s.buckets.keys() {
            tasks.push((n, m, j));
        }
    }
    tasks.sort();
    let built: Vec<Result<((u32, i64, i64), SparseMatrix)>> = tasks
        .par_iter()
        .map(|&(n, m, j)| {
            let src = slices[&(n, m)].bucket(j);
            let empty = Slice { n, m: m + a, buckets: BTreeMap::new() };
            let tgt = slices.get(&(n, m + a)).unwrap_or(&empty).bucket(j - 1);
            Ok(((n, m, j), operator_matrix(ctx, src, tgt, &op)?))
        })
        .collect();
    let matrices = built.into_iter().collect::<Result<HashMap<_, _>>>()?;
    Ok(Boundaries { slices, matrices })
}

/// Exact cohomology dimensions over the window.
pub fn cohomology(bc: &BrstComplex, window: Window) -> Result<CohomologyReport> {
    cohomology_with(bc, window, &CohomologyOptions::default())
}

pub fn cohomology_with(
    bc: &BrstComplex,
    window: Window,
    opts: &CohomologyOptions,
) -> Result<CohomologyReport> {
    let pot = require_graded(bc)?;
    let a = pot.a();
    let lo = window.m_min - a;
    let hi = window.m_max;
    let b = boundaries(bc, window.n_max, lo, hi, opts)?;

    let ranks: HashMap<(u32, i64, i64), usize> =
        b.matrices.par_iter().map(|(k, d)| (*k, d.rank())).collect();
    let rank = |n, m, j| ranks.get(&(n, m, j)).copied().unwrap_or(0);
    let h = |n: u32, m: i64, j: i64| {
        b.slice_dim(n, m, j) - rank(n, m, j) - rank(n, m - a, j + 1)
    };

    let mut d_squared_zero = true;
    for (&(n, m, j), d1) in &b.matrices {
        if let Some(d2) = b.matrices.get(&(n, m + a, j - 1)) {
            if d1.ncols() > 0 && d2.nrows() > 0 && !d2.mul(d1).is_zero() {
                d_squared_zero = false;
            }
        }
    }

    let mut slices = Vec::new();
    for n in 0..=window.n_max {
        for m in window.m_min..=window.m_max {
            let slice_dims = b.slices.get(&(n, m)).map(|s| s.dims()).unwrap_or_default();
            let mut dims = BTreeMap::new();
            let mut euler = 0i64;
            for &j in slice_dims.keys() {
                let d = h(n, m, j);
                if d > 0 {
                    dims.insert(j, d);
                    euler += sign(j) * d as i64;
                }
            }
            slices.push(SliceCohomology { n, m, dims, slice_dims, euler });
        }
    }

    // Complexes at fixed (n, c) whose possibly nonempty terms all lie in the window.
    let mut twisted_euler = Vec::new();
    for n in 0..=window.n_max {
        let mut cs = BTreeSet::new();
        for m in window.m_min..=window.m_max {
            for j in j_range(bc.dim(), n) {
                cs.insert(m + a * j);
            }
        }
        for c in cs {
            let terms: Vec<(i64, i64)> = j_range(bc.dim(), n)
                .map(|j| (c - a * j, j))
                .filter(|&(m, _)| m >= m_min(pot.weights(), n))
                .collect();
            if terms.is_empty() || terms.iter().any(|&(m, _)| m < window.m_min || m > window.m_max) {
                continue;
            }
            let from_slices = terms.iter().map(|&(m, j)| sign(j) * b.slice_dim(n, m, j) as i64).sum();
            let from_cohomology = terms.iter().map(|&(m, j)| sign(j) * h(n, m, j) as i64).sum();
            twisted_euler.push(EulerEntry { n, c, from_slices, from_cohomology });
        }
    }

    Ok(CohomologyReport {
        potential: pot.render(),
        weights: pot.weights().to_vec(),
        a,
        window,
        slices,
        twisted_euler,
        d_squared_zero,
    })
}

fn sign(j: i64) -> i64 {
    if j.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Euler characteristics per (n, c) over the window, checked against the
/// cohomology-side alternating sums.
pub fn euler_character(bc: &BrstComplex, window: Window) -> Result<Vec<EulerEntry>> {
    let report = cohomology(bc, window)?;
    if !report.euler_consistent() {
        return Err(Error::EngineDisagreement(
            "Euler characteristics of chains and cohomology differ".into(),
        ));
    }
    Ok(report.twisted_euler)
}

/// Σⱼ (−1)ʲ dim C(n, c − a·j, j), counted from slice bases only.
pub fn line_euler(weights: &[i64], a: i64, n: u32, c: i64, cache: Option<&SliceCache>) -> Result<i64> {
    check_weights(weights)?;
    let dim = weights.len();
    let keys: Vec<(u32, i64)> = j_range(dim, n)
        .map(|j| (n, c - a * j))
        .filter(|&(n, m)| m >= m_min(weights, n))
        .collect();
    let slices = load_slices(weights, &keys, cache)?;
    Ok(j_range(dim, n)
        .map(|j| {
            let m = c - a * j;
            sign(j) * slices.get(&(n, m)).map(|s| s.bucket(j).len()).unwrap_or(0) as i64
        })
        .sum())
}

/// Cohomology of f ⊕ g against the graded convolution of the factors'
/// cohomology over the window.
pub fn tensor_check(f: &Potential, g: &Potential, window: Window) -> Result<CheckReport> {
    let sum = f.direct_sum(g)?;
    let a = sum.a();
    let (sf, sg) = (a / f.a(), a / g.a());
    let total = cohomology(&BrstComplex::new(sum.clone())?, window)?;

    let factor_window = |p: &Potential, s: i64, other: &Potential, so: i64| {
        let lo = m_min(p.weights(), window.n_max);
        let other_lo = m_min(other.weights(), window.n_max) * so;
        let hi = (window.m_max - other_lo).div_euclid(s) + 1;
        Window::new(window.n_max, lo, hi.max(lo))
    };
    let hf = cohomology(&BrstComplex::new(f.clone())?, factor_window(f, sf, g, sg))?;
    let hg = cohomology(&BrstComplex::new(g.clone())?, factor_window(g, sg, f, sf))?;

    let mut conv: BTreeMap<(u32, i64, i64), usize> = BTreeMap::new();
    for (n1, m1, j1, d1) in hf.classes() {
        for (n2, m2, j2, d2) in hg.classes() {
            let n = n1 + n2;
            let m = sf * m1 + sg * m2;
            if n <= window.n_max && m >= window.m_min && m <= window.m_max {
                *conv.entry((n, m, j1 + j2)).or_default() += d1 * d2;
            }
        }
    }
    let direct: BTreeMap<(u32, i64, i64), usize> =
        total.classes().into_iter().map(|(n, m, j, d)| ((n, m, j), d)).collect();

    let mut r = CheckReport::new("tensor");
    let keys: BTreeSet<_> = conv.keys().chain(direct.keys()).copied().collect();
    let mut bad = Vec::new();
    for k in &keys {
        let (x, y) = (direct.get(k).copied().unwrap_or(0), conv.get(k).copied().unwrap_or(0));
        if x != y {
            bad.push(format!("(n={}, m={}, j={}): direct {x} vs convolution {y}", k.0, k.1, k.2));
        }
    }
    r.check("kunneth", bad.is_empty(), bad.join("; "));
    r.note(format!(
        "{} ⊕ {} with weights {:?}: {} classes in window",
        f.render(),
        g.render(),
        sum.weights(),
        total.total_dim()
    ));
    Ok(r)
}
