//! Finite bases of the (n, m) graded pieces of Θᶜʰ and operator matrices
//! between them.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::conformal::{canonicalize, AlgebraContext, Generator, Kind, Profile, VAElement};
use crate::error::{Error, Result};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::rational::Q;

pub type Factors = Vec<Generator>;

/// Conformal weight n, equivariant weight m and, optionally, fermion degree j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GradingKey {
    pub n: u32,
    pub m: i64,
    pub j: Option<i64>,
}

/// Basis of the (n, m) piece, bucketed by fermion degree j = #ψ − #φ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slice {
    pub n: u32,
    pub m: i64,
    pub buckets: BTreeMap<i64, Vec<Factors>>,
}

impl Slice {
    pub fn bucket(&self, j: i64) -> &[Factors] {
        self.buckets.get(&j).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn dim(&self) -> usize {
        self.buckets.values().map(|b| b.len()).sum()
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.buckets.iter().map(|(j, b)| (*j, b.len())).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.values().all(|b| b.is_empty())
    }

    /// Reverses the basis order inside every bucket.
    pub fn reversed(&self) -> Slice {
        let mut out = self.clone();
        for b in out.buckets.values_mut() {
            b.reverse();
        }
        out
    }
}

/// Smallest equivariant weight occurring at conformal weight n.
pub fn m_min(weights: &[i64], n: u32) -> i64 {
    let total: i64 = weights.iter().sum();
    let max = weights.iter().copied().max().unwrap_or(0);
    -total - n as i64 * max
}

/// Range of fermion degrees that can occur at conformal weight n.
pub fn j_range(dim: usize, n: u32) -> std::ops::RangeInclusive<i64> {
    -(n as i64)..=dim as i64 + n as i64
}

fn equivariant(weights: &[i64], g: &Generator) -> i64 {
    let w = weights[g.index as usize - 1];
    match g.kind {
        Kind::X | Kind::Phi => w,
        Kind::Y | Kind::Psi => -w,
    }
}

fn fermion(g: &Generator) -> i64 {
    match g.kind {
        Kind::Psi => 1,
        Kind::Phi => -1,
        _ => 0,
    }
}

pub(crate) fn check_weights(weights: &[i64]) -> Result<()> {
    if weights.is_empty() || weights.iter().any(|w| *w <= 0) {
        return Err(Error::InfiniteSlice { weights: weights.to_vec() });
    }
    Ok(())
}

/// Complete basis of monomials with conformal weight n and equivariant
/// weight m in the polyvector profile. Requires all weights positive.
pub fn enumerate_slice(weights: &[i64], n: u32, m: i64) -> Result<Slice> {
    check_weights(weights)?;
    let dim = weights.len();
    let profile = Profile::Polyvector;
    let mut heavy = Vec::new();
    for kind in Kind::ALL {
        for i in 1..=dim as u32 {
            for k in 0..=n {
                let g = Generator::new(kind, i, k);
                let w = g.weight(profile);
                if w >= 1 && w <= n {
                    heavy.push(g);
                }
            }
        }
    }
    let mut buckets: BTreeMap<i64, Vec<Factors>> = BTreeMap::new();
    let mut chosen = Vec::new();
    choose_heavy(&heavy, 0, n, &mut chosen, &mut |picked| {
        let e1: i64 = picked.iter().map(|g| equivariant(weights, g)).sum();
        let f1: i64 = picked.iter().map(fermion).sum();
        for mask in 0..(1u32 << dim) {
            let psis: Vec<Generator> = (0..dim as u32)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| Generator::new(Kind::Psi, i + 1, 0))
                .collect();
            let e2: i64 = psis.iter().map(|g| equivariant(weights, g)).sum();
            let rest = m - e1 - e2;
            if rest < 0 {
                continue;
            }
            let j = f1 + psis.len() as i64;
            for exps in x_monomials(weights, rest) {
                let mut factors: Factors = picked.to_vec();
                factors.extend(psis.iter().copied());
                for (i, e) in exps.iter().enumerate() {
                    for _ in 0..*e {
                        factors.push(Generator::new(Kind::X, i as u32 + 1, 0));
                    }
                }
                if canonicalize(profile, &mut factors).is_some() {
                    buckets.entry(j).or_default().push(factors);
                }
            }
        }
    });
    for b in buckets.values_mut() {
        b.sort();
        b.dedup();
    }
    Ok(Slice { n, m, buckets })
}

/// Multisets from `gens[start..]` of total weight exactly `left`; odd
/// generators are used at most once.
fn choose_heavy(
    gens: &[Generator],
    start: usize,
    left: u32,
    chosen: &mut Vec<Generator>,
    emit: &mut dyn FnMut(&[Generator]),
) {
    if left == 0 {
        emit(chosen);
        return;
    }
    for i in start..gens.len() {
        let g = gens[i];
        let w = g.weight(Profile::Polyvector);
        if w > left {
            continue;
        }
        chosen.push(g);
        let next = if g.is_odd() { i + 1 } else { i };
        choose_heavy(gens, next, left - w, chosen, emit);
        chosen.pop();
    }
}

/// Exponent vectors e with Σ eᵢwᵢ = target.
fn x_monomials(weights: &[i64], target: i64) -> Vec<Vec<u32>> {
    fn go(weights: &[i64], i: usize, left: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = 0;
        while e as i64 * weights[i] <= left {
            cur.push(e);
            go(weights, i + 1, left - e as i64 * weights[i], cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    go(weights, 0, target, &mut Vec::new(), &mut out);
    out
}

/// The basis monomial as a state.
pub fn basis_state(ctx: AlgebraContext, factors: &Factors) -> VAElement {
    let mut e = VAElement::zero(ctx);
    e.add_canonical(factors.clone(), Q::one());
    e
}

/// Matrix of `op` from `source` to `target` (columns indexed by source).
/// Any image term outside `target` is an engine error.
pub fn operator_matrix(
    ctx: AlgebraContext,
    source: &[Factors],
    target: &[Factors],
    op: &(dyn Fn(&VAElement) -> VAElement + Sync),
) -> Result<SparseMatrix> {
    use rayon::prelude::*;
    let index: HashMap<&Factors, usize> = target.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let cols: Vec<Result<SparseVec>> = source
        .par_iter()
        .map(|f| {
            let image = op(&basis_state(ctx, f));
            let mut col = SparseVec::new();
            for (factors, c) in image.terms() {
                let Some(&r) = index.get(factors) else {
                    return Err(Error::EngineDisagreement(format!(
                        "image of {} leaves the target slice: {}",
                        basis_state(ctx, f).render(),
                        image.render()
                    )));
                };
                col.insert(r, c.clone());
            }
            Ok(col)
        })
        .collect();
    let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrix::from_columns(target.len(), &cols))
}

/// On-disk store of slice bases under a directory, one JSON file per
/// (weights, n, m).
#[derive(Debug, Clone)]
pub struct SliceCache {
    dir: PathBuf,
}

impl SliceCache {
    pub fn new(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
        Ok(Self { dir })
    }

    fn path(&self, weights: &[i64], n: u32, m: i64) -> PathBuf {
        let w: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
        self.dir.join(format!("slice_w{}_n{}_m{}.json", w.join("-"), n, m))
    }

    pub fn get_or_enumerate(&self, weights: &[i64], n: u32, m: i64) -> Result<Slice> {
        let path = self.path(weights, n, m);
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(slice) = serde_json::from_str::<Slice>(&text) {
                return Ok(slice);
            }
        }
        let slice = enumerate_slice(weights, n, m)?;
        let text = serde_json::to_string(&slice).map_err(|e| Error::Cache(e.to_string()))?;
        fs::write(&path, text).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        Ok(slice)
    }
}

/// Slices for a set of (n, m) keys, optionally backed by a cache.
pub(crate) fn load_slices(
    weights: &[i64],
    keys: &[(u32, i64)],
    cache: Option<&SliceCache>,
) -> Result<HashMap<(u32, i64), Slice>> {
    use rayon::prelude::*;
    let results: Vec<Result<((u32, i64), Slice)>> = keys
        .par_iter()
        .map(|&(n, m)| {
            let s = match cache {
                Some(c) => c.get_or_enumerate(weights, n, m)?,
                None => enumerate_slice(weights, n, m)?,
            };
            Ok(((n, m), s))
        })
        .collect();
    results.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(s: &Slice, j: i64) -> Vec<String> {
        let ctx = AlgebraContext::new(1, Profile::Polyvector).unwrap();
        s.bucket(j).iter().map(|f| basis_state(ctx, f).render()).collect()
    }

    #[test]
    fn weight_zero_slices() {
        let s = enumerate_slice(&[1], 0, 0).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(render(&s, 0), vec!["1"]);
        assert_eq!(render(&s, 1), vec![":psi1 x1:"]);
        let s = enumerate_slice(&[1], 0, 2).unwrap();
        assert_eq!(render(&s, 0), vec![":x1 x1:"]);
        assert_eq!(render(&s, 1), vec![":psi1 x1 x1 x1:"]);
        let s = enumerate_slice(&[1], 0, -1).unwrap();
        assert_eq!(render(&s, 1), vec![":psi1:"]);
        assert!(enumerate_slice(&[1], 0, -2).unwrap().is_empty());
    }

    #[test]
    fn weight_one_slice() {
        let s = enumerate_slice(&[1], 1, 0).unwrap();
        let mut all: Vec<String> = s.buckets.keys().flat_map(|j| render(&s, *j)).collect();
        all.sort();
        assert!(all.contains(&":dx1 psi1:".to_string()));
        assert!(all.contains(&":y1 x1:".to_string()));
        assert!(all.contains(&":phi1 psi1:".to_string()));
        assert_eq!(m_min(&[1], 1), -2);
        assert!(!enumerate_slice(&[1], 1, -2).unwrap().is_empty());
        assert!(enumerate_slice(&[1], 1, -3).unwrap().is_empty());
    }

    #[test]
    fn nonpositive_weights_are_refused() {
        assert!(matches!(enumerate_slice(&[1, -1], 0, 0), Err(Error::InfiniteSlice { .. })));
        assert!(matches!(enumerate_slice(&[0], 0, 0), Err(Error::InfiniteSlice { .. })));
    }

    #[test]
    fn fermion_buckets_match_grading() {
        use crate::conformal::{grading, Grade, GradingKind};
        let ctx = AlgebraContext::new(2, Profile::Polyvector).unwrap();
        for n in 0..3 {
            for m in -4..5 {
                let s = enumerate_slice(&[1, 2], n, m).unwrap();
                for (j, b) in &s.buckets {
                    for f in b {
                        let e = basis_state(ctx, f);
                        assert_eq!(grading(&e, &GradingKind::Fermion), Grade::Homogeneous(crate::rational::q(*j)));
                        assert_eq!(grading(&e, &GradingKind::Conformal), Grade::Homogeneous(crate::rational::q(n as i64)));
                        assert_eq!(
                            grading(&e, &GradingKind::Equivariant(vec![1, 2])),
                            Grade::Homogeneous(crate::rational::q(m))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("chiral-slice-cache-{}", std::process::id()));
        let cache = SliceCache::new(&dir).unwrap();
        let a = cache.get_or_enumerate(&[1], 1, 1).unwrap();
        let b = cache.get_or_enumerate(&[1], 1, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, enumerate_slice(&[1], 1, 1).unwrap());
        std::fs::remove_dir_all(dir).ok();
    }
}
