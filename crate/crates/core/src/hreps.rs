//! Weight multiplicities of irreducible representations of products of
//! `U(k)` and `SU(2)`, via Freudenthal's formula on each block.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use itertools::Itertools;

use crate::abelian::Weight;
use crate::error::{Error, Result};
use crate::pairs::OrbitDatum;
use crate::rootdata::{Block, RootDatum};
use crate::series::SeriesFactor;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    highest: Weight,
    mults: BTreeMap<Weight, u64>,
}

impl WeightSystem {
    pub fn highest(&self) -> &Weight {
        &self.highest
    }

    pub fn mults(&self) -> &BTreeMap<Weight, u64> {
        &self.mults
    }

    pub fn multiplicity(&self, w: &Weight) -> u64 {
        self.mults.get(w).copied().unwrap_or(0)
    }

    pub fn dimension(&self) -> u128 {
        self.mults.values().map(|&m| m as u128).sum()
    }
}

/// Non-increasing tuples of length `k` with the same sum as `top`, bounded by
/// its extreme entries and majorized by it.
fn dominant_below(top: &[i64]) -> Vec<Vec<i64>> {
    let k = top.len();
    let total: i64 = top.iter().sum();
    let mut prefix = vec![0i64; k + 1];
    for i in 0..k {
        prefix[i + 1] = prefix[i] + top[i];
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(top: &[i64], prefix: &[i64], total: i64, cur: &mut Vec<i64>, sum: i64, out: &mut Vec<Vec<i64>>) {
        let k = top.len();
        let i = cur.len();
        if i == k {
            if sum == total {
                out.push(cur.clone());
            }
            return;
        }
        let hi = cur.last().copied().unwrap_or(top[0]);
        let lo = top[k - 1];
        for v in (lo..=hi).rev() {
            if sum + v > prefix[i + 1] {
                continue;
            }
            // the remaining entries are at most v and at least lo
            let rest = (k - i - 1) as i64;
            if sum + v + rest * v < total || sum + v + rest * lo > total {
                continue;
            }
            cur.push(v);
            rec(top, prefix, total, cur, sum + v, out);
            cur.pop();
        }
    }
    rec(top, &prefix, total, &mut cur, 0, &mut out);
    out
}

fn sorted_desc(v: &[i64]) -> Vec<i64> {
    let mut s = v.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    s
}

/// Dominant weight multiplicities of `V_top` for `U(k)`.
fn unitary_dominant_mults(top: &[i64]) -> HashMap<Vec<i64>, u64> {
    let k = top.len();
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    let two_rho: Vec<i64> = (0..k).map(|i| (k as i64 - 1) - 2 * i as i64).collect();
    let height = |mu: &[i64]| -> i64 {
        let mut acc = 0;
        let mut h = 0;
        for i in 0..k {
            acc += top[i] - mu[i];
            h += acc;
        }
        h
    };
    let mut cands = dominant_below(top);
    cands.sort_by_key(|mu| height(mu));
    let roots: Vec<(usize, usize)> = (0..k).tuple_combinations().collect();
    let norm_top = dot(top, top);
    let mut mults: HashMap<Vec<i64>, u64> = HashMap::new();
    for mu in cands {
        if mu == top {
            mults.insert(mu, 1);
            continue;
        }
        // 2((λ+ρ,λ+ρ) - (μ+ρ,μ+ρ)) m(μ) = 4 Σ_α Σ_j (μ+jα, α) m(μ+jα), with 2ρ integral
        let diff: Vec<i64> = top.iter().zip(&mu).map(|(a, b)| a - b).collect();
        let lhs = 2 * (norm_top - dot(&mu, &mu)) + 2 * dot(&diff, &two_rho);
        let mut rhs = 0i64;
        for &(r, s) in &roots {
            let mut nu = mu.clone();
            loop {
                nu[r] += 1;
                nu[s] -= 1;
                let Some(&m) = mults.get(&sorted_desc(&nu)) else { break };
                rhs += 4 * (nu[r] - nu[s]) * m as i64;
            }
        }
        assert!(lhs > 0 && rhs % lhs == 0, "Freudenthal recursion is not integral");
        mults.insert(mu, (rhs / lhs) as u64);
    }
    mults.retain(|_, m| *m > 0);
    mults
}

fn block_weights(block: Block, top: &[i64]) -> Vec<(Vec<i64>, u64)> {
    match block {
        Block::Su2 => {
            let n = top[0];
            (0..=n).map(|i| (vec![n - 2 * i], 1)).collect()
        }
        Block::Unitary(_) => {
            let mut out = Vec::new();
            for (mu, m) in unitary_dominant_mults(top) {
                for perm in mu.iter().copied().permutations(mu.len()).unique() {
                    out.push((perm, m));
                }
            }
            out
        }
    }
}

/// All weights of `V_mu` with multiplicities.
pub fn weight_multiplicities(rd: &RootDatum, mu: &Weight) -> Result<WeightSystem> {
    rd.require_dominant(mu)?;
    let parts: Vec<Vec<(Vec<i64>, u64)>> =
        rd.blocks().iter().zip(rd.split(mu)).map(|(&b, top)| block_weights(b, top)).collect();
    let mut mults = BTreeMap::new();
    for combo in parts.iter().multi_cartesian_product() {
        let coords = combo.iter().flat_map(|(w, _)| w.iter().copied()).collect();
        let m = combo.iter().map(|(_, m)| m).product();
        mults.insert(Weight::new(coords), m);
    }
    if parts.is_empty() {
        mults.insert(Weight::zero(0), 1);
    }
    let ws = WeightSystem { highest: mu.clone(), mults };
    let expected = rd.weyl_dimension(mu);
    if ws.dimension() != expected {
        return Err(Error::Inconsistent(format!(
            "weight system of {mu} has dimension {}, Weyl formula gives {expected}",
            ws.dimension()
        )));
    }
    Ok(ws)
}

type CacheKey = (Vec<Block>, Weight);

/// Shared memo of weight systems keyed by group and highest weight.
#[derive(Debug, Default)]
pub struct WeightCache {
    map: RwLock<HashMap<CacheKey, Arc<WeightSystem>>>,
}

impl WeightCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, rd: &RootDatum, mu: &Weight, max_dim: u128) -> Result<Arc<WeightSystem>> {
        let key = (rd.blocks().to_vec(), mu.clone());
        if let Some(ws) = self.map.read().expect("weight cache poisoned").get(&key) {
            return Ok(ws.clone());
        }
        rd.require_dominant(mu)?;
        let dim = rd.weyl_dimension(mu);
        if dim > max_dim {
            return Err(Error::DimensionCap { dim, cap: max_dim });
        }
        let ws = Arc::new(weight_multiplicities(rd, mu)?);
        Ok(self.map.write().expect("weight cache poisoned").entry(key).or_insert(ws).clone())
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("weight cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Multiplicity of `V_mu^H` in `Ind_{H_x}^H(f)`, by Frobenius reciprocity.
pub fn ind_multiplicity(f: &SeriesFactor, weights: &WeightSystem, orbit: &OrbitDatum) -> i64 {
    weights.mults().iter().map(|(nu, &m)| m as i64 * f.coeff(&orbit.restrict_h(nu))).sum()
}
