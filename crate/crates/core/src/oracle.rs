//! Reference branching by brute force: Gelfand–Tsetlin weight systems,
//! restriction to the subgroup torus, and greedy peeling of irreducible
//! characters.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::abelian::Weight;
use crate::error::{Error, Result};
use crate::pairs::PairSpec;
use crate::rootdata::{Block, RootDatum};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleTable {
    pub entries: BTreeMap<Weight, u64>,
}

impl OracleTable {
    pub fn multiplicity(&self, mu: &Weight) -> u64 {
        self.entries.get(mu).copied().unwrap_or(0)
    }
}

/// Weights of the `U(k)` irreducible with highest weight `top`, one per
/// Gelfand–Tsetlin pattern.
pub fn gt_weights(top: &[i64]) -> BTreeMap<Vec<i64>, u64> {
    fn rec(row: &[i64], sums: &mut Vec<i64>, out: &mut BTreeMap<Vec<i64>, u64>) {
        sums.push(row.iter().sum());
        if row.len() == 1 {
            // sums run from the top row (length k) down to length 1
            let k = sums.len();
            let weight = (0..k)
                .map(|m| {
                    let this = sums[k - 1 - m];
                    let below = if m == 0 { 0 } else { sums[k - m] };
                    this - below
                })
                .collect();
            *out.entry(weight).or_insert(0) += 1;
        } else {
            let ranges = (0..row.len() - 1).map(|i| row[i + 1]..=row[i]);
            for next in ranges.multi_cartesian_product() {
                rec(&next, sums, out);
            }
        }
        sums.pop();
    }
    let mut out = BTreeMap::new();
    if top.is_empty() {
        out.insert(Vec::new(), 1);
        return out;
    }
    rec(top, &mut Vec::new(), &mut out);
    out
}

fn block_gt(block: Block, top: &[i64]) -> BTreeMap<Vec<i64>, u64> {
    match block {
        Block::Unitary(_) => gt_weights(top),
        Block::Su2 => {
            let mut out = BTreeMap::new();
            for (w, m) in gt_weights(&[top[0], 0]) {
                *out.entry(vec![w[0] - w[1]]).or_insert(0) += m;
            }
            out
        }
    }
}

/// Character of `V_mu` for a product of blocks, as a weight map.
pub fn character(rd: &RootDatum, mu: &Weight) -> Result<BTreeMap<Weight, i64>> {
    rd.require_dominant(mu)?;
    let parts: Vec<Vec<(Vec<i64>, u64)>> =
        rd.blocks().iter().zip(rd.split(mu)).map(|(&b, top)| block_gt(b, top).into_iter().collect()).collect();
    let mut out = BTreeMap::new();
    for combo in parts.iter().multi_cartesian_product() {
        let coords = combo.iter().flat_map(|(w, _)| w.iter().copied()).collect();
        let m: u64 = combo.iter().map(|(_, m)| m).product();
        *out.entry(Weight::new(coords)).or_insert(0) += m as i64;
    }
    Ok(out)
}

/// Decompose a character into irreducibles by repeatedly removing the
/// lexicographically largest dominant weight's irreducible character.
pub fn peel_decompose(mut chi: BTreeMap<Weight, i64>, h: &RootDatum) -> Result<OracleTable> {
    chi.retain(|_, c| *c != 0);
    let mut table = OracleTable::default();
    while let Some((top, &c)) = chi.iter().rev().find(|(w, _)| h.is_dominant(w)) {
        let top = top.clone();
        if c < 0 {
            return Err(Error::NotACharacter { weight: top.to_string(), coeff: c });
        }
        for (w, m) in character(h, &top)? {
            *chi.entry(w).or_insert(0) -= c * m;
        }
        chi.retain(|_, v| *v != 0);
        table.entries.insert(top, c as u64);
    }
    if let Some((w, &c)) = chi.iter().next() {
        return Err(Error::NotACharacter { weight: w.to_string(), coeff: c });
    }
    Ok(table)
}

/// `V_lambda^G|_H` without any reference to orbit data.
pub fn oracle_branch(pair: &PairSpec, lambda: &Weight, max_dim: u128) -> Result<OracleTable> {
    let g = pair.g();
    let dim = g.weyl_dimension(lambda);
    if dim > max_dim {
        return Err(Error::DimensionCap { dim, cap: max_dim });
    }
    let mut restricted = BTreeMap::new();
    for (w, m) in character(g, lambda)? {
        *restricted.entry(pair.restrict_to_h(&w)).or_insert(0) += m;
    }
    let table = peel_decompose(restricted, pair.h())?;
    let total: u128 = table.entries.iter().map(|(mu, &m)| m as u128 * pair.h().weyl_dimension(mu)).sum();
    if total != dim {
        return Err(Error::Inconsistent(format!("oracle for {lambda}: dimensions {total} != {dim}")));
    }
    Ok(table)
}
