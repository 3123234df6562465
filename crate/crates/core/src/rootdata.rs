//! Root data for products of `U(k)` and `SU(2)` factors, their Weyl groups as
//! block-preserving permutations, and the ρ-shifted action.
//!
//! A `U(k)` block contributes `k` lattice coordinates and `k` permutation
//! slots, with positive roots `ε_r - ε_s` for `r < s`. An `SU(2)` block has one
//! lattice coordinate `n` (highest weight of `V_n`), positive root `2`, and two
//! slots; swapping the slots acts by `n ↦ -n`.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::abelian::{weight_sum, Weight};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    Unitary(usize),
    Su2,
}

impl Block {
    pub fn rank(self) -> usize {
        match self {
            Block::Unitary(k) => k,
            Block::Su2 => 1,
        }
    }

    pub fn slots(self) -> usize {
        match self {
            Block::Unitary(k) => k,
            Block::Su2 => 2,
        }
    }

    fn weyl_order(self) -> u128 {
        (1..=self.slots() as u128).product()
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Unitary(k) => write!(f, "U({k})"),
            Block::Su2 => write!(f, "SU(2)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    blocks: Vec<Block>,
    rank: usize,
    lattice_offsets: Vec<usize>,
    slot_offsets: Vec<usize>,
    positive_roots: Vec<Weight>,
    positive_set: HashSet<Weight>,
}

impl PartialEq for RootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}

impl Eq for RootDatum {}

impl RootDatum {
    pub fn new(blocks: Vec<Block>) -> Self {
        let mut lattice_offsets = Vec::with_capacity(blocks.len());
        let mut slot_offsets = Vec::with_capacity(blocks.len());
        let (mut rank, mut slots) = (0, 0);
        for b in &blocks {
            lattice_offsets.push(rank);
            slot_offsets.push(slots);
            rank += b.rank();
            slots += b.slots();
        }
        let mut positive_roots = Vec::new();
        for (b, &o) in blocks.iter().zip(&lattice_offsets) {
            match *b {
                Block::Unitary(k) => {
                    for r in 0..k {
                        for s in r + 1..k {
                            let mut a = Weight::zero(rank);
                            a.0[o + r] = 1;
                            a.0[o + s] = -1;
                            positive_roots.push(a);
                        }
                    }
                }
                Block::Su2 => {
                    let mut a = Weight::zero(rank);
                    a.0[o] = 2;
                    positive_roots.push(a);
                }
            }
        }
        let positive_set = positive_roots.iter().cloned().collect();
        RootDatum { blocks, rank, lattice_offsets, slot_offsets, positive_roots, positive_set }
    }

    pub fn unitary(k: usize) -> Self {
        RootDatum::new(vec![Block::Unitary(k)])
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn slot_count(&self) -> usize {
        self.blocks.iter().map(|b| b.slots()).sum()
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    /// All roots, positive ones first.
    pub fn roots(&self) -> Vec<Weight> {
        let mut all = self.positive_roots.clone();
        all.extend(self.positive_roots.iter().map(|a| -a));
        all
    }

    pub fn is_positive_root(&self, a: &Weight) -> bool {
        self.positive_set.contains(a)
    }

    pub fn is_root(&self, a: &Weight) -> bool {
        self.positive_set.contains(a) || self.positive_set.contains(&-a)
    }

    pub fn weyl_order(&self) -> u128 {
        self.blocks.iter().map(|b| b.weyl_order()).product()
    }

    fn check_rank(&self, w: &Weight) -> Result<()> {
        if w.rank() == self.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch { expected: self.rank, got: w.rank() })
        }
    }

    /// Coordinates of `w` split per block.
    pub fn split<'a>(&self, w: &'a Weight) -> Vec<&'a [i64]> {
        self.blocks.iter().zip(&self.lattice_offsets).map(|(b, &o)| &w.0[o..o + b.rank()]).collect()
    }

    pub fn is_dominant(&self, w: &Weight) -> bool {
        w.rank() == self.rank
            && self.blocks.iter().zip(self.split(w)).all(|(b, c)| match b {
                Block::Unitary(_) => c.windows(2).all(|p| p[0] >= p[1]),
                Block::Su2 => c[0] >= 0,
            })
    }

    pub fn require_dominant(&self, w: &Weight) -> Result<()> {
        self.check_rank(w)?;
        if self.is_dominant(w) {
            Ok(())
        } else {
            Err(Error::NotDominant(self.render(w)))
        }
    }

    /// The unique dominant weight in the Weyl orbit of `w`.
    pub fn dominant_representative(&self, w: &Weight) -> Weight {
        let mut out = w.clone();
        for (b, &o) in self.blocks.iter().zip(&self.lattice_offsets) {
            let c = &mut out.0[o..o + b.rank()];
            match b {
                Block::Unitary(_) => c.sort_unstable_by(|a, b| b.cmp(a)),
                Block::Su2 => c[0] = c[0].abs(),
            }
        }
        out
    }

    /// Dimension of the irreducible representation with dominant highest weight `w`.
    pub fn weyl_dimension(&self, w: &Weight) -> u128 {
        let mut dim: u128 = 1;
        for (b, c) in self.blocks.iter().zip(self.split(w)) {
            match b {
                Block::Unitary(k) => {
                    let (mut num, mut den): (u128, u128) = (1, 1);
                    for i in 0..*k {
                        for j in i + 1..*k {
                            num *= (c[i] - c[j] + (j - i) as i64) as u128;
                            den *= (j - i) as u128;
                        }
                    }
                    dim *= num / den;
                }
                Block::Su2 => dim *= c[0] as u128 + 1,
            }
        }
        dim
    }

    pub fn act(&self, w: &WeylElement, v: &Weight) -> Weight {
        assert_eq!(v.rank(), self.rank, "weight rank does not match the root datum");
        let mut out = Weight::zero(self.rank);
        for ((b, &o), &s) in self.blocks.iter().zip(&self.lattice_offsets).zip(&self.slot_offsets) {
            match b {
                Block::Unitary(k) => {
                    for i in 0..*k {
                        out.0[o + w.perm[s + i] - s] = v.0[o + i];
                    }
                }
                Block::Su2 => {
                    out.0[o] = if w.perm[s] == s { v.0[o] } else { -v.0[o] };
                }
            }
        }
        out
    }

    /// Positive roots sent to negative roots by `w^{-1}`, i.e. `R⁺ ∩ w(-R⁺)`.
    pub fn inversion_set(&self, w: &WeylElement) -> Vec<Weight> {
        let winv = w.inverse();
        self.positive_roots.iter().filter(|a| !self.is_positive_root(&self.act(&winv, a))).cloned().collect()
    }

    /// `wρ - ρ`, which is integral: `-Σ_{α ∈ R⁺ ∩ w(-R⁺)} α`.
    pub fn rho_shift(&self, w: &WeylElement) -> Weight {
        -&weight_sum(self.rank, &self.inversion_set(w))
    }

    /// `w•λ = w(λ+ρ) - ρ`.
    pub fn dot_action(&self, w: &WeylElement, lambda: &Weight) -> Weight {
        &self.act(w, lambda) + &self.rho_shift(w)
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement::identity(self.slot_count())
    }

    pub fn is_block_preserving(&self, w: &WeylElement) -> bool {
        w.perm.len() == self.slot_count()
            && self
                .blocks
                .iter()
                .zip(&self.slot_offsets)
                .all(|(b, &s)| (s..s + b.slots()).all(|i| (s..s + b.slots()).contains(&w.perm[i])))
    }

    /// Renders a weight block by block: `((2,1),(0))` for several blocks,
    /// `(2,1)` for one block, and a bare integer for a single rank-one block.
    pub fn render(&self, w: &Weight) -> String {
        let parts = self.split(w);
        let one = |c: &[i64]| format!("({})", c.iter().join(","));
        match parts.as_slice() {
            [c] if c.len() == 1 => c[0].to_string(),
            [c] => one(c),
            _ => format!("({})", parts.iter().map(|c| one(c)).join(",")),
        }
    }

    /// Parses comma- or semicolon-separated integers, ignoring parentheses.
    pub fn parse_weight(&self, s: &str) -> Result<Weight> {
        let cleaned: String = s.chars().filter(|c| !matches!(c, '(' | ')' | ' ')).collect();
        let coords = cleaned
            .split([',', ';'])
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse { what: "weight", input: s.to_string() })?;
        let w = Weight::new(coords);
        self.check_rank(&w)?;
        Ok(w)
    }

    /// All dominant weights whose coordinates lie in `[lo, hi]`.
    pub fn dominant_box(&self, lo: i64, hi: i64) -> Vec<Weight> {
        let per_block: Vec<Vec<Vec<i64>>> = self
            .blocks
            .iter()
            .map(|b| match b {
                Block::Unitary(k) => decreasing_tuples(*k, lo, hi),
                Block::Su2 => (lo.max(0)..=hi).map(|n| vec![n]).collect(),
            })
            .collect();
        per_block.into_iter().multi_cartesian_product().map(|parts| Weight::new(parts.concat())).collect()
    }
}

fn decreasing_tuples(k: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (lo..=hi).rev() {
        for mut rest in decreasing_tuples(k - 1, lo, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A Weyl group element stored as a permutation of slots (`perm[i]` is the
/// image of slot `i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylElement {
    perm: Vec<usize>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement { perm: (0..n).collect() }
    }

    pub fn from_perm(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Parse { what: "permutation", input: format!("{perm:?}") });
            }
        }
        Ok(WeylElement { perm })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement { perm: other.perm.iter().map(|&i| self.perm[i]).collect() }
    }

    pub fn inverse(&self) -> WeylElement {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        WeylElement { perm: inv }
    }

    /// Signature of the permutation.
    pub fn sign(&self) -> i64 {
        let mut seen = vec![false; self.perm.len()];
        let mut even_cycles = 0;
        for start in 0..self.perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.perm[i];
                len += 1;
            }
            if len % 2 == 0 {
                even_cycles += 1;
            }
        }
        if even_cycles % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.perm.iter().map(|p| p + 1).join(" "))
    }
}

/// Every block-preserving permutation, in lexicographic order per block.
pub fn weyl_enumerate(rd: &RootDatum, cap: usize) -> Result<Vec<WeylElement>> {
    let order = rd.weyl_order();
    if order > cap as u128 {
        return Err(Error::WeylCap { order, cap: cap as u128 });
    }
    let per_block: Vec<Vec<Vec<usize>>> = rd
        .blocks
        .iter()
        .zip(&rd.slot_offsets)
        .map(|(b, &s)| (s..s + b.slots()).permutations(b.slots()).collect())
        .collect();
    Ok(per_block.into_iter().multi_cartesian_product().map(|parts| WeylElement { perm: parts.concat() }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(p: &[usize]) -> WeylElement {
        WeylElement::from_perm(p.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(weyl_enumerate(&RootDatum::unitary(2), 100).unwrap().len(), 2);
        assert_eq!(weyl_enumerate(&RootDatum::unitary(3), 100).unwrap().len(), 6);
        let rd = RootDatum::new(vec![Block::Unitary(2), Block::Unitary(2)]);
        let all = weyl_enumerate(&rd, 100).unwrap();
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|x| rd.is_block_preserving(x)));
        let distinct: HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 4);
        assert_eq!(weyl_enumerate(&RootDatum::new(vec![Block::Su2, Block::Su2]), 10).unwrap().len(), 4);
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(weyl_enumerate(&RootDatum::unitary(5), 100), Err(Error::WeylCap { order: 120, cap: 100 })));
    }

    #[test]
    fn signs() {
        assert_eq!(w(&[0, 1, 2]).sign(), 1);
        assert_eq!(w(&[1, 0, 2]).sign(), -1);
        assert_eq!(w(&[1, 2, 0]).sign(), 1);
    }

    #[test]
    fn dot_action_examples() {
        let u2 = RootDatum::unitary(2);
        let lam = Weight::new(vec![1, 0]);
        assert_eq!(u2.dot_action(&u2.identity(), &lam), lam);
        assert_eq!(u2.dot_action(&w(&[1, 0]), &lam), Weight::new(vec![-1, 2]));

        let su2 = RootDatum::new(vec![Block::Su2]);
        for n in 0..6 {
            assert_eq!(su2.dot_action(&w(&[1, 0]), &Weight::new(vec![n])), Weight::new(vec![-n - 2]));
        }
    }

    #[test]
    fn dominance() {
        let u3 = RootDatum::unitary(3);
        assert!(u3.is_dominant(&Weight::new(vec![2, 1, 0])));
        assert!(!RootDatum::unitary(2).is_dominant(&Weight::new(vec![0, 1])));
        let prod = RootDatum::new(vec![Block::Unitary(2), Block::Unitary(1)]);
        assert!(prod.is_dominant(&Weight::new(vec![1, 0, 3])));
        assert!(!RootDatum::new(vec![Block::Su2]).is_dominant(&Weight::new(vec![-1])));
    }

    #[test]
    fn rendering_and_parsing() {
        let prod = RootDatum::new(vec![Block::Unitary(2), Block::Unitary(1)]);
        let x = Weight::new(vec![2, 1, 0]);
        assert_eq!(prod.render(&x), "((2,1),(0))");
        assert_eq!(prod.parse_weight("((2,1),(0))").unwrap(), x);
        assert_eq!(prod.parse_weight("2,1;0").unwrap(), x);
        assert!(prod.parse_weight("2,1").is_err());
        assert!(prod.parse_weight("2,x,1").is_err());
        assert_eq!(RootDatum::new(vec![Block::Su2]).render(&Weight::new(vec![-3])), "-3");
    }

    #[test]
    fn sign_matches_inversion_count_u4() {
        let rd = RootDatum::unitary(4);
        for x in weyl_enumerate(&rd, 100).unwrap() {
            let inv = rd.inversion_set(&x).len();
            assert_eq!(x.sign(), if inv.is_multiple_of(2) { 1 } else { -1 }, "{x}");
        }
    }

    #[test]
    fn rho_shift_matches_doubled_computation_u3() {
        let rd = RootDatum::unitary(3);
        let two_rho = weight_sum(3, rd.positive_roots());
        for lam in rd.dominant_box(-2, 2) {
            for x in weyl_enumerate(&rd, 100).unwrap() {
                let doubled = &rd.act(&x, &(&lam.scale(2) + &two_rho)) - &two_rho;
                assert_eq!(rd.dot_action(&x, &lam).scale(2), doubled);
            }
        }
    }

    #[test]
    fn dominant_box_counts() {
        // weakly decreasing triples in [0,2]: C(5,3) = 10
        assert_eq!(RootDatum::unitary(3).dominant_box(0, 2).len(), 10);
        let prod = RootDatum::new(vec![Block::Su2, Block::Unitary(2)]);
        assert_eq!(prod.dominant_box(0, 1).len(), 2 * 3);
    }

    fn blocks_strategy() -> impl Strategy<Value = Vec<Block>> {
        proptest::collection::vec(prop_oneof![(1usize..=4).prop_map(Block::Unitary), Just(Block::Su2)], 1..=2)
    }

    proptest! {
        #[test]
        fn dot_action_is_an_action(blocks in blocks_strategy(), seed in any::<u64>(), coords in proptest::collection::vec(-5i64..5, 8)) {
            let rd = RootDatum::new(blocks);
            let all = weyl_enumerate(&rd, 10_000).unwrap();
            let a = &all[(seed as usize) % all.len()];
            let b = &all[((seed >> 20) as usize) % all.len()];
            let lam = Weight::new(coords[..rd.rank()].to_vec());
            prop_assert_eq!(rd.dot_action(&a.compose(b), &lam), rd.dot_action(a, &rd.dot_action(b, &lam)));
            prop_assert_eq!(rd.act(&a.compose(b), &lam), rd.act(a, &rd.act(b, &lam)));
            prop_assert_eq!(a.compose(b).sign(), a.sign() * b.sign());
            prop_assert!(rd.is_dominant(&rd.dominant_representative(&lam)));
        }
    }
}
