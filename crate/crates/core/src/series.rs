//! Formal series `sign · C_shift ⊗ ∧(wedge) ⊗ Sym(sym)` over `H_x`-characters,
//! and coefficient extraction from them.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::abelian::{HxCharacter, QuotientPresentation, VirtualCharacter};
use crate::error::{Error, Result};

/// Largest box radius searched for a separating functional.
const FUNCTIONAL_SEARCH_RADIUS: i64 = 6;

fn eval(f: &[i64], c: &HxCharacter) -> i64 {
    f.iter().zip(&c.free).map(|(a, b)| a * b).sum()
}

/// A functional on the free part that is strictly positive on every generator.
pub fn find_separating_functional(group: &QuotientPresentation, gens: &[HxCharacter]) -> Result<Vec<i64>> {
    let k = group.free_rank();
    if gens.is_empty() {
        return Ok(vec![0; k]);
    }
    if k == 0 || gens.iter().any(|g| g.free.iter().all(|&x| x == 0)) {
        return Err(Error::NoSeparatingFunctional);
    }
    for radius in 1..=FUNCTIONAL_SEARCH_RADIUS {
        let side = (2 * radius + 1) as usize;
        let total = side.pow(k as u32);
        let mut f = vec![0i64; k];
        for mut idx in 0..total {
            for x in f.iter_mut() {
                *x = (idx % side) as i64 - radius;
                idx /= side;
            }
            if gens.iter().all(|g| eval(&f, g) > 0) {
                return Ok(f);
            }
        }
    }
    Err(Error::NoSeparatingFunctional)
}

/// Number of ways to write `target` as a non-negative combination of `gens`
/// (with repetition), given a functional positive on all of them.
struct SymCounter<'a> {
    group: &'a QuotientPresentation,
    gens: &'a [HxCharacter],
    values: Vec<i64>,
    functional: &'a [i64],
    memo: HashMap<(usize, HxCharacter), u64>,
}

impl<'a> SymCounter<'a> {
    fn new(group: &'a QuotientPresentation, gens: &'a [HxCharacter], functional: &'a [i64]) -> Self {
        let values = gens.iter().map(|g| eval(functional, g)).collect();
        SymCounter { group, gens, values, functional, memo: HashMap::new() }
    }

    fn count(&mut self, idx: usize, rem: &HxCharacter) -> u64 {
        if idx == self.gens.len() {
            return u64::from(*rem == self.group.zero());
        }
        let f_rem = eval(self.functional, rem);
        if f_rem < 0 {
            return 0;
        }
        let g = &self.gens[idx];
        if idx + 1 == self.gens.len() {
            let v = self.values[idx];
            return u64::from(f_rem % v == 0 && self.group.scale(g, f_rem / v) == *rem);
        }
        if let Some(&c) = self.memo.get(&(idx, rem.clone())) {
            return c;
        }
        let mut total = 0;
        let mut cur = rem.clone();
        while eval(self.functional, &cur) >= 0 {
            total += self.count(idx + 1, &cur);
            cur = self.group.sub(&cur, g);
        }
        self.memo.insert((idx, rem.clone()), total);
        total
    }
}

/// Coefficient of `target` in `Sym(⊕ C_g)`.
pub fn sym_coeff(group: &QuotientPresentation, gens: &[HxCharacter], target: &HxCharacter) -> Result<u64> {
    let f = find_separating_functional(group, gens)?;
    Ok(SymCounter::new(group, gens, &f).count(0, target))
}

/// `∧(⊕ C_g) = Π (1 - C_g)` expanded.
pub fn wedge_expand(group: &Arc<QuotientPresentation>, gens: &[HxCharacter], cap: usize) -> Result<VirtualCharacter> {
    if gens.len() > cap {
        return Err(Error::WedgeCap { size: gens.len(), cap });
    }
    let mut acc = VirtualCharacter::unit(group.clone());
    for g in gens {
        let moved = acc.shifted(g).scaled(-1);
        acc = acc.plus(&moved)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct SeriesFactor {
    group: Arc<QuotientPresentation>,
    sign: i64,
    shift: HxCharacter,
    sym: Vec<HxCharacter>,
    wedge_gens: Vec<HxCharacter>,
    wedge: VirtualCharacter,
    functional: Vec<i64>,
}

impl SeriesFactor {
    pub fn new(
        group: Arc<QuotientPresentation>,
        sign: i64,
        shift: HxCharacter,
        mut sym: Vec<HxCharacter>,
        mut wedge_gens: Vec<HxCharacter>,
        wedge_cap: usize,
    ) -> Result<Self> {
        sym.sort();
        wedge_gens.sort();
        let functional = find_separating_functional(&group, &sym)?;
        let wedge = wedge_expand(&group, &wedge_gens, wedge_cap)?;
        Ok(SeriesFactor { group, sign, shift, sym, wedge_gens, wedge, functional })
    }

    pub fn group(&self) -> &Arc<QuotientPresentation> {
        &self.group
    }

    pub fn sign(&self) -> i64 {
        self.sign
    }

    pub fn shift(&self) -> &HxCharacter {
        &self.shift
    }

    pub fn sym_generators(&self) -> &[HxCharacter] {
        &self.sym
    }

    pub fn wedge_generators(&self) -> &[HxCharacter] {
        &self.wedge_gens
    }

    pub fn wedge(&self) -> &VirtualCharacter {
        &self.wedge
    }

    /// Coefficient of `C_target` in the expanded series.
    pub fn coeff(&self, target: &HxCharacter) -> i64 {
        let mut counter = SymCounter::new(&self.group, &self.sym, &self.functional);
        let base = self.group.sub(target, &self.shift);
        let mut total = 0i64;
        for (c, k) in self.wedge.terms() {
            let n = counter.count(0, &self.group.sub(&base, c));
            total += k * n as i64;
        }
        self.sign * total
    }
}

impl fmt::Display for SeriesFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[HxCharacter]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        write!(
            f,
            "{}C{} ∧({}) Sym({})",
            if self.sign < 0 { "-" } else { "+" },
            self.shift,
            list(&self.wedge_gens),
            list(&self.sym)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{quotient_presentation, LatticeInvolution, Weight};
    use proptest::prelude::*;

    fn torus(k: usize) -> Arc<QuotientPresentation> {
        Arc::new(quotient_presentation(k, &LatticeInvolution::identity(k)).unwrap())
    }

    fn ch(g: &QuotientPresentation, v: &[i64]) -> HxCharacter {
        g.restrict(&Weight::new(v.to_vec()))
    }

    /// Dynamic-programming recount over bounded exponents.
    fn dp_count(g: &QuotientPresentation, gens: &[HxCharacter], target: &HxCharacter, bound: i64) -> u64 {
        let mut layer: HashMap<HxCharacter, u64> = HashMap::new();
        layer.insert(g.zero(), 1);
        for x in gens {
            let mut next = HashMap::new();
            for (c, n) in &layer {
                for e in 0..=bound {
                    *next.entry(g.add(c, &g.scale(x, e))).or_insert(0) += n;
                }
            }
            layer = next;
        }
        layer.get(target).copied().unwrap_or(0)
    }

    #[test]
    fn sym_small_examples() {
        let t = torus(1);
        let g = ch(&t, &[1]);
        assert_eq!(sym_coeff(&t, &[g.clone(), g.clone()], &ch(&t, &[2])).unwrap(), 3);
        assert_eq!(sym_coeff(&t, std::slice::from_ref(&g), &ch(&t, &[-1])).unwrap(), 0);
        assert_eq!(sym_coeff(&t, &[], &t.zero()).unwrap(), 1);
        assert_eq!(sym_coeff(&t, &[], &g).unwrap(), 0);
        let t2 = torus(2);
        let gens = [ch(&t2, &[1, -1]), ch(&t2, &[0, 1]), ch(&t2, &[1, 0])];
        assert_eq!(sym_coeff(&t2, &gens, &ch(&t2, &[2, 0])).unwrap(), 3);
    }

    #[test]
    fn sym_rejects_non_separable() {
        let t = torus(1);
        let gens = [ch(&t, &[1]), ch(&t, &[-1])];
        assert_eq!(sym_coeff(&t, &gens, &t.zero()), Err(Error::NoSeparatingFunctional));
        assert_eq!(sym_coeff(&t, &[t.zero()], &t.zero()), Err(Error::NoSeparatingFunctional));
        let z2 = Arc::new(quotient_presentation(1, &LatticeInvolution::negation(1)).unwrap());
        assert_eq!(sym_coeff(&z2, &[ch(&z2, &[1])], &z2.zero()), Err(Error::NoSeparatingFunctional));
    }

    #[test]
    fn sym_with_torsion() {
        // Z x Z/2 from the swap-and-negate involution on Z^3
        let theta = LatticeInvolution::new(crate::abelian::IntMatrix::from_rows(&[
            vec![1, 0, 0],
            vec![0, -1, 0],
            vec![0, 0, -1],
        ]))
        .unwrap();
        let g = Arc::new(quotient_presentation(3, &theta).unwrap());
        let gens = [ch(&g, &[1, 1, 0]), ch(&g, &[1, 0, 0]), ch(&g, &[2, 0, 1])];
        for t in 0..6 {
            for s in 0..2 {
                let target = ch(&g, &[t, s, 0]);
                assert_eq!(sym_coeff(&g, &gens, &target).unwrap(), dp_count(&g, &gens, &target, 6));
            }
        }
    }

    #[test]
    fn wedge_expansion() {
        let t = torus(1);
        let g = ch(&t, &[1]);
        let w = wedge_expand(&t, &[g.clone(), g.clone()], 4).unwrap();
        assert_eq!(w.coefficient(&t.zero()), 1);
        assert_eq!(w.coefficient(&g), -2);
        assert_eq!(w.coefficient(&ch(&t, &[2])), 1);
        assert_eq!(wedge_expand(&t, &[g.clone(), g.clone()], 1).unwrap_err(), Error::WedgeCap { size: 2, cap: 1 });
    }

    #[test]
    fn factor_coefficients() {
        let t = torus(1);
        let g = ch(&t, &[2]);
        // -C_3 Sym(C_2)
        let f = SeriesFactor::new(t.clone(), -1, ch(&t, &[3]), vec![g], vec![], 4).unwrap();
        assert_eq!(f.coeff(&ch(&t, &[5])), -1);
        assert_eq!(f.coeff(&ch(&t, &[4])), 0);
        assert_eq!(f.coeff(&ch(&t, &[1])), 0);
        // (1 - C_1) Sym(C_1) = 1
        let one = ch(&t, &[1]);
        let f = SeriesFactor::new(t.clone(), 1, t.zero(), vec![one.clone()], vec![one], 4).unwrap();
        assert_eq!(f.coeff(&t.zero()), 1);
        for k in 1..5 {
            assert_eq!(f.coeff(&ch(&t, &[k])), 0);
        }
    }

    proptest! {
        #[test]
        fn sym_dfs_matches_dp(
            gens in prop::collection::vec((0i64..3, -2i64..3), 1..4),
            target in (0i64..6, -4i64..5),
        ) {
            let t = torus(2);
            // force positivity on the first coordinate to keep the DP bound valid
            let gens: Vec<_> = gens.iter().map(|&(a, b)| ch(&t, &[a + 1, b])).collect();
            let target = ch(&t, &[target.0, target.1]);
            prop_assert_eq!(sym_coeff(&t, &gens, &target).unwrap(), dp_count(&t, &gens, &target, 6));
        }
    }
}
