//! Branching multiplicities as sums of per-orbit contributions.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::abelian::{weight_sum, Weight};
use crate::error::{Error, Result};
use crate::hreps::{ind_multiplicity, WeightCache};
use crate::pairs::{catalog, parity_sign, OrbitDatum, PairSpec};
use crate::rootdata::{weyl_enumerate, WeylElement};
use crate::series::SeriesFactor;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_weyl: usize,
    pub max_dim: u128,
    pub max_wedge: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_weyl: 40_320, max_dim: 1_000_000, max_wedge: 16 }
    }
}

/// One H-orbit `Hxw`: a class index and a coset index inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitColumn {
    pub class: usize,
    pub coset: usize,
    pub class_label: String,
    pub coset_label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub total: i64,
    pub per_orbit: Vec<i64>,
    /// Outside the restricted-weight support, expected to vanish.
    pub margin: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchTable {
    pub pair: String,
    pub lambda: Weight,
    pub columns: Vec<OrbitColumn>,
    pub entries: BTreeMap<Weight, TableEntry>,
}

impl BranchTable {
    /// `μ ↦ total` for the nonzero totals.
    pub fn nonzero(&self) -> BTreeMap<Weight, i64> {
        self.entries.iter().filter(|(_, e)| e.total != 0).map(|(mu, e)| (mu.clone(), e.total)).collect()
    }

    pub fn check_invariants(&self) -> Result<()> {
        for (mu, e) in &self.entries {
            if e.per_orbit.iter().sum::<i64>() != e.total {
                return Err(Error::Inconsistent(format!("per-orbit values at {mu} do not sum to the total")));
            }
            if e.total < 0 {
                return Err(Error::NotACharacter { weight: mu.to_string(), coeff: e.total });
            }
            if e.margin && e.total != 0 {
                return Err(Error::Inconsistent(format!("margin weight {mu} has total {}", e.total)));
            }
        }
        Ok(())
    }
}

pub struct Engine {
    pair: PairSpec,
    orbits: Vec<OrbitDatum>,
    weyl: Vec<WeylElement>,
    caps: Caps,
    cache: Arc<WeightCache>,
}

impl Engine {
    pub fn new(pair: PairSpec, caps: Caps) -> Result<Self> {
        let orbits = catalog(&pair, caps.max_weyl)?;
        let weyl = weyl_enumerate(pair.g(), caps.max_weyl)?;
        Ok(Engine { pair, orbits, weyl, caps, cache: Arc::new(WeightCache::new()) })
    }

    /// Same pair and cache, different orbit data (e.g. other coset representatives).
    pub fn with_orbits(&self, orbits: Vec<OrbitDatum>) -> Engine {
        Engine { pair: self.pair.clone(), orbits, weyl: self.weyl.clone(), caps: self.caps, cache: self.cache.clone() }
    }

    /// Every coset representative `w` replaced by `u·w` for a random `u ∈ W_x^H`.
    pub fn perturbed<R: rand::Rng>(&self, rng: &mut R) -> Engine {
        self.with_orbits(self.orbits.iter().map(|o| o.perturbed(rng)).collect())
    }

    pub fn pair(&self) -> &PairSpec {
        &self.pair
    }

    pub fn orbits(&self) -> &[OrbitDatum] {
        &self.orbits
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn columns(&self) -> Vec<OrbitColumn> {
        let mut out = Vec::new();
        for (ci, o) in self.orbits.iter().enumerate() {
            for (k, label) in o.coset_labels().iter().enumerate() {
                out.push(OrbitColumn { class: ci, coset: k, class_label: o.label.clone(), coset_label: label.clone() });
            }
        }
        out
    }

    /// The series whose induction is the contribution of the orbit `Hxw`.
    pub fn orbit_factor(&self, orbit: &OrbitDatum, w: &WeylElement, lambda: &Weight) -> Result<SeriesFactor> {
        let g = self.pair.g();
        g.require_dominant(lambda)?;
        let cls = orbit.classify_roots(w);
        let hx = orbit.hx();
        let rank = g.rank();
        let shift_weight = &g.act(w, lambda) + &weight_sum(rank, &cls.nci_plus);
        let shift = hx.add(&orbit.restrict(&shift_weight), &orbit.delta(w));
        let sym = cls.nci_plus.iter().map(|a| orbit.restrict(a)).collect();
        let wedge = cls.ci_plus.iter().map(|a| orbit.restrict(a)).collect();
        let sign = parity_sign(orbit.sign_data(w).m);
        SeriesFactor::new(hx.clone(), sign, shift, sym, wedge, self.caps.max_wedge)
    }

    fn weights_h(&self, mu: &Weight) -> Result<Arc<crate::hreps::WeightSystem>> {
        self.cache.get(self.pair.h(), mu, self.caps.max_dim)
    }

    fn factors(&self, lambda: &Weight) -> Result<Vec<(usize, SeriesFactor)>> {
        let mut out = Vec::new();
        for (ci, o) in self.orbits.iter().enumerate() {
            for w in o.coset_reps() {
                out.push((ci, self.orbit_factor(o, w, lambda)?));
            }
        }
        Ok(out)
    }

    fn evaluate(&self, factors: &[(usize, SeriesFactor)], mu: &Weight) -> Result<Vec<i64>> {
        let ws = self.weights_h(mu)?;
        Ok(factors.iter().map(|(ci, f)| ind_multiplicity(f, &ws, &self.orbits[*ci])).collect())
    }

    /// Multiplicity of `V_mu^H` in `V_lambda^G` with its per-orbit breakdown
    /// (ordered as [`Engine::columns`]).
    pub fn branch_mult(&self, lambda: &Weight, mu: &Weight) -> Result<(i64, Vec<i64>)> {
        self.pair.h().require_dominant(mu)?;
        let per = self.evaluate(&self.factors(lambda)?, mu)?;
        Ok((per.iter().sum(), per))
    }

    /// Dominant `H`-weights occurring in `V_lambda^G|_H`, and a ring of
    /// neighbouring dominant weights outside it.
    pub fn candidate_support(&self, lambda: &Weight) -> Result<(BTreeSet<Weight>, BTreeSet<Weight>)> {
        let (g, h) = (self.pair.g(), self.pair.h());
        let ws = self.cache.get(g, lambda, self.caps.max_dim)?;
        let support: BTreeSet<Weight> =
            ws.mults().keys().map(|nu| self.pair.restrict_to_h(nu)).filter(|nu| h.is_dominant(nu)).collect();
        let steps: BTreeSet<Weight> =
            g.roots().iter().map(|a| self.pair.restrict_to_h(a)).filter(|b| !b.is_zero()).collect();
        let mut margin = BTreeSet::new();
        for mu in &support {
            for b in &steps {
                let nu = mu + b;
                if h.is_dominant(&nu) && !support.contains(&nu) {
                    margin.insert(nu);
                }
            }
        }
        Ok((support, margin))
    }

    pub fn branch_table(&self, lambda: &Weight) -> Result<BranchTable> {
        let factors = self.factors(lambda)?;
        let (support, margin) = self.candidate_support(lambda)?;
        let cells: Vec<(Weight, bool)> =
            support.into_iter().map(|m| (m, false)).chain(margin.into_iter().map(|m| (m, true))).collect();
        let entries = cells
            .into_par_iter()
            .map(|(mu, is_margin)| {
                let per = self.evaluate(&factors, &mu)?;
                Ok((mu, TableEntry { total: per.iter().sum(), per_orbit: per, margin: is_margin }))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(BranchTable { pair: self.pair.to_string(), lambda: lambda.clone(), columns: self.columns(), entries })
    }

    /// Contribution of one class summed over its H-orbits.
    pub fn class_mult(&self, class: usize, lambda: &Weight, mu: &Weight) -> Result<i64> {
        let o = &self.orbits[class];
        let ws = self.weights_h(mu)?;
        let mut total = 0;
        for w in o.coset_reps() {
            total += ind_multiplicity(&self.orbit_factor(o, w, lambda)?, &ws, o);
        }
        Ok(total)
    }

    /// The `|W|` series of the full-Weyl-group route for one class, before the
    /// division by `|W_x^H|`.
    pub fn weyl_route_factors(&self, class: usize, lambda: &Weight) -> Result<Vec<SeriesFactor>> {
        let g = self.pair.g();
        g.require_dominant(lambda)?;
        let o = &self.orbits[class];
        let hx = o.hx();
        let id = g.identity();
        let base = o.classify_roots(&id);
        let delta = o.delta(&id);
        let wedge: Vec<_> = base.ci_plus.iter().map(|a| o.restrict(a)).collect();
        self.weyl
            .iter()
            .map(|w| {
                let pol = o.polarization(w);
                let sd = o.sign_data(w);
                let shift_weight = &g.dot_action(w, lambda) + &weight_sum(g.rank(), &pol.e_plus);
                let shift = hx.add(&o.restrict(&shift_weight), &delta);
                let sym = pol.polarized().iter().map(|a| o.restrict(a)).collect();
                SeriesFactor::new(hx.clone(), parity_sign(sd.n + sd.k), shift, sym, wedge.clone(), self.caps.max_wedge)
            })
            .collect()
    }

    /// Contribution of one class through the full-Weyl-group route.
    pub fn weyl_route_mult(&self, class: usize, lambda: &Weight, mu: &Weight) -> Result<i64> {
        let o = &self.orbits[class];
        let ws = self.weights_h(mu)?;
        let sum: i64 = self.weyl_route_factors(class, lambda)?.iter().map(|f| ind_multiplicity(f, &ws, o)).sum();
        let d = o.wxh_order() as i64;
        if sum % d != 0 {
            return Err(Error::Inconsistent(format!(
                "class {} at λ={lambda}, μ={mu}: {sum} is not divisible by |W_x^H| = {d}",
                o.label
            )));
        }
        Ok(sum / d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(s: &str) -> Engine {
        Engine::new(PairSpec::parse(s).unwrap(), Caps::default()).unwrap()
    }

    fn w(v: &[i64]) -> Weight {
        Weight::new(v.to_vec())
    }

    #[test]
    fn su2_pole_factors() {
        let e = engine("su2-torus");
        let o = &e.orbits()[0];
        for n in 0..4 {
            let f = e.orbit_factor(o, &o.coset_reps()[0], &w(&[n])).unwrap();
            assert_eq!(f.sign(), -1);
            assert_eq!(f.shift(), &o.hx().restrict(&w(&[n + 2])));
            assert_eq!(f.sym_generators(), &[o.hx().restrict(&w(&[2]))]);
            let f = e.orbit_factor(o, &o.coset_reps()[1], &w(&[n])).unwrap();
            assert_eq!(f.sign(), -1);
            assert_eq!(f.shift(), &o.hx().restrict(&w(&[-n - 2])));
            assert_eq!(f.sym_generators(), &[o.hx().restrict(&w(&[-2]))]);
        }
        assert!(e.orbit_factor(o, &o.coset_reps()[0], &w(&[-1])).is_err());
    }

    #[test]
    fn diag_su2_swap_coset_shift() {
        let e = engine("diag:su2");
        let o = &e.orbits()[0];
        // (s, e), in the same coset as the catalog's representative
        let s = WeylElement::from_perm(vec![1, 0, 2, 3]).unwrap();
        for (n, m) in [(0, 0), (1, 2), (3, 1)] {
            let f = e.orbit_factor(o, &s, &w(&[n, m])).unwrap();
            assert_eq!(f.shift(), &o.restrict_h(&w(&[m - n])));
            assert!(f.sym_generators().is_empty() && f.wedge_generators().is_empty());
        }
    }

    #[test]
    fn branch_mult_examples() {
        let e = engine("su2-torus");
        for (mu, m) in [(-2, 1), (0, 1), (2, 1), (4, 0), (1, 0)] {
            assert_eq!(e.branch_mult(&w(&[2]), &w(&[mu])).unwrap().0, m);
        }
        let e = engine("diag:su2");
        for (mu, m) in [(0, 1), (2, 1), (1, 0), (4, 0)] {
            assert_eq!(e.branch_mult(&w(&[1, 1]), &w(&[mu])).unwrap().0, m);
        }
        let e = engine("upq:1,1");
        assert_eq!(e.branch_mult(&w(&[2, 0]), &w(&[1, 1])).unwrap().0, 1);
    }

    #[test]
    fn diag_su2_orbit_terms() {
        // V_n ⊗ V_m = Ind(C_{m-n}) - Ind(C_{m+n+2})
        let e = engine("diag:su2");
        let cols = e.columns();
        let swap = cols.iter().position(|c| c.coset_label != e.orbits()[0].coset_labels()[0]).unwrap();
        let id = 1 - swap;
        let (_, per) = e.branch_mult(&w(&[1, 1]), &w(&[2])).unwrap();
        assert_eq!((per[id], per[swap]), (0, 1));
        let (_, per) = e.branch_mult(&w(&[1, 1]), &w(&[4])).unwrap();
        assert_eq!((per[id], per[swap]), (-1, 1));
    }

    #[test]
    fn tables() {
        let e = engine("su2-torus");
        let t = e.branch_table(&w(&[3])).unwrap();
        t.check_invariants().unwrap();
        let nz: Vec<_> = t.nonzero().into_iter().collect();
        assert_eq!(nz, vec![(w(&[-3]), 1), (w(&[-1]), 1), (w(&[1]), 1), (w(&[3]), 1)]);
        assert!(t.entries[&w(&[5])].margin && t.entries[&w(&[-5])].margin);

        let e = engine("diag:su2");
        let t = e.branch_table(&w(&[2, 1])).unwrap();
        t.check_invariants().unwrap();
        assert_eq!(t.nonzero().into_iter().collect::<Vec<_>>(), vec![(w(&[1]), 1), (w(&[3]), 1)]);
        assert_eq!(t.entries[&w(&[5])].total, 0);

        let e = engine("upq:2,1");
        let t = e.branch_table(&w(&[1, 0, 0])).unwrap();
        t.check_invariants().unwrap();
        assert_eq!(t.nonzero().into_iter().collect::<Vec<_>>(), vec![(w(&[0, 0, 1]), 1), (w(&[1, 0, 0]), 1)]);
    }

    #[test]
    fn routes_agree_small() {
        let e = engine("diag:su2");
        let lambda = w(&[1, 2]);
        for mu in 0..=5 {
            assert_eq!(e.weyl_route_mult(0, &lambda, &w(&[mu])).unwrap(), e.class_mult(0, &lambda, &w(&[mu])).unwrap());
        }
        let e = engine("su2-torus");
        for mu in -6..=6 {
            for c in 0..2 {
                assert_eq!(
                    e.weyl_route_mult(c, &w(&[2]), &w(&[mu])).unwrap(),
                    e.class_mult(c, &w(&[2]), &w(&[mu])).unwrap()
                );
            }
        }
    }
}
