//! The symmetric-pair catalog and per-orbit combinatorics.
//!
//! Every H-orbit `Hxw` in the critical set is handled in the coordinates of
//! its class base point `x`: the torus `G_x` is identified with the standard
//! torus once, `θ` becomes the lattice involution `theta`, and moving along the
//! class only changes the positive system, `R⁺_{xw} = w·R⁺` and `λ_{xw} = wλ`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;

use crate::abelian::{
    quotient_presentation, weight_sum, HxCharacter, IntMatrix, LatticeInvolution, QuotientPresentation, Weight,
};
use crate::error::{Error, Result};
use crate::rootdata::{weyl_enumerate, Block, RootDatum, WeylElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairKind {
    /// `T ⊂ SU(2)`, with θ conjugation by `diag(1,-1)`.
    Su2Torus,
    /// `SU(2) ⊂ SU(2) × SU(2)` diagonally.
    DiagSu2,
    /// `U(k) ⊂ U(k) × U(k)` diagonally.
    DiagU(usize),
    /// `U(p) × U(q) ⊂ U(p+q)`, `p ≥ q ≥ 1`.
    Upq(usize, usize),
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairKind::Su2Torus => write!(f, "su2-torus"),
            PairKind::DiagSu2 => write!(f, "diag:su2"),
            PairKind::DiagU(k) => write!(f, "diag:u{k}"),
            PairKind::Upq(p, q) => write!(f, "upq:{p},{q}"),
        }
    }
}

impl FromStr for PairKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnsupportedPair(s.to_string());
        let s = s.trim();
        if s == "su2-torus" {
            return Ok(PairKind::Su2Torus);
        }
        if let Some(rest) = s.strip_prefix("diag:") {
            if rest == "su2" {
                return Ok(PairKind::DiagSu2);
            }
            let k: usize = rest.strip_prefix('u').and_then(|k| k.parse().ok()).ok_or_else(bad)?;
            return Ok(PairKind::DiagU(k));
        }
        if let Some(rest) = s.strip_prefix("upq:") {
            let (p, q) = rest.split_once(',').ok_or_else(bad)?;
            let p: usize = p.trim().parse().map_err(|_| bad())?;
            let q: usize = q.trim().parse().map_err(|_| bad())?;
            return Ok(PairKind::Upq(p, q));
        }
        Err(bad())
    }
}

/// A symmetric pair `(G, H)` with the torus restriction map from `G`-weights
/// to `H`-weights.
#[derive(Clone, Debug)]
pub struct PairSpec {
    kind: PairKind,
    g: RootDatum,
    h: RootDatum,
    g_to_h: IntMatrix,
}

impl PairSpec {
    pub fn new(kind: PairKind) -> Result<Self> {
        let bad = || Error::UnsupportedPair(kind.to_string());
        let (g, h, g_to_h) = match kind {
            PairKind::Su2Torus => {
                (RootDatum::new(vec![Block::Su2]), RootDatum::new(vec![Block::Unitary(1)]), IntMatrix::identity(1))
            }
            PairKind::DiagSu2 | PairKind::DiagU(_) => {
                let b = match kind {
                    PairKind::DiagU(0) => return Err(bad()),
                    PairKind::DiagU(k) => Block::Unitary(k),
                    _ => Block::Su2,
                };
                let r = b.rank();
                let mut m = IntMatrix::zeros(r, 2 * r);
                for i in 0..r {
                    m.set(i, i, 1);
                    m.set(i, r + i, 1);
                }
                (RootDatum::new(vec![b, b]), RootDatum::new(vec![b]), m)
            }
            PairKind::Upq(p, q) => {
                if q < 1 || p < q {
                    return Err(bad());
                }
                (
                    RootDatum::unitary(p + q),
                    RootDatum::new(vec![Block::Unitary(p), Block::Unitary(q)]),
                    IntMatrix::identity(p + q),
                )
            }
        };
        Ok(PairSpec { kind, g, h, g_to_h })
    }

    pub fn parse(s: &str) -> Result<Self> {
        PairSpec::new(s.parse()?)
    }

    pub fn kind(&self) -> PairKind {
        self.kind
    }

    pub fn g(&self) -> &RootDatum {
        &self.g
    }

    pub fn h(&self) -> &RootDatum {
        &self.h
    }

    /// Restriction of a `G`-torus weight to the `H`-torus.
    pub fn restrict_to_h(&self, w: &Weight) -> Weight {
        self.g_to_h.apply(w)
    }
}

impl fmt::Display for PairSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    CompactImaginary,
    NoncompactImaginary,
    Real,
    Complex,
}

/// Positive roots of `w·R⁺` sorted by their behaviour under θ.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootClassification {
    pub ci_plus: Vec<Weight>,
    pub nci_plus: Vec<Weight>,
    pub real_plus: Vec<Weight>,
    /// `{α, θα}` with both positive, one entry per pair.
    pub complex_pairs: Vec<(Weight, Weight)>,
    /// Complex roots whose θ-image is negative.
    pub complex_unpaired: Vec<Weight>,
}

impl RootClassification {
    pub fn total(&self) -> usize {
        self.ci_plus.len()
            + self.nci_plus.len()
            + self.real_plus.len()
            + 2 * self.complex_pairs.len()
            + self.complex_unpaired.len()
    }
}

/// Sign exponents: `m = m_{xw}`, `n = n_x`, `k = k_{x,w}`, `d_ci = d^{ci}_{x,w}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignData {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub d_ci: usize,
}

impl SignData {
    /// `n + k ≡ m + d_ci (mod 2)`.
    pub fn parity_holds(&self) -> bool {
        (self.n + self.k + self.m + self.d_ci).is_multiple_of(2)
    }
}

pub fn parity_sign(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Base nci⁺ roots split by positivity for `w·R⁺`, and the flipped-root sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarization {
    pub e_plus: Vec<Weight>,
    pub e_minus: Vec<Weight>,
    pub gamma_ci: Weight,
    pub gamma_nci: Weight,
    pub gamma: Weight,
    pub d_ci: usize,
}

impl Polarization {
    /// `|α|_w` for every base nci⁺ root.
    pub fn polarized(&self) -> Vec<Weight> {
        self.e_plus.iter().cloned().chain(self.e_minus.iter().map(|a| -a)).collect()
    }
}

/// One class of `H\Z_θ/W` with the H-orbits it contains.
#[derive(Clone, Debug)]
pub struct OrbitDatum {
    pub class: usize,
    pub label: String,
    g: RootDatum,
    theta: LatticeInvolution,
    hx: Arc<QuotientPresentation>,
    h_embed: IntMatrix,
    noncompact: HashSet<Weight>,
    stabilizer: Vec<WeylElement>,
    coset_reps: Vec<WeylElement>,
    coset_labels: Vec<String>,
}

impl OrbitDatum {
    pub fn theta(&self) -> &LatticeInvolution {
        &self.theta
    }

    pub fn hx(&self) -> &Arc<QuotientPresentation> {
        &self.hx
    }

    pub fn g(&self) -> &RootDatum {
        &self.g
    }

    /// `W_x^H`.
    pub fn stabilizer(&self) -> &[WeylElement] {
        &self.stabilizer
    }

    pub fn wxh_order(&self) -> usize {
        self.stabilizer.len()
    }

    pub fn coset_reps(&self) -> &[WeylElement] {
        &self.coset_reps
    }

    pub fn coset_labels(&self) -> &[String] {
        &self.coset_labels
    }

    /// Restriction of a base-coordinate `G_x`-weight to `H_x`.
    pub fn restrict(&self, w: &Weight) -> HxCharacter {
        self.hx.restrict(w)
    }

    /// Restriction of an `H`-torus weight to `H_x ⊂ H`.
    pub fn restrict_h(&self, nu: &Weight) -> HxCharacter {
        self.hx.restrict(&self.h_embed.apply(nu))
    }

    /// Base-coordinate weight with the same `H_x`-restriction as the `H`-weight `nu`.
    pub fn embed_h(&self, nu: &Weight) -> Weight {
        self.h_embed.apply(nu)
    }

    pub fn root_kind(&self, a: &Weight) -> RootKind {
        let t = self.theta.apply(a);
        if t == *a {
            if self.noncompact.contains(a) {
                RootKind::NoncompactImaginary
            } else {
                RootKind::CompactImaginary
            }
        } else if t == -a {
            RootKind::Real
        } else {
            RootKind::Complex
        }
    }

    /// Whether `a` lies in `w·R⁺`.
    fn positive_for(&self, winv: &WeylElement, a: &Weight) -> bool {
        self.g.is_positive_root(&self.g.act(winv, a))
    }

    /// Classification of `R⁺_{xw} = w·R⁺` in base coordinates.
    pub fn classify_roots(&self, w: &WeylElement) -> RootClassification {
        let winv = w.inverse();
        let mut out = RootClassification::default();
        for a in self.g.positive_roots() {
            let b = self.g.act(w, a);
            match self.root_kind(&b) {
                RootKind::CompactImaginary => out.ci_plus.push(b),
                RootKind::NoncompactImaginary => out.nci_plus.push(b),
                RootKind::Real => out.real_plus.push(b),
                RootKind::Complex => {
                    let t = self.theta.apply(&b);
                    if !self.positive_for(&winv, &t) {
                        out.complex_unpaired.push(b);
                    } else if b < t {
                        out.complex_pairs.push((b, t));
                    }
                }
            }
        }
        out
    }

    /// `δ(xw)` as an `H_x`-character: one representative per θ-pair.
    pub fn delta(&self, w: &WeylElement) -> HxCharacter {
        let cls = self.classify_roots(w);
        self.hx.sum(
            &cls.complex_pairs
                .iter()
                .map(|(a, b)| {
                    let ra = self.restrict(a);
                    assert_eq!(ra, self.restrict(b), "θ-paired roots restrict differently");
                    ra
                })
                .collect::<Vec<_>>(),
        )
    }

    pub fn sign_data(&self, w: &WeylElement) -> SignData {
        let cls = self.classify_roots(w);
        let base = self.classify_roots(&self.g.identity());
        let m = cls.complex_pairs.len() + cls.nci_plus.len();
        // |θR⁺ ∩ R⁺| - ½|θR⁺ ∩ R⁺ ∩ {θα ≠ α}|
        let n = base.ci_plus.len() + base.nci_plus.len() + base.complex_pairs.len();
        let winv = w.inverse();
        let mut k = 0;
        let mut d_ci = 0;
        for a in self.g.positive_roots() {
            let kind = self.root_kind(a);
            let stays = self.positive_for(&winv, a);
            if stays && (kind == RootKind::Complex || kind == RootKind::CompactImaginary) {
                k += 1;
            }
            if !stays && kind == RootKind::CompactImaginary {
                d_ci += 1;
            }
        }
        SignData { m, n, k, d_ci }
    }

    pub fn polarization(&self, w: &WeylElement) -> Polarization {
        let winv = w.inverse();
        let rank = self.g.rank();
        let mut pol = Polarization {
            e_plus: Vec::new(),
            e_minus: Vec::new(),
            gamma_ci: Weight::zero(rank),
            gamma_nci: Weight::zero(rank),
            gamma: Weight::zero(rank),
            d_ci: 0,
        };
        for a in self.g.positive_roots() {
            let stays = self.positive_for(&winv, a);
            if !stays {
                pol.gamma = &pol.gamma + a;
            }
            match self.root_kind(a) {
                RootKind::NoncompactImaginary if stays => pol.e_plus.push(a.clone()),
                RootKind::NoncompactImaginary => {
                    pol.gamma_nci = &pol.gamma_nci + a;
                    pol.e_minus.push(a.clone());
                }
                RootKind::CompactImaginary if !stays => {
                    pol.gamma_ci = &pol.gamma_ci + a;
                    pol.d_ci += 1;
                }
                _ => {}
            }
        }
        pol
    }

    /// Copy with every coset representative `w` replaced by `u·w` for a random
    /// `u ∈ W_x^H`.
    pub fn perturbed<R: Rng>(&self, rng: &mut R) -> OrbitDatum {
        let mut out = self.clone();
        for rep in &mut out.coset_reps {
            let u = &self.stabilizer[rng.gen_range(0..self.stabilizer.len())];
            *rep = u.compose(rep);
        }
        out
    }
}

/// Right cosets `S·w` of `subgroup` in `group`, first element in enumeration order.
fn right_coset_reps(group: &[WeylElement], subgroup: &[WeylElement]) -> Vec<WeylElement> {
    let mut covered = HashSet::new();
    let mut reps = Vec::new();
    for w in group {
        if covered.contains(w) {
            continue;
        }
        reps.push(w.clone());
        covered.extend(subgroup.iter().map(|s| s.compose(w)));
    }
    reps
}

#[allow(clippy::too_many_arguments)]
fn build_orbit(
    pair: &PairSpec,
    group: &[WeylElement],
    class: usize,
    label: String,
    theta: LatticeInvolution,
    h_embed: IntMatrix,
    noncompact: HashSet<Weight>,
    stabilizer: Vec<WeylElement>,
    coset_label: impl Fn(&WeylElement) -> String,
) -> Result<OrbitDatum> {
    let g = pair.g.clone();
    let hx = Arc::new(quotient_presentation(g.rank(), &theta)?);
    for a in g.roots() {
        if !g.is_root(&theta.apply(&a)) {
            return Err(Error::Inconsistent(format!("θ does not preserve the roots in class {label}")));
        }
    }
    let coset_reps = right_coset_reps(group, &stabilizer);
    if coset_reps.len() * stabilizer.len() != group.len() {
        return Err(Error::Inconsistent(format!("W_x^H for class {label} is not a subgroup")));
    }
    let coset_labels = coset_reps.iter().map(coset_label).collect();
    Ok(OrbitDatum { class, label, g, theta, hx, h_embed, noncompact, stabilizer, coset_reps, coset_labels })
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// One [`OrbitDatum`] per element of `H\Z_θ/W`.
pub fn catalog(pair: &PairSpec, max_weyl: usize) -> Result<Vec<OrbitDatum>> {
    let g = &pair.g;
    let group = weyl_enumerate(g, max_weyl)?;
    let rank = g.rank();
    match pair.kind {
        PairKind::Su2Torus => {
            let e = g.identity();
            let s = group.iter().find(|w| !w.is_identity()).cloned().expect("SU(2) Weyl group has order 2");
            let su2_label = move |w: &WeylElement| if w.is_identity() { "N".to_string() } else { "S".to_string() };
            let poles = build_orbit(
                pair,
                &group,
                0,
                "pole".into(),
                LatticeInvolution::identity(rank),
                IntMatrix::identity(rank),
                g.roots().into_iter().collect(),
                vec![e.clone()],
                su2_label,
            )?;
            let equator = build_orbit(
                pair,
                &group,
                1,
                "equator".into(),
                LatticeInvolution::negation(rank),
                IntMatrix::identity(rank),
                HashSet::new(),
                vec![e, s],
                |_| "E".to_string(),
            )?;
            Ok(vec![poles, equator])
        }
        PairKind::DiagSu2 | PairKind::DiagU(_) => {
            let r = rank / 2;
            let block = g.blocks()[0];
            let m = block.slots();
            let swap: Vec<usize> = (0..rank).map(|i| (i + r) % rank).collect();
            let mut embed = IntMatrix::zeros(rank, r);
            for i in 0..r {
                embed.set(i, i, 1);
            }
            let kd = RootDatum::new(vec![block]);
            let stabilizer = weyl_enumerate(&kd, max_weyl)?
                .into_iter()
                .map(|u| {
                    let p = u.perm();
                    WeylElement::from_perm(p.iter().copied().chain(p.iter().map(|i| i + m)).collect())
                })
                .collect::<Result<Vec<_>>>()?;
            let orbit = build_orbit(
                pair,
                &group,
                0,
                "x".into(),
                LatticeInvolution::from_permutation(&swap)?,
                embed,
                HashSet::new(),
                stabilizer,
                |w| w.to_string(),
            )?;
            Ok(vec![orbit])
        }
        PairKind::Upq(p, q) => {
            let n = p + q;
            (0..=q).map(|j| upq_orbit(pair, &group, p, q, n, j)).collect()
        }
    }
}

fn upq_orbit(pair: &PairSpec, group: &[WeylElement], p: usize, q: usize, n: usize, j: usize) -> Result<OrbitDatum> {
    // 0-based positions: I1 = [0, p-j), pairs (p-j+2t, p-j+2t+1), I4 = [p+j, n)
    let in1 = |i: usize| i < p - j;
    let in4 = |i: usize| i >= p + j;
    let pairs: Vec<(usize, usize)> = (0..j).map(|t| (p - j + 2 * t, p - j + 2 * t + 1)).collect();

    let mut swap: Vec<usize> = (0..n).collect();
    for &(a, b) in &pairs {
        swap.swap(a, b);
    }

    // H-weights enter base coordinates through the reordering w_j.
    let mut wj: Vec<usize> = (0..n).collect();
    for (t, &(a, b)) in pairs.iter().enumerate() {
        wj[a] = p - j + t;
        wj[b] = p + t;
    }
    let mut embed = IntMatrix::zeros(n, n);
    for (i, &target) in wj.iter().enumerate() {
        embed.set(i, target, 1);
    }

    let mut noncompact = HashSet::new();
    for r in (0..n).filter(|&r| in1(r)) {
        for s in (0..n).filter(|&s| in4(s)) {
            let mut a = Weight::zero(n);
            a.0[r] = 1;
            a.0[s] = -1;
            noncompact.insert(-&a);
            noncompact.insert(a);
        }
    }

    let pair_set: HashSet<(usize, usize)> = pairs.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
    let stabilizer: Vec<WeylElement> = group
        .iter()
        .filter(|w| {
            let pm = w.perm();
            (0..n).all(|i| (!in1(i) || in1(pm[i])) && (!in4(i) || in4(pm[i])))
                && pairs.iter().all(|&(a, b)| pair_set.contains(&(pm[a], pm[b])))
        })
        .cloned()
        .collect();
    let expected = factorial(p - j) * factorial(q - j) * factorial(j) * (1usize << j);
    if stabilizer.len() != expected {
        return Err(Error::Inconsistent(format!(
            "|W_x| for upq({p},{q}) j={j}: got {}, expected {expected}",
            stabilizer.len()
        )));
    }

    let orbit = build_orbit(
        pair,
        group,
        j,
        format!("j={j}"),
        LatticeInvolution::from_permutation(&swap)?,
        embed,
        noncompact,
        stabilizer,
        |w| w.to_string(),
    )?;
    if orbit.hx.free_rank() != n - j || !orbit.hx.moduli().is_empty() {
        return Err(Error::Inconsistent(format!("H_x for j={j} is not a torus of rank {}", n - j)));
    }
    Ok(orbit)
}

/// Identities relating the data of `xw` to that of the base point `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransportIdentity {
    /// `E^nci_xw = |E^nci_x|_w` and `E^ci_xw = |E^ci_x|_w`.
    Polarization,
    /// `det(E^nci_xw) = C_{-γ^nci} ⊗ det((E^nci_x)⁺_w)`.
    Determinant,
    /// `∧E^ci_xw = (-1)^{d_ci} C_{-γ^ci} ⊗ ∧E^ci_x`.
    Wedge,
    /// `δ(xw) - δ(x) = γ^nci + γ^ci - γ` on `H_x`.
    DeltaShift,
}

impl TransportIdentity {
    pub const ALL: [TransportIdentity; 4] = [
        TransportIdentity::Polarization,
        TransportIdentity::Determinant,
        TransportIdentity::Wedge,
        TransportIdentity::DeltaShift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransportIdentity::Polarization => "polarization",
            TransportIdentity::Determinant => "det-transport",
            TransportIdentity::Wedge => "wedge-transport",
            TransportIdentity::DeltaShift => "delta-shift",
        }
    }

    /// Checks the identity for one `(orbit, w)`; the error describes the failure.
    pub fn check(self, orbit: &OrbitDatum, w: &WeylElement) -> std::result::Result<(), String> {
        let rank = orbit.g.rank();
        let id = orbit.g.identity();
        let cls = orbit.classify_roots(w);
        let pol = orbit.polarization(w);
        let restricted = |v: &[Weight]| v.iter().map(|a| orbit.restrict(a)).collect::<Vec<_>>();
        let ok = match self {
            TransportIdentity::Polarization => {
                let winv = w.inverse();
                let base = orbit.classify_roots(&id);
                let mut nci = cls.nci_plus.clone();
                let mut nci_w = pol.polarized();
                let mut ci = cls.ci_plus.clone();
                let mut ci_w: Vec<Weight> =
                    base.ci_plus.iter().map(|a| if orbit.positive_for(&winv, a) { a.clone() } else { -a }).collect();
                for v in [&mut nci, &mut nci_w, &mut ci, &mut ci_w] {
                    v.sort();
                }
                nci == nci_w && ci == ci_w
            }
            TransportIdentity::Determinant => {
                let det_xw = orbit.restrict(&weight_sum(rank, &cls.nci_plus));
                let det_plus = orbit.restrict(&(&weight_sum(rank, &pol.e_plus) - &pol.gamma_nci));
                det_xw == det_plus
            }
            TransportIdentity::Wedge => {
                let base = orbit.classify_roots(&id);
                let wedge_xw = crate::series::wedge_expand(&orbit.hx, &restricted(&cls.ci_plus), usize::MAX)
                    .map_err(|e| e.to_string())?;
                let wedge_x = crate::series::wedge_expand(&orbit.hx, &restricted(&base.ci_plus), usize::MAX)
                    .map_err(|e| e.to_string())?;
                wedge_xw == wedge_x.shifted(&orbit.restrict(&-&pol.gamma_ci)).scaled(parity_sign(pol.d_ci))
            }
            TransportIdentity::DeltaShift => {
                let shift = orbit.restrict(&(&(&pol.gamma_nci + &pol.gamma_ci) - &pol.gamma));
                orbit.hx.sub(&orbit.delta(w), &orbit.delta(&id)) == shift
            }
        };
        if ok {
            Ok(())
        } else {
            Err(format!("{} fails for class {} at w={w}", self.name(), orbit.label))
        }
    }
}

/// All [`TransportIdentity`] checks for one `(orbit, w)`.
pub fn check_transport(orbit: &OrbitDatum, w: &WeylElement) -> std::result::Result<(), String> {
    TransportIdentity::ALL.iter().try_for_each(|t| t.check(orbit, w))
}
