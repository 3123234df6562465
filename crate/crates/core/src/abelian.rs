//! Character lattices of tori, lattice involutions, and the character groups
//! `Λ/(1-θ)Λ` of fixed-point subgroups.
//!
//! A [`QuotientPresentation`] is computed once per orbit from the Smith normal
//! form of `1-θ`. Its free rows are put in Hermite normal form so that two
//! presentations of the same involution agree entry by entry, which makes
//! equality of [`HxCharacter`] values structural.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integral weight of a torus, in the coordinates of a fixed basis of its
/// character lattice.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut w = Weight::zero(rank);
        w.0[i] = 1;
        w
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }

    pub fn dot(&self, other: &Weight) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add<&Weight> for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Weight> for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }
}

/// Sum of a collection of weights of the given rank.
pub fn weight_sum<'a>(rank: usize, ws: impl IntoIterator<Item = &'a Weight>) -> Weight {
    ws.into_iter().fold(Weight::zero(rank), |acc, w| &acc + w)
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from its rows; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        IntMatrix { rows: rows.len(), cols, data: rows.concat() }
    }

    /// The matrix sending `e_i` to `e_{perm[i]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, &p) in perm.iter().enumerate() {
            m.set(p, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn apply(&self, w: &Weight) -> Weight {
        assert_eq!(self.cols, w.rank(), "matrix/weight shape mismatch");
        Weight((0..self.rows).map(|i| self.row(i).iter().zip(&w.0).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.rows)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        for j in 0..self.cols {
            let v = self.get(src, j);
            self.data[dst * self.cols + j] += k * v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i64) {
        for i in 0..self.rows {
            let v = self.get(i, src);
            self.data[i * self.cols + dst] += k * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self.data[i * self.cols + j] = -self.data[i * self.cols + j];
        }
    }
}

/// Smith normal form `left * a * right = diag(diagonal)` with unimodular
/// `left` and `right`, non-negative diagonal and `d_i | d_{i+1}`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub diagonal: Vec<i64>,
    pub right: IntMatrix,
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut left = IntMatrix::identity(m);
    let mut right = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let pivot = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| d.get(i, j) != 0)
                .min_by_key(|&(i, j)| d.get(i, j).abs());
            let Some((pi, pj)) = pivot else {
                break;
            };
            d.swap_rows(t, pi);
            left.swap_rows(t, pi);
            d.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let p = d.get(t, t);
            let mut clean = true;
            for i in t + 1..m {
                let q = d.get(i, t) / p;
                if q != 0 {
                    d.add_row(i, t, -q);
                    left.add_row(i, t, -q);
                }
                clean &= d.get(i, t) == 0;
            }
            for j in t + 1..n {
                let q = d.get(t, j) / p;
                if q != 0 {
                    d.add_col(j, t, -q);
                    right.add_col(j, t, -q);
                }
                clean &= d.get(t, j) == 0;
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| d.get(i, j) % p != 0));
            match offender {
                Some(i) => {
                    d.add_row(t, i, 1);
                    left.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if d.get(t, t) < 0 {
            d.negate_row(t);
            left.negate_row(t);
        }
    }

    let diagonal = (0..m.min(n)).map(|i| d.get(i, i)).collect();
    SmithForm { left, diagonal, right }
}

/// Row-style Hermite normal form of a full-row-rank integer matrix given by rows.
fn hermite_rows(mut rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let k = rows.len();
    let Some(n) = rows.first().map(Vec::len) else {
        return rows;
    };
    let mut r = 0;
    for c in 0..n {
        if r == k {
            break;
        }
        loop {
            let pivot = (r..k).filter(|&i| rows[i][c] != 0).min_by_key(|&i| rows[i][c].abs());
            let Some(pi) = pivot else { break };
            rows.swap(r, pi);
            let mut clean = true;
            for i in r + 1..k {
                let q = rows[i][c] / rows[r][c];
                if q != 0 {
                    let pivot_row = rows[r].clone();
                    rows[i].iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= q * p);
                }
                clean &= rows[i][c] == 0;
            }
            if clean {
                break;
            }
        }
        if rows[r][c] == 0 {
            continue;
        }
        if rows[r][c] < 0 {
            rows[r].iter_mut().for_each(|v| *v = -*v);
        }
        let p = rows[r][c];
        for i in 0..r {
            let q = rows[i][c].div_euclid(p);
            if q != 0 {
                let pivot_row = rows[r].clone();
                rows[i].iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= q * p);
            }
        }
        r += 1;
    }
    rows
}

/// An integer matrix `M` with `M·M = 1`, acting on weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeInvolution {
    matrix: IntMatrix,
}

impl LatticeInvolution {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() || !matrix.mul(&matrix).is_identity() {
            return Err(Error::NotInvolution);
        }
        Ok(LatticeInvolution { matrix })
    }

    pub fn identity(rank: usize) -> Self {
        LatticeInvolution { matrix: IntMatrix::identity(rank) }
    }

    pub fn negation(rank: usize) -> Self {
        let mut m = IntMatrix::zeros(rank, rank);
        for i in 0..rank {
            m.set(i, i, -1);
        }
        LatticeInvolution { matrix: m }
    }

    /// Coordinate permutation; the permutation must square to the identity.
    pub fn from_permutation(perm: &[usize]) -> Result<Self> {
        LatticeInvolution::new(IntMatrix::permutation(perm))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, w: &Weight) -> Weight {
        self.matrix.apply(w)
    }
}

/// Presentation of `X(H_x) = Λ/(1-θ)Λ` as `Z^k ⊕ ⊕ Z/d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientPresentation {
    rank: usize,
    free: Vec<Vec<i64>>,
    torsion: Vec<Vec<i64>>,
    moduli: Vec<i64>,
}

/// A character of `H_x`: coordinates on the free part followed by residues on
/// the torsion part, each residue in `[0, modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HxCharacter {
    pub free: Vec<i64>,
    pub torsion: Vec<i64>,
}

impl fmt::Display for HxCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.free.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        if !self.torsion.is_empty() {
            write!(f, "|")?;
            for (i, c) in self.torsion.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
        }
        write!(f, "]")
    }
}

pub fn quotient_presentation(rank: usize, theta: &LatticeInvolution) -> Result<QuotientPresentation> {
    if theta.rank() != rank {
        return Err(Error::RankMismatch { expected: rank, got: theta.rank() });
    }
    let a = IntMatrix::identity(rank).sub(theta.matrix());
    let snf = smith_normal_form(&a);
    let mut free = Vec::new();
    let mut torsion = Vec::new();
    let mut moduli = Vec::new();
    for (i, &d) in snf.diagonal.iter().enumerate() {
        match d {
            0 => free.push(snf.left.row(i).to_vec()),
            1 => {}
            _ => {
                torsion.push(snf.left.row(i).to_vec());
                moduli.push(d);
            }
        }
    }
    Ok(QuotientPresentation { rank, free: hermite_rows(free), torsion, moduli })
}

impl QuotientPresentation {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn free_rank(&self) -> usize {
        self.free.len()
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn free_rows(&self) -> &[Vec<i64>] {
        &self.free
    }

    pub fn torsion_rows(&self) -> &[Vec<i64>] {
        &self.torsion
    }

    /// Human-readable group, e.g. `Z^2 x Z/2`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if !self.free.is_empty() || self.moduli.is_empty() {
            parts.push(format!("Z^{}", self.free.len()));
        }
        parts.extend(self.moduli.iter().map(|d| format!("Z/{d}")));
        parts.join(" x ")
    }

    pub fn zero(&self) -> HxCharacter {
        HxCharacter { free: vec![0; self.free.len()], torsion: vec![0; self.moduli.len()] }
    }

    /// Restriction of a torus weight to `H_x`. Panics on a rank mismatch.
    pub fn restrict(&self, w: &Weight) -> HxCharacter {
        assert_eq!(w.rank(), self.rank, "weight rank does not match the presentation");
        let dot = |row: &Vec<i64>| row.iter().zip(&w.0).map(|(a, b)| a * b).sum::<i64>();
        HxCharacter {
            free: self.free.iter().map(dot).collect(),
            torsion: self.torsion.iter().zip(&self.moduli).map(|(r, &d)| dot(r).rem_euclid(d)).collect(),
        }
    }

    pub fn add(&self, a: &HxCharacter, b: &HxCharacter) -> HxCharacter {
        HxCharacter {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .zip(&self.moduli)
                .map(|((x, y), &d)| (x + y).rem_euclid(d))
                .collect(),
        }
    }

    pub fn neg(&self, a: &HxCharacter) -> HxCharacter {
        HxCharacter {
            free: a.free.iter().map(|x| -x).collect(),
            torsion: a.torsion.iter().zip(&self.moduli).map(|(x, &d)| (-x).rem_euclid(d)).collect(),
        }
    }

    pub fn sub(&self, a: &HxCharacter, b: &HxCharacter) -> HxCharacter {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &HxCharacter, k: i64) -> HxCharacter {
        HxCharacter {
            free: a.free.iter().map(|x| x * k).collect(),
            torsion: a.torsion.iter().zip(&self.moduli).map(|(x, &d)| (x * k).rem_euclid(d)).collect(),
        }
    }

    pub fn sum<'a>(&self, xs: impl IntoIterator<Item = &'a HxCharacter>) -> HxCharacter {
        xs.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    pub fn contains(&self, c: &HxCharacter) -> bool {
        c.free.len() == self.free.len()
            && c.torsion.len() == self.moduli.len()
            && c.torsion.iter().zip(&self.moduli).all(|(&x, &d)| (0..d).contains(&x))
    }
}

/// A finite integer combination of `H_x` characters with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualCharacter {
    group: Arc<QuotientPresentation>,
    terms: BTreeMap<HxCharacter, i64>,
}

impl VirtualCharacter {
    pub fn zero(group: Arc<QuotientPresentation>) -> Self {
        VirtualCharacter { group, terms: BTreeMap::new() }
    }

    pub fn unit(group: Arc<QuotientPresentation>) -> Self {
        let z = group.zero();
        VirtualCharacter::monomial(group, z, 1)
    }

    pub fn monomial(group: Arc<QuotientPresentation>, c: HxCharacter, coeff: i64) -> Self {
        let mut v = VirtualCharacter::zero(group);
        v.add_term(c, coeff);
        v
    }

    pub fn group(&self) -> &Arc<QuotientPresentation> {
        &self.group
    }

    pub fn add_term(&mut self, c: HxCharacter, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(c) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, c: &HxCharacter) -> i64 {
        self.terms.get(c).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HxCharacter, i64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_group(&self, other: &VirtualCharacter) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || self.group == other.group {
            Ok(())
        } else {
            Err(Error::PresentationMismatch)
        }
    }

    pub fn plus(&self, other: &VirtualCharacter) -> Result<VirtualCharacter> {
        self.check_group(other)?;
        let mut out = self.clone();
        for (k, v) in other.terms() {
            out.add_term(k.clone(), v);
        }
        Ok(out)
    }

    pub fn scaled(&self, k: i64) -> VirtualCharacter {
        let mut out = VirtualCharacter::zero(self.group.clone());
        for (c, v) in self.terms() {
            out.add_term(c.clone(), v * k);
        }
        out
    }

    /// Tensor with the one-dimensional character `c`.
    pub fn shifted(&self, c: &HxCharacter) -> VirtualCharacter {
        let mut out = VirtualCharacter::zero(self.group.clone());
        for (k, v) in self.terms() {
            out.add_term(self.group.add(k, c), v);
        }
        out
    }
}

/// Product in the representation ring of `H_x`.
pub fn vchar_tensor(a: &VirtualCharacter, b: &VirtualCharacter) -> Result<VirtualCharacter> {
    a.check_group(b)?;
    let g = &a.group;
    let mut out = VirtualCharacter::zero(g.clone());
    for (x, u) in a.terms() {
        for (y, v) in b.terms() {
            out.add_term(g.add(x, y), u * v);
        }
    }
    Ok(out)
}
