//! Normalized Hochschild cochains `Hom(T(sĀ), A)` on words over the reduced
//! basis `x, ..., x^n`: the differential β, cup product, Connes' operator on
//! chains, the Δ-operator, and per-component coboundary matrices.
//!
//! A word `(x^{i_1}, ..., x^{i_q})` is stored as its exponent list. An
//! elementary cochain sends one word to one power `x^j`; its *weight* is
//! `Σ i_k - j`, and its internal degree is `2m·weight - q`. β and the cup
//! product preserve weight, so the complex splits into finite components
//! indexed by `(q, weight)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::algebra::{AlgebraElement, TruncatedPolyAlgebra};
use crate::arith::{homology_of_pair, solve, ExactMatrix, Homology, ModuleDescriptor, Scalar};
use crate::error::{Error, Result};

/// A word of reduced basis elements, by exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarWord(Vec<usize>);

impl BarWord {
    pub fn new(alg: &TruncatedPolyAlgebra, exponents: Vec<usize>) -> Result<Self> {
        if let Some(&e) = exponents.iter().find(|&&e| e == 0 || e > alg.n()) {
            return Err(Error::ExponentOutOfRange {
                exponent: e,
                n: alg.n(),
            });
        }
        Ok(BarWord(exponents))
    }

    pub fn exponents(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ |s x^i| = Σ (2mi - 1)`.
    pub fn suspended_degree(&self, alg: &TruncatedPolyAlgebra) -> i64 {
        suspended_sum(alg, &self.0)
    }
}

impl fmt::Display for BarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| format!("x^{e}")).collect();
        write!(f, "[{}]", parts.join("|"))
    }
}

fn suspended_sum(alg: &TruncatedPolyAlgebra, exps: &[usize]) -> i64 {
    exps.iter().map(|&i| alg.exponent_degree(i) - 1).sum()
}

fn sign(ring_one: &Scalar, exponent: i64) -> Scalar {
    if exponent.rem_euclid(2) == 0 {
        ring_one.clone()
    } else {
        ring_one.neg()
    }
}

pub(crate) fn word_count(n: usize, q: usize) -> usize {
    n.pow(q as u32)
}

pub(crate) fn word_index(n: usize, exps: &[usize]) -> usize {
    exps.iter().fold(0, |acc, &e| acc * n + (e - 1))
}

pub(crate) fn word_at(n: usize, q: usize, mut idx: usize) -> Vec<usize> {
    let mut w = vec![0; q];
    for slot in w.iter_mut().rev() {
        *slot = idx % n + 1;
        idx /= n;
    }
    w
}

/// Bigrading of a homogeneous cochain: word length and internal degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuspendedDegree {
    pub q: usize,
    pub internal: i64,
}

/// Normalized cochain of fixed word length, stored densely over all `n^q` words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    parent: TruncatedPolyAlgebra,
    word_length: usize,
    values: Vec<AlgebraElement>,
}

impl Cochain {
    pub fn zero(parent: &TruncatedPolyAlgebra, q: usize) -> Self {
        Cochain {
            parent: *parent,
            word_length: q,
            values: vec![parent.zero(); word_count(parent.n(), q)],
        }
    }

    pub fn from_fn<F>(parent: &TruncatedPolyAlgebra, q: usize, f: F) -> Self
    where
        F: Fn(&[usize]) -> AlgebraElement + Sync,
    {
        let n = parent.n();
        let values = (0..word_count(n, q))
            .into_par_iter()
            .map(|idx| f(&word_at(n, q, idx)))
            .collect();
        Cochain {
            parent: *parent,
            word_length: q,
            values,
        }
    }

    /// The cochain sending `word` to `x^j` and every other word to 0.
    pub fn elementary(parent: &TruncatedPolyAlgebra, word: &BarWord, j: usize) -> Result<Self> {
        if j > parent.n() {
            return Err(Error::ExponentOutOfRange {
                exponent: j,
                n: parent.n(),
            });
        }
        let mut c = Cochain::zero(parent, word.len());
        c.values[word_index(parent.n(), word.exponents())] = parent.x_pow(j);
        Ok(c)
    }

    /// The unit: the word-length-0 cochain with value 1.
    pub fn unit(parent: &TruncatedPolyAlgebra) -> Self {
        Cochain {
            parent: *parent,
            word_length: 0,
            values: vec![parent.one()],
        }
    }

    /// x̄, with x̄(1) = x.
    pub fn x_bar(parent: &TruncatedPolyAlgebra) -> Self {
        Cochain {
            parent: *parent,
            word_length: 0,
            values: vec![parent.x_pow(1)],
        }
    }

    /// ū, with ū(x^i) = i·x^i.
    pub fn u_bar(parent: &TruncatedPolyAlgebra) -> Self {
        let ring = parent.ring();
        Cochain::from_fn(parent, 1, |w| {
            parent.monomial(Scalar::from_i64(ring, w[0] as i64), w[0])
        })
    }

    /// v̄, with v̄(x^i) = i·x^{i-1}.
    pub fn v_bar(parent: &TruncatedPolyAlgebra) -> Self {
        let ring = parent.ring();
        Cochain::from_fn(parent, 1, |w| {
            parent.monomial(Scalar::from_i64(ring, w[0] as i64), w[0] - 1)
        })
    }

    /// t̄, with t̄(x^i, x^j) = x^{i+j-(n+1)} (zero when the exponent is negative).
    pub fn t_bar(parent: &TruncatedPolyAlgebra) -> Self {
        let n = parent.n();
        Cochain::from_fn(parent, 2, |w| {
            let s = w[0] + w[1];
            if s > n {
                parent.x_pow(s - n - 1)
            } else {
                parent.zero()
            }
        })
    }

    pub fn parent(&self) -> &TruncatedPolyAlgebra {
        &self.parent
    }

    pub fn word_length(&self) -> usize {
        self.word_length
    }

    pub fn eval(&self, exps: &[usize]) -> &AlgebraElement {
        debug_assert_eq!(exps.len(), self.word_length);
        &self.values[word_index(self.parent.n(), exps)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(AlgebraElement::is_zero)
    }

    /// Nonzero entries `(word, j, coefficient)` in word order.
    pub fn support(&self) -> Vec<(Vec<usize>, usize, Scalar)> {
        let n = self.parent.n();
        let mut out = Vec::new();
        for (idx, v) in self.values.iter().enumerate() {
            for (j, c) in v.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push((word_at(n, self.word_length, idx), j, c.clone()));
                }
            }
        }
        out
    }

    fn weights(&self) -> impl Iterator<Item = i64> + '_ {
        let n = self.parent.n();
        self.values.iter().enumerate().flat_map(move |(idx, v)| {
            let s: usize = word_at(n, self.word_length, idx).iter().sum();
            v.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, _)| s as i64 - j as i64)
        })
    }

    /// Common weight of all nonzero entries; `None` for zero or mixed cochains.
    pub fn weight(&self) -> Option<i64> {
        let mut it = self.weights();
        let w = it.next()?;
        it.all(|v| v == w).then_some(w)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.weights();
        match it.next() {
            None => true,
            Some(w) => it.all(|v| v == w),
        }
    }

    pub fn degree(&self) -> Option<SuspendedDegree> {
        self.weight().map(|w| SuspendedDegree {
            q: self.word_length,
            internal: 2 * self.parent.m() as i64 * w - self.word_length as i64,
        })
    }

    pub fn add(&self, o: &Cochain) -> Result<Cochain> {
        if self.parent != o.parent || self.word_length != o.word_length {
            return Err(Error::ParentMismatch);
        }
        let mut out = self.clone();
        for (a, b) in out.values.iter_mut().zip(&o.values) {
            a.add_assign(b);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Cochain) -> Result<Cochain> {
        self.add(&o.scale(&self.parent.ring().one().neg()))
    }

    pub fn scale(&self, c: &Scalar) -> Cochain {
        Cochain {
            parent: self.parent,
            word_length: self.word_length,
            values: self.values.iter().map(|v| v.scale(c)).collect(),
        }
    }

    /// `k`-fold cup power; the 0th power is the unit.
    pub fn power(&self, k: usize) -> Result<Cochain> {
        let mut acc = Cochain::unit(&self.parent);
        for _ in 0..k {
            acc = cup(&acc, self)?;
        }
        Ok(acc)
    }
}

/// The Hochschild differential.
///
/// `β(f)(a_1..a_{q+1}) = a_1 f(a_2..) + Σ_i (-1)^i f(.., a_i a_{i+1}, ..)
/// + (-1)^{q+1} f(a_1..a_q) a_{q+1}`; interior products beyond `x^n` vanish.
pub fn beta(f: &Cochain) -> Cochain {
    let alg = f.parent;
    let n = alg.n();
    let q = f.word_length;
    let one = alg.ring().one();
    let last_sign = sign(&one, q as i64 + 1);
    Cochain::from_fn(&alg, q + 1, |w| {
        let mut acc = f.eval(&w[1..]).shift(w[0]);
        let mut merged = Vec::with_capacity(q);
        for i in 0..q {
            let s = w[i] + w[i + 1];
            if s > n {
                continue;
            }
            merged.clear();
            merged.extend_from_slice(&w[..i]);
            merged.push(s);
            merged.extend_from_slice(&w[i + 2..]);
            acc.add_assign(&f.eval(&merged).scale(&sign(&one, i as i64 + 1)));
        }
        acc.add_assign(&f.eval(&w[..q]).shift(w[q]).scale(&last_sign));
        acc
    })
}

/// Cup product `(f∪g)(w_1 w_2) = (-1)^{|g|·Σ|s a|(w_1)} f(w_1)·g(w_2)`.
///
/// Since `|x|` is even, every cochain of word length `q` has degree ≡ q mod 2,
/// so the sign only needs the parity of `|g|`.
pub fn cup(f: &Cochain, g: &Cochain) -> Result<Cochain> {
    if f.parent != g.parent {
        return Err(Error::ParentMismatch);
    }
    let alg = f.parent;
    let (qf, qg) = (f.word_length, g.word_length);
    let one = alg.ring().one();
    Ok(Cochain::from_fn(&alg, qf + qg, |w| {
        let (w1, w2) = w.split_at(qf);
        let a = f.eval(w1);
        if a.is_zero() {
            return alg.zero();
        }
        let b = g.eval(w2);
        let s = sign(&one, qg as i64 * suspended_sum(&alg, w1));
        a.mul_unchecked(b).scale(&s)
    }))
}

/// The Δ-operator, dual to Connes' boundary, lowering word length by one.
///
/// `Δ(f)(a_1..a_q) = Σ_j (-1)^{|f| + |a^j|Σ|sa_k|} Σ_i ε_i <1, f(a_i..a_q, a_0, a_1..a_{i-1})> (a^j)^*`
/// with `a_0 = a^j = x^j`, `(a^j)^* = x^{n-j}`, `ε_0 = 1` and
/// `ε_i = (-1)^{(|sa_0| + Σ_{k<i}|sa_k|)·Σ_{k≥i}|sa_k|}` for `i ≥ 1`.
pub fn delta(f: &Cochain) -> Result<Cochain> {
    let alg = f.parent;
    if f.word_length == 0 {
        return Err(Error::InvalidParameters(
            "Δ needs word length at least 1".into(),
        ));
    }
    let q = f.word_length - 1;
    if f.is_zero() {
        return Ok(Cochain::zero(&alg, q));
    }
    let deg_f = f.degree().ok_or(Error::InhomogeneousCochain)?.internal;
    let n = alg.n();
    let one = alg.ring().one();
    Ok(Cochain::from_fn(&alg, q, |w| {
        let mut acc = alg.zero();
        let tail = suspended_sum(&alg, w);
        let mut rot = Vec::with_capacity(q + 1);
        // j = 0 puts the unit into the word, where normalized cochains vanish
        for j in 1..=n {
            let outer = deg_f + alg.exponent_degree(j) * tail;
            let s0 = alg.exponent_degree(j) - 1;
            let mut total = alg.ring().zero();
            for i in 0..=q {
                rot.clear();
                let eps = if i == 0 {
                    rot.push(j);
                    rot.extend_from_slice(w);
                    0
                } else {
                    rot.extend_from_slice(&w[i - 1..]);
                    rot.push(j);
                    rot.extend_from_slice(&w[..i - 1]);
                    let front = s0 + suspended_sum(&alg, &w[..i - 1]);
                    let back = suspended_sum(&alg, &w[i - 1..]);
                    front * back
                };
                let c = f.eval(&rot).top_coefficient();
                if !c.is_zero() {
                    total = total.add(&c.mul(&sign(&one, eps)));
                }
            }
            if !total.is_zero() {
                acc.add_assign(&alg.monomial(total.mul(&sign(&one, outer)), n - j));
            }
        }
        acc
    }))
}

/// Does β∘β vanish on every elementary cochain of word length `q` whose
/// weight lies in `weights` (all weights when `None`)?
pub fn beta_squared_is_zero(
    alg: &TruncatedPolyAlgebra,
    q: usize,
    weights: Option<RangeInclusive<i64>>,
) -> bool {
    let range = weights.unwrap_or_else(|| weight_range(alg, q));
    range.into_iter().all(|e| {
        let (_, m_out) = coboundary_matrices(alg, q, e);
        let next = coboundary_matrix(alg, q + 1, e);
        next.mul(&m_out).is_zero()
    })
}

/// Possible weights of nonzero cochains of word length `q`.
pub fn weight_range(alg: &TruncatedPolyAlgebra, q: usize) -> RangeInclusive<i64> {
    let n = alg.n() as i64;
    let q = q as i64;
    (q - n)..=(q * n)
}

/// Elementary cochains `(word, j)` spanning the component `(q, weight)`,
/// in word order then by `j`.
pub fn component_basis(alg: &TruncatedPolyAlgebra, q: usize, weight: i64) -> Vec<(BarWord, usize)> {
    let n = alg.n();
    let mut out = Vec::new();
    for idx in 0..word_count(n, q) {
        let w = word_at(n, q, idx);
        let j = w.iter().sum::<usize>() as i64 - weight;
        if (0..=n as i64).contains(&j) {
            out.push((BarWord(w), j as usize));
        }
    }
    out
}

fn basis_lookup(basis: &[(BarWord, usize)]) -> HashMap<(&[usize], usize), usize> {
    basis
        .iter()
        .enumerate()
        .map(|(i, (w, j))| ((w.exponents(), *j), i))
        .collect()
}

/// Sparse image of an elementary cochain under β.
fn beta_elementary(n: usize, w: &[usize], j: usize) -> Vec<(Vec<usize>, usize, i64)> {
    let q = w.len();
    let mut out = Vec::new();
    for i in 1..=n {
        if i + j <= n {
            let mut w2 = Vec::with_capacity(q + 1);
            w2.push(i);
            w2.extend_from_slice(w);
            out.push((w2, i + j, 1));
        }
    }
    for (k, &e) in w.iter().enumerate() {
        let s = if (k + 1) % 2 == 0 { 1 } else { -1 };
        for a in 1..e {
            let mut w2 = Vec::with_capacity(q + 1);
            w2.extend_from_slice(&w[..k]);
            w2.push(a);
            w2.push(e - a);
            w2.extend_from_slice(&w[k + 1..]);
            out.push((w2, j, s));
        }
    }
    let s = if (q + 1) % 2 == 0 { 1 } else { -1 };
    for i in 1..=n {
        if i + j <= n {
            let mut w2 = w.to_vec();
            w2.push(i);
            out.push((w2, i + j, s));
        }
    }
    out
}

fn coboundary_matrix(alg: &TruncatedPolyAlgebra, q: usize, weight: i64) -> ExactMatrix {
    let src = component_basis(alg, q, weight);
    let dst = component_basis(alg, q + 1, weight);
    let lookup = basis_lookup(&dst);
    let ring = alg.ring();
    let columns: Vec<Vec<(usize, i64)>> = src
        .par_iter()
        .map(|(w, j)| {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (w2, j2, s) in beta_elementary(alg.n(), w.exponents(), *j) {
                let row = lookup[&(w2.as_slice(), j2)];
                *acc.entry(row).or_default() += s;
            }
            acc.into_iter().filter(|&(_, v)| v != 0).collect()
        })
        .collect();
    let mut m = ExactMatrix::zeros(ring, dst.len(), src.len());
    for (c, col) in columns.into_iter().enumerate() {
        for (r, v) in col {
            m.set(r, c, Scalar::from_i64(ring, v));
        }
    }
    m
}

/// `(M_in, M_out)`: β into and out of the component `(q, weight)`, in the
/// elementary-cochain bases of `component_basis`.
pub fn coboundary_matrices(
    alg: &TruncatedPolyAlgebra,
    q: usize,
    weight: i64,
) -> (ExactMatrix, ExactMatrix) {
    let m_in = if q == 0 {
        ExactMatrix::zeros(alg.ring(), component_basis(alg, 0, weight).len(), 0)
    } else {
        coboundary_matrix(alg, q - 1, weight)
    };
    (m_in, coboundary_matrix(alg, q, weight))
}

/// Coordinates of the weight-`weight` part of `f` in `component_basis`.
pub fn component_vector(f: &Cochain, weight: i64) -> Vec<Scalar> {
    component_basis(&f.parent, f.word_length, weight)
        .iter()
        .map(|(w, j)| f.eval(w.exponents()).coeff(*j).clone())
        .collect()
}

pub fn cochain_from_vector(
    alg: &TruncatedPolyAlgebra,
    q: usize,
    weight: i64,
    v: &[Scalar],
) -> Cochain {
    let basis = component_basis(alg, q, weight);
    assert_eq!(basis.len(), v.len());
    let mut c = Cochain::zero(alg, q);
    for ((w, j), s) in basis.iter().zip(v) {
        let idx = word_index(alg.n(), w.exponents());
        let mono = alg.monomial(s.clone(), *j);
        c.values[idx].add_assign(&mono);
    }
    c
}

/// Homology of the component `(q, weight)` of the normalized complex.
pub fn bar_homology(alg: &TruncatedPolyAlgebra, q: usize, weight: i64) -> Result<Homology> {
    let (m_in, m_out) = coboundary_matrices(alg, q, weight);
    homology_of_pair(&m_in, &m_out)
}

/// `HH^q` from the bar complex, summed over all weights.
pub fn bar_hh_module(alg: &TruncatedPolyAlgebra, q: usize) -> Result<ModuleDescriptor> {
    let parts: Vec<ModuleDescriptor> = weight_range(alg, q)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|e| bar_homology(alg, q, e).map(|h| h.descriptor))
        .collect::<Result<_>>()?;
    Ok(parts
        .iter()
        .fold(ModuleDescriptor::zero(alg.ring()), |acc, d| {
            acc.direct_sum(d)
        }))
}

/// Is the homogeneous cochain `f` equal to `β(g)` for some `g`?
pub fn is_coboundary(f: &Cochain) -> Result<bool> {
    if !f.is_homogeneous() {
        return Err(Error::InhomogeneousCochain);
    }
    let Some(e) = f.weight() else { return Ok(true) };
    if f.word_length == 0 {
        return Ok(false);
    }
    let m_in = coboundary_matrix(&f.parent, f.word_length - 1, e);
    Ok(solve(&m_in, &component_vector(f, e)).is_some())
}

/// Formal sum of `a_0 ⊗ (a_1, ..., a_q)` with `a_0 = x^j` and reduced `a_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochschildChain {
    parent: TruncatedPolyAlgebra,
    word_length: usize,
    terms: BTreeMap<(usize, Vec<usize>), Scalar>,
}

impl HochschildChain {
    pub fn zero(parent: &TruncatedPolyAlgebra, q: usize) -> Self {
        HochschildChain {
            parent: *parent,
            word_length: q,
            terms: BTreeMap::new(),
        }
    }

    /// Adds `c · x^{a0} ⊗ word`.
    pub fn add_term(&mut self, a0: usize, word: &BarWord, c: Scalar) -> Result<()> {
        if word.len() != self.word_length {
            return Err(Error::InvalidParameters("word length mismatch".into()));
        }
        if a0 > self.parent.n() {
            return Err(Error::ExponentOutOfRange {
                exponent: a0,
                n: self.parent.n(),
            });
        }
        let key = (a0, word.exponents().to_vec());
        let v = self.terms.remove(&key).map_or(c.clone(), |old| old.add(&c));
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
        Ok(())
    }

    pub fn word_length(&self) -> usize {
        self.word_length
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &[usize], &Scalar)> {
        self.terms.iter().map(|((a, w), c)| (*a, w.as_slice(), c))
    }

    /// Connes' operator
    /// `B(a_0 ⊗ (a_1..a_q)) = Σ_i (-1)^{(Σ_{k<i}|sa_k|)(Σ_{k≥i}|sa_k|)} 1 ⊗ (a_i..a_q, a_0..a_{i-1})`.
    pub fn connes_b(&self) -> HochschildChain {
        let alg = self.parent;
        let one = alg.ring().one();
        let mut out = HochschildChain::zero(&alg, self.word_length + 1);
        for ((a0, w), c) in &self.terms {
            // a_0 = 1 would enter the word, where normalized chains vanish
            if *a0 == 0 {
                continue;
            }
            let mut full = Vec::with_capacity(w.len() + 1);
            full.push(*a0);
            full.extend_from_slice(w);
            for i in 0..full.len() {
                let front = suspended_sum(&alg, &full[..i]);
                let back = suspended_sum(&alg, &full[i..]);
                let mut rot = full[i..].to_vec();
                rot.extend_from_slice(&full[..i]);
                let coeff = c.mul(&sign(&one, front * back));
                out.add_term(0, &BarWord(rot), coeff)
                    .expect("valid rotation");
            }
        }
        out
    }
}
