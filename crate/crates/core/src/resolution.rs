//! The 2-periodic complex `P^*(A)`: `A -0-> A -(n+1)x^n-> A -0-> ...`, the
//! comparison map φ from the bar resolution and its transfer φ^* on cochains.
//!
//! Weights match the bar complex: `x^k` at level `2q` has weight
//! `q(n+1) - k`, and at level `2q+1` weight `q(n+1) + 1 - k`. φ^* preserves
//! them.

use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::algebra::{AlgebraElement, TruncatedPolyAlgebra};
use crate::arith::{
    homology_of_pair, ClassCoordinates, ExactMatrix, Homology, ModuleDescriptor, Scalar,
};
use crate::barcomplex::{beta, component_basis, weight_range, BarWord, Cochain};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodicComplex {
    parent: TruncatedPolyAlgebra,
}

impl PeriodicComplex {
    pub fn new(parent: &TruncatedPolyAlgebra) -> Self {
        PeriodicComplex { parent: *parent }
    }

    pub fn parent(&self) -> &TruncatedPolyAlgebra {
        &self.parent
    }

    fn base(&self, level: usize) -> i64 {
        let q = (level / 2) as i64;
        let n = self.parent.n() as i64;
        q * (n + 1) + (level % 2) as i64
    }

    /// Internal degree shift of `P^level`: `2m·q(n+1)`, plus `2m` on odd levels.
    pub fn shift(&self, level: usize) -> i64 {
        2 * self.parent.m() as i64 * self.base(level)
    }

    pub fn weight(&self, level: usize, k: usize) -> i64 {
        self.base(level) - k as i64
    }

    /// Exponent of the basis element of `P^level` with the given weight.
    pub fn exponent_of_weight(&self, level: usize, weight: i64) -> Option<usize> {
        let k = self.base(level) - weight;
        (0..=self.parent.n() as i64)
            .contains(&k)
            .then_some(k as usize)
    }

    /// Internal degree of `x^k` placed at `level`, in the cochain convention.
    pub fn internal_degree(&self, level: usize, k: usize) -> i64 {
        self.shift(level) - self.parent.exponent_degree(k) - level as i64
    }

    /// Matrix of `d: P^level -> P^{level+1}` in the basis `1, x, ..., x^n`.
    pub fn differential_matrix(&self, level: usize) -> ExactMatrix {
        let n = self.parent.n();
        let ring = self.parent.ring();
        let mut m = ExactMatrix::zeros(ring, n + 1, n + 1);
        if level % 2 == 1 {
            m.set(n, 0, Scalar::from_i64(ring, n as i64 + 1));
        }
        m
    }

    fn incoming(&self, level: usize) -> ExactMatrix {
        if level == 0 {
            ExactMatrix::zeros(self.parent.ring(), self.parent.n() + 1, 0)
        } else {
            self.differential_matrix(level - 1)
        }
    }

    pub fn homology(&self, level: usize) -> Homology {
        homology_of_pair(&self.incoming(level), &self.differential_matrix(level))
            .expect("d∘d = 0 in the periodic complex")
    }

    /// Homology of the weight-`weight` part of `P^level` (at most rank one).
    pub fn component(&self, level: usize, weight: i64) -> ModuleDescriptor {
        let ring = self.parent.ring();
        let Some(k) = self.exponent_of_weight(level, weight) else {
            return ModuleDescriptor::zero(ring);
        };
        let entry = |src_level: usize, src_k: Option<usize>| -> ExactMatrix {
            let dst = src_level + 1;
            let dk = self.exponent_of_weight(dst, weight);
            let d = self.differential_matrix(src_level);
            let mut m = ExactMatrix::zeros(ring, dk.map_or(0, |_| 1), src_k.map_or(0, |_| 1));
            if let (Some(a), Some(b)) = (src_k, dk) {
                m.set(0, 0, d.get(b, a).clone());
            }
            m
        };
        let d_out = entry(level, Some(k));
        let d_in = if level == 0 {
            ExactMatrix::zeros(ring, 1, 0)
        } else {
            entry(level - 1, self.exponent_of_weight(level - 1, weight))
        };
        homology_of_pair(&d_in, &d_out)
            .expect("periodic complex")
            .descriptor
    }
}

/// Element of `P^level = A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicElement {
    pub level: usize,
    pub value: AlgebraElement,
}

impl fmt::Display for PeriodicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ P^{}", self.value, self.level)
    }
}

pub fn periodic_differential(e: &PeriodicElement) -> PeriodicElement {
    let alg = e.value.parent();
    let value = if e.level % 2 == 0 {
        alg.zero()
    } else {
        let n = alg.n();
        let c = Scalar::from_i64(alg.ring(), n as i64 + 1);
        e.value.mul_unchecked(&alg.monomial(c, n))
    };
    PeriodicElement {
        level: e.level + 1,
        value,
    }
}

/// `HH^k` for `k = 0..=max_level`, read off the periodic complex.
pub fn hh_modules(parent: &TruncatedPolyAlgebra, max_level: usize) -> Vec<ModuleDescriptor> {
    let p = PeriodicComplex::new(parent);
    (0..=max_level).map(|k| p.homology(k).descriptor).collect()
}

/// One summand `1[w] x^j` of `φ_k(1⊗1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiTerm {
    pub word: BarWord,
    pub coefficient_exponent: usize,
}

/// All tuples `0 <= a_k < n` of length `len` with `Σ a_k <= n`.
fn phi_indices(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            let s: usize = t.iter().sum();
            for a in 0..n {
                if s + a <= n {
                    let mut t2 = t.clone();
                    t2.push(a);
                    next.push(t2);
                }
            }
        }
        out = next;
    }
    out
}

/// `φ_k(1⊗1)`: for `k = 2q` the words `[x^{n-a_1}|x|...|x^{n-a_q}|x]`, for
/// `k = 2q+1` the same with a leading `x`, each with right coefficient `x^{Σa}`.
pub fn phi_image(parent: &TruncatedPolyAlgebra, k: usize) -> Vec<PhiTerm> {
    let n = parent.n();
    phi_indices(n, k / 2)
        .into_iter()
        .map(|a| {
            let mut w = Vec::with_capacity(k);
            if k % 2 == 1 {
                w.push(1);
            }
            for &ai in &a {
                w.push(n - ai);
                w.push(1);
            }
            PhiTerm {
                word: BarWord::new(parent, w).expect("exponents in range"),
                coefficient_exponent: a.iter().sum(),
            }
        })
        .collect()
}

/// `φ^*(f)(1⊗1) = Σ x^{Σa} f(word)` over the terms of `φ_k(1⊗1)`.
pub fn transfer(f: &Cochain) -> PeriodicElement {
    let alg = f.parent();
    let mut value = alg.zero();
    for term in phi_image(alg, f.word_length()) {
        value.add_assign(
            &f.eval(term.word.exponents())
                .shift(term.coefficient_exponent),
        );
    }
    PeriodicElement {
        level: f.word_length(),
        value,
    }
}

/// A cochain on which φ^* fails to commute with the differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMapViolation {
    pub word: BarWord,
    pub exponent: usize,
    pub transfer_of_beta: PeriodicElement,
    pub d_of_transfer: PeriodicElement,
}

impl fmt::Display for ChainMapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "f = ({} -> x^{}): φ*(βf) = {} but d(φ*f) = {}",
            self.word, self.exponent, self.transfer_of_beta, self.d_of_transfer
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainMapReport {
    pub checked: usize,
    pub violations: Vec<ChainMapViolation>,
}

impl ChainMapReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `φ^*(βf) = d(φ^*f)` on every elementary cochain of word length
/// `<= max_word_length` whose weight lies in `weights` (all when `None`).
pub fn verify_chain_map(
    parent: &TruncatedPolyAlgebra,
    max_word_length: usize,
    weights: Option<RangeInclusive<i64>>,
) -> ChainMapReport {
    let mut cases = Vec::new();
    for q in 0..=max_word_length {
        for e in weight_range(parent, q) {
            if weights.as_ref().is_some_and(|r| !r.contains(&e)) {
                continue;
            }
            cases.extend(component_basis(parent, q, e));
        }
    }
    let mut violations: Vec<ChainMapViolation> = cases
        .par_iter()
        .filter_map(|(w, j)| {
            let f = Cochain::elementary(parent, w, *j).expect("valid elementary cochain");
            let lhs = transfer(&beta(&f));
            let rhs = periodic_differential(&transfer(&f));
            (lhs != rhs).then(|| ChainMapViolation {
                word: w.clone(),
                exponent: *j,
                transfer_of_beta: lhs,
                d_of_transfer: rhs,
            })
        })
        .collect();
    violations.sort_by(|a, b| {
        (a.word.len(), &a.word, a.exponent).cmp(&(b.word.len(), &b.word, b.exponent))
    });
    ChainMapReport {
        checked: cases.len(),
        violations,
    }
}

/// Homology of `P^*` up to a fixed level, with class coordinates.
#[derive(Clone, Debug)]
pub struct PeriodicHomology {
    levels: Vec<Homology>,
}

impl PeriodicHomology {
    pub fn compute(parent: &TruncatedPolyAlgebra, max_level: usize) -> Self {
        let p = PeriodicComplex::new(parent);
        PeriodicHomology {
            levels: (0..=max_level).map(|k| p.homology(k)).collect(),
        }
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn homology(&self, level: usize) -> Result<&Homology> {
        self.levels.get(level).ok_or(Error::LevelOutOfRange {
            level,
            max: self.max_level(),
        })
    }

    pub fn modules(&self) -> Vec<ModuleDescriptor> {
        self.levels.iter().map(|h| h.descriptor.clone()).collect()
    }

    /// Coordinates of the class of `e` modulo the incoming differential.
    pub fn class_of(&self, e: &PeriodicElement) -> Result<ClassCoordinates> {
        self.homology(e.level)?.class_of(e.value.coeffs())
    }
}
