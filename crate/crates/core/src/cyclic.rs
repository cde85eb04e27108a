//! The mixed complex `(P^*, d, B)`, negative cyclic cohomology of its
//! product-total complex, the Connes connecting map and the Lie bracket.
//!
//! `B: P^{2q+1} -> P^{2q}` sends `x^{k+1}` to `(-q(n+1) - n + k) x^k` and `1`
//! to `0`; it vanishes on even levels. The total complex in degree `N` is
//! `Π_{k>=0} P^{N+2k}` with component `d(a_L) + B(a_{L+2})` at level `L+1`;
//! it is reported in degree `-N`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::algebra::{AlgebraElement, TruncatedPolyAlgebra};
use crate::arith::{kernel_basis, rank, ExactMatrix, ModuleDescriptor, RingSpec, Scalar};
use crate::barcomplex::{cup, delta, Cochain};
use crate::bvalgebra::{main_theorem_algebra, uses_v_generator, BVElement, PresentedBVAlgebra};
use crate::error::{Error, Result};
use crate::resolution::{transfer, PeriodicComplex, PeriodicElement, PeriodicHomology};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MixedComplex {
    base: PeriodicComplex,
}

impl MixedComplex {
    pub fn new(parent: &TruncatedPolyAlgebra) -> Self {
        MixedComplex {
            base: PeriodicComplex::new(parent),
        }
    }

    pub fn base(&self) -> &PeriodicComplex {
        &self.base
    }

    pub fn parent(&self) -> &TruncatedPolyAlgebra {
        self.base.parent()
    }

    fn ring(&self) -> RingSpec {
        self.parent().ring()
    }

    /// `B(q)` coefficient on `x^{k+1}`, i.e. `-q(n+1) - n + k`.
    pub fn b_coefficient(&self, q: usize, k: usize) -> Scalar {
        let n = self.parent().n() as i64;
        Scalar::from_i64(self.ring(), -(q as i64) * (n + 1) - n + k as i64)
    }

    /// Matrix of `B: P^level -> P^{level-1}` (no rows when `level = 0`).
    pub fn b_matrix(&self, level: usize) -> ExactMatrix {
        let n = self.parent().n();
        let rows = if level == 0 { 0 } else { n + 1 };
        let mut m = ExactMatrix::zeros(self.ring(), rows, n + 1);
        if level % 2 == 1 {
            let q = level / 2;
            for k in 0..n {
                m.set(k, k + 1, self.b_coefficient(q, k));
            }
        }
        m
    }

    pub fn apply_b(&self, e: &PeriodicElement) -> Option<PeriodicElement> {
        if e.level == 0 {
            return None;
        }
        let v = self.b_matrix(e.level).mul_vec(e.value.coeffs());
        Some(PeriodicElement {
            level: e.level - 1,
            value: self.parent().element(v).expect("length n+1"),
        })
    }

    /// `d² = 0`, `B² = 0` and `dB + Bd = 0` on levels `0..=max_level`.
    pub fn check_axioms(&self, max_level: usize) -> bool {
        (0..=max_level).all(|l| {
            let d = |k| self.base.differential_matrix(k);
            let dd = d(l + 1).mul(&d(l)).is_zero();
            let bb = l < 2 || self.b_matrix(l - 1).mul(&self.b_matrix(l)).is_zero();
            let mixed = d(l).mul(&self.b_matrix(l + 1)).is_zero() && {
                let db = if l == 0 {
                    None
                } else {
                    Some(d(l - 1).mul(&self.b_matrix(l)))
                };
                let bd = self.b_matrix(l + 1).mul(&d(l));
                match db {
                    Some(db) => (0..db.rows())
                        .all(|i| (0..db.cols()).all(|j| db.get(i, j).add(bd.get(i, j)).is_zero())),
                    None => bd.is_zero(),
                }
            };
            dd && bb && mixed
        })
    }
}

/// Transfers the cochain-level Δ to `P^*` on representatives
/// `t̄^q ∪ v̄ ∪ x̄^j` of each odd-level cocycle `x^j`, for `q <= q_max`, and
/// confirms the closed form of `B` on homology classes.
pub fn derive_b_from_delta(
    n: usize,
    m: usize,
    ring: RingSpec,
    q_max: usize,
) -> Result<MixedComplex> {
    let alg = TruncatedPolyAlgebra::new(ring, n, m)?;
    let mc = MixedComplex::new(&alg);
    let hom = PeriodicHomology::compute(&alg, 2 * q_max + 1);
    let start = if uses_v_generator(ring, n) { 0 } else { 1 };
    let mut cases = Vec::new();
    for q in 0..=q_max {
        for j in start..=n {
            cases.push((q, j));
        }
    }
    cases.par_iter().try_for_each(|&(q, j)| -> Result<()> {
        let mut f = Cochain::t_bar(&alg).power(q)?;
        f = cup(&f, &Cochain::v_bar(&alg))?;
        f = cup(&f, &Cochain::x_bar(&alg).power(j)?)?;
        let source = transfer(&f);
        let expected_source = PeriodicElement {
            level: 2 * q + 1,
            value: alg.x_pow(j),
        };
        if hom.class_of(&source)? != hom.class_of(&expected_source)? {
            return Err(Error::TransferMismatch(format!(
                "representative of x^{j} at level {} transfers to {source}",
                2 * q + 1
            )));
        }
        let computed = transfer(&delta(&f)?);
        let closed = mc.apply_b(&expected_source).expect("odd level");
        if hom.class_of(&computed)? != hom.class_of(&closed)? {
            return Err(Error::TransferMismatch(format!(
                "B(x^{j}) at level {}: transferred {computed}, closed form {closed}",
                2 * q + 1
            )));
        }
        Ok(())
    })?;
    Ok(mc)
}

/// A (truncated) element of the total complex in level-degree `level`:
/// components at levels `level, level+2, ...` (negative levels omitted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeCyclicElement {
    pub level: i64,
    pub components: BTreeMap<usize, AlgebraElement>,
}

impl NegativeCyclicElement {
    pub fn zero(level: i64) -> Self {
        NegativeCyclicElement {
            level,
            components: BTreeMap::new(),
        }
    }

    /// Degree in the cohomological table, `-level`.
    pub fn table_degree(&self) -> i64 {
        -self.level
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(AlgebraElement::is_zero)
    }

    pub fn lowest(&self) -> Option<PeriodicElement> {
        let l = usize::try_from(self.level).ok()?;
        self.components.get(&l).map(|v| PeriodicElement {
            level: l,
            value: v.clone(),
        })
    }
}

impl fmt::Display for NegativeCyclicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(l, v)| format!("{v} @ P^{l}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0 in degree {}", self.table_degree())
        } else {
            write!(
                f,
                "({}) in degree {}",
                parts.join(", "),
                self.table_degree()
            )
        }
    }
}

/// Levels `>= 0` of the total complex in level-degree `level`, up to `cap`.
fn levels(level: i64, cap: i64) -> Vec<usize> {
    let first = if level >= 0 {
        level
    } else {
        level.rem_euclid(2)
    };
    (first..=cap).step_by(2).map(|l| l as usize).collect()
}

/// Top level of the window with `w` nonnegative columns in level-degree `level`.
fn window_cap(level: i64, w: usize) -> i64 {
    let first = if level >= 0 {
        level
    } else {
        level.rem_euclid(2)
    };
    first + 2 * (w as i64 - 1)
}

impl MixedComplex {
    fn require_field(&self) -> Result<()> {
        if self.ring().is_field() {
            Ok(())
        } else {
            Err(Error::UnsupportedRing(self.ring()))
        }
    }

    /// Total differential from level-degree `level` (cap `cap`) to `level+1` (cap `cap+1`).
    fn total_differential(&self, level: i64, cap: i64) -> ExactMatrix {
        let w = self.parent().n() + 1;
        let src = levels(level, cap);
        let dst = levels(level + 1, cap + 1);
        let mut m = ExactMatrix::zeros(self.ring(), dst.len() * w, src.len() * w);
        let pos = |l: usize| dst.iter().position(|&x| x == l);
        for (si, &l) in src.iter().enumerate() {
            let mut put = |target: usize, block: &ExactMatrix| {
                if let Some(di) = pos(target) {
                    for r in 0..w {
                        for c in 0..w {
                            let v = block.get(r, c);
                            if !v.is_zero() {
                                m.add_to(di * w + r, si * w + c, v);
                            }
                        }
                    }
                }
            };
            put(l + 1, &self.base.differential_matrix(l));
            if l >= 1 {
                put(l - 1, &self.b_matrix(l));
            }
        }
        m
    }

    fn to_vector(&self, e: &NegativeCyclicElement, cap: i64) -> Vec<Scalar> {
        let w = self.parent().n() + 1;
        let ls = levels(e.level, cap);
        let mut v = vec![self.ring().zero(); ls.len() * w];
        for (i, l) in ls.iter().enumerate() {
            if let Some(a) = e.components.get(l) {
                v[i * w..(i + 1) * w].clone_from_slice(a.coeffs());
            }
        }
        v
    }

    fn from_vector(&self, level: i64, cap: i64, v: &[Scalar]) -> NegativeCyclicElement {
        let w = self.parent().n() + 1;
        let components = levels(level, cap)
            .into_iter()
            .enumerate()
            .map(|(i, l)| {
                (
                    l,
                    self.parent()
                        .element(v[i * w..(i + 1) * w].to_vec())
                        .expect("block"),
                )
            })
            .collect();
        NegativeCyclicElement { level, components }
    }

    /// Image of the total differential into level-degree `level`, truncated at `cap`.
    fn boundaries(&self, level: i64, cap: i64) -> ExactMatrix {
        self.total_differential(level - 1, cap - 1)
    }

    /// Cocycles of the window of width `w` that survive into the window of
    /// width `w + 2`, as a basis of that image.
    fn stable_classes(&self, level: i64, w: usize) -> Vec<NegativeCyclicElement> {
        let cap = window_cap(level, w);
        let big = cap + 4;
        let mut span = self.boundaries(level, big);
        let mut base_rank = rank(&span);
        let mut out = Vec::new();
        for z in kernel_basis(&self.total_differential(level, cap)) {
            let e = self.from_vector(level, cap, &z);
            let col =
                ExactMatrix::from_columns(self.ring(), span.rows(), &[self.to_vector(&e, big)]);
            let candidate = span.hconcat(&col);
            let r = rank(&candidate);
            if r > base_rank {
                span = candidate;
                base_rank = r;
                out.push(e);
            }
        }
        out
    }

    /// `HC_-` in table degree `degree`, from a window of `window` columns,
    /// certified by agreement with the window of `window + 2` columns.
    pub fn hc_minus(&self, degree: i64, window: usize) -> Result<ModuleDescriptor> {
        Ok(ModuleDescriptor::free(
            self.ring(),
            self.hc_minus_basis(degree, window)?.len(),
        ))
    }

    /// Cocycle representatives of a basis of `HC_-` in table degree `degree`.
    pub fn hc_minus_basis(&self, degree: i64, window: usize) -> Result<Vec<NegativeCyclicElement>> {
        self.require_field()?;
        if window == 0 {
            return Err(Error::InvalidParameters("window must be positive".into()));
        }
        let level = -degree;
        let small = self.stable_classes(level, window);
        let large = self.stable_classes(level, window + 2);
        if small.len() != large.len() {
            return Err(Error::UnstableTruncation { degree, window });
        }
        Ok(small)
    }

    /// Does the element satisfy the cocycle condition on all stored levels?
    pub fn is_cocycle(&self, e: &NegativeCyclicElement) -> bool {
        let cap = e
            .components
            .keys()
            .max()
            .map_or(e.level.max(0), |&l| l as i64);
        let v = self.to_vector(e, cap);
        self.total_differential(e.level, cap)
            .mul_vec(&v)
            .iter()
            .all(Scalar::is_zero)
    }

    /// Is the cocycle a coboundary in a window `window` columns wider than its support?
    pub fn is_zero_class(&self, e: &NegativeCyclicElement, window: usize) -> Result<bool> {
        self.require_field()?;
        if !self.is_cocycle(e) {
            return Err(Error::NotACocycle);
        }
        let top = e
            .components
            .keys()
            .max()
            .map_or(e.level.max(0), |&l| l as i64);
        let cap = top.max(window_cap(e.level, 1)) + 2 * window as i64;
        let span = self.boundaries(e.level, cap);
        let col = ExactMatrix::from_columns(self.ring(), span.rows(), &[self.to_vector(e, cap)]);
        Ok(rank(&span.hconcat(&col)) == rank(&span))
    }

    /// `∂(a) = B(a_level)`, a Hochschild cocycle one level down.
    pub fn connecting_map(&self, e: &NegativeCyclicElement) -> Result<PeriodicElement> {
        if !self.is_cocycle(e) {
            return Err(Error::NotACocycle);
        }
        let zero_below = |level: i64| PeriodicElement {
            level: level.max(0) as usize,
            value: self.parent().zero(),
        };
        match e.lowest() {
            Some(a) if a.level >= 1 => Ok(self.apply_b(&a).expect("positive level")),
            _ => Ok(zero_below(e.level - 1)),
        }
    }

    /// `I`: a Hochschild cocycle placed in the lowest slot.
    pub fn include(&self, h: &PeriodicElement) -> NegativeCyclicElement {
        NegativeCyclicElement {
            level: h.level as i64,
            components: BTreeMap::from([(h.level, h.value.clone())]),
        }
    }

    /// `[a_1, a_2] = I(∂a_1 ∪ ∂a_2)`, the product taken in `HH^*`.
    pub fn lie_bracket(
        &self,
        e1: &NegativeCyclicElement,
        e2: &NegativeCyclicElement,
    ) -> Result<NegativeCyclicElement> {
        self.require_field()?;
        let p1 = self.connecting_map(e1)?;
        let p2 = self.connecting_map(e2)?;
        let level = e1.level + e2.level - 2;
        if p1.value.is_zero() || p2.value.is_zero() {
            return Ok(NegativeCyclicElement::zero(level));
        }
        let bv = main_theorem_algebra(self.ring(), self.parent().n(), self.parent().m())?;
        let prod = to_presented(&bv, &p1)?.multiply(&to_presented(&bv, &p2)?)?;
        let alg = *self.parent();
        let mut value = alg.zero();
        for (mono, c) in prod.terms() {
            let p = crate::bvalgebra::periodic_image(&alg, mono, c).ok_or(Error::NotACocycle)?;
            if p.level as i64 != level {
                return Err(Error::InhomogeneousElement);
            }
            value.add_assign(&p.value);
        }
        Ok(self.include(&PeriodicElement {
            level: level as usize,
            value,
        }))
    }
}

/// Hochschild cocycle of `P^*` as an element of the presented algebra.
pub fn to_presented(bv: &PresentedBVAlgebra, p: &PeriodicElement) -> Result<BVElement> {
    let v = bv.generators[1].name == "v";
    let (q, odd) = ((p.level / 2) as u32, p.level % 2 == 1);
    let mut out = bv.zero();
    for (k, c) in p.value.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = match (odd, v) {
            (false, _) => [k as u32, 0, q],
            (true, true) => [k as u32, 1, q],
            (true, false) if k >= 1 => [k as u32 - 1, 1, q],
            _ => return Err(Error::NotACocycle),
        };
        out = out.add(&bv.term(e, c.clone()))?;
    }
    Ok(out)
}

/// Dimension of `HC_-` per table degree.
pub fn hc_minus_table(
    mc: &MixedComplex,
    degrees: RangeInclusive<i64>,
    window: usize,
) -> Result<Vec<(i64, usize)>> {
    let degs: Vec<i64> = degrees.collect();
    degs.par_iter()
        .map(|&d| Ok((d, mc.hc_minus(d, window)?.free_rank)))
        .collect()
}

/// Expected dimension: `1` in even degrees `>= 0`, `n` in odd degrees `<= -1`, else `0`.
pub fn expected_hc_minus_dimension(n: usize, degree: i64) -> usize {
    match (degree.rem_euclid(2), degree >= 0) {
        (0, true) => 1,
        (1, false) => n,
        _ => 0,
    }
}

/// A pair of basis classes whose bracket is a nonzero class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketWitness {
    pub degrees: (i64, i64),
    pub indices: (usize, usize),
    pub value: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BracketScan {
    pub pairs: usize,
    pub nonzero: Vec<BracketWitness>,
}

/// Brackets of all pairs of basis classes with degrees in `degrees`.
pub fn scan_lie_bracket(
    mc: &MixedComplex,
    degrees: RangeInclusive<i64>,
    window: usize,
) -> Result<BracketScan> {
    let bases: Vec<(i64, Vec<NegativeCyclicElement>)> = degrees
        .map(|d| Ok((d, mc.hc_minus_basis(d, window)?)))
        .collect::<Result<_>>()?;
    let mut jobs = Vec::new();
    for (d1, b1) in &bases {
        for (d2, b2) in &bases {
            for i in 0..b1.len() {
                for j in 0..b2.len() {
                    jobs.push((*d1, *d2, &b1[i], &b2[j], i, j));
                }
            }
        }
    }
    let results: Vec<Option<BracketWitness>> = jobs
        .par_iter()
        .map(|&(d1, d2, a, b, i, j)| {
            let br = mc.lie_bracket(a, b)?;
            Ok((!mc.is_zero_class(&br, window)?).then(|| BracketWitness {
                degrees: (d1, d2),
                indices: (i, j),
                value: br.to_string(),
            }))
        })
        .collect::<Result<_>>()?;
    Ok(BracketScan {
        pairs: jobs.len(),
        nonzero: results.into_iter().flatten().collect(),
    })
}

/// Ranks around one stretch `HH^L -I-> HC^L -π-> HC^{L+2} -∂-> HH^{L+1} -I-> HC^{L+1}`
/// of the Connes sequence, in level-degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnesSpot {
    pub level: i64,
    pub hc: usize,
    pub hc_shifted: usize,
    pub hh_next: usize,
    pub rank_i: usize,
    pub rank_pi: usize,
    pub rank_partial: usize,
    pub rank_i_next: usize,
}

impl ConnesSpot {
    pub fn exact(&self) -> bool {
        self.hc == self.rank_i + self.rank_pi
            && self.hc_shifted == self.rank_pi + self.rank_partial
            && self.hh_next == self.rank_partial + self.rank_i_next
    }
}

impl MixedComplex {
    fn class_rank(&self, level: i64, elems: &[NegativeCyclicElement], window: usize) -> usize {
        let top = elems
            .iter()
            .flat_map(|e| e.components.keys().copied())
            .max()
            .map_or(window_cap(level, 1), |l| l as i64);
        let cap = top.max(window_cap(level, 1)) + 2 * window as i64;
        let span = self.boundaries(level, cap);
        let cols: Vec<Vec<Scalar>> = elems.iter().map(|e| self.to_vector(e, cap)).collect();
        let m = ExactMatrix::from_columns(self.ring(), span.rows(), &cols);
        rank(&span.hconcat(&m)) - rank(&span)
    }

    fn i_rank(&self, level: i64, window: usize) -> usize {
        let Ok(l) = usize::try_from(level) else {
            return 0;
        };
        let h = self.base.homology(l);
        let elems: Vec<NegativeCyclicElement> = h
            .free_generators
            .iter()
            .map(|g| {
                self.include(&PeriodicElement {
                    level: l,
                    value: self.parent().element(g.clone()).expect("cycle"),
                })
            })
            .collect();
        self.class_rank(level, &elems, window)
    }

    /// Exactness check of the Connes sequence at level-degree `level`.
    pub fn connes_spot(&self, level: i64, window: usize) -> Result<ConnesSpot> {
        self.require_field()?;
        let basis = self.hc_minus_basis(-level, window)?;
        let shifted_basis = self.hc_minus_basis(-(level + 2), window)?;
        let projected: Vec<NegativeCyclicElement> = basis
            .iter()
            .map(|e| {
                let mut c = e.components.clone();
                if level >= 0 {
                    c.remove(&(level as usize));
                }
                NegativeCyclicElement {
                    level: level + 2,
                    components: c,
                }
            })
            .collect();
        let next = (level + 1).max(0) as usize;
        let (hh_next, rank_partial) = if level + 1 < 0 {
            (0, 0)
        } else {
            let d_in = if next == 0 {
                ExactMatrix::zeros(self.ring(), self.parent().n() + 1, 0)
            } else {
                self.base.differential_matrix(next - 1)
            };
            let imgs: Vec<Vec<Scalar>> = shifted_basis
                .iter()
                .map(|e| Ok(self.connecting_map(e)?.value.coeffs().to_vec()))
                .collect::<Result<_>>()?;
            let m = ExactMatrix::from_columns(self.ring(), self.parent().n() + 1, &imgs);
            (
                self.base.homology(next).descriptor.free_rank,
                rank(&d_in.hconcat(&m)) - rank(&d_in),
            )
        };
        Ok(ConnesSpot {
            level,
            hc: basis.len(),
            hc_shifted: shifted_basis.len(),
            hh_next,
            rank_i: self.i_rank(level, window),
            rank_pi: self.class_rank(level + 2, &projected, window),
            rank_partial,
            rank_i_next: self.i_rank(level + 1, window),
        })
    }
}
