//! Presented BV algebras on three generators: monomial normal forms, a
//! closed-form Δ given by an affine rule table, the bracket derived from Δ,
//! and checks of the BV identities and of agreement with the bar complex.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::TruncatedPolyAlgebra;
use crate::arith::{ModuleDescriptor, RingSpec, Scalar};
use crate::barcomplex::{cup, delta, Cochain};
use crate::error::{Error, Result};
use crate::resolution::{transfer, PeriodicElement, PeriodicHomology};

/// Exponents of the three generators.
pub type Monomial = [u32; 3];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

/// `order · m = 0` for every monomial `m` divisible by `pattern`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionRelation {
    pub pattern: Monomial,
    pub order: u64,
}

/// `g^2 = coefficient · target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareRewrite {
    pub generator: usize,
    pub coefficient: i64,
    pub target: Monomial,
}

/// `constant + Σ linear[i]·e[i]` on an exponent vector `e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineCoefficient {
    pub constant: i64,
    pub linear: [i64; 3],
}

impl AffineCoefficient {
    pub fn eval(&self, e: &Monomial) -> i64 {
        self.constant + (0..3).map(|i| self.linear[i] * e[i] as i64).sum::<i64>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaTerm {
    pub coefficient: AffineCoefficient,
    pub shift: [i32; 3],
}

/// Applies to the monomials whose exponent equals `exact[i]` wherever set.
/// Monomials matched by no rule have Δ = 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaRule {
    pub exact: [Option<u32>; 3],
    pub terms: Vec<DeltaTerm>,
}

impl DeltaRule {
    fn matches(&self, e: &Monomial) -> bool {
        (0..3).all(|i| self.exact[i].is_none_or(|v| v == e[i]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub name: String,
    pub ring: RingSpec,
    pub generators: [Generator; 3],
    /// Largest exponent allowed per generator.
    pub caps: [Option<u32>; 3],
    pub zero_patterns: Vec<Monomial>,
    pub torsion: Vec<TorsionRelation>,
    pub square_rewrite: Option<SquareRewrite>,
    pub delta_rules: Vec<DeltaRule>,
}

/// Shared handle on a validated presentation.
#[derive(Clone, Debug)]
pub struct PresentedBVAlgebra(Arc<Presentation>);

impl PartialEq for PresentedBVAlgebra {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || *self.0 == *o.0
    }
}

impl Eq for PresentedBVAlgebra {}

impl Deref for PresentedBVAlgebra {
    type Target = Presentation;

    fn deref(&self) -> &Presentation {
        &self.0
    }
}

fn divides(pattern: &Monomial, e: &Monomial) -> bool {
    (0..3).all(|i| pattern[i] <= e[i])
}

fn add_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

impl PresentedBVAlgebra {
    pub fn new(p: Presentation) -> Result<Self> {
        let bad = |s: String| Err(Error::Presentation(s));
        let names: Vec<&str> = p.generators.iter().map(|g| g.name.as_str()).collect();
        if names.iter().any(|s| s.is_empty())
            || names[0] == names[1]
            || names[0] == names[2]
            || names[1] == names[2]
        {
            return bad(format!(
                "generator names must be distinct and nonempty: {names:?}"
            ));
        }
        if let Some(t) = p.torsion.iter().find(|t| t.order < 2) {
            return bad(format!("torsion order {} must be at least 2", t.order));
        }
        let deg = |e: &[i64; 3]| (0..3).map(|i| e[i] * p.generators[i].degree).sum::<i64>();
        if let Some(sq) = &p.square_rewrite {
            if sq.generator > 2 || sq.target[sq.generator] != 0 {
                return bad("square rewrite must remove its generator".into());
            }
            let t = sq.target.map(i64::from);
            if deg(&t) != 2 * p.generators[sq.generator].degree {
                return bad("square rewrite is not homogeneous".into());
            }
        }
        for (i, g) in p.generators.iter().enumerate() {
            let squared_away = p.caps[i].is_some_and(|c| c <= 1)
                || p.square_rewrite.as_ref().is_some_and(|s| s.generator == i)
                || p.ring.characteristic() == 2;
            if g.degree % 2 != 0 && !squared_away {
                return bad(format!(
                    "odd generator {} needs {}^2 = 0 or a rewrite",
                    g.name, g.name
                ));
            }
        }
        for rule in &p.delta_rules {
            for term in &rule.terms {
                if deg(&term.shift.map(i64::from)) != 1 {
                    return bad(format!(
                        "Δ rule term {:?} does not raise degree by one",
                        term.shift
                    ));
                }
            }
        }
        Ok(PresentedBVAlgebra(Arc::new(p)))
    }

    pub fn presentation(&self) -> &Presentation {
        &self.0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&*self.0).expect("presentation serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: Presentation =
            serde_json::from_str(s).map_err(|e| Error::Presentation(e.to_string()))?;
        Self::new(p)
    }

    pub fn ring(&self) -> RingSpec {
        self.0.ring
    }

    pub fn monomial_degree(&self, e: &Monomial) -> i64 {
        (0..3)
            .map(|i| e[i] as i64 * self.generators[i].degree)
            .sum()
    }

    /// Rewrites `c·e` to normal form; `None` when it vanishes.
    pub fn normal_term(&self, mut e: Monomial, mut c: Scalar) -> Option<(Monomial, Scalar)> {
        if let Some(sq) = &self.square_rewrite {
            while e[sq.generator] >= 2 {
                e[sq.generator] -= 2;
                e = add_monomials(&e, &sq.target);
                c = c.mul_i64(sq.coefficient);
            }
        }
        if c.is_zero() {
            return None;
        }
        if (0..3).any(|i| self.caps[i].is_some_and(|cap| e[i] > cap)) {
            return None;
        }
        if self.zero_patterns.iter().any(|z| divides(z, &e)) {
            return None;
        }
        for t in self.torsion.iter().filter(|t| divides(&t.pattern, &e)) {
            let order = Scalar::from_i64(self.ring(), t.order as i64);
            if order.is_unit() && self.ring().is_field() {
                return None;
            }
            c = c.reduce_mod(t.order);
        }
        (!c.is_zero()).then_some((e, c))
    }

    pub fn is_normal(&self, e: &Monomial) -> bool {
        let one = self.ring().one();
        self.normal_term(*e, one.clone()) == Some((*e, one))
    }

    /// Additive order of the normal monomial `e` (`None` for free).
    pub fn torsion_order(&self, e: &Monomial) -> Option<u64> {
        if self.ring().is_field() {
            return None;
        }
        self.torsion
            .iter()
            .filter(|t| divides(&t.pattern, e))
            .map(|t| t.order)
            .min()
    }

    pub fn zero(&self) -> BVElement {
        BVElement {
            parent: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn term(&self, e: Monomial, c: Scalar) -> BVElement {
        let mut out = self.zero();
        out.add_term(e, c);
        out
    }

    pub fn monomial(&self, e: Monomial) -> BVElement {
        self.term(e, self.ring().one())
    }

    pub fn one(&self) -> BVElement {
        self.monomial([0, 0, 0])
    }

    pub fn generator(&self, i: usize) -> BVElement {
        let mut e = [0; 3];
        e[i] = 1;
        self.monomial(e)
    }

    pub fn element(&self, terms: &[(Monomial, i64)]) -> BVElement {
        let mut out = self.zero();
        for (e, c) in terms {
            out.add_term(*e, Scalar::from_i64(self.ring(), *c));
        }
        out
    }

    fn exponent_bounds(&self, free_cap: u32) -> [u32; 3] {
        [0, 1, 2].map(|i| self.caps[i].unwrap_or(free_cap))
    }

    /// Normal monomials with uncapped exponents at most `free_cap`.
    pub fn normal_monomials(&self, free_cap: u32) -> Vec<Monomial> {
        let b = self.exponent_bounds(free_cap);
        let mut out = Vec::new();
        for e2 in 0..=b[2] {
            for e1 in 0..=b[1] {
                for e0 in 0..=b[0] {
                    let e = [e0, e1, e2];
                    if self.is_normal(&e) {
                        out.push(e);
                    }
                }
            }
        }
        out
    }

    /// Normal monomials of total degree `d`.
    pub fn basis_in_degree(&self, d: i64) -> Vec<Monomial> {
        let capped: i64 = (0..3)
            .filter_map(|i| self.caps[i].map(|c| c as i64 * self.generators[i].degree.abs()))
            .sum();
        let free_cap = (0..3)
            .filter(|&i| self.caps[i].is_none() && self.generators[i].degree != 0)
            .map(|i| (d.abs() + capped) / self.generators[i].degree.abs())
            .max()
            .unwrap_or(0);
        self.normal_monomials(free_cap as u32)
            .into_iter()
            .filter(|e| self.monomial_degree(e) == d)
            .collect()
    }

    /// Additive structure of the degree-`d` part.
    pub fn graded_piece(&self, d: i64) -> ModuleDescriptor {
        let mut out = ModuleDescriptor::zero(self.ring());
        for e in self.basis_in_degree(d) {
            let summand = match self.torsion_order(&e) {
                Some(o) => ModuleDescriptor {
                    ring: self.ring(),
                    free_rank: 0,
                    torsion: vec![o.into()],
                },
                None => ModuleDescriptor::free(self.ring(), 1),
            };
            out = out.direct_sum(&summand);
        }
        out
    }

    /// Defining relations in readable form.
    pub fn relations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..3 {
            if let Some(c) = self.caps[i] {
                let mut e = [0; 3];
                e[i] = c + 1;
                out.push(self.format_monomial(&e));
            }
        }
        for z in &self.zero_patterns {
            out.push(self.format_monomial(z));
        }
        for t in &self.torsion {
            out.push(format!("{}*{}", t.order, self.format_monomial(&t.pattern)));
        }
        if let Some(sq) = &self.square_rewrite {
            let g = &self.generators[sq.generator].name;
            let c = Scalar::from_i64(self.ring(), sq.coefficient);
            if c.is_zero() {
                out.push(format!("{g}^2"));
            } else {
                let coeff = if c.is_one() {
                    String::new()
                } else {
                    format!("{c}*")
                };
                out.push(format!(
                    "{g}^2 - {coeff}{}",
                    self.format_monomial(&sq.target)
                ));
            }
        }
        out
    }

    /// Monomial as `t^k*u*x^l` (generators printed last to first).
    pub fn format_monomial(&self, e: &Monomial) -> String {
        let parts: Vec<String> = [2, 1, 0]
            .into_iter()
            .filter(|&i| e[i] > 0)
            .map(|i| {
                let g = &self.generators[i].name;
                if e[i] == 1 {
                    g.clone()
                } else {
                    format!("{g}^{}", e[i])
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    fn product_sign(&self, a: &Monomial, b: &Monomial) -> bool {
        let odd = |i: usize| self.generators[i].degree % 2 != 0;
        let mut s = 0u32;
        for i in 0..3 {
            for j in i + 1..3 {
                if odd(i) && odd(j) {
                    s += b[i] * a[j];
                }
            }
        }
        s % 2 == 1
    }

    fn delta_monomial(&self, e: &Monomial, c: &Scalar, out: &mut BVElement) {
        let Some(rule) = self.delta_rules.iter().find(|r| r.matches(e)) else {
            return;
        };
        for term in &rule.terms {
            let shifted: Option<Vec<u32>> = (0..3)
                .map(|i| u32::try_from(e[i] as i64 + term.shift[i] as i64).ok())
                .collect();
            let Some(s) = shifted else { continue };
            let k = term.coefficient.eval(e);
            out.add_term([s[0], s[1], s[2]], c.mul_i64(k));
        }
    }
}

/// Element of a presented algebra: normal monomials with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BVElement {
    parent: PresentedBVAlgebra,
    terms: BTreeMap<Monomial, Scalar>,
}

impl BVElement {
    pub fn parent(&self) -> &PresentedBVAlgebra {
        &self.parent
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &Monomial) -> Scalar {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.parent.ring().zero())
    }

    fn add_term(&mut self, e: Monomial, c: Scalar) {
        let Some((e, c)) = self.parent.normal_term(e, c) else {
            return;
        };
        let sum = match self.terms.remove(&e) {
            Some(old) => old.add(&c),
            None => c,
        };
        if let Some((e, c)) = self.parent.normal_term(e, sum) {
            self.terms.insert(e, c);
        }
    }

    fn check(&self, o: &BVElement) -> Result<()> {
        if self.parent == o.parent {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    pub fn add(&self, o: &BVElement) -> Result<BVElement> {
        self.check(o)?;
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &BVElement) -> Result<BVElement> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> BVElement {
        self.scale(&self.parent.ring().one().neg())
    }

    pub fn scale(&self, k: &Scalar) -> BVElement {
        let mut out = self.parent.zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c.mul(k));
        }
        out
    }

    pub fn scale_i64(&self, k: i64) -> BVElement {
        self.scale(&Scalar::from_i64(self.parent.ring(), k))
    }

    pub fn multiply(&self, o: &BVElement) -> Result<BVElement> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn mul_unchecked(&self, o: &BVElement) -> BVElement {
        let p = &self.parent;
        let mut out = p.zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let mut c = ca.mul(cb);
                if p.product_sign(a, b) {
                    c = c.neg();
                }
                out.add_term(add_monomials(a, b), c);
            }
        }
        out
    }

    pub fn power(&self, k: u32) -> BVElement {
        (0..k).fold(self.parent.one(), |acc, _| acc.mul_unchecked(self))
    }

    /// Common degree of all terms; `None` for zero or mixed elements.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|e| self.parent.monomial_degree(e));
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }
}

impl fmt::Display for BVElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mono = self.parent.format_monomial(e);
            let (neg, mag) = match c {
                Scalar::Int(v) if v.sign() == num_bigint::Sign::Minus => (true, Scalar::Int(-v)),
                Scalar::Rat(v) if v < &num_rational::BigRational::from_integer(0.into()) => {
                    (true, Scalar::Rat(-v))
                }
                _ => (false, c.clone()),
            };
            let sep = match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let body = if mag.is_one() {
                mono
            } else if mono == "1" {
                mag.to_string()
            } else {
                format!("{mag}*{mono}")
            };
            write!(f, "{sep}{body}")?;
        }
        Ok(())
    }
}

/// Linear extension of the parent's Δ rule table.
pub fn delta_closed_form(a: &BVElement) -> BVElement {
    let p = &a.parent;
    let mut out = p.zero();
    for (e, c) in &a.terms {
        p.delta_monomial(e, c, &mut out);
    }
    out
}

fn sign_pow(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `{a,b} = (-1)^{|a|}Δ(ab) - (-1)^{|a|}Δ(a)b - aΔ(b)` on homogeneous inputs.
pub fn gerstenhaber_bracket(a: &BVElement, b: &BVElement) -> Result<BVElement> {
    a.check(b)?;
    if a.is_zero() || b.is_zero() {
        return Ok(a.parent.zero());
    }
    let da = a.degree().ok_or(Error::InhomogeneousElement)?;
    b.degree().ok_or(Error::InhomogeneousElement)?;
    let s = sign_pow(da);
    let first = delta_closed_form(&a.mul_unchecked(b)).scale_i64(s);
    let second = delta_closed_form(a).mul_unchecked(b).scale_i64(s);
    let third = a.mul_unchecked(&delta_closed_form(b));
    first.sub(&second)?.sub(&third)
}

fn delta_rule_u(n: i64) -> DeltaRule {
    DeltaRule {
        exact: [None, Some(1), None],
        terms: vec![DeltaTerm {
            coefficient: AffineCoefficient {
                constant: -n,
                linear: [1, 0, -(n + 1)],
            },
            shift: [0, -1, 0],
        }],
    }
}

fn delta_rule_v() -> DeltaRule {
    DeltaRule {
        exact: [None, Some(1), None],
        terms: vec![DeltaTerm {
            coefficient: AffineCoefficient {
                constant: 0,
                linear: [1, 0, 0],
            },
            shift: [-1, -1, 0],
        }],
    }
}

/// Whether the answer over `ring` is presented with `v` (of degree `2m-1`)
/// in place of `u`: exactly when `p | n+1` in characteristic `p`.
pub fn uses_v_generator(ring: RingSpec, n: usize) -> bool {
    let p = ring.characteristic();
    p != 0 && (n as u64 + 1) % p == 0
}

fn gen(name: &str, degree: i64) -> Generator {
    Generator {
        name: name.into(),
        degree,
    }
}

/// `HH^*(R[x]/(x^{n+1}))` with `|x| = 2m`, as a presented BV algebra.
pub fn main_theorem_algebra(ring: RingSpec, n: usize, m: usize) -> Result<PresentedBVAlgebra> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameters(format!(
            "need n, m >= 1 (got n={n}, m={m})"
        )));
    }
    let (ni, mi) = (n as i64, m as i64);
    let nu = n as u32;
    let t_deg = 2 * mi * ni + 2 * (mi - 1);
    let name = format!("HH({ring}, n={n}, m={m})");
    let p = if uses_v_generator(ring, n) {
        let two = ring.characteristic() == 2;
        Presentation {
            name,
            ring,
            generators: [gen("x", -2 * mi), gen("v", 2 * mi - 1), gen("t", t_deg)],
            caps: [Some(nu), if two { None } else { Some(1) }, None],
            zero_patterns: vec![],
            torsion: vec![],
            square_rewrite: two.then(|| SquareRewrite {
                generator: 1,
                coefficient: (ni + 1) / 2,
                target: [nu - 1, 0, 1],
            }),
            delta_rules: vec![delta_rule_v()],
        }
    } else {
        let (zero_patterns, torsion) = if ring.is_field() {
            (vec![[nu, 1, 0], [nu, 0, 1]], vec![])
        } else {
            (
                vec![[nu, 1, 0]],
                vec![TorsionRelation {
                    pattern: [nu, 0, 1],
                    order: n as u64 + 1,
                }],
            )
        };
        Presentation {
            name,
            ring,
            generators: [gen("x", -2 * mi), gen("u", -1), gen("t", t_deg)],
            caps: [Some(nu), Some(1), None],
            zero_patterns,
            torsion,
            square_rewrite: None,
            delta_rules: vec![delta_rule_u(ni)],
        }
    };
    PresentedBVAlgebra::new(p)
}

/// `ℍ_*(LS²)`: `R[a,b,v]/(a², b², ab, 2av)` with `|a| = -2, |b| = -1, |v| = 2`,
/// `Δ(v^k b) = (2k+1)v^k + a v^{k+1}` and Δ zero on the other monomials.
pub fn menichi_loop_s2_over(ring: RingSpec) -> PresentedBVAlgebra {
    let (zero_patterns, torsion) = if ring.is_field() && ring.characteristic() != 2 {
        (vec![[1, 1, 0], [1, 0, 1]], vec![])
    } else {
        (
            vec![[1, 1, 0]],
            vec![TorsionRelation {
                pattern: [1, 0, 1],
                order: 2,
            }],
        )
    };
    let rule = DeltaRule {
        exact: [Some(0), Some(1), None],
        terms: vec![
            DeltaTerm {
                coefficient: AffineCoefficient {
                    constant: 1,
                    linear: [0, 0, 2],
                },
                shift: [0, -1, 0],
            },
            DeltaTerm {
                coefficient: AffineCoefficient {
                    constant: 1,
                    linear: [0, 0, 0],
                },
                shift: [1, -1, 1],
            },
        ],
    };
    PresentedBVAlgebra::new(Presentation {
        name: format!("H(LS^2; {ring})"),
        ring,
        generators: [gen("a", -2), gen("b", -1), gen("v", 2)],
        caps: [Some(1), Some(1), None],
        zero_patterns,
        torsion,
        square_rewrite: None,
        delta_rules: vec![rule],
    })
    .expect("built-in presentation is valid")
}

pub fn menichi_loop_s2() -> PresentedBVAlgebra {
    menichi_loop_s2_over(RingSpec::Integers)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Identity {
    DeltaSquared,
    SevenTerm,
    Antisymmetry,
    Leibniz,
    Jacobi,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityViolation {
    pub identity: Identity,
    pub witness: Vec<Monomial>,
    pub residual: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub monomials: usize,
    pub triples: usize,
    pub violations: Vec<IdentityViolation>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, id: Identity) -> usize {
        self.violations.iter().filter(|v| v.identity == id).count()
    }
}

fn seven_term(a: &BVElement, b: &BVElement, c: &BVElement) -> BVElement {
    let d = delta_closed_form;
    let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
    let abc = a.mul_unchecked(b).mul_unchecked(c);
    let terms = [
        (1, d(&a.mul_unchecked(b)).mul_unchecked(c)),
        (sign_pow(da), a.mul_unchecked(&d(&b.mul_unchecked(c)))),
        (
            sign_pow((da - 1) * db),
            b.mul_unchecked(&d(&a.mul_unchecked(c))),
        ),
        (-1, d(a).mul_unchecked(b).mul_unchecked(c)),
        (-sign_pow(da), a.mul_unchecked(&d(b)).mul_unchecked(c)),
        (-sign_pow(da + db), a.mul_unchecked(b).mul_unchecked(&d(c))),
    ];
    let mut rhs = a.parent.zero();
    for (s, t) in terms {
        rhs = rhs.add(&t.scale_i64(s)).unwrap();
    }
    d(&abc).sub(&rhs).unwrap()
}

fn br(a: &BVElement, b: &BVElement) -> BVElement {
    gerstenhaber_bracket(a, b).expect("monomials are homogeneous")
}

/// Exhaustive check of Δ² = 0, the seven-term identity, antisymmetry,
/// Leibniz and Jacobi on normal monomials with uncapped exponents `<= free_cap`.
pub fn verify_bv_identities(alg: &PresentedBVAlgebra, free_cap: u32) -> IdentityReport {
    let monos = alg.normal_monomials(free_cap);
    let els: Vec<BVElement> = monos.iter().map(|e| alg.monomial(*e)).collect();
    let deg: Vec<i64> = monos.iter().map(|e| alg.monomial_degree(e)).collect();
    let k = monos.len();
    let mut violations = Vec::new();
    for (i, a) in els.iter().enumerate() {
        let r = delta_closed_form(&delta_closed_form(a));
        if !r.is_zero() {
            violations.push(IdentityViolation {
                identity: Identity::DeltaSquared,
                witness: vec![monos[i]],
                residual: r.to_string(),
            });
        }
        for j in 0..k {
            let b = &els[j];
            let s = sign_pow((deg[i] - 1) * (deg[j] - 1));
            let r = br(a, b).add(&br(b, a).scale_i64(s)).unwrap();
            if !r.is_zero() {
                violations.push(IdentityViolation {
                    identity: Identity::Antisymmetry,
                    witness: vec![monos[i], monos[j]],
                    residual: r.to_string(),
                });
            }
        }
    }
    let triples: Vec<(usize, usize, usize)> = (0..k)
        .flat_map(|i| (0..k).flat_map(move |j| (0..k).map(move |l| (i, j, l))))
        .collect();
    let mut found: Vec<IdentityViolation> = triples
        .par_iter()
        .flat_map_iter(|&(i, j, l)| {
            let (a, b, c) = (&els[i], &els[j], &els[l]);
            let (da, db, dc) = (deg[i], deg[j], deg[l]);
            let w = vec![monos[i], monos[j], monos[l]];
            let mut out = Vec::new();
            let mut push = |id, r: BVElement| {
                if !r.is_zero() {
                    out.push(IdentityViolation {
                        identity: id,
                        witness: w.clone(),
                        residual: r.to_string(),
                    });
                }
            };
            push(Identity::SevenTerm, seven_term(a, b, c));
            let leib = br(a, &b.mul_unchecked(c))
                .sub(&br(a, b).mul_unchecked(c))
                .unwrap()
                .sub(
                    &b.mul_unchecked(&br(a, c))
                        .scale_i64(sign_pow((da - 1) * db)),
                )
                .unwrap();
            push(Identity::Leibniz, leib);
            let jac = br(a, &br(b, c))
                .scale_i64(sign_pow((da - 1) * (dc - 1)))
                .add(&br(b, &br(c, a)).scale_i64(sign_pow((db - 1) * (da - 1))))
                .unwrap()
                .add(&br(c, &br(a, b)).scale_i64(sign_pow((dc - 1) * (db - 1))))
                .unwrap();
            push(Identity::Jacobi, jac);
            out
        })
        .collect();
    found.sort_by(|x, y| (x.identity, &x.witness).cmp(&(y.identity, &y.witness)));
    violations.extend(found);
    IdentityReport {
        monomials: k,
        triples: triples.len(),
        violations,
    }
}

/// Expected bracket/Δ value against the computed one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaMismatch {
    pub family: usize,
    pub inputs: Vec<Monomial>,
    pub expected: String,
    pub computed: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormulaReport {
    pub checked: usize,
    pub mismatches: Vec<FormulaMismatch>,
}

impl FormulaReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn family_passed(&self, family: usize) -> bool {
        self.mismatches.iter().all(|m| m.family != family)
    }
}

fn shifted_term(alg: &PresentedBVAlgebra, coeff: i64, x: i64, mid: u32, t: u32) -> BVElement {
    if x < 0 {
        return alg.zero();
    }
    alg.term([x as u32, mid, t], Scalar::from_i64(alg.ring(), coeff))
}

/// Compares Δ with `Δ(t^k x^l) = 0` and either
/// `Δ(t^k u x^l) = (-(k+1)n - k + l) t^k x^l` or `Δ(t^k v x^l) = l t^k x^{l-1}`,
/// for `k <= k_cap`, `l <= n`.
pub fn check_delta_formula(alg: &PresentedBVAlgebra, n: usize, k_cap: u32) -> FormulaReport {
    let v = alg.generators[1].name == "v";
    let ni = n as i64;
    let mut rep = FormulaReport::default();
    for k in 0..=k_cap {
        for l in 0..=n as u32 {
            for eps in 0..=1u32 {
                let e = [l, eps, k];
                let (k, li) = (k as i64, l as i64);
                let expected = match (eps, v) {
                    (0, _) => alg.zero(),
                    (_, false) => shifted_term(alg, -(k + 1) * ni - k + li, li, 0, k as u32),
                    (_, true) => shifted_term(alg, li, li - 1, 0, k as u32),
                };
                let computed = delta_closed_form(&alg.monomial(e));
                rep.checked += 1;
                if alg.monomial(e).is_zero() {
                    continue;
                }
                if expected != computed {
                    rep.mismatches.push(FormulaMismatch {
                        family: eps as usize,
                        inputs: vec![e],
                        expected: expected.to_string(),
                        computed: computed.to_string(),
                    });
                }
            }
        }
    }
    rep
}

/// Compares the bracket with the three closed-form families
/// `{t^{k1}x^{l1}, t^{k2}x^{l2}}`, `{t^{k1}x^{l1}, t^{k2}w x^{l2}}`,
/// `{t^{k1}w x^{l1}, t^{k2}w x^{l2}}` (`w = u` or `v`), for `k <= k_cap`, `l <= n`.
pub fn check_bracket_formulas(alg: &PresentedBVAlgebra, n: usize, k_cap: u32) -> FormulaReport {
    let v = alg.generators[1].name == "v";
    let ni = n as i64;
    let mut cases = Vec::new();
    for k1 in 0..=k_cap {
        for k2 in 0..=k_cap {
            for l1 in 0..=n as u32 {
                for l2 in 0..=n as u32 {
                    for fam in 1..=3usize {
                        cases.push((fam, k1, k2, l1, l2));
                    }
                }
            }
        }
    }
    let mut mismatches: Vec<FormulaMismatch> = cases
        .par_iter()
        .filter_map(|&(fam, k1, k2, l1, l2)| {
            let (e1, e2) = match fam {
                1 => ([l1, 0, k1], [l2, 0, k2]),
                2 => ([l1, 0, k1], [l2, 1, k2]),
                _ => ([l1, 1, k1], [l2, 1, k2]),
            };
            let (a, b) = (alg.monomial(e1), alg.monomial(e2));
            if a.is_zero() || b.is_zero() {
                return None;
            }
            let (k1i, k2i, l1i, l2i) = (k1 as i64, k2 as i64, l1 as i64, l2 as i64);
            let (ks, ls) = (k1 + k2, l1i + l2i);
            let expected = match (fam, v) {
                (1, _) => alg.zero(),
                (2, false) => shifted_term(alg, -k1i * ni - k1i + l1i, ls, 0, ks),
                (_, false) => shifted_term(alg, (k1i + k2i + 2) * ni + k1i + k2i - ls, ls, 1, ks),
                (2, true) => shifted_term(alg, l1i, ls - 1, 0, ks),
                (_, true) => shifted_term(alg, -ls, ls - 1, 1, ks),
            };
            let computed = br(&a, &b);
            (expected != computed).then(|| FormulaMismatch {
                family: fam,
                inputs: vec![e1, e2],
                expected: expected.to_string(),
                computed: computed.to_string(),
            })
        })
        .collect();
    mismatches.sort_by(|a, b| (a.family, &a.inputs).cmp(&(b.family, &b.inputs)));
    FormulaReport {
        checked: cases.len(),
        mismatches,
    }
}

/// One monomial of a bar-complex crosscheck.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosscheckEntry {
    pub monomial: Monomial,
    pub label: String,
    pub closed_form: String,
    pub agrees: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub entries: Vec<CrosscheckEntry>,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.agrees)
    }

    pub fn entry(&self, label: &str) -> Option<&CrosscheckEntry> {
        self.entries.iter().find(|e| e.label == label)
    }
}

/// The generator cochains `x̄`, `ū` or `v̄`, `t̄` matching the presentation.
pub fn generator_cochains(alg: &TruncatedPolyAlgebra) -> [Cochain; 3] {
    let mid = if uses_v_generator(alg.ring(), alg.n()) {
        Cochain::v_bar(alg)
    } else {
        Cochain::u_bar(alg)
    };
    [Cochain::x_bar(alg), mid, Cochain::t_bar(alg)]
}

/// Cocycle `t̄^{e2} ∪ w̄^{e1} ∪ x̄^{e0}` representing the monomial `e`.
pub fn representative_cocycle(alg: &TruncatedPolyAlgebra, e: &Monomial) -> Cochain {
    let g = generator_cochains(alg);
    let mut f = Cochain::unit(alg);
    for i in [2, 1, 0] {
        for _ in 0..e[i] {
            f = cup(&f, &g[i]).expect("same parent");
        }
    }
    f
}

/// Periodic-complex representative of a normal monomial of the presentation.
pub fn periodic_image(
    alg: &TruncatedPolyAlgebra,
    e: &Monomial,
    c: &Scalar,
) -> Option<PeriodicElement> {
    let v = uses_v_generator(alg.ring(), alg.n());
    let (l, mid, k) = (e[0] as usize, e[1] as usize, e[2] as usize);
    let exp = if mid == 1 && !v { l + 1 } else { l };
    if mid > 1 || exp > alg.n() {
        return None;
    }
    Some(PeriodicElement {
        level: 2 * k + mid,
        value: alg.monomial(c.clone(), exp),
    })
}

fn seed_monomials(alg: &TruncatedPolyAlgebra) -> Vec<(Monomial, &'static str)> {
    let v = uses_v_generator(alg.ring(), alg.n());
    let ux = |l: u32, k: u32| if v { [l + 1, 1, k] } else { [l, 1, k] };
    vec![
        ([1, 0, 0], "x"),
        ([2, 0, 0], "x^2"),
        (ux(0, 0), "u"),
        ([0, 0, 1], "t"),
        ([0, 0, 2], "t^2"),
        ([1, 0, 1], "t*x"),
        (ux(0, 1), "t*u"),
        (ux(1, 0), "u*x"),
    ]
}

/// For each monomial with `t`-exponent `<= k_cap`, plus the eight seeds
/// `x, x², u, t, t², tx, tu, ux`, applies the cochain-level Δ to its
/// representing cocycle, transfers to the periodic complex and compares the
/// class with the closed form.
pub fn crosscheck_against_barcomplex(
    n: usize,
    m: usize,
    ring: RingSpec,
    k_cap: u32,
) -> Result<CrosscheckReport> {
    let alg = TruncatedPolyAlgebra::new(ring, n, m)?;
    let bv = main_theorem_algebra(ring, n, m)?;
    let mut items: Vec<(Monomial, String)> = seed_monomials(&alg)
        .into_iter()
        .map(|(e, s)| (e, s.to_string()))
        .collect();
    for e in bv.normal_monomials(k_cap) {
        if !items.iter().any(|(f, _)| *f == e) {
            items.push((e, bv.format_monomial(&e)));
        }
    }
    let max_level = items
        .iter()
        .map(|(e, _)| 2 * e[2] as usize + 2)
        .max()
        .unwrap_or(2);
    let hom = PeriodicHomology::compute(&alg, max_level);
    let entries: Vec<Result<CrosscheckEntry>> = items
        .par_iter()
        .map(|(e, label)| {
            let closed = delta_closed_form(&bv.monomial(*e));
            let rep = representative_cocycle(&alg, e);
            let (agrees, detail) = if rep.word_length() == 0 {
                (closed.is_zero(), None)
            } else {
                let bar = transfer(&delta(&rep)?);
                let mut expected = PeriodicElement {
                    level: bar.level,
                    value: alg.zero(),
                };
                let mut ok = true;
                for (f, c) in closed.terms() {
                    match periodic_image(&alg, f, c) {
                        Some(p) if p.level == bar.level => expected.value.add_assign(&p.value),
                        _ => ok = false,
                    }
                }
                let lhs = hom.class_of(&bar)?;
                let rhs = hom.class_of(&expected)?;
                (
                    ok && lhs == rhs,
                    Some(format!("cochain Δ transfers to {bar}")),
                )
            };
            Ok(CrosscheckEntry {
                monomial: *e,
                label: label.clone(),
                closed_form: closed.to_string(),
                agrees,
                detail,
            })
        })
        .collect();
    Ok(CrosscheckReport {
        entries: entries.into_iter().collect::<Result<_>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: RingSpec = RingSpec::Integers;

    #[test]
    fn presentation_examples() {
        let a = main_theorem_algebra(Z, 1, 1).unwrap();
        let degs: Vec<i64> = a.generators.iter().map(|g| g.degree).collect();
        assert_eq!(degs, [-2, -1, 2]);
        assert_eq!(a.relations(), ["x^2", "u^2", "u*x", "2*t*x"]);
        let f3 = main_theorem_algebra(RingSpec::PrimeField(3), 2, 1).unwrap();
        assert_eq!(f3.generators[1], gen("v", 1));
        assert_eq!(f3.relations(), ["x^3", "v^2"]);
        let f2 = main_theorem_algebra(RingSpec::PrimeField(2), 1, 1).unwrap();
        assert_eq!(f2.relations(), ["x^2", "v^2 - t"]);
        let v = f2.generator(1);
        assert_eq!(v.multiply(&v).unwrap(), f2.generator(2));
        assert!(main_theorem_algebra(Z, 0, 1).is_err());
    }

    #[test]
    fn normal_forms() {
        let a = main_theorem_algebra(Z, 2, 1).unwrap();
        let x = a.generator(0);
        let u = a.generator(1);
        let t = a.generator(2);
        assert!(x.power(2).multiply(&x).unwrap().is_zero());
        assert!(u.multiply(&x.power(2)).unwrap().is_zero());
        assert!(u.multiply(&u).unwrap().is_zero());
        let tx2 = t.multiply(&x.power(2)).unwrap();
        assert_eq!(tx2.scale_i64(3), a.zero());
        assert_eq!(tx2.scale_i64(4), tx2);
        assert_eq!(
            tx2.scale_i64(-1).coefficient(&[2, 0, 1]),
            Scalar::from_i64(Z, 2)
        );
        let q = main_theorem_algebra(RingSpec::Rationals, 2, 1).unwrap();
        assert!(q.monomial([2, 0, 1]).is_zero());
    }

    #[test]
    fn association_independent() {
        for alg in [
            main_theorem_algebra(Z, 2, 1).unwrap(),
            main_theorem_algebra(RingSpec::PrimeField(2), 3, 1).unwrap(),
            menichi_loop_s2(),
        ] {
            let monos: Vec<BVElement> = alg
                .normal_monomials(2)
                .iter()
                .map(|e| alg.monomial(*e))
                .collect();
            for a in &monos {
                for b in &monos {
                    let ab = a.multiply(b).unwrap();
                    if let Some(d) = ab.degree() {
                        assert_eq!(d, a.degree().unwrap() + b.degree().unwrap());
                    }
                    for c in &monos {
                        let l = ab.multiply(c).unwrap();
                        let r = a.multiply(&b.multiply(c).unwrap()).unwrap();
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn delta_examples() {
        let a = main_theorem_algebra(Z, 2, 1).unwrap();
        assert_eq!(
            delta_closed_form(&a.generator(1)),
            a.element(&[([0, 0, 0], -2)])
        );
        let tu = a.monomial([0, 1, 1]);
        assert_eq!(delta_closed_form(&tu), a.element(&[([0, 0, 1], -5)]));
        let f3 = main_theorem_algebra(RingSpec::PrimeField(3), 2, 1).unwrap();
        assert_eq!(
            delta_closed_form(&f3.monomial([2, 1, 0])),
            f3.element(&[([1, 0, 0], 2)])
        );
        let s2 = menichi_loop_s2();
        assert_eq!(
            delta_closed_form(&s2.generator(1)),
            s2.element(&[([0, 0, 0], 1), ([1, 0, 1], 1)])
        );
        assert!(delta_closed_form(&s2.monomial([1, 0, 1])).is_zero());
        assert_eq!(
            delta_closed_form(&s2.monomial([0, 1, 2])),
            s2.element(&[([0, 0, 2], 5), ([1, 0, 3], 1)])
        );
    }

    #[test]
    fn bracket_examples() {
        let a = main_theorem_algebra(Z, 2, 1).unwrap();
        let x = a.generator(0);
        let u = a.generator(1);
        assert_eq!(br(&x, &u), x);
        assert!(br(&x, &a.generator(2)).is_zero());
        assert!(br(&u, &u).is_zero());
        let mixed = x.add(&u).unwrap();
        assert_eq!(
            gerstenhaber_bracket(&mixed, &x),
            Err(Error::InhomogeneousElement)
        );
        let b = main_theorem_algebra(Z, 3, 1).unwrap();
        assert_eq!(
            gerstenhaber_bracket(&x, &b.generator(0)),
            Err(Error::ParentMismatch)
        );
    }

    #[test]
    fn identities_small() {
        assert!(verify_bv_identities(&main_theorem_algebra(Z, 1, 1).unwrap(), 3).passed());
        assert!(verify_bv_identities(
            &main_theorem_algebra(RingSpec::PrimeField(3), 2, 1).unwrap(),
            2
        )
        .passed());
        assert!(verify_bv_identities(&menichi_loop_s2(), 3).passed());
    }

    #[test]
    fn graded_pieces() {
        let a = main_theorem_algebra(Z, 1, 1).unwrap();
        assert_eq!(a.graded_piece(0).to_string(), "Z + Z_2");
        assert_eq!(a.basis_in_degree(-2), vec![[1, 0, 0]]);
    }

    #[test]
    fn json_round_trip() {
        for alg in [
            main_theorem_algebra(Z, 3, 2).unwrap(),
            main_theorem_algebra(RingSpec::PrimeField(2), 1, 1).unwrap(),
            menichi_loop_s2(),
        ] {
            let back = PresentedBVAlgebra::from_json(&alg.to_json()).unwrap();
            assert_eq!(back, alg);
        }
        let mut p = menichi_loop_s2().presentation().clone();
        p.delta_rules[0].terms[0].shift = [0, 0, 0];
        assert!(matches!(
            PresentedBVAlgebra::new(p),
            Err(Error::Presentation(_))
        ));
    }

    #[test]
    fn crosscheck_seeds() {
        let r = crosscheck_against_barcomplex(2, 1, Z, 1).unwrap();
        assert!(
            r.passed(),
            "{:#?}",
            r.entries.iter().filter(|e| !e.agrees).collect::<Vec<_>>()
        );
        assert_eq!(r.entry("u*x").unwrap().closed_form, "-x");
        assert_eq!(r.entry("t*u").unwrap().closed_form, "-5*t");
        let r = crosscheck_against_barcomplex(3, 1, Z, 0).unwrap();
        assert_eq!(r.entry("t^2").unwrap().closed_form, "0");
        assert!(r.passed());
        assert!(
            crosscheck_against_barcomplex(2, 1, RingSpec::PrimeField(3), 1)
                .unwrap()
                .passed()
        );
    }
}
