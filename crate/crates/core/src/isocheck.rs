//! Bounded search for graded-algebra, Gerstenhaber and BV isomorphisms
//! between presented BV algebras.

use std::fmt;

use rayon::prelude::*;

use crate::arith::{rank, solve, ExactMatrix, Scalar};
use crate::bvalgebra::{
    delta_closed_form, gerstenhaber_bracket, BVElement, Monomial, PresentedBVAlgebra,
};
use crate::error::{Error, Result};

/// Degree bound `D` and coefficient bound `C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchSpace {
    pub degree_bound: i64,
    pub coefficient_bound: i64,
}

impl SearchSpace {
    pub fn new(degree_bound: i64, coefficient_bound: i64) -> Result<Self> {
        if degree_bound < 1 || coefficient_bound < 1 {
            return Err(Error::InvalidParameters(
                "degree and coefficient bounds must be at least 1".into(),
            ));
        }
        Ok(SearchSpace {
            degree_bound,
            coefficient_bound,
        })
    }
}

impl fmt::Display for SearchSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D={}, C={}", self.degree_bound, self.coefficient_bound)
    }
}

/// Algebra map determined by the images of the three source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: PresentedBVAlgebra,
    target: PresentedBVAlgebra,
    images: [BVElement; 3],
}

impl GradedMap {
    /// Checks degrees and that every source relation maps to zero.
    pub fn new(
        source: &PresentedBVAlgebra,
        target: &PresentedBVAlgebra,
        images: [BVElement; 3],
    ) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::InvalidParameters(
                "source and target rings differ".into(),
            ));
        }
        for (i, img) in images.iter().enumerate() {
            if img.parent() != target {
                return Err(Error::ParentMismatch);
            }
            if img
                .degree()
                .is_some_and(|d| d != source.generators[i].degree)
                || !img.is_homogeneous()
            {
                return Err(Error::InvalidParameters(format!(
                    "image {img} of {} has the wrong degree",
                    source.generators[i].name
                )));
            }
        }
        let map = GradedMap {
            source: source.clone(),
            target: target.clone(),
            images,
        };
        if let Some(r) = map.violated_relation() {
            return Err(Error::InvalidParameters(format!(
                "relation {r} does not map to zero"
            )));
        }
        Ok(map)
    }

    pub fn source(&self) -> &PresentedBVAlgebra {
        &self.source
    }

    pub fn target(&self) -> &PresentedBVAlgebra {
        &self.target
    }

    pub fn images(&self) -> &[BVElement; 3] {
        &self.images
    }

    fn image_of_monomial(&self, e: &Monomial) -> BVElement {
        let mut out = self.target.one();
        for i in 0..3 {
            out = out
                .multiply(&self.images[i].power(e[i]))
                .expect("same target");
        }
        out
    }

    pub fn apply(&self, x: &BVElement) -> Result<BVElement> {
        if x.parent() != &self.source {
            return Err(Error::ParentMismatch);
        }
        let mut out = self.target.zero();
        for (e, c) in x.terms() {
            out = out.add(&self.image_of_monomial(e).scale(c))?;
        }
        Ok(out)
    }

    fn violated_relation(&self) -> Option<String> {
        let s = &self.source;
        let mut checks: Vec<(String, BVElement)> = Vec::new();
        for i in 0..3 {
            if let Some(c) = s.caps[i] {
                let mut e = [0; 3];
                e[i] = c + 1;
                checks.push((s.format_monomial(&e), self.image_of_monomial(&e)));
            }
        }
        for z in &s.zero_patterns {
            checks.push((s.format_monomial(z), self.image_of_monomial(z)));
        }
        for t in &s.torsion {
            let img = self.image_of_monomial(&t.pattern).scale_i64(t.order as i64);
            checks.push((
                format!("{}*{}", t.order, s.format_monomial(&t.pattern)),
                img,
            ));
        }
        if let Some(sq) = &s.square_rewrite {
            let g = &self.images[sq.generator];
            let lhs = g.multiply(g).expect("same target");
            let rhs = self.image_of_monomial(&sq.target).scale_i64(sq.coefficient);
            checks.push((
                format!("{}^2", s.generators[sq.generator].name),
                lhs.sub(&rhs).expect("same target"),
            ));
        }
        checks
            .into_iter()
            .find(|(_, v)| !v.is_zero())
            .map(|(r, _)| r)
    }

    /// Bijective on every graded piece of degree in `[-d, d]`: equal additive
    /// structure and surjective (hence bijective, the pieces being finitely generated).
    pub fn is_graded_bijective(&self, d: i64) -> bool {
        (-d..=d).all(|deg| self.bijective_in_degree(deg))
    }

    fn bijective_in_degree(&self, deg: i64) -> bool {
        let (s, t) = (&self.source, &self.target);
        if s.graded_piece(deg) != t.graded_piece(deg) {
            return false;
        }
        let sb = s.basis_in_degree(deg);
        let tb = t.basis_in_degree(deg);
        if tb.is_empty() {
            return true;
        }
        let ring = s.ring();
        let mut cols: Vec<Vec<Scalar>> = sb
            .iter()
            .map(|e| {
                let img = self.image_of_monomial(e);
                tb.iter().map(|f| img.coefficient(f)).collect()
            })
            .collect();
        if ring.is_field() {
            let m = ExactMatrix::from_columns(ring, tb.len(), &cols);
            return rank(&m) == tb.len();
        }
        for (i, f) in tb.iter().enumerate() {
            if let Some(o) = t.torsion_order(f) {
                let mut c = vec![ring.zero(); tb.len()];
                c[i] = Scalar::from_i64(ring, o as i64);
                cols.push(c);
            }
        }
        let m = ExactMatrix::from_columns(ring, tb.len(), &cols);
        (0..tb.len()).all(|i| {
            let mut b = vec![ring.zero(); tb.len()];
            b[i] = ring.one();
            solve(&m, &b).is_some()
        })
    }

    /// Source normal monomials of degree in `[-d, d]`, by degree.
    fn source_monomials(&self, d: i64) -> Vec<Monomial> {
        (-d..=d)
            .flat_map(|deg| self.source.basis_in_degree(deg))
            .collect()
    }
}

impl fmt::Display for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..3)
            .map(|i| format!("{} -> {}", self.source.generators[i].name, self.images[i]))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Outcome of a structure check, with the first failing input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapCheck {
    pub holds: bool,
    pub witness: Option<Vec<Monomial>>,
    pub detail: Option<String>,
}

impl MapCheck {
    fn pass() -> Self {
        MapCheck {
            holds: true,
            witness: None,
            detail: None,
        }
    }
}

/// `Φ∘Δ = Δ∘Φ` on all source monomials of degree in `[-d, d]`.
pub fn is_bv_map(phi: &GradedMap, d: i64) -> MapCheck {
    for e in phi.source_monomials(d) {
        let m = phi.source.monomial(e);
        let lhs = phi.apply(&delta_closed_form(&m)).expect("source element");
        let rhs = delta_closed_form(&phi.apply(&m).expect("source element"));
        if lhs != rhs {
            return MapCheck {
                holds: false,
                witness: Some(vec![e]),
                detail: Some(format!(
                    "Φ(Δ({})) = {lhs} but Δ(Φ({})) = {rhs}",
                    phi.source.format_monomial(&e),
                    phi.source.format_monomial(&e)
                )),
            };
        }
    }
    MapCheck::pass()
}

/// `Φ{a,b} = {Φa, Φb}` on all pairs of source monomials of degree in `[-d, d]`.
pub fn is_gerstenhaber_map(phi: &GradedMap, d: i64) -> MapCheck {
    let monos = phi.source_monomials(d);
    let pairs: Vec<(Monomial, Monomial)> = monos
        .iter()
        .flat_map(|a| monos.iter().map(move |b| (*a, *b)))
        .collect();
    let fail = pairs.par_iter().find_first(|(a, b)| {
        let (x, y) = (phi.source.monomial(*a), phi.source.monomial(*b));
        let lhs = phi
            .apply(&gerstenhaber_bracket(&x, &y).expect("monomials"))
            .expect("source element");
        let rhs = gerstenhaber_bracket(&phi.apply(&x).unwrap(), &phi.apply(&y).unwrap())
            .expect("homogeneous images");
        lhs != rhs
    });
    match fail {
        None => MapCheck::pass(),
        Some((a, b)) => MapCheck {
            holds: false,
            witness: Some(vec![*a, *b]),
            detail: Some(format!(
                "bracket of {} and {} is not preserved",
                phi.source.format_monomial(a),
                phi.source.format_monomial(b)
            )),
        },
    }
}

/// Target elements of degree `deg` with coefficients in `[-C, C]`, normalized and deduplicated.
fn candidates(target: &PresentedBVAlgebra, deg: i64, c: i64) -> Vec<BVElement> {
    let basis = target.basis_in_degree(deg);
    let mut out: Vec<BVElement> = vec![target.zero()];
    for f in basis {
        let mut next = Vec::new();
        for x in &out {
            for k in -c..=c {
                next.push(
                    x.add(&target.term(f, Scalar::from_i64(target.ring(), k)))
                        .expect("same parent"),
                );
            }
        }
        out = next;
    }
    let mut seen: Vec<BVElement> = Vec::new();
    for x in out {
        if !seen.contains(&x) {
            seen.push(x);
        }
    }
    seen
}

/// All relation-compatible, graded-bijective (up to `D`) generator assignments
/// with coefficients in `[-C, C]`, in a deterministic order.
pub fn enumerate_algebra_isomorphisms(
    a: &PresentedBVAlgebra,
    b: &PresentedBVAlgebra,
    s: SearchSpace,
) -> Vec<GradedMap> {
    if a.ring() != b.ring() {
        return Vec::new();
    }
    let cands: Vec<Vec<BVElement>> = (0..3)
        .map(|i| candidates(b, a.generators[i].degree, s.coefficient_bound))
        .collect();
    let mut triples = Vec::new();
    for x in &cands[0] {
        for y in &cands[1] {
            for z in &cands[2] {
                triples.push([x.clone(), y.clone(), z.clone()]);
            }
        }
    }
    triples
        .into_par_iter()
        .filter_map(|imgs| {
            let map = GradedMap::new(a, b, imgs).ok()?;
            map.is_graded_bijective(s.degree_bound).then_some(map)
        })
        .collect()
}

/// A BV isomorphism within the bounds, or every algebra isomorphism with
/// the witness refuting it.
#[derive(Clone, Debug)]
pub enum Verdict {
    Yes {
        map: GradedMap,
        bounds: SearchSpace,
    },
    No {
        refuted: Vec<(GradedMap, MapCheck)>,
        bounds: SearchSpace,
    },
}

impl Verdict {
    pub fn exists(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes { map, bounds } => write!(f, "YES (up to {bounds}): {map}"),
            Verdict::No { refuted, bounds } => {
                writeln!(
                    f,
                    "NO (up to {bounds}): {} algebra isomorphisms, none preserves Δ",
                    refuted.len()
                )?;
                for (m, c) in refuted {
                    writeln!(
                        f,
                        "  {m}: {}",
                        c.detail.as_deref().unwrap_or("no algebra isomorphism")
                    )?;
                }
                Ok(())
            }
        }
    }
}

pub fn bv_isomorphism_exists(
    a: &PresentedBVAlgebra,
    b: &PresentedBVAlgebra,
    s: SearchSpace,
) -> Verdict {
    let maps = enumerate_algebra_isomorphisms(a, b, s);
    let checks: Vec<MapCheck> = maps
        .par_iter()
        .map(|m| is_bv_map(m, s.degree_bound))
        .collect();
    if let Some(i) = checks.iter().position(|c| c.holds) {
        return Verdict::Yes {
            map: maps[i].clone(),
            bounds: s,
        };
    }
    Verdict::No {
        refuted: maps.into_iter().zip(checks).collect(),
        bounds: s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::RingSpec;
    use crate::bvalgebra::{main_theorem_algebra, menichi_loop_s2};

    fn hh(n: usize) -> PresentedBVAlgebra {
        main_theorem_algebra(RingSpec::Integers, n, 1).unwrap()
    }

    #[test]
    fn self_maps() {
        let a = hh(1);
        let maps = enumerate_algebra_isomorphisms(&a, &a, SearchSpace::new(6, 1).unwrap());
        let id = GradedMap::new(&a, &a, [a.generator(0), a.generator(1), a.generator(2)]).unwrap();
        assert!(maps.contains(&id));
        for m in &maps {
            let x = &m.images()[0];
            assert!(*x == a.generator(0) || *x == a.generator(0).neg());
        }
        assert!(is_bv_map(&id, 10).holds);
        assert!(is_gerstenhaber_map(&id, 6).holds);
        assert!(bv_isomorphism_exists(&a, &a, SearchSpace::new(8, 1).unwrap()).exists());
    }

    #[test]
    fn different_ranks() {
        assert!(
            enumerate_algebra_isomorphisms(&hh(1), &hh(2), SearchSpace::new(6, 1).unwrap())
                .is_empty()
        );
    }

    #[test]
    fn sphere_maps() {
        let (a, b) = (hh(1), menichi_loop_s2());
        let phi = GradedMap::new(&a, &b, [b.generator(0), b.generator(1), b.generator(2)]).unwrap();
        let r = is_bv_map(&phi, 8);
        assert!(!r.holds);
        assert_eq!(r.witness, Some(vec![[0, 1, 0]]));
        let g = GradedMap::new(
            &a,
            &b,
            [b.generator(0), b.generator(1).neg(), b.generator(2)],
        )
        .unwrap();
        assert!(is_gerstenhaber_map(&g, 8).holds);
        let bad = GradedMap::new(&a, &b, [b.generator(2), b.generator(1), b.generator(2)]);
        assert!(bad.is_err());
    }

    #[test]
    fn bounds_validated() {
        assert!(SearchSpace::new(0, 1).is_err());
    }
}
