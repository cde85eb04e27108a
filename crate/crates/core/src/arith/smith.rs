use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::{ExactMatrix, RingSpec, Scalar};
use crate::error::{Error, Result};

/// Isomorphism type of a finitely generated module over ℤ or a field.
///
/// `torsion` is in divisor-chain form `d_1 | d_2 | ...`, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuleDescriptor {
    pub ring: RingSpec,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl ModuleDescriptor {
    pub fn free(ring: RingSpec, rank: usize) -> Self {
        ModuleDescriptor {
            ring,
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn zero(ring: RingSpec) -> Self {
        Self::free(ring, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum, re-normalized into divisor-chain form.
    pub fn direct_sum(&self, o: &ModuleDescriptor) -> ModuleDescriptor {
        assert_eq!(self.ring, o.ring);
        let all: Vec<&BigInt> = self.torsion.iter().chain(&o.torsion).collect();
        if all.is_empty() {
            return ModuleDescriptor::free(self.ring, self.free_rank + o.free_rank);
        }
        // Re-run the Smith form on the diagonal of all torsion orders.
        let k = all.len();
        let mut m = ExactMatrix::zeros(self.ring, k, k);
        for (i, d) in all.iter().enumerate() {
            m.set(i, i, Scalar::from_bigint(self.ring, d));
        }
        let snf = SmithForm::compute(&m);
        let torsion = snf
            .diagonal()
            .into_iter()
            .filter_map(|d| d.to_bigint())
            .filter(|d| *d > BigInt::one())
            .collect();
        ModuleDescriptor {
            ring: self.ring,
            free_rank: self.free_rank + o.free_rank,
            torsion,
        }
    }
}

impl std::fmt::Display for ModuleDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let base = self.ring.to_string();
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                base.clone()
            } else {
                format!("{base}^{}", self.free_rank)
            });
        }
        for d in &self.torsion {
            parts.push(format!("Z_{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Full Smith decomposition `U·M·V = D` with the inverses of both transforms.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: ExactMatrix,
    pub u: ExactMatrix,
    pub u_inv: ExactMatrix,
    pub v: ExactMatrix,
    pub v_inv: ExactMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// Diagonal normal form by pivoting on the entry of least Euclidean size.
    ///
    /// Over ℤ the diagonal is nonnegative with `d_i | d_{i+1}`; over a field
    /// every nonzero diagonal entry is 1.
    pub fn compute(m: &ExactMatrix) -> SmithForm {
        let ring = m.ring();
        let (rows, cols) = (m.rows(), m.cols());
        let mut w = Work {
            a: m.clone(),
            u: ExactMatrix::identity(ring, rows),
            u_inv: ExactMatrix::identity(ring, rows),
            v: ExactMatrix::identity(ring, cols),
            v_inv: ExactMatrix::identity(ring, cols),
        };
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = w.min_entry(t) else {
                break;
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..rows {
                    if w.a.get(i, t).is_zero() {
                        continue;
                    }
                    let q = w.a.get(i, t).euclid_quotient(w.a.get(t, t));
                    w.add_row(i, t, &q.neg());
                    if !w.a.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..cols {
                    if w.a.get(t, j).is_zero() {
                        continue;
                    }
                    let q = w.a.get(t, j).euclid_quotient(w.a.get(t, t));
                    w.add_col(j, t, &q.neg());
                    if !w.a.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // a smaller remainder appeared in row or column t
                    let (pi, pj) = w.min_in_cross(t);
                    w.swap_rows(t, pi);
                    w.swap_cols(t, pj);
                    continue;
                }
                // pivot must divide the whole remaining block
                let piv = w.a.get(t, t).clone();
                let bad = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| !w.a.get(i, j).divisible_by(&piv)));
                match bad {
                    Some(i) => w.add_row(t, i, &ring.one()),
                    None => break,
                }
            }
            let piv = w.a.get(t, t).clone();
            let norm = match &piv {
                Scalar::Int(v) if v.is_negative() => Some(Scalar::from_i64(ring, -1)),
                Scalar::Int(_) => None,
                _ => Some(piv.inverse().unwrap()),
            };
            if let Some(s) = norm {
                w.scale_row(t, &s);
            }
            t += 1;
        }
        SmithForm {
            d: w.a,
            u: w.u,
            u_inv: w.u_inv,
            v: w.v,
            v_inv: w.v_inv,
            rank: t,
        }
    }

    /// The first `rank` diagonal entries.
    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Work {
    a: ExactMatrix,
    u: ExactMatrix,
    u_inv: ExactMatrix,
    v: ExactMatrix,
    v_inv: ExactMatrix,
}

impl Work {
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let e = self.a.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let s = e.euclid_size();
                if best.as_ref().is_none_or(|(b, _, _)| s < *b) {
                    let unit = s.is_one();
                    best = Some((s, i, j));
                    if unit {
                        return best.map(|(_, i, j)| (i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn min_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (self.a.get(t, t).euclid_size(), t, t);
        if self.a.get(t, t).is_zero() {
            best.0 = BigInt::from(-1);
        }
        let consider = |s: BigInt, i: usize, j: usize, best: &mut (BigInt, usize, usize)| {
            if best.0.is_negative() || s < best.0 {
                *best = (s, i, j);
            }
        };
        for i in t + 1..self.a.rows() {
            let e = self.a.get(i, t);
            if !e.is_zero() {
                consider(e.euclid_size(), i, t, &mut best);
            }
        }
        for j in t + 1..self.a.cols() {
            let e = self.a.get(t, j);
            if !e.is_zero() {
                consider(e.euclid_size(), t, j, &mut best);
            }
        }
        (best.1, best.2)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &Scalar) {
        self.a.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
        self.u_inv.add_col_multiple(src, dst, &c.neg());
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &Scalar) {
        self.a.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
        self.v_inv.add_row_multiple(src, dst, &c.neg());
    }

    fn scale_row(&mut self, r: usize, s: &Scalar) {
        let inv = s.inverse().expect("unit scaling");
        self.a.scale_row(r, s);
        self.u.scale_row(r, s);
        self.u_inv.scale_col(r, &inv);
    }
}

/// Smith normal form `(D, U, V)` with `U·M·V = D`.
pub fn smith_normal_form(m: &ExactMatrix) -> (ExactMatrix, ExactMatrix, ExactMatrix) {
    let s = SmithForm::compute(m);
    (s.d, s.u, s.v)
}

/// Basis of the kernel of `m` as columns; over ℤ the lattice they span is saturated.
pub fn kernel_basis(m: &ExactMatrix) -> Vec<Vec<Scalar>> {
    let s = SmithForm::compute(m);
    (s.rank..m.cols()).map(|j| s.v.column(j)).collect()
}

/// Rank of `m` (over ℤ, the rank of the lattice its columns span).
pub fn rank(m: &ExactMatrix) -> usize {
    SmithForm::compute(m).rank
}

/// Some `x` with `m·x = b`, or `None` when `b` is not in the column span
/// (over ℤ: not in the column lattice).
pub fn solve(m: &ExactMatrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(m.rows(), b.len());
    let s = SmithForm::compute(m);
    let c = s.u.mul_vec(b);
    let ring = m.ring();
    let mut y = vec![ring.zero(); m.cols()];
    for (i, ci) in c.iter().enumerate() {
        if i < s.rank {
            let d = s.d.get(i, i);
            if !ci.divisible_by(d) {
                return None;
            }
            y[i] = exact_quotient(ci, d);
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

fn exact_quotient(a: &Scalar, d: &Scalar) -> Scalar {
    match (a, d) {
        (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x / y),
        _ => a.mul(&d.inverse().expect("nonzero pivot")),
    }
}

/// Homology `ker(d_out) / im(d_in)` at one spot of a complex, with enough
/// retained data to compute class coordinates of further cycles.
#[derive(Clone, Debug)]
pub struct Homology {
    pub descriptor: ModuleDescriptor,
    /// Cycles generating the free part, one per free summand.
    pub free_generators: Vec<Vec<Scalar>>,
    /// Cycles generating the torsion summands, paired with their orders.
    pub torsion_generators: Vec<(BigInt, Vec<Scalar>)>,
    kernel_rank_offset: usize,
    to_kernel: ExactMatrix,
    class_transform: ExactMatrix,
    invariants: Vec<Scalar>,
    d_out: ExactMatrix,
}

/// Coordinates of a homology class: torsion coordinates (reduced) then free ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCoordinates {
    pub torsion: Vec<Scalar>,
    pub free: Vec<Scalar>,
}

impl ClassCoordinates {
    pub fn is_zero(&self) -> bool {
        self.torsion.iter().chain(&self.free).all(Scalar::is_zero)
    }
}

impl Homology {
    /// Class of a cycle `z` in the computed generator basis.
    pub fn class_of(&self, z: &[Scalar]) -> Result<ClassCoordinates> {
        if !self.d_out.mul_vec(z).iter().all(Scalar::is_zero) {
            return Err(Error::NotACocycle);
        }
        let kc = self.to_kernel.mul_vec(z);
        let kc = &kc[self.kernel_rank_offset..];
        let coords = self.class_transform.mul_vec(kc);
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for (i, c) in coords.into_iter().enumerate() {
            match self.invariants.get(i) {
                Some(d) if d.is_unit() => {}
                Some(d) => {
                    let order = d.to_bigint().unwrap();
                    let reduced = match &c {
                        Scalar::Int(v) => Scalar::Int(num_integer::Integer::mod_floor(v, &order)),
                        _ => c,
                    };
                    torsion.push(reduced);
                }
                None => free.push(c),
            }
        }
        Ok(ClassCoordinates { torsion, free })
    }
}

/// Computes `ker(d_out) / im(d_in)`.
///
/// `d_in: C_{k-1} -> C_k` and `d_out: C_k -> C_{k+1}` act on column vectors.
pub fn homology_of_pair(d_in: &ExactMatrix, d_out: &ExactMatrix) -> Result<Homology> {
    let ring = d_out.ring();
    assert_eq!(d_in.rows(), d_out.cols(), "middle dimensions disagree");
    if !d_out.mul(d_in).is_zero() {
        return Err(Error::CompositionNonzero);
    }
    let dim = d_out.cols();
    let out = SmithForm::compute(d_out);
    let r = out.rank;
    let kernel = out.v.col_slice(r, dim);
    // kernel coordinates of the image
    let y = out.v_inv.row_slice(r, dim).mul(d_in);
    let inner = SmithForm::compute(&y);
    let invariants = inner.diagonal();
    let gens = kernel.mul(&inner.u_inv);
    let kdim = dim - r;
    let mut free_generators = Vec::new();
    let mut torsion_generators = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..kdim {
        match invariants.get(i) {
            Some(d) if d.is_unit() => {}
            Some(d) => {
                let order = d.to_bigint().unwrap();
                torsion.push(order.clone());
                torsion_generators.push((order, gens.column(i)));
            }
            None => free_generators.push(gens.column(i)),
        }
    }
    Ok(Homology {
        descriptor: ModuleDescriptor {
            ring,
            free_rank: free_generators.len(),
            torsion,
        },
        free_generators,
        torsion_generators,
        kernel_rank_offset: r,
        to_kernel: out.v_inv,
        class_transform: inner.u,
        invariants,
        d_out: d_out.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    fn check_snf(m: &ExactMatrix) -> SmithForm {
        let s = SmithForm::compute(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.u.determinant().is_unit());
        assert!(s.v.determinant().is_unit());
        assert_eq!(s.u.mul(&s.u_inv), ExactMatrix::identity(m.ring(), m.rows()));
        assert_eq!(s.v.mul(&s.v_inv), ExactMatrix::identity(m.ring(), m.cols()));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(w[1].divisible_by(&w[0]));
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j || i >= s.rank {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        s
    }

    #[test]
    fn solve_respects_lattice() {
        let m = ExactMatrix::from_i64_rows(z(), &[vec![2, 0], vec![0, 3]]);
        let two = |v: i64| Scalar::from_i64(z(), v);
        assert_eq!(solve(&m, &[two(4), two(9)]), Some(vec![two(2), two(3)]));
        assert_eq!(solve(&m, &[two(1), two(0)]), None);
        let q = RingSpec::Rationals;
        let mq = ExactMatrix::from_i64_rows(q, &[vec![2, 0], vec![0, 0]]);
        assert!(solve(&mq, &[Scalar::from_i64(q, 1), Scalar::from_i64(q, 0)]).is_some());
        assert!(solve(&mq, &[Scalar::from_i64(q, 0), Scalar::from_i64(q, 1)]).is_none());
        assert_eq!(rank(&mq), 1);
    }

    #[test]
    fn snf_zero_one_by_one() {
        let m = ExactMatrix::from_i64_rows(z(), &[vec![0]]);
        let (d, u, v) = smith_normal_form(&m);
        assert_eq!(d, m);
        assert_eq!(u, ExactMatrix::identity(z(), 1));
        assert_eq!(v, ExactMatrix::identity(z(), 1));
    }

    #[test]
    fn snf_diag_2_3() {
        let m = ExactMatrix::from_i64_rows(z(), &[vec![2, 0], vec![0, 3]]);
        let s = check_snf(&m);
        assert_eq!(
            s.d,
            ExactMatrix::from_i64_rows(z(), &[vec![1, 0], vec![0, 6]])
        );
    }

    #[test]
    fn snf_multiplication_by_2x() {
        let m = ExactMatrix::from_i64_rows(z(), &[vec![0, 0], vec![2, 0]]);
        let s = check_snf(&m);
        assert_eq!(
            s.d,
            ExactMatrix::from_i64_rows(z(), &[vec![2, 0], vec![0, 0]])
        );
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&ExactMatrix::identity(z(), 2)).is_empty());
        let k = kernel_basis(&ExactMatrix::zeros(z(), 2, 2));
        assert_eq!(k.len(), 2);
        // (n+1)x^n on Z[x]/(x^3): x^i -> 3 x^{i+2}
        let m = ExactMatrix::from_i64_rows(z(), &[vec![0, 0, 0], vec![0, 0, 0], vec![3, 0, 0]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for col in &k {
            assert!(col[0].is_zero());
        }
    }

    #[test]
    fn homology_examples() {
        let q = RingSpec::Rationals;
        let h =
            homology_of_pair(&ExactMatrix::zeros(q, 2, 0), &ExactMatrix::zeros(q, 0, 2)).unwrap();
        assert_eq!(h.descriptor, ModuleDescriptor::free(q, 2));

        let two_x = ExactMatrix::from_i64_rows(z(), &[vec![0, 0], vec![2, 0]]);
        let h = homology_of_pair(&two_x, &ExactMatrix::zeros(z(), 0, 2)).unwrap();
        assert_eq!(h.descriptor.free_rank, 1);
        assert_eq!(h.descriptor.torsion, vec![BigInt::from(2)]);

        let three_x2 =
            ExactMatrix::from_i64_rows(q, &[vec![0, 0, 0], vec![0, 0, 0], vec![3, 0, 0]]);
        let h = homology_of_pair(&ExactMatrix::zeros(q, 3, 0), &three_x2).unwrap();
        assert_eq!(h.descriptor, ModuleDescriptor::free(q, 2));
    }

    #[test]
    fn homology_rejects_non_complex() {
        let id = ExactMatrix::identity(z(), 2);
        assert_eq!(
            homology_of_pair(&id, &id).unwrap_err(),
            Error::CompositionNonzero
        );
    }

    #[test]
    fn class_coordinates_detect_boundaries() {
        let two_x = ExactMatrix::from_i64_rows(z(), &[vec![0, 0], vec![2, 0]]);
        let h = homology_of_pair(&two_x, &ExactMatrix::zeros(z(), 0, 2)).unwrap();
        let boundary = vec![Scalar::from_i64(z(), 0), Scalar::from_i64(z(), 4)];
        assert!(h.class_of(&boundary).unwrap().is_zero());
        let x = vec![Scalar::from_i64(z(), 0), Scalar::from_i64(z(), 1)];
        assert!(!h.class_of(&x).unwrap().is_zero());
    }

    #[test]
    fn direct_sum_normalizes() {
        let a = ModuleDescriptor {
            ring: z(),
            free_rank: 1,
            torsion: vec![BigInt::from(2)],
        };
        let b = ModuleDescriptor {
            ring: z(),
            free_rank: 0,
            torsion: vec![BigInt::from(3)],
        };
        let s = a.direct_sum(&b);
        assert_eq!(s.free_rank, 1);
        assert_eq!(s.torsion, vec![BigInt::from(6)]);
    }
}
