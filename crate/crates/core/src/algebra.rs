//! The truncated polynomial algebra `R[x]/(x^{n+1})` with `|x| = 2m`.

use std::fmt;

use crate::arith::{RingSpec, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedPolyAlgebra {
    ring: RingSpec,
    n: usize,
    m: usize,
}

impl TruncatedPolyAlgebra {
    pub fn new(ring: RingSpec, n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidParameters(format!(
                "need n >= 1 and m >= 1, got n = {n}, m = {m}"
            )));
        }
        Ok(TruncatedPolyAlgebra { ring, n, m })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Degree of `x^k`, i.e. `2mk`.
    pub fn exponent_degree(&self, k: usize) -> i64 {
        2 * (self.m * k) as i64
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            parent: *self,
            coeffs: vec![self.ring.zero(); self.n + 1],
        }
    }

    pub fn one(&self) -> AlgebraElement {
        self.x_pow(0)
    }

    /// `x^k`, which is zero once `k > n`.
    pub fn x_pow(&self, k: usize) -> AlgebraElement {
        self.monomial(self.ring.one(), k)
    }

    pub fn monomial(&self, c: Scalar, k: usize) -> AlgebraElement {
        let mut e = self.zero();
        if k <= self.n {
            e.coeffs[k] = c;
        }
        e
    }

    pub fn element(&self, coeffs: Vec<Scalar>) -> Result<AlgebraElement> {
        if coeffs.len() != self.n + 1 {
            return Err(Error::InvalidParameters(format!(
                "expected {} coefficients, got {}",
                self.n + 1,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| c.ring() != self.ring) {
            return Err(Error::ParentMismatch);
        }
        Ok(AlgebraElement {
            parent: *self,
            coeffs,
        })
    }

    pub fn from_i64s(&self, coeffs: &[i64]) -> Result<AlgebraElement> {
        self.element(
            coeffs
                .iter()
                .map(|&c| Scalar::from_i64(self.ring, c))
                .collect(),
        )
    }

    /// Exponent of the Poincaré dual of `x^k`.
    pub fn dual_basis_exponent(&self, k: usize) -> Result<usize> {
        if k > self.n {
            return Err(Error::ExponentOutOfRange {
                exponent: k,
                n: self.n,
            });
        }
        Ok(self.n - k)
    }
}

impl fmt::Display for TruncatedPolyAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[x]/(x^{}), |x| = {}",
            self.ring,
            self.n + 1,
            2 * self.m
        )
    }
}

/// Element of `A`, stored as coefficients of `1, x, ..., x^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    parent: TruncatedPolyAlgebra,
    coeffs: Vec<Scalar>,
}

impl AlgebraElement {
    pub fn parent(&self) -> &TruncatedPolyAlgebra {
        &self.parent
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Scalar {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn multiply(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        if self.parent != other.parent {
            return Err(Error::ParentMismatch);
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &AlgebraElement) -> AlgebraElement {
        let n = self.parent.n;
        let mut out = self.parent.zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] = out.coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        out
    }

    /// Product with `x^k`.
    pub fn shift(&self, k: usize) -> AlgebraElement {
        let n = self.parent.n;
        let mut out = self.parent.zero();
        for i in 0..=n {
            if i + k <= n {
                out.coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        out
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        if self.parent != other.parent {
            return Err(Error::ParentMismatch);
        }
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    pub(crate) fn add_assign(&mut self, other: &AlgebraElement) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a = a.add(b);
            }
        }
    }

    pub fn neg(&self) -> AlgebraElement {
        self.scale(&self.parent.ring.one().neg())
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        AlgebraElement {
            parent: self.parent,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// The single exponent carrying a nonzero coefficient, if there is exactly one.
    pub fn homogeneous_exponent(&self) -> Option<usize> {
        let mut it = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero());
        let (k, _) = it.next()?;
        it.next().is_none().then_some(k)
    }

    /// `2mk` for a nonzero multiple of `x^k`; `None` for zero or mixed input.
    pub fn degree(&self) -> Option<i64> {
        self.homogeneous_exponent()
            .map(|k| self.parent.exponent_degree(k))
    }

    /// The pairing `<1, a>`: the coefficient of `x^n`.
    pub fn top_coefficient(&self) -> Scalar {
        self.coeffs[self.parent.n].clone()
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}{var}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
