use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Laurent polynomial over `F_p`, stored as `x^valuation · (c_0 + c_1 x + ...)`
/// with nonzero first and last coefficients. The empty coefficient vector is
/// the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpLaurent {
    p: u64,
    #[serde(rename = "val")]
    valuation: i64,
    coeffs: Vec<u64>,
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl FpLaurent {
    /// Builds `x^valuation · Σ coeffs[i] x^i`, reducing and normalizing.
    pub fn new(p: u64, valuation: i64, coeffs: Vec<i64>) -> Result<FpLaurent> {
        if !is_prime(p) {
            return Err(Error::InvalidOrder(format!("{p} is not prime")));
        }
        let c = coeffs
            .into_iter()
            .map(|x| x.rem_euclid(p as i64) as u64)
            .collect();
        Ok(Self::normalize(p, valuation, c))
    }

    fn normalize(p: u64, mut valuation: i64, mut coeffs: Vec<u64>) -> FpLaurent {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|&&c| c == 0).count();
        coeffs.drain(..lead);
        valuation += lead as i64;
        if coeffs.is_empty() {
            valuation = 0;
        }
        FpLaurent { p, valuation, coeffs }
    }

    pub fn zero(p: u64) -> FpLaurent {
        FpLaurent {
            p,
            valuation: 0,
            coeffs: vec![],
        }
    }

    pub fn one(p: u64) -> FpLaurent {
        FpLaurent {
            p,
            valuation: 0,
            coeffs: vec![1],
        }
    }

    /// The polynomial with coefficients `coeffs[i]` of `x^i`.
    pub fn poly(p: u64, coeffs: &[i64]) -> Result<FpLaurent> {
        Self::new(p, 0, coeffs.to_vec())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Units of `F_p[x, x⁻¹]` are the nonzero monomials.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Exponent of the highest term; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.valuation + self.coeffs.len() as i64 - 1)
        }
    }

    /// Degree after factoring out the lowest power of `x`.
    pub fn span_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficient of `x^e`.
    pub fn coeff(&self, e: i64) -> u64 {
        let i = e - self.valuation;
        if i < 0 || i >= self.coeffs.len() as i64 {
            0
        } else {
            self.coeffs[i as usize]
        }
    }

    /// Multiply by a unit so that the lowest term is `x^0` and the leading
    /// coefficient is 1.
    pub fn normalized(&self) -> FpLaurent {
        if self.is_zero() {
            return self.clone();
        }
        let li = inv_mod(*self.coeffs.last().unwrap(), self.p);
        FpLaurent {
            p: self.p,
            valuation: 0,
            coeffs: self.coeffs.iter().map(|&c| c * li % self.p).collect(),
        }
    }

    fn check(&self, other: &FpLaurent) -> Result<()> {
        if self.p != other.p {
            Err(Error::FieldMismatch)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &FpLaurent) -> Result<FpLaurent> {
        self.check(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let lo = self.valuation.min(other.valuation);
        let hi = self.degree().unwrap().max(other.degree().unwrap());
        let c = (lo..=hi)
            .map(|e| (self.coeff(e) + other.coeff(e)) % self.p)
            .collect();
        Ok(Self::normalize(self.p, lo, c))
    }

    pub fn neg(&self) -> FpLaurent {
        FpLaurent {
            p: self.p,
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect(),
        }
    }

    pub fn sub(&self, other: &FpLaurent) -> Result<FpLaurent> {
        self.add(&other.neg())
    }

    /// Zero is absorbing.
    pub fn mul(&self, other: &FpLaurent) -> Result<FpLaurent> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.p));
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.p;
            }
        }
        Ok(Self::normalize(self.p, self.valuation + other.valuation, c))
    }

    /// Division with remainder of the polynomial parts (valuations ignored).
    fn poly_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r = a.to_vec();
        if b.is_empty() {
            return (vec![], r);
        }
        let db = b.len() - 1;
        let li = inv_mod(b[db], p);
        let mut q = vec![0u64; a.len().saturating_sub(db).max(1)];
        while r.len() > db {
            let lead = *r.last().unwrap();
            if lead == 0 {
                r.pop();
                continue;
            }
            let shift = r.len() - 1 - db;
            let f = lead * li % p;
            q[shift] = f;
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - f * bc % p) % p;
            }
            r.pop();
        }
        while r.last() == Some(&0) {
            r.pop();
        }
        (q, r)
    }

    /// True iff `self` divides `other` in `F_p[x, x⁻¹]`.
    pub fn divides(&self, other: &FpLaurent) -> Result<bool> {
        self.check(other)?;
        if self.is_zero() {
            return Ok(other.is_zero());
        }
        let (_, r) = Self::poly_divrem(&other.coeffs, &self.coeffs, self.p);
        Ok(r.is_empty())
    }

    /// Evaluate `Σ c_j f(n + j)` style products: the coefficient list from the
    /// lowest exponent upward.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.valuation + i as i64, c))
    }
}

/// Monic generator of the ideal `(a, b)`, normalized to valuation 0.
pub fn laurent_gcd(a: &FpLaurent, b: &FpLaurent) -> Result<FpLaurent> {
    a.check(b)?;
    let p = a.p;
    let mut x = a.coeffs.clone();
    let mut y = b.coeffs.clone();
    while !y.is_empty() {
        let (_, r) = FpLaurent::poly_divrem(&x, &y, p);
        x = std::mem::replace(&mut y, r);
    }
    Ok(FpLaurent::normalize(p, 0, x).normalized())
}

/// Generator of the ideal spanned by all inputs.
pub fn laurent_gcd_all(p: u64, polys: &[FpLaurent]) -> Result<FpLaurent> {
    polys
        .iter()
        .try_fold(FpLaurent::zero(p), |acc, q| laurent_gcd(&acc, q))
}

impl fmt::Display for FpLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let mono = match e {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            };
            parts.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, c: &[i64]) -> FpLaurent {
        FpLaurent::poly(p, c).unwrap()
    }

    #[test]
    fn canonical_form() {
        let a = FpLaurent::new(2, -3, vec![0, 0, 1, 1, 0]).unwrap();
        assert_eq!(a.valuation(), -1);
        assert_eq!(a.coeffs(), &[1, 1]);
        assert_eq!(a.degree(), Some(0));
        assert_eq!(FpLaurent::new(3, 5, vec![3, 6]).unwrap(), FpLaurent::zero(3));
        assert!(FpLaurent::new(4, 0, vec![1]).is_err());
    }

    #[test]
    fn gcd_examples() {
        let q = poly(2, &[1, 1]);
        assert_eq!(laurent_gcd(&q, &FpLaurent::zero(2)).unwrap(), q);
        let x2p1 = poly(2, &[1, 0, 1]);
        assert_eq!(laurent_gcd(&q, &x2p1).unwrap(), q);
        let irr = poly(2, &[1, 1, 1]);
        assert_eq!(laurent_gcd(&q, &irr).unwrap(), FpLaurent::one(2));
        assert_eq!(laurent_gcd(&q, &poly(3, &[1])), Err(Error::FieldMismatch));
        let shifted = FpLaurent::new(3, -4, vec![2, 1]).unwrap();
        assert_eq!(laurent_gcd(&shifted, &FpLaurent::zero(3)).unwrap(), poly(3, &[2, 1]));
    }

    #[test]
    fn arithmetic() {
        let a = poly(3, &[1, 2]);
        let b = poly(3, &[2, 1]);
        assert_eq!(a.add(&b).unwrap(), poly(3, &[0, 0]));
        assert_eq!(a.mul(&b).unwrap(), poly(3, &[2, 2, 2]));
        assert_eq!(a.mul(&FpLaurent::zero(3)).unwrap(), FpLaurent::zero(3));
        assert!(a.divides(&a.mul(&b).unwrap()).unwrap());
        assert_eq!(poly(2, &[1, 1, 1]).to_string(), "x^2 + x + 1");
    }
}
