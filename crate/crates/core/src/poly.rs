//! Integer polynomials in δ.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg};

use serde::{Deserialize, Serialize};

/// A polynomial in ℤ[δ], stored as coefficients by increasing exponent without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DeltaPoly(Vec<i64>);

impl DeltaPoly {
    pub fn zero() -> Self {
        DeltaPoly(Vec::new())
    }

    pub fn one() -> Self {
        DeltaPoly(vec![1])
    }

    pub fn delta() -> Self {
        DeltaPoly(vec![0, 1])
    }

    /// `c·δ^p`.
    pub fn monomial(c: i64, p: usize) -> Self {
        let mut v = vec![0; p + 1];
        v[p] = c;
        DeltaPoly::from_coeffs(v)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_coeffs(mut v: Vec<i64>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        DeltaPoly(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
}

impl Add for &DeltaPoly {
    type Output = DeltaPoly;
    fn add(self, o: &DeltaPoly) -> DeltaPoly {
        let n = self.0.len().max(o.0.len());
        let v = (0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + o.0.get(i).copied().unwrap_or(0))
            .collect();
        DeltaPoly::from_coeffs(v)
    }
}

impl Add for DeltaPoly {
    type Output = DeltaPoly;
    fn add(self, o: DeltaPoly) -> DeltaPoly {
        &self + &o
    }
}

impl AddAssign<&DeltaPoly> for DeltaPoly {
    fn add_assign(&mut self, o: &DeltaPoly) {
        *self = &*self + o;
    }
}

impl Mul for &DeltaPoly {
    type Output = DeltaPoly;
    fn mul(self, o: &DeltaPoly) -> DeltaPoly {
        if self.is_zero() || o.is_zero() {
            return DeltaPoly::zero();
        }
        let mut v = vec![0; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        DeltaPoly::from_coeffs(v)
    }
}

impl Mul for DeltaPoly {
    type Output = DeltaPoly;
    fn mul(self, o: DeltaPoly) -> DeltaPoly {
        &self * &o
    }
}

impl Neg for DeltaPoly {
    type Output = DeltaPoly;
    fn neg(self) -> DeltaPoly {
        DeltaPoly(self.0.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for DeltaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let a = c.abs();
            let coef = if a == 1 && p > 0 { String::new() } else { a.to_string() };
            let var = match p {
                0 => String::new(),
                1 => "δ".to_string(),
                _ => format!("δ^{p}"),
            };
            write!(f, "{sign}{coef}{var}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let d = DeltaPoly::delta();
        let two = DeltaPoly::constant(2);
        assert_eq!(&d * &d, DeltaPoly::monomial(1, 2));
        assert_eq!((&d + &two).coeffs(), &[2, 1]);
        assert!((&d + &(-d.clone())).is_zero());
        assert_eq!(DeltaPoly::from_coeffs(vec![1, 0, 0]), DeltaPoly::one());
    }

    #[test]
    fn display() {
        assert_eq!(DeltaPoly::from_coeffs(vec![1, -2, 3]).to_string(), "3δ^2-2δ+1");
        assert_eq!(DeltaPoly::zero().to_string(), "0");
        assert_eq!(DeltaPoly::delta().to_string(), "δ");
    }
}
