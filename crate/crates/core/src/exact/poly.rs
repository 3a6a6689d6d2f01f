use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExactRational;

/// Parity of a polynomial in `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_degree(d: usize) -> Self {
        if d.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn admits(self, degree: usize) -> bool {
        Parity::of_degree(degree) == self
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// Dense univariate polynomial in `c` over the rationals. Index = power of `c`.
///
/// Trailing zeros are never stored, so the zero polynomial has no coefficients
/// and structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CPoly {
    coeffs: Vec<ExactRational>,
}

impl CPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ExactRational::one())
    }

    pub fn constant(q: ExactRational) -> Self {
        Self::from_coeffs(vec![q])
    }

    /// The polynomial `c`.
    pub fn c() -> Self {
        Self::monomial(ExactRational::one(), 1)
    }

    pub fn monomial(coeff: ExactRational, degree: usize) -> Self {
        let mut coeffs = vec![ExactRational::zero(); degree + 1];
        coeffs[degree] = coeff;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<ExactRational>) -> Self {
        while coeffs.last().is_some_and(ExactRational::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&v| ExactRational::from_int(v)).collect())
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// Coefficient of `c^i`; zero past the degree.
    pub fn coeff(&self, i: usize) -> ExactRational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&ExactRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, s: &ExactRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|a| a * s).collect())
    }

    /// Multiply by `c^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![ExactRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Exact `order`-th derivative with respect to `c`.
    pub fn derive(&self, order: usize) -> Self {
        if order >= self.coeffs.len() {
            return Self::zero();
        }
        let coeffs = (order..self.coeffs.len())
            .map(|i| {
                let falling: i64 = ((i - order + 1)..=i).map(|t| t as i64).product();
                &self.coeffs[i] * ExactRational::from_int(falling)
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        self.coeffs.iter().rev().fold(ExactRational::zero(), |acc, a| acc * x + a)
    }

    /// `Some(parity)` when only even or only odd powers occur; `None` for mixed
    /// parity and for the zero polynomial.
    pub fn parity(&self) -> Option<Parity> {
        let mut seen = None;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let p = Parity::of_degree(i);
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        seen
    }

    pub fn has_parity(&self, parity: Parity) -> bool {
        self.coeffs.iter().enumerate().all(|(i, a)| a.is_zero() || parity.admits(i))
    }

    pub fn part(&self, parity: Parity) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| if parity.admits(i) { a.clone() } else { ExactRational::zero() })
                .collect(),
        )
    }

    /// `Some(s)` with `self = s * other` when the two are proportional and
    /// `other` is nonzero.
    pub fn ratio_to(&self, other: &CPoly) -> Option<ExactRational> {
        let lead = other.leading()?;
        if self.degree() != other.degree() {
            return if self.is_zero() { Some(ExactRational::zero()) } else { None };
        }
        let s = self.leading()? / lead;
        (other.scale(&s) == *self).then_some(s)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Option<Self> {
        let lead = self.leading()?.recip()?;
        Some(self.scale(&lead))
    }
}

impl Add<&CPoly> for &CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&CPoly> for &CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&CPoly> for &CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        if self.is_zero() || rhs.is_zero() {
            return CPoly::zero();
        }
        let mut out = vec![ExactRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        CPoly::from_coeffs(out)
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        CPoly::from_coeffs(self.coeffs.iter().map(|a| -a).collect())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<CPoly> for CPoly {
            type Output = CPoly;
            fn $method(self, rhs: CPoly) -> CPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CPoly> for CPoly {
            type Output = CPoly;
            fn $method(self, rhs: &CPoly) -> CPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<CPoly> for &CPoly {
            type Output = CPoly;
            fn $method(self, rhs: CPoly) -> CPoly {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        -&self
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "c")?,
                (1, false) => write!(f, "{mag}*c")?,
                (_, true) => write!(f, "c^{i}")?,
                (_, false) => write!(f, "{mag}*c^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CPoly({self})")
    }
}

impl Serialize for CPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(CPoly::from_coeffs(Vec::<ExactRational>::deserialize(deserializer)?))
    }
}
