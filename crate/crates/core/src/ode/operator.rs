use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exact::{CPoly, ExactRational};
use crate::family::{check_rm, FamilyType};

/// Linear differential operator `sum_i a_i(c) d^i/dc^i` with polynomial
/// coefficients. `coeffs[i]` multiplies the `i`-th derivative.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DiffOperator {
    coeffs: Vec<CPoly>,
}

impl DiffOperator {
    pub fn new(mut coeffs: Vec<CPoly>) -> Self {
        while coeffs.last().is_some_and(CPoly::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn identity() -> Self {
        Self::new(vec![CPoly::one()])
    }

    /// `a(c)` times the `order`-th derivative.
    pub fn term(a: CPoly, order: usize) -> Self {
        let mut coeffs = vec![CPoly::zero(); order + 1];
        coeffs[order] = a;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[CPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> CPoly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Highest derivative with a nonzero coefficient; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn apply(&self, p: &CPoly) -> CPoly {
        let mut out = CPoly::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let d = p.derive(i);
            if !d.is_zero() {
                out = &out + &(a * &d);
            }
        }
        out
    }

    pub fn add(&self, other: &DiffOperator) -> DiffOperator {
        let n = self.coeffs.len().max(other.coeffs.len());
        DiffOperator::new((0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &DiffOperator) -> DiffOperator {
        self.add(&other.scale(&ExactRational::from_int(-1)))
    }

    pub fn scale(&self, s: &ExactRational) -> DiffOperator {
        DiffOperator::new(self.coeffs.iter().map(|a| a.scale(s)).collect())
    }

    /// `self ∘ other`, expanded with the Leibniz rule.
    pub fn compose(&self, other: &DiffOperator) -> DiffOperator {
        let mut out = vec![CPoly::zero(); (self.coeffs.len() + other.coeffs.len()).saturating_sub(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            // a D^i (b D^j) = a sum_l C(i,l) b^{(i-l)} D^{j+l}
            let mut binom = 1i64;
            for l in 0..=i {
                if l > 0 {
                    binom = binom * (i - l + 1) as i64 / l as i64;
                }
                let c = ExactRational::from_int(binom);
                for (j, b) in other.coeffs.iter().enumerate() {
                    let db = b.derive(i - l);
                    if !db.is_zero() {
                        out[j + l] = &out[j + l] + &(a * &db).scale(&c);
                    }
                }
            }
        }
        DiffOperator::new(out)
    }

    /// `Some(s)` with `self = s * other`, when `other` is nonzero.
    pub fn ratio_to(&self, other: &DiffOperator) -> Option<ExactRational> {
        if other.is_zero() {
            return None;
        }
        let i = other.coeffs.iter().position(|a| !a.is_zero())?;
        let s = self.coeff(i).ratio_to(&other.coeffs[i])?;
        (other.scale(&s) == *self).then_some(s)
    }

    /// Coefficient of `c^s` in `self(c^s)`.
    pub fn leading_symbol(&self, s: usize) -> ExactRational {
        self.apply(&CPoly::monomial(ExactRational::one(), s)).coeff(s)
    }
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({a})")?,
                1 => write!(f, "({a})·D")?,
                _ => write!(f, "({a})·D^{i}")?,
            }
        }
        Ok(())
    }
}

/// The scalars `(W, X, Y, Z)` of a fourth-order operator, plus `Δ`
/// (identically zero for type 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdeScalars {
    pub w: ExactRational,
    pub x: ExactRational,
    pub y: ExactRational,
    pub z: ExactRational,
    pub delta: ExactRational,
}

/// Fourth-order operator
/// `(c²−1)²m²r⁴ D⁴ + 10c(c²−1)m²r⁴ D³ + (Xc²+Y) D² + Zc D + W`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdeOperator {
    pub family_type: FamilyType,
    pub r: i64,
    pub m: i64,
    pub n: i64,
    pub scalars: OdeScalars,
    op: DiffOperator,
}

impl OdeOperator {
    pub fn diff(&self) -> &DiffOperator {
        &self.op
    }

    /// Coefficient of the `i`-th derivative.
    pub fn coeff(&self, i: usize) -> CPoly {
        self.op.coeff(i)
    }

    pub fn apply(&self, p: &CPoly) -> CPoly {
        self.op.apply(p)
    }

    pub fn leading_symbol(&self, s: usize) -> ExactRational {
        self.op.leading_symbol(s)
    }
}

fn type1_scalars(r: i128, m: i128, n: i128) -> [i128; 5] {
    let r2 = r * r;
    let w = n * (n - 2 * r) * (m * (n - 2 * r + 2) + 2 * r) * (m * (n - 4 * r + 2) + 2 * r);
    let x =
        r2 * (-2 * m * m * ((n + 2) * n + 2) + 4 * m * r * (m * (2 * n + 3) - n - 2) + r2 * (3 * m * (5 * m + 4) - 4));
    let y = r2 * (2 * m * m * ((n + 2) * n + 2) - 4 * m * r * (m * (2 * n + 3) - n - 2) - 16 * m * r2);
    let z =
        -3 * r2 * (m * m * (-8 * n * r + 2 * (n + 2) * n + 5 * r2 - 12 * r + 4) + 4 * m * r * (n - 3 * r + 2) + 4 * r2);
    [w, x, y, z, 0]
}

fn type2_scalars(r: i128, m: i128, n: i128) -> [i128; 5] {
    let r2 = r * r;
    let delta = r2 * (r - 2) * m * (2 * m * n - 7 * m * r + 2 * m + 4 * r);
    let w = (n * n - r2) * (m * (n - 5 * r + 2) + 2 * r) * (m * (n - 3 * r + 2) + 2 * r);
    let x = -2 * r2 * (m * m * ((n - r) * (n - 2 * r) - 10 * r2) + 2 * m * r * (n - 3 * r) + 2 * r2) + delta;
    let y = 2 * r2 * (m * m * ((n - r) * (n - 2 * r) - (2 * r2 + r)) + 2 * m * r * (n - 4 * r))
        - r2 * (r - 2) * m * (2 * m * n - 6 * m * r + 2 * m + 4 * r);
    let z = -3 * r2 * (2 * m * m * (n - r) * (n - 2 * r) + 4 * m * r * (n - 3 * r) + 4 * r2) + 3 * delta;
    [w, x, y, z, delta]
}

/// The closed-form fourth-order operator of the given family type.
pub fn build_operator(t: FamilyType, r: i64, m: i64, n: i64) -> Result<OdeOperator> {
    check_rm(r, m)?;
    let (ri, mi, ni) = (r as i128, m as i128, n as i128);
    let s = match t {
        FamilyType::Type1 => type1_scalars(ri, mi, ni),
        FamilyType::Type2 => type2_scalars(ri, mi, ni),
    };
    let q = |v: i128| ExactRational::from_bigint(v.into());
    let scalars = OdeScalars { w: q(s[0]), x: q(s[1]), y: q(s[2]), z: q(s[3]), delta: q(s[4]) };

    let lead = ExactRational::from_int(m * m * r.pow(4));
    let c2m1 = CPoly::from_ints(&[-1, 0, 1]);
    let op = DiffOperator::new(vec![
        CPoly::constant(scalars.w.clone()),
        CPoly::monomial(scalars.z.clone(), 1),
        CPoly::from_coeffs(vec![scalars.y.clone(), ExactRational::zero(), scalars.x.clone()]),
        c2m1.shift(1).scale(&(lead.clone() * ExactRational::from_int(10))),
        (&c2m1 * &c2m1).scale(&lead),
    ]);
    Ok(OdeOperator { family_type: t, r, m, n, scalars, op })
}
