use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ExactRational;
use crate::error::Error;

/// Dense rectangular matrix over the rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![ExactRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ExactRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactRational>>) -> Result<Self, Error> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("rows have differing lengths".into()));
        }
        let n = rows.len();
        Ok(Self { rows: n, cols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self, Error> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| ExactRational::from_int(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExactRational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[ExactRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[ExactRational]) -> Result<Vec<ExactRational>, Error> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix, Error> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    ///
    /// One vector per free column of the reduced echelon form, in increasing
    /// column order, each scaled so its first nonzero entry is 1. Empty iff
    /// the kernel is trivial.
    pub fn nullspace(&self) -> Vec<Vec<ExactRational>> {
        let Echelon { rows, pivots } = self.echelon();
        let reduced = back_substitute(rows, &pivots, self.cols);

        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|free| {
                let mut v = vec![ExactRational::zero(); self.cols];
                v[free] = ExactRational::one();
                for (row, &p) in reduced.iter().zip(&pivots) {
                    v[p] = -&row[free];
                }
                normalize_first_nonzero(&mut v);
                v
            })
            .collect()
    }

    /// Fraction-free (Bareiss) row echelon form of the denominator-cleared
    /// integer matrix. Row scaling does not change the kernel.
    fn echelon(&self) -> Echelon {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = ExactRational::lcm_denominators(row);
                row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
            })
            .filter(|r: &Vec<BigInt>| r.iter().any(|x| !x.is_zero()))
            .collect();

        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for col in 0..self.cols {
            if r == a.len() {
                break;
            }
            // Smallest-magnitude pivot keeps the minors a little smaller.
            let Some(p) = (r..a.len()).filter(|&i| !a[i][col].is_zero()).min_by_key(|&i| a[i][col].bits()) else {
                continue;
            };
            a.swap(r, p);
            let (head, tail) = a.split_at_mut(r + 1);
            let pivot_row = &head[r];
            let pv = &pivot_row[col];
            for row in tail.iter_mut() {
                let f = std::mem::take(&mut row[col]);
                for j in col + 1..self.cols {
                    let num = pv * &row[j] - &f * &pivot_row[j];
                    debug_assert!(num.is_multiple_of(&prev));
                    row[j] = num / &prev;
                }
            }
            prev = pivot_row[col].clone();
            pivots.push(col);
            r += 1;
        }
        a.truncate(r);
        Echelon { rows: a, pivots }
    }
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

/// Reduced row echelon form (pivot entries 1, zeros above and below) from an
/// integer echelon form.
fn back_substitute(rows: Vec<Vec<BigInt>>, pivots: &[usize], cols: usize) -> Vec<Vec<ExactRational>> {
    let mut reduced: Vec<Vec<ExactRational>> = rows
        .into_iter()
        .zip(pivots)
        .map(|(row, &p)| {
            let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            let pv = ExactRational::from_bigint(&row[p] / &g);
            row.into_iter().map(|x| ExactRational::from_bigint(x / &g) / &pv).collect()
        })
        .collect();
    for i in (0..reduced.len()).rev() {
        let p = pivots[i];
        let (above, rest) = reduced.split_at_mut(i);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            let f = row[p].clone();
            if f.is_zero() {
                continue;
            }
            for j in p..cols {
                if !pivot_row[j].is_zero() {
                    let d = &f * &pivot_row[j];
                    row[j] -= &d;
                }
            }
        }
    }
    reduced
}

fn normalize_first_nonzero(v: &mut [ExactRational]) {
    if let Some(first) = v.iter().find(|x| !x.is_zero()).cloned() {
        if !first.is_one() {
            for x in v.iter_mut() {
                *x = &*x / &first;
            }
        }
    }
}

/// Scale a vector of rationals to a primitive integer vector whose first
/// nonzero entry is positive.
pub fn primitive_integer_vector(v: &[ExactRational]) -> Vec<BigInt> {
    let l = ExactRational::lcm_denominators(v);
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}
