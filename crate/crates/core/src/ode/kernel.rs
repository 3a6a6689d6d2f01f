use crate::exact::{CPoly, ExactRational, Parity, RatMatrix};

use super::operator::DiffOperator;

/// Matrix of a degree-preserving operator on the monomials `c^j` allowed by
/// `parity` with `j <= bound`. Rows are the powers `c^0..c^bound`.
pub fn operator_matrix(op: &DiffOperator, bound: usize, parity: Option<Parity>) -> (RatMatrix, Vec<usize>) {
    let cols: Vec<usize> = (0..=bound).filter(|&j| parity.is_none_or(|p| p.admits(j))).collect();
    let mut m = RatMatrix::zeros(bound + 1, cols.len());
    for (col, &j) in cols.iter().enumerate() {
        let img = op.apply(&CPoly::monomial(ExactRational::one(), j));
        for (i, a) in img.coeffs().iter().enumerate() {
            if i > bound {
                // Not degree-preserving; keep the row space honest.
                panic!("operator raises degree: c^{j} -> degree {}", img.degree().unwrap_or(0));
            }
            m.set(i, col, a.clone());
        }
    }
    (m, cols)
}

/// Basis of `{p : deg p <= bound, parity as requested, op(p) = 0}`.
pub fn polynomial_kernel(op: &DiffOperator, bound: usize, parity: Option<Parity>) -> Vec<CPoly> {
    let (m, cols) = operator_matrix(op, bound, parity);
    m.nullspace()
        .into_iter()
        .map(|v| {
            let mut coeffs = vec![ExactRational::zero(); bound + 1];
            for (x, &j) in v.into_iter().zip(&cols) {
                coeffs[j] = x;
            }
            CPoly::from_coeffs(coeffs)
        })
        .collect()
}
