//! Blind search for a linear ODE annihilating a whole family.
//!
//! Ansatz: `sum_{i<=order} sum_{j<=bounds[i]} sum_{l<=n_degree} θ_{ijl} n^l c^j D^i`
//! with `n = k + 2r`. Every member contributes the vanishing of each
//! `c`-coefficient of the image, which is linear in θ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{primitive_integer_vector, CPoly, ExactRational, RatMatrix};
use crate::family::Family;

use super::operator::DiffOperator;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitSpec {
    pub order: usize,
    /// `bounds[i]`: maximal power of `c` in the coefficient of `D^i`.
    pub coeff_degree_bounds: Vec<usize>,
    pub n_degree: usize,
}

impl FitSpec {
    /// Fourth order, coefficient of `D^i` of degree at most `i`, scalars of
    /// degree at most 4 in `n`.
    pub fn fourth_order() -> Self {
        Self { order: 4, coeff_degree_bounds: vec![0, 1, 2, 3, 4], n_degree: 4 }
    }

    pub fn unknowns(&self) -> usize {
        self.coeff_degree_bounds.iter().map(|b| (b + 1) * (self.n_degree + 1)).sum()
    }

    fn validate(&self) -> Result<()> {
        if self.coeff_degree_bounds.len() != self.order + 1 {
            return Err(Error::ParameterDomain(format!(
                "order {} needs {} degree bounds, got {}",
                self.order,
                self.order + 1,
                self.coeff_degree_bounds.len()
            )));
        }
        Ok(())
    }

    /// Flat position of `θ_{ijl}`.
    fn slots(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (i, &b) in self.coeff_degree_bounds.iter().enumerate() {
            for j in 0..=b {
                for l in 0..=self.n_degree {
                    out.push((i, j, l));
                }
            }
        }
        out
    }
}

/// A fitted operator family, polynomial in `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FittedOperator {
    pub spec: FitSpec,
    /// `n = k + n_shift`.
    pub n_shift: i64,
    /// θ in `(i, j, l)` lexicographic order; first nonzero entry is 1.
    pub theta: Vec<ExactRational>,
}

impl FittedOperator {
    /// The operator in `c` at a fixed `n`.
    pub fn at(&self, n: i64) -> DiffOperator {
        let mut coeffs =
            vec![
                vec![ExactRational::zero(); self.spec.coeff_degree_bounds.iter().max().map_or(0, |b| b + 1)];
                self.spec.order + 1
            ];
        let nq = ExactRational::from_int(n);
        for ((i, j, l), t) in self.spec.slots().into_iter().zip(&self.theta) {
            if !t.is_zero() {
                coeffs[i][j] += &(t * nq.pow(l as u32));
            }
        }
        DiffOperator::new(coeffs.into_iter().map(CPoly::from_coeffs).collect())
    }

    pub fn annihilates(&self, k: i64, p: &CPoly) -> bool {
        self.at(k + self.n_shift).apply(p).is_zero()
    }

    /// A single scalar `λ` with `self.at(n) = λ·reference(n)` for every `n`
    /// in `ns`, if one exists.
    pub fn proportional_to(
        &self,
        reference: impl Fn(i64) -> DiffOperator,
        ns: impl IntoIterator<Item = i64>,
    ) -> Option<ExactRational> {
        let mut lambda: Option<ExactRational> = None;
        for n in ns {
            let (mine, theirs) = (self.at(n), reference(n));
            if theirs.is_zero() {
                if !mine.is_zero() {
                    return None;
                }
                continue;
            }
            let s = mine.ratio_to(&theirs)?;
            match &lambda {
                None => lambda = Some(s),
                Some(l) if *l != s => return None,
                _ => {}
            }
        }
        lambda.filter(|l| !l.is_zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FitOutcome {
    /// One-dimensional solution space.
    Candidate { operator: FittedOperator, training_k: Vec<i64>, holdout_k: Vec<i64>, holdout_pass: bool },
    /// More than one independent operator fits; the basis is reported as is.
    Ambiguous { dimension: usize, basis: Vec<FittedOperator>, training_k: Vec<i64>, holdout_k: Vec<i64> },
    /// Only the zero operator fits.
    NoOperator { training_k: Vec<i64> },
}

/// Equations contributed by one member, scaled to integer content.
fn member_rows(spec: &FitSpec, slots: &[(usize, usize, usize)], n: i64, p: &CPoly) -> Vec<Vec<ExactRational>> {
    let prim: Vec<ExactRational> =
        primitive_integer_vector(p.coeffs()).into_iter().map(ExactRational::from_bigint).collect();
    let p = CPoly::from_coeffs(prim);
    let derivs: Vec<CPoly> = (0..=spec.order).map(|i| p.derive(i)).collect();
    let top = p.degree().unwrap_or(0) + spec.coeff_degree_bounds.iter().max().copied().unwrap_or(0);
    let npow: Vec<ExactRational> = (0..=spec.n_degree as u32).map(|l| ExactRational::from_int(n).pow(l)).collect();
    (0..=top)
        .map(|e| {
            slots
                .iter()
                .map(|&(i, j, l)| if e < j { ExactRational::zero() } else { derivs[i].coeff(e - j) * &npow[l] })
                .collect()
        })
        .filter(|row: &Vec<ExactRational>| row.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Fit on the leading members until there are twice as many equations as
/// unknowns (keeping at least two members back), then verify on the rest.
pub fn fit_ode(f: &Family, spec: &FitSpec) -> Result<FitOutcome> {
    spec.validate()?;
    let n_shift = 2 * f.r();
    let slots = spec.slots();
    let unknowns = slots.len();
    let members: Vec<(i64, &CPoly)> = f.nonzero_members().collect();
    if members.len() < 3 {
        return Err(Error::InsufficientData(format!("{} nonzero members", members.len())));
    }

    let mut rows = Vec::new();
    let mut training_k = Vec::new();
    for (k, p) in &members[..members.len() - 2] {
        rows.extend(member_rows(spec, &slots, k + n_shift, p));
        training_k.push(*k);
        if rows.len() >= 2 * unknowns {
            break;
        }
    }
    if rows.len() < unknowns {
        return Err(Error::InsufficientData(format!(
            "{} equations for {unknowns} unknowns; generate more members",
            rows.len()
        )));
    }
    let holdout: Vec<(i64, &CPoly)> = members[training_k.len()..].to_vec();
    let holdout_k: Vec<i64> = holdout.iter().map(|(k, _)| *k).collect();

    let basis: Vec<FittedOperator> = RatMatrix::from_rows(rows)?
        .nullspace()
        .into_iter()
        .map(|theta| FittedOperator { spec: spec.clone(), n_shift, theta })
        .collect();
    Ok(match basis.len() {
        0 => FitOutcome::NoOperator { training_k },
        1 => {
            let operator = basis.into_iter().next().expect("one vector");
            let holdout_pass = holdout.iter().all(|(k, p)| operator.annihilates(*k, p));
            FitOutcome::Candidate { operator, training_k, holdout_k, holdout_pass }
        }
        d => FitOutcome::Ambiguous { dimension: d, basis, training_k, holdout_k },
    })
}
