//! Truncated generating functions `G(c, z) = sum_k z^{k+2r} P_k(c)` and the
//! identities they satisfy: the first-order ODE in `z` (denominators cleared)
//! and the per-exponent reductions of the fourth-order PDEs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{CPoly, ExactRational};
use crate::family::{check_rm, Family, FamilyType};
use crate::ode::{build_operator, DiffOperator};
use crate::parallel::map_ordered;

/// Series in `z` with `CPoly` coefficients, exact through `z^K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZSeries {
    pub truncation: usize,
    /// `coeffs[e]` multiplies `z^e`.
    pub coeffs: Vec<CPoly>,
}

impl ZSeries {
    pub fn zero(truncation: usize) -> Self {
        Self { truncation, coeffs: vec![CPoly::zero(); truncation + 1] }
    }

    /// Generating function of `f`, through `z^K`.
    pub fn from_family(f: &Family, k_trunc: usize) -> Result<Self> {
        let two_r = 2 * f.r();
        let needed = k_trunc as i64 - two_r;
        if f.kmax() < needed {
            return Err(Error::Truncation { needed, have: f.kmax() });
        }
        let coeffs = (0..=k_trunc as i64).map(|e| f.poly(e - two_r).clone()).collect();
        Ok(Self { truncation: k_trunc, coeffs })
    }

    pub fn coeff(&self, e: usize) -> CPoly {
        self.coeffs.get(e).cloned().unwrap_or_default()
    }

    /// Add `z^shift · p` in place; terms beyond the truncation are dropped.
    fn add_term(&mut self, shift: usize, p: &CPoly) {
        if shift <= self.truncation && !p.is_zero() {
            self.coeffs[shift] = &self.coeffs[shift] + p;
        }
    }

    pub fn sub(&self, other: &ZSeries) -> ZSeries {
        let t = self.truncation.min(other.truncation);
        ZSeries { truncation: t, coeffs: (0..=t).map(|e| &self.coeff(e) - &other.coeff(e)).collect() }
    }

    pub fn truncate(mut self, t: usize) -> ZSeries {
        self.coeffs.truncate(t + 1);
        self.truncation = self.truncation.min(t);
        self
    }

    /// Exponents `<= through` with a nonzero coefficient.
    pub fn nonzero_exponents(&self, through: usize) -> Vec<usize> {
        (0..=through.min(self.truncation)).filter(|&e| !self.coeffs[e].is_zero()).collect()
    }

    pub fn is_zero_through(&self, through: usize) -> bool {
        self.nonzero_exponents(through).is_empty()
    }
}

/// `z^shift · mult(c) · ∂_z^dz ∂_c^dc`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZTerm {
    pub shift: usize,
    pub mult: CPoly,
    pub dz: usize,
    pub dc: usize,
}

/// Finite sum of [`ZTerm`]s: a linear operator with polynomial coefficients in `z` and `c`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ZPolyOperator {
    pub terms: Vec<ZTerm>,
}

impl ZPolyOperator {
    pub fn term(mut self, shift: usize, mult: CPoly, dz: usize, dc: usize) -> Self {
        self.terms.push(ZTerm { shift, mult, dz, dc });
        self
    }

    /// Largest loss of exponent range, `max(dz - shift, 0)`.
    pub fn lag(&self) -> usize {
        self.terms.iter().map(|t| t.dz.saturating_sub(t.shift)).max().unwrap_or(0)
    }

    /// Image of `g`, exact through `z^(K - lag)`.
    pub fn apply(&self, g: &ZSeries) -> ZSeries {
        let out_t = g.truncation.saturating_sub(self.lag());
        let mut out = ZSeries::zero(out_t);
        for t in &self.terms {
            for (e, p) in g.coeffs.iter().enumerate() {
                if p.is_zero() || e < t.dz {
                    continue;
                }
                let target = e - t.dz + t.shift;
                if target > out_t {
                    continue;
                }
                let falling: i64 = ((e - t.dz + 1)..=e).map(|x| x as i64).product();
                let d = p.derive(t.dc).scale(&ExactRational::from_int(falling));
                out.add_term(target, &(&t.mult * &d));
            }
        }
        out
    }
}

fn int(n: i64) -> ExactRational {
    ExactRational::from_int(n)
}

fn cmono(coef: i64, deg: usize) -> CPoly {
    CPoly::monomial(int(coef), deg)
}

/// Left-hand side of the cleared first-order ODE:
/// `m z(1−2cz^r+z^{2r}) ∂_z + 2r − 2crz^r + (1−2r)m(1−2cz^r+z^{2r})`.
pub fn first_order_operator(r: i64, m: i64) -> ZPolyOperator {
    let ru = r as usize;
    ZPolyOperator::default()
        .term(1, cmono(m, 0), 1, 0)
        .term(ru + 1, cmono(-2 * m, 1), 1, 0)
        .term(2 * ru + 1, cmono(m, 0), 1, 0)
        .term(0, cmono(2 * r + (1 - 2 * r) * m, 0), 0, 0)
        .term(ru, cmono(-2 * r - 2 * (1 - 2 * r) * m, 1), 0, 0)
        .term(2 * ru, cmono((1 - 2 * r) * m, 0), 0, 0)
}

/// Right-hand side carried by the initial data on `[-2r, -1]`.
fn first_order_rhs(f: &Family, truncation: usize) -> ZSeries {
    let (r, m) = (f.r(), f.m());
    let ru = r as usize;
    let two_r = 2 * r;
    // S_w = sum k^w P_k z^{k+2r} over all seeds; primed sums over k in [-r, -1].
    let mut s0 = ZSeries::zero(truncation);
    let mut s1 = ZSeries::zero(truncation);
    let mut s0p = ZSeries::zero(truncation);
    let mut s1p = ZSeries::zero(truncation);
    for k in -two_r..0 {
        let p = f.poly(k);
        let e = (k + two_r) as usize;
        s0.add_term(e, p);
        s1.add_term(e, &p.scale(&int(k)));
        if k >= -r {
            s0p.add_term(e, p);
            s1p.add_term(e, &p.scale(&int(k)));
        }
    }
    let c = CPoly::c();
    let mut out = ZSeries::zero(truncation);
    for e in 0..=truncation {
        let (a0, a1, b0, b1) = (s0.coeff(e), s1.coeff(e), s0p.coeff(e), s1p.coeff(e));
        // −m(2cz^r − 1)S1 + (m+2r)S0
        out.add_term(e, &(&a1.scale(&int(m)) + &a0.scale(&int(m + 2 * r))));
        out.add_term(e + ru, &(&c * &a1).scale(&int(-2 * m)));
        // 2cz^r(m S1′ − (m+r)(S0 − S0′))
        let inner = &b1.scale(&int(m)) - &(&a0 - &b0).scale(&int(m + r));
        out.add_term(e + ru, &(&c * &inner).scale(&int(2)));
    }
    out
}

/// Residual of the cleared first-order ODE on the truncated generating
/// function, returned through `z^(K − 2r)`.
pub fn first_order_residual(f: &Family, k_trunc: usize) -> Result<ZSeries> {
    let g = ZSeries::from_family(f, k_trunc)?;
    let lhs = first_order_operator(f.r(), f.m()).apply(&g);
    let rhs = first_order_rhs(f, k_trunc);
    let through = k_trunc.saturating_sub(2 * f.r() as usize);
    Ok(lhs.sub(&rhs).truncate(through))
}

/// What `∂/∂v` acts as on the coefficient of `z^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentMapping {
    /// Eigenvalue `e` (the literal `z ∂/∂z`).
    ZExponent,
    /// Eigenvalue `e − 2r`, the recursion index.
    RecursionIndex,
}

impl ExponentMapping {
    pub fn eigenvalue(self, r: i64, e: i64) -> i64 {
        match self {
            ExponentMapping::ZExponent => e,
            ExponentMapping::RecursionIndex => e - 2 * r,
        }
    }
}

/// The fourth-order operator in `c` that the PDE induces on the coefficient
/// whose `∂/∂v` eigenvalue is `ev`.
pub fn per_degree_operator(t: FamilyType, r: i64, m: i64, ev: i64) -> DiffOperator {
    let q = ExactRational::ratio;
    let r2 = r * r;
    // r²((1−c²)∂² − 3c∂)
    let lc = DiffOperator::new(vec![CPoly::zero(), cmono(-3 * r2, 1), CPoly::from_ints(&[r2, 0, -r2])]);
    let lin = q(2 * (r + (1 - 2 * r) * m), m) * int(ev);
    let beta = match t {
        FamilyType::Type1 => int(ev * ev) + lin + q(2 * r * (m * (r - 1) - r), m),
        FamilyType::Type2 => int(ev * ev) + lin - int(r2),
    };
    let b = lc.add(&DiffOperator::identity().scale(&beta));
    let sq = b.compose(&b).scale(&int(m * m));
    let corr = match t {
        FamilyType::Type1 => {
            let a = m * (r - 1) - r;
            let k1 = -12 * r2 * (-(m + r) * (m + r) + m * r * (2 * r + m * (r + 2)));
            let k2 = 4 * r2 * ((m + r) * (m + r) + m * r * (-2 * r + m * (r - 2)));
            DiffOperator::new(vec![cmono(-4 * r2 * a * a, 0), cmono(k1, 1), CPoly::from_ints(&[k2, 0, -k2])])
        }
        FamilyType::Type2 => {
            let a = m + r - 2 * m * r;
            let s = -4 * r2 * a * a;
            DiffOperator::new(vec![
                cmono(s, 0),
                cmono(3 * s, 1),
                &CPoly::from_ints(&[-s, 0, s]) + &cmono(-4 * r2 * r2 * (m + 1), 0),
            ])
        }
    };
    sq.add(&corr)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentResidual {
    pub exponent: usize,
    pub residual: CPoly,
}

/// Difference between the PDE's per-degree operator and the closed-form ODE
/// operator at `n = e`, at the first exponent where they disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorDiscrepancy {
    pub exponent: usize,
    pub difference: DiffOperator,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdeReport {
    pub family_type: FamilyType,
    pub r: i64,
    pub m: i64,
    pub truncation: usize,
    /// The first mapping under which every residual vanishes, if any.
    pub mapping: Option<ExponentMapping>,
    /// Residuals under `mapping`, or under the z-exponent mapping when none works.
    pub residuals: Vec<ExponentResidual>,
    pub nonzero_exponents: Vec<usize>,
    pub all_zero: bool,
    /// Whether the per-degree operator equals the closed-form ODE operator
    /// with `n = e` for every `e <= K`.
    pub matches_ode_operator: bool,
    pub discrepancy: Option<OperatorDiscrepancy>,
}

pub fn pde_residual(t: FamilyType, r: i64, m: i64, k_trunc: usize, jobs: usize) -> Result<PdeReport> {
    check_rm(r, m)?;
    let f = Family::canonical(t, r, m, (k_trunc as i64 - 2 * r).max(0))?;
    let g = ZSeries::from_family(&f, k_trunc)?;
    let exps: Vec<usize> = (0..=k_trunc).collect();

    let run = |mapping: ExponentMapping| -> Vec<ExponentResidual> {
        map_ordered(jobs, &exps, |&e| {
            let ev = mapping.eigenvalue(r, e as i64);
            ExponentResidual { exponent: e, residual: per_degree_operator(t, r, m, ev).apply(&g.coeffs[e]) }
        })
    };
    let zero = |rs: &[ExponentResidual]| rs.iter().all(|x| x.residual.is_zero());

    let mut chosen = None;
    let mut residuals = Vec::new();
    for mapping in [ExponentMapping::ZExponent, ExponentMapping::RecursionIndex] {
        let rs = run(mapping);
        if zero(&rs) {
            chosen = Some(mapping);
            residuals = rs;
            break;
        }
        if residuals.is_empty() {
            residuals = rs;
        }
    }

    let discrepancy = exps.iter().find_map(|&e| {
        let reduced = per_degree_operator(t, r, m, e as i64);
        let ode = build_operator(t, r, m, e as i64).ok()?;
        let difference = reduced.sub(ode.diff());
        (!difference.is_zero()).then_some(OperatorDiscrepancy { exponent: e, difference })
    });

    let nonzero_exponents: Vec<usize> =
        residuals.iter().filter(|x| !x.residual.is_zero()).map(|x| x.exponent).collect();
    Ok(PdeReport {
        family_type: t,
        r,
        m,
        truncation: k_trunc,
        mapping: chosen,
        all_zero: nonzero_exponents.is_empty(),
        nonzero_exponents,
        residuals,
        matches_ode_operator: discrepancy.is_none(),
        discrepancy,
    })
}
