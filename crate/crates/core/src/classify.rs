//! Initial-condition taxonomy, superposition certification, and the
//! Gegenbauer reductions of the `j0 = -1` and `j0 = -r-1` families.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{CPoly, ExactRational, RatMatrix};
use crate::family::{check_rm, Family, FamilyParams};
use crate::ode::DiffOperator;
use crate::parallel::map_ordered;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InitialKind {
    #[serde(rename = "A_type1")]
    AType1,
    #[serde(rename = "A_prime_type2")]
    APrimeType2,
    #[serde(rename = "B_linear_combination")]
    BLinearCombination,
    #[serde(rename = "C_case3")]
    CCase3,
    #[serde(rename = "C_new")]
    CNew,
}

pub fn classify(r: i64, m: i64, j0: i64) -> Result<InitialKind> {
    FamilyParams::new(r, m, j0)?;
    Ok(match j0 {
        j if j == -2 * r => InitialKind::AType1,
        j if j == -r => InitialKind::APrimeType2,
        j if j < -r => InitialKind::BLinearCombination,
        -1 => InitialKind::CCase3,
        _ => InitialKind::CNew,
    })
}

/// Outcome of fitting `P_{j0,k} = α·P_{−2r,k} + β·P_{−r,k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Superposition {
    pub r: i64,
    pub m: i64,
    pub j0: i64,
    pub alpha: ExactRational,
    pub beta: ExactRational,
    /// Members whose equations fixed `(α, β)`; empty for the degenerate cases.
    pub fitted_from: Vec<i64>,
    /// Members (any of the three nonzero) where the identity holds.
    pub certified_k: Vec<i64>,
    /// Members where it fails.
    pub violations: Vec<i64>,
    pub pass: bool,
}

struct Triple<'a> {
    target: &'a Family,
    a: &'a Family,
    b: &'a Family,
}

impl Triple<'_> {
    /// Solve from the first two independent coefficient equations over `ks`.
    fn fit(&self, ks: &[(i64, i64, i64)]) -> Result<(ExactRational, ExactRational, Vec<i64>)> {
        let mut first: Option<(ExactRational, ExactRational, ExactRational, i64)> = None;
        for &(kt, ka, kb) in ks {
            let (t, a, b) = (self.target.poly(kt), self.a.poly(ka), self.b.poly(kb));
            let top = [t.degree(), a.degree(), b.degree()].into_iter().flatten().max();
            let Some(top) = top else { continue };
            for e in 0..=top {
                let (x, y, z) = (a.coeff(e), b.coeff(e), t.coeff(e));
                if x.is_zero() && y.is_zero() {
                    continue;
                }
                match &first {
                    None => first = Some((x, y, z, kt)),
                    Some((x0, y0, z0, k0)) => {
                        let det = x0 * &y - &(y0 * &x);
                        if det.is_zero() {
                            continue;
                        }
                        let alpha = (z0 * &y - &(y0 * &z)) / &det;
                        let beta = (x0 * &z - &(z0 * &x)) / &det;
                        return Ok((alpha, beta, vec![*k0, kt]));
                    }
                }
            }
        }
        Err(Error::FitDegeneracy("fewer than two independent equations".into()))
    }

    fn certify(&self, ks: &[(i64, i64, i64)], alpha: &ExactRational, beta: &ExactRational) -> (Vec<i64>, Vec<i64>) {
        let (mut ok, mut bad) = (Vec::new(), Vec::new());
        for &(kt, ka, kb) in ks {
            let (t, a, b) = (self.target.poly(kt), self.a.poly(ka), self.b.poly(kb));
            if t.is_zero() && a.is_zero() && b.is_zero() {
                continue;
            }
            if *t == &a.scale(alpha) + &b.scale(beta) {
                ok.push(kt);
            } else {
                bad.push(kt);
            }
        }
        (ok, bad)
    }
}

/// Fit `(α, β)` at equal indices over the generated members `0..=kmax` and
/// certify the identity on every one of them.
pub fn superposition_fit(r: i64, m: i64, j0: i64, kmax: i64) -> Result<Superposition> {
    let kind = classify(r, m, j0)?;
    let target = Family::generate(FamilyParams::new(r, m, j0)?, kmax)?;
    let a = Family::generate(FamilyParams::new(r, m, -2 * r)?, kmax)?;
    let b = Family::generate(FamilyParams::new(r, m, -r)?, kmax)?;
    let triple = Triple { target: &target, a: &a, b: &b };
    let ks: Vec<(i64, i64, i64)> = (0..=kmax).map(|k| (k, k, k)).collect();

    let (alpha, beta, fitted_from) = match kind {
        InitialKind::AType1 => (ExactRational::one(), ExactRational::zero(), Vec::new()),
        InitialKind::APrimeType2 => (ExactRational::zero(), ExactRational::one(), Vec::new()),
        InitialKind::BLinearCombination => triple.fit(&ks)?,
        _ => {
            return Err(Error::ParameterDomain(format!(
                "j0 = {j0} is not in the superposition range [{}, {}]",
                -2 * r,
                -r
            )))
        }
    };
    let (certified_k, violations) = triple.certify(&ks, &alpha, &beta);
    Ok(Superposition { r, m, j0, pass: violations.is_empty(), alpha, beta, fitted_from, certified_k, violations })
}

/// Superposition with independent index shifts on the two canonical families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftedSuperposition {
    pub shift_type1: i64,
    pub shift_type2: i64,
    pub alpha: ExactRational,
    pub beta: ExactRational,
    pub certified_k: Vec<i64>,
}

/// Diagnostic: search `P_{j0,k} = α P_{−2r,k+s1} + β P_{−r,k+s2}` over
/// `|s1|, |s2| <= max_shift`, certified on every `k` in range.
pub fn shifted_superposition_search(
    r: i64,
    m: i64,
    j0: i64,
    kmax: i64,
    max_shift: i64,
) -> Result<Option<ShiftedSuperposition>> {
    let target = Family::generate(FamilyParams::new(r, m, j0)?, kmax)?;
    let a = Family::generate(FamilyParams::new(r, m, -2 * r)?, kmax + max_shift)?;
    let b = Family::generate(FamilyParams::new(r, m, -r)?, kmax + max_shift)?;
    let triple = Triple { target: &target, a: &a, b: &b };
    for s1 in -max_shift..=max_shift {
        for s2 in -max_shift..=max_shift {
            let ks: Vec<(i64, i64, i64)> =
                (0..=kmax).filter(|k| k + s1 >= -2 * r && k + s2 >= -2 * r).map(|k| (k, k + s1, k + s2)).collect();
            let Ok((alpha, beta, _)) = triple.fit(&ks) else { continue };
            let (ok, bad) = triple.certify(&ks, &alpha, &beta);
            if bad.is_empty() && !ok.is_empty() {
                return Ok(Some(ShiftedSuperposition {
                    shift_type1: s1,
                    shift_type2: s2,
                    alpha,
                    beta,
                    certified_k: ok,
                }));
            }
        }
    }
    Ok(None)
}

/// `(1−c²)D² − (2/m+3)c D + n(2/m+n+2)`.
pub fn gegenbauer_ode(m: i64, n: i64) -> DiffOperator {
    let q = ExactRational::ratio;
    DiffOperator::new(vec![
        CPoly::constant(ExactRational::from_int(n) * q(2 + (n + 2) * m, m)),
        CPoly::monomial(-q(2 + 3 * m, m), 1),
        CPoly::from_ints(&[1, 0, -1]),
    ])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GegenbauerBasis {
    pub m: i64,
    pub lambda: ExactRational,
    pub polys: Vec<CPoly>,
    /// Every `Q_n` satisfies its second-order ODE exactly.
    pub certified: bool,
}

/// `Q_0..Q_nmax` for `λ = 1 + 1/m` by the three-term recurrence, each checked
/// against the second-order ODE.
pub fn gegenbauer(m: i64, nmax: usize) -> Result<GegenbauerBasis> {
    if m < 2 {
        return Err(Error::ParameterDomain(format!("m = {m} < 2")));
    }
    let lambda = ExactRational::ratio(m + 1, m);
    let two = ExactRational::from_int(2);
    let mut polys = vec![CPoly::one()];
    if nmax >= 1 {
        polys.push(CPoly::monomial(&two * &lambda, 1));
    }
    for n in 1..nmax {
        let nq = ExactRational::from_int(n as i64);
        let a = &two * &(&nq + &lambda);
        let b = &nq + &(&two * &lambda) - ExactRational::one();
        let next = &polys[n].shift(1).scale(&a) - &polys[n - 1].scale(&b);
        polys.push(next.scale(&ExactRational::from_int(n as i64 + 1).recip().expect("n+1 > 0")));
    }
    let certified = polys.iter().enumerate().all(|(n, q)| gegenbauer_ode(m, n as i64).apply(q).is_zero());
    Ok(GegenbauerBasis { m, lambda, polys, certified })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionCase {
    /// `j0 = -1`: expected single `Q_n` multiples.
    Case3,
    /// `j0 = -r-1`: expected two-term combinations `a Q_n + b c Q_{n-1}`.
    Case4,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingleQ {
    pub n: usize,
    pub scalar: ExactRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoTerm {
    pub n: usize,
    pub a: ExactRational,
    pub b: ExactRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionMember {
    pub k: i64,
    pub degree: usize,
    /// `P = scalar · Q_degree`, if so.
    pub single_q: Option<SingleQ>,
    /// `P` satisfies the second-order ODE with `n = degree`.
    pub satisfies_ode: bool,
    /// `P = a Q_n + b c Q_{n−1}` with `n = degree`, if so.
    pub two_term: Option<TwoTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub r: i64,
    pub m: i64,
    pub j0: i64,
    pub case: ReductionCase,
    pub lambda: ExactRational,
    pub members: Vec<ReductionMember>,
    pub pass: bool,
    pub findings: Vec<String>,
}

fn two_term_fit(p: &CPoly, basis: &[CPoly], n: usize) -> Option<TwoTerm> {
    let q = &basis[n];
    let cq = if n == 0 { CPoly::zero() } else { basis[n - 1].shift(1) };
    let rows: Vec<Vec<ExactRational>> = (0..=n).map(|e| vec![q.coeff(e), cq.coeff(e), p.coeff(e)]).collect();
    let ns = RatMatrix::from_rows(rows).ok()?.nullspace();
    let v = ns.into_iter().find(|v| !v[2].is_zero())?;
    let s = -v[2].recip()?;
    Some(TwoTerm { n, a: &v[0] * &s, b: &v[1] * &s })
}

/// Examine the first `count` nonzero members of the `j0 ∈ {−1, −r−1}` family
/// against the Gegenbauer basis with `λ = 1 + 1/m`.
pub fn verify_gegenbauer_reduction(r: i64, m: i64, j0: i64, count: usize) -> Result<ReductionReport> {
    check_rm(r, m)?;
    let case = if j0 == -1 {
        ReductionCase::Case3
    } else if j0 == -r - 1 {
        ReductionCase::Case4
    } else {
        return Err(Error::ParameterDomain(format!("j0 = {j0}: expected -1 or {}", -r - 1)));
    };
    let mut f = Family::generate(FamilyParams::new(r, m, j0)?, (count as i64 + 2) * r)?;
    while f.nonzero_members().count() < count {
        f.extend_to(f.kmax() + r);
    }
    let picked: Vec<(i64, CPoly)> = f.nonzero_members().take(count).map(|(k, p)| (k, p.clone())).collect();
    let top = picked.iter().filter_map(|(_, p)| p.degree()).max().unwrap_or(0);
    let basis = gegenbauer(m, top)?;

    let members: Vec<ReductionMember> = picked
        .iter()
        .map(|(k, p)| {
            let d = p.degree().expect("nonzero member");
            ReductionMember {
                k: *k,
                degree: d,
                single_q: p.ratio_to(&basis.polys[d]).map(|scalar| SingleQ { n: d, scalar }),
                satisfies_ode: gegenbauer_ode(m, d as i64).apply(p).is_zero(),
                two_term: two_term_fit(p, &basis.polys, d),
            }
        })
        .collect();

    let mut findings = Vec::new();
    for mem in &members {
        match case {
            ReductionCase::Case3 => {
                if mem.single_q.is_none() || !mem.satisfies_ode {
                    findings.push(format!(
                        "k = {}: not a multiple of Q_{} / fails the second-order ODE",
                        mem.k, mem.degree
                    ));
                }
            }
            ReductionCase::Case4 => {
                if mem.two_term.is_none() {
                    findings.push(format!("k = {}: outside span{{Q_n, c Q_(n-1)}}", mem.k));
                }
            }
        }
    }
    if !basis.certified {
        findings.push("Gegenbauer basis fails its own ODE".into());
    }
    Ok(ReductionReport { r, m, j0, case, lambda: basis.lambda, pass: findings.is_empty(), members, findings })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub j0: i64,
    pub kind: InitialKind,
    pub alpha: Option<ExactRational>,
    pub beta: Option<ExactRational>,
    pub certified_k: Vec<i64>,
    pub violations: Vec<i64>,
    /// Superposition verdict; `None` for the C kinds.
    pub pass: Option<bool>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub r: i64,
    pub m: i64,
    pub entries: Vec<ClassEntry>,
}

pub fn classification_report(r: i64, m: i64, kmax: i64, jobs: usize) -> Result<ClassificationReport> {
    check_rm(r, m)?;
    let j0s: Vec<i64> = (-2 * r..0).collect();
    let entries = map_ordered(jobs, &j0s, |&j0| {
        let kind = classify(r, m, j0).expect("j0 in range");
        let mut e = ClassEntry {
            j0,
            kind,
            alpha: None,
            beta: None,
            certified_k: Vec::new(),
            violations: Vec::new(),
            pass: None,
            error: None,
        };
        if matches!(kind, InitialKind::CCase3 | InitialKind::CNew) {
            return e;
        }
        match superposition_fit(r, m, j0, kmax) {
            Ok(s) => {
                e.alpha = Some(s.alpha);
                e.beta = Some(s.beta);
                e.certified_k = s.certified_k;
                e.violations = s.violations;
                e.pass = Some(s.pass);
            }
            Err(err) => {
                e.pass = Some(false);
                e.error = Some(err.to_string());
            }
        }
        e
    });
    Ok(ClassificationReport { r, m, entries })
}
