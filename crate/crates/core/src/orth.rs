//! Favard form of the recurrence along the support, exact orthogonality via
//! the moment functional, and the associated-ultraspherical identification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{CPoly, ExactRational};
use crate::family::{support_profile, Family, FamilyType};

/// `k = start + step·n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexMap {
    pub start: i64,
    pub step: i64,
}

impl IndexMap {
    pub fn k(&self, n: i64) -> i64 {
        self.start + self.step * n
    }
}

/// Consecutive support members `q_n = P_{start + n·r}`, from the first
/// nonzero generated member on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReindexedSequence {
    pub r: i64,
    pub m: i64,
    pub j0: Option<i64>,
    pub q: Vec<CPoly>,
    /// `q_{-1} = P_{start − r}` (a seed value, possibly zero).
    pub predecessor: CPoly,
    pub index_map: IndexMap,
}

impl ReindexedSequence {
    /// `q_n` for `n >= -1`.
    pub fn get(&self, n: i64) -> Option<&CPoly> {
        match n {
            -1 => Some(&self.predecessor),
            n if n >= 0 => self.q.get(n as usize),
            _ => None,
        }
    }

    /// `(A_n, B_n)` with `c·q_n = A_n q_{n+1} + B_n q_{n−1}`, read off the
    /// recursion at `k = start + (n+1)r`.
    pub fn recurrence(&self, n: i64) -> Result<(ExactRational, ExactRational)> {
        let (r, m) = (self.r, self.m);
        let k = self.index_map.k(n + 1);
        let den = 2 * (r + (1 + k - r) * m);
        if den == 0 {
            return Err(Error::Normalization(format!("zero c-coefficient at k = {k}")));
        }
        Ok((ExactRational::ratio(2 * r + m + k * m, den), ExactRational::ratio((k - 2 * r + 1) * m, den)))
    }

    /// Indices `n` where the stored polynomials violate the recurrence.
    pub fn recurrence_violations(&self) -> Vec<i64> {
        (0..self.q.len() as i64 - 1)
            .filter(|&n| {
                let Ok((a, b)) = self.recurrence(n) else { return true };
                let lhs = self.q[n as usize].shift(1);
                let rhs = &self.q[n as usize + 1].scale(&a) + &self.get(n - 1).expect("n >= 0").scale(&b);
                lhs != rhs
            })
            .collect()
    }
}

pub fn reindex(f: &Family) -> Result<ReindexedSequence> {
    let r = f.r();
    let profile = support_profile(f)?;
    if profile.stride != r {
        return Err(Error::Reindex(format!("support stride {} differs from r = {r}", profile.stride)));
    }
    let start = f
        .nonzero_members()
        .map(|(k, _)| k)
        .next()
        .ok_or_else(|| Error::Reindex("no nonzero generated member".into()))?;
    let index_map = IndexMap { start, step: r };
    let mut q = Vec::new();
    let mut n = 0;
    while index_map.k(n) <= f.kmax() {
        let p = f.poly(index_map.k(n));
        if p.is_zero() {
            return Err(Error::Reindex(format!("zero member at lattice point k = {}", index_map.k(n))));
        }
        q.push(p.clone());
        n += 1;
    }
    Ok(ReindexedSequence { r, m: f.m(), j0: f.j0(), q, predecessor: f.poly(start - r).clone(), index_map })
}

/// `A_n, B_n` for `0 <= n <= N` and `a_n = B_n A_{n−1}` for `1 <= n <= N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FavardCoefficients {
    pub a_coef: Vec<ExactRational>,
    pub b_coef: Vec<ExactRational>,
    /// `a[i] = a_{i+1}`.
    pub a: Vec<ExactRational>,
}

impl FavardCoefficients {
    /// `a_n` for `n >= 1`.
    pub fn a_n(&self, n: usize) -> &ExactRational {
        &self.a[n - 1]
    }

    /// Smallest `n` with `a_n <= 0`.
    pub fn first_nonpositive(&self) -> Option<usize> {
        self.a.iter().position(|x| !x.is_positive()).map(|i| i + 1)
    }
}

pub fn favard_coefficients(seq: &ReindexedSequence, n_max: usize) -> Result<FavardCoefficients> {
    let mut a_coef = Vec::with_capacity(n_max + 1);
    let mut b_coef = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max as i64 {
        let (a, b) = seq.recurrence(n)?;
        if a.is_zero() {
            return Err(Error::Normalization(format!("A_{n} = 0")));
        }
        a_coef.push(a);
        b_coef.push(b);
    }
    let a = (1..=n_max).map(|n| &b_coef[n] * &a_coef[n - 1]).collect();
    Ok(FavardCoefficients { a_coef, b_coef, a })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FavardData {
    pub n_max: usize,
    pub coefficients: FavardCoefficients,
    pub a_positive: bool,
    /// Monic `p_0..p_N` from `p_{n+1} = c p_n − a_n p_{n−1}`.
    pub monic: Vec<CPoly>,
    /// `γ_0 = 1/lc(q_0)`, `γ_{n+1} = A_n γ_n`.
    pub gamma: Vec<ExactRational>,
    /// `γ_n q_n = p_n` for every stored `q_n` with `n <= N`.
    pub sequence_is_ops: bool,
    /// `(M^k)_{00}` for `0 <= k <= 2N`, `M` the monic Jacobi matrix.
    pub moments: Vec<ExactRational>,
    /// Indices where the stored `q` violate the extracted recurrence.
    pub recurrence_violations: Vec<i64>,
}

pub fn favard(seq: &ReindexedSequence, n_max: usize) -> Result<FavardData> {
    // a_{N+1} is needed for moments up to order 2N+1.
    let coefficients = favard_coefficients(seq, n_max + 1)?;
    let a = |n: usize| coefficients.a_n(n).clone();

    let mut monic = vec![CPoly::one()];
    if n_max >= 1 {
        monic.push(CPoly::c());
    }
    for n in 1..n_max {
        let next = &monic[n].shift(1) - &monic[n - 1].scale(&a(n));
        monic.push(next);
    }

    let lc0 =
        seq.q.first().and_then(CPoly::leading).cloned().ok_or_else(|| Error::Normalization("empty sequence".into()))?;
    let mut gamma = vec![lc0.recip().expect("nonzero leading coefficient")];
    for n in 0..n_max {
        let g = &coefficients.a_coef[n] * &gamma[n];
        gamma.push(g);
    }
    let sequence_is_ops = seq.q.iter().zip(&gamma).zip(&monic).all(|((q, g), p)| q.scale(g) == *p);

    // v <- M v with (Mv)_i = v_{i−1} + a_{i+1} v_{i+1}, starting at e_0.
    let width = n_max + 2;
    let mut v = vec![ExactRational::zero(); width];
    v[0] = ExactRational::one();
    let mut moments = vec![ExactRational::one()];
    for _ in 0..2 * n_max {
        let mut next = vec![ExactRational::zero(); width];
        for i in 0..width {
            if i > 0 && !v[i - 1].is_zero() {
                next[i] += &v[i - 1];
            }
            if i + 1 < width && !v[i + 1].is_zero() {
                next[i] += &(&a(i + 1) * &v[i + 1]);
            }
        }
        v = next;
        moments.push(v[0].clone());
    }

    let a_positive = coefficients.a[..n_max].iter().all(ExactRational::is_positive);
    Ok(FavardData {
        n_max,
        a_positive,
        monic,
        gamma,
        sequence_is_ops,
        moments,
        recurrence_violations: seq.recurrence_violations(),
        coefficients,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramReport {
    pub n_max: usize,
    pub offdiag_zero: bool,
    pub nonzero_offdiag: Vec<(usize, usize)>,
    pub diagonal: Vec<ExactRational>,
    pub diag_positive: bool,
    /// `⟨p_n, p_n⟩ = a_1···a_n` for every `n`.
    pub diag_matches_products: bool,
    pub pass: bool,
}

/// `⟨p_i, p_j⟩` under `⟨c^a, c^b⟩ = μ_{a+b}`.
pub fn gram_entry(fd: &FavardData, i: usize, j: usize) -> ExactRational {
    let (p, q) = (&fd.monic[i], &fd.monic[j]);
    let mut s = ExactRational::zero();
    for (a, x) in p.coeffs().iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (b, y) in q.coeffs().iter().enumerate() {
            if !y.is_zero() {
                s += &(&(x * y) * &fd.moments[a + b]);
            }
        }
    }
    s
}

pub fn gram_check(fd: &FavardData, n_max: usize) -> Result<GramReport> {
    if n_max > fd.n_max {
        return Err(Error::ParameterDomain(format!("N = {n_max} exceeds Favard data N = {}", fd.n_max)));
    }
    let mut nonzero_offdiag = Vec::new();
    let mut diagonal = Vec::new();
    for i in 0..=n_max {
        for j in 0..i {
            if !gram_entry(fd, i, j).is_zero() {
                nonzero_offdiag.push((j, i));
            }
        }
        diagonal.push(gram_entry(fd, i, i));
    }
    let mut prod = ExactRational::one();
    let mut diag_matches_products = true;
    for (n, d) in diagonal.iter().enumerate() {
        if n > 0 {
            prod *= fd.coefficients.a_n(n);
        }
        diag_matches_products &= *d == prod;
    }
    let diag_positive = diagonal.iter().all(ExactRational::is_positive);
    let offdiag_zero = nonzero_offdiag.is_empty();
    Ok(GramReport {
        n_max,
        offdiag_zero,
        pass: offdiag_zero && diag_positive && diag_matches_products,
        nonzero_offdiag,
        diagonal,
        diag_positive,
        diag_matches_products,
    })
}

/// Parameters of the shifted Gegenbauer recurrence
/// `2c(n+ν+c₀) q̃_n = (n+c₀) q̃_{n−1} + (n+2ν+c₀) q̃_{n+1}`, `q̃_n = q_{n+shift}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ultraspherical {
    pub nu: ExactRational,
    pub c0: ExactRational,
    pub shift: i64,
}

impl Ultraspherical {
    /// Closed-form `(A_n, B_n)` at position `n` of `q̃`.
    pub fn coefficients(&self, n: i64) -> (ExactRational, ExactRational) {
        let n = ExactRational::from_int(n);
        let two = ExactRational::from_int(2);
        let den = &two * &(&(&n + &self.nu) + &self.c0);
        let a = (&(&n + &(&two * &self.nu)) + &self.c0) / &den;
        let b = (&n + &self.c0) / &den;
        (a, b)
    }

    /// `a_n = (n+c₀)(n−1+2ν+c₀) / (4(n+ν+c₀)(n−1+ν+c₀))`.
    pub fn a_n(&self, n: i64) -> ExactRational {
        let (_, b) = self.coefficients(n);
        let (a_prev, _) = self.coefficients(n - 1);
        b * a_prev
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentifyReport {
    pub r: i64,
    pub m: i64,
    /// `ν = (r/2)(1 + 1/m)`.
    pub nu: ExactRational,
    /// First `(c₀, shift)` certified on all available terms.
    pub identified: Option<Ultraspherical>,
    /// `(ν, c₀)` solved from the extracted coefficients at shift 1 and
    /// certified for every checked `n`, if consistent.
    pub fitted: Option<Ultraspherical>,
    pub checked_terms: usize,
}

fn certify_shifted(seq: &ReindexedSequence, u: &Ultraspherical) -> Option<usize> {
    let mut checked = 0;
    for n in 0.. {
        let i = n + u.shift;
        let (Some(prev), Some(cur), Some(next)) = (seq.get(i - 1), seq.get(i), seq.get(i + 1)) else {
            if i + 1 >= seq.q.len() as i64 {
                break;
            }
            continue;
        };
        let (a, b) = u.coefficients(n);
        if cur.shift(1) != &next.scale(&a) + &prev.scale(&b) {
            return None;
        }
        checked += 1;
    }
    (checked >= 3).then_some(checked)
}

fn fit_shift_one(seq: &ReindexedSequence, n_check: usize) -> Option<Ultraspherical> {
    // 2A(n'+α) = n'+β with α = ν+c₀, β = 2ν+c₀, n' = n − 1.
    let rows: Vec<(ExactRational, ExactRational, ExactRational)> = (1..=2)
        .map(|n| {
            let (a, _) = seq.recurrence(n).ok()?;
            let np = ExactRational::from_int(n - 1);
            let two_a = &a * &ExactRational::from_int(2);
            Some((two_a.clone(), ExactRational::from_int(-1), &np - &(&two_a * &np)))
        })
        .collect::<Option<_>>()?;
    let (x0, y0, z0) = &rows[0];
    let (x1, y1, z1) = &rows[1];
    let det = x0 * y1 - &(y0 * x1);
    let alpha = (z0 * y1 - &(y0 * z1)) / det.clone();
    let beta = (x0 * z1 - &(z0 * x1)) / det;
    let u = Ultraspherical { nu: &beta - &alpha, c0: &(&alpha + &alpha) - &beta, shift: 1 };
    (1..=n_check as i64).all(|n| seq.recurrence(n).ok() == Some(u.coefficients(n - 1))).then_some(u)
}

/// Nominal ultraspherical parameter `ν = (r/2)(1 + 1/m)`.
pub fn nominal_nu(r: i64, m: i64) -> ExactRational {
    ExactRational::ratio(r * (m + 1), 2 * m)
}

/// Try `c₀ ∈ {1/2, 1}` and shifts `-2..=2` with `ν = (r/2)(1+1/m)`.
pub fn identify_ultraspherical(seq: &ReindexedSequence, r: i64, m: i64) -> IdentifyReport {
    let nu = nominal_nu(r, m);
    let mut identified = None;
    let mut checked_terms = 0;
    'search: for c0 in [ExactRational::ratio(1, 2), ExactRational::one()] {
        for shift in -2..=2 {
            let u = Ultraspherical { nu: nu.clone(), c0: c0.clone(), shift };
            if let Some(n) = certify_shifted(seq, &u) {
                identified = Some(u);
                checked_terms = n;
                break 'search;
            }
        }
    }
    IdentifyReport { r, m, nu, identified, fitted: fit_shift_one(seq, 50), checked_terms }
}

/// Combined orthogonality report for a canonical family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthReport {
    pub family: FamilyType,
    pub r: i64,
    pub m: i64,
    #[serde(rename = "N")]
    pub n: usize,
    pub a_positive: bool,
    pub gram_offdiag_zero: bool,
    pub identified: Option<Ultraspherical>,
    pub fitted: Option<Ultraspherical>,
}

pub fn orthogonality_report(t: FamilyType, r: i64, m: i64, n: usize) -> Result<OrthReport> {
    let f = Family::canonical(t, r, m, (n as i64 + 2) * r)?;
    let seq = reindex(&f)?;
    let fd = favard(&seq, n)?;
    let gram = gram_check(&fd, n)?;
    let id = identify_ultraspherical(&seq, r, m);
    Ok(OrthReport {
        family: t,
        r,
        m,
        n,
        a_positive: fd.a_positive,
        gram_offdiag_zero: gram.offdiag_zero,
        identified: id.identified,
        fitted: id.fitted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilyType;

    #[test]
    fn sequences() {
        let f = Family::canonical(FamilyType::Type1, 2, 2, 8).unwrap();
        let s = reindex(&f).unwrap();
        assert_eq!(s.q[0], CPoly::one());
        assert_eq!(s.q[1], CPoly::from_coeffs(vec![ExactRational::zero(), ExactRational::ratio(4, 5)]));
        assert!(s.predecessor.is_zero());
        assert!(s.recurrence_violations().is_empty());
        let f = Family::canonical(FamilyType::Type2, 2, 4, 8).unwrap();
        let s = reindex(&f).unwrap();
        assert_eq!(s.q[0], CPoly::from_coeffs(vec![ExactRational::zero(), ExactRational::ratio(-1, 2)]));
        assert_eq!(s.predecessor, CPoly::one());
        assert!(s.recurrence_violations().is_empty());
    }

    #[test]
    fn closed_form_a1() {
        let u = Ultraspherical { nu: ExactRational::ratio(3, 2), c0: ExactRational::ratio(1, 2), shift: 1 };
        assert_eq!(u.a_n(1), ExactRational::ratio(7, 32));
    }

    #[test]
    fn moments_and_gram() {
        let f = Family::canonical(FamilyType::Type1, 3, 4, 40).unwrap();
        let fd = favard(&reindex(&f).unwrap(), 6).unwrap();
        assert!(fd.a_positive && fd.sequence_is_ops);
        assert!(fd.moments[0].is_one());
        assert!(fd.moments.iter().skip(1).step_by(2).all(ExactRational::is_zero));
        let g = gram_check(&fd, 6).unwrap();
        assert!(g.pass, "{g:?}");
        assert!(gram_check(&fd, 7).is_err());
    }

    #[test]
    fn identification_r2() {
        // (type 2, m = 2) has P_0 = 0: its support starts one stride later.
        for (t, m, shift) in [(FamilyType::Type1, 2, 1), (FamilyType::Type2, 2, 0), (FamilyType::Type2, 4, 1)] {
            let f = Family::canonical(t, 2, m, 30).unwrap();
            let id = identify_ultraspherical(&reindex(&f).unwrap(), 2, m);
            assert_eq!(id.nu, ExactRational::ratio(m + 1, m));
            let u = id.identified.expect("r = 2 identifies");
            assert_eq!((u.c0, u.shift), (ExactRational::ratio(1, 2), shift));
        }
    }

    #[test]
    fn fitted_parameters() {
        let f = Family::canonical(FamilyType::Type1, 3, 5, 12).unwrap();
        let id = identify_ultraspherical(&reindex(&f).unwrap(), 3, 5);
        assert!(id.identified.is_none());
        let u = id.fitted.unwrap();
        assert_eq!((u.nu, u.c0), (ExactRational::ratio(6, 5), ExactRational::ratio(1, 3)));
    }
}
