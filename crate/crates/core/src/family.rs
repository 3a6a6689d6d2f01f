//! Recursion-generated families `P_{j0,k}(c)`, `k >= -2r`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{CPoly, ExactRational};

/// The two canonical families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyType {
    Type1,
    Type2,
}

impl FamilyType {
    /// Seed index of the canonical family: `-2r` for type 1, `-r` for type 2.
    pub fn j0(self, r: i64) -> i64 {
        match self {
            FamilyType::Type1 => -2 * r,
            FamilyType::Type2 => -r,
        }
    }

    pub fn from_number(t: u8) -> Option<Self> {
        match t {
            1 => Some(FamilyType::Type1),
            2 => Some(FamilyType::Type2),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            FamilyType::Type1 => 1,
            FamilyType::Type2 => 2,
        }
    }
}

impl fmt::Display for FamilyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub r: i64,
    pub m: i64,
    pub j0: i64,
}

impl FamilyParams {
    pub fn new(r: i64, m: i64, j0: i64) -> Result<Self> {
        check_rm(r, m)?;
        if !(-2 * r..=-1).contains(&j0) {
            return Err(Error::ParameterDomain(format!("j0 = {j0} outside [{}, -1]", -2 * r)));
        }
        Ok(Self { r, m, j0 })
    }

    pub fn canonical(t: FamilyType, r: i64, m: i64) -> Result<Self> {
        Self::new(r, m, t.j0(r))
    }
}

pub(crate) fn check_rm(r: i64, m: i64) -> Result<()> {
    if r < 2 || m < 2 {
        return Err(Error::ParameterDomain(format!("need r, m >= 2, got r = {r}, m = {m}")));
    }
    Ok(())
}

/// Default generation depth.
pub fn default_kmax(r: i64) -> i64 {
    12 * r
}

/// A family generated by the recursion from arbitrary initial data on
/// `[-2r, -1]`. Off-lattice zeros are stored explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    r: i64,
    m: i64,
    j0: Option<i64>,
    /// `polys[k + 2r]` is `P_k`.
    polys: Vec<CPoly>,
}

impl Family {
    /// Unit initial condition at `params.j0`.
    pub fn generate(params: FamilyParams, kmax: i64) -> Result<Self> {
        let r = params.r;
        let initial = (-2 * r..0).map(|j| if j == params.j0 { CPoly::one() } else { CPoly::zero() }).collect();
        let mut f = Self::from_initial(r, params.m, initial, kmax)?;
        f.j0 = Some(params.j0);
        Ok(f)
    }

    pub fn canonical(t: FamilyType, r: i64, m: i64, kmax: i64) -> Result<Self> {
        Self::generate(FamilyParams::canonical(t, r, m)?, kmax)
    }

    /// General initial data `initial[j + 2r] = P_j` for `j` in `[-2r, -1]`.
    pub fn from_initial(r: i64, m: i64, initial: Vec<CPoly>, kmax: i64) -> Result<Self> {
        check_rm(r, m)?;
        if initial.len() as i64 != 2 * r {
            return Err(Error::ParameterDomain(format!("expected {} initial values, got {}", 2 * r, initial.len())));
        }
        if kmax < 0 {
            return Err(Error::ParameterDomain(format!("kmax = {kmax} < 0")));
        }
        let mut f = Self { r, m, j0: None, polys: initial };
        f.extend_to(kmax);
        Ok(f)
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// Seed index for unit-initial-condition families.
    pub fn j0(&self) -> Option<i64> {
        self.j0
    }

    pub fn params(&self) -> Option<FamilyParams> {
        self.j0.map(|j0| FamilyParams { r: self.r, m: self.m, j0 })
    }

    pub fn kmax(&self) -> i64 {
        self.polys.len() as i64 - 2 * self.r - 1
    }

    /// `P_k`, or `None` outside `[-2r, kmax]`.
    pub fn get(&self, k: i64) -> Option<&CPoly> {
        let i = k + 2 * self.r;
        if i < 0 {
            return None;
        }
        self.polys.get(i as usize)
    }

    /// `P_k`; panics outside the generated range.
    pub fn poly(&self, k: i64) -> &CPoly {
        self.get(k).unwrap_or_else(|| panic!("P_{k} not generated (kmax = {})", self.kmax()))
    }

    /// `(k, P_k)` for every stored index, seeds included.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &CPoly)> + '_ {
        let off = 2 * self.r;
        self.polys.iter().enumerate().map(move |(i, p)| (i as i64 - off, p))
    }

    /// Nonzero generated members `k >= 0`.
    pub fn nonzero_members(&self) -> impl Iterator<Item = (i64, &CPoly)> + '_ {
        self.iter().filter(|(k, p)| *k >= 0 && !p.is_zero())
    }

    /// Grow the family in place; a no-op if already deep enough.
    pub fn extend_to(&mut self, kmax: i64) {
        let (r, m) = (self.r, self.m);
        for k in self.kmax() + 1..=kmax {
            let a = ExactRational::from_int(2 * (r + (1 + k - r) * m));
            let b = ExactRational::from_int((k - (2 * r - 1)) * m);
            let d = ExactRational::from_int(2 * r + m + k * m);
            let next = &self.poly(k - r).shift(1).scale(&a) - &self.poly(k - 2 * r).scale(&b);
            self.polys.push(next.scale(&d.recip().expect("2r+m+km > 0")));
        }
    }

    /// `(2r+m+km)P_k − 2c(r+(1+k−r)m)P_{k−r} + (k−(2r−1))m·P_{k−2r}`.
    pub fn recursion_residual(&self, k: i64) -> CPoly {
        let (r, m) = (self.r, self.m);
        let d = ExactRational::from_int(2 * r + m + k * m);
        let a = ExactRational::from_int(2 * (r + (1 + k - r) * m));
        let b = ExactRational::from_int((k - (2 * r - 1)) * m);
        &(&self.poly(k).scale(&d) - &self.poly(k - r).shift(1).scale(&a)) + &self.poly(k - 2 * r).scale(&b)
    }

    pub fn dump(&self) -> FamilyDump {
        FamilyDump {
            r: self.r,
            m: self.m,
            j0: self.j0,
            polys: self.iter().map(|(k, p)| PolyEntry { k, coeffs: p.clone() }).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolyEntry {
    pub k: i64,
    pub coeffs: CPoly,
}

/// JSON form of a family.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FamilyDump {
    pub r: i64,
    pub m: i64,
    pub j0: Option<i64>,
    pub polys: Vec<PolyEntry>,
}

/// Memoized families, extended incrementally when a deeper prefix is asked for.
#[derive(Default)]
pub struct FamilyCache {
    map: Mutex<HashMap<FamilyParams, Arc<Family>>>,
}

impl FamilyCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, params: FamilyParams, kmax: i64) -> Result<Arc<Family>> {
        if let Some(f) = self.map.lock().unwrap().get(&params) {
            if f.kmax() >= kmax {
                return Ok(Arc::clone(f));
            }
        }
        // Extend outside the lock; a concurrent duplicate is harmless.
        let existing = self.map.lock().unwrap().get(&params).cloned();
        let f = match existing {
            Some(f) => {
                let mut g = (*f).clone();
                g.extend_to(kmax);
                g
            }
            None => Family::generate(params, kmax)?,
        };
        let f = Arc::new(f);
        let mut map = self.map.lock().unwrap();
        let slot = map.entry(params).or_insert_with(|| Arc::clone(&f));
        if slot.kmax() < f.kmax() {
            *slot = Arc::clone(&f);
        }
        Ok(Arc::clone(slot))
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Arithmetic progression containing every nonzero index, and the degree of
/// each nonzero generated member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportProfile {
    pub stride: i64,
    pub offset: i64,
    pub degree_map: Vec<(i64, usize)>,
}

pub fn support_profile(f: &Family) -> Result<SupportProfile> {
    let nonzero: Vec<i64> = f.iter().filter(|(_, p)| !p.is_zero()).map(|(k, _)| k).collect();
    let first = *nonzero.first().ok_or(Error::DegenerateSupport)?;
    let stride = nonzero.iter().fold(0i64, |g, k| g.gcd(&(k - first)));
    let stride = if stride == 0 { f.r() } else { stride };
    let degree_map = f.nonzero_members().map(|(k, p)| (k, p.degree().expect("nonzero"))).collect();
    Ok(SupportProfile { stride, offset: first.rem_euclid(stride), degree_map })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::ratio(n, d)
    }

    #[test]
    fn type1_small() {
        let f = Family::generate(FamilyParams::new(2, 2, -4).unwrap(), 4).unwrap();
        assert_eq!(f.poly(0), &CPoly::one());
        assert!(f.poly(1).is_zero());
        assert_eq!(f.poly(2), &CPoly::from_coeffs(vec![q(0, 1), q(4, 5)]));
        assert_eq!(f.poly(4), &CPoly::from_coeffs(vec![q(-1, 7), q(0, 1), q(32, 35)]));
    }

    #[test]
    fn type2_small() {
        let f = Family::canonical(FamilyType::Type2, 2, 4, 4).unwrap();
        assert_eq!(f.poly(0), &CPoly::from_coeffs(vec![q(0, 1), q(-1, 2)]));
        assert_eq!(f.poly(2), &CPoly::from_coeffs(vec![q(1, 4), q(0, 1), q(-3, 8)]));
        assert_eq!(f.poly(4), &CPoly::from_coeffs(vec![q(0, 1), q(3, 8), q(0, 1), q(-7, 16)]));
    }

    #[test]
    fn domain() {
        assert!(FamilyParams::new(1, 2, -1).is_err());
        assert!(FamilyParams::new(2, 1, -1).is_err());
        assert!(FamilyParams::new(2, 2, 0).is_err());
        assert!(FamilyParams::new(2, 2, -5).is_err());
        assert!(FamilyParams::new(3, 2, -6).is_ok());
    }

    #[test]
    fn extend_matches_fresh() {
        let p = FamilyParams::new(3, 4, -2).unwrap();
        let mut a = Family::generate(p, 5).unwrap();
        a.extend_to(20);
        assert_eq!(a, Family::generate(p, 20).unwrap());
    }

    #[test]
    fn cache_extends() {
        let cache = FamilyCache::new();
        let p = FamilyParams::new(2, 3, -3).unwrap();
        assert_eq!(cache.get(p, 4).unwrap().kmax(), 4);
        assert_eq!(cache.get(p, 10).unwrap().kmax(), 10);
        assert_eq!(cache.get(p, 6).unwrap().kmax(), 10);
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn profiles() {
        let f = Family::canonical(FamilyType::Type1, 2, 2, 4).unwrap();
        let s = support_profile(&f).unwrap();
        assert_eq!((s.stride, s.offset), (2, 0));
        assert_eq!(s.degree_map, vec![(0, 0), (2, 1), (4, 2)]);
        let f = Family::canonical(FamilyType::Type2, 2, 4, 4).unwrap();
        assert_eq!(support_profile(&f).unwrap().degree_map, vec![(0, 1), (2, 2), (4, 3)]);
        let f = Family::generate(FamilyParams::new(3, 2, -4).unwrap(), 12).unwrap();
        let s = support_profile(&f).unwrap();
        assert_eq!((s.stride, s.offset), (3, 2));
        let zero = Family::from_initial(2, 2, vec![CPoly::zero(); 4], 8).unwrap();
        assert_eq!(support_profile(&zero), Err(Error::DegenerateSupport));
    }

    #[test]
    fn dump_shape() {
        let f = Family::canonical(FamilyType::Type1, 2, 2, 0).unwrap();
        let v = serde_json::to_value(f.dump()).unwrap();
        assert_eq!(v["j0"], -4);
        assert_eq!(v["polys"][4]["k"], 0);
        assert_eq!(v["polys"][4]["coeffs"], serde_json::json!(["1"]));
    }
}
