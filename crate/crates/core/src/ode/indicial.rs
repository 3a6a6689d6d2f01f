use serde::{Deserialize, Serialize};

use crate::exact::ExactRational;
use crate::family::FamilyType;

/// Indicial polynomial at infinity as four linear factors `a·s + b`.
pub fn indicial_factors(t: FamilyType, r: i64, m: i64, n: i64) -> [(i64, i64); 4] {
    match t {
        FamilyType::Type1 => [
            (r, n),
            (r, -n + 2 * r),
            (m * r, -m * n + 4 * m * r - 2 * m - 2 * r),
            (m * r, m * n - 2 * m * r + 2 * m + 2 * r),
        ],
        FamilyType::Type2 => {
            [(r, -n + r), (r, n + r), (m * r, -m * n + 4 * m * r - 2 * r), (m * r, m * n - 2 * m * r + 2 * r)]
        }
    }
}

/// Linear factors of the operator's actual leading symbol `s ↦ [c^s] op(c^s)`.
/// Identical to [`indicial_factors`] for type 1; for type 2 the `Δ` terms move
/// the last two factors unless `r = 2`.
pub fn symbol_factors(t: FamilyType, r: i64, m: i64, n: i64) -> [(i64, i64); 4] {
    match t {
        FamilyType::Type1 => indicial_factors(t, r, m, n),
        FamilyType::Type2 => [
            (r, -n + r),
            (r, n + r),
            (m * r, -m * n + 5 * m * r - 2 * m - 2 * r),
            (m * r, m * n - 3 * m * r + 2 * m + 2 * r),
        ],
    }
}

fn product(factors: [(i64, i64); 4], s: i64) -> ExactRational {
    factors.iter().map(|&(a, b)| ExactRational::from_bigint((a as i128 * s as i128 + b as i128).into())).product()
}

fn roots(factors: [(i64, i64); 4]) -> Vec<ExactRational> {
    factors.iter().map(|&(a, b)| ExactRational::ratio(-b, a)).collect()
}

/// Product of [`symbol_factors`] at `s`.
pub fn symbol_product(t: FamilyType, r: i64, m: i64, n: i64, s: i64) -> ExactRational {
    product(symbol_factors(t, r, m, n), s)
}

/// `I(s)` as the product of the factors.
pub fn indicial_product(t: FamilyType, r: i64, m: i64, n: i64, s: i64) -> ExactRational {
    product(indicial_factors(t, r, m, n), s)
}

/// `1/r + 1/m = 1/2`.
pub fn is_resonant(r: i64, m: i64) -> bool {
    2 * (r + m) == r * m
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicialData {
    pub family_type: FamilyType,
    pub r: i64,
    pub m: i64,
    pub n: i64,
    /// One root per factor, in factor order, so repeated values carry multiplicity.
    pub roots: Vec<ExactRational>,
    /// Distinct nonnegative integer roots, ascending.
    pub admissible_degrees: Vec<i64>,
    pub resonant: bool,
    /// Roots of the operator's own leading symbol, in factor order.
    pub symbol_roots: Vec<ExactRational>,
    /// The factored indicial polynomial is the operator's leading symbol.
    pub matches_symbol: bool,
}

pub fn indicial(t: FamilyType, r: i64, m: i64, n: i64) -> IndicialData {
    let factors = indicial_factors(t, r, m, n);
    let symbol = symbol_factors(t, r, m, n);
    let roots = roots(factors);
    let mut admissible: Vec<i64> = roots.iter().filter_map(ExactRational::to_i64).filter(|&d| d >= 0).collect();
    admissible.sort_unstable();
    admissible.dedup();
    IndicialData {
        family_type: t,
        r,
        m,
        n,
        roots,
        admissible_degrees: admissible,
        resonant: is_resonant(r, m),
        symbol_roots: self::roots(symbol),
        matches_symbol: factors == symbol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type1_roots() {
        let d = indicial(FamilyType::Type1, 2, 4, 8);
        let q = ExactRational::ratio;
        assert_eq!(d.roots, vec![q(-4, 1), q(2, 1), q(3, 2), q(-7, 2)]);
        assert_eq!(d.admissible_degrees, vec![2]);
        assert!(!d.resonant);
    }

    #[test]
    fn type2_extra_root_for_small_m() {
        let d = indicial(FamilyType::Type2, 2, 2, 8);
        assert_eq!(d.admissible_degrees, vec![1, 3]);
    }

    #[test]
    fn resonant_pairs() {
        let pairs: Vec<_> =
            (2..=10).flat_map(|r| (2..=10).map(move |m| (r, m))).filter(|&(r, m)| is_resonant(r, m)).collect();
        assert_eq!(pairs, vec![(3, 6), (4, 4), (6, 3)]);
    }

    #[test]
    fn type2_symbol_shift() {
        assert!(indicial(FamilyType::Type2, 2, 5, 12).matches_symbol);
        assert!(!indicial(FamilyType::Type2, 3, 2, 0).matches_symbol);
        assert_eq!(symbol_product(FamilyType::Type2, 3, 2, 0, 0), ExactRational::from_int(-1440));
        assert_eq!(indicial_product(FamilyType::Type2, 3, 2, 0, 0), ExactRational::from_int(-972));
    }

    #[test]
    fn product_at_zero() {
        assert_eq!(indicial_product(FamilyType::Type1, 2, 2, 8, 0), ExactRational::from_int(4096));
        assert!(indicial_product(FamilyType::Type2, 2, 4, 6, 2).is_zero());
        assert_eq!(indicial_product(FamilyType::Type2, 2, 4, 6, 1), ExactRational::from_int(-4800));
    }
}
