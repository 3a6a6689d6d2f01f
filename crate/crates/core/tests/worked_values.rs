use sepoly::classify::*;
use sepoly::family::support_profile;
use sepoly::ode::*;
use sepoly::orth::*;
use sepoly::series::*;
use sepoly::*;

fn q(n: i64, d: i64) -> ExactRational {
    ExactRational::ratio(n, d)
}

fn ints(c: &[i64]) -> CPoly {
    CPoly::from_ints(c)
}

#[test]
fn polynomial_arithmetic() {
    assert_eq!(&ints(&[1, 1]) * &ints(&[-1, 1]), ints(&[-1, 0, 1]));
    let p = ints(&[3, 0, -2]);
    assert_eq!(&p + &CPoly::zero(), p);
    assert_eq!(ints(&[0, 0, 3]).scale(&q(1, 3)), ints(&[0, 0, 1]));
    assert_eq!(ints(&[0, 0, 0, 1]).derive(1), ints(&[0, 0, 3]));
    assert!(ints(&[0, 0, 0, 1]).derive(4).is_zero());
    assert_eq!(ints(&[-5, 0, 32]).derive(2), ints(&[64]));
}

#[test]
fn nullspaces() {
    assert!(RatMatrix::identity(3).nullspace().is_empty());
    assert_eq!(RatMatrix::zeros(2, 2).nullspace().len(), 2);
    let m = RatMatrix::from_int_rows(&[&[1, 1], &[2, 2]]).unwrap();
    assert_eq!(m.nullspace(), vec![vec![q(1, 1), q(-1, 1)]]);
}

#[test]
fn family_members() {
    let f = Family::canonical(FamilyType::Type1, 2, 2, 4).unwrap();
    assert_eq!(f.poly(0), &CPoly::one());
    assert!(f.poly(1).is_zero());
    assert_eq!(f.poly(4), &ints(&[-5, 0, 32]).scale(&q(1, 35)));
    let f = Family::canonical(FamilyType::Type2, 2, 4, 4).unwrap();
    assert_eq!(f.poly(2), &ints(&[2, 0, -3]).scale(&q(1, 8)));
    assert_eq!(support_profile(&f).unwrap().degree_map, vec![(0, 1), (2, 2), (4, 3)]);
    for r in 2..=5 {
        let p = support_profile(&Family::canonical(FamilyType::Type1, r, 3, 6 * r).unwrap()).unwrap();
        assert_eq!((p.stride, p.offset), (r, 0));
    }
}

#[test]
fn degree_growth_type1() {
    for (r, m) in [(2, 2), (3, 4), (5, 7)] {
        let f = Family::canonical(FamilyType::Type1, r, m, 10 * r).unwrap();
        let degs: Vec<usize> = support_profile(&f).unwrap().degree_map.iter().map(|x| x.1).collect();
        assert!(degs.windows(2).all(|w| w[1] == w[0] + 1), "{degs:?}");
    }
}

#[test]
fn alignment() {
    let f = Family::canonical(FamilyType::Type1, 2, 2, 12).unwrap();
    assert_eq!(align_index(&f, FamilyType::Type1).unwrap(), 4);
    for (k, p) in f.nonzero_members() {
        assert_eq!(p.degree().unwrap() as i64, (k + 4) / 2 - 2);
    }
    let f = Family::canonical(FamilyType::Type2, 2, 4, 12).unwrap();
    assert_eq!(align_index(&f, FamilyType::Type2).unwrap(), 4);
    for (k, p) in f.nonzero_members() {
        assert_eq!(p.degree().unwrap() as i64, (k + 4) / 2 - 1);
    }
    // the type-2 operator does not fit the type-1 family
    let f = Family::canonical(FamilyType::Type1, 3, 4, 12).unwrap();
    assert!(matches!(align_index(&f, FamilyType::Type2), Err(Error::AlignmentFailure(_))));
}

#[test]
fn residual_cells() {
    let cell = check_cell(FamilyType::Type2, 2, 4, &[10, 12, 14, 16, 18], None);
    assert!(cell.pass);
    assert_eq!(cell.checked_n, vec![10, 12, 14, 16, 18]);
    let cell = check_cell(FamilyType::Type1, 2, 2, &[], Some(24));
    assert!(cell.pass);
    assert_eq!(cell.checked_n, (2..=12).map(|i| 2 * i).collect::<Vec<_>>());
}

#[test]
fn indicial_values() {
    let d = indicial(FamilyType::Type1, 2, 4, 8);
    assert_eq!(d.admissible_degrees, vec![2]);
    assert!(d.matches_symbol);
    let d = indicial(FamilyType::Type2, 2, 2, 8);
    assert_eq!(d.admissible_degrees, vec![1, 3]);
    let op = build_operator(FamilyType::Type1, 2, 2, 8).unwrap();
    assert_eq!(leading_symbol(&op, 0), q(4096, 1));
    assert_eq!(op.apply(&CPoly::one()), ints(&[4096]));
}

#[test]
fn kernels() {
    let op = build_operator(FamilyType::Type2, 2, 4, 6).unwrap();
    let k = polynomial_kernel(op.diff(), 2, None);
    assert_eq!(k.len(), 1);
    assert!(k[0].ratio_to(&ints(&[2, 0, -3])).is_some());
    let op = build_operator(FamilyType::Type1, 3, 5, 12).unwrap();
    assert_eq!(polynomial_kernel(op.diff(), 2, None).len(), 1);
    let op = build_operator(FamilyType::Type1, 2, 4, 8).unwrap();
    assert!(polynomial_kernel(op.diff(), 1, None).is_empty());
    assert!(polynomial_kernel(op.diff(), 2, Some(Parity::Odd)).is_empty());
}

#[test]
fn fit_recovers_type1() {
    let f = Family::canonical(FamilyType::Type1, 2, 2, 48).unwrap();
    let FitOutcome::Candidate { operator, holdout_pass, holdout_k, .. } =
        fit_ode(&f, &FitSpec::fourth_order()).unwrap()
    else {
        panic!("expected a unique candidate");
    };
    assert!(holdout_pass && !holdout_k.is_empty());
    let reference = |n| build_operator(FamilyType::Type1, 2, 2, n).unwrap().diff().clone();
    assert!(operator.proportional_to(reference, 0..=12).is_some());
}

#[test]
fn fit_type_c_candidate() {
    let f = Family::generate(FamilyParams::new(4, 2, -2).unwrap(), 160).unwrap();
    match fit_ode(&f, &FitSpec::fourth_order()).unwrap() {
        FitOutcome::Candidate { holdout_pass, holdout_k, .. } => assert!(holdout_pass && holdout_k.len() >= 2),
        other => panic!("unexpected outcome {other:?}"),
    }
}

#[test]
fn fit_needs_data() {
    let f = Family::canonical(FamilyType::Type1, 2, 2, 8).unwrap();
    assert!(matches!(fit_ode(&f, &FitSpec::fourth_order()), Err(Error::InsufficientData(_))));
}

#[test]
fn series_identities() {
    let f = Family::canonical(FamilyType::Type1, 2, 2, 16).unwrap();
    assert!(first_order_residual(&f, 20).unwrap().is_zero_through(16));
    let rep = pde_residual(FamilyType::Type2, 2, 4, 16, 1).unwrap();
    assert!(rep.all_zero);
    assert_eq!(rep.residuals.len(), 17);
}

#[test]
fn type1_pde_discrepancy_is_reported() {
    let rep = pde_residual(FamilyType::Type1, 2, 2, 16, 1).unwrap();
    assert_eq!(rep.mapping, None);
    assert!(!rep.all_zero);
    let d = rep.discrepancy.expect("difference operator");
    // reduced − closed form = 4r⁴(m+1)D² − 24r²(m+r)(2mr−m−r)cD at r = m = 2
    let expect = DiffOperator::new(vec![CPoly::zero(), ints(&[0, -24 * 4 * 4 * 4]), ints(&[4 * 16 * 3])]);
    assert_eq!(d.difference, expect);
}

#[test]
fn classification_examples() {
    assert_eq!(classify(4, 2, -8).unwrap(), InitialKind::AType1);
    assert_eq!(classify(4, 2, -5).unwrap(), InitialKind::BLinearCombination);
    assert_eq!(classify(4, 2, -2).unwrap(), InitialKind::CNew);
    let rep = classification_report(3, 2, 24, 1).unwrap();
    assert_eq!(rep.entries.len(), 6);
    assert_eq!(rep.entries[0].pass, Some(true));
}

#[test]
fn superposition_violation_is_reported() {
    let s = superposition_fit(3, 2, -4, 30).unwrap();
    assert_eq!(s.fitted_from.len(), 2);
    assert!(!s.pass && !s.violations.is_empty());
    assert!(shifted_superposition_search(3, 2, -4, 18, 9).unwrap().is_none());
    assert!(matches!(superposition_fit(3, 2, -2, 12), Err(Error::ParameterDomain(_))));
}

#[test]
fn gegenbauer_reductions() {
    let b = gegenbauer(2, 5).unwrap();
    assert!(gegenbauer_ode(2, 5).apply(&b.polys[5]).is_zero());
    // j0 = −r−1: every member is a single Q_n multiple on the second-order ODE
    let rep = verify_gegenbauer_reduction(2, 3, -3, 6).unwrap();
    assert!(rep.members.iter().all(|m| m.single_q.is_some() && m.satisfies_ode && m.two_term.is_some()));
    assert!(rep.pass);
    // j0 = −1: the first member is 2c²/(m+2); later ones are two-term only
    let rep = verify_gegenbauer_reduction(2, 3, -1, 6).unwrap();
    assert_eq!(rep.members[0].k, 1);
    assert!(rep.members.iter().all(|m| m.two_term.is_some()));
    assert!(rep.members[1..].iter().all(|m| !m.satisfies_ode));
    assert!(!rep.pass);
}

#[test]
fn orthogonality_examples() {
    let f = Family::canonical(FamilyType::Type2, 2, 4, 40).unwrap();
    let seq = reindex(&f).unwrap();
    assert_eq!(seq.q[2], ints(&[0, 6, 0, -7]).scale(&q(1, 16)));
    for (n, p) in seq.q.iter().enumerate() {
        assert_eq!(p.degree(), Some(n + 1));
    }
    let fd = favard(&seq, 10).unwrap();
    assert!(fd.a_positive && fd.recurrence_violations.is_empty());
    assert!(!fd.sequence_is_ops);
    let g = gram_check(&fd, 10).unwrap();
    assert!(g.pass);
    assert!(gram_entry(&fd, 0, 1).is_zero());
    assert_eq!(gram_entry(&fd, 2, 2), fd.coefficients.a_n(1) * fd.coefficients.a_n(2));
    let u = Ultraspherical { nu: q(3, 2), c0: q(1, 2), shift: 1 };
    assert_eq!(u.a_n(1), q(7, 32));
    assert_eq!(nominal_nu(2, 2), q(3, 2));
    let rep = orthogonality_report(FamilyType::Type1, 3, 4, 8).unwrap();
    assert!(rep.a_positive && rep.gram_offdiag_zero && rep.identified.is_none());
}
