//! Acceptance suite: one PASS/FAIL line per criterion on stderr, then the
//! assertion. Lines bypass the test harness capture so they show up in
//! `cargo test` output even when the test passes.

use std::io::Write;

use rayon::prelude::*;
use sepoly::classify::*;
use sepoly::ode::*;
use sepoly::orth::*;
use sepoly::series::*;
use sepoly::*;

const TYPES: [FamilyType; 2] = [FamilyType::Type1, FamilyType::Type2];

fn report(id: u8, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[{id}] {verdict} {detail}");
}

fn grid(rs: std::ops::RangeInclusive<i64>, ms: std::ops::RangeInclusive<i64>) -> Vec<(i64, i64)> {
    rs.flat_map(|r| ms.clone().map(move |m| (r, m))).collect()
}

#[test]
fn c1_type2_grid_residuals() {
    let rep = residual_scan(FamilyType::Type2, 2..=8, 2..=10, |_| None, 1).unwrap();
    let pass = rep.pass() && rep.summary.points_checked == rep.summary.cells * 5;
    report(
        1,
        pass,
        &format!(
            "type-2 operator annihilates aligned members at n = 5r..9r: {}/{} cells, {} points",
            rep.summary.passed, rep.summary.cells, rep.summary.points_checked
        ),
    );
    assert!(pass, "{:?}", rep.cells.iter().filter(|c| !c.pass).collect::<Vec<_>>());
}

#[test]
fn c2_type1_grid_residuals() {
    let rep = residual_scan(FamilyType::Type1, 2..=8, 2..=10, |r| Some(12 * r), 0).unwrap();
    report(
        2,
        rep.pass(),
        &format!(
            "type-1 operator annihilates aligned members with n <= 12r: {}/{} cells, {} points",
            rep.summary.passed, rep.summary.cells, rep.summary.points_checked
        ),
    );
    assert!(rep.pass(), "{:?}", rep.cells.iter().filter(|c| !c.pass).collect::<Vec<_>>());
}

/// Fixed sample: ten tuples per family, spread over the grid.
const INDICIAL_SAMPLE: [(FamilyType, i64, i64, i64); 20] = [
    (FamilyType::Type1, 2, 2, 8),
    (FamilyType::Type1, 2, 4, 8),
    (FamilyType::Type1, 3, 5, 12),
    (FamilyType::Type1, 4, 4, 16),
    (FamilyType::Type1, 5, 3, 20),
    (FamilyType::Type1, 3, 6, 15),
    (FamilyType::Type1, 6, 3, 18),
    (FamilyType::Type1, 7, 9, 21),
    (FamilyType::Type1, 8, 10, 40),
    (FamilyType::Type1, 2, 7, 14),
    (FamilyType::Type2, 2, 4, 6),
    (FamilyType::Type2, 2, 5, 12),
    (FamilyType::Type2, 2, 2, 8),
    (FamilyType::Type2, 2, 10, 10),
    (FamilyType::Type2, 3, 4, 15),
    (FamilyType::Type2, 4, 6, 20),
    (FamilyType::Type2, 5, 5, 25),
    (FamilyType::Type2, 6, 7, 30),
    (FamilyType::Type2, 7, 3, 35),
    (FamilyType::Type2, 8, 9, 40),
];

#[test]
fn c3_indicial_certification() {
    let mismatched: Vec<_> = INDICIAL_SAMPLE
        .iter()
        .filter(|&&(t, r, m, n)| {
            let op = build_operator(t, r, m, n).unwrap();
            (0..=20).any(|s| leading_symbol(&op, s) != indicial_product(t, r, m, n, s as i64))
        })
        .copied()
        .collect();
    let resonant: Vec<_> = grid(2..=10, 2..=10).into_iter().filter(|&(r, m)| is_resonant(r, m)).collect();
    let resonant_ok = resonant == vec![(3, 6), (4, 4), (6, 3)];
    let pass = mismatched.is_empty() && resonant_ok;
    report(
        3,
        pass,
        &format!(
            "leading symbol = factored indicial product, s = 0..20: {}/20 tuples agree{}; resonant set {:?}",
            20 - mismatched.len(),
            if mismatched.is_empty() { String::new() } else { format!(" (differ: {mismatched:?})") },
            resonant
        ),
    );
    assert!(resonant_ok);
    assert!(mismatched.is_empty(), "symbol differs from factored form for {mismatched:?}");
}

enum KernelCheck {
    Unique,
    /// Resonant: one solution per parity, the member spanning its own parity.
    PerParity,
    Skipped,
    Failed(String),
}

fn kernel_check(t: FamilyType, r: i64, m: i64, n: i64) -> KernelCheck {
    let resonant = is_resonant(r, m);
    if resonant && t == FamilyType::Type1 {
        return KernelCheck::Skipped;
    }
    let op = build_operator(t, r, m, n).unwrap();
    let f = Family::canonical(t, r, m, n - 2 * r).unwrap();
    let member = f.poly(n - 2 * r);
    let Some(deg) = member.degree() else {
        return KernelCheck::Failed(format!("{t} ({r},{m},{n}): aligned member is zero"));
    };
    let ind = indicial(t, r, m, n);
    let top = ind
        .admissible_degrees
        .iter()
        .copied()
        .chain(ind.symbol_roots.iter().filter_map(ExactRational::to_i64))
        .chain([deg as i64])
        .max()
        .unwrap();
    let bound = top as usize + 4;
    if !resonant {
        let k = polynomial_kernel(op.diff(), bound, None);
        return match k.as_slice() {
            [g] if g.ratio_to(member).is_some() => KernelCheck::Unique,
            _ => KernelCheck::Failed(format!("{t} ({r},{m},{n}): kernel dimension {}", k.len())),
        };
    }
    let parity = member.parity().expect("members have parity");
    for p in [Parity::Even, Parity::Odd] {
        let k = polynomial_kernel(op.diff(), bound, Some(p));
        let ok = if p == parity { matches!(k.as_slice(), [g] if g.ratio_to(member).is_some()) } else { k.len() <= 1 };
        if !ok {
            return KernelCheck::Failed(format!("{t} ({r},{m},{n}) {p:?}: kernel dimension {}", k.len()));
        }
    }
    KernelCheck::PerParity
}

#[test]
fn c4_kernel_uniqueness() {
    let cases: Vec<(FamilyType, i64, i64, i64)> = TYPES
        .iter()
        .flat_map(|&t| {
            [2, 3, 5]
                .into_iter()
                .flat_map(move |r| [4, 5, 6].into_iter().flat_map(move |m| [4 * r, 6 * r].map(|n| (t, r, m, n))))
        })
        .collect();
    let results: Vec<KernelCheck> = cases.par_iter().map(|&(t, r, m, n)| kernel_check(t, r, m, n)).collect();
    let count = |f: fn(&KernelCheck) -> bool| results.iter().filter(|x| f(x)).count();
    let failures: Vec<&String> = results
        .iter()
        .filter_map(|x| match x {
            KernelCheck::Failed(s) => Some(s),
            _ => None,
        })
        .collect();
    let pass = failures.is_empty();
    report(
        4,
        pass,
        &format!(
            "kernel dimension 1, generator ∝ family member: {} unique, {} resonant checked per parity, {} resonant type-1 skipped, {} failed",
            count(|x| matches!(x, KernelCheck::Unique)),
            count(|x| matches!(x, KernelCheck::PerParity)),
            count(|x| matches!(x, KernelCheck::Skipped)),
            failures.len()
        ),
    );
    assert!(pass, "{failures:?}");
}

#[test]
fn c5_classification() {
    let pairs = grid(3..=5, 2..=3);
    let supers: Vec<Superposition> = pairs
        .par_iter()
        .flat_map_iter(|&(r, m)| {
            ((-2 * r + 1)..-r).map(move |j0| {
                assert_eq!(classify(r, m, j0).unwrap(), InitialKind::BLinearCombination);
                superposition_fit(r, m, j0, 12 * r).unwrap()
            })
        })
        .collect();
    let super_ok = supers.iter().filter(|s| s.pass && s.certified_k.len() >= 8).count();
    let case3: Vec<ReductionReport> =
        pairs.par_iter().map(|&(r, m)| verify_gegenbauer_reduction(r, m, -1, 10).unwrap()).collect();
    let case3_ok = case3.iter().filter(|rep| rep.members.iter().all(|x| x.satisfies_ode)).count();
    let case4: Vec<ReductionReport> =
        pairs.par_iter().map(|&(r, m)| verify_gegenbauer_reduction(r, m, -r - 1, 10).unwrap()).collect();
    let case4_ok = case4.iter().filter(|rep| rep.members.iter().all(|x| x.two_term.is_some())).count();
    let pass = super_ok == supers.len() && case3_ok == case3.len() && case4_ok == case4.len();
    report(
        5,
        pass,
        &format!(
            "superposition certified on >= 8 members: {super_ok}/{} type-B j0; j0 = -1 members satisfy the Gegenbauer ODE: {case3_ok}/{} pairs; j0 = -r-1 members in two-term span: {case4_ok}/{} pairs",
            supers.len(),
            case3.len(),
            case4.len()
        ),
    );
    assert_eq!(case4_ok, case4.len(), "two-term span");
    assert_eq!(case3_ok, case3.len(), "j0 = -1 Gegenbauer ODE");
    assert_eq!(super_ok, supers.len(), "superposition");
}

#[test]
fn c6_series_identities() {
    let cases: Vec<(FamilyType, i64, i64)> =
        TYPES.iter().flat_map(|&t| [(2, 2), (2, 4), (3, 3)].map(|(r, m)| (t, r, m))).collect();
    let first_order: Vec<bool> = cases
        .par_iter()
        .map(|&(t, r, m)| {
            let f = Family::canonical(t, r, m, 60 - 2 * r).unwrap();
            first_order_residual(&f, 60).unwrap().is_zero_through(60 - 2 * r as usize)
        })
        .collect();
    let pde: Vec<PdeReport> = cases.par_iter().map(|&(t, r, m)| pde_residual(t, r, m, 40, 1).unwrap()).collect();
    let fo_ok = first_order.iter().filter(|&&b| b).count();
    let pde_ok = pde.iter().filter(|p| p.all_zero).count();
    let pde_failed: Vec<String> =
        pde.iter().filter(|p| !p.all_zero).map(|p| format!("{} ({},{})", p.family_type, p.r, p.m)).collect();
    let pass = fo_ok == cases.len() && pde_ok == cases.len();
    report(
        6,
        pass,
        &format!(
            "first-order ODE residual zero through K-2r (K=60): {fo_ok}/{n}; per-degree PDE residual zero through K=40: {pde_ok}/{n}{}",
            if pde_failed.is_empty() { String::new() } else { format!(" (nonzero: {})", pde_failed.join(", ")) },
            n = cases.len()
        ),
    );
    assert_eq!(fo_ok, cases.len(), "first-order residual");
    assert!(pde_failed.is_empty(), "PDE residual nonzero for {pde_failed:?}");
}

struct OrthCell {
    positive_200: bool,
    gram_zero: bool,
    closed_form: Option<bool>,
}

fn orth_cell(t: FamilyType, r: i64, m: i64) -> OrthCell {
    let f = Family::canonical(t, r, m, 54 * r).unwrap();
    let seq = reindex(&f).unwrap();
    let positive_200 = favard_coefficients(&seq, 200).unwrap().first_nonpositive().is_none();
    let fd = favard(&seq, 12).unwrap();
    let gram_zero = gram_check(&fd, 12).unwrap().offdiag_zero;
    let closed_form = (r == 2).then(|| identify_ultraspherical(&seq, r, m).identified).flatten().map(|id| {
        let u = Ultraspherical { nu: ExactRational::ratio(m + 1, m), ..id };
        (0..=50).filter(|n| n + u.shift >= 0).all(|n| seq.recurrence(n + u.shift).unwrap() == u.coefficients(n))
    });
    OrthCell { positive_200, gram_zero, closed_form }
}

#[test]
fn c7_orthogonality() {
    let cells: Vec<(FamilyType, i64, i64)> =
        TYPES.iter().flat_map(|&t| grid(2..=8, 2..=10).into_iter().map(move |(r, m)| (t, r, m))).collect();
    let res: Vec<OrthCell> = cells.par_iter().map(|&(t, r, m)| orth_cell(t, r, m)).collect();
    let pos = res.iter().filter(|c| c.positive_200).count();
    let gram = res.iter().filter(|c| c.gram_zero).count();
    let r2 = cells.iter().filter(|c| c.1 == 2).count();
    let identified = res.iter().filter(|c| c.closed_form.is_some()).count();
    let closed = res.iter().filter(|c| c.closed_form == Some(true)).count();
    let pass = pos == cells.len() && gram == cells.len() && identified > 0 && closed == identified;
    report(
        7,
        pass,
        &format!(
            "a_n > 0 for n <= 200: {pos}/{n}; Gram off-diagonals zero to N=12: {gram}/{n}; r=2 closed forms (nu = 1+1/m, n <= 50): {closed}/{identified} identified of {r2}",
            n = cells.len()
        ),
    );
    assert!(pass);
}

fn fit_check(t: FamilyType, r: i64, m: i64) -> std::result::Result<ExactRational, String> {
    let f = Family::canonical(t, r, m, 60).unwrap();
    match fit_ode(&f, &FitSpec::fourth_order()).unwrap() {
        FitOutcome::Candidate { operator, holdout_pass, .. } => {
            if !holdout_pass {
                return Err(format!("{t} ({r},{m}): holdout fails"));
            }
            let reference = |n| build_operator(t, r, m, n).unwrap().diff().clone();
            operator.proportional_to(reference, 0..=20).ok_or_else(|| format!("{t} ({r},{m}): not proportional"))
        }
        FitOutcome::Ambiguous { dimension, .. } => Err(format!("{t} ({r},{m}): kernel dimension {dimension}")),
        FitOutcome::NoOperator { .. } => Err(format!("{t} ({r},{m}): no operator")),
    }
}

#[test]
fn c8_blind_ode_recovery() {
    let results = [fit_check(FamilyType::Type1, 2, 2), fit_check(FamilyType::Type2, 2, 4)];
    let detail: Vec<String> = results
        .iter()
        .map(|x| match x {
            Ok(l) => format!("proportional, lambda = {l}"),
            Err(e) => e.clone(),
        })
        .collect();
    let pass = results.iter().all(|x| x.is_ok());
    report(8, pass, &format!("blind fit recovers the closed-form operators: {}", detail.join("; ")));
    assert!(pass, "{detail:?}");
}
