use serde::Serialize;
use serde_json::{json, Value};

use sepoly::classify::{
    classification_report, gegenbauer as gegenbauer_basis, shifted_superposition_search, superposition_fit,
    verify_gegenbauer_reduction,
};
use sepoly::family::support_profile;
use sepoly::ode::{
    self, align_index, build_operator, check_cell, indicial_product, is_resonant, leading_symbol, polynomial_kernel,
    residual_scan, standard_points, FitOutcome, FitSpec,
};
use sepoly::orth::{favard as favard_data, favard_coefficients, gram_check, identify_ultraspherical, reindex};
use sepoly::parallel::map_ordered;
use sepoly::series::{first_order_residual, pde_residual};
use sepoly::{CPoly, ExactRational, Family, FamilyParams, FamilyType};

use crate::args::*;

pub struct Outcome {
    pub results: Value,
    pub findings: Vec<String>,
    pub summary: String,
    /// Replaces the JSON on stdout (`gen --print`).
    pub text: Option<String>,
}

impl Outcome {
    fn new(results: impl Serialize, findings: Vec<String>, summary: String) -> Self {
        Outcome { results: to_value(results), findings, summary, text: None }
    }
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

pub fn gen(a: &GenArgs) -> sepoly::Result<Outcome> {
    let j0 = match (a.family_type, a.j0) {
        (Some(t), _) => t.j0(a.r),
        (None, Some(j)) => j,
        (None, None) => -2 * a.r,
    };
    let f = Family::generate(FamilyParams::new(a.r, a.m, j0)?, a.kmax.unwrap_or(12 * a.r))?;
    let bad: Vec<i64> = (0..=f.kmax()).filter(|&k| !f.recursion_residual(k).is_zero()).collect();
    let findings = bad.iter().map(|k| format!("recursion residual nonzero at k = {k}")).collect();
    let profile = support_profile(&f).ok();
    let summary = format!("{} members k = 0..{}", f.kmax() + 1, f.kmax());
    let mut out = Outcome::new(json!({ "family": f.dump(), "support": profile }), findings, summary);
    if a.print {
        out.text = Some((0..=f.kmax()).map(|k| format!("P_{k} = {}\n", f.poly(k))).collect());
    }
    Ok(out)
}

fn scan_findings(cells: &[sepoly::ode::ScanCell]) -> Vec<String> {
    cells
        .iter()
        .filter(|c| !c.pass)
        .flat_map(|c| {
            c.failures.iter().map(move |f| match f.n {
                Some(n) => format!("(r,m) = ({},{}), n = {n}: {}", c.r, c.m, f.message),
                None => format!("(r,m) = ({},{}): {}", c.r, c.m, f.message),
            })
        })
        .collect()
}

pub fn verify_ode(a: &GridArgs, jobs: usize) -> sepoly::Result<Outcome> {
    let factor = a.n_max_factor;
    let rep = residual_scan(a.family_type, a.r_range.clone(), a.m_range.clone(), |r| factor.map(|f| f * r), jobs)?;
    let s = &rep.summary;
    let summary = format!("{}/{} cells, {} points", s.passed, s.cells, s.points_checked);
    Ok(Outcome::new(&rep, scan_findings(&rep.cells), summary))
}

#[derive(Serialize)]
struct CellSurvey {
    r: i64,
    m: i64,
    delta: Option<i64>,
    residual_pass: bool,
    kernel_n: i64,
    kernel_dimension: Option<usize>,
    resonant: bool,
    favard_positive: Option<bool>,
    notes: Vec<String>,
}

/// Kernel bound: every candidate degree plus slack.
fn default_bound(t: FamilyType, r: i64, m: i64, n: i64) -> usize {
    let ind = ode::indicial(t, r, m, n);
    let top = ind
        .admissible_degrees
        .iter()
        .copied()
        .chain(ind.symbol_roots.iter().filter_map(ExactRational::to_i64))
        .max()
        .unwrap_or(0)
        .max(0);
    top as usize + 4
}

fn survey(t: FamilyType, r: i64, m: i64, n_max: Option<i64>) -> CellSurvey {
    let mut notes = Vec::new();
    let delta = Family::canonical(t, r, m, 6 * r).and_then(|f| align_index(&f, t)).ok();
    let cell = check_cell(t, r, m, &standard_points(r), n_max);
    let kernel_n = 6 * r;
    let kernel_dimension = build_operator(t, r, m, kernel_n)
        .map(|op| polynomial_kernel(op.diff(), default_bound(t, r, m, kernel_n), None).len())
        .map_err(|e| notes.push(e.to_string()))
        .ok();
    let favard_positive = Family::canonical(t, r, m, 4 * r)
        .and_then(|f| reindex(&f))
        .and_then(|s| favard_coefficients(&s, 50))
        .map(|c| c.first_nonpositive().is_none())
        .map_err(|e| notes.push(e.to_string()))
        .ok();
    CellSurvey {
        r,
        m,
        delta,
        residual_pass: cell.pass,
        kernel_n,
        kernel_dimension,
        resonant: is_resonant(r, m),
        favard_positive,
        notes,
    }
}

pub fn scan(a: &GridArgs, jobs: usize) -> sepoly::Result<Outcome> {
    if *a.r_range.start() < 2 || *a.m_range.start() < 2 {
        return Err(sepoly::Error::ParameterDomain("r and m ranges must start at 2 or above".into()));
    }
    let grid: Vec<(i64, i64)> = a.r_range.clone().flat_map(|r| a.m_range.clone().map(move |m| (r, m))).collect();
    let t = a.family_type;
    let factor = a.n_max_factor;
    let cells = map_ordered(jobs, &grid, |&(r, m)| survey(t, r, m, factor.map(|f| f * r)));
    let mut findings = Vec::new();
    for c in &cells {
        let at = format!("(r,m) = ({},{})", c.r, c.m);
        if c.delta.is_none() {
            findings.push(format!("{at}: no alignment"));
        }
        if !c.residual_pass {
            findings.push(format!("{at}: nonzero residual"));
        }
        if !c.resonant && c.kernel_dimension != Some(1) {
            findings.push(format!("{at}: kernel dimension {:?} at n = {}", c.kernel_dimension, c.kernel_n));
        }
        if c.favard_positive != Some(true) {
            findings.push(format!("{at}: Favard coefficients not all positive"));
        }
    }
    let summary = format!("{} cells surveyed", cells.len());
    Ok(Outcome::new(json!({ "family_type": t, "cells": cells }), findings, summary))
}

pub fn indicial(a: &IndicialArgs) -> sepoly::Result<Outcome> {
    let (t, r, m, n) = (a.family_type, a.r, a.m, a.n);
    let op = build_operator(t, r, m, n)?;
    let data = ode::indicial(t, r, m, n);
    let table: Vec<Value> = (0..=a.s_max)
        .map(|s| {
            let sym = leading_symbol(&op, s);
            let prod = indicial_product(t, r, m, n, s as i64);
            json!({ "s": s, "leading_symbol": sym, "product": prod, "equal": sym == prod })
        })
        .collect();
    let findings: Vec<String> = table
        .iter()
        .filter(|row| row["equal"] == false)
        .map(|row| {
            let (sym, prod) = (row["leading_symbol"].as_str(), row["product"].as_str());
            format!("s = {}: leading symbol {} != product {}", row["s"], sym.unwrap_or("?"), prod.unwrap_or("?"))
        })
        .collect();
    let summary = format!("admissible degrees {:?}, resonant {}", data.admissible_degrees, data.resonant);
    Ok(Outcome::new(json!({ "indicial": data, "table": table }), findings, summary))
}

pub fn kernel(a: &KernelArgs) -> sepoly::Result<Outcome> {
    let (t, r, m, n) = (a.family_type, a.r, a.m, a.n);
    let op = build_operator(t, r, m, n)?;
    let bound = a.bound.unwrap_or_else(|| default_bound(t, r, m, n));
    let basis = polynomial_kernel(op.diff(), bound, a.parity);
    let member =
        (n >= 0).then(|| Family::canonical(t, r, m, n.max(0)).map(|f| f.poly(n - 2 * r).clone())).transpose()?;
    let ratio = match (&member, basis.as_slice()) {
        (Some(p), [g]) if !p.is_zero() => g.ratio_to(p),
        _ => None,
    };
    let mut findings = Vec::new();
    if basis.len() != 1 {
        let note = if is_resonant(r, m) { " (resonant pair)" } else { "" };
        findings.push(format!("kernel dimension {}{note}", basis.len()));
    } else if ratio.is_none() {
        findings.push("kernel generator is not proportional to the family member".into());
    }
    let text: Vec<String> = basis.iter().map(CPoly::to_string).collect();
    let summary = format!("dimension {} at degree bound {bound}", basis.len());
    let results = json!({
        "bound": bound,
        "dimension": basis.len(),
        "basis": basis,
        "basis_text": text,
        "family_member": member,
        "ratio_to_member": ratio,
    });
    Ok(Outcome::new(results, findings, summary))
}

pub fn classify(a: &ClassifyArgs, jobs: usize) -> sepoly::Result<Outcome> {
    let rep = classification_report(a.r, a.m, a.kmax.unwrap_or(12 * a.r), jobs)?;
    let findings = rep
        .entries
        .iter()
        .filter(|e| e.pass == Some(false) || e.error.is_some())
        .map(|e| match &e.error {
            Some(err) => format!("j0 = {}: {err}", e.j0),
            None => format!("j0 = {}: superposition violated at k = {:?}", e.j0, e.violations),
        })
        .collect();
    let summary = format!("{} seed indices classified", rep.entries.len());
    Ok(Outcome::new(&rep, findings, summary))
}

pub fn superpose(a: &SuperposeArgs) -> sepoly::Result<Outcome> {
    let kmax = a.kmax.unwrap_or(12 * a.r);
    let fit = superposition_fit(a.r, a.m, a.j0, kmax)?;
    let shifted = if a.max_shift > 0 && !fit.pass {
        Some(shifted_superposition_search(a.r, a.m, a.j0, kmax, a.max_shift)?)
    } else {
        None
    };
    let mut findings = Vec::new();
    if !fit.pass {
        findings.push(format!("superposition violated at k = {:?}", fit.violations));
        if let Some(None) = &shifted {
            findings.push(format!("no shifted superposition with shifts up to {}", a.max_shift));
        }
    }
    let summary = format!("alpha = {}, beta = {}, certified on {} members", fit.alpha, fit.beta, fit.certified_k.len());
    Ok(Outcome::new(json!({ "fit": fit, "shifted": shifted }), findings, summary))
}

pub fn gegenbauer(a: &GegenbauerArgs) -> sepoly::Result<Outcome> {
    if let (Some(r), Some(j0)) = (a.r, a.j0) {
        let rep = verify_gegenbauer_reduction(r, a.m, j0, a.count)?;
        let summary = format!("{} members, case {:?}", rep.members.len(), rep.case);
        let findings = rep.findings.clone();
        return Ok(Outcome::new(&rep, findings, summary));
    }
    let b = gegenbauer_basis(a.m, a.n_max)?;
    let findings = if b.certified { Vec::new() } else { vec!["basis fails its differential equation".into()] };
    let summary = format!("lambda = {}, Q_0..Q_{}", b.lambda, a.n_max);
    Ok(Outcome::new(&b, findings, summary))
}

fn sequence(t: FamilyType, r: i64, m: i64, terms: i64) -> sepoly::Result<sepoly::orth::ReindexedSequence> {
    reindex(&Family::canonical(t, r, m, (terms + 2) * r)?)
}

pub fn favard(a: &FavardArgs) -> sepoly::Result<Outcome> {
    let seq = sequence(a.family_type, a.r, a.m, 2)?;
    let c = favard_coefficients(&seq, a.n_max)?;
    let findings = c.first_nonpositive().map(|n| format!("a_{n} = {} is not positive", c.a_n(n))).into_iter().collect();
    let summary = format!("a_1..a_{} computed", a.n_max);
    Ok(Outcome::new(json!({ "index_map": seq.index_map, "coefficients": c }), findings, summary))
}

pub fn gram(a: &GramArgs) -> sepoly::Result<Outcome> {
    let seq = sequence(a.family_type, a.r, a.m, a.n as i64)?;
    let fd = favard_data(&seq, a.n)?;
    let g = gram_check(&fd, a.n)?;
    let mut findings: Vec<String> = g.nonzero_offdiag.iter().map(|(i, j)| format!("<p_{i}, p_{j}> != 0")).collect();
    if !g.diag_positive {
        findings.push("nonpositive diagonal entry".into());
    }
    if !g.diag_matches_products {
        findings.push("diagonal differs from a_1...a_n".into());
    }
    let summary = format!("Gram matrix to N = {}, off-diagonal zero: {}", a.n, g.offdiag_zero);
    Ok(Outcome::new(json!({ "favard": fd, "gram": g }), findings, summary))
}

pub fn identify(a: &IdentifyArgs) -> sepoly::Result<Outcome> {
    let seq = sequence(a.family_type, a.r, a.m, a.terms)?;
    let rep = identify_ultraspherical(&seq, a.r, a.m);
    let findings = match &rep.identified {
        Some(_) => Vec::new(),
        None => vec![format!("no match with nu = {} and c0 in {{1/2, 1}}", rep.nu)],
    };
    let summary = match (&rep.identified, &rep.fitted) {
        (Some(u), _) => format!("nu = {}, c0 = {}, shift {}", u.nu, u.c0, u.shift),
        (None, Some(u)) => format!("fitted nu = {}, c0 = {}", u.nu, u.c0),
        (None, None) => "no identification".into(),
    };
    Ok(Outcome::new(&rep, findings, summary))
}

pub fn series(a: &SeriesArgs) -> sepoly::Result<Outcome> {
    let (t, r, m, k) = (a.family_type, a.r, a.m, a.k);
    let through = k as i64 - 2 * r;
    if through < 0 {
        return Err(sepoly::Error::ParameterDomain(format!("K = {k} is below 2r")));
    }
    let f = Family::canonical(t, r, m, through)?;
    let res = first_order_residual(&f, k)?;
    let nonzero = res.nonzero_exponents(through as usize);
    let findings = nonzero.iter().map(|e| format!("residual nonzero at z^{e}")).collect();
    let summary = format!("residual checked through z^{through}");
    Ok(Outcome::new(json!({ "checked_through": through, "nonzero_exponents": nonzero }), findings, summary))
}

pub fn pde(a: &SeriesArgs, jobs: usize) -> sepoly::Result<Outcome> {
    let rep = pde_residual(a.family_type, a.r, a.m, a.k, jobs)?;
    let mut findings: Vec<String> =
        rep.nonzero_exponents.iter().map(|e| format!("per-degree residual nonzero at z^{e}")).collect();
    if let Some(d) = &rep.discrepancy {
        findings.push(format!("reduced operator minus closed form at z^{}: {}", d.exponent, d.difference));
    }
    let summary = format!("mapping {:?}, all zero: {}", rep.mapping, rep.all_zero);
    Ok(Outcome::new(&rep, findings, summary))
}

pub fn fit_ode(a: &FitArgs) -> sepoly::Result<Outcome> {
    let (r, m) = (a.r, a.m);
    let t = a
        .family_type
        .or_else(|| a.j0.and_then(|j| [FamilyType::Type1, FamilyType::Type2].into_iter().find(|t| t.j0(r) == j)));
    let j0 = a.j0.or(t.map(|t| t.j0(r))).unwrap_or(-2 * r);
    let f = Family::generate(FamilyParams::new(r, m, j0)?, a.kmax)?;
    let outcome = ode::fit_ode(&f, &FitSpec::fourth_order())?;
    let mut findings = Vec::new();
    let mut lambda = None;
    match &outcome {
        FitOutcome::Candidate { operator, holdout_pass, .. } => {
            if !holdout_pass {
                findings.push("candidate fails on held-out members".into());
            }
            if let Some(t) = t {
                lambda = operator.proportional_to(|n| build_operator(t, r, m, n).unwrap().diff().clone(), 0..=20);
                if lambda.is_none() {
                    findings.push(format!("candidate is not proportional to the {t} operator"));
                }
            }
        }
        FitOutcome::Ambiguous { dimension, .. } => {
            findings.push(format!("solution space has dimension {dimension}; operator not determined"))
        }
        FitOutcome::NoOperator { .. } => findings.push("no nonzero operator fits".into()),
    }
    let summary = match (&outcome, &lambda) {
        (_, Some(l)) => format!("unique operator, {l} × closed form"),
        (FitOutcome::Candidate { .. }, None) => "unique operator".into(),
        (FitOutcome::Ambiguous { dimension, .. }, _) => format!("ambiguous, dimension {dimension}"),
        (FitOutcome::NoOperator { .. }, _) => "no operator".into(),
    };
    Ok(Outcome::new(json!({ "outcome": outcome, "proportionality": lambda }), findings, summary))
}
