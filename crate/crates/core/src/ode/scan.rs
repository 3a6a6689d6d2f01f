use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::CPoly;
use crate::family::{Family, FamilyType};
use crate::parallel::map_ordered;

use super::operator::build_operator;

/// The shift `δ` with `n = k + δ`: the smallest of `{0, r, 2r}` under which the
/// operator at `n` annihilates the first three nonzero members.
pub fn align_index(f: &Family, t: FamilyType) -> Result<i64> {
    let r = f.r();
    let probe: Vec<(i64, &CPoly)> = f.nonzero_members().take(3).collect();
    if probe.len() < 3 {
        return Err(Error::AlignmentFailure(format!("only {} nonzero members up to k = {}", probe.len(), f.kmax())));
    }
    for delta in [0, r, 2 * r] {
        let ok = probe
            .iter()
            .all(|(k, p)| build_operator(t, r, f.m(), k + delta).map(|op| op.apply(p).is_zero()).unwrap_or(false));
        if ok {
            return Ok(delta);
        }
    }
    Err(Error::AlignmentFailure(format!("{t} operator, r = {r}, m = {}: no delta in {{0, r, 2r}}", f.m())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanFailure {
    pub n: Option<i64>,
    pub message: String,
    pub residual: Option<CPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCell {
    pub r: i64,
    pub m: i64,
    pub delta: Option<i64>,
    pub checked_n: Vec<i64>,
    pub pass: bool,
    pub failures: Vec<ScanFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub cells: usize,
    pub passed: usize,
    pub failed: usize,
    pub points_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub family_type: FamilyType,
    pub cells: Vec<ScanCell>,
    pub summary: ScanSummary,
}

impl ScanReport {
    pub fn pass(&self) -> bool {
        self.summary.failed == 0
    }
}

/// The evaluation points `5r, 6r, ..., 9r`.
pub fn standard_points(r: i64) -> Vec<i64> {
    (5..=9).map(|i| i * r).collect()
}

/// Residuals of one `(r, m)` cell at the given `n` values plus every aligned
/// lattice `n <= n_max`.
pub fn check_cell(t: FamilyType, r: i64, m: i64, points: &[i64], n_max: Option<i64>) -> ScanCell {
    let mut cell = ScanCell { r, m, delta: None, checked_n: Vec::new(), pass: false, failures: Vec::new() };
    let top = points.iter().copied().chain(n_max).max().unwrap_or(0).max(0);
    let fail = |message: String| ScanFailure { n: None, message, residual: None };
    let f = match Family::canonical(t, r, m, top) {
        Ok(f) => f,
        Err(e) => {
            cell.failures.push(fail(e.to_string()));
            return cell;
        }
    };
    let delta = match align_index(&f, t) {
        Ok(d) => d,
        Err(e) => {
            cell.failures.push(fail(e.to_string()));
            return cell;
        }
    };
    cell.delta = Some(delta);

    let mut ns: Vec<i64> = points.to_vec();
    if let Some(nm) = n_max {
        ns.extend(f.nonzero_members().map(|(k, _)| k + delta).filter(|&n| n <= nm));
    }
    ns.sort_unstable();
    ns.dedup();
    for n in ns {
        let k = n - delta;
        let Some(p) = f.get(k).filter(|_| k >= 0) else {
            cell.failures.push(ScanFailure {
                n: Some(n),
                message: format!("member k = {k} not generated"),
                residual: None,
            });
            continue;
        };
        let res = build_operator(t, r, m, n).map(|op| op.apply(p));
        match res {
            Ok(res) if res.is_zero() => {}
            Ok(res) => cell.failures.push(ScanFailure {
                n: Some(n),
                message: format!("nonzero residual at r = {r}, m = {m}, n = {n}"),
                residual: Some(res),
            }),
            Err(e) => cell.failures.push(ScanFailure { n: Some(n), message: e.to_string(), residual: None }),
        }
        cell.checked_n.push(n);
    }
    cell.pass = cell.failures.is_empty();
    cell
}

/// Check every cell of `r_range × m_range` at the standard points `5r..9r`
/// (and optionally all aligned `n <= n_max(r)`). Cells are ordered by `(r, m)`.
pub fn residual_scan(
    t: FamilyType,
    r_range: std::ops::RangeInclusive<i64>,
    m_range: std::ops::RangeInclusive<i64>,
    n_max: impl Fn(i64) -> Option<i64> + Sync + Send,
    jobs: usize,
) -> Result<ScanReport> {
    if *r_range.start() < 2 || *m_range.start() < 2 {
        return Err(Error::ParameterDomain("r and m ranges must start at 2 or above".into()));
    }
    let grid: Vec<(i64, i64)> = r_range.flat_map(|r| m_range.clone().map(move |m| (r, m))).collect();
    let cells = map_ordered(jobs, &grid, |&(r, m)| check_cell(t, r, m, &standard_points(r), n_max(r)));
    let passed = cells.iter().filter(|c| c.pass).count();
    let summary = ScanSummary {
        cells: cells.len(),
        passed,
        failed: cells.len() - passed,
        points_checked: cells.iter().map(|c| c.checked_n.len()).sum(),
    };
    Ok(ScanReport { family_type: t, cells, summary })
}
