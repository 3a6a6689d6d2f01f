//! Fourth-order operators in `c`, residual scans, indicial data, exact
//! polynomial kernels and the ODE fitting explorer.

mod fit;
mod indicial;
mod kernel;
mod operator;
mod scan;

pub use fit::{fit_ode, FitOutcome, FitSpec, FittedOperator};
pub use indicial::{
    indicial, indicial_factors, indicial_product, is_resonant, symbol_factors, symbol_product, IndicialData,
};
pub use kernel::{operator_matrix, polynomial_kernel};
pub use operator::{build_operator, DiffOperator, OdeOperator, OdeScalars};
pub use scan::{
    align_index, check_cell, residual_scan, standard_points, ScanCell, ScanFailure, ScanReport, ScanSummary,
};

use crate::exact::ExactRational;

/// Coefficient of `c^s` in `op(c^s)`.
pub fn leading_symbol(op: &OdeOperator, s: usize) -> ExactRational {
    op.leading_symbol(s)
}
