//! Grid audits of symbol classes and of the pointwise inequalities built from
//! the model symbols.

mod grid;
mod inequalities;
mod report;
mod symbol_class;

pub use grid::PhaseGrid;
pub use inequalities::{
    audit_ellipticity, audit_psi_derivatives, audit_rep_bounds, audit_weight_bounds, audit_weight_inequality,
    ellipticity_ratios, localizer_derivative_ratio, q_hessian_fields, ratio_symbol_field, rep_ratios,
    weight_bound_ratios, weight_ratio, DEFAULT_TWO_SIDED, REP_FLOOR,
};
pub use report::{extremal, Extremum, InequalityReport};
pub use symbol_class::{
    centered_difference, check_symbol_class, ClassAuditOptions, OrderFunction, OrderRow, SymbolClassReport,
};

#[cfg(test)]
mod tests;
