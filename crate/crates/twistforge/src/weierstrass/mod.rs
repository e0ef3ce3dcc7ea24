//! Long Weierstrass models over Q: invariants, coordinate changes, twists,
//! reduction types and naive point counts.

mod model;
mod points;
mod reduction;

pub use model::{derive_invariants, inverse_parameters, quadratic_twist, transform, Invariants, WeierstrassModel};
pub use points::{
    count_points_ns, count_points_ns_with_budget, reduce_coefficients, torsion_order_bound,
    DEFAULT_BUDGET,
};
pub use reduction::{
    reduction_type, reduction_type_checked, split_by_point_count, Criterion, ReductionKind,
    ReductionReport,
};
