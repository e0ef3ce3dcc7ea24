//! Independent reference computations used to cross-check the main algorithms.

pub mod ideals;
pub mod points;
pub mod root_number;
pub mod torsion;

pub use ideals::{ideal_class_numbers, IdealClassReport};
pub use points::brute_force_count;
pub use root_number::root_number_by_character;
pub use torsion::{has_rational_three_torsion, integer_roots};
