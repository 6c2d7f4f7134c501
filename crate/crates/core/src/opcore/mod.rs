//! Truncated operator algebra.

pub mod apply;
pub mod diamond;
pub mod kind;
pub mod linalg;
pub mod mul;
pub mod operator;
pub mod orders;
pub mod precision;
pub mod units;

pub use apply::apply;
pub use diamond::{diamond, diamond_mono, from_slices, project_pi, slice, slices};
pub use kind::Kind;
pub use linalg::Echelon;
pub use mul::{commutator, mul, pow};
pub use operator::{Mono, Operator};
pub use orders::{check_quasi_elliptic, gamma_order, homogeneous_component, ht_n, ord, ord_n, satisfies_a1, symbol, GammaInfo};
pub use precision::Precision;
pub use units::{invert_unit_op, is_regular_up_to, is_unit, operator_from_diamonds};
