//! Point-count and trace-of-Frobenius distributions for plane curves over
//! finite fields.
//!
//! The crate covers exact finite-field arithmetic, ternary forms and the
//! evaluation map on rational points of the plane, exhaustive and Monte
//! Carlo censuses of (smooth) plane curves, the `GL_3` mass formula for
//! plane quartics, and the continuous binomial models that approximate the
//! resulting trace distributions.

pub mod field;
pub mod forms;
pub mod linalg;
pub mod mass;
pub mod par;
pub mod report;
pub mod census;
pub mod cli;
pub mod eval_map;
pub mod smooth;
pub mod stats;

pub use field::{Field, FieldElement, FieldError};
pub use forms::{FormError, Gl3Matrix, MonomialBasis, ProjPoint, TernaryForm, Var};
