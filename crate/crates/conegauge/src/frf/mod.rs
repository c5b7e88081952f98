//! One-step facial residual functions and the algebra that chains them.

mod build;
mod expr;
mod gfunc;

pub use build::{expcone_g, frf_from_g, pcone_frf, ray_frf, ExpFaceTag, GFrf};
pub use expr::{diamond, rescaled_shift, sum_product_frf, FrfExpr, Term};
pub use gfunc::{GFunction, LOG_T_MAX, TLOG_T_MAX};
