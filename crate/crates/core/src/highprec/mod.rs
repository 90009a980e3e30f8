//! Extended-precision band endpoints and integer-relation recovery of their minimal
//! polynomials.

mod lll;
mod minpoly;
mod refine;

pub use lll::lll_reduce;
pub use minpoly::{
    find_min_poly, is_primitive, quadratic_norm, rational_roots, verify_poly_root, verify_quadratic_root,
    MinPolyResult, NumberField,
};
pub use refine::{refine_endpoint, refine_from_seed, GUARD_BITS};

/// Default refinement precision for relation searches.
pub const DEFAULT_PRECISION_BITS: usize = 512;
