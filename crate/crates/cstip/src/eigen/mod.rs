//! κ, the singularity spectrum and the angular eigenfunctions.

mod kappa;
mod modes;
mod roots;
mod system;

pub use kappa::{
    c_of_eta, characteristic_value, classify, couple_characteristic, gamma_of, kappa_general,
    kappa_reduced, rotation_characteristic, rotation_lambda, rotation_roots_in, Branch, Case,
    Classification, KappaParts, DOUBLE_ROOT_BAND, NEAR_DOUBLE_BAND,
};
pub use modes::{
    default_window, modes_at, nullspace, spectrum, special_mode, ModeShape, SingularitySpectrum,
    SpecialMode, NULL_TOL,
};
pub use roots::{find_roots, Root, ROOT_RESIDUAL_TOL, SCAN_STEP};
pub use system::{
    assemble_raw, assemble_system, determinant, determinant_derivative, row_scales, DetValue,
    SPECIAL_LAMBDAS,
};
