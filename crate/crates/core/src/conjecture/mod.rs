//! Positivity experiments: `F_{n,k}`, banded Chebyshev matrices, minor
//! searches and parameter scans.

mod band;
mod fnk;
mod scan;
mod tp;

pub use band::{
    band_matrix, horizontal_matrix, row_transform, transform_factor, BandMatrix, ChebCombo,
    BAND_MAX_N,
};
pub use fnk::{
    c_coefficients, decomposition_checks, f_n0_closed, f_nk, DecompositionCheck, FnkValue,
    FNK_MAX_N,
};
pub use scan::{
    alpha_grid, min_cell, positivity_threshold, scan_conjecture1, scan_theorem, to_f64,
    witness_order, Conjecture1Report, FnkSample, HeatCell, OriginWitness, TheoremReport, XyGrid,
    SCAN_MAX_N,
};
pub use tp::{
    check_tp, check_tp_with, minor_count, subsets, MinorWitness, OrderMinimum, TpCheckReport,
    TP_MINOR_LIMIT,
};
