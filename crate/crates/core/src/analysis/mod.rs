//! Error tables, certification scans and figure data.

pub mod figures;
pub mod scans;
pub mod tables;

pub use figures::{figure_data, FigureData, FIGURE_POINTS};
pub use scans::{
    certification_b_grid, chain_eq6_gaps, dominance_log_gaps, envelope_curves, envelope_point,
    f_dec_eq2, f_inc_sinh, g_function, g_scaled, log_grid, scan_chain_eq6, scan_envelope,
    scan_f_ratio_monotone, scan_g_negative, scan_jp_dominance, scan_sandwich, uniform_grid,
    Criterion, DominanceGaps, DominanceReport, EnvelopePoint, RatioKind, ScanReport,
    DOMINANCE_A_VALUES, GRID_A_VALUES, GRID_B_PER_A,
};
pub use tables::{
    epsilon_pct, error_table, linear_grid, ErrorCell, ErrorRow, TablePreset, TableSpec,
};
