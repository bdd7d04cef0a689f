//! Separation of subarcs by ball branch-and-bound, finite Jordan checks over
//! the family, grid scans of `D` and sampled general-position estimates.

mod gap;
mod genpos;
mod jordan;

pub use gap::{min_gap, min_gap_search, near_pairs, ArcPiece, GapSearch, NODE_BUDGET};
pub use genpos::{genpos_hypotheses, holder_estimate, GenPosReport, HolderFit};
pub use jordan::{
    decompose_intersection, intersection_coverage, jordan_check, pair_gap, piece_pair, scan_d, Coverage,
    Decomposition, GapReport, JordanCert, PiecePair, ScanReport, ScanRow,
};
