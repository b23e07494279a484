//! Symmetric-function engine: partitions, truncated series, Schur evaluation
//! (four routes), Giambelli determinants, and generalized Jacobi–Trudi tables.

mod partition;
mod schur;
mod series;
mod table;

pub use partition::{FrobeniusCoords, Partition, SymfunError};
pub use schur::{
    giambelli_det, hook_series_coeffs, schur_bialternant, schur_eval, schur_from_e, schur_from_h,
    schur_tableaux, SchurMethod, BIALTERNANT_GAP_TOL,
};
pub use series::{power_sums, power_to_eh, TruncatedSeries};
pub use table::{generalized_giambelli, generalized_schur, IndeterminateTable};
