//! Surveillance data ingestion and imputation of the model's series.

mod impute;
mod imputed;
mod raw;

pub use impute::{
    fill_active, fill_cumulative, impute, impute_removed, impute_tests, screening_start,
    untracked_end, Imputation, HORIZON_DAYS,
};
pub use imputed::{build_signals, load_imputed, ImputedDataset, OutputSignals};
pub use raw::{
    load_raw, read_raw, RawDataset, RawRecord, IMPUTED_COLUMNS, MANDATORY_COLUMNS,
    SCREENING_COLUMNS,
};
