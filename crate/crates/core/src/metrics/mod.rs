//! Evaluation formulas, per-run records, seed-averaged tables and ranking claims.

mod formulas;
mod output;
mod record;
mod table;
mod trend;

pub use formulas::{loss_stats, throughput};
pub use output::{describe_record, records_to_csv, CSV_HEADER};
pub use record::MetricsRecord;
pub use table::{aggregate, BenchmarkTable, Factor, TableCell};
pub use trend::{seed_wins, trend_check, ClaimResult};
