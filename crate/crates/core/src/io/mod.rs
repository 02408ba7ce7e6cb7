//! Configuration, snapshots and CSV reports.

mod config;
mod report;
mod snapshot;

pub use config::{
    load_config, parse_config, DataSource, GridConfig, NormsConfig, ParamsConfig, RunConfig,
    TimeConfig,
};
pub use report::{write_report, Cell, ReportTable};
pub use snapshot::{
    decode_snapshot, encode_snapshot, read_snapshot, write_snapshot, Snapshot, HEADER_LEN, MAGIC,
    VERSION,
};
