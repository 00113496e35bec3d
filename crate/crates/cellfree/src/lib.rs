//! Campaign harness for the cell-free uplink power control simulator:
//! JSON configuration, deterministic parallel drops, pooled statistics,
//! records CSV / summary JSON, and the `cellfree` command line.

pub mod campaign;
pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod summary;

pub use campaign::{run_campaign, run_drop, CampaignOutput, DropRecord, Plan};
pub use config::{CampaignConfig, ThreadCount};
pub use error::HarnessError;
pub use summary::{aggregate, AggregateSummary, MethodSummary};
