//! Performance model of host <-> accelerator-card memory access: PCIe
//! packetization, DMA engine behaviour, AXI fabric and memory endpoints,
//! plus an RDMA path. Two models share one scenario description: a closed
//! analytic formula and a discrete-event simulation; calibration recovers
//! the unreported constants from measured bandwidth points.

pub mod calibrate;
pub mod engine;
pub mod error;
pub mod fabric;
pub mod harness;
pub mod link;
pub mod plot;
pub mod reference;
pub mod report;
pub mod scenario;
pub mod sim;
pub mod units;

pub use error::{ModelError, Result};
pub use report::ModelKind;
pub use scenario::{
    builtin_scenario, builtin_scenarios, validate_scenario, Direction, ScenarioConfig,
    TransferRequest, ValidatedScenario, SCENARIO_NAMES,
};
pub use units::{Bandwidth, ByteSize, Nanos};
