//! Primal-dual 3-approximation for the minimum-cost 2-edge-connected spanning
//! subgraph problem, with exact rational arithmetic, a verifiable dual lower
//! bound, and independent checkers.
//!
//! ```
//! use ecss::{grow, run_cleanup, build_certificate, check_ratio_certificate, instances};
//!
//! let g = instances::fix_tri();
//! let trace = grow::grow_simple(&g).unwrap();
//! let sol = run_cleanup(&g, &trace.solution_order).unwrap();
//! let cert = build_certificate(&trace).unwrap();
//! let report = check_ratio_certificate(&g, &sol, &cert).unwrap();
//! assert!(report.feasible && report.within_three);
//! ```

pub mod cleanup;
pub mod cli;
pub mod cost;
pub mod dual;
pub mod error;
pub mod grow;
pub mod instances;
pub mod multigraph;
pub mod verify;

pub use cleanup::{run_cleanup, Solution};
pub use cost::Cost;
pub use dual::{build_certificate, check_ratio_certificate, DualCertificate, RatioReport};
pub use error::{Error, Result};
pub use grow::{GrowOptions, GrowTrace, Variant};
pub use multigraph::{EdgeId, MultiGraph, NodeId};
