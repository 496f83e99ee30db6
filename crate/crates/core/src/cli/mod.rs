//! Command-line harness: run configuration, the verification suites and the JSON report.

mod commands;
mod config;
mod report;

pub use commands::{
    algebra_checks, cmd_all, cmd_compare_v, cmd_equivalence, cmd_sectors, cmd_verify_algebra, cmd_verify_geometry,
    compare_v_checks, constant_gauge, equivalence_checks, flat_reduction, geometry_checks, par_map, sector_checks,
    varying_gauge, DISCREPANCY_CHARTS, DISCREPANCY_FLOOR,
};
pub use config::{parse_charts, parse_seeds, ChartSpec, Overrides, RunConfig};
pub use report::{Check, CheckList, Comparison, ConfigEcho, Conventions, Num, Report, Summary};
