//! Model files, built-in reference tables and the commands of the `jumpvix` binary.

mod commands;
mod config;
mod reproduce;
mod tables;

pub use commands::{
    cmd_asym, cmd_converge, cmd_forward, cmd_mc, exit_code, parse_list, parse_strike_grid,
    resolve_output_path, RunConfig, Scaling, SideSelection, StrikeSpec, OUT_DIR_ENV, PRICE_COLUMNS,
};
pub use config::ModelFile;
pub use reproduce::{
    printed_half_unit, reproduce, reproduce_fixture, CellKind, CellResult, CellStatus,
    ReproOptions, ReproReport,
};
pub use tables::{fixture, FixtureRow, McCell, TableFixture, TableId};
