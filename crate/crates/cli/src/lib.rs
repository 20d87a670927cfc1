//! Game files, command dispatch and report rendering for the
//! `poset-rescue` binary.

pub mod error;
pub mod execute;
pub mod gamefile;
pub mod report;

pub use error::CliError;
pub use execute::{execute, Command, Flags};
pub use gamefile::{parse_fraction, parse_game_file, render_game_file, ParsedGame};
pub use report::{render_report, Format, Report};
