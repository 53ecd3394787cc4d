//! Reproducible numerical experiments on entropic uncertainty relations,
//! built on `epur-core`. Each command yields a table, a JSON summary, an
//! optional SVG plot and a list of violations with replayable states.

pub mod experiments;
pub mod output;
pub mod settings;
pub mod simplex;
pub mod state_file;
pub mod svg;
pub mod table;

pub use experiments::Outcome;
pub use settings::Settings;
