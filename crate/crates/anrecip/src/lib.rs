//! File formats, parallel evaluation and the command-line front end on top of
//! [`anrecip_core`].

pub mod cli;
pub mod commands;
pub mod fmt;
pub mod io;
pub mod manifest;
pub mod output;
pub mod parallel;
