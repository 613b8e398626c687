//! Command-line front end and HTTP service for `pqbezier`.

pub mod commands;
pub mod service;
