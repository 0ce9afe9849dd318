//! Library surface of the `artin` command-line tool: the instance-file
//! schema and the subcommand implementations, exposed so integration
//! tests can drive them directly.

pub mod commands;
pub mod schema;
