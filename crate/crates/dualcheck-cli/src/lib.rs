//! Command line front end for `dualcheck`: the `.sys` declaration language,
//! command dispatch and deterministic reports.

pub mod dsl;
pub mod report;
pub mod run;
