//! Experiment runner and command-line front end for `subcache`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod runner;
pub mod selftest;
pub mod spec;

/// Exit code when the configuration cannot be satisfied.
pub const EXIT_INFEASIBLE: u8 = 2;
/// Exit code for every other failure.
pub const EXIT_ERROR: u8 = 1;

/// Maps an error to the process exit code.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    let infeasible = err
        .chain()
        .any(|e| matches!(e.downcast_ref::<subcache::Error>(), Some(subcache::Error::Infeasible(_))));
    if infeasible {
        EXIT_INFEASIBLE
    } else {
        EXIT_ERROR
    }
}
