//! Command-line interface.

/// Entry point used by the `gatsbi` binary.
pub fn run_from_env() -> i32 {
    0
}
