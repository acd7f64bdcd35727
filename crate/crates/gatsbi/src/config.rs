//! Structured configuration file.
