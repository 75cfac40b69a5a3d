//! Hosts the `acceptance` test target; the criteria live in `crates/core/tests/acceptance.rs`.
