//! Library half of the census CLI: figure rendering and the expected-count
//! table behind `check-counts`.

#![forbid(unsafe_code)]

pub mod counts;
pub mod figure;
