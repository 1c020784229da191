//! The chapters under `book/src`, one module each, so that `cargo test`
//! compiles and runs every snippet in the book.

#![doc = include_str!("../../../book/src/introduction.md")]

#[doc = include_str!("../../../book/src/permanents.md")]
pub mod permanents {}

#[doc = include_str!("../../../book/src/hpsm.md")]
pub mod hpsm {}

#[doc = include_str!("../../../book/src/thermal-light.md")]
pub mod thermal_light {}

#[doc = include_str!("../../../book/src/fock-oracle.md")]
pub mod fock_oracle {}

#[doc = include_str!("../../../book/src/sampling.md")]
pub mod sampling {}

#[doc = include_str!("../../../book/src/resources.md")]
pub mod resources {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
