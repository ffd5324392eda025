#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod graphs;
pub mod greens;
pub mod kernels;
pub mod poly;
pub mod quad;
pub mod special_fn;
pub mod spectra;
pub mod walks;

pub use error::{Error, Result};
