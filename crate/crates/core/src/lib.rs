//! Triorthogonal and generalized triorthogonal codes for magic-state distillation.

pub mod cczsearch;
pub mod checkcodes;
pub mod cli;
pub mod codefile;
pub mod enumeration;
pub mod error;
pub mod f2;
pub mod lowweight;
pub mod protocol;
pub mod randtrio;
pub mod reedmuller;
pub mod reproduce;
pub mod simulate;
pub mod svoracle;
pub mod tables;
pub mod trio;

pub use error::{Error, Result};
