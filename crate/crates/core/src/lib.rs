//! Magnetic trap disorder from self-affine edge roughness of current-carrying
//! wires: roughness spectra, the wire transfer function, field-noise spectra
//! and variances, trap design limits, a Biot–Savart cross-check and edge
//! profile synthesis.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod config;
pub mod design;
pub mod edge_model;
pub mod error;
pub mod figures;
pub mod oracle_biot_savart;
pub mod profile_synth;
pub mod quad;
pub mod specfun;
pub mod transfer;
pub mod trap_noise;
pub mod units;
pub mod validate;

pub use error::{Error, Result};
