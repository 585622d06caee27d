//! Model components for mapping vegetation cover types from multispectral
//! reflectance time series.
//!
//! The crate provides the pieces of a hierarchical Bayesian mixture model:
//! spectral and spatial thin-plate spline bases ([`basis`]), the parameter
//! state with its priors ([`model`]), the marginalized mixture likelihood
//! ([`likelihood`]), a slice-sampling MCMC engine ([`sampler`]), posterior
//! prediction of cover types and suitability surfaces ([`predict`]), and a
//! synthetic-scenario generator for end-to-end checks ([`simulate`]).

pub mod basis;
pub mod likelihood;
pub mod math;
pub mod model;
pub mod predict;
pub mod sampler;
pub mod simulate;

mod error;

pub use error::{Error, ErrorClass};

pub type Result<T> = std::result::Result<T, Error>;
