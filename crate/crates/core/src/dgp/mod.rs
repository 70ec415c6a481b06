//! Data-generating processes with latent truth for scoring.

pub mod catalog;
pub mod model;
pub mod noise;
pub mod path;
pub mod rng;

pub use catalog::catalog;
pub use model::{gen_model, GeneratedSample, ModelSpec};
pub use noise::{arfima_coeffs, gen_arfima, gen_garch, Garch11, NoiseKind, NoiseSpec};
pub use path::{Innovation, PathSpec};
pub use rng::{SeedRecord, Stream};
