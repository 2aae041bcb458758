pub mod baselines;
pub mod bits;
mod build;
pub mod card;
pub mod convolution;
pub mod counting;
pub mod cyclic;
pub mod error;
pub mod graph;
pub mod instance;
pub mod integer;
pub mod multiset;
pub mod ntt;
pub mod number;
pub mod sumset;
pub mod witness;

pub use error::{Error, Result};
