pub mod cli;
pub mod data;
pub mod error;
pub mod experiments;
pub mod inference;
pub mod priors;
pub mod specfun;
pub mod yule_simon;

pub use error::{Error, Result};
pub use yule_simon::{FrequencySample, YuleSimon};
