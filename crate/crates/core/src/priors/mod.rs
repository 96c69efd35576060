//! The two objective priors for α: the Jeffreys prior and the loss-based
//! prior on the grid D_M.

mod jeffreys;
mod loss;
mod tail;

pub use jeffreys::{
    fisher_information, fisher_information_oracle, jeffreys_normalizer, jeffreys_unnormalized,
    jeffreys_unnormalized_with, ln_jeffreys_unnormalized, FisherOracle, JeffreysPrior,
};
pub use loss::{kl_divergence, loss_based_prior, min_kl_over_grid, GridPrior};
