//! Monte Carlo sampling of the mixed stable subordinator, its inverse, the
//! mixed fractional Poisson process and its increments.

pub mod ensemble;
pub mod grid;
pub mod paths;
pub mod rng;
pub mod stable;

pub use ensemble::{fill_rows, simulate_ensemble, thread_pool, EnsembleKind, PathEnsemble, SimOptions};
pub use grid::{default_ds, default_s_cap, lagged_times, SimGrid};
pub use paths::{
    mfpn_from_mfpp, poisson_layer, simulate_inverse_path, simulate_mfnpp_path, simulate_mfpp_path, walk_inverse, Walk,
};
pub use rng::{substream, ReplicateRngs, StreamLabel};
pub use stable::{sample_mixed_increment, sample_stable_increment, MixedIncrementSampler, StableSampler};
