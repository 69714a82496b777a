//! Lévy models and exact samplers for their Wiener–Hopf factors.

pub mod exponent;
pub mod model;
pub mod roots;
pub mod sampler;

pub use exponent::eval_psi_shifted;
pub use model::{BetaFamilyParams, LevyModel};
pub use roots::{find_roots, RootTable};
pub use sampler::{ExponentialMixture, FactorLaw, WhFactorSampler, DEFAULT_TRUNCATION};
