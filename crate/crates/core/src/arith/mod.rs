//! Exact integer arithmetic and the budgeted factorization engine.

mod factor;
mod factorization;
mod modular;
mod numtheory;
mod prime;
mod rho;

use alloc::string::String;

use num_bigint::BigUint;
use rand_core::RngCore;

pub use factor::{factor, factor_with_hints};
pub use factorization::{Factorization, PowerSplit, Sign};
pub use modular::{inv_mod_u64, mul_mod_u64, pow_mod_u64};
pub use numtheory::{
    carmichael_lambda, divisors, euler_phi, factor_u64, legendre_u64, ln_biguint, moebius,
    mult_order, mult_order_u64, strip_support, support_within,
};
pub use prime::{is_prime, is_prime_u64, next_prime, primes_up_to};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("cannot factor zero")]
    ZeroInput,
    #[error("|m| = 1 has no prime factor")]
    NoPrimeFactor,
    #[error("factorization is incomplete under the current budget")]
    IncompleteFactorization,
    #[error("arguments are not coprime")]
    NotCoprime,
    #[error("supplied factorization is not a multiple of the group exponent")]
    NotAGroupExponent,
    #[error("invalid factorization: {0}")]
    InvalidFactorization(&'static str),
    #[error("cannot parse factorization `{0}`")]
    Parse(String),
}

/// Limits for [`factor`]: trial division bound, per-composite rho iteration
/// cap, and the seed of the rho parameter stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorBudget {
    pub trial_bound: u64,
    pub rho_iteration_cap: u64,
    pub rng_seed: u64,
}

impl FactorBudget {
    pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;
    pub const DEFAULT_RHO_CAP: u64 = 1 << 34;

    pub fn new(trial_bound: u64, rho_iteration_cap: u64, rng_seed: u64) -> Option<Self> {
        (trial_bound >= 2).then_some(FactorBudget { trial_bound, rho_iteration_cap, rng_seed })
    }
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: Self::DEFAULT_TRIAL_BOUND,
            rho_iteration_cap: Self::DEFAULT_RHO_CAP,
            rng_seed: 0,
        }
    }
}

/// Uniform-ish value in `[0, bound)`; `bound = 0` yields 0.
pub(crate) fn random_below<R: RngCore>(rng: &mut R, bound: &BigUint) -> BigUint {
    if bound.bits() == 0 {
        return BigUint::default();
    }
    let len = (bound.bits() as usize).div_ceil(8) + 8;
    let mut bytes = alloc::vec![0u8; len];
    rng.fill_bytes(&mut bytes);
    BigUint::from_bytes_le(&bytes) % bound
}
