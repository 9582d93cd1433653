//! Coinvariant spaces, the maps acting on them and the identity checks.

mod checks;
mod rewrite;
mod space;
mod theta;
mod u0;

pub use checks::{check_flip_descends, check_nabla, check_phi, check_t_tcheck, Delta, IdentityCheck, NablaCheck};
pub use rewrite::{rewrite_across, RewriteRule, Side};
pub use space::{CoinvSpace, MidSlot, Mode, OuterSlot, PVec};
pub use theta::{s_finite_lower, s_verma_finite, theta, theta_with, xi_sigma_plain, ThetaConv, THETA_CONV};
pub use u0::{u0_coinvariants, U0Coinv};

#[derive(Debug, thiserror::Error)]
pub enum CoinvError {
    #[error("order {0} is not allowed")]
    Order(usize),
    #[error("shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Cat(#[from] crate::cat_o::CatError),
    #[error(transparent)]
    Braid(#[from] crate::braiding::BraidError),
    #[error("{0}")]
    Singular(String),
}
