//! Entropic and variance-based uncertainty relations for a bosonic mode.
//!
//! States live in a truncated Fock basis ([`fock`]); quadrature marginals and
//! the Wigner function are sampled on uniform grids ([`quad`]); entropies are
//! computed on those grids ([`entropy`]) and combined with second moments
//! ([`moments`]) into relation verdicts ([`relations`]). Gaussian n-mode
//! states are handled in closed form ([`multimode`]), and [`variational`]
//! checks the eigenvalue equation satisfied by squeezed vacua.
//!
//! Every numerical type is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the precision.

pub mod entropy;
pub mod error;
pub mod fock;
pub mod moments;
pub mod multimode;
pub mod quad;
pub mod relations;
pub mod scalar;
pub mod variational;

pub use entropy::{
    differential_entropy, entropy_power, gaussian_entropy_1d, joint_entropy, mutual_information,
    nongaussianity, JointEntropy,
};
pub use error::{Error, Result};
pub use fock::{
    annihilation, displace, extremal_passive_state, haar_random_state, haar_random_state_with, haar_unitary,
    mix, quadrature_operators, squeezed_vacuum, trial_rng, FockDensity, FockState, FockVector,
    GaussianUnitarySpec, QuadOperator, Quadrature,
};
pub use moments::{
    correlation_coefficient, covariance, gaussian_mutual_information, gaussian_purity, rotate_covariance,
    CovarianceMatrix,
};
pub use multimode::{
    beamsplitter, gaussian_joint_entropies, nmode_bbm, nmode_chain, nmode_entropy_powers, nmode_epur,
    nmode_tight, nmode_tight_epur, random_physical_gamma, reduced_blocks, rotated_pair, two_mode_squeezed,
    GaussianState, Symplectic,
};
pub use quad::{hermite_basis, marginal_p, marginal_x, min_wigner, wigner, Density1D, Grid1D, WignerGrid};
pub use relations::{
    bbm, epur, evaluate, heisenberg, implication_chain, joint_conjecture, schrodinger_robertson, tight_epur,
    uncertainty_functional, ChainReport, EvalConfig, RelationReport, RelationVerdict, StateAnalysis,
};
pub use scalar::{ln_pi_e_hbar, Real, C};
pub use variational::{a_operator, eigencheck, EigenReport};

pub type FockVector64 = FockVector<f64>;
pub type FockVector32 = FockVector<f32>;
pub type FockDensity64 = FockDensity<f64>;
pub type FockDensity32 = FockDensity<f32>;
pub type Grid64 = Grid1D<f64>;
pub type Grid32 = Grid1D<f32>;
pub type Covariance64 = CovarianceMatrix<f64>;
pub type Covariance32 = CovarianceMatrix<f32>;
pub type Verdict64 = RelationVerdict<f64>;
pub type Verdict32 = RelationVerdict<f32>;
pub type Gaussian64 = GaussianState<f64>;
pub type Gaussian32 = GaussianState<f32>;
pub type Analysis64 = StateAnalysis<f64>;
