//! Grand Lebesgue space norms and Poincaré-type operator norms for radial
//! functions on the unit ball and its exterior.
//!
//! * [`psi`]: generating functions ψ, the `ψ_{α,d}` transform and BGLS norms.
//! * [`radial`]: domains, the extremal profiles `u_Δ`, `v_Δ` and centering.
//! * [`quadrature`]: weighted L_p norms by radial reduction.
//! * [`gamma_oracle`]: incomplete-Gamma closed forms of the core integrals.
//! * [`poincare`]: the ratio V(f, p), operator-norm estimates and sharpness scans.
//! * [`weighted`]: log-power weights, the p,q exponent and the ν transform.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fit;
pub mod gamma_oracle;
pub mod optimize;
pub mod poincare;
pub mod psi;
pub mod quadrature;
pub mod radial;
pub mod weighted;

pub use error::{Error, Result};

/// Order-preserving map, parallel when the `parallel` feature is on.
pub(crate) fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
