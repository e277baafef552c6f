//! Numerical kernels shared by the pricers and the model layer.

mod black_scholes;
mod hyp2f1;
mod normal;
mod quadrature;

pub use black_scholes::{bs_call_block, bs_put_block};
pub use hyp2f1::{hyp2f1_vix, hyp2f1_vix_direct, i1, HYP2F1_MAX_TERMS};
pub use normal::{norm_cdf, norm_pdf};
pub use quadrature::{integrate, integrate_segments, Domain, Quadrature, QuadratureConfig};
