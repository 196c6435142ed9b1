//! Special functions and random sampling primitives.

mod random;
mod special;

pub use random::{channel_gain, complex_gaussian, gamma_sample, Channel, RngStream};
pub use special::{
    ln_gamma, q_function, q_inverse, reg_lower_gamma, reg_upper_gamma, reg_upper_gamma_inv,
};
