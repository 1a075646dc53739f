//! Arbitrary-precision reals with a tracked absolute error bound.

mod consts;
mod decimal;
mod explog;
mod real;
mod trig;

pub use consts::{
    compute_ln2, compute_pi, max_bits, pi_digits_matching, read_pi_fixture, set_max_bits, DEFAULT_MAX_BITS,
    MIN_BITS,
};
pub use explog::{exp_mp, ln_mp, pow_int_real};
pub use real::MpReal;
pub use trig::{cos_any, cos_mp, reduce_mod_pi, sin_any, sin_int, sin_int_rel, sin_mp};

pub(crate) use consts::check_bits;
pub(crate) use trig::bitlen;
