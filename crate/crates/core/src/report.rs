//! Small serialization helpers shared by the report types.

use num_bigint::BigInt;
use serde::Serializer;

use crate::mp::MpReal;

/// BigInts go out as decimal strings so JSON consumers never lose digits.
pub fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

/// Midpoint printed to its guaranteed digits.
pub fn ser_mp_value<S: Serializer>(v: &MpReal, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_decimal_guaranteed())
}

/// Error bound as an upward-rounded scientific string.
pub fn ser_mp_err<S: Serializer>(v: &MpReal, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.err_to_sci())
}

/// Upper bound of `|x|`, for residuals and distances.
pub fn ser_mp_upper<S: Serializer>(v: &MpReal, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.upper_abs_to_sci())
}

/// Finite doubles as numbers, everything else as `null`.
pub fn ser_opt_f64<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) if x.is_finite() => s.serialize_f64(*x),
        _ => s.serialize_none(),
    }
}
