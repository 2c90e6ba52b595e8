//! Deterministic numeric text output.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Formats `v` with 17 significant digits; NaN prints as `nan`.
pub fn fmt17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{v:.16e}")
}

/// A float that serializes to JSON with 17 significant digits (`null` for
/// non-finite values).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Float17(pub f64);

impl Serialize for Float17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(fmt17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}
