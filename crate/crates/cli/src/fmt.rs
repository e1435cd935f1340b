//! Output formatting pinned for byte-for-byte reproducibility.

use std::borrow::Cow;

/// 17 significant digits: enough to round-trip any f64, so identical runs
/// produce identical bytes and parsers recover the exact value.
pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_float17(x: Option<f64>) -> String {
    x.map(float17).unwrap_or_default()
}

/// Quote a CSV field if it contains a delimiter, quote, or newline.
pub fn csv_field(s: &str) -> Cow<'_, str> {
    if s.contains([',', '"', '\n', '\r']) {
        Cow::Owned(format!("\"{}\"", s.replace('"', "\"\"")))
    } else {
        Cow::Borrowed(s)
    }
}
