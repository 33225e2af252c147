//! Fixed-width float formatting for reproducible CSV and JSON output.

/// `x` in scientific notation with `sig` significant digits; `NaN`/`inf` are
/// spelled out so they survive a CSV round trip.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{:.*e}", sig.saturating_sub(1), x)
}
