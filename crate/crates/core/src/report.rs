//! Shared CSV formatting.

/// Locale-independent number with 17 significant digits.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}
