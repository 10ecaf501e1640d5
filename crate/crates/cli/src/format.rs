//! Number formatting for CSV output.

/// `x` with 10 significant digits: fixed notation for moderate magnitudes,
/// scientific otherwise.
pub fn sig10(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.9e}");
    let exponent: i32 = sci.split('e').nth(1).and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..10).contains(&exponent) {
        format!("{:.*}", (9 - exponent) as usize, x)
    } else {
        sci
    }
}
