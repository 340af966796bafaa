//! Number formatting for CSV and reports.

/// Shortest decimal text that parses back to the same `f64`.
pub fn round_trip(v: f64) -> String {
    format!("{v:?}")
}

/// `v` rounded to `digits` significant digits, in positional notation when
/// the exponent is moderate.
pub fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", digits.saturating_sub(1), v);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("scientific format has an exponent");
    if !(-5..=15).contains(&exp) {
        return sci;
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

/// `p/q` when some denominator `q ≤ max_den` reproduces `v` within `tol`,
/// otherwise the round-trip decimal.
pub fn rational(v: f64, max_den: u32, tol: f64) -> String {
    for q in 1..=max_den {
        let qf = q as f64;
        let p = (v * qf).round();
        if (p / qf - v).abs() <= tol {
            let p = p as i64;
            return if q == 1 {
                format!("{p}")
            } else {
                format!("{p}/{q}")
            };
        }
    }
    round_trip(v)
}
