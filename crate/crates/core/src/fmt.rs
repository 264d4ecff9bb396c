//! Decimal output with a fixed number of significant digits.

/// Formats `v` with 12 significant digits. Rust's float formatting rounds the
/// exact binary value half-to-even.
pub fn sig12(v: f64) -> String {
    sig(v, 12)
}

pub fn sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{:.*e}", digits - 1, v);
    let (mant, exp) = s.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-5..15).contains(&exp) {
        return s;
    }
    let neg = mant.starts_with('-');
    let digits_only: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut out = String::new();
    if exp < 0 {
        out.push_str("0.");
        for _ in 0..(-exp - 1) {
            out.push('0');
        }
        out.push_str(&digits_only);
    } else {
        let e = exp as usize;
        if digits_only.len() > e + 1 {
            out.push_str(&digits_only[..=e]);
            out.push('.');
            out.push_str(&digits_only[e + 1..]);
        } else {
            out.push_str(&digits_only);
            for _ in digits_only.len()..=e {
                out.push('0');
            }
        }
    }
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    if neg {
        out.insert(0, '-');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig12(0.607927101854027), "0.607927101854");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(1234.5), "1234.5");
        assert_eq!(sig12(-0.00125), "-0.00125");
        assert_eq!(sig12(1e-9), "1.00000000000e-9");
        assert_eq!(sig12(6.0e13), "60000000000000");
    }
}
