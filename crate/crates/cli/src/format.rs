//! Deterministic CSV number formatting.
//!
//! Twelve significant digits, '.' decimal separator, no locale, trailing
//! zeros stripped; magnitudes outside a plain-decimal window use `e`
//! notation. Identical inputs always render to identical bytes, which is
//! what the output-determinism guarantees rest on.

pub const SIG_DIGITS: i32 = 12;

pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..SIG_DIGITS).contains(&mag) {
        let decimals = (SIG_DIGITS - 1 - mag).max(0) as usize;
        strip_fraction(format!("{x:.decimals$}"))
    } else {
        let s = format!("{:.*e}", SIG_DIGITS as usize - 1, x);
        let (mantissa, exponent) = s.split_once('e').expect("exponential form");
        format!("{}e{exponent}", strip_fraction(mantissa.to_string()))
    }
}

fn strip_fraction(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_plain_decimals_with_twelve_significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(0.25), "0.25");
        assert_eq!(fmt_sig(-0.25), "-0.25");
        assert_eq!(fmt_sig(0.9267766952966369), "0.926776695297");
        assert_eq!(fmt_sig(1000.0), "1000");
        assert_eq!(fmt_sig(std::f64::consts::PI), "3.14159265359");
    }

    #[test]
    fn switches_to_exponent_notation_outside_the_decimal_window() {
        assert_eq!(fmt_sig(1e-5), "1e-5");
        assert_eq!(fmt_sig(2.5e13), "2.5e13");
        assert_eq!(fmt_sig(-3.25e-7), "-3.25e-7");
    }

    #[test]
    fn rounding_at_the_magnitude_boundary_is_clean() {
        assert_eq!(fmt_sig(0.999999999999951), "1");
        assert_eq!(fmt_sig(0.9999999999), "0.9999999999");
    }

    #[test]
    fn non_finite_values_have_fixed_spellings() {
        assert_eq!(fmt_sig(f64::NAN), "nan");
        assert_eq!(fmt_sig(f64::INFINITY), "inf");
        assert_eq!(fmt_sig(f64::NEG_INFINITY), "-inf");
    }
}
