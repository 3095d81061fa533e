//! Deterministic number formatting for CSV output: six significant digits,
//! plain decimal inside a readable exponent range, scientific outside it.

pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    // Round to 6 significant digits first, then pick the presentation.
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("{:e} always has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-4..=5).contains(&exp) {
        let prec = (5 - exp).max(0) as usize;
        let s = format!("{:.*}", prec, x);
        trim_trailing_zeros(&s)
    } else {
        format!("{}e{}", trim_trailing_zeros(mantissa), exp)
    }
}

fn trim_trailing_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_cases() {
        assert_eq!(fmt_sig6(0.0), "0");
        assert_eq!(fmt_sig6(1.0), "1");
        assert_eq!(fmt_sig6(-1.5), "-1.5");
        assert_eq!(fmt_sig6(120.815), "120.815");
        assert_eq!(fmt_sig6(0.005), "0.005");
        assert_eq!(fmt_sig6(2.68e9), "2.68e9");
        assert_eq!(fmt_sig6(1e-7), "1e-7");
        assert_eq!(fmt_sig6(123456.4), "123456");
        assert_eq!(fmt_sig6(1234567.0), "1.23457e6");
        assert_eq!(fmt_sig6(0.1119), "0.1119");
        assert_eq!(fmt_sig6(86392.123), "86392.1");
    }

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt_sig6(1.2345678), "1.23457");
        assert_eq!(fmt_sig6(0.0012345678), "0.00123457");
        assert_eq!(fmt_sig6(987654321.0), "9.87654e8");
    }

    #[test]
    fn stable_round_trip() {
        for &x in &[0.3, 1.0 / 3.0, 2.68e9, 5e-3, 324.0] {
            assert_eq!(fmt_sig6(x), fmt_sig6(x));
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn parses_back_within_rounding(x in -1e12f64..1e12) {
                let s = fmt_sig6(x);
                let back: f64 = s.parse().unwrap();
                // Six significant digits keep relative error below 5e-6.
                if x != 0.0 {
                    prop_assert!(
                        ((back - x) / x).abs() < 5e-6,
                        "{x} -> {s} -> {back}"
                    );
                }
            }
        }
    }
}
