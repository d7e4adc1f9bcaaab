//! Command-line literals.

use iml_core::Complex64;

/// Parses `<float>[+|-]<float>i` with no spaces, e.g. `0.9+0i` or
/// `-1e-3-0.25i`. Both parts are required.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let err = || {
        format!("malformed complex literal `{s}`, expected <float>[+|-]<float>i such as 0.5-1e-3i")
    };
    let body = s.strip_suffix('i').ok_or_else(err)?;
    let b = body.as_bytes();
    // the last sign that is not an exponent sign separates the two parts
    let split = (1..b.len())
        .rev()
        .find(|&k| matches!(b[k], b'+' | b'-') && !matches!(b[k - 1], b'e' | b'E'))
        .ok_or_else(err)?;
    let (re, im) = body.split_at(split);
    let number = |p: &str| -> Result<f64, String> {
        if !p
            .bytes()
            .all(|c| c.is_ascii_digit() || b"+-.eE".contains(&c))
        {
            return Err(err());
        }
        p.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(err)
    };
    Ok(Complex64::new(number(re)?, number(im)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_the_documented_forms() {
        assert_eq!(parse_complex("0.9+0i").unwrap(), Complex64::new(0.9, 0.0));
        assert_eq!(
            parse_complex("-0.5-2i").unwrap(),
            Complex64::new(-0.5, -2.0)
        );
        assert_eq!(
            parse_complex("1e-3+2.5E+2i").unwrap(),
            Complex64::new(1e-3, 250.0)
        );
        assert_eq!(
            parse_complex("-1e-3-1e-3i").unwrap(),
            Complex64::new(-1e-3, -1e-3)
        );
    }

    #[test]
    fn rejects_everything_else() {
        for s in [
            "", "i", "1", "1i", "0.9", "0.9 + 0i", "0.9+0j", "0.9+-1i", "inf+0i", "nan+0i", "1+2",
            "+i", "1e+i", "0x1+0i",
        ] {
            assert!(parse_complex(s).is_err(), "{s:?} should be rejected");
        }
    }

    #[test]
    fn round_trips_printed_points() {
        let z = Complex64::new(-0.123_456_789_012_345_67, 9.876_543_210_987_654e-7);
        let s = iml_core::asymptotics::fmt_c64(z);
        assert_eq!(parse_complex(&s).unwrap(), z);
    }
}
