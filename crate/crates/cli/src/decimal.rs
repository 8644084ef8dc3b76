//! Exact sums of decimal flag values.
//!
//! `0.3` and `0.1 + 0.2` differ as `f64`, so the perturbation term of direct
//! flags is computed on the decimal digits the user typed.

/// `mantissa * 10^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decimal {
    mantissa: i128,
    exponent: i32,
}

impl Decimal {
    /// Parses `[-+]digits[.digits][(e|E)[-+]digits]`. `None` for anything
    /// else, or when the digits do not fit.
    pub fn parse(s: &str) -> Option<Decimal> {
        let s = s.trim();
        let (body, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
            None => (s, 0),
        };
        let (negative, body) = match body.as_bytes().first()? {
            b'-' => (true, &body[1..]),
            b'+' => (false, &body[1..]),
            _ => (false, body),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() {
            return None;
        }
        let mut mantissa: i128 = 0;
        for c in int.chars().chain(frac.chars()) {
            let d = c.to_digit(10)?;
            mantissa = mantissa.checked_mul(10)?.checked_add(i128::from(d))?;
        }
        let exponent = exp.checked_sub(i32::try_from(frac.len()).ok()?)?;
        Some(Decimal {
            mantissa: if negative { -mantissa } else { mantissa },
            exponent,
        })
    }

    fn rescale(self, exponent: i32) -> Option<i128> {
        let shift = u32::try_from(self.exponent - exponent).ok()?;
        self.mantissa.checked_mul(10i128.checked_pow(shift)?)
    }

    /// `a - b - c` rounded once to `f64`; `None` on overflow.
    pub fn difference3(a: Decimal, b: Decimal, c: Decimal) -> Option<f64> {
        let exponent = a.exponent.min(b.exponent).min(c.exponent);
        let value = a
            .rescale(exponent)?
            .checked_sub(b.rescale(exponent)?)?
            .checked_sub(c.rescale(exponent)?)?;
        if value == 0 {
            return Some(0.0);
        }
        // Shortest decimal rendering, parsed once: correctly rounded.
        format!("{value}e{exponent}").parse().ok()
    }
}
