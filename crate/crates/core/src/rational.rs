//! Exact rational helpers: construction, parsing, and decimal rendering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

/// Arbitrary-precision rational used for every exact quantity.
pub type Q = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn uint(n: u64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fallback for magnitudes outside the f64 range of the numerator or
        // denominator: scale through the decimal rendering.
        to_sig_decimal(x, 20).parse().unwrap_or(f64::NAN)
    })
}

/// Parses `"p/q"`, an integer, or a decimal such as `"0.001"` or `"2e-3"`.
///
/// Decimals are read as exact base-10 fractions, never through `f64`.
pub fn parse_rational(text: &str) -> Result<Q> {
    let t = text.trim();
    if t.is_empty() {
        return invalid("empty number");
    }
    if let Some((a, b)) = t.split_once('/') {
        let num = parse_decimal(a.trim())?;
        let den = parse_decimal(b.trim())?;
        if den.is_zero() {
            return invalid(format!("zero denominator in {t:?}"));
        }
        return Ok(num / den);
    }
    parse_decimal(t)
}

fn parse_decimal(t: &str) -> Result<Q> {
    let bad = || invalid(format!("cannot parse {t:?} as an exact rational"));
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = match t[pos + 1..].parse() {
                Ok(e) => e,
                Err(_) => return bad(),
            };
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return bad();
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return bad();
    }
    if exp.abs() > 10_000 {
        return bad();
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = Q::from_integer(all.parse::<BigInt>().unwrap_or_else(|_| BigInt::zero()));
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    if scale >= 0 {
        value *= Q::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Q::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

/// `"num/den"` (or just `"num"` for integers).
pub fn to_fraction_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal rendering with `digits` significant digits, rounded half away from
/// zero, computed exactly from the rational.
pub fn to_sig_decimal(x: &Q, digits: usize) -> String {
    assert!(digits > 0);
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let a = x.abs();
    // Find exponent e with 10^e <= a < 10^(e+1).
    let mut e: i64 = (a.numer().bits() as i64 - a.denom().bits() as i64) * 30103 / 100000;
    let pow10 = |k: i64| -> Q {
        if k >= 0 {
            Q::from_integer(num_traits::pow(BigInt::from(10), k as usize))
        } else {
            Q::new(BigInt::one(), num_traits::pow(BigInt::from(10), (-k) as usize))
        }
    };
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let scaled = &a * pow10(shift);
    let mut m = round_half_up(&scaled);
    if m.to_string().len() > digits {
        // Rounding carried into a new digit (e.g. 9.99 -> 10.0).
        m /= BigInt::from(10);
        return render(neg, &m, e + 1, digits);
    }
    render(neg, &m, e, digits)
}

fn round_half_up(x: &Q) -> BigInt {
    let two = BigInt::from(2);
    let (qt, rem) = x.numer().div_rem(x.denom());
    if rem * &two >= *x.denom() {
        qt + 1
    } else {
        qt
    }
}

fn render(neg: bool, mantissa: &BigInt, e: i64, digits: usize) -> String {
    let ds = format!("{:0>width$}", mantissa.to_string(), width = digits);
    let sign = if neg { "-" } else { "" };
    let body = if (-6..=20).contains(&e) {
        if e >= 0 {
            let point = e as usize + 1;
            if point >= ds.len() {
                format!("{}{}", ds, "0".repeat(point - ds.len()))
            } else {
                format!("{}.{}", &ds[..point], &ds[point..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), ds)
        }
    } else {
        let tail = if ds.len() > 1 { format!(".{}", &ds[1..]) } else { String::new() };
        format!("{}{}e{}", &ds[..1], tail, e)
    };
    format!("{sign}{}", trim_zeros(&body))
}

fn trim_zeros(s: &str) -> String {
    if let Some((mant, exp)) = s.split_once('e') {
        return format!("{}e{}", trim_zeros(mant), exp);
    }
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Decimal rendering of an `f64` with `digits` significant digits.
pub fn f64_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    match Q::from_float(x) {
        Some(r) => to_sig_decimal(&r, digits),
        None => format!("{x}"),
    }
}

/// `sign * sqrt(value)` rendered with `digits` significant digits, for a
/// nonnegative rational `value`. Truncates rather than rounds the final digit.
pub fn signed_sqrt_decimal(negative: bool, value: &Q, digits: usize) -> String {
    assert!(!value.is_negative());
    if value.is_zero() {
        return "0".to_string();
    }
    // sqrt(a/b) = sqrt(a*b)/b; scale by 10^(2k) to get k fractional digits.
    let guard = digits as i64 + 10;
    let (a, b) = (value.numer().clone(), value.denom().clone());
    let mag = (a.bits() as i64 - b.bits() as i64) * 30103 / 200000;
    let k = (guard - mag).max(0) as usize;
    let scale = num_traits::pow(BigInt::from(10), 2 * k);
    let root = (a * &b * scale).sqrt();
    let approx = Q::new(root, b * num_traits::pow(BigInt::from(10), k));
    let s = to_sig_decimal(&approx, digits);
    if negative {
        format!("-{s}")
    } else {
        s
    }
}

pub(crate) fn is_in_unit_interval(x: &Q) -> bool {
    !x.is_negative() && *x <= Q::one()
}
