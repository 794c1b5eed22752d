//! Exact dyadic rationals `p / 2^k` and their complex extension.
//!
//! Every coefficient met on the Clifford path is a sum of signed powers of
//! two, so these types carry all descriptor arithmetic without rounding.
//! Overflow of the 128-bit numerator panics; it would need coefficients far
//! outside anything a desk-scale circuit produces.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::ParseValueError;

/// A real number `num / 2^exp`, stored in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Dyadic {
    num: i128,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };
    pub const MINUS_ONE: Dyadic = Dyadic { num: -1, exp: 0 };
    pub const HALF: Dyadic = Dyadic { num: 1, exp: 1 };

    /// Builds `num / 2^exp` and normalizes.
    pub fn new(num: i128, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic { num: n as i128, exp: 0 }
    }

    fn normalize(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().min(self.exp);
        self.num >>= tz;
        self.exp -= tz;
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    /// Power of two in the denominator.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn signum(&self) -> i32 {
        self.num.signum() as i32
    }

    pub fn abs(&self) -> Self {
        Dyadic { num: self.num.abs(), exp: self.exp }
    }

    /// Multiplies by `2^-k`.
    pub fn halve(&self, k: u32) -> Self {
        Dyadic::new(self.num, self.exp + k)
    }

    /// Exact quotient when it is dyadic, i.e. when the odd part of the
    /// divisor divides the numerator; `None` otherwise.
    pub fn checked_div(&self, other: &Dyadic) -> Option<Dyadic> {
        if other.num == 0 {
            return None;
        }
        let j = other.num.trailing_zeros();
        let odd = other.num >> j;
        if self.num % odd != 0 {
            return None;
        }
        // self / (odd * 2^j / 2^e) = (self / odd) * 2^e / 2^j
        let scaled = checked_shl(self.num / odd, other.exp);
        Some(Dyadic::new(scaled, self.exp + j))
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / 2f64.powi(self.exp as i32)
    }

    /// Snaps a float to the nearest dyadic with denominator at most
    /// `2^max_exp`, if one lies within `tol`.
    pub fn snap(x: f64, max_exp: u32, tol: f64) -> Option<Dyadic> {
        if !x.is_finite() {
            return None;
        }
        for k in 0..=max_exp {
            let scale = 2f64.powi(k as i32);
            let r = (x * scale).round();
            if ((r / scale) - x).abs() <= tol && r.abs() < 1e30 {
                return Some(Dyadic::new(r as i128, k));
            }
        }
        None
    }

    fn aligned(a: &Dyadic, b: &Dyadic) -> (i128, i128, u32) {
        let e = a.exp.max(b.exp);
        (checked_shl(a.num, e - a.exp), checked_shl(b.num, e - b.exp), e)
    }
}

fn checked_shl(v: i128, k: u32) -> i128 {
    if v == 0 {
        return 0;
    }
    let f = 1i128.checked_shl(k).filter(|f| *f > 0).expect("dyadic exponent overflow");
    v.checked_mul(f).expect("dyadic numerator overflow")
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let (a, b, e) = Dyadic::aligned(&self, &rhs);
        Dyadic::new(a.checked_add(b).expect("dyadic numerator overflow"), e)
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = *self + rhs;
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -self.num, exp: self.exp }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    // Denominator exponents add.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Dyadic) -> Dyadic {
        let num = self.num.checked_mul(rhs.num).expect("dyadic numerator overflow");
        Dyadic::new(num, self.exp + rhs.exp)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = Dyadic::aligned(self, other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u128 << self.exp)
        }
    }
}

impl FromStr for Dyadic {
    type Err = ParseValueError;

    /// Accepts `p` or `p/q` with `q` a power of two.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParseValueError(format!("not a dyadic rational: {s:?}"));
        match s.split_once('/') {
            None => s.parse::<i128>().map(|n| Dyadic::new(n, 0)).map_err(|_| bad()),
            Some((p, q)) => {
                let p: i128 = p.trim().parse().map_err(|_| bad())?;
                let q: u128 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 || !q.is_power_of_two() {
                    return Err(bad());
                }
                Ok(Dyadic::new(p, q.trailing_zeros()))
            }
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Dyadic", 2)?;
        st.serialize_field("exact", &self.to_string())?;
        st.serialize_field("value", &self.to_f64())?;
        st.end()
    }
}

/// `re + i·im` with dyadic parts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct ComplexDyadic {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl ComplexDyadic {
    pub const ZERO: ComplexDyadic = ComplexDyadic { re: Dyadic::ZERO, im: Dyadic::ZERO };
    pub const ONE: ComplexDyadic = ComplexDyadic { re: Dyadic::ONE, im: Dyadic::ZERO };
    pub const I: ComplexDyadic = ComplexDyadic { re: Dyadic::ZERO, im: Dyadic::ONE };

    pub fn new(re: Dyadic, im: Dyadic) -> Self {
        ComplexDyadic { re, im }
    }

    pub fn real(re: Dyadic) -> Self {
        ComplexDyadic { re, im: Dyadic::ZERO }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(Dyadic::from_int(n))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ComplexDyadic { re: self.re, im: -self.im }
    }

    pub fn halve(&self, k: u32) -> Self {
        ComplexDyadic { re: self.re.halve(k), im: self.im.halve(k) }
    }

    /// `|z|^2`, exact.
    pub fn norm_sqr(&self) -> Dyadic {
        self.re * self.re + self.im * self.im
    }

    /// Division by a real `±2^j`.
    pub fn checked_div_real(&self, d: &Dyadic) -> Option<Self> {
        Some(ComplexDyadic { re: self.re.checked_div(d)?, im: self.im.checked_div(d)? })
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Multiplies by `i^k`.
    pub fn times_i_pow(&self, k: u8) -> Self {
        match k % 4 {
            0 => *self,
            1 => ComplexDyadic { re: -self.im, im: self.re },
            2 => -*self,
            _ => ComplexDyadic { re: self.im, im: -self.re },
        }
    }
}

impl From<Dyadic> for ComplexDyadic {
    fn from(d: Dyadic) -> Self {
        ComplexDyadic::real(d)
    }
}

impl Add for ComplexDyadic {
    type Output = ComplexDyadic;
    fn add(self, rhs: ComplexDyadic) -> ComplexDyadic {
        ComplexDyadic { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl AddAssign for ComplexDyadic {
    fn add_assign(&mut self, rhs: ComplexDyadic) {
        *self = *self + rhs;
    }
}

impl Sub for ComplexDyadic {
    type Output = ComplexDyadic;
    fn sub(self, rhs: ComplexDyadic) -> ComplexDyadic {
        ComplexDyadic { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for ComplexDyadic {
    type Output = ComplexDyadic;
    fn neg(self) -> ComplexDyadic {
        ComplexDyadic { re: -self.re, im: -self.im }
    }
}

impl Mul for ComplexDyadic {
    type Output = ComplexDyadic;
    fn mul(self, rhs: ComplexDyadic) -> ComplexDyadic {
        ComplexDyadic { re: self.re * rhs.re - self.im * rhs.im, im: self.re * rhs.im + self.im * rhs.re }
    }
}

impl fmt::Display for ComplexDyadic {
    /// `a`, `bi`, or `(a+bi)`; the `i` suffix scales the whole fraction,
    /// so `1/2i` means `i/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn imag(d: &Dyadic) -> String {
            match (d.numerator(), d.exponent()) {
                (1, 0) => "i".to_string(),
                (-1, 0) => "-i".to_string(),
                _ => format!("{d}i"),
            }
        }
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}", imag(&self.im)),
            (false, false) => {
                let im = imag(&self.im);
                if im.starts_with('-') {
                    write!(f, "({}{})", self.re, im)
                } else {
                    write!(f, "({}+{})", self.re, im)
                }
            }
        }
    }
}

impl FromStr for ComplexDyadic {
    type Err = ParseValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParseValueError(format!("not a complex dyadic: {s:?}"));
        let inner = match s.strip_prefix('(') {
            Some(rest) => rest.strip_suffix(')').ok_or_else(bad)?,
            None => s,
        };
        let parse_imag = |t: &str| -> Result<Dyadic, ParseValueError> {
            let body = t.strip_suffix('i').ok_or_else(bad)?;
            match body {
                "" | "+" => Ok(Dyadic::ONE),
                "-" => Ok(Dyadic::MINUS_ONE),
                b => b.parse(),
            }
        };
        if !inner.ends_with('i') {
            return Ok(ComplexDyadic::real(inner.parse()?));
        }
        // split at the last sign that is not the leading one
        let split = inner.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(k, _)| k).last();
        match split {
            Some(k) => {
                let re: Dyadic = inner[..k].parse()?;
                let im = parse_imag(&inner[k..])?;
                Ok(ComplexDyadic::new(re, im))
            }
            None => Ok(ComplexDyadic::new(Dyadic::ZERO, parse_imag(inner)?)),
        }
    }
}

impl Serialize for ComplexDyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("ComplexDyadic", 3)?;
        st.serialize_field("exact", &self.to_string())?;
        st.serialize_field("re", &self.re.to_f64())?;
        st.serialize_field("im", &self.im.to_f64())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(n: i128, e: u32) -> Dyadic {
        Dyadic::new(n, e)
    }

    #[test]
    fn normalizes_common_powers() {
        assert_eq!(d(4, 3), d(1, 1));
        assert_eq!(d(0, 7), Dyadic::ZERO);
        assert_eq!(d(6, 0).exponent(), 0);
    }

    #[test]
    fn half_plus_half_is_one() {
        assert_eq!(Dyadic::HALF + Dyadic::HALF, Dyadic::ONE);
        assert_eq!(d(3, 2) * d(1, 1), d(3, 3));
    }

    #[test]
    fn division_by_powers_of_two_only() {
        assert_eq!(d(3, 0).checked_div(&d(-1, 2)), Some(d(-12, 0)));
        assert_eq!(d(1, 0).checked_div(&d(3, 0)), None);
        assert_eq!(d(0, 0).checked_div(&d(3, 1)), Some(Dyadic::ZERO));
        assert_eq!(d(-9, 2).checked_div(&d(3, 1)), Some(d(-3, 1)));
        assert_eq!(d(1, 0).checked_div(&Dyadic::ZERO), None);
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(d(-1, 1).to_string(), "-1/2");
        assert_eq!("-1/2".parse::<Dyadic>().unwrap(), d(-1, 1));
        assert!("1/3".parse::<Dyadic>().is_err());
        let z = ComplexDyadic::new(d(1, 1), d(-3, 2));
        assert_eq!(z.to_string(), "(1/2-3/4i)");
        assert_eq!("(1/2-3/4i)".parse::<ComplexDyadic>().unwrap(), z);
        assert_eq!("-i".parse::<ComplexDyadic>().unwrap(), -ComplexDyadic::I);
        assert_eq!("i".parse::<ComplexDyadic>().unwrap(), ComplexDyadic::I);
        assert_eq!(ComplexDyadic::I.to_string(), "i");
    }

    #[test]
    fn snapping() {
        assert_eq!(Dyadic::snap(0.5 + 1e-12, 20, 1e-9), Some(Dyadic::HALF));
        assert_eq!(Dyadic::snap(std::f64::consts::FRAC_1_SQRT_2, 20, 1e-9), None);
    }

    fn arb_dyadic() -> impl Strategy<Value = Dyadic> {
        (-1000i128..1000, 0u32..12).prop_map(|(n, e)| Dyadic::new(n, e))
    }

    fn arb_complex() -> impl Strategy<Value = ComplexDyadic> {
        (arb_dyadic(), arb_dyadic()).prop_map(|(a, b)| ComplexDyadic::new(a, b))
    }

    proptest! {
        #[test]
        fn complex_field_laws(a in arb_complex(), b in arb_complex(), c in arb_complex()) {
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a - a, ComplexDyadic::ZERO);
            prop_assert_eq!((a * b).conj(), a.conj() * b.conj());
        }

        #[test]
        fn text_roundtrip(a in arb_complex()) {
            let s = a.to_string();
            prop_assert_eq!(s.parse::<ComplexDyadic>().unwrap(), a);
        }

        #[test]
        fn ordering_matches_floats(a in arb_dyadic(), b in arb_dyadic()) {
            prop_assert_eq!(a.cmp(&b), a.to_f64().partial_cmp(&b.to_f64()).unwrap());
        }
    }
}
