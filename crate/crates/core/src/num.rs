//! Exact scalar arithmetic and ground values.
//!
//! Everything downstream of the parser works over an exact ordered field.
//! Floats are not admitted: interval borders obtained by dividing through
//! coefficients have to compare exactly, otherwise border sorting and the
//! integer/non-integer split of intervals stop being deterministic.

use std::fmt;
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed};

/// An exact ordered field with an integer test.
pub trait Scalar:
    Clone + Ord + Hash + fmt::Debug + fmt::Display + Signed + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;

    /// Parses an unsigned decimal literal such as `12`, `0.5` or `2000.25`.
    fn parse_decimal(text: &str) -> Option<Self>;

    fn is_integer(&self) -> bool;

    fn floor(&self) -> Self;

    fn ceil(&self) -> Self;

    /// Numerator and denominator of the reduced fraction, both rendered in base 10.
    fn fraction_parts(&self) -> (String, String);

    /// Exact decimal rendering, if the denominator only has factors 2 and 5.
    fn to_decimal(&self) -> Option<String>;

    fn half() -> Self {
        Self::one() / Self::from_i64(2)
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Clone + Integer + Signed + Hash + fmt::Debug + fmt::Display + FromPrimitive + Send + Sync + 'static,
{
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(T::from_i64(v).expect("integer fits the scalar type"))
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if !frac_part.bytes().all(|b| b.is_ascii_digit()) || (text.contains('.') && frac_part.is_empty()) {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        let numer = T::from_str_radix(&digits, 10).ok()?;
        let mut denom = T::one();
        let ten = T::from_u8(10)?;
        for _ in 0..frac_part.len() {
            denom = denom * ten.clone();
        }
        Some(Ratio::new(numer, denom))
    }

    fn is_integer(&self) -> bool {
        Ratio::is_integer(self)
    }

    fn floor(&self) -> Self {
        Ratio::floor(self)
    }

    fn ceil(&self) -> Self {
        Ratio::ceil(self)
    }

    fn fraction_parts(&self) -> (String, String) {
        (self.numer().to_string(), self.denom().to_string())
    }

    fn to_decimal(&self) -> Option<String> {
        let two = T::from_u8(2)?;
        let five = T::from_u8(5)?;
        let mut rest = self.denom().clone();
        let (mut twos, mut fives) = (0usize, 0usize);
        while (rest.clone() % two.clone()).is_zero() {
            rest = rest / two.clone();
            twos += 1;
        }
        while (rest.clone() % five.clone()).is_zero() {
            rest = rest / five.clone();
            fives += 1;
        }
        if !rest.is_one() {
            return None;
        }
        let places = twos.max(fives);
        let mut scale = T::one();
        for _ in 0..places {
            scale = scale * (two.clone() * five.clone());
        }
        let scaled = self.numer().clone() * (scale / self.denom().clone());
        let digits = scaled.abs().to_string();
        let body = if places == 0 {
            digits
        } else {
            let padded = format!("{digits:0>width$}", width = places + 1);
            let (i, f) = padded.split_at(padded.len() - places);
            format!("{i}.{f}")
        };
        Some(if scaled.is_negative() { format!("-{body}") } else { body })
    }
}

/// A ground value: a number or a constant of a finite sort.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Value<S> {
    Num(S),
    Fo(String),
}

impl<S: Scalar> Value<S> {
    pub fn as_num(&self) -> Option<&S> {
        match self {
            Value::Num(v) => Some(v),
            Value::Fo(_) => None,
        }
    }

    /// Symbol used for this value in uninterpreted target formats:
    /// `c2000`, `n1` for -1, `q1_2` for 1/2, `nq1_2` for -1/2.
    pub fn mangled(&self) -> String {
        match self {
            Value::Fo(name) => format!("\"{name}\""),
            Value::Num(v) => {
                let sign = if v.is_negative() { "n" } else { "" };
                let (numer, denom) = v.abs().fraction_parts();
                if v.is_integer() {
                    if sign.is_empty() {
                        format!("c{numer}")
                    } else {
                        format!("n{numer}")
                    }
                } else {
                    format!("{sign}q{numer}_{denom}")
                }
            }
        }
    }
}

impl<S: Scalar> fmt::Display for Value<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(v) => write!(f, "{v}"),
            Value::Fo(name) => f.write_str(name),
        }
    }
}
