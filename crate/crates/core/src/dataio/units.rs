//! Physical quantities in configuration documents.
//!
//! A quantity is written either as a bare number in the base unit named by
//! the key suffix (`g_hz = 42.4e6`) or as a string with an SI-prefixed unit
//! (`g_hz = "42.4 MHz"`). Saving always emits the bare base-unit number.

use std::fmt;
use std::marker::PhantomData;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Physical dimension of a quantity.
pub trait Dimension: Copy + fmt::Debug + PartialEq + Default {
    const BASE: &'static str;
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Frequency;
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Time;
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Power;

impl Dimension for Frequency {
    const BASE: &'static str = "Hz";
}
impl Dimension for Time {
    const BASE: &'static str = "s";
}
impl Dimension for Power {
    const BASE: &'static str = "W";
}

const PREFIXES: [(&str, i32); 12] = [
    ("f", -15),
    ("p", -12),
    ("n", -9),
    ("u", -6),
    ("µ", -6),
    ("μ", -6),
    ("m", -3),
    ("", 0),
    ("k", 3),
    ("M", 6),
    ("G", 9),
    ("T", 12),
];

/// Decimal exponent of `unit` relative to the base unit `base`.
pub fn unit_exponent(unit: &str, base: &str) -> Option<i32> {
    let prefix = unit.strip_suffix(base)?;
    PREFIXES.iter().find(|(p, _)| *p == prefix).map(|(_, e)| *e)
}

/// Parses `"42.4 MHz"`, `"42.4MHz"` or `"1e-9 s"` into base units.
///
/// The decimal exponent of the prefix is folded into the literal before
/// conversion, so `"42.4 MHz"` gives exactly the double nearest 42.4e6.
pub fn parse_quantity(text: &str, base: &str) -> Result<f64, String> {
    let text = text.trim();
    let split = text
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_alphabetic())
        .last()
        .map(|(i, _)| i)
        .ok_or_else(|| format!("`{text}` has no unit (expected {base} with an optional SI prefix)"))?;
    let (number, unit) = text.split_at(split);
    let number = number.trim();
    let exp = unit_exponent(unit, base).ok_or_else(|| {
        format!("unknown unit `{unit}` in `{text}` (expected {base} with an optional SI prefix)")
    })?;
    let (mantissa, own_exp) = match number.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = number[i + 1..]
                .parse()
                .map_err(|_| format!("malformed number `{number}`"))?;
            (&number[..i], e)
        }
        None => (number, 0),
    };
    let value: f64 = format!("{mantissa}e{}", own_exp + exp)
        .parse()
        .map_err(|_| format!("malformed number `{number}`"))?;
    if !value.is_finite() {
        return Err(format!("`{text}` is not finite"));
    }
    Ok(value)
}

/// A value in base units (Hz, s or W) tagged with its dimension.
#[derive(Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct Quantity<D: Dimension>(pub f64, PhantomData<D>);

pub type Hz = Quantity<Frequency>;
pub type Seconds = Quantity<Time>;
pub type Watts = Quantity<Power>;

impl<D: Dimension> Quantity<D> {
    pub const fn new(value: f64) -> Self {
        Self(value, PhantomData)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl<D: Dimension> fmt::Debug for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.0, D::BASE)
    }
}

impl<D: Dimension> From<f64> for Quantity<D> {
    fn from(v: f64) -> Self {
        Self::new(v)
    }
}

impl<D: Dimension> Serialize for Quantity<D> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

struct QuantityVisitor<D>(PhantomData<D>);

impl<D: Dimension> Visitor<'_> for QuantityVisitor<D> {
    type Value = Quantity<D>;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a number in {} or a string such as \"1.5 k{}\"", D::BASE, D::BASE)
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
        if v.is_finite() {
            Ok(Quantity::new(v))
        } else {
            Err(E::custom(format!("{v} is not finite")))
        }
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
        Ok(Quantity::new(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
        Ok(Quantity::new(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
        parse_quantity(v, D::BASE).map(Quantity::new).map_err(E::custom)
    }
}

impl<'de, D: Dimension> Deserialize<'de> for Quantity<D> {
    fn deserialize<De: Deserializer<'de>>(d: De) -> Result<Self, De::Error> {
        d.deserialize_any(QuantityVisitor(PhantomData))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefixes() {
        assert_eq!(parse_quantity("42.4 MHz", "Hz").unwrap(), 42.4e6);
        assert_eq!(parse_quantity("5.22GHz", "Hz").unwrap(), 5.22e9);
        assert_eq!(parse_quantity("170 ns", "s").unwrap(), 170e-9);
        assert_eq!(parse_quantity("8 µs", "s").unwrap(), 8e-6);
        assert_eq!(parse_quantity("8 us", "s").unwrap(), 8e-6);
        assert_eq!(parse_quantity("0.04 nW", "W").unwrap(), 0.04e-9);
        assert_eq!(parse_quantity("1.5e3 kHz", "Hz").unwrap(), 1.5e6);
        assert_eq!(parse_quantity("-25 GHz", "Hz").unwrap(), -25e9);
        assert_eq!(parse_quantity("3 W", "W").unwrap(), 3.0);
    }

    #[test]
    fn rejects_bad_units() {
        assert!(parse_quantity("42.4 MHz", "s").unwrap_err().contains("unknown unit"));
        assert!(parse_quantity("42.4 MHZ", "Hz").is_err());
        assert!(parse_quantity("42.4", "Hz").unwrap_err().contains("no unit"));
        assert!(parse_quantity("abc Hz", "Hz").is_err());
        assert!(parse_quantity("1e999 Hz", "Hz").is_err());
    }

    #[test]
    fn exact_decimal_scaling() {
        for s in ["0.1", "0.3", "42.4", "226.141974", "169.3"] {
            let v = parse_quantity(&format!("{s} THz"), "Hz").unwrap();
            assert_eq!(v, format!("{s}e12").parse::<f64>().unwrap());
        }
    }
}
