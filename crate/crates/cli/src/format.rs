use apollo_core::{RootLabel, SpecialCase, TangencyClass};
use serde::{Serialize, Serializer};

/// Seventeen significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// A real printed with seventeen significant digits in JSON output.
/// Non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let n: serde_json::Number = fmt17(self.0).parse().map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

pub fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

pub fn root_name(r: RootLabel) -> &'static str {
    match r {
        RootLabel::Plus => "plus",
        RootLabel::Minus => "minus",
        RootLabel::Single => "single",
    }
}

pub fn class_name(c: TangencyClass) -> &'static str {
    match c {
        TangencyClass::Positive => "positive",
        TangencyClass::SmallNegative => "small_negative",
        TangencyClass::LargeNegative => "large_negative",
        TangencyClass::ZeroRadius => "zero_radius",
    }
}

pub fn special_name(s: SpecialCase) -> &'static str {
    match s {
        SpecialCase::Generic => "generic",
        SpecialCase::RpZero => "rp_zero",
        SpecialCase::PtildeUnit => "ptilde_unit",
        SpecialCase::PtildeZero => "ptilde_zero",
        SpecialCase::Imaginary => "imaginary",
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}
