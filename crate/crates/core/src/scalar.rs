use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// The ground field K.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// The smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(format!("unknown field '{other}' (expected real|complex)")),
        }
    }
}

/// A field-tagged scalar. Real scalars always carry a zero imaginary part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scalar {
    field: Field,
    value: Complex64,
}

impl Scalar {
    pub fn real(x: f64) -> Self {
        Scalar {
            field: Field::Real,
            value: Complex64::new(x, 0.0),
        }
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Scalar {
            field: Field::Complex,
            value: Complex64::new(re, im),
        }
    }

    /// Tag `value` with `field`, dropping the imaginary part for real scalars.
    pub fn new(field: Field, value: Complex64) -> Self {
        match field {
            Field::Real => Scalar::real(value.re),
            Field::Complex => Scalar { field, value },
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn im(&self) -> f64 {
        self.value.im
    }

    pub fn conj(&self) -> Self {
        Scalar {
            field: self.field,
            value: self.value.conj(),
        }
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            Field::Real => write!(f, "{}", self.value.re),
            Field::Complex => write!(f, "{}{:+}i", self.value.re, self.value.im),
        }
    }
}
