use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `Σ c_k ζ_m^k` with `ζ_m = exp(2πi/m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    pub conductor: u32,
    pub coeffs: Vec<i64>,
}

impl Cyclotomic {
    pub fn integer(n: i64) -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![n] }
    }

    pub fn new(conductor: u32, coeffs: Vec<i64>) -> Option<Self> {
        if conductor == 0 || coeffs.len() > conductor as usize {
            return None;
        }
        Some(Cyclotomic { conductor, coeffs })
    }

    pub fn eval(&self) -> Complex64 {
        let m = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| Complex64::from_polar(c as f64, 2.0 * PI * k as f64 / m))
            .sum()
    }

    /// The value as an integer when it is one to within `1e-9`.
    pub fn as_integer(&self) -> Option<i64> {
        let z = self.eval();
        let r = z.re.round();
        ((z.re - r).abs() < 1e-9 && z.im.abs() < 1e-9).then_some(r as i64)
    }

    /// Collapse to a plain integer when possible.
    pub fn simplified(self) -> Self {
        match self.as_integer() {
            Some(n) => Cyclotomic::integer(n),
            None => self,
        }
    }
}

/// JSON form: a bare integer, or `{"m": conductor, "c": [coeffs]}`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Int(i64),
    Cyc { m: u32, c: Vec<i64> },
}

impl Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.conductor == 1 {
            Repr::Int(self.coeffs.first().copied().unwrap_or(0)).serialize(s)
        } else {
            Repr::Cyc { m: self.conductor, c: self.coeffs.clone() }.serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(n) => Ok(Cyclotomic::integer(n)),
            Repr::Cyc { m, c } => {
                Cyclotomic::new(m, c).ok_or_else(|| serde::de::Error::custom("conductor must be positive and cover the coefficients"))
            }
        }
    }
}
