//! `{ "re": .., "im": .. }` serialization for complex values.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
struct Repr {
    re: f64,
    im: f64,
}

impl From<&Complex64> for Repr {
    fn from(c: &Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

pub mod scalar {
    use super::*;

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Repr::from(c).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let r = Repr::deserialize(d)?;
        Ok(Complex64::new(r.re, r.im))
    }
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(Repr::from))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let v = Vec::<Repr>::deserialize(d)?;
        Ok(v.into_iter().map(|r| Complex64::new(r.re, r.im)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Holder {
        #[serde(with = "scalar")]
        z: Complex64,
        #[serde(with = "vec")]
        zs: Vec<Complex64>,
    }

    #[test]
    fn roundtrip() {
        let h = Holder { z: Complex64::new(1.5, -2.0), zs: vec![Complex64::new(0.0, 1.0)] };
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"z":{"re":1.5,"im":-2.0},"zs":[{"re":0.0,"im":1.0}]}"#);
        assert_eq!(serde_json::from_str::<Holder>(&s).unwrap(), h);
    }
}
