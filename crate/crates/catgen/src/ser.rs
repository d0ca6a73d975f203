//! Serde adapters shared by the JSON interchange formats.
//!
//! Complex scalars travel as two-element arrays `[re, im]` so that files
//! stay language-neutral and byte-stable across reruns.

use num_complex::Complex64 as C64;

/// `#[serde(with = "c64_pair")]` — encode a complex number as `[re, im]`.
pub mod c64_pair {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &C64, s: S) -> Result<S::Ok, S::Error> {
        [v.re, v.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

/// `#[serde(with = "c64_pair_opt")]` — `Option<Complex64>` as `[re, im]` or `null`.
pub mod c64_pair_opt {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<C64>, s: S) -> Result<S::Ok, S::Error> {
        v.map(|c| [c.re, c.im]).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<C64>, D::Error> {
        let raw = Option::<[f64; 2]>::deserialize(d)?;
        Ok(raw.map(|[re, im]| C64::new(re, im)))
    }
}
