//! Serde adapters for maps keyed by edge pairs (JSON object keys must be
//! strings, so these serialize as sequences of `[[a, b], value]` pairs).

pub mod edge_map {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S, V>(map: &BTreeMap<(usize, usize), V>, s: S) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        V: Serialize,
    {
        let pairs: Vec<(&(usize, usize), &V)> = map.iter().collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D, V>(d: D) -> Result<BTreeMap<(usize, usize), V>, D::Error>
    where
        D: Deserializer<'de>,
        V: Deserialize<'de>,
    {
        let pairs: Vec<((usize, usize), V)> = Vec::deserialize(d)?;
        Ok(pairs.into_iter().collect())
    }
}
