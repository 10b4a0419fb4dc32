//! Bundled closed-manifold cohomology descriptions.
//!
//! Each entry is a JSON description of the mod-2 cohomology ring of a
//! closed manifold together with its Steenrod action on ring generators,
//! ready for [`crate::pd::PDAlgebra::from_json`].  The collection is small
//! on purpose: every algebra here has an independently known Wu and
//! Stiefel-Whitney profile, so the whole set doubles as an oracle corpus.

/// All bundled descriptions as `(key, json)` pairs, keys sorted.
pub fn bundled() -> Vec<(&'static str, &'static str)> {
    vec![
        ("cp2", include_str!("../corpus/cp2.json")),
        ("cp3", include_str!("../corpus/cp3.json")),
        ("cp4", include_str!("../corpus/cp4.json")),
        ("cp5", include_str!("../corpus/cp5.json")),
        ("hp2", include_str!("../corpus/hp2.json")),
        ("point", include_str!("../corpus/point.json")),
        ("rp1", include_str!("../corpus/rp1.json")),
        ("rp2", include_str!("../corpus/rp2.json")),
        ("rp3", include_str!("../corpus/rp3.json")),
        ("rp3x7", include_str!("../corpus/rp3x7.json")),
        ("rp4", include_str!("../corpus/rp4.json")),
        ("rp5", include_str!("../corpus/rp5.json")),
        ("rp6", include_str!("../corpus/rp6.json")),
        ("rp7", include_str!("../corpus/rp7.json")),
        ("rp8", include_str!("../corpus/rp8.json")),
        ("rp9", include_str!("../corpus/rp9.json")),
        ("rp10", include_str!("../corpus/rp10.json")),
        ("s2", include_str!("../corpus/s2.json")),
        ("s4", include_str!("../corpus/s4.json")),
        ("s6", include_str!("../corpus/s6.json")),
        ("s10", include_str!("../corpus/s10.json")),
        ("s18", include_str!("../corpus/s18.json")),
    ]
}

/// Look up one bundled description by key.
pub fn get(key: &str) -> Option<&'static str> {
    bundled()
        .into_iter()
        .find(|(k, _)| *k == key)
        .map(|(_, s)| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses_as_json() {
        for (key, text) in bundled() {
            let v: serde_json::Value =
                serde_json::from_str(text).unwrap_or_else(|e| panic!("{key}: {e}"));
            assert!(v.get("name").is_some(), "{key} lacks a name");
            assert!(v.get("top").is_some(), "{key} lacks a top degree");
        }
    }

    #[test]
    fn lookup_is_consistent() {
        assert!(get("rp3").is_some());
        assert!(get("does-not-exist").is_none());
        let keys: Vec<&str> = bundled().iter().map(|(k, _)| *k).collect();
        let mut dedup = keys.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), keys.len(), "duplicate corpus keys");
    }
}
