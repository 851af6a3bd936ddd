//! Category files.
//!
//! One JSON document per file with exactly one of the keys `category`,
//! `poset` or `monoid`, plus an optional `meta` record:
//!
//! ```json
//! {"category": {"objects": ["a", "b"],
//!               "morphisms": [{"name": "f", "dom": "a", "cod": "b"}],
//!               "composition": {}}}
//! {"poset": {"elements": ["0", "1"], "relations": [["0", "1"]]}}
//! {"monoid": {"elements": ["0", "1"], "unit": "0", "table": {"1,1": "1"}}}
//! ```
//!
//! Composition keys are `"g∘f"` (or `"g.f"`) and mean `g` after `f`.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{
    build_category, from_monoid, from_poset, CategoryError, FinCat, RawCategory, RawComposite,
    RawMorphism,
};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    #[serde(default)]
    pub truncated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_level: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    category: Option<CategorySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    poset: Option<PosetSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    monoid: Option<MonoidSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<Meta>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CategorySection {
    objects: Vec<String>,
    #[serde(default)]
    morphisms: Vec<MorphismEntry>,
    #[serde(default)]
    composition: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismEntry {
    name: String,
    dom: String,
    cod: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetSection {
    elements: Vec<String>,
    #[serde(default)]
    relations: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonoidSection {
    elements: Vec<String>,
    unit: String,
    #[serde(default)]
    table: BTreeMap<String, String>,
}

/// A parsed category file.
#[derive(Clone, Debug)]
pub struct CategoryFile {
    pub category: FinCat,
    pub meta: Meta,
}

pub fn parse_category(text: &str) -> Result<CategoryFile, FormatError> {
    let doc: Document = serde_json::from_str(text)?;
    let meta = doc.meta.unwrap_or_default();
    let category = match (doc.category, doc.poset, doc.monoid) {
        (Some(c), None, None) => parse_general(c)?,
        (None, Some(p), None) => from_poset(&p.elements, &p.relations)?,
        (None, None, Some(m)) => parse_monoid(m)?,
        _ => {
            return Err(FormatError::Shape(
                "expected exactly one of `category`, `poset`, `monoid`".into(),
            ))
        }
    };
    Ok(CategoryFile { category, meta })
}

/// Splits `key` at the unique occurrence of `sep` whose two sides are both
/// in `names`. Labels may themselves contain the separator.
fn split_pair<'a>(key: &'a str, sep: &str, names: &HashSet<&str>) -> Option<(&'a str, &'a str)> {
    let mut found = None;
    for (pos, _) in key.match_indices(sep) {
        let (l, r) = (&key[..pos], &key[pos + sep.len()..]);
        if names.contains(l) && names.contains(r) {
            if found.is_some() {
                return None;
            }
            found = Some((l, r));
        }
    }
    found
}

fn parse_general(c: CategorySection) -> Result<FinCat, FormatError> {
    let identities: Vec<String> = c
        .objects
        .iter()
        .map(|o| crate::fincat::identity_label(o))
        .collect();
    let names: HashSet<&str> = c
        .morphisms
        .iter()
        .map(|m| m.name.as_str())
        .chain(identities.iter().map(String::as_str))
        .collect();
    let mut composition = Vec::with_capacity(c.composition.len());
    for (key, result) in &c.composition {
        let (outer, inner) = split_pair(key, "∘", &names)
            .or_else(|| split_pair(key, ".", &names))
            .ok_or_else(|| FormatError::Shape(format!("cannot read composition key {key:?}")))?;
        composition.push(RawComposite {
            outer: outer.to_string(),
            inner: inner.to_string(),
            result: result.clone(),
        });
    }
    let raw = RawCategory {
        objects: c.objects,
        morphisms: c
            .morphisms
            .into_iter()
            .map(|m| RawMorphism {
                name: m.name,
                dom: m.dom,
                cod: m.cod,
            })
            .collect(),
        composition,
    };
    Ok(build_category(&raw)?)
}

fn parse_monoid(m: MonoidSection) -> Result<FinCat, FormatError> {
    let names: HashSet<&str> = m.elements.iter().map(String::as_str).collect();
    let mut table = BTreeMap::new();
    for (key, c) in &m.table {
        let (a, b) = split_pair(key, ",", &names)
            .ok_or_else(|| FormatError::Shape(format!("cannot read table key {key:?}")))?;
        table.insert((a.to_string(), b.to_string()), c.clone());
    }
    Ok(from_monoid(&m.elements, &m.unit, &table)?)
}

/// Serializes any category in the general `category` form. Only products
/// of two non-identity morphisms are listed.
pub fn write_category(c: &FinCat, meta: Option<&Meta>) -> String {
    let objects = c
        .object_ids()
        .map(|x| c.object_label(x).to_string())
        .collect();
    let morphisms = c
        .morphism_ids()
        .filter(|&f| !c.is_identity(f))
        .map(|f| MorphismEntry {
            name: c.label(f).to_string(),
            dom: c.object_label(c.dom(f)).to_string(),
            cod: c.object_label(c.cod(f)).to_string(),
        })
        .collect();
    let mut composition = BTreeMap::new();
    for f in c.morphism_ids().filter(|&f| !c.is_identity(f)) {
        for &g in c.outgoing(c.cod(f)) {
            if !c.is_identity(g) {
                let h = c.compose_unchecked(g, f);
                composition.insert(
                    format!("{}∘{}", c.label(g), c.label(f)),
                    c.label(h).to_string(),
                );
            }
        }
    }
    let doc = Document {
        category: Some(CategorySection {
            objects,
            morphisms,
            composition,
        }),
        poset: None,
        monoid: None,
        meta: meta.cloned(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("category documents always serialize");
    out.push('\n');
    out
}

/// Poset document from elements and `[lesser, greater]` relations.
pub fn write_poset(elements: &[String], relations: &[(String, String)]) -> String {
    let doc = Document {
        category: None,
        poset: Some(PosetSection {
            elements: elements.to_vec(),
            relations: relations.to_vec(),
        }),
        monoid: None,
        meta: None,
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("poset documents always serialize");
    out.push('\n');
    out
}

/// Monoid document; `table` maps `(a, b)` to `a·b`.
pub fn write_monoid(
    elements: &[String],
    unit: &str,
    table: &BTreeMap<(String, String), String>,
) -> String {
    let doc = Document {
        category: None,
        poset: None,
        monoid: Some(MonoidSection {
            elements: elements.to_vec(),
            unit: unit.to_string(),
            table: table
                .iter()
                .map(|((a, b), c)| (format!("{a},{b}"), c.clone()))
                .collect(),
        }),
        meta: None,
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("monoid documents always serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::fixtures::*;
    use crate::fincat::incidence_matrix;

    #[test]
    fn reads_all_three_forms() {
        let m = parse_category(
            r#"{"monoid": {"elements": ["0", "1"], "unit": "0", "table": {"1,1": "1"}}}"#,
        )
        .unwrap()
        .category;
        assert_eq!(m, monoid_m());
        let p = parse_category(r#"{"poset": {"elements": ["0", "1"], "relations": [["0", "1"]]}}"#)
            .unwrap()
            .category;
        assert_eq!(p, chain(1));
        let c = parse_category(
            r#"{"category": {"objects": ["a", "b"],
                "morphisms": [{"name": "f", "dom": "a", "cod": "b"}, {"name": "g", "dom": "b", "cod": "a"}],
                "composition": {"g∘f": "id_a", "f.g": "id_b"}}}"#,
        )
        .unwrap()
        .category;
        assert_eq!(c, iso_pair());
    }

    #[test]
    fn round_trip_through_general_form() {
        for c in [monoid_m(), z2(), chain(2), iso_pair(), discrete(0)] {
            let text = write_category(&c, None);
            let back = parse_category(&text).unwrap().category;
            assert_eq!(incidence_matrix(&back), incidence_matrix(&c));
            assert_eq!(write_category(&back, None), text);
        }
    }

    #[test]
    fn labels_containing_the_separator() {
        let text = r#"{"category": {"objects": ["*"],
            "morphisms": [{"name": "a.b", "dom": "*", "cod": "*"}],
            "composition": {"a.b.a.b": "a.b"}}}"#;
        assert!(parse_category(text).is_ok());
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(parse_category("{"), Err(FormatError::Json(_))));
        assert!(matches!(parse_category("{}"), Err(FormatError::Shape(_))));
        let both = r#"{"poset": {"elements": []}, "monoid": {"elements": ["e"], "unit": "e"}}"#;
        assert!(matches!(parse_category(both), Err(FormatError::Shape(_))));
        let missing = r#"{"category": {"objects": ["*"], "morphisms": [{"name": "m", "dom": "*", "cod": "*"}]}}"#;
        assert!(matches!(
            parse_category(missing),
            Err(FormatError::Category(
                CategoryError::MissingComposite { .. }
            ))
        ));
    }

    #[test]
    fn meta_is_preserved() {
        let meta = Meta {
            truncated: true,
            max_level: Some(2),
        };
        let text = write_category(&monoid_m(), Some(&meta));
        assert_eq!(parse_category(&text).unwrap().meta, meta);
    }
}
