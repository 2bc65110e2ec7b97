//! JSON lattice files, quiver files and DOT output.
//!
//! A lattice file lists elements by id, covers as `upper`/`lower` id pairs
//! with an optional label each, and optionally the label vocabulary with
//! attribute flags. Unknown fields are rejected.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::labelled::LabelledHasse;
use crate::poset::Lattice;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub elements: Vec<ElementEntry>,
    pub covers: Vec<CoverEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<LabelEntry>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementEntry {
    pub id: usize,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverEntry {
    pub upper: usize,
    pub lower: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelEntry {
    pub label: String,
    #[serde(default)]
    pub attrs: Vec<String>,
}

/// A quiver that need not be a lattice, with arrows given by node name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub nodes: Vec<QuiverNode>,
    pub arrows: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverNode {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walk: Option<String>,
}

/// A loaded lattice, labelled when the file carries labels.
#[derive(Debug, Clone)]
pub enum Loaded {
    Plain(Lattice),
    Labelled(LabelledHasse),
}

impl Loaded {
    pub fn lattice(&self) -> &Lattice {
        match self {
            Loaded::Plain(l) => l,
            Loaded::Labelled(lh) => lh.lattice(),
        }
    }

    pub fn labelled(&self) -> Option<&LabelledHasse> {
        match self {
            Loaded::Plain(_) => None,
            Loaded::Labelled(lh) => Some(lh),
        }
    }
}

fn parse_error(context: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        context: context.to_string(),
        message: message.into(),
    }
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str, context: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        parse_error(
            context,
            format!("line {} column {}: {e}", e.line(), e.column()),
        )
    })
}

/// Validates a parsed file and builds the lattice.
pub fn lattice_from_file(file: &LatticeFile) -> Result<Loaded> {
    if file.format_version != FORMAT_VERSION {
        return Err(parse_error(
            "format_version",
            format!("unsupported version {}", file.format_version),
        ));
    }
    let mut index = BTreeMap::new();
    for (k, e) in file.elements.iter().enumerate() {
        if index.insert(e.id, k).is_some() {
            return Err(parse_error("elements", format!("id {} repeated", e.id)));
        }
    }
    let lookup = |id: usize, field: &str| {
        index
            .get(&id)
            .copied()
            .ok_or_else(|| parse_error(field, format!("unknown element id {id}")))
    };
    let mut pairs = Vec::with_capacity(file.covers.len());
    let mut seen = BTreeSet::new();
    for c in &file.covers {
        let pair = (
            lookup(c.upper, "covers.upper")?,
            lookup(c.lower, "covers.lower")?,
        );
        if !seen.insert(pair) {
            return Err(parse_error(
                "covers",
                format!("cover {} -> {} repeated", c.upper, c.lower),
            ));
        }
        pairs.push(pair);
    }
    let labelled = file.covers.iter().filter(|c| c.label.is_some()).count();
    if labelled != 0 && labelled != file.covers.len() {
        return Err(parse_error(
            "covers.label",
            "either every cover has a label or none does",
        ));
    }
    let names = file.elements.iter().map(|e| e.name.clone()).collect();
    let lattice = Lattice::from_covers(file.elements.len(), &pairs, Some(names))?;
    if labelled == 0 {
        if file.labels.as_ref().is_some_and(|l| !l.is_empty()) {
            return Err(parse_error(
                "labels",
                "labels listed but no cover is labelled",
            ));
        }
        return Ok(Loaded::Plain(lattice));
    }

    let by_pair: BTreeMap<(usize, usize), &str> = pairs
        .iter()
        .zip(&file.covers)
        .map(|(&p, c)| (p, c.label.as_deref().unwrap()))
        .collect();
    let vocabulary: Vec<LabelEntry> = match &file.labels {
        Some(list) => list.clone(),
        None => by_pair
            .values()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|l| LabelEntry {
                label: l.to_string(),
                attrs: Vec::new(),
            })
            .collect(),
    };
    let ids: BTreeMap<&str, usize> = vocabulary
        .iter()
        .enumerate()
        .map(|(k, e)| (e.label.as_str(), k))
        .collect();
    if ids.len() != vocabulary.len() {
        return Err(parse_error("labels", "a label is listed twice"));
    }
    let labels = lattice
        .covers()
        .iter()
        .map(|a| {
            let name = by_pair[&(a.upper, a.lower)];
            ids.get(name)
                .copied()
                .ok_or_else(|| parse_error("covers.label", format!("label {name} is not listed")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut lh = LabelledHasse::new(
        lattice,
        labels,
        vocabulary.iter().map(|e| e.label.clone()).collect(),
    )?;
    for (k, e) in vocabulary.iter().enumerate() {
        lh.set_attrs(k, e.attrs.iter().cloned().collect());
    }
    Ok(Loaded::Labelled(lh))
}

pub fn parse_lattice(text: &str) -> Result<Loaded> {
    let file: LatticeFile = from_json(text, "lattice file")?;
    lattice_from_file(&file)
}

pub fn load_lattice(path: impl AsRef<Path>) -> Result<Loaded> {
    parse_lattice(&std::fs::read_to_string(path)?)
}

pub fn parse_quiver(text: &str) -> Result<QuiverFile> {
    let file: QuiverFile = from_json(text, "quiver file")?;
    let names: BTreeSet<&str> = file.nodes.iter().map(|n| n.name.as_str()).collect();
    if names.len() != file.nodes.len() {
        return Err(parse_error("nodes", "a node name is repeated"));
    }
    for (a, b) in &file.arrows {
        for end in [a, b] {
            if !names.contains(end.as_str()) {
                return Err(parse_error("arrows", format!("unknown node {end}")));
            }
        }
    }
    Ok(file)
}

/// The canonical file for a lattice: ids are element indices and covers
/// appear in index order.
pub fn to_file(l: &Lattice, labels: Option<&LabelledHasse>) -> LatticeFile {
    LatticeFile {
        format_version: FORMAT_VERSION,
        description: None,
        elements: (0..l.len())
            .map(|x| ElementEntry {
                id: x,
                name: l.name(x),
            })
            .collect(),
        covers: l
            .covers()
            .iter()
            .enumerate()
            .map(|(c, a)| CoverEntry {
                upper: a.upper,
                lower: a.lower,
                label: labels.map(|lh| lh.label_name(lh.label(c)).to_string()),
            })
            .collect(),
        labels: labels.map(|lh| {
            (0..lh.label_count())
                .map(|k| LabelEntry {
                    label: lh.label_name(k).to_string(),
                    attrs: lh.attrs(k).iter().cloned().collect(),
                })
                .collect()
        }),
    }
}

/// Pretty JSON with a trailing newline.
pub fn emit_json(l: &Lattice, labels: Option<&LabelledHasse>) -> String {
    let mut s = serde_json::to_string_pretty(&to_file(l, labels)).expect("serializable");
    s.push('\n');
    s
}

pub fn emit_loaded_json(loaded: &Loaded) -> String {
    emit_json(loaded.lattice(), loaded.labelled())
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Style attribute marking highlighted arrows (drawn doubled).
pub const DOT_HIGHLIGHT: &str = "color=\"black:invis:black\"";

/// DOT text for the Hasse quiver. Nodes of equal height share a rank,
/// arrows carry their labels, and arrows in `highlight` are drawn doubled.
pub fn emit_dot(l: &Lattice, labels: Option<&LabelledHasse>, highlight: &BitSet) -> String {
    let mut out = String::from("digraph hasse {\n  node [shape=plaintext];\n");
    for x in 0..l.len() {
        let _ = writeln!(out, "  n{x} [label=\"{}\"];", dot_escape(&l.name(x)));
    }
    let heights = l.heights();
    let mut ranks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (x, &h) in heights.iter().enumerate() {
        ranks.entry(h).or_default().push(x);
    }
    for members in ranks.values().rev() {
        let nodes: Vec<String> = members.iter().map(|x| format!("n{x};")).collect();
        let _ = writeln!(out, "  {{ rank=same; {} }}", nodes.join(" "));
    }
    for (c, a) in l.covers().iter().enumerate() {
        let mut attrs = Vec::new();
        if let Some(lh) = labels {
            attrs.push(format!(
                "label=\"{}\"",
                dot_escape(lh.label_name(lh.label(c)))
            ));
        }
        if c < highlight.len() && highlight.contains(c) {
            attrs.push(DOT_HIGHLIGHT.to_string());
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  n{} -> n{};", a.upper, a.lower);
        } else {
            let _ = writeln!(
                out,
                "  n{} -> n{} [{}];",
                a.upper,
                a.lower,
                attrs.join(", ")
            );
        }
    }
    out.push_str("}\n");
    out
}

/// Figure transcriptions shipped with the crate.
pub mod fixtures {
    use super::*;

    pub const WEAK_S4: &str = include_str!("../fixtures/weak_s4.json");
    pub const EXLAT_LEFT: &str = include_str!("../fixtures/exlat_left.json");
    pub const EXLAT_RIGHT: &str = include_str!("../fixtures/exlat_right.json");
    pub const CAMBRIAN_S4_QUOTIENT: &str = include_str!("../fixtures/cambrian_s4_quotient.json");
    pub const CAMBRIAN_S4_CONTRACTED: &str =
        include_str!("../fixtures/cambrian_s4_contracted.json");
    pub const EXFORC_A3: &str = include_str!("../fixtures/exforc_a3.json");

    /// Lattice fixtures by file stem.
    pub const LATTICES: [(&str, &str); 4] = [
        ("weak_s4", WEAK_S4),
        ("exlat_left", EXLAT_LEFT),
        ("exlat_right", EXLAT_RIGHT),
        ("cambrian_s4_quotient", CAMBRIAN_S4_QUOTIENT),
    ];

    pub fn lattice(name: &str) -> Option<Result<Loaded>> {
        let stem = name.trim_end_matches(".json");
        let stem = stem.rsplit('/').next().unwrap_or(stem);
        LATTICES
            .iter()
            .find(|(n, _)| *n == stem)
            .map(|(_, text)| parse_lattice(text))
    }

    pub fn weak_s4() -> Lattice {
        parse_lattice(WEAK_S4).expect("fixture").lattice().clone()
    }

    pub fn exlat_left() -> LabelledHasse {
        labelled(EXLAT_LEFT)
    }

    pub fn exlat_right() -> LabelledHasse {
        labelled(EXLAT_RIGHT)
    }

    pub fn cambrian_s4_quotient() -> Lattice {
        parse_lattice(CAMBRIAN_S4_QUOTIENT)
            .expect("fixture")
            .lattice()
            .clone()
    }

    pub fn cambrian_s4_contracted() -> QuiverFile {
        parse_quiver(CAMBRIAN_S4_CONTRACTED).expect("fixture")
    }

    pub fn exforc_a3() -> QuiverFile {
        parse_quiver(EXFORC_A3).expect("fixture")
    }

    fn labelled(text: &str) -> LabelledHasse {
        match parse_lattice(text).expect("fixture") {
            Loaded::Labelled(lh) => lh,
            Loaded::Plain(_) => panic!("fixture without labels"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::examples::chain;

    #[test]
    fn one_element_file() {
        let text = r#"{"format_version": 1, "elements": [{"id": 7, "name": "x"}], "covers": []}"#;
        let l = parse_lattice(text).unwrap();
        assert_eq!(l.lattice().len(), 1);
        assert!(l.labelled().is_none());
    }

    #[test]
    fn rejects_bad_files() {
        let dup = r#"{"format_version": 1,
            "elements": [{"id": 0, "name": "a"}, {"id": 1, "name": "b"}],
            "covers": [{"upper": 1, "lower": 0}, {"upper": 1, "lower": 0}]}"#;
        assert!(matches!(parse_lattice(dup), Err(Error::Parse { .. })));
        let unknown = r#"{"format_version": 1, "elements": [], "covers": [], "extra": 0}"#;
        assert!(matches!(parse_lattice(unknown), Err(Error::Parse { .. })));
        let partial = r#"{"format_version": 1,
            "elements": [{"id": 0, "name": "a"}, {"id": 1, "name": "b"}, {"id": 2, "name": "c"}],
            "covers": [{"upper": 1, "lower": 0, "label": "s"}, {"upper": 2, "lower": 1}]}"#;
        assert!(matches!(parse_lattice(partial), Err(Error::Parse { .. })));
        let dangling = r#"{"format_version": 1,
            "elements": [{"id": 0, "name": "a"}], "covers": [{"upper": 3, "lower": 0}]}"#;
        assert!(matches!(parse_lattice(dangling), Err(Error::Parse { .. })));
        let not_lattice = r#"{"format_version": 1,
            "elements": [{"id": 0, "name": "a"}, {"id": 1, "name": "b"}], "covers": []}"#;
        assert!(matches!(
            parse_lattice(not_lattice),
            Err(Error::NotLattice { .. })
        ));
    }

    #[test]
    fn dot_for_one_arrow() {
        let l = chain(2);
        let dot = emit_dot(&l, None, &BitSet::new(1));
        assert_eq!(dot.matches("[label=").count(), 2);
        assert_eq!(dot.matches(" -> ").count(), 1);
        assert!(!dot.contains(DOT_HIGHLIGHT));
        let dot = emit_dot(&l, None, &BitSet::full(1));
        assert_eq!(dot.matches(DOT_HIGHLIGHT).count(), 1);
    }

    #[test]
    fn fixtures_load() {
        assert_eq!(fixtures::weak_s4().len(), 24);
        let left = fixtures::exlat_left();
        assert_eq!(left.lattice().len(), 16);
        let names: BTreeSet<&str> = left.label_names().iter().map(String::as_str).collect();
        assert_eq!(
            names,
            ["Sa", "Sb", "Sc", "ab", "acb", "bc", "cb"]
                .into_iter()
                .collect()
        );
        assert_eq!(left.labels_with_attr("simple").len(), 3);
        assert_eq!(fixtures::exlat_right().lattice().len(), 12);
        assert_eq!(fixtures::cambrian_s4_quotient().len(), 14);
        assert_eq!(fixtures::exforc_a3().arrows.len(), 16);
        assert_eq!(fixtures::cambrian_s4_contracted().arrows.len(), 11);
    }

    #[test]
    fn json_round_trip() {
        for (_, text) in fixtures::LATTICES {
            let loaded = parse_lattice(text).unwrap();
            let emitted = emit_loaded_json(&loaded);
            let again = emit_loaded_json(&parse_lattice(&emitted).unwrap());
            assert_eq!(emitted, again);
        }
    }
}
