//! Syntactic tag inventory, tag parsing, and equivalence-class projection.
//!
//! Tags are opaque symbols: the `+`/`-` and `<`/`>` characters that appear
//! in symbols like `+FAUXV` or `<NOM-OF` are mnemonic only and carry no
//! parsed structure. Comparison is exact, case-sensitive string equality.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// Reserved by the pattern notation and the file formats; a tag symbol may
/// not equal any of these.
const RESERVED_SYMBOLS: &[&str] = &["...", "[", "]+", "<s>", "</s>", "_", "|", ":", "="];

/// Candidate tag carried by punctuation tokens. Punctuation never appears
/// in an axis tagset; it participates in gaps only.
pub const PUNCT: &str = "PUNCT";

/// A syntactic function tag (or an equivalence-class symbol, which obeys
/// the same lexical rules).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag(Box<str>);

impl Tag {
    /// Parses a tag symbol, trimming surrounding whitespace.
    pub fn parse(text: &str) -> Result<Self, TagsetError> {
        let sym = text.trim();
        if sym.is_empty() {
            return Err(TagsetError::MalformedTag {
                input: text.to_owned(),
                reason: "empty symbol",
            });
        }
        if sym.contains('/') {
            return Err(TagsetError::MalformedTag {
                input: text.to_owned(),
                reason: "symbol contains '/'",
            });
        }
        if sym.chars().any(char::is_whitespace) {
            return Err(TagsetError::MalformedTag {
                input: text.to_owned(),
                reason: "symbol contains whitespace",
            });
        }
        if RESERVED_SYMBOLS.contains(&sym) {
            return Err(TagsetError::MalformedTag {
                input: text.to_owned(),
                reason: "symbol is reserved by the pattern notation",
            });
        }
        if sym.starts_with('#') {
            return Err(TagsetError::MalformedTag {
                input: text.to_owned(),
                reason: "symbol starts with the comment character '#'",
            });
        }
        Ok(Tag(sym.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The reserved punctuation tag.
    pub fn punct() -> Self {
        Tag(PUNCT.into())
    }

    pub fn is_punct(&self) -> bool {
        &*self.0 == PUNCT
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tag({})", self.0)
    }
}

impl FromStr for Tag {
    type Err = TagsetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tag::parse(s)
    }
}

/// The set of tags a corpus is annotated with, plus free-text glosses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagInventory {
    tags: BTreeMap<Tag, String>,
}

impl TagInventory {
    /// Builds an inventory from `(symbol, gloss)` pairs.
    pub fn new<I, S>(entries: I) -> Result<Self, TagsetError>
    where
        I: IntoIterator<Item = (Tag, S)>,
        S: Into<String>,
    {
        let mut tags = BTreeMap::new();
        for (tag, gloss) in entries {
            if tags.insert(tag.clone(), gloss.into()).is_some() {
                return Err(TagsetError::DuplicateTag(tag));
            }
        }
        if tags.is_empty() {
            return Err(TagsetError::EmptyInventory);
        }
        Ok(TagInventory { tags })
    }

    /// Parses inventory text: one `SYMBOL<TAB>gloss` per line, `#` comments
    /// and blank lines ignored. The gloss is optional.
    pub fn parse_str(text: &str) -> Result<Self, TagsetError> {
        let mut entries = Vec::new();
        for line in text.lines() {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (sym, gloss) = match line.split_once('\t') {
                Some((s, g)) => (s, g.trim()),
                None => (line, ""),
            };
            entries.push((Tag::parse(sym)?, gloss));
        }
        TagInventory::new(entries)
    }

    /// Renders the inventory back to its line format, sorted by symbol.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (tag, gloss) in &self.tags {
            out.push_str(tag.as_str());
            if !gloss.is_empty() {
                out.push('\t');
                out.push_str(gloss);
            }
            out.push('\n');
        }
        out
    }

    pub fn contains(&self, tag: &Tag) -> bool {
        self.tags.contains_key(tag)
    }

    pub fn gloss(&self, tag: &Tag) -> Option<&str> {
        self.tags.get(tag).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tag, &str)> {
        self.tags.iter().map(|(t, g)| (t, g.as_str()))
    }
}

/// The ENGCG surface-syntactic tag set this toolkit was built around.
pub fn default_inventory() -> TagInventory {
    const ENTRIES: &[(&str, &str)] = &[
        ("+FAUXV", "Finite Auxiliary Predicate"),
        ("-FAUXV", "Nonfinite Auxiliary Predicate"),
        ("+FMAINV", "Finite Main Predicate"),
        ("-FMAINV", "Nonfinite Main Predicate"),
        ("NPHR", "Stray NP"),
        ("SUBJ", "Subject"),
        ("F-SUBJ", "Formal Subject"),
        ("OBJ", "Object"),
        ("I-OBJ", "Indirect Object"),
        ("PCOMPL-S", "Subject Complement"),
        ("PCOMPL-O", "Object Complement"),
        ("ADVL", "Adverbial"),
        ("O-ADVL", "Object Adverbial"),
        ("APP", "Apposition"),
        ("N", "Title"),
        ("DN>", "Determiner"),
        ("NN>", "Premodifying Noun"),
        ("AN>", "Premodifying Adjective"),
        ("QN>", "Premodifying Quantifier"),
        ("GN>", "Premodifying Genitive"),
        ("AD-A>", "Premodifying Ad-Adjective"),
        ("<NOM-OF", "Postmodifying Of"),
        ("<NOM-FMAINV", "Postmodifying Nonfinite Verb"),
        ("<AD-A", "Postmodifying Ad-Adjective"),
        ("<NOM", "Other Postmodifier"),
        ("INFMARK>", "Infinitive Marker"),
        ("<P-FMAINV", "Nonfinite Verb as Complement of Preposition"),
        ("<P", "Other Complement of Preposition"),
        ("CC", "Coordinator"),
        ("CS", "Subordinator"),
    ];
    TagInventory::new(
        ENTRIES
            .iter()
            .map(|(s, g)| (Tag::parse(s).expect("default inventory symbol"), *g)),
    )
    .expect("default inventory is non-empty and duplicate-free")
}

/// Maps several tags onto one class symbol so that axes generalise across
/// them (e.g. `nonfinv` covering the nonfinite verb tags).
///
/// Projection must be a function: within one map no tag may belong to two
/// classes. Tags outside every class project to themselves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EquivalenceClassMap {
    classes: BTreeMap<Tag, BTreeSet<Tag>>,
    member_to_class: BTreeMap<Tag, Tag>,
}

impl EquivalenceClassMap {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a map from `(class symbol, members)` pairs.
    pub fn new<I, M>(classes: I) -> Result<Self, TagsetError>
    where
        I: IntoIterator<Item = (Tag, M)>,
        M: IntoIterator<Item = Tag>,
    {
        let mut map = EquivalenceClassMap::default();
        for (symbol, members) in classes {
            let members: BTreeSet<Tag> = members.into_iter().collect();
            if members.is_empty() {
                return Err(TagsetError::EmptyClass(symbol));
            }
            if map.classes.contains_key(&symbol) {
                return Err(TagsetError::DuplicateClass(symbol));
            }
            for m in &members {
                if map.member_to_class.contains_key(m) {
                    return Err(TagsetError::TagInTwoClasses(m.clone()));
                }
                if m == &symbol || map.classes.contains_key(m) {
                    return Err(TagsetError::ClassSymbolCollision(symbol.clone()));
                }
            }
            if map.member_to_class.contains_key(&symbol) {
                return Err(TagsetError::ClassSymbolCollision(symbol));
            }
            for m in &members {
                map.member_to_class.insert(m.clone(), symbol.clone());
            }
            map.classes.insert(symbol, members);
        }
        Ok(map)
    }

    /// The symbol a tag projects to: its class symbol if it belongs to a
    /// class, otherwise the tag itself.
    pub fn project(&self, tag: &Tag) -> Tag {
        self.member_to_class.get(tag).unwrap_or(tag).clone()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tag, &BTreeSet<Tag>)> {
        self.classes.iter()
    }

    /// Checks that no class symbol collides with a tag of `inventory`.
    pub fn validate_against(&self, inventory: &TagInventory) -> Result<(), TagsetError> {
        for symbol in self.classes.keys() {
            if inventory.contains(symbol) {
                return Err(TagsetError::ClassSymbolCollision(symbol.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TagsetError {
    MalformedTag { input: String, reason: &'static str },
    DuplicateTag(Tag),
    EmptyInventory,
    EmptyClass(Tag),
    DuplicateClass(Tag),
    TagInTwoClasses(Tag),
    ClassSymbolCollision(Tag),
}

impl fmt::Display for TagsetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TagsetError::MalformedTag { input, reason } => {
                write!(f, "malformed tag {input:?}: {reason}")
            }
            TagsetError::DuplicateTag(t) => write!(f, "duplicate tag {t}"),
            TagsetError::EmptyInventory => write!(f, "tag inventory is empty"),
            TagsetError::EmptyClass(c) => write!(f, "equivalence class {c} has no members"),
            TagsetError::DuplicateClass(c) => write!(f, "equivalence class {c} declared twice"),
            TagsetError::TagInTwoClasses(t) => {
                write!(f, "tag {t} belongs to two equivalence classes")
            }
            TagsetError::ClassSymbolCollision(c) => {
                write!(f, "class symbol {c} collides with a tag symbol")
            }
        }
    }
}

impl core::error::Error for TagsetError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_and_signed_symbols() {
        assert_eq!(Tag::parse("SUBJ").unwrap().as_str(), "SUBJ");
        assert_eq!(Tag::parse("  +FAUXV ").unwrap().as_str(), "+FAUXV");
        assert_eq!(Tag::parse("<NOM-OF").unwrap().as_str(), "<NOM-OF");
    }

    #[test]
    fn rejects_malformed_symbols() {
        assert!(Tag::parse("").is_err());
        assert!(Tag::parse("   ").is_err());
        assert!(Tag::parse("A/B").is_err());
        assert!(Tag::parse("A B").is_err());
        assert!(Tag::parse("...").is_err());
        assert!(Tag::parse("#X").is_err());
    }

    #[test]
    fn default_inventory_matches_the_engcg_tag_set() {
        let inv = default_inventory();
        assert_eq!(inv.len(), 30);
        for sym in ["+FAUXV", "SUBJ", "<NOM-FMAINV", "INFMARK>", "CS"] {
            assert!(inv.contains(&Tag::parse(sym).unwrap()), "missing {sym}");
        }
        assert_eq!(
            inv.gloss(&Tag::parse("SUBJ").unwrap()),
            Some("Subject")
        );
    }

    #[test]
    fn inventory_round_trips_through_its_line_format() {
        let text = "SUBJ\tSubject\n# comment\nOBJ\n\n+FMAINV\tFinite Main Predicate\n";
        let inv = TagInventory::parse_str(text).unwrap();
        assert_eq!(inv.len(), 3);
        let rendered = inv.render();
        let again = TagInventory::parse_str(&rendered).unwrap();
        assert_eq!(inv, again);
        // Rendering reproduces exactly the input's non-comment lines.
        let input_lines: BTreeSet<&str> = text
            .lines()
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let rendered_lines: BTreeSet<&str> = rendered.lines().collect();
        assert_eq!(input_lines, rendered_lines);
    }

    #[test]
    fn inventory_rejects_duplicates_and_emptiness() {
        assert!(matches!(
            TagInventory::parse_str("SUBJ\nSUBJ\n"),
            Err(TagsetError::DuplicateTag(_))
        ));
        assert!(matches!(
            TagInventory::parse_str("# nothing here\n"),
            Err(TagsetError::EmptyInventory)
        ));
    }

    fn nonfinv_map() -> EquivalenceClassMap {
        EquivalenceClassMap::new([(
            Tag::parse("nonfinv").unwrap(),
            ["-FMAINV", "<NOM-FMAINV", "<P-FMAINV"]
                .map(|s| Tag::parse(s).unwrap()),
        )])
        .unwrap()
    }

    #[test]
    fn projection_maps_members_and_leaves_others_alone() {
        let eq = nonfinv_map();
        let nonfinv = Tag::parse("nonfinv").unwrap();
        assert_eq!(eq.project(&Tag::parse("-FMAINV").unwrap()), nonfinv);
        assert_eq!(eq.project(&Tag::parse("<P-FMAINV").unwrap()), nonfinv);
        assert_eq!(
            eq.project(&Tag::parse("SUBJ").unwrap()),
            Tag::parse("SUBJ").unwrap()
        );
    }

    #[test]
    fn empty_map_projects_identically() {
        let eq = EquivalenceClassMap::empty();
        for sym in ["SUBJ", "OBJ", "+FMAINV"] {
            let tag = Tag::parse(sym).unwrap();
            assert_eq!(eq.project(&tag), tag);
        }
    }

    #[test]
    fn class_membership_must_be_a_function() {
        let err = EquivalenceClassMap::new([
            (
                Tag::parse("a").unwrap(),
                alloc::vec![Tag::parse("SUBJ").unwrap()],
            ),
            (
                Tag::parse("b").unwrap(),
                alloc::vec![Tag::parse("SUBJ").unwrap()],
            ),
        ]);
        assert!(matches!(err, Err(TagsetError::TagInTwoClasses(_))));
    }

    #[test]
    fn class_symbols_must_not_collide_with_inventory_tags() {
        let eq = EquivalenceClassMap::new([(
            Tag::parse("SUBJ").unwrap(),
            alloc::vec![Tag::parse("OBJ").unwrap()],
        )])
        .unwrap();
        assert!(eq.validate_against(&default_inventory()).is_err());
    }
}
