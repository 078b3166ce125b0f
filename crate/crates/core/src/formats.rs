//! JSON and CSV file formats.
//!
//! Language: `{"alphabet": ["a","b"], "words": ["a","b","ab"]}`.
//! Group: table form `{"elements": ["e","g"], "identity": "e", "table": [["e","g"],["g","e"]]}`
//! or permutation form `{"degree": 3, "generators": [[1,0,2],[1,2,0]]}`.
//! f: `[{"word": "aa", "g": "g"}]`, unlisted words map to the identity.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupDescription};
use crate::langdecomp::FactorialLanguage;
use crate::localgroups::{GFunction, SemigroupView, TableSemigroup};
use crate::words::{Alphabet, Word};

/// Largest semigroup whose Cayley table is exported.
pub const EXPORT_LIMIT: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageFile {
    pub alphabet: Vec<String>,
    pub words: Vec<String>,
}

impl LanguageFile {
    pub fn alphabet(&self) -> Result<Alphabet> {
        let mut letters = Vec::with_capacity(self.alphabet.len());
        for s in &self.alphabet {
            let b = s.as_bytes();
            if b.len() != 1 {
                return Err(Error::InvalidAlphabet(format!(
                    "'{s}' is not a single letter"
                )));
            }
            letters.push(b[0]);
        }
        Alphabet::new(letters)
    }

    /// The factorial closure and the words that had to be added.
    pub fn load(&self) -> Result<(FactorialLanguage, Vec<Word>)> {
        let alphabet = self.alphabet()?;
        let words = self
            .words
            .iter()
            .map(|w| {
                let w = Word::parse(w)?;
                if w.is_empty() {
                    return Err(Error::EmptyWord("language member"));
                }
                alphabet.check_word(w.letters())?;
                Ok(w)
            })
            .collect::<Result<Vec<_>>>()?;
        FactorialLanguage::closure(alphabet, &words)
    }

    pub fn from_language(lang: &FactorialLanguage) -> Self {
        LanguageFile {
            alphabet: lang
                .alphabet()
                .letters()
                .iter()
                .map(|&a| (a as char).to_string())
                .collect(),
            words: lang.words().iter().map(|w| w.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FValue {
    pub word: String,
    pub g: String,
}

pub fn load_gfunction(
    lang: FactorialLanguage,
    group: FiniteGroup,
    values: &[FValue],
) -> Result<GFunction> {
    let parsed = values
        .iter()
        .map(|v| Ok((Word::parse(&v.word)?, group.parse_element(&v.g)?)))
        .collect::<Result<Vec<_>>>()?;
    GFunction::from_values(lang, group, parsed)
}

pub fn gfunction_file(f: &GFunction, group: &FiniteGroup) -> Vec<FValue> {
    f.assignments()
        .into_iter()
        .map(|(w, g)| FValue {
            word: w.to_string(),
            g: group.name(&g),
        })
        .collect()
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn load_language(path: &Path) -> Result<(FactorialLanguage, Vec<Word>)> {
    read_json::<LanguageFile>(path)?.load()
}

pub fn load_group(path: &Path) -> Result<FiniteGroup> {
    FiniteGroup::from_description(&read_json::<GroupDescription>(path)?)
}

/// Element names and, optionally, the full Cayley table as indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyExport {
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
}

pub fn export<V: SemigroupView>(s: &V, with_table: bool) -> Result<CayleyExport> {
    let elems = s.elements()?;
    if with_table && elems.len() > EXPORT_LIMIT {
        return Err(Error::TooLarge(format!(
            "{} elements, the table export stops at {EXPORT_LIMIT}",
            elems.len()
        )));
    }
    let elements = elems.iter().map(|e| s.show(e)).collect();
    let table = if with_table {
        let (t, _) = TableSemigroup::from_view(s)?;
        Some(t.table)
    } else {
        None
    };
    Ok(CayleyExport { elements, table })
}

/// Header row of element names, then one row per left factor.
pub fn cayley_csv(export: &CayleyExport) -> Result<String> {
    let table = export
        .table
        .as_ref()
        .ok_or_else(|| Error::Invalid("no table to write".into()))?;
    let quote = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
    let mut out = String::new();
    let header: Vec<String> = export.elements.iter().map(|e| quote(e)).collect();
    let _ = writeln!(out, "\"\",{}", header.join(","));
    for (i, row) in table.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|&j| quote(&export.elements[j])).collect();
        let _ = writeln!(out, "{},{}", quote(&export.elements[i]), cells.join(","));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localgroups::LocalGroup;

    #[test]
    fn language_file_closes_and_reports() {
        let file: LanguageFile =
            serde_json::from_str(r#"{"alphabet": ["a","b"], "words": ["aab", "bab"]}"#).unwrap();
        let (lang, added) = file.load().unwrap();
        assert!(lang.contains(b"ab") && lang.contains(b"ba"));
        assert!(added.contains(&Word::parse("ab").unwrap()));
        let back = LanguageFile::from_language(&lang);
        assert_eq!(back.load().unwrap().0.words(), lang.words());
        let bad: LanguageFile =
            serde_json::from_str(r#"{"alphabet": ["a"], "words": ["ab"]}"#).unwrap();
        assert!(matches!(bad.load(), Err(Error::ForeignLetter('b'))));
    }

    #[test]
    fn s1_round_trip_and_export() {
        let group: GroupDescription = serde_json::from_str(
            r#"{"elements": ["e","g"], "identity": "e", "table": [["e","g"],["g","e"]]}"#,
        )
        .unwrap();
        let group = FiniteGroup::from_description(&group).unwrap();
        let lang: LanguageFile =
            serde_json::from_str(r#"{"alphabet": ["a"], "words": ["a"]}"#).unwrap();
        let (lang, _) = lang.load().unwrap();
        let values: Vec<FValue> = serde_json::from_str(r#"[{"word": "aa", "g": "g"}]"#).unwrap();
        let f = load_gfunction(lang, group.clone(), &values).unwrap();
        assert_eq!(gfunction_file(&f, &group), values);
        let s = LocalGroup::new(f);
        let ex = export(&s, true).unwrap();
        assert_eq!(ex.elements.len(), 9);
        let csv = cayley_csv(&ex).unwrap();
        assert_eq!(csv.lines().count(), 10);
        assert!(csv
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("\"a\",\"(a, g, a)\""));
    }
}
