use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Label of the plain component separator.
pub const COMPONENT_LABEL: &str = "N";

/// Coordinate tokens occupy `0..bins`; control tokens follow.
///
/// Layout: `BOS = bins`, `EOS = bins + 1`, `PAD = bins + 2`, then one id
/// per separator label. With the default vocabulary there is a single
/// separator `N`; semantic vocabularies replace it with one token per
/// category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "VocabFile", into = "VocabFile")]
pub struct ControlVocab {
    bins: u16,
    separators: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct VocabFile {
    bins: u32,
    #[serde(default = "default_separators")]
    separators: Vec<String>,
}

fn default_separators() -> Vec<String> {
    vec![COMPONENT_LABEL.to_string()]
}

impl TryFrom<VocabFile> for ControlVocab {
    type Error = Error;
    fn try_from(f: VocabFile) -> Result<Self> {
        ControlVocab::with_separators(f.bins, f.separators)
    }
}

impl From<ControlVocab> for VocabFile {
    fn from(v: ControlVocab) -> Self {
        VocabFile {
            bins: v.bins as u32,
            separators: v.separators,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Coord(u16),
    Bos,
    Eos,
    Pad,
    /// Index into the separator table.
    Separator(usize),
}

impl ControlVocab {
    pub fn new(bins: u32) -> Result<Self> {
        Self::with_separators(bins, default_separators())
    }

    pub fn with_separators(bins: u32, separators: Vec<String>) -> Result<Self> {
        if bins < 2 {
            return Err(Error::InvalidVocab(format!("bins must be at least 2, got {bins}")));
        }
        if separators.is_empty() {
            return Err(Error::InvalidVocab("at least one separator is required".into()));
        }
        let size = bins as u64 + 3 + separators.len() as u64;
        if size > u16::MAX as u64 + 1 {
            return Err(Error::InvalidVocab(format!(
                "vocabulary of {size} tokens does not fit 16-bit ids"
            )));
        }
        for (i, s) in separators.iter().enumerate() {
            if separators[..i].contains(s) {
                return Err(Error::InvalidVocab(format!("duplicate separator label {s:?}")));
            }
        }
        Ok(ControlVocab {
            bins: bins as u16,
            separators,
        })
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn bins(&self) -> u32 {
        self.bins as u32
    }

    pub fn bos(&self) -> u16 {
        self.bins
    }

    pub fn eos(&self) -> u16 {
        self.bins + 1
    }

    pub fn pad(&self) -> u16 {
        self.bins + 2
    }

    pub fn separator(&self, index: usize) -> u16 {
        assert!(index < self.separators.len(), "separator index out of range");
        self.bins + 3 + index as u16
    }

    pub fn separator_labels(&self) -> &[String] {
        &self.separators
    }

    pub fn separator_index(&self, label: &str) -> Option<usize> {
        self.separators.iter().position(|s| s == label)
    }

    pub fn size(&self) -> usize {
        self.bins as usize + 3 + self.separators.len()
    }

    pub fn kind(&self, token: u16) -> Option<TokenKind> {
        let b = self.bins;
        Some(match token {
            t if t < b => TokenKind::Coord(t),
            t if t == b => TokenKind::Bos,
            t if t == b + 1 => TokenKind::Eos,
            t if t == b + 2 => TokenKind::Pad,
            t if ((t - b - 3) as usize) < self.separators.len() => TokenKind::Separator((t - b - 3) as usize),
            _ => return None,
        })
    }

    pub fn is_separator(&self, token: u16) -> bool {
        matches!(self.kind(token), Some(TokenKind::Separator(_)))
    }

    /// `(id, label)` for every control token, in id order.
    pub fn control_table(&self) -> Vec<(u16, String)> {
        let mut table = vec![
            (self.bos(), "BOS".to_string()),
            (self.eos(), "EOS".to_string()),
            (self.pad(), "PAD".to_string()),
        ];
        table.extend(
            self.separators
                .iter()
                .enumerate()
                .map(|(i, l)| (self.separator(i), l.clone())),
        );
        table
    }

    /// Rebuilds a vocabulary from a control table as stored in RIPL files.
    pub fn from_control_table(bins: u32, table: &[(u16, String)]) -> Result<Self> {
        let mut seps: Vec<(u16, String)> = table.iter().filter(|(id, _)| *id as u32 >= bins + 3).cloned().collect();
        seps.sort_by_key(|(id, _)| *id);
        let vocab = Self::with_separators(bins, seps.iter().map(|(_, l)| l.clone()).collect())?;
        if vocab.control_table() != table {
            return Err(Error::InvalidVocab(
                "control table does not follow the BOS/EOS/PAD/separator layout".into(),
            ));
        }
        Ok(vocab)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let v = ControlVocab::new(256).unwrap();
        assert_eq!((v.bos(), v.eos(), v.pad(), v.separator(0)), (256, 257, 258, 259));
        assert_eq!(v.size(), 260);
        assert_eq!(v.kind(255), Some(TokenKind::Coord(255)));
        assert_eq!(v.kind(259), Some(TokenKind::Separator(0)));
        assert_eq!(v.kind(260), None);
    }

    #[test]
    fn semantic_vocab_from_json() {
        let v: ControlVocab =
            serde_json::from_str(r#"{"bins": 256, "separators": ["chair", "table", "lamp"]}"#).unwrap();
        assert_eq!(v.separator_index("lamp"), Some(2));
        assert_eq!(v.separator(2), 261);
        let table = v.control_table();
        assert_eq!(ControlVocab::from_control_table(256, &table).unwrap(), v);
    }

    #[test]
    fn rejects_duplicates_and_overflow() {
        assert!(ControlVocab::with_separators(256, vec!["a".into(), "a".into()]).is_err());
        assert!(ControlVocab::new(65534).is_err());
    }
}
