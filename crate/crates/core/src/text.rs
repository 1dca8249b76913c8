//! Lowercasing, whitespace tokenization and stemming.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::stem::stem;

/// Ordered list of non-empty, whitespace-free, lowercase tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenSequence(Vec<String>);

impl TokenSequence {
    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn into_tokens(self) -> Vec<String> {
        self.0
    }

    /// Tokens joined by single spaces.
    pub fn joined(&self) -> String {
        self.0.join(" ")
    }
}

impl Deref for TokenSequence {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

impl<'a> IntoIterator for &'a TokenSequence {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for TokenSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.join(", "))
    }
}

/// Lowercases `text` and splits it on runs of Unicode whitespace.
/// Punctuation stays attached to the token it touches.
pub fn tokenize(text: &str) -> TokenSequence {
    TokenSequence(
        text.to_lowercase()
            .split_whitespace()
            .map(str::to_owned)
            .collect(),
    )
}

/// `tokenize` followed by per-token stemming. A token that stems to nothing
/// (possible for bare apostrophe forms such as `''s`) is dropped.
pub fn normalize(text: &str) -> TokenSequence {
    TokenSequence(
        tokenize(text)
            .into_tokens()
            .into_iter()
            .map(|t| stem(&t))
            .filter(|t| !t.is_empty())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(seq: &TokenSequence) -> Vec<&str> {
        seq.iter().map(String::as_str).collect()
    }

    #[test]
    fn tokenize_keeps_punctuation() {
        let seq = tokenize(
            "Man wearing dark clothes walks down a street with a wall of graffiti to his left.",
        );
        assert_eq!(seq.len(), 16);
        assert_eq!(seq.last().map(String::as_str), Some("left."));
    }

    #[test]
    fn tokenize_collapses_whitespace() {
        assert!(tokenize("").is_empty());
        assert!(tokenize(" \t\n ").is_empty());
        assert_eq!(strs(&tokenize("  A  b\tC ")), ["a", "b", "c"]);
    }

    #[test]
    fn normalize_rows() {
        assert_eq!(
            strs(&normalize(
                "Two children are diving side by side into a river."
            )),
            ["two", "children", "are", "dive", "side", "by", "side", "into", "a", "river."]
        );
        assert_eq!(
            strs(&normalize("The man is painting the street.")),
            ["the", "man", "is", "paint", "the", "street."]
        );
        assert_eq!(
            strs(&normalize("She punches through the wall")),
            ["she", "punch", "through", "the", "wall"]
        );
    }

    #[test]
    fn empty_stems_dropped() {
        assert_eq!(strs(&normalize("''s dog")), ["dog"]);
    }

    #[test]
    fn display_matches_bracket_form() {
        assert_eq!(normalize("The man").to_string(), "[the, man]");
    }
}
