//! English Snowball stemmer (Porter2).
//!
//! Operates on lowercase input. Characters outside `a-z` are treated as
//! consonants, so a token like `street.` matches no suffix rule and is
//! returned unchanged.

/// Whole-word forms handled before any suffix rule runs.
const EXCEPTIONS: &[(&str, &str)] = &[
    ("skis", "ski"),
    ("skies", "sky"),
    ("dying", "die"),
    ("lying", "lie"),
    ("tying", "tie"),
    ("idly", "idl"),
    ("gently", "gentl"),
    ("ugly", "ugli"),
    ("early", "earli"),
    ("only", "onli"),
    ("singly", "singl"),
    ("sky", "sky"),
    ("news", "news"),
    ("howe", "howe"),
    ("atlas", "atlas"),
    ("cosmos", "cosmos"),
    ("bias", "bias"),
    ("andes", "andes"),
];

/// Words left alone once the plural step has run.
const POST_PLURAL_INVARIANTS: &[&str] = &[
    "inning", "outing", "canning", "herring", "earring", "proceed", "exceed", "succeed",
];

/// Prefixes that fix the start of R1 regardless of the usual vowel rule.
const R1_PREFIXES: &[&str] = &["gener", "commun", "arsen"];

const DOUBLES: &[&str] = &["bb", "dd", "ff", "gg", "mm", "nn", "pp", "rr", "tt"];

const STEP2: &[(&str, &str)] = &[
    ("tional", "tion"),
    ("enci", "ence"),
    ("anci", "ance"),
    ("abli", "able"),
    ("entli", "ent"),
    ("izer", "ize"),
    ("ization", "ize"),
    ("ational", "ate"),
    ("ation", "ate"),
    ("ator", "ate"),
    ("alism", "al"),
    ("aliti", "al"),
    ("alli", "al"),
    ("fulness", "ful"),
    ("ousli", "ous"),
    ("ousness", "ous"),
    ("iveness", "ive"),
    ("iviti", "ive"),
    ("biliti", "ble"),
    ("bli", "ble"),
    ("ogi", "og"),
    ("fulli", "ful"),
    ("lessli", "less"),
    ("li", ""),
];

const STEP3: &[(&str, &str)] = &[
    ("tional", "tion"),
    ("ational", "ate"),
    ("alize", "al"),
    ("icate", "ic"),
    ("iciti", "ic"),
    ("ical", "ic"),
    ("ful", ""),
    ("ness", ""),
    ("ative", ""),
];

const STEP4: &[&str] = &[
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent", "ism", "ate",
    "iti", "ous", "ive", "ize", "ion",
];

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

fn is_vowel_wxy(c: char) -> bool {
    is_vowel(c) || matches!(c, 'w' | 'x' | 'Y')
}

fn is_li_ending(c: char) -> bool {
    matches!(c, 'c' | 'd' | 'e' | 'g' | 'h' | 'k' | 'm' | 'n' | 'r' | 't')
}

/// Stems a single lowercase token.
pub fn stem(token: &str) -> String {
    if let Some((_, out)) = EXCEPTIONS.iter().find(|(word, _)| *word == token) {
        return (*out).to_string();
    }
    if token.chars().count() < 3 {
        return token.to_string();
    }

    let mut word = Word::new(token);
    word.prelude();
    word.mark_regions();
    word.step_1a();
    if !word.is_one_of(POST_PLURAL_INVARIANTS) {
        word.step_1b();
        word.step_1c();
        word.step_2();
        word.step_3();
        word.step_4();
        word.step_5();
    }
    word.finish()
}

struct Word {
    chars: Vec<char>,
    p1: usize,
    p2: usize,
    y_found: bool,
}

impl Word {
    fn new(token: &str) -> Self {
        let chars: Vec<char> = token.chars().collect();
        let len = chars.len();
        Word {
            chars,
            p1: len,
            p2: len,
            y_found: false,
        }
    }

    fn len(&self) -> usize {
        self.chars.len()
    }

    fn ends_with(&self, suffix: &str) -> bool {
        let n = suffix.chars().count();
        n <= self.len()
            && self.chars[self.len() - n..]
                .iter()
                .copied()
                .eq(suffix.chars())
    }

    fn is_one_of(&self, words: &[&str]) -> bool {
        words
            .iter()
            .any(|w| w.chars().count() == self.len() && self.ends_with(w))
    }

    /// Longest entry of `table` that is a suffix of the word, with the index
    /// where it starts.
    fn longest_suffix<'a, T>(
        &self,
        table: &'a [T],
        key: impl Fn(&T) -> &str,
    ) -> Option<(&'a T, usize)> {
        table
            .iter()
            .filter(|entry| self.ends_with(key(entry)))
            .max_by_key(|entry| key(entry).chars().count())
            .map(|entry| (entry, self.len() - key(entry).chars().count()))
    }

    fn replace_from(&mut self, start: usize, with: &str) {
        self.chars.truncate(start);
        self.chars.extend(with.chars());
    }

    fn has_vowel_before(&self, end: usize) -> bool {
        self.chars[..end].iter().any(|&c| is_vowel(c))
    }

    /// True when the text `chars[..end]` ends in a short syllable.
    fn short_syllable_at(&self, end: usize) -> bool {
        let w = &self.chars[..end];
        match end {
            0 | 1 => false,
            2 => is_vowel(w[0]) && !is_vowel(w[1]),
            n => !is_vowel(w[n - 3]) && is_vowel(w[n - 2]) && !is_vowel_wxy(w[n - 1]),
        }
    }

    fn prelude(&mut self) {
        if self.chars.first() == Some(&'\'') {
            self.chars.remove(0);
        }
        if self.chars.first() == Some(&'y') {
            self.chars[0] = 'Y';
            self.y_found = true;
        }
        for i in 1..self.len() {
            if self.chars[i] == 'y' && is_vowel(self.chars[i - 1]) {
                self.chars[i] = 'Y';
                self.y_found = true;
            }
        }
    }

    fn mark_regions(&mut self) {
        let len = self.len();
        self.p1 = len;
        self.p2 = len;
        let prefix = R1_PREFIXES.iter().find(|p| {
            let n = p.chars().count();
            n <= len && self.chars[..n].iter().copied().eq(p.chars())
        });
        let p1 = match prefix {
            Some(p) => Some(p.chars().count()),
            None => self.after_vowel_consonant(0),
        };
        if let Some(p1) = p1 {
            self.p1 = p1;
            if let Some(p2) = self.after_vowel_consonant(p1) {
                self.p2 = p2;
            }
        }
    }

    /// Position just past the first non-vowel that follows a vowel, scanning
    /// from `from`.
    fn after_vowel_consonant(&self, from: usize) -> Option<usize> {
        let v = (from..self.len()).find(|&i| is_vowel(self.chars[i]))?;
        let c = (v + 1..self.len()).find(|&i| !is_vowel(self.chars[i]))?;
        Some(c + 1)
    }

    fn step_1a(&mut self) {
        if let Some((_, start)) = self.longest_suffix(&["'s'", "'s", "'"], |s| s) {
            self.chars.truncate(start);
        }
        let Some((&suffix, start)) =
            self.longest_suffix(&["sses", "ied", "ies", "ss", "us", "s"], |s| s)
        else {
            return;
        };
        match suffix {
            "sses" => self.replace_from(start, "ss"),
            "ied" | "ies" => {
                let with = if start > 1 { "i" } else { "ie" };
                self.replace_from(start, with);
            }
            // the vowel may not be the letter right before the s
            "s" if start >= 1 && self.has_vowel_before(start - 1) => self.chars.truncate(start),
            _ => {}
        }
    }

    fn step_1b(&mut self) {
        let Some((&suffix, start)) =
            self.longest_suffix(&["eedly", "ingly", "edly", "eed", "ing", "ed"], |s| s)
        else {
            return;
        };
        match suffix {
            "eed" | "eedly" => {
                if start >= self.p1 {
                    self.replace_from(start, "ee");
                }
            }
            _ => {
                if !self.has_vowel_before(start) {
                    return;
                }
                self.chars.truncate(start);
                if self.ends_with("at") || self.ends_with("bl") || self.ends_with("iz") {
                    self.chars.push('e');
                } else if DOUBLES.iter().any(|d| self.ends_with(d)) {
                    self.chars.pop();
                } else if self.len() == self.p1 && self.short_syllable_at(self.len()) {
                    self.chars.push('e');
                }
            }
        }
    }

    fn step_1c(&mut self) {
        let n = self.len();
        if n >= 3 && matches!(self.chars[n - 1], 'y' | 'Y') && !is_vowel(self.chars[n - 2]) {
            self.chars[n - 1] = 'i';
        }
    }

    fn step_2(&mut self) {
        let Some((&(suffix, with), start)) = self.longest_suffix(STEP2, |e| e.0) else {
            return;
        };
        if start < self.p1 {
            return;
        }
        match suffix {
            "ogi" => {
                if start > 0 && self.chars[start - 1] == 'l' {
                    self.replace_from(start, with);
                }
            }
            "li" => {
                if start > 0 && is_li_ending(self.chars[start - 1]) {
                    self.chars.truncate(start);
                }
            }
            _ => self.replace_from(start, with),
        }
    }

    fn step_3(&mut self) {
        let Some((&(suffix, with), start)) = self.longest_suffix(STEP3, |e| e.0) else {
            return;
        };
        if start < self.p1 || (suffix == "ative" && start < self.p2) {
            return;
        }
        self.replace_from(start, with);
    }

    fn step_4(&mut self) {
        let Some((&suffix, start)) = self.longest_suffix(STEP4, |s| s) else {
            return;
        };
        if start < self.p2 {
            return;
        }
        if suffix == "ion" && !(start > 0 && matches!(self.chars[start - 1], 's' | 't')) {
            return;
        }
        self.chars.truncate(start);
    }

    fn step_5(&mut self) {
        let n = self.len();
        if self.ends_with("e") {
            let start = n - 1;
            if start >= self.p2 || (start >= self.p1 && !self.short_syllable_at(start)) {
                self.chars.truncate(start);
            }
        } else if self.ends_with("l") {
            let start = n - 1;
            if start >= self.p2 && start > 0 && self.chars[start - 1] == 'l' {
                self.chars.truncate(start);
            }
        }
    }

    fn finish(self) -> String {
        if self.y_found {
            self.chars
                .into_iter()
                .map(|c| if c == 'Y' { 'y' } else { c })
                .collect()
        } else {
            self.chars.into_iter().collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_words() {
        let cases = [
            ("wearing", "wear"),
            ("clothes", "cloth"),
            ("posy", "posi"),
            ("brushes", "brush"),
            ("diving", "dive"),
            ("painting", "paint"),
            ("punches", "punch"),
            ("walks", "walk"),
            ("his", "his"),
            ("children", "children"),
            ("teeth", "teeth"),
        ];
        for (input, expected) in cases {
            assert_eq!(stem(input), expected, "{input}");
        }
    }

    #[test]
    fn short_tokens_pass_through() {
        assert_eq!(stem("a"), "a");
        assert_eq!(stem("is"), "is");
    }

    #[test]
    fn trailing_punctuation_blocks_suffix_rules() {
        assert_eq!(stem("street."), "street.");
        assert_eq!(stem("river."), "river.");
        assert_eq!(stem("left."), "left.");
        assert_eq!(stem("toothbrush."), "toothbrush.");
    }

    #[test]
    fn exceptions_and_invariants() {
        assert_eq!(stem("skies"), "sky");
        assert_eq!(stem("dying"), "die");
        assert_eq!(stem("news"), "news");
        assert_eq!(stem("succeeding"), "succeed");
        assert_eq!(stem("herring"), "herring");
        assert_eq!(stem("generously"), "generous");
    }

    #[test]
    fn y_handling() {
        assert_eq!(stem("cry"), "cri");
        assert_eq!(stem("by"), "by");
        assert_eq!(stem("say"), "say");
        assert_eq!(stem("youth"), "youth");
        assert_eq!(stem("enjoying"), "enjoy");
    }

    #[test]
    fn non_ascii_is_consonant() {
        assert_eq!(stem("cafés"), "café");
        assert_eq!(stem("naïve"), "naïv");
    }
}
