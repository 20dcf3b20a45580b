use std::collections::HashMap;

/// Groups of interchangeable words, read from a plain text file with one
/// space-separated group per line. Blank lines and lines starting with `#`
/// are ignored. A word may belong to several groups.
#[derive(Debug, Clone, Default)]
pub struct SynonymLexicon {
    groups: Vec<Vec<String>>,
    index: HashMap<String, Vec<usize>>,
}

impl SynonymLexicon {
    pub fn parse(text: &str) -> Self {
        let mut lexicon = SynonymLexicon::default();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            lexicon.add_group(line.split_whitespace().map(str::to_owned).collect());
        }
        lexicon
    }

    pub fn add_group(&mut self, mut words: Vec<String>) {
        words.sort();
        words.dedup();
        if words.is_empty() {
            return;
        }
        let id = self.groups.len();
        for w in &words {
            self.index.entry(w.clone()).or_default().push(id);
        }
        self.groups.push(words);
    }

    pub fn groups(&self) -> &[Vec<String>] {
        &self.groups
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Symmetric: `share_group(a, b) == share_group(b, a)`.
    pub fn share_group(&self, a: &str, b: &str) -> bool {
        match (self.index.get(a), self.index.get(b)) {
            (Some(ga), Some(gb)) => ga.iter().any(|g| gb.contains(g)),
            _ => false,
        }
    }
}
