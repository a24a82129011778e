use std::fmt::Write as _;
use std::io::Read;

use super::{SetError, Subset};

/// A ground set `[0, n)` together with an ordered list of subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collection {
    n: usize,
    sets: Vec<Subset>,
}

impl Collection {
    pub fn new(n: usize, sets: Vec<Subset>) -> Result<Self, SetError> {
        if let Some(bad) = sets.iter().find(|s| s.ground_size() != n) {
            return Err(SetError::SizeMismatch { expected: n, found: bad.ground_size() });
        }
        Ok(Collection { n, sets })
    }

    /// Convenience constructor from element lists.
    pub fn from_lists<S: AsRef<[usize]>>(n: usize, lists: &[S]) -> Result<Self, SetError> {
        let sets = lists
            .iter()
            .map(|l| Subset::from_elements(n, l.as_ref().iter().copied()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Collection { n, sets })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn push(&mut self, s: Subset) -> Result<(), SetError> {
        if s.ground_size() != self.n {
            return Err(SetError::SizeMismatch { expected: self.n, found: s.ground_size() });
        }
        self.sets.push(s);
        Ok(())
    }

    /// The sub-collection picked out by `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Collection {
        Collection { n: self.n, sets: indices.iter().map(|&i| self.sets[i].clone()).collect() }
    }

    pub fn complements(&self) -> Collection {
        Collection { n: self.n, sets: self.sets.iter().map(Subset::complement).collect() }
    }

    /// Parses the collection text format.
    ///
    /// The first non-comment line holds `n`; each later line is one set given
    /// as space-separated 0-based elements. Lines starting with `#` are
    /// comments. Blank lines after the header are rejected since an empty set
    /// has no line form.
    pub fn parse(text: &str) -> Result<Self, SetError> {
        let mut n: Option<usize> = None;
        let mut sets = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.starts_with('#') {
                continue;
            }
            let Some(n) = n else {
                if line.is_empty() {
                    continue;
                }
                let mut toks = line.split_whitespace();
                let tok = toks.next().unwrap_or_default();
                let value = tok.parse::<usize>().map_err(|_| SetError::Parse {
                    line: line_no,
                    message: format!("header must be the ground-set size, found {tok:?}"),
                })?;
                if toks.next().is_some() {
                    return Err(SetError::Parse {
                        line: line_no,
                        message: "header must hold a single integer".into(),
                    });
                }
                n = Some(value);
                continue;
            };
            if line.is_empty() {
                return Err(SetError::Parse {
                    line: line_no,
                    message: "blank set line (omit empty sets instead)".into(),
                });
            }
            let elems = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| SetError::Parse {
                        line: line_no,
                        message: format!("not a non-negative integer: {t:?}"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let set = Subset::from_elements(n, elems).map_err(|e| SetError::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            sets.push(set);
        }
        let n = n.ok_or(SetError::MissingHeader)?;
        Ok(Collection { n, sets })
    }

    pub fn read_from<R: Read>(mut reader: R) -> Result<Self, SetError> {
        let mut text = String::new();
        reader
            .read_to_string(&mut text)
            .map_err(|e| SetError::Parse { line: 0, message: e.to_string() })?;
        Collection::parse(&text)
    }

    /// Canonical text form. `header_comments` are written first, each
    /// prefixed with `# `.
    pub fn to_text_with_comments(&self, header_comments: &[String]) -> Result<String, SetError> {
        let mut out = String::new();
        for c in header_comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "{}", self.n);
        for (i, s) in self.sets.iter().enumerate() {
            if s.is_empty() {
                return Err(SetError::EmptySetNotSerializable(i));
            }
            let _ = writeln!(out, "{s}");
        }
        Ok(out)
    }

    pub fn to_text(&self) -> Result<String, SetError> {
        self.to_text_with_comments(&[])
    }
}
