use std::fmt;

use super::{SetError, Subset};

/// A bijection on `[0, n)` stored as its image array: `image[j] = π(j)`.
///
/// `is_simple` marks permutations made of `⌊n/2⌋` disjoint transpositions
/// (plus a single fixed point when `n` is odd). The flag is only ever set
/// after the structure has been checked.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
    is_simple: bool,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        let image: Vec<usize> = (0..n).collect();
        // n = 0 and n = 1 have no transpositions to place, so identity is simple
        let is_simple = n <= 1;
        Permutation { image, is_simple }
    }

    pub fn from_image(image: Vec<usize>) -> Result<Self, SetError> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &y in &image {
            if y >= n || seen[y] {
                return Err(SetError::NotABijection);
            }
            seen[y] = true;
        }
        let is_simple = has_simple_structure(&image);
        Ok(Permutation { image, is_simple })
    }

    /// The involution exchanging each given pair; unlisted points are fixed.
    pub fn from_transpositions(n: usize, pairs: &[(usize, usize)]) -> Result<Self, SetError> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for &(a, b) in pairs {
            for x in [a, b] {
                if x >= n {
                    return Err(SetError::ElementOutOfRange { element: x, n });
                }
            }
            if a == b || used[a] || used[b] {
                return Err(SetError::NotABijection);
            }
            used[a] = true;
            used[b] = true;
            image.swap(a, b);
        }
        Permutation::from_image(image)
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn at(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn is_simple(&self) -> bool {
        self.is_simple
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { image: inv, is_simple: self.is_simple }
    }

    /// `{ π(x) : x ∈ s }`.
    pub fn apply(&self, s: &Subset) -> Result<Subset, SetError> {
        self.check_size(s)?;
        let mut out = Subset::empty(s.ground_size());
        for x in s {
            out.insert(self.image[x]);
        }
        Ok(out)
    }

    /// True iff `π(s) ∩ s = ∅`.
    pub fn inverts(&self, s: &Subset) -> Result<bool, SetError> {
        self.check_size(s)?;
        Ok(s.iter().all(|x| !s.contains(self.image[x])))
    }

    fn check_size(&self, s: &Subset) -> Result<(), SetError> {
        if s.ground_size() != self.image.len() {
            return Err(SetError::SizeMismatch { expected: self.image.len(), found: s.ground_size() });
        }
        Ok(())
    }

    /// Parses the one-line permutation format: `n` integers, position `j`
    /// holding `π(j)`.
    pub fn parse(text: &str) -> Result<Self, SetError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (lineno, line) = lines.next().ok_or(SetError::MissingHeader)?;
        if let Some((extra, _)) = lines.next() {
            return Err(SetError::Parse { line: extra + 1, message: "expected a single line".into() });
        }
        let image = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| SetError::Parse {
                    line: lineno + 1,
                    message: format!("not a non-negative integer: {t:?}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::from_image(image)
    }
}

fn has_simple_structure(image: &[usize]) -> bool {
    let n = image.len();
    let mut fixed = 0;
    for (x, &y) in image.iter().enumerate() {
        if y == x {
            fixed += 1;
        } else if image[y] != x {
            return false;
        }
    }
    fixed == n % 2
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, y) in self.image.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{y}")?;
        }
        Ok(())
    }
}
