//! Exact reduced-word arithmetic in a finitely generated free group, and
//! finite-prefix access to points of its Gromov boundary.
//!
//! A group element is the unique reduced word over the balanced generating
//! set {e_1, e_1^-1, ..., e_n, e_n^-1}. Letters are stored as nonzero
//! signed integers: `+i` is the generator e_i, `-i` its inverse. Boundary
//! points are restricted to eventually periodic reduced sequences, described
//! by a finite head and a repeating cycle; every statement quantified over a
//! boundary point depends on it only through finite prefixes.

use std::fmt;

use crate::error::{Error, Result};

/// One letter of a reduced word: generator index with sign.
///
/// Encoded as a nonzero `i16`; `letter(i, false) = +i`, `letter(i, true) = -i`
/// with 1-based generator indices.
pub type Letter = i16;

/// An element of the free group as a reduced word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupElement {
    letters: Vec<Letter>,
}

impl GroupElement {
    /// The identity, represented by the empty word.
    pub fn identity() -> Self {
        GroupElement { letters: Vec::new() }
    }

    /// Builds an element from raw letters, freely reducing them.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Result<Self> {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l == 0 {
                return Err(Error::InvalidGroup("letter index 0".into()));
            }
            push_reduced(&mut out, l);
        }
        Ok(GroupElement { letters: out })
    }

    /// A single generator `e_index` (`index` is 1-based) or its inverse.
    pub fn generator(index: u16, inverse: bool) -> Self {
        let l = index as Letter;
        GroupElement {
            letters: vec![if inverse { -l } else { l }],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Word length |g|.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// The reduced product `self * rhs`. Cancellation happens only at the
    /// junction, so |gh| >= ||g| - |h||.
    pub fn multiply(&self, rhs: &GroupElement) -> GroupElement {
        let mut out = self.letters.clone();
        for &l in &rhs.letters {
            push_reduced(&mut out, l);
        }
        GroupElement { letters: out }
    }

    /// The inverse: reversed sequence with flipped signs.
    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    /// Longest common prefix with another element.
    pub fn common_prefix(&self, other: &GroupElement) -> GroupElement {
        let n = self
            .letters
            .iter()
            .zip(&other.letters)
            .take_while(|(a, b)| a == b)
            .count();
        GroupElement {
            letters: self.letters[..n].to_vec(),
        }
    }

    /// Length of the longest common prefix, |g ∧ h|, without allocating.
    pub fn common_prefix_len(&self, other: &GroupElement) -> usize {
        self.letters
            .iter()
            .zip(&other.letters)
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Word distance |g^-1 h| = |g| + |h| - 2|g ∧ h|.
    pub fn distance(&self, other: &GroupElement) -> usize {
        self.len() + other.len() - 2 * self.common_prefix_len(other)
    }

    pub fn is_prefix_of(&self, other: &GroupElement) -> bool {
        other.letters.len() >= self.letters.len()
            && other.letters[..self.letters.len()] == self.letters[..]
    }

    /// Parses the text syntax: generators `e1`, `e2`, ..., inverses `E1`,
    /// `E2`, ..., concatenated by whitespace. The empty string is 1_Γ.
    pub fn parse(text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (inv, rest) = match tok.chars().next() {
                Some('e') => (false, &tok[1..]),
                Some('E') => (true, &tok[1..]),
                _ => return Err(Error::InvalidGroup(format!("bad generator token `{tok}`"))),
            };
            let idx: u16 = rest
                .parse()
                .map_err(|_| Error::InvalidGroup(format!("bad generator token `{tok}`")))?;
            if idx == 0 {
                return Err(Error::InvalidGroup("generator index must be >= 1".into()));
            }
            letters.push(if inv { -(idx as Letter) } else { idx as Letter });
        }
        GroupElement::from_letters(letters)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &l in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if l > 0 {
                write!(f, "e{l}")?;
            } else {
                write!(f, "E{}", -l)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Appends one letter with free reduction at the junction.
#[inline]
pub(crate) fn push_reduced(word: &mut Vec<Letter>, l: Letter) {
    if word.last() == Some(&-l) {
        word.pop();
    } else {
        word.push(l);
    }
}

/// An eventually periodic point of the Gromov boundary: the reduced infinite
/// sequence `head · cycle · cycle · ...`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryPoint {
    head: GroupElement,
    cycle: GroupElement,
}

impl BoundaryPoint {
    /// Validates that the concatenation is reduced at the head/cycle seam and
    /// at the cycle wrap, and that the cycle is nonempty.
    pub fn new(head: GroupElement, cycle: GroupElement) -> Result<Self> {
        if cycle.is_identity() {
            return Err(Error::InvalidGroup("boundary point needs a nonempty cycle".into()));
        }
        let c = cycle.letters();
        if let (Some(&h_last), Some(&c_first)) = (head.letters().last(), c.first()) {
            if h_last == -c_first {
                return Err(Error::InvalidGroup(
                    "head/cycle junction cancels; sequence not reduced".into(),
                ));
            }
        }
        if c[c.len() - 1] == -c[0] {
            return Err(Error::InvalidGroup(
                "cycle wrap cancels; sequence not reduced".into(),
            ));
        }
        Ok(BoundaryPoint { head, cycle })
    }

    /// Parses `{head, cycle}` given as two element strings.
    pub fn parse(head: &str, cycle: &str) -> Result<Self> {
        BoundaryPoint::new(GroupElement::parse(head)?, GroupElement::parse(cycle)?)
    }

    pub fn head(&self) -> &GroupElement {
        &self.head
    }

    pub fn cycle(&self) -> &GroupElement {
        &self.cycle
    }

    /// The m-th letter x_m of the sequence.
    pub fn letter(&self, m: usize) -> Letter {
        let h = self.head.letters();
        if m < h.len() {
            h[m]
        } else {
            let c = self.cycle.letters();
            c[(m - h.len()) % c.len()]
        }
    }

    /// The reduced prefix x_0 ... x_{m-1}.
    pub fn prefix(&self, m: usize) -> GroupElement {
        GroupElement {
            letters: (0..m).map(|j| self.letter(j)).collect(),
        }
    }

    /// Length of the longest common prefix |g ∧ x|.
    pub fn common_prefix_len(&self, g: &GroupElement) -> usize {
        g.letters()
            .iter()
            .enumerate()
            .take_while(|(j, &l)| self.letter(*j) == l)
            .count()
    }

    /// Longest common prefix g ∧ x as a group element.
    pub fn common_prefix(&self, g: &GroupElement) -> GroupElement {
        let n = self.common_prefix_len(g);
        GroupElement {
            letters: g.letters()[..n].to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(text: &str) -> GroupElement {
        GroupElement::parse(text).unwrap()
    }

    #[test]
    fn multiply_cancels_at_junction() {
        assert_eq!(g("e1 e2").multiply(&g("E2 e1")), g("e1 e1"));
        let x = g("e1 e2 E1");
        assert!(x.multiply(&x.inverse()).is_identity());
        assert_eq!(g("e1").multiply(&g("e2")), g("e1 e2"));
    }

    #[test]
    fn inverse_reverses_and_flips() {
        assert_eq!(g("e1 E2").inverse(), g("e2 E1"));
        assert_eq!(GroupElement::identity().inverse(), GroupElement::identity());
        assert_eq!(g("e1").inverse(), g("E1"));
    }

    #[test]
    fn common_prefix_cases() {
        let x = BoundaryPoint::parse("", "e1 e2").unwrap();
        let a = g("e1 e2 E1");
        assert_eq!(x.common_prefix(&a), g("e1 e2"));
        assert_eq!(x.common_prefix_len(&a), 2);
        assert!(x.common_prefix(&GroupElement::identity()).is_identity());
        assert_eq!(x.common_prefix_len(&g("e2 e1")), 0);
    }

    #[test]
    fn boundary_prefix_unrolls_cycle() {
        let x = BoundaryPoint::parse("", "e1 e2").unwrap();
        assert_eq!(x.prefix(3), g("e1 e2 e1"));
        assert_eq!(x.prefix(0), GroupElement::identity());
        let y = BoundaryPoint::parse("E2", "e1 e2").unwrap();
        assert_eq!(y.prefix(2), g("E2 e1"));
    }

    #[test]
    fn boundary_point_rejects_unreduced_seams() {
        assert!(BoundaryPoint::parse("e1", "E1 e2").is_err());
        assert!(BoundaryPoint::parse("", "e1 E1").is_err());
        assert!(BoundaryPoint::parse("", "").is_err());
    }

    #[test]
    fn prefix_monotone_in_m_and_stabilizes() {
        let x = BoundaryPoint::parse("e2", "e1 e2").unwrap();
        let a = g("e2 e1 e1");
        let mut prev = 0;
        for m in 0..12 {
            let p = x.prefix(m);
            let c = a.common_prefix_len(&p);
            assert!(c >= prev);
            prev = c;
        }
        assert_eq!(prev, x.common_prefix_len(&a));
        assert_eq!(prev, 2);
    }
}
