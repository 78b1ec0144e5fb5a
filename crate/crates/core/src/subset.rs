use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A finite set of carrier elements, stored as a bitset.
///
/// Ordered by cardinality first, then lexicographically on the sorted
/// elements, so `{0} < {1} < {0,1}`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Subset {
    words: Vec<u64>,
}

impl Subset {
    pub fn empty() -> Self {
        Subset { words: Vec::new() }
    }

    /// The whole carrier `{0..n-1}`.
    pub fn full(n: usize) -> Self {
        let mut s = Subset::empty();
        for a in 0..n {
            s.insert(a);
        }
        s
    }

    /// The subset of `{0..n-1}` encoded by the low `n` bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        let mut s = Subset { words: vec![mask] };
        s.trim();
        s
    }

    pub fn singleton(a: usize) -> Self {
        let mut s = Subset::empty();
        s.insert(a);
        s
    }

    pub fn insert(&mut self, a: usize) -> bool {
        let (w, b) = (a / 64, a % 64);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        let had = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !had
    }

    pub fn remove(&mut self, a: usize) {
        let (w, b) = (a / 64, a % 64);
        if w < self.words.len() {
            self.words[w] &= !(1 << b);
            self.trim();
        }
    }

    pub fn contains(&self, a: usize) -> bool {
        let (w, b) = (a / 64, a % 64);
        w < self.words.len() && self.words[w] >> b & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        let mut s = Subset {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        };
        s.trim();
        s
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let n = self.words.len().max(other.words.len());
        let words = (0..n)
            .map(|i| self.words.get(i).copied().unwrap_or(0) | other.words.get(i).copied().unwrap_or(0))
            .collect();
        Subset { words }
    }

    /// Complement relative to the carrier `{0..n-1}`.
    pub fn complement(&self, n: usize) -> Subset {
        (0..n).filter(|&a| !self.contains(a)).collect()
    }

    /// Low 64 bits as a mask; meaningful for carriers of size at most 64.
    pub fn mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b)
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn max_element(&self) -> Option<usize> {
        self.iter().last()
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Subset::empty();
        for a in iter {
            s.insert(a);
        }
        s
    }
}

impl<const N: usize> From<[usize; N]> for Subset {
    fn from(elems: [usize; N]) -> Self {
        elems.into_iter().collect()
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(Vec::<usize>::deserialize(deserializer)?.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_by_size_then_lex() {
        let mut v = vec![Subset::from([0, 1]), Subset::from([1]), Subset::empty(), Subset::from([0])];
        v.sort();
        assert_eq!(
            v,
            vec![Subset::empty(), Subset::from([0]), Subset::from([1]), Subset::from([0, 1])]
        );
    }

    #[test]
    fn set_operations() {
        let a = Subset::from([1, 3, 70]);
        let b = Subset::from([3, 70]);
        assert!(b.is_subset(&a));
        assert!(!a.is_subset(&b));
        assert_eq!(a.intersection(&Subset::from([3])), Subset::from([3]));
        assert_eq!(a.complement(4), Subset::from([0, 2]));
        let mut c = a.clone();
        c.remove(70);
        assert_eq!(c, Subset::from([1, 3]));
        assert_eq!(Subset::from_mask(0b1010), Subset::from([1, 3]));
    }
}
