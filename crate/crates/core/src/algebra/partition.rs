use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result, Subset};

/// An equivalence relation on `{0..n-1}` as a block-id array.
///
/// Always canonical: block ids are numbered by first occurrence, so two
/// partitions are equal exactly when they relate the same pairs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    ids: Vec<usize>,
    blocks: usize,
}

impl Partition {
    pub fn identity(n: usize) -> Self {
        Partition {
            ids: (0..n).collect(),
            blocks: n,
        }
    }

    pub fn total(n: usize) -> Self {
        Partition {
            ids: vec![0; n],
            blocks: usize::from(n > 0),
        }
    }

    /// Canonicalizes an arbitrary labelling: elements with equal labels share a block.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut reps: Vec<&T> = Vec::new();
        let ids = labels
            .iter()
            .map(|l| match reps.iter().position(|r| *r == l) {
                Some(i) => i,
                None => {
                    reps.push(l);
                    reps.len() - 1
                }
            })
            .collect();
        Partition {
            ids,
            blocks: reps.len(),
        }
    }

    /// Canonicalizes a block-id array whose ids are below `ids.len()`.
    pub fn from_ids(ids: &[usize]) -> Self {
        let mut map = vec![usize::MAX; ids.len().max(ids.iter().map(|&i| i + 1).max().unwrap_or(0))];
        let mut next = 0;
        let ids = ids
            .iter()
            .map(|&i| {
                if map[i] == usize::MAX {
                    map[i] = next;
                    next += 1;
                }
                map[i]
            })
            .collect();
        Partition { ids, blocks: next }
    }

    /// Builds a partition of `{0..n-1}` from explicit blocks covering the carrier exactly once.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut ids = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &a in block {
                if a >= n {
                    return Err(Error::InvalidPartition(format!("element {a} outside 0..{n}")));
                }
                if ids[a] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("element {a} in two blocks")));
                }
                ids[a] = b;
            }
        }
        if let Some(a) = ids.iter().position(|&i| i == usize::MAX) {
            return Err(Error::InvalidPartition(format!("element {a} not covered")));
        }
        Ok(Partition::from_ids(&ids))
    }

    /// The two-block split `{F, A∖F}`, or the total partition when one side is empty.
    pub fn split(n: usize, filter: &Subset) -> Self {
        let labels: Vec<bool> = (0..n).map(|a| filter.contains(a)).collect();
        Partition::from_labels(&labels)
    }

    /// Carrier size.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks
    }

    pub fn block_of(&self, a: usize) -> usize {
        self.ids[a]
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.ids[a] == self.ids[b]
    }

    /// Blocks in id order, each sorted ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (a, &b) in self.ids.iter().enumerate() {
            out[b].push(a);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.blocks == self.ids.len()
    }

    pub fn is_total(&self) -> bool {
        self.blocks <= 1
    }

    /// True when `self ⊆ other` as relations.
    pub fn refines(&self, other: &Partition) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut image = vec![usize::MAX; self.blocks];
        self.ids.iter().zip(&other.ids).all(|(&s, &o)| {
            if image[s] == usize::MAX {
                image[s] = o;
                true
            } else {
                image[s] == o
            }
        })
    }

    /// Intersection of the two relations.
    pub fn meet(&self, other: &Partition) -> Partition {
        let pairs: Vec<(usize, usize)> = self.ids.iter().copied().zip(other.ids.iter().copied()).collect();
        Partition::from_labels(&pairs)
    }

    /// Transitive closure of the union of the two relations.
    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        for part in [self, other] {
            let mut first = vec![usize::MAX; part.blocks];
            for a in 0..n {
                let b = part.ids[a];
                if first[b] == usize::MAX {
                    first[b] = a;
                } else {
                    let (x, y) = (find(&mut parent, first[b]), find(&mut parent, a));
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|a| find(&mut parent, a)).collect();
        Partition::from_ids(&roots)
    }

    /// True when every block has the same size.
    pub fn is_uniform(&self) -> bool {
        let mut sizes = vec![0usize; self.blocks];
        for &b in &self.ids {
            sizes[b] += 1;
        }
        sizes.windows(2).all(|w| w[0] == w[1])
    }

    /// Every partition of `{0..n-1}`, in restricted-growth-string order.
    pub fn all(n: usize) -> AllPartitions {
        AllPartitions {
            rgs: vec![0; n],
            done: false,
        }
    }
}

/// Iterator over restricted growth strings of a fixed length.
pub struct AllPartitions {
    rgs: Vec<usize>,
    done: bool,
}

impl Iterator for AllPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition::from_ids(&self.rgs);
        // advance: rgs[i] may go up to 1 + max(rgs[..i])
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            let bound = self.rgs[..i].iter().max().map_or(0, |m| m + 1);
            if self.rgs[i] < bound {
                self.rgs[i] += 1;
                for r in &mut self.rgs[i + 1..] {
                    *r = 0;
                }
                break;
            }
        }
        Some(out)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks: Vec<Vec<usize>> = Vec::deserialize(d)?;
        let n = blocks.iter().map(Vec::len).sum();
        Partition::from_blocks(n, &blocks).map_err(serde::de::Error::custom)
    }
}
