use std::fmt;

use crate::algebra::finite::decode_cell;
use crate::algebra::{
    largest_congruence_below, nonindexed_product, product_index, quotient, subalgebra, subuniverses, FiniteAlgebra,
    Partition,
};
use crate::{Caps, Error, Result, Subset};

/// A finite algebra with a designated subset, the filter.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    algebra: FiniteAlgebra,
    filter: Subset,
}

impl Matrix {
    pub fn new(algebra: FiniteAlgebra, filter: Subset) -> Result<Self> {
        if let Some(bad) = filter.iter().find(|&a| a >= algebra.size()) {
            return Err(Error::InvalidAlgebra(format!(
                "filter element {bad} outside carrier of size {}",
                algebra.size()
            )));
        }
        Ok(Matrix { algebra, filter })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn filter(&self) -> &Subset {
        &self.filter
    }

    pub fn size(&self) -> usize {
        self.algebra.size()
    }

    pub fn is_reduced(&self) -> bool {
        leibniz_congruence(self).is_identity()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}, {}⟩", self.algebra.name(), self.filter)
    }
}

/// The largest congruence compatible with the filter.
pub fn leibniz_congruence(m: &Matrix) -> Partition {
    largest_congruence_below(&m.algebra, &Partition::split(m.size(), &m.filter))
}

/// Quotient by the Leibniz congruence, with that congruence.
pub fn reduce(m: &Matrix) -> (Matrix, Partition) {
    let omega = leibniz_congruence(m);
    let alg = quotient(&m.algebra, &omega).expect("Leibniz congruence is a congruence");
    let filter = m.filter.iter().map(|a| omega.block_of(a)).collect();
    let reduced = Matrix {
        algebra: alg.with_name(format!("{}*", m.algebra.name())),
        filter,
    };
    (reduced, omega)
}

/// True when `filter` is a union of blocks of `theta`.
pub fn is_compatible(theta: &Partition, filter: &Subset) -> bool {
    let n = theta.len();
    (0..n).all(|a| (0..n).all(|b| !theta.related(a, b) || filter.contains(a) == filter.contains(b)))
}

/// `⟨B, F ∩ B⟩` for every nonempty subuniverse `B`, re-indexed.
pub fn submatrices(m: &Matrix, caps: &Caps) -> Result<Vec<Matrix>> {
    subuniverses(&m.algebra, caps)?
        .iter()
        .map(|u| {
            let (alg, embed) = subalgebra(&m.algebra, u)?;
            let filter = (0..embed.len()).filter(|&i| m.filter.contains(embed[i])).collect();
            Matrix::new(alg, filter)
        })
        .collect()
}

/// Non-indexed product of matrices with filter `F1 × F2`.
pub fn matrix_product(m1: &Matrix, m2: &Matrix, caps: &Caps) -> Result<Matrix> {
    let alg = nonindexed_product(&m1.algebra, &m2.algebra, caps)?;
    let sizes = [m1.size(), m2.size()];
    let mut filter = Subset::empty();
    for a in m1.filter.iter() {
        for b in m2.filter.iter() {
            filter.insert(product_index(&[a, b], &sizes));
        }
    }
    Matrix::new(alg, filter)
}

/// A carrier bijection `h` (indexed by elements of `m1`) preserving every
/// table and mapping filter onto filter.
pub fn find_isomorphism(m1: &Matrix, m2: &Matrix) -> Result<Option<Vec<usize>>> {
    if m1.algebra.signature() != m2.algebra.signature() {
        return Err(Error::SignatureMismatch(format!(
            "{} vs {}",
            m1.algebra.signature(),
            m2.algebra.signature()
        )));
    }
    if m1.size() != m2.size() || m1.filter.len() != m2.filter.len() {
        return Ok(None);
    }
    let n = m1.size();
    let inv1: Vec<Vec<usize>> = (0..n).map(|a| invariant(m1, a)).collect();
    let inv2: Vec<Vec<usize>> = (0..n).map(|a| invariant(m2, a)).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend(m1, m2, &inv1, &inv2, 0, &mut map, &mut used).then_some(map))
}

/// Isomorphism of the bare algebras.
pub fn find_algebra_isomorphism(a1: &FiniteAlgebra, a2: &FiniteAlgebra) -> Result<Option<Vec<usize>>> {
    find_isomorphism(
        &Matrix::new(a1.clone(), Subset::empty())?,
        &Matrix::new(a2.clone(), Subset::empty())?,
    )
}

/// Cheap isomorphism invariant of an element: filter membership and, per
/// symbol, whether the element is idempotent for it and how often it occurs
/// as an output.
fn invariant(m: &Matrix, a: usize) -> Vec<usize> {
    let alg = &m.algebra;
    let mut out = vec![usize::from(m.filter.contains(a))];
    for (index, (_, arity)) in alg.signature().symbols().enumerate() {
        let diag = vec![a; arity];
        out.push(usize::from(alg.apply_index(index, &diag) == a));
        out.push(alg.table(index).iter().filter(|&&v| v == a).count());
    }
    out
}

fn extend(
    m1: &Matrix,
    m2: &Matrix,
    inv1: &[Vec<usize>],
    inv2: &[Vec<usize>],
    next: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = map.len();
    if next == n {
        return true;
    }
    for b in 0..n {
        if used[b] || inv1[next] != inv2[b] {
            continue;
        }
        map[next] = b;
        used[b] = true;
        if consistent(m1, m2, map, next) && extend(m1, m2, inv1, inv2, next + 1, map, used) {
            return true;
        }
        used[b] = false;
        map[next] = usize::MAX;
    }
    false
}

/// Checks every table cell that involves `last` and whose arguments and
/// output are all mapped.
fn consistent(m1: &Matrix, m2: &Matrix, map: &[usize], last: usize) -> bool {
    let (a1, a2) = (&m1.algebra, &m2.algebra);
    let n = a1.size();
    let mut args = Vec::new();
    let mut image = Vec::new();
    for (index, (_, arity)) in a1.signature().symbols().enumerate() {
        args.resize(arity, 0);
        for cell in 0..a1.table(index).len() {
            decode_cell(cell, n, &mut args);
            let out = a1.table(index)[cell];
            let touches = args.contains(&last) || out == last;
            if !touches || args.iter().any(|&a| a > last) || out > last {
                continue;
            }
            image.clear();
            image.extend(args.iter().map(|&a| map[a]));
            if a2.apply_index(index, &image) != map[out] {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{direct_product, Signature};

    fn boolean(bits: u32) -> FiniteAlgebra {
        let sig = Signature::from_pairs([("and", 2), ("or", 2), ("not", 1)]).unwrap();
        let top = (1usize << bits) - 1;
        FiniteAlgebra::from_fn(format!("B{}", 1 << bits), sig, 1 << bits, |s, a| match s {
            "and" => a[0] & a[1],
            "or" => a[0] | a[1],
            _ => top ^ a[0],
        })
        .unwrap()
    }

    fn m(alg: FiniteAlgebra, f: &[usize]) -> Matrix {
        Matrix::new(alg, f.iter().copied().collect()).unwrap()
    }

    #[test]
    fn b4_leibniz() {
        let f = m(boolean(2), &[3, 1]);
        let omega = leibniz_congruence(&f);
        assert_eq!(omega, Partition::from_blocks(4, &[vec![3, 1], vec![0, 2]]).unwrap());
        assert!(is_compatible(&omega, f.filter()));
        assert!(leibniz_congruence(&m(boolean(2), &[3, 1, 2])).is_identity());
        assert!(leibniz_congruence(&m(boolean(2), &[0, 1, 2, 3])).is_total());
        assert!(leibniz_congruence(&m(boolean(2), &[])).is_total());
    }

    #[test]
    fn reduction() {
        let (r, omega) = reduce(&m(boolean(2), &[3, 1]));
        assert_eq!(r.size(), 2);
        assert_eq!(r.filter().len(), 1);
        assert_eq!(omega.num_blocks(), 2);
        assert!(r.is_reduced());
        let (full, _) = reduce(&m(boolean(2), &[0, 1, 2, 3]));
        assert_eq!(full.size(), 1);
        assert_eq!(full.filter().len(), 1);
        let b2 = m(boolean(1), &[1]);
        let (same, id) = reduce(&b2);
        assert!(id.is_identity());
        assert!(find_isomorphism(&same, &b2).unwrap().is_some());
    }

    #[test]
    fn compatibility() {
        let f: Subset = [1, 2].into();
        assert!(is_compatible(&Partition::identity(4), &f));
        assert!(!is_compatible(&Partition::total(4), &f));
    }

    #[test]
    fn isomorphisms() {
        let b2 = boolean(1);
        let top = m(b2.clone(), &[1]);
        assert_eq!(find_isomorphism(&top, &top).unwrap(), Some(vec![0, 1]));
        assert_eq!(find_isomorphism(&top, &m(b2.clone(), &[0])).unwrap(), None);
        let sq = direct_product(&[b2.clone(), b2], &Caps::default()).unwrap();
        let map = find_algebra_isomorphism(&sq, &boolean(2)).unwrap().unwrap();
        assert!(sq.is_homomorphism(&map, &boolean(2)));
    }

    #[test]
    fn products_of_matrices() {
        let caps = Caps::default();
        let p = matrix_product(&m(boolean(1), &[1]), &m(boolean(1), &[1]), &caps).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(p.filter().to_vec(), vec![3]);
        let mixed = matrix_product(&m(boolean(1), &[1]), &m(boolean(1), &[0]), &caps).unwrap();
        assert!(leibniz_congruence(&mixed).is_identity());
    }

    #[test]
    fn b4_submatrices() {
        let subs = submatrices(&m(boolean(2), &[3, 1]), &Caps::default()).unwrap();
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[0].size(), 2);
        assert_eq!(subs[0].filter().to_vec(), vec![1]);
    }
}
