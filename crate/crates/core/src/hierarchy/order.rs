use super::classes::InventoryModels;
use crate::algebra::{FiniteAlgebra, Term};
use crate::logic::LogicPresentation;
use crate::verdict::{Verdict, Witness};
use crate::{Caps, Matrix, Result};

/// `a ≼ b` iff every `δ(a, b)` of `delta` lies in the filter.
pub fn induced_order(m: &Matrix, delta: &[Term]) -> Result<Vec<Vec<bool>>> {
    let n = m.size();
    let mut rel = vec![vec![true; n]; n];
    for d in delta {
        for (a, row) in rel.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                let v = m.algebra().eval_with(d, &|v| match v {
                    "x" => Some(a),
                    "y" => Some(b),
                    _ => None,
                })?;
                *cell &= m.filter().contains(v);
            }
        }
    }
    Ok(rel)
}

/// The first way `m` breaks the witness, as an offending pair and a reason.
pub fn order_violation(m: &Matrix, delta: &[Term], ineqs: &[(Term, Term)]) -> Result<Option<(usize, usize, String)>> {
    let n = m.size();
    let rel = induced_order(m, delta)?;
    for a in 0..n {
        if !rel[a][a] {
            return Ok(Some((a, a, "not reflexive".into())));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && rel[a][b] && rel[b][a] {
                return Ok(Some((a, b, "not antisymmetric".into())));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if rel[a][b] && rel[b][c] && !rel[a][c] {
                    return Ok(Some((a, c, format!("not transitive through {b}"))));
                }
            }
        }
    }
    for a in 0..n {
        let mut sat = true;
        for (s, t) in ineqs {
            let sa = m.algebra().term_function(s, "x")?[a];
            let ta = m.algebra().term_function(t, "x")?[a];
            sat &= rel[sa][ta];
        }
        if sat != m.filter().contains(a) {
            return Ok(Some((a, a, "filter membership differs from the inequalities".into())));
        }
    }
    Ok(None)
}

/// Checks an order-algebraizability witness on every reduced inventory model.
pub fn verify_order_alg_witness(
    l: &LogicPresentation,
    delta: &[Term],
    ineqs: &[(Term, Term)],
    inventory: &[FiniteAlgebra],
    caps: &Caps,
) -> Result<Verdict> {
    let models = InventoryModels::new(l, inventory, caps)?;
    let bounds = models.bounds(l);
    for (lat, reduced) in models.reduced() {
        for f in reduced {
            let m = Matrix::new(lat.algebra().clone(), f)?;
            if let Some((a, b, reason)) = order_violation(&m, delta, ineqs)? {
                return Ok(Verdict::fails(Witness::OrderPair { matrix: m, a, b, reason }, bounds));
            }
        }
    }
    Ok(Verdict::holds(bounds))
}

/// Re-verifies an order witness failure.
pub fn recheck_order_witness(delta: &[Term], ineqs: &[(Term, Term)], w: &Witness) -> Result<bool> {
    let Witness::OrderPair { matrix, a, b, .. } = w else {
        return Ok(false);
    };
    Ok(order_violation(matrix, delta, ineqs)?.is_some_and(|(x, y, _)| (x, y) == (*a, *b)))
}
