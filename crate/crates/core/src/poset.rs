//! Hasse diagrams of finite sets of semi-conformal pairs.

use std::fmt::Write as _;

use thiserror::Error;

use crate::linalg::{Matrix, Vector};
use crate::scalars::{Field, Tolerance};
use crate::semiconformal::{is_semiconformal, leq, ScPair};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("pair {index} is invalid: {reason}")]
    InvalidPair { index: usize, reason: String },
}

/// Validates raw `(A, B, h)` triples against a common context.
pub fn validate_pairs<F: Field>(
    raw: Vec<(Matrix<F>, Vector<F>, Vector<F>)>,
    tol: Tolerance,
) -> Result<Vec<ScPair<F>>, PosetError> {
    let mut out: Vec<ScPair<F>> = Vec::with_capacity(raw.len());
    for (index, (a, b, h)) in raw.into_iter().enumerate() {
        if let Some(first) = out.first() {
            if first.h().dim() != h.dim() || !first.h().approx_eq(&h, tol) {
                return Err(PosetError::InvalidPair {
                    index,
                    reason: "context h differs from the first pair".into(),
                });
            }
        }
        if !matches!(is_semiconformal(&a, &b, &h, tol), Ok(true)) {
            return Err(PosetError::InvalidPair {
                index,
                reason: "not a semi-conformal pair".into(),
            });
        }
        let p = ScPair::new(a, b, h, tol).map_err(|e| PosetError::InvalidPair {
            index,
            reason: e.to_string(),
        })?;
        out.push(p);
    }
    Ok(out)
}

/// Covering relations of the order restricted to a finite set of pairs.
///
/// Nodes are deduplicated and sorted by `(rank, A, B)` in display form, so the
/// graph does not depend on input order.
#[derive(Debug, Clone, PartialEq)]
pub struct HasseGraph<F> {
    nodes: Vec<ScPair<F>>,
    ranks: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl<F: Field> HasseGraph<F> {
    pub fn build(pairs: &[ScPair<F>], tol: Tolerance) -> Result<Self, PosetError> {
        let mut keyed: Vec<(usize, String, ScPair<F>)> = Vec::new();
        for (index, p) in pairs.iter().enumerate() {
            if let Some((_, _, first)) = keyed.first() {
                if first.same_context(p, tol).is_err() || first.dim() != p.dim() {
                    return Err(PosetError::InvalidPair {
                        index,
                        reason: "context h differs from the first pair".into(),
                    });
                }
            }
            let rank = p.rank(tol).ok_or_else(|| PosetError::InvalidPair {
                index,
                reason: "trace of A is not an integer rank".into(),
            })?;
            if keyed.iter().any(|(_, _, q)| q.approx_eq(p, tol)) {
                continue;
            }
            keyed.push((rank, format!("{} {}", p.a(), p.b()), p.clone()));
        }
        keyed.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
        let ranks: Vec<usize> = keyed.iter().map(|k| k.0).collect();
        let nodes: Vec<ScPair<F>> = keyed.into_iter().map(|k| k.2).collect();

        let n = nodes.len();
        let mut below = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    below[i][j] = leq(&nodes[i], &nodes[j], tol).expect("contexts checked");
                }
            }
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if below[i][j] && !(0..n).any(|k| k != i && k != j && below[i][k] && below[k][j]) {
                    edges.push((i, j));
                }
            }
        }
        Ok(Self { nodes, ranks, edges })
    }

    pub fn nodes(&self) -> &[ScPair<F>] {
        &self.nodes
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `(lower, upper)` index pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, p) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"k={} B={}\"];", self.ranks[i], p.b());
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "  n{a} -> n{b};");
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Gaussian;
    use crate::semiconformal::maximal_chain;

    type G = Gaussian;
    type V = Vector<G>;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn chain_is_a_path() {
        let h = V::from_i64(&[1, 2, 0]);
        let g = HasseGraph::build(&maximal_chain(&h), tol()).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn bottom_and_top_give_one_edge() {
        let h = V::from_i64(&[1, 1]);
        let g = HasseGraph::build(&[ScPair::full(&h), ScPair::zero(&h)], tol()).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn coordinate_lines_give_a_diamond() {
        let h = V::from_i64(&[1, 1]);
        let line = |i: usize| {
            let mut a = Matrix::zeros(2, 2);
            a[(i, i)] = G::one();
            let b = a.mul_vec(&h);
            ScPair::new(a, b, h.clone(), tol()).unwrap()
        };
        let pairs = vec![line(1), ScPair::full(&h), line(0), ScPair::zero(&h)];
        let g = HasseGraph::build(&pairs, tol()).unwrap();
        assert_eq!(g.edges().len(), 4);
        let mut rev = pairs.clone();
        rev.reverse();
        assert_eq!(HasseGraph::build(&rev, tol()).unwrap().to_dot(), g.to_dot());
    }

    #[test]
    fn invalid_pairs_are_reported_by_index() {
        let h = V::from_i64(&[1, 0]);
        let good = ScPair::full(&h);
        let raw = vec![
            (good.a().clone(), good.b().clone(), h.clone()),
            (Matrix::identity(2), V::from_i64(&[0, 0]), h.clone()),
        ];
        assert!(matches!(validate_pairs(raw, tol()), Err(PosetError::InvalidPair { index: 1, .. })));
        let raw = vec![
            (good.a().clone(), good.b().clone(), h.clone()),
            (Matrix::identity(2), V::from_i64(&[1, 1]), V::from_i64(&[1, 1])),
        ];
        assert!(matches!(validate_pairs(raw, tol()), Err(PosetError::InvalidPair { index: 1, .. })));
    }
}
