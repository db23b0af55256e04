//! SDD structure: the predicate, the positive-part heuristic `A₊`, the
//! splitting `A = A₊ − A₋`, and the weighted-graph view of SDD matrices.
//!
//! SDD here is the Laplacian-like convention: nonpositive off-diagonals and
//! weak diagonal dominance. Such a matrix is a graph Laplacian with
//! nonnegative edge weights plus a nonnegative per-vertex excess on the
//! diagonal, which is exactly what [`SddGraph`] stores.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::scalar::Real;

/// Relative tolerance on `A·1 = 0` required by [`split`].
pub const ROW_SUM_TOL: f64 = 1e-10;

/// Unordered vertex pair stored as `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    /// Normalizes the pair so that the smaller index comes first.
    pub fn new(i: usize, j: usize) -> Self {
        if i <= j {
            Edge(i, j)
        } else {
            Edge(j, i)
        }
    }
}

/// SDD matrix in edge-weight form.
#[derive(Debug, Clone, PartialEq)]
pub struct SddGraph<T> {
    order: usize,
    edges: BTreeMap<Edge, T>,
    excess: Vec<T>,
}

impl<T: Real> SddGraph<T> {
    /// Graph on `order` vertices with no edges and zero excess.
    pub fn new(order: usize) -> Self {
        Self {
            order,
            edges: BTreeMap::new(),
            excess: vec![T::zero(); order],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Reads an SDD matrix back into edge-weight form. Off-diagonals above
    /// `tol · ‖A‖_max` or diagonal deficits beyond that are rejected; smaller
    /// violations are clamped to zero.
    pub fn from_sdd_matrix(a: &SymMatrix<T>, tol: T) -> Result<Self> {
        let n = a.order();
        let slack = tol * a.norm_max();
        let mut g = Self::new(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let x = a.get(i, j);
                if x > slack {
                    return Err(Error::NegativeWeight {
                        what: format!("edge ({i}, {j})"),
                        weight: (-x).to_f64().unwrap_or(f64::NAN),
                    });
                }
                if x < T::zero() {
                    g.edges.insert(Edge(i, j), -x);
                }
            }
        }
        for (i, s) in a.row_sums().into_iter().enumerate() {
            if s < -slack {
                return Err(Error::NegativeWeight {
                    what: format!("excess of vertex {i}"),
                    weight: s.to_f64().unwrap_or(f64::NAN),
                });
            }
            // Clamped edges contribute their (tiny) positive value to the row sum.
            let clamped: T = (0..n)
                .filter(|&j| j != i && a.get(i, j) > T::zero())
                .map(|j| a.get(i, j))
                .sum();
            let e = s - clamped;
            g.excess[i] = if e > slack { e } else { T::zero() };
        }
        Ok(g)
    }

    fn check_vertex(&self, i: usize) -> Result<()> {
        if i >= self.order {
            return Err(Error::IndexOutOfRange {
                index: i,
                order: self.order,
            });
        }
        Ok(())
    }

    fn check_weight(what: impl FnOnce() -> String, w: T) -> Result<()> {
        if !w.is_finite() || w < T::zero() {
            return Err(Error::NegativeWeight {
                what: what(),
                weight: w.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }

    /// Sets the weight of edge `(i, j)`. A zero weight removes the edge.
    pub fn set_edge(&mut self, i: usize, j: usize, w: T) -> Result<()> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(Error::InvalidPath {
                edge_i: i,
                edge_j: j,
                reason: "self loop".into(),
            });
        }
        Self::check_weight(|| format!("edge ({i}, {j})"), w)?;
        if w == T::zero() {
            self.edges.remove(&Edge::new(i, j));
        } else {
            self.edges.insert(Edge::new(i, j), w);
        }
        Ok(())
    }

    /// Builder form of [`SddGraph::set_edge`].
    pub fn with_edge(mut self, i: usize, j: usize, w: T) -> Result<Self> {
        self.set_edge(i, j, w)?;
        Ok(self)
    }

    pub fn set_excess(&mut self, i: usize, w: T) -> Result<()> {
        self.check_vertex(i)?;
        Self::check_weight(|| format!("excess of vertex {i}"), w)?;
        self.excess[i] = w;
        Ok(())
    }

    /// Weight of `(i, j)`, zero when absent.
    pub fn weight(&self, i: usize, j: usize) -> T {
        self.edges
            .get(&Edge::new(i, j))
            .copied()
            .unwrap_or_else(T::zero)
    }

    pub fn excess(&self) -> &[T] {
        &self.excess
    }

    /// Positive-weight edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Edge, T)> + '_ {
        self.edges.iter().map(|(&e, &w)| (e, w))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Off-diagonal `(i, j) = −b_ij`, diagonal `(i, i) = Σ_j b_ij + excess_i`.
    pub fn materialize(&self) -> SymMatrix<T> {
        let n = self.order;
        let mut data = vec![T::zero(); n * n];
        for (&Edge(i, j), &w) in &self.edges {
            data[i * n + j] = -w;
            data[j * n + i] = -w;
        }
        for i in 0..n {
            let off: T = (0..n).filter(|&j| j != i).map(|j| -data[i * n + j]).sum();
            data[i * n + i] = off + self.excess[i];
        }
        SymMatrix::from_row_major(n, data, T::zero())
            .expect("materialized SDD graph is finite and symmetric")
    }

    /// Connected-component label per vertex, labels in first-seen order.
    pub fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.order).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &Edge(i, j) in self.edges.keys() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
        let mut label = vec![usize::MAX; self.order];
        let mut next = 0;
        (0..self.order)
            .map(|v| {
                let r = find(&mut parent, v);
                if label[r] == usize::MAX {
                    label[r] = next;
                    next += 1;
                }
                label[r]
            })
            .collect()
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Dimension of the null space of the materialized matrix: the number of
    /// connected components carrying no positive excess.
    pub fn null_space_dim(&self) -> usize {
        let comps = self.components();
        let count = self.component_count();
        let mut grounded = vec![false; count];
        for (v, &c) in comps.iter().enumerate() {
            if self.excess[v] > T::zero() {
                grounded[c] = true;
            }
        }
        grounded.into_iter().filter(|g| !g).count()
    }
}

/// `‖A‖_inf ≤ c · A_ii` at the stored index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominanceCertificate<T> {
    pub c: T,
    pub index_i: usize,
}

/// Nonpositive off-diagonals (up to `tol`) and diagonal dominance (up to
/// `tol · max(1, |a_ii|)`).
pub fn is_sdd<T: Real>(a: &SymMatrix<T>, tol: T) -> bool {
    let n = a.order();
    (0..n).all(|i| {
        let row = a.row(i);
        let mut off = T::zero();
        for (j, &x) in row.iter().enumerate() {
            if j == i {
                continue;
            }
            if x > tol {
                return false;
            }
            off = off + x.abs();
        }
        row[i] >= off - tol * T::one().max(row[i].abs())
    })
}

/// Keeps the negative off-diagonals of `A` as edges, drops the rest, and
/// leaves zero excess, so the materialized diagonal rebalances every row to
/// sum to zero.
///
/// The construction is total over symmetric matrices; its quality guarantees
/// need `A` SPSD with null space `span(1)`.
pub fn plus_heuristic<T: Real>(a: &SymMatrix<T>) -> SddGraph<T> {
    let n = a.order();
    let mut g = SddGraph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let x = a.get(i, j);
            if x < T::zero() {
                g.edges.insert(Edge(i, j), -x);
            }
        }
    }
    g
}

/// `plus − minus == A`, both SDD.
#[derive(Debug, Clone, PartialEq)]
pub struct Splitting<T> {
    pub plus: SddGraph<T>,
    pub minus: SddGraph<T>,
}

/// Splits a zero-row-sum symmetric matrix into `A₊` (negative off-diagonals)
/// and `A₋ = A₊ − A` (positive off-diagonals, negated).
///
/// Row-sum residuals within [`ROW_SUM_TOL`] are carried as vertex excess,
/// positive residuals on the plus side and negative ones on the minus side,
/// so the reconstruction is exact up to rounding.
pub fn split<T: Real>(a: &SymMatrix<T>) -> Result<Splitting<T>> {
    let n = a.order();
    let limit = T::lit(ROW_SUM_TOL) * a.norm_inf();
    let sums = a.row_sums();
    if let Some((row, &sum)) = sums.iter().enumerate().find(|(_, s)| s.abs() > limit) {
        return Err(Error::NonzeroRowSums {
            row,
            sum: sum.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut plus = plus_heuristic(a);
    let mut minus = SddGraph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let x = a.get(i, j);
            if x > T::zero() {
                minus.edges.insert(Edge(i, j), x);
            }
        }
    }
    for (i, &s) in sums.iter().enumerate() {
        if s > T::zero() {
            plus.excess[i] = s;
        } else if s < T::zero() {
            minus.excess[i] = -s;
        }
    }
    Ok(Splitting { plus, minus })
}

/// Smallest `c` with `‖A‖_inf ≤ c · A_ii`, taken at the largest diagonal
/// entry (lowest index on ties).
pub fn dominance_certificate<T: Real>(a: &SymMatrix<T>) -> Result<DominanceCertificate<T>> {
    let diag = a.diagonal();
    let mut index_i = 0;
    for (i, &d) in diag.iter().enumerate() {
        if d > diag[index_i] {
            index_i = i;
        }
    }
    let max_diagonal = diag[index_i];
    if max_diagonal <= T::zero() {
        return Err(Error::ZeroDiagonal {
            max_diagonal: max_diagonal.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(DominanceCertificate {
        c: a.norm_inf() / max_diagonal,
        index_i,
    })
}
