//! Certificates on approximation quality.
//!
//! Upper bounds come from support numbers `σ(A, B) = min{τ : τB − A ⪰ 0}`,
//! computed numerically or bounded combinatorially by routing every edge of
//! one graph along a path of another. Lower bounds valid for *every* SDD
//! matrix `B` with null space `span(1)` come from a pair of probe vectors:
//!
//! ```text
//! κ(A, B) ≥ (uᵀAu / vᵀAv) · (vᵀBv / uᵀBu)
//!         ≥ (uᵀAu / vᵀAv) · min_{i<j, u_i≠u_j} (v_i − v_j)² / (u_i − u_j)²
//! ```
//!
//! since `xᵀBx = Σ b_ij (x_i − x_j)²` with `b_ij ≥ 0`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::{dot, norm2, Mat, SymMatrix};
use crate::scalar::Real;
use crate::sddcore::{Edge, SddGraph};
use crate::spectra::{
    eigendecompose_with, generalized_spectrum_with, is_psd, nullspace,
    restricted_pencil_eigenvalues, ZeroTol, DEFAULT_PSD_TOL, NULLSPACE_ANGLE_TOL,
};

/// Iteration cap of [`support_number_by_bisection`].
pub const BISECTION_MAX_ITERS: usize = 200;
/// Relative bracket width at which bisection stops.
pub const BISECTION_REL_TOL: f64 = 1e-9;
/// Relative slack between a PSD certificate and the measured pencil.
pub const CERTIFICATE_SLACK: f64 = 1e-8;

/// Routes each edge of `source` along a path of `host`.
#[derive(Debug, Clone)]
pub struct PathEmbedding<T> {
    source: SddGraph<T>,
    host: SddGraph<T>,
    paths: BTreeMap<Edge, Vec<usize>>,
}

impl<T: Real> PathEmbedding<T> {
    /// Validates that every positive source edge has a path, every path runs
    /// between the edge's endpoints over positive host edges, and every
    /// source vertex with excess is matched by host excess.
    pub fn new(
        source: SddGraph<T>,
        host: SddGraph<T>,
        paths: BTreeMap<Edge, Vec<usize>>,
    ) -> Result<Self> {
        if source.order() != host.order() {
            return Err(Error::DimensionMismatch {
                expected: source.order(),
                got: host.order(),
            });
        }
        for (&Edge(i, j), path) in &paths {
            let bad = |reason: &str| Error::InvalidPath {
                edge_i: i,
                edge_j: j,
                reason: reason.to_string(),
            };
            if source.weight(i, j) == T::zero() {
                return Err(bad("not an edge of the source graph"));
            }
            if path.len() < 2 {
                return Err(bad("path needs at least two vertices"));
            }
            let (first, last) = (path[0], path[path.len() - 1]);
            if !((first == i && last == j) || (first == j && last == i)) {
                return Err(bad("path endpoints differ from edge endpoints"));
            }
            for w in path.windows(2) {
                if w[0] >= host.order() || w[1] >= host.order() {
                    return Err(bad("path vertex out of range"));
                }
                if w[0] == w[1] || host.weight(w[0], w[1]) <= T::zero() {
                    return Err(bad(&format!(
                        "step ({}, {}) is not a host edge",
                        w[0], w[1]
                    )));
                }
            }
        }
        for (Edge(i, j), _) in source.edges() {
            if !paths.contains_key(&Edge(i, j)) {
                return Err(Error::MissingPath(i, j));
            }
        }
        for (v, (&s, &h)) in source.excess().iter().zip(host.excess()).enumerate() {
            if s > T::zero() && h <= T::zero() {
                return Err(Error::MissingExcessSupport(v));
            }
        }
        Ok(Self {
            source,
            host,
            paths,
        })
    }

    pub fn source(&self) -> &SddGraph<T> {
        &self.source
    }

    pub fn host(&self) -> &SddGraph<T> {
        &self.host
    }

    pub fn paths(&self) -> &BTreeMap<Edge, Vec<usize>> {
        &self.paths
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportKind {
    Numeric,
    CongestionDilation,
}

/// An upper bound on a support number.
#[derive(Debug, Clone)]
pub struct SupportBound<T> {
    pub value: T,
    pub kind: SupportKind,
    /// `Σ w_source(e) · |path(e)| / w_host(f)` over source edges `e` routed
    /// through host edge `f`.
    pub per_host_edge_load: BTreeMap<Edge, T>,
    /// `excess_source(v) / excess_host(v)`; empty when the source has no
    /// excess.
    pub per_vertex_excess_load: BTreeMap<usize, T>,
}

/// Weighted congestion–dilation bound: each source edge `e` with path `P`
/// satisfies `w_e L_e ⪯ w_e |P| Σ_{f∈P} L_f`, so the maximum accumulated
/// load over host edges upper-bounds `σ(source, host)`.
pub fn congestion_dilation_bound<T: Real>(emb: &PathEmbedding<T>) -> SupportBound<T> {
    let mut per_host_edge_load: BTreeMap<Edge, T> = BTreeMap::new();
    for (&e, path) in &emb.paths {
        let w = emb.source.weight(e.0, e.1);
        let len = T::from_count(path.len() - 1);
        for step in path.windows(2) {
            let f = Edge::new(step[0], step[1]);
            let load = w * len / emb.host.weight(f.0, f.1);
            let slot = per_host_edge_load.entry(f).or_insert_with(T::zero);
            *slot = *slot + load;
        }
    }
    let per_vertex_excess_load: BTreeMap<usize, T> = emb
        .source
        .excess()
        .iter()
        .zip(emb.host.excess())
        .enumerate()
        .filter(|(_, (&s, _))| s > T::zero())
        .map(|(v, (&s, &h))| (v, s / h))
        .collect();
    let value = per_host_edge_load
        .values()
        .chain(per_vertex_excess_load.values())
        .fold(T::zero(), |m, &x| m.max(x));
    SupportBound {
        value,
        kind: SupportKind::CongestionDilation,
        per_host_edge_load,
        per_vertex_excess_load,
    }
}

/// `σ(A, B) = max Λ(A, B)` on the complement of `null(B)`.
pub fn support_number<T: Real>(a: &SymMatrix<T>, b: &SymMatrix<T>) -> Result<T> {
    support_number_with(a, b, ZeroTol::Default)
}

pub fn support_number_with<T: Real>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    zero_tol: ZeroTol<T>,
) -> Result<T> {
    if a.order() != b.order() {
        return Err(Error::DimensionMismatch {
            expected: b.order(),
            got: a.order(),
        });
    }
    let nb = nullspace(b, zero_tol)?;
    let a_scale = eigendecompose_with(a, zero_tol)?;
    let a_norm = a_scale.lambda_max().abs().max(a_scale.lambda_min().abs());
    if nb.dim() > 0 {
        let on_null = a.congruence(&nb.basis);
        let spill = eigendecompose_with(&on_null, zero_tol)?;
        let residual = spill.lambda_max().abs().max(spill.lambda_min().abs());
        if residual > a_scale.zero_tol + T::lit(NULLSPACE_ANGLE_TOL) * a_norm {
            return Err(Error::Unsupported {
                residual: residual.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    if nb.complement_basis.cols() == 0 {
        // B = 0 and A vanishes with it.
        return Ok(T::zero());
    }
    let vals = restricted_pencil_eigenvalues(a, b, &nb.complement_basis)?;
    Ok(*vals.last().unwrap())
}

/// Independent route to `σ(A, B)`: bisection on `is_psd(τB − A)` over the
/// bracket `[0, ‖A‖₂ / λ_min_nonzero(B)]`. Returns the smallest feasible
/// upper end reached.
pub fn support_number_by_bisection<T: Real>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    psd_tol: T,
) -> Result<T> {
    let sb = eigendecompose_with(b, ZeroTol::Default)?;
    let sa = eigendecompose_with(a, ZeroTol::Default)?;
    let a_norm = sa.lambda_max().abs().max(sa.lambda_min().abs());
    let Some(b_min) = sb.lambda_min_nonzero() else {
        return Err(Error::ZeroMatrix {
            zero_tol: sb.zero_tol.to_f64().unwrap_or(f64::NAN),
        });
    };
    let feasible = |tau: T| is_psd(&(&b.scaled(tau) - a), psd_tol);
    let mut lo = T::zero();
    let mut hi = a_norm / b_min;
    if feasible(lo) {
        return Ok(lo);
    }
    if !feasible(hi) {
        return Err(Error::Unsupported { residual: f64::NAN });
    }
    let rel = T::lit(BISECTION_REL_TOL);
    for _ in 0..BISECTION_MAX_ITERS {
        if hi - lo <= rel * hi {
            break;
        }
        let mid = (lo + hi) / T::lit(2.0);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Probe pair for [`sdd_lower_bound`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeVectorPair<T> {
    pub u: Vec<T>,
    pub v: Vec<T>,
}

impl<T: Real> ProbeVectorPair<T> {
    pub fn new(u: Vec<T>, v: Vec<T>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                got: v.len(),
            });
        }
        Ok(Self { u, v })
    }
}

/// Value of the best probe pair and its index in the input list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound<T> {
    pub value: T,
    pub best_index: usize,
}

fn check_null_is_ones<T: Real>(
    a: &SymMatrix<T>,
    zero_tol: ZeroTol<T>,
) -> Result<crate::spectra::NullSpaceInfo<T>> {
    let n = a.order();
    let ns = nullspace(a, zero_tol)?;
    let ones = Mat::from_columns(n, &[vec![T::one() / T::from_count(n).sqrt(); n]]);
    if ns.dim() != 1 {
        return Err(Error::NullSpaceMismatch {
            dim_a: ns.dim(),
            dim_b: 1,
            angle: f64::NAN,
        });
    }
    let angle = crate::spectra::max_principal_angle(&ns.basis, &ones);
    if angle > T::lit(NULLSPACE_ANGLE_TOL) {
        return Err(Error::NullSpaceMismatch {
            dim_a: 1,
            dim_b: 1,
            angle: angle.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(ns)
}

/// `(uᵀAu / vᵀAv) · min (v_i − v_j)² / (u_i − u_j)²` for one pair; vertex
/// pairs with `u_i == u_j` are skipped.
pub fn probe_pair_bound<T: Real>(
    a: &SymMatrix<T>,
    pair: &ProbeVectorPair<T>,
    zero_tol: T,
) -> Result<T> {
    let (u, v) = (&pair.u, &pair.v);
    let n = a.order();
    if u.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: u.len(),
        });
    }
    let uau = a.quad_form(u);
    let vav = a.quad_form(v);
    if uau <= zero_tol * dot(u, u) || !(uau > T::zero()) {
        return Err(Error::DegenerateProbe("uᵀAu vanishes".into()));
    }
    if vav <= zero_tol * dot(v, v) || !(vav > T::zero()) {
        return Err(Error::DegenerateProbe("vᵀAv vanishes".into()));
    }
    let mut ratio: Option<T> = None;
    for i in 0..n {
        for j in (i + 1)..n {
            let du = u[i] - u[j];
            if du == T::zero() {
                continue;
            }
            let dv = v[i] - v[j];
            let r = dv * dv / (du * du);
            ratio = Some(ratio.map_or(r, |m: T| m.min(r)));
        }
    }
    let ratio = ratio.ok_or_else(|| Error::DegenerateProbe("u is constant".into()))?;
    Ok(uau / vav * ratio)
}

/// Lower bound on `κ(A, B)` over every SDD `B` with null space `span(1)`.
pub fn sdd_lower_bound<T: Real>(
    a: &SymMatrix<T>,
    probes: &[ProbeVectorPair<T>],
) -> Result<LowerBound<T>> {
    sdd_lower_bound_with(a, probes, ZeroTol::Default)
}

pub fn sdd_lower_bound_with<T: Real>(
    a: &SymMatrix<T>,
    probes: &[ProbeVectorPair<T>],
    zero_tol: ZeroTol<T>,
) -> Result<LowerBound<T>> {
    let ns = check_null_is_ones(a, zero_tol)?;
    if probes.is_empty() {
        return Err(Error::DegenerateProbe("no probe pairs supplied".into()));
    }
    let n = a.order();
    let ones = vec![T::one() / T::from_count(n).sqrt(); n];
    let mut best = LowerBound {
        value: T::neg_infinity(),
        best_index: 0,
    };
    for (k, pair) in probes.iter().enumerate() {
        if pair.u.len() != n || pair.v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: pair.u.len(),
            });
        }
        for x in [&pair.u, &pair.v] {
            let inner = dot(x, &ones);
            if inner.abs() > T::lit(1e-10) * norm2(x) {
                return Err(Error::ProbeNotOrthogonal {
                    inner: inner.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        let value = probe_pair_bound(a, pair, ns.zero_tol)?;
        if value > best.value {
            best = LowerBound {
                value,
                best_index: k,
            };
        }
    }
    Ok(best)
}

/// Probe pairs built from eigenvectors of `A`: first the (top, bottom
/// nonzero) pair, then every (u, v) with `u` among the three largest and `v`
/// among the three smallest nonzero eigenvectors, deduplicated.
pub fn auto_probes<T: Real>(a: &SymMatrix<T>) -> Result<Vec<ProbeVectorPair<T>>> {
    auto_probes_with(a, ZeroTol::Default)
}

pub fn auto_probes_with<T: Real>(
    a: &SymMatrix<T>,
    zero_tol: ZeroTol<T>,
) -> Result<Vec<ProbeVectorPair<T>>> {
    let ns = check_null_is_ones(a, zero_tol)?;
    let spec = &ns.spectrum;
    let nz = spec.nonzero_indices();
    if nz.len() < 2 {
        return Err(Error::RankTooLow { rank: nz.len() });
    }
    let top: Vec<usize> = nz.iter().rev().take(3).copied().collect();
    let bottom: Vec<usize> = nz.iter().take(3).copied().collect();
    let mut index_pairs = vec![(top[0], bottom[0])];
    for &iu in &top {
        for &iv in &bottom {
            if !index_pairs.contains(&(iu, iv)) {
                index_pairs.push((iu, iv));
            }
        }
    }
    let s = vec![T::one() / T::from_count(a.order()).sqrt(); a.order()];
    let project = |mut x: Vec<T>| {
        let c = dot(&x, &s);
        for (xi, si) in x.iter_mut().zip(&s) {
            *xi = *xi - c * *si;
        }
        x
    };
    Ok(index_pairs
        .into_iter()
        .map(|(iu, iv)| ProbeVectorPair {
            u: project(spec.eigenvector(iu)),
            v: project(spec.eigenvector(iv)),
        })
        .collect())
}

/// `τA − B ⪰ 0` and `τB − A ⪰ 0`, which together give `Λ(A, B) ⊂ [1/τ, τ]`
/// and `κ(A, B) ≤ τ²`.
pub fn two_sided_certificate<T: Real>(a: &SymMatrix<T>, b: &SymMatrix<T>, tau: T) -> Result<bool> {
    two_sided_certificate_with(a, b, tau, ZeroTol::Default)
}

pub fn two_sided_certificate_with<T: Real>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    tau: T,
    zero_tol: ZeroTol<T>,
) -> Result<bool> {
    if !(tau >= T::one()) {
        return Err(Error::ParamOutOfRange(format!(
            "tau must be at least 1, got {tau}"
        )));
    }
    let pencil = generalized_spectrum_with(a, b, zero_tol)?;
    let psd_tol = T::lit(DEFAULT_PSD_TOL);
    let holds = is_psd(&(&a.scaled(tau) - b), psd_tol) && is_psd(&(&b.scaled(tau) - a), psd_tol);
    if holds {
        let slack = T::lit(CERTIFICATE_SLACK);
        if pencil.lambda_max > tau * (T::one() + slack)
            || pencil.lambda_min < (T::one() - slack) / tau
        {
            return Err(Error::CertificateInconsistent {
                tau: tau.to_f64().unwrap_or(f64::NAN),
                lambda_min: pencil.lambda_min.to_f64().unwrap_or(f64::NAN),
                lambda_max: pencil.lambda_max.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(holds)
}

/// A scalar inequality `lhs ≤ rhs` (or `<` when `strict`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarInequality<T> {
    pub lhs: T,
    pub rhs: T,
    pub strict: bool,
}

impl<T: Real> ScalarInequality<T> {
    pub fn holds(&self) -> bool {
        if self.strict {
            self.lhs < self.rhs
        } else {
            self.lhs <= self.rhs
        }
    }
}

/// The two arithmetic facts behind the 4×4 rescue embedding:
/// `1/2M + 1/2M + 1/(3−ε) ≤ 1/(3−4ε)` and
/// `1/2M + 1/2M + 1/(1+2ε) < 1/(1−3ε)`.
pub fn rescue_inequalities<T: Real>(epsilon: T, m: T) -> [ScalarInequality<T>; 2] {
    let n = |x: f64| T::lit(x);
    let paths = n(2.0) / (n(2.0) * m);
    [
        ScalarInequality {
            lhs: paths + T::one() / (n(3.0) - epsilon),
            rhs: T::one() / (n(3.0) - n(4.0) * epsilon),
            strict: false,
        },
        ScalarInequality {
            lhs: paths + T::one() / (T::one() + n(2.0) * epsilon),
            rhs: T::one() / (T::one() - n(3.0) * epsilon),
            strict: true,
        },
    ]
}

/// Embedding of `A₋` into `A₊` for the quadratic near-degenerate triangle:
/// edge (1,2) along 1→4→2 and edge (1,3) along 1→6→3 (one-based).
pub fn example1_embedding<T: Real>(
    aminus: &SymMatrix<T>,
    aplus: &SymMatrix<T>,
) -> Result<PathEmbedding<T>> {
    let tol = T::lit(1e-12);
    let source = SddGraph::from_sdd_matrix(aminus, tol)?;
    let host = SddGraph::from_sdd_matrix(aplus, tol)?;
    let paths = BTreeMap::from([(Edge(0, 1), vec![0, 3, 1]), (Edge(0, 2), vec![0, 5, 2])]);
    PathEmbedding::new(source, host, paths)
}
