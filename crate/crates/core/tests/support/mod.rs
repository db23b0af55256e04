//! Random instances and brute-force oracles shared by the integration suites.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sddapprox::{SddGraph, SymMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Modified Gram–Schmidt of `cands` against `fixed` and each other; vectors
/// that collapse below `1e-8` are dropped.
pub fn gram_schmidt(fixed: &[Vec<f64>], cands: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = fixed.to_vec();
    let mut out = Vec::new();
    for c in cands {
        let mut v = c.clone();
        for _ in 0..2 {
            for q in &basis {
                let h = dot(q, &v);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= h * y);
            }
        }
        let nv = dot(&v, &v).sqrt();
        if nv > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nv);
            basis.push(v.clone());
            out.push(v);
        }
    }
    out
}

pub fn gaussian_vec(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()
}

pub fn ones_unit(n: usize) -> Vec<f64> {
    vec![1.0 / (n as f64).sqrt(); n]
}

pub fn random_orthonormal(
    r: &mut ChaCha8Rng,
    fixed: &[Vec<f64>],
    n: usize,
    k: usize,
) -> Vec<Vec<f64>> {
    loop {
        let cands: Vec<_> = (0..k).map(|_| gaussian_vec(r, n)).collect();
        let q = gram_schmidt(fixed, &cands);
        if q.len() == k {
            return q;
        }
    }
}

/// `Σ_ij P_i C_ij P_jᵀ` for columns `p` and an `m×m` core `c`.
pub fn assemble(n: usize, p: &[Vec<f64>], c: &[Vec<f64>]) -> SymMatrix<f64> {
    SymMatrix::from_fn(n, |i, j| {
        let mut s = 0.0;
        for (a, pa) in p.iter().enumerate() {
            for (b, pb) in p.iter().enumerate() {
                s += pa[i] * c[a][b] * pb[j];
            }
        }
        s
    })
    .unwrap()
}

/// `GGᵀ + shift·I` with `G` uniform in `[-1, 1]`.
pub fn random_pd_core(r: &mut ChaCha8Rng, m: usize, shift: f64) -> Vec<Vec<f64>> {
    let g: Vec<Vec<f64>> = (0..m).map(|_| gaussian_vec(r, m)).collect();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| dot(&g[i], &g[j]) + if i == j { shift } else { 0.0 })
                .collect()
        })
        .collect()
}

/// Random pencil of order `n` sharing a null space of dimension `k`; returns
/// `(A, B, null basis)`.
pub fn random_pencil(
    r: &mut ChaCha8Rng,
    n: usize,
    k: usize,
) -> (SymMatrix<f64>, SymMatrix<f64>, Vec<Vec<f64>>) {
    let null = random_orthonormal(r, &[], n, k);
    let comp = random_orthonormal(r, &null, n, n - k);
    let ca = random_pd_core(r, n - k, 0.5);
    let cb = random_pd_core(r, n - k, 0.5);
    (assemble(n, &comp, &ca), assemble(n, &comp, &cb), null)
}

/// `MMᵀ` with `M` an `n×(n−1)` random matrix whose columns are projected off
/// the constant vector.
pub fn lemma_matrix(r: &mut ChaCha8Rng, n: usize) -> SymMatrix<f64> {
    let one = ones_unit(n);
    let cols: Vec<Vec<f64>> = (0..n - 1)
        .map(|_| {
            let mut c = gaussian_vec(r, n);
            let h = dot(&c, &one);
            c.iter_mut().zip(&one).for_each(|(x, y)| *x -= h * y);
            c
        })
        .collect();
    SymMatrix::from_fn(n, |i, j| cols.iter().map(|c| c[i] * c[j]).sum()).unwrap()
}

/// [`lemma_matrix`] redrawn until its condition number is at most `cap`.
pub fn conditioned_lemma_matrix(r: &mut ChaCha8Rng, n: usize, cap: f64) -> SymMatrix<f64> {
    loop {
        let a = lemma_matrix(r, n);
        if sddapprox::spectra::kappa_single(&a).unwrap() <= cap {
            return a;
        }
    }
}

/// Connected weighted graph: a random spanning tree plus `extra` random
/// edges, weights log-uniform in `[10^lo, 10^hi]`.
pub fn random_connected_graph(
    r: &mut ChaCha8Rng,
    n: usize,
    extra: usize,
    lo: f64,
    hi: f64,
) -> SddGraph<f64> {
    let mut g = SddGraph::new(n);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = r.gen_range(0..=i);
        order.swap(i, j);
    }
    for k in 1..n {
        let parent = order[r.gen_range(0..k)];
        let w = 10f64.powf(r.gen_range(lo..hi));
        g.set_edge(order[k], parent, w).unwrap();
    }
    for _ in 0..extra {
        let i = r.gen_range(0..n);
        let j = r.gen_range(0..n);
        if i != j {
            let w = 10f64.powf(r.gen_range(lo..hi));
            g.set_edge(i, j, g.weight(i, j) + w).unwrap();
        }
    }
    g
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Leibniz determinant.
pub fn det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    permutations(n)
        .into_iter()
        .map(|p| {
            let mut inversions = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if p[i] > p[j] {
                        inversions += 1;
                    }
                }
            }
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            sign * (0..n).map(|i| m[i][p[i]]).product::<f64>()
        })
        .sum()
}

/// Coefficients `c_k` (ascending powers) of `det(A − λB)` by column-subset
/// expansion.
pub fn pencil_char_poly(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<f64> {
    let m = a.len();
    let mut coeff = vec![0.0; m + 1];
    for mask in 0u32..(1 << m) {
        let mixed: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if mask & (1 << j) != 0 {
                            b[i][j]
                        } else {
                            a[i][j]
                        }
                    })
                    .collect()
            })
            .collect();
        let k = mask.count_ones() as usize;
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        coeff[k] += sign * det(&mixed);
    }
    coeff
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &ck)| k as f64 * ck)
        .collect()
}

fn bisect(c: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = horner(c, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = horner(c, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Real roots of a real-rooted polynomial inside `[lo, hi]`, found by
/// bracketing between the (interlacing) roots of its derivative.
pub fn real_roots(c: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let deg = c.len() - 1;
    if deg == 0 {
        return vec![];
    }
    if deg == 1 {
        return vec![-c[0] / c[1]];
    }
    let mut knots = vec![lo];
    knots.extend(
        real_roots(&derivative(c), lo, hi)
            .into_iter()
            .filter(|&x| x > lo && x < hi),
    );
    knots.push(hi);
    let mut roots = Vec::new();
    for w in knots.windows(2) {
        let (fa, fb) = (horner(c, w[0]), horner(c, w[1]));
        if fa == 0.0 {
            roots.push(w[0]);
        } else if (fa < 0.0) != (fb < 0.0) {
            roots.push(bisect(c, w[0], w[1]));
        }
    }
    if horner(c, hi) == 0.0 {
        roots.push(hi);
    }
    roots
}

/// Finite generalized eigenvalues of `(A, B)` restricted to the complement
/// of `null`, computed from the characteristic polynomial.
pub fn brute_force_pencil(a: &SymMatrix<f64>, b: &SymMatrix<f64>, null: &[Vec<f64>]) -> Vec<f64> {
    let n = a.order();
    let std: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let q = gram_schmidt(null, &std);
    assert_eq!(q.len(), n - null.len());
    let restrict = |s: &SymMatrix<f64>| -> Vec<Vec<f64>> {
        q.iter()
            .map(|qi| q.iter().map(|qj| s.quad_form_pair(qi, qj)).collect())
            .collect()
    };
    let (ra, rb) = (restrict(a), restrict(b));
    let coeff = pencil_char_poly(&ra, &rb);
    // λ ≤ tr A / λmin(B) and λmin(B) ≥ det B / (tr B)^(m−1).
    let m = ra.len();
    let tr_a: f64 = (0..m).map(|i| ra[i][i]).sum();
    let tr_b: f64 = (0..m).map(|i| rb[i][i]).sum();
    let upper = 1.01 * tr_a * tr_b.powi(m as i32 - 1) / det(&rb) + 1.0;
    let mut roots = real_roots(&coeff, 0.0, upper);
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

pub trait QuadPair {
    fn quad_form_pair(&self, x: &[f64], y: &[f64]) -> f64;
}

impl QuadPair for SymMatrix<f64> {
    fn quad_form_pair(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.mul_vec(y))
    }
}

pub fn rel_err(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
}
