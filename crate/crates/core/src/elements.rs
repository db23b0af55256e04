//! Element matrices: linear (P1) and quadratic (P2) triangle stiffness
//! generators, and closed-form constructors for the three reference
//! families (the quadratic near-degenerate triangle, the isosceles sliver and
//! the 4×4 heuristic-failure matrix).

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::scalar::Real;

/// Triangle nodes and an isotropic scalar material constant.
///
/// Nodes are kept in counterclockwise order starting from the first node
/// given: a clockwise input has its second and third nodes swapped. Both
/// stiffness generators number their vertex degrees of freedom in this
/// stored order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementGeometry<T> {
    nodes: [[T; 2]; 3],
    theta: T,
}

impl<T: Real> ElementGeometry<T> {
    pub fn new(nodes: [[T; 2]; 3], theta: T) -> Result<Self> {
        if !(theta > T::zero()) || !theta.is_finite() {
            return Err(Error::ParamOutOfRange(format!(
                "theta must be positive, got {theta}"
            )));
        }
        if nodes.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::ParamOutOfRange(
                "node coordinates must be finite".into(),
            ));
        }
        let mut g = Self { nodes, theta };
        let twice_area = g.twice_signed_area();
        let scale = nodes
            .iter()
            .flatten()
            .fold(T::zero(), |m, x| m.max(x.abs()));
        if twice_area.abs() <= T::lit(1e-14) * scale * scale {
            return Err(Error::DegenerateTriangle {
                twice_area: twice_area.to_f64().unwrap_or(f64::NAN),
            });
        }
        if twice_area < T::zero() {
            g.nodes.swap(1, 2);
        }
        Ok(g)
    }

    /// Geometry with `theta = 1`.
    pub fn unit(nodes: [[T; 2]; 3]) -> Result<Self> {
        Self::new(nodes, T::one())
    }

    pub fn nodes(&self) -> [[T; 2]; 3] {
        self.nodes
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    fn twice_signed_area(&self) -> T {
        let [[x1, y1], [x2, y2], [x3, y3]] = self.nodes;
        (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
    }

    pub fn area(&self) -> T {
        self.twice_signed_area().abs() / T::lit(2.0)
    }

    /// Constant gradients of the three barycentric coordinates.
    pub fn barycentric_gradients(&self) -> [[T; 2]; 3] {
        let [[x1, y1], [x2, y2], [x3, y3]] = self.nodes;
        let d = self.twice_signed_area();
        [
            [(y2 - y3) / d, (x3 - x2) / d],
            [(y3 - y1) / d, (x1 - x3) / d],
            [(y1 - y2) / d, (x2 - x1) / d],
        ]
    }
}

/// Parameters of the reference families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleParams<T> {
    pub epsilon: T,
    /// Coupling weight of the 4×4 family; at least `4/ε`.
    pub m: T,
}

impl<T: Real> ExampleParams<T> {
    /// `epsilon ∈ (0, 0.5)` with the default `M = 4/ε`.
    pub fn new(epsilon: T) -> Result<Self> {
        Self::check_epsilon(epsilon)?;
        Ok(Self {
            epsilon,
            m: T::lit(4.0) / epsilon,
        })
    }

    pub fn with_m(epsilon: T, m: T) -> Result<Self> {
        Self::check_epsilon(epsilon)?;
        let floor = T::lit(4.0) / epsilon;
        if !m.is_finite() || m < floor * (T::one() - T::lit(1e-12)) {
            return Err(Error::ParamOutOfRange(format!(
                "M must be at least 4/epsilon = {floor}, got {m}"
            )));
        }
        Ok(Self { epsilon, m })
    }

    fn check_epsilon(epsilon: T) -> Result<()> {
        if !(epsilon > T::zero() && epsilon < T::lit(0.5)) {
            return Err(Error::ParamOutOfRange(format!(
                "epsilon must lie in (0, 0.5), got {epsilon}"
            )));
        }
        Ok(())
    }
}

fn dot2<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    a[0] * b[0] + a[1] * b[1]
}

/// Linear-triangle stiffness `θ · area · ∇λ_i · ∇λ_j`.
pub fn p1_stiffness<T: Real>(geom: &ElementGeometry<T>) -> SymMatrix<T> {
    let g = geom.barycentric_gradients();
    let scale = geom.theta * geom.area();
    SymMatrix::from_fn(3, |i, j| scale * dot2(g[i], g[j])).expect("finite stiffness")
}

/// Midpoint index pairs of the quadratic element, in degree-of-freedom order
/// 4, 5, 6 (zero-based vertex indices).
pub const P2_MIDPOINTS: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

/// Gradients of the six quadratic basis functions at barycentric point `l`.
fn p2_gradients<T: Real>(g: &[[T; 2]; 3], l: [T; 3]) -> [[T; 2]; 6] {
    let four = T::lit(4.0);
    let mut out = [[T::zero(); 2]; 6];
    for i in 0..3 {
        let f = four * l[i] - T::one();
        out[i] = [f * g[i][0], f * g[i][1]];
    }
    for (k, &(i, j)) in P2_MIDPOINTS.iter().enumerate() {
        out[3 + k] = [
            four * (l[i] * g[j][0] + l[j] * g[i][0]),
            four * (l[i] * g[j][1] + l[j] * g[i][1]),
        ];
    }
    out
}

/// Quadratic-triangle stiffness integrated with the three-point edge-midpoint
/// rule (weights `area/3`). Degrees of freedom: the three vertices in the
/// counterclockwise order stored by [`ElementGeometry`], then the midpoints
/// listed in [`P2_MIDPOINTS`].
pub fn p2_stiffness_midpoint<T: Real>(geom: &ElementGeometry<T>) -> SymMatrix<T> {
    let g = geom.barycentric_gradients();
    let half = T::lit(0.5);
    let weight = geom.theta * geom.area() / T::lit(3.0);
    let points = P2_MIDPOINTS.map(|(i, j)| {
        let mut l = [T::zero(); 3];
        l[i] = half;
        l[j] = half;
        l
    });
    let grads: Vec<[[T; 2]; 6]> = points.iter().map(|&l| p2_gradients(&g, l)).collect();
    SymMatrix::from_fn(6, |a, b| {
        grads.iter().map(|gq| weight * dot2(gq[a], gq[b])).sum()
    })
    .expect("finite stiffness")
}

fn scaled_rows<T: Real, const N: usize>(scale: T, rows: [[T; N]; N]) -> SymMatrix<T> {
    let rows: Vec<Vec<T>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| scale * x).collect())
        .collect();
    SymMatrix::from_rows_with_tol(&rows, T::zero()).expect("closed forms are symmetric")
}

/// Closed forms of the quadratic near-degenerate triangle: `(A, A₊, A₋)`,
/// each scaled by `1/(6ε)`.
pub fn example1<T: Real>(
    p: &ExampleParams<T>,
) -> Result<(SymMatrix<T>, SymMatrix<T>, SymMatrix<T>)> {
    ExampleParams::<T>::check_epsilon(p.epsilon)?;
    let e = p.epsilon;
    let e2 = e * e;
    let z = T::zero();
    let one = T::one();
    let n = |x: f64| T::lit(x);
    let s = one / (n(6.0) * e);
    let a = scaled_rows(
        s,
        [
            [n(3.0) * (one + e2), e2, one, -n(4.0) * e2, z, -n(4.0)],
            [e2, n(3.0) * e2, z, -n(4.0) * e2, z, z],
            [one, z, n(3.0), z, z, -n(4.0)],
            [
                -n(4.0) * e2,
                -n(4.0) * e2,
                z,
                n(8.0) * (one + e2),
                -n(8.0),
                z,
            ],
            [z, z, z, -n(8.0), n(8.0) * (one + e2), -n(8.0) * e2],
            [-n(4.0), z, -n(4.0), z, -n(8.0) * e2, n(8.0) * (one + e2)],
        ],
    );
    let aplus = scaled_rows(
        s,
        [
            [n(4.0) * (one + e2), z, z, -n(4.0) * e2, z, -n(4.0)],
            [z, n(4.0) * e2, z, -n(4.0) * e2, z, z],
            [z, z, n(4.0), z, z, -n(4.0)],
            [
                -n(4.0) * e2,
                -n(4.0) * e2,
                z,
                n(8.0) * (one + e2),
                -n(8.0),
                z,
            ],
            [z, z, z, -n(8.0), n(8.0) * (one + e2), -n(8.0) * e2],
            [-n(4.0), z, -n(4.0), z, -n(8.0) * e2, n(8.0) * (one + e2)],
        ],
    );
    let aminus = scaled_rows(
        s,
        [
            [one + e2, -e2, -one, z, z, z],
            [-e2, e2, z, z, z, z],
            [-one, z, one, z, z, z],
            [z; 6],
            [z; 6],
            [z; 6],
        ],
    );
    Ok((a, aplus, aminus))
}

/// Geometry `(0,0), (0,ε), (1,0)`, `θ = 1`, whose P2 midpoint-rule stiffness
/// is the first closed form. The input is clockwise, so the stored vertex
/// order is `(0,0), (1,0), (0,ε)`.
pub fn example1_geometry<T: Real>(p: &ExampleParams<T>) -> Result<ElementGeometry<T>> {
    let z = T::zero();
    ElementGeometry::unit([[z, z], [z, p.epsilon], [T::one(), z]])
}

/// Closed form of the isosceles sliver, scaled by `1/(2ε)`.
pub fn example2<T: Real>(p: &ExampleParams<T>) -> Result<SymMatrix<T>> {
    ExampleParams::<T>::check_epsilon(p.epsilon)?;
    let e2 = p.epsilon * p.epsilon;
    let q = T::lit(0.25);
    let h = T::lit(0.5);
    Ok(scaled_rows(
        T::one() / (T::lit(2.0) * p.epsilon),
        [
            [q + e2, q - e2, -h],
            [q - e2, q + e2, -h],
            [-h, -h, T::one()],
        ],
    ))
}

/// Geometry `(0,0), (1,0), (1/2,ε)`, `θ = 1`.
pub fn example2_geometry<T: Real>(p: &ExampleParams<T>) -> Result<ElementGeometry<T>> {
    let z = T::zero();
    ElementGeometry::unit([[z, z], [T::one(), z], [T::lit(0.5), p.epsilon]])
}

/// Probe pair `(u, v) = ((1, 1, −2), (1, −1, 0))` for the sliver.
pub fn example2_probes<T: Real>() -> (Vec<T>, Vec<T>) {
    let n = |x: f64| T::lit(x);
    (vec![n(1.0), n(1.0), n(-2.0)], vec![n(1.0), n(-1.0), n(0.0)])
}

/// The 4×4 heuristic-failure matrix `A` and its good SDD approximation `B`.
pub fn example3<T: Real>(p: &ExampleParams<T>) -> Result<(SymMatrix<T>, SymMatrix<T>)> {
    let p = ExampleParams::with_m(p.epsilon, p.m)?;
    let (e, m) = (p.epsilon, p.m);
    let one = T::one();
    let z = T::zero();
    let laplacian = scaled_rows(
        one,
        [
            [one + m, -one, z, -m],
            [-one, one + m, -m, z],
            [z, -m, m, z],
            [-m, z, z, m],
        ],
    );
    let c = one - e;
    let correction = scaled_rows(one, [[z; 4], [z; 4], [z, z, c, -c], [z, z, -c, c]]);
    let a = &laplacian - &correction;
    let b = scaled_rows(
        one,
        [
            [e + m, -e, z, -m],
            [-e, e + m, -m, z],
            [z, -m, e + m, -e],
            [-m, z, -e, e + m],
        ],
    );
    Ok((a, b))
}

/// Orthonormal basis `q₁..q₄` of the 4×4 family, `q₁ ∥ 1`.
pub fn example3_basis<T: Real>() -> [Vec<T>; 4] {
    let h = T::lit(0.5);
    [
        vec![h, h, h, h],
        vec![h, h, -h, -h],
        vec![h, -h, h, -h],
        vec![h, -h, -h, h],
    ]
}
