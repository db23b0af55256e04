use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use sddapprox::bounds::{
    auto_probes_with, congestion_dilation_bound, example1_embedding, rescue_inequalities,
    sdd_lower_bound_with, support_number_with, two_sided_certificate_with, ProbeVectorPair,
};
use sddapprox::elements::{
    example1, example1_geometry, example2, example2_geometry, example2_probes, example3,
    example3_basis, p1_stiffness, p2_stiffness_midpoint, ElementGeometry, ExampleParams,
};
use sddapprox::sddcore::{dominance_certificate, is_sdd, plus_heuristic};
use sddapprox::spectra::{
    eigendecompose_with, generalized_spectrum_with, kappa_single_with, max_principal_angle,
    nullspace_from_spectrum, DEFAULT_PSD_TOL, NULLSPACE_ANGLE_TOL,
};
use sddapprox::{Edge, Error, Mat, SymMatrix, ZeroTol};

use crate::error::{CliError, CliResult, EXIT_NUMERIC};
use crate::io::{format_real, read_matrix, write_dense, write_file};
use crate::report::{nums, to_json, Check, Measured, Num, Relation};

/// Text written to stdout and the process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: 0 }
    }
}

/// Environment variable holding a global absolute zero-eigenvalue threshold.
pub const ZERO_TOL_ENV: &str = "SDDAPPROX_ZERO_TOL";

/// `--zero-tol` wins over the environment; neither means the default
/// relative threshold.
pub fn resolve_zero_tol(flag: Option<f64>, env: Option<&str>) -> CliResult<ZeroTol<f64>> {
    let value = match (flag, env) {
        (Some(x), _) => x,
        (None, Some(s)) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("{ZERO_TOL_ENV} must be a decimal, got {s:?}")))?,
        (None, None) => return Ok(ZeroTol::Default),
    };
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::ParamOutOfRange(format!(
            "zero tolerance must be positive and finite, got {value}"
        ))
        .into());
    }
    Ok(ZeroTol::Absolute(value))
}

fn emit<T: Serialize>(json: bool, report: &T, text: impl FnOnce() -> String) -> String {
    if json {
        to_json(report)
    } else {
        text()
    }
}

/// Failures that only disable one section of the analysis.
fn recoverable(e: &Error) -> bool {
    !matches!(e, Error::NoConvergence { .. })
}

#[derive(Debug, Serialize)]
pub struct NullspaceSection {
    pub dim: usize,
    pub basis: Vec<Vec<Num>>,
    pub zero_tol: Num,
}

#[derive(Debug, Serialize)]
pub struct PlusSection {
    pub edge_count: usize,
    pub components: usize,
    pub disconnected: bool,
    pub nullspace_dim: usize,
    pub nullspace_inflated: bool,
}

#[derive(Debug, Serialize)]
pub struct PencilSection {
    pub kappa: Option<Num>,
    pub lambda_min: Option<Num>,
    pub lambda_max: Option<Num>,
    pub zero_tol_a: Option<Num>,
    pub zero_tol_b: Option<Num>,
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct LowerBoundSection {
    pub value: Option<Num>,
    pub probe_index: Option<usize>,
    pub probe_count: usize,
    pub u: Option<Vec<Num>>,
    pub v: Option<Vec<Num>>,
    pub zero_tol: Option<Num>,
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct CertificateEntry {
    pub name: String,
    pub parameter: Num,
    pub bound: Option<Num>,
    pub holds: bool,
    pub tol: Num,
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub format: &'static str,
    pub order: usize,
    pub eigenvalues: Measured<Vec<Num>>,
    pub rank: Measured<usize>,
    pub nullspace: NullspaceSection,
    pub kappa_single: Measured<Num>,
    pub is_sdd: Measured<bool>,
    pub plus: PlusSection,
    pub kappa_plus: PencilSection,
    pub lower_bound: LowerBoundSection,
    pub certificates: Vec<CertificateEntry>,
}

fn null_is_ones(basis: &Mat<f64>) -> bool {
    let n = basis.rows();
    basis.cols() == 1
        && max_principal_angle(
            basis,
            &Mat::from_columns(n, &[vec![1.0 / (n as f64).sqrt(); n]]),
        ) <= NULLSPACE_ANGLE_TOL
}

pub fn analyze_matrix(
    a: &SymMatrix<f64>,
    format: &'static str,
    zero_tol: ZeroTol<f64>,
) -> CliResult<AnalysisReport> {
    let n = a.order();
    let spec = eigendecompose_with(a, zero_tol)?;
    let zt = spec.zero_tol;
    let eigenvalues = Measured::new(nums(&spec.eigenvalues), zt);
    let rank = Measured::new(spec.rank(), zt);
    let ns = nullspace_from_spectrum(spec)?;
    let basis = ns.basis.columns().iter().map(|c| nums(c)).collect();
    let kappa_single = Measured::new(Num(kappa_single_with(a, ZeroTol::Absolute(zt))?), zt);
    let sdd_tol = 1e-12 * a.norm_max();
    let is_sdd_flag = Measured::new(is_sdd(a, sdd_tol), sdd_tol);

    let plus = plus_heuristic(a);
    let ap = plus.materialize();
    let plus_section = PlusSection {
        edge_count: plus.edge_count(),
        components: plus.component_count(),
        disconnected: !plus.is_connected(),
        nullspace_dim: plus.null_space_dim(),
        nullspace_inflated: plus.null_space_dim() > ns.dim(),
    };

    let mut certificates = Vec::new();
    let kappa_plus = match generalized_spectrum_with(a, &ap, zero_tol) {
        Ok(r) => {
            if r.kappa.is_finite() {
                let tau = r.kappa.sqrt().ceil().max(1.0);
                let holds = two_sided_certificate_with(a, &ap, tau, zero_tol)?;
                certificates.push(CertificateEntry {
                    name: "two_sided(A, A+)".into(),
                    parameter: Num(tau),
                    bound: Some(Num(tau * tau)),
                    holds,
                    tol: Num(DEFAULT_PSD_TOL),
                });
            }
            PencilSection {
                kappa: Some(Num(r.kappa)),
                lambda_min: Some(Num(r.lambda_min)),
                lambda_max: Some(Num(r.lambda_max)),
                zero_tol_a: Some(Num(r.zero_tol_a)),
                zero_tol_b: Some(Num(r.zero_tol_b)),
                note: None,
            }
        }
        Err(e) if recoverable(&e) => PencilSection {
            kappa: None,
            lambda_min: None,
            lambda_max: None,
            zero_tol_a: None,
            zero_tol_b: None,
            note: Some(e.to_string()),
        },
        Err(e) => return Err(e.into()),
    };

    let empty_bound = |note: String| LowerBoundSection {
        value: None,
        probe_index: None,
        probe_count: 0,
        u: None,
        v: None,
        zero_tol: None,
        note: Some(note),
    };
    let lower_bound = if !null_is_ones(&ns.basis) {
        empty_bound("null space is not span(1)".into())
    } else {
        match auto_probes_with(a, zero_tol)
            .and_then(|p| sdd_lower_bound_with(a, &p, zero_tol).map(|lb| (p, lb)))
        {
            Ok((probes, lb)) => {
                let best = &probes[lb.best_index];
                LowerBoundSection {
                    value: Some(Num(lb.value)),
                    probe_index: Some(lb.best_index),
                    probe_count: probes.len(),
                    u: Some(nums(&best.u)),
                    v: Some(nums(&best.v)),
                    zero_tol: Some(Num(zt)),
                    note: None,
                }
            }
            Err(e) if recoverable(&e) => empty_bound(e.to_string()),
            Err(e) => return Err(e.into()),
        }
    };

    if null_is_ones(&ns.basis) {
        if let (Some(Num(kp)), Ok(cert)) = (kappa_plus.kappa, dominance_certificate(a)) {
            let ks = kappa_single.value.0;
            let slack = 1.0 + 1e-7;
            let sqrt_bound = (n as f64).sqrt() * ks;
            certificates.push(CertificateEntry {
                name: "lemma_sqrt_n".into(),
                parameter: Num((n as f64).sqrt()),
                bound: Some(Num(sqrt_bound)),
                holds: kp <= sqrt_bound * slack,
                tol: Num(1e-7),
            });
            let c_bound = cert.c * ks;
            certificates.push(CertificateEntry {
                name: format!("lemma_dominance(i = {})", cert.index_i + 1),
                parameter: Num(cert.c),
                bound: Some(Num(c_bound)),
                holds: kp <= c_bound * slack,
                tol: Num(1e-7),
            });
        }
    }

    Ok(AnalysisReport {
        format,
        order: n,
        eigenvalues,
        rank,
        nullspace: NullspaceSection {
            dim: ns.dim(),
            basis,
            zero_tol: Num(zt),
        },
        kappa_single,
        is_sdd: is_sdd_flag,
        plus: plus_section,
        kappa_plus,
        lower_bound,
        certificates,
    })
}

fn opt(x: &Option<Num>) -> String {
    x.map_or_else(|| "n/a".to_string(), |v| v.to_string())
}

fn join(xs: &[Num]) -> String {
    xs.iter().map(Num::to_string).collect::<Vec<_>>().join(", ")
}

fn analysis_text(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "order: {} ({})", r.order, r.format);
    let _ = writeln!(s, "eigenvalues: [{}]", join(&r.eigenvalues.value));
    let _ = writeln!(s, "rank: {} (zero tol {})", r.rank.value, r.rank.tol);
    let _ = writeln!(s, "null space dimension: {}", r.nullspace.dim);
    for b in &r.nullspace.basis {
        let _ = writeln!(s, "  basis vector: [{}]", join(b));
    }
    let _ = writeln!(s, "kappa(A): {}", r.kappa_single.value);
    let _ = writeln!(s, "is SDD: {} (tol {})", r.is_sdd.value, r.is_sdd.tol);
    let p = &r.plus;
    let _ = writeln!(
        s,
        "A+: {} edges, {} components{}{}",
        p.edge_count,
        p.components,
        if p.disconnected { ", disconnected" } else { "" },
        if p.nullspace_inflated {
            ", NullSpaceInflated"
        } else {
            ""
        }
    );
    match &r.kappa_plus.note {
        None => {
            let k = &r.kappa_plus;
            let _ = writeln!(
                s,
                "kappa(A, A+): {} (lambda in [{}, {}])",
                opt(&k.kappa),
                opt(&k.lambda_min),
                opt(&k.lambda_max)
            );
        }
        Some(note) => {
            let _ = writeln!(s, "kappa(A, A+): n/a ({note})");
        }
    }
    let lb = &r.lower_bound;
    match (&lb.value, &lb.note) {
        (Some(v), _) => {
            let _ = writeln!(
                s,
                "SDD lower bound: {} (probe {} of {})",
                v,
                lb.probe_index.map_or(0, |i| i + 1),
                lb.probe_count
            );
            if let (Some(u), Some(w)) = (&lb.u, &lb.v) {
                let _ = writeln!(s, "  u: [{}]", join(u));
                let _ = writeln!(s, "  v: [{}]", join(w));
            }
        }
        (None, note) => {
            let _ = writeln!(
                s,
                "SDD lower bound: n/a ({})",
                note.clone().unwrap_or_default()
            );
        }
    }
    for c in &r.certificates {
        let _ = writeln!(
            s,
            "certificate {}: parameter {}, bound {}, {}",
            c.name,
            c.parameter,
            opt(&c.bound),
            if c.holds { "holds" } else { "does not hold" }
        );
    }
    s
}

pub fn analyze(path: &Path, zero_tol: ZeroTol<f64>, json: bool) -> CliResult<Outcome> {
    let (a, format) = read_matrix(path)?;
    let report = analyze_matrix(&a, format.name(), zero_tol)?;
    Ok(Outcome::ok(emit(json, &report, || analysis_text(&report))))
}

#[derive(Debug, Serialize)]
pub struct CompareCertificate {
    pub tau: Num,
    pub holds: bool,
    pub psd_tol: Num,
}

#[derive(Debug, Serialize)]
pub struct CompareReport {
    pub order: usize,
    pub finite_spectrum: Vec<Num>,
    pub lambda_min: Num,
    pub lambda_max: Num,
    pub kappa: Num,
    pub shared_nullspace_dim: usize,
    pub zero_tol_a: Num,
    pub zero_tol_b: Num,
    pub certificate: Option<CompareCertificate>,
}

pub fn compare_matrices(
    a: &SymMatrix<f64>,
    b: &SymMatrix<f64>,
    zero_tol: ZeroTol<f64>,
) -> CliResult<CompareReport> {
    let r = generalized_spectrum_with(a, b, zero_tol)?;
    let certificate = if r.kappa.is_finite() {
        let tau = r.kappa.sqrt().ceil().max(1.0);
        let holds = two_sided_certificate_with(a, b, tau, zero_tol)?;
        Some(CompareCertificate {
            tau: Num(tau),
            holds,
            psd_tol: Num(DEFAULT_PSD_TOL),
        })
    } else {
        None
    };
    Ok(CompareReport {
        order: a.order(),
        finite_spectrum: nums(&r.finite_spectrum),
        lambda_min: Num(r.lambda_min),
        lambda_max: Num(r.lambda_max),
        kappa: Num(r.kappa),
        shared_nullspace_dim: r.shared_nullspace_dim,
        zero_tol_a: Num(r.zero_tol_a),
        zero_tol_b: Num(r.zero_tol_b),
        certificate,
    })
}

fn compare_text(r: &CompareReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "order: {}", r.order);
    let _ = writeln!(s, "shared null space dimension: {}", r.shared_nullspace_dim);
    let _ = writeln!(s, "finite spectrum: [{}]", join(&r.finite_spectrum));
    let _ = writeln!(s, "lambda_min: {}", r.lambda_min);
    let _ = writeln!(s, "lambda_max: {}", r.lambda_max);
    let _ = writeln!(s, "kappa(A, B): {}", r.kappa);
    match &r.certificate {
        Some(c) => {
            let _ = writeln!(
                s,
                "two-sided certificate at tau = {}: {}",
                c.tau,
                if c.holds { "holds" } else { "does not hold" }
            );
        }
        None => {
            let _ = writeln!(s, "two-sided certificate: n/a (unbounded kappa)");
        }
    }
    s
}

pub fn compare(
    path_a: &Path,
    path_b: &Path,
    zero_tol: ZeroTol<f64>,
    json: bool,
) -> CliResult<Outcome> {
    let (a, _) = read_matrix(path_a)?;
    let (b, _) = read_matrix(path_b)?;
    if a.order() != b.order() {
        return Err(Error::DimensionMismatch {
            expected: a.order(),
            got: b.order(),
        }
        .into());
    }
    let report = compare_matrices(&a, &b, zero_tol)?;
    Ok(Outcome::ok(emit(json, &report, || compare_text(&report))))
}

#[derive(Debug, Serialize)]
pub struct ReproduceReport {
    pub example: u8,
    pub epsilon: Num,
    pub m: Option<Num>,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

/// `λmin(X) / max(1, |λmax(X)|)`, the quantity `is_psd` compares against
/// `−tol`.
fn psd_margin(x: &SymMatrix<f64>, zero_tol: ZeroTol<f64>) -> CliResult<f64> {
    let s = eigendecompose_with(x, zero_tol)?;
    Ok(s.lambda_min() / s.lambda_max().abs().max(1.0))
}

/// Largest entrywise relative deviation; zero entries of `reference` are
/// measured against its largest entry.
fn entrywise_defect(got: &SymMatrix<f64>, reference: &SymMatrix<f64>) -> f64 {
    let scale = reference.norm_max();
    got.as_row_major()
        .iter()
        .zip(reference.as_row_major())
        .map(|(&g, &r)| {
            if r == 0.0 {
                g.abs() / scale
            } else {
                (g - r).abs() / r.abs()
            }
        })
        .fold(0.0, f64::max)
}

fn null_residual(a: &SymMatrix<f64>) -> f64 {
    a.row_sums().iter().fold(0.0f64, |m, x| m.max(x.abs())) / a.norm_max()
}

fn reproduce_example1(p: &ExampleParams<f64>, zt: ZeroTol<f64>) -> CliResult<Vec<Check>> {
    let (a, aplus, aminus) = example1(p)?;
    let mut checks = Vec::new();
    let generated = p2_stiffness_midpoint(&example1_geometry(p)?);
    checks.push(Check::new(
        "quadratic midpoint generator matches A entrywise",
        entrywise_defect(&generated, &a),
        Relation::Le,
        0.0,
        1e-10,
    ));
    let reconstruct = (&(&aplus - &aminus) - &a).norm_max() / a.norm_max();
    checks.push(Check::new(
        "A == A+ - A-",
        reconstruct,
        Relation::Eq,
        0.0,
        1e-12,
    ));
    let heuristic = plus_heuristic(&a).materialize();
    checks.push(Check::new(
        "A+ is the positive-part heuristic of A",
        (&heuristic - &aplus).norm_max() / a.norm_max(),
        Relation::Eq,
        0.0,
        1e-12,
    ));
    checks.push(Check::new(
        "A- is PSD (scaled lambda_min)",
        psd_margin(&aminus, zt)?,
        Relation::Ge,
        0.0,
        DEFAULT_PSD_TOL,
    ));
    let r = generalized_spectrum_with(&a, &aplus, zt)?;
    // claimed: Λ(A, A₊) ⊂ [1/2, 1], so κ(A, A₊) ≤ 2.
    checks.push(Check::new(
        "max Lambda(A, A+)",
        r.lambda_max,
        Relation::Le,
        1.0,
        1e-9,
    ));
    checks.push(Check::new(
        "min Lambda(A, A+)",
        r.lambda_min,
        Relation::Ge,
        0.5,
        1e-9,
    ));
    checks.push(Check::new(
        "kappa(A, A+) upper bound",
        r.kappa,
        Relation::Le,
        2.0,
        1e-8,
    ));
    checks.push(Check::new(
        "kappa(A, A+) lower bound",
        r.kappa,
        Relation::Ge,
        1.0,
        0.0,
    ));
    let two_a_minus_plus = &a.scaled(2.0) - &aplus;
    checks.push(Check::new(
        "2A - A+ is PSD (scaled lambda_min)",
        psd_margin(&two_a_minus_plus, zt)?,
        Relation::Ge,
        0.0,
        DEFAULT_PSD_TOL,
    ));
    let emb = example1_embedding(&aminus, &aplus)?;
    let mut usage: BTreeMap<Edge, usize> = BTreeMap::new();
    for path in emb.paths().values() {
        for w in path.windows(2) {
            *usage.entry(Edge::new(w[0], w[1])).or_default() += 1;
        }
    }
    let congestion = usage.values().copied().max().unwrap_or(0);
    checks.push(Check::new(
        "embedding congestion (paths per host edge)",
        congestion as f64,
        Relation::Eq,
        1.0,
        0.0,
    ));
    // claimed: congestion 1 and dilation 1/2, so the embedding bound is 1/2.
    checks.push(Check::new(
        "congestion-dilation bound on sigma(A-, A+)",
        congestion_dilation_bound(&emb).value,
        Relation::Eq,
        0.5,
        1e-12,
    ));
    checks.push(Check::new(
        "numeric sigma(A-, A+)",
        support_number_with(&aminus, &aplus, zt)?,
        Relation::Le,
        0.5,
        1e-9,
    ));
    Ok(checks)
}

fn reproduce_example2(p: &ExampleParams<f64>, zt: ZeroTol<f64>) -> CliResult<Vec<Check>> {
    let e = p.epsilon;
    let a = example2(p)?;
    let mut checks = Vec::new();
    let generated = p1_stiffness(&example2_geometry(p)?);
    checks.push(Check::new(
        "linear generator matches A entrywise",
        entrywise_defect(&generated, &a),
        Relation::Le,
        0.0,
        1e-10,
    ));
    let spec = eigendecompose_with(&a, zt)?;
    checks.push(Check::new(
        "rank(A)",
        spec.rank() as f64,
        Relation::Eq,
        2.0,
        0.0,
    ));
    checks.push(Check::new(
        "A * 1 == 0 (relative)",
        null_residual(&a),
        Relation::Eq,
        0.0,
        1e-12,
    ));
    let (u, v) = example2_probes::<f64>();
    checks.push(Check::new("1^T u", u.iter().sum(), Relation::Eq, 0.0, 0.0));
    checks.push(Check::new("1^T v", v.iter().sum(), Relation::Eq, 0.0, 0.0));
    // claimed: vᵀAv = 2ε, uᵀAu = 4.5/ε.
    checks.push(Check::rel_eq("v^T A v", a.quad_form(&v), 2.0 * e, 1e-12));
    checks.push(Check::rel_eq("u^T A u", a.quad_form(&u), 4.5 / e, 1e-12));
    let bound = 0.25 / (e * e);
    let lb = sdd_lower_bound_with(&a, &[ProbeVectorPair::new(u.clone(), v.clone())?], zt)?;
    // claimed: κ(A, B) ≥ ε⁻²/4 for every SDD B with null space span(1).
    checks.push(Check::rel_eq(
        "SDD lower bound from (u, v)",
        lb.value,
        bound,
        1e-6,
    ));
    let aplus = plus_heuristic(&a).materialize();
    let r = generalized_spectrum_with(&a, &aplus, zt)?;
    checks.push(Check::new(
        "kappa(A, A+) respects the lower bound",
        r.kappa,
        Relation::Ge,
        bound,
        1e-9 * bound,
    ));
    checks.push(Check::new(
        "v^T A+ v / u^T A+ u",
        aplus.quad_form(&v) / aplus.quad_form(&u),
        Relation::Ge,
        1.0 / 9.0,
        1e-12,
    ));
    Ok(checks)
}

fn reproduce_example3(p: &ExampleParams<f64>, zt: ZeroTol<f64>) -> CliResult<Vec<Check>> {
    let (e, m) = (p.epsilon, p.m);
    let (a, b) = example3(p)?;
    let mut checks = Vec::new();
    let spec = eigendecompose_with(&a, zt)?;
    checks.push(Check::new(
        "rank(A)",
        spec.rank() as f64,
        Relation::Eq,
        3.0,
        0.0,
    ));
    checks.push(Check::new(
        "A * 1 == 0 (relative)",
        null_residual(&a),
        Relation::Eq,
        0.0,
        1e-12,
    ));
    let aplus = plus_heuristic(&a).materialize();
    let q = example3_basis::<f64>();
    // claimed: qᵢᵀAqᵢ = (0, 2M, 2M+ε, ε) and qᵢᵀA₊qᵢ = (0, 2M, 2M+1, 1).
    let claimed_a = [0.0, 2.0 * m, 2.0 * m + e, e];
    let claimed_plus = [0.0, 2.0 * m, 2.0 * m + 1.0, 1.0];
    for (name, mat, claimed) in [("A", &a, claimed_a), ("A+", &aplus, claimed_plus)] {
        for (i, (qi, &c)) in q.iter().zip(&claimed).enumerate() {
            let claim = format!("q{}^T {} q{}", i + 1, name, i + 1);
            let got = mat.quad_form(qi);
            checks.push(if c == 0.0 {
                Check::new(claim, got, Relation::Eq, 0.0, 1e-12)
            } else {
                Check::rel_eq(claim, got, c, 1e-10)
            });
        }
    }
    let kappa_a = kappa_single_with(&a, zt)?;
    // claimed: κ(A) ≥ 2M/ε ≥ 8ε⁻².
    checks.push(Check::new(
        "kappa(A) >= 2M/epsilon",
        kappa_a,
        Relation::Ge,
        2.0 * m / e,
        1e-9 * 2.0 * m / e,
    ));
    checks.push(Check::new(
        "kappa(A) >= 8/epsilon^2",
        kappa_a,
        Relation::Ge,
        8.0 / (e * e),
        1e-9 * 8.0 / (e * e),
    ));
    let rp = generalized_spectrum_with(&a, &aplus, zt)?;
    let claimed_plus_bound = (1.0 - (1.0 - e) / (2.0 * m + 1.0)) / e;
    checks.push(Check::new(
        "kappa(A, A+)",
        rp.kappa,
        Relation::Gt,
        claimed_plus_bound,
        0.0,
    ));
    let sdd_tol = 1e-12 * b.norm_max();
    checks.push(Check::new(
        "B is SDD",
        if is_sdd(&b, sdd_tol) { 1.0 } else { 0.0 },
        Relation::Eq,
        1.0,
        0.0,
    ));
    // claimed: 3A − B and 3B − A are PSD, hence κ(A, B) < 9.
    let three_a_minus_b = &a.scaled(3.0) - &b;
    let three_b_minus_a = &b.scaled(3.0) - &a;
    checks.push(Check::new(
        "3A - B is PSD (scaled lambda_min)",
        psd_margin(&three_a_minus_b, zt)?,
        Relation::Ge,
        0.0,
        DEFAULT_PSD_TOL,
    ));
    checks.push(Check::new(
        "3B - A is PSD (scaled lambda_min)",
        psd_margin(&three_b_minus_a, zt)?,
        Relation::Ge,
        0.0,
        DEFAULT_PSD_TOL,
    ));
    let cert = two_sided_certificate_with(&a, &b, 3.0, zt)?;
    checks.push(Check::new(
        "two-sided certificate at tau = 3",
        if cert { 1.0 } else { 0.0 },
        Relation::Eq,
        1.0,
        0.0,
    ));
    let rb = generalized_spectrum_with(&a, &b, zt)?;
    checks.push(Check::new("kappa(A, B)", rb.kappa, Relation::Lt, 9.0, 0.0));
    let [first, second] = rescue_inequalities(e, m);
    checks.push(Check::new(
        "1/2M + 1/2M + 1/(3-eps) vs 1/(3-4eps)",
        first.lhs,
        Relation::Le,
        first.rhs,
        0.0,
    ));
    checks.push(Check::new(
        "1/2M + 1/2M + 1/(1+2eps) vs 1/(1-3eps)",
        second.lhs,
        Relation::Lt,
        second.rhs,
        0.0,
    ));
    Ok(checks)
}

pub fn reproduce_report(
    example: u8,
    epsilon: f64,
    m: Option<f64>,
    zt: ZeroTol<f64>,
) -> CliResult<ReproduceReport> {
    if m.is_some() && example != 3 {
        return Err(CliError::Usage("--M applies only to example 3".into()));
    }
    let (checks, m_used) = match example {
        1 => (reproduce_example1(&ExampleParams::new(epsilon)?, zt)?, None),
        2 => (reproduce_example2(&ExampleParams::new(epsilon)?, zt)?, None),
        3 => {
            let p = match m {
                Some(m) => ExampleParams::with_m(epsilon, m)?,
                None => ExampleParams::new(epsilon)?,
            };
            (reproduce_example3(&p, zt)?, Some(Num(p.m)))
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown example {other}; expected 1, 2 or 3"
            )))
        }
    };
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(ReproduceReport {
        example,
        epsilon: Num(epsilon),
        m: m_used,
        checks,
        all_pass,
    })
}

fn reproduce_text(r: &ReproduceReport) -> String {
    let mut s = format!("example {} (epsilon = {}", r.example, r.epsilon);
    if let Some(m) = r.m {
        let _ = write!(s, ", M = {m}");
    }
    s.push_str(")\n");
    for c in &r.checks {
        s.push_str(&c.line());
        s.push('\n');
    }
    let failed = r.checks.iter().filter(|c| !c.pass).count();
    if failed == 0 {
        let _ = writeln!(s, "all {} checks passed", r.checks.len());
    } else {
        let _ = writeln!(s, "{failed} of {} checks failed", r.checks.len());
    }
    s
}

pub fn reproduce(
    example: u8,
    epsilon: f64,
    m: Option<f64>,
    zt: ZeroTol<f64>,
    json: bool,
) -> CliResult<Outcome> {
    let report = reproduce_report(example, epsilon, m, zt)?;
    let stdout = emit(json, &report, || reproduce_text(&report));
    Ok(Outcome {
        stdout,
        code: if report.all_pass { 0 } else { EXIT_NUMERIC },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    P1,
    P2,
}

pub fn generate(kind: ElementKind, nodes: &[f64], theta: f64) -> CliResult<SymMatrix<f64>> {
    let [x1, y1, x2, y2, x3, y3] = nodes else {
        return Err(CliError::Usage(format!(
            "--nodes needs 6 coordinates, got {}",
            nodes.len()
        )));
    };
    let geom = ElementGeometry::new([[*x1, *y1], [*x2, *y2], [*x3, *y3]], theta)?;
    Ok(match kind {
        ElementKind::P1 => p1_stiffness(&geom),
        ElementKind::P2 => p2_stiffness_midpoint(&geom),
    })
}

pub fn gen(kind: ElementKind, nodes: &[f64], theta: f64, out: &Path) -> CliResult<Outcome> {
    let k = generate(kind, nodes, theta)?;
    write_file(out, &write_dense(&k))?;
    Ok(Outcome::ok(format!(
        "wrote {0}x{0} element matrix to {1} (trace {2})\n",
        k.order(),
        out.display(),
        format_real(k.diagonal().iter().sum())
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_tol_precedence() {
        assert_eq!(resolve_zero_tol(None, None).unwrap(), ZeroTol::Default);
        assert_eq!(
            resolve_zero_tol(None, Some("1e-9")).unwrap(),
            ZeroTol::Absolute(1e-9)
        );
        assert_eq!(
            resolve_zero_tol(Some(1e-6), Some("1e-9")).unwrap(),
            ZeroTol::Absolute(1e-6)
        );
        assert!(matches!(
            resolve_zero_tol(None, Some("abc")),
            Err(CliError::Usage(_))
        ));
        assert_eq!(
            resolve_zero_tol(Some(-1.0), None).unwrap_err().exit_code(),
            1
        );
    }

    #[test]
    fn identity_analysis() {
        let r = analyze_matrix(
            &SymMatrix::identity(3).unwrap(),
            "dense_text",
            ZeroTol::Default,
        )
        .unwrap();
        assert!(r.is_sdd.value);
        assert_eq!(r.kappa_single.value, Num(1.0));
        assert_eq!(r.plus.edge_count, 0);
        assert!(r.plus.nullspace_inflated);
        assert!(r.kappa_plus.kappa.is_none());
        assert!(r.lower_bound.value.is_none());
    }

    #[test]
    fn example2_analysis_bound() {
        let a = example2(&ExampleParams::new(0.01).unwrap()).unwrap();
        let r = analyze_matrix(&a, "dense_text", ZeroTol::Default).unwrap();
        let lb = r.lower_bound.value.unwrap().0;
        assert!((lb - 2500.0).abs() <= 1e-6 * 2500.0, "{lb}");
        assert!(r.kappa_plus.kappa.unwrap().0 >= 2500.0 * (1.0 - 1e-9));
    }

    #[test]
    fn reproduce_one_and_two_pass() {
        for ex in [1, 2] {
            let r = reproduce_report(ex, 0.01, None, ZeroTol::Default).unwrap();
            for c in &r.checks {
                assert!(c.pass, "{}", c.line());
            }
        }
    }

    #[test]
    fn reproduce_rejects_bad_parameters() {
        assert_eq!(
            reproduce_report(1, 0.7, None, ZeroTol::Default)
                .unwrap_err()
                .exit_code(),
            1
        );
        assert_eq!(
            reproduce_report(3, 0.01, Some(10.0), ZeroTol::Default)
                .unwrap_err()
                .exit_code(),
            1
        );
        assert_eq!(
            reproduce_report(2, 0.01, Some(400.0), ZeroTol::Default)
                .unwrap_err()
                .exit_code(),
            1
        );
    }

    #[test]
    fn gen_needs_six_coordinates() {
        assert!(matches!(
            generate(ElementKind::P1, &[0.0, 0.0, 1.0], 1.0),
            Err(CliError::Usage(_))
        ));
        assert_eq!(
            generate(ElementKind::P1, &[0.0, 0.0, 1.0, 1.0, 2.0, 2.0], 1.0)
                .unwrap_err()
                .exit_code(),
            1
        );
    }
}
