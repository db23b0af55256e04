//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::process::{Command, ExitCode};

use rand::Rng;
use sddapprox::bounds::{
    congestion_dilation_bound, example1_embedding, rescue_inequalities, sdd_lower_bound,
    support_number, two_sided_certificate, ProbeVectorPair,
};
use sddapprox::elements::{
    example1, example1_geometry, example2, example2_geometry, example2_probes, example3,
    example3_basis, p1_stiffness, p2_stiffness_midpoint, ExampleParams,
};
use sddapprox::sddcore::{dominance_certificate, plus_heuristic};
use sddapprox::spectra::{generalized_spectrum, kappa_single, max_principal_angle, nullspace};
use sddapprox::{Mat, SymMatrix, ZeroTol};
use sddapprox_cli::io::{parse_matrix, write_coordinate, write_dense};
use support::*;

type Verdict = (bool, String);

struct Tally {
    ok: bool,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            ok: true,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, note: impl Into<String>) {
        if !ok {
            self.ok = false;
            self.notes.push(note.into());
        }
    }

    fn finish(self, summary: String) -> Verdict {
        if self.ok {
            (true, summary)
        } else {
            (
                false,
                format!("{summary}; failed: {}", self.notes.join("; ")),
            )
        }
    }
}

fn entrywise_rel(got: &SymMatrix<f64>, want: &SymMatrix<f64>) -> f64 {
    let scale = want.norm_max();
    got.as_row_major()
        .iter()
        .zip(want.as_row_major())
        .map(|(&g, &w)| {
            if w == 0.0 {
                g.abs() / scale
            } else {
                (g - w).abs() / w.abs()
            }
        })
        .fold(0.0, f64::max)
}

fn family1_upper_bound() -> Verdict {
    let mut t = Tally::new();
    let mut worst = 0.0f64;
    for eps in [0.1f64, 0.01, 0.001] {
        let (a, ap, _) = example1(&ExampleParams::new(eps).unwrap()).unwrap();
        let r = generalized_spectrum(&a, &ap).unwrap();
        worst = worst.max(r.kappa);
        t.check(
            r.kappa <= 2.0 + 1e-8 && r.kappa >= 1.0,
            format!("eps {eps}: kappa {}", r.kappa),
        );
        t.check(
            r.lambda_max <= 1.0 + 1e-9,
            format!("eps {eps}: max Lambda {}", r.lambda_max),
        );
        t.check(
            r.lambda_min >= 0.5 - 1e-9,
            format!("eps {eps}: min Lambda {}", r.lambda_min),
        );
    }
    t.finish(format!(
        "max kappa(A, A+) over eps in {{0.1, 0.01, 0.001}} = {worst}"
    ))
}

fn family1_embedding() -> Verdict {
    let mut t = Tally::new();
    let mut detail = String::new();
    for eps in [0.1f64, 0.01, 0.001] {
        let (_, ap, am) = example1(&ExampleParams::new(eps).unwrap()).unwrap();
        let bound = congestion_dilation_bound(&example1_embedding(&am, &ap).unwrap()).value;
        let sigma = support_number(&am, &ap).unwrap();
        t.check(
            (bound - 0.5).abs() <= 1e-12,
            format!("eps {eps}: embedding bound {bound}"),
        );
        t.check(sigma <= 0.5 + 1e-9, format!("eps {eps}: sigma {sigma}"));
        if eps == 0.01 {
            detail = format!("embedding bound {bound}, numeric sigma {sigma} at eps 0.01");
        }
    }
    t.finish(detail)
}

fn generator_fidelity() -> Verdict {
    let mut t = Tally::new();
    let mut worst = 0.0f64;
    for eps in [0.1f64, 0.01] {
        let p = ExampleParams::new(eps).unwrap();
        let (a, _, _) = example1(&p).unwrap();
        let d2 = entrywise_rel(&p2_stiffness_midpoint(&example1_geometry(&p).unwrap()), &a);
        let d1 = entrywise_rel(
            &p1_stiffness(&example2_geometry(&p).unwrap()),
            &example2(&p).unwrap(),
        );
        worst = worst.max(d1).max(d2);
        t.check(d2 <= 1e-10, format!("quadratic eps {eps}: {d2}"));
        t.check(d1 <= 1e-10, format!("linear eps {eps}: {d1}"));
    }
    t.finish(format!("largest entrywise relative deviation {worst:e}"))
}

fn family2_inapproximability() -> Verdict {
    let mut t = Tally::new();
    let eps = 0.01;
    let a = example2(&ExampleParams::new(eps).unwrap()).unwrap();
    let (u, v) = example2_probes::<f64>();
    let target = 0.25 / (eps * eps);
    let lb = sdd_lower_bound(&a, &[ProbeVectorPair::new(u.clone(), v.clone()).unwrap()])
        .unwrap()
        .value;
    t.check(rel_err(lb, target) <= 1e-6, format!("lower bound {lb}"));
    t.check(
        rel_err(a.quad_form(&v), 2.0 * eps) <= 1e-12,
        format!("vAv {}", a.quad_form(&v)),
    );
    t.check(
        rel_err(a.quad_form(&u), 4.5 / eps) <= 1e-12,
        format!("uAu {}", a.quad_form(&u)),
    );
    let mut r = rng(2500);
    let mut min_kappa = f64::INFINITY;
    for _ in 0..1000 {
        let mut w: Vec<f64> = (0..3).map(|_| 10f64.powf(r.gen_range(-4.0..4.0))).collect();
        if r.gen_bool(0.3) {
            w[r.gen_range(0..3)] = 0.0;
        }
        let b = SymMatrix::from_rows(&[
            [w[0] + w[1], -w[0], -w[1]],
            [-w[0], w[0] + w[2], -w[2]],
            [-w[1], -w[2], w[1] + w[2]],
        ])
        .unwrap();
        let kappa = generalized_spectrum(&a, &b).unwrap().kappa;
        min_kappa = min_kappa.min(kappa);
    }
    t.check(
        min_kappa >= target * (1.0 - 1e-9),
        format!("min kappa over random B {min_kappa}"),
    );
    t.finish(format!(
        "lower bound {lb}, min kappa(A, B) over 1000 random SDD B = {min_kappa}"
    ))
}

fn lemma_suite() -> Verdict {
    let mut t = Tally::new();
    let mut r = rng(200);
    let (mut accepted, mut worst_sqrt, mut worst_c) = (0, 0.0f64, 0.0f64);
    while accepted < 200 {
        let n = r.gen_range(3..=12);
        let a = lemma_matrix(&mut r, n);
        let plus = plus_heuristic(&a);
        if !plus.is_connected() {
            continue;
        }
        accepted += 1;
        let ap = plus.materialize();
        let ns = nullspace(&ap, ZeroTol::Default).unwrap();
        let ones = Mat::from_columns(n, &[ones_unit(n)]);
        t.check(
            ns.dim() == 1 && max_principal_angle(&ns.basis, &ones) <= 1e-8,
            format!("n {n}: null(A+) dim {}", ns.dim()),
        );
        t.check(
            rel_err(ap.norm_inf(), a.norm_inf()) <= 1e-11,
            format!("n {n}: inf norms {} vs {}", ap.norm_inf(), a.norm_inf()),
        );
        let kp = generalized_spectrum(&a, &ap).unwrap().kappa;
        let ka = kappa_single(&a).unwrap();
        let c = dominance_certificate(&a).unwrap().c;
        worst_sqrt = worst_sqrt.max(kp / ((n as f64).sqrt() * ka));
        worst_c = worst_c.max(kp / (c * ka));
        t.check(
            kp <= (n as f64).sqrt() * ka * (1.0 + 1e-7),
            format!("n {n}: sqrt(n) bound"),
        );
        t.check(kp <= c * ka * (1.0 + 1e-7), format!("n {n}: c bound"));
    }
    t.finish(format!(
        "200 matrices; max kappa(A, A+)/(sqrt(n) kappa(A)) = {worst_sqrt:.4}, max kappa(A, A+)/(c kappa(A)) = {worst_c:.4}"
    ))
}

fn family3_failure_and_rescue() -> Verdict {
    let mut t = Tally::new();
    let (eps, m) = (0.01, 400.0);
    let (a, b) = example3(&ExampleParams::with_m(eps, m).unwrap()).unwrap();
    let ap = plus_heuristic(&a).materialize();
    let q = example3_basis::<f64>();
    let want_a = [0.0, 800.0, 800.01, 0.01];
    let want_p = [0.0, 800.0, 801.0, 1.0];
    for (name, mat, want) in [("A", &a, want_a), ("A+", &ap, want_p)] {
        for (i, (qi, &w)) in q.iter().zip(&want).enumerate() {
            let got = mat.quad_form(qi);
            let ok = if w == 0.0 {
                got.abs() <= 1e-12
            } else {
                rel_err(got, w) <= 1e-10
            };
            t.check(ok, format!("q{}^T {name} q{} = {got}", i + 1, i + 1));
        }
    }
    let ka = kappa_single(&a).unwrap();
    t.check(ka >= 80000.0, format!("kappa(A) {ka}"));
    let kp = generalized_spectrum(&a, &ap).unwrap().kappa;
    t.check(
        kp > (1.0 - 0.99 / 801.0) * 100.0,
        format!("kappa(A, A+) {kp}"),
    );
    let cert = two_sided_certificate(&a, &b, 3.0).unwrap();
    t.check(
        cert,
        "two_sided_certificate(A, B, 3) is false: 3A - B has a negative eigenvalue",
    );
    let rb = generalized_spectrum(&a, &b).unwrap();
    t.check(rb.kappa < 9.0, format!("kappa(A, B) {}", rb.kappa));
    for (k, ineq) in rescue_inequalities(eps, m).iter().enumerate() {
        t.check(
            ineq.holds(),
            format!("inequality {}: {} vs {}", k + 1, ineq.lhs, ineq.rhs),
        );
    }
    t.finish(format!(
        "kappa(A) {ka:.1}, kappa(A, A+) {kp:.3}, kappa(A, B) {:.4}, Lambda(A, B) in [{:.4}, {:.4}], certificate {cert}",
        rb.kappa, rb.lambda_min, rb.lambda_max
    ))
}

fn oracle_equivalence() -> Verdict {
    let mut t = Tally::new();
    let mut r = rng(100);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let n = r.gen_range(2..=4);
        let k = r.gen_range(0..n);
        let (a, b, null) = random_pencil(&mut r, n, k);
        let got = generalized_spectrum(&a, &b).unwrap().finite_spectrum;
        let want = brute_force_pencil(&a, &b, &null);
        if got.len() != want.len() {
            t.check(
                false,
                format!("trial {trial}: {} vs {} eigenvalues", got.len(), want.len()),
            );
            continue;
        }
        for (x, y) in got.iter().zip(&want) {
            worst = worst.max(rel_err(*x, *y));
        }
    }
    t.check(worst <= 1e-8, format!("relative error {worst:e}"));
    t.finish(format!(
        "100 pencils, largest relative deviation from characteristic-polynomial roots {worst:e}"
    ))
}

fn cli_contract() -> Verdict {
    let mut t = Tally::new();
    let bin = env!("CARGO_BIN_EXE_sddapprox");
    let run = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .env_remove("SDDAPPROX_ZERO_TOL")
            .output()
            .unwrap()
    };
    for ex in ["1", "2", "3"] {
        let o = run(&["reproduce", ex]);
        let text = String::from_utf8_lossy(&o.stdout).to_string();
        let fails: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
        t.check(
            o.status.code() == Some(0) && fails.is_empty(),
            format!(
                "reproduce {ex} exit {:?}: {}",
                o.status.code(),
                fails.join(" | ")
            ),
        );
    }
    let mut r = rng(17);
    let mut exact = true;
    for _ in 0..200 {
        let n = r.gen_range(1..=6);
        let m = SymMatrix::from_fn(n, |_, _| {
            let mant: f64 = r.gen_range(-1.0..1.0);
            mant * 10f64.powi(r.gen_range(-300..300))
        })
        .unwrap();
        let (dense, _) = parse_matrix(&write_dense(&m), "dense").unwrap();
        let (coord, _) = parse_matrix(&write_coordinate(&m), "coord").unwrap();
        let bits = |s: &SymMatrix<f64>| {
            s.as_row_major()
                .iter()
                .map(|x| x.to_bits())
                .collect::<Vec<_>>()
        };
        exact &= bits(&dense) == bits(&m) && bits(&coord) == bits(&m);
    }
    t.check(exact, "file round-trip not bit-exact");
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("a.txt");
    std::fs::write(
        &f,
        write_dense(&example2(&ExampleParams::new(0.01).unwrap()).unwrap()),
    )
    .unwrap();
    let fs = f.to_str().unwrap();
    let same = run(&["analyze", fs, "--json"]).stdout == run(&["analyze", fs, "--json"]).stdout
        && run(&["reproduce", "1", "--json"]).stdout == run(&["reproduce", "1", "--json"]).stdout;
    t.check(same, "JSON output differs between runs");
    t.finish("reproduce exit codes, 200 bit-exact round trips, repeated JSON runs".into())
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("family-1 upper bound", family1_upper_bound),
        ("family-1 embedding", family1_embedding),
        ("generator fidelity", generator_fidelity),
        ("family-2 inapproximability", family2_inapproximability),
        ("positive-part lemma suite", lemma_suite),
        ("family-3 failure and rescue", family3_failure_and_rescue),
        ("oracle equivalence", oracle_equivalence),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = f();
        if !ok {
            failed += 1;
        }
        println!(
            "{} [{}] {name}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            k + 1
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
