//! One line per acceptance criterion; exits nonzero if any fails.

use std::time::{Duration, Instant};

use darboux_lab::cli::{figure_panels, verify, Case, FigureId, RunConfig, VerifyReport};
use darboux_lab::darboux::{complex_potential, pt_symmetry_check};
use darboux_lab::oracle::eig::matched_distance;
use darboux_lab::oracle::{build_fd_walls, charpoly_roots, eig_dense, eig_tridiagonal, SpectrumReport, Tridiagonal};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = darboux_lab::Result<(bool, String)>;

fn panel(id: FigureId, tag: &str) -> Case {
    let p = figure_panels(id).into_iter().find(|p| p.tag == tag).expect("panel");
    Case::build(RunConfig::resolve(&p.settings).expect("config")).expect("case")
}

/// Predicted values, matched errors and absolute imaginary parts.
fn spectrum_ok(report: &SpectrumReport, expected: &[f64], tol: f64) -> (bool, String) {
    let mut pred = report.predicted.clone();
    pred.sort_by(f64::total_cmp);
    let same = pred.len() == expected.len() && pred.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-12);
    let err = report.levels.iter().map(|l| l.abs_error).fold(0.0, f64::max);
    let imag = report.levels.iter().map(|l| l.computed.im.abs()).fold(0.0, f64::max);
    let pass = same && report.pass && err <= tol && imag <= 1e-6;
    let got: Vec<String> = report.levels.iter().map(|l| format!("{:.5}", l.computed.re)).collect();
    (pass, format!("[{}] max|dE| {err:.1e} max|Im E| {imag:.1e}", got.join(", ")))
}

fn check(report: &VerifyReport, name: &str) -> f64 {
    report.checks.iter().find(|c| c.name == name).map(|c| c.value).unwrap_or(f64::INFINITY)
}

struct Cases {
    reports: Vec<(&'static str, VerifyReport)>,
    elapsed_case1: Duration,
}

fn verify_cases() -> Cases {
    let mut reports = Vec::new();
    let mut elapsed_case1 = Duration::ZERO;
    for (name, id, tag) in [
        ("case 1", FigureId::Fig3, "N2"),
        ("case 2", FigureId::Fig3, "N4"),
        ("case 3", FigureId::Fig7, "r3"),
        ("case 4", FigureId::Fig9, "r3"),
    ] {
        let start = Instant::now();
        let case = panel(id, tag);
        let report = verify(&case).expect("verify");
        if name == "case 1" {
            elapsed_case1 = start.elapsed();
        }
        reports.push((name, report));
    }
    Cases { reports, elapsed_case1 }
}

fn c1(cases: &Cases) -> Outcome {
    let r = &cases.reports[0].1;
    let (ok, detail) = spectrum_ok(r.spectrum.as_ref().unwrap(), &[0.0, 2.65, 6.45, 8.25], 1e-2);
    let secs = cases.elapsed_case1.as_secs_f64();
    Ok((ok && secs <= 120.0, format!("{detail}, n = {}, {secs:.1} s", r.fd_points)))
}

fn c2(cases: &Cases) -> Outcome {
    let r = &cases.reports[1].1;
    Ok(spectrum_ok(r.spectrum.as_ref().unwrap(), &[0.0, 4.65, 12.45, 18.25, 22.05, 23.85], 1e-2))
}

fn c3(cases: &Cases) -> Outcome {
    let (ok, detail) = spectrum_ok(cases.reports[2].1.spectrum.as_ref().unwrap(), &[0.25, 9.0, 16.0, 25.0], 2e-2);
    let case = panel(FigureId::Fig7, "r3");
    let grid = case.grid(2001)?;
    let asym = pt_symmetry_check(&complex_potential(&case.alpha, &grid)?)?;
    Ok((ok && grid.is_symmetric() && asym <= 1e-10, format!("{detail}, PT asymmetry {asym:.1e}")))
}

fn c4(cases: &Cases) -> Outcome {
    let r = cases.reports[3].1.spectrum.as_ref().unwrap();
    let (ok, detail) = spectrum_ok(r, &[8.075, 9.0, 16.0, 25.0], 2e-2);
    // the close pair must land on distinct eigenvalues
    let near: Vec<Complex64> = r.levels.iter().filter(|l| l.predicted < 10.0).map(|l| l.computed).collect();
    let split = near.len() == 2 && (near[0] - near[1]).norm() > 0.9;
    Ok((ok && split, format!("{detail}, (8.075, 9) resolved: {split}")))
}

fn c5() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (tag, singular) in
        [("a_eps4.55", false), ("b_eps4.55_lambda0", true), ("c_eps6.45", false), ("d_eps6.45_lambda0", true)]
    {
        let case = panel(FigureId::Fig12, tag);
        let grid = case.grid(4001)?;
        if singular {
            let zeros = case.singularities(&grid)?;
            pass &= zeros.len() == 2;
            parts.push(format!("{tag}: {} zeros", zeros.len()));
        } else {
            let (_, margin) = case.alpha.min_q_margin(&grid)?;
            pass &= margin > 0.0;
            parts.push(format!("{tag}: min Q margin {margin:.2e}"));
        }
    }
    Ok((pass, parts.join("; ")))
}

fn c6() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (tag, gm) in [("gm1.35", 1.35), ("gm0.74", 0.7402)] {
        let case = panel(FigureId::Fig11, tag);
        let grid = case.grid(2001)?;
        let table = case.potential(&grid)?;
        let real = table.im_v.iter().all(|v| *v == 0.0);
        let regular = table.singularities.is_empty();
        let gamma_ok = (case.coeffs.gamma_m() - gm).abs() < 5e-3;
        let (ok, detail) = spectrum_ok(&case.spectrum(case.config.npoints)?, &[5.26, 9.0, 16.0, 25.0], 2e-2);
        pass &= real && regular && gamma_ok && ok;
        parts.push(format!("gamma_M {:.4}: real {real}, regular {regular}, {detail}", case.coeffs.gamma_m()));
    }
    Ok((pass, parts.join("; ")))
}

fn c7(cases: &Cases) -> Outcome {
    let limits = [
        ("identity_4ac_b2", 1e-12),
        ("wronskian_constancy", 1e-8),
        ("ermakov_residual", 1e-7),
        ("riccati_residual", 1e-7),
        ("invariant_j_scan", 1e-8),
        ("zero_total_area", 1e-6),
    ];
    let mut pass = true;
    let mut worst = Vec::new();
    for (name, limit) in limits {
        let w = cases.reports.iter().map(|(_, r)| check(r, name)).fold(0.0, f64::max);
        pass &= w <= limit;
        worst.push(format!("{name} {w:.1e}"));
    }
    Ok((pass, worst.join(", ")))
}

fn c8(cases: &Cases) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    // at least one checked state must have two Re zeros, so the check is
    // not vacuous everywhere
    let mut nontrivial = 0;
    for (name, r) in &cases.reports {
        let res = r.states.iter().map(|s| s.residual).fold(0.0, f64::max);
        let orth = check(r, "biorthogonality");
        pass &= r.states.iter().any(|s| s.label == "psi_eps") && res <= 1e-5 && orth <= 1e-6;
        let mut line = format!("{name}: residual {res:.1e}, biorth {orth:.1e}");
        if *name == "case 1" || *name == "case 3" {
            for label in ["psi_1", "psi_2"] {
                let s = r.states.iter().find(|s| s.label == label).expect("state");
                let i = &s.interlacing;
                pass &= i.holds;
                nontrivial += usize::from(i.re_zeros.len() >= 2);
                line.push_str(&format!(", {label} interlaces {} ({} Re zeros)", i.holds, i.re_zeros.len()));
            }
        }
        parts.push(line);
    }
    Ok((pass && nontrivial > 0, parts.join("; ")))
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut c = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let mut worst = 0.0_f64;
    for n in [2, 5, 10, 20, 35, 50] {
        for _ in 0..4 {
            let t = Tridiagonal::new((0..n).map(|_| c()).collect(), (0..n - 1).map(|_| c()).collect(), (0..n - 1).map(|_| c()).collect())?;
            let oracle = charpoly_roots(&t)?;
            worst = worst.max(matched_distance(&eig_tridiagonal(&t)?, &oracle));
            worst = worst.max(matched_distance(&eig_dense(&t.to_dense())?, &oracle));
        }
    }
    let pi = std::f64::consts::PI;
    let fd = build_fd_walls(0.0, pi, 1200, |_| Ok(Complex64::new(0.0, 0.0)))?;
    let mut levels = eig_tridiagonal(&fd.tri)?;
    levels.sort_by(|a, b| a.re.total_cmp(&b.re));
    let box_err = [1.0, 4.0, 9.0].iter().zip(&levels).map(|(e, z)| (z - e).norm()).fold(0.0, f64::max);
    Ok((worst <= 1e-8 && box_err <= 1e-2, format!("eig vs charpoly {worst:.1e}, box {{1,4,9}} error {box_err:.1e}")))
}

fn main() {
    let cases = verify_cases();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "Morse N=2 spectrum", c1(&cases)),
        (2, "Morse N=4 spectrum", c2(&cases)),
        (3, "PT-symmetric partner", c3(&cases)),
        (4, "non-PT partner", c4(&cases)),
        (5, "embedded epsilon regularity", c5()),
        (6, "lambda=0 real family", c6()),
        (7, "identity suite", c7(&cases)),
        (8, "eigenfunction suite", c8(&cases)),
        (9, "oracle integrity", c9()),
    ];
    let mut failed = 0;
    for (k, title, outcome) in results {
        let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += usize::from(!pass);
        println!("criterion {k} {}: {title}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
    println!("all 9 criteria pass");
}
