//! Acceptance criteria 1–9. Runs without the libtest harness so that each
//! criterion prints exactly one PASS/FAIL line; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use locmom::extensions::{
    gap_jacobi, hausdorff_ratio, m_polynomial, minimal_extension_bound_check, spectral_measure,
    stieltjes_extension_tau,
};
use locmom::linalg::sym_eigen;
use locmom::measure::DiscreteMeasure;
use locmom::moments::{check_hausdorff_necessary, check_stieltjes, hankel, names};
use locmom::oracle::{
    determinant_polynomial, moments_of, random_measure, roundtrip, scan_alpha, transform, verify_solution,
    MeasureSpec, Problem, SupportMode,
};
use locmom::orthopoly::{build_system, cd_kernel, cd_kernel_difference, conjugate_system};
use locmom::solvers::{
    alpha_range, fit_conventions, gap_measure, gap_solvability, nevanlinna_form, solve_gap, solve_hausdorff,
    solve_local, solve_stieltjes, stieltjes_measure, tau_range_hausdorff, LocalProblem, RangeShape, FROZEN,
};
use locmom::MomentSequence;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;

type Outcome = Result<String, String>;

fn seq(v: &[f64]) -> MomentSequence {
    MomentSequence::new(v.to_vec()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(got: f64, want: f64, eps: f64, what: &str) -> Result<(), String> {
    ensure((got - want).abs() <= eps, || format!("{what}: got {got}, want {want} ± {eps:e}"))
}

fn atoms_match(mu: &DiscreteMeasure, want: &[(f64, f64)], eps: f64, what: &str) -> Result<(), String> {
    ensure(mu.len() == want.len(), || format!("{what}: {} atoms, want {}", mu.len(), want.len()))?;
    for ((x, m), (wx, wm)) in mu.iter().zip(want) {
        close(x, *wx, eps, &format!("{what} atom"))?;
        close(m, *wm, eps, &format!("{what} mass"))?;
    }
    Ok(())
}

fn measure(support: SupportMode, atom_count: usize, seed: u64) -> DiscreteMeasure {
    random_measure(&MeasureSpec {
        support,
        atom_count,
        seed,
    })
    .unwrap()
}

/// Window lengths cycled over seeds. Wider windows stretch the gap support
/// past what a relative 1e-10 definiteness test resolves at order 6.
fn lambda_for(seed: u64) -> f64 {
    [1.0, 1.5, 0.75, 1.25][(seed % 4) as usize]
}

fn c1_roundtrip() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for problem in Problem::ALL {
        for seed in 0..200u64 {
            let rt = roundtrip(problem, seed, lambda_for(seed), TOL)
                .map_err(|e| format!("{problem:?} seed {seed}: {e}"))?;
            ensure(rt.residual.max_residual <= 1e-8, || {
                format!("{problem:?} seed {seed}: residual {:e}", rt.residual.max_residual)
            })?;
            worst = worst.max(rt.residual.max_residual);
            runs += 1;
        }
    }
    Ok(format!("{runs} round trips, worst residual {worst:.1e}"))
}

fn c2_bernoulli() -> Outcome {
    let s = seq(&[1.0, 0.5, 0.5]);
    let r = tau_range_hausdorff(&s, 1.0, TOL).map_err(|e| e.to_string())?;
    ensure(r.unique && r.lo == 0.0 && r.hi == 0.0, || format!("tau_range {r}"))?;
    let mu = solve_hausdorff(&s, 1.0, 0.0, TOL).map_err(|e| e.to_string())?;
    atoms_match(&mu, &[(0.0, 0.5), (1.0, 0.5)], 1e-10, "solution")?;
    Ok("τ ∈ [0, 0], atoms {0, 1}, masses {0.5, 0.5}".into())
}

/// Largest generalized eigenvalue of `(S(H), Γ)`, built here from the raw
/// moments without going through the extension module.
fn lambda_max_b(b: &[f64], h: f64) -> f64 {
    let g = DMatrix::from_row_slice(2, 2, &[b[0], b[1], b[1], b[2]]);
    let s = DMatrix::from_row_slice(2, 2, &[b[1], b[2], b[2], h]);
    let l = g.cholesky().unwrap().l();
    let li = l.try_inverse().unwrap();
    let bmat = &li * s * li.transpose();
    bmat.symmetric_eigen().eigenvalues.max()
}

fn c3_tau_reconciliation() -> Outcome {
    let s = seq(&[1.0, 0.5, 0.5]);
    let r = tau_range_hausdorff(&s, 2.0, TOL).map_err(|e| e.to_string())?;
    close(r.hi, 4.0 / 3.0, 1e-8, "τ upper endpoint")?;
    let ext = stieltjes_extension_tau(&s, r.hi, TOL).map_err(|e| e.to_string())?;
    close(ext.parameter, 5.0 / 6.0, 1e-8, "H_max")?;
    close(lambda_max_b(s.values(), 5.0 / 6.0), 2.0, 1e-8, "λ_max(B(5/6))")?;
    let mu = solve_hausdorff(&s, 2.0, r.hi, TOL).map_err(|e| e.to_string())?;
    let top = mu.atoms().last().copied().unwrap_or(f64::NAN);
    close(top, 2.0, 1e-8, "largest atom at τ_max")?;
    let spec_top = spectral_measure(&ext, 1.0).map_err(|e| e.to_string())?;
    close(*spec_top.atoms().last().unwrap(), 2.0, 1e-8, "extension spectrum")?;
    Ok(format!("τ_max = {}, H_max = {}", r.hi, ext.parameter))
}

fn c4_gap_interval() -> Outcome {
    let s = seq(&[1.0, 0.5, 2.5]);
    let r = alpha_range(&s, 1.0, TOL).map_err(|e| e.to_string())?;
    let scan = scan_alpha(&s, 1.0, 64, TOL).map_err(|e| e.to_string())?;
    for (what, x) in [("formula", &r), ("scan", &scan)] {
        ensure(x.shape == RangeShape::Segment, || format!("{what} range {x}"))?;
        close(x.lo, -3.5, 1e-6, &format!("{what} lower end"))?;
        close(x.hi, 4.5, 1e-6, &format!("{what} upper end"))?;
    }
    let mu = solve_gap(&s, 1.0, 0.5, TOL).map_err(|e| e.to_string())?;
    atoms_match(&mu, &[(-1.0, 0.5), (2.0, 0.5)], 1e-8, "α = 0.5")?;
    let at_lo = solve_gap(&s, 1.0, r.lo, TOL).map_err(|e| e.to_string())?;
    ensure(at_lo.atoms().iter().any(|x| (x - 1.0).abs() <= 1e-6), || {
        format!("α = lo atoms {:?} miss Λ", at_lo.atoms())
    })?;
    let at_hi = solve_gap(&s, 1.0, r.hi, TOL).map_err(|e| e.to_string())?;
    ensure(at_hi.atoms().iter().any(|x| x.abs() <= 1e-6), || {
        format!("α = hi atoms {:?} miss 0", at_hi.atoms())
    })?;
    Ok(format!("formula [{}, {}], scan [{}, {}]", r.lo, r.hi, scan.lo, scan.hi))
}

fn c5_local() -> Outcome {
    let p = LocalProblem::new(seq(&[2.0, 1.0, 3.0]), seq(&[1.0, 0.5, 0.5]), 1.0).map_err(|e| e.to_string())?;
    let mu = solve_local(&p, 0.0, 0.5, TOL).map_err(|e| e.to_string())?;
    atoms_match(&mu, &[(-1.0, 0.5), (0.0, 0.5), (1.0, 0.5), (2.0, 0.5)], 1e-8, "local")?;
    let global = verify_solution(&mu, &p.a, 1e-8);
    let window = verify_solution(&mu.restrict(-1e-8, 1.0 + 1e-8), &p.b, 1e-8);
    ensure(global.passed && window.passed, || {
        format!("residuals {:e} / {:e}", global.max_residual, window.max_residual)
    })?;
    Ok(format!(
        "atoms {{−1, 0, 1, 2}}, residuals {:.1e} / {:.1e}",
        global.max_residual, window.max_residual
    ))
}

fn c6_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut instances, mut trues, mut falses) = (0, 0, 0);
    let mut seed = 0u64;
    while instances < 100 {
        let m = 1 + (seed % 6) as usize;
        let lambda = lambda_for(seed);
        let mu = measure(SupportMode::Interval { lambda }, m + 1, 6000 + seed);
        let s = moments_of(&mu, 2 * m).unwrap();
        // Alternate the generating window with one just around the top atom,
        // kept only when the necessary conditions still hold, so that both
        // verdicts occur.
        let l = if seed % 2 == 0 {
            lambda
        } else {
            mu.atoms()[m] * rng.gen_range(0.9..1.1)
        };
        seed += 1;
        let necessary = check_hausdorff_necessary(&s, l, TOL).map_err(|e| e.to_string())?;
        if !necessary.verdict() {
            continue;
        }
        let bound = minimal_extension_bound_check(&s, l, TOL).map_err(|e| format!("seed {seed}: {e}"))?;
        let ratio = hausdorff_ratio(&s, l, TOL).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(bound == (ratio <= 1.0), || {
            format!("seed {seed}, Λ = {l}: bound check {bound}, ratio {ratio}")
        })?;
        instances += 1;
        if bound {
            trues += 1;
        } else {
            falses += 1;
        }
    }
    Ok(format!("{instances} instances, 0 disagreements ({trues} within bound, {falses} beyond)"))
}

fn c7_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut cd_worst, mut det_worst, mut root_worst) = (0.0f64, 0.0f64, 0.0f64);
    let mut det_checked = 0;
    for seed in 0..60u64 {
        let m = 1 + (seed % 6) as usize;
        let support = match seed % 3 {
            0 => SupportMode::HalfAxis,
            1 => SupportMode::Interval { lambda: lambda_for(seed) },
            _ => SupportMode::GapComplement { lambda: lambda_for(seed) },
        };
        let mu = measure(support, m + 1, 7000 + seed);
        let s = moments_of(&mu, 2 * m).unwrap();
        let sys = build_system(&s, TOL).map_err(|e| format!("seed {seed}: {e}"))?;
        let (lo, hi) = (mu.atoms()[0] - 1.0, mu.atoms()[m] + 1.0);

        for _ in 0..100 {
            let (x, y) = (rng.gen_range(lo..hi), rng.gen_range(lo..hi));
            let k = rng.gen_range(0..m);
            let sum = cd_kernel(&sys, k, x, y).map_err(|e| e.to_string())?;
            let diff = cd_kernel_difference(&sys, k, x, y).map_err(|e| e.to_string())?;
            let rel = (sum - diff).abs() / sum.abs().max(1.0);
            cd_worst = cd_worst.max(rel);
            ensure(rel <= 1e-10, || format!("seed {seed}: CD residual {rel:e} at ({x}, {y}), s = {k}"))?;
        }

        let g = hankel(&s, 0, m).unwrap().entries;
        let (eig, _) = sym_eigen(&g);
        if eig[0] >= 1e-6 * g.amax().max(1.0) {
            det_checked += 1;
            for k in 0..=m {
                let det = determinant_polynomial(&s, k).map_err(|e| e.to_string())?;
                let rec = &sys.coeffs[k];
                let size = rec.coeffs().iter().fold(0.0f64, |a, c| a.max(c.abs()));
                let err = (0..=k)
                    .map(|j| (det.coeffs().get(j).copied().unwrap_or(0.0) - rec.coeffs()[j]).abs())
                    .fold(0.0, f64::max);
                det_worst = det_worst.max(err / size);
                ensure(err <= 1e-8 * size, || format!("seed {seed}: d_{k} coefficient error {:e}", err / size))?;
            }
        }

        let alpha: f64 = rng.gen_range(-3.0..3.0);
        let mp = m_polynomial(&sys, alpha).map_err(|e| e.to_string())?;
        let mut roots = mp.real_roots();
        roots.sort_by(f64::total_cmp);
        let (mut eigs, _) = sym_eigen(&gap_jacobi(&s, alpha, TOL).map_err(|e| e.to_string())?.jacobi);
        eigs.sort_by(f64::total_cmp);
        ensure(roots.len() == eigs.len(), || format!("seed {seed}: {} roots vs {} eigenvalues", roots.len(), eigs.len()))?;
        for (r, e) in roots.iter().zip(&eigs) {
            let d = (r - e).abs();
            root_worst = root_worst.max(d);
            ensure(d <= 1e-8, || format!("seed {seed}: root {r} vs eigenvalue {e}"))?;
        }
    }
    ensure(det_checked >= 30, || format!("only {det_checked} well-conditioned instances"))?;
    Ok(format!(
        "CD {cd_worst:.1e}, determinant {det_worst:.1e} ({det_checked} instances), roots {root_worst:.1e}"
    ))
}

fn sweep(lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    (0..20).map(move |i| lo + (hi - lo) * i as f64 / 19.0)
}

fn c8_negative_controls() -> Outcome {
    let r = check_stieltjes(&seq(&[1.0, 0.0, 0.0, 0.0, 1.0]), TOL);
    ensure(!r.verdict() && r.failing().iter().any(|n| n == names::KERNEL_0_TO_2), || {
        format!("(1,0,0,0,1): failing {:?}", r.failing())
    })?;
    let r = gap_solvability(&seq(&[1.0, 0.5, 0.25, 0.125, 0.0625]), 1.0, TOL).map_err(|e| e.to_string())?;
    ensure(!r.verdict() && r.failing().iter().any(|n| n == names::GAP_WINDOW_PD), || {
        format!("δ_0.5: failing {:?}", r.failing())
    })?;

    let mut sweeps = 0;
    let mut weakest = f64::INFINITY;
    let mut record = |v: f64, what: &str| -> Result<(), String> {
        weakest = weakest.min(v);
        ensure(v > 1e-3, || format!("{what}: violation only {v:e}"))
    };

    // Stieltjes: τ < 0 pushes an atom below 0.
    for (i, s) in [seq(&[1.0, 0.5, 0.5]), moments_of(&measure(SupportMode::HalfAxis, 4, 81), 6).unwrap()]
        .iter()
        .enumerate()
    {
        for tau in sweep(-2.0, -0.05) {
            let mu = stieltjes_measure(s, tau, TOL).map_err(|e| e.to_string())?;
            record(-mu.atoms()[0], &format!("Stieltjes {i}, τ = {tau}"))?;
        }
        sweeps += 1;
    }

    // Hausdorff: τ beyond either end leaves [0, Λ].
    for (i, (s, lambda)) in [
        (seq(&[1.0, 0.5, 0.5]), 2.0),
        (moments_of(&measure(SupportMode::Interval { lambda: 1.0 }, 3, 82), 4).unwrap(), 1.0),
    ]
    .iter()
    .enumerate()
    {
        let r = tau_range_hausdorff(s, *lambda, TOL).map_err(|e| e.to_string())?;
        let width = r.hi.max(0.1);
        for tau in sweep(r.hi + 0.05 * width, r.hi + 2.0 * width) {
            let mu = stieltjes_measure(s, tau, TOL).map_err(|e| e.to_string())?;
            record(mu.atoms().last().unwrap() - lambda, &format!("Hausdorff {i}, τ = {tau}"))?;
        }
        for tau in sweep(-2.0 * width, -0.05 * width) {
            let mu = stieltjes_measure(s, tau, TOL).map_err(|e| e.to_string())?;
            record(-mu.atoms()[0], &format!("Hausdorff {i}, τ = {tau}"))?;
        }
        sweeps += 2;
    }

    // Gap: α beyond either end puts an atom inside (0, Λ).
    let depth = |mu: &DiscreteMeasure, lambda: f64| {
        mu.atoms()
            .iter()
            .map(|&x| x.min(lambda - x))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    for (i, (s, lambda)) in [
        (seq(&[1.0, 0.5, 2.5]), 1.0),
        (moments_of(&measure(SupportMode::GapComplement { lambda: 1.0 }, 3, 83), 4).unwrap(), 1.0),
    ]
    .iter()
    .enumerate()
    {
        let r = alpha_range(s, *lambda, TOL).map_err(|e| e.to_string())?;
        let width = r.hi - r.lo;
        let outside: Vec<f64> = match r.shape {
            RangeShape::Segment => sweep(r.hi + 0.05 * width, r.hi + width)
                .chain(sweep(r.lo - width, r.lo - 0.05 * width))
                .collect(),
            // (−∞, lo] ∪ [hi, ∞): the excluded parameters lie between.
            RangeShape::Exterior => sweep(r.lo + 0.05 * width, r.hi - 0.05 * width).collect(),
            RangeShape::Empty => return Err(format!("gap {i}: empty range")),
        };
        for alpha in outside {
            let mu = gap_measure(s, alpha, TOL).map_err(|e| e.to_string())?;
            record(depth(&mu, *lambda), &format!("gap {i}, α = {alpha}"))?;
        }
        sweeps += if r.shape == RangeShape::Segment { 2 } else { 1 };
    }
    Ok(format!(
        "(1,0,0,0,1) and δ_0.5 rejected; {sweeps} sweeps of 20, weakest violation {weakest:.2e}"
    ))
}

fn c9_transforms() -> Outcome {
    let fitted = fit_conventions(TOL)
        .map_err(|e| e.to_string())?
        .ok_or("conventions fit is ambiguous")?;
    ensure(fitted == FROZEN, || format!("fit {fitted:?} differs from frozen {FROZEN:?}"))?;
    let points: Vec<Complex64> = (0..10).map(|j| Complex64::new(-3.0 + 0.7 * j as f64, 1.0)).collect();
    let mut worst = 0.0f64;
    let mut instances = 0;
    let mut check = |s: &MomentSequence, alpha: f64, mu: &DiscreteMeasure, what: String| -> Result<(), String> {
        let sys = build_system(s, TOL).map_err(|e| e.to_string())?;
        let conj = conjugate_system(&sys, s);
        for &z in &points {
            let f = transform(mu, z).map_err(|e| e.to_string())?;
            let g = nevanlinna_form(&sys, &conj, alpha, z, &FROZEN);
            let rel = (f - g).norm() / f.norm().max(1.0);
            worst = worst.max(rel);
            ensure(rel <= 1e-8, || format!("{what}: mismatch {rel:e} at z = {z}"))?;
        }
        instances += 1;
        Ok(())
    };
    for seed in 0..30u64 {
        let m = 1 + (seed % 6) as usize;
        let lambda = lambda_for(seed);

        let s = moments_of(&measure(SupportMode::GapComplement { lambda }, m + 1, 9000 + seed), 2 * m).unwrap();
        let r = alpha_range(&s, lambda, TOL).map_err(|e| e.to_string())?;
        let alpha = r.representative().ok_or("empty α range")?;
        let mu = solve_gap(&s, lambda, alpha, TOL).map_err(|e| e.to_string())?;
        check(&s, alpha, &mu, format!("gap seed {seed}"))?;

        let s = moments_of(&measure(SupportMode::HalfAxis, m + 1, 9100 + seed), 2 * m).unwrap();
        let core = locmom::extensions::StieltjesCore::new(&s, TOL).map_err(|e| e.to_string())?;
        let mu = solve_stieltjes(&s, 0.5, TOL).map_err(|e| e.to_string())?;
        check(&s, core.alpha_min + 0.5, &mu, format!("Stieltjes seed {seed}"))?;

        let s = moments_of(&measure(SupportMode::Interval { lambda }, m + 1, 9200 + seed), 2 * m).unwrap();
        let r = tau_range_hausdorff(&s, lambda, TOL).map_err(|e| e.to_string())?;
        let tau = r.representative().ok_or("empty τ range")?;
        let core = locmom::extensions::StieltjesCore::new(&s, TOL).map_err(|e| e.to_string())?;
        let mu = solve_hausdorff(&s, lambda, tau, TOL).map_err(|e| e.to_string())?;
        check(&s, core.alpha_min + tau, &mu, format!("Hausdorff seed {seed}"))?;
    }
    Ok(format!("frozen {FROZEN:?}; {instances} instances, worst {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("round-trip recovery", c1_roundtrip),
        ("Bernoulli uniqueness", c2_bernoulli),
        ("τ-range reconciliation", c3_tau_reconciliation),
        ("gap interval", c4_gap_interval),
        ("local composition", c5_local),
        ("criterion equivalence", c6_equivalence),
        ("identity suites", c7_identities),
        ("negative controls", c8_negative_controls),
        ("transform consistency", c9_transforms),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into())) {
            Ok(detail) => println!("criterion {} ({name}): PASS; {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL; {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 9 passed in {:.1?}", 9 - failed, start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
