//! Acceptance checks. Each criterion prints one `PASS` or `FAIL` line; the
//! process exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use favard::experiments::{fit_model, run_decay, DecayModel, ExperimentConfig};
use favard::fourier::{
    inequality_constant, key_ratio, nu_hat, nu_hat_direct, omega_scan, ssv_detect,
    telescoping_check,
};
use favard::geometry::{buffon_mc, favard_quadrature, project_set, DEFAULT_OFFSET_HALFWIDTH};
use favard::multiplicity::{estimate_chain_report, multiplicity_function};
use favard::salem::{
    energy_ratio, lhs_energy, random_instance, ratio_experiment, ExponentialSum, FrequencyLayout,
    RATIO_CEILING,
};
use favard::selfsimilar::{disc_set, gasket_system};
use favard::DiscSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gasket(n: usize) -> DiscSet {
    disc_set(&gasket_system(), n).expect("gasket level within budget")
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn mass_normalization() -> Outcome {
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for n in 1..=10 {
        let set = gasket(n);
        for _ in 0..100 {
            let theta = r.random::<f64>() * PI;
            let err = (multiplicity_function(&set, theta).integral() - 1.0).abs();
            worst = worst.max(err);
            ensure(err <= 1e-12, || {
                format!("n = {n}, θ = {theta}: |∫f − 1| = {err:e}")
            })?;
        }
    }
    Ok(format!("max |∫f − 1| = {worst:.1e}"))
}

fn fourier_oracle() -> Outcome {
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let theta = r.random::<f64>() * 2.0 * PI;
        let x = (r.random::<f64>() * 2.0 - 1.0) * 3f64.powi(8);
        for n in 1..=8 {
            let d = (nu_hat(n, theta, x).map_err(|e| e.to_string())?
                - nu_hat_direct(n, theta, x).map_err(|e| e.to_string())?)
            .norm();
            worst = worst.max(d);
            ensure(d <= 1e-10, || {
                format!("n = {n}, θ = {theta}, x = {x}: diff {d:e}")
            })?;
        }
    }
    Ok(format!("max difference {worst:.1e}"))
}

fn support_identity() -> Outcome {
    let mut r = rng(3);
    for n in 0..=6 {
        let set = gasket(n);
        for _ in 0..50 {
            let theta = r.random::<f64>() * PI;
            let support = multiplicity_function(&set, theta).support();
            let proj = project_set(&set, theta);
            ensure(support.approx_eq(&proj, 1e-12), || {
                format!("n = {n}, θ = {theta}")
            })?;
        }
    }
    Ok("n ≤ 6, 50 angles each".into())
}

fn duality() -> Outcome {
    let mut r = rng(4);
    let mut tightest = f64::INFINITY;
    for n in 0..=8 {
        let set = gasket(n);
        for _ in 0..50 {
            let theta = r.random::<f64>() * PI;
            let f = multiplicity_function(&set, theta);
            let product =
                f.support().measure() * f.lp_norm(2.0).map_err(|e| e.to_string())?.powi(2);
            tightest = tightest.min(product);
            ensure(product >= 1.0 - 1e-9, || {
                format!("n = {n}, θ = {theta}: |L| ||f||² = {product}")
            })?;
        }
    }
    Ok(format!("min |L|·||f||₂² = {tightest:.6}"))
}

fn mass_split() -> Outcome {
    let mut r = rng(5);
    let mut largest: f64 = 0.0;
    for n in 0..=6 {
        let set = gasket(n);
        for _ in 0..30 {
            let theta = r.random::<f64>() * PI;
            for k in [0.6, 1.0, 1.5, 2.0] {
                let rep = estimate_chain_report(&set, theta, k, 2.0).map_err(|e| e.to_string())?;
                let split = 0.5 * (rep.measure_l - rep.measure_ak) + k * rep.measure_ak;
                largest = largest.max(split);
                ensure(split <= 1.0 + 1e-9, || {
                    format!("n = {n}, θ = {theta}, K = {k}: {split}")
                })?;
            }
        }
    }
    Ok(format!("max ½|L∖A_K| + K|A_K| = {largest:.6}"))
}

fn buffon_agreement() -> Outcome {
    let g = gasket_system();
    let set = gasket(4);
    let quad =
        favard_quadrature(&set, 10_000, Some(g.projection_period())).map_err(|e| e.to_string())?;
    let est = buffon_mc(&set, 1_000_000, 20_261_015, DEFAULT_OFFSET_HALFWIDTH)
        .map_err(|e| e.to_string())?;
    let z = (est.favard_estimate - quad) / est.standard_error;
    ensure(z.abs() <= 3.0, || format!("z = {z:.3}"))?;
    Ok(format!(
        "MC {:.6} vs quadrature {quad:.6}, z = {z:+.3}",
        est.favard_estimate
    ))
}

fn symmetry() -> Outcome {
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for n in 0..=6 {
        let set = gasket(n);
        for _ in 0..100 {
            let theta = r.random::<f64>() * PI;
            let d = (project_set(&set, theta).measure()
                - project_set(&set, theta + PI / 3.0).measure())
            .abs();
            worst = worst.max(d);
            ensure(d <= 1e-10, || format!("n = {n}, θ = {theta}: {d:e}"))?;
        }
    }
    Ok(format!("max difference {worst:.1e}"))
}

fn decay_monotonicity() -> Outcome {
    let config = ExperimentConfig {
        n_min: 2,
        n_max: 9,
        nodes: Some(3000),
        ..Default::default()
    };
    let run = run_decay(&config).map_err(|e| e.to_string())?;
    for w in run.rows.windows(2) {
        ensure(w[1].favard < w[0].favard, || {
            format!(
                "Fav(n = {}) = {} ≥ Fav(n = {}) = {}",
                w[1].n, w[1].favard, w[0].n, w[0].favard
            )
        })?;
    }
    ensure(run.fit.exponent > 0.0, || {
        format!("fitted exponent {}", run.fit.exponent)
    })?;
    Ok(format!(
        "Fav(9) = {:.6}, power fit c = {:.4}, r² = {:.5}",
        run.rows.last().map_or(f64::NAN, |r| r.favard),
        run.fit.exponent,
        run.fit.r_squared
    ))
}

fn telescoping() -> Outcome {
    let mut r = rng(9);
    let mut worst: f64 = 0.0;
    let mut tested = 0;
    while tested < 10_000 {
        let x = r.random::<f64>() * 2.0 * PI;
        let m = r.random_range(0..=6u32);
        if x.sin().abs() < 1e-2 {
            continue;
        }
        let Ok(err) = telescoping_check(x, m) else {
            continue;
        };
        worst = worst.max(err);
        ensure(err <= 1e-9, || format!("x = {x}, m = {m}: {err:e}"))?;
        tested += 1;
    }
    Ok(format!("max error {worst:.1e} over {tested} points"))
}

fn key_inequality() -> Outcome {
    let coarse = inequality_constant(2048).map_err(|e| e.to_string())?;
    let fine = inequality_constant(4096).map_err(|e| e.to_string())?;
    ensure(coarse.a > 0.0, || format!("a = {}", coarse.a))?;
    let drift = (fine.a - coarse.a).abs() / coarse.a;
    ensure(drift <= 0.1, || {
        format!("a drifts by {:.1}% under refinement", 100.0 * drift)
    })?;
    ensure(key_ratio(0.0, 0.0) == Some(0.5), || {
        format!("ratio at origin {:?}", key_ratio(0.0, 0.0))
    })?;
    Ok(format!("a = {:.6} (2048), {:.6} (4096)", coarse.a, fine.a))
}

fn omega_containment() -> Outcome {
    let a = inequality_constant(2048).map_err(|e| e.to_string())?.a;
    let mut parts = Vec::new();
    for m in 0..=2u32 {
        let grid = (8 * 3usize.pow(m + 1)).max(256);
        let s = omega_scan(m, 2, grid, a).map_err(|e| e.to_string())?;
        ensure(s.containment_violation_count == 0, || {
            format!(
                "m = {m}: {} Ω points break the sine-square bound",
                s.containment_violation_count
            )
        })?;
        let cap = 4 * 3usize.pow(2 * m + 2);
        ensure(s.touched_squares <= cap, || {
            format!("m = {m}: {} squares > {cap}", s.touched_squares)
        })?;
        parts.push(format!("m={m}: {}/{cap}", s.touched_squares));
    }
    Ok(parts.join(", "))
}

fn ssv_soundness() -> Outcome {
    for &(t, n, m, ell) in &[
        (1.0, 4, 2, 2),
        (0.0, 3, 1, 1),
        (2.5, 5, 2, 3),
        (-1.0, 4, 3, 4),
    ] {
        for depth in 0..=3 {
            let r = ssv_detect(t, n, m, ell, depth).map_err(|e| e.to_string())?;
            ensure(r.lower_measure <= r.upper_measure, || {
                format!("({t}, {n}, {m}, {ell}, {depth})")
            })?;
        }
    }
    let r = ssv_detect(1.0, 4, 2, 0, 2).map_err(|e| e.to_string())?;
    let len = r.interval.1 - r.interval.0;
    ensure(r.lower_measure == len && r.upper_measure == len, || {
        format!(
            "ℓ = 0 gives [{}, {}] instead of {len}",
            r.lower_measure, r.upper_measure
        )
    })?;
    let mut prev = (f64::NEG_INFINITY, f64::INFINITY);
    let mut widths = Vec::new();
    for depth in 0..=4 {
        let r = ssv_detect(1.0, 4, 2, 2, depth).map_err(|e| e.to_string())?;
        ensure(
            r.lower_measure >= prev.0 - 1e-9 && r.upper_measure <= prev.1 + 1e-9,
            || {
                format!(
                    "depth {depth}: bracket [{}, {}] grew",
                    r.lower_measure, r.upper_measure
                )
            },
        )?;
        prev = (r.lower_measure, r.upper_measure);
        widths.push(format!("{:.3}", r.upper_measure - r.lower_measure));
    }
    Ok(format!("bracket widths {}", widths.join(" → ")))
}

fn simpson_energy(s: &ExponentialSum, panels: usize) -> f64 {
    let h = 1.0 / panels as f64;
    let mut sum = s.eval(0.0).norm_sqr() + s.eval(1.0).norm_sqr();
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * s.eval(i as f64 * h).norm_sqr();
    }
    sum * h / 3.0
}

fn salem_energy() -> Outcome {
    let mut worst: f64 = 0.0;
    for index in 0..20 {
        let s = random_instance(
            13,
            index,
            1 + index as usize,
            50.0,
            FrequencyLayout::Uniform,
        );
        let lhs = lhs_energy(&s).map_err(|e| e.to_string())?;
        let quad = simpson_energy(&s, 20_000);
        worst = worst.max((lhs - quad).abs());
        ensure((lhs - quad).abs() <= 1e-6, || {
            format!("instance {index}: {lhs} vs {quad}")
        })?;
    }
    let report = ratio_experiment(1000, 100, 13, 100.0, FrequencyLayout::Uniform)
        .map_err(|e| e.to_string())?;
    ensure(report.max_ratio <= RATIO_CEILING, || {
        format!(
            "max ratio {} exceeds ceiling {RATIO_CEILING}",
            report.max_ratio
        )
    })?;
    let single = ExponentialSum::from_phases(vec![7.25], &[1.0]).map_err(|e| e.to_string())?;
    let cluster =
        ExponentialSum::from_phases(vec![3.0; 6], &[0.4; 6]).map_err(|e| e.to_string())?;
    for (name, s) in [("single atom", single), ("coherent cluster", cluster)] {
        let r = energy_ratio(&s).map_err(|e| e.to_string())?;
        ensure(r == 0.5, || format!("{name} ratio {r}"))?;
    }
    Ok(format!(
        "quadrature gap {worst:.1e}, max ratio {:.4} ≤ {RATIO_CEILING}",
        report.max_ratio
    ))
}

fn fit_exactness() -> Outcome {
    let levels: Vec<f64> = (2..=12).map(f64::from).collect();
    for (model, c, p) in [
        (DecayModel::Power, 1.7, 0.42),
        (DecayModel::Sqrtlog, 0.8, 1.3),
    ] {
        let points: Vec<(f64, f64)> = levels.iter().map(|&n| (n, model.eval(c, p, n))).collect();
        let fit = fit_model(&points, model).map_err(|e| e.to_string())?;
        ensure(
            (fit.scale - c).abs() <= 1e-9 && (fit.exponent - p).abs() <= 1e-9,
            || format!("{model:?}: recovered ({}, {})", fit.scale, fit.exponent),
        )?;
        ensure((fit.r_squared - 1.0).abs() <= 1e-12, || {
            format!("{model:?}: r² = {}", fit.r_squared)
        })?;
    }
    Ok("power and sqrtlog parameters recovered".into())
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_favard"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 4] = [
        &["decay", "--n-min", "2", "--n", "7"],
        &["decay", "--n-min", "2", "--n", "7", "--format", "json"],
        &["buffon", "--n", "5", "--samples", "200000", "--seed", "42"],
        &[
            "buffon",
            "--n",
            "5",
            "--samples",
            "200000",
            "--seed",
            "42",
            "--format",
            "json",
        ],
    ];
    for args in runs {
        let a = run_cli(args)?;
        let b = run_cli(args)?;
        ensure(!a.is_empty() && a == b, || {
            format!("{args:?} differs between runs")
        })?;
    }
    Ok("decay and buffon output byte-identical across runs".into())
}

fn main() {
    let criteria: [Criterion; 15] = [
        ("mass normalization", mass_normalization),
        ("Fourier oracle equivalence", fourier_oracle),
        ("support identity", support_identity),
        ("L2 duality", duality),
        ("mass split", mass_split),
        ("Buffon vs quadrature", buffon_agreement),
        ("gasket symmetry", symmetry),
        ("decay monotonicity", decay_monotonicity),
        ("telescoping identity", telescoping),
        ("key inequality constant", key_inequality),
        ("Ω containment", omega_containment),
        ("SSV bracket soundness", ssv_soundness),
        ("exponential sum energy", salem_energy),
        ("fit exactness", fit_exactness),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
