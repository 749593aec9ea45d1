//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.
//!
//! Run with `cargo test -p epr-ga-cli --test acceptance`.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use epr_ga::{
    correlation_exact, correlation_mc, geometric_product, locality_audit, maximize_s,
    measure_alice, measure_bob, naive_correlation, paper_bound, sweep_curve, Axis, ChshConfig64,
    CrossSign, Direction64, HiddenVariable, Multivector64, ProductConvention, RngStream,
};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

const EXACT_TOL: f64 = 1e-12;
const MC_SEED: u64 = 42;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn within_time(elapsed: Duration, limit: Duration, label: &str) -> Result<(), String> {
    check(elapsed < limit, || {
        format!("{label} took {elapsed:?}, limit {limit:?}")
    })
}

fn random_direction(rng: &mut StdRng) -> Direction64 {
    loop {
        let v: [f64; 3] = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        if let Ok(d) = Direction64::normalized(v[0], v[1], v[2]) {
            return d;
        }
    }
}

fn levi_civita(j: usize, k: usize, l: usize) -> f64 {
    let (j, k, l) = (j as i32, k as i32, l as i32);
    f64::from((j - k) * (k - l) * (l - j) / 2)
}

fn table_fidelity() -> Outcome {
    let start = Instant::now();
    let mut products = Vec::with_capacity(18);
    for sigma in [CrossSign::Plus, CrossSign::Minus] {
        for j in Axis::ALL {
            for k in Axis::ALL {
                products.push((
                    sigma,
                    j,
                    k,
                    geometric_product(&Multivector64::basis(j), &Multivector64::basis(k), sigma),
                ));
            }
        }
    }
    let elapsed = start.elapsed();

    for (sigma, j, k, p) in &products {
        let sg = sigma.value::<f64>();
        let delta = if j == k { 1.0 } else { 0.0 };
        check(p.scalar_part() == -delta, || {
            format!("scalar of β{}β{}", j.label(), k.label())
        })?;
        for l in Axis::ALL {
            let want = -sg * levi_civita(j.index(), k.index(), l.index());
            let got = p.bivector_part()[l.index()];
            check(got + 0.0 == want + 0.0, || {
                format!(
                    "σ={sg}: β{}β{} component {} is {got}, want {want}",
                    j.label(),
                    k.label(),
                    l.label()
                )
            })?;
        }
    }
    // σ = −1 differs from σ = +1 exactly in the ε terms
    for i in 0..9 {
        let (plus, minus) = (products[i].3, products[i + 9].3);
        check(plus.scalar_part() == minus.scalar_part(), || {
            "scalar parts differ".into()
        })?;
        check(
            (plus.bivector_part()[0] + minus.bivector_part()[0]).abs() == 0.0,
            || "x not flipped".into(),
        )?;
        check(
            (plus.bivector_part()[1] + minus.bivector_part()[1]).abs() == 0.0,
            || "y not flipped".into(),
        )?;
        check(
            (plus.bivector_part()[2] + minus.bivector_part()[2]).abs() == 0.0,
            || "z not flipped".into(),
        )?;
    }
    within_time(elapsed, Duration::from_millis(1), "table")?;
    Ok(format!("18 products exact, {elapsed:?}"))
}

fn outcome_dichotomy() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let dirs: Vec<_> = (0..10_000).map(|_| random_direction(&mut rng)).collect();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for d in &dirs {
        for l in HiddenVariable::BOTH {
            let lam: f64 = l.value();
            let a = measure_alice(d, l);
            let b = measure_bob(d, l);
            check(a.value() == Ok(lam) && b.value() == Ok(-lam), || {
                format!("classification at {d:?}")
            })?;
            worst = worst
                .max(a.residual_norm)
                .max(b.residual_norm)
                .max((a.raw.scalar_part() - lam).abs())
                .max((b.raw.scalar_part() + lam).abs());
        }
    }
    let elapsed = start.elapsed();
    check(worst <= EXACT_TOL, || format!("worst deviation {worst:e}"))?;
    within_time(elapsed, Duration::from_secs(1), "dichotomy")?;
    Ok(format!(
        "2·10⁴ outcomes, worst deviation {worst:e}, {elapsed:?}"
    ))
}

fn naive_constancy() -> Outcome {
    let a = Direction64::in_plane_deg(0.0);
    let b = Direction64::in_plane_deg(60.0);
    let mut count = 0u64;
    for l in RngStream::new(MC_SEED).draws(1_000_000) {
        let p = measure_alice(&a, l).value().map_err(|e| e.to_string())?
            * measure_bob(&b, l).value().map_err(|e| e.to_string())?;
        check(p == -1.0, || format!("trial {count} gave {p}"))?;
        count += 1;
    }
    let r = naive_correlation(&a, &b, 1_000_000, MC_SEED).map_err(|e| e.to_string())?;
    check(r.scalar_estimate == -1.0 && r.standard_error == 0.0, || {
        format!("{r:?}")
    })?;

    let mut rng = StdRng::seed_from_u64(3);
    for i in 0..50 {
        let (x, y) = (random_direction(&mut rng), random_direction(&mut rng));
        let r = naive_correlation(&x, &y, 10_000, i).map_err(|e| e.to_string())?;
        check(r.scalar_estimate == -1.0 && r.standard_error == 0.0, || {
            format!("{r:?}")
        })?;
    }
    Ok(format!(
        "{count} trials all −1; 51 settings give −1 with standard error 0"
    ))
}

fn claimed_result_lambda() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let pairs: Vec<_> = (0..1000)
        .map(|_| (random_direction(&mut rng), random_direction(&mut rng)))
        .collect();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (a, b) in &pairs {
        let r = correlation_exact(a, b, ProductConvention::LambdaStructure);
        worst = worst
            .max((r.scalar_estimate + a.dot(b)).abs())
            .max(r.residual_norm);
    }
    let sweep = sweep_curve(&Direction64::e_z(), 5.0, |a, b| {
        correlation_exact(a, b, ProductConvention::LambdaStructure)
    })
    .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(sweep.len() == 37, || {
        format!("{} sweep points", sweep.len())
    })?;
    for p in &sweep {
        let want = -p.angle_deg.to_radians().cos();
        worst = worst
            .max((p.value.scalar_estimate - want).abs())
            .max(p.value.residual_norm);
    }
    check(worst <= EXACT_TOL, || format!("worst deviation {worst:e}"))?;
    within_time(elapsed, Duration::from_secs(1), "lambda oracle")?;
    Ok(format!(
        "10³ pairs + 37-point sweep, worst deviation {worst:e}, {elapsed:?}"
    ))
}

fn fixed_basis_decomposition() -> Outcome {
    let sweep = sweep_curve(&Direction64::e_z(), 5.0, |a, b| {
        correlation_exact(a, b, ProductConvention::FixedBasis)
    })
    .map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut largest_residual = 0.0f64;
    for p in &sweep {
        let t = p.angle_deg.to_radians();
        worst = worst
            .max((p.value.scalar_estimate + t.cos()).abs())
            .max((p.value.residual_norm - t.sin()).abs());
        largest_residual = largest_residual.max(p.value.residual_norm);
    }
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..1000 {
        let (a, b) = (random_direction(&mut rng), random_direction(&mut rng));
        let c = a.cross(&b);
        let cn = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        let r = correlation_exact(&a, &b, ProductConvention::FixedBasis);
        worst = worst
            .max((r.scalar_estimate + a.dot(&b)).abs())
            .max((r.residual_norm - cn).abs());
    }
    check(worst <= EXACT_TOL, || format!("worst deviation {worst:e}"))?;
    check(largest_residual > 0.99, || "residual vanished".into())?;
    Ok(format!(
        "scalar −cos θ and residual sin θ within {worst:e}; residual reaches {largest_residual:.6} at 90°"
    ))
}

fn monte_carlo_convergence() -> Outcome {
    let a = Direction64::in_plane_deg(0.0);
    let b = Direction64::in_plane_deg(60.0);
    let start = Instant::now();
    let r1 = correlation_mc(
        &a,
        &b,
        1_000_000,
        MC_SEED,
        ProductConvention::LambdaStructure,
    )
    .map_err(|e| e.to_string())?;
    let r4 = correlation_mc(
        &a,
        &b,
        4_000_000,
        MC_SEED,
        ProductConvention::LambdaStructure,
    )
    .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let (e1, e4) = (
        (r1.scalar_estimate + 0.5).abs(),
        (r4.scalar_estimate + 0.5).abs(),
    );
    check(e1 <= 5e-3, || format!("n=10⁶ scalar error {e1:e}"))?;
    check(e4 <= 2.5e-3, || format!("n=4·10⁶ scalar error {e4:e}"))?;
    // the λ-odd bivector part is the sampled quantity; it must shrink likewise
    check(r1.residual_norm <= 5e-3, || {
        format!("n=10⁶ residual {:e}", r1.residual_norm)
    })?;
    check(r4.residual_norm <= 2.5e-3, || {
        format!("n=4·10⁶ residual {:e}", r4.residual_norm)
    })?;
    check(
        (r1.residual_standard_error[2] / r4.residual_standard_error[2] - 2.0).abs() < 1e-3,
        || "standard error does not halve when n quadruples".into(),
    )?;
    within_time(elapsed, Duration::from_secs(10), "monte carlo")?;
    Ok(format!(
        "scalar error {e1:.1e} / {e4:.1e}, residual {:.2e} / {:.2e}, {elapsed:?}",
        r1.residual_norm, r4.residual_norm
    ))
}

fn chsh() -> Outcome {
    let tsirelson = 8f64.sqrt();
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..100_000 {
        let cfg = ChshConfig64 {
            a: random_direction(&mut rng),
            a_prime: random_direction(&mut rng),
            b: random_direction(&mut rng),
            b_prime: random_direction(&mut rng),
        };
        let (p, f) = paper_bound(&cfg);
        check(
            (0.0..=tsirelson).contains(&p) && (0.0..=tsirelson).contains(&f),
            || format!("bound ({p}, {f}) outside [0, 2√2]"),
        )?;
    }

    let quantum = |a: &Direction64, b: &Direction64| -a.dot(b);
    let (cfg, s) = maximize_s(quantum, 15.0, 50).map_err(|e| e.to_string())?;
    check(s >= tsirelson - 1e-6 && s <= tsirelson + 1e-9, || {
        format!("S* = {s}")
    })?;
    let (bound, flipped) = paper_bound(&cfg);

    let naive = |a: &Direction64, b: &Direction64| {
        naive_correlation(a, b, 1, MC_SEED)
            .map(|r| r.scalar_estimate)
            .unwrap_or(f64::NAN)
    };
    let (_, s_naive) = maximize_s(naive, 15.0, 50).map_err(|e| e.to_string())?;
    check(s_naive == 2.0, || format!("naive S* = {s_naive}"))?;
    Ok(format!(
        "bounds in range on 10⁵ quadruples; at maximizer (S, bound, flipped) = ({s:.12}, {bound:.12}, {flipped:.12}); naive S* = {s_naive}"
    ))
}

fn locality() -> Outcome {
    let r = locality_audit(
        &[Direction64::e_z()],
        &[Direction64::e_x(), Direction64::e_y()],
        1_000_000,
        MC_SEED,
    )
    .map_err(|e| e.to_string())?;
    check(r.alice_mismatches == 0, || {
        format!("{} Alice mismatches", r.alice_mismatches)
    })?;
    check(r.bob_mismatches == 0, || {
        format!("{} Bob mismatches", r.bob_mismatches)
    })?;
    let worst = r
        .alice
        .iter()
        .chain(&r.bob)
        .map(|m| m.mean.abs())
        .fold(0.0, f64::max);
    check(worst <= 5e-3, || format!("marginal {worst:e}"))?;

    // the same raw bits whichever remote setting accompanies them
    let a = random_direction(&mut StdRng::seed_from_u64(8));
    for l in HiddenVariable::BOTH {
        let reference = measure_alice(&a, l).raw;
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..1000 {
            let b = random_direction(&mut rng);
            let (oa, _) = epr_ga::joint_trial(&a, &b, l);
            check(oa.raw.bitwise_eq(&reference), || {
                "Alice's outcome depends on b".into()
            })?;
        }
    }
    Ok(format!(
        "0 mismatches in 10⁶ trials, max |marginal| {worst:.1e}"
    ))
}

fn run_cli(args: &[&str], out: &Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_epr-ga"))
        .args(args)
        .arg("--out")
        .arg(out)
        .status()
        .map_err(|e| e.to_string())?;
    check(status.success(), || {
        format!("{args:?} exited with {status}")
    })?;
    std::fs::read(out).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cases: [&[&str]; 9] = [
        &["table", "--convention", "lambda"],
        &["measure", "--a", "30", "--b-vec", "0,0.6,0.8"],
        &[
            "correlate",
            "--a",
            "0",
            "--b",
            "60",
            "--n",
            "200000",
            "--seed",
            "7",
        ],
        &[
            "correlate",
            "--a",
            "0",
            "--b",
            "60",
            "--exact",
            "--format",
            "json",
        ],
        &["correlate", "--naive", "--n", "50000"],
        &[
            "sweep",
            "--step",
            "15",
            "--n",
            "20000",
            "--convention",
            "fixed",
        ],
        &["chsh", "--n", "50000", "--format", "json"],
        &["chsh", "--exact", "--maximize", "--resolution", "30"],
        &["audit", "--n", "100000", "--seed", "11"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let first = run_cli(args, &dir.path().join(format!("{i}-a")))?;
        let second = run_cli(args, &dir.path().join(format!("{i}-b")))?;
        check(!first.is_empty() && first == second, || {
            format!("{args:?} not byte-identical")
        })?;
    }
    Ok(format!(
        "{} invocations byte-identical across two runs",
        cases.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 table fidelity", table_fidelity),
        ("2 outcome dichotomy", outcome_dichotomy),
        ("3 naive constancy", naive_constancy),
        (
            "4 claimed result (lambda convention)",
            claimed_result_lambda,
        ),
        ("5 fixed-basis decomposition", fixed_basis_decomposition),
        ("6 monte carlo convergence", monte_carlo_convergence),
        ("7 chsh", chsh),
        ("8 locality audit", locality),
        ("9 determinism", determinism),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failures += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
