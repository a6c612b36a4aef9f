//! Acceptance criteria, one line each. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shilov::construction::{exponent_is_minimal, run_construction};
use shilov::geometry::{directed_hausdorff, hausdorff, poly_metric, C2Point, CloudTag, PointCloud};
use shilov::pipeline::{build, verify_manifest, write_artifacts, BuildArtifacts, InjectedPair, RunConfig};
use shilov::verify::{
    battery, check_max_modulus_battery, exhaustive_monomial_certificate, hull_search, search_hull_certificate,
    spectrum_gap,
};

const WORKED_PAIR: &str = "[[1,0,1,2,0,1],[0,1,1,2,0,1]]:0.5,0";

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(name: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome { name, pass, detail }
}

fn worked_config() -> RunConfig {
    RunConfig {
        stages: 1,
        injected_pairs: vec![InjectedPair::parse(WORKED_PAIR).unwrap()],
        ..RunConfig::default()
    }
}

fn worked_stage() -> Outcome {
    let t = Instant::now();
    let art = build(&worked_config()).expect("worked build");
    let elapsed = t.elapsed();
    let f = &art.stages[0].function;
    let v = &art.varieties[0];

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut f_err: f64 = 0.0;
    for _ in 0..200 {
        let mut c = || Complex64::from_polar(rng.random::<f64>().sqrt(), rng.random::<f64>() * std::f64::consts::TAU);
        let p = C2Point::new(c(), c());
        let expect = 1.0 - p.z - p.w;
        f_err = f_err.max((f.eval(&p).unwrap() - expect).norm());
    }
    let off_line = v.cloud.iter().map(|p| (p.z + p.w).norm()).fold(0.0, f64::max);
    let re_dev = v
        .cloud
        .iter()
        .map(|p| (f.re(p).map(|re| re - 0.5).unwrap_or(f64::NAN) - 0.5).abs())
        .fold(0.0, f64::max);
    let pass = f_err <= 1e-12
        && off_line <= 1e-10
        && v.boundary_reach >= 0.999
        && re_dev <= 1e-9
        && elapsed < Duration::from_secs(10)
        && !v.cloud.is_empty();
    outcome(
        "worked stage",
        pass,
        format!(
            "|F_1 - (1-z-w)| {f_err:.1e}, off-line {off_line:.1e}, reach {:.6}, |margin - 1/2| {re_dev:.1e}, {} points, {:.2?}",
            v.boundary_reach,
            v.cloud.len(),
            elapsed
        ),
    )
}

fn stage_invariants(art: &BuildArtifacts, elapsed: Duration) -> Outcome {
    let mut origin: f64 = 0.0;
    let mut on_k: f64 = 0.0;
    let mut prev_bound: f64 = 0.0;
    for (j, s) in art.stages.iter().enumerate() {
        let f = &s.function;
        origin = origin.max((f.eval(&C2Point::ORIGIN).unwrap() - 1.0).norm());
        for p in s.k_cloud.iter() {
            on_k = on_k.max(f.log_magnitude(p).map(f64::exp).unwrap_or(f64::INFINITY));
        }
        if j > 0 {
            for p in art.stages[j - 1].l_witnesses.iter().chain(s.k_cloud.iter()) {
                prev_bound = prev_bound.max(f.log_magnitude(p).map(f64::exp).unwrap_or(f64::INFINITY));
            }
        }
    }
    let pass = art.stages.len() == 5
        && origin <= 1e-9
        && on_k <= 1e-6
        && prev_bound < 0.25
        && elapsed < Duration::from_secs(600);
    outcome(
        "stage invariants",
        pass,
        format!(
            "{} stages, max |F(0)-1| {origin:.1e}, max |F| on K {on_k:.1e}, max |F_next| on L u K {prev_bound:.4}, {:.2?}",
            art.stages.len(),
            elapsed
        ),
    )
}

fn variety_in_regions(art: &BuildArtifacts) -> Outcome {
    let mut worst = f64::INFINITY;
    let mut count = 0usize;
    for (j, v) in art.varieties.iter().enumerate() {
        for p in v.cloud.iter() {
            for s in &art.stages[..=j] {
                worst = worst.min(s.function.re(p).map(|re| re - 0.5).unwrap_or(f64::NEG_INFINITY));
                count += 1;
            }
        }
    }
    outcome(
        "varieties stay in the earlier regions",
        worst >= -1e-6,
        format!("min Re F_i - 1/2 = {worst:.6e} over {count} evaluations"),
    )
}

fn separation(art: &BuildArtifacts) -> Outcome {
    let mut sup_m: f64 = 0.0;
    let mut inf_k = f64::INFINITY;
    for s in &art.stages {
        let f = &s.function;
        for p in s.m_witnesses.iter() {
            sup_m = sup_m.max(f.re(p).map(|re| (-re).exp()).unwrap_or(f64::INFINITY));
        }
        for p in s.k_cloud.iter() {
            inf_k = inf_k.min(f.re(p).map(|re| (-re).exp()).unwrap_or(f64::NEG_INFINITY));
        }
    }
    outcome(
        "exp(-F) separates K from M",
        sup_m <= 0.60653 + 1e-6 && inf_k >= 1.0 - 1e-6,
        format!("sup on M {sup_m:.6}, inf on K {inf_k:.9}"),
    )
}

fn exponent_minimality() -> Outcome {
    let cfg = RunConfig {
        n_safety: 1.0,
        ..RunConfig::default()
    };
    let run = run_construction(&cfg.construction().unwrap()).expect("safety-1 build");
    let mut ns = Vec::new();
    let mut pass = run.stages.len() == cfg.stages;
    for w in run.stages.windows(2) {
        let (prev, s) = (&w[0], &w[1]);
        let n = s.exponent.expect("later stage has an exponent").n;
        ns.push(n);
        pass &= exponent_is_minimal(&prev.function, &s.g, &prev.l_witnesses, n).unwrap_or(false);
    }
    outcome("exponent minimality", pass, format!("N = {ns:?} with safety 1"))
}

fn random_cloud(rng: &mut ChaCha8Rng) -> PointCloud {
    let n = rng.random_range(1..40);
    let pts = (0..n)
        .map(|_| {
            let mut c = || Complex64::from_polar(rng.random::<f64>().sqrt(), rng.random::<f64>() * std::f64::consts::TAU);
            C2Point::new(c(), c())
        })
        .collect();
    PointCloud::new(pts, CloudTag::V, None, 1e-12).unwrap()
}

fn brute_hausdorff(a: &PointCloud, b: &PointCloud) -> f64 {
    let directed = |x: &PointCloud, y: &PointCloud| {
        let mut sup: f64 = 0.0;
        for p in x.iter() {
            let mut inf = f64::INFINITY;
            for q in y.iter() {
                inf = inf.min(poly_metric(p, q));
            }
            sup = sup.max(inf);
        }
        sup
    };
    directed(a, b).max(directed(b, a))
}

fn hausdorff_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut symmetric, mut brute, mut worst_triangle) = (true, true, f64::NEG_INFINITY);
    for _ in 0..100 {
        let (a, b, c) = (random_cloud(&mut rng), random_cloud(&mut rng), random_cloud(&mut rng));
        let ab = hausdorff(&a, &b).unwrap();
        symmetric &= ab == hausdorff(&b, &a).unwrap();
        brute &= ab == brute_hausdorff(&a, &b);
        brute &= directed_hausdorff(&a, &b).unwrap().max(directed_hausdorff(&b, &a).unwrap()) == ab;
        let excess = ab - hausdorff(&a, &c).unwrap() - hausdorff(&c, &b).unwrap();
        worst_triangle = worst_triangle.max(excess);
    }
    outcome(
        "Hausdorff metric axioms",
        symmetric && brute && worst_triangle <= 1e-12,
        format!("symmetric {symmetric}, brute force agrees {brute}, worst triangle excess {worst_triangle:.1e}"),
    )
}

fn hull_soundness() -> Outcome {
    let n = 100;
    let mut torus = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let a = i as f64 * std::f64::consts::TAU / n as f64;
            let b = j as f64 * std::f64::consts::TAU / n as f64;
            torus.push(C2Point::new(Complex64::from_polar(1.0, a), Complex64::from_polar(1.0, b)));
        }
    }
    let torus = PointCloud::new(torus, CloudTag::HullCandidate, None, 1e-12).unwrap();
    let search = hull_search(&C2Point::ORIGIN, &torus, 4, 10_000, 0).unwrap();
    let exhaustive = exhaustive_monomial_certificate(&C2Point::ORIGIN, &torus, 4).unwrap();
    let center_ok = search.certificate().is_none() && !exhaustive.separates();

    let circle: Vec<C2Point> = (0..n)
        .map(|k| C2Point::new(Complex64::from_polar(1.0, k as f64 * std::f64::consts::TAU / n as f64), Complex64::new(0.0, 0.0)))
        .collect();
    let circle = PointCloud::new(circle, CloudTag::HullCandidate, None, 1e-12).unwrap();
    let q = C2Point::new(Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0));
    let cert = search_hull_certificate(&q, &circle, 4, 10_000, 0).unwrap();
    let margin = cert.as_ref().map(|c| c.margin).unwrap_or(f64::NAN);
    outcome(
        "hull certificate soundness",
        center_ok && (margin - 0.5).abs() <= 1e-9,
        format!(
            "torus centre: best margin {:.1e} ({} evaluations), best monomial {:.1e}; disk point: margin {margin:.12}",
            search.best.margin, search.evaluations, exhaustive.margin
        ),
    )
}

fn max_modulus(art: &BuildArtifacts, cfg: &RunConfig) -> Outcome {
    let polys = battery(cfg.degree_cap, cfg.denom_cap, cfg.seed);
    let rep = check_max_modulus_battery(&polys, &art.limit.v, &art.limit.y, 1e-6);
    let failures = rep.records.iter().filter(|r| !r.pass).count();
    let worst = rep.records.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    outcome(
        "max-modulus battery",
        polys.len() == 64 && failures == 0,
        format!("{} polynomials, {failures} failures, min sup_Y - sup_V {worst:.3e}", polys.len()),
    )
}

fn spectrum(art: &BuildArtifacts) -> Outcome {
    let rep = spectrum_gap(&art.stages, &art.limit.v).unwrap();
    let margins: Vec<f64> = rep.records.iter().map(|r| r.margin).collect();
    let in_manifest = art.manifest.report.named("spectrum_gap").count() == art.stages.len();
    outcome(
        "spectrum gap",
        margins.len() == art.stages.len() && margins.iter().all(|&m| m > 0.0) && in_manifest,
        format!("margins {}", margins.iter().map(|m| format!("{m:.3e}")).collect::<Vec<_>>().join(", ")),
    )
}

fn determinism(first: &BuildArtifacts, cfg: &RunConfig) -> Outcome {
    let second = build(cfg).expect("second build");
    let same = first.manifest.without_timings().to_json() == second.manifest.without_timings().to_json();
    let dir = tempfile::tempdir().unwrap();
    let path = write_artifacts(first, dir.path()).unwrap();
    let verified = verify_manifest(&path).unwrap();
    outcome(
        "determinism",
        same && verified.reproduces_build(),
        format!(
            "manifests equal {same}, verify mismatches {:?}",
            verified.mismatches
        ),
    )
}

fn main() -> ExitCode {
    let mut results = vec![worked_stage()];

    let cfg = RunConfig::default();
    let t = Instant::now();
    let art = build(&cfg).expect("default build");
    let elapsed = t.elapsed();
    results.push(stage_invariants(&art, elapsed));
    results.push(variety_in_regions(&art));
    results.push(separation(&art));
    results.push(exponent_minimality());
    results.push(hausdorff_axioms());
    results.push(hull_soundness());
    results.push(max_modulus(&art, &cfg));
    results.push(spectrum(&art));
    results.push(determinism(&art, &cfg));

    for r in &results {
        println!("{} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail);
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
