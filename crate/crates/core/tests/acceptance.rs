//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use purity_witness::cert::{certify, estimate_b1, sample_counts, CountsRecord, SettingCounts};
use purity_witness::optimizer::{self, SOUNDNESS_TOL};
use purity_witness::quantum::linalg;
use purity_witness::quantum::{
    density_to_bloch, random_density, wootters_concurrence, BinaryMeasurement, BlochState, Effect, Subsystem,
};
use purity_witness::sequence::{self, LinearFunctional, ProtocolPair};
use purity_witness::witness;

struct Verdict {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn timed(limit: Duration, f: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let v = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    Verdict {
        pass: v.pass && in_time,
        detail: format!("{}; {:.2?} (limit {:?}){}", v.detail, elapsed, limit, if in_time { "" } else { " TOO SLOW" }),
    }
}

fn eq5_reproduction() -> Verdict {
    let mut worst: f64 = 0.0;
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let (rho, protocol) = sequence::theorem2_protocol(p, 1.0).unwrap();
        let b = sequence::b1(&sequence::correlations(&rho, &protocol).unwrap());
        worst = worst.max((b - (5.0 + p) / 2.0).abs());
    }
    check(worst <= 1e-12, format!("11 values, max |B1 - (5+p)/2| = {worst:.1e}"))
}

fn theorem2_surface() -> Verdict {
    let mut worst_gap: f64 = 0.0;
    let mut worst_excess = f64::NEG_INFINITY;
    for i in 0..=10 {
        for j in 0..=10 {
            let (p, w) = (i as f64 / 10.0, j as f64 / 10.0);
            let r = optimizer::maximize_b1_qubit(p, w, 100, 2024).unwrap();
            let closed = witness::b1_max_constrained(p, w).unwrap();
            worst_gap = worst_gap.max((r.best_value - closed).abs());
            worst_excess = worst_excess.max(r.best_value - closed);
        }
    }
    check(
        worst_gap <= 1e-6 && worst_excess <= SOUNDNESS_TOL,
        format!("121 points, max gap {worst_gap:.1e}, max excess {worst_excess:.1e}"),
    )
}

/// Counts equal to `table * n` exactly; `n` is a power of two so that the
/// dyadic probabilities of the canonical protocol stay exact.
fn exact_counts(p: f64, n: u64) -> CountsRecord {
    let (rho, protocol) = sequence::theorem2_protocol(p, 1.0).unwrap();
    let g = *sequence::correlations(&rho, &protocol).unwrap().grid();
    let mut settings = [[SettingCounts::default(); 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            let c = |a: usize, b: usize| {
                let v = g[x][y][a][b] * n as f64;
                assert!((v - v.round()).abs() < 1e-6, "table entry not exact at this n");
                v.round() as u64
            };
            settings[x][y] = SettingCounts::new(c(0, 0), c(0, 1), c(1, 0), c(1, 1));
        }
    }
    CountsRecord::new(format!("exact p={p}"), None, settings).unwrap()
}

fn observation1_endpoints() -> Verdict {
    let n = 1 << 30;
    let top = certify(&exact_counts(1.0, n), 0.05).unwrap();
    let mid = certify(&exact_counts(0.5, n), 0.05).unwrap();
    let low = certify(&exact_counts(0.0, n), 0.05).unwrap();
    let below = witness::purity_lower_bound(2.4).unwrap();
    let ok_top = (top.b1_hat - 3.0).abs() < 1e-12 && top.purity_bound.point.purity_lower >= 1.0 - 1e-9;
    let ok_mid = (mid.b1_hat - 2.75).abs() < 1e-12 && (mid.purity_bound.point.purity_lower - 0.625).abs() <= 1e-9;
    let ok_low = (low.b1_hat - 2.5).abs() < 1e-12
        && low.purity_bound.point.purity_lower == 0.5
        && low.purity_bound.point.trivial
        && low.flags.purity_trivial
        && below.trivial
        && below.purity_lower == 0.5;
    check(
        ok_top && ok_mid && ok_low,
        format!(
            "B1=3 -> {:.12}, B1=2.75 -> {:.12}, B1=2.5 -> {} (trivial {})",
            top.purity_bound.point.purity_lower,
            mid.purity_bound.point.purity_lower,
            low.purity_bound.point.purity_lower,
            low.purity_bound.point.trivial
        ),
    )
}

fn wmax_identity() -> Verdict {
    let mut worst: f64 = 0.0;
    for i in 0..=100 {
        let p = i as f64 / 100.0;
        let purity = 0.5 * (1.0 + p * p);
        for j in 0..=100 {
            // B1 in (2, (5 + p)/2]
            let b = 2.0 + 0.5 * (1.0 + p) * (1e-3 + (1.0 - 1e-3) * j as f64 / 100.0);
            let got = witness::postmeasurement_purity_bound(b, purity).unwrap().purity_lower;
            let t = (4.0 * b - 7.0 - p) / (3.0 + p);
            let inverted = 0.5 * (1.0 + t * t);
            worst = worst.max((got - inverted).abs());
        }
    }
    let worked = witness::postmeasurement_purity_bound(2.75, 1.0).unwrap().purity_lower;
    check(
        worst <= 1e-10 && (worked - 0.78125).abs() <= 1e-10,
        format!("101x101 grid, max deviation {worst:.1e}; (2.75, P=1) -> {worked}"),
    )
}

fn robustness_identity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    while count < 100 {
        let p: f64 = rng.random();
        let eps: f64 = rng.random();
        if 1.0 - eps <= witness::branch_threshold(p) {
            continue;
        }
        let lhs = witness::b1_max_initial(p).unwrap() - witness::b1_max_constrained(p, 1.0 - eps).unwrap();
        let rhs = (3.0 + p) / 4.0 * eps;
        worst = worst.max((lhs - rhs).abs()).max((witness::robustness_penalty(p, eps).unwrap() - rhs).abs());
        count += 1;
    }
    check(worst <= 1e-12, format!("100 pairs, max deviation {worst:.1e}"))
}

fn qudit_bounds() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [3, 4, 5] {
        let r = optimizer::maximize_b1_qudit_maxmixed(d, 100, 7).unwrap();
        let bound = optimizer::qudit::maxmixed_bound(d);
        let attains = (r.best_value - bound).abs() <= 1e-5;
        let sound = r.best_value <= bound + SOUNDNESS_TOL;
        ok &= attains && sound;
        parts.push(format!(
            "d={d}: best {:.7} vs bound {bound:.7} ({})",
            r.best_value,
            match (attains, sound) {
                (true, true) => "ok",
                (false, true) => "not attained",
                _ => "EXCEEDS",
            }
        ));
    }
    for d in [4, 5, 6] {
        let (rho, protocol) = sequence::qudit_maxmixed_protocol(d).unwrap();
        let b = sequence::b1(&sequence::correlations(&rho, &protocol).unwrap());
        let exact = (b - 4.0 * (1.0 - 1.0 / d as f64)).abs() <= 1e-12;
        ok &= exact;
        if !exact {
            parts.push(format!("protocol d={d} gives {b}"));
        }
    }
    let (rho, protocol) = sequence::qutrit_value4_protocol().unwrap();
    let b4 = sequence::b1(&sequence::correlations(&rho, &protocol).unwrap());
    ok &= (b4 - 4.0).abs() <= 1e-12;
    parts.push(format!("qudit protocols exact for d=4,5,6; qutrit value {b4}"));
    check(ok, parts.join("; "))
}

/// Canonical protocol aligned with Bloch direction `n`: reaches `(5 + p)/2`.
fn aligned_protocol(n: [f64; 3]) -> ProtocolPair {
    let minus_n = [-n[0], -n[1], -n[2]];
    let meas0 = BinaryMeasurement::deterministic_plus(BlochState::along(1.0, minus_n).unwrap().to_density());
    let proj = linalg::bloch_operator(0.5, [0.5 * n[0], 0.5 * n[1], 0.5 * n[2]]);
    let up = BlochState::along(1.0, n).unwrap().to_density();
    let meas1 = BinaryMeasurement::new(Effect::new(proj).unwrap(), up.clone(), up).unwrap();
    ProtocolPair::new(meas0, meas1).unwrap()
}

fn concurrence_sandwich() -> Verdict {
    let slack = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut sandwich_min = f64::INFINITY;
    let mut observation_min = f64::INFINITY;
    let mut aligned_min = f64::INFINITY;
    for k in 0..10_000u64 {
        let rank = 1 + (k % 4) as usize;
        let rho = random_density(4, rank, 10_000 + k).unwrap();
        let c = wootters_concurrence(&rho).unwrap();
        let bounds = witness::concurrence_bounds_from_state(&rho).unwrap();
        sandwich_min = sandwich_min.min(c - bounds.lower.unwrap()).min(bounds.upper - c);

        let rho_a = rho.partial_trace(Subsystem::B).unwrap();
        for _ in 0..100 {
            let protocol = sequence::random_qubit_protocol(&mut rng).unwrap();
            let b = sequence::b1(&sequence::correlations(&rho_a, &protocol).unwrap());
            let upper = witness::concurrence_upper_from_b1(b).unwrap().upper;
            observation_min = observation_min.min(upper - c);
        }
        let bloch = density_to_bloch(&rho_a).unwrap();
        let b = sequence::b1(&sequence::correlations(&rho_a, &aligned_protocol(bloch.direction())).unwrap());
        aligned_min = aligned_min.min(witness::concurrence_upper_from_b1(b).unwrap().upper - c);
    }
    check(
        sandwich_min >= -slack && observation_min >= -slack && aligned_min >= -slack,
        format!(
            "1e4 states: min sandwich margin {sandwich_min:.1e}; 1e6 random protocols min margin {observation_min:.1e}; \
             optimal-protocol min margin {aligned_min:.1e}"
        ),
    )
}

fn monotonicity() -> Verdict {
    let purities: Vec<f64> = (0..8).map(|k| 0.5 + 0.5 * k as f64 / 7.0).collect();
    let sweep = optimizer::monotonicity_sweep(&LinearFunctional::b1(), 2, &purities, 30, 11).unwrap();
    let monotone = sweep.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-5);
    let worst = sweep
        .iter()
        .map(|&(purity, v)| (v - (5.0 + (2.0 * purity - 1.0).sqrt()) / 2.0).abs())
        .fold(0.0, f64::max);
    check(monotone && worst <= 1e-5, format!("8 purities, non-decreasing {monotone}, max deviation from (5+p)/2 {worst:.1e}"))
}

fn statistical_soundness() -> Verdict {
    let delta = 0.05;
    let trials = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut violations = 0;
    for t in 0..trials {
        // tight protocol: observed B1 equals the maximum for the true purity
        let p: f64 = rng.random();
        let shots = [100u64, 1000, 10_000][t % 3];
        let (rho, protocol) = sequence::theorem2_protocol(p, 1.0).unwrap();
        let table = sequence::correlations(&rho, &protocol).unwrap();
        let rec = sample_counts(&table, shots, 5000 + t as u64, "trial").unwrap();
        let true_purity = rho.purity();
        let violated = match certify(&rec, delta) {
            Ok(c) => c.purity_lower > true_purity + 1e-12,
            Err(_) => estimate_b1(&rec, delta).unwrap().b1_lower_conf > 3.0,
        };
        violations += usize::from(violated);
    }
    let rate = violations as f64 / trials as f64;
    check(rate <= 0.08, format!("{violations}/{trials} violated certificates ({:.1}%, allowed 8%)", 100.0 * rate))
}

type Criterion = (&'static str, Duration, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("1 B1 maximum (5+p)/2 reproduced", Duration::from_secs(1), eq5_reproduction),
        ("2 constrained maximum surface", Duration::from_secs(300), theorem2_surface),
        ("3 purity bound endpoints", Duration::from_secs(60), observation1_endpoints),
        ("4 post-measurement purity identity", Duration::from_secs(60), wmax_identity),
        ("5 robustness identity", Duration::from_secs(60), robustness_identity),
        ("6 qudit bounds", Duration::from_secs(600), qudit_bounds),
        ("7 concurrence sandwich and temporal bound", Duration::from_secs(600), concurrence_sandwich),
        ("8 monotonicity in purity", Duration::from_secs(600), monotonicity),
        ("9 end-to-end statistical soundness", Duration::from_secs(300), statistical_soundness),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        let v = timed(limit, f);
        println!("acceptance {name}: {} ({})", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance summary: {} of 9 criteria failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
