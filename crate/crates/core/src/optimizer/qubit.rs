//! Numerical maximization of `B1` on a qubit with constrained Bloch lengths.

use super::nelder_mead::{multistart, Bounds, NelderMead};
use super::params::{xz_direction, QubitEffectParams, THETA_RANGE};
use super::OptimizationReport;
use crate::error::{check_range, Error, Result};
use crate::quantum::bloch::normalize_or_default;
use crate::quantum::linalg::{add3, dot3, scale3, sub3};
use crate::quantum::{BinaryMeasurement, BlochState, DensityMatrix, Effect};
use crate::sequence::{self, ProtocolPair};
use crate::witness;

/// Best initial and "+" post-measurement states for fixed effects and Bloch
/// lengths: `(initial, post after setting 0, post after setting 1)`.
///
/// Post-measurement directions are `+-(q0 v0 - q1 v1)`; the initial direction
/// is `q0 X0 v0 + q1 X1 v1` with `X0 = 1 + r0 - r1 + w0 |q0 v0 - q1 v1|` and
/// `X1 = 1 + r1 - r0 + w1 |q0 v0 - q1 v1|`. Vanishing vectors fall back to +z.
pub fn optimal_states_for_effects(
    e0: &QubitEffectParams,
    e1: &QubitEffectParams,
    p: f64,
    w0: f64,
    w1: f64,
) -> Result<(BlochState, BlochState, BlochState)> {
    check_range("p", p, 0.0, 1.0)?;
    check_range("w0", w0, 0.0, 1.0)?;
    check_range("w1", w1, 0.0, 1.0)?;
    let diff = sub3(scale3(e0.v, e0.q), scale3(e1.v, e1.q));
    let spread = (e0.q * e0.q + e1.q * e1.q - 2.0 * e0.q * e1.q * dot3(e0.v, e1.v)).max(0.0).sqrt();
    let x0 = 1.0 + e0.r - e1.r + w0 * spread;
    let x1 = 1.0 + e1.r - e0.r + w1 * spread;
    let init_dir = add3(scale3(e0.v, e0.q * x0), scale3(e1.v, e1.q * x1));
    let post_dir = normalize_or_default(diff);
    Ok((
        BlochState::along(p, init_dir)?,
        BlochState::new(w0, post_dir)?,
        BlochState::along(w1, scale3(diff, -1.0))?,
    ))
}

/// `B1` for qubit effects and arbitrary initial and "+" post states, written
/// out in Bloch coordinates: `p(+|x) = r_x + q_x a . v_x`.
pub fn b1_bloch(
    e0: &QubitEffectParams,
    e1: &QubitEffectParams,
    init: &BlochState,
    post0: &BlochState,
    post1: &BlochState,
) -> f64 {
    let first = |e: &QubitEffectParams| e.r + e.q * dot3(init.vector(), e.v);
    let second = |post: &BlochState, e: &QubitEffectParams| e.r + e.q * dot3(post.vector(), e.v);
    first(e0) * (second(post0, e0) + 1.0 - second(post0, e1)) + first(e1) * (second(post1, e1) + 1.0 - second(post1, e0))
}

/// Decodes `[r0, s0, r1, s1, theta]`; `v0 = +z` and `v1` lies in the x-z plane.
pub fn decode(x: &[f64]) -> (QubitEffectParams, QubitEffectParams) {
    (
        QubitEffectParams::from_unit_box(x[0], x[1], [0.0, 0.0, 1.0]),
        QubitEffectParams::from_unit_box(x[2], x[3], xz_direction(x[4])),
    )
}

pub fn search_bounds() -> Bounds {
    Bounds::new(vec![0.0, 0.0, 0.0, 0.0, THETA_RANGE.0], vec![1.0, 1.0, 1.0, 1.0, THETA_RANGE.1])
}

/// Full measure-and-prepare protocol for the given effects and states; the
/// "-" branches re-prepare the maximally mixed state.
pub fn build_protocol(
    e0: &QubitEffectParams,
    e1: &QubitEffectParams,
    init: &BlochState,
    post0: &BlochState,
    post1: &BlochState,
) -> Result<(DensityMatrix, ProtocolPair)> {
    let mixed = DensityMatrix::maximally_mixed(2)?;
    let m0 = BinaryMeasurement::new(Effect::new(e0.matrix())?, post0.to_density(), mixed.clone())?;
    let m1 = BinaryMeasurement::new(Effect::new(e1.matrix())?, post1.to_density(), mixed)?;
    Ok((init.to_density(), ProtocolPair::new(m0, m1)?))
}

fn simulate_params(x: &[f64], p: f64, w: f64) -> Result<f64> {
    let (e0, e1) = decode(x);
    let (init, post0, post1) = optimal_states_for_effects(&e0, &e1, p, w, w)?;
    let (rho, protocol) = build_protocol(&e0, &e1, &init, &post0, &post1)?;
    Ok(sequence::b1(&sequence::correlations(&rho, &protocol)?))
}

/// Parameters of the strategy that always answers "+".
pub const DETERMINISTIC_PARAMS: [f64; 5] = [1.0, 0.0, 1.0, 0.0, 0.0];

/// Multistart search for the largest `B1` when the initial state has Bloch
/// length `p` and both "+" post states have length `w`.
///
/// Candidates are scored in Bloch coordinates; the winner is re-simulated
/// with density matrices and that value is reported.
pub fn maximize_b1_qubit(p: f64, w: f64, restarts: usize, seed: u64) -> Result<OptimizationReport> {
    check_range("p", p, 0.0, 1.0)?;
    check_range("w", w, 0.0, 1.0)?;
    if restarts == 0 {
        return Err(Error::domain("restarts must be at least 1"));
    }
    let objective = |x: &[f64]| {
        let (e0, e1) = decode(x);
        match optimal_states_for_effects(&e0, &e1, p, w, w) {
            Ok((init, post0, post1)) => b1_bloch(&e0, &e1, &init, &post0, &post1),
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let best = multistart(&objective, &search_bounds(), restarts, seed, &NelderMead::default());
    let mut params = best.x;
    let mut value = simulate_params(&params, p, w)?;

    let closed = witness::b1_max_constrained(p, w)?;
    if w <= witness::branch_threshold(p) && (value - 2.0).abs() <= 1e-9 {
        let det = simulate_params(&DETERMINISTIC_PARAMS, p, w)?;
        if det >= value - 1e-9 {
            params = DETERMINISTIC_PARAMS.to_vec();
            value = det;
        }
    }
    Ok(OptimizationReport::new(value, params, Some(closed), restarts, seed))
}

/// True when both effects in `[r0, s0, r1, s1, theta]` are the identity.
pub fn is_deterministic(params: &[f64]) -> bool {
    let (e0, e1) = decode(params);
    [e0, e1].iter().all(|e| (e.r - 1.0).abs() < 1e-9 && e.q.abs() < 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::params::random_unit_vector;
    use crate::quantum::linalg::norm3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn simulate(e0: &QubitEffectParams, e1: &QubitEffectParams, s: (BlochState, BlochState, BlochState)) -> f64 {
        let (rho, protocol) = build_protocol(e0, e1, &s.0, &s.1, &s.2).unwrap();
        sequence::b1(&sequence::correlations(&rho, &protocol).unwrap())
    }

    #[test]
    fn canonical_protocol_states_are_recovered() {
        let e0 = QubitEffectParams::deterministic();
        let e1 = QubitEffectParams::projective([0.0, 0.0, 1.0]);
        let (init, post0, post1) = optimal_states_for_effects(&e0, &e1, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(init.vector(), [0.0, 0.0, 1.0]);
        assert_eq!(post0.vector(), [0.0, 0.0, -1.0]);
        assert_eq!(post1.vector(), [0.0, 0.0, 1.0]);
        assert!((simulate(&e0, &e1, (init, post0, post1)) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_effects_fall_back_to_z() {
        let e = QubitEffectParams { r: 0.4, q: 0.0, v: [1.0, 0.0, 0.0] };
        let (a, b, c) = optimal_states_for_effects(&e, &e, 0.5, 0.5, 0.5).unwrap();
        for s in [a, b, c] {
            assert_eq!(s.direction(), [0.0, 0.0, 1.0]);
        }
    }

    #[test]
    fn bloch_formula_matches_matrix_simulation() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..500 {
            let e0 = QubitEffectParams::sample(&mut rng);
            let e1 = QubitEffectParams::sample(&mut rng);
            let states: Vec<BlochState> =
                (0..3).map(|_| BlochState::new(rng.random(), random_unit_vector(&mut rng)).unwrap()).collect();
            let fast = b1_bloch(&e0, &e1, &states[0], &states[1], &states[2]);
            let slow = simulate(&e0, &e1, (states[0], states[1], states[2]));
            assert!((fast - slow).abs() < 1e-13);
        }
    }

    #[test]
    fn symmetric_effects_against_direction_search() {
        // v1 = -v0 with equal r and q: q0 X0 v0 + q1 X1 v1 = q (X0 - X1) v0, so
        // the initial state points along +-v0 according to the sign of w0 - w1.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..5 {
            let v = random_unit_vector(&mut rng);
            let r: f64 = rng.random_range(0.2..0.8);
            let q = rng.random_range(0.05..r.min(1.0 - r));
            let e0 = QubitEffectParams { r, q, v };
            let e1 = QubitEffectParams { r, q, v: scale3(v, -1.0) };
            let (p, w0, w1) = (rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
            let (init, post0, post1) = optimal_states_for_effects(&e0, &e1, p, w0, w1).unwrap();
            let sign = (w0 - w1).signum();
            assert!(norm3(sub3(init.direction(), scale3(v, sign))) < 1e-12);
            let best = b1_bloch(&e0, &e1, &init, &post0, &post1);
            let mut brute = f64::NEG_INFINITY;
            for _ in 0..200_000 {
                let a = BlochState::new(p, random_unit_vector(&mut rng)).unwrap();
                let b = BlochState::new(w0, random_unit_vector(&mut rng)).unwrap();
                let c = BlochState::new(w1, random_unit_vector(&mut rng)).unwrap();
                brute = brute.max(b1_bloch(&e0, &e1, &a, &b, &c));
            }
            assert!(brute <= best + 1e-12);
            assert!(best - brute < 5e-2, "optimal {best} vs random search {brute}");
        }
    }

    #[test]
    fn optimal_states_dominate_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..1000 {
            let e0 = QubitEffectParams::sample(&mut rng);
            let e1 = QubitEffectParams::sample(&mut rng);
            let (p, w0, w1) = (rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
            let (a, b, c) = optimal_states_for_effects(&e0, &e1, p, w0, w1).unwrap();
            let best = b1_bloch(&e0, &e1, &a, &b, &c);
            for _ in 0..20 {
                let a = BlochState::new(p, random_unit_vector(&mut rng)).unwrap();
                let b = BlochState::new(w0, random_unit_vector(&mut rng)).unwrap();
                let c = BlochState::new(w1, random_unit_vector(&mut rng)).unwrap();
                assert!(b1_bloch(&e0, &e1, &a, &b, &c) <= best + 1e-9);
            }
        }
    }

    #[test]
    fn maximize_examples() {
        let r = maximize_b1_qubit(1.0, 1.0, 100, 1).unwrap();
        assert!((r.best_value - 3.0).abs() < 1e-6, "{r:?}");
        let r = maximize_b1_qubit(0.3, 0.1, 100, 1).unwrap();
        assert!((r.best_value - 2.0).abs() < 1e-6, "{r:?}");
        assert!(is_deterministic(&r.best_params));
        let r = maximize_b1_qubit(0.0, 1.0, 100, 1).unwrap();
        assert!((r.best_value - 2.5).abs() < 1e-6, "{r:?}");
        assert!(maximize_b1_qubit(0.5, 0.5, 0, 1).is_err());
        assert!(maximize_b1_qubit(1.5, 0.5, 10, 1).is_err());
    }
}
