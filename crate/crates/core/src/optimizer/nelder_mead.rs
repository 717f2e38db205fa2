//! Box-constrained Nelder-Mead maximization with seeded multistart.
//!
//! Trial points are clamped onto the box before evaluation. After the simplex
//! collapses the search restarts from the best vertex with a fresh simplex
//! until a polish round no longer improves the value.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct Bounds {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Bounds {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        Self { lo, hi }
    }

    pub fn unit(n: usize) -> Self {
        Self::new(vec![0.0; n], vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn project(&self, x: &mut [f64]) {
        for (i, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lo[i], self.hi[i]);
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.dim()).map(|i| self.lo[i] + rng.random::<f64>() * (self.hi[i] - self.lo[i])).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    /// Spread of simplex values at which a round stops.
    pub ftol: f64,
    /// Simplex diameter, relative to the box, at which a round stops.
    pub xtol: f64,
    /// Initial simplex edge relative to the box width.
    pub step: f64,
    pub max_evals: usize,
    pub polish_rounds: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self { ftol: 1e-13, xtol: 1e-10, step: 0.2, max_evals: 40_000, polish_rounds: 8 }
    }
}

#[derive(Debug, Clone)]
pub struct LocalResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

impl NelderMead {
    pub fn maximize<F: Fn(&[f64]) -> f64>(&self, f: &F, x0: &[f64], bounds: &Bounds) -> LocalResult {
        let mut x = x0.to_vec();
        bounds.project(&mut x);
        let mut best = LocalResult { value: f(&x), x, evals: 1 };
        let mut step = self.step;
        for _ in 0..=self.polish_rounds {
            let round = self.round(f, &best.x, bounds, step);
            let evals = best.evals + round.evals;
            let improved = round.value > best.value + 1e-14;
            if round.value >= best.value {
                best = LocalResult { evals, ..round };
            } else {
                best.evals = evals;
            }
            if !improved || best.evals >= self.max_evals {
                break;
            }
            step = (step * 0.5).max(1e-3);
        }
        best
    }

    fn round<F: Fn(&[f64]) -> f64>(&self, f: &F, x0: &[f64], bounds: &Bounds, step: f64) -> LocalResult {
        let n = x0.len();
        let nf = n as f64;
        // adaptive coefficients for higher dimensions
        let (alpha, gamma, rho, sigma) = if n > 2 {
            (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf)
        } else {
            (1.0, 2.0, 0.5, 0.5)
        };
        let width: Vec<f64> = (0..n).map(|i| bounds.hi[i] - bounds.lo[i]).collect();

        // minimize -f
        let eval = |x: &mut Vec<f64>, evals: &mut usize| -> f64 {
            bounds.project(x);
            *evals += 1;
            -f(x)
        };

        let mut evals = 0;
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        let mut start = x0.to_vec();
        let v = eval(&mut start, &mut evals);
        simplex.push((start, v));
        for i in 0..n {
            let mut p = x0.to_vec();
            let h = step * width[i];
            p[i] = if p[i] + h <= bounds.hi[i] { p[i] + h } else { p[i] - h };
            let v = eval(&mut p, &mut evals);
            simplex.push((p, v));
        }

        while evals < self.max_evals {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[n].1 - simplex[0].1;
            let diameter = simplex[1..]
                .iter()
                .map(|(p, _)| (0..n).map(|i| ((p[i] - simplex[0].0[i]) / width[i].max(1e-300)).abs()).fold(0.0, f64::max))
                .fold(0.0, f64::max);
            if spread <= self.ftol && diameter <= self.xtol.max(1e-6) || diameter <= self.xtol {
                break;
            }

            let mut centroid = vec![0.0; n];
            for (p, _) in &simplex[..n] {
                for i in 0..n {
                    centroid[i] += p[i] / nf;
                }
            }
            let worst = simplex[n].clone();
            let along = |t: f64| -> Vec<f64> { (0..n).map(|i| centroid[i] + t * (worst.0[i] - centroid[i])).collect() };

            let mut xr = along(-alpha);
            let fr = eval(&mut xr, &mut evals);
            if fr < simplex[0].1 {
                let mut xe = along(-alpha * gamma);
                let fe = eval(&mut xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (mut xc, outside) = if fr < worst.1 { (along(-alpha * rho), true) } else { (along(rho), false) };
            let fc = eval(&mut xc, &mut evals);
            if (outside && fc <= fr) || (!outside && fc < worst.1) {
                simplex[n] = (xc, fc);
                continue;
            }
            let best = simplex[0].0.clone();
            for k in 1..=n {
                let mut p: Vec<f64> = (0..n).map(|i| best[i] + sigma * (simplex[k].0[i] - best[i])).collect();
                let v = eval(&mut p, &mut evals);
                simplex[k] = (p, v);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, v) = simplex.swap_remove(0);
        LocalResult { x, value: -v, evals }
    }
}

#[derive(Debug, Clone)]
pub struct MultistartResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub restart: usize,
    pub evals: usize,
}

/// Generator for restart `index` under `seed`; independent of execution order.
pub fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Runs `restarts` local searches from seeded uniform starting points and
/// keeps the best, breaking ties by the lower restart index.
pub fn multistart<F>(f: &F, bounds: &Bounds, restarts: usize, seed: u64, nm: &NelderMead) -> MultistartResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let run = |k: usize| {
        let mut rng = restart_rng(seed, k);
        let x0 = bounds.sample(&mut rng);
        (k, nm.maximize(f, &x0, bounds))
    };

    #[cfg(feature = "parallel")]
    let results: Vec<(usize, LocalResult)> = {
        use rayon::prelude::*;
        (0..restarts).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<(usize, LocalResult)> = (0..restarts).map(run).collect();

    let evals = results.iter().map(|(_, r)| r.evals).sum();
    let (restart, best) = results
        .into_iter()
        .reduce(|a, b| if b.1.value > a.1.value || (b.1.value == a.1.value && b.0 < a.0) { b } else { a })
        .expect("at least one restart");
    MultistartResult { x: best.x, value: best.value, restart, evals }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_maximum() {
        let f = |x: &[f64]| -(x[0] - 0.3).powi(2) - 2.0 * (x[1] - 0.7).powi(2) + 1.0;
        let r = NelderMead::default().maximize(&f, &[0.9, 0.1], &Bounds::unit(2));
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!((r.x[0] - 0.3).abs() < 1e-5 && (r.x[1] - 0.7).abs() < 1e-5);
    }

    #[test]
    fn reaches_box_corner() {
        let f = |x: &[f64]| x.iter().sum::<f64>();
        let r = NelderMead::default().maximize(&f, &[0.2, 0.5, 0.1, 0.9], &Bounds::unit(4));
        assert!((r.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rosenbrock_in_a_box() {
        let f = |x: &[f64]| -(1.0 - x[0]).powi(2) - 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let b = Bounds::new(vec![-2.0, -2.0], vec![2.0, 2.0]);
        let r = NelderMead::default().maximize(&f, &[-1.5, 1.5], &b);
        assert!(r.value > -1e-10, "{r:?}");
    }

    #[test]
    fn multistart_is_deterministic_and_escapes_local_maxima() {
        // two bumps, the higher one is narrow
        let f = |x: &[f64]| {
            (-(x[0] - 0.2).powi(2) * 20.0).exp() + 1.5 * (-(x[0] - 0.85).powi(2) * 400.0).exp()
        };
        let b = Bounds::unit(1);
        let nm = NelderMead::default();
        let a = multistart(&f, &b, 30, 42, &nm);
        let c = multistart(&f, &b, 30, 42, &nm);
        assert_eq!(a.x, c.x);
        assert_eq!(a.restart, c.restart);
        assert!((a.value - 1.5).abs() < 1e-3);
    }
}
