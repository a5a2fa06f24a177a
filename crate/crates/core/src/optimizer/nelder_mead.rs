//! Nelder–Mead simplex minimization with dimension-adaptive coefficients
//! (Gao & Han, 2012) and simplex restarts around the incumbent.
//!
//! `+∞` is a legal objective value and marks infeasible points; it is never
//! accepted over a finite value.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadConfig {
    /// Objective evaluations allowed in total, restarts included.
    pub max_evals: usize,
    /// Edge length of each fresh simplex.
    pub initial_step: f64,
    /// A simplex whose value spread and diameter fall below these is restarted.
    pub f_tol: f64,
    pub x_tol: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            max_evals: 20_000,
            initial_step: 0.5,
            f_tol: 1e-12,
            x_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub iterations: usize,
    pub restarts: usize,
}

struct Coefficients {
    reflect: f64,
    expand: f64,
    contract: f64,
    shrink: f64,
}

impl Coefficients {
    fn adaptive(n: usize) -> Self {
        let n = n.max(2) as f64;
        Self {
            reflect: 1.0,
            expand: 1.0 + 2.0 / n,
            contract: 0.75 - 0.5 / n,
            shrink: 1.0 - 1.0 / n,
        }
    }
}

/// `a` strictly better than `b`, with `+∞` never better than anything.
fn better(a: f64, b: f64) -> bool {
    a < b || (b.is_nan() && !a.is_nan())
}

pub fn minimize<F>(mut f: F, x0: &[f64], cfg: &NelderMeadConfig) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let c = Coefficients::adaptive(n);
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut best_x = x0.to_vec();
    let mut best_f = eval(x0, &mut evals);
    let mut iterations = 0usize;
    let mut restarts = 0usize;
    if n == 0 {
        return NelderMeadResult {
            x: best_x,
            f: best_f,
            evals,
            iterations,
            restarts,
        };
    }

    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    'outer: while evals + n < cfg.max_evals {
        // Fresh simplex around the incumbent.
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((best_x.clone(), best_f));
        for i in 0..n {
            let mut v = best_x.clone();
            v[i] += cfg.initial_step;
            let fv = eval(&v, &mut evals);
            simplex.push((v, fv));
        }

        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if better(simplex[0].1, best_f) {
                best_f = simplex[0].1;
                best_x.clone_from(&simplex[0].0);
            }
            if evals + 2 > cfg.max_evals {
                break 'outer;
            }
            let lo = simplex[0].1;
            let hi = simplex[n].1;
            let spread = if lo.is_finite() && hi.is_finite() {
                hi - lo
            } else {
                f64::INFINITY
            };
            // The diameter is O(n²); only look at it when the values have
            // converged, or periodically to catch a collapse among infinities.
            if spread <= cfg.f_tol || iterations.is_multiple_of(n) {
                let diameter = simplex[1..]
                    .iter()
                    .map(|(v, _)| {
                        v.iter()
                            .zip(&simplex[0].0)
                            .map(|(a, b)| (a - b).abs())
                            .fold(0.0, f64::max)
                    })
                    .fold(0.0, f64::max);
                if (spread <= cfg.f_tol && diameter <= cfg.x_tol) || diameter <= cfg.x_tol * 1e-3 {
                    restarts += 1;
                    continue 'outer;
                }
            }
            iterations += 1;

            centroid.iter_mut().for_each(|v| *v = 0.0);
            for (v, _) in &simplex[..n] {
                for (ci, vi) in centroid.iter_mut().zip(v) {
                    *ci += vi;
                }
            }
            centroid.iter_mut().for_each(|v| *v /= n as f64);

            let worst = simplex[n].0.clone();
            let f_worst = simplex[n].1;
            let f_second = simplex[n - 1].1;
            let point = |coef: f64, out: &mut Vec<f64>| {
                for ((o, ci), wi) in out.iter_mut().zip(&centroid).zip(&worst) {
                    *o = ci + coef * (ci - wi);
                }
            };

            point(c.reflect, &mut trial);
            let f_r = eval(&trial, &mut evals);
            if better(f_r, lo) {
                point(c.reflect * c.expand, &mut trial2);
                let f_e = eval(&trial2, &mut evals);
                if better(f_e, f_r) {
                    simplex[n] = (trial2.clone(), f_e);
                } else {
                    simplex[n] = (trial.clone(), f_r);
                }
                continue;
            }
            if better(f_r, f_second) {
                simplex[n] = (trial.clone(), f_r);
                continue;
            }
            if better(f_r, f_worst) {
                point(c.reflect * c.contract, &mut trial2);
                let f_c = eval(&trial2, &mut evals);
                if !better(f_r, f_c) {
                    simplex[n] = (trial2.clone(), f_c);
                    continue;
                }
            } else {
                point(-c.contract, &mut trial2);
                let f_c = eval(&trial2, &mut evals);
                if better(f_c, f_worst) {
                    simplex[n] = (trial2.clone(), f_c);
                    continue;
                }
            }

            // Shrink toward the best vertex.
            if evals + n > cfg.max_evals {
                break 'outer;
            }
            let (head, tail) = simplex.split_at_mut(1);
            let x_best = &head[0].0;
            for (v, fv) in tail.iter_mut() {
                for (vi, bi) in v.iter_mut().zip(x_best) {
                    *vi = bi + c.shrink * (*vi - bi);
                }
                *fv = eval(v, &mut evals);
            }
        }
    }

    NelderMeadResult {
        x: best_x,
        f: best_f,
        evals,
        iterations,
        restarts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let cfg = NelderMeadConfig {
            max_evals: 5000,
            ..Default::default()
        };
        let r = minimize(rosen, &[-1.2, 1.0], &cfg);
        assert!(r.f < 1e-10, "{r:?}");
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4);
        assert!(r.evals <= 5000);
    }

    #[test]
    fn minimizes_quadratic_in_many_dims() {
        let n = 20;
        let quad = |x: &[f64]| {
            x.iter()
                .enumerate()
                .map(|(i, v)| (i as f64 + 1.0) * (v - 0.3).powi(2))
                .sum::<f64>()
        };
        let cfg = NelderMeadConfig {
            max_evals: 40_000,
            ..Default::default()
        };
        let r = minimize(quad, &vec![0.0; n], &cfg);
        assert!(r.f < 1e-8, "{}", r.f);
    }

    #[test]
    fn infeasible_region_is_avoided() {
        // Minimum of x² on x ≥ 0.5 is at the wall.
        let f = |x: &[f64]| {
            if x[0] < 0.5 {
                f64::INFINITY
            } else {
                x[0] * x[0] + x[1] * x[1]
            }
        };
        let r = minimize(f, &[2.0, 1.0], &NelderMeadConfig::default());
        assert!((r.x[0] - 0.5).abs() < 1e-6 && r.f.is_finite());
    }

    #[test]
    fn deterministic() {
        let f = |x: &[f64]| (x[0] - 1.0).abs() + (x[1] + x[0]).powi(2) + x[2].sin();
        let cfg = NelderMeadConfig::default();
        assert_eq!(
            minimize(f, &[0.1, 0.2, 0.3], &cfg),
            minimize(f, &[0.1, 0.2, 0.3], &cfg)
        );
    }
}
