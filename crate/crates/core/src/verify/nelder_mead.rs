//! Derivative-free simplex search (maximisation) with dimension-adaptive
//! coefficients.

/// Result of one local search.
#[derive(Debug, Clone)]
pub struct LocalOptimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Largest objective value seen at any evaluated point.
    pub max_seen: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    /// Stop once every vertex is within this distance of the best one...
    pub step_tolerance: f64,
    /// ...and the objective spread over the simplex is below this.
    pub objective_tolerance: f64,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

struct Tracker<F> {
    f: F,
    evaluations: usize,
    max_seen: f64,
}

impl<F: FnMut(&[f64]) -> f64> Tracker<F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        let v = (self.f)(x);
        self.evaluations += 1;
        if v > self.max_seen {
            self.max_seen = v;
        }
        v
    }
}

fn initial_simplex(x0: &[f64], step: f64) -> Vec<Vec<f64>> {
    let mut simplex = vec![x0.to_vec()];
    for i in 0..x0.len() {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    simplex
}

/// Maximises `f` from `x0`. When the simplex collapses before the iteration
/// budget is spent, it is rebuilt around the best vertex; the search ends
/// once a rebuild fails to improve by more than the objective tolerance.
pub fn maximize(f: impl FnMut(&[f64]) -> f64, x0: &[f64], opts: SimplexOptions) -> LocalOptimum {
    let n = x0.len();
    let nf = n as f64;
    let (reflect, expand, contract, shrink) = (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf);
    let mut tracker = Tracker { f, evaluations: 0, max_seen: f64::NEG_INFINITY };

    let mut simplex = initial_simplex(x0, opts.initial_step);
    let mut values: Vec<f64> = simplex.iter().map(|x| tracker.eval(x)).collect();
    let mut iterations = 0;
    let mut converged = false;
    let mut last_restart_best = f64::NEG_INFINITY;
    let mut step = opts.initial_step;

    while iterations < opts.max_iterations {
        // order descending by value (best first); stable for reproducibility
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[0] - values[n];
        let size = simplex[1..]
            .iter()
            .map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread <= opts.objective_tolerance && size <= opts.step_tolerance {
            if values[0] - last_restart_best <= opts.objective_tolerance {
                converged = true;
                break;
            }
            last_restart_best = values[0];
            step = (step * 0.5).max(opts.step_tolerance * 1e3);
            let best = simplex[0].clone();
            simplex = initial_simplex(&best, step);
            values = std::iter::once(values[0]).chain(simplex[1..].iter().map(|x| tracker.eval(x))).collect();
            continue;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n).map(|k| simplex[..n].iter().map(|v| v[k]).sum::<f64>() / nf).collect();
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (c - w)).collect() };

        let xr = along(reflect);
        let fr = tracker.eval(&xr);
        if fr > values[0] {
            let xe = along(reflect * expand);
            let fe = tracker.eval(&xe);
            if fe > fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr > values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        // outside contraction must beat the reflection, inside must beat the worst vertex
        let (xc, threshold) =
            if fr > values[n] { (along(reflect * contract), fr) } else { (along(-contract), values[n]) };
        let fc = tracker.eval(&xc);
        if fc >= threshold {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            simplex[i] = best.iter().zip(&simplex[i]).map(|(b, x)| b + shrink * (x - b)).collect();
            values[i] = tracker.eval(&simplex[i]);
        }
    }

    let best = (0..=n).max_by(|&i, &j| values[i].total_cmp(&values[j]).then(j.cmp(&i))).unwrap_or(0);
    LocalOptimum {
        point: simplex[best].clone(),
        value: values[best],
        iterations,
        evaluations: tracker.evaluations,
        converged,
        max_seen: tracker.max_seen,
    }
}
