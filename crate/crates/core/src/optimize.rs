//! Grid scan and Nelder-Mead refinement used by the ratio suprema.

/// Uniform grid over a box, `points` per dimension, visited in row-major
/// order of the multi-index.
pub(crate) struct BoxGrid {
    lower: Vec<f64>,
    upper: Vec<f64>,
    points: usize,
}

impl BoxGrid {
    pub(crate) fn new(lower: &[f64], upper: &[f64], points: usize) -> Self {
        assert!(points >= 2);
        Self {
            lower: lower.to_vec(),
            upper: upper.to_vec(),
            points,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.points.pow(self.lower.len() as u32)
    }

    pub(crate) fn point(&self, mut index: usize) -> Vec<f64> {
        let dim = self.lower.len();
        let mut x = vec![0.0; dim];
        for d in (0..dim).rev() {
            let i = index % self.points;
            index /= self.points;
            let t = i as f64 / (self.points - 1) as f64;
            x[d] = self.lower[d] + t * (self.upper[d] - self.lower[d]);
        }
        x
    }
}

fn clamp_into(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for d in 0..x.len() {
        x[d] = x[d].clamp(lower[d], upper[d]);
    }
}

/// Box-constrained Nelder-Mead minimization. Candidate points are projected
/// into the box before evaluation. Stops when the simplex diameter falls
/// below `tol_diameter` or after `max_iter` iterations.
///
/// Returns (argmin, min).
pub(crate) fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    initial_step: f64,
    lower: &[f64],
    upper: &[f64],
    tol_diameter: f64,
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let dim = x0.len();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for d in 0..dim {
        let mut v = x0.to_vec();
        let span = upper[d] - lower[d];
        let step = initial_step * span;
        // step away from the nearer box face so vertices stay distinct
        v[d] = if v[d] + step <= upper[d] {
            v[d] + step
        } else {
            v[d] - step
        };
        clamp_into(&mut v, lower, upper);
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let diameter = |s: &[Vec<f64>]| -> f64 {
        let mut d = 0.0_f64;
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                let dist: f64 = s[i]
                    .iter()
                    .zip(&s[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                d = d.max(dist);
            }
        }
        d
    };

    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..simplex.len()).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let sorted: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let sorted_vals: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = sorted;
        values = sorted_vals;

        if diameter(&simplex) < tol_diameter {
            break;
        }

        // centroid of all but worst
        let mut centroid = vec![0.0; dim];
        for v in &simplex[..dim] {
            for d in 0..dim {
                centroid[d] += v[d] / dim as f64;
            }
        }
        let worst = simplex[dim].clone();
        let eval_at = |point: Vec<f64>| -> (Vec<f64>, f64) {
            let mut p = point;
            clamp_into(&mut p, lower, upper);
            let v = f(&p);
            (p, v)
        };

        let reflected: Vec<f64> = (0..dim)
            .map(|d| centroid[d] + alpha * (centroid[d] - worst[d]))
            .collect();
        let (xr, fr) = eval_at(reflected);

        if fr < values[0] {
            let expanded: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + gamma * (xr[d] - centroid[d]))
                .collect();
            let (xe, fe) = eval_at(expanded);
            if fe < fr {
                simplex[dim] = xe;
                values[dim] = fe;
            } else {
                simplex[dim] = xr;
                values[dim] = fr;
            }
        } else if fr < values[dim - 1] {
            simplex[dim] = xr;
            values[dim] = fr;
        } else {
            let contracted: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + rho * (worst[d] - centroid[d]))
                .collect();
            let (xc, fc) = eval_at(contracted);
            if fc < values[dim] {
                simplex[dim] = xc;
                values[dim] = fc;
            } else {
                // shrink toward the best vertex
                for i in 1..=dim {
                    let contracted: Vec<f64> = (0..dim)
                        .map(|d| simplex[0][d] + sigma * (simplex[i][d] - simplex[0][d]))
                        .collect();
                    let (xs, fs) = eval_at(contracted);
                    simplex[i] = xs;
                    values[i] = fs;
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..values.len() {
        if values[i] < values[best] {
            best = i;
        }
    }
    (simplex[best].clone(), values[best])
}
