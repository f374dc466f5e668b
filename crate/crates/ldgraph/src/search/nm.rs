//! Minimal Nelder-Mead simplex maximizer for low-dimensional
//! derivative-free parameter searches.

/// Maximizes `f` from `x0` with an axis-aligned initial simplex of
/// the given scale. Deterministic. Returns (argmax, value, evals).
pub fn maximize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    scale: f64,
    max_evals: u64,
) -> (Vec<f64>, f64, u64) {
    let n = x0.len();
    let mut evals = 0u64;
    let mut eval = |x: &[f64], evals: &mut u64| -> f64 {
        *evals += 1;
        f(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += scale;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    while evals < max_evals {
        // Best first.
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let spread = simplex[0].1 - simplex[n].1;
        let geom_spread: f64 = (0..n)
            .map(|i| (simplex[0].0[i] - simplex[n].0[i]).abs())
            .fold(0.0, f64::max);
        if spread.abs() < 1e-12 && geom_spread < 1e-10 {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(x, _)| x[i]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let at = |t: f64| -> Vec<f64> {
            (0..n)
                .map(|i| centroid[i] + t * (centroid[i] - worst.0[i]))
                .collect()
        };
        let xr = at(1.0);
        let vr = eval(&xr, &mut evals);
        if vr > simplex[0].1 {
            let xe = at(2.0);
            let ve = eval(&xe, &mut evals);
            simplex[n] = if ve > vr { (xe, ve) } else { (xr, vr) };
            continue;
        }
        if vr > simplex[n - 1].1 {
            simplex[n] = (xr, vr);
            continue;
        }
        let xc = at(-0.5);
        let vc = eval(&xc, &mut evals);
        if vc > worst.1 {
            simplex[n] = (xc, vc);
            continue;
        }
        // Shrink toward the best vertex.
        let best = simplex[0].0.clone();
        for entry in simplex.iter_mut().skip(1) {
            for (e, b) in entry.0.iter_mut().zip(&best) {
                *e = 0.5 * (*e + b);
            }
            entry.1 = eval(&entry.0.clone(), &mut evals);
        }
    }
    simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
    (simplex[0].0.clone(), simplex[0].1, evals)
}

#[cfg(test)]
mod tests {
    use super::maximize;

    #[test]
    fn finds_a_quadratic_peak() {
        let (x, v, _) = maximize(
            |p| -(p[0] - 1.5).powi(2) - (p[1] + 0.5).powi(2) + 3.0,
            &[0.0, 0.0],
            0.5,
            400,
        );
        assert!((x[0] - 1.5).abs() < 1e-4);
        assert!((x[1] + 0.5).abs() < 1e-4);
        assert!((v - 3.0).abs() < 1e-7);
    }

    #[test]
    fn respects_the_eval_budget() {
        let mut count = 0u64;
        let (_, _, evals) = maximize(
            |p| {
                count += 1;
                -p[0] * p[0]
            },
            &[5.0],
            1.0,
            25,
        );
        assert!(evals <= 27);
        assert_eq!(count, evals);
    }

    #[test]
    fn one_dimensional_cliff() {
        // Feasible region p <= 2, value increasing in p: the maximum
        // sits at the cliff edge.
        let (x, _, _) = maximize(
            |p| if p[0] <= 2.0 { p[0] } else { -1.0 },
            &[0.5],
            0.3,
            300,
        );
        assert!((x[0] - 2.0).abs() < 1e-6, "got {}", x[0]);
    }
}
