//! Small deterministic optimization utilities shared by the solvers.

/// Euclidean projection onto the probability simplex (in place).
pub fn project_to_simplex(w: &mut [f64]) {
    let n = w.len();
    let mut sorted: Vec<f64> = w.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    let mut found = false;
    for (k, &v) in sorted.iter().enumerate() {
        cumsum += v;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        } else {
            found = true;
            break;
        }
    }
    if !found {
        theta = (cumsum - 1.0) / n as f64;
    }
    for v in w.iter_mut() {
        *v = (*v - theta).max(0.0);
    }
    // Exact renormalization guards against rounding drift.
    let s: f64 = w.iter().sum();
    if s > 0.0 {
        for v in w.iter_mut() {
            *v /= s;
        }
    } else {
        for v in w.iter_mut() {
            *v = 1.0 / n as f64;
        }
    }
}

/// Lattice of simplex weight vectors with coordinate mesh at most
/// `resolution`: all compositions of `m = ceil(1/resolution)` into `k` parts.
pub fn simplex_grid(k: usize, resolution: f64) -> Vec<Vec<f64>> {
    let m = (1.0 / resolution).ceil().max(1.0) as usize;
    let mut out = Vec::new();
    let mut current = vec![0usize; k];
    compositions(m, 0, &mut current, &mut out);
    out.iter()
        .map(|c| c.iter().map(|&v| v as f64 / m as f64).collect())
        .collect()
}

fn compositions(remaining: usize, idx: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if idx + 1 == current.len() {
        current[idx] = remaining;
        out.push(current.clone());
        return;
    }
    for v in 0..=remaining {
        current[idx] = v;
        compositions(remaining - v, idx + 1, current, out);
    }
}

/// Golden-section maximization of a unimodal (concave) function on `[a, b]`.
pub fn golden_max(mut a: f64, mut b: f64, iters: usize, f: impl Fn(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Golden-section minimization on `[a, b]`.
pub fn golden_min(a: f64, b: f64, iters: usize, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let (x, v) = golden_max(a, b, iters, |t| -f(t));
    (x, -v)
}

/// Deterministic compass search minimizing `f` over `R^n` coordinates with a
/// shrinking step, optionally projecting iterates back to a feasible set.
pub fn compass_search(
    x0: &[f64],
    initial_step: f64,
    min_step: f64,
    max_evals: usize,
    mut project: impl FnMut(&mut [f64]),
    mut f: impl FnMut(&[f64]) -> f64,
) -> (Vec<f64>, f64) {
    let mut x = x0.to_vec();
    project(&mut x);
    let mut best = f(&x);
    let mut step = initial_step;
    let mut evals = 1usize;
    while step > min_step && evals < max_evals {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut cand = x.clone();
                cand[i] += dir * step;
                project(&mut cand);
                let v = f(&cand);
                evals += 1;
                if v < best - 1e-18 {
                    best = v;
                    x = cand;
                    improved = true;
                }
                if evals >= max_evals {
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, best)
}

/// Exact minimum of `Σ q_i b_i` over `q ≥ 0, Σq = 1, Σ q_i a_i ≥ target`,
/// or `None` when infeasible. The optimum mixes at most two candidates, so
/// pair enumeration is exact. Used as a small LP oracle in tests and checks.
pub fn two_point_budget_lp(a: &[f64], b: &[f64], target: f64) -> Option<f64> {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let mut best: Option<f64> = None;
    let mut upd = |v: f64| {
        best = Some(match best {
            Some(cur) => cur.min(v),
            None => v,
        })
    };
    for i in 0..n {
        if a[i] >= target - 1e-15 {
            upd(b[i]);
        }
        for j in 0..n {
            // Mix q on (i, j) hitting the budget with equality.
            let denom = a[i] - a[j];
            if denom.abs() < 1e-15 {
                continue;
            }
            let q = (target - a[j]) / denom;
            if (-1e-12..=1.0 + 1e-12).contains(&q) {
                let qc = q.clamp(0.0, 1.0);
                let mixed_a = qc * a[i] + (1.0 - qc) * a[j];
                if mixed_a >= target - 1e-12 {
                    upd(qc * b[i] + (1.0 - qc) * b[j]);
                }
            }
        }
    }
    best
}
