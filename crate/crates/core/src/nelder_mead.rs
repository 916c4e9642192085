//! Nelder–Mead downhill simplex minimizer.

/// Simplex coefficients and stopping rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Stop once `f(worst) − f(best)` falls below this.
    pub f_tolerance: f64,
    pub max_evaluations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            f_tolerance: 1e-6,
            max_evaluations: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Tolerance,
    Budget,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Tolerance => "tolerance",
            Termination::Budget => "budget",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// Best value after each iteration (index 0 is the initial simplex).
    pub history: Vec<f64>,
    pub termination: Termination,
}

/// Minimizes `f` starting from the given `n + 1` simplex vertices.
pub fn minimize<F>(mut f: F, initial: Vec<Vec<f64>>, options: &NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = initial.len().saturating_sub(1);
    assert!(n >= 1, "simplex needs at least two vertices");
    assert!(
        initial.iter().all(|v| v.len() == n),
        "simplex vertices must have dimension {n}"
    );
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = initial
        .into_iter()
        .map(|x| {
            let v = eval(&x, &mut evaluations);
            (x, v)
        })
        .collect();
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut history = vec![simplex[0].1];
    let mut iterations = 0;

    let termination = loop {
        if simplex[n].1 - simplex[0].1 < options.f_tolerance {
            break Termination::Tolerance;
        }
        if evaluations >= options.max_evaluations {
            break Termination::Budget;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let along = |t: f64, from: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(from)
                .map(|(c, p)| c + t * (p - c))
                .collect()
        };

        let worst = simplex[n].0.clone();
        let reflected = along(-options.reflection, &worst);
        let f_r = eval(&reflected, &mut evaluations);

        let mut shrink = false;
        if f_r < simplex[0].1 {
            let expanded = along(-options.reflection * options.expansion, &worst);
            let f_e = eval(&expanded, &mut evaluations);
            simplex[n] = if f_e < f_r {
                (expanded, f_e)
            } else {
                (reflected, f_r)
            };
        } else if f_r < simplex[n - 1].1 {
            simplex[n] = (reflected, f_r);
        } else if f_r < simplex[n].1 {
            let outside = along(-options.reflection * options.contraction, &worst);
            let f_c = eval(&outside, &mut evaluations);
            if f_c <= f_r {
                simplex[n] = (outside, f_c);
            } else {
                shrink = true;
            }
        } else {
            let inside = along(options.contraction, &worst);
            let f_c = eval(&inside, &mut evaluations);
            if f_c < simplex[n].1 {
                simplex[n] = (inside, f_c);
            } else {
                shrink = true;
            }
        }

        if shrink {
            let best = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = best
                    .iter()
                    .zip(&vertex.0)
                    .map(|(b, v)| b + options.shrink * (v - b))
                    .collect();
                let v = eval(&x, &mut evaluations);
                *vertex = (x, v);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        history.push(simplex[0].1);
    };

    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        iterations,
        evaluations,
        history,
        termination,
    }
}

/// Runs [`minimize`] from an axis simplex around `seed`, then restarts from
/// each converged point with a fresh simplex while a restart still improves
/// by at least `f_tolerance`, up to `max_restarts` times. All runs share
/// `max_evaluations`. With `max_restarts = 0` this is a single plain run.
pub fn minimize_restarting<F, S>(
    mut f: F,
    seed: &[f64],
    steps: S,
    options: &NelderMeadOptions,
    max_restarts: usize,
) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
    S: Fn(&[f64]) -> Vec<f64>,
{
    let mut total: Option<Minimum> = None;
    for _ in 0..=max_restarts {
        let (start, used) = match &total {
            None => (seed.to_vec(), 0),
            Some(m) => (m.x.clone(), m.evaluations),
        };
        if used >= options.max_evaluations {
            break;
        }
        let run_options = NelderMeadOptions {
            max_evaluations: options.max_evaluations - used,
            ..*options
        };
        let run = minimize(&mut f, axis_simplex(&start, &steps(&start)), &run_options);
        let Some(mut acc) = total.take() else {
            let stop = run.termination == Termination::Budget;
            total = Some(run);
            if stop {
                break;
            }
            continue;
        };
        let gain = acc.value - run.value;
        acc.iterations += run.iterations;
        acc.evaluations += run.evaluations;
        acc.termination = run.termination;
        let mut running = *acc.history.last().expect("history is never empty");
        acc.history.extend(run.history.iter().skip(1).map(|v| {
            running = running.min(*v);
            running
        }));
        if run.value < acc.value {
            acc.x = run.x;
            acc.value = run.value;
        }
        let stop = acc.termination == Termination::Budget || !(gain >= options.f_tolerance);
        total = Some(acc);
        if stop {
            break;
        }
    }
    total.expect("at least one run")
}

/// Initial simplex: the seed plus one vertex per coordinate, offset by `steps[i]`.
pub fn axis_simplex(seed: &[f64], steps: &[f64]) -> Vec<Vec<f64>> {
    assert_eq!(seed.len(), steps.len());
    let mut vertices = vec![seed.to_vec()];
    for (i, step) in steps.iter().enumerate() {
        let mut v = seed.to_vec();
        v[i] += step;
        vertices.push(v);
    }
    vertices
}
