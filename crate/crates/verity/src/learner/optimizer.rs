//! Limited-memory quasi-Newton minimization with optional orthant-wise
//! handling of an L1 term (OWL-QN).
//!
//! The caller supplies the smooth part of the objective (data loss plus
//! the L2 penalty) and its exact gradient. When `l1 > 0` the first
//! `penalized` coordinates additionally carry `l1 * |x_j|`, handled via
//! the OWL-QN pseudo-gradient, direction alignment and orthant
//! projection of the line search; the L-BFGS curvature pairs always use
//! smooth gradients. With `l1 == 0` the loop reduces to plain L-BFGS
//! with Armijo backtracking.

use std::collections::VecDeque;

pub(crate) struct OptimParams {
    /// L1 strength (lambda * alpha); 0 disables the orthant machinery.
    pub l1: f64,
    /// Coordinates `0..penalized` carry the L1 term; the rest (the
    /// intercept) are unregularized and never projected.
    pub penalized: usize,
    pub max_iter: usize,
    /// Relative objective-decrease tolerance.
    pub tolerance: f64,
    pub memory: usize,
    pub armijo_c: f64,
}

impl OptimParams {
    pub fn new(l1: f64, penalized: usize, max_iter: usize, tolerance: f64) -> Self {
        OptimParams {
            l1,
            penalized,
            max_iter,
            tolerance,
            memory: 10,
            armijo_c: 1e-4,
        }
    }
}

pub(crate) struct OptimOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Full objective (smooth + L1) after each accepted step, starting
    /// with the initial point.
    pub trace: Vec<f64>,
}

struct History {
    s: VecDeque<Vec<f64>>,
    y: VecDeque<Vec<f64>>,
    rho: VecDeque<f64>,
    memory: usize,
}

impl History {
    fn new(memory: usize) -> Self {
        History {
            s: VecDeque::new(),
            y: VecDeque::new(),
            rho: VecDeque::new(),
            memory,
        }
    }

    fn clear(&mut self) {
        self.s.clear();
        self.y.clear();
        self.rho.clear();
    }

    /// Stores a curvature pair unless `s·y` is too small to trust.
    fn push(&mut self, s: Vec<f64>, y: Vec<f64>) {
        let sy = dot(&s, &y);
        if sy <= 1e-10 {
            return;
        }
        self.s.push_front(s);
        self.y.push_front(y);
        self.rho.push_front(1.0 / sy);
        if self.s.len() > self.memory {
            self.s.pop_back();
            self.y.pop_back();
            self.rho.pop_back();
        }
    }

    /// Two-loop recursion: returns `-H g` for the current inverse
    /// Hessian estimate.
    fn direction(&self, g: &[f64]) -> Vec<f64> {
        let mut q: Vec<f64> = g.to_vec();
        if self.s.is_empty() {
            for v in &mut q {
                *v = -*v;
            }
            return q;
        }
        let k = self.s.len();
        let mut alpha = vec![0.0; k];
        for (i, a) in alpha.iter_mut().enumerate() {
            *a = self.rho[i] * dot(&self.s[i], &q);
            axpy(&mut q, -*a, &self.y[i]);
        }
        let gamma = (1.0 / self.rho[0]) / dot(&self.y[0], &self.y[0]);
        for v in &mut q {
            *v *= gamma;
        }
        for i in (0..k).rev() {
            let beta = self.rho[i] * dot(&self.y[i], &q);
            axpy(&mut q, alpha[i] - beta, &self.s[i]);
        }
        for v in &mut q {
            *v = -*v;
        }
        q
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn l1_norm(x: &[f64], penalized: usize) -> f64 {
    x[..penalized].iter().map(|v| v.abs()).sum()
}

/// OWL-QN pseudo-gradient. Equals the smooth gradient on unpenalized
/// coordinates; on penalized coordinates it is the minimal-norm
/// subgradient of `smooth + l1*|x_j|`.
fn pseudo_gradient(x: &[f64], g: &[f64], l1: f64, penalized: usize) -> Vec<f64> {
    let mut pg = g.to_vec();
    if l1 == 0.0 {
        return pg;
    }
    for j in 0..penalized {
        if x[j] > 0.0 {
            pg[j] += l1;
        } else if x[j] < 0.0 {
            pg[j] -= l1;
        } else if g[j] + l1 < 0.0 {
            pg[j] += l1;
        } else if g[j] - l1 > 0.0 {
            pg[j] -= l1;
        } else {
            pg[j] = 0.0;
        }
    }
    pg
}

/// Minimizes `smooth(x) + l1 * Σ_{j<penalized} |x_j|` where `eval`
/// returns the smooth part and its gradient. Starts at the origin.
pub(crate) fn minimize<F>(mut eval: F, dim: usize, params: &OptimParams) -> OptimOutcome
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let l1 = params.l1;
    let pen = params.penalized;
    let mut x = vec![0.0; dim];
    let (smooth0, mut grad) = eval(&x);
    let mut f_full = smooth0 + l1 * l1_norm(&x, pen);
    let mut history = History::new(params.memory);
    let mut trace = vec![f_full];
    let mut converged = false;
    let mut iterations = 0;

    'outer: for iter in 1..=params.max_iter {
        let pg = pseudo_gradient(&x, &grad, l1, pen);
        let pg_norm = norm(&pg);
        if pg_norm == 0.0 {
            converged = true;
            break;
        }

        let mut restarted = false;
        let (x_new, grad_new, f_new) = loop {
            let mut d = history.direction(&pg);
            if l1 > 0.0 {
                // Keep only components that agree with steepest descent.
                for j in 0..pen {
                    if d[j] * pg[j] >= 0.0 {
                        d[j] = 0.0;
                    }
                }
            }
            let descent = dot(&d, &pg);
            if descent >= 0.0 || d.iter().all(|&v| v == 0.0) {
                if restarted {
                    break 'outer;
                }
                history.clear();
                restarted = true;
                continue;
            }

            // Orthant each penalized coordinate must stay in.
            let orthant: Vec<f64> = if l1 > 0.0 {
                (0..pen)
                    .map(|j| {
                        if x[j] != 0.0 {
                            x[j].signum()
                        } else {
                            -pg[j].signum()
                        }
                    })
                    .collect()
            } else {
                Vec::new()
            };

            let mut eta = if history.s.is_empty() {
                (1.0 / norm(&d)).min(1.0)
            } else {
                1.0
            };
            let mut accepted = None;
            for _ in 0..60 {
                let mut xt: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + eta * di).collect();
                if l1 > 0.0 {
                    for j in 0..pen {
                        if xt[j] * orthant[j] < 0.0 {
                            xt[j] = 0.0;
                        }
                    }
                }
                let (st, gt) = eval(&xt);
                let ft = st + l1 * l1_norm(&xt, pen);
                let expected = if l1 > 0.0 {
                    dot(
                        &pg,
                        &xt.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<_>>(),
                    )
                } else {
                    eta * descent
                };
                if ft <= f_full + params.armijo_c * expected {
                    accepted = Some((xt, gt, ft));
                    break;
                }
                eta *= 0.5;
            }
            match accepted {
                Some(step) => break step,
                None => {
                    if restarted {
                        break 'outer;
                    }
                    history.clear();
                    restarted = true;
                }
            }
        };

        debug_assert!(
            f_new <= f_full,
            "objective must not increase: {f_new} > {f_full}"
        );
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = grad_new.iter().zip(&grad).map(|(a, b)| a - b).collect();
        history.push(s, y);

        let rel_decrease = (f_full - f_new) / f_full.abs().max(1.0);
        x = x_new;
        grad = grad_new;
        f_full = f_new;
        trace.push(f_full);
        iterations = iter;
        if rel_decrease < params.tolerance {
            converged = true;
            break;
        }
    }

    OptimOutcome {
        x,
        iterations,
        converged,
        trace,
    }
}
