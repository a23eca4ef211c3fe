//! Fuzzy initial-value-problem solvers operating per (alpha, mu) slice.
//!
//! Each grid point of the spec is an independent crisp ODE: parameters and
//! initial values are read off the grids at that point and the slice is
//! integrated on its own. Three steppers are provided: the transform-based
//! Euler mid-point scheme (a two-step leapfrog with a forward-Euler start),
//! plain forward Euler, and a fourth-order one-step reference on a refined
//! grid.

use crate::error::{Error, Result};
use crate::granular::{GranularGrid, GridSpec};
use crate::partition::{FuzzyPartition, QuadratureRule};

/// Right-hand side evaluated on one slice: `f(u, state, params, out)`.
pub trait SliceRhs: Fn(f64, &[f64], &[f64], &mut [f64]) {}
impl<T: Fn(f64, &[f64], &[f64], &mut [f64])> SliceRhs for T {}

/// A fuzzy initial value problem on `[t_start, t_end]`.
pub struct FuzzyIVP<F: SliceRhs> {
    pub rhs: F,
    /// Whether `rhs` ignores its first argument. Autonomous systems skip
    /// the per-step quadrature in the mid-point scheme because the weighted
    /// mean of a constant is the constant itself.
    pub autonomous: bool,
    pub params: Vec<GranularGrid>,
    pub init: Vec<GranularGrid>,
    pub t_start: f64,
    pub t_end: f64,
}

impl<F: SliceRhs> FuzzyIVP<F> {
    pub fn dimension(&self) -> usize {
        self.init.len()
    }

    fn validate(&self, p: &FuzzyPartition) -> Result<GridSpec> {
        if self.init.is_empty() {
            return Err(Error::Validation("IVP needs at least one state variable".into()));
        }
        let spec = self.init[0].spec().clone();
        if self
            .init
            .iter()
            .chain(self.params.iter())
            .any(|g| g.spec() != &spec)
        {
            return Err(Error::SpecMismatch(
                "all parameter and initial grids must share one spec".into(),
            ));
        }
        let tol = 1e-12 * (self.t_end - self.t_start).abs().max(1.0);
        if (p.a() - self.t_start).abs() > tol || (p.b() - self.t_end).abs() > tol {
            return Err(Error::Validation(format!(
                "partition [{}, {}] does not cover the IVP interval [{}, {}]",
                p.a(),
                p.b(),
                self.t_start,
                self.t_end
            )));
        }
        Ok(spec)
    }
}

/// Solution values per state variable and time node, each a granular grid.
pub struct FuzzyTrajectory {
    partition: FuzzyPartition,
    /// Indexed `[var][node]`.
    states: Vec<Vec<GranularGrid>>,
}

impl FuzzyTrajectory {
    pub fn partition(&self) -> &FuzzyPartition {
        &self.partition
    }

    pub fn dimension(&self) -> usize {
        self.states.len()
    }

    pub fn spec(&self) -> &GridSpec {
        self.states[0][0].spec()
    }

    /// Grid of state variable `var` at time node `node`.
    pub fn value(&self, var: usize, node: usize) -> &GranularGrid {
        &self.states[var][node]
    }

    /// Crisp time series of one slice of one variable.
    pub fn slice_series(&self, var: usize, alpha_idx: usize, mu_idx: usize) -> Vec<f64> {
        self.states[var]
            .iter()
            .map(|g| g.value(alpha_idx, mu_idx))
            .collect()
    }
}

struct SliceProblem<'a, F: SliceRhs> {
    rhs: &'a F,
    params: Vec<f64>,
    init: Vec<f64>,
    alpha: f64,
    mu: f64,
}

fn check_finite(state: &[f64], node: usize, u: f64, alpha: f64, mu: f64) -> Result<()> {
    if let Some(var) = state.iter().position(|v| !v.is_finite()) {
        return Err(Error::Divergence {
            var,
            node,
            u,
            alpha,
            mu,
        });
    }
    Ok(())
}

/// Runs `step` for every slice and reassembles grids. `step` returns the
/// full per-node state sequence for one slice.
fn solve_slices<F: SliceRhs>(
    ivp: &FuzzyIVP<F>,
    p: &FuzzyPartition,
    mut step: impl FnMut(&SliceProblem<'_, F>) -> Result<Vec<Vec<f64>>>,
) -> Result<FuzzyTrajectory> {
    let spec = ivp.validate(p)?;
    let dim = ivp.dimension();
    let m = p.m();
    let n_pairs = spec.len();
    let mut flat = vec![vec![0.0; n_pairs]; dim * m];
    for (pair_idx, (ai, mi)) in spec.indices().enumerate() {
        let slice = SliceProblem {
            rhs: &ivp.rhs,
            params: ivp.params.iter().map(|g| g.value(ai, mi)).collect(),
            init: ivp.init.iter().map(|g| g.value(ai, mi)).collect(),
            alpha: spec.alphas()[ai],
            mu: spec.mus()[mi],
        };
        let series = step(&slice)?;
        debug_assert_eq!(series.len(), m);
        for (node, state) in series.iter().enumerate() {
            for (var, &v) in state.iter().enumerate() {
                flat[var * m + node][pair_idx] = v;
            }
        }
    }
    let states = (0..dim)
        .map(|var| {
            (0..m)
                .map(|node| {
                    let vals = &flat[var * m + node];
                    let mut k = 0;
                    GranularGrid::from_fn(spec.clone(), |_, _| {
                        let v = vals[k];
                        k += 1;
                        v
                    })
                })
                .collect()
        })
        .collect();
    Ok(FuzzyTrajectory {
        partition: p.clone(),
        states,
    })
}

/// Weighted mean of `rhs(., state)` against basic function `i`. For an
/// autonomous right-hand side this is just `rhs(state)`.
fn component_mean<F: SliceRhs>(
    slice: &SliceProblem<'_, F>,
    p: &FuzzyPartition,
    rule: QuadratureRule,
    autonomous: bool,
    i: usize,
    state: &[f64],
    out: &mut [f64],
) {
    if autonomous {
        (slice.rhs)(p.node(i), state, &slice.params, out);
        return;
    }
    let n = rule.subdivisions();
    let w = rule.gap_weights(p.h());
    out.fill(0.0);
    let mut tmp = vec![0.0; out.len()];
    let gap_lo = i.saturating_sub(1);
    let gap_hi = (i + 1).min(p.m() - 1);
    for gap in gap_lo..gap_hi {
        let lo = p.node(gap);
        let hi = p.node(gap + 1);
        for k in 0..=n {
            let u = if k == n { hi } else { lo + (hi - lo) * k as f64 / n as f64 };
            let weight = w[k] * p.basic_eval(i, u).expect("u within partition");
            if weight == 0.0 {
                continue;
            }
            (slice.rhs)(u, state, &slice.params, &mut tmp);
            for (o, t) in out.iter_mut().zip(&tmp) {
                *o += weight * t;
            }
        }
    }
    let den = p.basic_weight(i);
    for o in out.iter_mut() {
        *o /= den;
    }
}

/// Transform-based Euler mid-point scheme: a forward-Euler start followed
/// by the two-step recurrence `x[i+1] = x[i-1] + 2h fhat_i`, where `fhat_i`
/// is the component mean of the right-hand side frozen at the current
/// component values.
///
/// The two-step recurrence carries a parasitic mode that grows on
/// contracting flows, so long-horizon runs on dissipative systems
/// eventually report divergence; see `solve_reference` for a stable
/// companion.
pub fn solve_ft_euler_midpoint<F: SliceRhs>(
    ivp: &FuzzyIVP<F>,
    p: &FuzzyPartition,
) -> Result<FuzzyTrajectory> {
    if p.m() < 3 {
        return Err(Error::Validation(
            "mid-point scheme needs at least 3 time nodes".into(),
        ));
    }
    let rule = QuadratureRule::default();
    let h = p.h();
    let dim = ivp.dimension();
    solve_slices(ivp, p, |slice| {
        let m = p.m();
        let mut series = Vec::with_capacity(m);
        series.push(slice.init.clone());
        let mut fhat = vec![0.0; dim];
        component_mean(slice, p, rule, ivp.autonomous, 0, &series[0], &mut fhat);
        let first: Vec<f64> = series[0]
            .iter()
            .zip(&fhat)
            .map(|(x, f)| x + h * f)
            .collect();
        check_finite(&first, 1, p.node(1), slice.alpha, slice.mu)?;
        series.push(first);
        for i in 1..m - 1 {
            component_mean(slice, p, rule, ivp.autonomous, i, &series[i], &mut fhat);
            let next: Vec<f64> = series[i - 1]
                .iter()
                .zip(&fhat)
                .map(|(x, f)| x + 2.0 * h * f)
                .collect();
            check_finite(&next, i + 1, p.node(i + 1), slice.alpha, slice.mu)?;
            series.push(next);
        }
        Ok(series)
    })
}

/// Plain forward Euler per slice.
pub fn solve_euler<F: SliceRhs>(ivp: &FuzzyIVP<F>, p: &FuzzyPartition) -> Result<FuzzyTrajectory> {
    let h = p.h();
    let dim = ivp.dimension();
    solve_slices(ivp, p, |slice| {
        let m = p.m();
        let mut series = Vec::with_capacity(m);
        series.push(slice.init.clone());
        let mut f = vec![0.0; dim];
        for i in 0..m - 1 {
            (slice.rhs)(p.node(i), &series[i], &slice.params, &mut f);
            let next: Vec<f64> = series[i].iter().zip(&f).map(|(x, fv)| x + h * fv).collect();
            check_finite(&next, i + 1, p.node(i + 1), slice.alpha, slice.mu)?;
            series.push(next);
        }
        Ok(series)
    })
}

/// Classical fourth-order one-step method on a grid refined by
/// `refinement`, restricted back to the partition nodes. Serves as the
/// reference that stands in for closed-form solutions.
pub fn solve_reference<F: SliceRhs>(
    ivp: &FuzzyIVP<F>,
    p: &FuzzyPartition,
    refinement: u32,
) -> Result<FuzzyTrajectory> {
    if refinement < 1 {
        return Err(Error::Validation("refinement must be >= 1".into()));
    }
    let dim = ivp.dimension();
    let h = p.h() / refinement as f64;
    solve_slices(ivp, p, |slice| {
        let m = p.m();
        let mut series = Vec::with_capacity(m);
        series.push(slice.init.clone());
        let mut k1 = vec![0.0; dim];
        let mut k2 = vec![0.0; dim];
        let mut k3 = vec![0.0; dim];
        let mut k4 = vec![0.0; dim];
        let mut tmp = vec![0.0; dim];
        for i in 0..m - 1 {
            let mut y = series[i].clone();
            let mut u = p.node(i);
            for _ in 0..refinement {
                (slice.rhs)(u, &y, &slice.params, &mut k1);
                for (t, (yv, kv)) in tmp.iter_mut().zip(y.iter().zip(&k1)) {
                    *t = yv + 0.5 * h * kv;
                }
                (slice.rhs)(u + 0.5 * h, &tmp, &slice.params, &mut k2);
                for (t, (yv, kv)) in tmp.iter_mut().zip(y.iter().zip(&k2)) {
                    *t = yv + 0.5 * h * kv;
                }
                (slice.rhs)(u + 0.5 * h, &tmp, &slice.params, &mut k3);
                for (t, (yv, kv)) in tmp.iter_mut().zip(y.iter().zip(&k3)) {
                    *t = yv + h * kv;
                }
                (slice.rhs)(u + h, &tmp, &slice.params, &mut k4);
                for (idx, yv) in y.iter_mut().enumerate() {
                    *yv += h / 6.0 * (k1[idx] + 2.0 * k2[idx] + 2.0 * k3[idx] + k4[idx]);
                }
                u += h;
            }
            check_finite(&y, i + 1, p.node(i + 1), slice.alpha, slice.mu)?;
            series.push(y);
        }
        Ok(series)
    })
}

/// Root mean square difference of two equally long sequences.
pub fn rms_error(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::LengthMismatch(format!(
            "rms_error needs equal nonempty lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let sum: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok((sum / x.len() as f64).sqrt())
}
