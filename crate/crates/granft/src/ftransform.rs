//! Direct and inverse transforms against a fuzzy partition, for crisp
//! functions and for fuzzy functions sampled as granular grids.
//!
//! The fuzzy variant works per (alpha, mu) slice: each component grid entry
//! is the crisp transform of the corresponding slice of the input, so the
//! transform commutes with the grid representation by construction.

use crate::error::{Error, Result};
use crate::granular::{gr_metric_with_mode, GranularGrid, GridSpec, MetricMode, TriangularFuzzyNumber};
use crate::partition::{quadrature_nodes, FuzzyPartition, QuadratureRule};

/// Components of the transform of a real-valued function.
#[derive(Debug, Clone)]
pub struct CrispComponents {
    partition: FuzzyPartition,
    values: Vec<f64>,
}

impl CrispComponents {
    pub fn partition(&self) -> &FuzzyPartition {
        &self.partition
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Components of the transform of a fuzzy function: one grid per node.
#[derive(Debug, Clone)]
pub struct GranularComponents {
    partition: FuzzyPartition,
    components: Vec<GranularGrid>,
}

impl GranularComponents {
    pub fn partition(&self) -> &FuzzyPartition {
        &self.partition
    }

    pub fn components(&self) -> &[GranularGrid] {
        &self.components
    }

    pub fn spec(&self) -> &GridSpec {
        self.components[0].spec()
    }
}

/// A fuzzy function stored as pre-evaluated grids at ordered sample points.
///
/// Transforms are data-to-data: sampling happens once, up front, at the
/// quadrature lattice of the partition the function will be transformed on.
#[derive(Debug, Clone)]
pub struct SampledFuzzyFunction {
    us: Vec<f64>,
    grids: Vec<GranularGrid>,
}

impl SampledFuzzyFunction {
    pub fn new(us: Vec<f64>, grids: Vec<GranularGrid>) -> Result<Self> {
        if us.len() != grids.len() || us.is_empty() {
            return Err(Error::LengthMismatch(format!(
                "{} sample points vs {} grids",
                us.len(),
                grids.len()
            )));
        }
        if us.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Validation(
                "sample points must be strictly increasing".into(),
            ));
        }
        let spec = grids[0].spec();
        if grids.iter().any(|g| g.spec() != spec) {
            return Err(Error::SpecMismatch(
                "all samples of a fuzzy function must share one grid spec".into(),
            ));
        }
        Ok(Self { us, grids })
    }

    /// Samples `f` on the quadrature lattice of `p` under `rule`.
    pub fn on_partition(
        p: &FuzzyPartition,
        rule: QuadratureRule,
        f: impl Fn(f64) -> GranularGrid,
    ) -> Result<Self> {
        let us = quadrature_nodes(p, rule);
        let grids = us.iter().map(|&u| f(u)).collect();
        Self::new(us, grids)
    }

    /// Samples a triangular-valued fuzzy function.
    pub fn from_triangular_fn(
        p: &FuzzyPartition,
        rule: QuadratureRule,
        spec: &GridSpec,
        f: impl Fn(f64) -> TriangularFuzzyNumber,
    ) -> Result<Self> {
        Self::on_partition(p, rule, |u| {
            crate::granular::hmf_from_triangular(&f(u), spec)
        })
    }

    /// Embeds a crisp function as constant grids.
    pub fn crisp_on_partition(
        p: &FuzzyPartition,
        rule: QuadratureRule,
        spec: &GridSpec,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        Self::on_partition(p, rule, |u| GranularGrid::constant(spec.clone(), f(u)))
    }

    pub fn us(&self) -> &[f64] {
        &self.us
    }

    pub fn grids(&self) -> &[GranularGrid] {
        &self.grids
    }

    pub fn spec(&self) -> &GridSpec {
        self.grids[0].spec()
    }

    fn slice(&self, alpha_idx: usize, mu_idx: usize) -> Vec<f64> {
        self.grids
            .iter()
            .map(|g| g.value(alpha_idx, mu_idx))
            .collect()
    }
}

/// Transform of samples living on the quadrature lattice of `p`.
///
/// Numerators come from composite quadrature against each hat; the
/// denominators use the closed-form hat integrals (h/2 at the edges, h
/// inside).
pub fn ftransform_sampled(
    samples: &[f64],
    p: &FuzzyPartition,
    rule: QuadratureRule,
) -> Result<CrispComponents> {
    let n = rule.subdivisions();
    let expected = (p.m() - 1) * n + 1;
    if samples.len() != expected {
        return Err(Error::LengthMismatch(format!(
            "expected {expected} samples on the quadrature lattice, got {}",
            samples.len()
        )));
    }
    let w = rule.gap_weights(p.h());
    let us = quadrature_nodes(p, rule);
    let mut values = Vec::with_capacity(p.m());
    for i in 0..p.m() {
        let mut num = 0.0;
        let gap_lo = i.saturating_sub(1);
        let gap_hi = (i + 1).min(p.m() - 1);
        for gap in gap_lo..gap_hi {
            let base = gap * n;
            for k in 0..=n {
                let u = us[base + k];
                num += w[k] * samples[base + k] * p.basic_eval(i, u)?;
            }
        }
        values.push(num / p.basic_weight(i));
    }
    Ok(CrispComponents {
        partition: p.clone(),
        values,
    })
}

/// Transform of a crisp function, sampled internally.
pub fn ftransform(
    f: impl Fn(f64) -> f64,
    p: &FuzzyPartition,
    rule: QuadratureRule,
) -> CrispComponents {
    let samples: Vec<f64> = quadrature_nodes(p, rule).iter().map(|&u| f(u)).collect();
    ftransform_sampled(&samples, p, rule).expect("internally sampled lattice always matches")
}

/// Hat-weighted reconstruction at `u`; equals the component exactly at nodes.
pub fn inverse_ftransform(c: &CrispComponents, u: f64) -> Result<f64> {
    let p = &c.partition;
    let mut acc = 0.0;
    for i in 0..p.m() {
        let w = p.basic_eval(i, u)?;
        if w > 0.0 {
            acc += w * c.values[i];
        }
    }
    Ok(acc)
}

fn check_lattice(g: &SampledFuzzyFunction, p: &FuzzyPartition, rule: QuadratureRule) -> Result<()> {
    let us = quadrature_nodes(p, rule);
    let tol = 1e-9 * (p.b() - p.a()).abs();
    if g.us.len() != us.len() || g.us.iter().zip(&us).any(|(a, b)| (a - b).abs() > tol) {
        return Err(Error::Validation(
            "fuzzy function is not sampled on the quadrature lattice of this partition".into(),
        ));
    }
    Ok(())
}

/// Per-slice transform of a sampled fuzzy function.
pub fn granular_ftransform(
    g: &SampledFuzzyFunction,
    p: &FuzzyPartition,
    rule: QuadratureRule,
) -> Result<GranularComponents> {
    check_lattice(g, p, rule)?;
    let spec = g.spec().clone();
    let mut per_component: Vec<Vec<f64>> = vec![Vec::with_capacity(spec.len()); p.m()];
    for (ai, mi) in spec.indices() {
        let slice = g.slice(ai, mi);
        let comps = ftransform_sampled(&slice, p, rule)?;
        for (i, &v) in comps.values().iter().enumerate() {
            per_component[i].push(v);
        }
    }
    let components = per_component
        .into_iter()
        .map(|vals| {
            let mut k = 0;
            GranularGrid::from_fn(spec.clone(), |_, _| {
                let v = vals[k];
                k += 1;
                v
            })
        })
        .collect();
    Ok(GranularComponents {
        partition: p.clone(),
        components,
    })
}

/// Hat-weighted reconstruction of a fuzzy value at `u`, pointwise per slice.
pub fn granular_inverse_ftransform(c: &GranularComponents, u: f64) -> Result<GranularGrid> {
    let p = &c.partition;
    let spec = c.spec().clone();
    let n_mu = spec.n_mu();
    let mut values = vec![0.0; spec.len()];
    for i in 0..p.m() {
        let w = p.basic_eval(i, u)?;
        if w > 0.0 {
            for (k, v) in values.iter_mut().enumerate() {
                *v += w * c.components[i].value(k / n_mu, k % n_mu);
            }
        }
    }
    let mut k = 0;
    Ok(GranularGrid::from_fn(spec, |_, _| {
        let v = values[k];
        k += 1;
        v
    }))
}

/// Sampled modulus of continuity: the largest granular distance between
/// samples at most `delta` apart. A lower bound of the true modulus.
pub fn modulus_of_continuity(g: &SampledFuzzyFunction, delta: f64, mode: MetricMode) -> f64 {
    let tol = 1e-12 * (g.us.last().unwrap() - g.us[0]).abs().max(1.0);
    let mut best: f64 = 0.0;
    for i in 0..g.us.len() {
        for j in i + 1..g.us.len() {
            if g.us[j] - g.us[i] > delta + tol {
                break;
            }
            let d = gr_metric_with_mode(&g.grids[i], &g.grids[j], mode)
                .expect("shared spec checked at construction");
            best = best.max(d);
        }
    }
    best
}

/// Outcome of the approximation-bound checks for one fuzzy function and
/// partition, under the matched-RDM distance.
#[derive(Debug, Clone)]
pub struct BoundReport {
    /// Sampled modulus of continuity at step 2h.
    pub omega_2h: f64,
    /// Largest distance between the function and the components covering
    /// each inter-node interval. Bounded by `omega_2h`.
    pub component_max: f64,
    pub component_slack: f64,
    /// Largest distance between the reconstructions built from this
    /// partition and from its half-step refinement. Bounded by `2 omega_2h`.
    pub reconstruction_max: f64,
    pub reconstruction_slack: f64,
    /// Smaller of the two slacks.
    pub min_slack: f64,
    /// Both bounds hold up to the configured tolerance.
    pub holds: bool,
}

/// Numerical slack absorbed by the bound checks.
const BOUND_SLACK: f64 = 1e-9;

/// Checks the component bound against `omega(2h)` and the two-reconstruction
/// bound against `2 omega(2h)`, using a half-step refinement of `p` as the
/// second partition. The quadrature subdivision count must be even so both
/// partitions share one sample lattice.
pub fn check_bounds(
    g: &SampledFuzzyFunction,
    p: &FuzzyPartition,
    rule: QuadratureRule,
) -> Result<BoundReport> {
    if p.m() < 3 {
        return Err(Error::Validation("bound checks need m >= 3".into()));
    }
    if rule.subdivisions() % 2 != 0 {
        return Err(Error::Validation(
            "bound checks need an even quadrature subdivision count".into(),
        ));
    }
    check_lattice(g, p, rule)?;
    let omega = modulus_of_continuity(g, 2.0 * p.h(), MetricMode::MatchedMu);

    let comps = granular_ftransform(g, p, rule)?;
    let n = rule.subdivisions();
    let mut component_max: f64 = 0.0;
    for gap in 0..p.m() - 1 {
        for k in 0..=n {
            let idx = gap * n + k;
            for comp in [&comps.components()[gap], &comps.components()[gap + 1]] {
                let d = gr_metric_with_mode(&g.grids[idx], comp, MetricMode::MatchedMu)?;
                component_max = component_max.max(d);
            }
        }
    }

    let p2 = FuzzyPartition::uniform(p.a(), p.b(), 2 * p.m() - 1)?;
    let rule2 = QuadratureRule::trapezoid(n / 2)?;
    let comps2 = granular_ftransform(g, &p2, rule2)?;
    let mut reconstruction_max: f64 = 0.0;
    for (idx, &u) in g.us.iter().enumerate() {
        let r1 = granular_inverse_ftransform(&comps, u)?;
        let r2 = granular_inverse_ftransform(&comps2, u)?;
        let d = gr_metric_with_mode(&r1, &r2, MetricMode::MatchedMu)?;
        reconstruction_max = reconstruction_max.max(d);
        let _ = idx;
    }

    let component_slack = omega - component_max;
    let reconstruction_slack = 2.0 * omega - reconstruction_max;
    let min_slack = component_slack.min(reconstruction_slack);
    Ok(BoundReport {
        omega_2h: omega,
        component_max,
        component_slack,
        reconstruction_max,
        reconstruction_slack,
        min_slack,
        holds: min_slack >= -BOUND_SLACK,
    })
}

/// Demo fuzzy function used by the CLI and tests: triangular values
/// `(u^3/3, u^3/3 + u + 3, 2u^3/3 + 4)` on `[0, 3]`.
pub fn cubic_band(u: f64) -> TriangularFuzzyNumber {
    TriangularFuzzyNumber::new(u * u * u / 3.0, u * u * u / 3.0 + u + 3.0, 2.0 * u * u * u / 3.0 + 4.0)
        .expect("band ordering holds for u >= 0")
}

/// Simpson rule fine enough for the transform oracles in tests and demos.
pub fn fine_rule() -> QuadratureRule {
    QuadratureRule::simpson(20).expect("even subdivision count")
}
