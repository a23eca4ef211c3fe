//! Fuzzy numbers represented by sampled horizontal membership functions.
//!
//! A fuzzy quantity is stored as a matrix of real values indexed by an
//! alpha level and an RDM variable mu in [0, 1]. The map from a fuzzy
//! number to this matrix samples `lower(alpha) + (upper(alpha) - lower(alpha)) * mu`;
//! the inverse recovers alpha-cuts by suffix min/max aggregation over the
//! alpha axis. Arithmetic is pointwise on matched (alpha, mu) entries: all
//! quantities in an expression share a single RDM variable, which is what
//! every downstream computation in this crate assumes. The granular metric
//! is the exception: it maximizes over the two RDM variables independently.

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Threshold below which a divisor grid entry counts as zero.
const DIV_ZERO_TOL: f64 = 1e-300;

/// A triangular fuzzy number given by its three kink abscissae.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangularFuzzyNumber {
    left: f64,
    peak: f64,
    right: f64,
}

impl TriangularFuzzyNumber {
    pub fn new(left: f64, peak: f64, right: f64) -> Result<Self> {
        if !(left.is_finite() && peak.is_finite() && right.is_finite()) {
            return Err(Error::Validation(format!(
                "triangular fuzzy number must be finite, got ({left}, {peak}, {right})"
            )));
        }
        if left > peak || peak > right {
            return Err(Error::Validation(format!(
                "triangular fuzzy number requires left <= peak <= right, got ({left}, {peak}, {right})"
            )));
        }
        Ok(Self { left, peak, right })
    }

    /// A crisp value embedded as a degenerate triangle.
    pub fn crisp(x: f64) -> Self {
        Self {
            left: x,
            peak: x,
            right: x,
        }
    }

    pub fn left(&self) -> f64 {
        self.left
    }

    pub fn peak(&self) -> f64 {
        self.peak
    }

    pub fn right(&self) -> f64 {
        self.right
    }

    /// Endpoints of the alpha-cut `[left + alpha (peak - left), right - alpha (right - peak)]`.
    pub fn alpha_cut(&self, alpha: f64) -> (f64, f64) {
        (
            self.left + alpha * (self.peak - self.left),
            self.right - alpha * (self.right - self.peak),
        )
    }

    /// Horizontal membership value at (alpha, mu).
    pub fn hmf(&self, alpha: f64, mu: f64) -> f64 {
        let (lo, hi) = self.alpha_cut(alpha);
        lo + (hi - lo) * mu
    }
}

impl fmt::Display for TriangularFuzzyNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.left, self.peak, self.right)
    }
}

impl FromStr for TriangularFuzzyNumber {
    type Err = Error;

    /// Parses the text form `(l,p,r)`; surrounding parentheses optional.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim();
        let inner = inner
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(inner);
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "expected three comma-separated values in \"{s}\""
            )));
        }
        let mut v = [0.0; 3];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad number \"{part}\": {e}")))?;
        }
        Self::new(v[0], v[1], v[2])
    }
}

/// Sample locations of a granular grid: ordered alpha levels and mu values.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    alphas: Vec<f64>,
    mus: Vec<f64>,
}

fn check_axis(name: &str, axis: &[f64]) -> Result<()> {
    if axis.len() < 2 {
        return Err(Error::Validation(format!(
            "{name} axis needs at least 2 entries"
        )));
    }
    if axis.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Validation(format!(
            "{name} axis must be strictly increasing"
        )));
    }
    if axis[0] != 0.0 || *axis.last().unwrap() != 1.0 {
        return Err(Error::Validation(format!(
            "{name} axis must start at 0 and end at 1"
        )));
    }
    Ok(())
}

impl GridSpec {
    pub fn new(alphas: Vec<f64>, mus: Vec<f64>) -> Result<Self> {
        check_axis("alpha", &alphas)?;
        check_axis("mu", &mus)?;
        Ok(Self { alphas, mus })
    }

    /// Uniformly spaced axes with the given point counts (each >= 2).
    pub fn uniform(n_alpha: usize, n_mu: usize) -> Result<Self> {
        let lin = |n: usize| {
            (0..n)
                .map(|k| k as f64 / (n - 1) as f64)
                .collect::<Vec<_>>()
        };
        if n_alpha < 2 || n_mu < 2 {
            return Err(Error::Validation(
                "uniform grid spec needs at least 2 points per axis".into(),
            ));
        }
        Self::new(lin(n_alpha), lin(n_mu))
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn mus(&self) -> &[f64] {
        &self.mus
    }

    pub fn n_alpha(&self) -> usize {
        self.alphas.len()
    }

    pub fn n_mu(&self) -> usize {
        self.mus.len()
    }

    /// Number of (alpha, mu) grid points.
    pub fn len(&self) -> usize {
        self.alphas.len() * self.mus.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Iterate over (alpha_index, mu_index) pairs in row-major order.
    pub fn indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n_mu = self.mus.len();
        (0..self.alphas.len() * n_mu).map(move |k| (k / n_mu, k % n_mu))
    }
}

impl Default for GridSpec {
    /// The worked-example grid: alpha in {0, 0.5, 1}, mu in {0, 0.4, 0.6, 1}.
    fn default() -> Self {
        Self {
            alphas: vec![0.0, 0.5, 1.0],
            mus: vec![0.0, 0.4, 0.6, 1.0],
        }
    }
}

/// A sampled horizontal membership function: one real value per (alpha, mu).
#[derive(Debug, Clone, PartialEq)]
pub struct GranularGrid {
    spec: GridSpec,
    /// Row-major: `values[ai * n_mu + mi]`.
    values: Vec<f64>,
}

impl GranularGrid {
    pub fn from_fn(spec: GridSpec, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(spec.len());
        for &alpha in &spec.alphas {
            for &mu in &spec.mus {
                values.push(f(alpha, mu));
            }
        }
        Self { spec, values }
    }

    pub fn constant(spec: GridSpec, c: f64) -> Self {
        let values = vec![c; spec.len()];
        Self { spec, values }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn value(&self, alpha_idx: usize, mu_idx: usize) -> f64 {
        self.values[alpha_idx * self.spec.n_mu() + mu_idx]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Applies `f` entry-wise.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            spec: self.spec.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    fn check_same_spec(&self, other: &Self, what: &str) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch(format!(
                "{what} requires operands sampled on the same (alpha, mu) grid"
            )));
        }
        Ok(())
    }

    /// Per-alpha row minimum and maximum over mu.
    fn row_range(&self, alpha_idx: usize) -> (f64, f64) {
        let n_mu = self.spec.n_mu();
        let row = &self.values[alpha_idx * n_mu..(alpha_idx + 1) * n_mu];
        row.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
    }
}

/// Builds the granular grid of a triangular fuzzy number on `spec`.
///
/// At fixed alpha the values are affine in mu; the alpha = 1 row is
/// identically the peak.
pub fn hmf_from_triangular(t: &TriangularFuzzyNumber, spec: &GridSpec) -> GranularGrid {
    GranularGrid::from_fn(spec.clone(), |alpha, mu| t.hmf(alpha, mu))
}

/// Nested family of alpha-cut intervals recovered from a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaCutFamily {
    alphas: Vec<f64>,
    cuts: Vec<(f64, f64)>,
}

impl AlphaCutFamily {
    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn cuts(&self) -> &[(f64, f64)] {
        &self.cuts
    }

    pub fn cut(&self, alpha_idx: usize) -> (f64, f64) {
        self.cuts[alpha_idx]
    }

    /// Whether cuts shrink (weakly) as alpha grows.
    pub fn is_nested(&self) -> bool {
        self.cuts
            .windows(2)
            .all(|w| w[1].0 >= w[0].0 && w[1].1 <= w[0].1)
    }
}

/// Recovers alpha-cuts from a grid: the cut at level alpha aggregates the
/// min/max over mu of every row with level >= alpha, so the family is
/// nested by construction.
pub fn alpha_cuts(g: &GranularGrid) -> AlphaCutFamily {
    let n_alpha = g.spec.n_alpha();
    let mut cuts = vec![(0.0, 0.0); n_alpha];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for ai in (0..n_alpha).rev() {
        let (row_lo, row_hi) = g.row_range(ai);
        lo = lo.min(row_lo);
        hi = hi.max(row_hi);
        cuts[ai] = (lo, hi);
    }
    AlphaCutFamily {
        alphas: g.spec.alphas.clone(),
        cuts,
    }
}

/// Pointwise arithmetic operations on matched (alpha, mu) entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Pointwise arithmetic with a single shared RDM variable.
pub fn gr_binary(op: BinaryOp, a: &GranularGrid, b: &GranularGrid) -> Result<GranularGrid> {
    a.check_same_spec(b, "arithmetic")?;
    if op == BinaryOp::Div {
        for (k, &bv) in b.values.iter().enumerate() {
            if bv.abs() < DIV_ZERO_TOL {
                let n_mu = b.spec.n_mu();
                return Err(Error::SingularPoint {
                    alpha: b.spec.alphas[k / n_mu],
                    mu: b.spec.mus[k % n_mu],
                });
            }
        }
    }
    let values = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(&x, &y)| match op {
            BinaryOp::Add => x + y,
            BinaryOp::Sub => x - y,
            BinaryOp::Mul => x * y,
            BinaryOp::Div => x / y,
        })
        .collect();
    Ok(GranularGrid {
        spec: a.spec.clone(),
        values,
    })
}

pub fn gr_add(a: &GranularGrid, b: &GranularGrid) -> Result<GranularGrid> {
    gr_binary(BinaryOp::Add, a, b)
}

pub fn gr_sub(a: &GranularGrid, b: &GranularGrid) -> Result<GranularGrid> {
    gr_binary(BinaryOp::Sub, a, b)
}

pub fn gr_mul(a: &GranularGrid, b: &GranularGrid) -> Result<GranularGrid> {
    gr_binary(BinaryOp::Mul, a, b)
}

pub fn gr_div(a: &GranularGrid, b: &GranularGrid) -> Result<GranularGrid> {
    gr_binary(BinaryOp::Div, a, b)
}

/// How the two RDM variables range when measuring a distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricMode {
    /// Each operand gets its own RDM variable; maximize over both.
    /// Makes the self-distance of a non-crisp number its alpha = 0 spread.
    IndependentMu,
    /// Single shared RDM variable; both operands are read at the same mu.
    MatchedMu,
}

/// Granular distance: sup over alpha of the max absolute difference, with
/// the RDM variables of the two operands ranging independently.
pub fn gr_metric(a: &GranularGrid, b: &GranularGrid) -> Result<f64> {
    gr_metric_with_mode(a, b, MetricMode::IndependentMu)
}

/// Granular distance in either RDM mode.
///
/// On a finite grid this is a lower bound of the true sup/max; use dense
/// mu sampling where the bound matters.
pub fn gr_metric_with_mode(a: &GranularGrid, b: &GranularGrid, mode: MetricMode) -> Result<f64> {
    a.check_same_spec(b, "metric")?;
    let n_alpha = a.spec.n_alpha();
    let n_mu = a.spec.n_mu();
    let mut best: f64 = 0.0;
    for ai in 0..n_alpha {
        match mode {
            MetricMode::IndependentMu => {
                let (alo, ahi) = a.row_range(ai);
                let (blo, bhi) = b.row_range(ai);
                best = best.max((ahi - blo).abs()).max((bhi - alo).abs());
            }
            MetricMode::MatchedMu => {
                for mi in 0..n_mu {
                    best = best.max((a.value(ai, mi) - b.value(ai, mi)).abs());
                }
            }
        }
    }
    Ok(best)
}
