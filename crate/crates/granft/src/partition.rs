//! Ruspini partitions of a real interval with triangular basic functions.
//!
//! Nodes are equidistant, the first and last coincide with the interval
//! endpoints, each basic function is a unit hat centered on its node, and
//! the hats sum to one everywhere on the interval.

use crate::error::{Error, Result};

/// Shape of the basic functions. Only triangular hats are implemented; the
/// enum keeps the door open without changing the type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasicShape {
    #[default]
    Triangular,
}

/// A uniform fuzzy partition of `[a, b]` with `m` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyPartition {
    a: f64,
    b: f64,
    m: usize,
    h: f64,
    shape: BasicShape,
}

impl FuzzyPartition {
    /// Equidistant partition with `m >= 2` nodes, `node(0) = a`, `node(m-1) = b`.
    pub fn uniform(a: f64, b: f64, m: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::Validation(format!(
                "partition interval must satisfy a < b, got [{a}, {b}]"
            )));
        }
        if m < 2 {
            return Err(Error::Validation(format!(
                "partition needs at least 2 nodes, got {m}"
            )));
        }
        Ok(Self {
            a,
            b,
            m,
            h: (b - a) / (m - 1) as f64,
            shape: BasicShape::Triangular,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Node count.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Node spacing.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn shape(&self) -> BasicShape {
        self.shape
    }

    /// Node abscissa, `i` in `0..m`.
    pub fn node(&self, i: usize) -> f64 {
        if i == self.m - 1 {
            self.b
        } else {
            self.a + self.h * i as f64
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.m).map(|i| self.node(i)).collect()
    }

    /// Support of basic function `i`, clipped to `[a, b]`.
    pub fn support(&self, i: usize) -> (f64, f64) {
        let lo = if i == 0 { self.a } else { self.node(i - 1) };
        let hi = if i + 1 >= self.m { self.b } else { self.node(i + 1) };
        (lo, hi)
    }

    /// Value of the `i`-th triangular hat at `u`.
    pub fn basic_eval(&self, i: usize, u: f64) -> Result<f64> {
        if i >= self.m {
            return Err(Error::Validation(format!(
                "basic function index {i} out of range for m={}",
                self.m
            )));
        }
        if u < self.a || u > self.b {
            return Err(Error::Domain(format!(
                "u={u} outside partition interval [{}, {}]",
                self.a, self.b
            )));
        }
        Ok((1.0 - (u - self.node(i)).abs() / self.h).max(0.0))
    }

    /// Integral of the `i`-th basic function over its support: `h/2` for
    /// the two edge functions, `h` for interior ones. Closed form, no
    /// quadrature.
    pub fn basic_integral(&self, i: usize) -> Result<f64> {
        if self.m < 3 {
            return Err(Error::Validation(
                "basic integrals need a partition with at least 3 nodes".into(),
            ));
        }
        if i >= self.m {
            return Err(Error::Validation(format!(
                "basic function index {i} out of range for m={}",
                self.m
            )));
        }
        Ok(if i == 0 || i == self.m - 1 {
            self.h / 2.0
        } else {
            self.h
        })
    }

    /// Same closed form without the `m >= 3` restriction; used internally
    /// where the two-node partition is legitimate.
    pub(crate) fn basic_weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.m - 1 {
            self.h / 2.0
        } else {
            self.h
        }
    }
}

/// Quadrature flavor for integrals against basic functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadKind {
    Trapezoid,
    Simpson,
}

/// Composite quadrature with a fixed number of subdivisions per inter-node
/// gap. The basic functions are linear on each gap, so both rules integrate
/// them exactly; the subdivision count controls accuracy in the other factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureRule {
    kind: QuadKind,
    subdivisions: usize,
}

impl QuadratureRule {
    pub fn new(kind: QuadKind, subdivisions: usize) -> Result<Self> {
        if subdivisions == 0 {
            return Err(Error::Validation("quadrature needs >= 1 subdivision".into()));
        }
        if kind == QuadKind::Simpson && subdivisions % 2 != 0 {
            return Err(Error::Validation(
                "Simpson quadrature needs an even subdivision count".into(),
            ));
        }
        Ok(Self { kind, subdivisions })
    }

    pub fn trapezoid(subdivisions: usize) -> Result<Self> {
        Self::new(QuadKind::Trapezoid, subdivisions)
    }

    pub fn simpson(subdivisions: usize) -> Result<Self> {
        Self::new(QuadKind::Simpson, subdivisions)
    }

    pub fn kind(&self) -> QuadKind {
        self.kind
    }

    pub fn subdivisions(&self) -> usize {
        self.subdivisions
    }

    /// Weights for the `subdivisions + 1` sample points of one gap of
    /// length `gap`.
    pub(crate) fn gap_weights(&self, gap: f64) -> Vec<f64> {
        let n = self.subdivisions;
        let step = gap / n as f64;
        match self.kind {
            QuadKind::Trapezoid => {
                let mut w = vec![step; n + 1];
                w[0] = step / 2.0;
                w[n] = step / 2.0;
                w
            }
            QuadKind::Simpson => {
                let mut w = vec![0.0; n + 1];
                for (k, wk) in w.iter_mut().enumerate() {
                    *wk = step / 3.0
                        * if k == 0 || k == n {
                            1.0
                        } else if k % 2 == 1 {
                            4.0
                        } else {
                            2.0
                        };
                }
                w
            }
        }
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self {
            kind: QuadKind::Trapezoid,
            subdivisions: 10,
        }
    }
}

/// Shared sample lattice for a partition under a rule: `subdivisions`
/// intervals per gap, endpoints included once. Length is
/// `(m - 1) * subdivisions + 1`.
pub fn quadrature_nodes(p: &FuzzyPartition, rule: QuadratureRule) -> Vec<f64> {
    let n = rule.subdivisions();
    let mut us = Vec::with_capacity((p.m() - 1) * n + 1);
    for gap in 0..p.m() - 1 {
        let lo = p.node(gap);
        let hi = p.node(gap + 1);
        for k in 0..n {
            us.push(lo + (hi - lo) * k as f64 / n as f64);
        }
        if gap == p.m() - 2 {
            us.push(hi);
        }
    }
    us
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_partition_geometry() {
        let p = FuzzyPartition::uniform(0.0, 3.0, 4).unwrap();
        assert_eq!(p.nodes(), vec![0.0, 1.0, 2.0, 3.0]);
        assert_abs_diff_eq!(p.h(), 1.0);
        // hats match the kink triples (0,0,1), (0,1,2), (1,2,3), (2,3,3)
        assert_abs_diff_eq!(p.basic_eval(0, 0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(p.basic_eval(0, 0.5).unwrap(), 0.5);
        assert_abs_diff_eq!(p.basic_eval(3, 2.5).unwrap(), 0.5);
        assert_abs_diff_eq!(p.basic_eval(3, 3.0).unwrap(), 1.0);

        let tiny = FuzzyPartition::uniform(0.0, 1.0, 2).unwrap();
        assert_eq!(tiny.nodes(), vec![0.0, 1.0]);
        assert_abs_diff_eq!(tiny.h(), 1.0);

        let fine = FuzzyPartition::uniform(0.0, 1.0, 101).unwrap();
        assert_abs_diff_eq!(fine.h(), 0.01);

        assert!(FuzzyPartition::uniform(0.0, 1.0, 1).is_err());
        assert!(FuzzyPartition::uniform(1.0, 1.0, 3).is_err());
        assert!(FuzzyPartition::uniform(2.0, 1.0, 3).is_err());
    }

    #[test]
    fn hats_peak_at_their_node_and_sum_to_one() {
        let p = FuzzyPartition::uniform(-1.0, 2.0, 7).unwrap();
        for i in 0..7 {
            assert_abs_diff_eq!(p.basic_eval(i, p.node(i)).unwrap(), 1.0);
        }
        let p2 = FuzzyPartition::uniform(0.0, 3.0, 4).unwrap();
        assert_abs_diff_eq!(p2.basic_eval(1, 0.5).unwrap(), 0.5);
        // Ruspini condition at scattered points
        for k in 0..100 {
            let u = -1.0 + 3.0 * (k as f64 * 0.7368421).fract();
            let total: f64 = (0..7).map(|i| p.basic_eval(i, u).unwrap()).sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
        assert!(p.basic_eval(0, 2.5).is_err());
        assert!(p.basic_eval(0, -1.5).is_err());
    }

    #[test]
    fn basic_integral_closed_form() {
        let p = FuzzyPartition::uniform(0.0, 3.0, 4).unwrap();
        assert_abs_diff_eq!(p.basic_integral(0).unwrap(), 0.5);
        assert_abs_diff_eq!(p.basic_integral(1).unwrap(), 1.0);
        let fine = FuzzyPartition::uniform(0.0, 1.0, 101).unwrap();
        assert_abs_diff_eq!(fine.basic_integral(49).unwrap(), 0.01);
        let tiny = FuzzyPartition::uniform(0.0, 1.0, 2).unwrap();
        assert!(tiny.basic_integral(0).is_err());
    }

    #[test]
    fn quadrature_reproduces_basic_integrals() {
        // cross-check the closed form against explicit quadrature of the hats
        let p = FuzzyPartition::uniform(0.0, 2.5, 6).unwrap();
        for rule in [
            QuadratureRule::default(),
            QuadratureRule::simpson(10).unwrap(),
        ] {
            let us = quadrature_nodes(&p, rule);
            for i in 0..p.m() {
                let mut total = 0.0;
                let n = rule.subdivisions();
                for gap in 0..p.m() - 1 {
                    let w = rule.gap_weights(p.h());
                    for k in 0..=n {
                        let u = us[gap * n + k];
                        total += w[k] * p.basic_eval(i, u).unwrap();
                    }
                }
                assert_abs_diff_eq!(total, p.basic_integral(i).unwrap(), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn interior_hats_are_symmetric() {
        let p = FuzzyPartition::uniform(0.0, 3.0, 4).unwrap();
        for i in 1..3 {
            let c = p.node(i);
            for k in 0..=10 {
                let d = p.h() * k as f64 / 10.0;
                assert_abs_diff_eq!(
                    p.basic_eval(i, c - d).unwrap(),
                    p.basic_eval(i, c + d).unwrap(),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn simpson_needs_even_subdivisions() {
        assert!(QuadratureRule::simpson(5).is_err());
        assert!(QuadratureRule::simpson(10).is_ok());
        assert!(QuadratureRule::trapezoid(0).is_err());
    }

    #[test]
    fn lattice_layout() {
        let p = FuzzyPartition::uniform(0.0, 3.0, 4).unwrap();
        let us = quadrature_nodes(&p, QuadratureRule::default());
        assert_eq!(us.len(), 31);
        assert_eq!(us[0], 0.0);
        assert_eq!(*us.last().unwrap(), 3.0);
        assert_abs_diff_eq!(us[10], 1.0, epsilon = 1e-15);
    }
}
