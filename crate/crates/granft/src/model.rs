//! Two-prey/one-predator model with fuzzy parameters: right-hand sides,
//! closed-form equilibria, variational matrix, eigenvalue-based local
//! stability, a Lyapunov-style global check, and simulation drivers.
//!
//! State variables: prey densities `p`, `q` and predator density `r`.
//!
//! ```text
//! p' = a1 p (1 - p) - p r + p q r
//! q' = a2 q (1 - q) - q r + p q r
//! r' = -a3 r^2 + a4 p r + a5 q r
//! ```
//!
//! All state and parameter grids share a single RDM variable, so one
//! (alpha, mu) pair selects one crisp instance of the whole system.

use crate::eig3::{charpoly_3x3, eigenvalues_3x3, frobenius_3x3};
use crate::error::{Error, Result};
use crate::granular::{hmf_from_triangular, GridSpec, TriangularFuzzyNumber};
use crate::ode::{
    solve_euler, solve_ft_euler_midpoint, solve_reference, FuzzyIVP, FuzzyTrajectory,
};
use crate::partition::FuzzyPartition;
use num_complex::Complex64;

/// Eigenvalue real parts within this band of zero give no stability verdict.
pub const STABILITY_TOL: f64 = 1e-9;

/// Model parameters: two growth rates, the predator self-limitation, two
/// predation-gain rates, and the initial densities.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub a1: TriangularFuzzyNumber,
    pub a2: TriangularFuzzyNumber,
    pub a3: TriangularFuzzyNumber,
    pub a4: TriangularFuzzyNumber,
    pub a5: TriangularFuzzyNumber,
    pub p0: TriangularFuzzyNumber,
    pub q0: TriangularFuzzyNumber,
    pub r0: TriangularFuzzyNumber,
}

impl ModelParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a1: TriangularFuzzyNumber,
        a2: TriangularFuzzyNumber,
        a3: TriangularFuzzyNumber,
        a4: TriangularFuzzyNumber,
        a5: TriangularFuzzyNumber,
        p0: TriangularFuzzyNumber,
        q0: TriangularFuzzyNumber,
        r0: TriangularFuzzyNumber,
    ) -> Result<Self> {
        for (name, t) in [
            ("a1", &a1),
            ("a2", &a2),
            ("a3", &a3),
            ("a4", &a4),
            ("a5", &a5),
            ("p0", &p0),
            ("q0", &q0),
            ("r0", &r0),
        ] {
            if t.left() <= 0.0 {
                return Err(Error::Validation(format!(
                    "model parameter {name} must be positive, got {t}"
                )));
            }
        }
        Ok(Self {
            a1,
            a2,
            a3,
            a4,
            a5,
            p0,
            q0,
            r0,
        })
    }

    /// Crisp parameter values at one grid point; the shared RDM variable
    /// couples all of them to the same mu.
    pub fn slice(&self, alpha: f64, mu: f64) -> ParamSlice {
        ParamSlice {
            a1: self.a1.hmf(alpha, mu),
            a2: self.a2.hmf(alpha, mu),
            a3: self.a3.hmf(alpha, mu),
            a4: self.a4.hmf(alpha, mu),
            a5: self.a5.hmf(alpha, mu),
        }
    }

    pub fn initial_slice(&self, alpha: f64, mu: f64) -> [f64; 3] {
        [
            self.p0.hmf(alpha, mu),
            self.q0.hmf(alpha, mu),
            self.r0.hmf(alpha, mu),
        ]
    }
}

/// One crisp instance of the parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSlice {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
}

/// Model right-hand side at a crisp state.
pub fn rhs(state: [f64; 3], ps: &ParamSlice) -> [f64; 3] {
    let [p, q, r] = state;
    [
        ps.a1 * p * (1.0 - p) - p * r + p * q * r,
        ps.a2 * q * (1.0 - q) - q * r + p * q * r,
        -ps.a3 * r * r + ps.a4 * p * r + ps.a5 * q * r,
    ]
}

/// Partial derivatives of the right-hand side at a crisp state.
pub fn variational_matrix(state: [f64; 3], ps: &ParamSlice) -> [[f64; 3]; 3] {
    let [p, q, r] = state;
    [
        [
            ps.a1 - 2.0 * ps.a1 * p - r + q * r,
            p * r,
            -p + p * q,
        ],
        [
            q * r,
            ps.a2 - 2.0 * ps.a2 * q - r + p * r,
            -q + p * q,
        ],
        [
            ps.a4 * r,
            ps.a5 * r,
            -2.0 * ps.a3 * r + ps.a4 * p + ps.a5 * q,
        ],
    ]
}

/// Labels of the eight closed-form equilibria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquilibriumLabel {
    E0,
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    E7,
}

pub const ALL_EQUILIBRIA: [EquilibriumLabel; 8] = [
    EquilibriumLabel::E0,
    EquilibriumLabel::E1,
    EquilibriumLabel::E2,
    EquilibriumLabel::E3,
    EquilibriumLabel::E4,
    EquilibriumLabel::E5,
    EquilibriumLabel::E6,
    EquilibriumLabel::E7,
];

impl std::fmt::Display for EquilibriumLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "E{}", *self as usize)
    }
}

/// One equilibrium of one crisp slice.
#[derive(Debug, Clone, Copy)]
pub struct Equilibrium {
    pub label: EquilibriumLabel,
    pub point: [f64; 3],
    /// Whether the point exists as a positive-density equilibrium. The
    /// coexistence point is the only one that can fail to: it exists
    /// exactly when its prey components come out positive.
    pub exists: bool,
}

/// The closed-form equilibria of one parameter slice.
///
/// `E0..=E3` are the trivial corner states, `E4`/`E5` are one-prey states,
/// `E6` is the full-capacity state, and `E7` is the interior coexistence
/// state with `r = sqrt(a1 a2)`.
pub fn equilibria(ps: &ParamSlice) -> [Equilibrium; 8] {
    use EquilibriumLabel::*;
    let s4 = ps.a2 * ps.a3 + ps.a5;
    let e4 = [0.0, ps.a2 * ps.a3 / s4, ps.a2 * ps.a5 / s4];
    let s5 = ps.a1 * ps.a3 + ps.a4;
    let e5 = [ps.a1 * ps.a3 / s5, 0.0, ps.a1 * ps.a4 / s5];
    let e6 = [1.0, 1.0, (ps.a4 + ps.a5) / ps.a3];

    let ratio = (ps.a2 / ps.a1).sqrt();
    let geo = (ps.a1 * ps.a2).sqrt();
    let den = ps.a5 + ps.a4 * ratio;
    let p7_num = ps.a2 * ps.a3 + ps.a5 * (1.0 - ratio);
    let q7_num = ps.a3 * geo - ps.a4 * (1.0 - ratio);
    let e7 = [p7_num / den, q7_num / den, geo];
    let e7_exists = p7_num > 0.0 && q7_num > 0.0 && geo > 0.0;

    [
        Equilibrium { label: E0, point: [0.0, 0.0, 0.0], exists: true },
        Equilibrium { label: E1, point: [1.0, 0.0, 0.0], exists: true },
        Equilibrium { label: E2, point: [0.0, 1.0, 0.0], exists: true },
        Equilibrium { label: E3, point: [1.0, 1.0, 0.0], exists: true },
        Equilibrium { label: E4, point: e4, exists: true },
        Equilibrium { label: E5, point: e5, exists: true },
        Equilibrium { label: E6, point: e6, exists: true },
        Equilibrium { label: E7, point: e7, exists: e7_exists },
    ]
}

/// Eigenvalue-sign verdict under the `STABILITY_TOL` dead band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    Unstable,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

fn verdict_from_eigenvalues(ls: &[Complex64; 3]) -> Verdict {
    if ls.iter().any(|l| l.re > STABILITY_TOL) {
        Verdict::Unstable
    } else if ls.iter().all(|l| l.re < -STABILITY_TOL) {
        Verdict::Stable
    } else {
        Verdict::Inconclusive
    }
}

/// Stability analysis of one equilibrium of one slice.
#[derive(Debug, Clone)]
pub struct StabilityEntry {
    pub label: EquilibriumLabel,
    pub point: [f64; 3],
    pub exists: bool,
    pub eigenvalues: [Complex64; 3],
    /// Closed-form local-stability condition, where one is stated:
    /// the corner states are unconditionally unstable, `E4`/`E5`/`E6`
    /// have threshold inequalities, and `E7` combines three conditions.
    pub closed_form_stable: Option<bool>,
    pub verdict: Verdict,
    /// Whether the closed form and the eigenvalue test agree. `None` when
    /// no closed form applies or the eigenvalue test is inconclusive.
    pub agrees: Option<bool>,
}

/// Closed-form stability conditions for the non-corner equilibria.
fn closed_form_condition(label: EquilibriumLabel, ps: &ParamSlice, exists: bool) -> Option<bool> {
    use EquilibriumLabel::*;
    match label {
        E0 | E1 | E2 | E3 => Some(false),
        E4 => {
            let s = ps.a2 * ps.a3 + ps.a5;
            Some(ps.a1 < ps.a2 * ps.a5 * ps.a5 / (s * s))
        }
        E5 => {
            let s = ps.a1 * ps.a3 + ps.a4;
            Some(ps.a2 < ps.a1 * ps.a4 * ps.a4 / (s * s))
        }
        E6 => {
            let sum = ps.a4 + ps.a5;
            Some(ps.a1 * ps.a2 > sum * sum / (ps.a3 * ps.a3))
        }
        E7 => {
            let geo = (ps.a1 * ps.a2).sqrt();
            let c1 = ps.a4 + ps.a5 > ps.a3 * geo;
            let c2 = ps.a2 >= ps.a1;
            let c3 = ps.a1 * ps.a3 >= 1.0;
            Some(exists && c1 && c2 && c3)
        }
    }
}

/// Evaluates both the eigenvalue sign test and the closed-form conditions
/// for every equilibrium of one slice.
pub fn local_stability(ps: &ParamSlice) -> Vec<StabilityEntry> {
    equilibria(ps)
        .iter()
        .map(|eq| {
            let ls = eigenvalues_3x3(&variational_matrix(eq.point, ps));
            let verdict = verdict_from_eigenvalues(&ls);
            let closed = closed_form_condition(eq.label, ps, eq.exists);
            let agrees = closed.and_then(|c| match verdict {
                Verdict::Stable => Some(c),
                Verdict::Unstable => Some(!c),
                Verdict::Inconclusive => None,
            });
            StabilityEntry {
                label: eq.label,
                point: eq.point,
                exists: eq.exists,
                eigenvalues: ls,
                closed_form_stable: closed,
                verdict,
                agrees,
            }
        })
        .collect()
}

/// Check that each existing equilibrium actually zeroes the right-hand side.
pub fn equilibrium_residual(ps: &ParamSlice, eq: &Equilibrium) -> f64 {
    rhs(eq.point, ps)
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Residual of an eigenvalue in the characteristic polynomial, relative to
/// the cubed matrix norm.
pub fn eigenvalue_residual(state: [f64; 3], ps: &ParamSlice) -> f64 {
    let m = variational_matrix(state, ps);
    let scale = frobenius_3x3(&m).powi(3).max(f64::MIN_POSITIVE);
    eigenvalues_3x3(&m)
        .iter()
        .map(|&l| charpoly_3x3(&m, l).norm() / scale)
        .fold(0.0, f64::max)
}

/// One sampled state in a Lyapunov evaluation.
#[derive(Debug, Clone, Copy)]
pub struct LyapunovSample {
    pub state: [f64; 3],
    /// Value of `sum(x - xe - xe ln(x/xe))` at the state.
    pub potential: f64,
    /// Time derivative of the potential along the model field.
    pub derivative_along_field: f64,
    /// The constant-coefficient quadratic form the sufficiency argument
    /// bounds the derivative with.
    pub derivative_quadratic_form: f64,
    /// Whether all three deviations from the equilibrium share one sign.
    pub same_sign_deviation: bool,
}

/// Outcome of the global-stability check around the coexistence point.
#[derive(Debug, Clone)]
pub struct LyapunovEvaluation {
    pub equilibrium: [f64; 3],
    /// Sufficiency condition `a4 < 1`.
    pub predation_gain_below_one: bool,
    /// Sufficiency condition `a3 r / q < a4 p / q + 1` at the equilibrium.
    pub cross_term_condition: bool,
    pub samples: Vec<LyapunovSample>,
    /// Derivative along the field negative at every sampled non-equilibrium
    /// state with same-sign deviations.
    pub negative_at_same_sign_samples: bool,
}

fn log_potential(x: f64, xe: f64) -> f64 {
    x - xe - xe * (x / xe).ln()
}

/// Evaluates the Lyapunov potential and its derivative along the field at
/// the given positive states, against the coexistence equilibrium.
pub fn lyapunov_check(ps: &ParamSlice, states: &[[f64; 3]]) -> Result<LyapunovEvaluation> {
    let e7 = equilibria(ps)[7];
    if !e7.exists {
        return Err(Error::Validation(
            "coexistence equilibrium does not exist for these parameters".into(),
        ));
    }
    let [pe, qe, re] = e7.point;
    for st in states {
        if st.iter().any(|&x| x <= 0.0) {
            return Err(Error::Domain(format!(
                "lyapunov potential needs positive states, got {st:?}"
            )));
        }
    }
    let samples = states
        .iter()
        .map(|&st| {
            let [p, q, r] = st;
            let potential = log_potential(p, pe) + log_potential(q, qe) + log_potential(r, re);
            // d/dt of the potential: sum over variables of (x - xe)/x * x'
            let derivative_along_field = (p - pe) * (ps.a1 * (1.0 - p) - r + q * r)
                + (q - qe) * (ps.a2 * (1.0 - q) - r + p * r)
                + (r - re) * (-ps.a3 * r + ps.a4 * p + ps.a5 * q);
            let (dp, dq, dr) = (p - pe, q - qe, r - re);
            let derivative_quadratic_form = -ps.a1 * dp * dp - ps.a2 * dq * dq - ps.a3 * dr * dr
                + (ps.a4 - 1.0) * dp * dr
                + (ps.a3 * re / qe - ps.a4 * pe / qe - 1.0) * dq * dr;
            let same_sign_deviation = (dp >= 0.0 && dq >= 0.0 && dr >= 0.0)
                || (dp <= 0.0 && dq <= 0.0 && dr <= 0.0);
            LyapunovSample {
                state: st,
                potential,
                derivative_along_field,
                derivative_quadratic_form,
                same_sign_deviation,
            }
        })
        .collect::<Vec<_>>();
    let negative_at_same_sign_samples = samples
        .iter()
        .filter(|s| s.same_sign_deviation && s.state != e7.point)
        .all(|s| s.derivative_along_field < 0.0);
    Ok(LyapunovEvaluation {
        equilibrium: e7.point,
        predation_gain_below_one: ps.a4 < 1.0,
        cross_term_condition: ps.a3 * re / qe < ps.a4 * pe / qe + 1.0,
        samples,
        negative_at_same_sign_samples,
    })
}

/// Integrator selection for `simulate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Euler,
    FtMidpoint,
    Reference { refinement: u32 },
}

impl SolveMethod {
    pub fn name(&self) -> &'static str {
        match self {
            SolveMethod::Euler => "euler",
            SolveMethod::FtMidpoint => "ft-midpoint",
            SolveMethod::Reference { .. } => "reference",
        }
    }
}

impl std::str::FromStr for SolveMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler" => Ok(SolveMethod::Euler),
            "ft-midpoint" | "ft_midpoint" | "midpoint" => Ok(SolveMethod::FtMidpoint),
            "reference" | "exact" => Ok(SolveMethod::Reference { refinement: 10 }),
            other => Err(Error::Parse(format!(
                "unknown method \"{other}\" (expected euler, ft-midpoint, or reference)"
            ))),
        }
    }
}

/// Builds the fuzzy IVP for this model on `spec`.
pub fn model_ivp(
    params: &ModelParams,
    spec: &GridSpec,
    t_start: f64,
    t_end: f64,
) -> FuzzyIVP<impl Fn(f64, &[f64], &[f64], &mut [f64])> {
    let grids = [
        &params.a1, &params.a2, &params.a3, &params.a4, &params.a5,
    ]
    .map(|t| hmf_from_triangular(t, spec));
    let init = [&params.p0, &params.q0, &params.r0].map(|t| hmf_from_triangular(t, spec));
    FuzzyIVP {
        rhs: |_u: f64, x: &[f64], a: &[f64], out: &mut [f64]| {
            let slice = ParamSlice {
                a1: a[0],
                a2: a[1],
                a3: a[2],
                a4: a[3],
                a5: a[4],
            };
            let d = rhs([x[0], x[1], x[2]], &slice);
            out.copy_from_slice(&d);
        },
        autonomous: true,
        params: grids.to_vec(),
        init: init.to_vec(),
        t_start,
        t_end,
    }
}

/// Integrates the fuzzy model over the time nodes of `p`.
pub fn simulate(
    params: &ModelParams,
    spec: &GridSpec,
    p: &FuzzyPartition,
    method: SolveMethod,
) -> Result<FuzzyTrajectory> {
    let ivp = model_ivp(params, spec, p.a(), p.b());
    match method {
        SolveMethod::Euler => solve_euler(&ivp, p),
        SolveMethod::FtMidpoint => solve_ft_euler_midpoint(&ivp, p),
        SolveMethod::Reference { refinement } => solve_reference(&ivp, p, refinement),
    }
}

/// Names of the state variables in output order.
pub const STATE_NAMES: [&str; 3] = ["p", "q", "r"];

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tri(l: f64, p: f64, r: f64) -> TriangularFuzzyNumber {
        TriangularFuzzyNumber::new(l, p, r).unwrap()
    }

    /// Growth-dominated set where the one-prey state E4 attracts.
    fn params_prey_collapse() -> ModelParams {
        ModelParams::new(
            tri(0.01, 0.02, 0.03),
            tri(2.0, 4.0, 6.0),
            tri(0.1, 0.2, 0.3),
            tri(3.0, 4.0, 5.0),
            tri(1.0, 2.0, 3.0),
            TriangularFuzzyNumber::crisp(0.1),
            TriangularFuzzyNumber::crisp(0.2),
            TriangularFuzzyNumber::crisp(0.3),
        )
        .unwrap()
    }

    /// Mirror image of the above: E5 attracts.
    fn params_other_prey_collapse() -> ModelParams {
        ModelParams::new(
            tri(2.0, 4.0, 6.0),
            tri(0.01, 0.02, 0.03),
            tri(0.1, 0.2, 0.3),
            tri(1.0, 2.0, 3.0),
            tri(3.0, 4.0, 5.0),
            TriangularFuzzyNumber::crisp(0.1),
            TriangularFuzzyNumber::crisp(0.2),
            TriangularFuzzyNumber::crisp(0.3),
        )
        .unwrap()
    }

    /// Strong self-limitation: the full-capacity state E6 attracts.
    fn params_full_capacity() -> ModelParams {
        ModelParams::new(
            tri(3.0, 4.0, 5.0),
            tri(2.0, 4.0, 6.0),
            tri(3.0, 4.0, 5.0),
            tri(1.0, 2.0, 3.0),
            tri(0.01, 0.02, 0.03),
            TriangularFuzzyNumber::crisp(0.1),
            TriangularFuzzyNumber::crisp(0.2),
            TriangularFuzzyNumber::crisp(0.3),
        )
        .unwrap()
    }

    /// Coexistence set: E7 exists on the whole default grid.
    fn params_coexistence() -> ModelParams {
        ModelParams::new(
            tri(1.0, 2.0, 3.0),
            tri(2.0, 4.0, 6.0),
            tri(1.0, 2.0, 3.0),
            tri(3.0, 4.0, 5.0),
            tri(1.0, 2.0, 3.0),
            TriangularFuzzyNumber::crisp(0.1),
            TriangularFuzzyNumber::crisp(0.2),
            TriangularFuzzyNumber::crisp(0.3),
        )
        .unwrap()
    }

    #[test]
    fn rhs_values() {
        let ps = params_prey_collapse().slice(1.0, 0.0);
        assert_eq!(rhs([0.0, 0.0, 0.0], &ps), [0.0, 0.0, 0.0]);
        assert_eq!(rhs([1.0, 1.0, 0.0], &ps), [0.0, 0.0, 0.0]);
        let d = rhs([0.1, 0.2, 0.3], &ps);
        // 0.02*0.1*0.9 - 0.03 + 0.006
        assert_abs_diff_eq!(d[0], -0.0222, epsilon = 1e-15);
        assert_abs_diff_eq!(d[1], 0.586, epsilon = 1e-15);
        assert_abs_diff_eq!(d[2], 0.222, epsilon = 1e-15);
    }

    #[test]
    fn one_prey_equilibrium_values() {
        let ps = params_prey_collapse().slice(0.0, 0.0);
        let e4 = equilibria(&ps)[4];
        assert_abs_diff_eq!(e4.point[0], 0.0);
        assert_abs_diff_eq!(e4.point[1], 1.0 / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e4.point[2], 5.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn full_capacity_equilibrium_values() {
        let ps = params_full_capacity().slice(0.0, 0.0);
        let e6 = equilibria(&ps)[6];
        assert_abs_diff_eq!(e6.point[0], 1.0);
        assert_abs_diff_eq!(e6.point[1], 1.0);
        assert_abs_diff_eq!(e6.point[2], 1.01 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn coexistence_equilibrium_values() {
        let ps = params_coexistence().slice(1.0, 0.0);
        let e7 = equilibria(&ps)[7];
        assert!(e7.exists);
        assert_abs_diff_eq!(e7.point[0], 0.9366, epsilon = 1e-4);
        assert_abs_diff_eq!(e7.point[1], 0.9552, epsilon = 1e-4);
        assert_abs_diff_eq!(e7.point[2], 8.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn coexistence_point_can_fail_to_exist() {
        // a2 far below a1 makes the second prey component negative
        let ps = ParamSlice {
            a1: 4.0,
            a2: 0.01,
            a3: 0.01,
            a4: 5.0,
            a5: 0.01,
        };
        let e7 = equilibria(&ps)[7];
        assert!(!e7.exists);
        assert!(e7.point[1] < 0.0);
    }

    #[test]
    fn equilibria_zero_the_field() {
        for params in [
            params_prey_collapse(),
            params_other_prey_collapse(),
            params_full_capacity(),
            params_coexistence(),
        ] {
            let spec = GridSpec::default();
            for &alpha in spec.alphas() {
                for &mu in spec.mus() {
                    let ps = params.slice(alpha, mu);
                    for eq in equilibria(&ps).iter().filter(|e| e.exists) {
                        assert!(
                            equilibrium_residual(&ps, eq) < 1e-9,
                            "{} residual too large at alpha={alpha} mu={mu}",
                            eq.label
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn variational_matrix_at_corners() {
        let ps = params_prey_collapse().slice(1.0, 0.0);
        let m0 = variational_matrix([0.0, 0.0, 0.0], &ps);
        assert_eq!(m0[0][0], ps.a1);
        assert_eq!(m0[1][1], ps.a2);
        assert_eq!(m0[2][2], 0.0);
        for (i, row) in m0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j {
                    assert_eq!(*v, 0.0);
                }
            }
        }

        // distinct eigenvalues at the (0, 0) slice: a1=0.01, a2=2, a4=3
        let ps0 = params_prey_collapse().slice(0.0, 0.0);
        let ls1 = eigenvalues_3x3(&variational_matrix([1.0, 0.0, 0.0], &ps0));
        let mut res: Vec<f64> = ls1.iter().map(|l| l.re).collect();
        res.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_abs_diff_eq!(res[0], -ps0.a1, epsilon = 1e-10);
        assert_abs_diff_eq!(res[1], ps0.a2, epsilon = 1e-10);
        assert_abs_diff_eq!(res[2], ps0.a4, epsilon = 1e-10);

        // the peak slice has a2 = a4 = 4: a double root, so only sqrt(eps)
        // accuracy is attainable
        let ls1 = eigenvalues_3x3(&variational_matrix([1.0, 0.0, 0.0], &ps));
        let mut res: Vec<f64> = ls1.iter().map(|l| l.re).collect();
        res.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_abs_diff_eq!(res[0], -ps.a1, epsilon = 1e-10);
        assert_abs_diff_eq!(res[1], ps.a2, epsilon = 2e-6);
        assert_abs_diff_eq!(res[2], ps.a4, epsilon = 2e-6);

        let ls3 = eigenvalues_3x3(&variational_matrix([1.0, 1.0, 0.0], &ps0));
        let mut res: Vec<f64> = ls3.iter().map(|l| l.re).collect();
        res.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_abs_diff_eq!(res[0], -ps0.a2, epsilon = 1e-10);
        assert_abs_diff_eq!(res[1], -ps0.a1, epsilon = 1e-10);
        assert_abs_diff_eq!(res[2], ps0.a4 + ps0.a5, epsilon = 1e-10);
    }

    #[test]
    fn eigenvalue_residuals_at_equilibria() {
        let spec = GridSpec::default();
        for params in [params_prey_collapse(), params_coexistence()] {
            for &alpha in spec.alphas() {
                for &mu in spec.mus() {
                    let ps = params.slice(alpha, mu);
                    for eq in equilibria(&ps) {
                        assert!(eigenvalue_residual(eq.point, &ps) < 1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn corner_states_are_unstable_everywhere() {
        let spec = GridSpec::default();
        let params = params_prey_collapse();
        for &alpha in spec.alphas() {
            for &mu in spec.mus() {
                let report = local_stability(&params.slice(alpha, mu));
                for entry in &report[0..4] {
                    assert_eq!(entry.verdict, Verdict::Unstable, "{}", entry.label);
                    assert_eq!(entry.agrees, Some(true));
                }
            }
        }
    }

    #[test]
    fn closed_forms_agree_with_eigenvalues_on_reference_sets() {
        let spec = GridSpec::default();
        let cases = [
            (params_prey_collapse(), EquilibriumLabel::E4, true),
            (params_other_prey_collapse(), EquilibriumLabel::E5, true),
            (params_full_capacity(), EquilibriumLabel::E6, true),
            // the coexistence set has slices where E7 is genuinely unstable;
            // the closed form tracks the eigenvalue test either way
            (params_coexistence(), EquilibriumLabel::E7, false),
        ];
        for (params, label, expect_stable_everywhere) in cases {
            for &alpha in spec.alphas() {
                for &mu in spec.mus() {
                    let report = local_stability(&params.slice(alpha, mu));
                    let entry = report
                        .iter()
                        .find(|e| e.label == label)
                        .unwrap();
                    assert_eq!(
                        entry.agrees,
                        Some(true),
                        "{label} disagreement at alpha={alpha} mu={mu}: {entry:?}"
                    );
                    if expect_stable_everywhere {
                        assert_eq!(entry.verdict, Verdict::Stable);
                        assert_eq!(entry.closed_form_stable, Some(true));
                    }
                }
            }
        }
    }

    #[test]
    fn lyapunov_potential_and_derivative() {
        // small growth rates, strong self-limitation: the sufficiency
        // conditions hold and the field derivative is negative nearby
        let params = ModelParams::new(
            tri(0.08, 0.09, 0.10),
            tri(0.08, 0.09, 0.10),
            tri(1.8, 2.0, 2.2),
            tri(0.25, 0.30, 0.35),
            tri(0.25, 0.30, 0.35),
            TriangularFuzzyNumber::crisp(0.3),
            TriangularFuzzyNumber::crisp(0.3),
            TriangularFuzzyNumber::crisp(0.09),
        )
        .unwrap();
        let spec = GridSpec::default();
        for &alpha in spec.alphas() {
            for &mu in spec.mus() {
                let ps = params.slice(alpha, mu);
                let e7 = equilibria(&ps)[7].point;
                let scaled = [e7[0] * 1.1, e7[1] * 1.1, e7[2] * 1.1];
                let eval = lyapunov_check(&ps, &[e7, scaled]).unwrap();
                assert!(eval.predation_gain_below_one);
                assert!(eval.cross_term_condition);
                assert_abs_diff_eq!(eval.samples[0].potential, 0.0, epsilon = 1e-12);
                assert!(eval.samples[1].potential > 0.0);
                assert!(eval.samples[1].same_sign_deviation);
                assert!(eval.samples[1].derivative_along_field < 0.0);
                assert!(eval.samples[1].derivative_quadratic_form < 0.0);
                assert!(eval.negative_at_same_sign_samples);
            }
        }

        // strict positivity at scattered states
        let ps = params.slice(1.0, 0.0);
        let e7 = equilibria(&ps)[7].point;
        let mut seed = 42u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let st = [next() * 2.0 + 1e-3, next() * 2.0 + 1e-3, next() * 2.0 + 1e-3];
            if st == e7 {
                continue;
            }
            let eval = lyapunov_check(&ps, &[st]).unwrap();
            assert!(eval.samples[0].potential > 0.0);
        }

        // nonpositive states are a domain error
        assert!(matches!(
            lyapunov_check(&ps, &[[0.0, 1.0, 1.0]]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn simulation_matches_slice_integration() {
        let params = params_prey_collapse();
        let spec = GridSpec::default();
        let p = FuzzyPartition::uniform(0.0, 1.0, 101).unwrap();
        let tr = simulate(&params, &spec, &p, SolveMethod::FtMidpoint).unwrap();
        // the peak slice equals a crisp leapfrog run
        let ps = params.slice(1.0, 0.0);
        let mut x = [[0.1, 0.2, 0.3]; 2];
        let h = p.h();
        let d0 = rhs(x[0], &ps);
        for k in 0..3 {
            x[1][k] = x[0][k] + h * d0[k];
        }
        let mut prev = x[0];
        let mut cur = x[1];
        for _ in 1..100 {
            let d = rhs(cur, &ps);
            let mut next = [0.0; 3];
            for k in 0..3 {
                next[k] = prev[k] + 2.0 * h * d[k];
            }
            prev = cur;
            cur = next;
        }
        for (var, &expect) in cur.iter().enumerate() {
            let n_alpha = spec.n_alpha();
            assert_abs_diff_eq!(tr.value(var, 100).value(n_alpha - 1, 0), expect);
        }
        // alpha = 1 row is mu-independent: crisp behavior
        for var in 0..3 {
            let top = spec.n_alpha() - 1;
            let base = tr.value(var, 100).value(top, 0);
            for mi in 1..spec.n_mu() {
                assert_abs_diff_eq!(tr.value(var, 100).value(top, mi), base, epsilon = 1e-12);
            }
        }
    }
}
