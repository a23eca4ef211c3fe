//! CSV rendering for grids, components, trajectories, and report tables.
//!
//! All writers are deterministic: fixed column order, fixed row order, and
//! fixed number formatting, so identical inputs produce identical bytes.
//! Values appear rounded to four fractional digits next to a full-precision
//! sidecar column.

use crate::ftransform::{CrispComponents, GranularComponents};
use crate::granular::GranularGrid;
use crate::model::{LyapunovEvaluation, StabilityEntry};
use crate::ode::FuzzyTrajectory;

/// Four fractional digits, negative zero normalized away.
pub fn fmt4(v: f64) -> String {
    let mut r = (v * 1e4).round() / 1e4;
    if r == 0.0 {
        r = 0.0;
    }
    format!("{r:.4}")
}

/// Shortest representation that round-trips.
pub fn fmt_full(v: f64) -> String {
    format!("{v}")
}

fn push_row(out: &mut String, cells: &[String]) {
    out.push_str(&cells.join(","));
    out.push('\n');
}

/// Grid CSV: rows are alpha levels, one column per mu value, full-precision
/// sidecar columns after the rounded ones.
pub fn grid_csv(g: &GranularGrid) -> String {
    let spec = g.spec();
    let mut out = String::new();
    let mut header: Vec<String> = vec!["alpha".into()];
    header.extend(spec.mus().iter().map(|m| format!("mu={m}")));
    header.extend(spec.mus().iter().map(|m| format!("mu={m}_full")));
    push_row(&mut out, &header);
    for (ai, &alpha) in spec.alphas().iter().enumerate() {
        let mut row = vec![fmt_full(alpha)];
        for mi in 0..spec.n_mu() {
            row.push(fmt4(g.value(ai, mi)));
        }
        for mi in 0..spec.n_mu() {
            row.push(fmt_full(g.value(ai, mi)));
        }
        push_row(&mut out, &row);
    }
    out
}

/// Components of a crisp transform: one row per component.
pub fn crisp_components_csv(c: &CrispComponents) -> String {
    let mut out = String::new();
    push_row(
        &mut out,
        &["i".into(), "u".into(), "value".into(), "value_full".into()],
    );
    for (i, &v) in c.values().iter().enumerate() {
        push_row(
            &mut out,
            &[
                i.to_string(),
                fmt_full(c.partition().node(i)),
                fmt4(v),
                fmt_full(v),
            ],
        );
    }
    out
}

/// Components of a granular transform in long format.
pub fn granular_components_csv(c: &GranularComponents) -> String {
    let spec = c.spec();
    let mut out = String::new();
    push_row(
        &mut out,
        &[
            "i".into(),
            "u".into(),
            "alpha".into(),
            "mu".into(),
            "value".into(),
            "value_full".into(),
        ],
    );
    for (i, comp) in c.components().iter().enumerate() {
        let u = c.partition().node(i);
        for (ai, &alpha) in spec.alphas().iter().enumerate() {
            for (mi, &mu) in spec.mus().iter().enumerate() {
                let v = comp.value(ai, mi);
                push_row(
                    &mut out,
                    &[
                        i.to_string(),
                        fmt_full(u),
                        fmt_full(alpha),
                        fmt_full(mu),
                        fmt4(v),
                        fmt_full(v),
                    ],
                );
            }
        }
    }
    out
}

/// Full trajectory in long format: state, u, alpha, mu, value.
pub fn trajectory_csv(tr: &FuzzyTrajectory, state_names: &[&str]) -> String {
    let spec = tr.spec();
    let p = tr.partition();
    let mut out = String::new();
    push_row(
        &mut out,
        &[
            "state".into(),
            "u".into(),
            "alpha".into(),
            "mu".into(),
            "value".into(),
            "value_full".into(),
        ],
    );
    for (var, name) in state_names.iter().enumerate() {
        for node in 0..p.m() {
            let u = p.node(node);
            let g = tr.value(var, node);
            for (ai, &alpha) in spec.alphas().iter().enumerate() {
                for (mi, &mu) in spec.mus().iter().enumerate() {
                    let v = g.value(ai, mi);
                    push_row(
                        &mut out,
                        &[
                            (*name).into(),
                            fmt_full(u),
                            fmt_full(alpha),
                            fmt_full(mu),
                            fmt4(v),
                            fmt_full(v),
                        ],
                    );
                }
            }
        }
    }
    out
}

/// Equilibrium table rows (one labeled point across the grid): mu outer,
/// alpha inner, matching the reference table layout.
pub fn equilibrium_table_csv(
    rows: &[(f64, f64, [f64; 3], bool)], // (mu, alpha, point, exists)
) -> String {
    let mut out = String::new();
    push_row(
        &mut out,
        &[
            "mu".into(),
            "alpha".into(),
            "exists".into(),
            "p".into(),
            "q".into(),
            "r".into(),
            "p_full".into(),
            "q_full".into(),
            "r_full".into(),
        ],
    );
    for &(mu, alpha, pt, exists) in rows {
        push_row(
            &mut out,
            &[
                fmt_full(mu),
                fmt_full(alpha),
                exists.to_string(),
                fmt4(pt[0]),
                fmt4(pt[1]),
                fmt4(pt[2]),
                fmt_full(pt[0]),
                fmt_full(pt[1]),
                fmt_full(pt[2]),
            ],
        );
    }
    out
}

fn fmt_complex4(re: f64, im: f64) -> String {
    if im == 0.0 {
        fmt4(re)
    } else {
        format!("{}{}{}i", fmt4(re), if im < 0.0 { "-" } else { "+" }, fmt4(im.abs()))
    }
}

fn fmt_complex_full(re: f64, im: f64) -> String {
    if im == 0.0 {
        fmt_full(re)
    } else {
        format!("{}{}{}i", fmt_full(re), if im < 0.0 { "-" } else { "+" }, fmt_full(im.abs()))
    }
}

/// Stability report rows across the grid.
pub fn stability_csv(rows: &[(f64, f64, StabilityEntry)]) -> String {
    let mut out = String::new();
    push_row(
        &mut out,
        &[
            "label".into(),
            "mu".into(),
            "alpha".into(),
            "exists".into(),
            "closed_form_stable".into(),
            "verdict".into(),
            "agrees".into(),
            "eig1".into(),
            "eig2".into(),
            "eig3".into(),
            "eig1_full".into(),
            "eig2_full".into(),
            "eig3_full".into(),
        ],
    );
    for (mu, alpha, e) in rows {
        let opt = |b: Option<bool>| b.map_or("n/a".to_string(), |v| v.to_string());
        let mut row = vec![
            e.label.to_string(),
            fmt_full(*mu),
            fmt_full(*alpha),
            e.exists.to_string(),
            opt(e.closed_form_stable),
            e.verdict.to_string(),
            opt(e.agrees),
        ];
        for l in &e.eigenvalues {
            row.push(fmt_complex4(l.re, l.im));
        }
        for l in &e.eigenvalues {
            row.push(fmt_complex_full(l.re, l.im));
        }
        push_row(&mut out, &row);
    }
    out
}

/// Lyapunov evaluation rows across the grid, one row per sampled state.
pub fn lyapunov_csv(rows: &[(f64, f64, LyapunovEvaluation)]) -> String {
    let mut out = String::new();
    push_row(
        &mut out,
        &[
            "mu".into(),
            "alpha".into(),
            "gain_below_one".into(),
            "cross_term_ok".into(),
            "sample_p".into(),
            "sample_q".into(),
            "sample_r".into(),
            "potential".into(),
            "d_field".into(),
            "d_quadratic".into(),
            "same_sign".into(),
            "potential_full".into(),
            "d_field_full".into(),
            "d_quadratic_full".into(),
        ],
    );
    for (mu, alpha, eval) in rows {
        for s in &eval.samples {
            push_row(
                &mut out,
                &[
                    fmt_full(*mu),
                    fmt_full(*alpha),
                    eval.predation_gain_below_one.to_string(),
                    eval.cross_term_condition.to_string(),
                    fmt4(s.state[0]),
                    fmt4(s.state[1]),
                    fmt4(s.state[2]),
                    fmt4(s.potential),
                    fmt4(s.derivative_along_field),
                    fmt4(s.derivative_quadratic_form),
                    s.same_sign_deviation.to_string(),
                    fmt_full(s.potential),
                    fmt_full(s.derivative_along_field),
                    fmt_full(s.derivative_quadratic_form),
                ],
            );
        }
    }
    out
}

/// Method-comparison table: reference, Euler, and mid-point values of all
/// three states at selected time rows.
pub struct ComparisonRow {
    pub mu: f64,
    pub alpha: f64,
    pub u: f64,
    pub reference: [f64; 3],
    pub euler: [f64; 3],
    pub ft_midpoint: [f64; 3],
}

pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::new();
    let mut header: Vec<String> = vec!["mu".into(), "alpha".into(), "u".into()];
    for method in ["reference", "euler", "ft"] {
        for state in ["p", "q", "r"] {
            header.push(format!("{method}_{state}"));
        }
    }
    for method in ["reference", "euler", "ft"] {
        for state in ["p", "q", "r"] {
            header.push(format!("{method}_{state}_full"));
        }
    }
    push_row(&mut out, &header);
    for r in rows {
        let mut row = vec![fmt_full(r.mu), fmt_full(r.alpha), fmt_full(r.u)];
        for vals in [&r.reference, &r.euler, &r.ft_midpoint] {
            for v in vals.iter() {
                row.push(fmt4(*v));
            }
        }
        for vals in [&r.reference, &r.euler, &r.ft_midpoint] {
            for v in vals.iter() {
                row.push(fmt_full(*v));
            }
        }
        push_row(&mut out, &row);
    }
    out
}

/// Root-mean-square summary rows per grid point and state variable.
pub struct RmsRow {
    pub mu: f64,
    pub alpha: f64,
    pub state: &'static str,
    pub euler: f64,
    pub ft_midpoint: f64,
}

pub fn rms_csv(rows: &[RmsRow]) -> String {
    let mut out = String::new();
    push_row(
        &mut out,
        &[
            "mu".into(),
            "alpha".into(),
            "state".into(),
            "euler".into(),
            "ft_midpoint".into(),
            "ft_le_euler".into(),
            "euler_full".into(),
            "ft_midpoint_full".into(),
        ],
    );
    for r in rows {
        push_row(
            &mut out,
            &[
                fmt_full(r.mu),
                fmt_full(r.alpha),
                r.state.into(),
                fmt4(r.euler),
                fmt4(r.ft_midpoint),
                (r.ft_midpoint <= r.euler).to_string(),
                fmt_full(r.euler),
                fmt_full(r.ft_midpoint),
            ],
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::granular::{hmf_from_triangular, GridSpec, TriangularFuzzyNumber};

    #[test]
    fn rounding_and_negative_zero() {
        assert_eq!(fmt4(1.0), "1.0000");
        assert_eq!(fmt4(0.28571428), "0.2857");
        assert_eq!(fmt4(-1e-9), "0.0000");
        assert_eq!(fmt4(-0.00006), "-0.0001");
    }

    #[test]
    fn grid_csv_layout() {
        let spec = GridSpec::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0]).unwrap();
        let g = hmf_from_triangular(&TriangularFuzzyNumber::new(1.0, 2.0, 3.0).unwrap(), &spec);
        let csv = grid_csv(&g);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("alpha,mu=0,mu=1"));
        assert!(lines[1].starts_with("0,1.0000,3.0000"));
        assert!(lines[2].starts_with("0.5,1.5000,2.5000"));
        assert!(lines[3].starts_with("1,2.0000,2.0000"));
    }
}
