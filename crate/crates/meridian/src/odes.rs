//! Numerical construction of the two nontrivial profile families:
//!
//! * first kind: f' sqrt(1 - f'^2) + f (f f'' / sqrt(1 - f'^2))' = 0,
//!   integrated as the first-order system (f, f', w) with
//!   w := f f'' / sqrt(1 - f'^2), so f'' = w sqrt(1 - f'^2) / f and
//!   w' = -f' sqrt(1 - f'^2) / f. Substituting back gives the scalar
//!   equation identically; the tests also check the scalar residual with an
//!   independent difference quotient of w.
//!
//! * second kind: the log-derivative equation (ln phi)' = -f' f'' / (1 - f'^2)
//!   with phi the rational expression in (f, f', f'', f'''). Writing
//!   s = 1 - f'^2, N = f s (f f'')' + f^2 f' f''^2 + f' s^2 and
//!   D = f f' (f f'')' s + f^2 f''^2 + s^2, the equation says N/D is
//!   constant along the solution. Fixing c = N/D from the initial data
//!   (f''' defaults to 0) makes f''' algebraic:
//!   f''' = -[f s f' f'' + f^2 f' f''^2 + f' s^2 -
//!   c (f f'^2 f'' s + f^2 f''^2 + s^2)] / (f^2 s (1 - c f')).
//!   This reduction was cross-checked numerically against the direct
//!   log-derivative residual before being trusted (see the tests).

use std::sync::Arc;

use crate::curves::{MeridianProfile, SampledProfile};
use crate::error::{Error, Result};

/// Margin keeping sqrt(1 - f'^2) denominators alive.
const BRANCH_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OdeKind {
    FirstKind,
    SecondKind,
}

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    /// Local error tolerance (used as both absolute and relative).
    pub tol: f64,
    /// Number of uniform output intervals over the span.
    pub output_intervals: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            tol: 1e-10,
            output_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaltReason {
    /// |f'| reached the branch boundary; the solution is truncated there.
    BranchBoundary,
    /// f reached zero.
    RadiusVanished,
}

/// Dense solution samples on a uniform grid. nodes[i] = [f, f', f'', f''']
/// at u0 + i * step; f''' comes from the right-hand side, not differencing.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub kind: OdeKind,
    pub u0: f64,
    pub step: f64,
    pub nodes: Vec<[f64; 4]>,
    /// Set when integration stopped before the end of the span.
    pub halt: Option<HaltReason>,
    /// Conserved ratio N/D for the second kind; unused for the first kind.
    pub conserved: Option<f64>,
    pub tol: f64,
}

impl OdeSolution {
    pub fn u_end(&self) -> f64 {
        self.u0 + self.step * (self.nodes.len() - 1) as f64
    }

    pub fn us(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nodes.len()).map(move |i| self.u0 + i as f64 * self.step)
    }

    /// Reinterpret as a meridian profile on the sampled span.
    pub fn to_profile(&self, eps: f64, g_offset: f64) -> MeridianProfile {
        MeridianProfile::Sampled(SampledProfile {
            u0: self.u0,
            step: self.step,
            nodes: Arc::new(self.nodes.clone()),
            eps,
            g_offset,
            lower_accuracy_d3f: false,
        })
    }

    /// CSV with columns u, f, df, d2f at 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,f,df,d2f\n");
        for (u, node) in self.us().zip(&self.nodes) {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e}\n",
                u, node[0], node[1], node[2]
            ));
        }
        out
    }
}

/// Loads a profile from the CSV written by `to_csv`. f''' is recovered by
/// central differences of f'' (lower accuracy than the in-memory solution).
pub fn profile_from_csv(text: &str, eps: f64, g_offset: f64) -> Result<MeridianProfile> {
    let mut rows: Vec<[f64; 3]> = Vec::new();
    let mut us: Vec<f64> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with('u')) {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() < 4 {
            return Err(Error::Config(format!(
                "csv line {}: expected 4 columns",
                i + 1
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse()
                .map_err(|_| Error::Config(format!("csv line {}: bad number '{s}'", i + 1)))
        };
        us.push(parse(cols[0])?);
        rows.push([parse(cols[1])?, parse(cols[2])?, parse(cols[3])?]);
    }
    if rows.len() < 4 {
        return Err(Error::Config("csv has fewer than 4 sample rows".into()));
    }
    let step = us[1] - us[0];
    for w in us.windows(2) {
        if ((w[1] - w[0]) - step).abs() > 1e-9 * step.abs().max(1.0) {
            return Err(Error::Config("csv grid is not uniform".into()));
        }
    }
    let n = rows.len();
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let d3f = if i == 0 {
            (rows[1][2] - rows[0][2]) / step
        } else if i == n - 1 {
            (rows[n - 1][2] - rows[n - 2][2]) / step
        } else {
            (rows[i + 1][2] - rows[i - 1][2]) / (2.0 * step)
        };
        nodes.push([rows[i][0], rows[i][1], rows[i][2], d3f]);
    }
    Ok(MeridianProfile::Sampled(SampledProfile {
        u0: us[0],
        step,
        nodes: Arc::new(nodes),
        eps,
        g_offset,
        lower_accuracy_d3f: true,
    }))
}

// Dormand-Prince 5(4) coefficients.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

enum StepOutcome<const N: usize> {
    Accepted { y: [f64; N], err: f64 },
    RhsFailed(Error),
}

type Rhs<const N: usize> = dyn FnMut(f64, &[f64; N]) -> Result<[f64; N]>;

fn dopri_step<const N: usize>(rhs: &mut Rhs<N>, u: f64, y: &[f64; N], h: f64) -> StepOutcome<N> {
    let mut k = [[0.0; N]; 7];
    match rhs(u, y) {
        Ok(v) => k[0] = v,
        Err(e) => return StepOutcome::RhsFailed(e),
    }
    for stage in 0..6 {
        let mut yi = *y;
        for (j, kj) in k.iter().enumerate().take(stage + 1) {
            let a = A[stage][j];
            if a != 0.0 {
                for n in 0..N {
                    yi[n] += h * a * kj[n];
                }
            }
        }
        match rhs(u + C[stage] * h, &yi) {
            Ok(v) => k[stage + 1] = v,
            Err(e) => return StepOutcome::RhsFailed(e),
        }
    }
    let mut y5 = *y;
    let mut y4 = *y;
    for (j, kj) in k.iter().enumerate() {
        for n in 0..N {
            y5[n] += h * B5[j] * kj[n];
            y4[n] += h * B4[j] * kj[n];
        }
    }
    let mut err = 0.0_f64;
    for n in 0..N {
        err = err.max((y5[n] - y4[n]).abs() / (1.0 + y5[n].abs()));
    }
    StepOutcome::Accepted { y: y5, err }
}

struct Integration<const N: usize> {
    nodes: Vec<[f64; N]>,
    halt: Option<HaltReason>,
}

/// Integrates from span.0 to span.1, recording the state at every uniform
/// output point. A state-validity probe decides halting; on halt the output
/// is truncated at the last reached output point.
fn integrate<const N: usize>(
    rhs: &mut Rhs<N>,
    probe: &dyn Fn(&[f64; N]) -> Option<HaltReason>,
    y0: [f64; N],
    span: (f64, f64),
    ctrl: &StepControl,
) -> Result<Integration<N>> {
    let (u0, u1) = span;
    if !u0.is_finite() || !u1.is_finite() || u1 <= u0 {
        return Err(Error::InvalidInitialState(format!(
            "span [{u0}, {u1}] is empty"
        )));
    }
    let out_step = (u1 - u0) / ctrl.output_intervals as f64;
    let mut nodes = Vec::with_capacity(ctrl.output_intervals + 1);
    nodes.push(y0);
    let mut u = u0;
    let mut y = y0;
    let mut h = out_step.min((u1 - u0) / 100.0);
    let mut next_out = 1usize;
    let mut halt = None;
    'outer: while next_out <= ctrl.output_intervals {
        let target = u0 + next_out as f64 * out_step;
        let mut h_try = h.min(target - u);
        loop {
            match dopri_step(rhs, u, &y, h_try) {
                StepOutcome::Accepted { y: y_new, err } => {
                    if err <= ctrl.tol {
                        if let Some(reason) = probe(&y_new) {
                            halt = Some(reason);
                            break 'outer;
                        }
                        u += h_try;
                        y = y_new;
                        // standard step-size update with safety factor
                        let factor = if err > 0.0 {
                            0.9 * (ctrl.tol / err).powf(0.2)
                        } else {
                            5.0
                        };
                        h = (h_try * factor.clamp(0.2, 5.0)).min(out_step * 4.0);
                        break;
                    }
                    let factor = 0.9 * (ctrl.tol / err).powf(0.25);
                    h_try *= factor.clamp(0.1, 0.9);
                }
                StepOutcome::RhsFailed(e) => {
                    // shrink toward the singular boundary before giving up
                    h_try *= 0.5;
                    if h_try < 1e-14 * (u1 - u0) {
                        if nodes.len() < 4 {
                            return Err(e);
                        }
                        halt = Some(HaltReason::BranchBoundary);
                        break 'outer;
                    }
                }
            }
            if h_try < 1e-15 * (u1 - u0) {
                halt = Some(HaltReason::BranchBoundary);
                break 'outer;
            }
        }
        if (u - target).abs() <= 1e-12 * (u1 - u0) {
            nodes.push(y);
            next_out += 1;
        }
    }
    Ok(Integration { nodes, halt })
}

fn check_initial(f0: f64, df0: f64) -> Result<()> {
    if !f0.is_finite() || !df0.is_finite() || f0 <= 0.0 {
        return Err(Error::InvalidInitialState(format!(
            "need f0 > 0 and finite data, got f0 = {f0}, f'0 = {df0}"
        )));
    }
    if df0.abs() >= 1.0 - BRANCH_MARGIN {
        return Err(Error::InvalidInitialState(format!(
            "|f'0| = {} too close to 1",
            df0.abs()
        )));
    }
    Ok(())
}

/// First-kind profile equation, state (f, f', w).
pub fn solve_first_kind(
    f0: f64,
    df0: f64,
    d2f0: f64,
    span: (f64, f64),
    ctrl: &StepControl,
) -> Result<OdeSolution> {
    check_initial(f0, df0)?;
    let w0 = f0 * d2f0 / (1.0 - df0 * df0).sqrt();
    let mut rhs = |_u: f64, y: &[f64; 3]| -> Result<[f64; 3]> {
        let [f, df, w] = *y;
        let s = 1.0 - df * df;
        if s <= BRANCH_MARGIN * BRANCH_MARGIN || f <= 1e-9 {
            return Err(Error::InvalidInitialState("branch boundary".into()));
        }
        let root = s.sqrt();
        Ok([df, w * root / f, -df * root / f])
    };
    let probe = |y: &[f64; 3]| -> Option<HaltReason> {
        if 1.0 - y[1] * y[1] <= BRANCH_MARGIN {
            Some(HaltReason::BranchBoundary)
        } else if y[0] <= 1e-9 {
            Some(HaltReason::RadiusVanished)
        } else {
            None
        }
    };
    let run = integrate(&mut rhs, &probe, [f0, df0, w0], span, ctrl)?;
    let nodes = run
        .nodes
        .iter()
        .map(|&[f, df, w]| {
            let s = 1.0 - df * df;
            let root = s.sqrt();
            let d2f = w * root / f;
            let dw = -df * root / f;
            let d3f = (dw * root - w * df * d2f / root) / f - w * root * df / (f * f);
            [f, df, d2f, d3f]
        })
        .collect();
    Ok(OdeSolution {
        kind: OdeKind::FirstKind,
        u0: span.0,
        step: (span.1 - span.0) / ctrl.output_intervals as f64,
        nodes,
        halt: run.halt,
        conserved: None,
        tol: ctrl.tol,
    })
}

/// N and D of the conserved ratio for the second-kind equation.
fn second_kind_nd(f: f64, df: f64, d2f: f64, d3f: f64) -> (f64, f64) {
    let s = 1.0 - df * df;
    let ffpp_prime = df * d2f + f * d3f;
    let n = f * s * ffpp_prime + f * f * df * d2f * d2f + df * s * s;
    let d = f * df * ffpp_prime * s + f * f * d2f * d2f + s * s;
    (n, d)
}

/// Second-kind profile equation, state (f, f', f''), with the conserved
/// ratio c = N/D fixed from the initial data. `d3f0` selects the member of
/// the family; it defaults to 0 in the CLI.
pub fn solve_second_kind(
    f0: f64,
    df0: f64,
    d2f0: f64,
    d3f0: f64,
    span: (f64, f64),
    ctrl: &StepControl,
) -> Result<OdeSolution> {
    check_initial(f0, df0)?;
    if d2f0.abs() < 1e-12 {
        // f'' = 0 makes kappa_alpha vanish: that family is the linear
        // SecondKind-II-i profile, not a solution of this equation
        return Err(Error::SingularDenominator { u: span.0 });
    }
    let (n0, d0) = second_kind_nd(f0, df0, d2f0, d3f0);
    if d0.abs() < 1e-10 {
        return Err(Error::SingularDenominator { u: span.0 });
    }
    let c = n0 / d0;
    if (1.0 - c * df0).abs() < 1e-10 {
        return Err(Error::SingularDenominator { u: span.0 });
    }
    let d3f_of = move |f: f64, df: f64, d2f: f64| -> Result<f64> {
        let s = 1.0 - df * df;
        let denom = f * f * s * (1.0 - c * df);
        if denom.abs() < 1e-12 {
            return Err(Error::SingularDenominator { u: f64::NAN });
        }
        let rest = f * s * df * d2f + f * f * df * d2f * d2f + df * s * s
            - c * (f * df * df * d2f * s + f * f * d2f * d2f + s * s);
        Ok(-rest / denom)
    };
    let mut rhs = move |_u: f64, y: &[f64; 3]| -> Result<[f64; 3]> {
        let [f, df, d2f] = *y;
        let s = 1.0 - df * df;
        if s <= BRANCH_MARGIN || f <= 1e-9 {
            return Err(Error::InvalidInitialState("branch boundary".into()));
        }
        Ok([df, d2f, d3f_of(f, df, d2f)?])
    };
    let probe = |y: &[f64; 3]| -> Option<HaltReason> {
        if 1.0 - y[1] * y[1] <= BRANCH_MARGIN {
            Some(HaltReason::BranchBoundary)
        } else if y[0] <= 1e-9 {
            Some(HaltReason::RadiusVanished)
        } else {
            None
        }
    };
    let run = integrate(&mut rhs, &probe, [f0, df0, d2f0], span, ctrl)?;
    // conserved-ratio check on every accepted output state
    let mut nodes = Vec::with_capacity(run.nodes.len());
    for &[f, df, d2f] in &run.nodes {
        let d3f = d3f_of(f, df, d2f)?;
        let (n, d) = second_kind_nd(f, df, d2f, d3f);
        let s = 1.0 - df * df;
        let phi_over_root = -n / d; // phi / sqrt(1 - f'^2)
        if (phi_over_root + c).abs() > 1e-6 * c.abs().max(1.0) {
            return Err(Error::InvalidInitialState(format!(
                "conserved ratio drifted: {} vs {}",
                -phi_over_root, c
            )));
        }
        debug_assert!(s > 0.0);
        nodes.push([f, df, d2f, d3f]);
    }
    Ok(OdeSolution {
        kind: OdeKind::SecondKind,
        u0: span.0,
        step: (span.1 - span.0) / ctrl.output_intervals as f64,
        nodes,
        halt: run.halt,
        conserved: Some(c),
        tol: ctrl.tol,
    })
}

/// Direct residual of the first-kind scalar equation at an interior node,
/// using a difference quotient of w = f f''/sqrt(1 - f'^2) recomputed from
/// the samples (independent of the integrated w).
pub fn first_kind_residual(sol: &OdeSolution, i: usize) -> f64 {
    let w_of = |node: &[f64; 4]| node[0] * node[2] / (1.0 - node[1] * node[1]).sqrt();
    let prev = &sol.nodes[i - 1];
    let here = &sol.nodes[i];
    let next = &sol.nodes[i + 1];
    let dw = (w_of(next) - w_of(prev)) / (2.0 * sol.step);
    here[1] * (1.0 - here[1] * here[1]).sqrt() + here[0] * dw
}

/// Direct residual of the second-kind log-derivative equation at an interior
/// node: (ln |phi|)' + f' f'' / (1 - f'^2), with the derivative taken by
/// central differences of ln |phi| over the samples.
pub fn second_kind_residual(sol: &OdeSolution, i: usize) -> f64 {
    let ln_phi = |node: &[f64; 4]| {
        let [f, df, d2f, d3f] = *node;
        let s = 1.0 - df * df;
        let (n, d) = second_kind_nd(f, df, d2f, d3f);
        (s.sqrt() * n / d).abs().ln()
    };
    let here = &sol.nodes[i];
    let d_lnphi = (ln_phi(&sol.nodes[i + 1]) - ln_phi(&sol.nodes[i - 1])) / (2.0 * sol.step);
    let s = 1.0 - here[1] * here[1];
    d_lnphi + here[1] * here[2] / s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_solution_of_first_kind() {
        // f0 = 1, f'0 = 0, f''0 = 0 forces w = 0 and f constant
        let sol = solve_first_kind(1.0, 0.0, 0.0, (0.0, 1.0), &StepControl::default()).unwrap();
        assert!(sol.halt.is_none());
        for node in &sol.nodes {
            assert!((node[0] - 1.0).abs() < 1e-12);
            assert!(node[1].abs() < 1e-12);
        }
    }

    #[test]
    fn first_kind_direct_residual() {
        let sol = solve_first_kind(1.0, 0.3, 0.2, (0.0, 0.8), &StepControl::default()).unwrap();
        assert!(sol.halt.is_none(), "{:?}", sol.halt);
        let mut worst = 0.0_f64;
        for i in 1..sol.nodes.len() - 1 {
            worst = worst.max(first_kind_residual(&sol, i).abs());
        }
        assert!(worst < 1e-7, "residual {worst}");
    }

    #[test]
    fn first_kind_step_halving_convergence() {
        let coarse = solve_first_kind(1.0, 0.3, 0.2, (0.0, 0.8), &StepControl::default()).unwrap();
        let tight = StepControl {
            tol: 5e-11,
            ..StepControl::default()
        };
        let fine = solve_first_kind(1.0, 0.3, 0.2, (0.0, 0.8), &tight).unwrap();
        let a = coarse.nodes.last().unwrap();
        let b = fine.nodes.last().unwrap();
        for i in 0..3 {
            assert!(
                (a[i] - b[i]).abs() <= 1e-8 * (1.0 + b[i].abs()),
                "component {i}: {} vs {}",
                a[i],
                b[i]
            );
        }
    }

    #[test]
    fn first_kind_rejects_near_branch_initial_slope() {
        assert!(matches!(
            solve_first_kind(1.0, 0.999999999, 0.0, (0.0, 1.0), &StepControl::default()),
            Err(Error::InvalidInitialState(_))
        ));
    }

    #[test]
    fn first_kind_halts_at_branch_boundary() {
        // strong initial curvature drives |f'| toward 1
        let sol = solve_first_kind(0.5, 0.6, 3.0, (0.0, 2.0), &StepControl::default()).unwrap();
        assert_eq!(sol.halt, Some(HaltReason::BranchBoundary));
        assert!(sol.nodes.len() < 2001);
        for node in &sol.nodes {
            assert!(node[1].abs() < 1.0);
        }
    }

    #[test]
    fn second_kind_rejects_zero_second_derivative() {
        assert!(matches!(
            solve_second_kind(1.0, 0.3, 0.0, 0.0, (0.0, 1.0), &StepControl::default()),
            Err(Error::SingularDenominator { .. })
        ));
    }

    // Numeric cross-check of the f''' reduction: the direct log-derivative
    // residual of the dense output must vanish.
    #[test]
    fn second_kind_direct_residual() {
        let sol =
            solve_second_kind(1.5, 0.3, 0.4, 0.0, (0.0, 0.8), &StepControl::default()).unwrap();
        assert!(sol.halt.is_none(), "{:?}", sol.halt);
        let mut worst = 0.0_f64;
        for i in 1..sol.nodes.len() - 1 {
            worst = worst.max(second_kind_residual(&sol, i).abs());
        }
        assert!(worst < 1e-6, "residual {worst}");
    }

    #[test]
    fn second_kind_conserved_ratio_holds() {
        let sol =
            solve_second_kind(1.5, 0.3, 0.4, 0.0, (0.0, 0.8), &StepControl::default()).unwrap();
        let c = sol.conserved.unwrap();
        for node in &sol.nodes {
            let (n, d) = second_kind_nd(node[0], node[1], node[2], node[3]);
            assert!((n / d - c).abs() < 1e-8);
        }
    }

    #[test]
    fn second_kind_step_halving_convergence() {
        let base =
            solve_second_kind(1.5, 0.3, 0.4, 0.0, (0.0, 0.8), &StepControl::default()).unwrap();
        let tight = StepControl {
            tol: 5e-11,
            ..StepControl::default()
        };
        let fine = solve_second_kind(1.5, 0.3, 0.4, 0.0, (0.0, 0.8), &tight).unwrap();
        let a = base.nodes.last().unwrap();
        let b = fine.nodes.last().unwrap();
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() <= 1e-8 * (1.0 + b[i].abs()));
        }
    }

    #[test]
    fn csv_round_trip_preserves_samples() {
        let sol = solve_first_kind(1.0, 0.3, 0.2, (0.0, 0.5), &StepControl::default()).unwrap();
        let csv = sol.to_csv();
        let profile = profile_from_csv(&csv, 1.0, 0.0).unwrap();
        for (i, u) in sol.us().enumerate().step_by(97) {
            let e = profile.eval(u).unwrap();
            assert!((e.f - sol.nodes[i][0]).abs() < 1e-12);
            assert!((e.df - sol.nodes[i][1]).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(profile_from_csv("u,f\n1,2\n", 1.0, 0.0).is_err());
        assert!(profile_from_csv("not,a,number,here\nx,y,z,w\n", 1.0, 0.0).is_err());
    }
}
