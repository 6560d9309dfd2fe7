//! Closed-form bounds on the complexity of color-class-constant hypothesis
//! classes, the derived generalization bound, and Lipschitz constants for
//! the cross-entropy losses used with it.
//!
//! Every bound is returned as computed. Values above 1 for a quantity that
//! lies in `[0, 1]` are vacuous but valid and are never clamped.

use serde::{Deserialize, Serialize};

use crate::partition::MultiplicityDiff;
use crate::rademacher::{brute_force_rademacher, exact_rademacher};
use crate::{Error, Result, SamplePartition};

/// Default number of mesh points for the entropy integral.
pub const DEFAULT_MESH_POINTS: usize = 256;
/// Default number of scales tried for the Dudley truncation level.
pub const DEFAULT_ALPHA_POINTS: usize = 32;
/// Samples up to this size also get an enumerated complexity in reports.
pub const REPORT_BRUTE_FORCE_LIMIT: usize = 16;

fn check_counts(p: usize, m: usize) -> Result<()> {
    if p == 0 || m == 0 || p > m {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= p <= m, got p = {p}, m = {m}"
        )));
    }
    Ok(())
}

/// `sqrt(p / m)`: the bound for `[-1, 1]`-valued functions constant on `p`
/// classes of an `m`-sample.
pub fn upper_bound_colors(p: usize, m: usize) -> Result<f64> {
    check_counts(p, m)?;
    Ok((p as f64 / m as f64).sqrt())
}

/// `sup_l * sqrt(p) / m`, where `sup_l` bounds the l2 norm of the outputs of
/// any function in the class over the sample.
pub fn general_upper_bound(sup_l: f64, p: usize, m: usize) -> Result<f64> {
    check_counts(p, m)?;
    if !(sup_l >= 0.0 && sup_l.is_finite()) {
        return Err(Error::InvalidArgument(format!("sup_l = {sup_l} must be finite and >= 0")));
    }
    Ok(sup_l * (p as f64).sqrt() / m as f64)
}

/// `sqrt(p / (2m))`, valid when all `p` classes have `m / p` members.
pub fn lower_bound_uniform(p: usize, m: usize) -> Result<f64> {
    check_counts(p, m)?;
    if m % p != 0 {
        return Err(Error::NonUniformPartition { p, m });
    }
    Ok((p as f64 / (2.0 * m as f64)).sqrt())
}

/// First term `4 * alpha * sqrt(p) / m` of the color-aware Dudley bound.
pub fn dudley_first_term(alpha: f64, p: usize, m: usize) -> f64 {
    4.0 * alpha * (p as f64).sqrt() / m as f64
}

/// First term `4 * alpha / sqrt(m)` of the classical Dudley bound.
pub fn classical_dudley_first_term(alpha: f64, m: usize) -> f64 {
    4.0 * alpha / (m as f64).sqrt()
}

/// Log covering number of a `p`-dimensional set of radius `sqrt(m)` at scale
/// `eps`: `p * ln(1 + 2 sqrt(m) / eps)`. This is the standard volumetric
/// estimate, used as the default entropy function for the saturating class.
pub fn volumetric_covering_log(p: usize, m: usize) -> impl Fn(f64) -> f64 {
    let radius = (m as f64).sqrt();
    move |eps| p as f64 * (1.0 + 2.0 * radius / eps).ln()
}

/// `count` log-spaced values from `1e-3 * sqrt(m)` to `sqrt(m)`.
pub fn default_alpha_grid(m: usize, count: usize) -> Vec<f64> {
    log_space(1e-3 * (m as f64).sqrt(), (m as f64).sqrt(), count)
}

fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![hi],
        _ => {
            let (llo, lhi) = (lo.ln(), hi.ln());
            (0..count)
                .map(|i| {
                    if i + 1 == count {
                        hi
                    } else {
                        (llo + (lhi - llo) * i as f64 / (count - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DudleyBound {
    pub alpha: f64,
    pub value: f64,
}

/// Minimizes `4 alpha sqrt(p) / m + (12 / m) * int_alpha^sqrt(m) sqrt(covering_log(eps)) d eps`
/// over `alpha_grid`. The integral uses the trapezoid rule on a log-spaced
/// mesh of `mesh_points` points (at least 2), so the result approximates the
/// bound rather than certifying it.
pub fn dudley_bound(
    alpha_grid: &[f64],
    covering_log: impl Fn(f64) -> f64,
    p: usize,
    m: usize,
    mesh_points: usize,
) -> Result<DudleyBound> {
    check_counts(p, m)?;
    if alpha_grid.is_empty() {
        return Err(Error::InvalidArgument("alpha grid is empty".into()));
    }
    if mesh_points < 2 {
        return Err(Error::InvalidArgument("mesh needs at least 2 points".into()));
    }
    let top = (m as f64).sqrt();
    let mut best: Option<DudleyBound> = None;
    for &alpha in alpha_grid {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha = {alpha} must be positive")));
        }
        let integral = if alpha >= top {
            0.0
        } else {
            let mesh = log_space(alpha, top, mesh_points);
            let mut root = Vec::with_capacity(mesh.len());
            for &eps in &mesh {
                let value = covering_log(eps);
                if !(value >= 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "covering_log({eps}) = {value} is negative"
                    )));
                }
                root.push(value.sqrt());
            }
            mesh.windows(2)
                .zip(root.windows(2))
                .map(|(e, r)| 0.5 * (e[1] - e[0]) * (r[0] + r[1]))
                .sum()
        };
        let value = dudley_first_term(alpha, p, m) + 12.0 * integral / m as f64;
        if best.is_none_or(|b| value < b.value) {
            best = Some(DudleyBound { alpha, value });
        }
    }
    Ok(best.expect("grid is non-empty"))
}

/// `sum_j eps_j / m`: bounds how much the complexity can change between two
/// equal-size samples with the given per-color multiplicity differences.
pub fn stability_bound(diff: &MultiplicityDiff, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    Ok(diff.total_epsilon() as f64 / m as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenBoundInputs {
    pub empirical_risk: f64,
    /// Lipschitz constant of the loss.
    pub gamma: f64,
    pub rademacher: f64,
    pub delta: f64,
    pub m: usize,
}

/// `L_S + 2 gamma R_S + 3 sqrt(ln(2/delta) / (2m))`, which holds with
/// probability at least `1 - delta` for every function in the class.
pub fn generalization_bound(inputs: &GenBoundInputs) -> Result<f64> {
    let GenBoundInputs {
        empirical_risk,
        gamma,
        rademacher,
        delta,
        m,
    } = *inputs;
    if !(empirical_risk >= 0.0) || !(gamma >= 0.0) || !(rademacher >= 0.0) {
        return Err(Error::InvalidArgument(
            "empirical risk, gamma and complexity must be non-negative".into(),
        ));
    }
    if !(delta > 0.0 && delta < 1.0) || m == 0 {
        return Err(Error::InvalidArgument("need delta in (0, 1) and m >= 1".into()));
    }
    Ok(empirical_risk + 2.0 * gamma * rademacher + confidence_slack(delta, m))
}

/// The `3 sqrt(ln(2/delta) / (2m))` term of [`generalization_bound`].
pub fn confidence_slack(delta: f64, m: usize) -> f64 {
    3.0 * ((2.0 / delta).ln() / (2.0 * m as f64)).sqrt()
}

pub fn logistic(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Lipschitz constant of cross-entropy on a logistic output whose pre-
/// activation satisfies `|z| <= z_bound` (`z_bound = b_phi * B_beta`):
/// `max{|psi(z_bound)|, |1 - psi(z_bound)|}`.
///
/// A symmetric analysis over `[-z_bound, z_bound]` would use
/// `1 - psi(-z_bound)` in the second branch; the two coincide here because
/// `psi(z_bound) >= 1/2 >= 1 - psi(z_bound)`.
pub fn ce_lipschitz_constant(z_bound: f64) -> f64 {
    let psi = logistic(z_bound);
    psi.abs().max((1.0 - psi).abs())
}

/// Lipschitz constant of cross-entropy applied to `g(psi(z))`, where `psi` is
/// the logistic map rescaled to `(a, b)`, its derivative is bounded by `c`,
/// and `g(x) = (x - a) / (b - a)`:
/// `c / (b - a) * max{1 / g(psi(z_bound)), 1 / (1 - g(psi(z_bound)))}`.
pub fn rescaled_ce_lipschitz(a: f64, b: f64, c: f64, z_bound: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("need a < b, got a = {a}, b = {b}")));
    }
    if !(c > 0.0) || !(z_bound >= 0.0) {
        return Err(Error::InvalidArgument("need c > 0 and z_bound >= 0".into()));
    }
    let psi = a + (b - a) * logistic(z_bound);
    let g = (psi - a) / (b - a);
    if !(g > 0.0 && g < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rescaled output {g} reached the boundary of (0, 1) at z_bound = {z_bound}"
        )));
    }
    Ok(c / (b - a) * (1.0 / g).max(1.0 / (1.0 - g)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    LogisticCe,
    RescaledCe,
    MarginTanh,
}

/// A loss together with the parameters needed to derive its Lipschitz
/// constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossSpec {
    pub kind: LossKind,
    pub b_phi: f64,
    pub b_beta: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Margin of the ramp loss used with tanh outputs; its Lipschitz
    /// constant is `1 / margin`.
    pub margin: f64,
}

impl Default for LossSpec {
    fn default() -> Self {
        Self {
            kind: LossKind::LogisticCe,
            b_phi: 1.0,
            b_beta: 1.0,
            a: -1.0,
            b: 1.0,
            c: 1.0,
            margin: 1.0,
        }
    }
}

impl LossSpec {
    pub fn z_bound(&self) -> f64 {
        self.b_phi * self.b_beta
    }

    pub fn lipschitz_constant(&self) -> Result<f64> {
        if !(self.b_phi >= 0.0 && self.b_beta >= 0.0) {
            return Err(Error::InvalidArgument("b_phi and B_beta must be >= 0".into()));
        }
        match self.kind {
            LossKind::LogisticCe => Ok(ce_lipschitz_constant(self.z_bound())),
            LossKind::RescaledCe => rescaled_ce_lipschitz(self.a, self.b, self.c, self.z_bound()),
            LossKind::MarginTanh => {
                if !(self.margin > 0.0) {
                    return Err(Error::InvalidArgument("margin must be positive".into()));
                }
                Ok(1.0 / self.margin)
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct BoundOptions {
    pub sup_l: Option<f64>,
    pub alpha_grid: Option<Vec<f64>>,
    pub mesh_points: Option<usize>,
}

/// All bounds applicable to one sample partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub m: usize,
    pub p: usize,
    pub multiplicities: Vec<usize>,
    pub exact: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force: Option<f64>,
    pub upper_colors: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub general_upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_l: Option<f64>,
    pub uniform_partitioning: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_uniform: Option<f64>,
    pub dudley: DudleyBound,
    pub notes: Vec<String>,
}

/// One CSV row of a [`BoundReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub name: String,
    pub value: f64,
    pub inputs: String,
    pub note: String,
}

impl BoundReport {
    pub fn for_partition(partition: &SamplePartition, options: &BoundOptions) -> Result<Self> {
        let (m, p) = (partition.m(), partition.p());
        let exact = exact_rademacher(partition).value;
        let brute_force = (m <= REPORT_BRUTE_FORCE_LIMIT)
            .then(|| brute_force_rademacher(partition).map(|e| e.value))
            .transpose()?;
        let upper_colors = upper_bound_colors(p, m)?;
        let general_upper = options
            .sup_l
            .map(|l| general_upper_bound(l, p, m))
            .transpose()?;
        let uniform = partition.is_uniform();
        let lower_uniform = uniform.then(|| lower_bound_uniform(p, m)).transpose()?;

        let grid = options
            .alpha_grid
            .clone()
            .unwrap_or_else(|| default_alpha_grid(m, DEFAULT_ALPHA_POINTS));
        let mesh = options.mesh_points.unwrap_or(DEFAULT_MESH_POINTS);
        let dudley = dudley_bound(&grid, volumetric_covering_log(p, m), p, m, mesh)?;

        let mut notes = vec![
            format!(
                "dudley: trapezoid rule on a {mesh}-point log mesh over a {}-point alpha grid; \
                 approximates the bound, covering numbers from the volumetric estimate",
                grid.len()
            ),
            "dudley: stated for outputs in [-1, 1]; the underlying chaining theorem assumes \
             [0, 1]-valued functions"
                .to_string(),
        ];
        if uniform {
            notes.push(format!("uniform partitioning: all {p} classes have {} members", m / p));
        } else {
            notes.push("lower bound omitted: class sizes differ".to_string());
        }
        if dudley.value > 1.0 {
            notes.push(format!("dudley bound {:.6} is vacuous (> 1)", dudley.value));
        }
        if let Some(g) = general_upper.filter(|&g| g > 1.0) {
            notes.push(format!("general upper bound {g:.6} is vacuous (> 1)"));
        }

        Ok(Self {
            m,
            p,
            multiplicities: partition.multiplicities(),
            exact,
            brute_force,
            upper_colors,
            general_upper,
            sup_l: options.sup_l,
            uniform_partitioning: uniform,
            lower_uniform,
            dudley,
            notes,
        })
    }

    /// `lower <= exact <= upper` up to `tol`, for every bound present.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let upper_ok = self.exact <= self.upper_colors + tol;
        let lower_ok = self.lower_uniform.is_none_or(|l| l <= self.exact + tol);
        let brute_ok = self.brute_force.is_none_or(|b| (b - self.exact).abs() <= tol);
        upper_ok && lower_ok && brute_ok
    }

    pub fn rows(&self) -> Vec<BoundRow> {
        let pm = format!("p={};m={}", self.p, self.m);
        let mut rows = vec![BoundRow {
            name: "exact".into(),
            value: self.exact,
            inputs: format!("multiplicities={:?}", self.multiplicities).replace(", ", " "),
            note: "closed form".into(),
        }];
        if let Some(b) = self.brute_force {
            rows.push(BoundRow {
                name: "brute_force".into(),
                value: b,
                inputs: pm.clone(),
                note: "enumerated over all sign vectors".into(),
            });
        }
        rows.push(BoundRow {
            name: "upper_colors".into(),
            value: self.upper_colors,
            inputs: pm.clone(),
            note: "sqrt(p/m)".into(),
        });
        if let (Some(g), Some(l)) = (self.general_upper, self.sup_l) {
            rows.push(BoundRow {
                name: "general_upper".into(),
                value: g,
                inputs: format!("{pm};sup_l={l}"),
                note: if g > 1.0 { "vacuous".into() } else { String::new() },
            });
        }
        if let Some(l) = self.lower_uniform {
            rows.push(BoundRow {
                name: "lower_uniform".into(),
                value: l,
                inputs: pm.clone(),
                note: "uniform partitioning".into(),
            });
        }
        rows.push(BoundRow {
            name: "dudley".into(),
            value: self.dudley.value,
            inputs: format!("{pm};alpha={}", self.dudley.alpha),
            note: if self.dudley.value > 1.0 {
                "approximate; vacuous".into()
            } else {
                "approximate".into()
            },
        });
        rows
    }
}
