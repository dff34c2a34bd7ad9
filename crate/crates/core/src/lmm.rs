//! Random-intercept linear mixed model fitted by profiled maximum likelihood.
//!
//! Model: `y = Xβ + Zu + ε`, `u ~ N(0, σ_u² I)`, `ε ~ N(0, σ² I)`, with one
//! intercept per group. Writing `ψ = σ_u² / σ²`, the marginal covariance of a
//! group of size `n_g` is `σ² (I + ψ 11ᵀ)` whose inverse is
//! `σ⁻² (I − c_g 11ᵀ)` with `c_g = ψ / (1 + ψ n_g)`. Given `ψ`, β and σ² have
//! closed forms built from per-group sums, so each likelihood evaluation is
//! linear in the number of groups and the fit reduces to a scalar search
//! over `ψ ≥ 0`.
//!
//! Covariates are centered internally and results are mapped back to the
//! raw scale, so a raw calendar-year column does not wreck conditioning.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::impact::ComboObservation;
use crate::optim::brent_minimize;

pub const INTERCEPT: &str = "Intercept";
pub const COUNTRY_COUNT: &str = "Country Count";
pub const PUBLICATION_COUNT: &str = "Publication Count";
pub const YEAR: &str = "Year";

/// Fixed-effect columns of the combination model, in report order.
pub const COMBO_COLUMNS: [&str; 4] = [INTERCEPT, COUNTRY_COUNT, PUBLICATION_COUNT, YEAR];

const MIN_OBSERVATIONS: usize = 5;
const PSI_REL_TOL: f64 = 1e-8;
const COLLINEARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Method {
    #[default]
    Ml,
    Reml,
}

/// Response, intercept-plus-covariates design and grouping for one model.
#[derive(Debug, Clone)]
pub struct LmmData {
    pub response: Vec<f64>,
    /// Covariate columns (without the intercept), each of length `n`.
    pub covariates: Vec<Vec<f64>>,
    /// Names for the intercept followed by each covariate.
    pub column_names: Vec<String>,
    pub groups: Vec<String>,
}

impl LmmData {
    /// Design for `log_fwci ~ country_count + publication_count + year + (1 | combo_id)`.
    pub fn from_observations(obs: &[ComboObservation]) -> Self {
        LmmData {
            response: obs.iter().map(|o| o.log_fwci).collect(),
            covariates: vec![
                obs.iter().map(|o| o.country_count as f64).collect(),
                obs.iter().map(|o| o.publication_count as f64).collect(),
                obs.iter().map(|o| o.year as f64).collect(),
            ],
            column_names: COMBO_COLUMNS.iter().map(|s| s.to_string()).collect(),
            groups: obs.iter().map(ComboObservation::combo_id).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.response.len()
    }

    pub fn is_empty(&self) -> bool {
        self.response.is_empty()
    }

    fn validate(&self) -> Result<()> {
        let n = self.response.len();
        let p = self.covariates.len() + 1;
        if self.column_names.len() != p {
            return Err(Error::Invalid(format!(
                "{} column names for {} fixed effects",
                self.column_names.len(),
                p
            )));
        }
        if self.groups.len() != n || self.covariates.iter().any(|c| c.len() != n) {
            return Err(Error::Invalid("design columns differ in length".into()));
        }
        let need = (p + 2).max(MIN_OBSERVATIONS);
        if n < need {
            return Err(Error::TooFewObservations { got: n, need });
        }
        if self
            .response
            .iter()
            .chain(self.covariates.iter().flatten())
            .any(|v| !v.is_finite())
        {
            return Err(Error::Invalid("non-finite value in design".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct GroupSums {
    label: String,
    n: usize,
    sx: DVector<f64>,
    sy: f64,
}

/// Sufficient statistics of the centered problem.
#[derive(Debug, Clone)]
pub struct ProfiledLikelihood {
    n: usize,
    p: usize,
    xtx: DMatrix<f64>,
    xty: DVector<f64>,
    yty: f64,
    groups: Vec<GroupSums>,
    x_means: Vec<f64>,
    y_mean: f64,
    method: Method,
}

/// β, residual quadratic form and log-determinant at one ψ.
struct Profile {
    beta: DVector<f64>,
    a_inv: DMatrix<f64>,
    rss: f64,
    log_det_a: f64,
    log_det_v: f64,
}

impl ProfiledLikelihood {
    pub fn new(data: &LmmData, method: Method) -> Result<Self> {
        data.validate()?;
        let n = data.len();
        let p = data.covariates.len() + 1;
        let x_means: Vec<f64> = data.covariates.iter().map(|c| mean(c)).collect();
        let y_mean = mean(&data.response);
        check_rank(data, &x_means)?;

        let row = |i: usize| {
            let mut r = DVector::zeros(p);
            r[0] = 1.0;
            for (j, col) in data.covariates.iter().enumerate() {
                r[j + 1] = col[i] - x_means[j];
            }
            r
        };
        let mut by_group: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, g) in data.groups.iter().enumerate() {
            by_group.entry(g.as_str()).or_default().push(i);
        }
        let mut xtx = DMatrix::zeros(p, p);
        let mut xty = DVector::zeros(p);
        let mut yty = 0.0;
        let mut groups = Vec::with_capacity(by_group.len());
        for (label, idx) in by_group {
            let mut sx = DVector::zeros(p);
            let mut sy = 0.0;
            for &i in &idx {
                let x = row(i);
                let y = data.response[i] - y_mean;
                xtx += &x * x.transpose();
                xty += &x * y;
                yty += y * y;
                sx += &x;
                sy += y;
            }
            groups.push(GroupSums {
                label: label.to_string(),
                n: idx.len(),
                sx,
                sy,
            });
        }
        Ok(ProfiledLikelihood {
            n,
            p,
            xtx,
            xty,
            yty,
            groups,
            x_means,
            y_mean,
            method,
        })
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    fn profile(&self, psi: f64) -> Result<Profile> {
        let mut a = self.xtx.clone();
        let mut b = self.xty.clone();
        let mut q = self.yty;
        let mut log_det_v = 0.0;
        for g in &self.groups {
            let c = psi / (1.0 + psi * g.n as f64);
            a -= (&g.sx * g.sx.transpose()) * c;
            b -= &g.sx * (c * g.sy);
            q -= c * g.sy * g.sy;
            log_det_v += (psi * g.n as f64).ln_1p();
        }
        let chol = a.clone().cholesky().ok_or_else(|| {
            Error::Internal(format!(
                "GLS information not positive definite at psi={psi}"
            ))
        })?;
        let beta = chol.solve(&b);
        let rss = (q - b.dot(&beta)).max(0.0);
        let log_det_a = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
        Ok(Profile {
            a_inv: chol.inverse(),
            beta,
            rss,
            log_det_a,
            log_det_v,
        })
    }

    fn deviance_of(&self, pr: &Profile) -> f64 {
        let two_pi = 2.0 * std::f64::consts::PI;
        match self.method {
            Method::Ml => {
                let n = self.n as f64;
                n * (two_pi * pr.rss / n).ln() + pr.log_det_v + n
            }
            Method::Reml => {
                let m = (self.n - self.p) as f64;
                m * (two_pi * pr.rss / m).ln() + pr.log_det_v + pr.log_det_a + m
            }
        }
    }

    /// −2 × profiled log-likelihood (restricted, under REML) at `psi`.
    pub fn deviance(&self, psi: f64) -> Result<f64> {
        Ok(self.deviance_of(&self.profile(psi)?))
    }

    fn residual_variance(&self, pr: &Profile) -> f64 {
        match self.method {
            Method::Ml => pr.rss / self.n as f64,
            Method::Reml => pr.rss / (self.n - self.p) as f64,
        }
    }

    /// Slope of the ML deviance at ψ = 0: `n − n Σ_g S_g² / RSS`, where `S_g`
    /// are group sums of OLS residuals.
    fn ml_slope_at_zero(&self, ols: &Profile) -> f64 {
        let between: f64 = self
            .groups
            .iter()
            .map(|g| {
                let s = g.sy - g.sx.dot(&ols.beta);
                s * s
            })
            .sum();
        let n = self.n as f64;
        n - n * between / ols.rss
    }

    fn optimize_psi(&self) -> Result<f64> {
        let ols = self.profile(0.0)?;
        if ols.rss <= 0.0 {
            return Ok(0.0);
        }
        if self.method == Method::Ml && self.ml_slope_at_zero(&ols) >= 0.0 {
            return Ok(0.0);
        }
        // coarse log grid, then Brent inside the best bracket
        let grid: Vec<f64> = (0..=80)
            .map(|k| 10f64.powf(-8.0 + 0.2 * k as f64))
            .collect();
        let mut best = (0usize, f64::INFINITY);
        for (k, &psi) in grid.iter().enumerate() {
            let d = self.deviance(psi)?;
            if d < best.1 {
                best = (k, d);
            }
        }
        let lo = if best.0 == 0 { 0.0 } else { grid[best.0 - 1] };
        let hi = grid[(best.0 + 1).min(grid.len() - 1)];
        let (psi, d) = brent_minimize(
            |x| self.deviance(x).unwrap_or(f64::INFINITY),
            lo,
            hi,
            PSI_REL_TOL,
            1e-14,
            500,
        );
        let (psi, d) = if d <= best.1 {
            (psi, d)
        } else {
            (grid[best.0], best.1)
        };
        if self.deviance_of(&ols) <= d {
            return Ok(0.0);
        }
        Ok(psi)
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Gram–Schmidt on centered columns. A column with no spread is collinear
/// with the intercept; a column whose residual vanishes after projecting out
/// earlier columns is collinear with those.
fn check_rank(data: &LmmData, x_means: &[f64]) -> Result<()> {
    let mut basis: Vec<(usize, Vec<f64>)> = Vec::new();
    for (j, col) in data.covariates.iter().enumerate() {
        let scale = col
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        let mut r: Vec<f64> = col.iter().map(|v| (v - x_means[j]) / scale).collect();
        let norm0 = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm0 <= COLLINEARITY_TOL * (data.len() as f64).sqrt() {
            return Err(Error::RankDeficient(vec![
                data.column_names[0].clone(),
                data.column_names[j + 1].clone(),
            ]));
        }
        let mut involved = Vec::new();
        for (k, q) in &basis {
            let proj: f64 = r.iter().zip(q).map(|(a, b)| a * b).sum();
            if proj.abs() > COLLINEARITY_TOL * norm0 {
                involved.push(*k);
            }
            for (ri, qi) in r.iter_mut().zip(q) {
                *ri -= proj * qi;
            }
        }
        let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-8 * norm0 {
            let mut names: Vec<String> = involved
                .iter()
                .map(|&k| data.column_names[k + 1].clone())
                .collect();
            names.push(data.column_names[j + 1].clone());
            return Err(Error::RankDeficient(names));
        }
        basis.push((j, r.iter().map(|v| v / norm).collect()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupEffect {
    pub n: usize,
    /// Mean of `y − x'β` over the group's observations.
    pub mean_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LmmFit {
    pub column_names: Vec<String>,
    pub beta: Vec<f64>,
    pub se: Vec<f64>,
    pub sigma_u2: f64,
    pub sigma2: f64,
    pub psi: f64,
    pub loglik: f64,
    pub aic: f64,
    pub n: usize,
    pub n_groups: usize,
    pub method: Method,
    pub warnings: Vec<String>,
    pub group_effects: BTreeMap<String, GroupEffect>,
}

/// Fits the model. Deterministic; observation order only affects rounding.
pub fn fit(data: &LmmData, method: Method) -> Result<LmmFit> {
    let lik = ProfiledLikelihood::new(data, method)?;
    let mut warnings = Vec::new();
    let psi = if lik.groups.iter().all(|g| g.n == 1) {
        warnings.push(
            "every group has a single observation; random-intercept and residual variance are not separately identifiable, reporting random effect 0"
                .to_string(),
        );
        0.0
    } else {
        lik.optimize_psi()?
    };
    let pr = lik.profile(psi)?;
    let deviance = lik.deviance_of(&pr);
    let sigma2 = lik.residual_variance(&pr);
    if sigma2 <= 0.0 {
        return Err(Error::Invalid(
            "response is fitted exactly; residual variance is zero".into(),
        ));
    }

    // back to the raw covariate scale: intercept absorbs the centering shifts
    let p = lik.p;
    let mut l = DMatrix::<f64>::identity(p, p);
    for j in 1..p {
        l[(0, j)] = -lik.x_means[j - 1];
    }
    let mut beta = &l * &pr.beta;
    beta[0] += lik.y_mean;
    let cov = (&l * &pr.a_inv * l.transpose()) * sigma2;
    let se: Vec<f64> = (0..p).map(|j| cov[(j, j)].max(0.0).sqrt()).collect();

    let group_effects = lik
        .groups
        .iter()
        .map(|g| {
            let mean_residual = (g.sy - g.sx.dot(&pr.beta)) / g.n as f64;
            (
                g.label.clone(),
                GroupEffect {
                    n: g.n,
                    mean_residual,
                },
            )
        })
        .collect();

    let loglik = -0.5 * deviance;
    let k = (p + 2) as f64;
    Ok(LmmFit {
        column_names: data.column_names.clone(),
        beta: beta.iter().copied().collect(),
        se,
        sigma_u2: psi * sigma2,
        sigma2,
        psi,
        loglik,
        aic: 2.0 * k - 2.0 * loglik,
        n: lik.n,
        n_groups: lik.n_groups(),
        method,
        warnings,
        group_effects,
    })
}

impl LmmFit {
    /// Number of estimated parameters counted by the AIC.
    pub fn n_params(&self) -> usize {
        self.beta.len() + 2
    }

    /// Fixed-effects prediction plus the group's shrunken intercept when the
    /// group was seen in the fit. `values` maps covariate names to values; the
    /// intercept needs no entry.
    pub fn predict(&self, values: &BTreeMap<&str, f64>, group: Option<&str>) -> Result<f64> {
        let mut eta = self.beta[0];
        for (name, b) in self.column_names.iter().zip(&self.beta).skip(1) {
            let v = values
                .get(name.as_str())
                .ok_or_else(|| Error::MissingColumn(name.clone()))?;
            eta += b * v;
        }
        Ok(eta + group.map(|g| self.blup(g)).unwrap_or(0.0))
    }

    pub fn predict_observation(&self, obs: &ComboObservation) -> Result<f64> {
        let values = BTreeMap::from([
            (COUNTRY_COUNT, obs.country_count as f64),
            (PUBLICATION_COUNT, obs.publication_count as f64),
            (YEAR, obs.year as f64),
        ]);
        self.predict(&values, Some(&obs.combo_id()))
    }

    /// `σ_u² / (σ_u² + σ²/n_g)` times the group's mean residual; 0 for unseen groups.
    pub fn blup(&self, group: &str) -> f64 {
        match self.group_effects.get(group) {
            Some(g) if self.sigma_u2 > 0.0 => {
                let shrink = self.sigma_u2 / (self.sigma_u2 + self.sigma2 / g.n as f64);
                shrink * g.mean_residual
            }
            _ => 0.0,
        }
    }

    /// Two-sided normal-approximation p-value of coefficient `j`.
    pub fn p_value(&self, j: usize) -> f64 {
        normal_two_sided_p(self.beta[j] / self.se[j])
    }
}

pub fn normal_two_sided_p(z: f64) -> f64 {
    if z.is_nan() {
        return 1.0;
    }
    erfc(z.abs() / std::f64::consts::SQRT_2)
}

pub fn significance_stars(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ReportOptions {
    /// Decimals for estimates and standard errors.
    pub decimals: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { decimals: 3 }
    }
}

/// `estimate*** (se)`
pub fn format_estimate(estimate: f64, se: f64, decimals: usize) -> String {
    let stars = significance_stars(normal_two_sided_p(estimate / se));
    format!("{estimate:.decimals$}{stars} ({se:.decimals$})")
}

fn report_rows(columns: &[(String, &LmmFit)], opts: ReportOptions) -> Vec<Vec<String>> {
    let mut names: Vec<String> = Vec::new();
    for (_, f) in columns {
        for n in &f.column_names {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
    }
    let mut rows = vec![std::iter::once(String::new())
        .chain(columns.iter().map(|(label, _)| label.clone()))
        .collect::<Vec<_>>()];
    for name in &names {
        let mut row = vec![name.clone()];
        for (_, f) in columns {
            row.push(match f.column_names.iter().position(|n| n == name) {
                Some(j) => format_estimate(f.beta[j], f.se[j], opts.decimals),
                None => String::new(),
            });
        }
        rows.push(row);
    }
    let mut push = |label: &str, cell: &dyn Fn(&LmmFit) -> String| {
        let mut row = vec![label.to_string()];
        row.extend(columns.iter().map(|(_, f)| cell(f)));
        rows.push(row);
    };
    push("Random Effect", &|f| format!("{:.4}", f.sigma_u2));
    push("Residual", &|f| format!("{:.4}", f.sigma2));
    push("AIC", &|f| format!("{:.1}", f.aic));
    push("N", &|f| f.n.to_string());
    rows
}

/// Aligned plain-text table: one column per fit.
pub fn render_report(columns: &[(String, &LmmFit)], opts: ReportOptions) -> String {
    let rows = report_rows(columns, opts);
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                if c == 0 {
                    format!("{cell:<w$}", w = widths[c])
                } else {
                    format!("{cell:>w$}", w = widths[c])
                }
            })
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out.push_str(
        "* p<0.05, ** p<0.01, *** p<0.001 (normal approximation); standard errors in parentheses\n",
    );
    out
}

pub fn report_csv(columns: &[(String, &LmmFit)], opts: ReportOptions) -> Result<String> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut rows = report_rows(columns, opts);
    rows[0][0] = "term".to_string();
    for row in rows {
        wtr.write_record(row)?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(groups: &[(&str, f64, f64)]) -> LmmData {
        LmmData {
            response: groups.iter().map(|g| g.2).collect(),
            covariates: vec![groups.iter().map(|g| g.1).collect()],
            column_names: vec![INTERCEPT.into(), "x".into()],
            groups: groups.iter().map(|g| g.0.to_string()).collect(),
        }
    }

    #[test]
    fn estimate_cell_format() {
        assert_eq!(format_estimate(0.139, 0.003, 3), "0.139*** (0.003)");
        // z = 1.282 -> p ≈ 0.2
        assert_eq!(format_estimate(1.282, 1.0, 3), "1.282 (1.000)");
    }

    #[test]
    fn star_thresholds() {
        assert_eq!(significance_stars(0.2), "");
        assert_eq!(significance_stars(0.04), "*");
        assert_eq!(significance_stars(0.009), "**");
        assert_eq!(significance_stars(0.0009), "***");
        assert_eq!(significance_stars(0.05), "");
    }

    #[test]
    fn too_few_observations() {
        let d = toy(&[
            ("a", 1.0, 1.0),
            ("a", 2.0, 2.0),
            ("b", 3.0, 2.0),
            ("b", 4.0, 5.0),
        ]);
        assert!(matches!(
            fit(&d, Method::Ml),
            Err(Error::TooFewObservations { got: 4, need: 5 })
        ));
    }

    #[test]
    fn constant_covariate_is_collinear_with_intercept() {
        let d = toy(&[
            ("a", 1.0, 1.0),
            ("a", 1.0, 2.0),
            ("b", 1.0, 2.0),
            ("b", 1.0, 5.0),
            ("c", 1.0, 0.0),
            ("c", 1.0, 1.0),
        ]);
        match fit(&d, Method::Ml) {
            Err(Error::RankDeficient(cols)) => assert_eq!(cols, [INTERCEPT, "x"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicated_covariate_is_named() {
        let x = [1.0, 2.0, 3.0, 5.0, 8.0, 13.0];
        let d = LmmData {
            response: vec![1.0, 0.0, 2.0, 1.0, 3.0, 2.0],
            covariates: vec![x.to_vec(), x.iter().map(|v| 2.0 * v + 1.0).collect()],
            column_names: vec![INTERCEPT.into(), "x".into(), "x2".into()],
            groups: ["a", "a", "b", "b", "c", "c"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        };
        match fit(&d, Method::Ml) {
            Err(Error::RankDeficient(cols)) => assert_eq!(cols, ["x", "x2"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn singleton_groups_warn_and_pin_random_effect_to_zero() {
        let d = toy(&[
            ("a", 1.0, 1.0),
            ("b", 2.0, 2.5),
            ("c", 3.0, 2.0),
            ("d", 4.0, 5.0),
            ("e", 5.0, 4.0),
            ("f", 6.0, 7.0),
        ]);
        let f = fit(&d, Method::Ml).unwrap();
        assert_eq!(f.sigma_u2, 0.0);
        assert_eq!(f.warnings.len(), 1);
    }

    #[test]
    fn aic_identity() {
        let d = toy(&[
            ("a", 1.0, 1.0),
            ("a", 2.0, 2.5),
            ("b", 3.0, 4.0),
            ("b", 4.0, 5.0),
            ("c", 5.0, 2.0),
            ("c", 6.0, 4.0),
            ("d", 1.5, 0.5),
            ("d", 2.5, 0.0),
        ]);
        for m in [Method::Ml, Method::Reml] {
            let f = fit(&d, m).unwrap();
            assert!((f.aic - (2.0 * f.n_params() as f64 - 2.0 * f.loglik)).abs() < 1e-9);
            assert!(f.sigma_u2 >= 0.0 && f.sigma2 > 0.0);
        }
    }

    #[test]
    fn prediction_without_random_effect_is_fixed_part() {
        let d = toy(&[
            ("a", 1.0, 1.0),
            ("b", 2.0, 2.5),
            ("c", 3.0, 2.0),
            ("d", 4.0, 5.0),
            ("e", 5.0, 4.0),
            ("f", 6.0, 7.0),
        ]);
        let f = fit(&d, Method::Ml).unwrap();
        let v = BTreeMap::from([("x", 2.0)]);
        let fixed = f.beta[0] + 2.0 * f.beta[1];
        assert_eq!(f.predict(&v, Some("a")).unwrap(), fixed);
        assert_eq!(f.predict(&v, None).unwrap(), fixed);
        assert!(matches!(
            f.predict(&BTreeMap::new(), None),
            Err(Error::MissingColumn(_))
        ));
    }

    #[test]
    fn report_layout() {
        let d = toy(&[
            ("a", 1.0, 1.0),
            ("a", 2.0, 2.5),
            ("b", 3.0, 4.0),
            ("b", 4.0, 5.0),
            ("c", 5.0, 2.0),
            ("c", 6.0, 4.0),
        ]);
        let f = fit(&d, Method::Ml).unwrap();
        let text = render_report(&[("Toy".into(), &f)], ReportOptions::default());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0].trim(), "Toy");
        let labels: Vec<&str> = lines[1..7]
            .iter()
            .map(|l| l.split("  ").next().unwrap().trim())
            .collect();
        assert_eq!(
            labels,
            [INTERCEPT, "x", "Random Effect", "Residual", "AIC", "N"]
        );
        let csv = report_csv(&[("Toy".into(), &f)], ReportOptions::default()).unwrap();
        assert!(csv.starts_with("term,Toy\n"));
        assert!(csv.contains("\nN,6\n"));
    }
}
