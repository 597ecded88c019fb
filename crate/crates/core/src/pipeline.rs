//! Diagnostic runs over a scenario: boundedness, compactness and the g = 1
//! corollary mode. Stages run in the order geometry, berezin, toeplitz,
//! schur; a failed stage is recorded and the remaining stages still run.

use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::berezin::{berezin_mod_squared, map_grid, sarason_sup, SarasonReport, TrendPoint};
use crate::error::{Error, Result};
use crate::geometry::{hyperbolic_disk, max_admissible_modulus, DiskPoint};
use crate::operator::DEFAULT_NORM_TOL;
use crate::quadrature::QuadratureRule;
use crate::report::{csv_line, to_json};
use crate::scenario::{Scenario, ScenarioFile};
use crate::schur::{
    lemma1_report, luecking_report, schur_dual_report, schur_ratio_report, tail_constant_curve,
    SchurParameters,
};
use crate::toeplitz::{hs_tail_norm_squared, product_matrix};

pub const SCHEMA: &str = "1";
/// Upper bound on the per-axis node counts used for the nested HS integrals.
pub const HS_RULE_CAP: [usize; 2] = [32, 64];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Boundedness,
    Compactness,
    Corollary,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Boundedness => "boundedness",
            Mode::Compactness => "compactness",
            Mode::Corollary => "corollary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageStatus {
    pub stage: &'static str,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometrySummary {
    pub delta: f64,
    pub max_radius: f64,
    pub max_admissible_modulus: f64,
    /// Largest Euclidean radius among the hyperbolic disks at grid points.
    pub max_disk_radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SarasonSummary {
    pub sup_estimate: f64,
    pub sup_sqrt: f64,
    pub limit_threshold: f64,
    pub limit_zero: bool,
    pub boundary_trend: Vec<TrendPoint<f64>>,
}

impl From<&SarasonReport<f64>> for SarasonSummary {
    fn from(r: &SarasonReport<f64>) -> Self {
        Self {
            sup_estimate: r.sup_estimate,
            sup_sqrt: r.sup_sqrt,
            limit_threshold: r.limit_threshold,
            limit_zero: r.limit_zero,
            boundary_trend: r.boundary_trend.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormRow {
    pub n: usize,
    pub norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub n: usize,
    pub norm: f64,
    pub sqrt_sup: f64,
    pub sup: f64,
    /// norm / sqrt(sup); absent when the sup vanishes.
    pub norm_over_sqrt_sup: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchurSummary {
    pub parameters: SchurParameters<f64>,
    pub schur_max: f64,
    pub schur_dual_max: f64,
    /// Absent for f = 0.
    pub lemma1_max: Option<f64>,
    /// Luecking bound ratio for z = 0.
    pub luecking_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailRow {
    pub r: f64,
    pub c1: f64,
    pub c2: f64,
    pub c1c2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HsRow {
    pub r: f64,
    pub hs_norm: f64,
    pub hs_norm_sqr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactnessSummary {
    pub limit_zero: bool,
    pub limit_threshold: f64,
    pub boundary_trend: Vec<TrendPoint<f64>>,
    pub c2: f64,
    pub tail: Vec<TailRow>,
    pub hs: Vec<HsRow>,
    pub hs_rule: [usize; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorollaryRow {
    pub radius: f64,
    /// max over the circle of ‖f∘φ_v‖₂.
    pub composition_norm: f64,
    /// max over the circle of |f(v)|.
    pub modulus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollarySummary {
    pub sup_composition_norm: f64,
    pub sup_modulus: f64,
    pub rows: Vec<CorollaryRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticReport {
    pub schema: &'static str,
    pub mode: Mode,
    pub scenario: ScenarioFile,
    pub stages: Vec<StageStatus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometrySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sarason: Option<SarasonSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norms: Option<Vec<NormRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Vec<ComparisonRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schur: Option<SchurSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compactness: Option<CompactnessSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary: Option<CorollarySummary>,
    /// File names of the CSV curves written next to the report.
    pub curves: Vec<String>,
}

impl DiagnosticReport {
    fn new(mode: Mode, scenario: &Scenario) -> Self {
        Self {
            schema: SCHEMA,
            mode,
            scenario: scenario.source.clone(),
            stages: Vec::new(),
            geometry: None,
            sarason: None,
            norms: None,
            comparison: None,
            schur: None,
            compactness: None,
            corollary: None,
            curves: Vec::new(),
        }
    }

    pub fn succeeded(&self) -> bool {
        self.stages.iter().all(|s| s.ok)
    }

    pub fn failed_stages(&self) -> Vec<&'static str> {
        self.stages
            .iter()
            .filter(|s| !s.ok)
            .map(|s| s.stage)
            .collect()
    }

    pub fn to_json(&self) -> String {
        to_json(self).expect("report serialization")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: &'static str,
    pub csv: String,
}

/// A finished run: the report plus its CSV curves.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: DiagnosticReport,
    pub curves: Vec<Curve>,
}

impl RunOutput {
    pub fn report_file_name(&self) -> String {
        format!("{}.report.json", self.report.scenario.name)
    }

    /// Writes `<name>.report.json` and `<name>.<curve>.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::with_capacity(self.curves.len() + 1);
        let report = dir.join(self.report_file_name());
        std::fs::write(&report, self.report.to_json())?;
        written.push(report);
        for (curve, file) in self.curves.iter().zip(&self.report.curves) {
            let path = dir.join(file);
            std::fs::write(&path, &curve.csv)?;
            written.push(path);
        }
        Ok(written)
    }
}

struct Run<'a> {
    scenario: &'a Scenario,
    report: DiagnosticReport,
    curves: Vec<Curve>,
}

impl<'a> Run<'a> {
    fn new(mode: Mode, scenario: &'a Scenario) -> Self {
        Self {
            scenario,
            report: DiagnosticReport::new(mode, scenario),
            curves: Vec::new(),
        }
    }

    fn stage<R>(
        &mut self,
        stage: &'static str,
        body: impl FnOnce(&mut Self) -> Result<R>,
    ) -> Option<R> {
        match body(self) {
            Ok(r) => {
                self.report.stages.push(StageStatus {
                    stage,
                    ok: true,
                    error: None,
                });
                Some(r)
            }
            Err(e) => {
                self.report.stages.push(StageStatus {
                    stage,
                    ok: false,
                    error: Some(e.to_string()),
                });
                None
            }
        }
    }

    fn curve(&mut self, name: &'static str, csv: String) {
        self.report
            .curves
            .push(format!("{}.{name}.csv", self.scenario.name));
        self.curves.push(Curve { name, csv });
    }

    fn finish(self) -> RunOutput {
        RunOutput {
            report: self.report,
            curves: self.curves,
        }
    }

    fn geometry(&mut self) {
        self.stage("geometry", |run| {
            let s = run.scenario;
            let delta = s.params.delta;
            let points = s.schedule.points();
            let radii = map_grid(&points, |w| Ok(hyperbolic_disk(w, delta)?.radius))?;
            run.report.geometry = Some(GeometrySummary {
                delta,
                max_radius: *s.schedule.radii().last().expect("nonempty"),
                max_admissible_modulus: max_admissible_modulus(delta),
                max_disk_radius: radii.into_iter().fold(0.0, f64::max),
            });
            Ok(())
        });
    }

    fn sarason(&mut self, rule: &QuadratureRule<f64>) -> Option<SarasonReport<f64>> {
        self.stage("berezin", |run| {
            let report = sarason_sup(&run.scenario.pair, &run.scenario.schedule, rule)?;
            run.report.sarason = Some(SarasonSummary::from(&report));
            run.curve("grid", report.grid_csv());
            run.curve("trend", report.trend_csv());
            Ok(report)
        })
    }
}

/// Boundedness diagnostics: Sarason sup, truncated norms, Schur ratios and
/// the comparison of norm against sqrt(sup) and sup.
pub fn run_boundedness(scenario: &Scenario) -> RunOutput {
    let mut run = Run::new(Mode::Boundedness, scenario);
    let rule = scenario.rule();
    run.geometry();
    let sarason = run.sarason(&rule);
    let norms = run.stage("toeplitz", |run| {
        let rows = scenario
            .truncations
            .iter()
            .map(|&n| {
                let norm = product_matrix(&scenario.pair, n)?.operator_norm(DEFAULT_NORM_TOL)?;
                Ok(NormRow { n, norm })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut csv = String::from("n,norm\n");
        for r in &rows {
            csv.push_str(&format!("{},{}", r.n, csv_line(&[r.norm])));
        }
        run.curve("norms", csv);
        run.report.norms = Some(rows.clone());
        Ok(rows)
    });
    if let (Some(s), Some(norms)) = (&sarason, &norms) {
        let rows: Vec<ComparisonRow> = norms
            .iter()
            .map(|r| ComparisonRow {
                n: r.n,
                norm: r.norm,
                sqrt_sup: s.sup_sqrt,
                sup: s.sup_estimate,
                norm_over_sqrt_sup: (s.sup_sqrt > 0.0).then(|| r.norm / s.sup_sqrt),
            })
            .collect();
        let mut csv = String::from("n,norm,sqrt_sup,sup\n");
        for r in &rows {
            csv.push_str(&format!(
                "{},{}",
                r.n,
                csv_line(&[r.norm, r.sqrt_sup, r.sup])
            ));
        }
        run.curve("comparison", csv);
        run.report.comparison = Some(rows);
    }
    run.stage("schur", |run| {
        let graded = scenario.graded_rule();
        let (pair, params, schedule) = (&scenario.pair, &scenario.params, &scenario.schedule);
        let schur = schur_ratio_report(pair, params, schedule, &graded)?;
        let dual = schur_dual_report(pair, params, schedule, &graded)?;
        let lemma1 = if pair.f.is_zero() {
            None
        } else {
            Some(lemma1_report(&pair.f, params, schedule, &graded)?)
        };
        let luecking = luecking_report(DiskPoint::origin(), params, schedule, &graded)?;
        run.report.schur = Some(SchurSummary {
            parameters: *params,
            schur_max: schur.max_ratio,
            schur_dual_max: dual.max_ratio,
            lemma1_max: lemma1.as_ref().map(|r| r.max_ratio),
            luecking_max: luecking.max_ratio,
        });
        run.curve("schur", schur.to_csv());
        run.curve("schur_dual", dual.to_csv());
        if let Some(l) = lemma1 {
            run.curve("lemma1", l.to_csv());
        }
        run.curve("luecking", luecking.to_csv());
        Ok(())
    });
    run.finish()
}

/// Compactness diagnostics: boundary-limit predicate, c₁(r) and HS tails.
pub fn run_compactness(scenario: &Scenario) -> RunOutput {
    let mut run = Run::new(Mode::Compactness, scenario);
    let rule = scenario.rule();
    run.geometry();
    let sarason = run.sarason(&rule);
    let radii = scenario.schedule.radii().to_vec();
    let tail = sarason.as_ref().and_then(|report| {
        run.stage("tail", |_| {
            // c₁ at the last radius has no grid points beyond it
            let inner = &radii[..radii.len() - 1];
            let mut rows = vec![(0.0, report.tail_sup_sqrt(0.0)?)];
            rows.extend(tail_constant_curve(report, inner)?);
            Ok(rows)
        })
    });
    let hs_rule = hs_rule(scenario);
    let hs = run.stage("toeplitz", |_| {
        radii
            .iter()
            .map(|&r| {
                let sq = hs_tail_norm_squared(&scenario.pair, r, &hs_rule)?;
                Ok(HsRow {
                    r,
                    hs_norm: sq.sqrt(),
                    hs_norm_sqr: sq,
                })
            })
            .collect::<Result<Vec<_>>>()
    });
    if let Some(report) = &sarason {
        let c2 = report.sup_sqrt;
        let tail_rows: Vec<TailRow> = tail
            .unwrap_or_default()
            .into_iter()
            .map(|(r, c1)| TailRow {
                r,
                c1,
                c2,
                c1c2: c1 * c2,
            })
            .collect();
        let mut csv = String::from("r,c1,c2,c1c2\n");
        for t in &tail_rows {
            csv.push_str(&csv_line(&[t.r, t.c1, t.c2, t.c1c2]));
        }
        run.curve("tail", csv);
        let hs_rows = hs.clone().unwrap_or_default();
        run.report.compactness = Some(CompactnessSummary {
            limit_zero: report.limit_zero,
            limit_threshold: report.limit_threshold,
            boundary_trend: report.boundary_trend.clone(),
            c2,
            tail: tail_rows,
            hs: hs_rows,
            hs_rule: [hs_rule.radial_nodes().len(), hs_rule.angular_count()],
        });
    }
    if let Some(rows) = hs {
        let mut csv = String::from("r,hs_norm,hs_norm_sqr\n");
        for h in &rows {
            csv.push_str(&csv_line(&[h.r, h.hs_norm, h.hs_norm_sqr]));
        }
        run.curve("hs", csv);
    }
    run.finish()
}

fn hs_rule(scenario: &Scenario) -> QuadratureRule<f64> {
    let (n_r, n_a) = scenario.rule_spec;
    QuadratureRule::new(n_r.min(HS_RULE_CAP[0]), n_a.min(HS_RULE_CAP[1])).expect("validated counts")
}

/// Corollary mode (g = 1): sup ‖f∘φ_v‖₂ next to sup |f(v)| per radius.
pub fn run_corollary_mode(scenario: &Scenario) -> Result<RunOutput> {
    if !scenario.pair.g.is_one() {
        return Err(Error::InvalidScenario("corollary mode needs g = 1".into()));
    }
    let mut run = Run::new(Mode::Corollary, scenario);
    let rule = scenario.rule();
    run.geometry();
    run.stage("berezin", |run| {
        let f = &scenario.pair.f;
        let points = scenario.schedule.points();
        let values = map_grid(&points, |w| {
            Ok((berezin_mod_squared(f, w, &rule)?.sqrt(), f.eval(w).norm()))
        })?;
        let rows: Vec<CorollaryRow> = scenario
            .schedule
            .radii()
            .iter()
            .zip(values.chunks(scenario.schedule.angular_samples()))
            .map(|(&radius, ring)| CorollaryRow {
                radius,
                composition_norm: ring.iter().fold(0.0, |m, v| f64::max(m, v.0)),
                modulus: ring.iter().fold(0.0, |m, v| f64::max(m, v.1)),
            })
            .collect();
        let mut csv = String::from("radius,composition_norm,modulus\n");
        for r in &rows {
            csv.push_str(&csv_line(&[r.radius, r.composition_norm, r.modulus]));
        }
        run.curve("corollary", csv);
        run.report.corollary = Some(CorollarySummary {
            sup_composition_norm: rows.iter().fold(0.0, |m, r| m.max(r.composition_norm)),
            sup_modulus: rows.iter().fold(0.0, |m, r| m.max(r.modulus)),
            rows,
        });
        Ok(())
    });
    Ok(run.finish())
}

pub fn run_mode(mode: Mode, scenario: &Scenario) -> Result<RunOutput> {
    match mode {
        Mode::Boundedness => Ok(run_boundedness(scenario)),
        Mode::Compactness => Ok(run_compactness(scenario)),
        Mode::Corollary => run_corollary_mode(scenario),
    }
}
