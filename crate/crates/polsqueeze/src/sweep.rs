//! Sweep driver and grid search: tabulates photon numbers and Stokes
//! statistics along the interaction length and scans coupling space
//! for squeezing.
//!
//! Every number on the output path comes from the vacuum-moment
//! engine, evaluated serially in row order, so a fixed plan yields
//! byte-identical CSV on every run and platform.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{ensure_finite, ensure_nonnegative, Error, Result};
use crate::moments::{
    mean_photon_numbers_engine, photon_number_variance, InputState, OutputArm,
};
use crate::propagator::{propagator, CouplingRatios};
use crate::stokes::{stokes_report, StokesReport};

/// Which quantity groups a sweep evaluates per row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputSelection {
    pub photon_means: bool,
    pub photon_variances: bool,
    pub stokes: bool,
}

impl Default for OutputSelection {
    fn default() -> Self {
        Self {
            photon_means: true,
            photon_variances: true,
            stokes: true,
        }
    }
}

/// Full description of one sweep: coupling ratios, input state, ζ
/// grid, and requested outputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPlan {
    pub k1: f64,
    pub k2: f64,
    /// Initial mean photon numbers |α₁ₒ|² and |α₁ₑ|².
    pub mag_sq_1o: f64,
    pub mag_sq_1e: f64,
    /// φ₁ₒ + φ₁ₑ and φ₁ₒ − φ₁ₑ in radians.
    pub phase_sum: f64,
    pub phase_diff: f64,
    pub zeta_start: f64,
    pub zeta_end: f64,
    pub zeta_steps: u32,
    pub outputs: OutputSelection,
}

impl SweepPlan {
    /// Checks every invariant: finite values, nonnegative couplings
    /// and photon numbers, 0 ≤ zeta_start < zeta_end, at least one
    /// step and one output group.
    pub fn validate(&self) -> Result<()> {
        ensure_nonnegative("k1", self.k1)?;
        ensure_nonnegative("k2", self.k2)?;
        ensure_nonnegative("mag_sq_1o", self.mag_sq_1o)?;
        ensure_nonnegative("mag_sq_1e", self.mag_sq_1e)?;
        ensure_finite("phase_sum", self.phase_sum)?;
        ensure_finite("phase_diff", self.phase_diff)?;
        ensure_nonnegative("zeta_start", self.zeta_start)?;
        ensure_finite("zeta_end", self.zeta_end)?;
        if self.zeta_end <= self.zeta_start {
            return Err(Error::InvalidPlan(format!(
                "zeta_end ({}) must exceed zeta_start ({})",
                self.zeta_end, self.zeta_start
            )));
        }
        if self.zeta_steps == 0 {
            return Err(Error::InvalidPlan("zeta_steps must be at least 1".into()));
        }
        let o = &self.outputs;
        if !(o.photon_means || o.photon_variances || o.stokes) {
            return Err(Error::InvalidPlan(
                "outputs must select at least one group".into(),
            ));
        }
        Ok(())
    }

    /// The exact affine ζ grid: point i is
    /// zeta_start + (zeta_end − zeta_start)·i/(zeta_steps − 1), and a
    /// single-step plan evaluates zeta_start alone.
    pub fn zeta_at(&self, i: u32) -> f64 {
        if self.zeta_steps == 1 {
            return self.zeta_start;
        }
        let t = f64::from(i) / f64::from(self.zeta_steps - 1);
        self.zeta_start + (self.zeta_end - self.zeta_start) * t
    }

    pub fn input_state(&self) -> Result<InputState> {
        InputState::from_mean_photons(
            self.mag_sq_1o,
            self.mag_sq_1e,
            self.phase_sum,
            self.phase_diff,
        )
    }
}

/// Parses a phase value: a float, or the tokens `pi` / `-pi`.
fn parse_phase(field: &str) -> Option<f64> {
    match field {
        "pi" => Some(PI),
        "-pi" => Some(-PI),
        _ => field.parse::<f64>().ok(),
    }
}

/// Parses the flat key-value plan format: one `key = value` pair per
/// line, `#` starting a comment, blank lines ignored. Keys mirror the
/// [`SweepPlan`] fields; `outputs` takes a comma-separated subset of
/// {photon_means, photon_variances, stokes} and defaults to all three;
/// the phases default to 0 and accept the tokens `pi` and `-pi`.
pub fn parse_plan(text: &str) -> Result<SweepPlan> {
    let mut seen: Vec<&str> = Vec::new();
    let mut k1 = None;
    let mut k2 = None;
    let mut mag_sq_1o = None;
    let mut mag_sq_1e = None;
    let mut phase_sum = 0.0;
    let mut phase_diff = 0.0;
    let mut zeta_start = None;
    let mut zeta_end = None;
    let mut zeta_steps = None;
    let mut outputs = OutputSelection::default();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let data = raw.split('#').next().unwrap_or("").trim();
        if data.is_empty() {
            continue;
        }
        let (key, value) = data.split_once('=').ok_or_else(|| Error::Plan {
            line,
            reason: "expected `key = value`".into(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let known = [
            "k1",
            "k2",
            "mag_sq_1o",
            "mag_sq_1e",
            "phase_sum",
            "phase_diff",
            "zeta_start",
            "zeta_end",
            "zeta_steps",
            "outputs",
        ];
        let Some(&key) = known.iter().find(|&&k| k == key) else {
            return Err(Error::Plan {
                line,
                reason: format!("unknown key {key:?}"),
            });
        };
        if seen.contains(&key) {
            return Err(Error::Plan {
                line,
                reason: format!("duplicate key {key:?}"),
            });
        }
        seen.push(key);

        let float = |v: &str| {
            v.parse::<f64>().map_err(|_| Error::Plan {
                line,
                reason: format!("not a number: {v:?}"),
            })
        };
        match key {
            "k1" => k1 = Some(float(value)?),
            "k2" => k2 = Some(float(value)?),
            "mag_sq_1o" => mag_sq_1o = Some(float(value)?),
            "mag_sq_1e" => mag_sq_1e = Some(float(value)?),
            "phase_sum" | "phase_diff" => {
                let parsed = parse_phase(value).ok_or_else(|| Error::Plan {
                    line,
                    reason: format!("not a phase: {value:?} (use a float, pi, or -pi)"),
                })?;
                if key == "phase_sum" {
                    phase_sum = parsed;
                } else {
                    phase_diff = parsed;
                }
            }
            "zeta_start" => zeta_start = Some(float(value)?),
            "zeta_end" => zeta_end = Some(float(value)?),
            "zeta_steps" => {
                zeta_steps = Some(value.parse::<u32>().map_err(|_| Error::Plan {
                    line,
                    reason: format!("not a positive integer: {value:?}"),
                })?)
            }
            "outputs" => {
                let mut selection = OutputSelection {
                    photon_means: false,
                    photon_variances: false,
                    stokes: false,
                };
                for item in value.split(',') {
                    match item.trim() {
                        "photon_means" => selection.photon_means = true,
                        "photon_variances" => selection.photon_variances = true,
                        "stokes" => selection.stokes = true,
                        other => {
                            return Err(Error::Plan {
                                line,
                                reason: format!("unknown output group {other:?}"),
                            })
                        }
                    }
                }
                outputs = selection;
            }
            _ => unreachable!("key list is exhaustive"),
        }
    }

    let require = |name: &str, v: Option<f64>| {
        v.ok_or_else(|| Error::InvalidPlan(format!("missing key {name:?}")))
    };
    let plan = SweepPlan {
        k1: require("k1", k1)?,
        k2: require("k2", k2)?,
        mag_sq_1o: require("mag_sq_1o", mag_sq_1o)?,
        mag_sq_1e: require("mag_sq_1e", mag_sq_1e)?,
        phase_sum,
        phase_diff,
        zeta_start: require("zeta_start", zeta_start)?,
        zeta_end: require("zeta_end", zeta_end)?,
        zeta_steps: zeta_steps
            .ok_or_else(|| Error::InvalidPlan("missing key \"zeta_steps\"".into()))?,
        outputs,
    };
    plan.validate()?;
    Ok(plan)
}

/// One evaluated grid point. Groups the plan did not request stay
/// `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub zeta: f64,
    /// (⟨N₁ₒ⟩, ⟨N₁ₑ⟩, ⟨N₃ₑ⟩).
    pub photon_means: Option<[f64; 3]>,
    /// (⟨ΔN₁ₒ²⟩, ⟨ΔN₁ₑ²⟩).
    pub photon_variances: Option<[f64; 2]>,
    pub stokes: Option<StokesReport>,
}

/// Evaluates the plan on its ζ grid, one row per point, in order.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<SweepRow>> {
    plan.validate()?;
    let ratios = CouplingRatios::new(plan.k1, plan.k2)?;
    let state = plan.input_state()?;
    let mut rows = Vec::with_capacity(plan.zeta_steps as usize);
    for i in 0..plan.zeta_steps {
        let zeta = plan.zeta_at(i);
        let p = propagator(&ratios, zeta)?;
        let photon_means = plan
            .outputs
            .photon_means
            .then(|| mean_photon_numbers_engine(&p, &state));
        let photon_variances = plan.outputs.photon_variances.then(|| {
            [
                photon_number_variance(&p, &state, OutputArm::Ordinary),
                photon_number_variance(&p, &state, OutputArm::Extraordinary),
            ]
        });
        let stokes = if plan.outputs.stokes {
            Some(stokes_report(&p, &state)?)
        } else {
            None
        };
        rows.push(SweepRow {
            zeta,
            photon_means,
            photon_variances,
            stokes,
        });
    }
    Ok(rows)
}

/// The fixed CSV column contract.
pub const CSV_HEADER: &str = "zeta,N1o,N1e,N3e,V0,V1,V2,V3,S0,S1,S2,S3";

/// Serializes rows to CSV: the fixed header, one line per row, every
/// number with 17 significant digits, `\n` line terminators. Requires
/// the photon_means and stokes groups on every row.
pub fn to_csv(rows: &[SweepRow]) -> Result<String> {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let n = row.photon_means.ok_or(Error::MissingColumns("photon_means"))?;
        let s = row.stokes.ok_or(Error::MissingColumns("stokes"))?;
        let mut fields = vec![row.zeta];
        fields.extend(n);
        fields.extend(s.normalized);
        fields.extend(s.means);
        let mut first = true;
        for value in fields {
            if !first {
                out.push(',');
            }
            write!(out, "{value:.16e}").expect("string formatting is infallible");
            first = false;
        }
        out.push('\n');
    }
    Ok(out)
}

/// One uniformly spaced search axis; `count` = 1 degenerates to `min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub count: u32,
}

impl GridAxis {
    fn validate(&self, name: &'static str) -> Result<()> {
        if self.count == 0 {
            return Err(Error::EmptyGridAxis { name });
        }
        ensure_finite(name, self.min)?;
        ensure_finite(name, self.max)?;
        if self.max < self.min {
            return Err(Error::InvalidPlan(format!(
                "grid axis {name}: max ({}) is below min ({})",
                self.max, self.min
            )));
        }
        Ok(())
    }

    /// Affine grid point, same construction as [`SweepPlan::zeta_at`].
    pub fn point(&self, i: u32) -> f64 {
        if self.count == 1 {
            return self.min;
        }
        let t = f64::from(i) / f64::from(self.count - 1);
        self.min + (self.max - self.min) * t
    }
}

/// Search domain over (k₁, k₂, ζ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchGrid {
    pub k1: GridAxis,
    pub k2: GridAxis,
    pub zeta: GridAxis,
}

/// One grid point with its four normalized Stokes variances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchHit {
    pub k1: f64,
    pub k2: f64,
    pub zeta: f64,
    pub normalized: [f64; 4],
}

/// Minima found by [`squeezing_search`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchReport {
    /// best[j] minimizes the normalized ⟨ΔSⱼ²⟩.
    pub best: [SearchHit; 4],
    /// Minimizes max(V₀..V₃).
    pub minimax: SearchHit,
    /// Whether the k₁ < k₂ constraint was satisfiable on the grid;
    /// when false, the minima are over the whole grid instead.
    pub constrained: bool,
}

/// Candidate ordering: smaller value, then smaller ζ, then smaller k₂,
/// then smaller k₁. Total on finite inputs, so the search result is
/// independent of evaluation order.
fn improves(value: f64, hit: &SearchHit, best_value: f64, best: &SearchHit) -> bool {
    let lhs = (value, hit.zeta, hit.k2, hit.k1);
    let rhs = (best_value, best.zeta, best.k2, best.k1);
    lhs < rhs
}

/// Exhaustive grid scan: per Stokes component, the point with the
/// smallest normalized variance subject to k₁ < k₂, plus the minimax
/// point. Falls back to the unconstrained minima when no grid point
/// has k₁ < k₂.
pub fn squeezing_search(grid: &SearchGrid, state: &InputState) -> Result<SearchReport> {
    grid.k1.validate("k1")?;
    grid.k2.validate("k2")?;
    grid.zeta.validate("zeta")?;

    // records[0..4]: per-component minima; records[4]: minimax.
    // One constrained and one unconstrained set, filled in one pass.
    let mut constrained: Option<[(f64, SearchHit); 5]> = None;
    let mut unconstrained: Option<[(f64, SearchHit); 5]> = None;

    for ik1 in 0..grid.k1.count {
        let k1 = grid.k1.point(ik1);
        for ik2 in 0..grid.k2.count {
            let k2 = grid.k2.point(ik2);
            let ratios = CouplingRatios::new(k1, k2)?;
            for iz in 0..grid.zeta.count {
                let zeta = grid.zeta.point(iz);
                let p = propagator(&ratios, zeta)?;
                let report = stokes_report(&p, state)?;
                let hit = SearchHit {
                    k1,
                    k2,
                    zeta,
                    normalized: report.normalized,
                };
                let minimax = report
                    .normalized
                    .iter()
                    .cloned()
                    .fold(f64::MIN, f64::max);
                let update = |records: &mut Option<[(f64, SearchHit); 5]>| {
                    let values = [
                        report.normalized[0],
                        report.normalized[1],
                        report.normalized[2],
                        report.normalized[3],
                        minimax,
                    ];
                    match records {
                        None => *records = Some(values.map(|v| (v, hit))),
                        Some(records) => {
                            for (record, value) in records.iter_mut().zip(values) {
                                if improves(value, &hit, record.0, &record.1) {
                                    *record = (value, hit);
                                }
                            }
                        }
                    }
                };
                update(&mut unconstrained);
                if k1 < k2 {
                    update(&mut constrained);
                }
            }
        }
    }

    let (records, was_constrained) = match (constrained, unconstrained) {
        (Some(r), _) => (r, true),
        (None, Some(r)) => (r, false),
        (None, None) => unreachable!("axes are validated nonempty"),
    };
    Ok(SearchReport {
        best: [
            records[0].1,
            records[1].1,
            records[2].1,
            records[3].1,
        ],
        minimax: records[4].1,
        constrained: was_constrained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_plan() -> SweepPlan {
        SweepPlan {
            k1: 0.2,
            k2: 0.5,
            mag_sq_1o: 1.0,
            mag_sq_1e: 1.0,
            phase_sum: PI,
            phase_diff: 0.0,
            zeta_start: 0.0,
            zeta_end: 2.0,
            zeta_steps: 201,
            outputs: OutputSelection::default(),
        }
    }

    #[test]
    fn plan_validation_rejects_bad_grids() {
        let mut plan = base_plan();
        plan.zeta_end = 0.0;
        assert!(matches!(plan.validate(), Err(Error::InvalidPlan(_))));
        let mut plan = base_plan();
        plan.zeta_steps = 0;
        assert!(plan.validate().is_err());
        let mut plan = base_plan();
        plan.mag_sq_1o = -0.5;
        assert!(matches!(plan.validate(), Err(Error::Negative { .. })));
        let mut plan = base_plan();
        plan.outputs = OutputSelection {
            photon_means: false,
            photon_variances: false,
            stokes: false,
        };
        assert!(plan.validate().is_err());
    }

    #[test]
    fn zeta_grid_is_exact_affine() {
        let mut plan = base_plan();
        plan.zeta_steps = 5;
        let points: Vec<f64> = (0..5).map(|i| plan.zeta_at(i)).collect();
        assert_eq!(points, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        plan.zeta_steps = 1;
        assert_eq!(plan.zeta_at(0), 0.0);
    }

    #[test]
    fn plan_file_round_trip() {
        let text = "\
# figure-style sweep
k1 = 0.2
k2 = 0.5          # fixture point
mag_sq_1o = 1.0
mag_sq_1e = 1.0
phase_sum = pi
zeta_start = 0
zeta_end = 2
zeta_steps = 201
outputs = photon_means, stokes
";
        let plan = parse_plan(text).unwrap();
        assert_eq!(plan.k1, 0.2);
        assert_eq!(plan.phase_sum, PI);
        assert_eq!(plan.phase_diff, 0.0);
        assert_eq!(plan.zeta_steps, 201);
        assert!(plan.outputs.photon_means);
        assert!(!plan.outputs.photon_variances);
        assert!(plan.outputs.stokes);
    }

    #[test]
    fn plan_file_errors_carry_line_numbers() {
        match parse_plan("k1 = 0.2\nk1 = 0.3\n") {
            Err(Error::Plan { line, reason }) => {
                assert_eq!(line, 2);
                assert!(reason.contains("duplicate"));
            }
            other => panic!("expected duplicate-key error, got {other:?}"),
        }
        match parse_plan("k3 = 0.2\n") {
            Err(Error::Plan { line: 1, reason }) => assert!(reason.contains("unknown")),
            other => panic!("expected unknown-key error, got {other:?}"),
        }
        match parse_plan("k1 = fast\n") {
            Err(Error::Plan { line: 1, .. }) => {}
            other => panic!("expected number error, got {other:?}"),
        }
        match parse_plan("k1 = 0.2\nphase_sum = tau\n") {
            Err(Error::Plan { line: 2, .. }) => {}
            other => panic!("expected phase error, got {other:?}"),
        }
        assert!(matches!(
            parse_plan("k1 = 0.2\nk2 = 0.5\n"),
            Err(Error::InvalidPlan(_))
        ));
        assert!(matches!(
            parse_plan("k1 = 0.2, k2 = 0.5\n"),
            Err(Error::Plan { line: 1, .. })
        ));
    }

    #[test]
    fn single_step_plan_reports_initial_state() {
        let mut plan = base_plan();
        plan.zeta_steps = 1;
        let rows = run_sweep(&plan).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!(row.zeta, 0.0);
        let n = row.photon_means.unwrap();
        assert!((n[0] - 1.0).abs() <= 1e-12);
        assert!((n[1] - 1.0).abs() <= 1e-12);
        assert!(n[2].abs() <= 1e-12);
        for v in row.stokes.unwrap().normalized {
            assert!((v - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn sweep_reproduces_photon_dip_and_growth() {
        // at the pinned operating point with deamplifying phase the
        // extraordinary arm dips before parametric growth takes over,
        // while the third harmonic grows monotonically
        let mut plan = base_plan();
        plan.zeta_steps = 201;
        let rows = run_sweep(&plan).unwrap();
        assert_eq!(rows.len(), 201);
        let n1e: Vec<f64> = rows.iter().map(|r| r.photon_means.unwrap()[1]).collect();
        let argmin = (0..n1e.len())
            .min_by(|&a, &b| n1e[a].partial_cmp(&n1e[b]).unwrap())
            .unwrap();
        assert!(argmin > 0 && argmin < n1e.len() - 1);
        assert!(rows[argmin].zeta > 0.0 && rows[argmin].zeta < 0.5);
        let n3e: Vec<f64> = rows
            .iter()
            .take_while(|r| r.zeta <= 1.0)
            .map(|r| r.photon_means.unwrap()[2])
            .collect();
        assert!(n3e.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn vacuum_input_errors_only_when_stokes_requested() {
        let mut plan = base_plan();
        plan.mag_sq_1o = 0.0;
        plan.mag_sq_1e = 0.0;
        assert!(matches!(
            run_sweep(&plan),
            Err(Error::DegenerateNormalization)
        ));
        plan.outputs.stokes = false;
        assert!(run_sweep(&plan).is_ok());
    }

    #[test]
    fn csv_has_exact_contract_and_is_reproducible() {
        let mut plan = base_plan();
        plan.zeta_steps = 11;
        plan.zeta_end = 1.0;
        let csv_a = to_csv(&run_sweep(&plan).unwrap()).unwrap();
        let csv_b = to_csv(&run_sweep(&plan).unwrap()).unwrap();
        assert_eq!(csv_a, csv_b);
        let lines: Vec<&str> = csv_a.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 12);
        assert!(csv_a.ends_with('\n'));
        for line in &lines[1..] {
            assert_eq!(line.split(',').count(), 12);
        }
        // ζ = 0 row: unit photon numbers, unit variances
        let first: Vec<f64> = lines[1]
            .split(',')
            .map(|f| f.parse::<f64>().unwrap())
            .collect();
        assert_eq!(first[0], 0.0);
        assert!((first[1] - 1.0).abs() <= 1e-12);
        assert!((first[4] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn csv_requires_means_and_stokes_groups() {
        let mut plan = base_plan();
        plan.zeta_steps = 2;
        plan.outputs = OutputSelection {
            photon_means: false,
            photon_variances: true,
            stokes: true,
        };
        assert!(matches!(
            to_csv(&run_sweep(&plan).unwrap()),
            Err(Error::MissingColumns("photon_means"))
        ));
        plan.outputs = OutputSelection {
            photon_means: true,
            photon_variances: false,
            stokes: false,
        };
        assert!(matches!(
            to_csv(&run_sweep(&plan).unwrap()),
            Err(Error::MissingColumns("stokes"))
        ));
    }

    #[test]
    fn degenerate_search_grid_returns_the_single_point() {
        let grid = SearchGrid {
            k1: GridAxis { min: 0.0, max: 0.0, count: 1 },
            k2: GridAxis { min: 0.0, max: 0.0, count: 1 },
            zeta: GridAxis { min: 0.0, max: 0.0, count: 1 },
        };
        let state = InputState::from_mean_photons(1.0, 1.0, PI, 0.0).unwrap();
        let report = squeezing_search(&grid, &state).unwrap();
        assert!(!report.constrained);
        for hit in report.best.iter().chain([&report.minimax]) {
            assert_eq!((hit.k1, hit.k2, hit.zeta), (0.0, 0.0, 0.0));
            for v in hit.normalized {
                assert!((v - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn conserved_difference_keeps_v1_at_shot_noise() {
        // along k₁ = k₂ = 0 the photon-number difference is conserved,
        // so the best V₁ on that line stays exactly at shot noise
        let grid = SearchGrid {
            k1: GridAxis { min: 0.0, max: 0.0, count: 1 },
            k2: GridAxis { min: 0.0, max: 0.0, count: 1 },
            zeta: GridAxis { min: 0.0, max: 1.5, count: 16 },
        };
        let state = InputState::from_mean_photons(1.0, 1.0, PI, 0.0).unwrap();
        let report = squeezing_search(&grid, &state).unwrap();
        assert!((report.best[1].normalized[1] - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn search_respects_constraint_and_matches_brute_force() {
        let grid = SearchGrid {
            k1: GridAxis { min: 0.0, max: 0.4, count: 3 },
            k2: GridAxis { min: 0.0, max: 0.6, count: 3 },
            zeta: GridAxis { min: 0.0, max: 1.0, count: 5 },
        };
        let state = InputState::from_mean_photons(1.0, 1.0, PI, 0.0).unwrap();
        let report = squeezing_search(&grid, &state).unwrap();
        assert!(report.constrained);
        for (j, hit) in report.best.iter().enumerate() {
            assert!(hit.k1 < hit.k2);
            // no admissible grid point does better
            for ik1 in 0..3 {
                for ik2 in 0..3 {
                    for iz in 0..5 {
                        let (k1, k2, z) =
                            (grid.k1.point(ik1), grid.k2.point(ik2), grid.zeta.point(iz));
                        if k1 >= k2 {
                            continue;
                        }
                        let p = propagator(&CouplingRatios::new(k1, k2).unwrap(), z).unwrap();
                        let v = stokes_report(&p, &state).unwrap().normalized[j];
                        assert!(v >= hit.normalized[j] - 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn search_tie_break_is_lexicographic() {
        // every ζ = 0 point has V = 1; the winner must be the smallest
        // (ζ, k₂, k₁) among admissible points
        let grid = SearchGrid {
            k1: GridAxis { min: 0.0, max: 0.2, count: 2 },
            k2: GridAxis { min: 0.3, max: 0.5, count: 2 },
            zeta: GridAxis { min: 0.0, max: 0.0, count: 1 },
        };
        let state = InputState::from_mean_photons(1.0, 1.0, 0.0, 0.0).unwrap();
        let report = squeezing_search(&grid, &state).unwrap();
        for hit in report.best.iter().chain([&report.minimax]) {
            assert_eq!((hit.k1, hit.k2, hit.zeta), (0.0, 0.3, 0.0));
        }
    }

    #[test]
    fn empty_axis_is_rejected() {
        let grid = SearchGrid {
            k1: GridAxis { min: 0.0, max: 1.0, count: 0 },
            k2: GridAxis { min: 0.0, max: 1.0, count: 2 },
            zeta: GridAxis { min: 0.0, max: 1.0, count: 2 },
        };
        let state = InputState::from_mean_photons(1.0, 1.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            squeezing_search(&grid, &state),
            Err(Error::EmptyGridAxis { name: "k1" })
        ));
    }
}
