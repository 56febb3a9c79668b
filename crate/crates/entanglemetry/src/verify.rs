//! Ensemble campaigns that machine-check the concurrence constraints,
//! degenerate-geometry identities, and measure invariances.
//!
//! Each sample is regenerated from `(seed, index)` and judged
//! independently, then results are folded in index order, so a campaign's
//! output is byte-identical across runs and worker counts.
//!
//! Margin conventions per check:
//!
//! * inequality checks (`t1`, `t2_*`) record the smallest margin and flag
//!   a violation when it drops below `-tolerance`;
//! * strictness checks (`t3_strict`, `t4_sum`) apply only when their
//!   nonzero preconditions hold at `zero_threshold` and fail when a
//!   margin does not exceed `1e-12`;
//! * identity checks (`fig2_reduction`, `fig3_collinear`, invariances)
//!   record `bound − deviation`, so any negative margin is a violation.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartition::{profile, ConcurrenceProfile};
use crate::catalog::{
    apply_random_local_unitaries, sample_one, sample_rng, stream, EnsembleSpec,
};
use crate::error::{Error, Result};
use crate::geometry::{
    build_quadrilateral, heron_area, polygon_margin, strictness_margins, sum_of_three_margin,
    triangle_margins, InequalityKind,
};
use crate::measures::{fill_triangle_from_parties, gme_from_profile, NORMALIZATION};
use crate::state::StateVector;
use crate::tolerances;

/// The individual checks a campaign can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    T1,
    T2Squared,
    T2Unsquared,
    T3Strict,
    T4Sum,
    Fig2Reduction,
    Fig3Collinear,
    LuInvariance,
    PermutationInvariance,
}

impl Check {
    pub fn all() -> [Check; 9] {
        [
            Check::T1,
            Check::T2Squared,
            Check::T2Unsquared,
            Check::T3Strict,
            Check::T4Sum,
            Check::Fig2Reduction,
            Check::Fig3Collinear,
            Check::LuInvariance,
            Check::PermutationInvariance,
        ]
    }

    /// The set exercising the four concurrence constraints.
    pub fn theorem_suite() -> BTreeSet<Check> {
        [
            Check::T1,
            Check::T2Squared,
            Check::T2Unsquared,
            Check::T3Strict,
            Check::T4Sum,
        ]
        .into_iter()
        .collect()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Check::T1 => "t1",
            Check::T2Squared => "t2_squared",
            Check::T2Unsquared => "t2_unsquared",
            Check::T3Strict => "t3_strict",
            Check::T4Sum => "t4_sum",
            Check::Fig2Reduction => "fig2_reduction",
            Check::Fig3Collinear => "fig3_collinear",
            Check::LuInvariance => "lu_invariance",
            Check::PermutationInvariance => "permutation_invariance",
        }
    }

    /// Accepts the short command-line spellings.
    pub fn parse(text: &str) -> Result<Check> {
        match text.to_ascii_lowercase().as_str() {
            "t1" => Ok(Check::T1),
            "t2-squared" | "t2sq" | "t2_squared" => Ok(Check::T2Squared),
            "t2-unsquared" | "t2c" | "t2_unsquared" => Ok(Check::T2Unsquared),
            "t3" | "t3-strict" | "t3_strict" => Ok(Check::T3Strict),
            "t4" | "t4-sum" | "t4_sum" => Ok(Check::T4Sum),
            "fig2" | "fig2_reduction" => Ok(Check::Fig2Reduction),
            "fig3" | "fig3_collinear" => Ok(Check::Fig3Collinear),
            "lu" | "lu_invariance" => Ok(Check::LuInvariance),
            "perm" | "permutation" | "permutation_invariance" => {
                Ok(Check::PermutationInvariance)
            }
            other => Err(Error::InvalidConfig {
                message: format!("unknown check '{other}'"),
            }),
        }
    }
}

/// Campaign parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub ensemble: EnsembleSpec,
    pub checks: BTreeSet<Check>,
    /// Inequality margins may dip to `-tolerance` before counting as
    /// violations; identity deviations are bounded by check-specific
    /// constants with this tolerance as the default.
    pub tolerance: f64,
    /// Concurrences below this value count as zero for preconditions.
    pub zero_threshold: f64,
    /// Stop at the first violating sample (forces sequential evaluation).
    pub fail_fast: bool,
    /// Worker cap; `None` uses the global default.
    pub threads: Option<usize>,
}

impl CampaignConfig {
    pub fn new(ensemble: EnsembleSpec, checks: BTreeSet<Check>) -> Self {
        CampaignConfig {
            ensemble,
            checks,
            tolerance: 1e-9,
            zero_threshold: tolerances::ZERO_CONCURRENCE,
            fail_fast: false,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ensemble.count == 0 {
            return Err(Error::InvalidCount);
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(Error::InvalidConfig {
                message: format!("tolerance must be positive, got {}", self.tolerance),
            });
        }
        if self.zero_threshold <= self.tolerance {
            return Err(Error::InvalidConfig {
                message: format!(
                    "zero threshold {} must exceed tolerance {}",
                    self.zero_threshold, self.tolerance
                ),
            });
        }
        if self.checks.is_empty() {
            return Err(Error::InvalidConfig {
                message: "no checks selected".to_string(),
            });
        }
        Ok(())
    }
}

/// Outcome of one check on one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Outcome {
    Pass(f64),
    Violation(f64),
    NotApplicable,
}

/// 64 log-spaced bins from 1e-12 to 4; margins below the first edge
/// (including violations) land in `underflow`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginHistogram {
    pub underflow: u64,
    pub bins: Vec<u64>,
    pub overflow: u64,
}

const HISTOGRAM_BINS: usize = 64;
const HISTOGRAM_LO: f64 = 1e-12;
const HISTOGRAM_HI: f64 = 4.0;

impl Default for MarginHistogram {
    fn default() -> Self {
        MarginHistogram {
            underflow: 0,
            bins: vec![0; HISTOGRAM_BINS],
            overflow: 0,
        }
    }
}

impl MarginHistogram {
    fn record(&mut self, margin: f64) {
        if margin < HISTOGRAM_LO {
            self.underflow += 1;
        } else if margin >= HISTOGRAM_HI {
            self.overflow += 1;
        } else {
            let scale = (HISTOGRAM_HI / HISTOGRAM_LO).ln();
            let k = ((margin / HISTOGRAM_LO).ln() / scale * HISTOGRAM_BINS as f64) as usize;
            self.bins[k.min(HISTOGRAM_BINS - 1)] += 1;
        }
    }
}

/// A failing sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub index: u64,
    pub margin: f64,
}

/// Aggregated result of one check over the ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub count: u64,
    pub passes: u64,
    pub not_applicable: u64,
    pub violations: Vec<ViolationRecord>,
    pub min_margin: Option<f64>,
    pub histogram: MarginHistogram,
}

/// Full campaign output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub ensemble: String,
    pub seed: u64,
    pub samples_requested: u64,
    pub samples_evaluated: u64,
    pub tolerance: f64,
    pub zero_threshold: f64,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

/// Runs every selected check over the ensemble.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignResult> {
    cfg.validate()?;
    let checks: Vec<Check> = cfg.checks.iter().copied().collect();
    let evaluate = |index: u64| -> Result<Vec<Outcome>> {
        let state = generate(cfg, index)?;
        let prof = profile(&state).map_err(|e| abort(index, e))?;
        checks
            .iter()
            .map(|check| evaluate_check(cfg, *check, index, &state, &prof))
            .collect()
    };
    collect_outcomes(cfg, &checks, evaluate, |c| c.name().to_string())
}

/// Probes saturation behaviour: where a concurrence vanishes the adjacent
/// side must equal the diagonal, and where all three values are nonzero no
/// saturation may occur.
pub fn saturation_probe(cfg: &CampaignConfig) -> Result<CampaignResult> {
    cfg.validate()?;
    let evaluate = |index: u64| -> Result<Vec<Outcome>> {
        let state = generate(cfg, index)?;
        let prof = profile(&state).map_err(|e| abort(index, e))?;
        Ok(vec![saturation_outcome(cfg, &prof)])
    };
    collect_outcomes(cfg, &["saturation"], evaluate, |c| c.to_string())
}

fn generate(cfg: &CampaignConfig, index: u64) -> Result<StateVector> {
    sample_one(&cfg.ensemble, index).map_err(|e| abort(index, e))
}

fn abort(index: u64, source: Error) -> Error {
    Error::CampaignAbort {
        index,
        message: source.to_string(),
    }
}

fn collect_outcomes<C: Copy + Sync, F>(
    cfg: &CampaignConfig,
    checks: &[C],
    evaluate: F,
    name_of: impl Fn(C) -> String,
) -> Result<CampaignResult>
where
    F: Fn(u64) -> Result<Vec<Outcome>> + Sync,
{
    let count = cfg.ensemble.count;
    let mut per_sample: Vec<Vec<Outcome>>;
    if cfg.fail_fast {
        per_sample = Vec::new();
        for index in 0..count {
            let outcomes = evaluate(index)?;
            let violated = outcomes.iter().any(|o| matches!(o, Outcome::Violation(_)));
            per_sample.push(outcomes);
            if violated {
                break;
            }
        }
    } else {
        let run = || -> Result<Vec<Vec<Outcome>>> {
            (0..count).into_par_iter().map(&evaluate).collect()
        };
        per_sample = match cfg.threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidConfig {
                    message: e.to_string(),
                })?
                .install(run)?,
            None => run()?,
        };
    }

    let evaluated = per_sample.len() as u64;
    let mut results: Vec<CheckResult> = checks
        .iter()
        .map(|&c| CheckResult {
            check: name_of(c),
            count: evaluated,
            passes: 0,
            not_applicable: 0,
            violations: Vec::new(),
            min_margin: None,
            histogram: MarginHistogram::default(),
        })
        .collect();

    for (index, outcomes) in per_sample.iter().enumerate() {
        for (slot, outcome) in outcomes.iter().enumerate() {
            let result = &mut results[slot];
            match outcome {
                Outcome::Pass(margin) => {
                    result.passes += 1;
                    result.histogram.record(*margin);
                    result.min_margin = Some(result.min_margin.map_or(*margin, |m| m.min(*margin)));
                }
                Outcome::Violation(margin) => {
                    result.violations.push(ViolationRecord {
                        index: index as u64,
                        margin: *margin,
                    });
                    result.histogram.record(*margin);
                    result.min_margin = Some(result.min_margin.map_or(*margin, |m| m.min(*margin)));
                }
                Outcome::NotApplicable => result.not_applicable += 1,
            }
        }
    }

    let pass = results.iter().all(|r| r.violations.is_empty());
    Ok(CampaignResult {
        ensemble: cfg.ensemble.describe(),
        seed: cfg.ensemble.seed,
        samples_requested: count,
        samples_evaluated: evaluated,
        tolerance: cfg.tolerance,
        zero_threshold: cfg.zero_threshold,
        checks: results,
        pass,
    })
}

fn evaluate_check(
    cfg: &CampaignConfig,
    check: Check,
    index: u64,
    state: &StateVector,
    prof: &ConcurrenceProfile,
) -> Result<Outcome> {
    let wrap = |e: Error| abort(index, e);
    match check {
        Check::T1 => {
            let mut min = f64::INFINITY;
            for party in 0..4 {
                min = min.min(polygon_margin(prof, party).map_err(wrap)?);
            }
            Ok(judge_margin(min, cfg.tolerance))
        }
        Check::T2Squared | Check::T2Unsquared => {
            let use_squared = check == Check::T2Squared;
            let mut min = f64::INFINITY;
            for entry in prof.two_to_two() {
                let (m1, m2) = triangle_margins(prof, &entry.cut, use_squared).map_err(wrap)?;
                for m in m1.iter().chain(m2.iter()) {
                    min = min.min(*m);
                }
            }
            Ok(judge_margin(min, cfg.tolerance))
        }
        Check::T3Strict => {
            let mut min = f64::INFINITY;
            let mut applicable = false;
            let mut violated = false;
            for entry in prof.two_to_two() {
                let reports =
                    strictness_margins(prof, &entry.cut, cfg.zero_threshold).map_err(wrap)?;
                // Reports come per half as (sum, diff, sharpened); a half
                // participates only when its nonzero precondition holds.
                for half in reports.chunks(3) {
                    if !half[0].strict {
                        continue;
                    }
                    applicable = true;
                    for report in half {
                        min = min.min(report.margin);
                        match report.kind {
                            InequalityKind::SharpenedSubadditivity(..) => {
                                violated |= report.margin < -cfg.tolerance;
                            }
                            _ => violated |= report.margin <= tolerances::STRICT_MARGIN,
                        }
                    }
                }
            }
            if !applicable {
                return Ok(Outcome::NotApplicable);
            }
            Ok(if violated {
                Outcome::Violation(min)
            } else {
                Outcome::Pass(min)
            })
        }
        Check::T4Sum => {
            if prof.one_to_rest_nonzero(cfg.zero_threshold) < 3 {
                return Ok(Outcome::NotApplicable);
            }
            let mut min = f64::INFINITY;
            for party in 0..4 {
                min = min.min(sum_of_three_margin(prof, party).map_err(wrap)?);
            }
            Ok(if min <= tolerances::STRICT_MARGIN {
                Outcome::Violation(min)
            } else {
                Outcome::Pass(min)
            })
        }
        Check::Fig2Reduction => fig2_outcome(cfg, prof).map_err(wrap),
        Check::Fig3Collinear => Ok(fig3_outcome(cfg, prof)),
        Check::LuInvariance => lu_outcome(cfg, index, state, prof).map_err(wrap),
        Check::PermutationInvariance => perm_outcome(cfg, state, prof).map_err(wrap),
    }
}

fn judge_margin(min: f64, tolerance: f64) -> Outcome {
    if min < -tolerance {
        Outcome::Violation(min)
    } else {
        Outcome::Pass(min)
    }
}

/// With exactly one separated party, every quadrilateral keeps one live
/// triangle congruent to the fill triangle of the remaining three-qubit
/// factor; compare scaled areas and require both measures to vanish.
fn fig2_outcome(cfg: &CampaignConfig, prof: &ConcurrenceProfile) -> Result<Outcome> {
    let vanished: Vec<usize> = (0..4)
        .filter(|&p| prof.one_to_rest(p).concurrence < cfg.zero_threshold)
        .collect();
    if vanished.len() != 1 {
        return Ok(Outcome::NotApplicable);
    }
    let lone = vanished[0];
    let others: Vec<usize> = (0..4).filter(|&p| p != lone).collect();
    let fill_triangle = fill_triangle_from_parties(prof, [others[0], others[1], others[2]]);
    let fill_sq = NORMALIZATION * heron_area(&fill_triangle)?;

    let mut max_dev = 0.0f64;
    for entry in prof.two_to_two() {
        let quad = build_quadrilateral(prof, &entry.cut, true)?;
        let live_area = if entry.cut.side_a().contains(lone) {
            quad.area_2
        } else {
            quad.area_1
        };
        max_dev = max_dev.max((NORMALIZATION * live_area - fill_sq).abs());
    }
    max_dev = max_dev.max(gme_from_profile(prof, true)?);
    max_dev = max_dev.max(gme_from_profile(prof, false)?);
    Ok(identity_outcome(tolerances::FILL_REDUCTION.max(cfg.tolerance), max_dev))
}

/// With a vanishing diagonal the quadrilateral collapses: both side pairs
/// are equal and the other two diagonals agree.
fn fig3_outcome(cfg: &CampaignConfig, prof: &ConcurrenceProfile) -> Outcome {
    let diagonals: Vec<&crate::bipartition::ProfileEntry> = prof.two_to_two().collect();
    let vanished: Vec<usize> = (0..3)
        .filter(|&k| diagonals[k].concurrence < cfg.zero_threshold)
        .collect();
    if vanished.is_empty() {
        return Outcome::NotApplicable;
    }
    let mut max_dev = 0.0f64;
    for &k in &vanished {
        let (first, second) =
            crate::geometry::diagonal_pairs(&diagonals[k].cut).expect("profile diagonal");
        let sq = |p: usize| prof.one_to_rest(p).squared;
        max_dev = max_dev.max((sq(first[0]) - sq(first[1])).abs());
        max_dev = max_dev.max((sq(second[0]) - sq(second[1])).abs());
        let others: Vec<usize> = (0..3).filter(|&j| j != k).collect();
        max_dev = max_dev.max((diagonals[others[0]].squared - diagonals[others[1]].squared).abs());
    }
    identity_outcome(tolerances::COLLINEARITY, max_dev)
}

fn lu_outcome(
    cfg: &CampaignConfig,
    index: u64,
    state: &StateVector,
    prof: &ConcurrenceProfile,
) -> Result<Outcome> {
    let mut rng = sample_rng(cfg.ensemble.seed, index, stream::UNITARIES);
    let rotated = apply_random_local_unitaries(state, &mut rng)?;
    let rotated_prof = profile(&rotated)?;
    let mut max_dev = 0.0f64;
    for (a, b) in prof.entries().iter().zip(rotated_prof.entries().iter()) {
        max_dev = max_dev.max((a.squared - b.squared).abs());
    }
    for use_squared in [true, false] {
        let before = gme_from_profile(prof, use_squared)?;
        let after = gme_from_profile(&rotated_prof, use_squared)?;
        max_dev = max_dev.max((before - after).abs());
    }
    Ok(identity_outcome(cfg.tolerance, max_dev))
}

fn perm_outcome(
    cfg: &CampaignConfig,
    state: &StateVector,
    prof: &ConcurrenceProfile,
) -> Result<Outcome> {
    let f = gme_from_profile(prof, true)?;
    let f1 = gme_from_profile(prof, false)?;
    let mut max_dev = 0.0f64;
    for perm in permutations4() {
        let permuted = state.permute_qubits(&perm)?;
        let permuted_prof = profile(&permuted)?;
        max_dev = max_dev.max((gme_from_profile(&permuted_prof, true)? - f).abs());
        max_dev = max_dev.max((gme_from_profile(&permuted_prof, false)? - f1).abs());
    }
    Ok(identity_outcome(cfg.tolerance, max_dev))
}

fn identity_outcome(bound: f64, deviation: f64) -> Outcome {
    let margin = bound - deviation;
    if margin < 0.0 {
        Outcome::Violation(margin)
    } else {
        Outcome::Pass(margin)
    }
}

fn saturation_outcome(cfg: &CampaignConfig, prof: &ConcurrenceProfile) -> Outcome {
    let mut evaluated = false;
    let mut violated = false;
    let mut min = f64::INFINITY;
    for entry in prof.two_to_two() {
        let (first, second) =
            crate::geometry::diagonal_pairs(&entry.cut).expect("profile diagonal");
        for pair in [first, second] {
            let ei = prof.one_to_rest(pair[0]);
            let ej = prof.one_to_rest(pair[1]);
            let above = |c: f64| c > cfg.zero_threshold;
            let margin = match (above(ei.concurrence), above(ej.concurrence), above(entry.concurrence)) {
                (true, true, true) => {
                    let sum = ei.squared + ej.squared - entry.squared;
                    let diff = entry.squared - (ei.squared - ej.squared).abs();
                    let m = sum.min(diff);
                    if m <= tolerances::STRICT_MARGIN {
                        violated = true;
                    }
                    m
                }
                (false, true, true) => {
                    let dev = (ej.squared - entry.squared).abs();
                    let m = tolerances::COLLINEARITY - dev;
                    if m < 0.0 {
                        violated = true;
                    }
                    m
                }
                (true, false, true) => {
                    let dev = (ei.squared - entry.squared).abs();
                    let m = tolerances::COLLINEARITY - dev;
                    if m < 0.0 {
                        violated = true;
                    }
                    m
                }
                (true, true, false) => {
                    let dev = (ei.squared - ej.squared).abs();
                    let m = tolerances::COLLINEARITY - dev;
                    if m < 0.0 {
                        violated = true;
                    }
                    m
                }
                _ => continue,
            };
            evaluated = true;
            min = min.min(margin);
        }
    }
    if !evaluated {
        Outcome::NotApplicable
    } else if violated {
        Outcome::Violation(min)
    } else {
        Outcome::Pass(min)
    }
}

/// The 24 permutations of four parties in a fixed deterministic order.
pub fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for k in 0..24usize {
        let mut items = vec![0usize, 1, 2, 3];
        let mut perm = [0usize; 4];
        let mut rem = k;
        for (slot, fact) in [(0usize, 6usize), (1, 2), (2, 1)] {
            perm[slot] = items.remove(rem / fact);
            rem %= fact;
        }
        perm[3] = items[0];
        out.push(perm);
    }
    out
}
