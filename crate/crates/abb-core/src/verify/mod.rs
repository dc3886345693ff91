//! Verification harness: seeded statement checks, exhaustive enumerations,
//! censuses, point-set classification, and a cross-parameter demo.
//!
//! A check is addressed by an opaque [`StatementId`] plus field parameters
//! and a tower level `k`.  Sampled checks draw reproducible configurations
//! from a seeded random stream; exhaustive checks enumerate a full
//! configuration space.  Every verified unit is tallied into a
//! serialisable [`Report`] whose failures carry replayable witnesses.

mod actions;
mod census;
mod classify;
mod lines;
mod planes;
mod scrolls;
mod spreads;
mod support;

pub use census::{census, CensusKind, CensusReport};
pub use classify::{classify_point_set, Classification};

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::FieldSpec;

// ------------------------------------------------------------- statements

/// Opaque identifier of a checkable statement.
///
/// The labels are stable handles for the harness; [`StatementId::description`]
/// states what each check verifies.
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StatementId {
    L1_1,
    L2_1,
    L2_2,
    T2_3,
    L2_5,
    T2_6,
    C2_7,
    R2_8,
    C2_9,
    T2_10,
    C2_11,
    T3_1,
    L3_2,
    L3_3,
    L3_4,
    T3_5,
    R2,
    R4,
}

impl StatementId {
    /// Every statement, in canonical order.
    pub const ALL: [StatementId; 18] = [
        StatementId::L1_1,
        StatementId::L2_1,
        StatementId::L2_2,
        StatementId::T2_3,
        StatementId::L2_5,
        StatementId::T2_6,
        StatementId::C2_7,
        StatementId::R2_8,
        StatementId::C2_9,
        StatementId::T2_10,
        StatementId::C2_11,
        StatementId::T3_1,
        StatementId::L3_2,
        StatementId::L3_3,
        StatementId::L3_4,
        StatementId::T3_5,
        StatementId::R2,
        StatementId::R4,
    ];

    /// The canonical textual label.
    pub fn as_str(self) -> &'static str {
        match self {
            StatementId::L1_1 => "L1.1",
            StatementId::L2_1 => "L2.1",
            StatementId::L2_2 => "L2.2",
            StatementId::T2_3 => "T2.3",
            StatementId::L2_5 => "L2.5",
            StatementId::T2_6 => "T2.6",
            StatementId::C2_7 => "C2.7",
            StatementId::R2_8 => "R2.8",
            StatementId::C2_9 => "C2.9",
            StatementId::T2_10 => "T2.10",
            StatementId::C2_11 => "C2.11",
            StatementId::T3_1 => "T3.1",
            StatementId::L3_2 => "L3.2",
            StatementId::L3_3 => "L3.3",
            StatementId::L3_4 => "L3.4",
            StatementId::T3_5 => "T3.5",
            StatementId::R2 => "R2",
            StatementId::R4 => "R4",
        }
    }

    /// One-line summary of what the check verifies.
    pub fn description(self) -> &'static str {
        match self {
            StatementId::L1_1 => {
                "the stabiliser actions commute with the point correspondence and the \
                 embedding, and preserve the spread and every subspread family"
            }
            StatementId::L2_1 => {
                "a canonical subline is tangent at exactly the levels divisible by its \
                 parameter's degree, the smallest being the degree itself"
            }
            StatementId::L2_2 => {
                "every subline not inside the line at infinity reduces under the \
                 stabiliser to a canonical one-parameter form"
            }
            StatementId::T2_3 => {
                "tangent sublines correspond exactly to affine subspaces whose space \
                 at infinity is a subspread element"
            }
            StatementId::L2_5 => {
                "three affine points together with the conjugate generators of any \
                 higher-level element over their infinite line fail general position"
            }
            StatementId::T2_6 => {
                "external sublines correspond exactly to rational normal curves whose \
                 extensions meet the indicator set in conjugate generator points"
            }
            StatementId::C2_7 => {
                "an external subline over an intermediate field maps to an arc whose \
                 point triples span curves inside the image"
            }
            StatementId::R2_8 => {
                "a line point set closed under the sublines of its triples is itself \
                 a subline"
            }
            StatementId::C2_9 => {
                "indicator-compatible curve closure characterises the images of \
                 external sublines over intermediate fields"
            }
            StatementId::T2_10 => {
                "the four characterisations of spread subsets carried by sublines of \
                 the line at infinity are equivalent"
            }
            StatementId::C2_11 => {
                "two subspread elements in distinct members span a space met by \
                 exactly a subline's worth of subspread elements"
            }
            StatementId::T3_1 => {
                "secant subplanes correspond exactly to affine subspaces whose trace \
                 meets the spread in subspread elements"
            }
            StatementId::L3_2 => {
                "every subplane reduces under the stabiliser to a canonical \
                 two-parameter form classifying its infinite trace"
            }
            StatementId::L3_3 => {
                "the smallest secant subplane containing a canonical tangent subplane \
                 sits at the level of the parameter's degree"
            }
            StatementId::L3_4 => {
                "two conjugate points on extended curves lie on at most one scroll \
                 through both curves, and it carries all their conjugates"
            }
            StatementId::T3_5 => {
                "tangent subplanes correspond exactly to scrolls over an \
                 indicator-anchored curve pair of consecutive degrees"
            }
            StatementId::R2 => {
                "extended curves of proper-subfield parameters miss every transversal \
                 line of the top-level indicator set"
            }
            StatementId::R4 => {
                "the projected quadric image of a plane admits exactly one curve \
                 through each of its point pairs"
            }
        }
    }

    /// Whether the check's content depends on the level parameter `k`.
    pub fn uses_k(self) -> bool {
        !matches!(
            self,
            StatementId::L1_1 | StatementId::R2_8 | StatementId::L3_4 | StatementId::R4
        )
    }

    /// Position in [`StatementId::ALL`], used to derive sampling streams.
    pub(crate) fn index(self) -> usize {
        StatementId::ALL
            .iter()
            .position(|&s| s == self)
            .expect("every statement is listed")
    }
}

impl fmt::Display for StatementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StatementId {
    type Err = Error;

    fn from_str(s: &str) -> Result<StatementId> {
        StatementId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let valid: Vec<&str> = StatementId::ALL.iter().map(|id| id.as_str()).collect();
                Error::InvalidArgument(format!(
                    "unknown statement id {s:?}; valid ids: {}",
                    valid.join(", ")
                ))
            })
    }
}

// ------------------------------------------------------------ check setup

/// How a check explores its configuration space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Seeded random configurations.
    Sample,
    /// Full enumeration of the configuration space.
    Exhaustive,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sample => "sample",
            Mode::Exhaustive => "exhaustive",
        })
    }
}

/// Overall outcome of a check or census.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

/// Field and level parameters echoed into reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSummary {
    pub p: u16,
    pub h: u8,
    pub n: u8,
    pub k: u8,
}

/// Full parameter set of one check invocation.
#[derive(Clone, Debug)]
pub struct CheckParams {
    pub statement: StatementId,
    pub spec: FieldSpec,
    pub k: u8,
    pub mode: Mode,
    pub samples: u32,
    pub seed: u64,
}

impl CheckParams {
    fn q(&self) -> u128 {
        (self.spec.p as u128).pow(self.spec.h as u32)
    }

    /// Validates the argument ranges and the statement's hypotheses.
    ///
    /// Structural problems (a level not dividing `n`, zero samples) are
    /// `InvalidArgument`; parameter combinations outside a statement's
    /// hypotheses are `Hypothesis`; an exhaustive request without a
    /// supported enumeration is `Unsupported`.
    pub fn validate(&self) -> Result<()> {
        let n = self.spec.n;
        let k = self.k;
        if k == 0 || k > n || n % k != 0 {
            return Err(Error::InvalidArgument(format!(
                "level k = {k} must be a divisor of n = {n}"
            )));
        }
        if self.mode == Mode::Sample && self.samples == 0 {
            return Err(Error::InvalidArgument(
                "sampled checks need at least one sample".into(),
            ));
        }
        if n < 2 {
            return Err(Error::Hypothesis(
                "the representation needs a tower of height n >= 2".into(),
            ));
        }
        let q = self.q();
        let need = |ok: bool, msg: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::Hypothesis(format!(
                    "{} requires {msg}",
                    self.statement
                )))
            }
        };
        match self.statement {
            StatementId::L1_1 | StatementId::L2_1 | StatementId::T2_3 => {}
            StatementId::L2_2 | StatementId::C2_11 | StatementId::T3_1 | StatementId::L3_2 => {
                need(k < n, "k < n")?;
            }
            StatementId::L2_5 => {
                need(k >= 2 && k < n, "2 <= k < n")?;
            }
            StatementId::T2_6 => {
                need(k >= 2, "k >= 2")?;
                need(q >= n as u128, "q >= n")?;
            }
            StatementId::C2_7 => {
                need(k < n, "k < n")?;
                need(q >= n as u128, "q >= n")?;
            }
            StatementId::R2_8 => {
                need(q > 2, "q > 2")?;
            }
            StatementId::C2_9 => {
                need(k < n, "k < n")?;
                need(q >= n as u128, "q >= n")?;
                need(n > 2, "n > 2")?;
                need(is_prime_power(n), "n to be a prime power")?;
            }
            StatementId::T2_10 => {
                need(q > 2, "q > 2")?;
                need(k < n, "k < n")?;
            }
            StatementId::L3_3 => {
                need(k >= 2, "k >= 2")?;
            }
            StatementId::L3_4 => {
                need(n >= 3, "n >= 3")?;
            }
            StatementId::T3_5 => {
                need(k >= 2, "k >= 2")?;
                need(q >= n as u128, "q >= n")?;
            }
            StatementId::R2 => {
                need(!is_prime(n), "a composite n")?;
                need(k >= 2 && k < n, "2 <= k < n")?;
                need(k as u128 <= q, "k <= q")?;
            }
            StatementId::R4 => {
                need(n >= 3, "n >= 3")?;
            }
        }
        if self.mode == Mode::Exhaustive && !exhaustive_supported(self.statement, &self.spec, k) {
            return Err(Error::Unsupported(format!(
                "no exhaustive enumeration of {} at p = {}, h = {}, n = {}, k = {}",
                self.statement, self.spec.p, self.spec.h, self.spec.n, k
            )));
        }
        Ok(())
    }

    fn summary(&self) -> ParamSummary {
        ParamSummary {
            p: self.spec.p,
            h: self.spec.h,
            n: self.spec.n,
            k: self.k,
        }
    }
}

/// Whether a full enumeration of the statement's configuration space stays
/// within desk scale at these parameters.
pub fn exhaustive_supported(statement: StatementId, spec: &FieldSpec, k: u8) -> bool {
    let q = (spec.p as u128).pow(spec.h as u32);
    let n = spec.n;
    if n < 2 || k == 0 || k > n || n % k != 0 {
        return false;
    }
    let qn = q.pow(n as u32);
    let qk = q.pow(k as u32);
    match statement {
        StatementId::L1_1
        | StatementId::L2_2
        | StatementId::L2_5
        | StatementId::C2_7
        | StatementId::T3_1
        | StatementId::L3_2
        | StatementId::L3_4
        | StatementId::T3_5 => false,
        // Sweep of the elements of exact degree k.
        StatementId::L2_1 | StatementId::L3_3 | StatementId::R2 => true,
        // Per-line subline fits: (number of lines) × (pairs per line).
        StatementId::T2_3 => (qn * qn + qn) * (qn * (qn - 1) / 2) <= 500_000,
        // Triples of affine points in a fixed cover flat.
        StatementId::T2_6 => qn <= 32,
        // Quadruples of affine points in a fixed cover flat, with existence
        // sweeps for curves of degree q - 1 and q available only over F_3.
        StatementId::C2_9 => qn <= 27,
        // Line point triples on the canonical carrier line.
        StatementId::R2_8 => qn <= 16,
        // Subsets of the spread of the subline's size.
        StatementId::T2_10 => binom_capped(qn + 1, qk + 1, 10_001) <= 10_000,
        // Pairs of subspread elements in distinct members.
        StatementId::C2_11 => {
            let dk = (qn * qn - 1) / (qk - 1);
            let per_member = (qn - 1) / (qk - 1);
            dk * (dk - per_member) / 2 <= 20_000
        }
        // Parameter pairs with an independence constraint.
        StatementId::R4 => (qn - q) * (qn - q * q) <= 1_000,
    }
}

fn is_prime(n: u8) -> bool {
    n >= 2 && (2..n).all(|d| n % d != 0)
}

fn is_prime_power(n: u8) -> bool {
    let mut m = n;
    if m < 2 {
        return false;
    }
    for d in 2..=m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            return m == 1;
        }
    }
    true
}

/// Binomial coefficient, capped at `cap` to avoid overflow.
fn binom_capped(n: u128, k: u128, cap: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
        if r >= cap {
            return cap;
        }
    }
    r
}

// ---------------------------------------------------------------- reports

/// Outcome of one check invocation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    /// Statement label.
    pub statement: String,
    /// Field and level parameters.
    pub params: ParamSummary,
    /// Exploration mode.
    pub mode: Mode,
    /// Seed of the sampling streams.
    pub seed: u64,
    /// Number of verified units.
    pub checked: u64,
    /// Units that passed.
    pub passed: u64,
    /// Units that failed.
    pub failed: u64,
    /// Replayable failure descriptions (capped).
    pub witnesses: Vec<serde_json::Value>,
    /// Wall-clock duration of the check.
    pub elapsed_ms: u64,
    /// Overall outcome.
    pub verdict: Verdict,
}

impl Report {
    /// One-line human-readable summary.
    pub fn text_line(&self) -> String {
        format!(
            "{} p={} h={} n={} k={} {} seed={}: {} (checked {}, failed {}, {} ms)",
            self.statement,
            self.params.p,
            self.params.h,
            self.params.n,
            self.params.k,
            self.mode,
            self.seed,
            self.verdict,
            self.checked,
            self.failed,
            self.elapsed_ms
        )
    }
}

/// Maximum number of retained failure witnesses per report.
const WITNESS_CAP: usize = 16;

/// Accumulator for verified units.
pub(crate) struct Tally {
    checked: u64,
    passed: u64,
    failed: u64,
    witnesses: Vec<serde_json::Value>,
}

impl Tally {
    pub(crate) fn new() -> Tally {
        Tally {
            checked: 0,
            passed: 0,
            failed: 0,
            witnesses: Vec::new(),
        }
    }

    /// Records one verified unit; the witness closure is evaluated only on
    /// failure.
    pub(crate) fn case(&mut self, ok: bool, witness: impl FnOnce() -> serde_json::Value) {
        self.checked += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.witnesses.len() < WITNESS_CAP {
                self.witnesses.push(witness());
            }
        }
    }

    /// Records a run-level fact: it contributes to the counts only when it
    /// fails, so aggregate facts do not inflate the unit count of passing
    /// runs.
    pub(crate) fn global_fact(&mut self, ok: bool, witness: impl FnOnce() -> serde_json::Value) {
        if !ok {
            self.checked += 1;
            self.failed += 1;
            if self.witnesses.len() < WITNESS_CAP {
                self.witnesses.push(witness());
            }
        }
    }

    /// Attaches a demonstration object to the report irrespective of the
    /// verdict; used by the checks whose statements exhibit a configuration.
    pub(crate) fn exhibit(&mut self, value: serde_json::Value) {
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(value);
        }
    }

    fn into_report(self, params: &CheckParams, elapsed: Duration) -> Report {
        Report {
            statement: params.statement.as_str().to_string(),
            params: params.summary(),
            mode: params.mode,
            seed: params.seed,
            checked: self.checked,
            passed: self.passed,
            failed: self.failed,
            verdict: if self.failed == 0 {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            witnesses: self.witnesses,
            elapsed_ms: elapsed.as_millis() as u64,
        }
    }
}

// --------------------------------------------------------------- dispatch

/// Runs one statement check and collects its report.
pub fn run_check(params: &CheckParams) -> Result<Report> {
    params.validate()?;
    let ctx = params.spec.context()?;
    let started = Instant::now();
    let mut tally = Tally::new();
    match params.statement {
        StatementId::L1_1 => actions::check_l1_1(&ctx, params, &mut tally)?,
        StatementId::L2_1 => lines::check_l2_1(&ctx, params, &mut tally)?,
        StatementId::L2_2 => lines::check_l2_2(&ctx, params, &mut tally)?,
        StatementId::T2_3 => lines::check_t2_3(&ctx, params, &mut tally)?,
        StatementId::L2_5 => lines::check_l2_5(&ctx, params, &mut tally)?,
        StatementId::T2_6 => lines::check_t2_6(&ctx, params, &mut tally)?,
        StatementId::C2_7 => lines::check_c2_7(&ctx, params, &mut tally)?,
        StatementId::R2_8 => lines::check_r2_8(&ctx, params, &mut tally)?,
        StatementId::C2_9 => lines::check_c2_9(&ctx, params, &mut tally)?,
        StatementId::T2_10 => spreads::check_t2_10(&ctx, params, &mut tally)?,
        StatementId::C2_11 => spreads::check_c2_11(&ctx, params, &mut tally)?,
        StatementId::T3_1 => planes::check_t3_1(&ctx, params, &mut tally)?,
        StatementId::L3_2 => planes::check_l3_2(&ctx, params, &mut tally)?,
        StatementId::L3_3 => planes::check_l3_3(&ctx, params, &mut tally)?,
        StatementId::L3_4 => scrolls::check_l3_4(&ctx, params, &mut tally)?,
        StatementId::T3_5 => scrolls::check_t3_5(&ctx, params, &mut tally)?,
        StatementId::R2 => scrolls::check_r2(&ctx, params, &mut tally)?,
        StatementId::R4 => scrolls::check_r4(&ctx, params, &mut tally)?,
    }
    Ok(tally.into_report(params, started.elapsed()))
}

// ------------------------------------------------------------------- demo

/// The demo's field parameter grid as `(p, h, n)` triples.
pub const DEMO_GRID: [(u16, u8, u8); 7] = [
    (3, 1, 2),
    (2, 2, 2),
    (5, 1, 2),
    (3, 1, 3),
    (2, 2, 3),
    (3, 1, 4),
    (2, 2, 4),
];

/// Collected results of a demo run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DemoOutcome {
    pub reports: Vec<Report>,
    pub censuses: Vec<CensusReport>,
}

fn demo_samples(statement: StatementId, spec: &FieldSpec) -> u32 {
    let q = (spec.p as u128).pow(spec.h as u32);
    let qn = q.pow(spec.n as u32);
    if statement == StatementId::L1_1 && qn > 81 {
        return 5;
    }
    if qn <= 16 {
        50
    } else if qn <= 27 {
        40
    } else if qn <= 81 {
        25
    } else {
        10
    }
}

enum Job {
    Check(CheckParams),
    Census {
        spec: FieldSpec,
        kind: CensusKind,
        k: u8,
    },
}

enum JobOutput {
    Check(Report),
    Census(CensusReport),
}

/// Runs every supported check and census over [`DEMO_GRID`] under one seed.
///
/// Jobs are distributed over worker threads (`ABB_THREADS` overrides the
/// worker count); the output order is independent of scheduling.
pub fn demo(seed: u64) -> Result<DemoOutcome> {
    let mut jobs = Vec::new();
    for &statement in StatementId::ALL.iter() {
        for &(p, h, n) in DEMO_GRID.iter() {
            let spec = FieldSpec::new(p, h, n);
            let levels: Vec<u8> = if statement.uses_k() {
                support::divisors(n)
            } else {
                vec![1]
            };
            for k in levels {
                let mode = if exhaustive_supported(statement, &spec, k) {
                    Mode::Exhaustive
                } else {
                    Mode::Sample
                };
                let params = CheckParams {
                    statement,
                    spec: spec.clone(),
                    k,
                    mode,
                    samples: demo_samples(statement, &spec),
                    seed,
                };
                if params.validate().is_ok() {
                    jobs.push(Job::Check(params));
                }
            }
        }
    }
    for &kind in CensusKind::ALL.iter() {
        for &(p, h, n) in DEMO_GRID.iter() {
            let spec = FieldSpec::new(p, h, n);
            for k in census::demo_levels(kind, &spec) {
                jobs.push(Job::Census {
                    spec: spec.clone(),
                    kind,
                    k,
                });
            }
        }
    }
    run_jobs(jobs)
}

fn worker_count(jobs: usize) -> usize {
    let configured = std::env::var("ABB_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t > 0);
    let available = configured.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    available.max(1).min(jobs.max(1))
}

fn run_jobs(jobs: Vec<Job>) -> Result<DemoOutcome> {
    let slots: Vec<Mutex<Option<Result<JobOutput>>>> =
        jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = worker_count(jobs.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= jobs.len() {
                    break;
                }
                let out = match &jobs[i] {
                    Job::Check(params) => run_check(params).map(JobOutput::Check),
                    Job::Census { spec, kind, k } => {
                        census(spec, *kind, *k).map(JobOutput::Census)
                    }
                };
                *slots[i].lock().expect("job slot lock") = Some(out);
            });
        }
    });

    let mut reports = Vec::new();
    let mut censuses = Vec::new();
    for slot in slots {
        let out = slot
            .into_inner()
            .expect("job slot lock")
            .expect("every job index was claimed by a worker");
        match out? {
            JobOutput::Check(r) => reports.push(r),
            JobOutput::Census(c) => censuses.push(c),
        }
    }
    Ok(DemoOutcome { reports, censuses })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statement_ids_round_trip_through_strings() {
        for id in StatementId::ALL {
            let back: StatementId = id.as_str().parse().expect("known id parses");
            assert_eq!(back, id, "parsing the printed label returns the same id");
        }
        assert!(
            "T9.9".parse::<StatementId>().is_err(),
            "unknown labels are rejected"
        );
        let err = "nope".parse::<StatementId>().unwrap_err().to_string();
        assert!(
            err.contains("L1.1") && err.contains("R4"),
            "the rejection lists the valid ids, got {err}"
        );
    }

    #[test]
    fn validate_classifies_errors_by_kind() {
        let base = CheckParams {
            statement: StatementId::T2_6,
            spec: FieldSpec::new(3, 1, 3),
            k: 3,
            mode: Mode::Sample,
            samples: 5,
            seed: 0,
        };
        assert!(base.validate().is_ok(), "the base parameters are valid");

        let bad_k = CheckParams { k: 2, ..base.clone() };
        assert!(
            matches!(bad_k.validate(), Err(Error::InvalidArgument(_))),
            "a level not dividing n is a usage error"
        );

        let bad_hyp = CheckParams {
            statement: StatementId::T2_6,
            spec: FieldSpec::new(3, 1, 4),
            k: 4,
            ..base.clone()
        };
        assert!(
            matches!(bad_hyp.validate(), Err(Error::Hypothesis(_))),
            "q < n violates the statement hypothesis"
        );

        let bad_exh = CheckParams {
            statement: StatementId::L1_1,
            k: 1,
            mode: Mode::Exhaustive,
            ..base.clone()
        };
        assert!(
            matches!(bad_exh.validate(), Err(Error::Unsupported(_))),
            "an unsupported exhaustive request is refused, not silently sampled"
        );

        let no_samples = CheckParams { samples: 0, ..base };
        assert!(
            matches!(no_samples.validate(), Err(Error::InvalidArgument(_))),
            "zero samples in sample mode is a usage error"
        );
    }

    #[test]
    fn exhaustive_support_matches_the_documented_cells() {
        let f92 = FieldSpec::new(3, 1, 2);
        assert!(exhaustive_supported(StatementId::T2_3, &f92, 1));
        assert!(exhaustive_supported(StatementId::T2_10, &f92, 1));
        assert!(exhaustive_supported(StatementId::R2_8, &f92, 1));
        let f27 = FieldSpec::new(3, 1, 3);
        assert!(exhaustive_supported(StatementId::T2_6, &f27, 3));
        assert!(exhaustive_supported(StatementId::C2_9, &f27, 1));
        assert!(exhaustive_supported(StatementId::R4, &f27, 1));
        assert!(
            !exhaustive_supported(StatementId::T2_10, &f27, 1),
            "the level-1 subset space at n = 3 is beyond the subset gate"
        );
        let big = FieldSpec::new(2, 2, 4);
        assert!(!exhaustive_supported(StatementId::T2_6, &big, 4));
        assert!(!exhaustive_supported(StatementId::C2_9, &big, 2));
    }

    #[test]
    fn tally_counts_cases_and_global_facts() {
        let mut t = Tally::new();
        t.case(true, || unreachable!("witness closures run only on failure"));
        t.case(false, || serde_json::json!({"reason": "forced"}));
        t.global_fact(true, || unreachable!("passing facts do not count"));
        t.global_fact(false, || serde_json::json!({"fact": "broken"}));
        assert_eq!(t.checked, 3, "two cases plus one failing fact");
        assert_eq!(t.passed, 1);
        assert_eq!(t.failed, 2);
        assert_eq!(t.witnesses.len(), 2);
    }
}
