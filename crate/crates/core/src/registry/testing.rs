use std::time::{Duration, Instant};

use serde::Serialize;

use super::datum::Datum;
use super::eval::{EvalError, EvalOptions, Registry};

/// Runs per test case when timing an implementation; the median is kept.
pub const TIMING_RUNS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub test: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Datum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<EvalError>,
    pub median_nanos: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplementationReport {
    pub implementation: String,
    pub results: Vec<TestResult>,
    pub all_passed: bool,
    pub mean_nanos: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub function: String,
    pub implementations: Vec<ImplementationReport>,
    /// `agreement[i][j]`: fraction of tests on which implementations `i`
    /// and `j` produced the same successful result.
    pub agreement: Vec<Vec<f64>>,
}

impl EvalReport {
    pub fn implementation(&self, id: &str) -> Option<&ImplementationReport> {
        self.implementations.iter().find(|r| r.implementation == id)
    }
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

impl<E> Registry<E> {
    /// Executes every implementation of `fn_id` against every declared test,
    /// with the implementation pinned, the cache bypassed and
    /// postconditions checked.
    pub fn run_tests(&self, env: &E, fn_id: &str) -> Result<EvalReport, EvalError> {
        let entry = self
            .functions
            .get(fn_id)
            .ok_or_else(|| EvalError::UnknownFunction(fn_id.to_string()))?;
        let tests = &entry.def.tests;
        let mut reports = Vec::new();
        let mut outputs: Vec<Vec<Option<Datum>>> = Vec::new();
        for imp in entry.implementation_ids() {
            let options = EvalOptions {
                check_postconditions: Some(true),
                ..EvalOptions::default()
            }
            .pin(fn_id, imp)
            .no_cache();
            let mut results = Vec::new();
            for (i, case) in tests.iter().enumerate() {
                let mut times = Vec::with_capacity(TIMING_RUNS);
                let mut first = None;
                for _ in 0..TIMING_RUNS {
                    let ev = self.evaluator(env, &options);
                    let start = Instant::now();
                    let out = case
                        .args
                        .iter()
                        .map(|a| ev.resolve_value_with(a, true))
                        .collect::<Result<Vec<_>, _>>()
                        .and_then(|args| ev.call(fn_id, args));
                    times.push(start.elapsed());
                    first.get_or_insert(out);
                }
                let out = first.expect("at least one run");
                let expected = self
                    .evaluator(env, &options)
                    .resolve_value_with(&case.expected, true);
                let passed = matches!((&out, &expected), (Ok(a), Ok(b)) if a == b);
                let (output, error) = match out {
                    Ok(d) => (Some(d), None),
                    Err(e) => (None, Some(e)),
                };
                results.push(TestResult {
                    test: i,
                    passed,
                    output,
                    error,
                    median_nanos: u64::try_from(median(times).as_nanos()).unwrap_or(u64::MAX),
                });
            }
            let mean_nanos = if results.is_empty() {
                0.0
            } else {
                results.iter().map(|r| r.median_nanos as f64).sum::<f64>() / results.len() as f64
            };
            outputs.push(results.iter().map(|r| r.output.clone()).collect());
            reports.push(ImplementationReport {
                implementation: imp.to_string(),
                all_passed: results.iter().all(|r| r.passed),
                results,
                mean_nanos,
            });
        }
        let n = reports.len();
        let mut agreement = vec![vec![1.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let same = outputs[i]
                    .iter()
                    .zip(&outputs[j])
                    .filter(|(a, b)| a.is_some() && a == b)
                    .count();
                let frac = if tests.is_empty() { 1.0 } else { same as f64 / tests.len() as f64 };
                agreement[i][j] = frac;
                agreement[j][i] = frac;
            }
        }
        Ok(EvalReport {
            function: fn_id.to_string(),
            implementations: reports,
            agreement,
        })
    }

    /// Picks the fastest implementation that passes every test (ties broken
    /// by id) and makes it the default for later evaluations.
    pub fn select_implementation(&self, env: &E, fn_id: &str) -> Result<String, EvalError> {
        let report = self.run_tests(env, fn_id)?;
        let best = report
            .implementations
            .iter()
            .filter(|r| r.all_passed)
            .min_by(|a, b| {
                a.mean_nanos
                    .total_cmp(&b.mean_nanos)
                    .then_with(|| a.implementation.cmp(&b.implementation))
            })
            .ok_or_else(|| {
                EvalError::domain(
                    "NO_PASSING_IMPLEMENTATION",
                    format!("no implementation of `{fn_id}` passes all of its tests"),
                )
            })?;
        self.set_preferred(fn_id, &best.implementation);
        Ok(best.implementation.clone())
    }
}
