//! Performance profiles.
//!
//! For each problem the fastest solver gets ratio 1 and every other solver
//! gets `elapsed / best`. A solver's curve at `tau` is the fraction of
//! problems it finished within `tau` times the best. Missing or failed runs
//! count as an infinite ratio.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Result, SpgemmError};

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileSample {
    pub problem: String,
    pub solver: String,
    /// `None` marks a failed or missing run.
    pub elapsed: Option<f64>,
}

impl ProfileSample {
    pub fn new(problem: impl Into<String>, solver: impl Into<String>, elapsed: Option<f64>) -> Self {
        Self { problem: problem.into(), solver: solver.into(), elapsed }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileCurve {
    pub solver: String,
    /// `(tau, fraction)` at each distinct finite ratio of this solver,
    /// ascending in `tau`.
    pub points: Vec<(f64, f64)>,
}

impl ProfileCurve {
    pub fn value_at(&self, tau: f64) -> f64 {
        self.points.iter().take_while(|p| p.0 <= tau).last().map_or(0.0, |p| p.1)
    }
}

/// Per-problem ratios `elapsed / best` for every solver seen anywhere.
pub fn performance_ratios(samples: &[ProfileSample]) -> Result<BTreeMap<String, BTreeMap<String, f64>>> {
    if samples.is_empty() {
        return Err(SpgemmError::InvalidArgument("no records to profile".into()));
    }
    let solvers: BTreeSet<&str> = samples.iter().map(|s| s.solver.as_str()).collect();
    let mut by_problem: BTreeMap<&str, BTreeMap<&str, f64>> = BTreeMap::new();
    for s in samples {
        let t = s.elapsed.filter(|t| t.is_finite() && *t > 0.0).unwrap_or(f64::INFINITY);
        let slot = by_problem.entry(&s.problem).or_default().entry(&s.solver).or_insert(f64::INFINITY);
        *slot = slot.min(t);
    }
    let mut out = BTreeMap::new();
    for (problem, times) in by_problem {
        let best = times.values().copied().fold(f64::INFINITY, f64::min);
        let ratios = solvers
            .iter()
            .map(|&s| {
                let t = times.get(s).copied().unwrap_or(f64::INFINITY);
                let r = if best.is_finite() { t / best } else { f64::INFINITY };
                (s.to_string(), r)
            })
            .collect();
        out.insert(problem.to_string(), ratios);
    }
    Ok(out)
}

pub fn performance_profile(samples: &[ProfileSample]) -> Result<Vec<ProfileCurve>> {
    let ratios = performance_ratios(samples)?;
    let nproblems = ratios.len() as f64;
    let solvers: BTreeSet<&String> = ratios.values().flat_map(|m| m.keys()).collect();
    let curves = solvers
        .into_iter()
        .map(|solver| {
            let mut rs: Vec<f64> = ratios.values().map(|m| m[solver]).filter(|r| r.is_finite()).collect();
            rs.sort_by(f64::total_cmp);
            let mut points: Vec<(f64, f64)> = Vec::new();
            for (k, &r) in rs.iter().enumerate() {
                let frac = (k + 1) as f64 / nproblems;
                match points.last_mut() {
                    Some(p) if p.0 == r => p.1 = frac,
                    _ => points.push((r, frac)),
                }
            }
            ProfileCurve { solver: solver.clone(), points }
        })
        .collect();
    Ok(curves)
}
