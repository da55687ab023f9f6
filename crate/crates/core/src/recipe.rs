//! Empirical kernel-selection table.
//!
//! Real inputs are classified by compression ratio (high when > 2),
//! synthetic inputs by edge factor (dense when > 8) and degree pattern. Cells
//! name the winning code as measured on a many-core machine; codes this
//! library does not ship are mapped onto its own kernels:
//!
//! | cell            | kernel                    |
//! |-----------------|---------------------------|
//! | `Hash`          | hash, sortedness as asked |
//! | `HashVec`       | chunked hash              |
//! | `Heap`          | heap (sorted)             |
//! | `MKL`           | hash                      |
//! | `MKL-inspector` | hash, unsorted            |

use crate::engine::Algorithm;
use crate::error::{Result, SpgemmError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Square matrix times itself.
    AxA,
    /// Lower times upper triangle (triangle counting).
    LxU,
    /// Square matrix times a tall-skinny one.
    TallSkinny,
}

impl std::str::FromStr for Scenario {
    type Err = SpgemmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "axa" | "a2" | "square" => Ok(Self::AxA),
            "lxu" | "triangle" => Ok(Self::LxU),
            "tallskinny" => Ok(Self::TallSkinny),
            _ => Err(SpgemmError::NoRecipe(format!("unknown scenario {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DegreePattern {
    Uniform,
    Skewed,
}

impl std::str::FromStr for DegreePattern {
    type Err = SpgemmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" | "er" => Ok(Self::Uniform),
            "skewed" | "g500" => Ok(Self::Skewed),
            _ => Err(SpgemmError::InvalidArgument(format!("unknown degree pattern {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InputStats {
    Real { compression_ratio: f64 },
    Synthetic { edge_factor: f64, pattern: DegreePattern },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecipeQuery {
    pub scenario: Scenario,
    pub sorted: bool,
    pub stats: InputStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecipeEntry {
    /// Table cell as printed.
    pub cell: &'static str,
    pub kernel: Algorithm,
    pub sort_output: bool,
}

const HIGH_CR: f64 = 2.0;
const DENSE_EF: f64 = 8.0;

fn cell(scenario: Scenario, sorted: bool, stats: InputStats) -> Option<&'static str> {
    use DegreePattern::*;
    use Scenario::*;
    match stats {
        InputStats::Real { compression_ratio } => {
            let high = compression_ratio > HIGH_CR;
            match (scenario, sorted, high) {
                (AxA, true, _) => Some("Hash"),
                (AxA, false, true) => Some("MKL-inspector"),
                (AxA, false, false) => Some("Hash"),
                (LxU, true, true) => Some("Hash"),
                (LxU, true, false) => Some("Heap"),
                _ => None,
            }
        }
        InputStats::Synthetic { edge_factor, pattern } => {
            let dense = edge_factor > DENSE_EF;
            match (scenario, sorted, dense, pattern) {
                (AxA, true, true, Skewed) => Some("Hash"),
                (AxA, true, _, _) => Some("Heap"),
                (AxA, false, true, Skewed) => Some("Hash"),
                (AxA, false, _, _) => Some("HashVec"),
                (TallSkinny, true, false, Skewed) => Some("Hash"),
                (TallSkinny, true, true, Skewed) => Some("HashVec"),
                (TallSkinny, false, _, Skewed) => Some("Hash"),
                _ => None,
            }
        }
    }
}

fn map_cell(name: &'static str, sorted: bool) -> RecipeEntry {
    let (kernel, sort_output) = match name {
        "Heap" => (Algorithm::Heap, true),
        "HashVec" => (Algorithm::HashChunked, sorted),
        "MKL-inspector" => (Algorithm::Hash, false),
        _ => (Algorithm::Hash, sorted),
    };
    RecipeEntry { cell: name, kernel, sort_output }
}

pub fn select_algorithm(query: &RecipeQuery) -> Result<RecipeEntry> {
    let name = cell(query.scenario, query.sorted, query.stats).ok_or_else(|| {
        SpgemmError::NoRecipe(format!(
            "{:?} {} {:?}",
            query.scenario,
            if query.sorted { "sorted" } else { "unsorted" },
            query.stats
        ))
    })?;
    let entry = map_cell(name, query.sorted);
    log::info!("recipe cell {:?} -> {} (sorted output: {})", entry.cell, entry.kernel, entry.sort_output);
    Ok(entry)
}

/// Every populated cell: a representative query and the expected cell text.
pub fn populated_cells() -> Vec<(RecipeQuery, &'static str)> {
    use DegreePattern::*;
    use Scenario::*;
    let real = |scenario, sorted, cr| RecipeQuery { scenario, sorted, stats: InputStats::Real { compression_ratio: cr } };
    let syn = |scenario, sorted, ef, pattern| RecipeQuery {
        scenario,
        sorted,
        stats: InputStats::Synthetic { edge_factor: ef, pattern },
    };
    vec![
        (real(AxA, true, 5.0), "Hash"),
        (real(AxA, true, 1.5), "Hash"),
        (real(AxA, false, 5.0), "MKL-inspector"),
        (real(AxA, false, 1.5), "Hash"),
        (real(LxU, true, 5.0), "Hash"),
        (real(LxU, true, 1.5), "Heap"),
        (syn(AxA, true, 4.0, Uniform), "Heap"),
        (syn(AxA, true, 4.0, Skewed), "Heap"),
        (syn(AxA, true, 16.0, Uniform), "Heap"),
        (syn(AxA, true, 16.0, Skewed), "Hash"),
        (syn(AxA, false, 4.0, Uniform), "HashVec"),
        (syn(AxA, false, 4.0, Skewed), "HashVec"),
        (syn(AxA, false, 16.0, Uniform), "HashVec"),
        (syn(AxA, false, 16.0, Skewed), "Hash"),
        (syn(TallSkinny, true, 4.0, Skewed), "Hash"),
        (syn(TallSkinny, true, 16.0, Skewed), "HashVec"),
        (syn(TallSkinny, false, 4.0, Skewed), "Hash"),
        (syn(TallSkinny, false, 16.0, Skewed), "Hash"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_lookups() {
        let q = RecipeQuery { scenario: Scenario::AxA, sorted: true, stats: InputStats::Real { compression_ratio: 5.0 } };
        assert_eq!(select_algorithm(&q).unwrap().cell, "Hash");
        let q = RecipeQuery { scenario: Scenario::LxU, sorted: true, stats: InputStats::Real { compression_ratio: 1.5 } };
        let e = select_algorithm(&q).unwrap();
        assert_eq!((e.cell, e.kernel), ("Heap", Algorithm::Heap));
        let q = RecipeQuery {
            scenario: Scenario::AxA,
            sorted: true,
            stats: InputStats::Synthetic { edge_factor: 16.0, pattern: DegreePattern::Skewed },
        };
        assert_eq!(select_algorithm(&q).unwrap().cell, "Hash");
    }

    #[test]
    fn boundaries_are_inclusive_on_the_low_side() {
        let q = |cr| RecipeQuery { scenario: Scenario::LxU, sorted: true, stats: InputStats::Real { compression_ratio: cr } };
        assert_eq!(select_algorithm(&q(2.0)).unwrap().cell, "Heap");
        assert_eq!(select_algorithm(&q(2.01)).unwrap().cell, "Hash");
        let s = |ef| RecipeQuery {
            scenario: Scenario::AxA,
            sorted: false,
            stats: InputStats::Synthetic { edge_factor: ef, pattern: DegreePattern::Skewed },
        };
        assert_eq!(select_algorithm(&s(8.0)).unwrap().cell, "HashVec");
        assert_eq!(select_algorithm(&s(9.0)).unwrap().cell, "Hash");
    }

    #[test]
    fn mapping_of_vendor_cells() {
        let q = RecipeQuery { scenario: Scenario::AxA, sorted: false, stats: InputStats::Real { compression_ratio: 3.0 } };
        let e = select_algorithm(&q).unwrap();
        assert_eq!((e.cell, e.kernel, e.sort_output), ("MKL-inspector", Algorithm::Hash, false));
    }

    #[test]
    fn empty_cells_and_unknown_scenarios() {
        let q = RecipeQuery {
            scenario: Scenario::TallSkinny,
            sorted: true,
            stats: InputStats::Synthetic { edge_factor: 4.0, pattern: DegreePattern::Uniform },
        };
        assert!(select_algorithm(&q).is_err());
        let q = RecipeQuery { scenario: Scenario::LxU, sorted: false, stats: InputStats::Real { compression_ratio: 3.0 } };
        assert!(select_algorithm(&q).is_err());
        assert!("bfs".parse::<Scenario>().is_err());
        assert_eq!("LxU".parse::<Scenario>().unwrap(), Scenario::LxU);
    }

    #[test]
    fn all_populated_cells_resolve() {
        for (q, expect) in populated_cells() {
            assert_eq!(select_algorithm(&q).unwrap().cell, expect, "{q:?}");
        }
    }
}
