//! Compare the heap and hash cost estimates and ask the recipe table.

use spgemm::cost::estimate_cost;
use spgemm::partition::{compression_ratio, count_flop};
use spgemm::recipe::{select_algorithm, DegreePattern, InputStats, RecipeQuery, Scenario};
use spgemm::rmat::{er_spec, g500_spec, generate};
use spgemm::{spgemm, Algorithm, SpgemmConfig};

fn main() -> spgemm::Result<()> {
    for (name, spec, pattern) in [
        ("ER", er_spec(11, 4, 1), DegreePattern::Uniform),
        ("G500", g500_spec(11, 16, 1), DegreePattern::Skewed),
    ] {
        let a = generate(&spec)?;
        let profile = count_flop(&a, &a)?;
        let c = spgemm(&a, &a, &SpgemmConfig::new(Algorithm::Hash).sorted(false))?;
        let cr = compression_ratio(&profile, &c)?;
        for sorted in [true, false] {
            let est = estimate_cost(&a, &a, &profile, 1.5, sorted, 4)?;
            let q = RecipeQuery {
                scenario: Scenario::AxA,
                sorted,
                stats: InputStats::Synthetic { edge_factor: spec.edge_factor as f64, pattern },
            };
            let entry = select_algorithm(&q)?;
            println!(
                "{name:>4} ef={:<2} cr={cr:.2} sorted={sorted:<5} t_heap={:.3e} t_hash={:.3e} model picks {:<4} recipe picks {}",
                spec.edge_factor,
                est.t_heap,
                est.t_hash,
                est.cheaper().to_string(),
                entry.cell,
            );
        }
    }

    // Auto resolves through the recipe when the scenario is known.
    let a = generate(&g500_spec(10, 16, 2))?;
    let cfg = SpgemmConfig {
        recipe: Some(RecipeQuery {
            scenario: Scenario::AxA,
            sorted: true,
            stats: InputStats::Synthetic { edge_factor: 16.0, pattern: DegreePattern::Skewed },
        }),
        ..SpgemmConfig::new(Algorithm::Auto)
    };
    let report = spgemm::spgemm_with_report(&a, &a, &cfg)?;
    println!("auto ran {}", report.algorithm);
    Ok(())
}
