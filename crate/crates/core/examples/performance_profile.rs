//! Time a small sweep and print performance-profile curves.

use spgemm::bench::{density_suite, performance_profile, profile_samples, run_scenario, BenchSettings, SweepSpec};

fn main() -> spgemm::Result<()> {
    let settings = BenchSettings { repetitions: 3, threads: vec![1, 2], ..BenchSettings::default() };
    let spec = SweepSpec::new(density_suite(9, &[2, 4, 8, 16], 1), settings);
    let records = run_scenario(&spec)?;
    for r in &records {
        println!("{:<22} {:<20} t={} {:>9.6}s {:>6.3} GFLOPS", r.matrix, r.solver_label(), r.nworkers, r.total_s, r.gflops());
    }

    println!();
    for curve in performance_profile(&profile_samples(&records))? {
        let at = |tau| curve.value_at(tau);
        println!("{:<20} tau=1: {:.2}  tau=1.5: {:.2}  tau=2: {:.2}", curve.solver, at(1.0), at(1.5), at(2.0));
    }
    Ok(())
}
