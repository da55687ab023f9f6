//! Split rows across workers by equal flop and show each worker's share.

use spgemm::partition::{count_flop, rows_to_workers};
use spgemm::rmat::{g500_spec, generate};

fn main() -> spgemm::Result<()> {
    let a = generate(&g500_spec(11, 16, 7))?;
    let profile = count_flop(&a, &a)?;
    let nworkers = 8;
    let part = rows_to_workers(&profile, nworkers);
    let bound = profile.total.div_ceil(nworkers as u64) + profile.max_row();

    println!("total flop {} max row flop {} bound {bound}", profile.total, profile.max_row());
    for (t, range) in part.ranges().enumerate() {
        let share = profile.range_flop(range.clone());
        println!("worker {t}: rows {:>5}..{:<5} flop {share:>8}", range.start, range.end);
        assert!(share <= bound);
    }
    Ok(())
}
