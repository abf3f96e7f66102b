//! Regenerates the files under `fixtures/v1`.
//!
//!     cargo run -p dppc-core --example write_fixtures

use std::fs;
use std::path::Path;

use dppc::model::{write_set_system, write_vacc_instance};
use dppc::oracle::{gen_random_set_system, gen_star_lower_bound, gen_two_cluster_line};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/v1");
    fs::create_dir_all(&dir)?;
    fs::write(
        dir.join("star_10.txt"),
        write_set_system(&gen_star_lower_bound(10)?),
    )?;
    fs::write(
        dir.join("two_cluster.vacc"),
        write_vacc_instance(&gen_two_cluster_line()),
    )?;
    for m in 1..=10 {
        let system = gen_random_set_system(10 + m, m, 0.25, m as u64)?;
        fs::write(
            dir.join(format!("psc_m{m:02}.txt")),
            write_set_system(&system),
        )?;
    }
    Ok(())
}
