//! Runs the data checks on every catalog scenario.

use prandtl_channel::scenario::catalog::{build, Params, ENTRIES};
use prandtl_channel::scenario::validate_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (id, about) in ENTRIES {
        let s = build(id, &Params::new(), None)?;
        let r = validate_scenario(&s, 1e-10)?;
        println!("== {id}: {about}");
        println!("{}", r.to_text());
        println!("   -> {}\n", if r.passed() { "usable" } else { "rejected" });
    }
    Ok(())
}
