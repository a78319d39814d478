use discrete_homotopy::suite::{run, CRITERIA, KNOWN_UNATTAINABLE};

fn main() {
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        let r = run(id);
        println!("{r}");
        if !r.pass {
            failed.push(id);
        }
    }
    println!("{} of {CRITERIA} criteria pass; failing: {failed:?}", CRITERIA - failed.len());
    // Anything beyond the documented counterexamples is a regression.
    if failed != KNOWN_UNATTAINABLE {
        eprintln!("unexpected set of failing criteria: {failed:?} (expected {KNOWN_UNATTAINABLE:?})");
        std::process::exit(1);
    }
}
