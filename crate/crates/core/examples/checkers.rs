//! Empirical consistency and improvement checks on seeded probes.

use rolloutkit::gen::{self, INSTANCE_STREAM};
use rolloutkit::toy::{Erratic, ToyDp, ToyPolicy};
use rolloutkit::trajectory::{check_sequential_consistency, check_sequential_improvement, random_probes};
use rolloutkit::BaseHeuristic;

fn report<H: BaseHeuristic<ToyDp>>(name: &str, problem: &ToyDp, heuristic: &H) {
    let probes = random_probes(problem, heuristic, 32, 3);
    let consistency = check_sequential_consistency(problem, heuristic, &probes);
    let improvement = check_sequential_improvement(problem, heuristic, &probes);
    println!(
        "{name:<16} consistent: {:<5} ({} violations of {} checked)   improving: {:<5} ({} violations)",
        consistency.is_consistent(),
        consistency.violations.len(),
        consistency.checked,
        improvement.is_improving(),
        improvement.violations.len(),
    );
}

fn main() {
    let problem = ToyDp::generate(&mut gen::rng(5, INSTANCE_STREAM), 6, 3, 8);
    for policy in ToyPolicy::ALL {
        report(&format!("{policy:?}"), &problem, &policy);
    }
    report("Erratic", &problem, &Erratic { salt: 17 });
}
