//! Capacitated facility location solved by rollout over placement decisions,
//! with a transportation problem behind every evaluated placement.

use rolloutkit::discrete::facility::{facility_rollout, FacilityInstance};

fn main() -> Result<(), rolloutkit::discrete::facility::FacilityError> {
    let inst = FacilityInstance::new(
        vec![4, 3, 5],
        vec![6, 5, 7, 4],
        vec![9, 4, 8, 3],
        vec![
            2, 6, 3, 7, //
            5, 1, 4, 6, //
            3, 5, 2, 8,
        ],
    )?;
    for cache in [true, false] {
        let out = facility_rollout(&inst, cache)?;
        println!("cache {cache}: {} transportation solves beyond all-open", out.transport_solves);
        if cache {
            println!("  all-open cost {}  rollout cost {}", out.baseline_cost, out.cost);
            println!("  open {:?}", out.placements);
            for c in 0..inst.clients() {
                let row = &out.flows.flows[c * inst.locations()..(c + 1) * inst.locations()];
                println!("  client {c} flows {row:?}");
            }
        }
    }
    Ok(())
}
