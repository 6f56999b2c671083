//! Render placement maps to SVG: bare instance, assignment edges, and a
//! tour polyline.
//!
//! Run with: `cargo run --release --example render_map`

use evloc::render::{render_svg, Overlay};
use evloc::{
    flp_anneal, generate_instance, tsp_anneal, AnnealSchedule, GenConfig, ModelConfig, Region,
    TspInstance, TspNeighbor,
};

fn main() {
    let cfg = GenConfig::fixed_counts(Region::new(0.0, 100.0, 0.0, 100.0), 20, 40, 7);
    let inst = generate_instance(&cfg).expect("coverable config");
    let out_dir = std::env::temp_dir().join("evloc-examples");
    std::fs::create_dir_all(&out_dir).unwrap();

    let plain = render_svg(&inst, Overlay::None);
    std::fs::write(out_dir.join("map-instance.svg"), &plain).unwrap();

    // Placement: purple edges show which charger serves which demand area.
    let model = ModelConfig::linear();
    let schedule = AnnealSchedule::default().with_k_max(800);
    let (report, _) = flp_anneal(&inst, &model, &schedule, 1).expect("feasible");
    let assignment = render_svg(&inst, Overlay::Assignment(&report.solution));
    std::fs::write(out_dir.join("map-assignment.svg"), &assignment).unwrap();

    // Route: a closed polyline over the charger locations.
    let stops = TspInstance::new(
        inst.facilities.iter().map(|f| f.location).collect(),
        inst.region,
    );
    let tour_schedule = AnnealSchedule::default().with_k_max(30_000);
    let (tour, _) = tsp_anneal(&stops, &tour_schedule, TspNeighbor::TwoOpt, 2).unwrap();
    let route = render_svg(&inst, Overlay::Tour(&tour.order));
    std::fs::write(out_dir.join("map-tour.svg"), &route).unwrap();

    println!("wrote three maps under {}", out_dir.display());
    println!("  map-instance.svg   marks only");
    println!("  map-assignment.svg assignment edges, width ~ served fraction");
    println!("  map-tour.svg       closed route of length {:.2}", tour.length);
}
