//! Generate a placement instance on a homogeneous Poisson point process
//! and write it to a versioned JSON file.
//!
//! Run with: `cargo run --example generate_instance`

use evloc::files::{save_instance, GeneratorInfo, InstanceFile};
use evloc::{generate_instance, CountMode, GenConfig, Region};

fn main() {
    let region = Region::new(0.0, 100.0, 0.0, 100.0);

    // 20 chargers serving 40 demand areas, reproducible from the seed.
    let cfg = GenConfig::fixed_counts(region, 20, 40, 7);
    let inst = generate_instance(&cfg).expect("default ranges always cover demand");
    println!(
        "fixed counts: {} facilities / {} customers, total capacity {:.1} vs demand {:.1}",
        inst.facility_count(),
        inst.customer_count(),
        inst.total_capacity(),
        inst.total_demand()
    );

    // The same generator with Poisson counts: the number of points is
    // itself random with mean intensity * area.
    let poisson_cfg = GenConfig {
        facility_count: CountMode::Poisson(0.002),
        customer_count: CountMode::Poisson(0.004),
        ..cfg.clone()
    };
    let poisson_inst = generate_instance(&poisson_cfg).expect("coverable");
    println!(
        "poisson counts: {} facilities / {} customers (means 20 / 40)",
        poisson_inst.facility_count(),
        poisson_inst.customer_count()
    );

    let out_dir = std::env::temp_dir().join("evloc-examples");
    std::fs::create_dir_all(&out_dir).unwrap();
    let path = out_dir.join("instance-20x40.json");
    let file = InstanceFile::from_instance(&inst, Some(GeneratorInfo::seeded(cfg.seed))).unwrap();
    let hash = save_instance(&path, &file).unwrap();
    println!("wrote {} (sha256 {})", path.display(), &hash[..12]);

    // Identical configuration, identical bytes.
    let again = generate_instance(&cfg).unwrap();
    assert_eq!(inst, again);
    println!("regeneration with the same seed is byte-identical");
}
