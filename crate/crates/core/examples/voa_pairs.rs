//! Deciding V_L^+ ~ V_N^+ and V_L^+ ~ V_N, with re-checkable certificates.

use kleinlat::bincodes::BinaryCode;
use kleinlat::lattices::{construction_a_lattice, construction_b_lattice, direct_sum, Lattice};
use kleinlat::voamod::{classify_pair_mixed, classify_pair_plus, fusion_group, module_census};

fn main() -> kleinlat::Result<()> {
    let e8 = Lattice::e8();
    let e16 = direct_sum(&e8, &e8);
    let d16 = construction_a_lattice(&BinaryCode::d16plus())?;
    let v = classify_pair_plus(&e16, &d16, 4, true)?;
    println!("E8^2 / D16+: {:?}, verifies {}", v.outcome, v.verify(&e16, &d16)?);
    for line in v.trace.iter().flatten() {
        println!("  {line}");
    }

    let c = BinaryCode::e8();
    let (l, n) = (construction_a_lattice(&c)?, construction_b_lattice(&c)?);
    let v = classify_pair_mixed(&l, &n, 4, false)?;
    println!("{}", serde_json::to_string_pretty(&v.to_json(&l, &n)).expect("json"));

    let s = e8.scale_sqrt2();
    let census = module_census(&s)?;
    let fg = fusion_group(&s)?;
    println!(
        "sqrt2 E8: {} split, {} paired, {} twisted modules; fusion group of order {}",
        census.count_split(),
        census.count_pairs(),
        census.count_twisted(),
        fg.order
    );
    Ok(())
}
