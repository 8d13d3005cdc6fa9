//! The isometry engine in rank 16: a witness for L+(e8^2) ~ L+(d16+) and a
//! refusal for E8^2 against D16+.

use kleinlat::bincodes::BinaryCode;
use kleinlat::lattices::{
    construction_a_lattice, construction_b_lattice, direct_sum, isometry_with_reason, lattice_isometric, Lattice,
};

fn main() -> kleinlat::Result<()> {
    let a = construction_b_lattice(&BinaryCode::e8_squared())?;
    let b = construction_b_lattice(&BinaryCode::d16plus())?;
    match lattice_isometric(&a, &b)? {
        Some(t) => {
            println!("L+(e8^2) ~ L+(d16+), witness verifies: {}", t.verify(&a, &b));
            println!("{}", serde_json::to_string(&t.to_json(&b)).expect("json"));
        }
        None => println!("no isometry found"),
    }
    let e8 = Lattice::e8();
    let (w, reason) = isometry_with_reason(&direct_sum(&e8, &e8), &construction_a_lattice(&BinaryCode::d16plus())?)?;
    println!("E8^2 ~ D16+: {} ({})", w.is_some(), reason.unwrap_or_default());
    Ok(())
}
