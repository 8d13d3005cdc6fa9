//! Construction A and B lattices, theta series and discriminant groups.

use kleinlat::bincodes::BinaryCode;
use kleinlat::lattices::{construction_a_lattice, construction_b_lattice, discriminant_group, theta_series, Lattice};

fn main() -> kleinlat::Result<()> {
    let c = BinaryCode::e8();
    let named = [
        ("L(e8)", construction_a_lattice(&c)?),
        ("L+(e8)", construction_b_lattice(&c)?),
        ("E8", Lattice::e8()),
        ("sqrt2 E8", Lattice::e8().scale_sqrt2()),
    ];
    for (name, l) in &named {
        let disc = discriminant_group(l)?;
        println!("{name}: det {}, even {}, L*/L factors {:?}", l.det(), l.is_even(), disc.factors);
        print!("{}", theta_series(l, None, 3)?);
    }
    print!("L+(e8) basis:\n{}", named[1].1);
    Ok(())
}
