//! Even overlattices of sqrt2 E8, unimodular embeddings, and spotting
//! Construction B from a coset with many norm-2 vectors.

use kleinlat::bincodes::BinaryCode;
use kleinlat::lattices::{construction_b_lattice, detect_construction_b, embed_unimodular, even_overlattices, Lattice};

fn main() -> kleinlat::Result<()> {
    let s = Lattice::e8().scale_sqrt2();
    for o in even_overlattices(&s)? {
        println!("subgroup dim {}: discriminant {:?}, {} subgroups", o.subgroup_dim, o.disc_factors, o.members);
    }
    let u = embed_unimodular(&s)?;
    println!("sqrt2 E8 embeds in a unimodular lattice of det {}", u.det());

    let l = construction_b_lattice(&BinaryCode::e8())?;
    let mut lambda = vec![0; 8];
    lambda[0] = 8;
    match detect_construction_b(&l, &lambda) {
        Ok(w) => print!("frame in alpha_1 + L gives the code\n{}", w.code),
        Err(e) => println!("not detected: {e}"),
    }
    Ok(())
}
