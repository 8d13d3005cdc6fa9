//! Even self-dual Kleinian codes of length 2 and 4 and their binary images.

use kleinlat::bincodes::{code_equivalent, construction_a_code, construction_b_code, BinaryCode};
use kleinlat::kleinian::{k_enumerate, KPredicate};

fn main() -> kleinlat::Result<()> {
    for n in [2, 4] {
        let classes = k_enumerate(n, &KPredicate::even_self_dual())?;
        println!("length {n}: {} class(es)", classes.len());
        for k in &classes {
            let (a, b) = (construction_a_code(k), construction_b_code(k));
            print!("{k}");
            println!("  weight enumerator {}", k.weight_enumerator()?);
            println!("  C(K): dim {}, {}", a.dim(), a.weight_enumerator()?);
            println!("  C+(K): dim {}, {}", b.dim(), b.weight_enumerator()?);
            for (name, c) in [("e8", BinaryCode::e8()), ("e8^2", BinaryCode::e8_squared()), ("d16+", BinaryCode::d16plus())] {
                if code_equivalent(&a, &c).is_some() {
                    println!("  C(K) is equivalent to {name}");
                }
            }
        }
    }
    Ok(())
}
