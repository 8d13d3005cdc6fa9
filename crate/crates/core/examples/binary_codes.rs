//! Doubly even codes: enumerators, equivalence, and recovering the Kleinian
//! code behind a Construction B code.

use kleinlat::bincodes::{
    code_equivalent, construction_b_code, coset_weight_enumerator, enumerate_doubly_even_containing_allones, recover_kleinian,
    BinaryCode, CosetLabel,
};
use kleinlat::kleinian::KleinianCode;

fn main() -> kleinlat::Result<()> {
    let (e, d) = (BinaryCode::e8_squared(), BinaryCode::d16plus());
    println!("e8^2: {}", e.weight_enumerator()?);
    println!("d16+: {}", d.weight_enumerator()?);
    println!("equivalent: {}", code_equivalent(&e, &d).is_some());

    for c in enumerate_doubly_even_containing_allones(8)? {
        println!("length 8, dim {}: {}", c.dim(), c.rows_as_strings().join(" "));
    }

    let k = KleinianCode::delta4_plus();
    let c = construction_b_code(&k);
    let coset = coset_weight_enumerator(&CosetLabel::new(c.clone(), 0xF))?;
    println!("C+(delta4+): coset 1111 0^12 has {} words of weight 4", coset.coeffs[4]);
    match recover_kleinian(&c, Some(0xF)) {
        Ok(Some(r)) => print!("recovered:\n{}", r.kleinian),
        Ok(None) => println!("nothing recovered"),
        Err(e) => println!("recovery failed: {e}"),
    }
    Ok(())
}
