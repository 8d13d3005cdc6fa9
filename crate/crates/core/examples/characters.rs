//! Characters of V_L, V_L^+ and V_L^-, and of twisted modules.

use kleinlat::lattices::{direct_sum, theta_series, Lattice};
use kleinlat::qseries::{ch_twisted_pm, ch_vl, ch_vl_minus, ch_vl_plus};
use kleinlat::voamod::{twisted_dimension, weight_coeff};

fn main() -> kleinlat::Result<()> {
    let e8 = Lattice::e8();
    let th = theta_series(&e8, None, 3)?;
    for (name, s) in [("V", ch_vl(&th, 8)?), ("V+", ch_vl_plus(&th, 8)?), ("V-", ch_vl_minus(&th, 8)?)] {
        let dims: Vec<i128> = (0..=3).map(|w| weight_coeff(&s, w, 8)).collect();
        println!("E8 {name}: graded dimensions {dims:?}");
    }
    let l = direct_sum(&e8, &e8);
    let dim_t = twisted_dimension(&l)?;
    let tw = ch_twisted_pm(16, dim_t, true, 3)?;
    print!("E8^2 twisted + (dim T = {dim_t}):\n{tw}");
    Ok(())
}
