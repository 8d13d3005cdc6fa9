//! Running registered checks from code rather than through the CLI.

use kleinlat::checks::{run_batch, Params, CHECK_IDS};

fn main() -> kleinlat::Result<()> {
    let ids: Vec<String> = CHECK_IDS.iter().take(4).map(|s| s.to_string()).collect();
    let params = Params { precision: 4, trace: false };
    for r in run_batch(&ids, &params, 2)? {
        println!("{:?} {} in {} ms", r.status, r.id, r.millis);
        println!("  {}", r.certificate);
    }
    Ok(())
}
