//! Raw pairs needed for one purified pair, by purification depth.

use hiersurf::experiments::purify_table;

fn main() -> hiersurf::Result<()> {
    println!("n_D      N   infidelity  acceptance");
    for row in purify_table(0.985, 0.001, 0.99, 8)? {
        println!(
            "{:>3} {:>6}   {:.2e}    {:.4}",
            row.n_d,
            row.n,
            row.output.infidelity(),
            row.acceptance
        );
    }
    Ok(())
}
