//! Minimum-weight perfect matching on a small edge-list problem.

use hiersurf::decoder::MatchingProblem;

fn main() -> hiersurf::Result<()> {
    let text = "nodes 6\n0 1 4\n1 2 1\n2 3 4\n3 4 1\n4 5 4\n5 0 1\n0 3 2\n";
    let (pairs, weight) = MatchingProblem::parse(text)?.solve()?;
    println!("weight {weight}");
    for (u, v) in pairs {
        println!("{u} -- {v}");
    }
    Ok(())
}
