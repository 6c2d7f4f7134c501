//! Commuting ring to Schur pair and back, and the analytical rank.

use ssk::opcore::{commutator, ord};
use ssk::sato::{analytical_rank, construction1, construction2};
use ssk::schur_sym::wallenberg_pair;

fn main() -> ssk::Result<()> {
    let (l, p) = wallenberg_pair(12)?;
    let pair = construction1(&[l, p], 8, 6)?;
    for (i, a) in pair.a_generators.iter().enumerate() {
        println!("a_{} = {a}", i + 1);
    }
    for (k, w) in pair.w.basis.iter().take(4) {
        println!("w_{} = {w}", k.get(0));
    }
    let rank = analytical_rank(&pair, 5)?;
    println!("rank {} (exact: {})", rank.rank, rank.exact);
    let b = construction2(&pair)?;
    println!("B_1 = {}", b[0]);
    println!("ord B_1 = {:?}, [B_1, B_2] = 0: {}", ord(&b[0]), commutator(&b[0], &b[1])?.is_zero());
    Ok(())
}
