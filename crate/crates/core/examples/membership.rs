//! Membership in S_α and tuple families, plus a count inside a bound.
use schreier::schreier::{enumerate, tuple_member, Target};
use schreier::{FinSet, Ordinal, TupleSpec};

fn main() -> schreier::Result<()> {
    let e: FinSet = "3,4,5".parse()?;
    for alpha in ["0", "1", "2", "w"] {
        let a: Ordinal = alpha.parse()?;
        println!("{e} in S_{a}: {}", schreier::schreier::member(&a, &e));
    }
    let pair: TupleSpec = "1,1".parse()?;
    let f: FinSet = "2,3,4,5,6".parse()?;
    println!("{f} in ({pair}): {}", tuple_member(&pair, &f));
    let s2 = enumerate(&Target::Schreier(Ordinal::nat(2)), 10, 1 << 20)?;
    println!("|S_2 within [1,10]| = {}", s2.len());
    Ok(())
}
