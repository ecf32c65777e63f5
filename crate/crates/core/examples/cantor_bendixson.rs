//! Strong Cantor-Bendixson indices of S_0, S_1, S_2 and of a spread closure.
use schreier::cbindex::{bar, index, rank, DEFAULT_WINDOW};
use schreier::{FamilyOracle, FinSet, Ordinal, SetFamily};

fn main() -> schreier::Result<()> {
    for a in 0..=2 {
        let fam = FamilyOracle::schreier(Ordinal::nat(a));
        let r = index(&fam, DEFAULT_WINDOW)?;
        println!("s(S_{a}) = {}", r.rank().expect("pattern detected"));
    }
    let s1 = FamilyOracle::schreier(Ordinal::one());
    for n in [1u64, 5, 9] {
        let r = rank(&s1, &FinSet::singleton(n), DEFAULT_WINDOW)?;
        println!("rank of {{{n}}} in S_1 = {}", r.rank().expect("finite"));
    }
    let gens = SetFamily::from_sets(3, ["1,2".parse()?, "3".parse::<FinSet>()?])?;
    let closure = FamilyOracle::spread_closure(gens);
    println!("s(closure) = {}", index(&closure, DEFAULT_WINDOW)?.rank().expect("finite"));
    println!("s(bar of closure) = {}", index(&bar(&closure), DEFAULT_WINDOW)?.rank().expect("finite"));
    Ok(())
}
