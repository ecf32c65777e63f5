//! Both sides of the bounded dichotomy, and the leading-zero diagonalization.
use schreier::dichotomy::{
    diagonalize_first_lemma, dichotomy_search, random_hereditary_family, verify_dichotomy,
    SearchParams,
};
use schreier::schreier::{enumerate, Target};
use schreier::Ordinal;

fn main() -> schreier::Result<()> {
    let spec = "1".parse()?;
    let s2 = enumerate(&Target::Schreier(Ordinal::nat(2)), 12, 1 << 20)?;
    let cert = dichotomy_search(&s2, &spec, 12, None, SearchParams::default())?;
    println!("S_2: {:?}, re-verified {}", cert.outcome, verify_dichotomy(&cert, &s2)?.ok);

    for seed in 0..5 {
        let fam = random_hereditary_family(12, seed, 5, 5);
        let cert = dichotomy_search(&fam, &spec, 12, None, SearchParams { seed, ..Default::default() })?;
        println!("random family {seed}: {:?}", cert.outcome);
    }

    let s1 = enumerate(&Target::Schreier(Ordinal::one()), 12, 1 << 20)?;
    let lemma = diagonalize_first_lemma(&s1, &"0".parse()?, 12, 4, SearchParams::default())?;
    for entry in &lemma.coloring.entries {
        println!("position {} (m = {}): {:?}", entry.position, entry.element, entry.color);
    }
    println!("L = {}", lemma.l);
    Ok(())
}
