//! Embedding a small hereditary family into S_1 through a winning strategy.
use schreier::embed::{build_embedding, verify_certificate};
use schreier::games::Policy;
use schreier::{FinSet, SetFamily};

fn main() -> schreier::Result<()> {
    let gens: Vec<FinSet> = vec!["1,2".parse()?, "3,4".parse()?];
    let fam = SetFamily::from_sets(12, gens)?.hereditary_closure();
    let cert = build_embedding(&fam, &"1".parse()?, &Policy::Constant { l: 3 }, 12)?;
    println!("N = {:?}", cert.sequence);
    println!("members embedded: {}, failures: {}", cert.verified_members, cert.failures.len());
    println!("independent check: {}", verify_certificate(&cert).ok);
    Ok(())
}
