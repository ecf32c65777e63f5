//! The (1,1)-game on S_1: check the hand-written strategy, then let the
//! solver find one of its own.
use schreier::games::{solve_n, verify_strategy, Policy, SolveOptions};
use schreier::{FamilyOracle, Ordinal, TupleSpec};

fn main() -> schreier::Result<()> {
    let spec: TupleSpec = "1,1".parse()?;
    let s1 = FamilyOracle::schreier(Ordinal::one());
    let by_hand = Policy::PreviousMin { first: vec![1] };
    let v = verify_strategy(&spec, &by_hand, &s1, 9)?;
    println!("l = 1, then l = min E: wins {} over {} plays", v.wins, v.plays_checked);

    let solved = solve_n(&spec, &s1, 8, SolveOptions::flag_free(8))?.expect("N wins here");
    println!("solver: {} decisions, first choice {:?}", solved.decisions.len(), solved.choice(&[]));
    Ok(())
}
