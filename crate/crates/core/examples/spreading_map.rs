//! Spreading maps of bound games, checked on every minimal play.
use schreier::games::{GameSpec, Policy};
use schreier::spreadmap::{build, verify};

fn main() -> schreier::Result<()> {
    let games = [
        ("0", Policy::Constant { l: 1 }),
        ("1", Policy::Constant { l: 3 }),
        ("2", Policy::Sequence { values: vec![2, 1] }),
        ("w", Policy::Constant { l: 2 }),
    ];
    for (tuple, policy) in games {
        let spec = GameSpec::bound(tuple.parse()?, policy);
        let map = build(&spec, 8)?;
        let v = verify(&map, &spec, 8)?;
        println!("{tuple}: f = {:?}, ok {} over {} plays", map.table, v.ok, v.plays_checked);
    }
    Ok(())
}
