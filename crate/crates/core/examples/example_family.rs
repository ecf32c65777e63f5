//! The family built from the blocks {2^k+1, …, 2^k+k} and its two
//! non-inclusion witnesses on a sequence.
use schreier::dichotomy::{check_example_noninclusions, example_family};
use schreier::SeqView;

fn main() -> schreier::Result<()> {
    let fam = example_family(3)?;
    println!("{} members within [1, 11]", fam.len());
    let m = SeqView::identity(11);
    let w = check_example_noninclusions(3, &m)?;
    println!("m_G = {} is outside the family, G = {} in S_1", w.s1_not_in_f, w.s1_preimage);
    println!("{} lies in the family image but not in S_1", w.f_not_in_s1);
    Ok(())
}
