//! Inputs shared by the benchmarks.

use sobolev_qg::freegroup::GroupElementCoeffs;
use sobolev_qg::verify::random_centrals;
use sobolev_qg::{CentralElement, GroupDescriptor, Word};

pub fn group(sel: &str) -> GroupDescriptor {
    sel.parse().expect("valid selector")
}

/// A fixed random central element of the given degree.
pub fn central(sel: &str, degree: u64) -> CentralElement {
    let mut f = random_centrals(&group(sel), 1, 42, degree).expect("integer-labelled group").remove(0);
    f.set(degree, 1.0.into());
    f
}

/// Sum of the generators and their inverses in the free group on `rank` letters.
pub fn generator_sum(rank: usize) -> GroupElementCoeffs {
    let mut f = GroupElementCoeffs::new(rank).expect("valid rank");
    for g in 1..=rank {
        let w = Word::generator(g);
        f.add_term(w.inverse(), 1.0.into()).expect("rank matches");
        f.add_term(w, 1.0.into()).expect("rank matches");
    }
    f
}
