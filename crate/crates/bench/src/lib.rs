//! Fixtures shared by the benchmarks.

use fragswarm::fragments::{shear_reference, ShearParams};
use fragswarm::{Fragment, FragmentSet, RngStream};
use rand::Rng;

/// Random reference of `ref_len` bases cut into `count` reads.
pub fn sheared_reads(seed: u64, ref_len: usize, count: usize, mean_length: usize, min_overlap: usize) -> FragmentSet {
    let mut rng = RngStream::new(seed);
    let bases: String = (0..ref_len).map(|_| ['A', 'C', 'G', 'T'][rng.random_range(0..4)]).collect();
    let reference = Fragment::new(0, bases, None).expect("generated bases are valid");
    let params = ShearParams {
        fragment_count: count,
        mean_length,
        min_overlap,
        seed,
    };
    shear_reference(&reference, &params).expect("feasible geometry").set
}
