use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Fragment, FragmentError, FragmentSet};
use crate::stochastic::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShearParams {
    pub fragment_count: usize,
    pub mean_length: usize,
    pub min_overlap: usize,
    pub seed: u64,
}

/// Shuffled reads plus the order that reassembles the reference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShearedSet {
    pub set: FragmentSet,
    /// `true_order[k]` is the id of the k-th read from the left of the
    /// reference.
    pub true_order: Vec<usize>,
    pub seed: u64,
}

fn check(params: &ShearParams, ref_len: usize) -> Result<(), FragmentError> {
    let ShearParams {
        fragment_count: n,
        mean_length: l,
        min_overlap: k,
        ..
    } = *params;
    let fail = |msg: String| Err(FragmentError::Infeasible(msg));
    if n < 2 {
        return fail(format!("fragment_count >= 2 violated (got {n})"));
    }
    if l == 0 || l >= ref_len {
        return fail(format!(
            "0 < mean_length < reference length violated ({l} vs {ref_len})"
        ));
    }
    if k >= l {
        return fail(format!("min_overlap < mean_length violated ({k} >= {l})"));
    }
    if n * l < ref_len + (n - 1) * k {
        return fail(format!(
            "fragment_count * mean_length >= reference length + (fragment_count - 1) * min_overlap \
             violated ({} < {})",
            n * l,
            ref_len + (n - 1) * k
        ));
    }
    if ref_len - l < n - 1 {
        return fail(format!(
            "reference length - mean_length >= fragment_count - 1 violated ({} < {})",
            ref_len - l,
            n - 1
        ));
    }
    Ok(())
}

/// Cuts `reference` into overlapping reads that tile it end to end, then
/// shuffles them. Read lengths vary by up to a fifth of `mean_length`;
/// adjacent reads in the true order always share at least `min_overlap`
/// bases and no read contains another.
pub fn shear_reference(reference: &Fragment, params: &ShearParams) -> Result<ShearedSet, FragmentError> {
    let bases = reference.bases();
    let len = bases.len();
    check(params, len)?;
    let n = params.fragment_count;
    let mean = params.mean_length;
    let mut rng = RngStream::new(params.seed);

    let span = len - mean;
    let starts: Vec<usize> = (0..n).map(|k| k * span / (n - 1)).collect();
    let jitter = mean / 5;
    let mut ends: Vec<usize> = (0..n)
        .map(|k| {
            if k == n - 1 {
                return len;
            }
            let want = rng.random_range(mean - jitter..=mean + jitter);
            (starts[k] + want)
                .min(len)
                .max(starts[k + 1] + params.min_overlap)
        })
        .collect();
    // Strictly increasing ends keep reads from nesting.
    for k in (0..n - 1).rev() {
        ends[k] = ends[k].min(ends[k + 1] - 1);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut true_order = vec![0; n];
    let fragments = order
        .iter()
        .enumerate()
        .map(|(pos, &k)| {
            true_order[k] = pos;
            Fragment::new(pos, &bases[starts[k]..ends[k]], Some(format!("read_{pos}")))
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(ShearedSet {
        set: FragmentSet::from_fragments(fragments)?,
        true_order,
        seed: params.seed,
    })
}
