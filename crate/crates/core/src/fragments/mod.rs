//! DNA reads, the pairwise suffix/prefix overlap matrix, and layout fitness.
//!
//! A layout is a permutation of fragment ids. Its fitness is the sum of the
//! overlap lengths between each adjacent pair, and is maximized.

mod overlap;
mod parse;
mod shear;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use overlap::{overlap_len, overlap_len_naive, overlap_with_table, prefix_function};
pub use parse::{parse_reads, read_path, write_fasta, ReadFormat};
pub use shear::{shear_reference, ShearParams, ShearedSet};

#[derive(Debug, Error)]
pub enum FragmentError {
    #[error("no fragments")]
    NoFragments,
    #[error("record {record}: {reason}")]
    MalformedRecord { record: usize, reason: String },
    #[error("invalid base {byte:?} at byte offset {offset}")]
    InvalidBase { byte: char, offset: usize },
    #[error("infeasible shear parameters: {0}")]
    Infeasible(String),
    #[error("not a permutation of 0..{dim}: {reason}")]
    NotAPermutation { dim: usize, reason: String },
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

/// One read. Bases are upper-case `A`, `C`, `G`, `T` or `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragment {
    pub id: usize,
    bases: Vec<u8>,
    pub source_label: Option<String>,
}

impl Fragment {
    /// Validates and upper-cases `bases`.
    pub fn new(
        id: usize,
        bases: impl AsRef<[u8]>,
        source_label: Option<String>,
    ) -> Result<Self, FragmentError> {
        let bases = normalize_bases(bases.as_ref(), 0)?;
        if bases.is_empty() {
            return Err(FragmentError::MalformedRecord {
                record: id + 1,
                reason: "empty sequence".into(),
            });
        }
        Ok(Self {
            id,
            bases,
            source_label,
        })
    }

    pub fn bases(&self) -> &[u8] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn as_str(&self) -> &str {
        // Only ASCII bases are ever stored.
        std::str::from_utf8(&self.bases).expect("bases are ASCII")
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Upper-cases `raw`, rejecting anything outside `ACGTN`. `base_offset` is
/// added to the index of a bad byte in the error.
pub(crate) fn normalize_bases(raw: &[u8], base_offset: usize) -> Result<Vec<u8>, FragmentError> {
    raw.iter()
        .enumerate()
        .map(|(i, &b)| match b.to_ascii_uppercase() {
            up @ (b'A' | b'C' | b'G' | b'T' | b'N') => Ok(up),
            _ => Err(FragmentError::InvalidBase {
                byte: b as char,
                offset: base_offset + i,
            }),
        })
        .collect()
}

/// Ordered, immutable collection of reads with ids `0..len`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentSet {
    fragments: Vec<Fragment>,
}

impl FragmentSet {
    /// Builds a set from raw sequences, assigning ids in order.
    pub fn from_sequences<I, S>(seqs: I) -> Result<Self, FragmentError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let fragments = seqs
            .into_iter()
            .enumerate()
            .map(|(id, s)| Fragment::new(id, s, None))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_fragments(fragments)
    }

    /// Re-numbers ids to match positions. Fails on an empty input.
    pub fn from_fragments(mut fragments: Vec<Fragment>) -> Result<Self, FragmentError> {
        if fragments.is_empty() {
            return Err(FragmentError::NoFragments);
        }
        for (i, f) in fragments.iter_mut().enumerate() {
            f.id = i;
        }
        Ok(Self { fragments })
    }

    /// Keeps only the first `k` reads.
    pub fn take(self, k: usize) -> Result<Self, FragmentError> {
        let mut fragments = self.fragments;
        fragments.truncate(k);
        Self::from_fragments(fragments)
    }

    pub fn len(&self) -> usize {
        self.fragments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fragments.is_empty()
    }

    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }

    pub fn get(&self, i: usize) -> Option<&Fragment> {
        self.fragments.get(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fragment> {
        self.fragments.iter()
    }
}

/// Where a fragment set came from; echoed into run outputs so truncated
/// runs are labeled as such.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub label: String,
    pub source: Option<String>,
    /// Number of leading reads kept, when the input was truncated.
    pub take: Option<usize>,
    pub fragment_count: usize,
}

/// `cell(i, j)` is the longest suffix of fragment `i` that equals a prefix of
/// fragment `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapMatrix {
    dim: usize,
    cells: Vec<u32>,
}

impl OverlapMatrix {
    /// Builds a matrix from row-major cells. Mostly useful in tests.
    pub fn from_cells(dim: usize, cells: Vec<u32>) -> Self {
        assert_eq!(cells.len(), dim * dim, "cell count must be dim^2");
        Self { dim, cells }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> u32 {
        self.cells[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.cells[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.cells.chunks(self.dim.max(1))
    }
}

/// Computes every ordered pair's overlap. Rows are filled in parallel.
pub fn build_overlap_matrix(set: &FragmentSet) -> OverlapMatrix {
    let dim = set.len();
    let frags = set.fragments();
    let tables: Vec<Vec<usize>> = frags.iter().map(|f| prefix_function(f.bases())).collect();
    let mut cells = vec![0u32; dim * dim];
    cells
        .par_chunks_mut(dim.max(1))
        .enumerate()
        .for_each(|(i, row)| {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = overlap_with_table(frags[i].bases(), frags[j].bases(), &tables[j]) as u32;
            }
        });
    OverlapMatrix { dim, cells }
}

/// Checks that `perm` lists each of `0..dim` exactly once.
pub fn check_permutation(perm: &[usize], dim: usize) -> Result<(), FragmentError> {
    if perm.len() != dim {
        return Err(FragmentError::NotAPermutation {
            dim,
            reason: format!("length {} != {}", perm.len(), dim),
        });
    }
    let mut seen = vec![false; dim];
    for &p in perm {
        if p >= dim {
            return Err(FragmentError::NotAPermutation {
                dim,
                reason: format!("index {p} out of range"),
            });
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(FragmentError::NotAPermutation {
                dim,
                reason: format!("index {p} repeated"),
            });
        }
    }
    Ok(())
}

/// Sum of adjacent overlaps along `perm`.
pub fn fitness(perm: &[usize], matrix: &OverlapMatrix) -> Result<u64, FragmentError> {
    check_permutation(perm, matrix.dim())?;
    Ok(layout_score(perm, matrix))
}

/// [`fitness`] without the permutation check.
#[inline]
pub(crate) fn layout_score(perm: &[usize], matrix: &OverlapMatrix) -> u64 {
    perm.windows(2)
        .map(|w| u64::from(matrix.cell(w[0], w[1])))
        .sum()
}
