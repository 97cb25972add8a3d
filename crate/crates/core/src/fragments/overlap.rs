/// Longest `l` such that the last `l` bytes of `a` equal the first `l` of `b`.
///
/// Linear in `a.len() + b.len()`. When one `b` is matched against many `a`,
/// compute [`prefix_function`] once and call [`overlap_with_table`].
pub fn overlap_len(a: &[u8], b: &[u8]) -> usize {
    overlap_with_table(a, b, &prefix_function(b))
}

/// `pi[i]` is the length of the longest proper prefix of `pattern[..=i]`
/// that is also its suffix.
pub fn prefix_function(pattern: &[u8]) -> Vec<usize> {
    let mut pi = vec![0usize; pattern.len()];
    for i in 1..pattern.len() {
        let mut k = pi[i - 1];
        while k > 0 && pattern[i] != pattern[k] {
            k = pi[k - 1];
        }
        if pattern[i] == pattern[k] {
            k += 1;
        }
        pi[i] = k;
    }
    pi
}

/// [`overlap_len`] with `b`'s prefix function precomputed.
///
/// Runs the KMP automaton of `b` over the tail of `a`; the final state is
/// the longest prefix of `b` ending at the end of `a`.
pub fn overlap_with_table(a: &[u8], b: &[u8], pi: &[usize]) -> usize {
    debug_assert_eq!(b.len(), pi.len());
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut k = 0;
    for &c in &a[a.len().saturating_sub(b.len())..] {
        if k == b.len() {
            k = pi[k - 1];
        }
        while k > 0 && c != b[k] {
            k = pi[k - 1];
        }
        if c == b[k] {
            k += 1;
        }
    }
    k
}

/// Quadratic reference scan, longest candidate first.
pub fn overlap_len_naive(a: &[u8], b: &[u8]) -> usize {
    let max = a.len().min(b.len());
    (1..=max)
        .rev()
        .find(|&l| a[a.len() - l..] == b[..l])
        .unwrap_or(0)
}
