//! Small shared numeric helpers.

/// Ceiling of a non-negative count expression like `alpha * n`.
///
/// A guard of 1e-9 absorbs float representation error just below an integer
/// (e.g. `0.3 * 10` evaluating to `3.0000000000000004`), so the result matches
/// the exact-arithmetic ceiling for any realistic fraction and sample size.
pub(crate) fn ceil_count(x: f64) -> usize {
    debug_assert!(x >= 0.0 && x.is_finite());
    (x - 1e-9).ceil().max(0.0) as usize
}

/// Sorts `order` so that scores are visited in ascending order, breaking ties
/// by lower original index.
pub(crate) fn argsort_ascending(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    order
}

/// Like [`argsort_ascending`] but deepest-first for "larger is deeper" scores.
pub(crate) fn argsort_descending(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}
