//! Sample inputs shared by the benchmarks.

use nippaudit_core::QuadForm;

/// A handful of positive definite forms spanning small to large discriminants.
pub fn sample_forms() -> Vec<QuadForm> {
    [
        [1, 1, 1, 1, 0, 0, 0, 0, 0, 0],
        [1, 1, 1, 1, -1, 0, -1, 0, 0, -1],
        [1, 1, 11, 11, 1, 0, 0, 1, 0, 8],
        [2, 3, 5, 7, 1, 1, 1, 1, 1, 1],
        [3, 3, 7, 9, 1, 2, 3, 1, 3, 5],
    ]
    .into_iter()
    .map(QuadForm::new)
    .collect()
}
