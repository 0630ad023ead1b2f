//! Small fixed tensors used by the worked examples, tests and benches.

use crate::tensor::Tensor3;

/// 2×2×3 operand shared by the one-sided and two-sided worked examples.
pub fn base_operand() -> Tensor3 {
    Tensor3::from_array([[[1.0, 1.0], [-2.0, 0.0]], [[0.0, 1.0], [1.0, -2.0]], [[0.0, -1.0], [1.0, 2.0]]])
}

/// 2×3×3 range prescriber for [`base_operand`].
pub fn range_prescriber() -> Tensor3 {
    Tensor3::from_array([
        [[-1.0, 1.0, -2.0], [-2.0, 1.0, -2.0]],
        [[-2.0, 1.0, 1.0], [2.0, -2.0, 0.0]],
        [[2.0, -1.0, 2.0], [0.0, 1.0, 2.0]],
    ])
}

/// 3×2×3 null-space prescriber for [`base_operand`].
pub fn null_prescriber() -> Tensor3 {
    Tensor3::from_array([
        [[0.0, 1.0], [1.0, -1.0], [0.0, 1.0]],
        [[1.0, 0.0], [0.0, 0.0], [1.0, 0.0]],
        [[0.0, 0.0], [-1.0, 1.0], [1.0, 1.0]],
    ])
}

/// 2×3×3 range factor of the two-sided example.
pub fn two_sided_range() -> Tensor3 {
    let slice = [[1.0, 2.0, 1.0], [0.0, 0.0, 1.0]];
    Tensor3::from_array([slice, slice, slice])
}

/// 3×2×3 null-space factor of the two-sided example.
pub fn two_sided_null() -> Tensor3 {
    Tensor3::from_array([
        [[1.0, 2.0], [0.0, 0.0], [1.0, 1.0]],
        [[1.0, 2.0], [1.0, 0.0], [1.0, 1.0]],
        [[1.0, 2.0], [1.0, 0.0], [1.0, 1.0]],
    ])
}

/// Rank-deficient 3×4×2 operand of the pseudoinverse example.
pub fn pseudoinverse_operand() -> Tensor3 {
    Tensor3::from_array([
        [[0.0, -1.0, -1.0, -1.0], [0.0, 1.0, -1.0, 1.0], [0.0, 0.0, 0.0, 0.0]],
        [[1.0, 1.0, 1.0, 0.0], [-1.0, -1.0, 1.0, 1.0], [0.0, 0.0, 0.0, 0.0]],
    ])
}

/// Singular 4×4×2 operand of index one.
pub fn group_operand() -> Tensor3 {
    Tensor3::from_array([
        [[2.0, 2.0, 0.0, -1.0], [2.0, 4.0, 0.0, 1.0], [0.0, 0.0, 4.0, 1.0], [-1.0, 1.0, 1.0, 3.0]],
        [[0.0, -2.0, 0.0, -2.0], [-2.0, -4.0, 0.0, -1.0], [0.0, 0.0, -4.0, -1.0], [-2.0, -1.0, -1.0, 2.0]],
    ])
}
