//! Built-in cubic threefolds with integer coefficients.

use alloc::vec::Vec;

use crate::cubic::CubicForm;
use crate::field::FieldDesc;
use crate::form::Monomial;

/// x1 x4^2 + 2 x2 x4 x5 + x3 x5^2 + 2 q1 x4 + 2 q2 x5 + f with
/// q1 = x1^2 + 2 x2^2 + x2 x3 + x3^2, q2 = x1 x2 + 4 x2 x3 + x3^2,
/// f = x2^2 x3 - (x1^3 + 4 x1 x2^2 + 2 x2^3). Contains {x1 = x2 = x3 = 0}.
pub fn example_cubic_terms() -> Vec<(Monomial, i64)> {
    [
        ([1, 0, 0, 2, 0], 1),
        ([0, 1, 0, 1, 1], 2),
        ([0, 0, 1, 0, 2], 1),
        // 2 q1 x4
        ([2, 0, 0, 1, 0], 2),
        ([0, 2, 0, 1, 0], 4),
        ([0, 1, 1, 1, 0], 2),
        ([0, 0, 2, 1, 0], 2),
        // 2 q2 x5
        ([1, 1, 0, 0, 1], 2),
        ([0, 1, 1, 0, 1], 8),
        ([0, 0, 2, 0, 1], 2),
        // f
        ([0, 2, 1, 0, 0], 1),
        ([3, 0, 0, 0, 0], -1),
        ([1, 2, 0, 0, 0], -4),
        ([0, 3, 0, 0, 0], -2),
    ]
    .to_vec()
}

/// Klein cubic x1^2 x2 + x2^2 x3 + x3^2 x4 + x4^2 x5 + x5^2 x1.
pub fn klein_cubic_terms() -> Vec<(Monomial, i64)> {
    [([2, 1, 0, 0, 0], 1), ([0, 2, 1, 0, 0], 1), ([0, 0, 2, 1, 0], 1), ([0, 0, 0, 2, 1], 1), ([1, 0, 0, 0, 2], 1)]
        .to_vec()
}

pub fn example_cubic(field: &FieldDesc) -> CubicForm {
    CubicForm::from_int_terms(field, &example_cubic_terms()).expect("nonzero in odd characteristic")
}

pub fn klein_cubic(field: &FieldDesc) -> CubicForm {
    CubicForm::from_int_terms(field, &klein_cubic_terms()).expect("nonzero cubic")
}
