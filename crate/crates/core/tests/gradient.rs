mod common;

use hqn::mlp::Cost;

#[test]
fn cross_entropy_gradient_matches_finite_differences() {
    let err = common::max_gradient_error(Cost::CrossEntropy, 20);
    assert!(err < 1e-4, "max relative error {err:e}");
}

#[test]
fn squared_error_gradient_matches_finite_differences() {
    let err = common::max_gradient_error(Cost::SumSquaredError, 20);
    assert!(err < 1e-4, "max relative error {err:e}");
}
