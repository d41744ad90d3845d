mod common;

#[test]
fn softmax_sums_to_one() {
    common::softmax_normalization().unwrap();
}

#[test]
fn q_values_stay_in_unit_interval() {
    common::q_boundedness().unwrap();
}

#[test]
fn confidence_never_exceeds_limit() {
    common::confidence_ceiling().unwrap();
}

#[test]
fn no_move_joins_two_cold_cells() {
    common::cold_to_cold_impossible().unwrap();
}

#[test]
fn greedy_choice_ignores_affine_rescaling() {
    common::argmax_invariance().unwrap();
}
