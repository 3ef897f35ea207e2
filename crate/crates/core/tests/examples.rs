use num_bigint::BigInt;
use verlinde::arith::rational::{int, rat};
use verlinde::oracle::{float_eval_pgl_total, float_eval_sl, PrecisionConfig};
use verlinde::smatrix::{cft_total, s_row_pgl};
use verlinde::verlinde::{
    pgl_dimension, pgl_total, remark_n1, sl_dimension, sl_dimension_sum, sym_power_trace,
    trace_alpha, ModuliQuery,
};
use verlinde::weights::{
    enumerate_pk, enumerate_tk, enumerate_tk_prime, is_root_lattice, DominantWeight, LevelContext,
};
use verlinde::CycloElem;

fn q(r: usize, d: i64, k: usize, g: usize) -> ModuliQuery {
    ModuliQuery::new(r, d, k, g).unwrap()
}

fn z(n: usize, e: i64) -> CycloElem {
    CycloElem::root_of_unity(n, e).unwrap()
}

#[test]
fn cyclotomic_identities() {
    assert_eq!(z(4, 2).as_rational(), Some(int(-1)));
    assert_eq!(z(3, 1).pow(3), CycloElem::one(3).unwrap());
    let one = CycloElem::one(3).unwrap();
    let a = one.try_add(&z(3, 1)).unwrap();
    let b = one.try_add(&z(3, 2)).unwrap();
    assert_eq!(a.try_mul(&b).unwrap(), one);
    assert_eq!(a.inverse().unwrap(), z(3, 1).neg());
    assert_eq!(z(4, 1).conj(), z(4, 3));
    let s = CycloElem::from_exponent_sum(5, (1..5).map(|e| (e, BigInt::from(1)))).unwrap();
    assert_eq!(s.as_rational(), Some(int(-1)));
    assert_eq!(z(3, 1).as_rational(), None);
}

#[test]
fn weight_sets() {
    let c = LevelContext::new(3, 3).unwrap();
    assert_eq!(enumerate_pk(&c).len(), 10);
    assert_eq!(enumerate_tk_prime(&c).len(), 4);
    let in_lattice = enumerate_pk(&c)
        .iter()
        .filter(|w| is_root_lattice(&c, w))
        .count();
    assert_eq!(in_lattice, 4);
    assert!(!is_root_lattice(&c, &DominantWeight::new(vec![1, 0])));
    let c = LevelContext::new(2, 4).unwrap();
    let exps: Vec<Vec<i64>> = enumerate_tk_prime(&c)
        .iter()
        .map(|p| p.exponents().to_vec())
        .collect();
    assert_eq!(exps, vec![vec![1, -1], vec![3, -3], vec![5, -5]]);
    assert_eq!(enumerate_tk(&LevelContext::new(3, 0).unwrap()).len(), 1);
}

#[test]
fn dimension_pins() {
    assert_eq!(sl_dimension(&q(2, 0, 0, 2)).unwrap().value, int(1));
    assert_eq!(sl_dimension(&q(2, 0, 1, 2)).unwrap().value, int(4));
    assert_eq!(sl_dimension(&q(2, 0, 4, 2)).unwrap().value, int(35));
    assert_eq!(sl_dimension(&q(2, 1, 4, 2)).unwrap().value, int(19));
    assert_eq!(sl_dimension_sum(2, 4, 2).unwrap().value, int(54));
    assert_eq!(sl_dimension_sum(2, 0, 2).unwrap().value, int(2));
    assert_eq!(sl_dimension_sum(3, 0, 2).unwrap().value, int(3));
    assert_eq!(pgl_dimension(&q(2, 0, 4, 2)).unwrap().value, int(5));
    assert_eq!(pgl_dimension(&q(2, 1, 4, 2)).unwrap().value, int(4));
    for (r, d, g) in [(2, 0, 2), (2, 1, 3), (3, 2, 2), (5, 4, 3)] {
        assert_eq!(pgl_dimension(&q(r, d, 0, g)).unwrap().value, int(1));
    }
    assert_eq!(pgl_total(2, 4, 2).unwrap().value, int(9));
    assert_eq!(pgl_total(2, 0, 2).unwrap().value, int(2));
    assert_eq!(pgl_total(3, 0, 2).unwrap().value, int(3));
}

#[test]
fn traces() {
    assert_eq!(trace_alpha(&q(2, 1, 4, 2)).unwrap(), int(3));
    assert_eq!(trace_alpha(&q(2, 0, 4, 2)).unwrap(), int(3));
    assert_eq!(trace_alpha(&q(3, 0, 3, 2)).unwrap(), int(4));
    assert_eq!(sym_power_trace(3, 3), int(1));
    assert_eq!(sym_power_trace(3, 4), int(0));
    assert_eq!(sym_power_trace(2, 0), int(1));
}

#[test]
fn invalid_queries_name_the_hypothesis() {
    let e = sl_dimension(&q(2, 1, 3, 2)).unwrap_err();
    assert!(e.is_invalid_input());
    assert!(e.to_string().contains("multiple"));
    assert!(pgl_dimension(&q(4, 0, 8, 2))
        .unwrap_err()
        .to_string()
        .contains("prime"));
    assert!(pgl_total(2, 2, 2).unwrap_err().is_invalid_input());
    assert!(sl_dimension(&q(2, 0, 4, 1)).unwrap_err().is_invalid_input());
    assert!(remark_n1(3, 4).unwrap_err().is_invalid_input());
}

#[test]
fn smatrix_and_cft() {
    let row = s_row_pgl(&LevelContext::new(2, 4).unwrap()).unwrap();
    assert!(row
        .iter()
        .all(|e| e.s0_squared.as_rational() == Some(rat(1, 3))));
    assert_eq!(cft_total(2, 4, 2).unwrap(), int(9));
    assert_eq!(cft_total(2, 0, 2).unwrap(), int(2));
    assert_eq!(
        cft_total(3, 3, 2).unwrap(),
        pgl_total(3, 3, 2).unwrap().value
    );
}

#[test]
fn oracle_pins() {
    let cfg = PrecisionConfig::default();
    assert!(cfg.agrees(&float_eval_sl(&q(2, 0, 4, 2), &cfg).unwrap(), &int(35)));
    assert!(cfg.agrees(&float_eval_pgl_total(2, 4, 2, &cfg).unwrap(), &int(9)));
    let tight = PrecisionConfig::new(256, 1e-30, 1e-40).unwrap();
    assert!(tight.agrees(&float_eval_sl(&q(2, 0, 0, 2), &tight).unwrap(), &int(1)));
}
