use banana_core::invariants::{
    build_table, check_jacobi_identity, check_norm_invariance, gw_from_gv, jacobi_phi, Route,
    SINGULAR_FIBERS,
};
use banana_core::series::{banana_factors, product_expand, ClassVector, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;

#[test]
fn routes_agree_on_capped_range() {
    let maxd = ClassVector::new(2, 3);
    let product = build_table(maxd, Route::Product, 5).unwrap();
    let partitions = build_table(maxd, Route::Partitions, 5).unwrap();
    let oracle = build_table(maxd, Route::Oracle, 5).unwrap();
    assert!(product.same_values(&partitions));
    assert!(product.same_values(&oracle));
}

#[test]
fn signed_column_is_the_signed_product() {
    let maxd = ClassVector::new(7, 7);
    let t = build_table(maxd, Route::Product, 5).unwrap();
    let minus = product_expand(banana_factors(Sign::Minus), maxd).unwrap();
    for (c, e) in t.entries() {
        assert_eq!(e.signed, minus.coeff(c).unwrap() * SINGULAR_FIBERS, "{c}");
    }
}

#[test]
fn naive_column_properties() {
    let t = build_table(ClassVector::new(7, 7), Route::Product, 5).unwrap();
    let zero = BigInt::from(0);
    for (c, e) in t.entries() {
        assert!(e.naive >= zero);
        assert_eq!(&e.naive % 12, zero);
        assert_eq!(Some(&e.naive), t.naive(c.swapped()));
        let sign = if c.total() % 2 == 0 { 1 } else { -1 };
        assert_eq!(e.signed, &e.naive * sign);
    }
}

#[test]
fn identities_hold_on_larger_range() {
    let t = build_table(ClassVector::new(7, 16), Route::Product, 5).unwrap();
    assert!(check_jacobi_identity(&t, &jacobi_phi(7)).passed());
    assert!(check_norm_invariance(&t).passed());
}

#[test]
fn gromov_witten_equals_gopakumar_vafa() {
    let t = build_table(ClassVector::new(4, 4), Route::Product, 5).unwrap();
    for (c, e) in t.entries() {
        assert_eq!(
            gw_from_gv(&t, c).unwrap(),
            BigRational::from(e.signed.clone())
        );
    }
}
