use cusp_field::{load_field_spec, FieldElement, FractionalIdeal, NumberField, Rat};
use num_traits::Signed;
use proptest::prelude::*;
use std::sync::OnceLock;

fn k473() -> &'static NumberField {
    static K: OnceLock<NumberField> = OnceLock::new();
    K.get_or_init(|| load_field_spec(format!("{}/../../fixtures/fields/disc473.toml", env!("CARGO_MANIFEST_DIR"))).unwrap())
}

fn k761() -> &'static NumberField {
    static K: OnceLock<NumberField> = OnceLock::new();
    K.get_or_init(|| load_field_spec(format!("{}/../../fixtures/fields/disc761.toml", env!("CARGO_MANIFEST_DIR"))).unwrap())
}

fn elem() -> impl Strategy<Value = FieldElement> {
    prop::collection::vec(-20i64..=20, 3).prop_map(|c| FieldElement::from_ints(&c))
}

fn nonzero() -> impl Strategy<Value = FieldElement> {
    elem().prop_filter("nonzero", |x| !x.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_is_linear_and_form_is_symmetric(x in elem(), y in elem()) {
        let k = k473();
        prop_assert_eq!(k.trace(&(&x + &y)), k.trace(&x) + k.trace(&y));
        prop_assert_eq!(k.trace(&k.mul(&x, &y)), k.trace(&k.mul(&y, &x)));
    }

    #[test]
    fn signs_are_multiplicative(x in nonzero(), y in nonzero()) {
        let k = k761();
        let sx = k.signs(&x).unwrap();
        let sy = k.signs(&y).unwrap();
        prop_assert_eq!(k.signs(&k.mul(&x, &y)).unwrap(), sx.mul(&sy));
        prop_assert!(k.signs(&k.mul(&x, &x)).unwrap().all_positive());
    }

    #[test]
    fn norm_is_multiplicative(x in nonzero(), y in nonzero()) {
        let k = k473();
        let i = FractionalIdeal::principal(k, &x).unwrap();
        let j = FractionalIdeal::principal(k, &y).unwrap();
        prop_assert_eq!(i.mul(k, &j).norm(), i.norm() * j.norm());
        prop_assert_eq!(i.norm(), k.norm(&x).abs());
    }

    #[test]
    fn dual_is_an_inclusion_reversing_involution(x in nonzero(), y in nonzero()) {
        let k = k473();
        let i = FractionalIdeal::principal(k, &x).unwrap();
        let j = i.mul(k, &FractionalIdeal::principal(k, &y).unwrap());
        prop_assert_eq!(i.trace_dual(k).trace_dual(k), i.clone());
        // J ⊆ I so I^ ⊆ J^
        prop_assert!(i.contains_ideal(&j));
        prop_assert!(j.trace_dual(k).contains_ideal(&i.trace_dual(k)));
    }

    #[test]
    fn min_scales_with_rationals(x in nonzero(), p in 1i64..30, q in 1i64..30, neg in any::<bool>()) {
        let k = k473();
        let i = FractionalIdeal::principal(k, &x).unwrap();
        let r = Rat::new((if neg { -p } else { p }).into(), q.into());
        prop_assert_eq!(i.scale(&r).unwrap().minimum(), r.abs() * i.minimum());
    }

    #[test]
    fn narrow_generators_are_exact(x in nonzero()) {
        let k = k761();
        let i = FractionalIdeal::principal(k, &x).unwrap();
        prop_assume!(i.norm().numer() < &num_bigint::BigInt::from(2000));
        if let Some(g) = k.narrowly_principal(&i).unwrap() {
            prop_assert!(k.is_totally_positive(&g));
            prop_assert_eq!(FractionalIdeal::principal(k, &g).unwrap(), i);
        } else {
            // (x) is principal, so no unit fixes the signs of x
            prop_assert!(!k.is_totally_positive(&x));
        }
    }
}
