use cusp_field::{
    load_field_spec, parse_field_spec, FieldElement, FieldError, FractionalIdeal, NumberField, Rat, UnitSubgroup,
};
use num_bigint::BigInt;
use num_traits::{One, Signed};

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/fields/{name}.toml", env!("CARGO_MANIFEST_DIR"))
}

fn field(name: &str) -> NumberField {
    load_field_spec(fixture(name)).unwrap()
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

fn el(c: &[i64]) -> FieldElement {
    FieldElement::from_ints(c)
}

#[test]
fn every_fixture_loads() {
    let dir = format!("{}/../../fixtures/fields", env!("CARGO_MANIFEST_DIR"));
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let k = load_field_spec(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(k.fundamental_units().len() + 1, k.degree());
        n += 1;
    }
    assert!(n >= 25);
}

#[test]
fn discriminants_from_trace_form() {
    assert_eq!(field("disc473").disc(), &BigInt::from(473));
    assert_eq!(field("sqrt14").disc(), &BigInt::from(56));
    let text = std::fs::read_to_string(fixture("disc473")).unwrap().replace("disc = 473", "disc = 472");
    let err = parse_field_spec(&text).unwrap_err();
    assert!(matches!(err, FieldError::DiscriminantMismatch { .. }));
    assert!(err.to_string().contains("discriminant mismatch"));
}

#[test]
fn schema_and_invariant_errors() {
    let base = std::fs::read_to_string(fixture("disc473")).unwrap();
    let missing = base.replace("class_number = 1\n", "");
    assert!(matches!(parse_field_spec(&missing), Err(FieldError::Schema(_))));
    let bad_unit = base.replace(r#"["2", "1", "0"]"#, r#"["3", "1", "0"]"#);
    assert!(matches!(parse_field_spec(&bad_unit), Err(FieldError::Invariant(_))));
    let not_closed = base.replace(r#"["0", "0", "1"]]"#, r#"["0", "0", "1/2"]]"#);
    assert!(parse_field_spec(&not_closed).is_err());
}

#[test]
fn traces() {
    let k = field("disc473");
    assert_eq!(k.trace(&k.one()), r(3, 1));
    assert_eq!(k.trace(&k.theta()), r(0, 1));
    let k404 = field("disc404");
    assert_eq!(k404.trace(&k404.theta()), r(1, 1));
    // companion-matrix oracle: Tr(theta^2) = e1^2 - 2 e2
    assert_eq!(k.trace(&k.mul(&k.theta(), &k.theta())), r(10, 1));
}

#[test]
fn multiplication_matches_polynomials() {
    let k = field("disc473");
    let t = k.theta();
    let t3 = k.mul(&k.mul(&t, &t), &t);
    // theta^3 = 5 theta + 1
    assert_eq!(t3, el(&[1, 5, 0]));
    let x = el(&[2, -1, 3]);
    let inv = k.inverse(&x).unwrap();
    assert_eq!(k.mul(&x, &inv), k.one());
    assert_eq!(k.norm(&k.theta()), r(1, 1));
}

#[test]
fn signs() {
    let k = field("disc473");
    assert_eq!(k.signs(&k.theta()).unwrap().to_string(), "(-,-,+)");
    assert_eq!(k.signs(&-&k.one()).unwrap().to_string(), "(-,-,-)");
    let k7 = field("sqrt7");
    assert!(k7.signs(&el(&[3, -1])).unwrap().all_positive());
    assert!(k7.signs(&el(&[3, 1])).unwrap().all_positive());
    assert!(matches!(k.signs(&k.zero()), Err(FieldError::ZeroElement)));
    // 8 - 3 sqrt7 exceeds 1 where sqrt7 maps to the negative root
    let u = el(&[8, -3]);
    assert_eq!(k7.compare_embedding(&u, 0, &Rat::one()), 1);
    assert_eq!(k7.compare_embedding(&u, 1, &Rat::one()), -1);
}

#[test]
fn totally_positive_units() {
    let k = field("disc473");
    let data = k.totally_positive_units();
    assert_eq!(data.tp_index_sq, 1);
    let sq = UnitSubgroup::squares(&k);
    assert_eq!(sq.index(), 1);
    for g in &data.tp_generators {
        assert!(k.is_totally_positive(g));
    }
    // 761: generated by t and (t-2)^2
    let k = field("disc761");
    let data = k.totally_positive_units();
    assert_eq!(data.tp_index_sq, 2);
    let t = k.theta();
    let t2 = &t - &k.rational(r(2, 1));
    let expected = [t.clone(), k.mul(&t2, &t2)];
    assert_eq!(same_unit_group(&k, &data.tp_generators, &expected), true);
}

/// Two lists of units generate the same group: compare exponent lattices over the fundamental units.
fn same_unit_group(k: &NumberField, a: &[FieldElement], b: &[FieldElement]) -> bool {
    let contains = |gens: &[FieldElement], x: &FieldElement| -> bool {
        // brute force: x = prod g^e with |e| <= 4
        let n = gens.len();
        let mut e = vec![-4i64; n];
        loop {
            let mut p = k.one();
            for (g, ei) in gens.iter().zip(&e) {
                p = k.mul(&p, &k.pow(g, *ei).unwrap());
            }
            if &p == x {
                return true;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return false;
                }
                if e[i] < 4 {
                    e[i] += 1;
                    break;
                }
                e[i] = -4;
                i += 1;
            }
        }
    };
    a.iter().all(|x| contains(b, x)) && b.iter().all(|x| contains(a, x))
}

#[test]
fn ideal_arithmetic() {
    let k = field("disc473");
    let one = FractionalIdeal::unit(3);
    assert_eq!(one.minimum(), r(1, 1));
    let i = FractionalIdeal::from_generators(&k, &[el(&[3, 1, 0])]).unwrap();
    assert_eq!(i.mul(&k, &i.inverse(&k).unwrap()), one);
    assert_eq!(i.norm(), k.norm(&el(&[3, 1, 0])).abs());
    let codiff = FractionalIdeal::codifferent(&k);
    assert_eq!(codiff.norm(), r(1, 473));
    assert_eq!(codiff, one.trace_dual(&k));
    assert_eq!(codiff.trace_dual(&k), one);
    let half = one.scale(&r(1, 2)).unwrap();
    assert_eq!(half.minimum(), r(1, 2));
    assert_eq!(half.norm(), r(1, 8));
}

#[test]
fn prime_of_norm_two_has_min_two() {
    // 2 ramifies in Q(sqrt 7): (2, 1 + sqrt7)
    let k = field("sqrt7");
    let p = FractionalIdeal::from_generators(&k, &[el(&[2, 0]), el(&[1, 1])]).unwrap();
    assert_eq!(p.norm(), r(2, 1));
    assert_eq!(p.minimum(), r(2, 1));
}

#[test]
fn divisors_in_cyclotomic_cubic() {
    let k = field("disc49");
    let one = FractionalIdeal::unit(3);
    assert_eq!(k.divisors(&one).unwrap(), vec![one.clone()]);
    let two = one.scale(&r(2, 1)).unwrap();
    let ds = k.divisors(&two).unwrap();
    assert_eq!(ds, vec![one.clone(), two.clone()]);
    let p7 = k.primes_above(7).unwrap();
    assert_eq!(p7.len(), 1);
    assert_eq!(p7[0].ramification, 3);
    let p7sq = p7[0].ideal.mul(&k, &p7[0].ideal);
    let ds = k.divisors(&p7sq).unwrap();
    assert_eq!(ds, vec![one, p7[0].ideal.clone(), p7sq]);
}

#[test]
fn narrow_principality() {
    let k3 = field("sqrt3");
    let one = FractionalIdeal::unit(2);
    assert_eq!(k3.narrowly_principal(&one).unwrap(), Some(k3.one()));
    let rt3 = FractionalIdeal::principal(&k3, &el(&[0, 1])).unwrap();
    assert_eq!(k3.narrowly_principal(&rt3).unwrap(), None);
    let k7 = field("sqrt7");
    let two = FractionalIdeal::principal(&k7, &k7.mul(&el(&[3, -1]), &el(&[3, 1]))).unwrap();
    let g = k7.narrowly_principal(&two).unwrap().unwrap();
    assert!(k7.is_totally_positive(&g));
    assert_eq!(FractionalIdeal::principal(&k7, &g).unwrap(), two);
    assert_eq!(k3.narrow_class_group().unwrap().order(), 2);
}

#[test]
fn signed_units_in_q_sqrt7() {
    let k = field("sqrt7");
    let v = UnitSubgroup::full(&k);
    let s = k.find_signed_units(&v).unwrap();
    assert_eq!(s.s_pm.len(), 2);
    assert_eq!(k.mul(&s.s_pm[0].1, &s.s_pm[1].1), k.one());
    // iu at place 0 is 8 - 3 sqrt7
    assert_eq!(s.iu[0], el(&[8, -3]));
}

#[test]
fn rational_primes_factor_completely() {
    let k = field("disc473");
    for p in [2u64, 3, 5, 7, 11, 43, 101, 1_000_003] {
        let ps = k.primes_above(p).unwrap();
        let total: u32 = ps.iter().map(|q| q.residue_degree * q.ramification).sum();
        assert_eq!(total, 3, "p = {p}");
        let pi = FractionalIdeal::unit(3).scale(&r(p as i64, 1)).unwrap();
        let fac = k.factor_ideal(&pi).unwrap();
        let prod = fac.iter().fold(FractionalIdeal::unit(3), |acc, (q, e)| acc.mul(&k, &q.ideal.pow(&k, *e).unwrap()));
        assert_eq!(prod, pi);
    }
}
