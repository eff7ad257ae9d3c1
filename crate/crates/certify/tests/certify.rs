use cusp_certify::{
    explicit_cusp_structure, kodaira_lower_bound, level_index, tsuyumine_grundman_check, tsuyumine_grundman_for_field,
    unit_congruence_index, Certifier, Criterion, ExplicitCusp, Level, ModularGroup, TgOutcome, Verdict,
};
use cusp_defects::CuspType;
use cusp_field::{load_field_spec, FractionalIdeal, Interval, NumberField, Rat, UnitSubgroup};
use num_bigint::BigInt;

fn field(name: &str) -> NumberField {
    load_field_spec(format!("{}/../../fixtures/fields/{name}.toml", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn prime(k: &NumberField, p: u64, norm: u64) -> FractionalIdeal {
    k.primes_above(p).unwrap().iter().find(|q| q.norm() == norm).unwrap().ideal.clone()
}

fn integer(k: &NumberField, n: i64) -> FractionalIdeal {
    FractionalIdeal::principal(k, &k.rational(rat(n, 1))).unwrap()
}

fn level(label: &str, ideal: FractionalIdeal) -> Level {
    Level { label: label.into(), ideal }
}

#[test]
fn level_indices() {
    let k = field("disc49");
    let p7 = prime(&k, 7, 7);
    assert_eq!(level_index(&k, &p7.mul(&k, &p7)).unwrap(), BigInt::from(56));
    assert_eq!(level_index(&k, &integer(&k, 4)).unwrap(), BigInt::from(72));
    assert_eq!(level_index(&k, &FractionalIdeal::unit(3)).unwrap(), BigInt::from(1));
    let k9 = field("disc81");
    assert_eq!(level_index(&k9, &integer(&k9, 3)).unwrap(), BigInt::from(36));
    let k148 = field("disc148");
    let p2 = prime(&k148, 2, 2);
    assert_eq!(level_index(&k148, &p2.pow(&k148, 3).unwrap()).unwrap(), BigInt::from(12));
}

#[test]
fn unit_congruence_indices() {
    let k = field("disc49");
    assert_eq!(unit_congruence_index(&k, &prime(&k, 7, 7)).unwrap(), 3);
    assert_eq!(unit_congruence_index(&k, &integer(&k, 2)).unwrap(), 7);
    assert_eq!(unit_congruence_index(&k, &FractionalIdeal::unit(3)).unwrap(), 1);
    let k9 = field("disc81");
    let p3 = prime(&k9, 3, 3);
    assert_eq!(unit_congruence_index(&k9, &p3).unwrap(), 1);
    assert_eq!(unit_congruence_index(&k9, &p3.pow(&k9, 2).unwrap()).unwrap(), 3);
    let k148 = field("disc148");
    assert_eq!(unit_congruence_index(&k148, &prime(&k148, 2, 2).pow(&k148, 2).unwrap()).unwrap(), 1);
}

#[test]
fn level_one_certificates() {
    let k = field("disc473");
    let c = Certifier::new(&k).general_type_certificate("principal").unwrap();
    assert_eq!((c.lhs.clone(), c.rhs.clone(), c.verdict), (rat(10, 3), rat(79, 24), Verdict::GeneralType));
    assert!(c.recheck());
    let k = field("disc404");
    let c = Certifier::new(&k).general_type_certificate("principal").unwrap();
    assert_eq!((c.lhs.clone(), c.rhs.clone(), c.verdict), (rat(10, 3), rat(143, 36), Verdict::Inconclusive));
    assert!(c.recheck());
}

#[test]
fn disc1957_two_cusps_per_genus() {
    let k = field("disc1957");
    let cert = Certifier::new(&k);
    let sq = UnitSubgroup::squares(&k);
    let reps = k.narrow_class_reps();
    let got: Vec<Rat> =
        reps.iter().map(|r| cert.constant(&CuspType::new(r.ideal.clone(), sq.clone())).unwrap()).collect();
    assert_eq!(got, vec![rat(34, 3), rat(71, 18), rat(44, 15), rat(103, 18)]);

    let p = cert.general_type_certificate_for("principal", ModularGroup::Sl2).unwrap();
    assert_eq!(p.lhs, rat(104, 3));
    assert_eq!(p.rhs, rat(34, 3) + rat(44, 15));
    assert_eq!(p.verdict, Verdict::GeneralType);
    let n = cert.general_type_certificate_for("nonprincipal", ModularGroup::Sl2).unwrap();
    assert_eq!(n.rhs, rat(71, 18) + rat(103, 18));
    assert_eq!(n.verdict, Verdict::GeneralType);

    // squares have index 2 in O_+ here
    let g = cert.general_type_certificate("principal").unwrap();
    assert_eq!(g.lhs, rat(52, 3));
    assert_eq!(&g.rhs * rat(2, 1), p.rhs);
    assert!(g.recheck() && p.recheck() && n.recheck());
    assert_eq!(g.verdict, Verdict::GeneralType);
}

#[test]
fn prime_level_certificates() {
    let k = field("disc49");
    let cert = Certifier::new(&k);
    let c = cert.prime_level_certificate("principal", &level("p13", prime(&k, 13, 13))).unwrap();
    assert_eq!((c.lhs.clone(), c.rhs.clone(), c.verdict), (rat(4, 3), rat(5, 6), Verdict::GeneralType));
    let c = cert.prime_level_certificate("principal", &level("p7", prime(&k, 7, 7))).unwrap();
    assert_eq!((c.lhs.clone(), c.rhs.clone(), c.verdict), (rat(16, 21), rat(71, 84), Verdict::Inconclusive));
    let k = field("disc148");
    let c = Certifier::new(&k).prime_level_certificate("principal", &level("p2", prime(&k, 2, 2))).unwrap();
    assert_eq!((c.lhs.clone(), c.rhs.clone(), c.verdict), (rat(2, 1), rat(55, 18), Verdict::Inconclusive));
    assert!(c.recheck());
    assert!(Certifier::new(&field("disc1957")).prime_level_certificate("principal", &level("p2", prime(&field("disc1957"), 2, 2))).is_err());
}

#[test]
fn prime_level_is_monotone_in_norm() {
    let k = field("disc148");
    let cert = Certifier::new(&k);
    let mut rows = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        for q in k.primes_above(p).unwrap().iter() {
            let c = cert.prime_level_certificate("principal", &level("p", q.ideal.clone())).unwrap();
            rows.push((q.norm(), c.verdict == Verdict::GeneralType));
        }
    }
    rows.sort();
    for w in rows.windows(2) {
        assert!(!w[0].1 || w[1].1, "{rows:?}");
    }
    assert!(rows.iter().any(|r| r.1) && rows.iter().any(|r| !r.1));
}

#[test]
fn hand_analysed_levels() {
    let one = |k: &NumberField| ExplicitCusp { modulus: FractionalIdeal::unit(k.degree()), declared_index: Some(1) };
    let k = field("disc49");
    let cert = Certifier::new(&k);
    let p7 = prime(&k, 7, 7);
    let mod_p7 = ExplicitCusp { modulus: p7.clone(), declared_index: Some(3) };
    let cusps = explicit_cusp_structure(&k, "principal", &[one(&k), one(&k), mod_p7.clone(), mod_p7]).unwrap();
    let c = cert.asymptotic_certificate("principal", &level("p7^2", p7.mul(&k, &p7)), &cusps).unwrap();
    assert_eq!((c.lhs.clone(), c.rhs.clone(), c.verdict), (rat(16, 3), rat(8 * 5, 12), Verdict::GeneralType));

    let mod_2 = ExplicitCusp { modulus: integer(&k, 2), declared_index: Some(7) };
    let cusps = explicit_cusp_structure(&k, "principal", &[one(&k), one(&k), mod_2]).unwrap();
    let c = cert.asymptotic_certificate("principal", &level("(4)", integer(&k, 4)), &cusps).unwrap();
    assert_eq!(c.lhs, rat(48, 7));
    assert_eq!(c.rhs, rat(9 * 5, 12) + rat(6, 252));
    assert_eq!(c.verdict, Verdict::GeneralType);

    let wrong = ExplicitCusp { modulus: p7.clone(), declared_index: Some(2) };
    assert!(explicit_cusp_structure(&k, "principal", &[wrong]).is_err());
    assert!(c.recheck());
    let mut forged = c.clone();
    forged.rhs = rat(1, 1);
    assert!(!forged.recheck());

    let k9 = field("disc81");
    let cert = Certifier::new(&k9);
    let p3sq = prime(&k9, 3, 3).pow(&k9, 2).unwrap();
    let three = ExplicitCusp { modulus: p3sq, declared_index: Some(3) };
    let cusps =
        explicit_cusp_structure(&k9, "principal", &[one(&k9), three.clone(), three, one(&k9), one(&k9), one(&k9)]).unwrap();
    let c = cert.asymptotic_certificate("principal", &level("(3)", integer(&k9, 3)), &cusps).unwrap();
    assert_eq!((c.lhs.clone(), c.rhs.clone(), c.verdict), (rat(8, 1), rat(30, 4), Verdict::GeneralType));
}

#[test]
fn weight_bounds() {
    let c = kodaira_lower_bound("404", "principal", "(1)", &[(4, 13)], &[(4, 12)], "ingested").unwrap();
    assert_eq!(c.verdict, Verdict::KappaAtLeastZero);
    assert_eq!(c.criterion, Criterion::Weight { weight: 4 });
    let c = kodaira_lower_bound("469", "principal", "(1)", &[(4, 15)], &[(4, 12)], "ingested").unwrap();
    assert_eq!(c.verdict, Verdict::KappaAtLeastOne);
    let c = kodaira_lower_bound("229", "nonprincipal", "(1)", &[(4, 6)], &[(4, 5)], "ingested").unwrap();
    assert_eq!(c.verdict, Verdict::KappaAtLeastZero);
    let c = kodaira_lower_bound("49", "principal", "(2)", &[(4, 6)], &[(4, 4)], "ingested").unwrap();
    assert_eq!(c.verdict, Verdict::KappaAtLeastOne);
    let c = kodaira_lower_bound("469", "principal", "(1)", &[(4, 15), (6, 64), (8, 172)], &[(4, 12), (6, 60), (8, 170)], "ingested")
        .unwrap();
    assert_eq!((c.criterion.clone(), c.verdict), (Criterion::Weight { weight: 6 }, Verdict::KappaAtLeastOne));
    let c = kodaira_lower_bound("x", "principal", "(1)", &[(4, 3)], &[(4, 5)], "ingested").unwrap();
    assert_eq!(c.verdict, Verdict::Inconclusive);
    assert!(c.recheck());
    assert!(kodaira_lower_bound("x", "p", "(1)", &[(4, 3)], &[(6, 5)], "ingested").is_err());
}

#[test]
fn tsuyumine_grundman() {
    assert_eq!(tsuyumine_grundman_for_field(&field("disc1957")), Some(TgOutcome::Fails));
    assert_eq!(tsuyumine_grundman_for_field(&field("disc473")), Some(TgOutcome::Fails));
    // 16 pi^6 / 27 = 569.7121...
    let wide = Interval::new(rat(0, 1), rat(1000, 1));
    let one = Interval::point(rat(1, 1));
    assert_eq!(tsuyumine_grundman_check(&BigInt::from(1), &wide, 1, &one), TgOutcome::Undecidable);
    let big = Interval::point(rat(570, 1));
    assert_eq!(tsuyumine_grundman_check(&BigInt::from(1), &big, 1, &one), TgOutcome::Passes);
    let small = Interval::point(rat(569, 1));
    assert_eq!(tsuyumine_grundman_check(&BigInt::from(1), &small, 1, &one), TgOutcome::Fails);
}

#[test]
fn pi6_enclosure_is_tight() {
    let p = cusp_certify::pi6_enclosure();
    assert!(p.width() < rat(1, 1) / Rat::from_integer(BigInt::from(10u32).pow(20)));
    let approx = std::f64::consts::PI.powi(6);
    assert!((p.to_f64() - approx).abs() < 1e-9);
}
