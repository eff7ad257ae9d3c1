use cusp_polytope::{int, rat, union_volume, HalfSpace, RationalPolytope, Rat};

fn corner_simplex(w: &[i64], bound: i64) -> RationalPolytope {
    let d = w.len();
    let mut hs: Vec<HalfSpace> = (0..d).map(|i| HalfSpace::lower(d, i, int(1))).collect();
    hs.push(HalfSpace::from_i64(w, bound).unwrap());
    RationalPolytope::new(d, hs).unwrap()
}

fn translated_cube(shift: i64) -> RationalPolytope {
    let mut hs = Vec::new();
    for i in 0..3 {
        let s = if i == 0 { shift } else { 0 };
        hs.push(HalfSpace::lower(3, i, int(s)));
        hs.push(HalfSpace::upper(3, i, int(s + 1)));
    }
    RationalPolytope::new(3, hs).unwrap()
}

fn shoelace(pts: &[(Rat, Rat)]) -> Rat {
    let n = pts.len();
    let mut s = int(0);
    for i in 0..n {
        let (x0, y0) = &pts[i];
        let (x1, y1) = &pts[(i + 1) % n];
        s += x0 * y1 - x1 * y0;
    }
    if s < int(0) {
        -s / int(2)
    } else {
        s / int(2)
    }
}

#[test]
fn cube_has_eight_vertices() {
    let c = RationalPolytope::cube(3, int(0), int(1));
    let v = c.vertices().unwrap();
    assert_eq!(v.len(), 8);
    assert!(v.contains(&vec![int(1), int(0), int(1)]));
}

#[test]
fn triangle_recovered_from_its_edges() {
    // -x - 4y <= 0, -x + 4y <= 0, 8x + 28y <= 1
    let p = RationalPolytope::new(
        2,
        vec![
            HalfSpace::from_i64(&[-1, -4], 0).unwrap(),
            HalfSpace::from_i64(&[-1, 4], 0).unwrap(),
            HalfSpace::from_i64(&[8, 28], 1).unwrap(),
        ],
    )
    .unwrap();
    let v = p.vertices().unwrap();
    let expected = vec![vec![int(0), int(0)], vec![rat(1, 15), rat(1, 60)], vec![int(1), rat(-1, 4)]];
    assert_eq!(v, expected);
    let area = shoelace(&[(int(0), int(0)), (int(1), rat(-1, 4)), (rat(1, 15), rat(1, 60))]);
    assert_eq!(p.volume().unwrap(), area);
}

#[test]
fn quotient_simplex_volumes() {
    assert_eq!(corner_simplex(&[1, 3, 2], 7).volume().unwrap(), rat(1, 36));
    assert_eq!(corner_simplex(&[1, 2, 4], 9).volume().unwrap(), rat(1, 6));
    assert_eq!(corner_simplex(&[5, 1, 2], 9).volume().unwrap(), rat(1, 60));
}

#[test]
fn nested_quotient_simplices() {
    let big = corner_simplex(&[1, 2, 4], 9);
    let small = corner_simplex(&[5, 1, 2], 9);
    assert!(small.is_subset(&big).unwrap());
    assert!(!big.is_subset(&small).unwrap());
    let u = union_volume(&[big, small]).unwrap();
    assert_eq!(u.volume, rat(1, 6));
    assert_eq!(u.redundant, vec![1]);
}

#[test]
fn subset_of_translate_is_false() {
    let c = translated_cube(0);
    assert!(c.is_subset(&c).unwrap());
    assert!(!c.is_subset(&translated_cube(2)).unwrap());
}

#[test]
fn disjoint_cubes_union() {
    let u = union_volume(&[translated_cube(0), translated_cube(2)]).unwrap();
    assert_eq!(u.volume, int(2));
    assert_eq!(u.passes, 0);
}

#[test]
fn overlapping_squares_union() {
    // [0,2]^2 and [1,3]^2 overlap in a unit square
    let sq = |lo: i64| RationalPolytope::cube(2, int(lo), int(lo + 2));
    let u = union_volume(&[sq(0), sq(1)]).unwrap();
    assert_eq!(u.volume, int(7));
    assert!(u.passes >= 1);
}

#[test]
fn empty_polytope_has_no_points() {
    let p = RationalPolytope::cube(2, int(0), int(1)).with(HalfSpace::from_i64(&[1, 1], -1).unwrap());
    assert!(p.is_empty());
    assert!(cusp_polytope::integer_points(&p).unwrap().is_empty());
    assert_eq!(p.volume().unwrap(), int(0));
}

#[test]
fn scaled_simplex_volume() {
    let p = corner_simplex(&[1, 3, 2], 7);
    for q in 1..5 {
        assert_eq!(p.scale(&int(q)).volume().unwrap(), rat(q * q * q, 36));
    }
}
