use num_bigint::BigInt;
use proptest::prelude::*;
use torivan::cohomology::{
    active_set, nerve, pieces_intersect, reduced_ranks, search_box, total_cohomology_with,
    CohomologyOptions, CohomologyReport,
};
use torivan::divisor::{
    blowup_pullback, div_of_character, linearly_equivalent, picard_normal_form, pullback_refinement,
};
use torivan::lattice_fan::{
    make_blowup_fan, make_projective_fan, pair, refinement_map, star_subdivide, validate_fan, walls,
};
use torivan::positivity::{canonical_divisor, is_ample, kodaira_precondition, positivity};
use torivan::{BlowupLayout, Character, Fan, ToricDivisor};

fn fan_for(n: usize, points: usize) -> Fan {
    if points == 0 {
        make_projective_fan(n).unwrap()
    } else {
        make_blowup_fan(n, points).unwrap()
    }
}

/// `(n, points)` pairs small enough for full cohomology in debug builds.
fn small_fan() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((3, 0)), Just((3, 1)), Just((3, 2)), Just((3, 3))]
}

fn divisor_on(rays: usize, range: i64) -> impl Strategy<Value = ToricDivisor> {
    prop::collection::vec(-range..=range, rays).prop_map(|c| ToricDivisor::from_i64s(&c))
}

fn fan_and_divisor(range: i64) -> impl Strategy<Value = (Fan, ToricDivisor)> {
    small_fan().prop_flat_map(move |(n, p)| {
        let fan = fan_for(n, p);
        let k = fan.rays().len();
        (Just(fan), divisor_on(k, range))
    })
}

fn character(n: usize, range: i64) -> impl Strategy<Value = Character> {
    prop::collection::vec(-range..=range, n).prop_map(|c| Character::from_i64s(&c))
}

fn opts(margin: u32) -> CohomologyOptions {
    CohomologyOptions {
        margin,
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn subdivisions_stay_smooth_complete_refinements(n in 3usize..=4, picks in prop::collection::vec(0usize..64, 1..4)) {
        let coarse = make_projective_fan(n).unwrap();
        let mut fan = coarse.clone();
        for p in picks {
            let cone = fan.max_cones()[p % fan.max_cones().len()].clone();
            fan = star_subdivide(&fan, &cone).unwrap();
            prop_assert!(validate_fan(&fan).is_smooth_complete());
        }
        let map = refinement_map(&fan, &coarse).unwrap();
        prop_assert_eq!(map.len(), fan.max_cones().len());
    }

    #[test]
    fn walls_pair_up_every_facet((n, p) in prop_oneof![small_fan(), Just((4, 2)), Just((4, 5))]) {
        let fan = fan_for(n, p);
        let ws = walls(&fan).unwrap();
        prop_assert_eq!(2 * ws.len(), n * fan.max_cones().len());
        for w in &ws {
            prop_assert_eq!(w.shared_rays.len(), n - 1);
            prop_assert!(w.left != w.right);
        }
    }

    #[test]
    fn pullback_matches_closed_form(n in 3usize..=4, points in 1usize..=5, lambda in prop::collection::vec(-9i64..=9, 5)) {
        let points = points.min(n + 1);
        let lambda = &lambda[..=n];
        let fine = make_blowup_fan(n, points).unwrap();
        let coarse = make_projective_fan(n).unwrap();
        let generic = pullback_refinement(&fine, &coarse, &ToricDivisor::from_i64s(lambda)).unwrap();
        let ints: Vec<BigInt> = lambda.iter().map(|&x| x.into()).collect();
        let closed = blowup_pullback(BlowupLayout::new(n, points).unwrap(), &ints).unwrap();
        prop_assert_eq!(generic, closed);
    }

    #[test]
    fn pullback_preserves_principal_divisors(n in 3usize..=4, points in 1usize..=5, m in prop::collection::vec(-9i64..=9, 4)) {
        let points = points.min(n + 1);
        let m = Character::from_i64s(&m[..n]);
        let fine = make_blowup_fan(n, points).unwrap();
        let coarse = make_projective_fan(n).unwrap();
        let pulled = pullback_refinement(&fine, &coarse, &div_of_character(&coarse, &m).unwrap()).unwrap();
        prop_assert_eq!(pulled, div_of_character(&fine, &m).unwrap());
    }

    #[test]
    fn normal_form_is_a_class_invariant((fan, d) in fan_and_divisor(6), m in character(3, 6), base in 0usize..64) {
        let base = base % fan.max_cones().len();
        let shifted = d.add(&div_of_character(&fan, &m).unwrap());
        let nf = picard_normal_form(&fan, base, &d).unwrap();
        prop_assert_eq!(&picard_normal_form(&fan, base, &nf).unwrap(), &nf);
        prop_assert_eq!(picard_normal_form(&fan, base, &shifted).unwrap(), nf.clone());
        prop_assert!(linearly_equivalent(&fan, &d, &shifted).unwrap());
        for &r in fan.max_cones()[base].rays() {
            prop_assert_eq!(nf.coeff(r), &BigInt::from(0));
        }
    }

    #[test]
    fn ample_implies_nef_and_witnesses_are_honest((fan, d) in fan_and_divisor(4)) {
        let v = positivity(&fan, &d).unwrap();
        prop_assert!(!v.ample || v.nef);
        prop_assert_eq!(v.nef, v.nef_witness.is_none());
        if let Some(w) = &v.nef_witness {
            prop_assert!(w.phi > w.bound);
        }
        if let Some(w) = &v.ample_witness {
            prop_assert!(w.phi >= w.bound);
        }
        // positivity depends only on the class
        let m = Character::from_i64s(&[1, -2, 3]);
        let shifted = d.add(&div_of_character(&fan, &m).unwrap());
        prop_assert_eq!(is_ample(&fan, &shifted).unwrap(), v.ample);
    }

    #[test]
    fn pieces_meet_iff_they_share_an_active_ray((fan, d) in fan_and_divisor(3), m in character(3, 3)) {
        // On a simplicial fan two faces of distinct cones meet exactly in
        // their common face.
        let s = active_set(&fan, &d, &m).unwrap();
        let pieces: Vec<&Vec<usize>> = s.per_cone.iter().filter(|p| !p.is_empty()).collect();
        for (i, a) in pieces.iter().enumerate() {
            for b in &pieces[i + 1..] {
                let pts = |p: &Vec<usize>| p.iter().map(|&r| fan.ray(r).clone()).collect::<Vec<_>>();
                let lp = pieces_intersect(&[pts(a), pts(b)]);
                let shared = a.iter().any(|r| b.contains(r));
                prop_assert_eq!(lp, shared, "{:?} {:?}", a, b);
            }
        }
    }

    #[test]
    fn nerve_euler_characteristic((fan, d) in fan_and_divisor(3), m in character(3, 3)) {
        let c = nerve(&fan, &d, &m).unwrap();
        let r = reduced_ranks(&c);
        // reduced Euler characteristic from the cells and from the ranks
        let cells: i64 = -1 + c.simplices.iter().enumerate()
            .map(|(k, level)| if k % 2 == 0 { level.len() as i64 } else { -(level.len() as i64) })
            .sum::<i64>();
        let ranks: i64 = -(r.minus_one as i64) + r.ranks.iter().enumerate()
            .map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) })
            .sum::<i64>();
        prop_assert_eq!(cells, ranks);
        // a face of a recorded simplex is recorded
        for k in 1..c.simplices.len() {
            for s in &c.simplices[k] {
                for drop in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(drop);
                    prop_assert!(c.simplices[k - 1].contains(&f));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn h0_counts_polytope_points((fan, d) in fan_and_divisor(3)) {
        let r = total_cohomology_with(&fan, &d, opts(1)).unwrap();
        let bx = search_box(&fan, &d, 3).unwrap();
        let to = |x: &BigInt| i64::try_from(x).unwrap();
        let mut count = 0u64;
        for x in to(&bx.lo[0])..=to(&bx.hi[0]) {
            for y in to(&bx.lo[1])..=to(&bx.hi[1]) {
                for z in to(&bx.lo[2])..=to(&bx.hi[2]) {
                    let m = Character::from_i64s(&[x, y, z]);
                    if fan.rays().iter().enumerate().all(|(k, u)| pair(&m, u).unwrap() >= -d.coeff(k)) {
                        count += 1;
                    }
                }
            }
        }
        prop_assert_eq!(r.dims[0], count);
    }

    #[test]
    fn wider_box_changes_nothing((fan, d) in fan_and_divisor(3)) {
        let a = total_cohomology_with(&fan, &d, opts(1)).unwrap();
        let b = total_cohomology_with(&fan, &d, opts(2)).unwrap();
        prop_assert_eq!(&a.dims, &b.dims);
        prop_assert_eq!(&a.contributions, &b.contributions);
    }

    #[test]
    fn serre_duality((fan, d) in fan_and_divisor(3)) {
        let n = fan.dim();
        let lhs = total_cohomology_with(&fan, &d, opts(1)).unwrap().dims;
        let dual = canonical_divisor(&fan).sub(&d);
        let rhs = total_cohomology_with(&fan, &dual, opts(1)).unwrap().dims;
        for i in 0..=n {
            prop_assert_eq!(lhs[i], rhs[n - i]);
        }
    }

    #[test]
    fn dims_depend_only_on_the_class((fan, d) in fan_and_divisor(3), m in character(3, 4)) {
        let shifted = d.add(&div_of_character(&fan, &m).unwrap());
        let a = total_cohomology_with(&fan, &d, opts(1)).unwrap();
        let b = total_cohomology_with(&fan, &shifted, opts(1)).unwrap();
        prop_assert_eq!(&a.dims, &b.dims);
        prop_assert_eq!(&a.normal_form, &b.normal_form);
    }

    #[test]
    fn vanishing_theorems((fan, d) in fan_and_divisor(3)) {
        let dims = total_cohomology_with(&fan, &d, opts(1)).unwrap().dims;
        if kodaira_precondition(&fan, &d).unwrap() || positivity(&fan, &d).unwrap().nef {
            prop_assert!(dims[1..].iter().all(|&h| h == 0), "{:?}", dims);
        }
    }

    #[test]
    fn reports_round_trip((fan, d) in fan_and_divisor(3)) {
        let r = total_cohomology_with(&fan, &d, opts(1)).unwrap();
        let text = r.to_json().to_string();
        let back = CohomologyReport::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }
}
