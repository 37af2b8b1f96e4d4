use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stideal::conjecture::{loewy2_module_with, random_module_with};
use stideal::field::{Fe, Field};
use stideal::hom::hom_space;
use stideal::homological::{omega, pushout_extension, syzygy_data};
use stideal::linalg::Mat;
use stideal::module::Module;
use stideal::sl2::{lambda_auto, projective_points, TiltingTable};
use stideal::varieties::{
    is_projective_at, moore_level, moore_points, steinberg_point, support_points, ProjPoint, SupportSet,
};

fn f(p: u32, k: u32) -> Field {
    Field::new(p, k).unwrap()
}

fn table(p: u32, k: u32, r: usize) -> TiltingTable {
    TiltingTable::build(&lambda_auto(&f(p, k), r).unwrap()).unwrap()
}

#[test]
fn projective_at_examples() {
    let t = table(3, 2, 2);
    let fld = t.field();
    let lp = steinberg_point(&t.lambda).unwrap();
    for c in projective_points(fld, 2) {
        assert!(is_projective_at(&Module::free(fld, 2, 1), &c).unwrap());
        assert!(!is_projective_at(&Module::trivial(fld, 2), &c).unwrap());
        assert_eq!(is_projective_at(t.s(), &c).unwrap(), c != lp.coords);
    }
    assert!(is_projective_at(t.s(), &[Fe::ZERO, Fe::ZERO]).is_err());
}

#[test]
fn support_examples() {
    for (p, k, r) in [(2, 2, 2), (3, 2, 2), (2, 3, 3)] {
        let t = table(p, k, r);
        let fld = t.field();
        for e in [1, 2] {
            if r == 3 && e == 2 {
                continue;
            }
            assert!(support_points(&Module::free(fld, r, 1), e).unwrap().is_empty());
            let all = support_points(&Module::trivial(fld, r), e).unwrap();
            assert_eq!(all.len(), projective_points(&all.field, r).len());
        }
        for i in 0..t.len() {
            let j = moore_level(p as usize, i);
            let want = moore_points(&t.lambda, j, 1).unwrap();
            assert_eq!(support_points(t.t(i), 1).unwrap().points, want.points, "T_{i}");
        }
        let s = support_points(t.s(), 1).unwrap();
        assert_eq!(s.points, vec![steinberg_point(&t.lambda).unwrap()]);
    }
}

#[test]
fn steinberg_point_formulas() {
    for (p, k) in [(2, 2), (3, 2), (5, 2)] {
        let fld = f(p, k);
        let l = lambda_auto(&fld, 2).unwrap();
        let (a, b) = (l.entries[0], l.entries[1]);
        let want = ProjPoint::new(&fld, vec![b, fld.neg(a)]).unwrap();
        assert_eq!(steinberg_point(&l).unwrap(), want);
    }
    for (p, k) in [(2, 3), (3, 3)] {
        let fld = f(p, k);
        let l = lambda_auto(&fld, 3).unwrap();
        let fr = |x: Fe| fld.frobenius(x);
        let [l1, l2, l3] = [l.entries[0], l.entries[1], l.entries[2]];
        let c = |x: Fe, y: Fe| fld.sub(fld.mul(x, fr(y)), fld.mul(y, fr(x)));
        let want = ProjPoint::new(&fld, vec![c(l2, l3), c(l3, l1), c(l1, l2)]).unwrap();
        assert_eq!(steinberg_point(&l).unwrap(), want);
    }
}

#[test]
fn moore_levels() {
    assert_eq!(moore_level(3, 0), 0);
    assert_eq!(moore_level(3, 1), 0);
    assert_eq!(moore_level(3, 2), 1);
    assert_eq!(moore_level(3, 7), 1);
    assert_eq!(moore_level(3, 8), 2);
    assert_eq!(moore_level(2, 3), 2);
}

fn small_module(fld: &Field, seed: u64) -> Module {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = rng.gen_range(1..=2);
    let b = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        loewy2_module_with(fld, 2, a, b, &mut rng)
    } else {
        random_module_with(fld, 2, a, b, &mut rng)
    }
}

fn union(a: &SupportSet, b: &SupportSet) -> Vec<ProjPoint> {
    let mut v = a.points.clone();
    v.extend(b.points.iter().cloned());
    v.sort();
    v.dedup();
    v
}

fn fields() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![(2u32, 2u32), (3, 2)]).prop_map(|(p, k)| f(p, k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn support_of_dual_and_syzygy(fld in fields(), seed in any::<u64>()) {
        let m = small_module(&fld, seed);
        let s = support_points(&m, 1).unwrap();
        prop_assert_eq!(&support_points(&m.dual(), 1).unwrap().points, &s.points);
        prop_assert_eq!(&support_points(&omega(&m), 1).unwrap().points, &s.points);
    }

    #[test]
    fn support_of_tensor_and_sum(fld in fields(), seed in any::<u64>()) {
        let a = small_module(&fld, seed);
        let b = small_module(&fld, seed.wrapping_add(1));
        let sa = support_points(&a, 1).unwrap();
        let sb = support_points(&b, 1).unwrap();
        let inter: Vec<ProjPoint> = sa.points.iter().filter(|p| sb.contains(p)).cloned().collect();
        prop_assert_eq!(support_points(&a.tensor(&b), 1).unwrap().points, inter);
        prop_assert_eq!(support_points(&a.direct_sum(&b), 1).unwrap().points, union(&sa, &sb));
    }

    /// In `0 -> A -> E -> C -> 0` each support lies in the union of the other two.
    #[test]
    fn support_two_out_of_three(fld in fields(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = small_module(&fld, seed);
        let c = small_module(&fld, seed ^ 0x77);
        let sd = syzygy_data(&c);
        let mut g = Mat::zeros(a.dim, sd.syzygy_basis.cols);
        for b in &hom_space(&sd.syzygy, &a).basis {
            g.axpy(&fld, fld.random(&mut rng), b);
        }
        let e = pushout_extension(&sd, &a, &g).unwrap();
        prop_assert_eq!(e.dim, a.dim + c.dim);
        let (sa, se, sc) = (support_points(&a, 1).unwrap(), support_points(&e, 1).unwrap(), support_points(&c, 1).unwrap());
        let ac = union(&sa, &sc);
        prop_assert!(se.points.iter().all(|p| ac.binary_search(p).is_ok()));
        let ae = union(&sa, &se);
        prop_assert!(sc.points.iter().all(|p| ae.binary_search(p).is_ok()));
        let ce = union(&sc, &se);
        prop_assert!(sa.points.iter().all(|p| ce.binary_search(p).is_ok()));
    }

    /// `S (x) X` is projective exactly when the Steinberg point is off `supp X`.
    #[test]
    fn steinberg_tensor_projectivity(seed in any::<u64>(), q in prop::sample::select(vec![(2u32, 2u32), (3, 2)])) {
        let t = table(q.0, q.1, 2);
        let x = small_module(t.field(), seed);
        let lp = steinberg_point(&t.lambda).unwrap();
        let proj = support_points(&t.s().tensor(&x), 1).unwrap().is_empty();
        prop_assert_eq!(proj, !support_points(&x, 1).unwrap().contains(&lp));
    }
}
