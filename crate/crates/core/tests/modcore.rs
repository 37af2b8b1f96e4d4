use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stideal::conjecture::{loewy2_module_with, random_module_with};
use stideal::decomp::{indecomposable_decomposition, is_isomorphic};
use stideal::field::{Fe, Field};
use stideal::hom::{hom_dim, hom_space, is_equivariant, span_contains};
use stideal::homological::{pushout_extension, syzygy_data};
use stideal::linalg::Mat;
use stideal::module::{quotient, GradedModule, Module, Submodule};
use stideal::sl2::{lambda_auto, n_family, projective_points, s_mu, v_module, TiltingTable};

fn f(p: u32, k: u32) -> Field {
    Field::new(p, k).unwrap()
}

fn table(p: u32, k: u32, r: usize) -> TiltingTable {
    TiltingTable::build(&lambda_auto(&f(p, k), r).unwrap()).unwrap()
}

#[test]
fn validate_examples() {
    let f2 = f(2, 1);
    assert!(Module::new(&f2, 2, 0, vec![Mat::zeros(0, 0), Mat::zeros(0, 0)]).is_ok());
    assert!(Module::trivial(&f2, 2).validate().is_ok());
    let mut n1 = Mat::zeros(2, 2);
    n1.set(0, 0, Fe::ONE);
    let err = Module::new(&f2, 2, 2, vec![n1, Mat::zeros(2, 2)]).unwrap_err();
    assert!(err.to_string().contains("N_1^p != 0"), "{err}");
    let mut a = Mat::zeros(3, 3);
    a.set(1, 0, Fe::ONE);
    let mut b = Mat::zeros(3, 3);
    b.set(2, 1, Fe::ONE);
    assert!(Module::new(&f2, 2, 3, vec![a, b]).is_err(), "non-commuting generators");
}

#[test]
fn tensor_examples() {
    let t = table(2, 2, 2);
    let one = Module::trivial(t.field(), 2);
    for m in &t.entries {
        assert_eq!(m.module.tensor(&one), m.module);
    }
    let f9 = f(3, 2);
    let lam = f9.gen();
    let s0 = s_mu(&f9, lam, Fe::ZERO).unwrap();
    let prod = s0.tensor(&s0);
    assert_eq!(prod.dim, 9);
    assert!(is_isomorphic(&prod, &s0.direct_sum(&n_family(&f9, lam, 1, Fe::ZERO).unwrap())).unwrap());
    let v = t.t(1);
    let vv = v.tensor(v);
    assert_eq!(vv.dim, 4);
    let d = indecomposable_decomposition(&vv, 0).unwrap();
    assert_eq!(d.total_dim(), 4);
}

#[test]
fn dual_examples() {
    let f4 = f(2, 2);
    let one = Module::trivial(&f4, 2);
    assert_eq!(one.dual(), one);
    for a in projective_points(&f4, 2) {
        let v = v_module(&f4, &a);
        assert!(is_isomorphic(&v, &v.dual()).unwrap());
    }
    let f9 = f(3, 2);
    let lam = f9.gen();
    for mu in f9.elements() {
        let s = s_mu(&f9, lam, mu).unwrap();
        assert!(is_isomorphic(&s.dual(), &s_mu(&f9, lam, f9.neg(mu)).unwrap()).unwrap());
    }
}

#[test]
fn hom_examples() {
    for (p, k, r) in [(2, 2, 2), (3, 2, 2), (2, 3, 3)] {
        let t = table(p, k, r);
        let fld = t.field();
        let one = Module::trivial(fld, r);
        assert_eq!(hom_dim(&one, &Module::free(fld, r, 1)), 1);
        let s = t.s();
        assert_eq!(hom_dim(s, s), (p as usize).pow(r as u32 - 1));
        assert_eq!(hom_dim(&one, s), 1);
        for b in hom_space(s, s).basis {
            assert!(is_equivariant(s, s, &b));
        }
    }
}

#[test]
fn loewy_examples() {
    for (p, r) in [(2u32, 2usize), (3, 2), (2, 3)] {
        let fld = f(p, 1);
        assert_eq!(Module::trivial(&fld, r).loewy_length(), 1);
        let free = Module::free(&fld, r, 1);
        assert_eq!(free.loewy_length(), r * (p as usize - 1) + 1);
        // brute force: powers of the augmentation ideal acting on kE
        let mut cur = Mat::identity(free.dim);
        let mut len = 0;
        while !cur.is_zero() {
            len += 1;
            let imgs: Vec<Mat> = free.gens.iter().map(|g| g.mul(&fld, &cur)).collect();
            cur = Mat::hcat(free.dim, &imgs).col_space(&fld);
        }
        assert_eq!(len, free.loewy_length());
    }
    let f9 = f(3, 2);
    let lam = f9.gen();
    let mu = Fe::ONE;
    let q = s_mu(&f9, lam, mu).unwrap().tensor(&s_mu(&f9, lam, f9.neg(mu)).unwrap());
    assert_eq!(q.loewy_layers(), vec![3, 3, 3]);
}

/// `kE (x) kE` is free of rank `p^r`, so its radical is smaller than
/// `rad(kE) (x) kE`.
#[test]
fn radical_of_free_tensor_square() {
    let fld = f(2, 1);
    let free = Module::free(&fld, 2, 1);
    let rad = free.tensor(&free).radical_basis();
    assert_eq!(rad.cols, 16 - 4);
    let left = free.radical_basis().kron(&fld, &Mat::identity(4));
    assert!(!span_contains(&fld, &rad, &left));
}

#[test]
fn cyclic_examples() {
    let f2 = f(2, 2);
    let free = Module::free(&f2, 2, 1);
    let mut e = Mat::zeros(free.dim, 1);
    e.set(0, 0, Fe::ONE);
    assert_eq!(Submodule::generated_by(&free, &e).dim(), free.dim);
    let one = Module::trivial(&f2, 2);
    assert!(one.is_cyclic());
    assert!(!one.direct_sum(&one).is_cyclic());
    for (p, k, r) in [(2, 2, 2), (3, 2, 2), (2, 3, 3), (3, 3, 3)] {
        let t = table(p, k, r);
        for j in 0..=r {
            assert!(t.steinberg(j).unwrap().is_cyclic(), "St_{j} at ({p},{r})");
        }
    }
    let f9 = f(3, 2);
    let lam = f9.gen();
    for mu in f9.elements() {
        assert!(n_family(&f9, lam, 0, mu).unwrap().is_cyclic());
    }
}

/// Largest `kE v` over all `v`, exhaustively.
fn max_cyclic(m: &Module) -> usize {
    let fld = &m.field;
    let elems: Vec<Fe> = fld.elements().collect();
    let q = elems.len();
    let mut best = 0;
    let mut v = vec![Fe::ZERO; m.dim];
    for mut idx in 0..q.pow(m.dim as u32) {
        for x in v.iter_mut() {
            *x = elems[idx % q];
            idx /= q;
        }
        let d = m.span_closure(&Mat::from_cols(m.dim, &[v.clone()])).cols;
        best = best.max(d);
    }
    best
}

#[test]
fn max_cyclic_submodules_of_n_family() {
    let f9 = f(3, 2);
    let lam = f9.gen();
    let mu = f9.from_i64(2);
    assert_eq!(max_cyclic(&n_family(&f9, lam, 2, mu).unwrap()), 4);
    assert_eq!(max_cyclic(&n_family(&f9, lam, 1, mu).unwrap()), 5);
    assert_eq!(max_cyclic(&n_family(&f9, lam, 0, mu).unwrap()), 6);
}

#[test]
fn frobenius_twist_examples() {
    let f2 = f(2, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = random_module_with(&f2, 2, 2, 2, &mut rng);
    assert_eq!(m.frobenius_twist(), m);
    let f8 = f(2, 3);
    let lam = lambda_auto(&f8, 3).unwrap();
    let v = v_module(&f8, &lam.entries);
    let tw: Vec<Fe> = lam.entries.iter().map(|&x| f8.frobenius(x)).collect();
    assert!(is_isomorphic(&v.frobenius_twist(), &v_module(&f8, &tw)).unwrap());
    let t = table(2, 3, 3);
    for i in 0..t.len() {
        assert_eq!(t.t(i).frobenius_twist_pow(3), *t.t(i));
    }
}

#[test]
fn pushout_examples() {
    let f4 = f(2, 2);
    let one = Module::trivial(&f4, 2);
    let sd = syzygy_data(&one);
    let kd = sd.syzygy_basis.cols;
    let split = pushout_extension(&sd, &one, &Mat::zeros(1, kd)).unwrap();
    assert!(is_isomorphic(&split, &one.direct_sum(&one)).unwrap());
    let fs = hom_space(&sd.syzygy, &one);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..8 {
        let mut g = Mat::zeros(1, kd);
        for b in &fs.basis {
            g.axpy(&f4, f4.random(&mut rng), b);
        }
        if g.is_zero() {
            continue;
        }
        let e = pushout_extension(&sd, &one, &g).unwrap();
        assert_eq!(e.dim, 2);
        assert_eq!(e.loewy_layers(), vec![1, 1]);
        let hit = projective_points(&f4, 2)
            .iter()
            .any(|a| is_isomorphic(&e, &v_module(&f4, a)).unwrap());
        assert!(hit, "pushout is some V_mu");
    }
    assert!(pushout_extension(&sd, &one, &Mat::zeros(2, kd)).is_err());
}

#[test]
fn graded_weights_drop_by_two() {
    let t = table(3, 2, 2);
    for i in 0..t.len() {
        let g = t.graded(i);
        g.validate().unwrap();
        assert_eq!(g.max_weight(), Some(i as i64));
        assert_eq!(g.weight_multiplicity(i as i64), 1);
    }
    let m = Module::trivial(t.field(), 2);
    assert!(GradedModule::new(m.direct_sum(&m), vec![0, 0]).is_ok());
}

fn small_module(seed: u64) -> Module {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = if rng.gen_bool(0.5) { 2 } else { 3 };
    let fld = f(p, 2);
    if rng.gen_bool(0.5) {
        loewy2_module_with(&fld, 2, rng.gen_range(1..=2), rng.gen_range(1..=2), &mut rng)
    } else {
        random_module_with(&fld, 2, 1, rng.gen_range(1..=2), &mut rng)
    }
}

fn pair(seed: u64) -> (Module, Module) {
    let a = small_module(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
    let b = if a.p() == 2 {
        loewy2_module_with(&a.field, 2, rng.gen_range(1..=2), rng.gen_range(1..=2), &mut rng)
    } else {
        loewy2_module_with(&a.field, 2, 1, rng.gen_range(1..=2), &mut rng)
    };
    (a, b)
}

fn swap(m: usize, n: usize) -> Mat {
    let mut p = Mat::zeros(m * n, m * n);
    for i in 0..m {
        for j in 0..n {
            p.set(j * m + i, i * n + j, Fe::ONE);
        }
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tensor_commutes_and_associates(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        let c = small_module(seed.wrapping_add(1));
        let fld = a.field.clone();
        let ab = a.tensor(&b);
        let ba = b.tensor(&a);
        let s = swap(a.dim, b.dim);
        for (x, y) in ab.gens.iter().zip(&ba.gens) {
            prop_assert_eq!(s.mul(&fld, x), y.mul(&fld, &s));
        }
        if c.field == fld {
            prop_assert_eq!(ab.tensor(&c), a.tensor(&b.tensor(&c)));
        }
        ab.validate().unwrap();
    }

    #[test]
    fn dual_involution_and_adjunction(seed in any::<u64>()) {
        let (m, n) = pair(seed);
        prop_assert_eq!(m.dual().dual(), m.clone());
        let k = small_module(seed ^ 77);
        if k.field == m.field {
            prop_assert_eq!(hom_dim(&m.tensor(&n), &k), hom_dim(&m, &n.dual().tensor(&k)));
        }
        prop_assert_eq!(hom_dim(&m, &n), hom_dim(&n.dual(), &m.dual()));
    }

    #[test]
    fn radical_of_tensor_inside_products(seed in any::<u64>()) {
        let (m, n) = pair(seed);
        let fld = m.field.clone();
        let rad = m.tensor(&n).radical_basis();
        let left = m.radical_basis().kron(&fld, &Mat::identity(n.dim));
        let right = Mat::identity(m.dim).kron(&fld, &n.radical_basis());
        prop_assert!(span_contains(&fld, &left.hstack(&right), &rad));
    }

    #[test]
    fn quotient_and_sub_validate(seed in any::<u64>()) {
        let m = small_module(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = Mat::random(&m.field, m.dim, 1, &mut rng);
        let sub = Submodule::generated_by(&m, &v);
        sub.as_module().validate().unwrap();
        let q = quotient(&m, &sub.basis);
        q.module.validate().unwrap();
        prop_assert_eq!(q.module.dim + sub.dim(), m.dim);
    }

    #[test]
    fn pushout_depends_on_stable_class(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fld = f(if rng.gen_bool(0.5) { 2 } else { 3 }, 2);
        let u = loewy2_module_with(&fld, 2, 1, rng.gen_range(0..=1).max(1), &mut rng);
        let w = loewy2_module_with(&fld, 2, 1, 1, &mut rng);
        let sd = syzygy_data(&u);
        let fs = hom_space(&sd.syzygy, &w);
        let mut g = Mat::zeros(w.dim, sd.syzygy_basis.cols);
        for b in &fs.basis {
            g.axpy(&fld, fld.random(&mut rng), b);
        }
        let through = hom_space(&sd.cover, &w);
        let mut h = Mat::zeros(w.dim, sd.cover.dim);
        for b in &through.basis {
            h.axpy(&fld, fld.random(&mut rng), b);
        }
        let g2 = g.add(&fld, &h.mul(&fld, &sd.syzygy_basis));
        let e1 = pushout_extension(&sd, &w, &g).unwrap();
        let e2 = pushout_extension(&sd, &w, &g2).unwrap();
        prop_assert_eq!(e1.dim, u.dim + w.dim);
        prop_assert!(is_isomorphic(&e1, &e2).unwrap());
    }
}
