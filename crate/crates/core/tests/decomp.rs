use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stideal::conjecture::{loewy2_module_with, random_module_with};
use stideal::decomp::{
    algebra_radical, end_algebra, fitting_split, indecomposable_decomposition, is_isomorphic, is_isomorphic_to_entry,
    multiplicity, peel_against, random_endomorphism, residue_via_min_poly, split_summand, LibraryEntry,
};
use stideal::field::{Fe, Field};
use stideal::linalg::Mat;
use stideal::module::Module;
use stideal::sl2::{lambda_auto, n_family, s_mu, TiltingTable};

fn f(p: u32, k: u32) -> Field {
    Field::new(p, k).unwrap()
}

fn table(p: u32, k: u32, r: usize) -> TiltingTable {
    TiltingTable::build(&lambda_auto(&f(p, k), r).unwrap()).unwrap()
}

fn entry(m: &Module) -> LibraryEntry {
    LibraryEntry::new(m, &mut ChaCha8Rng::seed_from_u64(3)).unwrap()
}

fn q9() -> (TiltingTable, Fe) {
    let t = table(3, 2, 2);
    let lam = t.lambda.normalized().entries[1];
    (t, lam)
}

#[test]
fn end_algebra_examples() {
    for (p, k, r) in [(2, 2, 2), (3, 2, 2), (2, 3, 3)] {
        let t = table(p, k, r);
        assert_eq!(end_algebra(&Module::trivial(t.field(), r)).dim(), 1);
        let e = end_algebra(t.s());
        assert_eq!(e.dim(), (p as usize).pow(r as u32 - 1));
        assert!(e.is_commutative());
    }
    let (t, lam) = q9();
    let fld = t.field();
    let mu = fld.gen();
    let q = s_mu(fld, lam, mu)
        .unwrap()
        .tensor(&s_mu(fld, lam, fld.neg(mu)).unwrap());
    assert_eq!(end_algebra(&q).dim(), 15);
}

fn is_nilpotent(fld: &Field, a: &Mat) -> bool {
    a.pow(fld, a.rows.max(1) as u64).is_zero()
}

#[test]
fn algebra_radical_examples() {
    let t = table(3, 2, 2);
    let fld = t.field();
    let one = Module::trivial(fld, 2);
    assert!(algebra_radical(&end_algebra(&one), 0).unwrap().is_empty());
    for m in [t.s().clone(), Module::free(fld, 2, 1)] {
        let a = end_algebra(&m);
        let rad = algebra_radical(&a, 0).unwrap();
        assert_eq!(rad.len() + 1, a.dim());
        assert!(rad.iter().all(|x| is_nilpotent(fld, x)));
    }
}

#[test]
fn fitting_split_examples() {
    let fld = f(2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let free = Module::free(&fld, 2, 1);
    let id = Mat::identity(free.dim);
    let parts = fitting_split(&free, &id, &mut rng);
    assert_eq!(parts.len(), 1);
    assert_eq!(parts[0].0.dim, free.dim);

    let m = Module::trivial(&fld, 2).direct_sum(&free);
    let mut e = Mat::zeros(m.dim, m.dim);
    e.set(0, 0, Fe::ONE);
    let mut dims: Vec<usize> = fitting_split(&m, &e, &mut rng).iter().map(|(x, _)| x.dim).collect();
    dims.sort_unstable();
    assert_eq!(dims, vec![1, 4]);

    let unip = id.add(&fld, &free.gens[0]);
    assert_eq!(fitting_split(&free, &unip, &mut rng).len(), 1);
}

#[test]
fn decomposition_examples() {
    for (p, k, r) in [(2, 2, 2), (3, 2, 2)] {
        let fld = f(p, k);
        let d = indecomposable_decomposition(&Module::free(&fld, r, 1), 0).unwrap();
        assert_eq!(d.dims(), vec![((p as usize).pow(r as u32), 1)]);
        assert!(d.summands[0].certified);
    }
    let (t, lam) = q9();
    let fld = t.field();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..3 {
        let nu = fld.random_nonzero(&mut rng);
        let prod = t.s().tensor(&s_mu(fld, lam, nu).unwrap());
        assert_eq!(multiplicity(&t.entries[2], &prod), 1);
        assert_eq!(multiplicity(&t.entries[5], &prod), 1);
        assert_eq!(
            indecomposable_decomposition(&prod, 1).unwrap().dims(),
            vec![(3, 1), (6, 1)]
        );

        let mu = fld.random_nonzero(&mut rng);
        let sum = fld.add(mu, nu);
        if sum.is_zero() {
            continue;
        }
        let kappa = fld.div(fld.mul(mu, nu), sum);
        let prod = s_mu(fld, lam, mu).unwrap().tensor(&s_mu(fld, lam, nu).unwrap());
        let want = s_mu(fld, lam, kappa)
            .unwrap()
            .direct_sum(&n_family(fld, lam, 0, kappa).unwrap());
        assert!(is_isomorphic(&prod, &want).unwrap());
    }
}

#[test]
fn isomorphism_examples() {
    let (t, lam) = q9();
    let fld = t.field();
    for m in t.entries.iter().map(|e| &e.module) {
        assert!(is_isomorphic(m, m).unwrap());
        assert!(is_isomorphic(m, &m.dual()).unwrap());
    }
    let pts: Vec<Fe> = fld.elements().take(3).collect();
    for i in 0..3 {
        for &a in &pts {
            for &b in &pts {
                let x = n_family(fld, lam, i, a).unwrap();
                let y = n_family(fld, lam, i, b).unwrap();
                assert_eq!(is_isomorphic(&x, &y).unwrap(), a == b, "N^({i}) at {a:?} vs {b:?}");
            }
        }
    }
}

#[test]
fn split_summand_examples() {
    let fld = f(3, 2);
    let one = Module::trivial(&fld, 2);
    let free = Module::free(&fld, 2, 1);
    let s = split_summand(&entry(&one), &one.direct_sum(&free)).unwrap().unwrap();
    assert_eq!(s.multiplicity, 1);
    assert!(is_isomorphic(&s.complement, &free).unwrap());
    assert!(split_summand(&entry(&one), &free).unwrap().is_none());

    let (t, lam) = q9();
    let nu = fld.gen();
    let prod = t.s().tensor(&s_mu(&fld, lam, nu).unwrap());
    let s = split_summand(&t.entries[5], &prod).unwrap().unwrap();
    assert!(is_isomorphic_to_entry(&t.entries[2], &s.complement));

    let q = s_mu(&fld, lam, nu)
        .unwrap()
        .tensor(&s_mu(&fld, lam, fld.neg(nu)).unwrap());
    assert!(split_summand(&t.entries[2], &q).unwrap().is_none());
}

#[test]
fn peel_examples() {
    let (t, lam) = q9();
    let fld = t.field();
    let free = Module::free(fld, 2, 1);
    let pl = peel_against(&free, &t.entries).unwrap();
    assert_eq!(pl.remainder.dim, 0);
    assert_eq!(pl.counts[8], 1);
    assert_eq!(pl.counts.iter().sum::<usize>(), 1);

    let pl = peel_against(&t.s().tensor(&Module::trivial(fld, 2)), &t.entries).unwrap();
    assert_eq!(pl.remainder.dim, 0);
    assert_eq!(pl.counts[2], 1);

    let mu = fld.gen();
    let q = s_mu(fld, lam, mu)
        .unwrap()
        .tensor(&s_mu(fld, lam, fld.neg(mu)).unwrap());
    let pl = peel_against(&q, &t.entries).unwrap();
    assert_eq!(pl.remainder.dim, 9);
    assert!(pl.counts.iter().all(|&c| c == 0));
}

fn small_module(seed: u64) -> Module {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fld = f(if rng.gen_bool(0.5) { 2 } else { 3 }, 2);
    let a = rng.gen_range(1..=2);
    let b = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        loewy2_module_with(&fld, 2, a, b, &mut rng)
    } else {
        random_module_with(&fld, 2, a, b, &mut rng)
    }
}

fn reassemble(m: &Module, seed: u64) -> Module {
    let d = indecomposable_decomposition(m, seed).unwrap();
    let mut out = Module::zero(&d.field, m.r);
    for s in &d.summands {
        for _ in 0..s.multiplicity {
            out = out.direct_sum(&s.module);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reassembly(seed in any::<u64>()) {
        let m = small_module(seed);
        let d = indecomposable_decomposition(&m, seed).unwrap();
        prop_assert_eq!(d.total_dim(), m.dim);
        if !d.field_extended {
            prop_assert!(is_isomorphic(&reassemble(&m, seed), &m).unwrap());
        }
    }

    #[test]
    fn determinism(seed in any::<u64>()) {
        let m = small_module(seed);
        let a = indecomposable_decomposition(&m, 11).unwrap();
        let b = indecomposable_decomposition(&m, 11).unwrap();
        prop_assert_eq!(a.dims(), b.dims());
        for (x, y) in a.summands.iter().zip(&b.summands) {
            prop_assert_eq!(&x.module, &y.module);
        }
    }

    #[test]
    fn krull_schmidt_doubling(seed in any::<u64>()) {
        let m = small_module(seed);
        let once = indecomposable_decomposition(&m, 1).unwrap().dims();
        let twice = indecomposable_decomposition(&m.direct_sum(&m), 1).unwrap().dims();
        let doubled: Vec<(usize, usize)> = once.iter().map(|&(d, c)| (d, 2 * c)).collect();
        let total = |v: &[(usize, usize)]| v.iter().map(|&(d, c)| d * c).sum::<usize>();
        prop_assert_eq!(total(&twice), total(&doubled));
        prop_assert_eq!(twice.iter().map(|x| x.1).sum::<usize>(), doubled.iter().map(|x| x.1).sum::<usize>());
    }

    #[test]
    fn summands_have_local_endomorphisms(seed in any::<u64>()) {
        let m = small_module(seed);
        let d = indecomposable_decomposition(&m, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in d.summands.iter().filter(|s| s.certified) {
            let fld = &s.module.field;
            let end = end_algebra(&s.module);
            for _ in 0..32 {
                let th = random_endomorphism(&end, &mut rng);
                prop_assert!(th.rank(fld) == th.rows || is_nilpotent(fld, &th));
                let c = residue_via_min_poly(fld, &th, &mut rng);
                prop_assert_eq!(c, Some(s.entry.local.residue(fld, &th)));
            }
        }
    }

    #[test]
    fn peel_remainder_has_no_library_summand(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, k) = if rng.gen_bool(0.5) { (2, 2) } else { (3, 2) };
        let t = table(p, k, 2);
        let x = loewy2_module_with(t.field(), 2, 1, rng.gen_range(1..=2), &mut rng);
        let m = x.tensor(t.t(rng.gen_range(0..t.len())));
        let pl = peel_against(&m, &t.entries).unwrap();
        let used: usize = pl.counts.iter().zip(&t.entries).map(|(c, e)| c * e.dim()).sum();
        prop_assert_eq!(used + pl.remainder.dim, m.dim);
        for e in &t.entries {
            prop_assert!(split_summand(e, &pl.remainder).unwrap().is_none());
        }
    }
}
