use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stideal::conjecture::{
    check_membership, fuzz, is_s_projective, load_candidate, loewy2_from_blocks, loewy2_module_with, random_module,
    random_module_with, tilting_census, uniserial_quotient, CandidateSink, Family, Status,
};
use stideal::decomp::is_isomorphic;
use stideal::field::Field;
use stideal::linalg::Mat;
use stideal::module::Module;
use stideal::sl2::{lambda_auto, s_mu, v_module, TiltingTable};

fn f(p: u32, k: u32) -> Field {
    Field::new(p, k).unwrap()
}

fn table(p: u32, k: u32, r: usize) -> TiltingTable {
    TiltingTable::build(&lambda_auto(&f(p, k), r).unwrap()).unwrap()
}

fn counts(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
    pairs.iter().copied().collect()
}

#[test]
fn membership_examples() {
    for (p, k, r) in [(2, 2, 2), (3, 2, 2), (2, 3, 3)] {
        let t = table(p, k, r);
        let fld = t.field();
        let v = check_membership(&Module::trivial(fld, r), &t, "one").unwrap();
        assert_eq!(v.status, Status::InIdeal);
        assert_eq!(v.tilt_multiset, counts(&[(t.s_index(), 1)]));
        let b = (p as usize).pow(r as u32 - 1);
        let v = check_membership(&v_module(fld, &t.lambda.entries), &t, "v").unwrap();
        assert_eq!(v.tilt_multiset, counts(&[(b, 1)]));
        assert_eq!(v.summary().remainder_dim, None);
    }
    let t = table(3, 2, 2);
    let fld = t.field();
    let lam = t.lambda.normalized().entries[1];
    let v = check_membership(&s_mu(fld, lam, fld.gen()).unwrap(), &t, "s").unwrap();
    assert_eq!(v.tilt_multiset, counts(&[(2, 1), (5, 1)]));
    assert_eq!(v.indices(), vec![2, 5]);
    assert!(check_membership(&Module::trivial(&f(3, 3), 2), &t, "x").is_err());
}

#[test]
fn s_projectivity_examples() {
    for (p, k, r) in [(2, 2, 2), (3, 2, 2)] {
        let t = table(p, k, r);
        let fld = t.field();
        assert!(is_s_projective(t.s(), &t).unwrap());
        assert!(is_s_projective(&Module::free(fld, r, 1), &t).unwrap());
        assert!(!is_s_projective(&Module::trivial(fld, r), &t).unwrap());
    }
}

#[test]
fn generator_examples() {
    let fld = f(3, 2);
    assert_eq!(random_module(&fld, 2, 4, 2, 0).dim, 0);
    assert_eq!(random_module(&fld, 2, 9, 2, 3), random_module(&fld, 2, 9, 2, 3));
    let zeros = vec![Mat::zeros(2, 3); 2];
    let m = loewy2_from_blocks(&fld, 3, 2, &zeros);
    let triv = (0..5).fold(Module::zero(&fld, 2), |acc, _| {
        acc.direct_sum(&Module::trivial(&fld, 2))
    });
    assert_eq!(m, triv);
    let t = table(3, 2, 2);
    assert_eq!(check_membership(&m, &t, "z").unwrap().tilt_multiset, counts(&[(2, 5)]));
}

#[test]
fn split_uniserial_extension() {
    for (p, k, r) in [(2, 2, 2), (3, 2, 2), (2, 3, 3)] {
        let t = table(p, k, r);
        let pu = p as usize;
        let u = uniserial_quotient(&t, pu);
        assert_eq!(u.dim, pu);
        let v = check_membership(&u.direct_sum(&u), &t, "split").unwrap();
        assert_eq!(v.tilt_multiset, counts(&[(t.projective_index(), 2)]));
        assert_eq!(v.projective_rank, 2);
    }
}

#[test]
fn fuzz_examples() {
    let t = table(3, 2, 2);
    let dir = tempfile::tempdir().unwrap();
    let sink_dir = dir.path().join("sink");
    let sink = CandidateSink::new(&sink_dir).unwrap();
    let rep = fuzz(&t, Family::Random, 1, 0, 40, 2, Some(&sink)).unwrap();
    assert_eq!((rep.count, rep.in_ideal, rep.candidates), (0, 0, 0));
    assert!(!sink_dir.exists());

    let rep = fuzz(&t, Family::Loewy2, 4, 30, 40, 1, Some(&sink)).unwrap();
    assert_eq!(rep.candidates, 0);
    assert_eq!(rep.in_ideal + rep.skipped, 30);
    let again = fuzz(&t, Family::Loewy2, 4, 30, 40, 3, None).unwrap();
    assert_eq!(rep, again);
    let q = t.len();
    for v in &rep.verdicts {
        assert!(v.tilt_multiset.keys().all(|&i| i < q));
    }
    assert!(Family::parse("nope").is_err());
    assert_eq!(Family::parse("uniserial_ext").unwrap(), Family::Uniserial);
}

#[test]
fn candidate_round_trip() {
    let t = table(2, 2, 2);
    let dir = tempfile::tempdir().unwrap();
    let sink = CandidateSink::new(dir.path()).unwrap();
    let x = loewy2_module_with(t.field(), 2, 2, 1, &mut ChaCha8Rng::seed_from_u64(2));
    let v = check_membership(&x, &t, "rt").unwrap().summary();
    let path = sink.persist(7, 3, Family::Loewy2, &x, &v).unwrap();
    assert!(path.ends_with("candidate-loewy2-7-3.json"));
    assert_eq!(load_candidate(std::path::Path::new(&path)).unwrap(), x);
    assert!(dir.path().join("candidate-loewy2-7-3.verdict.json").exists());
}

fn small(t: &TiltingTable, seed: u64) -> Module {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = rng.gen_range(1..=2);
    let b = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        loewy2_module_with(t.field(), 2, a, b, &mut rng)
    } else {
        random_module_with(t.field(), 2, a, b, &mut rng)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Multiplicities times dims add up to `dim S (x) X`.
    #[test]
    fn verdict_reassembles(seed in any::<u64>(), q in prop::sample::select(vec![(2u32, 2u32), (3, 2)])) {
        let t = table(q.0, q.1, 2);
        let x = small(&t, seed);
        let v = check_membership(&x, &t, "p").unwrap();
        let total: usize = v.tilt_multiset.iter().map(|(&i, &m)| m * t.t(i).dim).sum();
        let rem = v.remainder.as_ref().map_or(0, |m| m.dim);
        prop_assert_eq!(total + rem, t.s().dim * x.dim);
        prop_assert!(v.tilt_multiset.keys().all(|&i| i < t.len()));
        prop_assert_eq!(v.tilt_multiset.get(&t.projective_index()).copied().unwrap_or(0), v.projective_rank);
        let sx = t.s().tensor(&x);
        let (c, free, _) = tilting_census(&sx, &t).unwrap();
        prop_assert_eq!(free, v.projective_rank);
        if v.remainder.is_none() {
            let rebuilt = c.iter().fold(Module::zero(t.field(), 2), |acc, (&i, &m)| {
                (0..m).fold(acc, |a, _| a.direct_sum(t.t(i)))
            });
            prop_assert!(is_isomorphic(&rebuilt, &sx).unwrap());
        }
    }

    /// Membership is closed under tensoring with `V` and under duals.
    #[test]
    fn closure_consistency(seed in any::<u64>(), q in prop::sample::select(vec![(2u32, 2u32), (3, 2)])) {
        let t = table(q.0, q.1, 2);
        let x = small(&t, seed);
        let base = check_membership(&x, &t, "x").unwrap().status;
        if base == Status::InIdeal {
            let xv = x.tensor(&v_module(t.field(), &t.lambda.entries));
            prop_assert_eq!(check_membership(&xv, &t, "xv").unwrap().status, Status::InIdeal);
        }
        prop_assert_eq!(check_membership(&x.dual(), &t, "xd").unwrap().status, base);
    }
}
