use stideal::decomp::{end_algebra, is_isomorphic, is_isomorphic_to_entry};
use stideal::field::{Fe, Field};
use stideal::linalg::Mat;
use stideal::module::Module;
use stideal::sl2::{
    binom_field, binom_mod, delta_restricted, four_dim_products, lambda_auto, moore_det, n_family, nabla_restricted,
    s_mu, st1_e_basis, steinberg_tensor, tilting_dim, v_module, xi_element, Lambda, TiltingTable,
};
use stideal::suites::{run_suite, SuiteOptions};
use stideal::varieties::{support_points, ProjPoint};

fn f(p: u32, k: u32) -> Field {
    Field::new(p, k).unwrap()
}

fn table(p: u32, k: u32, r: usize) -> TiltingTable {
    TiltingTable::build(&lambda_auto(&f(p, k), r).unwrap()).unwrap()
}

#[test]
fn lambda_auto_examples() {
    let f9 = f(3, 2);
    let l1 = lambda_auto(&f9, 1).unwrap();
    assert_eq!(l1.entries, vec![Fe::ONE]);
    assert_eq!(moore_det(&f9, &l1.entries), Fe::ONE);

    let th = f9.gen();
    assert_eq!(f9.mul(th, th), f9.neg(Fe::ONE));
    let l = lambda_auto(&f9, 2).unwrap();
    assert_eq!(l.entries, vec![Fe::ONE, th]);
    assert_eq!(moore_det(&f9, &l.entries), f9.mul(f9.from_i64(-2), th));

    let f8 = f(2, 3);
    assert!(!moore_det(&f8, &lambda_auto(&f8, 3).unwrap().entries).is_zero());
    assert!(lambda_auto(&f8, 4).is_err());
    assert!(moore_det(&f8, &[th, th]).is_zero());
    assert!(Lambda::new(&f9, vec![Fe::ONE, f9.from_i64(2)]).is_err());
}

#[test]
fn binomials() {
    assert_eq!(binom_mod(5, 2, 3), 1);
    assert_eq!(binom_mod(4, 2, 2), 0);
    let f9 = f(3, 2);
    assert_eq!(binom_field(&f9, f9.from_i64(5), 2), f9.from_i64(10));
}

#[test]
fn nabla_examples() {
    for (p, k, r) in [(2, 2, 2), (3, 2, 2), (2, 3, 3), (5, 2, 2)] {
        let fld = f(p, k);
        let lam = lambda_auto(&fld, r).unwrap().normalized();
        let n0 = nabla_restricted(&lam, 0);
        assert_eq!(n0.module, Module::trivial(&fld, r));
        let n1 = nabla_restricted(&lam, 1);
        n1.validate().unwrap();
        assert_eq!(n1.module, v_module(&fld, &lam.entries));

        // k[X]/(X_a - sum binom(lambda_a, i) X_1^i) on 1, X_1, .., X_1^(p-1)
        let pu = p as usize;
        let mut j = Mat::zeros(pu, pu);
        for i in 1..pu {
            j.set(i, i - 1, Fe::ONE);
        }
        let gens: Vec<Mat> = lam
            .entries
            .iter()
            .map(|&la| {
                let mut x = Mat::zeros(pu, pu);
                for i in 1..pu {
                    x = x.add(&fld, &j.pow(&fld, i as u64).scale(&fld, binom_field(&fld, la, i)));
                }
                x
            })
            .collect();
        let quot = Module::new(&fld, r, pu, gens).unwrap();
        let top = nabla_restricted(&lam, pu - 1);
        top.validate().unwrap();
        assert!(is_isomorphic(&top.module, &quot).unwrap(), "p={p}");
        let delta = delta_restricted(&lam, 3).module;
        assert!(is_isomorphic(&nabla_restricted(&lam, 3).module.dual(), &delta).unwrap());
    }
}

#[test]
fn tilting_dims() {
    let t = table(3, 2, 2);
    assert_eq!(t.dims(), vec![1, 2, 3, 6, 6, 6, 12, 12, 9]);
    for (p, r) in [(2usize, 2usize), (2, 3), (3, 2), (3, 3), (5, 2)] {
        let q = p.pow(r as u32);
        assert_eq!(tilting_dim(p, q - 1), q);
        for i in 0..p {
            assert_eq!(tilting_dim(p, i), i + 1);
        }
    }
    for (p, k, r) in [(2, 2, 2), (2, 3, 3), (3, 3, 3)] {
        let t = table(p, k, r);
        let last = t.projective_index();
        assert!(is_isomorphic(t.t(last), &Module::free(t.field(), r, 1)).unwrap());
        for (i, w) in t.top_weights().iter().enumerate() {
            assert_eq!(*w, i as i64);
        }
    }
}

#[test]
fn steinberg_examples() {
    for (p, k, r) in [(2, 2, 2), (3, 2, 2), (2, 3, 3), (3, 3, 3)] {
        let t = table(p, k, r);
        let fld = t.field();
        assert_eq!(t.steinberg(0).unwrap(), &Module::trivial(fld, r));
        assert_eq!(t.steinberg(r - 1).unwrap().dim, (p as usize).pow(r as u32 - 1));
        assert!(is_isomorphic(t.steinberg(r).unwrap(), &Module::free(fld, r, 1)).unwrap());
        assert!(t.steinberg(r + 1).is_err());
        assert_eq!(t.s_index(), (p as usize).pow(r as u32 - 1) - 1);
    }
}

#[test]
fn xi_examples() {
    for (p, k, r) in [(2, 2, 2), (3, 2, 2), (2, 3, 3), (3, 3, 3)] {
        let t = table(p, k, r);
        let fld = t.field();
        let xi = xi_element(&t.lambda).unwrap();
        let mons = t.s().monomials();
        assert!(xi.act(fld, t.s()).is_zero());
        let big = steinberg_tensor(&t.lambda).tensor(&st1_e_basis(&t.lambda, r as u32 - 1));
        let mut v = vec![Fe::ZERO; big.dim];
        v[0] = Fe::ONE;
        for i in 1..=p as usize {
            let pw = xi.pow(fld, &mons, i - 1).act(fld, &big);
            let img = pw.mul_vec(fld, &v);
            let mut want = vec![Fe::ZERO; big.dim];
            want[i - 1] = Fe::ONE;
            assert_eq!(img, want, "xi^{} at p={p} r={r}", i - 1);
        }
    }
}

#[test]
fn q9_families() {
    let t = table(3, 2, 2);
    let fld = t.field();
    let lam = t.lambda.normalized().entries[1];
    assert!(s_mu(fld, Fe::ONE, Fe::ZERO).is_err());
    assert!(s_mu(&f(2, 2), f(2, 2).gen(), Fe::ZERO).is_err());
    assert!(n_family(fld, lam, 3, Fe::ZERO).is_err());

    assert!(is_isomorphic_to_entry(
        &t.entries[2],
        &s_mu(fld, lam, Fe::ZERO).unwrap()
    ));
    let pt = ProjPoint::new(fld, vec![lam, fld.neg(Fe::ONE)]).unwrap();
    for mu in fld.elements() {
        let s = s_mu(fld, lam, mu).unwrap();
        assert!(is_isomorphic(&s.dual(), &s_mu(fld, lam, fld.neg(mu)).unwrap()).unwrap());
        assert_eq!(support_points(&s, 1).unwrap().points, vec![pt.clone()]);
    }
    assert!(is_isomorphic_to_entry(
        &t.entries[4],
        &n_family(fld, lam, 1, Fe::ZERO).unwrap()
    ));
    assert!(is_isomorphic_to_entry(
        &t.entries[5],
        &n_family(fld, lam, 0, Fe::ZERO).unwrap()
    ));
    assert!(is_isomorphic_to_entry(
        &t.entries[3],
        &n_family(fld, lam, 2, Fe::ZERO).unwrap()
    ));
}

#[test]
fn four_dim_examples() {
    let f8 = f(2, 3);
    let prods = four_dim_products(&f8).unwrap();
    assert!(!prods.is_empty());
    for fd in &prods {
        assert!(is_isomorphic(&fd.module, &fd.module.dual()).unwrap());
        assert_eq!(end_algebra(&fd.module).dim(), 4);
    }
    let t = table(2, 3, 3);
    let lam = &t.lambda.entries;
    let tw = t.lambda.twist(1);
    let v = v_module(&f8, lam).tensor(&v_module(&f8, &tw.entries));
    assert!(is_isomorphic(&v, t.steinberg(2).unwrap()).unwrap());
    assert!(four_dim_products(&f(3, 2)).is_err());
}

#[test]
fn suites_pass_at_small_configs() {
    let opts = SuiteOptions {
        seed: 5,
        count: Some(10),
        ..Default::default()
    };
    for (p, k, r) in [(2, 2, 2), (3, 2, 2), (2, 3, 3)] {
        let t = table(p, k, r);
        for suite in ["tilting", "donkin", "omega", "selfext"] {
            let rep = run_suite(suite, &t, &opts).unwrap();
            assert!(rep.passed(), "{suite} at ({p},{k},{r}): {:?}", rep.failures());
        }
    }
    let t = table(3, 2, 2);
    assert!(run_suite("tensorpowers", &t, &opts).unwrap().passed());
    assert!(run_suite("nonsense", &t, &opts).is_err());
}
