//! Verification batteries over a tilting table. Each returns a report with
//! one named check per assertion.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conjecture::{
    carlson_allowed, check_membership, cyclic_submodule, entry_for, fuzz, is_s_projective, is_self_extension_of_s,
    loewy2_module_with, radical_power, random_module_with, self_extension_indices, tilting_census, uniserial_ext_with,
    uniserial_quotient, CandidateSink, Family, Status,
};
use crate::decomp::{
    algebra_radical, certify_local, end_algebra, indecomposable_decomposition, is_isomorphic, is_isomorphic_to_entry,
    multiplicity, LocalTest, DEFAULT_SAMPLES,
};
use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, Field};
use crate::hom::hom_space;
use crate::homological::{
    carlson_module, degree_one_class, degree_two_class, minimal_resolution, omega, strip_projectives, CohomologyClass,
};
use crate::linalg::Mat;
use crate::module::{quotient, Module};
use crate::serial::module_to_json;
use crate::sl2::{
    moore_matrix, n_family, nabla_restricted, projective_points, s_mu, st1_e_basis, tilting_dim, TiltingTable,
};
use crate::varieties::{is_projective_at, moore_level, moore_points, steinberg_point, support_points, ProjPoint};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub p: u32,
    pub k: u32,
    pub r: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    fn new(suite: &str, table: &TiltingTable, seed: u64) -> SuiteReport {
        SuiteReport {
            suite: suite.into(),
            p: table.field().p(),
            k: table.field().k(),
            r: table.r(),
            seed,
            checks: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Overrides the default sample count of the suite.
    pub count: Option<usize>,
    pub max_dim: Option<usize>,
    pub jobs: usize,
    pub family: Option<Family>,
    /// Directory for persisted fuzz candidates.
    pub sink: Option<PathBuf>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            count: None,
            max_dim: None,
            jobs: 1,
            family: None,
            sink: None,
        }
    }
}

pub const SUITES: &[&str] = &[
    "tilting",
    "donkin",
    "omega",
    "support",
    "fusion9",
    "carlson",
    "loewy2",
    "uniserial",
    "tensorpowers",
    "selfext",
    "cyclic",
    "consequences",
    "fuzz",
    "p2complete",
];

pub fn run_suite(name: &str, table: &TiltingTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let t0 = Instant::now();
    let mut rep = match name {
        "tilting" => tilting(table, opts),
        "donkin" => donkin(table, opts),
        "omega" => omega_grid(table, opts),
        "support" => support(table, opts),
        "fusion9" => fusion9(table, opts),
        "carlson" => carlson(table, opts),
        "loewy2" => loewy2(table, opts),
        "uniserial" => uniserial(table, opts),
        "tensorpowers" => tensor_powers(table, opts),
        "selfext" => selfext(table, opts),
        "cyclic" => cyclic(table, opts),
        "consequences" => consequences(table, opts),
        "fuzz" => fuzz_suite(table, opts),
        "p2complete" => p2_complete(table, opts),
        _ => Err(Error::Config(format!(
            "unknown suite '{name}'; known: {}",
            SUITES.join(", ")
        ))),
    }?;
    rep.elapsed_ms = t0.elapsed().as_millis();
    Ok(rep)
}

fn fmt_set<T: std::fmt::Debug>(s: &T) -> String {
    format!("{s:?}")
}

pub fn tilting(table: &TiltingTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("tilting", table, opts.seed);
    let p = table.p();
    let r = table.r();
    let q = p.pow(r as u32);
    rep.check("count", table.len() == q, format!("{} modules", table.len()));
    let dims = table.dims();
    let expected: Vec<usize> = (0..q).map(|i| tilting_dim(p, i)).collect();
    rep.check(
        "dims",
        dims == expected,
        format!("built {dims:?}, digit formula {expected:?}"),
    );
    let small: Vec<usize> = (0..p.min(q)).collect();
    rep.check(
        "small_dims",
        small.iter().all(|&i| dims[i] == i + 1),
        "dim T_i = i + 1 for i < p",
    );
    let b = p.pow(r as u32 - 1);
    let mut bad = Vec::new();
    for i in b - 1..q {
        let d = dims[i];
        let ok = (0..r).any(|l| (1..p).any(|lp| d == lp * (1 << l) * b)) || d == q;
        if !ok {
            bad.push(i);
        }
    }
    rep.check(
        "digit_shape",
        bad.is_empty(),
        format!("indices violating l'*2^l*p^(r-1): {bad:?}"),
    );
    let tops = table.top_weights();
    rep.check(
        "highest_weights",
        tops.iter().enumerate().all(|(i, &w)| w == i as i64),
        fmt_set(&tops),
    );
    let st = strip_projectives(table.t(q - 1));
    rep.check(
        "last_is_free",
        st.free_rank == 1 && st.core.dim == 0,
        format!("T_(p^r-1) strips to rank {} core {}", st.free_rank, st.core.dim),
    );
    let mut nab = Vec::new();
    for i in 0..p.min(q) {
        if !is_isomorphic_to_entry(&table.entries[i], &nabla_restricted(&table.lambda, i).module) {
            nab.push(i);
        }
    }
    rep.check(
        "small_are_costandard",
        nab.is_empty(),
        format!("T_i not isomorphic to nabla_i for i in {nab:?}"),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x71);
    let mut uncertified = Vec::new();
    for (i, e) in table.entries.iter().enumerate() {
        let end = end_algebra(&e.module);
        let local = matches!(
            certify_local(&e.module, &end.basis, DEFAULT_SAMPLES, &mut rng),
            LocalTest::Local(_)
        );
        let rad = algebra_radical(&end, opts.seed ^ i as u64)?;
        if !local || rad.len() + 1 != end.dim() {
            uncertified.push(i);
        }
    }
    rep.check(
        "certified_indecomposable",
        uncertified.is_empty(),
        format!(
            "End local with residue field k, by fresh certificate and by algebra radical; failures {uncertified:?}"
        ),
    );
    let mut notdual = Vec::new();
    for (i, e) in table.entries.iter().enumerate() {
        if !is_isomorphic_to_entry(e, &e.dual) {
            notdual.push(i);
        }
    }
    rep.check("self_dual", notdual.is_empty(), format!("non-self-dual: {notdual:?}"));
    Ok(rep)
}

pub fn donkin(table: &TiltingTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("donkin", table, opts.seed);
    let p = table.p();
    let q = table.len();
    let mut tested = 0;
    let mut bad = Vec::new();
    for i in p - 1..=2 * p - 2 {
        for j in 0.. {
            let idx = i + p * j;
            if idx >= q || j >= q {
                break;
            }
            let prod = table.t(i).tensor(&table.t(j).frobenius_twist());
            tested += 1;
            if !is_isomorphic_to_entry(&table.entries[idx], &prod) {
                bad.push((i, j));
            }
        }
    }
    rep.check(
        "donkin_products",
        bad.is_empty() && tested > 0,
        format!("{tested} products, failures {bad:?}"),
    );
    Ok(rep)
}

pub fn omega_grid(table: &TiltingTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("omega", table, opts.seed);
    let p = table.p();
    let b0 = p.pow(table.r() as u32 - 1);
    let mut bad = Vec::new();
    let mut tested = 0;
    for a in b0 - 1..=2 * b0 - 2 {
        for b in 0..=p - 2 {
            let src = a + b0 * b;
            let dst = a + b0 * (p - 2 - b);
            tested += 1;
            if !is_isomorphic_to_entry(&table.entries[dst], &omega(table.t(src))) {
                bad.push((src, dst));
            }
        }
    }
    rep.check(
        "omega_grid",
        bad.is_empty(),
        format!("{tested} pairs, failures (src, dst) {bad:?}"),
    );
    Ok(rep)
}

/// A module `kE / kE u_beta`, supported at `beta`.
fn point_module(f: &Field, r: usize, beta: &[Fe]) -> Module {
    let free = Module::free(f, r, 1);
    let mut u = Mat::zeros(free.dim, free.dim);
    for (g, &c) in free.gens.iter().zip(beta) {
        u.axpy(f, c, g);
    }
    let w = free.span_closure(&u.col_space(f));
    quotient(&free, &w).module
}

pub fn support(table: &TiltingTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("support", table, opts.seed);
    let p = table.p();
    let r = table.r();
    let f = table.field();
    let lam = &table.lambda;
    let emax = opts.max_dim.map(|e| e as u32).unwrap_or(2);
    let mut bad = Vec::new();
    let mut points = 0;
    for e in 1..=emax {
        for i in 0..table.len() {
            let j = moore_level(p, i);
            let got = support_points(table.t(i), e)?;
            let want = moore_points(lam, j, e)?;
            points += got.len();
            if got.points != want.points {
                bad.push((i, e, got.len(), want.len()));
            }
        }
    }
    rep.check(
        "moore_hyperplanes",
        bad.is_empty(),
        format!("e <= {emax}; {points} support points in total; failures (i, e, got, want) {bad:?}"),
    );
    let pt = steinberg_point(lam)?;
    let mut ok = true;
    for e in 1..=emax {
        let s = support_points(table.s(), e)?;
        let big = Field::new(f.p(), f.k() * e)?;
        let want = pt.extend(&Embedding::new(f, &big)?);
        ok &= s.points == vec![want];
    }
    rep.check("steinberg_support", ok, format!("point {:?}", pt.coords));
    let l = &lam.entries;
    let formula = match r {
        2 => Some(vec![l[1], f.neg(l[0])]),
        3 => {
            let fr = |x: Fe| f.frobenius(x);
            let c = |a: usize, b: usize| f.sub(f.mul(l[a], fr(l[b])), f.mul(l[b], fr(l[a])));
            Some(vec![c(1, 2), c(2, 0), c(0, 1)])
        }
        _ => None,
    };
    if let Some(v) = formula {
        let fp = ProjPoint::new(f, v)?;
        rep.check("steinberg_formula", fp == pt, format!("closed form {:?}", fp.coords));
    }
    let mm = moore_matrix(f, l);
    rep.check(
        "steinberg_last_row",
        !f.dot(mm.row(r - 1), &pt.coords).is_zero(),
        "last Moore row does not vanish",
    );
    let want = opts.count.unwrap_or(20);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x59);
    let others: Vec<Vec<Fe>> = projective_points(f, r)
        .into_iter()
        .filter(|c| *c != pt.coords)
        .collect();
    let mut found = 0;
    let mut fails = Vec::new();
    let mut attempts = 0;
    while found < want && attempts < 50 * want {
        attempts += 1;
        let beta = &others[rng.gen_range(0..others.len())];
        let base = match rng.gen_range(0..3) {
            0 => loewy2_module_with(f, r, rng.gen_range(1..=2), rng.gen_range(1..=2), &mut rng),
            1 => random_module_with(f, r, 1, rng.gen_range(1..=3), &mut rng),
            _ => Module::trivial(f, r),
        };
        let x = base.tensor(&point_module(f, r, beta));
        if x.dim == 0 || !is_projective_at(&x, &pt.coords)? {
            continue;
        }
        found += 1;
        let core = strip_projectives(&table.s().tensor(&x)).core;
        if core.dim != 0 {
            fails.push(module_to_json(&x));
        }
    }
    rep.check(
        "off_point_tensor_projective",
        found == want && fails.is_empty(),
        format!(
            "{found} modules avoiding the point; non-projective S (x) X: {}",
            fails.join(" ")
        ),
    );
    Ok(rep)
}

pub fn fusion9(table: &TiltingTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("fusion9", table, opts.seed);
    let f = table.field().clone();
    if table.p() != 3 || table.r() != 2 {
        return Err(Error::Config("fusion9 needs p = 3, r = 2".into()));
    }
    let lamn = table.lambda.normalized();
    let lam = lamn.entries[1];
    let s0 = s_mu(&f, lam, Fe::ZERO)?;
    rep.check(
        "s0_is_steinberg",
        is_isomorphic_to_entry(&table.entries[2], &s0),
        "S(0) against T_2",
    );
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xf9);
    let n = opts.count.unwrap_or(25);
    let mut pairs = vec![(Fe::ZERO, Fe::ZERO)];
    for _ in 0..3.min(n.saturating_sub(1)) {
        let m = f.random_nonzero(&mut rng);
        pairs.push((m, f.neg(m)));
    }
    while pairs.len() < n {
        pairs.push((f.random(&mut rng), f.random(&mut rng)));
    }
    let mut c1 = (0, Vec::new());
    let mut c2 = (0, Vec::new());
    let mut c3 = (0, Vec::new());
    let mut q_ref: Option<Module> = None;
    for &(mu, nu) in &pairs {
        let prod = s_mu(&f, lam, mu)?.tensor(&s_mu(&f, lam, nu)?);
        let sum = f.add(mu, nu);
        if !sum.is_zero() {
            let kappa = f.div(f.mul(mu, nu), sum);
            let a = entry_for(&s_mu(&f, lam, kappa)?)?;
            let b = entry_for(&n_family(&f, lam, 0, kappa)?)?;
            c1.0 += 1;
            if !(multiplicity(&a, &prod) == 1 && multiplicity(&b, &prod) == 1) {
                c1.1.push((mu, nu));
            }
        } else if mu.is_zero() {
            let a = entry_for(&s_mu(&f, lam, Fe::ZERO)?)?;
            let b = entry_for(&n_family(&f, lam, 1, Fe::ZERO)?)?;
            c2.0 += 1;
            if !(multiplicity(&a, &prod) == 1 && multiplicity(&b, &prod) == 1) {
                c2.1.push((mu, nu));
            }
        } else {
            c3.0 += 1;
            let d = indecomposable_decomposition(&prod, opts.seed)?;
            let indec = d.summands.len() == 1 && d.summands[0].multiplicity == 1 && !d.field_extended;
            let st = strip_projectives(&prod);
            let end = end_algebra(&prod).dim();
            let layers = prod.loewy_layers();
            let same = match &q_ref {
                None => {
                    q_ref = Some(prod.clone());
                    true
                }
                Some(q0) => is_isomorphic(q0, &prod)?,
            };
            let ok = indec && st.free_rank == 0 && prod.dim == 9 && end == 15 && layers == vec![3, 3, 3] && same;
            if !ok {
                c3.1.push((mu, nu));
            }
        }
    }
    rep.check(
        "sum_nonzero",
        c1.1.is_empty(),
        format!("{} pairs, failures {:?}", c1.0, c1.1),
    );
    rep.check(
        "both_zero",
        c2.0 > 0 && c2.1.is_empty(),
        format!("{} pairs, failures {:?}", c2.0, c2.1),
    );
    rep.check(
        "opposite_nonzero",
        c3.0 > 0 && c3.1.is_empty(),
        format!(
            "{} pairs, failures {:?}; Q indecomposable, dim 9, End 15, layers 3,3,3, independent of mu",
            c3.0, c3.1
        ),
    );
    Ok(rep)
}

fn label(o: Option<usize>) -> String {
    match o {
        None => "0".into(),
        Some(i) => format!("T_{i}"),
    }
}

pub fn carlson(table: &TiltingTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("carlson", table, opts.seed);
    let f = table.field();
    let p = table.p();
    let r = table.r();
    let q = p.pow(r as u32);
    let b0 = p.pow(r as u32 - 1);
    let allowed = carlson_allowed(p, r);
    let one = Module::trivial(f, r);
    let res = minimal_resolution(&one, 3);
    let mut classes: Vec<(String, CohomologyClass)> = vec![("0 in H^1".into(), CohomologyClass::zero(&res, 1))];
    for c in projective_points(f, r) {
        classes.push((format!("H^1 {:?}", c), degree_one_class(&res, &c)?));
    }
    let nb = r * (r - 1) / 2;
    classes.push(("0 in H^2".into(), CohomologyClass::zero(&res, 2)));
    let special: Vec<Fe> = table.lambda.entries.iter().map(|&x| f.pow(x, q as u64)).collect();
    let special_idx = classes.len();
    if p > 2 {
        classes.push((
            "sum lambda_a^(p^r) x_a".into(),
            degree_two_class(&res, &special, &vec![Fe::ZERO; nb])?,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xca);
    let h2 = opts.count.unwrap_or(60);
    for _ in 0..h2 {
        let c: Vec<Fe> = (0..r).map(|_| f.random(&mut rng)).collect();
        let b: Vec<Fe> = (0..nb).map(|_| f.random(&mut rng)).collect();
        classes.push((format!("H^2 c={c:?} b={b:?}"), degree_two_class(&res, &c, &b)?));
    }
    let mut hist: BTreeMap<String, usize> = BTreeMap::new();
    let mut realized: BTreeSet<Option<usize>> = BTreeSet::new();
    let mut literal_fail = Vec::new();
    let mut summand_fail = Vec::new();
    let mut witness = String::new();
    let mut outcomes = Vec::new();
    for (name, z) in &classes {
        let l = carlson_module(&res, z)?;
        let core = strip_projectives(&table.s().tensor(&l)).core;
        let single = if core.dim == 0 {
            Some(None)
        } else {
            table.identify(&core).map(Some)
        };
        let outcome = match single {
            Some(o) if allowed.contains(&o) => {
                realized.insert(o);
                label(o)
            }
            _ => {
                let d = indecomposable_decomposition(&core, 0xc)?;
                let ids: Vec<Option<usize>> = d.summands.iter().map(|s| table.identify(&s.module)).collect();
                let ok = ids.iter().all(|i| i.is_some_and(|i| allowed.contains(&Some(i))));
                let lab = d
                    .summands
                    .iter()
                    .zip(&ids)
                    .map(|(s, i)| match i {
                        Some(i) => format!("T_{i}^{}", s.multiplicity),
                        None => format!("?{}^{}", s.module.dim, s.multiplicity),
                    })
                    .collect::<Vec<_>>()
                    .join("+");
                literal_fail.push(name.clone());
                if !ok {
                    summand_fail.push(name.clone());
                }
                if witness.is_empty() {
                    witness = format!("{name}: L = {}", module_to_json(&l));
                }
                lab
            }
        };
        *hist.entry(format!("H^{} {}", z.degree, outcome)).or_insert(0) += 1;
        outcomes.push(outcome);
    }
    let n = classes.len();
    rep.check(
        "outcomes_in_allowed_list",
        literal_fail.is_empty(),
        format!(
            "{n} classes, allowed {:?}, histogram {hist:?}; {} outside the list, first witness {witness}",
            allowed.iter().map(|&o| label(o)).collect::<Vec<_>>(),
            literal_fail.len()
        ),
    );
    rep.check(
        "summands_in_allowed_list",
        summand_fail.is_empty(),
        format!("classes with a summand outside the list: {summand_fail:?}"),
    );
    let missing: Vec<String> = allowed
        .iter()
        .filter(|o| !realized.contains(o))
        .map(|&o| label(o))
        .collect();
    rep.check(
        "all_outcomes_realized",
        missing.is_empty(),
        format!("never realized: {missing:?}"),
    );
    rep.check(
        "zero_class_is_omega_s",
        outcomes[0] == label(Some(q - b0 - 1)),
        format!("zero class in H^1 gives {}", outcomes[0]),
    );
    if p > 2 {
        rep.check(
            "special_class_projective",
            outcomes[special_idx] == "0",
            format!("sum lambda_a^(p^r) x_a gives {}", outcomes[special_idx]),
        );
    }
    Ok(rep)
}

fn membership_allowed(p: usize, r: usize) -> BTreeSet<usize> {
    let b = p.pow(r as u32 - 1);
    let mut s: BTreeSet<usize> = (0..r).map(|i| b + p.pow(i as u32) - 1).collect();
    s.insert(b - 1);
    s
}

pub fn loewy2(table: &TiltingTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("loewy2", table, opts.seed);
    let f = table.field();
    let r = table.r();
    let allowed = membership_allowed(table.p(), r);
    let n = opts.count.unwrap_or(200);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x12);
    let mut bad = Vec::new();
    let mut seen = BTreeSet::new();
    for i in 0..n {
        let a = rng.gen_range(1..=4);
        let b = rng.gen_range(1..=4);
        let x = loewy2_module_with(f, r, a, b, &mut rng);
        let v = check_membership(&x, table, &format!("loewy2-{i}"))?;
        seen.extend(v.indices());
        if v.status != Status::InIdeal || v.indices().iter().any(|i| !allowed.contains(i)) {
            bad.push(format!("{}: {:?}", i, v.summary()));
        }
    }
    rep.check(
        "loewy2_membership",
        bad.is_empty(),
        format!("{n} modules, indices seen {seen:?} within {allowed:?}; failures {bad:?}"),
    );
    let va = loewy2_from_blocks_example(table);
    rep.check(
        "blocks_lambda_give_v",
        is_isomorphic_to_entry(&table.entries[1], &va),
        "a = b = 1 with A_i = lambda_i",
    );
    Ok(rep)
}

fn loewy2_from_blocks_example(table: &TiltingTable) -> Module {
    let blocks: Vec<Mat> = table
        .lambda
        .entries
        .iter()
        .map(|&l| Mat::from_rows(&[vec![l]]))
        .collect();
    crate::conjecture::loewy2_from_blocks(table.field(), 1, 1, &blocks)
}

pub fn uniserial(table: &TiltingTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("uniserial", table, opts.seed);
    let p = table.p();
    let reps = opts.count.unwrap_or(5);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x05);
    let mut bad = Vec::new();
    let mut n = 0;
    for d in 1..=p {
        for e in 1..=p {
            for _ in 0..reps {
                let x = uniserial_ext_with(table, d, e, &mut rng, false)?;
                let v = check_membership(&x, table, &format!("uniserial-{d}-{e}"))?;
                n += 1;
                if v.status != Status::InIdeal {
                    bad.push((d, e, module_to_json(&x)));
                }
            }
        }
    }
    rep.check(
        "uniserial_membership",
        bad.is_empty(),
        format!("{n} extensions; failures {bad:?}"),
    );
    let z = uniserial_ext_with(table, p, p, &mut rng, true)?;
    let v = check_membership(&z, table, "uniserial-split")?;
    let want: BTreeMap<usize, usize> = [(table.projective_index(), 2)].into_iter().collect();
    rep.check(
        "split_top_lengths",
        v.tilt_multiset == want,
        format!("{:?}", v.tilt_multiset),
    );
    let mut ok = true;
    for d in 1..=p {
        let u = uniserial_quotient(table, d);
        ok &= u.dim == d && u.loewy_layers() == vec![1; d];
    }
    rep.check("quotients_uniserial", ok, "U_d has d layers of dimension one");
    let u = st1_e_basis(&table.lambda, table.r() as u32 - 1);
    let pt = steinberg_point(&table.lambda)?;
    rep.check(
        "u_avoids_point",
        is_projective_at(&u, &pt.coords)?,
        "U is free at the Steinberg point",
    );
    Ok(rep)
}

pub fn tensor_power_expectation(p: usize, r: usize) -> (Vec<usize>, Vec<usize>) {
    if p == 2 {
        let lo = 1usize << (r - 2);
        let hi = 1usize << (r - 1);
        (
            (lo..=hi).map(|i| 2 * i - 1).collect(),
            (lo..hi).map(|i| 2 * i).collect(),
        )
    } else {
        let lo = (p.pow(r as u32 - 1) - 1) / 2;
        let hi = (p.pow(r as u32) - 1) / 2;
        (
            (lo..=hi).map(|i| 2 * i).collect(),
            (lo..hi).map(|i| 2 * i + 1).collect(),
        )
    }
}

pub fn tensor_powers(table: &TiltingTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("tensorpowers", table, opts.seed);
    let p = table.p();
    let r = table.r();
    if r < 2 {
        return Err(Error::Config("tensorpowers needs r >= 2".into()));
    }
    let (want_a, want_b) = tensor_power_expectation(p, r);
    let s = table.s();
    let (ma, mb, na, nb) = if p == 2 {
        let s3 = s.tensor_power(3);
        let s4 = s3.tensor(s);
        (s3, s4, "S^3", "S^4")
    } else {
        let sp = s.tensor_power(p + 1);
        let om = omega(&sp);
        (sp, om, "S^(p+1)", "Omega(S^(p+1))")
    };
    for (name, m, want) in [(na, &ma, &want_a), (nb, &mb, &want_b)] {
        let (counts, _, rem) = tilting_census(m, table)?;
        let got: Vec<usize> = counts.keys().copied().collect();
        rep.check(
            name,
            rem.dim == 0 && &got == want,
            format!(
                "dim {}, summands {counts:?}, expected indices {want:?}, remainder {}",
                m.dim, rem.dim
            ),
        );
        let pi = table.projective_index();
        let gs: Vec<usize> = got.iter().copied().filter(|&i| i != pi).collect();
        let ws: Vec<usize> = want.iter().copied().filter(|&i| i != pi).collect();
        rep.check(
            format!("{name} stable"),
            rem.dim == 0 && gs == ws,
            format!("non-projective summands {gs:?}, expected {ws:?}"),
        );
    }
    Ok(rep)
}

pub fn selfext(table: &TiltingTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("selfext", table, opts.seed);
    let p = table.p();
    let r = table.r();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5e);
    let samples = opts.count.unwrap_or(40);
    let got: Vec<usize> = (0..table.len())
        .filter_map(|l| match is_self_extension_of_s(table, l, samples, &mut rng) {
            Ok(true) => Some(Ok(l)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_>>()?;
    let want = self_extension_indices(p, r);
    rep.check("census", got == want, format!("found {got:?}, expected {want:?}"));
    rep.check(
        "count",
        got.len() == p * r - p - r + 2,
        format!("{} = pr - p - r + 2 = {}", got.len(), p * r - p - r + 2),
    );
    Ok(rep)
}

/// Cyclic modules: quotients of `kE` by random ideals, cyclic submodules of
/// tilting modules and of `S (x) X` for random loewy-two `X`.
fn random_cyclic(table: &TiltingTable, rng: &mut ChaCha8Rng) -> Module {
    let f = table.field();
    let r = table.r();
    match rng.gen_range(0..3) {
        0 => random_module_with(f, r, 1, rng.gen_range(1..=3), rng),
        1 => {
            let i = rng.gen_range(0..table.len());
            let t = table.t(i);
            let v: Vec<Fe> = (0..t.dim).map(|_| f.random(rng)).collect();
            cyclic_submodule(t, &v)
        }
        _ => {
            let x = loewy2_module_with(f, r, rng.gen_range(1..=2), rng.gen_range(1..=2), rng);
            let m = table.s().tensor(&x);
            let v: Vec<Fe> = (0..m.dim).map(|_| f.random(rng)).collect();
            cyclic_submodule(&m, &v)
        }
    }
}

pub fn cyclic(table: &TiltingTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("cyclic", table, opts.seed);
    let p = table.p();
    if table.r() != 2 {
        return Err(Error::Config("cyclic scan needs r = 2".into()));
    }
    let f = table.field();
    let allowed: BTreeSet<usize> = (1..=p).map(|l| l * p - 1).collect();
    let n = opts.count.unwrap_or(300);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xcc);
    let mut found: BTreeMap<usize, usize> = BTreeMap::new();
    let mut bad = Vec::new();
    let mut sproj = 0;
    for i in 0..n {
        let m = match i {
            0 => Module::free(f, 2, 1),
            1 => table.s().clone(),
            2 => Module::trivial(f, 2),
            _ => random_cyclic(table, &mut rng),
        };
        if m.dim == 0 || !m.is_cyclic() {
            continue;
        }
        if !is_s_projective(&m, table)? {
            continue;
        }
        sproj += 1;
        match table.identify(&m) {
            Some(j) if allowed.contains(&j) => *found.entry(j).or_insert(0) += 1,
            other => bad.push(format!("{other:?}: {}", module_to_json(&m))),
        }
    }
    rep.check(
        "cyclic_s_projectives",
        bad.is_empty() && found.contains_key(&(p * p - 1)) && found.contains_key(&(p - 1)),
        format!("{n} modules, {sproj} S-projective, by index {found:?}; failures {bad:?}"),
    );
    rep.check(
        "trivial_not_s_projective",
        !is_s_projective(&Module::trivial(f, 2), table)?,
        "the trivial module is filtered out",
    );
    Ok(rep)
}

pub fn consequences(table: &TiltingTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("consequences", table, opts.seed);
    let p = table.p();
    let r = table.r();
    let f = table.field();
    let b = p.pow(r as u32 - 1);
    let u = st1_e_basis(&table.lambda, r as u32 - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xc0);
    let mut fails: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    let names = [
        "s_projective",
        "self_dual",
        "dimension",
        "fixed_points",
        "restriction_free",
        "top_bound",
        "no_u_quotient",
    ];
    for n in names {
        fails.insert(n, Vec::new());
    }
    for i in b - 1..table.projective_index() {
        let e = &table.entries[i];
        let y = &e.module;
        let d = y.dim;
        if !is_s_projective(y, table)? {
            fails.get_mut("s_projective").unwrap().push(i);
        }
        if !is_isomorphic_to_entry(e, &e.dual) {
            fails.get_mut("self_dual").unwrap().push(i);
        }
        if !d.is_multiple_of(b) || d > (p - 1) * (2 * p).pow(r as u32 - 1) {
            fails.get_mut("dimension").unwrap().push(i);
        }
        let t = y.socle_dim();
        let ok_t = t.is_power_of_two() && t <= 1 << (r - 1) && (1..p).any(|lp| d == lp * t * b);
        if !ok_t {
            fails.get_mut("fixed_points").unwrap().push(i);
        }
        let sub = Module::from_parts(f, r - 1, d, y.gens[..r - 1].to_vec());
        if strip_projectives(&sub).free_rank * b != d {
            fails.get_mut("restriction_free").unwrap().push(i);
        }
        let top = y.top_dim();
        let ok_top = (top..=(p - 1) * top).any(|m| d == b * m) && (p != 2 || d == b * top);
        if !ok_top {
            fails.get_mut("top_bound").unwrap().push(i);
        }
        let into = hom_space(y, &u);
        let from = hom_space(&u, y);
        let mut hit = false;
        for _ in 0..20 {
            let mut g = Mat::zeros(u.dim, d);
            for m in &into.basis {
                g.axpy(f, f.random(&mut rng), m);
            }
            let mut h = Mat::zeros(d, u.dim);
            for m in &from.basis {
                h.axpy(f, f.random(&mut rng), m);
            }
            hit |= g.rank(f) == u.dim || h.rank(f) == u.dim;
        }
        if hit {
            fails.get_mut("no_u_quotient").unwrap().push(i);
        }
    }
    for (n, v) in &fails {
        rep.check(*n, v.is_empty(), format!("failing indices {v:?}"));
    }
    rep.check(
        "trivial_not_s_projective",
        !is_s_projective(&Module::trivial(f, r), table)?,
        "",
    );
    rep.check("free_s_projective", is_s_projective(&Module::free(f, r, 1), table)?, "");
    let _ = radical_power;
    Ok(rep)
}

pub fn fuzz_suite(table: &TiltingTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("fuzz", table, opts.seed);
    let family = opts.family.unwrap_or(Family::Random);
    let count = opts.count.unwrap_or(if table.r() <= 2 { 500 } else { 300 });
    let max_dim = opts.max_dim.unwrap_or(crate::conjecture::default_max_dim(table.r()));
    let sink = opts.sink.as_deref().map(CandidateSink::new).transpose()?;
    let full = fuzz(table, family, opts.seed, count, max_dim, opts.jobs, sink.as_ref())?;
    if let Some(dir) = &opts.sink {
        let persisted = std::fs::read_dir(dir)
            .into_iter()
            .flatten()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_name().to_string_lossy().starts_with("candidate-"))
            .count();
        rep.check(
            "sink_empty",
            persisted == 0,
            format!("{persisted} files in {}", dir.display()),
        );
    }
    rep.check(
        "no_candidates",
        full.candidates == 0,
        format!(
            "{} in ideal, {} candidates, {} over the cap, index histogram {:?}",
            full.in_ideal, full.candidates, full.skipped, full.index_histogram
        ),
    );
    let prefix = count.min(25);
    let again = fuzz(table, family, opts.seed, prefix, max_dim, 2, None)?;
    rep.check(
        "deterministic",
        again.verdicts[..] == full.verdicts[..again.verdicts.len()],
        format!("first {prefix} iterations recomputed with 2 jobs"),
    );
    Ok(rep)
}

/// Nonzero vectors of `span(basis)` over the prime field or all of `F_q`,
/// one per line if `projective`.
fn span_vectors(f: &Field, basis: &Mat, prime_only: bool, projective: bool) -> Vec<Vec<Fe>> {
    let coeffs: Vec<Fe> = if prime_only {
        (0..f.p()).map(|c| f.from_i64(c as i64)).collect()
    } else {
        f.elements().collect()
    };
    let n = coeffs.len();
    let dim = basis.cols;
    let total = n.pow(dim as u32);
    let mut out = Vec::new();
    for mut idx in 1..total {
        let mut c = Vec::with_capacity(dim);
        for _ in 0..dim {
            c.push(coeffs[idx % n]);
            idx /= n;
        }
        if projective {
            let lead = c.iter().position(|x| !x.is_zero()).unwrap();
            if c[lead] != Fe::ONE {
                continue;
            }
        }
        out.push(basis.mul_vec(f, &c));
    }
    out
}

/// Modules reached by the presentation sampler at `p = r = 2`: cyclic
/// quotients by one or two relations over `F_q`, rank-two quotients by one
/// relation over `F_q` or two over `F_2`, their duals, dims at most six.
pub fn p2_modules(table: &TiltingTable, max_dim: usize) -> Vec<Module> {
    let f = table.field();
    let r = table.r();
    let mut out = Vec::new();
    let keep = |m: Module, out: &mut Vec<Module>| {
        if m.dim > 0 && m.dim <= max_dim {
            out.push(m.dual());
            out.push(m);
        }
    };
    for a in 1..=2usize {
        let free = Module::free(f, r, a);
        let rad = free.radical_basis();
        let full = span_vectors(f, &rad, false, true);
        for v in &full {
            let w = free.span_closure(&Mat::from_cols(free.dim, std::slice::from_ref(v)));
            keep(quotient(&free, &w).module, &mut out);
        }
        let pool = if a == 1 {
            full
        } else {
            span_vectors(f, &rad, true, false)
        };
        for i in 0..pool.len() {
            for j in i + 1..pool.len() {
                let w = free.span_closure(&Mat::from_cols(free.dim, &[pool[i].clone(), pool[j].clone()]));
                keep(quotient(&free, &w).module, &mut out);
            }
        }
    }
    out
}

pub fn p2_complete(table: &TiltingTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("p2complete", table, opts.seed);
    if table.p() != 2 || table.r() != 2 {
        return Err(Error::Config("p2complete needs p = r = 2".into()));
    }
    let max_dim = opts.max_dim.unwrap_or(6);
    let mods = p2_modules(table, max_dim);
    let mut bad = Vec::new();
    let mut by_dim: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, x) in mods.iter().enumerate() {
        *by_dim.entry(x.dim).or_insert(0) += 1;
        let v = check_membership(x, table, &format!("p2-{i}"))?;
        if v.status != Status::InIdeal {
            bad.push(module_to_json(x));
        }
    }
    rep.check(
        "all_in_ideal",
        bad.is_empty() && !mods.is_empty(),
        format!("{} modules by dimension {by_dim:?}; candidates {bad:?}", mods.len()),
    );
    Ok(rep)
}
