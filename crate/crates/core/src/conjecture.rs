//! Membership of `S (x) X` in the ideal generated by the tilting modules,
//! `S`-projectivity, module generators and fuzzing.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomp::{indecomposable_decomposition, multiplicity, peel_against, LibraryEntry};
use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, Field};
use crate::hom::hom_space;
use crate::homological::{omega, pushout_extension, strip_projectives, syzygy_data};
use crate::linalg::Mat;
use crate::module::{quotient, Module};
use crate::serial::{module_to_json, ModuleJson};
use crate::sl2::{st1_e_basis, v_module, TiltingTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    InIdeal,
    CounterexampleCandidate,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub id: String,
    pub input_dim: usize,
    /// Index into the tilting table, free summands included at `p^r - 1`.
    pub tilt_multiset: BTreeMap<usize, usize>,
    pub projective_rank: usize,
    pub remainder: Option<Module>,
    pub status: Status,
}

impl Verdict {
    pub fn indices(&self) -> Vec<usize> {
        self.tilt_multiset
            .iter()
            .filter(|(_, &m)| m > 0)
            .map(|(&i, _)| i)
            .collect()
    }

    pub fn summary(&self) -> VerdictSummary {
        VerdictSummary {
            id: self.id.clone(),
            input_dim: self.input_dim,
            tilt_multiset: self.tilt_multiset.clone(),
            projective_rank: self.projective_rank,
            remainder_dim: self.remainder.as_ref().map(|m| m.dim),
            status: self.status,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictSummary {
    pub id: String,
    pub input_dim: usize,
    pub tilt_multiset: BTreeMap<usize, usize>,
    pub projective_rank: usize,
    pub remainder_dim: Option<usize>,
    pub status: Status,
}

/// Tilting summands of `M`, free part included. Returns the counts and
/// whatever is left after peeling.
pub fn tilting_census(m: &Module, table: &TiltingTable) -> Result<(BTreeMap<usize, usize>, usize, Module)> {
    let st = strip_projectives(m);
    let lib = &table.entries[..table.projective_index()];
    let peel = peel_against(&st.core, lib)?;
    let mut counts = BTreeMap::new();
    for (i, &c) in peel.counts.iter().enumerate() {
        if c > 0 {
            counts.insert(i, c);
        }
    }
    if st.free_rank > 0 {
        counts.insert(table.projective_index(), st.free_rank);
    }
    Ok((counts, st.free_rank, peel.remainder))
}

fn merge(into: &mut BTreeMap<usize, usize>, from: &BTreeMap<usize, usize>) {
    for (&i, &c) in from {
        *into.entry(i).or_insert(0) += c;
    }
}

fn extension_of(f: &Field) -> Result<(Field, Embedding)> {
    let big = Field::new(f.p(), 2 * f.k())?;
    let emb = Embedding::new(f, &big)?;
    Ok((big, emb))
}

/// Second look at a non-zero remainder: a fresh-seed decomposition with each
/// summand matched against the table, then peeling over `F_(q^2)`.
pub fn reverify(rem: &Module, table: &TiltingTable, seed: u64) -> Result<Option<BTreeMap<usize, usize>>> {
    let rep = indecomposable_decomposition(rem, seed ^ 0x5e_ed0f_5eed)?;
    let tab = if rep.field_extended {
        table.extend(&Embedding::new(table.field(), &rep.field)?)?
    } else {
        table.clone()
    };
    let mut counts = BTreeMap::new();
    let mut all = true;
    for s in &rep.summands {
        match tab.identify(&s.module) {
            Some(i) => *counts.entry(i).or_insert(0) += s.multiplicity,
            None => all = false,
        }
    }
    if all {
        return Ok(Some(counts));
    }
    let (_, emb) = extension_of(table.field())?;
    let big = table.extend(&emb)?;
    let (c, _, r) = tilting_census(&rem.extend_scalars(&emb)?, &big)?;
    Ok(if r.dim == 0 { Some(c) } else { None })
}

/// Decompose `S (x) X` against the tilting table.
pub fn check_membership(x: &Module, table: &TiltingTable, id: &str) -> Result<Verdict> {
    x.check_compatible(table.s())?;
    let sx = table.s().tensor(x);
    let (mut counts, free, rem) = tilting_census(&sx, table)?;
    let mut remainder = None;
    if rem.dim > 0 {
        match reverify(&rem, table, rem.dim as u64)? {
            Some(extra) => merge(&mut counts, &extra),
            None => remainder = Some(rem),
        }
    }
    let status = if remainder.is_none() {
        Status::InIdeal
    } else {
        Status::CounterexampleCandidate
    };
    Ok(Verdict {
        id: id.to_string(),
        input_dim: x.dim,
        tilt_multiset: counts,
        projective_rank: free,
        remainder,
        status,
    })
}

/// Is `M` a summand of `M (x) S (x) S*`?
pub fn is_s_projective(m: &Module, table: &TiltingTable) -> Result<bool> {
    if m.dim == 0 {
        return Ok(true);
    }
    let rep = indecomposable_decomposition(m, 0x5)?;
    let s = table.s();
    let mut big = m.tensor(s).tensor(&s.dual());
    if rep.field_extended {
        big = big.extend_scalars(&Embedding::new(&m.field, &rep.field)?)?;
    }
    Ok(rep
        .summands
        .iter()
        .all(|sm| multiplicity(&sm.entry, &big) >= sm.multiplicity))
}

/// Uniform element of `rad^depth (kE^a)`.
fn random_radical_element<R: Rng + ?Sized>(free: &Module, depth: usize, rng: &mut R) -> Vec<Fe> {
    let f = &free.field;
    let mons = free.monomials();
    let size = mons.size;
    (0..free.dim)
        .map(|i| {
            if mons.degree(i % size) >= depth {
                f.random(rng)
            } else {
                Fe::ZERO
            }
        })
        .collect()
}

/// `kE^a / (b elements of rad kE^a)` with free summands removed. Each
/// relation is uniform in `rad^j` for `j` uniform in `1..=r(p-1)`.
pub fn random_module(f: &Field, r: usize, seed: u64, a: usize, b: usize) -> Module {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_module_with(f, r, a, b, &mut rng)
}

pub fn random_module_with<R: Rng + ?Sized>(f: &Field, r: usize, a: usize, b: usize, rng: &mut R) -> Module {
    let free = Module::free(f, r, a);
    let top = r * (f.p() as usize - 1);
    let rels: Vec<Vec<Fe>> = (0..b)
        .map(|_| {
            let depth = rng.gen_range(1..=top);
            random_radical_element(&free, depth, rng)
        })
        .collect();
    let w = free.span_closure(&Mat::from_cols(free.dim, &rels));
    strip_projectives(&quotient(&free, &w).module).core
}

/// `N_i = [[0, 0], [A_i, 0]]` with random `b x a` blocks.
pub fn loewy2_module(f: &Field, r: usize, seed: u64, a: usize, b: usize) -> Module {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loewy2_module_with(f, r, a, b, &mut rng)
}

pub fn loewy2_module_with<R: Rng + ?Sized>(f: &Field, r: usize, a: usize, b: usize, rng: &mut R) -> Module {
    let blocks: Vec<Mat> = (0..r).map(|_| Mat::random(f, b, a, rng)).collect();
    loewy2_from_blocks(f, a, b, &blocks)
}

pub fn loewy2_from_blocks(f: &Field, a: usize, b: usize, blocks: &[Mat]) -> Module {
    let n = a + b;
    let gens = blocks
        .iter()
        .map(|blk| {
            let mut g = Mat::zeros(n, n);
            g.set_block(a, 0, blk);
            g
        })
        .collect();
    Module::from_parts(f, blocks.len(), n, gens)
}

/// Columns spanning `rad^d M`.
pub fn radical_power(m: &Module, d: usize) -> Mat {
    let f = &m.field;
    let mut cur = Mat::identity(m.dim);
    for _ in 0..d {
        let imgs: Vec<Mat> = m.gens.iter().map(|g| g.mul(f, &cur)).collect();
        cur = Mat::hcat(m.dim, &imgs).col_space(f);
    }
    cur
}

/// `U / rad^d U` for `U = St_1^(r-1)`.
pub fn uniserial_quotient(table: &TiltingTable, d: usize) -> Module {
    let u = st1_e_basis(&table.lambda, table.r() as u32 - 1);
    quotient(&u, &radical_power(&u, d)).module
}

/// Extension of `U_e` by `U_d` given by a random `Omega(U_d) -> U_e`.
pub fn uniserial_ext_module(table: &TiltingTable, seed: u64, d: usize, e: usize) -> Result<Module> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    uniserial_ext_with(table, d, e, &mut rng, false)
}

pub fn uniserial_ext_with<R: Rng + ?Sized>(
    table: &TiltingTable,
    d: usize,
    e: usize,
    rng: &mut R,
    zero_map: bool,
) -> Result<Module> {
    let p = table.p();
    if d == 0 || e == 0 || d > p || e > p {
        return Err(Error::InvalidArgument(format!(
            "uniserial lengths ({d}, {e}) outside 1..={p}"
        )));
    }
    let f = table.field();
    let ud = uniserial_quotient(table, d);
    let ue = uniserial_quotient(table, e);
    let sd = syzygy_data(&ud);
    let hs = hom_space(&sd.syzygy, &ue);
    let mut fmat = Mat::zeros(ue.dim, sd.syzygy.dim);
    if !zero_map {
        for b in &hs.basis {
            fmat.axpy(f, f.random(rng), b);
        }
    }
    pushout_extension(&sd, &ue, &fmat)
}

pub fn cyclic_submodule(m: &Module, v: &[Fe]) -> Module {
    let basis = m.span_closure(&Mat::from_cols(m.dim, &[v.to_vec()]));
    crate::module::induced_on_subspace(m, &basis)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub count: usize,
    pub family: String,
    pub generator: String,
    pub p: u32,
    pub k: u32,
    pub r: usize,
    pub max_dim: usize,
    pub in_ideal: usize,
    pub candidates: usize,
    pub skipped: usize,
    pub index_histogram: BTreeMap<usize, usize>,
    pub candidate_paths: Vec<String>,
    pub verdicts: Vec<VerdictSummary>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Random,
    Loewy2,
    Uniserial,
    TensorClosure,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s {
            "random" => Ok(Family::Random),
            "loewy2" => Ok(Family::Loewy2),
            "uniserial" | "uniserial_ext" => Ok(Family::Uniserial),
            "closure" | "tensor-closure" | "tensor_closure" => Ok(Family::TensorClosure),
            _ => Err(Error::Config(format!("unknown family '{s}'"))),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::Loewy2 => "loewy2",
            Family::Uniserial => "uniserial",
            Family::TensorClosure => "tensor-closure",
        }
    }

    pub fn generator(self) -> &'static str {
        match self {
            Family::Random => "kE^a/(b elements uniform in rad^j kE^a, j in 1..=r(p-1)), a <= min(4, cap/p^r), b in 1..=2a+1, stripped",
            Family::Loewy2 => "[[0,0],[A_i,0]] with uniform A_i, a,b in 1..=4",
            Family::Uniserial => "pushout of a uniform Omega(U_d) -> U_e, U = St_1^(r-1), d,e in 1..=p",
            Family::TensorClosure => "random or loewy2 base, then 1-3 of: (x) V, (x) loewy2(1,1), dual, Omega",
        }
    }
}

/// Per-iteration generator: stream `i` of the master seed.
pub fn iteration_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

pub fn default_max_dim(r: usize) -> usize {
    if r <= 2 {
        40
    } else {
        64
    }
}

/// One module of the family, or `None` if it exceeded the cap.
pub fn sample_family<R: Rng + ?Sized>(
    family: Family,
    table: &TiltingTable,
    max_dim: usize,
    rng: &mut R,
) -> Result<Option<Module>> {
    let f = table.field();
    let r = table.r();
    let size = table.p().pow(r as u32);
    let m = match family {
        Family::Random => {
            let amax = (max_dim / size).clamp(1, 4);
            let a = rng.gen_range(1..=amax);
            let b = rng.gen_range(1..=2 * a + 1);
            random_module_with(f, r, a, b, rng)
        }
        Family::Loewy2 => {
            let a = rng.gen_range(1..=4);
            let b = rng.gen_range(1..=4);
            loewy2_module_with(f, r, a, b, rng)
        }
        Family::Uniserial => {
            let d = rng.gen_range(1..=table.p());
            let e = rng.gen_range(1..=table.p());
            uniserial_ext_with(table, d, e, rng, false)?
        }
        Family::TensorClosure => {
            let mut m = if rng.gen_bool(0.5) {
                random_module_with(f, r, 1, rng.gen_range(1..=3), rng)
            } else {
                loewy2_module_with(f, r, rng.gen_range(1..=2), rng.gen_range(1..=2), rng)
            };
            let ops = rng.gen_range(1..=3);
            for _ in 0..ops {
                let next = match rng.gen_range(0..4) {
                    0 => m.tensor(&v_module(f, &table.lambda.entries)),
                    1 => m.tensor(&loewy2_module_with(f, r, 1, 1, rng)),
                    2 => m.dual(),
                    _ => omega(&m),
                };
                if next.dim <= max_dim {
                    m = next;
                }
            }
            m
        }
    };
    Ok(if m.dim > max_dim { None } else { Some(m) })
}

#[derive(Serialize)]
struct Sidecar<'a> {
    seed: u64,
    iteration: usize,
    family: &'a str,
    verdict: &'a VerdictSummary,
}

/// Append-only store for candidate modules.
pub struct CandidateSink {
    dir: PathBuf,
    lock: Mutex<()>,
}

impl CandidateSink {
    /// The directory is created on the first persisted candidate.
    pub fn new(dir: &Path) -> Result<CandidateSink> {
        Ok(CandidateSink {
            dir: dir.to_path_buf(),
            lock: Mutex::new(()),
        })
    }

    pub fn persist(
        &self,
        seed: u64,
        iteration: usize,
        family: Family,
        x: &Module,
        v: &VerdictSummary,
    ) -> Result<String> {
        let _g = self.lock.lock().expect("sink lock");
        fs::create_dir_all(&self.dir)?;
        let stem = format!("candidate-{}-{}-{}", family.tag(), seed, iteration);
        let path = self.dir.join(format!("{stem}.json"));
        fs::write(&path, module_to_json(x))?;
        let side = Sidecar {
            seed,
            iteration,
            family: family.tag(),
            verdict: v,
        };
        fs::write(
            self.dir.join(format!("{stem}.verdict.json")),
            serde_json::to_string(&side)?,
        )?;
        Ok(path.to_string_lossy().into_owned())
    }
}

fn fuzz_one(
    table: &TiltingTable,
    family: Family,
    seed: u64,
    i: usize,
    max_dim: usize,
) -> Result<Option<(Module, Verdict)>> {
    let mut rng = iteration_rng(seed, i);
    let Some(x) = sample_family(family, table, max_dim, &mut rng)? else {
        return Ok(None);
    };
    let v = check_membership(&x, table, &format!("{}-{}-{}", family.tag(), seed, i))?;
    Ok(Some((x, v)))
}

type Outcome = Result<Option<(Module, Verdict)>>;

/// Run `count` membership checks. Results are independent of `jobs`.
pub fn fuzz(
    table: &TiltingTable,
    family: Family,
    seed: u64,
    count: usize,
    max_dim: usize,
    jobs: usize,
    sink: Option<&CandidateSink>,
) -> Result<FuzzReport> {
    let jobs = jobs.max(1).min(count.max(1));
    let mut results: Vec<Option<Outcome>> = (0..count).map(|_| None).collect();
    std::thread::scope(|sc| {
        let chunks: Vec<(usize, &mut [Option<Outcome>])> = {
            let per = count.div_ceil(jobs).max(1);
            results.chunks_mut(per).enumerate().map(|(c, s)| (c * per, s)).collect()
        };
        for (start, slot) in chunks {
            sc.spawn(move || {
                for (off, cell) in slot.iter_mut().enumerate() {
                    *cell = Some(fuzz_one(table, family, seed, start + off, max_dim));
                }
            });
        }
    });
    let f = table.field();
    let mut report = FuzzReport {
        seed,
        count,
        family: family.tag().into(),
        generator: family.generator().into(),
        p: f.p(),
        k: f.k(),
        r: table.r(),
        max_dim,
        in_ideal: 0,
        candidates: 0,
        skipped: 0,
        index_histogram: BTreeMap::new(),
        candidate_paths: Vec::new(),
        verdicts: Vec::new(),
    };
    for (i, cell) in results.into_iter().enumerate() {
        match cell.expect("every iteration ran")? {
            None => report.skipped += 1,
            Some((x, v)) => {
                let s = v.summary();
                match v.status {
                    Status::InIdeal => report.in_ideal += 1,
                    Status::CounterexampleCandidate => {
                        report.candidates += 1;
                        if let Some(sink) = sink {
                            report.candidate_paths.push(sink.persist(seed, i, family, &x, &s)?);
                        }
                    }
                }
                for idx in v.indices() {
                    *report.index_histogram.entry(idx).or_insert(0) += 1;
                }
                report.verdicts.push(s);
            }
        }
    }
    Ok(report)
}

/// Candidate files written by the sink, as modules.
pub fn load_candidate(path: &Path) -> Result<Module> {
    let mj: ModuleJson = serde_json::from_str(&fs::read_to_string(path)?)?;
    mj.to_module()
}

/// Indices `l < p^r` of the tilting modules that are self-extensions of `S`.
pub fn self_extension_indices(p: usize, r: usize) -> Vec<usize> {
    let base = p.pow(r as u32 - 1);
    let mut out: Vec<usize> = Vec::new();
    for i in 0..r.saturating_sub(1) {
        for a in 1..p {
            out.push(base + a * p.pow(i as u32) - 1);
        }
    }
    out.push(2 * base - 1);
    out.sort_unstable();
    out.dedup();
    out
}

/// Allowed outcomes of `S (x) L_zeta` up to projectives; `None` is zero.
pub fn carlson_allowed(p: usize, r: usize) -> Vec<Option<usize>> {
    let q = p.pow(r as u32);
    let b = p.pow(r as u32 - 1);
    let mut out = vec![None, Some(b - 1)];
    for i in 0..r.saturating_sub(1) {
        out.push(Some(q - b + p.pow(i as u32) - 1));
    }
    if p > 2 {
        out.push(Some(q - 2 * b - 1));
        out.push(Some(q - b - 1));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Tests whether `T` is an extension of `S` by `S` using sampled injections.
pub fn is_self_extension_of_s(table: &TiltingTable, l: usize, samples: usize, rng: &mut impl Rng) -> Result<bool> {
    let t = table.t(l);
    let s = table.s();
    let se = &table.entries[table.s_index()];
    if t.dim != 2 * s.dim {
        return Ok(false);
    }
    let pt = crate::varieties::steinberg_point(&table.lambda)?;
    let supp = crate::varieties::support_points(t, 1)?;
    if supp.points.iter().any(|x| *x != pt) {
        return Ok(false);
    }
    let f = table.field();
    let hs = hom_space(s, t);
    for _ in 0..samples {
        let mut g = Mat::zeros(t.dim, s.dim);
        for b in &hs.basis {
            g.axpy(f, f.random(rng), b);
        }
        if g.rank(f) != s.dim {
            continue;
        }
        let qm = quotient(t, &g).module;
        if crate::decomp::is_isomorphic_to_entry(se, &qm) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Library entry for a module assumed indecomposable, certified with a fixed seed.
pub fn entry_for(m: &Module) -> Result<LibraryEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe7);
    LibraryEntry::new(m, &mut rng)
}
