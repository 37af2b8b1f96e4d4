//! Endomorphism algebras, local certificates, Fitting splitting, isomorphism
//! tests and summand peeling.
//!
//! Endomorphisms are examined through their action on `top(M) = M / rad M`.
//! Endomorphisms with image in `rad M` are nilpotent, so `End(M)` is local
//! exactly when its image in `End_k(top M)` is, and that image is small.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, Field};
use crate::hom::{self, HomSpace, ModMap, Presentation};
use crate::homological::strip_projectives;
use crate::linalg::Mat;
use crate::module::{induced_on_subspace, quotient, GradedModule, Module};
use crate::poly;

pub const DEFAULT_SAMPLES: usize = 32;

#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub module: Module,
    pub basis: Vec<Mat>,
}

impl EndAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn maps(&self) -> Vec<ModMap> {
        self.basis
            .iter()
            .map(|b| ModMap {
                source: self.module.clone(),
                target: self.module.clone(),
                mat: b.clone(),
            })
            .collect()
    }

    /// Coordinates of `theta` in the basis, if it lies in the span.
    pub fn coords(&self, theta: &Mat) -> Option<Vec<Fe>> {
        let f = &self.module.field;
        let n = self.module.dim;
        let cols: Vec<Vec<Fe>> = self.basis.iter().map(|b| b.data.clone()).collect();
        let a = Mat::from_cols(n * n, &cols);
        let v = Mat::from_cols(n * n, std::slice::from_ref(&theta.data));
        a.solve(f, &v).map(|x| x.col(0))
    }

    pub fn combination(&self, c: &[Fe]) -> Mat {
        let f = &self.module.field;
        let n = self.module.dim;
        let mut out = Mat::zeros(n, n);
        for (b, &x) in self.basis.iter().zip(c) {
            out.axpy(f, x, b);
        }
        out
    }

    pub fn is_commutative(&self) -> bool {
        let f = &self.module.field;
        self.basis
            .iter()
            .enumerate()
            .all(|(i, a)| self.basis[i + 1..].iter().all(|b| a.mul(f, b) == b.mul(f, a)))
    }
}

pub fn end_algebra(m: &Module) -> EndAlgebra {
    EndAlgebra {
        module: m.clone(),
        basis: hom::hom_space(m, m).basis,
    }
}

/// Residue functional of a split local endomorphism ring:
/// `phi(theta) = top_fn . (theta * top_vec)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalData {
    pub top_vec: Vec<Fe>,
    pub top_fn: Vec<Fe>,
}

impl LocalData {
    pub fn residue(&self, f: &Field, theta: &Mat) -> Fe {
        f.dot(&self.top_fn, &theta.mul_vec(f, &self.top_vec))
    }

    pub fn extend(&self, emb: &Embedding) -> LocalData {
        LocalData {
            top_vec: self.top_vec.iter().map(|&x| emb.apply(x)).collect(),
            top_fn: self.top_fn.iter().map(|&x| emb.apply(x)).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum LocalTest {
    Local(LocalData),
    Split(Mat),
    NonSplit,
}

enum Kind {
    Linear(Fe),
    Split,
    Irreducible,
}

fn classify<R: Rng + ?Sized>(f: &Field, a: &Mat, rng: &mut R) -> Kind {
    let mp = a.min_poly(f);
    let facs = poly::factor(f, &mp, rng);
    if facs.len() >= 2 {
        Kind::Split
    } else if facs.is_empty() {
        Kind::Linear(Fe::ZERO)
    } else if facs[0].0.len() == 2 {
        Kind::Linear(f.neg(facs[0].0[0]))
    } else {
        Kind::Irreducible
    }
}

/// Residue via the minimal polynomial: the unique `c` with `min_poly = (t - c)^m`.
pub fn residue_via_min_poly<R: Rng + ?Sized>(f: &Field, theta: &Mat, rng: &mut R) -> Option<Fe> {
    match classify(f, theta, rng) {
        Kind::Linear(c) => Some(c),
        _ => None,
    }
}

/// Some nonzero vector killed by every matrix in `nil`, provided the algebra
/// they generate acts nilpotently.
fn nilpotent_fixed_vector(f: &Field, nil: &[Mat], d: usize) -> Option<Vec<Fe>> {
    let mut w = Mat::identity(d);
    loop {
        let imgs: Vec<Mat> = nil.iter().map(|x| x.mul(f, &w)).collect();
        let next = Mat::hcat(d, &imgs).col_space(f);
        if next.cols == 0 {
            return Some(w.col(0));
        }
        if next.cols >= w.cols {
            return None;
        }
        w = next;
    }
}

/// Decide whether `End(M)` (given by `end`) is local with residue field `k`.
pub fn certify_local<R: Rng + ?Sized>(m: &Module, end: &[Mat], samples: usize, rng: &mut R) -> LocalTest {
    let f = &m.field;
    let q = quotient(m, &m.radical_basis());
    let d = q.module.dim;
    let lift = Mat::identity(m.dim).select_cols(&q.lifts);
    let bars: Vec<Mat> = end.iter().map(|t| q.projection.mul(f, &t.mul(f, &lift))).collect();
    let mut eig = Vec::with_capacity(bars.len());
    let mut nonsplit = false;
    for (l, b) in bars.iter().enumerate() {
        match classify(f, b, rng) {
            Kind::Linear(c) => eig.push(c),
            Kind::Split => return LocalTest::Split(end[l].clone()),
            Kind::Irreducible => {
                nonsplit = true;
                eig.push(Fe::ZERO);
            }
        }
    }
    let combine = |c: &[Fe], mats: &[Mat], n: usize| {
        let mut out = Mat::zeros(n, n);
        for (x, b) in c.iter().zip(mats) {
            out.axpy(f, *x, b);
        }
        out
    };
    if !nonsplit {
        let nil: Vec<Mat> = bars
            .iter()
            .zip(&eig)
            .map(|(b, &c)| b.sub(f, &Mat::scalar(d, c)))
            .collect();
        if let Some(wbar) = nilpotent_fixed_vector(f, &nil, d) {
            let top_vec = lift.mul_vec(f, &wbar);
            let j = wbar.iter().position(|x| !x.is_zero()).unwrap();
            let scale = f.inv(wbar[j]);
            let top_fn: Vec<Fe> = q.projection.row(j).iter().map(|&x| f.mul(x, scale)).collect();
            return LocalTest::Local(LocalData { top_vec, top_fn });
        }
    }
    for _ in 0..samples {
        let c: Vec<Fe> = (0..bars.len()).map(|_| f.random(rng)).collect();
        let b = combine(&c, &bars, d);
        if let Kind::Split = classify(f, &b, rng) {
            return LocalTest::Split(combine(&c, end, m.dim));
        }
    }
    for a in 0..bars.len() {
        for b in 0..bars.len() {
            let prod = bars[a].mul(f, &bars[b]);
            if let Kind::Split = classify(f, &prod, rng) {
                return LocalTest::Split(end[a].mul(f, &end[b]));
            }
        }
    }
    LocalTest::NonSplit
}

/// Generalized eigenspace decomposition of `M` under `theta`.
pub fn fitting_split<R: Rng + ?Sized>(m: &Module, theta: &Mat, rng: &mut R) -> Vec<(Module, Mat)> {
    let f = &m.field;
    let mp = theta.min_poly(f);
    let facs = poly::factor(f, &mp, rng);
    if facs.len() <= 1 {
        return vec![(m.clone(), Mat::identity(m.dim))];
    }
    facs.iter()
        .map(|(g, e)| {
            let p = theta.eval_poly(f, g).pow(f, *e as u64);
            let k = p.kernel(f);
            (induced_on_subspace(m, &k), k)
        })
        .collect()
}

/// A certified indecomposable with the data needed to detect it as a summand.
#[derive(Clone, Debug)]
pub struct LibraryEntry {
    pub module: Module,
    pub dual: Module,
    pub pres: Presentation,
    pub dual_pres: Presentation,
    pub local: LocalData,
    pub weights: Option<Vec<i64>>,
}

impl LibraryEntry {
    pub fn new<R: Rng + ?Sized>(m: &Module, rng: &mut R) -> Result<LibraryEntry> {
        let end = end_algebra(m);
        match certify_local(m, &end.basis, DEFAULT_SAMPLES, rng) {
            LocalTest::Local(ld) => Ok(LibraryEntry::with_local(m, ld)),
            LocalTest::Split(_) => Err(Error::Decomposition("library module is decomposable".into())),
            LocalTest::NonSplit => Err(Error::Decomposition(
                "library module has non-split endomorphism ring".into(),
            )),
        }
    }

    pub fn with_local(m: &Module, local: LocalData) -> LibraryEntry {
        let dual = m.dual();
        LibraryEntry {
            pres: Presentation::of(m),
            dual_pres: Presentation::of(&dual),
            dual,
            module: m.clone(),
            local,
            weights: None,
        }
    }

    pub fn graded<R: Rng + ?Sized>(g: &GradedModule, rng: &mut R) -> Result<LibraryEntry> {
        let mut e = LibraryEntry::new(&g.module, rng)?;
        e.weights = Some(g.weights.clone());
        Ok(e)
    }

    pub fn graded_module(&self) -> Option<GradedModule> {
        self.weights.as_ref().map(|w| GradedModule {
            module: self.module.clone(),
            weights: w.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.module.dim
    }

    pub fn extend(&self, emb: &Embedding) -> Result<LibraryEntry> {
        let m = self.module.extend_scalars(emb)?;
        let mut e = LibraryEntry::with_local(&m, self.local.extend(emb));
        e.weights = self.weights.clone();
        Ok(e)
    }
}

/// Homs in both directions between a library entry `T` and `M`.
pub struct Homs {
    pub into: HomSpace,
    pub out: HomSpace,
}

fn homs_with(entry: &LibraryEntry, m: &Module, md: &Module, graded: Option<&[i64]>) -> Homs {
    match (graded, &entry.weights) {
        (Some(w), Some(tw)) => {
            let tg = GradedModule {
                module: entry.module.clone(),
                weights: tw.clone(),
            };
            let mg = GradedModule {
                module: m.clone(),
                weights: w.to_vec(),
            };
            let into = hom::graded_hom_from_presentation(&tg, &entry.pres, &mg);
            if into.dim() == 0 {
                return Homs {
                    into,
                    out: HomSpace { basis: vec![] },
                };
            }
            let tdg = GradedModule {
                module: entry.dual.clone(),
                weights: tw.iter().map(|x| -x).collect(),
            };
            let mdg = GradedModule {
                module: md.clone(),
                weights: w.iter().map(|x| -x).collect(),
            };
            let outd = hom::graded_hom_from_presentation(&tdg, &entry.dual_pres, &mdg);
            Homs {
                into,
                out: HomSpace {
                    basis: outd.basis.into_iter().map(|g| g.transpose()).collect(),
                },
            }
        }
        _ => {
            let into = hom::hom_from_presentation(&entry.module, &entry.pres, m, None);
            if into.dim() == 0 {
                return Homs {
                    into,
                    out: HomSpace { basis: vec![] },
                };
            }
            let outd = hom::hom_from_presentation(&entry.dual, &entry.dual_pres, md, None);
            Homs {
                into,
                out: HomSpace {
                    basis: outd.basis.into_iter().map(|g| g.transpose()).collect(),
                },
            }
        }
    }
}

/// Pairing matrix `B[b][a] = phi(g_b f_a)`.
fn pairing(f: &Field, entry: &LibraryEntry, homs: &Homs) -> Mat {
    let us: Vec<Vec<Fe>> = homs
        .into
        .basis
        .iter()
        .map(|fa| fa.mul_vec(f, &entry.local.top_vec))
        .collect();
    let vs: Vec<Vec<Fe>> = homs
        .out
        .basis
        .iter()
        .map(|gb| gb.vec_mul(f, &entry.local.top_fn))
        .collect();
    Mat::from_fn(vs.len(), us.len(), |b, a| f.dot(&vs[b], &us[a]))
}

/// Multiplicity of the library module as a direct summand of `M`.
pub fn multiplicity(entry: &LibraryEntry, m: &Module) -> usize {
    if m.dim < entry.dim() {
        return 0;
    }
    let homs = homs_with(entry, m, &m.dual(), None);
    pairing(&m.field, entry, &homs).rank(&m.field)
}

/// Split every copy of `T` off `M`.
pub struct Split {
    pub multiplicity: usize,
    /// `T^m -> M`.
    pub inclusion: Mat,
    /// `M -> T^m`.
    pub projection: Mat,
    pub complement_basis: Mat,
    pub complement: Module,
    pub complement_weights: Option<Vec<i64>>,
}

fn split_with(entry: &LibraryEntry, m: &Module, weights: Option<&[i64]>) -> Result<Option<Split>> {
    let f = &m.field;
    if m.dim < entry.dim() {
        return Ok(None);
    }
    let md = m.dual();
    let homs = homs_with(entry, m, &md, weights);
    if homs.into.dim() == 0 || homs.out.dim() == 0 {
        return Ok(None);
    }
    let b = pairing(f, entry, &homs);
    let cols = b.echelon(f).pivots;
    let mult = cols.len();
    if mult == 0 {
        return Ok(None);
    }
    let rows = b.transpose().echelon(f).pivots;
    let t = entry.dim();
    let incl = Mat::hcat(
        m.dim,
        &cols.iter().map(|&a| homs.into.basis[a].clone()).collect::<Vec<_>>(),
    );
    let proj = Mat::vcat(
        m.dim,
        &rows.iter().map(|&r| homs.out.basis[r].clone()).collect::<Vec<_>>(),
    );
    let (basis, cw) = match weights {
        None => (proj.kernel(f), None),
        Some(w) => {
            let mut distinct: Vec<i64> = w.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            let mut parts = Vec::new();
            let mut cw = Vec::new();
            for wt in distinct {
                let idx: Vec<usize> = (0..m.dim).filter(|&i| w[i] == wt).collect();
                let k = proj.select_cols(&idx).kernel(f);
                let mut emb = Mat::zeros(m.dim, k.cols);
                for (r, &i) in idx.iter().enumerate() {
                    emb.row_mut(i).copy_from_slice(k.row(r));
                }
                cw.extend(std::iter::repeat_n(wt, k.cols));
                parts.push(emb);
            }
            (Mat::hcat(m.dim, &parts), Some(cw))
        }
    };
    if basis.cols + mult * t != m.dim {
        return Err(Error::Decomposition(format!(
            "split of {} copies of a {}-dim summand left a {}-dim complement in dim {}",
            mult, t, basis.cols, m.dim
        )));
    }
    let complement = induced_on_subspace(m, &basis);
    Ok(Some(Split {
        multiplicity: mult,
        inclusion: incl,
        projection: proj,
        complement_basis: basis,
        complement,
        complement_weights: cw,
    }))
}

/// Split all copies of `T` off `M`; `None` when `T` is not a summand.
pub fn split_summand(entry: &LibraryEntry, m: &Module) -> Result<Option<Split>> {
    split_with(entry, m, None)
}

pub fn split_summand_graded(entry: &LibraryEntry, m: &GradedModule) -> Result<Option<Split>> {
    split_with(entry, &m.module, Some(&m.weights))
}

#[derive(Clone, Debug)]
pub struct Peel {
    pub counts: Vec<usize>,
    pub remainder: Module,
    pub remainder_weights: Option<Vec<i64>>,
}

/// Remove every library summand of `M`.
pub fn peel_against(m: &Module, library: &[LibraryEntry]) -> Result<Peel> {
    let mut counts = vec![0; library.len()];
    let mut cur = m.clone();
    for (i, e) in library.iter().enumerate() {
        if cur.dim == 0 {
            break;
        }
        if let Some(s) = split_summand(e, &cur)? {
            counts[i] = s.multiplicity;
            cur = s.complement;
        }
    }
    Ok(Peel {
        counts,
        remainder: cur,
        remainder_weights: None,
    })
}

/// Graded peeling using degree-zero homs only.
pub fn peel_against_graded(m: &GradedModule, library: &[LibraryEntry]) -> Result<Peel> {
    let mut counts = vec![0; library.len()];
    let mut cur = m.clone();
    for (i, e) in library.iter().enumerate() {
        if cur.dim() == 0 {
            break;
        }
        if let Some(s) = split_summand_graded(e, &cur)? {
            counts[i] = s.multiplicity;
            cur = GradedModule {
                module: s.complement,
                weights: s.complement_weights.unwrap(),
            };
        }
    }
    Ok(Peel {
        counts,
        remainder: cur.module,
        remainder_weights: Some(cur.weights),
    })
}

#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Module,
    pub multiplicity: usize,
    pub certified: bool,
    pub entry: LibraryEntry,
}

#[derive(Clone, Debug)]
pub struct DecompReport {
    pub field: Field,
    pub summands: Vec<Summand>,
    pub field_extended: bool,
}

impl DecompReport {
    pub fn total_dim(&self) -> usize {
        self.summands.iter().map(|s| s.multiplicity * s.module.dim).sum()
    }

    pub fn count(&self) -> usize {
        self.summands.iter().map(|s| s.multiplicity).sum()
    }

    pub fn dims(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self.summands.iter().map(|s| (s.module.dim, s.multiplicity)).collect();
        v.sort_unstable();
        v
    }
}

fn free_entry(f: &Field, r: usize) -> LibraryEntry {
    let free = Module::free(f, r, 1);
    let n = free.dim;
    let mut top_vec = vec![Fe::ZERO; n];
    top_vec[0] = Fe::ONE;
    LibraryEntry::with_local(
        &free,
        LocalData {
            top_vec: top_vec.clone(),
            top_fn: top_vec,
        },
    )
}

fn decompose_over<R: Rng + ?Sized>(m: &Module, samples: usize, rng: &mut R) -> Result<Vec<Summand>> {
    let f = &m.field;
    let stripped = strip_projectives(m);
    let mut found: Vec<(Module, LocalData)> = Vec::new();
    let mut stack = vec![stripped.core];
    while let Some(x) = stack.pop() {
        if x.dim == 0 {
            continue;
        }
        let end = end_algebra(&x);
        match certify_local(&x, &end.basis, samples, rng) {
            LocalTest::Local(ld) => found.push((x, ld)),
            LocalTest::Split(theta) => {
                for (piece, _) in fitting_split(&x, &theta, rng) {
                    stack.push(piece);
                }
            }
            LocalTest::NonSplit => {
                return Err(Error::Decomposition("non-split endomorphism ring".into()));
            }
        }
    }
    let mut out: Vec<Summand> = Vec::new();
    if stripped.free_rank > 0 {
        let e = free_entry(f, m.r);
        out.push(Summand {
            module: e.module.clone(),
            multiplicity: stripped.free_rank,
            certified: true,
            entry: e,
        });
    }
    found.sort_by_key(|(x, _)| x.dim);
    for (x, ld) in found {
        let mut matched = false;
        for s in out.iter_mut() {
            if s.module.dim == x.dim && multiplicity(&s.entry, &x) == 1 {
                s.multiplicity += 1;
                matched = true;
                break;
            }
        }
        if !matched {
            let e = LibraryEntry::with_local(&x, ld);
            out.push(Summand {
                module: x,
                multiplicity: 1,
                certified: true,
                entry: e,
            });
        }
    }
    Ok(out)
}

/// Krull-Schmidt decomposition with local-endomorphism certificates.
pub fn indecomposable_decomposition(m: &Module, seed: u64) -> Result<DecompReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match decompose_over(m, DEFAULT_SAMPLES, &mut rng) {
        Ok(summands) => Ok(DecompReport {
            field: m.field.clone(),
            summands,
            field_extended: false,
        }),
        Err(Error::Decomposition(_)) => {
            let f = &m.field;
            let big = Field::new(f.p(), 2 * f.k())?;
            let emb = Embedding::new(f, &big)?;
            let mx = m.extend_scalars(&emb)?;
            let summands = decompose_over(&mx, DEFAULT_SAMPLES, &mut rng)?;
            Ok(DecompReport {
                field: big,
                summands,
                field_extended: true,
            })
        }
        Err(e) => Err(e),
    }
}

/// Isomorphism test via decomposition of `a` and multiplicities in `b`.
pub fn is_isomorphic(a: &Module, b: &Module) -> Result<bool> {
    a.check_compatible(b)?;
    if a.dim != b.dim {
        return Ok(false);
    }
    if a.dim == 0 {
        return Ok(true);
    }
    let rep = indecomposable_decomposition(a, 0x15)?;
    let bb = if rep.field_extended {
        let emb = Embedding::new(&a.field, &rep.field)?;
        b.extend_scalars(&emb)?
    } else {
        b.clone()
    };
    for s in &rep.summands {
        if multiplicity(&s.entry, &bb) != s.multiplicity {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Isomorphism of `M` with a certified indecomposable.
pub fn is_isomorphic_to_entry(entry: &LibraryEntry, m: &Module) -> bool {
    m.dim == entry.dim() && multiplicity(entry, m) == 1
}

/// Radical of `End(M)`: for a local ring, the kernel of the residue
/// functional; otherwise built from the decomposition.
pub fn algebra_radical(a: &EndAlgebra, seed: u64) -> Result<Vec<Mat>> {
    let m = &a.module;
    let f = &m.field;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if m.dim == 0 {
        return Ok(vec![]);
    }
    match certify_local(m, &a.basis, DEFAULT_SAMPLES, &mut rng) {
        LocalTest::Local(ld) => {
            let res: Vec<Fe> = a.basis.iter().map(|b| ld.residue(f, b)).collect();
            let functional = Mat::from_rows(&[res]);
            let k = functional.kernel(f);
            Ok((0..k.cols).map(|j| a.combination(&k.col(j))).collect())
        }
        _ => {
            let rep = indecomposable_decomposition(m, seed)?;
            if rep.field_extended {
                return Err(Error::Decomposition("radical over non-split residue fields".into()));
            }
            // theta is radical iff phi(g theta f) = 0 for all summand witnesses f, g
            let mut rows: Vec<Vec<Fe>> = Vec::new();
            for s in &rep.summands {
                let md = m.dual();
                let homs = homs_with(&s.entry, m, &md, None);
                for g in &homs.out.basis {
                    let v = g.vec_mul(f, &s.entry.local.top_fn);
                    for fa in &homs.into.basis {
                        let u = fa.mul_vec(f, &s.entry.local.top_vec);
                        rows.push(a.basis.iter().map(|b| f.dot(&v, &b.mul_vec(f, &u))).collect());
                    }
                }
            }
            let k = Mat::from_rows(&rows).kernel(f);
            Ok((0..k.cols).map(|j| a.combination(&k.col(j))).collect())
        }
    }
}

/// Nilpotency check: the algebra generated by `mats` acts nilpotently.
pub fn generates_nilpotent(f: &Field, mats: &[Mat], n: usize) -> bool {
    if n == 0 || mats.is_empty() {
        return true;
    }
    nilpotent_fixed_vector(f, mats, n).is_some()
}

/// Random endomorphism in the span of the basis.
pub fn random_endomorphism<R: Rng + ?Sized>(a: &EndAlgebra, rng: &mut R) -> Mat {
    let f = &a.module.field;
    let c: Vec<Fe> = (0..a.dim()).map(|_| f.random(rng)).collect();
    a.combination(&c)
}
