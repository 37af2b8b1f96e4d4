//! Projective covers, syzygies, projective stripping, minimal resolutions and
//! Carlson modules.

use crate::decomp::is_isomorphic;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::linalg::{self, Mat};
use crate::module::{induced_on_subspace, quotient, Module, Monomials};

/// `M = kE^free_rank (+) core`, with `core` spanned by `core_basis`.
#[derive(Clone, Debug)]
pub struct Stripped {
    pub free_rank: usize,
    pub core: Module,
    pub core_basis: Mat,
}

/// Remove all free summands. The free part is generated by vectors `u_k`
/// whose images under the norm element span `im z`; the complement is the
/// kernel of the retraction `m -> sum_a phi(X^(top - a) m) X^a`.
pub fn strip_projectives(m: &Module) -> Stripped {
    let f = &m.field;
    let n = m.dim;
    if n == 0 {
        return Stripped {
            free_rank: 0,
            core: m.clone(),
            core_basis: Mat::zeros(0, 0),
        };
    }
    let z = m.norm_element();
    let pivots = z.echelon(f).pivots;
    let a = pivots.len();
    if a == 0 {
        return Stripped {
            free_rank: 0,
            core: m.clone(),
            core_basis: Mat::identity(n),
        };
    }
    let zu = z.select_cols(&pivots);
    let (rows, inv) = linalg::left_inverse(f, &zu).expect("norm image columns independent");
    // phi_j as length-n rows
    let phis: Vec<Vec<Fe>> = (0..a)
        .map(|j| {
            let mut v = vec![Fe::ZERO; n];
            for (t, &r) in rows.iter().enumerate() {
                v[r] = inv.get(j, t);
            }
            v
        })
        .collect();
    let mons = m.monomials();
    let size = mons.size;
    let top = mons.top();
    let top_e = mons.exponents(top);
    let mut rho = Mat::zeros(a * size, n);
    for (j, phi) in phis.iter().enumerate() {
        // phi . X^b for every monomial b
        let mut rowsb: Vec<Vec<Fe>> = vec![Vec::new(); size];
        rowsb[0] = phi.clone();
        for b in 1..size {
            let (i, par) = mons.parent(b).unwrap();
            rowsb[b] = m.gens[i].vec_mul(f, &rowsb[par]);
        }
        for alpha in 0..size {
            let e = mons.exponents(alpha);
            let comp: Vec<usize> = top_e.iter().zip(&e).map(|(t, x)| t - x).collect();
            let b = mons.index(&comp);
            rho.row_mut(j * size + alpha).copy_from_slice(&rowsb[b]);
        }
    }
    let basis = rho.kernel(f);
    debug_assert_eq!(basis.cols + a * size, n);
    Stripped {
        free_rank: a,
        core: induced_on_subspace(m, &basis),
        core_basis: basis,
    }
}

/// Projective cover `kE^d -> M` and its kernel.
#[derive(Clone, Debug)]
pub struct SyzygyData {
    pub module: Module,
    pub cover: Module,
    /// `dim M x d p^r`, generator `j` sent to basis vector `top[j]`.
    pub cover_map: Mat,
    pub top: Vec<usize>,
    /// Kernel of the cover map as columns in `kE^d`.
    pub syzygy_basis: Mat,
    pub syzygy: Module,
}

impl SyzygyData {
    pub fn rank(&self) -> usize {
        self.top.len()
    }
}

pub fn cover_matrix(m: &Module, top: &[usize]) -> Mat {
    let f = &m.field;
    let size = m.monomials().size;
    let gens = Mat::identity(m.dim).select_cols(top);
    let imgs = m.monomial_images(f, &gens);
    let mut pi = Mat::zeros(m.dim, top.len() * size);
    for (a, img) in imgs.iter().enumerate() {
        for j in 0..top.len() {
            for t in 0..m.dim {
                pi.set(t, j * size + a, img.get(t, j));
            }
        }
    }
    pi
}

pub fn syzygy_data(m: &Module) -> SyzygyData {
    let f = &m.field;
    let top = m.top_lifts();
    let cover = Module::free(f, m.r, top.len());
    let pi = cover_matrix(m, &top);
    let k = pi.kernel(f);
    let syzygy = induced_on_subspace(&cover, &k);
    SyzygyData {
        module: m.clone(),
        cover,
        cover_map: pi,
        top,
        syzygy_basis: k,
        syzygy,
    }
}

/// Projective-free representative of `Omega(M)`.
pub fn omega(m: &Module) -> Module {
    let core = strip_projectives(m).core;
    syzygy_data(&core).syzygy
}

pub fn omega_inverse(m: &Module) -> Module {
    omega(&m.dual()).dual()
}

pub fn omega_iter(m: &Module, t: i64) -> Module {
    let mut cur = strip_projectives(m).core;
    for _ in 0..t.unsigned_abs() {
        cur = if t > 0 { omega(&cur) } else { omega_inverse(&cur) };
    }
    cur
}

/// Least `t <= max_t` with `Omega^t(M) ~ core(M)`.
pub fn is_periodic(m: &Module, max_t: usize) -> Result<Option<usize>> {
    let core = strip_projectives(m).core;
    if core.dim == 0 {
        return Ok(Some(1));
    }
    let mut cur = core.clone();
    for t in 1..=max_t {
        cur = omega(&cur);
        if cur.dim == core.dim && is_isomorphic(&cur, &core)? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// One step `P_i -> K_i` of a minimal resolution, with `K_0 = M` and `K_i`
/// embedded in `P_(i-1)` for `i >= 1`.
#[derive(Clone, Debug)]
pub struct ResolutionStep {
    pub rank: usize,
    pub syzygy: Module,
    /// `P_i -> K_i` in the coordinates of `K_i`.
    pub cover: Mat,
    /// Columns of `K_i` inside `P_(i-1)`; empty for `i = 0`.
    pub embed: Mat,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub module: Module,
    pub steps: Vec<ResolutionStep>,
}

impl Resolution {
    pub fn ranks(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.rank).collect()
    }

    /// `d_i : P_i -> P_(i-1)` for `i >= 1`.
    pub fn differential(&self, i: usize) -> Mat {
        let f = &self.module.field;
        let s = &self.steps[i];
        s.embed.mul(f, &s.cover)
    }

    pub fn free(&self, i: usize) -> Module {
        Module::free(&self.module.field, self.module.r, self.steps[i].rank)
    }
}

pub fn minimal_resolution(m: &Module, length: usize) -> Resolution {
    let f = &m.field;
    let mut steps = Vec::with_capacity(length + 1);
    let mut cur = m.clone();
    let mut embed = Mat::zeros(0, 0);
    for i in 0..=length {
        let sd = syzygy_data(&cur);
        steps.push(ResolutionStep {
            rank: sd.rank(),
            syzygy: cur.clone(),
            cover: sd.cover_map.clone(),
            embed,
        });
        if i == length {
            break;
        }
        embed = sd.syzygy_basis.clone();
        cur = sd.syzygy;
        if cur.dim == 0 && i < length {
            // remaining ranks are zero
            let zero = Module::zero(f, m.r);
            for _ in i + 1..=length {
                steps.push(ResolutionStep {
                    rank: 0,
                    syzygy: zero.clone(),
                    cover: Mat::zeros(0, 0),
                    embed: Mat::zeros(embed.rows, 0),
                });
            }
            break;
        }
    }
    Resolution {
        module: m.clone(),
        steps,
    }
}

/// A class in `H^d(E, k)` as a functional on the generators of `P_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyClass {
    pub degree: usize,
    pub functional: Vec<Fe>,
}

impl CohomologyClass {
    pub fn zero(res: &Resolution, d: usize) -> CohomologyClass {
        CohomologyClass {
            degree: d,
            functional: vec![Fe::ZERO; res.steps[d].rank],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.functional.iter().all(|x| x.is_zero())
    }
}

/// Functional on `K` vanishing on `rad K`, with prescribed values on vectors
/// `reps` whose classes form a basis of `top K`.
fn top_functional(k: &Module, reps: &Mat, values: &[Fe]) -> Result<Vec<Fe>> {
    let f = &k.field;
    let rad = k.radical_basis();
    let a = rad.hstack(reps);
    if a.rows != a.cols {
        return Err(Error::InvalidArgument(
            "representatives do not complete the radical".into(),
        ));
    }
    let ainv = a.inverse(f)?;
    let mut target = vec![Fe::ZERO; rad.cols];
    target.extend_from_slice(values);
    Ok(ainv.vec_mul(f, &target))
}

/// Turn a top functional on `K_d` into a class on the generators of `P_d`.
fn class_from_top(res: &Resolution, d: usize, psi_k: &[Fe]) -> CohomologyClass {
    let f = &res.module.field;
    let s = &res.steps[d];
    let size = res.module.monomials().size;
    let functional = (0..s.rank)
        .map(|j| {
            let col = s.cover.col(j * size);
            f.dot(psi_k, &col)
        })
        .collect();
    CohomologyClass { degree: d, functional }
}

/// Preimage in `P_i` of vectors of `K_i`.
fn lift_through_cover(f: &Field, cover: &Mat, v: &Mat) -> Mat {
    cover.solve(f, v).expect("cover map is surjective")
}

/// Degree-one class `sum c_a y_a`: the functional `X_a -> c_a` on `Omega(1) = rad kE`.
pub fn degree_one_class(res: &Resolution, c: &[Fe]) -> Result<CohomologyClass> {
    let f = &res.module.field;
    if res.module.dim != 1 || res.steps.len() < 2 {
        return Err(Error::InvalidArgument(
            "need a resolution of the trivial module of length >= 1".into(),
        ));
    }
    let mons = res.module.monomials();
    let s1 = &res.steps[1];
    // functional on K_1 in its own coordinates via its embedding in kE
    let mut on_p0 = vec![Fe::ZERO; mons.size];
    for (a, &ca) in c.iter().enumerate() {
        let mut e = vec![0; mons.r];
        e[a] = 1;
        on_p0[mons.index(&e)] = ca;
    }
    let psi_k = s1.embed.vec_mul(f, &on_p0);
    Ok(class_from_top(res, 1, &psi_k))
}

/// Degree-two class `sum c_a x_a + sum_(i<j) b_ij y_i y_j`, via the standard
/// generators `X_a^(p-1) e_a` and `X_i e_j - X_j e_i` of `Omega^2(1)`.
/// `b` is indexed lexicographically over pairs `i < j`. For `p = 2` the
/// classes `x_a` are `y_a^2` and `b` gives the products `y_i y_j`.
pub fn degree_two_class(res: &Resolution, c: &[Fe], b: &[Fe]) -> Result<CohomologyClass> {
    let f = &res.module.field;
    let m = &res.module;
    if m.dim != 1 || res.steps.len() < 3 {
        return Err(Error::InvalidArgument(
            "need a resolution of the trivial module of length >= 2".into(),
        ));
    }
    let r = m.r;
    let p = m.p();
    let mons = m.monomials();
    let size = mons.size;
    let s1 = &res.steps[1];
    let s2 = &res.steps[2];
    // y_a in P_1 lifting X_a in K_1
    let mut xs = Mat::zeros(mons.size, r);
    for a in 0..r {
        let mut e = vec![0; r];
        e[a] = 1;
        xs.set(mons.index(&e), a, Fe::ONE);
    }
    let xs_k = s1.embed.solve(f, &xs).expect("X_a lie in the augmentation ideal");
    let ys = lift_through_cover(f, &s1.cover, &xs_k);
    let p1 = Module::free(f, r, s1.rank);
    let act = |v: &[Fe], i: usize, times: usize| {
        let mut w = v.to_vec();
        for _ in 0..times {
            w = p1.gens[i].mul_vec(f, &w);
        }
        w
    };
    let mut reps: Vec<Vec<Fe>> = Vec::new();
    let mut values: Vec<Fe> = Vec::new();
    for a in 0..r {
        reps.push(act(&ys.col(a), a, p - 1));
        values.push(c[a]);
    }
    let mut t = 0;
    for i in 0..r {
        for j in i + 1..r {
            let u = act(&ys.col(j), i, 1);
            let w = act(&ys.col(i), j, 1);
            reps.push(u.iter().zip(&w).map(|(&x, &y)| f.sub(x, y)).collect());
            values.push(b.get(t).copied().unwrap_or(Fe::ZERO));
            t += 1;
        }
    }
    let _ = size;
    let reps_p1 = Mat::from_cols(p1.dim, &reps);
    let reps_k = s2
        .embed
        .solve(f, &reps_p1)
        .ok_or_else(|| Error::InvalidArgument("standard generators not in Omega^2".into()))?;
    let psi_k = top_functional(&s2.syzygy, &reps_k, &values)?;
    Ok(class_from_top(res, 2, &psi_k))
}

/// `L_zeta`: the kernel of `zeta-hat : Omega^d(1) -> 1`.
pub fn carlson_module(res: &Resolution, zeta: &CohomologyClass) -> Result<Module> {
    let f = &res.module.field;
    let d = zeta.degree;
    if d >= res.steps.len() || zeta.functional.len() != res.steps[d].rank {
        return Err(Error::InvalidArgument(format!(
            "class of degree {} does not fit the resolution",
            d
        )));
    }
    let s = &res.steps[d];
    let k = &s.syzygy;
    if zeta.is_zero() {
        return Ok(k.clone());
    }
    let size = res.module.monomials().size;
    let mut psi = vec![Fe::ZERO; s.rank * size];
    for (j, &v) in zeta.functional.iter().enumerate() {
        psi[j * size] = v;
    }
    // zeta-hat . cover = psi
    let sol = s
        .cover
        .transpose()
        .solve(f, &Mat::from_cols(psi.len(), &[psi]))
        .ok_or_else(|| Error::InvalidArgument("functional does not factor through Omega^d".into()))?;
    let zhat = Mat::from_rows(&[sol.col(0)]);
    let kb = zhat.kernel(f);
    Ok(induced_on_subspace(k, &kb))
}

/// `(P + W) / {(x, -f(x)) : x in Omega(U)}` for `f : Omega(U) -> W`, where
/// `Omega(U)` is the kernel recorded in `sd`.
pub fn pushout_extension(sd: &SyzygyData, w: &Module, fmat: &Mat) -> Result<Module> {
    let f = &w.field;
    let kdim = sd.syzygy_basis.cols;
    if fmat.rows != w.dim || fmat.cols != kdim {
        return Err(Error::InvalidMap("map shape does not match Omega(U) -> W".into()));
    }
    if !crate::hom::is_equivariant(&sd.syzygy, w, fmat) {
        return Err(Error::InvalidMap("map is not a module map".into()));
    }
    let total = sd.cover.direct_sum(w);
    let sub = sd.syzygy_basis.vstack(&fmat.neg(f));
    Ok(quotient(&total, &sub).module)
}

/// Monomial index of `X_i`.
pub fn linear_monomial(mons: &Monomials, i: usize) -> usize {
    let mut e = vec![0; mons.r];
    e[i] = 1;
    mons.index(&e)
}
