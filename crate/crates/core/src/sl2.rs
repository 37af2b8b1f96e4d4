//! Modules restricted along `E < U < SL2`: `V_lambda`, `nabla_i`, the graded
//! tilting tower `T_0 .. T_(p^r - 1)`, Steinberg modules, the element `xi`,
//! and the explicit families for `q = 9` and `q = 8`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decomp::{self, peel_against_graded, LibraryEntry};
use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, Field};
use crate::linalg::Mat;
use crate::module::{GradedModule, GroupAlgebraElem, Module};

/// `lambda in k^r` defining `g_j -> [[1, 0], [lambda_j, 1]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lambda {
    pub field: Field,
    pub entries: Vec<Fe>,
}

impl Lambda {
    /// Rejects `lambda` whose entries are dependent over `F_p`.
    pub fn new(field: &Field, entries: Vec<Fe>) -> Result<Lambda> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("lambda must have at least one entry".into()));
        }
        if moore_det(field, &entries).is_zero() {
            return Err(Error::InvalidArgument(
                "lambda entries are linearly dependent over F_p".into(),
            ));
        }
        Ok(Lambda {
            field: field.clone(),
            entries,
        })
    }

    pub fn r(&self) -> usize {
        self.entries.len()
    }

    pub fn p(&self) -> usize {
        self.field.p() as usize
    }

    /// `lambda^(i)`: entrywise `p^i`-th powers.
    pub fn twist(&self, i: u32) -> Lambda {
        let f = &self.field;
        Lambda {
            field: f.clone(),
            entries: self.entries.iter().map(|&x| f.frobenius_pow(x, i)).collect(),
        }
    }

    /// Projective normalization with `lambda_1 = 1`.
    pub fn normalized(&self) -> Lambda {
        let f = &self.field;
        let c = f.inv(self.entries[0]);
        Lambda {
            field: f.clone(),
            entries: self.entries.iter().map(|&x| f.mul(x, c)).collect(),
        }
    }
}

/// `lambda_i = theta^(i-1)` for the field generator `theta`.
pub fn lambda_auto(field: &Field, r: usize) -> Result<Lambda> {
    if (field.k() as usize) < r {
        return Err(Error::InvalidArgument(format!(
            "lambda auto needs k >= r, got k = {} and r = {}",
            field.k(),
            r
        )));
    }
    let t = field.gen();
    let entries = (0..r).map(|i| field.pow(t, i as u64)).collect();
    Lambda::new(field, entries)
}

/// Rows `(lambda_j^(p^i))`.
pub fn moore_matrix(f: &Field, entries: &[Fe]) -> Mat {
    let r = entries.len();
    Mat::from_fn(r, r, |i, j| f.frobenius_pow(entries[j], i as u32))
}

pub fn moore_det(f: &Field, entries: &[Fe]) -> Fe {
    moore_matrix(f, entries).det(f)
}

/// `binom(n, k) mod p` by Lucas.
pub fn binom_mod(n: usize, k: usize, p: usize) -> u32 {
    let (mut n, mut k) = (n, k);
    let mut out: u64 = 1;
    while n > 0 || k > 0 {
        let (a, b) = (n % p, k % p);
        if b > a {
            return 0;
        }
        let mut c: u64 = 1;
        for t in 0..b {
            c = c * (a - t) as u64 / (t + 1) as u64;
        }
        out = out * (c % p as u64) % p as u64;
        n /= p;
        k /= p;
    }
    out as u32
}

/// `binom(x, i)` for a field element `x` and `i < p`.
pub fn binom_field(f: &Field, x: Fe, i: usize) -> Fe {
    let mut num = Fe::ONE;
    let mut den = Fe::ONE;
    for t in 0..i {
        num = f.mul(num, f.sub(x, f.from_i64(t as i64)));
        den = f.mul(den, f.from_i64(t as i64 + 1));
    }
    f.div(num, den)
}

/// Two-dimensional `V_mu`: `X_i v_1 = mu_i v_2`.
pub fn v_module(f: &Field, mu: &[Fe]) -> Module {
    let gens = mu
        .iter()
        .map(|&m| {
            let mut g = Mat::zeros(2, 2);
            g.set(1, 0, m);
            g
        })
        .collect();
    Module::from_parts(f, mu.len(), 2, gens)
}

/// `nabla_i` on `x^(i-a) y^a` (weight `i - 2a`).
pub fn nabla_restricted(lambda: &Lambda, i: usize) -> GradedModule {
    let f = &lambda.field;
    let p = lambda.p();
    let n = i + 1;
    let gens = lambda
        .entries
        .iter()
        .map(|&l| {
            let mut g = Mat::zeros(n, n);
            for a in 0..n {
                let mut lc = Fe::ONE;
                for c in 1..n - a {
                    lc = f.mul(lc, l);
                    let b = binom_mod(i - a, c, p);
                    if b != 0 {
                        g.set(a + c, a, f.mul(f.from_i64(b as i64), lc));
                    }
                }
            }
            g
        })
        .collect();
    let module = Module::from_parts(f, lambda.r(), n, gens);
    let weights = (0..n).map(|a| i as i64 - 2 * a as i64).collect();
    GradedModule { module, weights }
}

pub fn delta_restricted(lambda: &Lambda, i: usize) -> GradedModule {
    nabla_restricted(lambda, i).dual()
}

/// Dimension of `T_i` from the base-`p` digits of `i + 1`: with leading digit
/// `d` at position `m` and `l` further non-zero digits, `d 2^l p^m`.
pub fn tilting_dim(p: usize, i: usize) -> usize {
    let mut digits = Vec::new();
    let mut x = i + 1;
    while x > 0 {
        digits.push(x % p);
        x /= p;
    }
    let m = digits.len() - 1;
    let l = digits[..m].iter().filter(|&&d| d != 0).count();
    digits[m] * (1 << l) * p.pow(m as u32)
}

/// The graded restricted tilting modules for a fixed `lambda`.
#[derive(Clone, Debug)]
pub struct TiltingTable {
    pub lambda: Lambda,
    pub entries: Vec<LibraryEntry>,
}

impl TiltingTable {
    /// `T_i` is the remainder of `V (x) T_(i-1)` after peeling every earlier
    /// `T_j` with degree-zero homs.
    pub fn build(lambda: &Lambda) -> Result<TiltingTable> {
        let f = &lambda.field;
        let r = lambda.r();
        let p = lambda.p();
        let top = p.pow(r as u32);
        let mut rng = ChaCha8Rng::seed_from_u64(0x7117);
        let mut entries = vec![LibraryEntry::graded(&GradedModule::trivial(f, r), &mut rng)?];
        let v = nabla_restricted(lambda, 1);
        if top > 1 {
            entries.push(LibraryEntry::graded(&v, &mut rng)?);
        }
        for i in 2..top {
            let prev = entries[i - 1].graded_module().unwrap();
            let m = v.tensor(&prev);
            let peel = peel_against_graded(&m, &entries)?;
            let rem = GradedModule {
                module: peel.remainder,
                weights: peel.remainder_weights.unwrap(),
            };
            if rem.max_weight() != Some(i as i64) || rem.weight_multiplicity(i as i64) != 1 {
                return Err(Error::Decomposition(format!(
                    "remainder for T_{} has weights {:?}",
                    i,
                    rem.max_weight()
                )));
            }
            let e = LibraryEntry::graded(&rem, &mut rng)
                .map_err(|e| Error::Decomposition(format!("T_{} not certified indecomposable: {}", i, e)))?;
            entries.push(e);
        }
        Ok(TiltingTable {
            lambda: lambda.clone(),
            entries,
        })
    }

    pub fn p(&self) -> usize {
        self.lambda.p()
    }

    pub fn r(&self) -> usize {
        self.lambda.r()
    }

    pub fn field(&self) -> &Field {
        &self.lambda.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn t(&self, i: usize) -> &Module {
        &self.entries[i].module
    }

    pub fn graded(&self, i: usize) -> GradedModule {
        self.entries[i].graded_module().unwrap()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.dim()).collect()
    }

    /// Index of `S = St_(r-1)`.
    pub fn s_index(&self) -> usize {
        self.p().pow(self.r() as u32 - 1) - 1
    }

    pub fn s(&self) -> &Module {
        self.t(self.s_index())
    }

    pub fn projective_index(&self) -> usize {
        self.len() - 1
    }

    /// `St_j = T_(p^j - 1)`.
    pub fn steinberg(&self, j: usize) -> Result<&Module> {
        if j > self.r() {
            return Err(Error::InvalidArgument(format!(
                "Steinberg index {} exceeds r = {}",
                j,
                self.r()
            )));
        }
        Ok(self.t(self.p().pow(j as u32) - 1))
    }

    /// Which `T_i` an indecomposable module is isomorphic to.
    pub fn identify(&self, m: &Module) -> Option<usize> {
        (0..self.len()).find(|&i| self.entries[i].dim() == m.dim && decomp::is_isomorphic_to_entry(&self.entries[i], m))
    }

    /// The same table over an extension field.
    pub fn extend(&self, emb: &Embedding) -> Result<TiltingTable> {
        let big = emb.target.clone();
        let lambda = Lambda::new(&big, self.lambda.entries.iter().map(|&x| emb.apply(x)).collect())?;
        let entries = self.entries.iter().map(|e| e.extend(emb)).collect::<Result<Vec<_>>>()?;
        Ok(TiltingTable { lambda, entries })
    }

    /// Top weights of every entry.
    pub fn top_weights(&self) -> Vec<i64> {
        self.entries
            .iter()
            .map(|e| e.weights.as_ref().unwrap().iter().copied().max().unwrap())
            .collect()
    }
}

/// `St_1^(j)` in the basis `e_i = x^(p-i) y^(i-1) / (p-i)!`.
pub fn st1_e_basis(lambda: &Lambda, j: u32) -> Module {
    let f = &lambda.field;
    let p = lambda.p();
    let nab = nabla_restricted(lambda, p - 1).module;
    let mut pm = Mat::zeros(p, p);
    for a in 0..p {
        let mut fact = Fe::ONE;
        for t in 1..p - a {
            fact = f.mul(fact, f.from_i64(t as i64));
        }
        pm.set(a, a, f.inv(fact));
    }
    nab.change_basis(&pm)
        .expect("diagonal change of basis")
        .frobenius_twist_pow(j)
}

/// `S = St_1 (x) St_1^(1) (x) .. (x) St_1^(r-2)` in the e-basis.
pub fn steinberg_tensor(lambda: &Lambda) -> Module {
    let f = &lambda.field;
    (0..lambda.r() as u32 - 1).fold(Module::trivial(f, lambda.r()), |m, j| m.tensor(&st1_e_basis(lambda, j)))
}

/// The `xi in kE` with `xi (e_1 (x) .. (x) e_1) = e_1 (x) .. (x) e_1 (x) e_2`
/// in `S (x) St_1^(r-1)`.
pub fn xi_element(lambda: &Lambda) -> Result<GroupAlgebraElem> {
    let f = &lambda.field;
    let r = lambda.r();
    let m = steinberg_tensor(lambda).tensor(&st1_e_basis(lambda, r as u32 - 1));
    let mut v0 = Mat::zeros(m.dim, 1);
    v0.set(0, 0, Fe::ONE);
    let imgs = m.monomial_images(f, &v0);
    let a = Mat::hcat(m.dim, &imgs);
    if a.rows != a.cols || a.rank(f) != a.cols {
        return Err(Error::InvalidArgument(
            "S (x) St_1^(r-1) is not free of rank one".into(),
        ));
    }
    let mut v1 = Mat::zeros(m.dim, 1);
    v1.set(1, 0, Fe::ONE);
    let sol = a.solve(f, &v1).ok_or(Error::Singular)?;
    Ok(GroupAlgebraElem { coeffs: sol.col(0) })
}

fn jordan3(f: &Field) -> Mat {
    let mut j = Mat::zeros(3, 3);
    j.set(1, 0, Fe::ONE);
    j.set(2, 1, Fe::ONE);
    let _ = f;
    j
}

fn check_q9(f: &Field, lam: Fe) -> Result<()> {
    if f.p() != 3 {
        return Err(Error::InvalidArgument("this family exists for p = 3 only".into()));
    }
    if f.is_prime_subfield(lam) {
        return Err(Error::InvalidArgument("lambda must lie outside F_3".into()));
    }
    Ok(())
}

/// `lambda - lambda^2`.
pub fn lambda_tilde(f: &Field, lam: Fe) -> Fe {
    f.sub(lam, f.mul(lam, lam))
}

/// `S(mu)` for `[1 : lambda]`, `p = 3`, `r = 2`.
pub fn s_mu(f: &Field, lam: Fe, mu: Fe) -> Result<Module> {
    check_q9(f, lam)?;
    let j = jordan3(f);
    let j2 = j.mul(f, &j);
    let x2 = j.scale(f, lam).add(f, &j2.scale(f, f.add(lambda_tilde(f, lam), mu)));
    Module::new(f, 2, 3, vec![j, x2])
}

/// `N^(i)(mu)`, `p = 3`, `r = 2`.
pub fn n_family(f: &Field, lam: Fe, i: usize, mu: Fe) -> Result<Module> {
    check_q9(f, lam)?;
    if i > 2 {
        return Err(Error::InvalidArgument(format!("family index {} not in 0..=2", i)));
    }
    let j = jordan3(f);
    let j2 = j.mul(f, &j);
    let b = j.scale(f, lam).add(f, &j2.scale(f, f.add(lambda_tilde(f, lam), mu)));
    let ji = j.pow(f, i as u64);
    let mut x1 = Mat::zeros(6, 6);
    x1.set_block(0, 0, &j);
    x1.set_block(3, 3, &j);
    let mut x2 = Mat::zeros(6, 6);
    x2.set_block(0, 0, &b);
    x2.set_block(3, 3, &b);
    x2.set_block(3, 0, &ji);
    Module::new(f, 2, 6, vec![x1, x2])
}

/// Normalized points of `P^(r-1)(F_q)`.
pub fn projective_points(f: &Field, r: usize) -> Vec<Vec<Fe>> {
    let q = f.q() as usize;
    let mut out = Vec::new();
    for lead in 0..r {
        let free = r - lead - 1;
        let count = q.pow(free as u32);
        for mut c in 0..count {
            let mut v = vec![Fe::ZERO; r];
            v[lead] = Fe::ONE;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = Fe((c % q) as u32);
                c /= q;
            }
            out.push(v);
        }
    }
    out
}

/// Does no non-identity group element act trivially?
pub fn is_faithful(m: &Module) -> bool {
    let f = &m.field;
    let p = m.p();
    let r = m.r;
    let g: Vec<Mat> = m.gens.iter().map(|n| n.add(f, &Mat::identity(m.dim))).collect();
    let total = p.pow(r as u32);
    let id = Mat::identity(m.dim);
    (1..total).all(|mut c| {
        let mut acc = id.clone();
        for gi in &g {
            let e = c % p;
            c /= p;
            acc = acc.mul(f, &gi.pow(f, e as u64));
        }
        acc != id
    })
}

#[derive(Clone, Debug)]
pub struct FourDim {
    pub a: Vec<Fe>,
    pub b: Vec<Fe>,
    pub module: Module,
}

/// Faithful periodic products `V_a (x) V_b` over `C_2^3`, one per unordered
/// pair of distinct points.
pub fn four_dim_products(f: &Field) -> Result<Vec<FourDim>> {
    if f.p() != 2 {
        return Err(Error::InvalidArgument("four-dimensional products are for p = 2".into()));
    }
    let pts = projective_points(f, 3);
    let mut out = Vec::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let m = v_module(f, a).tensor(&v_module(f, b));
            if is_faithful(&m) {
                out.push(FourDim {
                    a: a.clone(),
                    b: b.clone(),
                    module: m,
                });
            }
        }
    }
    Ok(out)
}
