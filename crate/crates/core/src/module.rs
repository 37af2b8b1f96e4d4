//! Finite-dimensional modules for `kE`, `E = (Z/p)^r`.
//!
//! A module stores the nilpotent matrices `N_i = g_i - 1`. The group algebra
//! `kE = k[X_1..X_r]/(X_i^p)` has monomial basis `X^a` indexed by
//! `sum a_i p^(i-1)`, so `1` is index 0 and `X_1^{p-1}...X_r^{p-1}` is last.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, Field};
use crate::linalg::{self, Mat};

/// Monomial bookkeeping for `kE`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Monomials {
    pub p: usize,
    pub r: usize,
    pub size: usize,
}

impl Monomials {
    pub fn new(p: usize, r: usize) -> Monomials {
        Monomials {
            p,
            r,
            size: p.pow(r as u32),
        }
    }

    pub fn exponents(&self, mut idx: usize) -> Vec<usize> {
        let mut e = vec![0; self.r];
        for x in e.iter_mut() {
            *x = idx % self.p;
            idx /= self.p;
        }
        e
    }

    pub fn index(&self, e: &[usize]) -> usize {
        e.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    pub fn degree(&self, idx: usize) -> usize {
        self.exponents(idx).iter().sum()
    }

    /// Index of `X_i * X^a`, or `None` when it vanishes.
    pub fn shift(&self, idx: usize, i: usize) -> Option<usize> {
        let stride = self.p.pow(i as u32);
        if (idx / stride) % self.p == self.p - 1 {
            None
        } else {
            Some(idx + stride)
        }
    }

    /// `(i, parent)` with `X^a = X_i X^parent`, choosing the first `i` with `a_i > 0`.
    pub fn parent(&self, idx: usize) -> Option<(usize, usize)> {
        let e = self.exponents(idx);
        let i = e.iter().position(|&x| x > 0)?;
        Some((i, idx - self.p.pow(i as u32)))
    }

    pub fn product(&self, a: usize, b: usize) -> Option<usize> {
        let ea = self.exponents(a);
        let eb = self.exponents(b);
        let s: Vec<usize> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
        if s.iter().any(|&x| x >= self.p) {
            None
        } else {
            Some(self.index(&s))
        }
    }

    pub fn top(&self) -> usize {
        self.size - 1
    }
}

/// Element of `kE` in the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElem {
    pub coeffs: Vec<Fe>,
}

impl GroupAlgebraElem {
    pub fn zero(m: &Monomials) -> Self {
        GroupAlgebraElem {
            coeffs: vec![Fe::ZERO; m.size],
        }
    }

    pub fn one(m: &Monomials) -> Self {
        let mut e = Self::zero(m);
        e.coeffs[0] = Fe::ONE;
        e
    }

    pub fn monomial(m: &Monomials, idx: usize, c: Fe) -> Self {
        let mut e = Self::zero(m);
        e.coeffs[idx] = c;
        e
    }

    pub fn add(&self, f: &Field, o: &Self) -> Self {
        GroupAlgebraElem {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, f: &Field, c: Fe) -> Self {
        GroupAlgebraElem {
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, f: &Field, m: &Monomials, o: &Self) -> Self {
        let mut out = Self::zero(m);
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, &cb) in o.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                if let Some(c) = m.product(a, b) {
                    out.coeffs[c] = f.add(out.coeffs[c], f.mul(ca, cb));
                }
            }
        }
        out
    }

    pub fn pow(&self, f: &Field, m: &Monomials, e: usize) -> Self {
        (0..e).fold(Self::one(m), |acc, _| acc.mul(f, m, self))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Action on a module.
    pub fn act(&self, f: &Field, module: &Module) -> Mat {
        let mons = module.monomial_matrices(f);
        let mut out = Mat::zeros(module.dim, module.dim);
        for (c, m) in self.coeffs.iter().zip(&mons) {
            if !c.is_zero() {
                out.axpy(f, *c, m);
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Module {
    pub field: Field,
    pub r: usize,
    pub dim: usize,
    pub gens: Vec<Mat>,
}

impl PartialEq for Module {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field && self.r == o.r && self.dim == o.dim && self.gens == o.gens
    }
}

impl Module {
    /// Validated constructor: square, commuting, `N_i^p = 0`.
    pub fn new(field: &Field, r: usize, dim: usize, gens: Vec<Mat>) -> Result<Module> {
        let m = Module {
            field: field.clone(),
            r,
            dim,
            gens,
        };
        m.validate()?;
        Ok(m)
    }

    /// Constructor for matrices already known to define a module.
    pub fn from_parts(field: &Field, r: usize, dim: usize, gens: Vec<Mat>) -> Module {
        debug_assert!(gens.len() == r && gens.iter().all(|g| g.rows == dim && g.cols == dim));
        Module {
            field: field.clone(),
            r,
            dim,
            gens,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let f = &self.field;
        if self.gens.len() != self.r {
            return Err(Error::InvalidModule(format!(
                "expected {} generators, got {}",
                self.r,
                self.gens.len()
            )));
        }
        for (i, g) in self.gens.iter().enumerate() {
            if g.rows != self.dim || g.cols != self.dim {
                return Err(Error::InvalidModule(format!(
                    "N_{} is {}x{}, expected {}",
                    i + 1,
                    g.rows,
                    g.cols,
                    self.dim
                )));
            }
            if !g.pow(f, f.p() as u64).is_zero() {
                return Err(Error::InvalidModule(format!("N_{}^p != 0", i + 1)));
            }
        }
        for i in 0..self.r {
            for j in i + 1..self.r {
                if self.gens[i].mul(f, &self.gens[j]) != self.gens[j].mul(f, &self.gens[i]) {
                    return Err(Error::InvalidModule(format!(
                        "N_{} N_{} != N_{} N_{}",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.field.p() as usize
    }

    pub fn monomials(&self) -> Monomials {
        Monomials::new(self.p(), self.r)
    }

    pub fn zero(field: &Field, r: usize) -> Module {
        Module::from_parts(field, r, 0, vec![Mat::zeros(0, 0); r])
    }

    pub fn trivial(field: &Field, r: usize) -> Module {
        Module::from_parts(field, r, 1, vec![Mat::zeros(1, 1); r])
    }

    /// `kE^rank` with basis `e_j X^a` at index `j * p^r + idx(a)`.
    pub fn free(field: &Field, r: usize, rank: usize) -> Module {
        let m = Monomials::new(field.p() as usize, r);
        let n = rank * m.size;
        let gens = (0..r)
            .map(|i| {
                let mut g = Mat::zeros(n, n);
                for j in 0..rank {
                    for a in 0..m.size {
                        if let Some(b) = m.shift(a, i) {
                            g.set(j * m.size + b, j * m.size + a, Fe::ONE);
                        }
                    }
                }
                g
            })
            .collect();
        Module::from_parts(field, r, n, gens)
    }

    pub fn direct_sum(&self, o: &Module) -> Module {
        self.check_compatible(o).expect("direct sum of incompatible modules");
        let gens = self
            .gens
            .iter()
            .zip(&o.gens)
            .map(|(a, b)| Mat::block_diag(&[a.clone(), b.clone()]))
            .collect();
        Module::from_parts(&self.field, self.r, self.dim + o.dim, gens)
    }

    pub fn direct_sum_all(field: &Field, r: usize, parts: &[Module]) -> Module {
        let gens = (0..r)
            .map(|i| Mat::block_diag(&parts.iter().map(|m| m.gens[i].clone()).collect::<Vec<_>>()))
            .collect();
        Module::from_parts(field, r, parts.iter().map(|m| m.dim).sum(), gens)
    }

    pub fn check_compatible(&self, o: &Module) -> Result<()> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(format!("{:?} vs {:?}", self.field, o.field)));
        }
        if self.r != o.r {
            return Err(Error::InvalidModule(format!("rank mismatch {} vs {}", self.r, o.r)));
        }
        Ok(())
    }

    /// Diagonal tensor product, basis `e_a (x) f_b` at index `a * dim(o) + b`.
    pub fn tensor(&self, o: &Module) -> Module {
        self.check_compatible(o).expect("tensor of incompatible modules");
        let f = &self.field;
        let ia = Mat::identity(self.dim);
        let ib = Mat::identity(o.dim);
        let gens = self
            .gens
            .iter()
            .zip(&o.gens)
            .map(|(a, b)| {
                let mut g = a.kron(f, &ib);
                g = g.add(f, &ia.kron(f, b));
                g.add(f, &a.kron(f, b))
            })
            .collect();
        Module::from_parts(f, self.r, self.dim * o.dim, gens)
    }

    pub fn tensor_power(&self, n: usize) -> Module {
        let mut out = Module::trivial(&self.field, self.r);
        for _ in 0..n {
            out = out.tensor(self);
        }
        out
    }

    /// Contragredient module: `g` acts by `(g^{-1})^T`.
    pub fn dual(&self) -> Module {
        let f = &self.field;
        let p = self.p();
        let gens = self
            .gens
            .iter()
            .map(|n| {
                let mut acc = Mat::zeros(self.dim, self.dim);
                let mut pw = Mat::identity(self.dim);
                for j in 1..p {
                    pw = pw.mul(f, n);
                    if j % 2 == 1 {
                        acc = acc.sub(f, &pw);
                    } else {
                        acc = acc.add(f, &pw);
                    }
                }
                acc.transpose()
            })
            .collect();
        Module::from_parts(f, self.r, self.dim, gens)
    }

    /// Entrywise Frobenius twist.
    pub fn frobenius_twist(&self) -> Module {
        let f = &self.field;
        let gens = self.gens.iter().map(|g| g.map(|x| f.frobenius(x))).collect();
        Module::from_parts(f, self.r, self.dim, gens)
    }

    pub fn frobenius_twist_pow(&self, j: u32) -> Module {
        (0..j % self.field.k()).fold(self.clone(), |m, _| m.frobenius_twist())
    }

    pub fn extend_scalars(&self, emb: &Embedding) -> Result<Module> {
        if emb.source != self.field {
            return Err(Error::FieldMismatch(
                "embedding source differs from module field".into(),
            ));
        }
        let gens = self.gens.iter().map(|g| g.map(|x| emb.apply(x))).collect();
        Ok(Module::from_parts(&emb.target, self.r, self.dim, gens))
    }

    /// Conjugate by a change of basis: new matrices `P^{-1} N P`.
    pub fn change_basis(&self, pmat: &Mat) -> Result<Module> {
        let f = &self.field;
        let inv = pmat.inverse(f)?;
        let gens = self.gens.iter().map(|g| inv.mul(f, &g.mul(f, pmat))).collect();
        Ok(Module::from_parts(f, self.r, self.dim, gens))
    }

    /// Matrix of `X^a` for every monomial, in monomial order.
    pub fn monomial_matrices(&self, f: &Field) -> Vec<Mat> {
        self.monomial_images(f, &Mat::identity(self.dim))
    }

    /// `X^a V` for every monomial `a`.
    pub fn monomial_images(&self, f: &Field, v: &Mat) -> Vec<Mat> {
        let m = self.monomials();
        let mut out: Vec<Mat> = Vec::with_capacity(m.size);
        out.push(v.clone());
        for idx in 1..m.size {
            let (i, par) = m.parent(idx).unwrap();
            let next = self.gens[i].mul(f, &out[par]);
            out.push(next);
        }
        out
    }

    /// `z = prod X_i^{p-1}`.
    pub fn norm_element(&self) -> Mat {
        let f = &self.field;
        let mut z = Mat::identity(self.dim);
        for g in &self.gens {
            for _ in 0..self.p() - 1 {
                z = g.mul(f, &z);
            }
        }
        z
    }

    /// Columns spanning `rad M = sum im N_i`.
    pub fn radical_basis(&self) -> Mat {
        let f = &self.field;
        Mat::hcat(self.dim, &self.gens).col_space(f)
    }

    /// Columns spanning `soc M = cap ker N_i`.
    pub fn socle_basis(&self) -> Mat {
        let f = &self.field;
        Mat::vcat(self.dim, &self.gens).kernel(f)
    }

    pub fn top_dim(&self) -> usize {
        self.dim - self.radical_basis().cols
    }

    pub fn socle_dim(&self) -> usize {
        self.socle_basis().cols
    }

    pub fn is_cyclic(&self) -> bool {
        self.top_dim() <= 1
    }

    /// Standard basis indices whose vectors lift a basis of the top.
    pub fn top_lifts(&self) -> Vec<usize> {
        linalg::complement_coords(&self.field, &self.radical_basis())
    }

    /// Dimensions of `rad^j M / rad^{j+1} M`.
    pub fn loewy_layers(&self) -> Vec<usize> {
        let f = &self.field;
        let mut layers = Vec::new();
        let mut cur = Mat::identity(self.dim);
        let mut d = self.dim;
        while d > 0 {
            let imgs: Vec<Mat> = self.gens.iter().map(|g| g.mul(f, &cur)).collect();
            let next = Mat::hcat(self.dim, &imgs).col_space(f);
            layers.push(d - next.cols);
            d = next.cols;
            cur = next;
        }
        layers
    }

    pub fn loewy_length(&self) -> usize {
        self.loewy_layers().len()
    }

    /// Smallest submodule containing the columns of `v`; returns a column basis.
    pub fn span_closure(&self, v: &Mat) -> Mat {
        let f = &self.field;
        let mut basis = linalg::Basis::new(self.dim);
        let mut queue: Vec<Vec<Fe>> = (0..v.cols).map(|j| v.col(j)).collect();
        let mut added: Vec<Vec<Fe>> = Vec::new();
        while let Some(x) = queue.pop() {
            if basis.insert(f, x.clone()) {
                for g in &self.gens {
                    queue.push(g.mul_vec(f, &x));
                }
                added.push(x);
            }
        }
        Mat::from_cols(self.dim, &added)
    }

    pub fn is_invariant(&self, basis: &Mat) -> bool {
        let f = &self.field;
        let e = basis.transpose().rref(f);
        self.gens.iter().all(|g| {
            let img = g.mul(f, basis);
            (0..img.cols).all(|j| {
                let mut v = img.col(j);
                for (r, &pc) in e.pivots.iter().enumerate() {
                    let x = v[pc];
                    if !x.is_zero() {
                        f.axpy(&mut v, f.neg(x), e.mat.row(r));
                    }
                }
                v.iter().all(|x| x.is_zero())
            })
        })
    }

    pub fn is_semisimple(&self) -> bool {
        self.gens.iter().all(|g| g.is_zero())
    }

    pub fn is_zero_module(&self) -> bool {
        self.dim == 0
    }

    /// Random module with the given matrices drawn as `P^{-1} N P`.
    pub fn random_conjugate<R: Rng + ?Sized>(&self, rng: &mut R) -> Module {
        let f = &self.field;
        loop {
            let p = Mat::random(f, self.dim, self.dim, rng);
            if let Ok(m) = self.change_basis(&p) {
                return m;
            }
        }
    }
}

/// Subspace of a module given by column basis, assumed invariant.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub ambient: Module,
    pub basis: Mat,
}

impl Submodule {
    pub fn new(ambient: &Module, basis: Mat) -> Result<Submodule> {
        let f = &ambient.field;
        if basis.rows != ambient.dim {
            return Err(Error::DimensionMismatch(
                "basis rows differ from module dimension".into(),
            ));
        }
        if basis.rank(f) != basis.cols {
            return Err(Error::InvalidArgument("submodule basis is not independent".into()));
        }
        if !ambient.is_invariant(&basis) {
            return Err(Error::InvalidArgument("subspace is not a submodule".into()));
        }
        Ok(Submodule {
            ambient: ambient.clone(),
            basis,
        })
    }

    pub fn generated_by(ambient: &Module, v: &Mat) -> Submodule {
        Submodule {
            ambient: ambient.clone(),
            basis: ambient.span_closure(v),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    pub fn as_module(&self) -> Module {
        induced_on_subspace(&self.ambient, &self.basis)
    }

    pub fn quotient(&self) -> Quotient {
        quotient(&self.ambient, &self.basis)
    }
}

/// Action on an invariant subspace with the given column basis.
pub fn induced_on_subspace(m: &Module, basis: &Mat) -> Module {
    let f = &m.field;
    let k = basis.cols;
    if k == 0 {
        return Module::zero(f, m.r);
    }
    let (rows, inv) = linalg::left_inverse(f, basis).expect("subspace basis not independent");
    let gens = m
        .gens
        .iter()
        .map(|g| {
            let img = g.mul(f, basis);
            let a = inv.mul(f, &img.select_rows(&rows));
            debug_assert_eq!(basis.mul(f, &a), img, "subspace not invariant");
            a
        })
        .collect();
    Module::from_parts(f, m.r, k, gens)
}

/// Quotient `M / W` with the projection onto complementary coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: Module,
    /// Ambient coordinates whose basis vectors map to the quotient basis.
    pub lifts: Vec<usize>,
    /// `dim(M/W) x dim(M)` projection.
    pub projection: Mat,
}

pub fn quotient(m: &Module, w: &Mat) -> Quotient {
    let f = &m.field;
    let e = w.transpose().rref(f);
    let lifts = linalg::complement_coords(f, w);
    let n = m.dim;
    // projection: reduce by W then read complementary coordinates
    let mut proj = Mat::zeros(lifts.len(), n);
    let mut pos = vec![usize::MAX; n];
    for (i, &c) in lifts.iter().enumerate() {
        pos[c] = i;
    }
    for j in 0..n {
        let mut v = vec![Fe::ZERO; n];
        v[j] = Fe::ONE;
        for (r, &pc) in e.pivots.iter().enumerate() {
            let x = v[pc];
            if !x.is_zero() {
                f.axpy(&mut v, f.neg(x), e.mat.row(r));
            }
        }
        for (i, &c) in lifts.iter().enumerate() {
            proj.set(i, j, v[c]);
        }
    }
    let lift_mat = Mat::identity(n).select_cols(&lifts);
    let gens = m.gens.iter().map(|g| proj.mul(f, &g.mul(f, &lift_mat))).collect();
    Quotient {
        module: Module::from_parts(f, m.r, lifts.len(), gens),
        lifts,
        projection: proj,
    }
}

/// Module together with a weight for each basis vector.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedModule {
    pub module: Module,
    pub weights: Vec<i64>,
}

impl GradedModule {
    /// Validates that every `N_i` strictly lowers weight by an even amount.
    pub fn new(module: Module, weights: Vec<i64>) -> Result<GradedModule> {
        let g = GradedModule { module, weights };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.len() != self.module.dim {
            return Err(Error::InvalidModule(
                "weight vector length differs from dimension".into(),
            ));
        }
        for (i, g) in self.module.gens.iter().enumerate() {
            for a in 0..g.rows {
                for b in 0..g.cols {
                    if !g.get(a, b).is_zero() {
                        let d = self.weights[b] - self.weights[a];
                        if d < 2 || d % 2 != 0 {
                            return Err(Error::InvalidModule(format!(
                                "generator {i} entry ({a},{b}) joins weights {} -> {}",
                                self.weights[b], self.weights[a]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn trivial(field: &Field, r: usize) -> GradedModule {
        GradedModule {
            module: Module::trivial(field, r),
            weights: vec![0],
        }
    }

    pub fn dim(&self) -> usize {
        self.module.dim
    }

    pub fn tensor(&self, o: &GradedModule) -> GradedModule {
        let mut weights = Vec::with_capacity(self.dim() * o.dim());
        for &a in &self.weights {
            for &b in &o.weights {
                weights.push(a + b);
            }
        }
        GradedModule {
            module: self.module.tensor(&o.module),
            weights,
        }
    }

    pub fn dual(&self) -> GradedModule {
        GradedModule {
            module: self.module.dual(),
            weights: self.weights.iter().map(|w| -w).collect(),
        }
    }

    pub fn frobenius_twist(&self) -> GradedModule {
        let p = self.module.p() as i64;
        GradedModule {
            module: self.module.frobenius_twist(),
            weights: self.weights.iter().map(|w| w * p).collect(),
        }
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.weights.iter().copied().max()
    }

    pub fn weight_multiplicity(&self, w: i64) -> usize {
        self.weights.iter().filter(|&&x| x == w).count()
    }

    /// Basis indices with the given weight.
    pub fn weight_space(&self, w: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights[i] == w).collect()
    }

    /// Restrict to an invariant subspace spanned by homogeneous columns.
    pub fn induced(&self, basis: &Mat, weights: Vec<i64>) -> GradedModule {
        GradedModule {
            module: induced_on_subspace(&self.module, basis),
            weights,
        }
    }
}
