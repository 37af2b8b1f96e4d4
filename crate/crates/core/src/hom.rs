//! Equivariant maps and Hom spaces.
//!
//! `Hom_E(M, N)` is computed from a presentation of `M`: generators lifting a
//! basis of the top and relations lifting a basis of the top of the kernel of
//! `kE^d -> M`. A map is then a tuple of images of the generators killed by
//! every relation.

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::linalg::{self, Mat};
use crate::module::{GradedModule, Module, Monomials, Submodule};

#[derive(Clone, Debug)]
pub struct ModMap {
    pub source: Module,
    pub target: Module,
    pub mat: Mat,
}

impl ModMap {
    pub fn new(source: &Module, target: &Module, mat: Mat) -> Result<ModMap> {
        source.check_compatible(target)?;
        if mat.rows != target.dim || mat.cols != source.dim {
            return Err(Error::InvalidMap(format!(
                "matrix is {}x{}, expected {}x{}",
                mat.rows, mat.cols, target.dim, source.dim
            )));
        }
        if !is_equivariant(source, target, &mat) {
            return Err(Error::InvalidMap("matrix does not intertwine the actions".into()));
        }
        Ok(ModMap {
            source: source.clone(),
            target: target.clone(),
            mat,
        })
    }

    pub fn identity(m: &Module) -> ModMap {
        ModMap {
            source: m.clone(),
            target: m.clone(),
            mat: Mat::identity(m.dim),
        }
    }

    pub fn compose(&self, first: &ModMap) -> ModMap {
        let f = &self.source.field;
        ModMap {
            source: first.source.clone(),
            target: self.target.clone(),
            mat: self.mat.mul(f, &first.mat),
        }
    }

    pub fn rank(&self) -> usize {
        self.mat.rank(&self.source.field)
    }

    pub fn kernel(&self) -> Submodule {
        Submodule {
            ambient: self.source.clone(),
            basis: self.mat.kernel(&self.source.field),
        }
    }

    pub fn image(&self) -> Submodule {
        Submodule {
            ambient: self.target.clone(),
            basis: self.mat.col_space(&self.source.field),
        }
    }
}

pub fn is_equivariant(source: &Module, target: &Module, mat: &Mat) -> bool {
    let f = &source.field;
    source
        .gens
        .iter()
        .zip(&target.gens)
        .all(|(a, b)| mat.mul(f, a) == b.mul(f, mat))
}

/// Columns `X^a V` for the free module `kE^d` acting on coordinate columns.
fn free_shift(mons: &Monomials, v: &Mat, i: usize) -> Mat {
    let mut out = Mat::zeros(v.rows, v.cols);
    let d = v.rows / mons.size;
    for j in 0..d {
        for a in 0..mons.size {
            if let Some(b) = mons.shift(a, i) {
                let src = (j * mons.size + a) * v.cols;
                let dst = (j * mons.size + b) * v.cols;
                out.data[dst..dst + v.cols].copy_from_slice(&v.data[src..src + v.cols]);
            }
        }
    }
    out
}

/// Generators and relations of a module.
#[derive(Clone, Debug)]
pub struct Presentation {
    /// Basis indices of the generators (standard basis vectors lifting the top).
    pub top: Vec<usize>,
    /// Relation vectors in `kE^d`, coordinate `j * p^r + a`.
    pub relations: Vec<Vec<Fe>>,
    /// Coordinates of `kE^d` whose images form a basis of the module.
    pub pivots: Vec<usize>,
    /// Inverse of the square matrix formed by those image columns.
    pub pivot_inv: Mat,
    /// The kernel of `kE^d -> M` as columns.
    pub kernel: Mat,
}

impl Presentation {
    pub fn of(m: &Module) -> Presentation {
        let f = &m.field;
        let mons = m.monomials();
        let top = m.top_lifts();
        let d = top.len();
        let gens = Mat::identity(m.dim).select_cols(&top);
        let imgs = m.monomial_images(f, &gens);
        let size = mons.size;
        let mut pi = Mat::zeros(m.dim, d * size);
        for (a, img) in imgs.iter().enumerate() {
            for j in 0..d {
                for t in 0..m.dim {
                    pi.set(t, j * size + a, img.get(t, j));
                }
            }
        }
        let ech = pi.echelon(f);
        let pivots = ech.pivots.clone();
        let pivot_inv = if m.dim == 0 {
            Mat::zeros(0, 0)
        } else {
            pi.select_cols(&pivots).inverse(f).expect("cover map not surjective")
        };
        let kernel = pi.kernel(f);
        let rad: Vec<Mat> = (0..m.r).map(|i| free_shift(&mons, &kernel, i)).collect();
        let radk = Mat::hcat(d * size, &rad);
        let relations = top_complement(f, &kernel, &radk);
        Presentation {
            top,
            relations,
            pivots,
            pivot_inv,
            kernel,
        }
    }

    pub fn generators(&self) -> usize {
        self.top.len()
    }
}

/// Vectors of the column space of `k` completing the column space of its
/// subspace `rad` (greedy by echelon pivots).
pub fn top_complement(f: &Field, k: &Mat, rad: &Mat) -> Vec<Vec<Fe>> {
    let ek = k.transpose().rref(f);
    let er = rad.transpose().echelon(f);
    let rp: std::collections::HashSet<usize> = er.pivots.iter().copied().collect();
    ek.pivots
        .iter()
        .enumerate()
        .filter(|(_, c)| !rp.contains(c))
        .map(|(row, _)| ek.mat.row(row).to_vec())
        .collect()
}

/// Hom space as a list of matrices (`target.dim x source.dim`).
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub basis: Vec<Mat>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn into_maps(self, source: &Module, target: &Module) -> Vec<ModMap> {
        self.basis
            .into_iter()
            .map(|mat| ModMap {
                source: source.clone(),
                target: target.clone(),
                mat,
            })
            .collect()
    }
}

/// `Hom(M, N)` using a presentation of `M`. `allowed[j]` restricts the image
/// of generator `j` to the column span of the given matrix.
pub fn hom_from_presentation(m: &Module, pres: &Presentation, n: &Module, allowed: Option<&[Mat]>) -> HomSpace {
    let f = &m.field;
    let mons = m.monomials();
    let size = mons.size;
    let d = pres.generators();
    if m.dim == 0 || n.dim == 0 {
        return HomSpace { basis: Vec::new() };
    }
    let spaces: Vec<Mat> = (0..d)
        .map(|j| match allowed {
            Some(a) => a[j].clone(),
            None => Mat::identity(n.dim),
        })
        .collect();
    let offsets: Vec<usize> = spaces
        .iter()
        .scan(0, |acc, s| {
            let o = *acc;
            *acc += s.cols;
            Some(o)
        })
        .collect();
    let unknowns: usize = spaces.iter().map(|s| s.cols).sum();
    if unknowns == 0 {
        return HomSpace { basis: Vec::new() };
    }
    let imgs: Vec<std::rc::Rc<Vec<Mat>>> = match allowed {
        Some(_) => spaces
            .iter()
            .map(|s| std::rc::Rc::new(n.monomial_images(f, s)))
            .collect(),
        None => {
            let shared = std::rc::Rc::new(n.monomial_matrices(f));
            (0..d).map(|_| shared.clone()).collect()
        }
    };
    let s = pres.relations.len();
    let mut c = Mat::zeros(s * n.dim, unknowns);
    for (k, rel) in pres.relations.iter().enumerate() {
        for j in 0..d {
            let w = spaces[j].cols;
            if w == 0 {
                continue;
            }
            let mut block = Mat::zeros(n.dim, w);
            for a in 0..size {
                let coef = rel[j * size + a];
                if !coef.is_zero() {
                    block.axpy(f, coef, &imgs[j][a]);
                }
            }
            c.set_block(k * n.dim, offsets[j], &block);
        }
    }
    let ker = if s == 0 { Mat::identity(unknowns) } else { c.kernel(f) };
    let mut basis = Vec::with_capacity(ker.cols);
    for col in 0..ker.cols {
        let y = ker.col(col);
        let mut phi = Mat::zeros(n.dim, pres.pivots.len());
        for (pc, &coord) in pres.pivots.iter().enumerate() {
            let (j, a) = (coord / size, coord % size);
            let w = spaces[j].cols;
            let yj = &y[offsets[j]..offsets[j] + w];
            let v = imgs[j][a].mul_vec(f, yj);
            for t in 0..n.dim {
                phi.set(t, pc, v[t]);
            }
        }
        basis.push(phi.mul(f, &pres.pivot_inv));
    }
    HomSpace { basis }
}

/// Basis of `Hom_E(M, N)`.
pub fn hom_space(m: &Module, n: &Module) -> HomSpace {
    m.check_compatible(n).expect("hom between incompatible modules");
    if m.dim == 0 || n.dim == 0 {
        return HomSpace { basis: Vec::new() };
    }
    let direct = m.top_dim() * n.dim;
    let via_dual = n.socle_dim() * m.dim;
    if direct <= via_dual {
        let pres = Presentation::of(m);
        hom_from_presentation(m, &pres, n, None)
    } else {
        let nd = n.dual();
        let md = m.dual();
        let pres = Presentation::of(&nd);
        let hs = hom_from_presentation(&nd, &pres, &md, None);
        HomSpace {
            basis: hs.basis.into_iter().map(|g| g.transpose()).collect(),
        }
    }
}

pub fn hom_dim(m: &Module, n: &Module) -> usize {
    hom_space(m, n).dim()
}

/// Columns of the identity picking the weight-`w` basis vectors.
pub fn weight_space_cols(g: &GradedModule, w: i64) -> Mat {
    Mat::identity(g.dim()).select_cols(&g.weight_space(w))
}

/// Degree-zero homs between graded modules via a presentation of the source
/// whose generators are homogeneous basis vectors.
pub fn graded_hom_from_presentation(m: &GradedModule, pres: &Presentation, n: &GradedModule) -> HomSpace {
    let allowed: Vec<Mat> = pres.top.iter().map(|&t| weight_space_cols(n, m.weights[t])).collect();
    hom_from_presentation(&m.module, pres, &n.module, Some(&allowed))
}

pub fn graded_hom_space(m: &GradedModule, n: &GradedModule) -> HomSpace {
    let pres = Presentation::of(&m.module);
    graded_hom_from_presentation(m, &pres, n)
}

/// Solve for coordinates of `v` (a column) in the span of `basis` columns.
pub fn express(f: &Field, basis: &Mat, v: &Mat) -> Option<Mat> {
    basis.solve(f, v)
}

/// Is the span of the columns of `b` contained in the span of `a`?
pub fn span_contains(f: &Field, a: &Mat, b: &Mat) -> bool {
    a.hstack(b).rank(f) == a.rank(f)
}

pub fn left_inverse_rows(f: &Field, b: &Mat) -> Result<(Vec<usize>, Mat)> {
    linalg::left_inverse(f, b)
}
