//! Rank varieties on rational points.
//!
//! A point `alpha` lies in the support of `M` when `u = sum alpha_i N_i`
//! does not act freely, i.e. `rank(u^(p-1)) != dim M / p`. Only points of
//! `P^(r-1)(F_(q^e))` are examined.

use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, Field};
use crate::linalg::Mat;
use crate::module::Module;
use crate::sl2::{moore_matrix, projective_points, Lambda};

/// Projective point, first non-zero coordinate equal to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    pub coords: Vec<Fe>,
}

impl ProjPoint {
    pub fn new(f: &Field, coords: Vec<Fe>) -> Result<ProjPoint> {
        let Some(lead) = coords.iter().position(|x| !x.is_zero()) else {
            return Err(Error::InvalidArgument(
                "projective point with all coordinates zero".into(),
            ));
        };
        let c = f.inv(coords[lead]);
        Ok(ProjPoint {
            coords: coords.iter().map(|&x| f.mul(x, c)).collect(),
        })
    }

    pub fn extend(&self, emb: &Embedding) -> ProjPoint {
        ProjPoint {
            coords: self.coords.iter().map(|&x| emb.apply(x)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupportSet {
    /// Points are rational over `F_(q^e)` of the module's field.
    pub e: u32,
    pub field: Field,
    pub points: Vec<ProjPoint>,
}

impl SupportSet {
    pub fn contains(&self, pt: &ProjPoint) -> bool {
        self.points.binary_search(pt).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }
}

/// `u_alpha = sum alpha_i N_i`.
pub fn shifted_element(m: &Module, coords: &[Fe]) -> Mat {
    let f = &m.field;
    let mut u = Mat::zeros(m.dim, m.dim);
    for (g, &c) in m.gens.iter().zip(coords) {
        u.axpy(f, c, g);
    }
    u
}

/// Is `M` free over `k[u_alpha]/(u_alpha^p)`?
pub fn is_projective_at(m: &Module, coords: &[Fe]) -> Result<bool> {
    if coords.iter().all(|x| x.is_zero()) {
        return Err(Error::InvalidArgument("zero vector is not a point".into()));
    }
    if coords.len() != m.r {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, r = {}",
            coords.len(),
            m.r
        )));
    }
    let p = m.p();
    if !m.dim.is_multiple_of(p) {
        return Ok(false);
    }
    if m.dim == 0 {
        return Ok(true);
    }
    let f = &m.field;
    let u = shifted_element(m, coords);
    Ok(u.pow(f, p as u64 - 1).rank(f) == m.dim / p)
}

fn extension(f: &Field, e: u32) -> Result<(Field, Embedding)> {
    if e == 0 {
        return Err(Error::InvalidArgument("extension degree must be positive".into()));
    }
    let big = Field::new(f.p(), f.k() * e)?;
    let emb = Embedding::new(f, &big)?;
    Ok((big, emb))
}

/// Support over the rational points of `P^(r-1)(F_(q^e))`.
pub fn support_points(m: &Module, e: u32) -> Result<SupportSet> {
    let (big, emb) = extension(&m.field, e)?;
    let mx = m.extend_scalars(&emb)?;
    let mut points = Vec::new();
    for c in projective_points(&big, m.r) {
        if !is_projective_at(&mx, &c)? {
            points.push(ProjPoint { coords: c });
        }
    }
    points.sort();
    Ok(SupportSet { e, field: big, points })
}

/// Points of `P^(r-1)(F_(q^e))` on the first `j` Moore hyperplanes
/// `sum alpha_s lambda_s^(p^l) = 0`, `l < j`.
pub fn moore_points(lambda: &Lambda, j: usize, e: u32) -> Result<SupportSet> {
    let f = &lambda.field;
    let (big, emb) = extension(f, e)?;
    let r = lambda.r();
    let rows = moore_matrix(f, &lambda.entries).map(|x| emb.apply(x));
    let mut points = Vec::new();
    for c in projective_points(&big, r) {
        let ok = (0..j.min(r)).all(|l| big.dot(rows.row(l), &c).is_zero());
        if ok {
            points.push(ProjPoint { coords: c });
        }
    }
    points.sort();
    Ok(SupportSet { e, field: big, points })
}

/// The unique point killed by the first `r - 1` Moore rows.
pub fn steinberg_point(lambda: &Lambda) -> Result<ProjPoint> {
    let f = &lambda.field;
    let r = lambda.r();
    let mm = moore_matrix(f, &lambda.entries);
    let head = mm.select_rows(&(0..r - 1).collect::<Vec<_>>());
    let k = head.kernel(f);
    if k.cols != 1 {
        return Err(Error::InvalidArgument("Moore rows are degenerate".into()));
    }
    let pt = ProjPoint::new(f, k.col(0))?;
    if f.dot(mm.row(r - 1), &pt.coords).is_zero() {
        return Err(Error::InvalidArgument(
            "last Moore row vanishes at the Steinberg point".into(),
        ));
    }
    Ok(pt)
}

/// `j` with `p^j - 1 <= i < p^(j+1) - 1`.
pub fn moore_level(p: usize, i: usize) -> usize {
    let mut j = 0;
    while p.pow(j as u32 + 1) - 1 <= i {
        j += 1;
    }
    j
}
