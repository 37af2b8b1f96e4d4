//! Dense univariate polynomials over a [`Field`], ascending coefficients.
//!
//! Factorization is square-free decomposition, distinct-degree splitting and
//! seeded Cantor-Zassenhaus equal-degree splitting.

use rand::Rng;

use crate::field::{Fe, Field};

pub type Poly = Vec<Fe>;

pub fn trim(a: &mut Poly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub fn trimmed(mut a: Poly) -> Poly {
    trim(&mut a);
    a
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(a: &[Fe]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn is_one(a: &[Fe]) -> bool {
    degree(a) == Some(0) && a[0] == Fe::ONE
}

pub fn x() -> Poly {
    vec![Fe::ZERO, Fe::ONE]
}

pub fn add(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let n = a.len().max(b.len());
    let mut out = vec![Fe::ZERO; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(Fe::ZERO);
        let y = b.get(i).copied().unwrap_or(Fe::ZERO);
        *o = f.add(x, y);
    }
    trimmed(out)
}

pub fn sub(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let nb: Poly = b.iter().map(|&c| f.neg(c)).collect();
    add(f, a, &nb)
}

pub fn scale(f: &Field, a: &[Fe], c: Fe) -> Poly {
    trimmed(a.iter().map(|&x| f.mul(x, c)).collect())
}

pub fn mul(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let (Some(da), Some(db)) = (degree(a), degree(b)) else {
        return Vec::new();
    };
    let mut out = vec![Fe::ZERO; da + db + 1];
    for i in 0..=da {
        if !a[i].is_zero() {
            f.axpy(&mut out[i..=i + db], a[i], &b[..=db]);
        }
    }
    trimmed(out)
}

/// Quotient and remainder. Panics if `b` is zero.
pub fn divrem(f: &Field, a: &[Fe], b: &[Fe]) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r: Poly = trimmed(a.to_vec());
    let Some(da) = degree(&r) else {
        return (Vec::new(), Vec::new());
    };
    if da < db {
        return (Vec::new(), r);
    }
    let lead_inv = f.inv(b[db]);
    let mut qt = vec![Fe::ZERO; da - db + 1];
    for i in (db..=da).rev() {
        let c = r[i];
        if c.is_zero() {
            continue;
        }
        let m = f.mul(c, lead_inv);
        qt[i - db] = m;
        let nm = f.neg(m);
        f.axpy(&mut r[i - db..=i], nm, &b[..=db]);
    }
    r.truncate(db);
    (trimmed(qt), trimmed(r))
}

pub fn rem(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    divrem(f, a, b).1
}

pub fn monic(f: &Field, a: &[Fe]) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => scale(f, a, f.inv(a[d])),
    }
}

pub fn gcd(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let mut x = trimmed(a.to_vec());
    let mut y = trimmed(b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// `(g, s, t)` with `s a + t b = g` monic.
pub fn xgcd(f: &Field, a: &[Fe], b: &[Fe]) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (trimmed(a.to_vec()), trimmed(b.to_vec()));
    let (mut s0, mut s1) = (vec![Fe::ONE], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Fe::ONE]);
    while !r1.is_empty() {
        let (qt, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &qt, &s1));
        let t = sub(f, &t0, &mul(f, &qt, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    match degree(&r0) {
        None => (r0, s0, t0),
        Some(d) => {
            let c = f.inv(r0[d]);
            (scale(f, &r0, c), scale(f, &s0, c), scale(f, &t0, c))
        }
    }
}

pub fn derivative(f: &Field, a: &[Fe]) -> Poly {
    trimmed(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_i64(i as i64)))
            .collect(),
    )
}

pub fn eval(f: &Field, a: &[Fe], x: Fe) -> Fe {
    a.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
}

pub fn mulmod(f: &Field, a: &[Fe], b: &[Fe], m: &[Fe]) -> Poly {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &Field, a: &[Fe], mut e: u64, m: &[Fe]) -> Poly {
    let mut base = rem(f, a, m);
    let mut out = rem(f, &[Fe::ONE], m);
    while e > 0 {
        if e & 1 == 1 {
            out = mulmod(f, &out, &base, m);
        }
        base = mulmod(f, &base, &base, m);
        e >>= 1;
    }
    out
}

fn pth_root(f: &Field, a: &[Fe]) -> Poly {
    let p = f.p() as usize;
    let k = f.k();
    a.iter().step_by(p).map(|&c| f.frobenius_pow(c, k - 1)).collect()
}

/// Square-free decomposition of a monic polynomial: pairs `(g, m)` with
/// `a = prod g^m`, each `g` square-free.
pub fn squarefree(f: &Field, a: &[Fe]) -> Vec<(Poly, usize)> {
    let a = monic(f, a);
    let mut out = Vec::new();
    if degree(&a).unwrap_or(0) == 0 {
        return out;
    }
    let da = derivative(f, &a);
    let mut c = gcd(f, &a, &da);
    let mut w = divrem(f, &a, &c).0;
    let mut i = 1;
    while !is_one(&w) {
        let y = gcd(f, &w, &c);
        let z = divrem(f, &w, &y).0;
        if degree(&z).unwrap_or(0) > 0 {
            out.push((monic(f, &z), i));
        }
        i += 1;
        w = y;
        c = divrem(f, &c, &w).0;
    }
    if degree(&c).unwrap_or(0) > 0 {
        let root = pth_root(f, &c);
        for (g, m) in squarefree(f, &root) {
            out.push((g, m * f.p() as usize));
        }
    }
    out
}

/// Distinct-degree splitting of a square-free monic polynomial.
pub fn distinct_degree(f: &Field, a: &[Fe]) -> Vec<(Poly, usize)> {
    let q = f.q() as u64;
    let mut out = Vec::new();
    let mut rest = monic(f, a);
    let mut h = rem(f, &x(), &rest);
    let mut d = 1;
    while degree(&rest).unwrap_or(0) >= 2 * d {
        h = powmod(f, &h, q, &rest);
        let g = gcd(f, &sub(f, &h, &x()), &rest);
        if !is_one(&g) {
            rest = divrem(f, &rest, &g).0;
            h = rem(f, &h, &rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(dr) = degree(&rest) {
        if dr > 0 {
            out.push((rest, dr));
        }
    }
    out
}

/// Split a product of distinct monic irreducibles of degree `d`.
pub fn equal_degree<R: Rng + ?Sized>(f: &Field, a: &[Fe], d: usize, rng: &mut R) -> Vec<Poly> {
    let a = monic(f, a);
    let n = degree(&a).unwrap_or(0);
    if n <= d {
        return vec![a];
    }
    let q = f.q() as u64;
    loop {
        let r: Poly = trimmed((0..n).map(|_| f.random(rng)).collect());
        if degree(&r).unwrap_or(0) == 0 {
            continue;
        }
        let b = if f.p() == 2 {
            let mut t = r.clone();
            let mut s = r.clone();
            for _ in 1..(f.k() as usize * d) {
                t = mulmod(f, &t, &t, &a);
                s = add(f, &s, &t);
            }
            s
        } else {
            let mut norm = r.clone();
            let mut fr = r.clone();
            for _ in 1..d {
                fr = powmod(f, &fr, q, &a);
                norm = mulmod(f, &norm, &fr, &a);
            }
            let e = powmod(f, &norm, (q - 1) / 2, &a);
            sub(f, &e, &[Fe::ONE])
        };
        let g = gcd(f, &b, &a);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(f, &a, &g).0;
            let mut out = equal_degree(f, &g, d, rng);
            out.extend(equal_degree(f, &h, d, rng));
            return out;
        }
    }
}

/// Full factorization into monic irreducibles with multiplicities, sorted.
pub fn factor<R: Rng + ?Sized>(f: &Field, a: &[Fe], rng: &mut R) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    for (g, m) in squarefree(f, a) {
        for (h, d) in distinct_degree(f, &g) {
            for irr in equal_degree(f, &h, d, rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by(|x, y| {
        (x.0.len(), x.0.iter().rev().map(|c| c.0).collect::<Vec<_>>())
            .cmp(&(y.0.len(), y.0.iter().rev().map(|c| c.0).collect::<Vec<_>>()))
    });
    out
}

pub fn is_irreducible(f: &Field, a: &[Fe]) -> bool {
    let Some(n) = degree(a) else {
        return false;
    };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let m = monic(f, a);
    let q = f.q() as u64;
    let mut h = rem(f, &x(), &m);
    for _ in 1..=n / 2 {
        h = powmod(f, &h, q, &m);
        let g = gcd(f, &sub(f, &h, &x()), &m);
        if !is_one(&g) {
            return false;
        }
    }
    true
}
