//! Finite fields `F_{p^k}`.
//!
//! Elements are packed integers `c_0 + c_1 p + ... + c_{k-1} p^{k-1}` over the
//! basis `1, t, ..., t^{k-1}` of `F_p[t]/(m(t))`. Multiplication goes through
//! log/antilog tables, addition through a table for small odd `q`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::poly;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const MAX_Q: u64 = 1 << 22;
const ADD_TABLE_MAX_Q: u32 = 1024;

struct Tables {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Vec<u16>,
    neg: Vec<u32>,
    frob: Vec<u32>,
    prim: u32,
}

/// Handle to a finite field; cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.k, self.0.modulus)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn digits(mut v: u32, p: u32, k: usize) -> Vec<u32> {
    let mut d = vec![0; k];
    for x in d.iter_mut() {
        *x = v % p;
        v /= p;
    }
    d
}

fn pack(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn slow_mul(a: u32, b: u32, p: u32, modulus: &[u32]) -> u32 {
    let k = modulus.len() - 1;
    let da = digits(a, p, k);
    let db = digits(b, p, k);
    let mut prod = vec![0u64; 2 * k];
    for i in 0..k {
        for j in 0..k {
            prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p as u64;
        }
    }
    for deg in (k..2 * k).rev() {
        let c = prod[deg];
        if c != 0 {
            prod[deg] = 0;
            for i in 0..k {
                let sub = c * modulus[i] as u64 % p as u64;
                prod[deg - k + i] = (prod[deg - k + i] + p as u64 - sub) % p as u64;
            }
        }
    }
    let low: Vec<u32> = prod[..k].iter().map(|&x| x as u32).collect();
    pack(&low, p)
}

fn slow_pow(mut a: u32, mut e: u64, p: u32, modulus: &[u32]) -> u32 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = slow_mul(r, a, p, modulus);
        }
        a = slow_mul(a, a, p, modulus);
        e >>= 1;
    }
    r
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Smallest monic irreducible of degree `k` over `F_p`, ordering candidates by
/// the packed integer `sum c_i p^i` of their lower coefficients.
pub fn conway_free_modulus(p: u32, k: u32) -> Result<Vec<u32>> {
    if k == 1 {
        return Ok(vec![0, 1]);
    }
    let fp = Field::new(p, 1)?;
    let count = (p as u64).pow(k);
    for v in 0..count {
        let low = digits(v as u32, p, k as usize);
        let mut coeffs: Vec<Fe> = low.iter().map(|&c| Fe(c)).collect();
        coeffs.push(Fe::ONE);
        if poly::is_irreducible(&fp, &coeffs) {
            let mut m = low;
            m.push(1);
            return Ok(m);
        }
    }
    Err(Error::InvalidField(format!("no irreducible of degree {k} over F_{p}")))
}

impl Field {
    /// `F_{p^k}` with the canonical modulus. Fields are cached per `(p, k)`.
    pub fn new(p: u32, k: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidField("k must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if q > MAX_Q {
            return Err(Error::InvalidField(format!("field of order {p}^{k} is too large")));
        }
        if let Some(f) = cache().lock().unwrap().get(&(p, k)) {
            return Ok(f.clone());
        }
        let modulus = conway_free_modulus(p, k)?;
        let f = Field::with_modulus(p, k, modulus)?;
        cache().lock().unwrap().insert((p, k), f.clone());
        Ok(f)
    }

    fn with_modulus(p: u32, k: u32, modulus: Vec<u32>) -> Result<Field> {
        let q = p.pow(k);
        let qm1 = (q - 1) as u64;
        let factors = prime_factors(qm1);
        let prim = if q == 2 {
            1
        } else {
            (1..q)
                .find(|&g| factors.iter().all(|&l| slow_pow(g, qm1 / l, p, &modulus) != 1))
                .ok_or_else(|| Error::InvalidField("no primitive element".into()))?
        };
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x;
            exp[i + n] = x;
            log[x as usize] = i as u32;
            x = slow_mul(x, prim, p, &modulus);
        }
        let ku = k as usize;
        let neg: Vec<u32> = (0..q)
            .map(|v| {
                let d: Vec<u32> = digits(v, p, ku).iter().map(|&c| (p - c) % p).collect();
                pack(&d, p)
            })
            .collect();
        let mut add = Vec::new();
        if p != 2 && q <= ADD_TABLE_MAX_Q {
            add = vec![0u16; (q * q) as usize];
            for a in 0..q {
                let da = digits(a, p, ku);
                for b in 0..q {
                    let db = digits(b, p, ku);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    add[(a * q + b) as usize] = pack(&s, p) as u16;
                }
            }
        }
        let frob: Vec<u32> = (0..q)
            .map(|v| {
                if v == 0 {
                    0
                } else {
                    exp[((log[v as usize] as u64 * p as u64) % qm1) as usize]
                }
            })
            .collect();
        Ok(Field(Arc::new(Tables {
            p,
            k,
            q,
            modulus,
            exp,
            log,
            add,
            neg,
            frob,
            prim,
        })))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }
    #[inline]
    pub fn k(&self) -> u32 {
        self.0.k
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }
    /// Ascending coefficients of the monic defining polynomial.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    /// The residue class of `t`.
    pub fn gen(&self) -> Fe {
        if self.0.k == 1 {
            Fe::ZERO
        } else {
            Fe(self.0.p)
        }
    }
    pub fn primitive(&self) -> Fe {
        Fe(self.0.prim)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let t = &*self.0;
        if t.p == 2 {
            Fe(a.0 ^ b.0)
        } else if !t.add.is_empty() {
            Fe(t.add[(a.0 * t.q + b.0) as usize] as u32)
        } else {
            self.add_digits(a, b)
        }
    }

    fn add_digits(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.0.neg[a.0 as usize])
    }
    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let t = &*self.0;
        Fe(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }
    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero");
        let t = &*self.0;
        let n = t.q - 1;
        Fe(t.exp[((n - t.log[a.0 as usize]) % n) as usize])
    }
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }
    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let t = &*self.0;
        let n = (t.q - 1) as u64;
        Fe(t.exp[((t.log[a.0 as usize] as u64 * (e % n)) % n) as usize])
    }
    /// `a^p`.
    #[inline]
    pub fn frobenius(&self, a: Fe) -> Fe {
        Fe(self.0.frob[a.0 as usize])
    }
    /// `a^{p^j}`.
    pub fn frobenius_pow(&self, a: Fe, j: u32) -> Fe {
        let mut x = a;
        for _ in 0..(j % self.0.k) {
            x = self.frobenius(x);
        }
        x
    }
    /// Discrete log with respect to [`Field::primitive`].
    pub fn log(&self, a: Fe) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(self.0.log[a.0 as usize])
        }
    }

    pub fn from_i64(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Fe> {
        if c.len() > self.0.k as usize || c.iter().any(|&x| x >= self.0.p) {
            return Err(Error::InvalidArgument(format!(
                "bad coefficient list {c:?} for {self:?}"
            )));
        }
        Ok(Fe(pack(c, self.0.p)))
    }

    /// Ascending `F_p` coefficients, length `k`.
    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        digits(a.0, self.0.p, self.0.k as usize)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q).map(Fe)
    }

    pub fn is_prime_subfield(&self, a: Fe) -> bool {
        a.0 < self.0.p
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(0..self.0.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(1..self.0.q))
    }

    /// `y += c * x`.
    #[inline]
    pub fn axpy(&self, y: &mut [Fe], c: Fe, x: &[Fe]) {
        if c.is_zero() {
            return;
        }
        let t = &*self.0;
        let lc = t.log[c.0 as usize];
        if t.p == 2 {
            for (yi, xi) in y.iter_mut().zip(x) {
                if xi.0 != 0 {
                    yi.0 ^= t.exp[(lc + t.log[xi.0 as usize]) as usize];
                }
            }
        } else if !t.add.is_empty() {
            let q = t.q;
            for (yi, xi) in y.iter_mut().zip(x) {
                if xi.0 != 0 {
                    let m = t.exp[(lc + t.log[xi.0 as usize]) as usize];
                    yi.0 = t.add[(yi.0 * q + m) as usize] as u32;
                }
            }
        } else {
            for (yi, xi) in y.iter_mut().zip(x) {
                if xi.0 != 0 {
                    let m = Fe(t.exp[(lc + t.log[xi.0 as usize]) as usize]);
                    *yi = self.add_digits(*yi, m);
                }
            }
        }
    }

    /// `x *= c`.
    pub fn scale_slice(&self, x: &mut [Fe], c: Fe) {
        for v in x.iter_mut() {
            *v = self.mul(*v, c);
        }
    }

    pub fn dot(&self, a: &[Fe], b: &[Fe]) -> Fe {
        let mut s = Fe::ZERO;
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() && !y.is_zero() {
                s = self.add(s, self.mul(*x, *y));
            }
        }
        s
    }

    /// Render an element as a polynomial in `t`.
    pub fn display(&self, a: Fe) -> String {
        if self.0.k == 1 {
            return a.0.to_string();
        }
        let c = self.coeffs(a);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| match (i, x) {
                (0, x) => x.to_string(),
                (1, 1) => "t".into(),
                (1, x) => format!("{x}t"),
                (i, 1) => format!("t^{i}"),
                (i, x) => format!("{x}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// Field embedding `F_{p^a} -> F_{p^b}` with `a | b`, sending `t` to the
/// smallest root of the source modulus in the target.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: Field,
    pub target: Field,
    map: Vec<Fe>,
}

impl Embedding {
    pub fn new(source: &Field, target: &Field) -> Result<Embedding> {
        if source.p() != target.p() || !target.k().is_multiple_of(source.k()) {
            return Err(Error::FieldMismatch(format!("cannot embed {source:?} into {target:?}")));
        }
        let m: Vec<Fe> = source.modulus().iter().map(|&c| Fe(c)).collect();
        let beta = target
            .elements()
            .find(|&x| poly::eval(target, &m, x).is_zero())
            .ok_or_else(|| Error::FieldMismatch("modulus has no root in target".into()))?;
        let k = source.k() as usize;
        let mut powers = Vec::with_capacity(k);
        let mut x = Fe::ONE;
        for _ in 0..k {
            powers.push(x);
            x = target.mul(x, beta);
        }
        let map = source
            .elements()
            .map(|a| {
                source
                    .coeffs(a)
                    .iter()
                    .zip(&powers)
                    .fold(Fe::ZERO, |acc, (&c, &pw)| target.add(acc, target.mul(Fe(c), pw)))
            })
            .collect();
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            map,
        })
    }

    #[inline]
    pub fn apply(&self, a: Fe) -> Fe {
        self.map[a.0 as usize]
    }
}
