//! Coefficient rings: prime fields and their extensions (log/antilog tables),
//! the integers, the rationals and one-generator number rings `Z[a]/(f)`,
//! together with univariate factoring over `F_p` and the reduction maps.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 24;

/// A commutative ring with unit. Elements are plain values; all arithmetic
/// goes through the ring handle, which carries any runtime context.
pub trait Ring: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    /// Canonical text; a leading `-` marks a negative value.
    fn format_elem(&self, a: &Self::Elem) -> String;
    /// Whether the text of `a` needs parentheses as a factor.
    fn is_compound(&self, a: &Self::Elem) -> bool;
    fn descriptor(&self) -> RingSpec;
    /// Small random element; uniform for finite fields.
    fn random_elem(&self, rng: &mut dyn RngCore) -> Self::Elem;
    /// Name and value of the adjoined generator, if any.
    fn generator(&self) -> Option<(&'static str, Self::Elem)> {
        None
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    /// `a / b` when the quotient exists in the ring.
    fn exact_div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        if self.is_one(b) {
            Some(a.clone())
        } else if self.is_one(&self.neg(b)) {
            Some(self.neg(a))
        } else {
            None
        }
    }
    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// Fields where Frobenius is bijective. `Q` implements this trait but
/// rejects both maps.
pub trait PerfectField: Field {
    fn frobenius(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn pth_root(&self, a: &Self::Elem) -> Result<Self::Elem>;
}

/// Fields able to hand out a sampling field for randomized rank tests: the
/// field itself when it is large, otherwise an extension of degree 3.
pub trait Sampling: Field {
    type Big: Field;
    fn sampler(&self) -> Sampler<Self>;
}

/// An embedding of `R` into a field `L` used for random evaluation.
pub struct Sampler<R: Sampling> {
    pub big: R::Big,
    embed: Arc<dyn Fn(&R::Elem) -> <R::Big as Ring>::Elem + Send + Sync>,
}

impl<R: Sampling> Sampler<R> {
    pub fn new(
        big: R::Big,
        embed: impl Fn(&R::Elem) -> <R::Big as Ring>::Elem + Send + Sync + 'static,
    ) -> Self {
        Sampler { big, embed: Arc::new(embed) }
    }
    pub fn embed(&self, a: &R::Elem) -> <R::Big as Ring>::Elem {
        (self.embed)(a)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&n| is_prime(n)).collect()
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
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

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    powmod_u64(a, p - 2, p)
}

// ---------------------------------------------------------------------------
// Univariate polynomials over F_p
// ---------------------------------------------------------------------------

/// Dense univariate polynomial over `F_p`, coefficients low to high with no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl PartialOrd for FpPoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for FpPoly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut c: Vec<u64> = coeffs.into_iter().map(|a| a % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_signed(p: u64, coeffs: &[BigInt]) -> Self {
        let pb = BigInt::from(p);
        let c = coeffs.iter().map(|a| a.mod_floor(&pb).to_u64().unwrap()).collect();
        FpPoly::new(p, c)
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: vec![] }
    }
    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }
    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }
    pub fn prime(&self) -> u64 {
        self.p
    }
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }
    pub fn lc(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }
    pub fn is_monic(&self) -> bool {
        self.lc() == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let li = inv_mod(self.lc(), self.p);
        FpPoly::new(self.p, self.c.iter().map(|&a| mulmod(a, li, self.p)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| (self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0)) % self.p)
            .collect();
        FpPoly::new(self.p, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                (self.c.get(i).copied().unwrap_or(0) + self.p - o.c.get(i).copied().unwrap_or(0)) % self.p
            })
            .collect();
        FpPoly::new(self.p, c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, c)
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let mut r = self.c.clone();
        let dd = d.deg();
        let li = inv_mod(d.lc(), p);
        if r.len() < d.c.len() {
            return (FpPoly::zero(p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let coef = mulmod(r[i], li, p);
            if coef == 0 {
                continue;
            }
            q[i - dd] = coef;
            for (j, &b) in d.c.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] = (r[idx] + p - mulmod(coef, b, p)) % p;
            }
        }
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mulmod(a, i as u64 % self.p, self.p))
            .collect();
        FpPoly::new(self.p, c)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &a| (mulmod(acc, x, self.p) + a) % self.p)
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = FpPoly::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    /// Rabin's test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic();
        let x = FpPoly::x(self.p);
        let frob_pow = |times: usize| {
            let mut h = x.rem(&f);
            for _ in 0..times {
                h = h.powmod(self.p as u128, &f);
            }
            h
        };
        if frob_pow(n).sub(&x).rem(&f).is_zero() {
            prime_factors(n as u64)
                .into_iter()
                .all(|r| frob_pow(n / r as usize).sub(&x).gcd(&f).degree() == Some(0))
        } else {
            false
        }
    }

    /// Canonical text in the variable `var`, e.g. `t^2+1`.
    pub fn format_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('+');
            }
            match (i, a) {
                (0, _) => s.push_str(&a.to_string()),
                (_, 1) => {}
                _ => {
                    s.push_str(&a.to_string());
                    s.push('*');
                }
            }
            match i {
                0 => {}
                1 => s.push_str(var),
                _ => s.push_str(&format!("{var}^{i}")),
            }
        }
        s
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_var("t"))
    }
}

/// Squarefree factorization of a monic polynomial over `F_p`.
fn fp_squarefree(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        let root = FpPoly::new(p, f.c.iter().step_by(p as usize).copied().collect());
        for (g, m) in fp_squarefree(&root) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.divrem(&c).0;
    let mut i = 1u32;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let z = w.divrem(&y).0;
        if z.deg() > 0 {
            out.push((z.monic(), i));
        }
        w = y;
        c = c.divrem(&w).0;
        i += 1;
    }
    if c.deg() > 0 {
        let root = FpPoly::new(p, c.monic().c.iter().step_by(p as usize).copied().collect());
        for (g, m) in fp_squarefree(&root) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial.
fn fp_distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let x = FpPoly::x(p);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut i = 0;
    while rest.deg() >= 2 * (i + 1) {
        i += 1;
        h = h.powmod(p as u128, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g.deg() > 0 {
            rest = rest.divrem(&g).0;
            h = h.rem(&rest);
            out.push((g, i));
        }
    }
    if rest.deg() > 0 {
        let d = rest.deg();
        out.push((rest, d));
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of distinct irreducibles of degree `d`.
fn fp_equal_degree(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = f.deg();
    if n == d {
        return vec![f.monic()];
    }
    let p = f.p;
    loop {
        let a = FpPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = ((p as u128).pow(d as u32) - 1) / 2;
            a.powmod(e, f).sub(&FpPoly::one(p))
        };
        let g = b.gcd(f);
        if g.deg() > 0 && g.deg() < n {
            let h = f.divrem(&g).0;
            let mut out = fp_equal_degree(&g, d, rng);
            out.extend(fp_equal_degree(&h, d, rng));
            return out;
        }
    }
}

/// Full factorization over `F_p` into monic irreducibles with multiplicity,
/// sorted by (degree, coefficients).
pub fn factor_fp(f: &FpPoly) -> Result<Vec<(FpPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::DegenerateInput("polynomial vanishes modulo p".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(f.p ^ 0x5eed);
    let mut out = Vec::new();
    for (sq, m) in fp_squarefree(&f.monic()) {
        for (part, d) in fp_distinct_degree(&sq) {
            for g in fp_equal_degree(&part, d, &mut rng) {
                out.push((g, m));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Factors an integer polynomial (coefficients low to high) modulo `p`.
pub fn factor_mod_p(f: &[BigInt], p: u64) -> Result<Vec<(FpPoly, u32)>> {
    if !is_prime(p) {
        return Err(Error::DegenerateInput(format!("{p} is not prime")));
    }
    let red = FpPoly::from_signed(p, f);
    if red.is_zero() {
        return Err(Error::DegenerateInput(format!("polynomial vanishes modulo {p}")));
    }
    let lead = f.iter().rev().find(|c| !c.is_zero()).unwrap();
    if (lead % BigInt::from(p)).is_zero() {
        return Err(Error::DegenerateInput(format!("leading coefficient divisible by {p}")));
    }
    factor_fp(&red)
}

/// The smallest monic irreducible of degree `k` in the order of [`FpPoly`].
pub fn smallest_irreducible(p: u64, k: u32) -> FpPoly {
    let k = k as usize;
    let total = (p as u128).pow(k as u32);
    for idx in 0..total {
        let mut c = Vec::with_capacity(k + 1);
        let mut rest = idx;
        let mut digits = vec![0u64; k];
        for slot in (0..k).rev() {
            digits[slot] = (rest % p as u128) as u64;
            rest /= p as u128;
        }
        // digits[0] is the t^{k-1} coefficient
        for i in (0..k).rev() {
            c.push(digits[i]);
        }
        c.push(1);
        let g = FpPoly::new(p, c);
        if g.is_irreducible() {
            return g;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

// ---------------------------------------------------------------------------
// Finite fields F_p[t]/(g)
// ---------------------------------------------------------------------------

/// Element of a finite field: 0 is zero, `e + 1` encodes `gamma^e` for the
/// table's primitive element `gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(u32);

struct FqTables {
    p: u64,
    k: u32,
    q: u64,
    modulus: FpPoly,
    /// exponent -> packed coefficient index
    exp: Vec<u32>,
    /// packed coefficient index -> element code
    code: Vec<u32>,
    /// zech[e] = code of 1 + gamma^e
    zech: Vec<u32>,
    ints: Vec<FqElem>,
}

/// The field `F_p[t]/(g)`.
#[derive(Clone)]
pub struct Fq(Arc<FqTables>);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq({})", self.descriptor())
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.modulus == other.0.modulus
    }
}

impl Fq {
    /// `F_p`.
    pub fn prime(p: u64) -> Result<Fq> {
        Fq::with_modulus(FpPoly::new(p, vec![0, 1]))
    }

    /// `F_{p^k}` with the smallest monic irreducible modulus.
    pub fn new(p: u64, k: u32) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::DegenerateInput(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::DegenerateInput("extension degree must be positive".into()));
        }
        if k == 1 {
            return Fq::prime(p);
        }
        Fq::with_modulus(smallest_irreducible(p, k))
    }

    /// `F_p[t]/(g)` for a caller-supplied irreducible `g`.
    pub fn with_modulus(g: FpPoly) -> Result<Fq> {
        let p = g.p;
        if !is_prime(p) {
            return Err(Error::DegenerateInput(format!("{p} is not prime")));
        }
        let g = g.monic();
        let k = g.deg() as u32;
        if k == 0 || !g.is_irreducible() {
            return Err(Error::DegenerateInput(format!("{} is not irreducible over F_{p}", g)));
        }
        let q = (p as u128).pow(k);
        if q > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge(q.min(u64::MAX as u128) as u64));
        }
        let q = q as u64;
        let pack = |f: &FpPoly| -> u32 {
            f.c.iter().rev().fold(0u64, |acc, &a| acc * p + a) as u32
        };
        let unpack = |mut idx: u64| -> FpPoly {
            let mut c = Vec::with_capacity(k as usize);
            for _ in 0..k {
                c.push(idx % p);
                idx /= p;
            }
            FpPoly::new(p, c)
        };
        let order = q - 1;
        let factors = prime_factors(order);
        let one = FpPoly::one(p);
        let gamma = (1..q)
            .map(unpack)
            .find(|cand| factors.iter().all(|&r| cand.powmod((order / r) as u128, &g) != one))
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut code = vec![0u32; q as usize];
        let mut cur = one.rem(&g);
        for e in 0..order {
            let idx = pack(&cur);
            exp.push(idx);
            code[idx as usize] = (e + 1) as u32;
            cur = cur.mul(&gamma).rem(&g);
        }
        let zech = exp
            .iter()
            .map(|&idx| {
                let idx = idx as u64;
                let c0 = idx % p;
                let bumped = idx - c0 + (c0 + 1) % p;
                code[bumped as usize]
            })
            .collect();
        let ints = (0..p).map(|i| FqElem(code[i as usize])).collect();
        Ok(Fq(Arc::new(FqTables { p, k, q, modulus: g, exp, code, zech, ints })))
    }

    pub fn order(&self) -> u64 {
        self.0.q
    }
    pub fn degree(&self) -> u32 {
        self.0.k
    }
    pub fn modulus(&self) -> &FpPoly {
        &self.0.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.0.q as u32).map(FqElem)
    }

    /// Coefficients of the representative in `F_p[t]`, low to high, length `k`.
    pub fn to_coeffs(&self, a: &FqElem) -> Vec<u64> {
        let t = &self.0;
        let mut idx = if a.0 == 0 { 0 } else { t.exp[a.0 as usize - 1] as u64 };
        (0..t.k)
            .map(|_| {
                let d = idx % t.p;
                idx /= t.p;
                d
            })
            .collect()
    }

    /// Element with the given representative coefficients (low to high).
    pub fn from_coeffs(&self, c: &[u64]) -> FqElem {
        let t = &self.0;
        let red = FpPoly::new(t.p, c.to_vec()).rem(&t.modulus);
        let idx = red.c.iter().rev().fold(0u64, |acc, &a| acc * t.p + a);
        FqElem(t.code[idx as usize])
    }

    /// Image of `t`.
    pub fn gen(&self) -> FqElem {
        self.from_coeffs(&[0, 1])
    }

    /// Whether `a` lies in the prime field.
    pub fn in_prime_field(&self, a: &FqElem) -> bool {
        self.to_coeffs(a).iter().skip(1).all(|&c| c == 0)
    }

    /// A root of `g` (over `F_p`) in this field, by exhaustive search.
    pub fn find_root(&self, g: &FpPoly) -> Option<FqElem> {
        self.elements().find(|x| {
            let v = g
                .c
                .iter()
                .rev()
                .fold(self.zero(), |acc, &c| self.add(&self.mul(&acc, x), &self.from_i64(c as i64)));
            self.is_zero(&v)
        })
    }

    /// Embeds `self` into `big`, which must contain a root of the modulus.
    pub fn embedding_into(&self, big: &Fq) -> Result<Vec<FqElem>> {
        if big.0.p != self.0.p {
            return Err(Error::Unsupported("embedding between different characteristics".into()));
        }
        let r = big
            .find_root(&self.0.modulus)
            .ok_or_else(|| Error::Unsupported("target does not contain the modulus".into()))?;
        Ok(self
            .elements()
            .map(|a| {
                let c = self.to_coeffs(&a);
                c.iter().rev().fold(big.zero(), |acc, &ci| big.add(&big.mul(&acc, &r), &big.from_i64(ci as i64)))
            })
            .collect())
    }
}

impl Ring for Fq {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        FqElem(0)
    }
    fn one(&self) -> FqElem {
        FqElem(1)
    }
    fn from_i64(&self, n: i64) -> FqElem {
        self.0.ints[n.rem_euclid(self.0.p as i64) as usize]
    }
    fn from_bigint(&self, n: &BigInt) -> FqElem {
        let r = n.mod_floor(&BigInt::from(self.0.p)).to_u64().unwrap();
        self.0.ints[r as usize]
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        if a.0 == 0 {
            return *b;
        }
        if b.0 == 0 {
            return *a;
        }
        let order = self.0.q - 1;
        let (ea, eb) = (a.0 as u64 - 1, b.0 as u64 - 1);
        let d = (eb + order - ea) % order;
        let z = self.0.zech[d as usize];
        if z == 0 {
            FqElem(0)
        } else {
            FqElem(((ea + z as u64 - 1) % order + 1) as u32)
        }
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        if a.0 == 0 || self.0.p == 2 {
            return *a;
        }
        let order = self.0.q - 1;
        FqElem(((a.0 as u64 - 1 + order / 2) % order + 1) as u32)
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem(0);
        }
        let order = self.0.q - 1;
        FqElem(((a.0 as u64 - 1 + b.0 as u64 - 1) % order + 1) as u32)
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        a.0 == 0
    }
    fn characteristic(&self) -> u64 {
        self.0.p
    }
    fn pow(&self, a: &FqElem, e: u64) -> FqElem {
        if e == 0 {
            return FqElem(1);
        }
        if a.0 == 0 {
            return FqElem(0);
        }
        let order = self.0.q - 1;
        FqElem((mulmod(a.0 as u64 - 1, e % order, order) + 1) as u32)
    }
    fn format_elem(&self, a: &FqElem) -> String {
        let c = self.to_coeffs(a);
        if self.0.k == 1 {
            return c[0].to_string();
        }
        FpPoly::new(self.0.p, c).format_var("t").replace('+', " + ")
    }
    fn is_compound(&self, a: &FqElem) -> bool {
        self.0.k > 1 && self.to_coeffs(a).iter().filter(|&&c| c != 0).count() > 1
    }
    fn descriptor(&self) -> RingSpec {
        RingSpec::Finite { p: self.0.p, k: self.0.k, modulus: Some(self.0.modulus.clone()) }
    }
    fn random_elem(&self, rng: &mut dyn RngCore) -> FqElem {
        FqElem(rng.gen_range(0..self.0.q) as u32)
    }
    fn generator(&self) -> Option<(&'static str, FqElem)> {
        (self.0.k > 1).then(|| ("t", self.gen()))
    }
    fn exact_div(&self, a: &FqElem, b: &FqElem) -> Option<FqElem> {
        self.div(a, b)
    }
}

impl Field for Fq {
    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if a.0 == 0 {
            return None;
        }
        let order = self.0.q - 1;
        Some(FqElem(((order - (a.0 as u64 - 1)) % order + 1) as u32))
    }
}

impl PerfectField for Fq {
    fn frobenius(&self, a: &FqElem) -> Result<FqElem> {
        Ok(self.pow(a, self.0.p))
    }
    fn pth_root(&self, a: &FqElem) -> Result<FqElem> {
        Ok(self.pow(a, self.0.p.pow(self.0.k - 1)))
    }
}

impl Sampling for Fq {
    type Big = Fq;
    fn sampler(&self) -> Sampler<Fq> {
        if self.order() >= 50 {
            return Sampler::new(self.clone(), |a: &FqElem| *a);
        }
        let big = Fq::new(self.0.p, 3 * self.0.k).expect("small extension fits the tables");
        let table = self.embedding_into(&big).expect("degree-3k field contains F_{p^k}");
        Sampler::new(big, move |a: &FqElem| table[a.0 as usize])
    }
}

// ---------------------------------------------------------------------------
// Z and Q
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn format_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn is_compound(&self, _: &BigInt) -> bool {
        false
    }
    fn descriptor(&self) -> RingSpec {
        RingSpec::Integers
    }
    fn random_elem(&self, rng: &mut dyn RngCore) -> BigInt {
        BigInt::from(rng.gen_range(-5i64..=5))
    }
    fn exact_div(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        (!b.is_zero() && (a % b).is_zero()).then(|| a / b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn format_elem(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    // `1/2*x` parses left to right as `(1/2)*x`
    fn is_compound(&self, _: &BigRational) -> bool {
        false
    }
    fn descriptor(&self) -> RingSpec {
        RingSpec::Rationals
    }
    fn random_elem(&self, rng: &mut dyn RngCore) -> BigRational {
        self.from_i64(rng.gen_range(-7i64..=7))
    }
    fn exact_div(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        (!b.is_zero()).then(|| a / b)
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
}

impl PerfectField for Rationals {
    fn frobenius(&self, _: &BigRational) -> Result<BigRational> {
        Err(Error::Unsupported("Frobenius in characteristic zero".into()))
    }
    fn pth_root(&self, _: &BigRational) -> Result<BigRational> {
        Err(Error::Unsupported("p-th roots in characteristic zero".into()))
    }
}

impl Sampling for Rationals {
    type Big = Rationals;
    fn sampler(&self) -> Sampler<Rationals> {
        Sampler::new(Rationals, |a: &BigRational| a.clone())
    }
}

// ---------------------------------------------------------------------------
// Number rings Z[a]/(f)
// ---------------------------------------------------------------------------

/// `Z[a]/(f)` for a monic integer polynomial `f` (coefficients low to high).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberRing(Arc<Vec<BigInt>>);

/// Representative of degree below `deg f`, stored with exactly `deg f` slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NrElem(pub Vec<BigInt>);

impl NumberRing {
    pub fn new(minpoly: Vec<BigInt>) -> Result<NumberRing> {
        let mut f = minpoly;
        while f.last().is_some_and(|c| c.is_zero()) {
            f.pop();
        }
        if f.len() < 2 || !f.last().unwrap().is_one() {
            return Err(Error::DegenerateInput("minimal polynomial must be monic of degree >= 1".into()));
        }
        Ok(NumberRing(Arc::new(f)))
    }

    /// `Z` presented as `Z[a]/(a)`.
    pub fn integers() -> NumberRing {
        NumberRing(Arc::new(vec![BigInt::zero(), BigInt::one()]))
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.0
    }
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn elem(&self, coeffs: &[i64]) -> NrElem {
        self.reduce_vec(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn reduce_vec(&self, mut c: Vec<BigInt>) -> NrElem {
        let n = self.degree();
        for i in (n..c.len()).rev() {
            let lead = std::mem::take(&mut c[i]);
            if lead.is_zero() {
                continue;
            }
            for j in 0..n {
                let t = &lead * &self.0[j];
                c[i - n + j] -= t;
            }
        }
        c.resize(n, BigInt::zero());
        NrElem(c)
    }

    /// Ring map to `F_p[t]/(g)` sending `a` to `t`; `field` must have modulus `g`.
    pub fn reduce(&self, c: &NrElem, field: &Fq) -> FqElem {
        let p = BigInt::from(field.characteristic());
        let coeffs: Vec<u64> = c.0.iter().map(|x| x.mod_floor(&p).to_u64().unwrap()).collect();
        field.from_coeffs(&coeffs)
    }
}

/// Reduction of a number-ring element modulo the prime `(p, g(a))`.
pub fn reduce_coefficient(ring: &NumberRing, c: &NrElem, p: u64, g: &FpPoly) -> Result<FqElem> {
    let fbar = FpPoly::from_signed(p, ring.minpoly());
    if g.prime() != p || g.degree().unwrap_or(0) == 0 || !fbar.rem(g).is_zero() {
        return Err(Error::InconsistentPrime(format!("{} does not divide {} modulo {p}", g, fbar)));
    }
    let field = Fq::with_modulus(g.clone())?;
    Ok(ring.reduce(c, &field))
}

impl Ring for NumberRing {
    type Elem = NrElem;
    fn zero(&self) -> NrElem {
        NrElem(vec![BigInt::zero(); self.degree()])
    }
    fn one(&self) -> NrElem {
        self.from_i64(1)
    }
    fn from_i64(&self, n: i64) -> NrElem {
        self.from_bigint(&BigInt::from(n))
    }
    fn from_bigint(&self, n: &BigInt) -> NrElem {
        let mut c = vec![BigInt::zero(); self.degree()];
        c[0] = n.clone();
        NrElem(c)
    }
    fn add(&self, a: &NrElem, b: &NrElem) -> NrElem {
        NrElem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }
    fn neg(&self, a: &NrElem) -> NrElem {
        NrElem(a.0.iter().map(|x| -x).collect())
    }
    fn mul(&self, a: &NrElem, b: &NrElem) -> NrElem {
        let n = self.degree();
        let mut c = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        self.reduce_vec(c)
    }
    fn is_zero(&self, a: &NrElem) -> bool {
        a.0.iter().all(|x| x.is_zero())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn format_elem(&self, a: &NrElem) -> String {
        let terms: Vec<(usize, &BigInt)> = a.0.iter().enumerate().filter(|(_, c)| !c.is_zero()).rev().collect();
        if terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (i, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let var = match *i {
                0 => String::new(),
                1 => "a".into(),
                e => format!("a^{e}"),
            };
            if var.is_empty() {
                s.push_str(&mag.to_string());
            } else if mag.is_one() {
                s.push_str(&var);
            } else {
                s.push_str(&format!("{mag}*{var}"));
            }
        }
        s
    }
    fn is_compound(&self, a: &NrElem) -> bool {
        a.0.iter().skip(1).any(|c| !c.is_zero())
    }
    fn descriptor(&self) -> RingSpec {
        RingSpec::NumberRing { minpoly: self.0.to_vec() }
    }
    fn random_elem(&self, rng: &mut dyn RngCore) -> NrElem {
        NrElem((0..self.degree()).map(|_| BigInt::from(rng.gen_range(-4i64..=4))).collect())
    }
    fn generator(&self) -> Option<(&'static str, NrElem)> {
        let n = self.degree();
        let mut c = vec![BigInt::zero(); n.max(2)];
        c[1] = BigInt::one();
        Some(("a", self.reduce_vec(c)))
    }
}

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

/// Serialized ring names: `Fp:5`, `Fq:3^2:t^2+1`, `Z`, `Q`, `NR:a^2+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Finite { p: u64, k: u32, modulus: Option<FpPoly> },
    Integers,
    Rationals,
    NumberRing { minpoly: Vec<BigInt> },
}

impl RingSpec {
    pub fn characteristic(&self) -> u64 {
        match self {
            RingSpec::Finite { p, .. } => *p,
            _ => 0,
        }
    }

    pub fn finite_field(&self) -> Result<Fq> {
        match self {
            RingSpec::Finite { p, k, modulus: None } => Fq::new(*p, *k),
            RingSpec::Finite { modulus: Some(g), .. } => Fq::with_modulus(g.clone()),
            other => Err(Error::Unsupported(format!("{other} is not a finite field"))),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Finite { p, k: 1, .. } => write!(f, "Fp:{p}"),
            RingSpec::Finite { p, k, modulus } => {
                let g = modulus.clone().unwrap_or_else(|| smallest_irreducible(*p, *k));
                write!(f, "Fq:{p}^{k}:{}", g.format_var("t"))
            }
            RingSpec::Integers => f.write_str("Z"),
            RingSpec::Rationals => f.write_str("Q"),
            RingSpec::NumberRing { minpoly } => write!(f, "NR:{}", format_int_poly(minpoly, "a")),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<RingSpec> {
        let bad = |m: &str| Error::Parse { line: 1, col: 1, msg: format!("field descriptor `{s}`: {m}") };
        let s = s.trim();
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["Z"] => Ok(RingSpec::Integers),
            ["Q"] => Ok(RingSpec::Rationals),
            ["Fp", p] => {
                let p: u64 = p.trim().parse().map_err(|_| bad("bad prime"))?;
                if !is_prime(p) {
                    return Err(bad("not prime"));
                }
                Ok(RingSpec::Finite { p, k: 1, modulus: None })
            }
            ["Fq", pk, rest @ ..] => {
                let (p, k) = match pk.split_once('^') {
                    Some((p, k)) => (p, k),
                    None => (*pk, "1"),
                };
                let p: u64 = p.trim().parse().map_err(|_| bad("bad prime"))?;
                let k: u32 = k.trim().parse().map_err(|_| bad("bad degree"))?;
                if !is_prime(p) || k == 0 {
                    return Err(bad("not a prime power"));
                }
                let modulus = match rest {
                    [] => None,
                    [g] => {
                        let c = parse_int_poly(g, "t").map_err(|m| bad(&m))?;
                        let g = FpPoly::from_signed(p, &c);
                        if g.degree() != Some(k as usize) || !g.is_irreducible() {
                            return Err(bad("modulus must be irreducible of the stated degree"));
                        }
                        Some(g.monic())
                    }
                    _ => return Err(bad("too many fields")),
                };
                Ok(RingSpec::Finite { p, k, modulus })
            }
            ["NR", f] => {
                let c = parse_int_poly(f, "a").map_err(|m| bad(&m))?;
                NumberRing::new(c.clone()).map_err(|_| bad("minimal polynomial must be monic"))?;
                Ok(RingSpec::NumberRing { minpoly: c })
            }
            _ => Err(bad("unknown kind")),
        }
    }
}

/// Parses `3*t^2 - t + 1` style integer polynomials (low to high output).
pub fn parse_int_poly(s: &str, var: &str) -> std::result::Result<Vec<BigInt>, String> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in cleaned.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, term.strip_prefix('+').unwrap_or(&term)),
        };
        let (coef, power) = match body.find(var) {
            None => (body.to_string(), 0usize),
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                let rest = &body[pos + var.len()..];
                let e = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').and_then(|e| e.parse().ok()).ok_or(format!("bad exponent in `{term}`"))?
                };
                (if c.is_empty() { "1".into() } else { c.to_string() }, e)
            }
        };
        let c: BigInt = coef.parse().map_err(|_| format!("bad coefficient in `{term}`"))?;
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigInt::zero());
        }
        coeffs[power] += c * sign;
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
        coeffs.pop();
    }
    Ok(coeffs)
}

pub fn format_int_poly(c: &[BigInt], var: &str) -> String {
    let mut s = String::new();
    for (i, a) in c.iter().enumerate().rev() {
        if a.is_zero() {
            continue;
        }
        if a.is_negative() {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        let m = a.abs();
        match i {
            0 => s.push_str(&m.to_string()),
            _ => {
                if !m.is_one() {
                    s.push_str(&format!("{m}*"));
                }
                s.push_str(var);
                if i > 1 {
                    s.push_str(&format!("^{i}"));
                }
            }
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn frobenius_examples() {
        let f5 = Fq::prime(5).unwrap();
        assert_eq!(f5.frobenius(&f5.from_i64(2)).unwrap(), f5.from_i64(2));
        let f9 = Fq::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &FpPoly::new(3, vec![1, 0, 1]));
        let t = f9.gen();
        assert_eq!(f9.frobenius(&t).unwrap(), f9.mul(&f9.from_i64(2), &t));
        assert_eq!(f9.frobenius(&f9.zero()).unwrap(), f9.zero());
        assert_eq!(f9.pth_root(&f9.mul(&f9.from_i64(2), &t)).unwrap(), t);
    }

    #[test]
    fn roots_and_frobenius_are_inverse() {
        for (p, k) in [(3, 2), (5, 2), (3, 3)] {
            let f = Fq::new(p, k).unwrap();
            for a in f.elements() {
                assert_eq!(f.pth_root(&f.frobenius(&a).unwrap()).unwrap(), a);
                assert_eq!(f.frobenius(&f.pth_root(&a).unwrap()).unwrap(), a);
            }
        }
    }

    #[test]
    fn table_arithmetic_matches_polynomial_arithmetic() {
        let f = Fq::new(5, 2).unwrap();
        let g = f.modulus().clone();
        for a in f.elements() {
            for b in f.elements() {
                let pa = FpPoly::new(5, f.to_coeffs(&a));
                let pb = FpPoly::new(5, f.to_coeffs(&b));
                assert_eq!(f.from_coeffs(&pa.add(&pb).c), f.add(&a, &b));
                assert_eq!(f.from_coeffs(&pa.mul(&pb).rem(&g).c), f.mul(&a, &b));
            }
            if !f.is_zero(&a) {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            }
            assert!(f.is_zero(&f.add(&a, &f.neg(&a))));
        }
    }

    #[test]
    fn factor_examples() {
        let f = bi(&[1, 0, 1]);
        let r5 = factor_mod_p(&f, 5).unwrap();
        assert_eq!(r5, vec![(FpPoly::new(5, vec![2, 1]), 1), (FpPoly::new(5, vec![3, 1]), 1)]);
        let r3 = factor_mod_p(&f, 3).unwrap();
        assert_eq!(r3, vec![(FpPoly::new(3, vec![1, 0, 1]), 1)]);
        let r2 = factor_mod_p(&f, 2).unwrap();
        assert_eq!(r2, vec![(FpPoly::new(2, vec![1, 1]), 2)]);
        assert!(factor_mod_p(&bi(&[5, 10]), 5).is_err());
    }

    #[test]
    fn factors_multiply_back() {
        // (t^2+1)(t^2+t+2)(t+1)^3 over F_3, a product of two quadratics and a cube
        let p = 3;
        let f = FpPoly::new(p, vec![1, 0, 1])
            .mul(&FpPoly::new(p, vec![2, 1, 1]))
            .mul(&FpPoly::new(p, vec![1, 1]).mul(&FpPoly::new(p, vec![1, 1])).mul(&FpPoly::new(p, vec![1, 1])));
        let fac = factor_fp(&f).unwrap();
        let mut prod = FpPoly::one(p);
        for (g, m) in &fac {
            assert!(g.is_irreducible());
            for _ in 0..*m {
                prod = prod.mul(g);
            }
        }
        assert_eq!(prod, f.monic());
    }

    #[test]
    fn reduce_coefficient_examples() {
        let r = NumberRing::new(bi(&[1, 0, 1])).unwrap();
        let (_, a) = r.generator().unwrap();
        let g5 = FpPoly::new(5, vec![2, 1]);
        let f5 = Fq::with_modulus(g5.clone()).unwrap();
        assert_eq!(reduce_coefficient(&r, &a, 5, &g5).unwrap(), f5.from_i64(3));
        let g7 = FpPoly::new(7, vec![1, 0, 1]);
        let f49 = Fq::with_modulus(g7.clone()).unwrap();
        assert_eq!(reduce_coefficient(&r, &a, 7, &g7).unwrap(), f49.gen());
        let g2 = FpPoly::new(2, vec![1, 1]);
        let f2 = Fq::prime(2).unwrap();
        assert_eq!(reduce_coefficient(&r, &a, 2, &g2).unwrap(), f2.one());
        assert!(reduce_coefficient(&r, &a, 5, &FpPoly::new(5, vec![1, 1])).is_err());
    }

    #[test]
    fn descriptors_round_trip() {
        for s in ["Fp:5", "Fq:3^2:t^2+1", "Z", "Q", "NR:a^2+1", "NR:a^2-2"] {
            let d: RingSpec = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("Fq:3^2:t^2+2*t".parse::<RingSpec>().is_err());
        assert_eq!("Fq:5^2".parse::<RingSpec>().unwrap().to_string(), "Fq:5^2:t^2+2");
    }

    #[test]
    fn number_ring_arithmetic() {
        let r = NumberRing::new(bi(&[1, 0, 1])).unwrap();
        let (_, a) = r.generator().unwrap();
        assert_eq!(r.mul(&a, &a), r.from_i64(-1));
        assert_eq!(r.format_elem(&r.add(&a, &r.from_i64(-2))), "a - 2");
    }
}
