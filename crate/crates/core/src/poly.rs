//! Sparse multivariate polynomials and rational functions.
//!
//! Terms live in a `BTreeMap` keyed by graded-lexicographic monomials, so the
//! leading term is the last entry. Greatest common divisors use the recursive
//! primitive remainder sequence, with a randomized specialization shortcut
//! that can only ever prove coprimality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{Field, PerfectField, Ring};

/// Exponent vector. Ordered by total degree, then lexicographically with the
/// first variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u32; 4]>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }
    pub fn new(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }
    pub fn var(n: usize, i: usize, e: u32) -> Self {
        let mut m = Monomial::one(n);
        m.0[i] = e;
        m
    }
    pub fn exps(&self) -> &[u32] {
        &self.0
    }
    pub fn nvars(&self) -> usize {
        self.0.len()
    }
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
    pub fn mul(&self, o: &Self) -> Self {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
    pub fn divides(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }
    /// `self / o` when exact.
    pub fn div(&self, o: &Self) -> Option<Self> {
        o.divides(self).then(|| Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect()))
    }
    pub fn gcd(&self, o: &Self) -> Self {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| *a.min(b)).collect())
    }
    pub fn with(&self, i: usize, e: u32) -> Self {
        let mut m = self.clone();
        m.0[i] = e;
        m
    }
    pub fn insert_var(&self, pos: usize, e: u32) -> Self {
        let mut m = self.clone();
        m.0.insert(pos, e);
        m
    }
    pub fn remove_var(&self, pos: usize) -> Self {
        let mut m = self.clone();
        m.0.remove(pos);
        m
    }
    /// Every monomial of total degree `d` in `n` variables, in increasing order.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<Monomial> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == n {
                prefix.push(d);
                out.push(Monomial::new(prefix));
                prefix.pop();
                return;
            }
            for e in 0..=d {
                prefix.push(e);
                rec(n, d - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out.sort();
        out
    }
}

/// Default variable names: `x, y, z` up to three variables, else `x0, x1, ...`.
pub fn default_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (0..n).map(|i| format!("x{i}")).collect()
    }
}

#[derive(Clone)]
pub struct MultiPoly<R: Ring> {
    ring: R,
    nvars: usize,
    terms: BTreeMap<Monomial, R::Elem>,
}

impl<R: Ring> PartialEq for MultiPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<R: Ring> Eq for MultiPoly<R> {}

impl<R: Ring> fmt::Debug for MultiPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&default_names(self.nvars)))
    }
}

impl<R: Ring> fmt::Display for MultiPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&default_names(self.nvars)))
    }
}

impl<R: Ring> MultiPoly<R> {
    pub fn zero(ring: &R, nvars: usize) -> Self {
        MultiPoly { ring: ring.clone(), nvars, terms: BTreeMap::new() }
    }
    pub fn one(ring: &R, nvars: usize) -> Self {
        Self::constant(ring, nvars, ring.one())
    }
    pub fn constant(ring: &R, nvars: usize, c: R::Elem) -> Self {
        let mut p = Self::zero(ring, nvars);
        if !ring.is_zero(&c) {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }
    pub fn from_int(ring: &R, nvars: usize, n: i64) -> Self {
        Self::constant(ring, nvars, ring.from_i64(n))
    }
    pub fn var(ring: &R, nvars: usize, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(nvars, i, 1), ring.one())
    }
    pub fn monomial(ring: &R, m: Monomial, c: R::Elem) -> Self {
        let mut p = Self::zero(ring, m.nvars());
        if !ring.is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }
    pub fn from_terms(ring: &R, nvars: usize, terms: impl IntoIterator<Item = (Monomial, R::Elem)>) -> Self {
        let mut p = Self::zero(ring, nvars);
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R::Elem)> {
        self.terms.iter()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }
    pub fn coeff(&self, m: &Monomial) -> R::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }
    pub fn constant_term(&self) -> R::Elem {
        self.coeff(&Monomial::one(self.nvars))
    }
    pub fn leading(&self) -> Option<(&Monomial, &R::Elem)> {
        self.terms.last_key_value()
    }
    pub fn leading_coeff(&self) -> R::Elem {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(|| self.ring.zero())
    }
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }
    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }
    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    fn add_term(&mut self, m: Monomial, c: R::Elem) {
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = self.ring.add(v, &c);
                if self.ring.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.nvars, o.nvars, "polynomials over different variable counts");
    }

    pub fn try_same_space(&self, o: &Self) -> Result<()> {
        if self.nvars != o.nvars {
            return Err(Error::DimensionMismatch { left: self.nvars, right: o.nvars });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let (big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        let mut r = big.clone();
        for (m, c) in &small.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }
    pub fn neg(&self) -> Self {
        MultiPoly {
            ring: self.ring.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), self.ring.neg(c))).collect(),
        }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), self.ring.neg(c));
        }
        r
    }
    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let mut r = Self::zero(&self.ring, self.nvars);
        if self.is_zero() || o.is_zero() {
            return r;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), self.ring.mul(c1, c2));
            }
        }
        r
    }
    pub fn scale(&self, c: &R::Elem) -> Self {
        if self.ring.is_zero(c) {
            return Self::zero(&self.ring, self.nvars);
        }
        let mut r = Self::zero(&self.ring, self.nvars);
        for (m, a) in &self.terms {
            r.add_term(m.clone(), self.ring.mul(a, c));
        }
        r
    }
    pub fn mul_monomial(&self, m: &Monomial, c: &R::Elem) -> Self {
        let mut r = Self::zero(&self.ring, self.nvars);
        for (k, a) in &self.terms {
            r.add_term(k.mul(m), self.ring.mul(a, c));
        }
        r
    }
    pub fn pow(&self, mut e: u64) -> Self {
        if self.is_monomial() {
            let (m, c) = self.leading().unwrap();
            let exps: Vec<u32> = m.0.iter().map(|&a| a * e as u32).collect();
            return Self::monomial(&self.ring, Monomial::new(&exps), self.ring.pow(c, e));
        }
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring, self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut r = Self::zero(&self.ring, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            r.add_term(m.with(i, e - 1), self.ring.mul(c, &self.ring.from_i64(e as i64)));
        }
        r
    }

    pub fn eval(&self, point: &[R::Elem]) -> R::Elem {
        assert_eq!(point.len(), self.nvars);
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = self.ring.mul(&t, &self.ring.pow(&point[i], e as u64));
                }
            }
            acc = self.ring.add(&acc, &t);
        }
        acc
    }

    /// Substitutes `x_i -> images[i]`; images share a variable count.
    pub fn compose(&self, images: &[MultiPoly<R>]) -> MultiPoly<R> {
        assert_eq!(images.len(), self.nvars);
        let target_n = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<MultiPoly<R>>> = images.iter().map(|p| vec![Self::one(&self.ring, target_n), p.clone()]).collect();
        let mut acc = Self::zero(&self.ring, target_n);
        for (m, c) in &self.terms {
            let mut t = Self::constant(&self.ring, target_n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][e as usize]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn map_ring<S: Ring>(&self, target: &S, f: impl Fn(&R::Elem) -> S::Elem) -> MultiPoly<S> {
        let mut r = MultiPoly::zero(target, self.nvars);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), f(c));
        }
        r
    }

    /// Maps every coefficient through `f` and every monomial through `g`.
    pub fn map_terms(&self, nvars: usize, g: impl Fn(&Monomial) -> Monomial) -> MultiPoly<R> {
        let mut r = Self::zero(&self.ring, nvars);
        for (m, c) in &self.terms {
            r.add_term(g(m), c.clone());
        }
        r
    }

    /// Sets variable `j` to 1 and drops it.
    pub fn dehomogenize(&self, j: usize) -> MultiPoly<R> {
        self.map_terms(self.nvars - 1, |m| m.remove_var(j))
    }

    /// Inserts a new variable at position `j` and homogenizes with it.
    pub fn homogenize(&self, j: usize) -> MultiPoly<R> {
        let d = self.total_degree().unwrap_or(0);
        self.map_terms(self.nvars + 1, |m| m.insert_var(j, d - m.degree()))
    }

    /// Inserts an unused variable at position `j`.
    pub fn insert_var(&self, j: usize) -> MultiPoly<R> {
        self.map_terms(self.nvars + 1, |m| m.insert_var(j, 0))
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.nvars),
            Some(first) => it.fold(first.clone(), |g, m| g.gcd(m)),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<MultiPoly<R>> {
        let mut r = Self::zero(&self.ring, self.nvars);
        for (k, c) in &self.terms {
            r.terms.insert(k.div(m)?, c.clone());
        }
        Some(r)
    }

    /// Coefficients with respect to variable `v`, keyed by exponent.
    pub fn coefficients_in(&self, v: usize) -> BTreeMap<u32, MultiPoly<R>> {
        let mut out: BTreeMap<u32, MultiPoly<R>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[v];
            out.entry(e)
                .or_insert_with(|| Self::zero(&self.ring, self.nvars))
                .add_term(m.with(v, 0), c.clone());
        }
        out
    }

    pub fn leading_coeff_in(&self, v: usize) -> MultiPoly<R> {
        let d = self.degree_in(v);
        let mut r = Self::zero(&self.ring, self.nvars);
        for (m, c) in &self.terms {
            if m.0[v] == d {
                r.add_term(m.with(v, 0), c.clone());
            }
        }
        r
    }

    /// Canonical text: terms in descending graded-lex order.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut text = self.ring.format_elem(c);
            let compound = self.ring.is_compound(c);
            let mut negative = false;
            if !compound {
                if let Some(rest) = text.strip_prefix('-') {
                    negative = true;
                    text = rest.to_string();
                }
            }
            if k == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let mono = format_monomial(m, names);
            if mono.is_empty() {
                if compound {
                    s.push_str(&format!("({text})"));
                } else {
                    s.push_str(&text);
                }
            } else if text == "1" {
                s.push_str(&mono);
            } else if compound {
                s.push_str(&format!("({text})*{mono}"));
            } else {
                s.push_str(&format!("{text}*{mono}"));
            }
        }
        s
    }
}

pub fn format_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

impl<R: Ring> Add for &MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn add(self, o: Self) -> MultiPoly<R> {
        MultiPoly::add(self, o)
    }
}
impl<R: Ring> Sub for &MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn sub(self, o: Self) -> MultiPoly<R> {
        MultiPoly::sub(self, o)
    }
}
impl<R: Ring> Mul for &MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn mul(self, o: Self) -> MultiPoly<R> {
        MultiPoly::mul(self, o)
    }
}
impl<R: Ring> Neg for &MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn neg(self) -> MultiPoly<R> {
        MultiPoly::neg(self)
    }
}

// ---------------------------------------------------------------------------
// Field operations
// ---------------------------------------------------------------------------

impl<F: Field> MultiPoly<F> {
    /// Scaled so that the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> MultiPoly<F> {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                if self.ring.is_one(c) {
                    self.clone()
                } else {
                    self.scale(&self.ring.inv(c).unwrap())
                }
            }
        }
    }

    /// `self / g` if `g` divides `self` exactly.
    pub fn div_exact(&self, g: &MultiPoly<F>) -> Option<MultiPoly<F>> {
        self.check(g);
        if g.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        if g.is_monomial() {
            let (m, c) = g.leading().unwrap();
            let ci = self.ring.inv(c).unwrap();
            return self.div_monomial(m).map(|q| q.scale(&ci));
        }
        for v in 0..self.nvars {
            if g.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        let (lm, lc) = g.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let lci = self.ring.inv(&lc).unwrap();
        let mut r = self.terms.clone();
        let mut q = MultiPoly::zero(&self.ring, self.nvars);
        while let Some((m, c)) = r.last_key_value() {
            let qm = m.div(&lm)?;
            let qc = self.ring.mul(c, &lci);
            for (gm, gc) in &g.terms {
                let key = gm.mul(&qm);
                let delta = self.ring.mul(&qc, gc);
                match r.get_mut(&key) {
                    Some(v) => {
                        let s = self.ring.sub(v, &delta);
                        if self.ring.is_zero(&s) {
                            r.remove(&key);
                        } else {
                            *v = s;
                        }
                    }
                    None => {
                        r.insert(key, self.ring.neg(&delta));
                    }
                }
            }
            q.terms.insert(qm, qc);
        }
        Some(q)
    }

    pub fn divides(&self, f: &MultiPoly<F>) -> bool {
        f.div_exact(self).is_some()
    }

    pub fn gcd(&self, o: &MultiPoly<F>) -> MultiPoly<F> {
        self.check(o);
        gcd_full(self, o)
    }

    pub fn try_gcd(&self, o: &MultiPoly<F>) -> Result<MultiPoly<F>> {
        self.try_same_space(o)?;
        Ok(gcd_full(self, o))
    }

    pub fn lcm(&self, o: &MultiPoly<F>) -> MultiPoly<F> {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.ring, self.nvars);
        }
        let g = self.gcd(o);
        self.div_exact(&g).unwrap().mul(o).monic()
    }

    /// gcd of the coefficients with respect to variable `v`.
    pub fn content_in(&self, v: usize) -> MultiPoly<F> {
        let mut g = Self::zero(&self.ring, self.nvars);
        for c in self.coefficients_in(v).into_values() {
            g = gcd_full(&g, &c);
            if g.is_constant() {
                break;
            }
        }
        g
    }

    pub fn primitive_in(&self, v: usize) -> MultiPoly<F> {
        let c = self.content_in(v);
        self.div_exact(&c).unwrap()
    }

    /// Largest `m` with `h^m | self`.
    pub fn multiplicity_along(&self, h: &MultiPoly<F>) -> Result<u32> {
        self.try_same_space(h)?;
        if self.is_zero() {
            return Err(Error::InfiniteMultiplicity);
        }
        if h.is_constant() {
            return Err(Error::DegenerateInput(format!("{h} is a unit")));
        }
        let mut m = 0;
        let mut f = self.clone();
        while let Some(q) = f.div_exact(h) {
            m += 1;
            f = q;
        }
        Ok(m)
    }

    /// The gcd of `self` with all its partial derivatives.
    fn gcd_with_partials(&self) -> MultiPoly<F> {
        let mut g = self.clone();
        for v in 0..self.nvars {
            let d = self.derivative(v);
            if d.is_zero() {
                continue;
            }
            g = gcd_full(&g, &d);
            if g.is_constant() {
                break;
            }
        }
        g
    }
}

impl<F: PerfectField> MultiPoly<F> {
    /// `g` with `g^p = self`.
    pub fn pth_root(&self) -> Result<MultiPoly<F>> {
        let p = self.ring.characteristic();
        if p == 0 {
            return Err(Error::Unsupported("p-th roots in characteristic zero".into()));
        }
        let mut r = Self::zero(&self.ring, self.nvars);
        for (m, c) in &self.terms {
            if m.0.iter().any(|&e| !(e as u64).is_multiple_of(p)) {
                return Err(Error::NotPthPower(self.to_string()));
            }
            let exps: Vec<u32> = m.0.iter().map(|&e| (e as u64 / p) as u32).collect();
            r.terms.insert(Monomial::new(&exps), self.ring.pth_root(c)?);
        }
        Ok(r)
    }

    /// `self = unit * prod g_i^{m_i}` with pairwise coprime squarefree monic
    /// `g_i`, sorted by multiplicity.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(MultiPoly<F>, u32)>> {
        if self.is_zero() {
            return Err(Error::DegenerateInput("squarefree decomposition of 0".into()));
        }
        let mut acc: BTreeMap<u32, MultiPoly<F>> = BTreeMap::new();
        sqf_into(&self.monic(), 1, &mut acc)?;
        Ok(acc.into_iter().filter(|(_, g)| !g.is_constant()).map(|(m, g)| (g, m)).collect())
    }
}

fn sqf_into<F: PerfectField>(f: &MultiPoly<F>, scale: u32, acc: &mut BTreeMap<u32, MultiPoly<F>>) -> Result<()> {
    if f.is_constant() {
        return Ok(());
    }
    let p = f.ring.characteristic();
    let push = |g: MultiPoly<F>, m: u32, acc: &mut BTreeMap<u32, MultiPoly<F>>| {
        let e = acc.entry(m).or_insert_with(|| MultiPoly::one(&g.ring, g.nvars));
        *e = e.mul(&g).monic();
    };
    let all_zero = (0..f.nvars).all(|v| f.derivative(v).is_zero());
    if all_zero {
        return sqf_into(&f.pth_root()?, scale * p as u32, acc);
    }
    let mut c = f.gcd_with_partials().monic();
    let mut w = f.div_exact(&c).unwrap().monic();
    let mut i = 1u32;
    while !w.is_constant() {
        let y = gcd_full(&w, &c);
        let z = w.div_exact(&y).unwrap();
        if !z.is_constant() {
            push(z.monic(), i * scale, acc);
        }
        c = c.div_exact(&y).unwrap();
        w = y;
        i += 1;
    }
    if !c.is_constant() {
        if p == 0 {
            return Err(Error::Internal("squarefree remainder in characteristic zero".into()));
        }
        sqf_into(&c.monic().pth_root()?, scale * p as u32, acc)?;
    }
    Ok(())
}

fn gcd_full<F: Field>(a: &MultiPoly<F>, b: &MultiPoly<F>) -> MultiPoly<F> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let n = a.nvars;
    let ring = a.ring.clone();
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(&ring, n);
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a1 = a.div_monomial(&ma).unwrap();
    let b1 = b.div_monomial(&mb).unwrap();
    let core = if a1.is_constant() || b1.is_constant() {
        MultiPoly::one(&ring, n)
    } else {
        gcd_core(&a1, &b1)
    };
    core.mul_monomial(&mg, &ring.one()).monic()
}

fn gcd_core<F: Field>(a: &MultiPoly<F>, b: &MultiPoly<F>) -> MultiPoly<F> {
    let n = a.nvars;
    let ring = a.ring.clone();
    let (da, db) = (a.total_degree().unwrap(), b.total_degree().unwrap());
    if db <= da {
        if b.divides(a) {
            return b.monic();
        }
    } else if a.divides(b) {
        return a.monic();
    }
    let common: Vec<usize> = (0..n).filter(|&v| a.uses_var(v) && b.uses_var(v)).collect();
    if common.is_empty() {
        return MultiPoly::one(&ring, n);
    }
    if let Some(v) = (0..n).find(|&v| a.uses_var(v) != b.uses_var(v)) {
        return if a.uses_var(v) {
            gcd_full(&a.content_in(v), b)
        } else {
            gcd_full(a, &b.content_in(v))
        };
    }
    if proven_coprime(a, b, &common) {
        return MultiPoly::one(&ring, n);
    }
    let v = *common
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .unwrap();
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd_full(&ca, &cb);
    let mut x = a.div_exact(&ca).unwrap();
    let mut y = b.div_exact(&cb).unwrap();
    if x.degree_in(v) < y.degree_in(v) {
        std::mem::swap(&mut x, &mut y);
    }
    let g = loop {
        let r = prem(&x, &y, v);
        if r.is_zero() {
            break y.primitive_in(v);
        }
        if r.degree_in(v) == 0 {
            break MultiPoly::one(&ring, n);
        }
        x = y;
        y = r.primitive_in(v);
    };
    c.mul(&g).monic()
}

/// Pseudo-remainder of `a` by `b` in variable `v`.
fn prem<F: Field>(a: &MultiPoly<F>, b: &MultiPoly<F>, v: usize) -> MultiPoly<F> {
    let db = b.degree_in(v);
    let lb = b.leading_coeff_in(v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.leading_coeff_in(v);
        let shift = Monomial::var(a.nvars, v, dr - db);
        r = lb.mul(&r).sub(&lr.mul(b).mul_monomial(&shift, &a.ring.one()));
    }
    r
}

/// True only when random specializations show that `a` and `b` share no
/// factor involving any of `vars`.
fn proven_coprime<F: Field>(a: &MultiPoly<F>, b: &MultiPoly<F>, vars: &[usize]) -> bool {
    let ring = &a.ring;
    let n = a.nvars;
    let mut rng = ChaCha8Rng::seed_from_u64(0x9cd);
    'var: for &v in vars {
        let la = a.leading_coeff_in(v);
        for _ in 0..3 {
            let point: Vec<F::Elem> = (0..n).map(|_| ring.random_elem(&mut rng)).collect();
            if ring.is_zero(&la.eval(&point)) {
                continue;
            }
            let ua = specialize(a, v, &point);
            let ub = specialize(b, v, &point);
            if uni_gcd(ring, ua, ub).len() == 1 {
                continue 'var;
            }
        }
        return false;
    }
    true
}

fn specialize<F: Field>(a: &MultiPoly<F>, v: usize, point: &[F::Elem]) -> Vec<F::Elem> {
    let ring = &a.ring;
    let mut out = vec![ring.zero(); a.degree_in(v) as usize + 1];
    for (m, c) in &a.terms {
        let mut t = c.clone();
        for (i, &e) in m.0.iter().enumerate() {
            if i != v && e > 0 {
                t = ring.mul(&t, &ring.pow(&point[i], e as u64));
            }
        }
        let slot = m.0[v] as usize;
        out[slot] = ring.add(&out[slot], &t);
    }
    trim(ring, &mut out);
    out
}

fn trim<F: Field>(ring: &F, c: &mut Vec<F::Elem>) {
    while c.last().is_some_and(|x| ring.is_zero(x)) {
        c.pop();
    }
}

/// Dense univariate gcd; returns a monic polynomial (empty only if both are zero).
fn uni_gcd<F: Field>(ring: &F, mut a: Vec<F::Elem>, mut b: Vec<F::Elem>) -> Vec<F::Elem> {
    trim(ring, &mut a);
    trim(ring, &mut b);
    while !b.is_empty() {
        let li = ring.inv(b.last().unwrap()).unwrap();
        while a.len() >= b.len() {
            let coef = ring.mul(a.last().unwrap(), &li);
            let off = a.len() - b.len();
            for (j, bj) in b.iter().enumerate() {
                a[off + j] = ring.sub(&a[off + j], &ring.mul(&coef, bj));
            }
            trim(ring, &mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(l) = a.last().cloned() {
        let li = ring.inv(&l).unwrap();
        for x in a.iter_mut() {
            *x = ring.mul(x, &li);
        }
    }
    a
}

// ---------------------------------------------------------------------------
// Rational functions
// ---------------------------------------------------------------------------

/// Reduced fraction with monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction<F: Field> {
    num: MultiPoly<F>,
    den: MultiPoly<F>,
}

impl<F: Field> fmt::Debug for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl<F: Field> RationalFunction<F> {
    pub fn new(num: MultiPoly<F>, den: MultiPoly<F>) -> Result<Self> {
        num.try_same_space(&den)?;
        if den.is_zero() {
            return Err(Error::DegenerateInput("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).unwrap();
        let den = den.div_exact(&g).unwrap();
        let lc = den.leading_coeff();
        let li = num.ring().inv(&lc).unwrap();
        Ok(RationalFunction { num: num.scale(&li), den: den.scale(&li) })
    }
    pub fn from_poly(p: MultiPoly<F>) -> Self {
        let den = MultiPoly::one(p.ring(), p.nvars());
        RationalFunction { num: p, den }
    }
    pub fn num(&self) -> &MultiPoly<F> {
        &self.num
    }
    pub fn den(&self) -> &MultiPoly<F> {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }
    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }
    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.den).sub(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }
    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }
    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DegenerateInput("division by zero".into()));
        }
        Self::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }
    pub fn derivative(&self, i: usize) -> Self {
        let n = self.num.derivative(i).mul(&self.den).sub(&self.num.mul(&self.den.derivative(i)));
        Self::new(n, self.den.mul(&self.den)).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;

    fn f(p: u64) -> Fq {
        Fq::prime(p).unwrap()
    }

    fn vars(r: &Fq, n: usize) -> Vec<MultiPoly<Fq>> {
        (0..n).map(|i| MultiPoly::var(r, n, i)).collect()
    }

    #[test]
    fn gcd_examples() {
        let r = f(7);
        let v = vars(&r, 2);
        let (x, y) = (&v[0], &v[1]);
        let a = &(x * x) - &(y * y);
        let b = &(&(x * x) + &(&MultiPoly::from_int(&r, 2, 2) * &(x * y))) + &(y * y);
        assert_eq!(a.gcd(&b), x + y);
        assert_eq!(x.gcd(y), MultiPoly::one(&r, 2));
        let g = MultiPoly::from_int(&r, 2, 3).mul(&a);
        assert_eq!(g.gcd(&MultiPoly::zero(&r, 2)), a.monic());
        assert!(x.try_gcd(&MultiPoly::var(&r, 3, 0)).is_err());
    }

    #[test]
    fn squarefree_examples() {
        let r3 = f(3);
        let v = vars(&r3, 2);
        let f1 = &v[0].pow(3) * &v[1];
        assert_eq!(f1.squarefree_decomposition().unwrap(), vec![(v[1].clone(), 1), (v[0].clone(), 3)]);
        let r5 = f(5);
        let w = vars(&r5, 2);
        let f2 = &w[0].pow(2) * &(&w[0] + &w[1]);
        assert_eq!(f2.squarefree_decomposition().unwrap(), vec![(&w[0] + &w[1], 1), (w[0].clone(), 2)]);
        assert_eq!((&w[0] + &w[1]).squarefree_decomposition().unwrap(), vec![(&w[0] + &w[1], 1)]);
        assert!(MultiPoly::zero(&r5, 2).squarefree_decomposition().is_err());
    }

    #[test]
    fn pth_root_examples() {
        let r = f(3);
        let v = vars(&r, 2);
        assert_eq!((&v[0].pow(3) + &v[1].pow(3)).pth_root().unwrap(), &v[0] + &v[1]);
        let r5 = f(5);
        assert_eq!(MultiPoly::var(&r5, 1, 0).pow(5).pth_root().unwrap(), MultiPoly::var(&r5, 1, 0));
        assert!(matches!(v[0].pow(2).pth_root(), Err(Error::NotPthPower(_))));
    }

    #[test]
    fn multiplicity_examples() {
        let r = f(5);
        let v = vars(&r, 3);
        let one = MultiPoly::one(&r, 3);
        let f1 = &v[0].pow(2) * &(&v[1] + &one);
        assert_eq!(f1.multiplicity_along(&v[0]).unwrap(), 2);
        assert_eq!((&v[0].pow(2) + &v[1].pow(2)).multiplicity_along(&v[0]).unwrap(), 0);
        assert_eq!((&(&v[0] * &v[1]) * &v[2]).pow(2).multiplicity_along(&v[1]).unwrap(), 2);
        assert!(matches!(MultiPoly::zero(&r, 3).multiplicity_along(&v[0]), Err(Error::InfiniteMultiplicity)));
        assert!(f1.multiplicity_along(&one).is_err());
    }

    #[test]
    fn mixed_char_p_shapes() {
        // x^3 (x+y)^2 (y+1)^6 over F_3: exercises both the Yun steps and the p-th root branch.
        let r = f(3);
        let v = vars(&r, 2);
        let one = MultiPoly::one(&r, 2);
        let a = &v[0] + &v[1];
        let b = &v[1] + &one;
        let poly = &(&v[0].pow(3) * &a.pow(2)) * &b.pow(6);
        let dec = poly.squarefree_decomposition().unwrap();
        assert_eq!(dec, vec![(a, 2), (v[0].clone(), 3), (b, 6)]);
    }

    #[test]
    fn rational_function_normalizes() {
        let r = f(5);
        let v = vars(&r, 2);
        let q = RationalFunction::new(&v[0] * &v[1], MultiPoly::from_int(&r, 2, 2).mul(&v[0])).unwrap();
        assert_eq!(q.den(), &MultiPoly::one(&r, 2));
        assert_eq!(q.num(), &v[1].scale(&r.from_i64(3)));
        let d = RationalFunction::new(MultiPoly::one(&r, 2), v[0].clone()).unwrap().derivative(0);
        assert_eq!(d.num(), &MultiPoly::from_int(&r, 2, -1));
    }

    #[test]
    fn printing_is_graded_lex() {
        let r = f(5);
        let v = vars(&r, 3);
        let p = &(&v[2] + &v[0].pow(2)) + &MultiPoly::from_int(&r, 3, 3).mul(&v[1]);
        assert_eq!(p.to_string(), "x^2 + 3*y + z");
    }
}
