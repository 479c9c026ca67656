//! Differential forms and derivations on a coordinate chart.
//!
//! A chart is just a variable count; names are supplied at print time. Basis
//! elements `dx_I` are bitmasks over `I`, oriented `dx_1 ^ ... ^ dx_n > 0`,
//! with contraction from the left.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Ring};
use crate::poly::{default_names, MultiPoly};

/// Strictly increasing index tuple, stored as a bitmask and ordered
/// lexicographically on the tuple.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Basis(pub u32);

impl Basis {
    pub fn from_indices(idx: &[usize]) -> Option<(Basis, i64)> {
        let mut mask = 0u32;
        let mut sign = 1i64;
        for &i in idx {
            let bit = 1u32 << i;
            if mask & bit != 0 {
                return None;
            }
            // each later index jumps over the already present larger ones
            if (mask >> i).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        Some((Basis(mask), sign))
    }
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 >> i & 1 == 1).collect()
    }
    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }
    /// Sign of `dx_self ^ dx_other`, or `None` when they overlap.
    fn wedge_sign(self, other: Basis) -> Option<i64> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inv = 0u32;
        for j in other.indices() {
            inv += (self.0 >> j).count_ones();
        }
        Some(if inv.is_multiple_of(2) { 1 } else { -1 })
    }
}

impl Ord for Basis {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl PartialOrd for Basis {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A homogeneous q-form with polynomial coefficients.
#[derive(Clone)]
pub struct DiffForm<R: Ring> {
    ring: R,
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Basis, MultiPoly<R>>,
}

impl<R: Ring> PartialEq for DiffForm<R> {
    fn eq(&self, o: &Self) -> bool {
        self.nvars == o.nvars && (self.degree == o.degree || (self.is_zero() && o.is_zero())) && self.terms == o.terms
    }
}

impl<R: Ring> Eq for DiffForm<R> {}

impl<R: Ring> fmt::Debug for DiffForm<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&default_names(self.nvars)))
    }
}

impl<R: Ring> fmt::Display for DiffForm<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&default_names(self.nvars)))
    }
}

fn sign_scale<R: Ring>(p: &MultiPoly<R>, s: i64) -> MultiPoly<R> {
    if s == 1 {
        p.clone()
    } else {
        p.neg()
    }
}

impl<R: Ring> DiffForm<R> {
    pub fn zero(ring: &R, nvars: usize, degree: usize) -> Self {
        DiffForm { ring: ring.clone(), nvars, degree, terms: BTreeMap::new() }
    }
    pub fn function(f: MultiPoly<R>) -> Self {
        let mut w = Self::zero(f.ring(), f.nvars(), 0);
        w.add_term(Basis(0), f);
        w
    }
    pub fn dx(ring: &R, nvars: usize, i: usize) -> Self {
        Self::term(&[i], MultiPoly::one(ring, nvars))
    }
    /// `f dx_{idx[0]} ^ dx_{idx[1]} ^ ...` in any index order.
    pub fn term(idx: &[usize], f: MultiPoly<R>) -> Self {
        let mut w = Self::zero(f.ring(), f.nvars(), idx.len());
        if let Some((b, s)) = Basis::from_indices(idx) {
            w.add_term(b, sign_scale(&f, s));
        }
        w
    }
    /// The 1-form `sum a_i dx_i`.
    pub fn one_form(coeffs: &[MultiPoly<R>]) -> Self {
        let first = &coeffs[0];
        let mut w = Self::zero(first.ring(), first.nvars(), 1);
        for (i, a) in coeffs.iter().enumerate() {
            w.add_term(Basis(1 << i), a.clone());
        }
        w
    }
    /// Differential of a function, `sum df/dx_i dx_i`.
    pub fn differential(f: &MultiPoly<R>) -> Self {
        Self::function(f.clone()).d()
    }

    fn add_term(&mut self, b: Basis, f: MultiPoly<R>) {
        if f.is_zero() {
            return;
        }
        match self.terms.remove(&b) {
            Some(g) => {
                let s = g.add(&f);
                if !s.is_zero() {
                    self.terms.insert(b, s);
                }
            }
            None => {
                self.terms.insert(b, f);
            }
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &MultiPoly<R>)> {
        self.terms.iter()
    }
    pub fn coeffs(&self) -> impl Iterator<Item = &MultiPoly<R>> {
        self.terms.values()
    }
    /// Coefficient of `dx_idx` (with sign if `idx` is unsorted).
    pub fn coeff(&self, idx: &[usize]) -> MultiPoly<R> {
        match Basis::from_indices(idx) {
            Some((b, s)) => self
                .terms
                .get(&b)
                .map(|f| sign_scale(f, s))
                .unwrap_or_else(|| MultiPoly::zero(&self.ring, self.nvars)),
            None => MultiPoly::zero(&self.ring, self.nvars),
        }
    }
    /// Coefficients `a_i` of a 1-form.
    pub fn components(&self) -> Vec<MultiPoly<R>> {
        (0..self.nvars).map(|i| self.coeff(&[i])).collect()
    }
    /// The function of a 0-form, or the coefficient of `dx_1 ^ ... ^ dx_n`.
    pub fn scalar(&self) -> MultiPoly<R> {
        let b = Basis(((1u64 << self.degree) - 1) as u32);
        if self.degree == 0 || self.degree == self.nvars {
            let b = if self.degree == 0 { Basis(0) } else { b };
            self.terms.get(&b).cloned().unwrap_or_else(|| MultiPoly::zero(&self.ring, self.nvars))
        } else {
            panic!("scalar() on a {}-form in {} variables", self.degree, self.nvars)
        }
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.nvars != o.nvars {
            return Err(Error::DimensionMismatch { left: self.nvars, right: o.nvars });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o).expect("forms on different charts");
        assert!(self.degree == o.degree || self.is_zero() || o.is_zero(), "adding forms of different degree");
        let mut r = if self.is_zero() { o.clone() } else { self.clone() };
        if !self.is_zero() {
            for (b, f) in &o.terms {
                r.add_term(*b, f.clone());
            }
        }
        r
    }
    pub fn neg(&self) -> Self {
        self.map_coeffs(|f| f.neg())
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn scale(&self, f: &MultiPoly<R>) -> Self {
        self.map_coeffs(|g| g.mul(f))
    }
    pub fn scale_elem(&self, c: &R::Elem) -> Self {
        self.map_coeffs(|g| g.scale(c))
    }
    pub fn map_coeffs(&self, f: impl Fn(&MultiPoly<R>) -> MultiPoly<R>) -> Self {
        let mut r = Self::zero(&self.ring, self.nvars, self.degree);
        for (b, g) in &self.terms {
            r.add_term(*b, f(g));
        }
        r
    }
    pub fn map_ring<S: Ring>(&self, target: &S, f: impl Fn(&R::Elem) -> S::Elem) -> DiffForm<S> {
        let mut r = DiffForm::zero(target, self.nvars, self.degree);
        for (b, g) in &self.terms {
            r.add_term(*b, g.map_ring(target, &f));
        }
        r
    }

    pub fn try_wedge(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut r = Self::zero(&self.ring, self.nvars, self.degree + o.degree);
        if r.degree > self.nvars {
            return Ok(r);
        }
        for (b1, f1) in &self.terms {
            for (b2, f2) in &o.terms {
                if let Some(s) = b1.wedge_sign(*b2) {
                    r.add_term(Basis(b1.0 | b2.0), sign_scale(&f1.mul(f2), s));
                }
            }
        }
        Ok(r)
    }
    pub fn wedge(&self, o: &Self) -> Self {
        self.try_wedge(o).expect("forms on different charts")
    }

    pub fn d(&self) -> Self {
        let mut r = Self::zero(&self.ring, self.nvars, self.degree + 1);
        for (b, f) in &self.terms {
            for k in 0..self.nvars {
                if b.0 >> k & 1 == 1 {
                    continue;
                }
                let df = f.derivative(k);
                if df.is_zero() {
                    continue;
                }
                let s = if (b.0 & ((1 << k) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
                r.add_term(Basis(b.0 | 1 << k), sign_scale(&df, s));
            }
        }
        r
    }

    pub fn try_contract(&self, v: &VectorField<R>) -> Result<Self> {
        if v.nvars() != self.nvars {
            return Err(Error::DimensionMismatch { left: v.nvars(), right: self.nvars });
        }
        if self.degree == 0 {
            return Err(Error::DegenerateInput("contraction of a 0-form".into()));
        }
        let mut r = Self::zero(&self.ring, self.nvars, self.degree - 1);
        for (b, f) in &self.terms {
            for (pos, i) in b.indices().into_iter().enumerate() {
                let vi = &v.comps[i];
                if vi.is_zero() {
                    continue;
                }
                let s = if pos % 2 == 0 { 1 } else { -1 };
                r.add_term(Basis(b.0 & !(1 << i)), sign_scale(&f.mul(vi), s));
            }
        }
        Ok(r)
    }
    /// Interior product `i_v`.
    pub fn contract(&self, v: &VectorField<R>) -> Self {
        self.try_contract(v).expect("invalid contraction")
    }
    /// `i_v` of a 1-form as a function.
    pub fn pair(&self, v: &VectorField<R>) -> MultiPoly<R> {
        assert_eq!(self.degree, 1);
        self.contract(v).scalar()
    }
    /// Lie derivative via Cartan's formula `i_v d + d i_v`.
    pub fn lie_derivative(&self, v: &VectorField<R>) -> Self {
        let a = self.d().contract(v);
        if self.degree == 0 {
            return a;
        }
        a.add(&self.contract(v).d())
    }

    /// Substitutes `x_i -> images[i]`, `dx_i -> d images[i]`.
    pub fn pullback_polynomial(&self, images: &[MultiPoly<R>]) -> Self {
        assert_eq!(images.len(), self.nvars);
        let m = images[0].nvars();
        let difs: Vec<DiffForm<R>> = images.iter().map(Self::differential).collect();
        let mut r = Self::zero(&self.ring, m, self.degree);
        for (b, f) in &self.terms {
            let mut t = Self::function(f.compose(images));
            for i in b.indices() {
                t = t.wedge(&difs[i]);
            }
            r = r.add(&t);
        }
        r.degree = self.degree;
        r
    }

    pub fn max_coeff_degree(&self) -> Option<u32> {
        self.terms.values().filter_map(|f| f.total_degree()).max()
    }
    /// Every coefficient homogeneous of degree `d`.
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.values().all(|f| f.is_homogeneous() && f.total_degree() == Some(d))
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (b, f)) in self.terms.iter().enumerate() {
            let basis: Vec<String> = b.indices().iter().map(|&i| format!("d{}", names[i])).collect();
            let basis = basis.join(" /\\ ");
            let mut coeff = f.format_with(names);
            let mut negative = false;
            if f.num_terms() == 1 {
                if let Some(rest) = coeff.strip_prefix('-') {
                    negative = true;
                    coeff = rest.to_string();
                }
            }
            if k > 0 {
                out.push_str(if negative { " - " } else { " + " });
            } else if negative {
                out.push('-');
            }
            if basis.is_empty() {
                out.push_str(&if f.num_terms() > 1 && k > 0 { format!("({coeff})") } else { coeff });
            } else if coeff == "1" {
                out.push_str(&basis);
            } else if f.num_terms() == 1 {
                out.push_str(&format!("{coeff}*{basis}"));
            } else {
                out.push_str(&format!("({coeff})*{basis}"));
            }
        }
        out
    }
}

impl<F: Field> DiffForm<F> {
    /// Monic gcd of all coefficients (zero for the zero form).
    pub fn content(&self) -> MultiPoly<F> {
        let mut g = MultiPoly::zero(&self.ring, self.nvars);
        for f in self.terms.values() {
            g = g.gcd(f);
            if g.is_constant() && !g.is_zero() {
                break;
            }
        }
        g
    }
    pub fn div_exact(&self, g: &MultiPoly<F>) -> Option<Self> {
        let mut r = Self::zero(&self.ring, self.nvars, self.degree);
        for (b, f) in &self.terms {
            r.terms.insert(*b, f.div_exact(g)?);
        }
        Some(r)
    }
    pub fn divisible_by(&self, g: &MultiPoly<F>) -> bool {
        self.terms.values().all(|f| g.divides(f))
    }
    /// Divides out the content and normalizes the leading coefficient of the
    /// first basis term to 1. Returns the saturated form and the removed factor.
    pub fn saturate(&self) -> (Self, MultiPoly<F>) {
        if self.is_zero() {
            return (self.clone(), MultiPoly::zero(&self.ring, self.nvars));
        }
        let g = self.content();
        let q = self.div_exact(&g).unwrap();
        let lc = q.terms.values().next().unwrap().leading_coeff();
        let li = self.ring.inv(&lc).unwrap();
        (q.scale_elem(&li), g.scale(&lc))
    }
    /// Same form up to a nonzero scalar.
    pub fn proportional_to(&self, o: &Self) -> bool {
        if self.is_zero() || o.is_zero() {
            return self.is_zero() && o.is_zero();
        }
        let (a, b) = (self.terms.values().next().unwrap(), o.terms.values().next().unwrap());
        let c = self.ring.div(&b.leading_coeff(), &a.leading_coeff()).unwrap();
        self.scale_elem(&c) == *o
    }
    /// Substitutes `x_i -> num[i]/den`. Coefficients are homogenized against
    /// `den` with a common degree so the result has a single denominator.
    pub fn pullback_rational(&self, num: &[MultiPoly<F>], den: &MultiPoly<F>) -> RationalForm<F> {
        assert_eq!(num.len(), self.nvars);
        let m = den.nvars();
        let ring = &self.ring;
        let dq = DiffForm::differential(den);
        // d(P/Q) = (Q dP - P dQ) / Q^2
        let difs: Vec<DiffForm<F>> = num
            .iter()
            .map(|p| DiffForm::differential(p).scale(den).sub(&dq.scale(p)))
            .collect();
        let dmax = self.max_coeff_degree().unwrap_or(0);
        let mut qpow = vec![MultiPoly::one(ring, m)];
        for _ in 0..dmax {
            let next = qpow.last().unwrap().mul(den);
            qpow.push(next);
        }
        let mut total = DiffForm::zero(ring, m, self.degree);
        for (b, f) in &self.terms {
            let mut coeff = MultiPoly::zero(ring, m);
            for (mono, c) in f.terms() {
                let mut t = MultiPoly::constant(ring, m, c.clone());
                for (i, &e) in mono.exps().iter().enumerate() {
                    if e > 0 {
                        t = t.mul(&num[i].pow(e as u64));
                    }
                }
                coeff = coeff.add(&t.mul(&qpow[(dmax - mono.degree()) as usize]));
            }
            let mut t = DiffForm::function(coeff);
            for i in b.indices() {
                t = t.wedge(&difs[i]);
            }
            total = total.add(&t);
        }
        total.degree = self.degree;
        let den_total = den.pow((dmax as usize + 2 * self.degree) as u64);
        RationalForm::new(total, den_total).expect("nonzero denominator")
    }
}

/// A derivation `sum v_i d/dx_i` with polynomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField<R: Ring> {
    comps: Vec<MultiPoly<R>>,
}

impl<R: Ring> fmt::Debug for VectorField<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&default_names(self.nvars())))
    }
}

impl<R: Ring> fmt::Display for VectorField<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&default_names(self.nvars())))
    }
}

impl<R: Ring> VectorField<R> {
    pub fn new(comps: Vec<MultiPoly<R>>) -> Self {
        assert!(!comps.is_empty());
        let n = comps.len();
        assert!(comps.iter().all(|c| c.nvars() == n), "coefficient count must equal variable count");
        VectorField { comps }
    }
    pub fn zero(ring: &R, n: usize) -> Self {
        VectorField { comps: vec![MultiPoly::zero(ring, n); n] }
    }
    pub fn partial(ring: &R, n: usize, i: usize) -> Self {
        let mut v = Self::zero(ring, n);
        v.comps[i] = MultiPoly::one(ring, n);
        v
    }
    /// The Euler field `sum x_i d/dx_i`.
    pub fn radial(ring: &R, n: usize) -> Self {
        VectorField { comps: (0..n).map(|i| MultiPoly::var(ring, n, i)).collect() }
    }
    pub fn ring(&self) -> &R {
        self.comps[0].ring()
    }
    pub fn nvars(&self) -> usize {
        self.comps.len()
    }
    pub fn comps(&self) -> &[MultiPoly<R>] {
        &self.comps
    }
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }
    pub fn add(&self, o: &Self) -> Self {
        VectorField { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect() }
    }
    pub fn sub(&self, o: &Self) -> Self {
        VectorField { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.sub(b)).collect() }
    }
    pub fn scale(&self, f: &MultiPoly<R>) -> Self {
        VectorField { comps: self.comps.iter().map(|a| a.mul(f)).collect() }
    }
    pub fn scale_elem(&self, c: &R::Elem) -> Self {
        VectorField { comps: self.comps.iter().map(|a| a.scale(c)).collect() }
    }
    /// `v(f)`.
    pub fn apply(&self, f: &MultiPoly<R>) -> MultiPoly<R> {
        let mut acc = MultiPoly::zero(f.ring(), f.nvars());
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.derivative(i);
            if !d.is_zero() {
                acc = acc.add(&c.mul(&d));
            }
        }
        acc
    }
    /// `v` applied `k` times.
    pub fn apply_iter(&self, f: &MultiPoly<R>, k: u64) -> MultiPoly<R> {
        let mut g = f.clone();
        for _ in 0..k {
            if g.is_zero() {
                break;
            }
            g = self.apply(&g);
        }
        g
    }
    pub fn try_bracket(&self, o: &Self) -> Result<Self> {
        if self.nvars() != o.nvars() {
            return Err(Error::DimensionMismatch { left: self.nvars(), right: o.nvars() });
        }
        Ok(VectorField {
            comps: (0..self.nvars()).map(|i| self.apply(&o.comps[i]).sub(&o.apply(&self.comps[i]))).collect(),
        })
    }
    pub fn bracket(&self, o: &Self) -> Self {
        self.try_bracket(o).expect("fields on different charts")
    }
    /// The derivation `v^p`, by iterating `v` on each coordinate `p` times.
    pub fn pth_power(&self) -> Result<Self> {
        let p = self.ring().characteristic();
        if p == 0 {
            return Err(Error::Unsupported("p-th power of a derivation in characteristic zero".into()));
        }
        // v^p(x_i) = v^{p-1}(v_i)
        Ok(VectorField { comps: self.comps.iter().map(|c| self.apply_iter(c, p - 1)).collect() })
    }
    pub fn format_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|c| c.format_with(names))
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

/// A form `num / den` with one polynomial denominator shared by every
/// coefficient; reduced, with monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalForm<F: Field> {
    num: DiffForm<F>,
    den: MultiPoly<F>,
}

impl<F: Field> fmt::Debug for RationalForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl<F: Field> RationalForm<F> {
    pub fn new(num: DiffForm<F>, den: MultiPoly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DegenerateInput("zero denominator".into()));
        }
        if num.nvars() != den.nvars() {
            return Err(Error::DimensionMismatch { left: num.nvars(), right: den.nvars() });
        }
        if num.is_zero() {
            let one = MultiPoly::one(den.ring(), den.nvars());
            return Ok(RationalForm { num, den: one });
        }
        let g = num.content().gcd(&den);
        let num = num.div_exact(&g).unwrap();
        let den = den.div_exact(&g).unwrap();
        let li = den.ring().inv(&den.leading_coeff()).unwrap();
        Ok(RationalForm { num: num.scale_elem(&li), den: den.scale(&li) })
    }
    pub fn from_form(num: DiffForm<F>) -> Self {
        let den = MultiPoly::one(num.ring(), num.nvars());
        RationalForm { num, den }
    }
    pub fn num(&self) -> &DiffForm<F> {
        &self.num
    }
    pub fn den(&self) -> &MultiPoly<F> {
        &self.den
    }
    pub fn degree(&self) -> usize {
        self.num.degree()
    }
    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }
    /// `d(N/D) = (D dN - dD ^ N) / D^2`.
    pub fn d(&self) -> Self {
        let dn = self.num.d();
        let dd = DiffForm::differential(&self.den);
        let num = dn.scale(&self.den).sub(&dd.wedge(&self.num));
        Self::new(num, self.den.mul(&self.den)).unwrap()
    }
    pub fn add(&self, o: &Self) -> Self {
        let g = self.den.gcd(&o.den);
        let a = o.den.div_exact(&g).unwrap();
        let b = self.den.div_exact(&g).unwrap();
        Self::new(self.num.scale(&a).add(&o.num.scale(&b)), self.den.mul(&a)).unwrap()
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> Self {
        RationalForm { num: self.num.neg(), den: self.den.clone() }
    }
    pub fn wedge(&self, o: &Self) -> Self {
        Self::new(self.num.wedge(&o.num), self.den.mul(&o.den)).unwrap()
    }
    pub fn scale(&self, f: &MultiPoly<F>) -> Self {
        Self::new(self.num.scale(f), self.den.clone()).unwrap()
    }
    /// Multiplies by `1/g`.
    pub fn divide(&self, g: &MultiPoly<F>) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::DegenerateInput("division by zero".into()));
        }
        Self::new(self.num.clone(), self.den.mul(g))
    }
    pub fn contract(&self, v: &VectorField<F>) -> Self {
        Self::new(self.num.contract(v), self.den.clone()).unwrap()
    }
    /// Numerator with the denominator and any content cleared.
    pub fn cleared(&self) -> DiffForm<F> {
        self.num.saturate().0
    }
    pub fn format_with(&self, names: &[String]) -> String {
        if self.den.is_one_poly() {
            self.num.format_with(names)
        } else {
            format!("({}) / ({})", self.num.format_with(names), self.den.format_with(names))
        }
    }
}

impl<R: Ring> MultiPoly<R> {
    pub(crate) fn is_one_poly(&self) -> bool {
        self.is_constant() && self.ring().is_one(&self.constant_term())
    }
}

// ---------------------------------------------------------------------------
// Projective charts
// ---------------------------------------------------------------------------

/// Images `(num, den)` expressing chart-`i` coordinates of `P^n` in the
/// coordinates of chart `j`. Chart `k` uses the homogeneous coordinates other
/// than `x_k`, in order.
pub fn chart_change<F: Field>(ring: &F, n: usize, i: usize, j: usize) -> (Vec<MultiPoly<F>>, MultiPoly<F>) {
    // position of homogeneous coordinate k inside chart c
    let pos = |c: usize, k: usize| if k < c { k } else { k - 1 };
    let den = if i == j { MultiPoly::one(ring, n) } else { MultiPoly::var(ring, n, pos(j, i)) };
    let num = (0..=n)
        .filter(|&k| k != i)
        .map(|k| if k == j { MultiPoly::one(ring, n) } else { MultiPoly::var(ring, n, pos(j, k)) })
        .collect();
    (num, den)
}

/// Rewrites a form on chart `i` of `P^n` in the coordinates of chart `j`.
pub fn chart_transfer<F: Field>(w: &DiffForm<F>, i: usize, j: usize) -> RationalForm<F> {
    let n = w.nvars();
    if i == j {
        return RationalForm::from_form(w.clone());
    }
    let (num, den) = chart_change(w.ring(), n, i, j);
    w.pullback_rational(&num, &den)
}

pub fn chart_transfer_rational<F: Field>(w: &RationalForm<F>, i: usize, j: usize) -> RationalForm<F> {
    let n = w.nvars();
    if i == j {
        return w.clone();
    }
    let (num, den) = chart_change(w.num().ring(), n, i, j);
    let top = w.num().pullback_rational(&num, &den);
    let bottom = w.den().compose_rational(&num, &den);
    // top / (bottom.0 / bottom.1)
    RationalForm::new(top.num().scale(&bottom.1), top.den().mul(&bottom.0)).unwrap()
}

impl<F: Field> MultiPoly<F> {
    /// `f(num/den)` as a reduced pair `(numerator, denominator)`.
    pub fn compose_rational(&self, num: &[MultiPoly<F>], den: &MultiPoly<F>) -> (MultiPoly<F>, MultiPoly<F>) {
        let m = den.nvars();
        let ring = self.ring();
        let d = self.total_degree().unwrap_or(0);
        let mut acc = MultiPoly::zero(ring, m);
        for (mono, c) in self.terms() {
            let mut t = MultiPoly::constant(ring, m, c.clone());
            for (i, &e) in mono.exps().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&num[i].pow(e as u64));
                }
            }
            acc = acc.add(&t.mul(&den.pow((d - mono.degree()) as u64)));
        }
        let q = den.pow(d as u64);
        let g = acc.gcd(&q);
        if g.is_zero() {
            return (acc, MultiPoly::one(ring, m));
        }
        (acc.div_exact(&g).unwrap(), q.div_exact(&g).unwrap())
    }
}

/// Restriction of a homogeneous form on `P^n` to chart `j`: `x_j = 1`, `dx_j = 0`.
pub fn dehomogenize_form<R: Ring>(w: &DiffForm<R>, j: usize) -> DiffForm<R> {
    let n = w.nvars() - 1;
    let mut r = DiffForm::zero(w.ring(), n, w.degree());
    for (b, f) in w.terms() {
        if b.0 >> j & 1 == 1 {
            continue;
        }
        let lo = b.0 & ((1 << j) - 1);
        let hi = (b.0 >> (j + 1)) << j;
        r.add_term(Basis(lo | hi), f.dehomogenize(j));
    }
    r
}

/// The saturated homogeneous form on `P^n` whose restriction to chart `j`
/// is proportional to `w`.
pub fn projectivize<F: Field>(w: &DiffForm<F>, j: usize) -> DiffForm<F> {
    let n = w.nvars();
    let ring = w.ring();
    let num: Vec<MultiPoly<F>> = (0..=n).filter(|&k| k != j).map(|k| MultiPoly::var(ring, n + 1, k)).collect();
    let den = MultiPoly::var(ring, n + 1, j);
    w.pullback_rational(&num, &den).num().saturate().0
}
