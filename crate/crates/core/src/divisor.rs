//! Divisors as integer combinations of squarefree, pairwise coprime
//! polynomials. Components need not be irreducible; they are refined only by
//! gcds against each other or against caller-supplied candidates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, PerfectField};
use crate::poly::{default_names, MultiPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ambient {
    /// `A^n`.
    Affine(usize),
    /// `P^n`, with `n + 1` homogeneous coordinates.
    Projective(usize),
}

impl Ambient {
    pub fn dim(self) -> usize {
        match self {
            Ambient::Affine(n) | Ambient::Projective(n) => n,
        }
    }
    /// Variable count of the polynomial ring used to present it.
    pub fn nvars(self) -> usize {
        match self {
            Ambient::Affine(n) => n,
            Ambient::Projective(n) => n + 1,
        }
    }
    pub fn is_projective(self) -> bool {
        matches!(self, Ambient::Projective(_))
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Affine(n) => write!(f, "A{n}"),
            Ambient::Projective(n) => write!(f, "P{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component<F: Field> {
    pub poly: MultiPoly<F>,
    pub multiplicity: i64,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Divisor<F: Field> {
    ambient: Ambient,
    ring: F,
    components: Vec<Component<F>>,
}

impl<F: Field> fmt::Debug for Divisor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&default_names(self.ambient.nvars())))
    }
}

impl<F: Field> fmt::Display for Divisor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&default_names(self.ambient.nvars())))
    }
}

fn canonical_key<F: Field>(p: &MultiPoly<F>) -> (u32, String) {
    (p.total_degree().unwrap_or(0), p.to_string())
}

impl<F: Field> Divisor<F> {
    pub fn zero(ring: &F, ambient: Ambient) -> Self {
        Divisor { ambient, ring: ring.clone(), components: Vec::new() }
    }
    /// Builds and normalizes from `(squarefree polynomial, multiplicity)` pairs.
    pub fn from_components(ring: &F, ambient: Ambient, comps: impl IntoIterator<Item = (MultiPoly<F>, i64)>) -> Self {
        let mut d = Self::zero(ring, ambient);
        d.components = comps.into_iter().map(|(poly, multiplicity)| Component { poly, multiplicity }).collect();
        d.normalize();
        d
    }
    /// The single component `g` with multiplicity `m`.
    pub fn prime(ambient: Ambient, g: &MultiPoly<F>, m: i64) -> Self {
        Self::from_components(g.ring(), ambient, [(g.clone(), m)])
    }
    pub fn ambient(&self) -> Ambient {
        self.ambient
    }
    pub fn ring(&self) -> &F {
        &self.ring
    }
    pub fn components(&self) -> &[Component<F>] {
        &self.components
    }
    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }
    pub fn is_effective(&self) -> bool {
        self.components.iter().all(|c| c.multiplicity > 0)
    }
    /// All multiplicities equal to one.
    pub fn is_reduced(&self) -> bool {
        self.components.iter().all(|c| c.multiplicity == 1)
    }
    /// `sum m_i deg g_i`.
    pub fn degree(&self) -> i64 {
        self.components
            .iter()
            .map(|c| c.multiplicity * c.poly.total_degree().unwrap_or(0) as i64)
            .sum()
    }
    pub fn support(&self) -> Vec<MultiPoly<F>> {
        self.components.iter().map(|c| c.poly.clone()).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut d = self.clone();
        d.components.extend(o.components.iter().cloned());
        d.normalize();
        d
    }
    pub fn scale(&self, k: i64) -> Self {
        let mut d = self.clone();
        for c in &mut d.components {
            c.multiplicity *= k;
        }
        d.normalize();
        d
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }

    /// Multiplicity along a squarefree `h` all of whose factors lie in one
    /// component; `None` when `h` straddles components with different
    /// multiplicities.
    pub fn multiplicity_of(&self, h: &MultiPoly<F>) -> Option<i64> {
        let mut found: Option<i64> = None;
        let mut covered = MultiPoly::one(&self.ring, h.nvars());
        for c in &self.components {
            let g = c.poly.gcd(h);
            if g.is_constant() {
                continue;
            }
            if found.is_some_and(|m| m != c.multiplicity) {
                return None;
            }
            found = Some(c.multiplicity);
            covered = covered.mul(&g);
        }
        match found {
            None => Some(0),
            Some(m) if covered.monic() == h.monic() => Some(m),
            Some(_) => None,
        }
    }

    /// Splits components along each candidate.
    pub fn refine_by(&self, candidates: &[MultiPoly<F>]) -> Self {
        let mut comps = self.components.clone();
        for cand in candidates {
            if cand.is_constant() {
                continue;
            }
            let mut next = Vec::new();
            for c in comps {
                let g = c.poly.gcd(cand);
                if g.is_constant() || g == c.poly.monic() {
                    next.push(c);
                } else {
                    let rest = c.poly.div_exact(&g).unwrap().monic();
                    next.push(Component { poly: g, multiplicity: c.multiplicity });
                    next.push(Component { poly: rest, multiplicity: c.multiplicity });
                }
            }
            comps = next;
        }
        let mut d = self.clone();
        d.components = comps;
        d.normalize();
        d
    }

    /// `self - other` has every multiplicity divisible by `p`.
    pub fn congruent_mod(&self, other: &Self, p: u64) -> bool {
        self.sub(other).components.iter().all(|c| c.multiplicity.rem_euclid(p as i64) == 0)
    }

    /// Coprime base of the components: makes them pairwise coprime, monic,
    /// drops zero multiplicities and sorts deterministically.
    fn normalize(&mut self) {
        let mut comps: Vec<Component<F>> = self
            .components
            .drain(..)
            .filter(|c| c.multiplicity != 0 && !c.poly.is_constant())
            .map(|c| Component { poly: c.poly.monic(), multiplicity: c.multiplicity })
            .collect();
        'outer: loop {
            for i in 0..comps.len() {
                for j in i + 1..comps.len() {
                    if comps[i].poly == comps[j].poly {
                        let m = comps.remove(j).multiplicity;
                        comps[i].multiplicity += m;
                        continue 'outer;
                    }
                    let h = comps[i].poly.gcd(&comps[j].poly);
                    if h.is_constant() {
                        continue;
                    }
                    let (mi, mj) = (comps[i].multiplicity, comps[j].multiplicity);
                    let a = comps[i].poly.div_exact(&h).unwrap().monic();
                    let b = comps[j].poly.div_exact(&h).unwrap().monic();
                    let mut fresh = vec![Component { poly: h, multiplicity: mi + mj }];
                    if !a.is_constant() {
                        fresh.push(Component { poly: a, multiplicity: mi });
                    }
                    if !b.is_constant() {
                        fresh.push(Component { poly: b, multiplicity: mj });
                    }
                    comps.remove(j);
                    comps.remove(i);
                    comps.extend(fresh);
                    continue 'outer;
                }
            }
            break;
        }
        comps.retain(|c| c.multiplicity != 0);
        comps.sort_by_key(|c| canonical_key(&c.poly));
        self.components = comps;
    }

    pub fn map_components(&self, ambient: Ambient, f: impl Fn(&MultiPoly<F>) -> MultiPoly<F>) -> Self {
        Self::from_components(&self.ring, ambient, self.components.iter().map(|c| (f(&c.poly), c.multiplicity)))
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                let p = c.poly.format_with(names);
                if c.multiplicity == 1 {
                    format!("{{{p}}}")
                } else {
                    format!("{}*{{{p}}}", c.multiplicity)
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<F: PerfectField> Divisor<F> {
    /// The divisor of a nonzero polynomial, with coordinate hyperplanes split off.
    pub fn of_poly(ambient: Ambient, f: &MultiPoly<F>) -> Result<Self> {
        let dec = f.squarefree_decomposition()?;
        let d = Self::from_components(f.ring(), ambient, dec.into_iter().map(|(g, m)| (g, m as i64)));
        let coords: Vec<MultiPoly<F>> = (0..f.nvars()).map(|i| MultiPoly::var(f.ring(), f.nvars(), i)).collect();
        Ok(d.refine_by(&coords))
    }

    /// Assembles a divisor on `P^n` from its restrictions to the `n + 1`
    /// standard charts. Each component's multiplicity is read off on every
    /// chart where it is visible; any disagreement is an error.
    pub fn assemble_projective(charts: &[Divisor<F>]) -> Result<Self> {
        let n = charts.len() - 1;
        let ring = charts[0].ring.clone();
        let amb = Ambient::Projective(n);
        let homog: Vec<Divisor<F>> = charts
            .iter()
            .enumerate()
            .map(|(j, d)| {
                debug_assert_eq!(d.ambient, Ambient::Affine(n));
                Divisor {
                    ambient: amb,
                    ring: ring.clone(),
                    components: d
                        .components
                        .iter()
                        .map(|c| Component { poly: c.poly.homogenize(j).monic(), multiplicity: c.multiplicity })
                        .collect(),
                }
            })
            .collect();
        let hyperplanes: Vec<MultiPoly<F>> = (0..=n).map(|j| MultiPoly::var(&ring, n + 1, j)).collect();
        // coprime base of every component seen anywhere
        let mut base = Divisor::zero(&ring, amb);
        base.components = homog
            .iter()
            .flat_map(|d| d.components.iter().map(|c| Component { poly: c.poly.clone(), multiplicity: 1 }))
            .collect();
        base.normalize_support();
        let base = base.refine_by(&hyperplanes);
        let mut out = Vec::new();
        for b in base.components() {
            let mut mult: Option<i64> = None;
            for (j, h) in homog.iter().enumerate() {
                if b.poly == hyperplanes[j] {
                    continue;
                }
                let m = h.multiplicity_of(&b.poly).ok_or_else(|| {
                    Error::Internal(format!("component {} splits unevenly on chart {j}", b.poly))
                })?;
                match mult {
                    None => mult = Some(m),
                    Some(prev) if prev != m => {
                        return Err(Error::Internal(format!(
                            "charts disagree on the multiplicity of {}: {prev} vs {m}",
                            b.poly
                        )))
                    }
                    _ => {}
                }
            }
            out.push((b.poly.clone(), mult.unwrap_or(0)));
        }
        Ok(Self::from_components(&ring, amb, out))
    }

    /// Restriction to chart `j` of a projective divisor.
    pub fn dehomogenize(&self, j: usize) -> Result<Self> {
        let n = self.ambient.dim();
        let comps: Vec<(MultiPoly<F>, i64)> = self
            .components
            .iter()
            .map(|c| (c.poly.dehomogenize(j), c.multiplicity))
            .filter(|(p, _)| !p.is_constant())
            .collect();
        // dehomogenized components stay squarefree but may merge; re-decompose each one
        let mut out = Vec::new();
        for (p, m) in comps {
            for (g, e) in p.squarefree_decomposition()? {
                out.push((g, m * e as i64));
            }
        }
        Ok(Self::from_components(&self.ring, Ambient::Affine(n), out))
    }
}

impl<F: Field> Divisor<F> {
    /// Coprime base with multiplicities reset to one (used for supports).
    fn normalize_support(&mut self) {
        self.normalize();
        for c in &mut self.components {
            c.multiplicity = 1;
        }
    }
}
