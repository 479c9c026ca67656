//! Rational maps: pullbacks, ramification divisors, restrictions to linear
//! subspaces and differents.
//!
//! Maps between projective spaces are given by homogeneous components of one
//! degree and act on homogeneous coordinates (the cone map). Affine maps are
//! `x -> P(x) / Q(x)` with a single denominator.

use crate::divisor::{Ambient, Divisor};
use crate::error::{Error, Result};
use crate::field::{Field, PerfectField};
use crate::foliation::{invariant_under_kernel, Foliation};
use crate::forms::DiffForm;
use crate::poly::MultiPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap<F: Field> {
    source: Ambient,
    target: Ambient,
    num: Vec<MultiPoly<F>>,
    den: MultiPoly<F>,
}

/// Rank of a polynomial matrix by fraction-free elimination.
pub fn poly_matrix_rank<F: Field>(rows: &[Vec<MultiPoly<F>>]) -> usize {
    let mut m: Vec<Vec<MultiPoly<F>>> = rows.to_vec();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(k) = (rank..m.len()).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(rank, k);
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x = x.mul(&pivot[c]).sub(&f.mul(y));
            }
            // keep entries small: divide the row by its content
            let mut g = MultiPoly::zero(row[0].ring(), row[0].nvars());
            for x in row.iter() {
                g = g.gcd(x);
            }
            if !g.is_zero() && !g.is_constant() {
                for x in row.iter_mut() {
                    *x = x.div_exact(&g).unwrap();
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by cofactor expansion along the first row.
pub fn poly_det<F: Field>(m: &[Vec<MultiPoly<F>>]) -> MultiPoly<F> {
    let n = m.len();
    let ring = m[0][0].ring();
    let nv = m[0][0].nvars();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero(ring, nv);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly<F>>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let t = m[0][j].mul(&poly_det(&minor));
        acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

impl<F: Field> RationalMap<F> {
    fn build(source: Ambient, target: Ambient, num: Vec<MultiPoly<F>>, den: MultiPoly<F>) -> Result<Self> {
        if num.len() != target.nvars() {
            return Err(Error::DimensionMismatch { left: num.len(), right: target.nvars() });
        }
        for c in num.iter().chain(std::iter::once(&den)) {
            if c.nvars() != source.nvars() {
                return Err(Error::DimensionMismatch { left: c.nvars(), right: source.nvars() });
            }
        }
        if den.is_zero() {
            return Err(Error::DegenerateInput("zero denominator".into()));
        }
        match (source, target) {
            (Ambient::Projective(_), Ambient::Projective(_)) => {
                if !den.is_constant() {
                    return Err(Error::DegenerateInput("projective maps take no denominator".into()));
                }
                let d = num.iter().filter_map(|c| c.total_degree()).max();
                let Some(d) = d else {
                    return Err(Error::DegenerateInput("all components vanish".into()));
                };
                if !num.iter().all(|c| c.is_zero() || (c.is_homogeneous() && c.total_degree() == Some(d))) {
                    return Err(Error::DegenerateInput("components must be homogeneous of one degree".into()));
                }
            }
            (Ambient::Affine(_), Ambient::Affine(_)) => {}
            _ => return Err(Error::Unsupported("maps between affine and projective spaces".into())),
        }
        Ok(RationalMap { source, target, num, den })
    }

    /// A dominant map; dominance is checked by the rank of the Jacobian.
    pub fn new(source: Ambient, target: Ambient, num: Vec<MultiPoly<F>>, den: MultiPoly<F>) -> Result<Self> {
        let m = Self::build(source, target, num, den)?;
        if !m.is_dominant() {
            return Err(Error::DegenerateInput("map is not dominant".into()));
        }
        Ok(m)
    }
    pub fn polynomial(source: Ambient, target: Ambient, num: Vec<MultiPoly<F>>) -> Result<Self> {
        let den = MultiPoly::one(num[0].ring(), source.nvars());
        Self::new(source, target, num, den)
    }
    /// An inclusion of a linear subspace or parametrized hypersurface.
    pub fn embedding(source: Ambient, target: Ambient, num: Vec<MultiPoly<F>>) -> Result<Self> {
        let den = MultiPoly::one(num[0].ring(), source.nvars());
        let m = Self::build(source, target, num, den)?;
        if poly_matrix_rank(&m.jacobian()) < source.nvars() {
            return Err(Error::DegenerateInput("embedding is not immersive".into()));
        }
        Ok(m)
    }
    pub fn identity(ring: &F, ambient: Ambient) -> Self {
        let n = ambient.nvars();
        Self::build(ambient, ambient, (0..n).map(|i| MultiPoly::var(ring, n, i)).collect(), MultiPoly::one(ring, n))
            .unwrap()
    }
    /// `x_i -> x_i^{e_i}`; on `P^n` all exponents must agree.
    pub fn monomial_cover(ring: &F, ambient: Ambient, exps: &[u32]) -> Result<Self> {
        let n = ambient.nvars();
        if exps.len() != n {
            return Err(Error::DimensionMismatch { left: exps.len(), right: n });
        }
        let num = (0..n).map(|i| MultiPoly::var(ring, n, i).pow(exps[i] as u64)).collect();
        Self::polynomial(ambient, ambient, num)
    }

    pub fn source(&self) -> Ambient {
        self.source
    }
    pub fn target(&self) -> Ambient {
        self.target
    }
    pub fn components(&self) -> &[MultiPoly<F>] {
        &self.num
    }
    pub fn denominator(&self) -> &MultiPoly<F> {
        &self.den
    }
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Polynomial Jacobian: `d P_i / d x_j` when polynomial (or on the cone),
    /// otherwise `Q dP_i - P_i dQ`, which differs by the factor `Q^-2` per row.
    pub fn jacobian(&self) -> Vec<Vec<MultiPoly<F>>> {
        let n = self.source.nvars();
        self.num
            .iter()
            .map(|p| {
                (0..n)
                    .map(|j| {
                        if self.is_polynomial() {
                            p.derivative(j)
                        } else {
                            self.den.mul(&p.derivative(j)).sub(&p.mul(&self.den.derivative(j)))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn is_dominant(&self) -> bool {
        poly_matrix_rank(&self.jacobian()) == self.target.nvars()
    }

    /// `g o phi` as a polynomial: exact for polynomial and projective maps,
    /// the numerator otherwise.
    pub fn pullback_poly(&self, g: &MultiPoly<F>) -> MultiPoly<F> {
        if self.is_polynomial() {
            let c = self.den.constant_term();
            let inv = self.den.ring().inv(&c).unwrap();
            let imgs: Vec<MultiPoly<F>> = self.num.iter().map(|p| p.scale(&inv)).collect();
            g.compose(&imgs)
        } else {
            g.compose_rational(&self.num, &self.den).0
        }
    }

    /// `phi^* w` before saturation.
    pub fn pullback_form_raw(&self, w: &DiffForm<F>) -> Result<DiffForm<F>> {
        if w.nvars() != self.target.nvars() {
            return Err(Error::DimensionMismatch { left: w.nvars(), right: self.target.nvars() });
        }
        Ok(if self.is_polynomial() {
            let c = self.den.constant_term();
            let inv = self.den.ring().inv(&c).unwrap();
            let imgs: Vec<MultiPoly<F>> = self.num.iter().map(|p| p.scale(&inv)).collect();
            w.pullback_polynomial(&imgs)
        } else {
            w.pullback_rational(&self.num, &self.den).num().clone()
        })
    }

    /// `phi^* w` with denominators cleared and content removed.
    pub fn pullback_form(&self, w: &DiffForm<F>) -> Result<DiffForm<F>> {
        let raw = self.pullback_form_raw(w)?;
        if raw.is_zero() {
            return Err(Error::DegeneratePullback(format!("pullback of {w} vanishes identically")));
        }
        Ok(raw.saturate().0)
    }

    pub fn pullback_foliation(&self, g: &Foliation<F>) -> Result<Foliation<F>> {
        if g.ambient() != self.target {
            return Err(Error::DimensionMismatch { left: g.ambient().nvars(), right: self.target.nvars() });
        }
        Foliation::from_form(self.source, self.pullback_form(g.form())?, g.is_integrable())
    }
}

impl<F: PerfectField> RationalMap<F> {
    /// `phi^* D`, dropping components that only live along the polar set.
    pub fn pullback_divisor(&self, d: &Divisor<F>) -> Result<Divisor<F>> {
        let mut out = Divisor::zero(d.ring(), self.source);
        for c in d.components() {
            let g = self.pullback_poly(&c.poly);
            if g.is_zero() {
                return Err(Error::DegeneratePullback(format!("image lies inside {{{}}}", c.poly)));
            }
            if g.is_constant() {
                continue;
            }
            let mut pd = Divisor::of_poly(self.source, &g)?;
            if !self.is_polynomial() {
                let keep: Vec<(MultiPoly<F>, i64)> = pd
                    .components()
                    .iter()
                    .filter(|k| k.poly.gcd(&self.den).is_constant())
                    .map(|k| (k.poly.clone(), k.multiplicity))
                    .collect();
                pd = Divisor::from_components(d.ring(), self.source, keep);
            }
            out = out.add(&pd.scale(c.multiplicity));
        }
        Ok(out)
    }

    /// Divisor of the Jacobian determinant (of the cone map on `P^n`).
    pub fn ramification_divisor(&self) -> Result<Divisor<F>> {
        if self.source.dim() != self.target.dim() {
            return Err(Error::Unsupported("ramification of maps between spaces of different dimension".into()));
        }
        if let Some(d) = self.monomial_ramification() {
            return Ok(d);
        }
        let j = poly_det(&self.jacobian());
        if j.is_zero() {
            return Err(Error::InseparableMap);
        }
        if j.is_constant() {
            return Ok(Divisor::zero(j.ring(), self.source));
        }
        let d = Divisor::of_poly(self.source, &j)?;
        if self.is_polynomial() {
            return Ok(d);
        }
        let keep: Vec<(MultiPoly<F>, i64)> = d
            .components()
            .iter()
            .filter(|k| k.poly.gcd(&self.den).is_constant())
            .map(|k| (k.poly.clone(), k.multiplicity))
            .collect();
        Ok(Divisor::from_components(j.ring(), self.source, keep))
    }

    /// Fast path for `x_i -> c_i x_i^{e_i}`: `sum (e_i - 1) {x_i}`.
    fn monomial_ramification(&self) -> Option<Divisor<F>> {
        if !self.is_polynomial() || self.source != self.target {
            return None;
        }
        let ring = self.den.ring();
        let p = ring.characteristic();
        let n = self.source.nvars();
        let mut comps = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_monomial() {
                return None;
            }
            let (m, _) = c.leading().unwrap();
            let e = m.exps()[i];
            if e == 0 || m.degree() != e || (p != 0 && (e as u64).is_multiple_of(p)) {
                return None;
            }
            comps.push((MultiPoly::var(ring, n, i), e as i64 - 1));
        }
        Some(Divisor::from_components(ring, self.source, comps))
    }
}

/// `i^* w` split as `content * restricted`, with `restricted` saturated.
pub fn restrict_form<F: PerfectField>(
    emb: &RationalMap<F>,
    w: &DiffForm<F>,
) -> Result<(DiffForm<F>, Divisor<F>)> {
    let raw = emb.pullback_form_raw(w)?;
    if raw.is_zero() {
        return Err(Error::InvariantHypersurface(format!("{w} restricts to zero")));
    }
    let (sat, content) = raw.saturate();
    let diff = if content.is_constant() {
        Divisor::zero(w.ring(), emb.source())
    } else {
        Divisor::of_poly(emb.source(), &content)?
    };
    Ok((sat, diff))
}

/// The restriction `F|_Y` and the different `diff(F, Y)`.
pub fn different<F: PerfectField>(f: &Foliation<F>, emb: &RationalMap<F>) -> Result<(Foliation<F>, Divisor<F>)> {
    if f.ambient() != emb.target() {
        return Err(Error::DimensionMismatch { left: f.ambient().nvars(), right: emb.target().nvars() });
    }
    let (sat, diff) = restrict_form(emb, f.form())?;
    if sat.degree() >= emb.source().nvars() || (emb.source().is_projective() && sat.degree() >= emb.source().dim()) {
        return Err(Error::InvariantHypersurface("restriction is a top-degree form".into()));
    }
    Ok((Foliation::from_form(emb.source(), sat, false)?, diff))
}

/// Invariance data of one ramification component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamComponent<F: Field> {
    pub poly: MultiPoly<F>,
    pub multiplicity: i64,
    pub f_invariant: bool,
    pub kernel_invariant: bool,
}

#[derive(Clone, Debug)]
pub struct PullbackComparison<F: Field> {
    pub delta_f: Divisor<F>,
    pub pullback_delta_g: Divisor<F>,
    pub ramification: Vec<RamComponent<F>>,
    /// `phi^* D_G - Ram_F + p (Ram_{F perp} - Ram_{K perp})`.
    pub predicted: Divisor<F>,
    pub matches: bool,
}

/// Compares the degeneracy divisor of `phi^* G` with the pullback formula.
/// Invariance under the kernel uses `h | dh ^ T`; on surfaces the kernel is
/// the foliation by points and every curve counts as invariant.
pub fn verify_pullback_degeneracy<F: PerfectField>(
    phi: &RationalMap<F>,
    g: &Foliation<F>,
) -> Result<PullbackComparison<F>> {
    let f = phi.pullback_foliation(g)?;
    let p = f.ring().characteristic() as i64;
    let delta_f = f.degeneracy_divisor()?;
    let pullback_delta_g = phi.pullback_divisor(&g.degeneracy_divisor()?)?;
    let ram = phi.ramification_divisor()?;
    let kernel = if f.ambient().dim() >= 3 { Some(f.p_kernel()?.0) } else { None };
    let amb = phi.source();
    let ring = f.ring().clone();
    let mut ram_f = Divisor::zero(&ring, amb);
    let mut ram_f_perp = Divisor::zero(&ring, amb);
    let mut ram_k_perp = Divisor::zero(&ring, amb);
    let mut comps = Vec::new();
    for c in ram.components() {
        let fi = f.invariant_hypersurface(&c.poly)?;
        let ki = match &kernel {
            Some(t) => invariant_under_kernel(t, &c.poly),
            None => true,
        };
        let piece = Divisor::prime(amb, &c.poly, c.multiplicity);
        if fi {
            ram_f = ram_f.add(&piece);
        } else {
            ram_f_perp = ram_f_perp.add(&piece);
        }
        if !ki {
            ram_k_perp = ram_k_perp.add(&piece);
        }
        comps.push(RamComponent { poly: c.poly.clone(), multiplicity: c.multiplicity, f_invariant: fi, kernel_invariant: ki });
    }
    let predicted = pullback_delta_g.sub(&ram_f).add(&ram_f_perp.sub(&ram_k_perp).scale(p));
    let matches = predicted == delta_f;
    Ok(PullbackComparison { delta_f, pullback_delta_g, ramification: comps, predicted, matches })
}

#[derive(Clone, Debug)]
pub struct RestrictionComparison<F: Field> {
    pub delta_restricted: Divisor<F>,
    pub delta_f_on_y: Divisor<F>,
    pub diff_f: Divisor<F>,
    pub diff_kernel: Divisor<F>,
    /// `D_F|_Y + p (diff(K, Y) - diff(F, Y)) - diff(F, Y)`.
    pub predicted: Divisor<F>,
    pub matches: bool,
}

/// Compares the degeneracy divisor of `F|_Y` with the restriction formula.
pub fn verify_restriction_degeneracy<F: PerfectField>(
    f: &Foliation<F>,
    emb: &RationalMap<F>,
) -> Result<RestrictionComparison<F>> {
    let p = f.ring().characteristic() as i64;
    let (restricted, diff_f) = different(f, emb)?;
    let (theta, _) = f.p_kernel()?;
    let (_, diff_kernel) = restrict_form(emb, &theta)?;
    let delta_restricted = restricted.degeneracy_divisor()?;
    let delta_f_on_y = emb.pullback_divisor(&f.degeneracy_divisor()?)?;
    let predicted = delta_f_on_y.add(&diff_kernel.sub(&diff_f).scale(p)).sub(&diff_f);
    let matches = predicted == delta_restricted;
    Ok(RestrictionComparison { delta_restricted, delta_f_on_y, diff_f, diff_kernel, predicted, matches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fq, Ring};

    fn vars(r: &Fq, n: usize) -> Vec<MultiPoly<Fq>> {
        (0..n).map(|i| MultiPoly::var(r, n, i)).collect()
    }

    #[test]
    fn pullback_examples() {
        let r = Fq::prime(5).unwrap();
        let x = vars(&r, 2);
        let a2 = Ambient::Affine(2);
        let phi = RationalMap::polynomial(a2, a2, vec![x[0].pow(2), x[1].clone()]).unwrap();
        let dx = DiffForm::dx(&r, 2, 0);
        assert_eq!(phi.pullback_form_raw(&dx).unwrap(), dx.scale(&x[0].scale(&r.from_i64(2))));
        let id = RationalMap::identity(&r, a2);
        assert_eq!(id.pullback_form(&dx).unwrap(), dx);
        assert!(RationalMap::polynomial(a2, a2, vec![x[0].clone(), x[0].clone()]).is_err());
    }

    #[test]
    fn ramification_examples() {
        let r = Fq::prime(7).unwrap();
        let x = vars(&r, 2);
        let a2 = Ambient::Affine(2);
        let phi = RationalMap::polynomial(a2, a2, vec![x[0].pow(3), x[1].clone()]).unwrap();
        assert_eq!(phi.ramification_divisor().unwrap(), Divisor::prime(a2, &x[0], 2));
        assert!(RationalMap::identity(&r, a2).ramification_divisor().unwrap().is_zero());
        let p2 = Ambient::Projective(2);
        let cover = RationalMap::monomial_cover(&r, p2, &[3, 3, 3]).unwrap();
        let ram = cover.ramification_divisor().unwrap();
        assert_eq!(ram.degree(), 6);
        // the generic determinant path agrees with the monomial fast path
        let j = poly_det(&cover.jacobian());
        assert_eq!(Divisor::of_poly(p2, &j).unwrap(), ram);
        let insep = RationalMap::build(a2, a2, vec![x[0].pow(7).add(&x[1]), x[1].clone()], MultiPoly::one(&r, 2)).unwrap();
        assert!(!insep.is_dominant());
        assert!(matches!(insep.ramification_divisor(), Err(Error::InseparableMap)));
    }

    #[test]
    fn different_examples() {
        let r = Fq::prime(7).unwrap();
        let x = vars(&r, 2);
        let d: Vec<_> = (0..2).map(|i| DiffForm::dx(&r, 2, i)).collect();
        let radial = Foliation::from_form(Ambient::Affine(2), d[1].scale(&x[0]).sub(&d[0].scale(&x[1])), true).unwrap();
        // y = 2x + 3
        let t = MultiPoly::var(&r, 1, 0);
        let emb = RationalMap::embedding(
            Ambient::Affine(1),
            Ambient::Affine(2),
            vec![t.clone(), t.scale(&r.from_i64(2)).add(&MultiPoly::from_int(&r, 1, 3))],
        )
        .unwrap();
        let (res, diff) = different_affine_curve(&radial, &emb);
        assert!(diff.is_zero());
        assert_eq!(res.degree(), 1);
        let x3 = vars(&r, 3);
        let dz = Foliation::from_form(Ambient::Affine(3), DiffForm::dx(&r, 3, 2), true).unwrap();
        let u = vars(&r, 2);
        let plane = RationalMap::embedding(
            Ambient::Affine(2),
            Ambient::Affine(3),
            vec![u[0].clone(), u[1].clone(), MultiPoly::zero(&r, 2)],
        )
        .unwrap();
        assert!(matches!(different(&dz, &plane), Err(Error::InvariantHypersurface(_))));
        let _ = x3;
    }

    // on a curve the restriction is a top-degree form: only the different is meaningful
    fn different_affine_curve(f: &Foliation<Fq>, emb: &RationalMap<Fq>) -> (DiffForm<Fq>, Divisor<Fq>) {
        restrict_form(emb, f.form()).unwrap()
    }
}
