//! Codimension-one foliations and their p-curvature.
//!
//! All p-curvature computations happen on affine charts. The image of the
//! p-curvature is read off the Koszul tangent fields `a_j d_i - a_i d_j`,
//! which generate the tangent sheaf away from codimension two, so the gcd of
//! `w(v^p)` over them is exactly the degeneracy divisor on that chart.

use serde::Serialize;

use crate::cartier::cartier_rational;
use crate::divisor::{Ambient, Divisor};
use crate::error::{Error, Result};
use crate::field::{Field, PerfectField, Ring};
use crate::forms::{dehomogenize_form, projectivize, DiffForm, RationalForm, VectorField};
use crate::poly::MultiPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Foliation<F: Field> {
    ambient: Ambient,
    form: DiffForm<F>,
    integrable: bool,
}

/// `w ^ dw` for a 1-form, or the vector of `(i_{d_k} T) ^ dT` for a 2-form.
pub fn integrability_defect<R: Ring>(w: &DiffForm<R>) -> Vec<DiffForm<R>> {
    match w.degree() {
        1 => vec![w.wedge(&w.d())],
        2 => {
            let dw = w.d();
            (0..w.nvars())
                .map(|k| w.contract(&VectorField::partial(w.ring(), w.nvars(), k)).wedge(&dw))
                .collect()
        }
        _ => Vec::new(),
    }
}

pub fn is_integrable<R: Ring>(w: &DiffForm<R>) -> bool {
    integrability_defect(w).iter().all(|d| d.is_zero())
}

impl<F: Field> Foliation<F> {
    /// Validates `w` as the defining form of a distribution (or, with
    /// `demand_integrable`, a foliation) of codimension `w.degree()`.
    pub fn from_form(ambient: Ambient, w: DiffForm<F>, demand_integrable: bool) -> Result<Self> {
        if w.is_zero() {
            return Err(Error::DegenerateInput("zero defining form".into()));
        }
        if w.nvars() != ambient.nvars() {
            return Err(Error::DimensionMismatch { left: w.nvars(), right: ambient.nvars() });
        }
        if !(1..=2).contains(&w.degree()) {
            return Err(Error::Unsupported(format!("codimension {}", w.degree())));
        }
        let content = w.content();
        if !content.is_constant() {
            return Err(Error::Saturation { witness: content.to_string() });
        }
        if ambient.is_projective() {
            let d = w.max_coeff_degree().unwrap();
            if !w.is_homogeneous_of(d) {
                return Err(Error::DegenerateInput("projective form with inhomogeneous coefficients".into()));
            }
            let e = w.contract(&VectorField::radial(w.ring(), w.nvars()));
            if !e.is_zero() {
                return Err(Error::Euler { witness: e.to_string() });
            }
        }
        let defect = integrability_defect(&w);
        let integrable = defect.iter().all(|d| d.is_zero());
        if demand_integrable && !integrable {
            let witness = defect.into_iter().find(|d| !d.is_zero()).unwrap();
            return Err(Error::Integrability { witness: witness.to_string() });
        }
        Ok(Foliation { ambient, form: w, integrable })
    }

    /// The foliation on `A^2` tangent to `v`, defined by `v_x dy - v_y dx`
    /// divided by its content.
    pub fn from_vector_field(v: &VectorField<F>) -> Result<Self> {
        if v.nvars() != 2 {
            return Err(Error::Unsupported("vector-field input outside the plane".into()));
        }
        let c = v.comps();
        let w = DiffForm::one_form(&[c[1].neg(), c[0].clone()]);
        let g = w.content();
        let w = w.div_exact(&g).ok_or_else(|| Error::DegenerateInput("zero vector field".into()))?;
        Self::from_form(Ambient::Affine(2), w, true)
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }
    pub fn form(&self) -> &DiffForm<F> {
        &self.form
    }
    pub fn codim(&self) -> usize {
        self.form.degree()
    }
    pub fn ring(&self) -> &F {
        self.form.ring()
    }
    pub fn is_integrable(&self) -> bool {
        self.integrable
    }
    /// Projective degree: coefficient degree minus one.
    pub fn degree(&self) -> Option<i64> {
        self.ambient.is_projective().then(|| self.form.max_coeff_degree().unwrap() as i64 - 1)
    }

    /// Defining form on standard chart `j` (the form itself when affine).
    pub fn chart_form(&self, j: usize) -> Result<DiffForm<F>> {
        match self.ambient {
            Ambient::Affine(_) => Ok(self.form.clone()),
            Ambient::Projective(n) => {
                if j > n {
                    return Err(Error::DegenerateInput(format!("chart {j} of P{n}")));
                }
                let w = dehomogenize_form(&self.form, j);
                let c = w.content();
                if !c.is_constant() {
                    return Err(Error::Internal(format!("chart {j} form has content {c}")));
                }
                Ok(w)
            }
        }
    }

    /// The foliation restricted to chart `j`, as an affine foliation.
    pub fn chart(&self, j: usize) -> Result<Foliation<F>> {
        let w = self.chart_form(j)?;
        Ok(Foliation { ambient: Ambient::Affine(w.nvars()), form: w, integrable: self.integrable })
    }

    fn require_codim_one(&self) -> Result<()> {
        if self.codim() != 1 {
            return Err(Error::Unsupported("operation defined for codimension one only".into()));
        }
        Ok(())
    }

    /// Tangent fields `a_j d_i - a_i d_j`, `i < j`, skipping zeros.
    pub fn koszul_generators(&self) -> Result<Vec<VectorField<F>>> {
        self.require_codim_one()?;
        Ok(koszul(&self.form))
    }

    /// `w(v^p)` for a tangent field `v` (forms on the presenting coordinates).
    pub fn p_curvature(&self, v: &VectorField<F>) -> Result<MultiPoly<F>> {
        self.require_codim_one()?;
        p_curvature_of(&self.form, v)
    }

    /// `w(v^p) = 0` for every Koszul generator (computed on chart 0 when projective).
    pub fn is_p_closed(&self) -> Result<bool> {
        let w = self.chart_form(0)?;
        for v in koszul(&w) {
            if !p_curvature_of(&w, &v)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `h | w ^ dh`.
    pub fn invariant_hypersurface(&self, h: &MultiPoly<F>) -> Result<bool> {
        self.require_codim_one()?;
        if h.is_constant() {
            return Err(Error::DegenerateInput(format!("{h} is not a hypersurface")));
        }
        if h.nvars() != self.form.nvars() {
            return Err(Error::DimensionMismatch { left: h.nvars(), right: self.form.nvars() });
        }
        Ok(self.form.wedge(&DiffForm::differential(h)).divisible_by(h))
    }
}

fn koszul<F: Field>(w: &DiffForm<F>) -> Vec<VectorField<F>> {
    let a = w.components();
    let n = w.nvars();
    let ring = w.ring();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = VectorField::partial(ring, n, i)
                .scale(&a[j])
                .sub(&VectorField::partial(ring, n, j).scale(&a[i]));
            if !v.is_zero() {
                out.push(v);
            }
        }
    }
    out
}

fn p_curvature_of<F: Field>(w: &DiffForm<F>, v: &VectorField<F>) -> Result<MultiPoly<F>> {
    let t = w.pair(v);
    if !t.is_zero() {
        return Err(Error::Precondition { what: "vector field not tangent".into(), witness: t.to_string() });
    }
    Ok(w.pair(&v.pth_power()?))
}

/// `(h | T ^ dh)` for a 2-form `T`: invariance of `h` under the codimension-two distribution.
pub fn invariant_under_kernel<F: Field>(theta: &DiffForm<F>, h: &MultiPoly<F>) -> bool {
    DiffForm::differential(h).wedge(theta).divisible_by(h)
}

impl<F: PerfectField> Foliation<F> {
    /// Degeneracy divisor on a single affine chart.
    pub fn chart_degeneracy(&self, j: usize) -> Result<Divisor<F>> {
        self.require_codim_one()?;
        let w = self.chart_form(j)?;
        let n = w.nvars();
        let mut g = MultiPoly::zero(self.ring(), n);
        for v in koszul(&w) {
            g = g.gcd(&p_curvature_of(&w, &v)?);
            if g.is_constant() && !g.is_zero() {
                break;
            }
        }
        if g.is_zero() {
            return Err(Error::Precondition { what: "foliation is p-closed".into(), witness: "0".into() });
        }
        Divisor::of_poly(Ambient::Affine(n), &g)
    }

    /// The degeneracy divisor; projective divisors come from all standard charts.
    pub fn degeneracy_divisor(&self) -> Result<Divisor<F>> {
        match self.ambient {
            Ambient::Affine(_) => self.chart_degeneracy(0),
            Ambient::Projective(n) => {
                let charts = (0..=n).map(|j| self.chart_degeneracy(j)).collect::<Result<Vec<_>>>()?;
                Divisor::assemble_projective(&charts)
            }
        }
    }

    /// `w / w(v^p)` on chart 0 for the first Koszul field with `w(v^p) != 0`.
    pub fn closed_defining_form(&self) -> Result<RationalForm<F>> {
        self.require_codim_one()?;
        let w = self.chart_form(0)?;
        for v in koszul(&w) {
            let g = p_curvature_of(&w, &v)?;
            if !g.is_zero() {
                return self.closed_defining_form_with(&v);
            }
        }
        Err(Error::Precondition { what: "foliation is p-closed".into(), witness: "0".into() })
    }

    /// `w / w(v^p)` on chart 0 for a caller-supplied tangent field `v`.
    pub fn closed_defining_form_with(&self, v: &VectorField<F>) -> Result<RationalForm<F>> {
        let w = self.chart_form(0)?;
        let g = p_curvature_of(&w, v)?;
        if g.is_zero() {
            return Err(Error::DegenerateInput("w(v^p) vanishes for the chosen field".into()));
        }
        let closed = RationalForm::new(w, g)?;
        let d = closed.d();
        if !d.is_zero() {
            return Err(Error::Internal(format!("w / w(v^p) is not closed: {d:?}")));
        }
        Ok(closed)
    }

    /// Cleared `C(w')` on chart 0 and whether it is integrable.
    pub fn cartier_transform_chart(&self) -> Result<(DiffForm<F>, bool)> {
        let closed = self.closed_defining_form()?;
        let c = cartier_rational(&closed)?;
        if c.is_zero() {
            return Err(Error::Internal("Cartier transform vanishes".into()));
        }
        let cleared = c.cleared();
        let integrable = is_integrable(&cleared);
        Ok((cleared, integrable))
    }

    /// The Cartier transform as a form on the ambient space.
    pub fn cartier_transform_foliation(&self) -> Result<(DiffForm<F>, bool)> {
        let (c, integrable) = self.cartier_transform_chart()?;
        Ok((self.lift_from_chart0(&c), integrable))
    }

    fn lift_from_chart0(&self, w: &DiffForm<F>) -> DiffForm<F> {
        match self.ambient {
            Ambient::Affine(_) => w.clone(),
            Ambient::Projective(_) => projectivize(w, 0),
        }
    }

    /// Kernel of the p-curvature: the saturated 2-form `w ^ cleared C(w')`
    /// and, on `P^n`, its degree.
    pub fn p_kernel(&self) -> Result<(DiffForm<F>, Option<i64>)> {
        self.require_codim_one()?;
        if self.ambient.dim() < 3 {
            return Err(Error::Unsupported("kernel of the p-curvature on a surface".into()));
        }
        let w = self.chart_form(0)?;
        let (c, _) = self.cartier_transform_chart()?;
        let theta = w.wedge(&c);
        if theta.is_zero() {
            return Err(Error::Internal("Cartier transform coincides with the foliation".into()));
        }
        let theta = self.lift_from_chart0(&theta.saturate().0).saturate().0;
        let deg = self.ambient.is_projective().then(|| theta.max_coeff_degree().unwrap() as i64 - 1);
        Ok((theta, deg))
    }

    /// `(w')_inf - (w')_0` on chart 0, to compare with the degeneracy divisor mod p.
    pub fn closed_form_divisor(&self) -> Result<Divisor<F>> {
        let closed = self.closed_defining_form()?;
        let amb = Ambient::Affine(closed.nvars());
        let poles = Divisor::of_poly(amb, closed.den())?;
        let zeros = Divisor::of_poly(amb, &closed.num().content())?;
        Ok(poles.sub(&zeros))
    }

    pub fn report(&self) -> Result<PCurvatureReport<F>> {
        PCurvatureReport::compute(self)
    }
}

/// `T = (w1 ^ w2) / content` and the divisor of the removed content.
pub fn intersect_distributions<F: PerfectField>(
    f1: &Foliation<F>,
    f2: &Foliation<F>,
) -> Result<(DiffForm<F>, Divisor<F>)> {
    if f1.ambient != f2.ambient {
        return Err(Error::DimensionMismatch { left: f1.ambient.nvars(), right: f2.ambient.nvars() });
    }
    let t = f1.form.try_wedge(&f2.form)?;
    if t.is_zero() {
        return Err(Error::DegenerateIntersection);
    }
    let (theta, content) = t.saturate();
    let eps = if content.is_constant() {
        Divisor::zero(f1.ring(), f1.ambient)
    } else {
        Divisor::of_poly(f1.ambient, &content)?
    };
    Ok((theta, eps))
}

/// The foliation defined by `(prod F_i) sum l_i dF_i / F_i`, saturated.
pub fn log_foliation<F: Field>(
    ambient: Ambient,
    components: &[MultiPoly<F>],
    weights: &[F::Elem],
) -> Result<Foliation<F>> {
    if components.is_empty() || components.len() != weights.len() {
        return Err(Error::DegenerateInput("need one weight per component".into()));
    }
    let ring = components[0].ring().clone();
    let n = ambient.nvars();
    for c in components {
        c.try_same_space(&MultiPoly::zero(&ring, n))?;
    }
    if ambient.is_projective() {
        let mut s = ring.zero();
        for (c, l) in components.iter().zip(weights) {
            if !c.is_homogeneous() {
                return Err(Error::DegenerateInput(format!("{c} is not homogeneous")));
            }
            let d = ring.from_i64(c.total_degree().unwrap_or(0) as i64);
            s = ring.add(&s, &ring.mul(l, &d));
        }
        if !ring.is_zero(&s) {
            return Err(Error::Euler { witness: format!("sum of weighted degrees is {}", ring.format_elem(&s)) });
        }
    }
    let (w, _) = log_form(components, weights).saturate();
    Foliation::from_form(ambient, w, true)
}

/// `sum l_i (prod_{j != i} F_j) dF_i`, not saturated.
pub fn log_form<R: Ring>(components: &[MultiPoly<R>], weights: &[R::Elem]) -> DiffForm<R> {
    let ring = components[0].ring();
    let n = components[0].nvars();
    let mut w = DiffForm::zero(ring, n, 1);
    for (i, (c, l)) in components.iter().zip(weights).enumerate() {
        let mut others = MultiPoly::constant(ring, n, l.clone());
        for (j, o) in components.iter().enumerate() {
            if j != i {
                others = others.mul(o);
            }
        }
        w = w.add(&DiffForm::differential(c).scale(&others));
    }
    w
}

/// Everything the p-curvature tells about a codimension-one foliation.
#[derive(Clone, Debug)]
pub struct PCurvatureReport<F: Field> {
    pub p: u64,
    pub p_closed: bool,
    pub degeneracy: Option<Divisor<F>>,
    pub closed_form: Option<RationalForm<F>>,
    pub cartier: Option<DiffForm<F>>,
    pub cartier_integrable: Option<bool>,
    pub kernel: Option<DiffForm<F>>,
    pub deg_f: Option<i64>,
    pub deg_kernel: Option<i64>,
    pub deg_degeneracy: Option<i64>,
    pub predicted_deg_degeneracy: Option<i64>,
}

/// Degree of the degeneracy divisor predicted from the canonical bundles:
/// `p (deg F - deg K - 1) + deg F + 2` on `P^n`, with `K` the kernel (of
/// degree `0` on a surface, where it is the foliation by points).
pub fn predicted_degeneracy_degree(p: u64, deg_f: i64, deg_kernel: i64) -> i64 {
    p as i64 * (deg_f - deg_kernel - 1) + deg_f + 2
}

impl<F: PerfectField> PCurvatureReport<F> {
    pub fn compute(f: &Foliation<F>) -> Result<Self> {
        f.require_codim_one()?;
        let p = f.ring().characteristic();
        if p == 0 {
            return Err(Error::Unsupported("p-curvature in characteristic zero".into()));
        }
        let p_closed = f.is_p_closed()?;
        let mut r = PCurvatureReport {
            p,
            p_closed,
            degeneracy: None,
            closed_form: None,
            cartier: None,
            cartier_integrable: None,
            kernel: None,
            deg_f: f.degree(),
            deg_kernel: None,
            deg_degeneracy: None,
            predicted_deg_degeneracy: None,
        };
        if p_closed {
            return Ok(r);
        }
        let delta = f.degeneracy_divisor()?;
        r.closed_form = Some(f.closed_defining_form()?);
        let (c, integrable) = f.cartier_transform_foliation()?;
        r.cartier = Some(c);
        r.cartier_integrable = Some(integrable);
        if f.ambient.dim() >= 3 {
            let (theta, deg) = f.p_kernel()?;
            r.kernel = Some(theta);
            r.deg_kernel = deg;
        } else if f.ambient.is_projective() {
            r.deg_kernel = Some(0);
        }
        if f.ambient.is_projective() {
            r.deg_degeneracy = Some(delta.degree());
            let predicted = predicted_degeneracy_degree(p, r.deg_f.unwrap(), r.deg_kernel.unwrap());
            r.predicted_deg_degeneracy = Some(predicted);
            if predicted != delta.degree() {
                return Err(Error::Internal(format!(
                    "degeneracy divisor has degree {} but the bundle formula predicts {predicted}",
                    delta.degree()
                )));
            }
        } else {
            r.deg_degeneracy = Some(delta.degree());
        }
        r.degeneracy = Some(delta);
        Ok(r)
    }

    /// JSON-friendly view with canonical text for every polynomial.
    pub fn summary(&self, names: &[String]) -> ReportSummary {
        ReportSummary {
            p_closed: self.p_closed,
            degeneracy: self.degeneracy.as_ref().map(|d| {
                d.components()
                    .iter()
                    .map(|c| ComponentSummary {
                        component: c.poly.format_with(names),
                        multiplicity: c.multiplicity,
                        degree: c.poly.total_degree().unwrap_or(0),
                    })
                    .collect()
            }),
            deg_f: self.deg_f,
            deg_kernel: self.deg_kernel,
            deg_degeneracy: self.deg_degeneracy,
            predicted_deg_degeneracy: self.predicted_deg_degeneracy,
            cartier_integrable: self.cartier_integrable,
            cartier: self.cartier.as_ref().map(|c| c.format_with(names)),
            kernel: self.kernel.as_ref().map(|c| c.format_with(names)),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ComponentSummary {
    pub component: String,
    pub multiplicity: i64,
    pub degree: u32,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ReportSummary {
    pub p_closed: bool,
    pub degeneracy: Option<Vec<ComponentSummary>>,
    #[serde(rename = "deg_F")]
    pub deg_f: Option<i64>,
    pub deg_kernel: Option<i64>,
    pub deg_degeneracy: Option<i64>,
    pub predicted_deg_degeneracy: Option<i64>,
    pub cartier_integrable: Option<bool>,
    pub cartier: Option<String>,
    pub kernel: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;

    fn vars<F: Field>(r: &F, n: usize) -> Vec<MultiPoly<F>> {
        (0..n).map(|i| MultiPoly::var(r, n, i)).collect()
    }

    #[test]
    fn from_form_validation() {
        let r = Fq::prime(5).unwrap();
        let x = vars(&r, 3);
        let d: Vec<_> = (0..3).map(|i| DiffForm::dx(&r, 3, i)).collect();
        let radial = d[1].scale(&x[0]).sub(&d[0].scale(&x[1]));
        let f = Foliation::from_form(Ambient::Projective(2), radial, true).unwrap();
        assert_eq!(f.degree(), Some(0));
        assert!(matches!(
            Foliation::from_form(Ambient::Projective(2), d[0].clone(), true),
            Err(Error::Euler { .. })
        ));
        match Foliation::from_form(Ambient::Affine(3), d[1].scale(&x[0]), true) {
            Err(Error::Saturation { witness }) => assert_eq!(witness, "x"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn koszul_examples() {
        let r = Fq::prime(5).unwrap();
        let d: Vec<_> = (0..3).map(|i| DiffForm::dx(&r, 3, i)).collect();
        let f = Foliation::from_form(Ambient::Affine(3), d[2].clone(), true).unwrap();
        let gens = f.koszul_generators().unwrap();
        assert_eq!(gens.len(), 2);
        for v in &gens {
            assert!(f.form().pair(v).is_zero());
            assert!(f.p_curvature(v).unwrap().is_zero());
        }
        assert!(f.is_p_closed().unwrap());
    }

    #[test]
    fn plane_field_p_curvature() {
        // v = a x d_x + b y d_y over F_25 with a/b outside F_5
        let r = Fq::new(5, 2).unwrap();
        let x = vars(&r, 2);
        let (a, b) = (r.gen(), r.one());
        let v = VectorField::new(vec![x[0].scale(&a), x[1].scale(&b)]);
        let f = Foliation::from_vector_field(&v).unwrap();
        let gens = f.koszul_generators().unwrap();
        assert_eq!(gens.len(), 1);
        let pc = f.p_curvature(&v).unwrap();
        let c = r.sub(&r.mul(&a, &r.pow(&b, 5)), &r.mul(&r.pow(&a, 5), &b));
        assert_eq!(pc, x[0].mul(&x[1]).scale(&c));
        assert!(!f.is_p_closed().unwrap());
        let delta = f.degeneracy_divisor().unwrap();
        assert_eq!(delta.degree(), 2);
        assert!(delta.is_reduced());
        let w = f.closed_defining_form().unwrap();
        assert!(w.d().is_zero());
    }

    #[test]
    fn log_foliation_requires_weighted_degree_zero() {
        let r = Fq::prime(7).unwrap();
        let x = vars(&r, 3);
        let weights = [r.from_i64(1), r.from_i64(1), r.from_i64(1)];
        assert!(log_foliation(Ambient::Projective(2), &x, &weights).is_err());
        let weights = [r.from_i64(1), r.from_i64(2), r.from_i64(-3)];
        let f = log_foliation(Ambient::Projective(2), &x, &weights).unwrap();
        assert_eq!(f.degree(), Some(1));
        for h in &x {
            assert!(f.invariant_hypersurface(h).unwrap());
        }
        let line = x[0].add(&x[1]).add(&x[2]);
        assert!(!f.invariant_hypersurface(&line).unwrap());
    }

    #[test]
    fn intersect_examples() {
        let r = Fq::prime(5).unwrap();
        let x = vars(&r, 2);
        let d: Vec<_> = (0..2).map(|i| DiffForm::dx(&r, 2, i)).collect();
        let f1 = Foliation::from_form(Ambient::Affine(2), d[0].clone(), true).unwrap();
        let f2 = Foliation::from_form(Ambient::Affine(2), d[1].clone(), true).unwrap();
        let (t, e) = intersect_distributions(&f1, &f2).unwrap();
        assert_eq!(t, d[0].wedge(&d[1]));
        assert!(e.is_zero());
        let f3 = Foliation::from_form(Ambient::Affine(2), d[0].scale(&x[0]).add(&d[1].scale(&x[1])), true).unwrap();
        let (t, e) = intersect_distributions(&f1, &f3).unwrap();
        assert_eq!(t, d[0].wedge(&d[1]));
        assert_eq!(e, Divisor::prime(Ambient::Affine(2), &x[1], 1));
        assert_eq!(intersect_distributions(&f1, &f1), Err(Error::DegenerateIntersection));
    }
}
