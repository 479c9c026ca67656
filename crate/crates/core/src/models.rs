//! Foliations over `Z[a]/(f)` and their reductions modulo primes `(p, g(a))`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::divisor::Ambient;
use crate::error::{Error, Result};
use crate::field::{factor_mod_p, primes_up_to, FpPoly, Fq, Integers, NrElem, NumberRing};
use crate::foliation::{integrability_defect, Foliation};
use crate::forms::DiffForm;
use crate::poly::Monomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralModel {
    ring: NumberRing,
    ambient: Ambient,
    form: DiffForm<NumberRing>,
    /// The true form is `form / denominator`; primes dividing it are bad.
    denominator: BigInt,
}

/// Primes tried when checking saturation in characteristic zero.
const PROBE_PRIMES: [u64; 8] = [101, 103, 107, 109, 113, 127, 131, 137];

impl IntegralModel {
    /// Saturation over the fraction field is probed at a few large primes: a
    /// genuine common factor survives every reduction.
    pub fn new(ring: NumberRing, ambient: Ambient, form: DiffForm<NumberRing>, denominator: BigInt) -> Result<Self> {
        if form.nvars() != ambient.nvars() {
            return Err(Error::DimensionMismatch { left: form.nvars(), right: ambient.nvars() });
        }
        if form.is_zero() || denominator.is_zero() {
            return Err(Error::DegenerateInput("zero form or denominator".into()));
        }
        let m = IntegralModel { ring, ambient, form, denominator };
        let mut last = None;
        for p in PROBE_PRIMES {
            let Ok(factors) = factor_mod_p(m.ring.minpoly(), p) else { continue };
            let Some((g, _)) = factors.into_iter().min_by_key(|(g, _)| g.degree()) else { continue };
            if p.pow(g.degree().unwrap() as u32) > 1 << 20 {
                continue;
            }
            match m.reduce_form(p, &g).and_then(|w| Foliation::from_form(m.ambient, w, false)) {
                Ok(_) => return Ok(m),
                Err(e @ Error::Saturation { .. }) => last = Some(e),
                Err(_) => {}
            }
        }
        match last {
            Some(e) => Err(e),
            None => Ok(m),
        }
    }
    pub fn ring(&self) -> &NumberRing {
        &self.ring
    }
    pub fn ambient(&self) -> Ambient {
        self.ambient
    }
    pub fn form(&self) -> &DiffForm<NumberRing> {
        &self.form
    }
    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Coefficientwise reduction, without any validation of the result.
    pub fn reduce_form(&self, p: u64, g: &FpPoly) -> Result<DiffForm<Fq>> {
        let fbar = FpPoly::from_signed(p, self.ring.minpoly());
        if g.prime() != p || g.degree().unwrap_or(0) == 0 || !fbar.rem(g).is_zero() {
            return Err(Error::InconsistentPrime(format!("{g} does not divide {fbar} modulo {p}")));
        }
        let field = Fq::with_modulus(g.clone())?;
        Ok(self.form.map_ring(&field, |c| self.ring.reduce(c, &field)))
    }
}

fn bad(p: u64, reason: impl Into<String>) -> Error {
    Error::BadReduction { p, reason: reason.into() }
}

/// The reduction of `m` modulo `(p, g(a))` as a validated foliation.
pub fn reduce_model(m: &IntegralModel, p: u64, g: &FpPoly) -> Result<Foliation<Fq>> {
    if m.denominator.is_multiple_of(&BigInt::from(p)) {
        return Err(bad(p, "divides the denominator"));
    }
    let w = m.reduce_form(p, g)?;
    if w.is_zero() {
        return Err(bad(p, "form vanishes"));
    }
    if w.max_coeff_degree() != m.form.max_coeff_degree() {
        return Err(bad(p, "degree drop"));
    }
    Foliation::from_form(m.ambient, w, true).map_err(|e| match e {
        Error::Saturation { witness } => bad(p, format!("saturation lost, common factor {witness}")),
        Error::Euler { witness } => bad(p, format!("euler condition lost, {witness}")),
        Error::Integrability { witness } => bad(p, format!("integrability lost, {witness}")),
        other => other,
    })
}

/// The arithmetic of one reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanData {
    pub p_closed: bool,
    pub deg_degeneracy: Option<i64>,
    pub squarefree: Option<bool>,
    pub cartier_integrable: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub p: u64,
    pub factor: String,
    pub k: u32,
    /// `Err` carries the reason a prime is bad or the computation failed.
    pub outcome: std::result::Result<ScanData, String>,
}

pub const SCAN_CSV_HEADER: &str = "p,factor,k,p_closed,deg_degeneracy,squarefree,cartier_integrable";

impl ScanRow {
    /// Bad rows put `bad:<reason>` in the `p_closed` column and leave the rest empty.
    pub fn csv_line(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        match &self.outcome {
            Ok(d) => format!(
                "{},{},{},{},{},{},{}",
                self.p,
                self.factor,
                self.k,
                d.p_closed,
                opt(d.deg_degeneracy.map(|x| x.to_string())),
                opt(d.squarefree.map(|x| x.to_string())),
                opt(d.cartier_integrable.map(|x| x.to_string()))
            ),
            Err(r) => format!("{},{},{},bad:{},,,", self.p, self.factor, self.k, r.replace(',', ";")),
        }
    }
}

fn scan_one(m: &IntegralModel, p: u64, g: &FpPoly) -> std::result::Result<ScanData, String> {
    let f = reduce_model(m, p, g).map_err(|e| e.to_string())?;
    let rep = f.report().map_err(|e| e.to_string())?;
    Ok(ScanData {
        p_closed: rep.p_closed,
        deg_degeneracy: rep.deg_degeneracy,
        squarefree: rep.degeneracy.as_ref().map(|d| d.is_reduced()),
        cartier_integrable: rep.cartier_integrable,
    })
}

/// One row per prime `p <= pmax` and monic irreducible factor of `f mod p`,
/// in order of `(p, factor)`.
pub fn prime_scan(m: &IntegralModel, pmax: u64) -> Vec<ScanRow> {
    let mut rows = Vec::new();
    for p in primes_up_to(pmax) {
        match factor_mod_p(m.ring.minpoly(), p) {
            Ok(factors) => {
                for (g, _) in factors {
                    let outcome = scan_one(m, p, &g);
                    rows.push(ScanRow { p, factor: g.to_string(), k: g.degree().unwrap() as u32, outcome });
                }
            }
            Err(e) => rows.push(ScanRow { p, factor: String::new(), k: 0, outcome: Err(e.to_string()) }),
        }
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KroneckerReport {
    pub good_primes: Vec<u64>,
    pub bad_primes: Vec<u64>,
    pub primes_with_root: Vec<u64>,
    pub density: f64,
    pub rational_like: bool,
}

/// Density of good primes `p <= pmax` at which `f` has a root modulo `p`.
/// A prime is bad when it divides the leading coefficient or `f mod p` has a
/// repeated factor.
pub fn kronecker_probe(f: &[BigInt], pmax: u64) -> Result<KroneckerReport> {
    let deg = f.iter().rposition(|c| !c.is_zero());
    if deg.unwrap_or(0) == 0 {
        return Err(Error::DegenerateInput("constant polynomial".into()));
    }
    let (mut good, mut badp, mut roots) = (Vec::new(), Vec::new(), Vec::new());
    for p in primes_up_to(pmax) {
        match factor_mod_p(f, p) {
            Ok(fs) if fs.iter().all(|(_, m)| *m == 1) => {
                good.push(p);
                if fs.iter().any(|(g, _)| g.degree() == Some(1)) {
                    roots.push(p);
                }
            }
            _ => badp.push(p),
        }
    }
    let density = if good.is_empty() { 0.0 } else { roots.len() as f64 / good.len() as f64 };
    Ok(KroneckerReport {
        rational_like: !good.is_empty() && roots.len() == good.len(),
        good_primes: good,
        bad_primes: badp,
        primes_with_root: roots,
        density,
    })
}

/// `w ^ dw` over `Z` with its integer content split off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerDefect {
    pub form: DiffForm<Integers>,
    /// Nonnegative gcd of all coefficients.
    pub content: BigInt,
    /// `Some((c, m))` when the defect is `c * x^m` times one basis form.
    pub monomial: Option<(BigInt, Monomial)>,
}

impl IntegerDefect {
    /// `Some(s)` when the defect is `s * p * x^m * dx_I` with `s = +-1`.
    pub fn sign_at(&self, p: u64) -> Option<i64> {
        let (c, _) = self.monomial.as_ref()?;
        let pb = BigInt::from(p);
        if c.abs() == pb {
            Some(if c.is_positive() { 1 } else { -1 })
        } else {
            None
        }
    }
}

pub fn integrability_defect_integer(w: &DiffForm<Integers>) -> Result<IntegerDefect> {
    if w.degree() != 1 {
        return Err(Error::Unsupported(format!("integrability defect of a {}-form", w.degree())));
    }
    let form = integrability_defect(w).remove(0);
    let mut content = BigInt::zero();
    for f in form.coeffs() {
        for (_, c) in f.terms() {
            content = content.gcd(c);
        }
    }
    let monomial = {
        let mut basis = form.terms();
        match (basis.next(), basis.next()) {
            (Some((_, f)), None) if f.is_monomial() => {
                let (m, c) = f.leading().unwrap();
                Some((c.clone(), m.clone()))
            }
            _ => None,
        }
    };
    Ok(IntegerDefect { form, content, monomial })
}

/// `Z` as a number ring, for models with rational coefficients.
pub fn integer_model(ambient: Ambient, form: &DiffForm<Integers>) -> Result<IntegralModel> {
    let ring = NumberRing::integers();
    let w = form.map_ring(&ring, |c| NrElem(vec![c.clone()]));
    IntegralModel::new(ring, ambient, w, BigInt::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Ring;
    use crate::foliation::log_form;
    use crate::poly::MultiPoly;

    fn gaussian_log() -> IntegralModel {
        let r = NumberRing::new(vec![1.into(), 0.into(), 1.into()]).unwrap();
        let x: Vec<_> = (0..3).map(|i| MultiPoly::var(&r, 3, i)).collect();
        let w = log_form(&x, &[r.elem(&[0, 1]), r.one(), r.one()]);
        IntegralModel::new(r, Ambient::Affine(3), w, BigInt::one()).unwrap()
    }

    #[test]
    fn reductions() {
        let m = gaussian_log();
        let f5 = reduce_model(&m, 5, &FpPoly::new(5, vec![2, 1])).unwrap();
        assert!(f5.is_p_closed().unwrap());
        let f7 = reduce_model(&m, 7, &FpPoly::new(7, vec![1, 0, 1])).unwrap();
        assert!(!f7.is_p_closed().unwrap());
        let f2 = reduce_model(&m, 2, &FpPoly::new(2, vec![1, 1])).unwrap();
        assert!(f2.is_p_closed().unwrap());
        assert!(matches!(reduce_model(&m, 7, &FpPoly::new(7, vec![1, 1])), Err(Error::InconsistentPrime(_))));
    }

    #[test]
    fn scan_rows() {
        let rows = prime_scan(&gaussian_log(), 13);
        let closed: Vec<u64> = rows.iter().filter(|r| r.outcome.as_ref().unwrap().p_closed).map(|r| r.p).collect();
        assert_eq!(closed, vec![2, 5, 5, 13, 13]);
        assert_eq!(rows.len(), 8);
        assert_eq!(rows, prime_scan(&gaussian_log(), 13));
    }

    #[test]
    fn kronecker() {
        let k = kronecker_probe(&[BigInt::from(-2), BigInt::from(3)], 50).unwrap();
        assert!(k.rational_like);
        assert_eq!(k.bad_primes, vec![3]);
        let k = kronecker_probe(&[BigInt::from(1), BigInt::zero(), BigInt::one()], 500).unwrap();
        assert!(!k.rational_like);
        assert!((k.density - 0.5).abs() < 0.1);
    }

    #[test]
    fn integer_defects() {
        let z = Integers;
        let x: Vec<_> = (0..3).map(|i| MultiPoly::var(&z, 3, i)).collect();
        let d: Vec<_> = (0..3).map(|i| DiffForm::dx(&z, 3, i)).collect();
        let closed = DiffForm::differential(&x[0].pow(2).mul(&x[1]));
        assert!(integrability_defect_integer(&closed).unwrap().form.is_zero());
        assert!(integrability_defect_integer(&d[1].scale(&x[0])).unwrap().form.is_zero());
        let w = d[0].scale(&x[0].pow(2)).add(&d[1].scale(&x[2].pow(3).mul(&x[1].pow(2))));
        let def = integrability_defect_integer(&w).unwrap();
        assert_eq!(def.content, BigInt::from(3));
        assert_eq!(def.sign_at(3), Some(-1));
        assert_eq!(def.monomial.unwrap().1, Monomial::new(&[2, 2, 2]));
    }
}
