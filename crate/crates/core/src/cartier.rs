//! The Cartier operator on closed forms of a coordinate chart.
//!
//! A term `c x^A dx_I` survives exactly when `A_j = -1 mod p` for `j` in `I` and
//! `A_m = 0 mod p` otherwise; it maps to `c^(1/p) x^((A + 1_I)/p - 1_I) dx_I`.
//! Rational forms go through `C(N/D) = C(D^(p-1) N) / D`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Field, PerfectField};
use crate::forms::{DiffForm, RationalForm};
use crate::poly::{Monomial, MultiPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosednessClass<F: Field> {
    /// `witness = d alpha`, nonzero.
    NotClosed { witness: DiffForm<F> },
    /// The terms no polynomial primitive can produce; `alpha - obstruction` is exact.
    ClosedNotExact { obstruction: DiffForm<F> },
    /// `d primitive = alpha`.
    Exact { primitive: MultiPoly<F> },
}

impl<F: Field> ClosednessClass<F> {
    pub fn tag(&self) -> &'static str {
        match self {
            ClosednessClass::NotClosed { .. } => "not-closed",
            ClosednessClass::ClosedNotExact { .. } => "closed-not-exact",
            ClosednessClass::Exact { .. } => "exact",
        }
    }
}

/// Classifies a polynomial 1-form by monomial-wise integration.
pub fn classify_closedness<F: Field>(alpha: &DiffForm<F>) -> Result<ClosednessClass<F>> {
    if alpha.degree() != 1 && !alpha.is_zero() {
        return Err(Error::Unsupported(format!("closedness of a {}-form", alpha.degree())));
    }
    let dw = alpha.d();
    if !dw.is_zero() {
        return Ok(ClosednessClass::NotClosed { witness: dw });
    }
    let ring = alpha.ring();
    let n = alpha.nvars();
    // group c x^(B - e_i) dx_i by B
    let mut groups: BTreeMap<Monomial, Vec<(usize, F::Elem)>> = BTreeMap::new();
    for (i, a) in alpha.components().iter().enumerate() {
        for (m, c) in a.terms() {
            let b = m.with(i, m.exps()[i] + 1);
            groups.entry(b).or_default().push((i, c.clone()));
        }
    }
    let mut primitive = MultiPoly::zero(ring, n);
    let mut obstruction = DiffForm::zero(ring, n, 1);
    for (b, entries) in groups {
        let pivot = entries.iter().find_map(|(i, c)| {
            let bi = ring.from_i64(b.exps()[*i] as i64);
            (!ring.is_zero(&bi)).then(|| ring.div(c, &bi).unwrap())
        });
        match pivot {
            Some(c) => primitive = primitive.add(&MultiPoly::monomial(ring, b, c)),
            None => {
                for (i, c) in entries {
                    let m = b.with(i, b.exps()[i] - 1);
                    obstruction = obstruction.add(&DiffForm::term(&[i], MultiPoly::monomial(ring, m, c)));
                }
            }
        }
    }
    Ok(if obstruction.is_zero() {
        ClosednessClass::Exact { primitive }
    } else {
        ClosednessClass::ClosedNotExact { obstruction }
    })
}

/// `C(alpha)` for a closed polynomial form.
pub fn cartier_transform<F: PerfectField>(alpha: &DiffForm<F>) -> Result<DiffForm<F>> {
    let ring = alpha.ring();
    let p = ring.characteristic();
    if p == 0 {
        return Err(Error::Unsupported("Cartier operator in characteristic zero".into()));
    }
    let dw = alpha.d();
    if !dw.is_zero() {
        return Err(Error::Precondition { what: "form is not closed".into(), witness: dw.to_string() });
    }
    let n = alpha.nvars();
    let p32 = p as u32;
    let mut out = DiffForm::zero(ring, n, alpha.degree());
    for (b, f) in alpha.terms() {
        let idx = b.indices();
        let mut acc = MultiPoly::zero(ring, n);
        for (m, c) in f.terms() {
            let mut exps = Vec::with_capacity(n);
            let mut ok = true;
            for (k, &e) in m.exps().iter().enumerate() {
                let shifted = if idx.contains(&k) { e + 1 } else { e };
                if shifted % p32 != 0 {
                    ok = false;
                    break;
                }
                exps.push(if idx.contains(&k) { shifted / p32 - 1 } else { shifted / p32 });
            }
            if ok {
                acc = acc.add(&MultiPoly::monomial(ring, Monomial::new(&exps), ring.pth_root(c)?));
            }
        }
        out = out.add(&DiffForm::term(&idx, acc));
    }
    Ok(out)
}

/// `C(alpha)` for a closed rational form.
pub fn cartier_rational<F: PerfectField>(alpha: &RationalForm<F>) -> Result<RationalForm<F>> {
    let p = alpha.num().ring().characteristic();
    if p == 0 {
        return Err(Error::Unsupported("Cartier operator in characteristic zero".into()));
    }
    let dw = alpha.d();
    if !dw.is_zero() {
        return Err(Error::Precondition { what: "form is not closed".into(), witness: format!("{dw:?}") });
    }
    let den = alpha.den();
    let lifted = alpha.num().scale(&den.pow(p - 1));
    let c = cartier_transform(&lifted)?;
    RationalForm::new(c, den.clone())
}
