use pcurv::divisor::{Ambient, Divisor};
use pcurv::field::{Fq, Ring};
use pcurv::foliation::{log_foliation, Foliation};
use pcurv::forms::{projectivize, DiffForm};
use pcurv::maps::{verify_pullback_degeneracy, verify_restriction_degeneracy, RationalMap};
use pcurv::poly::MultiPoly;

fn vars(r: &Fq, n: usize) -> Vec<MultiPoly<Fq>> {
    (0..n).map(|i| MultiPoly::var(r, n, i)).collect()
}

/// `x_last -> x_last^l` on `A^n`.
fn last_power(r: &Fq, n: usize, l: u32) -> RationalMap<Fq> {
    let mut e = vec![1; n];
    e[n - 1] = l;
    RationalMap::monomial_cover(r, Ambient::Affine(n), &e).unwrap()
}

fn check(phi: &RationalMap<Fq>, g: &Foliation<Fq>, l: u32, row: usize) {
    let p = g.ring().characteristic() as i64;
    let cmp = verify_pullback_degeneracy(phi, g).unwrap();
    let n = phi.source().nvars();
    let h = MultiPoly::var(g.ring(), n, n - 1);
    let hh = Divisor::prime(phi.source(), &h, l as i64 - 1);
    let expected = match row {
        1 => cmp.pullback_delta_g.clone(),
        2 => cmp.pullback_delta_g.add(&hh.scale(p)),
        _ => cmp.pullback_delta_g.sub(&hh),
    };
    assert!(cmp.matches, "row {row}: predicted {} vs {}", cmp.predicted, cmp.delta_f);
    assert_eq!(cmp.delta_f, expected, "row {row}");
}

#[test]
fn monomial_cover_rows() {
    for p in [5u64, 7] {
        let r = Fq::new(p, 2).unwrap();
        let t = r.gen();
        for l in [2u32, 3] {
            let x = vars(&r, 3);
            let one = MultiPoly::one(&r, 3);
            let w = [r.one(), t, r.add(&t, &r.one())];
            let g1 = log_foliation(Ambient::Affine(3), &[x[0].clone(), x[1].clone(), x[2].sub(&one)], &w).unwrap();
            check(&last_power(&r, 3, l), &g1, l, 1);
            let y = vars(&r, 2);
            let d: Vec<_> = (0..2).map(|i| DiffForm::dx(&r, 2, i)).collect();
            let one2 = MultiPoly::one(&r, 2);
            // v = a x d/dx + b (y - 1) d/dy, w = v_x dy - v_y dx
            let g2 = Foliation::from_form(Ambient::Affine(2), d[1].scale(&y[0].scale(&t)).sub(&d[0].scale(&y[1].sub(&one2))), true).unwrap();
            check(&last_power(&r, 2, l), &g2, l, 2);
            let g3 = Foliation::from_form(Ambient::Affine(2), d[1].scale(&y[0].scale(&t)).sub(&d[0].scale(&y[1])), true).unwrap();
            check(&last_power(&r, 2, l), &g3, l, 3);
            let g3b = log_foliation(Ambient::Affine(3), &[x[0].clone(), x[1].clone(), x[2].clone()], &w).unwrap();
            check(&last_power(&r, 3, l), &g3b, l, 3);
            // a cylinder over the plane example: row 2 in dimension 3
            let dd: Vec<_> = (0..3).map(|i| DiffForm::dx(&r, 3, i)).collect();
            let g2b = Foliation::from_form(Ambient::Affine(3), dd[2].scale(&x[0].scale(&t)).sub(&dd[0].scale(&x[2].sub(&one))), true).unwrap();
            check(&last_power(&r, 3, l), &g2b, l, 2);
        }
    }
}

#[test]
fn restriction_to_generic_plane() {
    let r = Fq::new(7, 2).unwrap();
    let i = r.gen();
    let x = vars(&r, 3);
    let d: Vec<_> = (0..3).map(|k| DiffForm::dx(&r, 3, k)).collect();
    let w = d[0].scale(&x[1].mul(&x[2]).scale(&i)).add(&d[1].scale(&x[0].mul(&x[2]))).add(&d[2].scale(&x[0].mul(&x[1])));
    let f = Foliation::from_form(Ambient::Projective(3), projectivize(&w, 0), true).unwrap();
    let u = vars(&r, 3);
    let c = |k: i64| r.from_i64(k);
    // x3 = 2 u0 + 3 u1 + 5 u2 (+ t u0)
    let x3 = u[0].scale(&r.add(&c(2), &i)).add(&u[1].scale(&c(3))).add(&u[2].scale(&c(5)));
    let emb = RationalMap::embedding(Ambient::Projective(2), Ambient::Projective(3), vec![u[0].clone(), u[1].clone(), u[2].clone(), x3]).unwrap();
    let cmp = verify_restriction_degeneracy(&f, &emb).unwrap();
    assert!(cmp.matches, "predicted {}", cmp.predicted);
}
