//! Shared fixtures for the criterion benches.

use pcurv::foliation::log_foliation;
use pcurv::{Ambient, Foliation, Fq, MultiPoly, Ring};

/// Coordinate hyperplanes on `A^n` over `F_{p^2}` with weights `1, t, t^2, ...`.
pub fn log_generic(p: u64, n: usize) -> Foliation<Fq> {
    let r = Fq::new(p, 2).unwrap();
    let t = r.gen();
    let x: Vec<_> = (0..n).map(|i| MultiPoly::var(&r, n, i)).collect();
    let w: Vec<_> = (0..n).map(|i| r.pow(&t, i as u64)).collect();
    log_foliation(Ambient::Affine(n), &x, &w).unwrap()
}

/// Four hyperplanes in general position on `P^3` with weights summing to zero.
pub fn projective_log(p: u64) -> Foliation<Fq> {
    let r = Fq::new(p, 2).unwrap();
    let t = r.gen();
    let x: Vec<_> = (0..4).map(|i| MultiPoly::var(&r, 4, i)).collect();
    let l = x[0].add(&x[1]).add(&x[2]).add(&x[3]);
    let comps = [x[1].clone(), x[2].clone(), x[3].clone(), l];
    let w = [r.one(), t, r.add(&t, &r.one()), r.neg(&r.add(&r.add(&t, &t), &r.from_i64(2)))];
    log_foliation(Ambient::Projective(3), &comps, &w).unwrap()
}
