//! Codimension-two subdistributions of a foliation on `P^n` by linear algebra.
//!
//! A subdistribution of degree `d` is a projective 2-form `T` with
//! coefficients of degree `d + 1`, `i_R T = 0` and `T ^ w = 0`. Off the
//! singular set of `w` the second condition means `T = w ^ eta`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{PerfectField, Ring, Sampling};
use crate::foliation::{is_integrable, Foliation};
use crate::forms::{Basis, DiffForm};
use crate::linalg::Matrix;
use crate::poly::{Monomial, MultiPoly};

#[derive(Clone, Debug)]
pub struct SubdistributionSystem<F: PerfectField> {
    pub delta: u32,
    /// One unknown per basis 2-form and monomial of degree `delta + 1`.
    pub unknowns: Vec<(Basis, Monomial)>,
    pub rank: usize,
    pub solutions: Vec<DiffForm<F>>,
}

impl<F: PerfectField> SubdistributionSystem<F> {
    pub fn dimension(&self) -> usize {
        self.unknowns.len() - self.rank
    }
}

fn require_projective<F: PerfectField>(f: &Foliation<F>) -> Result<()> {
    if !f.ambient().is_projective() || f.codim() != 1 {
        return Err(Error::Unsupported("subdistributions of codimension-one foliations on P^n only".into()));
    }
    Ok(())
}

pub fn subdistribution_space<F: PerfectField>(f: &Foliation<F>, delta: u32) -> Result<SubdistributionSystem<F>> {
    require_projective(f)?;
    let ring = f.ring();
    let w = f.form();
    let n = w.nvars();
    let radial = crate::forms::VectorField::radial(ring, n);
    let mut unknowns = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (b, _) = Basis::from_indices(&[i, j]).unwrap();
            for m in Monomial::all_of_degree(n, delta + 1) {
                unknowns.push((b, m));
            }
        }
    }
    // constraint coordinate -> sparse row
    let mut rows: BTreeMap<(u8, Basis, Monomial), Vec<(usize, F::Elem)>> = BTreeMap::new();
    for (col, (b, m)) in unknowns.iter().enumerate() {
        let t = DiffForm::term(&b.indices(), MultiPoly::monomial(ring, m.clone(), ring.one()));
        for (family, image) in [(0u8, t.contract(&radial)), (1u8, t.wedge(w))] {
            for (ob, coeff) in image.terms() {
                for (om, c) in coeff.terms() {
                    rows.entry((family, *ob, om.clone())).or_default().push((col, c.clone()));
                }
            }
        }
    }
    let mut mat = Matrix::new(ring, unknowns.len());
    for entries in rows.into_values() {
        let mut row = vec![ring.zero(); unknowns.len()];
        for (c, e) in entries {
            row[c] = ring.add(&row[c], &e);
        }
        mat.push_row(row);
    }
    let kernel = mat.kernel();
    let rank = unknowns.len() - kernel.len();
    let solutions = kernel
        .into_iter()
        .map(|v| {
            let mut t = DiffForm::zero(ring, n, 2);
            for ((b, m), c) in unknowns.iter().zip(v) {
                if !ring.is_zero(&c) {
                    t = t.add(&DiffForm::term(&b.indices(), MultiPoly::monomial(ring, m.clone(), c)));
                }
            }
            t
        })
        .collect();
    Ok(SubdistributionSystem { delta, unknowns, rank, solutions })
}

#[derive(Clone, Debug)]
pub struct DistminResult<F: PerfectField> {
    /// `None` when no admissible witness exists up to the bound.
    pub delta_star: Option<u32>,
    pub witness: Option<DiffForm<F>>,
    pub witness_integrable: Option<bool>,
    /// Solution-space dimension for each `delta` examined.
    pub dimensions: Vec<usize>,
}

/// Rank of the skew matrix of `t` at a point is at most 2 everywhere sampled
/// and exactly 2 somewhere.
fn corank_two<F: PerfectField + Sampling>(t: &DiffForm<F>, rng: &mut ChaCha8Rng) -> bool {
    let s = t.ring().sampler();
    let big = &s.big;
    let n = t.nvars();
    let mapped: Vec<(Vec<usize>, MultiPoly<F::Big>)> =
        t.terms().map(|(b, c)| (b.indices(), c.map_ring(big, |a| s.embed(a)))).collect();
    let mut seen_two = false;
    for _ in 0..5 {
        let pt: Vec<_> = (0..n).map(|_| big.random_elem(rng)).collect();
        let mut m = Matrix::new(big, n);
        let mut rows = vec![vec![big.zero(); n]; n];
        for (idx, c) in &mapped {
            let v = c.eval(&pt);
            rows[idx[0]][idx[1]] = v.clone();
            rows[idx[1]][idx[0]] = big.neg(&v);
        }
        for r in rows {
            m.push_row(r);
        }
        match m.rank() {
            0 => {}
            2 => seen_two = true,
            _ => return false,
        }
    }
    seen_two
}

/// Smallest `delta <= delta_max` admitting a content-free, generically
/// decomposable solution.
pub fn distmin2<F: PerfectField + Sampling>(f: &Foliation<F>, delta_max: u32) -> Result<DistminResult<F>> {
    distmin2_seeded(f, delta_max, 0xd157)
}

/// `distmin2` with an explicit seed for the random combinations and sample points.
pub fn distmin2_seeded<F: PerfectField + Sampling>(f: &Foliation<F>, delta_max: u32, seed: u64) -> Result<DistminResult<F>> {
    require_projective(f)?;
    let ring = f.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dims: Vec<usize> = Vec::new();
    for delta in 0..=delta_max {
        let sys = subdistribution_space(f, delta)?;
        let dim = sys.dimension();
        if dims.last().is_some_and(|&prev| dim < prev) {
            return Err(Error::Internal(format!("solution dimension dropped from {} to {dim} at degree {delta}", dims.last().unwrap())));
        }
        dims.push(dim);
        if dim == 0 {
            continue;
        }
        let mut candidates = sys.solutions.clone();
        for _ in 0..4 {
            let mut t = DiffForm::zero(ring, f.form().nvars(), 2);
            for s in &sys.solutions {
                t = t.add(&s.scale_elem(&ring.random_elem(&mut rng)));
            }
            if !t.is_zero() {
                candidates.push(t);
            }
        }
        for t in candidates {
            if !t.content().is_constant() || !corank_two(&t, &mut rng) {
                continue;
            }
            let integrable = is_integrable(&t);
            return Ok(DistminResult {
                delta_star: Some(delta),
                witness: Some(t),
                witness_integrable: Some(integrable),
                dimensions: dims,
            });
        }
    }
    Ok(DistminResult { delta_star: None, witness: None, witness_integrable: None, dimensions: dims })
}
