use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use num_bigint::BigInt;
use serde_json::{json, Value};

use pcurv::cartier::{cartier_transform, classify_closedness, ClosednessClass};
use pcurv::distmin::distmin2_seeded;
use pcurv::foliation::{integrability_defect, is_integrable};
use pcurv::maps::{verify_pullback_degeneracy, verify_restriction_degeneracy};
use pcurv::models::{integrability_defect_integer, prime_scan, SCAN_CSV_HEADER};
use pcurv::{
    Divisor, Document, Foliation, Fq, Integers, IntegralModel, NumberRing, PerfectField, RationalMap, Rationals,
    Ring, RingSpec, Sampling, Syntax,
};

use crate::report::Report;
use crate::{lib_error, Global};

pub enum Task {
    Analyze,
    Cartier,
    Degeneracy,
    Pullback,
    Restrict,
    Scan { pmax: u64, minpoly: Option<String> },
    Distmin { delta_max: Option<u32>, witness_out: Option<PathBuf> },
    Defect,
}

impl Task {
    fn name(&self) -> &'static str {
        match self {
            Task::Analyze => "analyze",
            Task::Cartier => "cartier",
            Task::Degeneracy => "degeneracy",
            Task::Pullback => "pullback",
            Task::Restrict => "restrict",
            Task::Scan { .. } => "scan",
            Task::Distmin { .. } => "distmin2",
            Task::Defect => "defect",
        }
    }
}

trait OrLib<T> {
    fn lib(self) -> anyhow::Result<T>;
}

impl<T> OrLib<T> for pcurv::Result<T> {
    fn lib(self) -> anyhow::Result<T> {
        self.map_err(lib_error)
    }
}

fn ring_spec(doc: &Document, g: &Global) -> anyhow::Result<RingSpec> {
    let over = g.field.as_deref().map(str::parse::<RingSpec>).transpose().lib()?;
    doc.ring_spec(over.as_ref()).lib()
}

pub fn dispatch(doc: &Document, g: &Global, task: Task) -> anyhow::Result<Report> {
    let mut spec = ring_spec(doc, g)?;
    if let Task::Scan { minpoly: Some(m), .. } = &task {
        spec = RingSpec::NumberRing { minpoly: parse_minpoly(m)? };
    }
    let mut r = Report::new(task.name());
    r.put_str("field", spec.to_string());
    let (amb, names) = doc.space().lib()?;
    r.put("space", format!("{amb} {}", names.join(" ")), json!({"ambient": amb.to_string(), "variables": names}));
    match (&task, &spec) {
        (Task::Scan { pmax, .. }, RingSpec::Integers | RingSpec::NumberRing { .. }) => scan(doc, &spec, *pmax, true, &mut r)?,
        (Task::Analyze, RingSpec::Integers | RingSpec::NumberRing { .. }) => scan(doc, &spec, 13, false, &mut r)?,
        (Task::Scan { .. }, _) => bail!("scan needs an integral model: declare `field Z` or `field NR:<minpoly>`"),
        (Task::Defect, RingSpec::Integers) => defect_integer(doc, &mut r)?,
        (Task::Distmin { delta_max, witness_out }, RingSpec::Rationals | RingSpec::Integers) => {
            distmin(doc, &Rationals, *delta_max, witness_out.as_ref(), g.seed, &mut r)?
        }
        (Task::Distmin { delta_max, witness_out }, RingSpec::Finite { .. }) => {
            distmin(doc, &spec.finite_field().lib()?, *delta_max, witness_out.as_ref(), g.seed, &mut r)?
        }
        (Task::Defect, RingSpec::Rationals) => defect_field(doc, &Rationals, &mut r)?,
        (_, RingSpec::Finite { .. }) => finite(doc, &spec.finite_field().lib()?, &task, &mut r)?,
        (t, s) => bail!("`{}` needs a finite field, but the document is over {s}; pass --field Fq:<p>^<k>", t.name()),
    }
    Ok(r)
}

/// `a^2 + 1` as coefficients, constant term first.
fn parse_minpoly(text: &str) -> anyhow::Result<Vec<BigInt>> {
    let f = Syntax::new(&Integers, &["a".to_string()]).poly(text).lib()?;
    let deg = f.total_degree().ok_or_else(|| anyhow!("zero minimal polynomial"))? as usize;
    let mut c = vec![BigInt::from(0); deg + 1];
    for (m, k) in f.terms() {
        c[m.exps()[0] as usize] = k.clone();
    }
    Ok(c)
}

fn foliation<F: PerfectField>(doc: &Document, ring: &F) -> anyhow::Result<Foliation<F>> {
    let (amb, _) = doc.space().lib()?;
    let w = doc.form(ring).lib()?.ok_or_else(|| anyhow!("the document declares no `form` or `log`"))?;
    Foliation::from_form(amb, w, true).lib()
}

fn divisor_json<F: pcurv::Field>(d: &Divisor<F>, names: &[String]) -> Value {
    let comps: Vec<Value> = d
        .components()
        .iter()
        .map(|c| json!({"component": c.poly.format_with(names), "multiplicity": c.multiplicity, "degree": c.poly.total_degree()}))
        .collect();
    json!({"components": comps, "degree": d.degree(), "text": d.format_with(names)})
}

fn put_divisor<F: pcurv::Field>(r: &mut Report, key: &str, d: &Divisor<F>, names: &[String]) {
    r.put(key, d.format_with(names), divisor_json(d, names));
}

fn finite(doc: &Document, ring: &Fq, task: &Task, r: &mut Report) -> anyhow::Result<()> {
    let (_, names) = doc.space().lib()?;
    let f = foliation(doc, ring)?;
    let w = f.form();
    r.put_str("form", w.format_with(&names));
    match task {
        Task::Analyze => analyze(doc, &f, &names, r),
        Task::Cartier => cartier(&f, &names, r),
        Task::Degeneracy => degeneracy(&f, &names, r),
        Task::Pullback => pullback(doc, &f, r),
        Task::Restrict => restrict(doc, &f, r),
        Task::Defect => defect_field(doc, ring, r),
        Task::Scan { .. } | Task::Distmin { .. } => unreachable!("dispatched earlier"),
    }
}

fn analyze(doc: &Document, f: &Foliation<Fq>, names: &[String], r: &mut Report) -> anyhow::Result<()> {
    let p = f.ring().characteristic();
    let rep = f.report().lib()?;
    r.put("p_closed", rep.p_closed.to_string(), rep.p_closed);
    if let Some(d) = f.degree() {
        r.put("degree", d.to_string(), d);
    }
    if let Some(v) = doc.vector(f.ring()).lib()? {
        let psi = f.p_curvature(&v).lib()?;
        r.put_str("p_curvature_at_vector", psi.format_with(names));
    }
    let Some(delta) = &rep.degeneracy else {
        return Ok(());
    };
    put_divisor(r, "degeneracy", delta, names);
    r.put("reduced", delta.is_reduced().to_string(), delta.is_reduced());
    if let Some(pred) = rep.predicted_deg_degeneracy {
        r.put("predicted_degree", pred.to_string(), pred);
        r.check("degree_formula", pred == delta.degree());
    }
    let cartier = rep.cartier.as_ref().unwrap();
    r.put_str("cartier_transform", cartier.format_with(names));
    r.put("cartier_integrable", rep.cartier_integrable.unwrap().to_string(), rep.cartier_integrable);
    if let Some(k) = &rep.kernel {
        r.put_str("kernel", k.format_with(names));
        if let Some(dk) = rep.deg_kernel {
            r.put("kernel_degree", dk.to_string(), dk);
        }
    }
    let chart = if f.ambient().is_projective() { delta.dehomogenize(0).lib()? } else { delta.clone() };
    let closed = f.closed_form_divisor().lib()?;
    put_divisor(r, "closed_form_divisor", &closed, &chart_names(f, names));
    r.check("closed_form_divisor_congruent_mod_p", closed.congruent_mod(&chart, p));
    let mut nonzero_invariant = true;
    for c in delta.components() {
        if c.multiplicity.rem_euclid(p as i64) != 0 {
            nonzero_invariant &= f.invariant_hypersurface(&c.poly).lib()?;
        }
    }
    r.check("components_prime_to_p_invariant", nonzero_invariant);
    let cands = doc.candidates(f.ring()).lib()?;
    if !cands.is_empty() {
        let mut rows = Vec::new();
        let mut text = Vec::new();
        let mut contained = true;
        for h in &cands {
            let inv = f.invariant_hypersurface(h).lib()?;
            let m = delta.multiplicity_of(h).unwrap_or(0);
            contained &= !inv || m != 0;
            text.push(format!("{}: invariant {inv}, multiplicity {m}", h.format_with(names)));
            rows.push(json!({"hypersurface": h.format_with(names), "invariant": inv, "multiplicity": m}));
        }
        r.put("candidates", text.join("\n"), rows);
        r.check("invariant_candidates_in_support", contained);
    }
    Ok(())
}

/// Names on chart 0: the projective chart drops the first variable.
fn chart_names(f: &Foliation<Fq>, names: &[String]) -> Vec<String> {
    if f.ambient().is_projective() {
        names[1..].to_vec()
    } else {
        names.to_vec()
    }
}

fn cartier(f: &Foliation<Fq>, names: &[String], r: &mut Report) -> anyhow::Result<()> {
    let w = f.form();
    let class = classify_closedness(w).lib()?;
    r.put_str("closedness", class.tag());
    if !matches!(class, ClosednessClass::NotClosed { .. }) {
        let c = cartier_transform(w).lib()?;
        r.put_str("cartier_of_form", c.format_with(names));
        let integ = is_integrable(&c);
        r.put("cartier_of_form_integrable", integ.to_string(), integ);
    }
    let closed = f.is_p_closed().lib()?;
    r.put("p_closed", closed.to_string(), closed);
    if !closed {
        let (c, integ) = f.cartier_transform_foliation().lib()?;
        r.put_str("cartier_transform", c.format_with(names));
        r.put("cartier_integrable", integ.to_string(), integ);
    }
    Ok(())
}

fn degeneracy(f: &Foliation<Fq>, names: &[String], r: &mut Report) -> anyhow::Result<()> {
    let rep = f.report().lib()?;
    r.put("p_closed", rep.p_closed.to_string(), rep.p_closed);
    if let Some(delta) = &rep.degeneracy {
        put_divisor(r, "degeneracy", delta, names);
        r.put("reduced", delta.is_reduced().to_string(), delta.is_reduced());
        if let (Some(df), Some(dk), Some(pred)) = (rep.deg_f, rep.deg_kernel, rep.predicted_deg_degeneracy) {
            r.put_str("degree_formula", format!("p (deg F - deg K - 1) + deg F + 2 = {} ({df}, {dk})", pred));
            r.check("degree_formula", pred == delta.degree());
        }
    }
    Ok(())
}

fn source_map<F: PerfectField>(doc: &Document, f: &Foliation<F>, key: &str) -> anyhow::Result<(RationalMap<F>, Vec<String>)> {
    let ring = f.ring();
    let (src, names, comps) = match key {
        "map" => doc.map(ring).lib()?,
        _ => doc.subspace(ring).lib()?,
    }
    .ok_or_else(|| anyhow!("the document declares no `{key}`"))?;
    let m = match key {
        "map" => RationalMap::polynomial(src, f.ambient(), comps),
        _ => RationalMap::embedding(src, f.ambient(), comps),
    };
    Ok((m.lib()?, names))
}

fn pullback(doc: &Document, g: &Foliation<Fq>, r: &mut Report) -> anyhow::Result<()> {
    let (phi, src) = source_map(doc, g, "map")?;
    r.put_str("source", format!("{} {}", phi.source(), src.join(" ")));
    let f = phi.pullback_foliation(g).lib()?;
    r.put_str("pullback_form", f.form().format_with(&src));
    let cmp = verify_pullback_degeneracy(&phi, g).lib()?;
    put_divisor(r, "degeneracy", &cmp.delta_f, &src);
    put_divisor(r, "pullback_of_degeneracy", &cmp.pullback_delta_g, &src);
    let mut text = Vec::new();
    let mut rows = Vec::new();
    for c in &cmp.ramification {
        let h = c.poly.format_with(&src);
        text.push(format!("{h}: multiplicity {}, invariant {}, kernel invariant {}", c.multiplicity, c.f_invariant, c.kernel_invariant));
        rows.push(json!({"component": h, "multiplicity": c.multiplicity, "invariant": c.f_invariant, "kernel_invariant": c.kernel_invariant}));
    }
    r.put("ramification", if text.is_empty() { "0".into() } else { text.join("\n") }, rows);
    put_divisor(r, "predicted", &cmp.predicted, &src);
    r.check("pullback_formula", cmp.matches);
    Ok(())
}

fn restrict(doc: &Document, f: &Foliation<Fq>, r: &mut Report) -> anyhow::Result<()> {
    let (emb, sub) = source_map(doc, f, "subspace")?;
    r.put_str("subspace", format!("{} {}", emb.source(), sub.join(" ")));
    let cmp = verify_restriction_degeneracy(f, &emb).lib()?;
    put_divisor(r, "degeneracy", &cmp.delta_restricted, &sub);
    put_divisor(r, "restricted_degeneracy", &cmp.delta_f_on_y, &sub);
    put_divisor(r, "different", &cmp.diff_f, &sub);
    put_divisor(r, "kernel_different", &cmp.diff_kernel, &sub);
    put_divisor(r, "predicted", &cmp.predicted, &sub);
    r.check("restriction_formula", cmp.matches);
    Ok(())
}

fn distmin<F: PerfectField + Sampling>(
    doc: &Document,
    ring: &F,
    delta_max: Option<u32>,
    witness_out: Option<&PathBuf>,
    seed: u64,
    r: &mut Report,
) -> anyhow::Result<()> {
    let g = foliation(doc, ring)?;
    let (f, names) = match doc.get("map") {
        Some(_) => {
            let (phi, src) = source_map(doc, &g, "map")?;
            r.put_str("source", format!("{} {}", phi.source(), src.join(" ")));
            (phi.pullback_foliation(&g).lib()?, src)
        }
        None => (g, doc.space().lib()?.1),
    };
    r.put_str("form", f.form().format_with(&names));
    let deg = f.degree().ok_or_else(|| anyhow!("distmin2 needs a projective foliation"))?;
    r.put("degree", deg.to_string(), deg);
    let bound = delta_max.unwrap_or(deg as u32);
    let res = distmin2_seeded(&f, bound, seed).lib()?;
    let dims: Vec<String> = res.dimensions.iter().map(|d| d.to_string()).collect();
    r.put("dimensions", dims.join(", "), res.dimensions.clone());
    match res.delta_star {
        Some(d) => r.put("delta_star", d.to_string(), d),
        None => r.put("delta_star", format!("none up to {bound}"), Value::Null),
    }
    if let Some(w) = &res.witness {
        let text = w.format_with(&names);
        r.put_str("witness", text.clone());
        r.put("witness_integrable", res.witness_integrable.unwrap().to_string(), res.witness_integrable);
        if let Some(path) = witness_out {
            std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        }
    }
    r.check("dimensions_nondecreasing", res.dimensions.windows(2).all(|w| w[0] <= w[1]));
    Ok(())
}

fn defect_field<F: PerfectField>(doc: &Document, ring: &F, r: &mut Report) -> anyhow::Result<()> {
    let (_, names) = doc.space().lib()?;
    let w = doc.form(ring).lib()?.ok_or_else(|| anyhow!("the document declares no `form` or `log`"))?;
    let parts: Vec<String> = integrability_defect(&w).iter().map(|d| d.format_with(&names)).collect();
    let integ = is_integrable(&w);
    r.put("defect", parts.join("\n"), parts);
    r.put("integrable", integ.to_string(), integ);
    Ok(())
}

fn defect_integer(doc: &Document, r: &mut Report) -> anyhow::Result<()> {
    let (_, names) = doc.space().lib()?;
    let w = doc.form(&Integers).lib()?.ok_or_else(|| anyhow!("the document declares no `form` or `log`"))?;
    r.put_str("form", w.format_with(&names));
    let d = integrability_defect_integer(&w).lib()?;
    r.put_str("defect", d.form.format_with(&names));
    r.put_str("content", d.content.to_string());
    if let Some((c, _)) = &d.monomial {
        let p: Option<u64> = num_traits::ToPrimitive::to_u64(&num_traits::Signed::abs(c));
        if let Some(sign) = p.and_then(|p| d.sign_at(p).map(|s| (p, s))) {
            r.put("sign", format!("{} at p = {}", sign.1, sign.0), sign.1);
        }
    }
    Ok(())
}

fn scan(doc: &Document, spec: &RingSpec, pmax: u64, csv_text: bool, r: &mut Report) -> anyhow::Result<()> {
    let ring = match spec {
        RingSpec::Integers => NumberRing::integers(),
        RingSpec::NumberRing { minpoly } => NumberRing::new(minpoly.clone()).lib()?,
        _ => unreachable!("checked by dispatch"),
    };
    let (amb, _) = doc.space().lib()?;
    let w = doc.form(&ring).lib()?.ok_or_else(|| anyhow!("the document declares no `form` or `log`"))?;
    if !is_integrable(&w) {
        bail!("[models] the form is not integrable in characteristic zero; see `defect`");
    }
    let m = IntegralModel::new(ring, amb, w, BigInt::from(1)).lib()?;
    let rows = prime_scan(&m, pmax);
    let mut csv = String::from(SCAN_CSV_HEADER);
    csv.push('\n');
    let mut json_rows = Vec::new();
    let mut lift = true;
    for row in &rows {
        csv += &row.csv_line();
        csv.push('\n');
        let mut v = json!({"p": row.p, "factor": row.factor, "k": row.k});
        let o = v.as_object_mut().unwrap();
        match &row.outcome {
            Ok(d) => {
                o.insert("status".into(), "good".into());
                o.insert("p_closed".into(), d.p_closed.into());
                o.insert("deg_degeneracy".into(), d.deg_degeneracy.into());
                o.insert("squarefree".into(), d.squarefree.into());
                o.insert("cartier_integrable".into(), d.cartier_integrable.into());
                if !d.p_closed && row.p > 2 {
                    lift &= d.cartier_integrable == Some(true);
                }
            }
            Err(reason) => {
                o.insert("status".into(), "bad".into());
                o.insert("reason".into(), reason.clone().into());
            }
        }
        json_rows.push(v);
    }
    r.put("rows", csv.trim_end().to_string(), json_rows);
    r.check("cartier_integrable_on_dense_rows", lift);
    if csv_text {
        r.set_text(csv);
    }
    Ok(())
}
