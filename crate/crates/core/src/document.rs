//! Line-oriented input documents.
//!
//! ```text
//! # comment
//! field Fq:7^2
//! space P3 x0 x1 x2 x3
//! form t*x1*x2*x3*dx0 - ...
//!     (indented lines continue the previous entry)
//! log [x, y, z - 1] : [1, t, t + 1]
//! vector [x, -y, 0]
//! map P2 u v w -> P2 : [u^2, v^2, w^2]
//! subspace P2 u v w : [u, v, w, 2*u + 3*v]
//! candidates [x, y, x + y]
//! prime 7
//! ```
//!
//! `map` and `subspace` both introduce a new space with its own variables and
//! send it into the declared one: a map is pulled back along, a subspace is
//! restricted to.

use crate::divisor::Ambient;
use crate::error::{Error, Result};
use crate::field::{Ring, RingSpec};
use crate::foliation::log_form;
use crate::forms::{DiffForm, VectorField};
use crate::poly::{default_names, MultiPoly};
use crate::text::Syntax;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub text: String,
    pub line: usize,
    /// Column of the first character of `text`.
    pub col: usize,
}

/// A space with its variable names and the components of its map into the
/// declared space.
pub type SourceSpace<R> = (Ambient, Vec<String>, Vec<MultiPoly<R>>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub entries: Vec<Entry>,
}

const KEYS: [&str; 9] = ["field", "space", "form", "log", "vector", "map", "subspace", "candidates", "prime"];

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// `A3` or `P2`.
pub fn parse_ambient(s: &str, line: usize, col: usize) -> Result<Ambient> {
    let bad = || perr(line, col, format!("expected an ambient like A3 or P2, found `{s}`"));
    let (kind, dim) = s.split_at(s.len().min(1));
    let n: usize = dim.parse().map_err(|_| bad())?;
    match kind {
        "A" if n >= 1 => Ok(Ambient::Affine(n)),
        "P" if n >= 1 => Ok(Ambient::Projective(n)),
        _ => Err(bad()),
    }
}

/// Ambient and variable names from `P2 x y z`; names default when absent.
fn parse_space(text: &str, line: usize, col: usize) -> Result<(Ambient, Vec<String>)> {
    let mut words = text.split_whitespace();
    let amb = parse_ambient(words.next().unwrap_or(""), line, col)?;
    let names: Vec<String> = words.map(String::from).collect();
    let names = if names.is_empty() { default_names(amb.nvars()) } else { names };
    if names.len() != amb.nvars() {
        return Err(perr(line, col, format!("{amb} needs {} variable names, found {}", amb.nvars(), names.len())));
    }
    for (i, n) in names.iter().enumerate() {
        if !n.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) || names[..i].contains(n) || n == "p" {
            return Err(perr(line, col, format!("bad or repeated variable name `{n}`")));
        }
    }
    Ok((amb, names))
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let mut entries: Vec<Entry> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap();
            if body.trim().is_empty() {
                continue;
            }
            if body.starts_with(char::is_whitespace) {
                let Some(last) = entries.last_mut() else {
                    return Err(perr(line, 1, "continuation line before any entry"));
                };
                last.text.push('\n');
                last.text.push_str(body);
                continue;
            }
            let key_end = body.find(char::is_whitespace).unwrap_or(body.len());
            let key = &body[..key_end];
            if !KEYS.contains(&key) {
                return Err(perr(line, 1, format!("unknown entry `{key}`")));
            }
            let rest = &body[key_end..];
            let skip = rest.len() - rest.trim_start().len();
            let text = rest.trim_start().to_string();
            if key != "space" && text.is_empty() {
                return Err(perr(line, key_end + 1, format!("`{key}` needs a value")));
            }
            if key != "form" && key != "log" && entries.iter().any(|e| e.key == key) {
                return Err(perr(line, 1, format!("`{key}` declared twice")));
            }
            entries.push(Entry { key: key.into(), text, line, col: key_end + skip + 1 });
        }
        let doc = Document { entries };
        doc.check_prime()?;
        Ok(doc)
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    /// The declared coefficient ring, or `default` when absent.
    pub fn ring_spec(&self, default: Option<&RingSpec>) -> Result<RingSpec> {
        match (self.get("field"), default) {
            (_, Some(d)) => {
                if let Some(pe) = self.get("prime") {
                    if pe.text.trim() != d.characteristic().to_string() {
                        return Err(Error::InconsistentPrime(format!(
                            "line {}: prime {} but the ring {d} has characteristic {}",
                            pe.line,
                            pe.text.trim(),
                            d.characteristic()
                        )));
                    }
                }
                Ok(d.clone())
            }
            (Some(e), None) => e.text.trim().parse().map_err(|err| match err {
                Error::Parse { msg, .. } => perr(e.line, e.col, msg),
                other => other,
            }),
            (None, None) => Err(perr(1, 1, "no `field` declared")),
        }
    }

    fn check_prime(&self) -> Result<()> {
        let (Some(pe), Some(fe)) = (self.get("prime"), self.get("field")) else { return Ok(()) };
        let p: u64 = pe.text.trim().parse().map_err(|_| perr(pe.line, pe.col, "expected a prime"))?;
        let spec = self.ring_spec(None)?;
        if spec.characteristic() != p {
            return Err(Error::InconsistentPrime(format!(
                "line {}: prime {p} but line {} declares characteristic {}",
                pe.line,
                fe.line,
                spec.characteristic()
            )));
        }
        Ok(())
    }

    pub fn space(&self) -> Result<(Ambient, Vec<String>)> {
        let e = self.get("space").ok_or_else(|| perr(1, 1, "no `space` declared"))?;
        parse_space(&e.text, e.line, e.col)
    }

    pub fn syntax<R: Ring>(&self, ring: &R) -> Result<Syntax<R>> {
        Ok(Syntax::new(ring, &self.space()?.1))
    }

    /// The sum of all `form` and `log` entries.
    pub fn form<R: Ring>(&self, ring: &R) -> Result<Option<DiffForm<R>>> {
        let syn = self.syntax(ring)?;
        let mut acc: Option<DiffForm<R>> = None;
        for e in &self.entries {
            let w = match e.key.as_str() {
                "form" => syn.form_at(&e.text, e.line, e.col)?,
                "log" => self.log_entry(&syn, e)?,
                _ => continue,
            };
            acc = Some(match acc {
                None => w,
                Some(a) => a.try_add(&w).map_err(|_| perr(e.line, e.col, "forms of different degrees"))?,
            });
        }
        Ok(acc)
    }

    fn log_entry<R: Ring>(&self, syn: &Syntax<R>, e: &Entry) -> Result<DiffForm<R>> {
        let Some(colon) = e.text.find(':') else {
            return Err(perr(e.line, e.col, "expected `log [components] : [weights]`"));
        };
        let (lhs, rhs) = (&e.text[..colon], &e.text[colon + 1..]);
        let comps = syn.list_at(lhs, e.line, e.col)?;
        let weights = syn.list_at(rhs, e.line, e.col + colon + 1)?;
        if comps.is_empty() || comps.len() != weights.len() {
            return Err(perr(e.line, e.col, "need one weight per component"));
        }
        let mut ws = Vec::new();
        for w in &weights {
            if !w.is_constant() {
                return Err(perr(e.line, e.col, format!("weight {w} is not a constant")));
            }
            ws.push(w.constant_term());
        }
        Ok(log_form(&comps, &ws))
    }

    pub fn vector<R: Ring>(&self, ring: &R) -> Result<Option<VectorField<R>>> {
        let Some(e) = self.get("vector") else { return Ok(None) };
        let comps = self.syntax(ring)?.list_at(&e.text, e.line, e.col)?;
        if comps.len() != self.space()?.0.nvars() {
            return Err(perr(e.line, e.col, "vector field has the wrong number of components"));
        }
        Ok(Some(VectorField::new(comps)))
    }

    /// `map <source> [-> <target>] : [...]`, a map from a new space with its
    /// own variables into the declared one. The target, when given, must be
    /// the declared ambient.
    pub fn map<R: Ring>(&self, ring: &R) -> Result<Option<SourceSpace<R>>> {
        let Some(e) = self.get("map") else { return Ok(None) };
        let Some(colon) = e.text.find(':') else {
            return Err(perr(e.line, e.col, "expected `map <source> -> <target> : [components]`"));
        };
        let head = &e.text[..colon];
        let src = match head.find("->") {
            Some(arrow) => {
                let target = parse_ambient(head[arrow + 2..].trim(), e.line, e.col + arrow + 2)?;
                if target != self.space()?.0 {
                    return Err(perr(e.line, e.col + arrow + 2, format!("map target {target} is not the declared space")));
                }
                &head[..arrow]
            }
            None => head,
        };
        self.embedded_space(ring, src, &e.text[colon + 1..], e.line, e.col, e.col + colon + 1)
    }

    /// `subspace <space> : [...]`, components in the subspace's own variables.
    pub fn subspace<R: Ring>(&self, ring: &R) -> Result<Option<SourceSpace<R>>> {
        let Some(e) = self.get("subspace") else { return Ok(None) };
        let Some(colon) = e.text.find(':') else {
            return Err(perr(e.line, e.col, "expected `subspace <space> : [components]`"));
        };
        self.embedded_space(ring, &e.text[..colon], &e.text[colon + 1..], e.line, e.col, e.col + colon + 1)
    }

    fn embedded_space<R: Ring>(
        &self,
        ring: &R,
        space: &str,
        list: &str,
        line: usize,
        col: usize,
        list_col: usize,
    ) -> Result<Option<SourceSpace<R>>> {
        let (amb, names) = parse_space(space, line, col)?;
        let comps = Syntax::new(ring, &names).list_at(list, line, list_col)?;
        if comps.len() != self.space()?.0.nvars() {
            return Err(perr(line, list_col, format!("expected {} components", self.space()?.0.nvars())));
        }
        Ok(Some((amb, names, comps)))
    }

    pub fn candidates<R: Ring>(&self, ring: &R) -> Result<Vec<MultiPoly<R>>> {
        match self.get("candidates") {
            None => Ok(Vec::new()),
            Some(e) => self.syntax(ring)?.list_at(&e.text, e.line, e.col),
        }
    }
}

impl<R: Ring> DiffForm<R> {
    fn try_add(&self, o: &Self) -> Result<Self> {
        if self.degree() != o.degree() || self.nvars() != o.nvars() {
            return Err(Error::DimensionMismatch { left: self.degree(), right: o.degree() });
        }
        Ok(self.add(o))
    }
}
