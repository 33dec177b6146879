//! Words in registered generators, their expansion, and a breadth-first
//! search for relations.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::context::PFormCtx;
use crate::degree::{DegElem, DegreeRing, DeltaPair};
use crate::error::{Error, Result};
use crate::expr::parse;
use crate::group::moebius::MoebiusElem;
use crate::group::{phi, phi_inv, RationalMonomial};
use crate::pform::{compose, iterate, verify_inverse};
use crate::ratfunc::RatFunc;

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub f: RatFunc,
    pub inverse: Option<RatFunc>,
    pub self_inverse: bool,
}

#[derive(Clone, Debug)]
pub struct GeneratorTable {
    ctx: PFormCtx,
    gens: Vec<Generator>,
}

impl GeneratorTable {
    pub fn new(ctx: &PFormCtx) -> Self {
        GeneratorTable { ctx: ctx.clone(), gens: Vec::new() }
    }

    pub fn ctx(&self) -> &PFormCtx {
        &self.ctx
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Registers `f` with an optional inverse, which is checked.
    pub fn add(&mut self, name: &str, f: RatFunc, inverse: Option<RatFunc>) -> Result<usize> {
        if f.ctx() != &self.ctx {
            return Err(Error::ContextMismatch);
        }
        if f.is_constant() {
            return Err(Error::ConstantRightOperand);
        }
        let f = f.content_reduce();
        if let Some(inv) = &inverse {
            if !verify_inverse(&f, inv)? {
                return Err(Error::VerificationFailed(format!("{inv} is not the inverse of {f}")));
            }
        }
        let self_inverse = match &inverse {
            Some(inv) => inv.rat_eq(&f),
            None => false,
        };
        self.gens.push(Generator { name: name.to_string(), f, inverse: inverse.map(|i| i.content_reduce()), self_inverse });
        Ok(self.gens.len() - 1)
    }

    /// Registers `f`, finding the inverse itself for Moebius maps, monomial
    /// units and involutions.
    pub fn add_auto(&mut self, name: &str, f: RatFunc) -> Result<usize> {
        let inverse = known_inverse(&f)?;
        self.add(name, f, inverse)
    }

    pub fn parse_and_add(&mut self, name: &str, expr: &str, inverse: Option<&str>) -> Result<usize> {
        let f = parse(&self.ctx, expr)?;
        match inverse {
            Some(text) => {
                let inv = parse(&self.ctx, text)?;
                self.add(name, f, Some(inv))
            }
            None => self.add_auto(name, f),
        }
    }

    fn atom(&self, gen: usize, exp: i64) -> Result<RatFunc> {
        let g = self.gens.get(gen).ok_or_else(|| Error::MissingInverse(format!("#{gen}")))?;
        match exp.cmp(&0) {
            Ordering::Equal => Err(Error::ZeroExponent),
            Ordering::Greater => iterate(&g.f, exp as u64),
            Ordering::Less => {
                let inv = g.inverse.as_ref().ok_or_else(|| Error::MissingInverse(g.name.clone()))?;
                iterate(inv, exp.unsigned_abs())
            }
        }
    }
}

/// Inverse of `f` when it is a Moebius map, a monomial unit or an involution.
pub fn known_inverse(f: &RatFunc) -> Result<Option<RatFunc>> {
    let ctx = f.ctx();
    if let Some(m) = MoebiusElem::from_ratfunc(f) {
        return Ok(Some(m.inverse().to_ratfunc(ctx)?));
    }
    if let Some(m) = RationalMonomial::from_ratfunc(f) {
        let ring = ctx.ring();
        let e = phi_inv(&m);
        if ring.is_unit(&e) {
            let inv = ring.unit_inv(&e)?;
            return Ok(Some(phi(ring, &inv)?.to_ratfunc(ctx)?));
        }
        return Ok(None);
    }
    if verify_inverse(f, f)? {
        return Ok(Some(f.clone()));
    }
    Ok(None)
}

/// Sequence of `(generator index, nonzero exponent)` atoms, read left to
/// right as a composition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub atoms: Vec<(usize, i64)>,
}

impl Word {
    pub fn new(atoms: Vec<(usize, i64)>) -> Self {
        Word { atoms }
    }

    pub fn letter_count(&self) -> u64 {
        self.atoms.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn display(&self, table: &GeneratorTable) -> String {
        if self.atoms.is_empty() {
            return "x0".into();
        }
        let parts: Vec<String> = self
            .atoms
            .iter()
            .map(|&(g, e)| {
                let name = table.gens.get(g).map(|x| x.name.as_str()).unwrap_or("?");
                if e == 1 {
                    name.to_string()
                } else {
                    format!("{name}^({e})")
                }
            })
            .collect();
        parts.join(" o ")
    }

    pub fn to_json(&self, table: &GeneratorTable) -> Value {
        Value::Array(
            self.atoms
                .iter()
                .map(|&(g, e)| json!({"generator": table.gens.get(g).map(|x| x.name.clone()), "exponent": e}))
                .collect(),
        )
    }
}

/// Left-to-right composition of the atom expansions; `x_0` for the empty word.
pub fn word_expand(table: &GeneratorTable, w: &Word) -> Result<RatFunc> {
    let mut acc: Option<RatFunc> = None;
    for &(g, e) in &w.atoms {
        let a = table.atom(g, e)?;
        acc = Some(match acc {
            None => a,
            Some(prev) => compose(&prev, &a)?,
        });
    }
    Ok(acc.unwrap_or_else(|| RatFunc::identity(&table.ctx)))
}

/// Closed-form `delta` of `(x0x1)^(e_1) o (x0+1) o ... o (x0x1)^(e_k) o (x0+1)`
/// over F_2 with two variables.
pub fn word_delta_n2q2(exps: &[i64]) -> Result<DeltaPair> {
    if exps.iter().any(|&e| e == 0) {
        return Err(Error::ZeroExponent);
    }
    let ring = DegreeRing::new(2, 2)?;
    let u = DegElem::from_i64s(&[1, 1]);
    let total: i64 = exps.iter().sum();
    let dmax = ring.pow(&u, total)?;
    let dmin = if exps.len() % 2 == 0 {
        let odd: i64 = exps.iter().step_by(2).sum();
        ring.pow(&u, odd)?
    } else {
        ring.zero()
    };
    Ok(DeltaPair::finite(dmax, dmin))
}

/// The word `(x0x1)^(e_1) o (x0+1) o ...` over a table holding `x0x1` at
/// index `m` and `x0+1` at index `a`.
pub fn shape_word(m: usize, a: usize, exps: &[i64]) -> Word {
    Word::new(exps.iter().flat_map(|&e| [(m, e), (a, 1)]).collect())
}

#[derive(Clone, Debug)]
pub struct Relation {
    pub word: Word,
    pub length: usize,
    pub expansion: String,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub relations: Vec<Relation>,
    pub budget_exceeded: bool,
    pub words_examined: u64,
    pub filter_applied: bool,
}

impl SearchResult {
    pub fn to_json(&self, table: &GeneratorTable) -> Value {
        json!({
            "relations": self.relations.iter().map(|r| json!({
                "word": r.word.to_json(table),
                "display": r.word.display(table),
                "length": r.length,
                "expansion": r.expansion,
            })).collect::<Vec<_>>(),
            "budget_exceeded": self.budget_exceeded,
            "words_examined": self.words_examined,
            "filter_applied": self.filter_applied,
        })
    }
}

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Letter {
    gen: usize,
    sign: i8,
}

/// Indices of `x0x1` and `x0+1` when the table is exactly that pair over
/// F_2 with two variables.
fn block_shape_gens(table: &GeneratorTable) -> Option<(usize, usize)> {
    let ctx = &table.ctx;
    if ctx.q() != 2 || ctx.n() != 2 || table.len() != 2 {
        return None;
    }
    let m = parse(ctx, "x0x1").ok()?;
    let a = parse(ctx, "x0+1").ok()?;
    let find = |h: &RatFunc| table.gens.iter().position(|g| g.f.rat_eq(h));
    let (im, ia) = (find(&m)?, find(&a)?);
    table.gens[im].inverse.as_ref()?;
    Some((im, ia))
}

/// Necessary condition for a word in `x0x1` and `x0+1` to be trivial:
/// after cyclic reduction the alternating block structure must have an even
/// number `>= 6` of blocks with both alternating exponent sums zero.
fn block_shape_filter(letters: &[Letter], m: usize, a: usize) -> bool {
    let cancels = |x: &Letter, y: &Letter| x.gen == y.gen && (x.sign == -y.sign || (x.gen == a && x.sign == y.sign));
    let mut lo = 0;
    let mut hi = letters.len();
    while hi - lo >= 2 && cancels(&letters[lo], &letters[hi - 1]) {
        lo += 1;
        hi -= 1;
    }
    let w = &letters[lo..hi];
    if w.is_empty() {
        return true;
    }
    let Some(last_a) = w.iter().rposition(|l| l.gen == a) else {
        return false;
    };
    // rotate so the word ends with an A
    let rotated: Vec<&Letter> = w[last_a + 1..].iter().chain(&w[..=last_a]).collect();
    let mut blocks = Vec::new();
    let mut cur = 0i64;
    for l in rotated {
        if l.gen == a {
            blocks.push(cur);
            cur = 0;
        } else {
            debug_assert_eq!(l.gen, m);
            cur += l.sign as i64;
        }
    }
    if blocks.iter().any(|&b| b == 0) {
        return true;
    }
    let k = blocks.len();
    if k % 2 != 0 || k < 6 {
        return false;
    }
    let odd: i64 = blocks.iter().step_by(2).sum();
    let even: i64 = blocks.iter().skip(1).step_by(2).sum();
    odd == 0 && even == 0
}

fn letters_to_word(letters: &[Letter]) -> Word {
    let mut atoms: Vec<(usize, i64)> = Vec::new();
    for l in letters {
        match atoms.last_mut() {
            Some((g, e)) if *g == l.gen && e.signum() == l.sign as i64 => *e += l.sign as i64,
            _ => atoms.push((l.gen, l.sign as i64)),
        }
    }
    Word::new(atoms)
}

/// Enumerates reduced words up to `max_len` letters and reports those equal
/// to `x_0`. Words containing a shorter relation are not extended.
pub fn relation_search(table: &GeneratorTable, max_len: usize, budget: u64, use_filter: bool) -> Result<SearchResult> {
    let ctx = table.ctx.clone();
    let mut alphabet: Vec<Letter> = Vec::new();
    let mut letter_f: Vec<RatFunc> = Vec::new();
    for (i, g) in table.gens.iter().enumerate() {
        alphabet.push(Letter { gen: i, sign: 1 });
        letter_f.push(g.f.clone());
        if let (Some(inv), false) = (&g.inverse, g.self_inverse) {
            alphabet.push(Letter { gen: i, sign: -1 });
            letter_f.push(inv.clone());
        }
    }
    let inverse_of = |x: usize, y: usize| {
        let (a, b) = (alphabet[x], alphabet[y]);
        a.gen == b.gen && a.sign == -b.sign
    };
    let shape = if use_filter { block_shape_gens(table) } else { None };
    let identity = RatFunc::identity(&ctx);

    // each node: letter indices and, without the filter, its expansion
    let mut level: Vec<(Vec<usize>, Option<RatFunc>)> = vec![(Vec::new(), Some(identity.clone()))];
    let mut relators: Vec<Vec<usize>> = Vec::new();
    let mut relations = Vec::new();
    let mut examined = 0u64;
    let mut exceeded = false;

    for len in 1..=max_len {
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        for (pi, (word, _)) in level.iter().enumerate() {
            for li in 0..alphabet.len() {
                if word.last().is_some_and(|&last| inverse_of(last, li)) {
                    continue;
                }
                candidates.push((pi, li));
            }
        }
        let remaining = budget.saturating_sub(examined);
        if candidates.len() as u64 > remaining {
            candidates.truncate(remaining as usize);
            exceeded = true;
        }
        examined += candidates.len() as u64;
        let known = &relators;
        let results: Vec<Result<Option<(Vec<usize>, Option<RatFunc>, bool)>>> = candidates
            .par_iter()
            .map(|&(pi, li)| {
                let (parent, parent_exp) = &level[pi];
                let mut word = parent.clone();
                word.push(li);
                if known.iter().any(|r| word.ends_with(r)) {
                    return Ok(None);
                }
                match shape {
                    Some((m, a)) => {
                        let letters: Vec<Letter> = word.iter().map(|&i| alphabet[i]).collect();
                        if !block_shape_filter(&letters, m, a) {
                            return Ok(Some((word, None, false)));
                        }
                        let exp = word_expand(table, &letters_to_word(&letters))?;
                        let is_rel = exp.rat_eq(&identity);
                        Ok(Some((word, None, is_rel)))
                    }
                    None => {
                        let prev = parent_exp.as_ref().expect("expansion kept without filter");
                        let exp = if parent.is_empty() { letter_f[li].clone() } else { compose(prev, &letter_f[li])? };
                        let is_rel = exp.rat_eq(&identity);
                        let keep = if len < max_len { Some(exp) } else { None };
                        Ok(Some((word, keep, is_rel)))
                    }
                }
            })
            .collect();
        let mut next = Vec::new();
        let mut found_now = Vec::new();
        for r in results {
            if let Some((word, exp, is_rel)) = r? {
                if is_rel {
                    found_now.push(word);
                } else {
                    next.push((word, exp));
                }
            }
        }
        for word in found_now {
            let letters: Vec<Letter> = word.iter().map(|&i| alphabet[i]).collect();
            relations.push(Relation { word: letters_to_word(&letters), length: word.len(), expansion: "x0".into() });
            relators.push(word);
        }
        level = next;
        if exceeded || level.is_empty() {
            break;
        }
    }
    relations.sort_by(|a, b| a.length.cmp(&b.length).then_with(|| word_key(&a.word).cmp(&word_key(&b.word))));
    Ok(SearchResult { relations, budget_exceeded: exceeded, words_examined: examined, filter_applied: shape.is_some() })
}

fn word_key(w: &Word) -> Vec<(usize, i64)> {
    w.atoms.clone()
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} (length {})", self.word.atoms, self.length)
    }
}
