//! Canonical expansions in the keys and the values and residues read off them.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::json;

use super::{laurent_diff, padded, value_json, Exps, GenSeq, PowCache, Term};
use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::tower::TowerElement;
use crate::values::{Card, Value};

/// f = g^curve_power·(leading sum + tail [+ remainder in m^n]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    /// ν(f), including the curve part.
    pub rho: Value,
    pub curve_power: u32,
    /// Terms of value ρ − curve_power·ν(g), exponents in range.
    pub leading: Vec<Term>,
    /// Terms of strictly larger value (None when the value is only bounded below).
    pub tail: Vec<(Term, Option<Value>)>,
    /// Some(n) when a remainder in m^n was discarded.
    pub remainder_order: Option<u32>,
    /// Keys P_0..P_{keys_used-1} appear.
    pub keys_used: usize,
}

impl Expansion {
    /// g^curve_power · (leading sum), in the caller's coordinates.
    pub fn recompose_leading(&self, seq: &GenSeq) -> BiPoly {
        let mut cache = PowCache::new(seq.keys());
        let mut p = BiPoly::zero(seq.field());
        for t in &self.leading {
            p = p.add(&cache.monomial(&t.exps).scale(&t.coeff));
        }
        if let Some((g, _)) = seq.curve() {
            p = p.mul(&g.pow(self.curve_power));
        }
        if seq.swapped() {
            p.swap_xy()
        } else {
            p
        }
    }

    pub fn to_json(&self, seq: &GenSeq) -> serde_json::Value {
        let f = seq.field();
        let mode = seq.mode();
        let term = |t: &Term| json!({ "c": f.scalar_to_json(&t.coeff), "e": t.exps });
        json!({
            "value": value_json(&self.rho, mode),
            "curve_power": self.curve_power,
            "leading": self.leading.iter().map(term).collect::<Vec<_>>(),
            "tail": self.tail.iter().map(|(t, v)| {
                let mut j = term(t);
                j["value"] = v.as_ref().map(|v| value_json(v, mode)).unwrap_or(serde_json::Value::Null);
                j
            }).collect::<Vec<_>>(),
            "remainder_order": self.remainder_order,
            "keys_used": self.keys_used,
        })
    }
}

/// Factors out the kernel curve: f = g^n·h.
fn strip_curve(seq: &GenSeq, f: &BiPoly) -> Result<(u32, BiPoly)> {
    let Some((g, _)) = seq.curve() else { return Ok((0, f.clone())) };
    let mut n = 0;
    let mut h = f.clone();
    while let Some(q) = h.exact_div(g)? {
        h = q;
        n += 1;
    }
    Ok((n, h))
}

fn curve_shift(seq: &GenSeq, n: u32) -> Value {
    match seq.curve() {
        Some((_, v)) if n > 0 => v.scale_i(n as i64),
        _ => Value::zero(seq.mode()),
    }
}

/// Digit expansion of f in P_1..P_top (repeated division by monic keys), as
/// monomials x^a·P_1^{j_1}⋯P_top^{j_top}. Digits below the top key are in range.
pub(crate) fn digits(seq: &GenSeq, f: &BiPoly, top: usize) -> Result<Vec<Term>> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; top + 1];
    digits_rec(seq, f, top, &mut exps, &mut out)?;
    Ok(out)
}

fn digits_rec(seq: &GenSeq, f: &BiPoly, r: usize, exps: &mut Exps, out: &mut Vec<Term>) -> Result<()> {
    if f.is_zero() {
        return Ok(());
    }
    if r <= 1 {
        for (e, c) in f.terms() {
            exps[0] = e.x;
            exps[1] = e.y;
            out.push(Term::new(c.clone(), exps.clone()));
        }
        exps[0] = 0;
        exps[1] = 0;
        return Ok(());
    }
    let key = seq.key(r);
    if key.deg_y()? > f.deg_y()? {
        return digits_rec(seq, f, r - 1, exps, out);
    }
    let mut rest = f.clone();
    let mut j = 0;
    while !rest.is_zero() {
        let (q, d) = rest.div_rem_monic_y(key)?;
        exps[r] = j;
        digits_rec(seq, &d, r - 1, exps, out)?;
        rest = q;
        j += 1;
    }
    exps[r] = 0;
    Ok(())
}

/// Minimal-value split of an exact term list.
struct Split {
    rho: Value,
    leading: Vec<Term>,
    others: Vec<(Term, Value)>,
}

fn split(seq: &GenSeq, terms: Vec<Term>) -> Result<Split> {
    let mut valued = Vec::with_capacity(terms.len());
    for t in terms {
        let v = seq
            .monomial_value(&t.exps)
            .ok_or_else(|| Error::DepthExceeded(format!("monomial {:?} has unknown value", t.exps)))?;
        valued.push((t, v));
    }
    let rho = valued.iter().map(|(_, v)| v).min().cloned().ok_or(Error::ZeroInput)?;
    let (lead, others): (Vec<_>, Vec<_>) = valued.into_iter().partition(|(_, v)| *v == rho);
    Ok(Split { rho, leading: lead.into_iter().map(|(t, _)| t).collect(), others })
}

/// Σ c·res(P^e / P^ref) over the terms.
fn residue_sum(seq: &GenSeq, terms: &[Term], reference: &[u32]) -> Result<TowerElement> {
    let tower = seq.tower();
    let len = terms.iter().map(|t| t.exps.len()).chain([reference.len()]).max().unwrap_or(0);
    let mut acc = tower.zero(0);
    for t in terms {
        let r = seq.res(&laurent_diff(&t.exps, reference, len))?;
        acc = tower.add(&acc, &tower.mul(&tower.scalar(t.coeff.clone(), 0), &r));
    }
    Ok(acc)
}

/// The leading form of f: curve power, ρ, leading terms, the rest. Leading terms
/// may be out of range when their residue sum certifies that they do not cancel.
fn leading_form(seq: &GenSeq, f: &BiPoly) -> Result<(u32, Split)> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (n, h) = strip_curve(seq, &seq.to_work(f))?;
    let top = seq.top();
    let mut sp = split(seq, digits(seq, &h, top)?)?;
    let in_range = sp.leading.iter().all(|t| seq.in_range(&t.exps));
    if sp.leading.len() > 1 && !in_range {
        let reference = sp.leading[0].exps.clone();
        let s = residue_sum(seq, &sp.leading, &reference)?;
        if s.is_zero() {
            return Err(Error::DepthExceeded(format!(
                "leading terms cancel at value {}; keys beyond P_{} are needed",
                sp.rho, top
            )));
        }
    }
    sp.rho = &sp.rho + &curve_shift(seq, n);
    Ok((n, sp))
}

/// Canonical expansion of f by digit expansion in the keys.
pub fn expand(f: &BiPoly, seq: &GenSeq) -> Result<Expansion> {
    let (n, sp) = leading_form(seq, f)?;
    if let Some(t) = sp.leading.iter().find(|t| !seq.in_range(&t.exps)) {
        return Err(Error::DepthExceeded(format!(
            "leading monomial {:?} is out of range; the sequence is too shallow",
            t.exps
        )));
    }
    Ok(Expansion {
        rho: sp.rho,
        curve_power: n,
        leading: sp.leading,
        tail: sp.others.into_iter().map(|(t, v)| (t, Some(v))).collect(),
        remainder_order: None,
        keys_used: seq.top() + 1,
    })
}

/// ν(f).
pub fn value_of(f: &BiPoly, seq: &GenSeq) -> Result<Value> {
    Ok(leading_form(seq, f)?.1.rho)
}

/// The residue [f/g] for ν(f) = ν(g), as an element of the top tower level.
pub fn residue_of(f: &BiPoly, g: &BiPoly, seq: &GenSeq) -> Result<TowerElement> {
    let (nf, sf) = leading_form(seq, f)?;
    let (ng, sg) = leading_form(seq, g)?;
    if sf.rho != sg.rho || nf != ng {
        return Err(Error::ValueMismatch(sf.rho.to_string(), sg.rho.to_string()));
    }
    let reference = sf.leading[0].exps.clone();
    let a = residue_sum(seq, &sf.leading, &reference)?;
    let b = residue_sum(seq, &sg.leading, &reference)?;
    let t = seq.tower();
    t.lift(&t.div(&a, &b)?, t.height())
}

/// Replaces P_i^{n_i} (lowest i with m_i ≥ n_i) in the monomial by P_{i+1} − Σ c·P^σ.
///
/// Returns the same-value terms and the exponent vector of the carried monomial.
pub fn rewrite_step(mono: &[u32], seq: &GenSeq) -> Result<(Vec<Term>, Exps)> {
    let i = (1..mono.len())
        .find(|&k| match seq.n_bound(k) {
            Some(Card::Finite(n)) => mono[k] as u64 >= n,
            Some(Card::Infinite) => false,
            None => seq.nbar(k).is_some_and(|nb| matches!(nb, Card::Finite(b) if mono[k] as u64 >= b)),
        })
        .ok_or_else(|| Error::Invalid(format!("no reducible index in {:?}", mono)))?;
    let step = seq
        .step(i)
        .ok_or_else(|| Error::DepthExceeded(format!("rewriting P_{} needs step {}", i, i)))?;
    let mut base = padded(mono, i + 2);
    base[i] -= step.n() as u32;
    let same = step
        .relation
        .iter()
        .map(|t| {
            let mut e = base.clone();
            for (k, x) in t.exps.iter().enumerate() {
                e[k] += x;
            }
            Term::new(-t.coeff.clone(), e)
        })
        .collect();
    let mut carry = base;
    carry[i + 1] += 1;
    Ok((same, carry))
}

/// Cap on rewrite iterations per order bound.
const REWRITE_LIMIT: usize = 200_000;

/// Expansion by the rewriting algorithm: start from the monomials of f in x, y and
/// repeatedly substitute the defining relations into out-of-range leading monomials.
/// Terms of order ≥ n are discarded into a remainder; n doubles until ρ < n·ν(m).
pub fn expand_rewrite(f: &BiPoly, seq: &GenSeq, order_bound: u32) -> Result<Expansion> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (cn, h) = strip_curve(seq, &seq.to_work(f))?;
    let nkeys = seq.keys().len();
    let ords: Vec<u32> = seq.keys().iter().map(|k| k.ord_total()).collect::<Result<_>>()?;
    let beta0 = seq.beta(0).expect("β_0").clone();
    let mut n = order_bound.max(1);
    loop {
        match rewrite_with_bound(seq, &h, nkeys, &ords, &beta0, n)? {
            Some(mut e) => {
                e.rho = &e.rho + &curve_shift(seq, cn);
                e.curve_power = cn;
                return Ok(e);
            }
            None if n < 1 << 12 => n *= 2,
            None => return Err(Error::DepthExceeded(format!("order bound {} reached", n))),
        }
    }
}

fn rewrite_with_bound(
    seq: &GenSeq,
    h: &BiPoly,
    nkeys: usize,
    ords: &[u32],
    beta0: &Value,
    n: u32,
) -> Result<Option<Expansion>> {
    let mut terms: BTreeMap<Exps, Rat> = BTreeMap::new();
    for (e, c) in h.terms() {
        let mut x = vec![0u32; nkeys];
        x[0] = e.x;
        x[1] = e.y;
        terms.insert(x, c.clone());
    }
    let ord = |e: &Exps| e.iter().zip(ords).map(|(a, b)| a * b).sum::<u32>();
    let bound_n = beta0.scale_i(n as i64);
    let mut dropped = false;
    for _ in 0..REWRITE_LIMIT {
        let before = terms.len();
        terms.retain(|e, _| ord(e) < n);
        dropped |= terms.len() < before;
        let mut known = Vec::new();
        let mut unknown = Vec::new();
        for (e, c) in &terms {
            match seq.monomial_value(e) {
                Some(v) => known.push((e.clone(), c.clone(), v)),
                None => unknown.push((e.clone(), c.clone())),
            }
        }
        let Some(rho) = known.iter().map(|(_, _, v)| v).min().cloned() else {
            return if dropped { Ok(None) } else { Err(Error::ZeroInput) };
        };
        if dropped && rho >= bound_n {
            return Ok(None);
        }
        for (e, _) in &unknown {
            // ν(P_k) > n_{k-1}β_{k-1} for a key of unknown value
            let lb = lower_bound(seq, e)?;
            if lb < rho {
                return Err(Error::DepthExceeded(format!("monomial {:?} may have value below {}", e, rho)));
            }
        }
        let lead: Vec<&(Exps, Rat, Value)> = known.iter().filter(|(_, _, v)| *v == rho).collect();
        let pick = lead
            .iter()
            .filter(|(e, _, _)| !seq.in_range(e))
            .min_by_key(|(e, _, _)| (e.iter().sum::<u32>(), e.clone()));
        let Some((e, c, _)) = pick else {
            let leading = lead.iter().map(|(e, c, _)| Term::new(c.clone(), e.clone())).collect();
            let mut tail: Vec<(Term, Option<Value>)> = known
                .iter()
                .filter(|(_, _, v)| *v != rho)
                .map(|(e, c, v)| (Term::new(c.clone(), e.clone()), Some(v.clone())))
                .collect();
            tail.extend(unknown.into_iter().map(|(e, c)| (Term::new(c, e), None)));
            return Ok(Some(Expansion {
                rho,
                curve_power: 0,
                leading,
                tail,
                remainder_order: dropped.then_some(n),
                keys_used: nkeys,
            }));
        };
        let (same, carry) = rewrite_step(e, seq)?;
        let sum: u32 = e.iter().sum();
        for t in &same {
            if t.exps.iter().sum::<u32>() <= sum {
                return Err(Error::OracleInconsistent(format!(
                    "rewrite of {:?} produced {:?} without exponent-sum growth",
                    e, t.exps
                )));
            }
        }
        let c = c.clone();
        terms.remove(e);
        let field = seq.field();
        let mut add = |x: Exps, k: Rat| {
            let x = padded(&x, nkeys);
            let slot = terms.entry(x.clone()).or_insert_with(Rat::zero);
            *slot = field.add(slot, &k);
            if slot.is_zero() {
                terms.remove(&x);
            }
        };
        if carry.len() > nkeys && carry[nkeys..].iter().any(|&x| x > 0) {
            return Err(Error::DepthExceeded(format!("rewrite needs P_{} which is not constructed", nkeys)));
        }
        add(carry[..nkeys.min(carry.len())].to_vec(), c.clone());
        for t in same {
            add(t.exps, field.mul(&c, &t.coeff));
        }
    }
    Err(Error::DepthExceeded("rewrite iteration limit".into()))
}

/// Strict lower bound for ν(P^e) when some key has unknown value.
fn lower_bound(seq: &GenSeq, e: &[u32]) -> Result<Value> {
    let mut v = Value::zero(seq.mode());
    for (k, &x) in e.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let b = match seq.beta(k) {
            Some(b) => b.clone(),
            None => {
                let s = seq
                    .step(k - 1)
                    .ok_or_else(|| Error::DepthExceeded(format!("no bound for ν(P_{})", k)))?;
                let prev = seq.beta(k - 1).ok_or_else(|| Error::DepthExceeded(format!("β_{} unknown", k - 1)))?;
                prev.scale_i(s.n() as i64)
            }
        };
        v = &v + &b.scale_i(x as i64);
    }
    Ok(v)
}
