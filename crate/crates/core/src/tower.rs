//! Base fields Q and F_p, and towers of simple algebraic extensions
//! k(α_1) ⊂ k(α_1, α_2) ⊂ … given by monic minimal polynomials.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, json_rat, parse_rat, Rat};

/// The coefficient field k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseField {
    Q,
    Fp(u64),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum BaseFieldRepr {
    Q,
    Fp { p: u64 },
}

impl Serialize for BaseField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            BaseField::Q => BaseFieldRepr::Q,
            BaseField::Fp(p) => BaseFieldRepr::Fp { p },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BaseField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BaseField, D::Error> {
        match BaseFieldRepr::deserialize(d)? {
            BaseFieldRepr::Q => Ok(BaseField::Q),
            BaseFieldRepr::Fp { p } => BaseField::fp(p).map_err(serde::de::Error::custom),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl BaseField {
    /// F_p for a prime p < 2^31.
    pub fn fp(p: u64) -> Result<BaseField> {
        if p >= 1 << 31 {
            return Err(Error::Invalid(format!("p = {} must be below 2^31", p)));
        }
        if !is_prime(p) {
            return Err(Error::Invalid(format!("p = {} is not prime", p)));
        }
        Ok(BaseField::Fp(p))
    }

    /// Parses "Q", "Fp:5" or "F5".
    pub fn parse(s: &str) -> Result<BaseField> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(BaseField::Q);
        }
        let digits = t
            .strip_prefix("Fp:")
            .or_else(|| t.strip_prefix("F"))
            .ok_or_else(|| Error::Parse(format!("unknown field {:?}", s)))?;
        let p: u64 = digits.parse().map_err(|_| Error::Parse(format!("unknown field {:?}", s)))?;
        BaseField::fp(p)
    }

    pub fn characteristic(self) -> u64 {
        match self {
            BaseField::Q => 0,
            BaseField::Fp(p) => p,
        }
    }

    /// Maps a rational into the field (for F_p: n·d⁻¹ mod p in [0, p)).
    pub fn normalize(self, r: &Rat) -> Result<Rat> {
        match self {
            BaseField::Q => Ok(r.clone()),
            BaseField::Fp(p) => {
                let p = BigInt::from(p);
                let d = r.denom().mod_floor(&p);
                if d.is_zero() {
                    return Err(Error::ZeroDivisor(format!("denominator of {} vanishes mod {}", r, p)));
                }
                let inv = d.modpow(&(&p - 2u32), &p);
                Ok(Rat::from_integer((r.numer() * inv).mod_floor(&p)))
            }
        }
    }

    fn reduce(self, r: Rat) -> Rat {
        match self {
            BaseField::Q => r,
            BaseField::Fp(p) => Rat::from_integer(r.to_integer().mod_floor(&BigInt::from(p))),
        }
    }

    pub fn add(self, a: &Rat, b: &Rat) -> Rat {
        self.reduce(a + b)
    }

    pub fn sub(self, a: &Rat, b: &Rat) -> Rat {
        self.reduce(a - b)
    }

    pub fn mul(self, a: &Rat, b: &Rat) -> Rat {
        self.reduce(a * b)
    }

    pub fn neg(self, a: &Rat) -> Rat {
        self.reduce(-a)
    }

    pub fn inv(self, a: &Rat) -> Result<Rat> {
        if a.is_zero() {
            return Err(Error::ZeroDivisor("inverse of zero".into()));
        }
        match self {
            BaseField::Q => Ok(a.recip()),
            BaseField::Fp(_) => self.normalize(&a.recip()),
        }
    }

    pub fn fmt_scalar(self, a: &Rat) -> String {
        fmt_rat(a)
    }

    pub fn scalar_to_json(self, a: &Rat) -> serde_json::Value {
        match self {
            BaseField::Q => serde_json::Value::String(json_rat(a)),
            BaseField::Fp(_) => serde_json::Value::from(a.to_integer().to_i64().unwrap_or(0)),
        }
    }

    pub fn scalar_from_json(self, v: &serde_json::Value) -> Result<Rat> {
        let r = match v {
            serde_json::Value::String(s) => parse_rat(s)?,
            serde_json::Value::Number(n) => Rat::from_integer(
                n.as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| Error::Parse(format!("bad coefficient {}", n)))?,
            ),
            other => return Err(Error::Parse(format!("bad coefficient {}", other))),
        };
        self.normalize(&r)
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Q => write!(f, "Q"),
            BaseField::Fp(p) => write!(f, "F{}", p),
        }
    }
}

/// An element of some level of a tower: a base scalar, or coefficients in the
/// power basis 1, α_L, …, α_L^{d_L − 1} with entries one level down.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TowerElement {
    Base(Rat),
    Ext(Vec<TowerElement>),
}

type Elem = TowerElement;

impl TowerElement {
    pub fn level(&self) -> usize {
        match self {
            Elem::Base(_) => 0,
            Elem::Ext(v) => 1 + v[0].level(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Base(r) => r.is_zero(),
            Elem::Ext(v) => v.iter().all(|e| e.is_zero()),
        }
    }

    /// The scalar if the element lies in k.
    pub fn as_scalar(&self) -> Option<Rat> {
        match self {
            Elem::Base(r) => Some(r.clone()),
            Elem::Ext(v) => {
                if v[1..].iter().all(|e| e.is_zero()) {
                    v[0].as_scalar()
                } else {
                    None
                }
            }
        }
    }
}

/// A finite tower of simple extensions over a base field, optionally closed
/// by a transcendental marker (the next generator has infinite degree).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    base: BaseField,
    /// levels[L-1] holds c_0..c_{d-1} of the monic f_L, each at level L-1.
    levels: Vec<Vec<Elem>>,
    transcendental: bool,
}

impl Tower {
    pub fn new(base: BaseField) -> Tower {
        Tower { base, levels: Vec::new(), transcendental: false }
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    /// Number of algebraic levels.
    pub fn height(&self) -> usize {
        self.levels.len()
    }

    /// Whether a transcendental generator sits above the algebraic levels.
    pub fn transcendental(&self) -> bool {
        self.transcendental
    }

    pub fn set_transcendental(&mut self, t: bool) {
        self.transcendental = t;
    }

    /// Appends level height+1 with minimal polynomial u^d + Σ c_t u^t.
    pub fn push_level(&mut self, coeffs: Vec<Elem>) -> Result<()> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("minimal polynomial of degree 0".into()));
        }
        let lvl = self.height();
        let coeffs = coeffs
            .into_iter()
            .map(|c| self.lift(&c, lvl))
            .collect::<Result<Vec<_>>>()?;
        self.levels.push(coeffs);
        Ok(())
    }

    /// Appends a level from base-field coefficients.
    pub fn push_scalar_level(&mut self, coeffs: &[Rat]) -> Result<()> {
        let cs = coeffs
            .iter()
            .map(|c| Ok(Elem::Base(self.base.normalize(c)?)))
            .collect::<Result<Vec<_>>>()?;
        self.push_level(cs)
    }

    /// Tower truncated to its first `h` levels.
    pub fn truncated(&self, h: usize) -> Tower {
        Tower { base: self.base, levels: self.levels[..h.min(self.height())].to_vec(), transcendental: false }
    }

    pub fn minpoly_degree(&self, level: usize) -> Result<usize> {
        if level == 0 || level > self.height() {
            return Err(Error::Invalid(format!("level {} out of range 1..={}", level, self.height())));
        }
        Ok(self.levels[level - 1].len())
    }

    /// Coefficients c_0..c_{d-1} of f_level (leading 1 implied).
    pub fn minpoly(&self, level: usize) -> Result<&[Elem]> {
        self.minpoly_degree(level)?;
        Ok(&self.levels[level - 1])
    }

    /// Dimension of level `level` over k.
    pub fn dimension(&self, level: usize) -> usize {
        self.levels[..level].iter().map(|l| l.len()).product()
    }

    pub fn zero(&self, level: usize) -> Elem {
        if level == 0 {
            Elem::Base(Rat::zero())
        } else {
            Elem::Ext(vec![self.zero(level - 1); self.levels[level - 1].len()])
        }
    }

    pub fn one(&self, level: usize) -> Elem {
        self.scalar(Rat::one(), level)
    }

    /// A base scalar placed at `level` (the input is normalized into k).
    pub fn scalar(&self, r: Rat, level: usize) -> Elem {
        let r = self.base.normalize(&r).expect("scalar not representable in base field");
        self.lift(&Elem::Base(r), level).expect("lift of base scalar")
    }

    /// α_level.
    pub fn generator(&self, level: usize) -> Result<Elem> {
        let d = self.minpoly_degree(level)?;
        if d == 1 {
            return Ok(Elem::Ext(vec![self.neg(&self.levels[level - 1][0])]));
        }
        let mut v = vec![self.zero(level - 1); d];
        v[1] = self.one(level - 1);
        Ok(Elem::Ext(v))
    }

    /// Embeds x into a higher level.
    pub fn lift(&self, x: &Elem, level: usize) -> Result<Elem> {
        let l = x.level();
        if l > level {
            return Err(Error::Invalid(format!("cannot lower element of level {} to {}", l, level)));
        }
        if level > self.height() {
            return Err(Error::Invalid(format!("level {} above tower height {}", level, self.height())));
        }
        let mut e = x.clone();
        for lv in l + 1..=level {
            let mut v = vec![self.zero(lv - 1); self.levels[lv - 1].len()];
            v[0] = e;
            e = Elem::Ext(v);
        }
        Ok(e)
    }

    fn coerce(&self, x: &Elem, y: &Elem) -> (Elem, Elem) {
        let l = x.level().max(y.level());
        (self.lift(x, l).expect("lift"), self.lift(y, l).expect("lift"))
    }

    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        let (x, y) = self.coerce(x, y);
        self.add_same(&x, &y)
    }

    fn add_same(&self, x: &Elem, y: &Elem) -> Elem {
        match (x, y) {
            (Elem::Base(a), Elem::Base(b)) => Elem::Base(self.base.add(a, b)),
            (Elem::Ext(a), Elem::Ext(b)) => {
                Elem::Ext(a.iter().zip(b).map(|(p, q)| self.add_same(p, q)).collect())
            }
            _ => unreachable!("coerced"),
        }
    }

    pub fn neg(&self, x: &Elem) -> Elem {
        match x {
            Elem::Base(a) => Elem::Base(self.base.neg(a)),
            Elem::Ext(v) => Elem::Ext(v.iter().map(|e| self.neg(e)).collect()),
        }
    }

    pub fn sub(&self, x: &Elem, y: &Elem) -> Elem {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let (x, y) = self.coerce(x, y);
        self.mul_same(&x, &y)
    }

    fn mul_same(&self, x: &Elem, y: &Elem) -> Elem {
        match (x, y) {
            (Elem::Base(a), Elem::Base(b)) => Elem::Base(self.base.mul(a, b)),
            (Elem::Ext(a), Elem::Ext(b)) => {
                let lvl = x.level();
                let prod = self.pmul(a, b, lvl - 1);
                Elem::Ext(self.reduce_mod(prod, lvl))
            }
            _ => unreachable!("coerced"),
        }
    }

    pub fn pow(&self, x: &Elem, e: i64) -> Result<Elem> {
        let base = if e < 0 { self.inv(x)? } else { x.clone() };
        Ok(self.pow_big(&base, &BigUint::from(e.unsigned_abs())))
    }

    fn pow_big(&self, x: &Elem, e: &BigUint) -> Elem {
        let mut result = self.one(x.level());
        for i in (0..e.bits()).rev() {
            result = self.mul_same(&result, &result);
            if e.bit(i) {
                result = self.mul_same(&result, x);
            }
        }
        result
    }

    pub fn inv(&self, x: &Elem) -> Result<Elem> {
        match x {
            Elem::Base(a) => Ok(Elem::Base(self.base.inv(a)?)),
            Elem::Ext(v) => {
                let lvl = x.level();
                let a = self.trim(v.clone());
                if a.is_empty() {
                    return Err(Error::ZeroDivisor("inverse of zero".into()));
                }
                let f = self.monic_minpoly(lvl);
                let (g, s) = self.gcdext(&f, &a, lvl - 1)?;
                if g.len() > 1 {
                    return Err(Error::ZeroDivisor(format!(
                        "minimal polynomial of level {} is reducible (nontrivial gcd of degree {})",
                        lvl,
                        g.len() - 1
                    )));
                }
                let ginv = self.inv(&g[0])?;
                let s: Vec<Elem> = s.iter().map(|c| self.mul_same(c, &ginv)).collect();
                Ok(Elem::Ext(self.reduce_mod(s, lvl)))
            }
        }
    }

    pub fn div(&self, x: &Elem, y: &Elem) -> Result<Elem> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    /// Coefficients e_j with x = Σ e_j α_level^j.
    pub fn express_in_basis(&self, x: &Elem, level: usize) -> Result<Vec<Elem>> {
        if level == 0 {
            return Err(Error::Invalid("level 0 has no basis over a lower level".into()));
        }
        match self.lift(x, level)? {
            Elem::Ext(v) => Ok(v),
            Elem::Base(_) => unreachable!("level ≥ 1"),
        }
    }

    /// Inverse of [`Tower::express_in_basis`].
    pub fn rebuild(&self, coeffs: &[Elem], level: usize) -> Result<Elem> {
        let d = self.minpoly_degree(level)?;
        if coeffs.len() != d {
            return Err(Error::Invalid(format!("expected {} coefficients, got {}", d, coeffs.len())));
        }
        let cs = coeffs.iter().map(|c| self.lift(c, level - 1)).collect::<Result<Vec<_>>>()?;
        Ok(Elem::Ext(cs))
    }

    /// Coordinates of x over k in the monomial basis of its level.
    pub fn flatten(&self, x: &Elem) -> Vec<Rat> {
        match x {
            Elem::Base(r) => vec![r.clone()],
            Elem::Ext(v) => v.iter().flat_map(|e| self.flatten(e)).collect(),
        }
    }

    /// f_level evaluated at x (x at level ≥ level).
    pub fn eval_minpoly(&self, level: usize, x: &Elem) -> Result<Elem> {
        let cs = self.minpoly(level)?;
        let mut acc = self.one(x.level().max(level));
        for c in cs.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        Ok(acc)
    }

    /// Optional eager irreducibility test for F_p towers (Rabin's criterion).
    pub fn check_irreducible(&self, level: usize) -> Result<bool> {
        let BaseField::Fp(p) = self.base else {
            return Err(Error::Unsupported("eager irreducibility check needs a finite base field".into()));
        };
        let d = self.minpoly_degree(level)?;
        if d == 1 {
            return Ok(true);
        }
        let q = BigUint::from(p).pow(self.dimension(level - 1) as u32);
        let alpha = self.generator(level)?;
        let mut frob = vec![alpha.clone()];
        for _ in 0..d {
            let next = self.pow_big(frob.last().unwrap(), &q);
            frob.push(next);
        }
        if frob[d] != alpha {
            return Ok(false);
        }
        let f = self.monic_minpoly(level);
        for r in prime_factors(d) {
            let h = self.sub(&frob[d / r], &alpha);
            let Elem::Ext(hv) = h else { unreachable!() };
            let hv = self.trim(hv);
            if hv.is_empty() {
                return Ok(false);
            }
            let (g, _) = self.gcdext(&f, &hv, level - 1)?;
            if g.len() > 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn fmt_elem(&self, x: &Elem) -> String {
        fmt_elem(x, 1)
    }

    pub fn elem_to_json(&self, x: &Elem) -> serde_json::Value {
        match x {
            Elem::Base(r) => self.base.scalar_to_json(r),
            Elem::Ext(v) => serde_json::Value::Array(v.iter().map(|e| self.elem_to_json(e)).collect()),
        }
    }

    /// Reads an element at `level`; scalars and short vectors are padded.
    pub fn elem_from_json(&self, v: &serde_json::Value, level: usize) -> Result<Elem> {
        match v {
            serde_json::Value::Array(xs) => {
                if level == 0 {
                    return Err(Error::Parse("nested coefficient below level 1".into()));
                }
                let d = self.minpoly_degree(level)?;
                if xs.len() > d {
                    return Err(Error::Parse(format!("{} coefficients for degree {}", xs.len(), d)));
                }
                let mut cs = xs
                    .iter()
                    .map(|x| self.elem_from_json(x, level - 1))
                    .collect::<Result<Vec<_>>>()?;
                cs.resize(d, self.zero(level - 1));
                Ok(Elem::Ext(cs))
            }
            other => self.lift(&Elem::Base(self.base.scalar_from_json(other)?), level),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut levels: Vec<serde_json::Value> = self
            .levels
            .iter()
            .map(|cs| {
                serde_json::json!({ "minpoly": cs.iter().map(|c| self.elem_to_json(c)).collect::<Vec<_>>() })
            })
            .collect();
        if self.transcendental {
            levels.push(serde_json::json!({ "transcendental": true }));
        }
        serde_json::json!({ "base": self.base, "levels": levels })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Tower> {
        let base: BaseField = serde_json::from_value(v.get("base").cloned().unwrap_or(serde_json::json!({"kind": "Q"})))
            .map_err(|e| Error::Parse(format!("tower base: {}", e)))?;
        let mut t = Tower::new(base);
        let empty = Vec::new();
        let levels = match v.get("levels") {
            Some(serde_json::Value::Array(ls)) => ls,
            None => &empty,
            Some(other) => return Err(Error::Parse(format!("tower levels: expected array, got {}", other))),
        };
        for (i, l) in levels.iter().enumerate() {
            if l.get("transcendental").and_then(|x| x.as_bool()) == Some(true) {
                if i + 1 != levels.len() {
                    return Err(Error::Parse("transcendental marker must be the last level".into()));
                }
                t.transcendental = true;
                break;
            }
            let mp = l
                .get("minpoly")
                .and_then(|m| m.as_array())
                .ok_or_else(|| Error::Parse(format!("level {}: missing minpoly", i + 1)))?;
            let lvl = t.height();
            let cs = mp.iter().map(|c| t.elem_from_json(c, lvl)).collect::<Result<Vec<_>>>()?;
            t.push_level(cs)?;
        }
        Ok(t)
    }

    // --- univariate polynomials over a level (coefficient vectors, low degree first) ---

    fn trim(&self, mut v: Vec<Elem>) -> Vec<Elem> {
        while v.last().is_some_and(|e| e.is_zero()) {
            v.pop();
        }
        v
    }

    fn monic_minpoly(&self, level: usize) -> Vec<Elem> {
        let mut f = self.levels[level - 1].clone();
        f.push(self.one(level - 1));
        f
    }

    fn pmul(&self, a: &[Elem], b: &[Elem], lvl: usize) -> Vec<Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(lvl); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.mul_same(x, y);
                out[i + j] = self.add_same(&out[i + j], &t);
            }
        }
        out
    }

    fn psub(&self, a: &[Elem], b: &[Elem], lvl: usize) -> Vec<Elem> {
        let n = a.len().max(b.len());
        let z = self.zero(lvl);
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).unwrap_or(&z);
                let y = b.get(i).unwrap_or(&z);
                self.add_same(x, &self.neg(y))
            })
            .collect();
        self.trim(out)
    }

    /// Reduces a polynomial over level-1 modulo the monic f_level; returns d coefficients.
    fn reduce_mod(&self, mut p: Vec<Elem>, level: usize) -> Vec<Elem> {
        let f = &self.levels[level - 1];
        let d = f.len();
        while p.len() > d {
            let c = p.pop().unwrap();
            if c.is_zero() {
                continue;
            }
            let k = p.len() - d;
            for (j, fj) in f.iter().enumerate() {
                let t = self.mul_same(&c, fj);
                p[k + j] = self.add_same(&p[k + j], &self.neg(&t));
            }
        }
        p.resize(d, self.zero(level - 1));
        p
    }

    fn pdivrem(&self, a: &[Elem], b: &[Elem], lvl: usize) -> Result<(Vec<Elem>, Vec<Elem>)> {
        let lead_inv = self.inv(b.last().expect("nonzero divisor"))?;
        let mut r = a.to_vec();
        let mut q = vec![self.zero(lvl); a.len().saturating_sub(b.len()) + 1];
        while r.len() >= b.len() && !r.is_empty() {
            let c = self.mul_same(r.last().unwrap(), &lead_inv);
            let k = r.len() - b.len();
            for (j, bj) in b.iter().enumerate() {
                let t = self.mul_same(&c, bj);
                r[k + j] = self.add_same(&r[k + j], &self.neg(&t));
            }
            q[k] = c;
            r.pop();
            r = self.trim(r);
        }
        Ok((self.trim(q), r))
    }

    /// (g, s) with g = gcd(f, a) and s·a ≡ g (mod f).
    fn gcdext(&self, f: &[Elem], a: &[Elem], lvl: usize) -> Result<(Vec<Elem>, Vec<Elem>)> {
        let (mut r0, mut r1) = (f.to_vec(), a.to_vec());
        let (mut s0, mut s1) = (Vec::new(), vec![self.one(lvl)]);
        while !r1.is_empty() {
            let (q, r) = self.pdivrem(&r0, &r1, lvl)?;
            let s2 = self.psub(&s0, &self.pmul(&q, &s1, lvl), lvl);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        Ok((r0, s0))
    }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn fmt_elem(x: &Elem, depth: usize) -> String {
    match x {
        Elem::Base(r) => fmt_rat(r),
        Elem::Ext(v) => {
            let lvl = x.level();
            let mut parts = Vec::new();
            for (j, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let cs = fmt_elem(c, depth + 1);
                let cs = if matches!(c, Elem::Ext(_)) || (cs.contains('/') && j > 0) || cs.contains('+') {
                    format!("({})", cs)
                } else {
                    cs
                };
                parts.push(match j {
                    0 => cs,
                    _ => {
                        let pw = if j == 1 { format!("a{}", lvl) } else { format!("a{}^{}", lvl, j) };
                        if cs == "1" {
                            pw
                        } else {
                            format!("{}*{}", cs, pw)
                        }
                    }
                });
            }
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        }
    }
}

impl Tower {
    /// Negated constant coefficient; a helper for degree-one levels.
    pub fn degree_one_root(&self, level: usize) -> Result<Elem> {
        let cs = self.minpoly(level)?;
        if cs.len() != 1 {
            return Err(Error::Invalid(format!("level {} has degree {}", level, cs.len())));
        }
        Ok(self.neg(&cs[0]))
    }

    /// Whether every level has degree one (the tower is k itself).
    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|l| l.len() == 1)
    }
}
