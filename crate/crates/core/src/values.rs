//! Ordered value groups of rational rank at most two, their subgroup lattices,
//! and the semigroup arithmetic used to represent values by key values.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{big, fmt_rat, lcm_den, parse_rat, serde_rat, to_decimal, Rat};

/// How a pair (a, b) is ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// b = 0, ordered by a.
    #[serde(rename = "RANK1")]
    Rank1,
    /// Lexicographic on (a, b).
    #[serde(rename = "LEX")]
    Lex,
    /// Ordered as the real number a + b·√2.
    #[serde(rename = "TAU")]
    Tau,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Rank1 => "RANK1",
            Mode::Lex => "LEX",
            Mode::Tau => "TAU",
        }
    }

    pub fn parse(s: &str) -> Result<Mode> {
        match s.trim().to_ascii_uppercase().as_str() {
            "RANK1" => Ok(Mode::Rank1),
            "LEX" => Ok(Mode::Lex),
            "TAU" => Ok(Mode::Tau),
            _ => Err(Error::Parse(format!("unknown mode {:?}", s))),
        }
    }

    /// Archimedean modes embed in R; LEX does not.
    pub fn is_archimedean(self) -> bool {
        self != Mode::Lex
    }
}

/// Sign of a + b√2, decided exactly.
fn tau_sign(a: &Rat, b: &Rat) -> Ordering {
    let sa = a.cmp(&Rat::zero());
    let sb = b.cmp(&Rat::zero());
    match (sa, sb) {
        (Ordering::Equal, Ordering::Equal) => Ordering::Equal,
        (Ordering::Less, Ordering::Less)
        | (Ordering::Less, Ordering::Equal)
        | (Ordering::Equal, Ordering::Less) => Ordering::Less,
        (Ordering::Greater, Ordering::Greater)
        | (Ordering::Greater, Ordering::Equal)
        | (Ordering::Equal, Ordering::Greater) => Ordering::Greater,
        (Ordering::Greater, Ordering::Less) => (a * a).cmp(&(b * b * Rat::from_integer(2.into()))),
        (Ordering::Less, Ordering::Greater) => (b * b * Rat::from_integer(2.into())).cmp(&(a * a)),
    }
}

/// An element of an ordered abelian group of rational rank at most two.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ValueRepr", into = "ValueRepr")]
pub struct Value {
    a: Rat,
    b: Rat,
    mode: Mode,
}

#[derive(Serialize, Deserialize)]
struct ValueRepr {
    #[serde(with = "serde_rat")]
    a: Rat,
    #[serde(with = "serde_rat")]
    b: Rat,
    mode: Mode,
}

impl TryFrom<ValueRepr> for Value {
    type Error = Error;
    fn try_from(r: ValueRepr) -> Result<Value> {
        Value::new(r.a, r.b, r.mode)
    }
}

impl From<Value> for ValueRepr {
    fn from(v: Value) -> ValueRepr {
        ValueRepr { a: v.a, b: v.b, mode: v.mode }
    }
}

impl Value {
    pub fn new(a: Rat, b: Rat, mode: Mode) -> Result<Value> {
        if mode == Mode::Rank1 && !b.is_zero() {
            return Err(Error::Invalid(format!("RANK1 value with b = {}", b)));
        }
        Ok(Value { a, b, mode })
    }

    pub fn rank1(a: Rat) -> Value {
        Value { a, b: Rat::zero(), mode: Mode::Rank1 }
    }

    pub fn lex(a: Rat, b: Rat) -> Value {
        Value { a, b, mode: Mode::Lex }
    }

    pub fn tau(a: Rat, b: Rat) -> Value {
        Value { a, b, mode: Mode::Tau }
    }

    pub fn zero(mode: Mode) -> Value {
        Value { a: Rat::zero(), b: Rat::zero(), mode }
    }

    /// Embeds a rational as (q, 0) in the given mode.
    pub fn from_rat(q: Rat, mode: Mode) -> Value {
        Value { a: q, b: Rat::zero(), mode }
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn coords(&self) -> (Rat, Rat) {
        (self.a.clone(), self.b.clone())
    }

    fn check_mode(&self, other: &Value) -> Result<()> {
        if self.mode != other.mode {
            return Err(Error::ModeMismatch(self.mode.name().into(), other.mode.name().into()));
        }
        Ok(())
    }

    /// Sign of the value in its order.
    pub fn sign(&self) -> Ordering {
        match self.mode {
            Mode::Rank1 => self.a.cmp(&Rat::zero()),
            Mode::Lex => self.a.cmp(&Rat::zero()).then(self.b.cmp(&Rat::zero())),
            Mode::Tau => tau_sign(&self.a, &self.b),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    /// Total-order comparison; errors on mode mismatch.
    pub fn compare(&self, other: &Value) -> Result<Ordering> {
        self.check_mode(other)?;
        let d = Value { a: &self.a - &other.a, b: &self.b - &other.b, mode: self.mode };
        Ok(d.sign())
    }

    pub fn scale(&self, k: &BigInt) -> Value {
        let k = big(k);
        Value { a: &self.a * &k, b: &self.b * &k, mode: self.mode }
    }

    pub fn scale_i(&self, k: i64) -> Value {
        self.scale(&BigInt::from(k))
    }

    /// Multiplies by a rational (used for rescaling whole semigroups).
    pub fn scale_rat(&self, q: &Rat) -> Value {
        Value { a: &self.a * q, b: &self.b * q, mode: self.mode }
    }

    /// The rational q with self = q·other, if one exists.
    pub fn ratio(&self, other: &Value) -> Option<Rat> {
        if other.is_zero() {
            return None;
        }
        let q = if !other.a.is_zero() { &self.a / &other.a } else { &self.b / &other.b };
        if &other.a * &q == self.a && &other.b * &q == self.b {
            Some(q)
        } else {
            None
        }
    }

    /// Parses "p/q" (embedded as (p/q, 0)) or "(a,b)".
    pub fn parse(s: &str, mode: Mode) -> Result<Value> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let (x, y) = inner
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad value {:?}", s)))?;
            Value::new(parse_rat(x)?, parse_rat(y)?, mode)
        } else {
            Ok(Value::from_rat(parse_rat(t)?, mode))
        }
    }

    /// Reads a JSON value: a Value object, a "p/q" string, an integer, or an [a, b] pair.
    pub fn from_json(v: &serde_json::Value, mode: Mode) -> Result<Value> {
        match v {
            serde_json::Value::Object(_) => {
                let val: Value = serde_json::from_value(v.clone())
                    .map_err(|e| Error::Parse(format!("bad value object: {}", e)))?;
                if val.mode != mode {
                    return Err(Error::ModeMismatch(val.mode.name().into(), mode.name().into()));
                }
                Ok(val)
            }
            serde_json::Value::Array(xs) if xs.len() == 2 => Value::new(
                serde_rat::from_json(&xs[0])?,
                serde_rat::from_json(&xs[1])?,
                mode,
            ),
            serde_json::Value::String(s) => Value::parse(s, mode),
            other => Ok(Value::from_rat(serde_rat::from_json(other)?, mode)),
        }
    }

    /// Decimal approximation with k digits (truncated).
    pub fn to_decimal(&self, k: usize) -> String {
        match self.mode {
            Mode::Rank1 => to_decimal(&self.a, k),
            Mode::Lex => format!("({},{})", to_decimal(&self.a, k), to_decimal(&self.b, k)),
            Mode::Tau => {
                // sqrt(2) to k + 4 digits is enough for a k-digit truncation away from ties
                let prec = k + 4;
                let scale = num_traits::pow(BigInt::from(10), prec);
                let s2 = (BigInt::from(2) * &scale * &scale).sqrt();
                let approx = &self.a + &self.b * Rat::new(s2, scale);
                to_decimal(&approx, k)
            }
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Value) -> Option<Ordering> {
        self.compare(other).ok()
    }
}

impl Ord for Value {
    /// Panics on mode mismatch; use [`Value::compare`] when modes are not known to agree.
    fn cmp(&self, other: &Value) -> Ordering {
        self.compare(other).expect("comparing values of different modes")
    }
}

impl<'a> Add<&'a Value> for &'a Value {
    type Output = Value;
    fn add(self, o: &Value) -> Value {
        assert_eq!(self.mode, o.mode, "adding values of different modes");
        Value { a: &self.a + &o.a, b: &self.b + &o.b, mode: self.mode }
    }
}

impl<'a> Sub<&'a Value> for &'a Value {
    type Output = Value;
    fn sub(self, o: &Value) -> Value {
        assert_eq!(self.mode, o.mode, "subtracting values of different modes");
        Value { a: &self.a - &o.a, b: &self.b - &o.b, mode: self.mode }
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, o: Value) -> Value {
        &self + &o
    }
}

impl Sub for Value {
    type Output = Value;
    fn sub(self, o: Value) -> Value {
        &self - &o
    }
}

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value { a: -self.a, b: -self.b, mode: self.mode }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            Mode::Rank1 => write!(f, "{}", fmt_rat(&self.a)),
            Mode::Lex => write!(f, "({},{})", fmt_rat(&self.a), fmt_rat(&self.b)),
            Mode::Tau => {
                if self.b.is_zero() {
                    write!(f, "{}", fmt_rat(&self.a))
                } else if self.a.is_zero() {
                    write!(f, "{}*sqrt(2)", fmt_rat(&self.b))
                } else if self.b.is_negative() {
                    write!(f, "{}-{}*sqrt(2)", fmt_rat(&self.a), fmt_rat(&-&self.b))
                } else {
                    write!(f, "{}+{}*sqrt(2)", fmt_rat(&self.a), fmt_rat(&self.b))
                }
            }
        }
    }
}

/// Sum of `coeffs[i]·values[i]`.
pub fn combine(coeffs: &[BigInt], values: &[Value], mode: Mode) -> Value {
    coeffs
        .iter()
        .zip(values)
        .fold(Value::zero(mode), |acc, (c, v)| &acc + &v.scale(c))
}

/// A positive integer or infinity (group indices, residue degrees).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Card {
    Finite(u64),
    Infinite,
}

impl Card {
    pub fn finite(self) -> Option<u64> {
        match self {
            Card::Finite(n) => Some(n),
            Card::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Card::Finite(_))
    }

    pub fn mul(self, other: Card) -> Card {
        match (self, other) {
            (Card::Finite(a), Card::Finite(b)) => Card::Finite(a * b),
            _ => Card::Infinite,
        }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Finite(n) => write!(f, "{}", n),
            Card::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Card {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Card::Finite(n) => s.serialize_u64(*n),
            Card::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Card {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Card, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::Number(n) => match n.as_u64() {
                Some(k) if k >= 1 => Ok(Card::Finite(k)),
                _ => Err(serde::de::Error::custom(format!("expected positive integer, got {}", n))),
            },
            serde_json::Value::String(s) if s == "inf" || s == "INFINITE" => Ok(Card::Infinite),
            _ => Err(serde::de::Error::custom(format!("expected positive integer or \"inf\", got {}", v))),
        }
    }
}

/// A finitely generated subgroup of Q² (or Q for RANK1) in canonical Hermite form.
///
/// Rows are upper triangular: an optional pivot row (p, q) with p > 0, then an
/// optional row (0, h) with h > 0, and q reduced into [0, h) when both exist.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValueLattice {
    mode: Mode,
    rows: Vec<(Rat, Rat)>,
}

impl ValueLattice {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|(a, b)| Value { a: a.clone(), b: b.clone(), mode: self.mode })
            .collect()
    }

    /// Integer coordinates of v in the basis, if v lies in the lattice.
    pub fn coordinates(&self, v: &Value) -> Option<Vec<BigInt>> {
        if v.mode != self.mode {
            return None;
        }
        let (x, y) = (&v.a, &v.b);
        match self.rows.as_slice() {
            [] => (x.is_zero() && y.is_zero()).then(Vec::new),
            [(p, q)] => {
                let c = if !p.is_zero() { x / p } else { y / q };
                if !c.is_integer() || &(p * &c) != x || &(q * &c) != y {
                    return None;
                }
                Some(vec![c.to_integer()])
            }
            [(p, q), (_, h)] => {
                let c0 = x / p;
                if !c0.is_integer() {
                    return None;
                }
                let c1 = (y - q * &c0) / h;
                if !c1.is_integer() {
                    return None;
                }
                Some(vec![c0.to_integer(), c1.to_integer()])
            }
            _ => unreachable!("lattice rank exceeds two"),
        }
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subset_of(&self, sup: &ValueLattice) -> bool {
        self.mode == sup.mode && self.basis().iter().all(|v| sup.contains(v))
    }
}

/// The subgroup generated by the given values.
pub fn lattice_from(gens: &[Value]) -> Result<ValueLattice> {
    let first = gens.first().ok_or_else(|| Error::Empty("lattice generators".into()))?;
    let mode = first.mode;
    for g in gens {
        first.check_mode(g)?;
    }
    let l = lcm_den(gens.iter().flat_map(|g| [&g.a, &g.b]));
    let lr = big(&l);
    let ints: Vec<(BigInt, BigInt)> = gens
        .iter()
        .map(|g| ((&g.a * &lr).to_integer(), (&g.b * &lr).to_integer()))
        .collect();

    let mut pivot: Option<(BigInt, BigInt)> = None;
    let mut h = BigInt::zero();
    for (u, v) in ints {
        if u.is_zero() {
            h = h.gcd(&v);
            continue;
        }
        match pivot.take() {
            None => pivot = Some((u, v)),
            Some((p1, p2)) => {
                let e = p1.extended_gcd(&u);
                let g = e.gcd;
                let np = (&e.x * &p1 + &e.y * &u, &e.x * &p2 + &e.y * &v);
                // second column of the vector with vanishing first entry
                let killed = (&u / &g) * &p2 - (&p1 / &g) * &v;
                h = h.gcd(&killed);
                pivot = Some(np);
            }
        }
    }
    let mut rows = Vec::new();
    if let Some((mut p1, mut p2)) = pivot {
        if p1.is_negative() {
            p1 = -p1;
            p2 = -p2;
        }
        if !h.is_zero() {
            p2 = p2.mod_floor(&h);
        }
        rows.push((Rat::new(p1, l.clone()), Rat::new(p2, l.clone())));
    }
    if !h.is_zero() {
        rows.push((Rat::zero(), Rat::new(h.abs(), l.clone())));
    }
    Ok(ValueLattice { mode, rows })
}

/// [sup : sub] as a positive integer, or infinite when sup has larger rank.
pub fn group_index(sub: &ValueLattice, sup: &ValueLattice) -> Result<Card> {
    if sub.mode != sup.mode {
        return Err(Error::ModeMismatch(sub.mode.name().into(), sup.mode.name().into()));
    }
    if !sub.is_subset_of(sup) {
        return Err(Error::NotContained);
    }
    if sup.rank() > sub.rank() {
        return Ok(Card::Infinite);
    }
    let ratio = match (sub.rows.as_slice(), sup.rows.as_slice()) {
        ([], []) => Rat::one(),
        ([(a, b)], [(c, d)]) => {
            if !c.is_zero() {
                (a / c).abs()
            } else {
                (b / d).abs()
            }
        }
        ([(a, _), (_, b)], [(c, _), (_, d)]) => (a * b) / (c * d),
        _ => unreachable!("ranks checked above"),
    };
    debug_assert!(ratio.is_integer());
    ratio
        .to_integer()
        .to_u64()
        .map(Card::Finite)
        .ok_or_else(|| Error::Invalid("group index too large".into()))
}

/// The groups G(β_0..β_i) and indices n̄_i of a list of values.
#[derive(Clone, Debug)]
pub struct ValueChain {
    mode: Mode,
    betas: Vec<Value>,
    lattices: Vec<ValueLattice>,
    nbars: Vec<Card>,
}

impl ValueChain {
    pub fn new(betas: &[Value]) -> Result<ValueChain> {
        let first = betas.first().ok_or_else(|| Error::Empty("value chain".into()))?;
        let mut chain = ValueChain {
            mode: first.mode,
            betas: Vec::new(),
            lattices: Vec::new(),
            nbars: Vec::new(),
        };
        for b in betas {
            chain.push(b.clone())?;
        }
        Ok(chain)
    }

    pub fn push(&mut self, beta: Value) -> Result<()> {
        if beta.mode != self.mode {
            return Err(Error::ModeMismatch(beta.mode.name().into(), self.mode.name().into()));
        }
        let mut gens = self.lattices.last().map(|l| l.basis()).unwrap_or_default();
        gens.push(beta.clone());
        let lat = lattice_from(&gens)?;
        let nbar = match self.lattices.last() {
            Some(prev) => group_index(prev, &lat)?,
            None => Card::Finite(1),
        };
        self.betas.push(beta);
        self.lattices.push(lat);
        self.nbars.push(nbar);
        Ok(())
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }

    pub fn betas(&self) -> &[Value] {
        &self.betas
    }

    pub fn beta(&self, i: usize) -> &Value {
        &self.betas[i]
    }

    /// n̄_i for i ≥ 1 (n̄_0 is reported as 1).
    pub fn nbar(&self, i: usize) -> Card {
        self.nbars[i]
    }

    /// n̄_1, …, n̄_{len-1}.
    pub fn nbars(&self) -> &[Card] {
        &self.nbars[1..]
    }

    /// G(β_0, …, β_i).
    pub fn lattice(&self, i: usize) -> &ValueLattice {
        &self.lattices[i]
    }

    /// Coefficients (a_0, …, a_k) with γ = Σ a_iβ_i, 0 ≤ a_i < n̄_i for i ≥ 1.
    ///
    /// Reduces from index k down to 1; a_0 may be negative.
    pub fn representation(&self, gamma: &Value, k: usize) -> Result<Vec<BigInt>> {
        if gamma.mode != self.mode {
            return Err(Error::ModeMismatch(gamma.mode.name().into(), self.mode.name().into()));
        }
        if k >= self.betas.len() {
            return Err(Error::Invalid(format!("index {} beyond chain of length {}", k, self.betas.len())));
        }
        let not_in = || Error::NotInGroup(format!("{} not in G(β_0..β_{})", gamma, k));
        if !self.lattices[k].contains(gamma) {
            return Err(not_in());
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        let mut rem = gamma.clone();
        for i in (1..=k).rev() {
            let below = &self.lattices[i - 1];
            let beta = &self.betas[i];
            let t = match self.nbars[i] {
                Card::Finite(n) => {
                    let mut found = None;
                    let mut cur = rem.clone();
                    for t in 0..n {
                        if below.contains(&cur) {
                            found = Some(BigInt::from(t));
                            break;
                        }
                        cur = &cur - beta;
                    }
                    found.ok_or_else(not_in)?
                }
                Card::Infinite => {
                    // a functional vanishing on the rank-one group below
                    let (p, q) = below.rows[0].clone();
                    let phi = |v: &Value| &p * &v.b - &q * &v.a;
                    let t = phi(&rem) / phi(beta);
                    if !t.is_integer() {
                        return Err(not_in());
                    }
                    t.to_integer()
                }
            };
            rem = &rem - &beta.scale(&t);
            coeffs[i] = t;
        }
        let a0 = rem.ratio(&self.betas[0]).filter(|q| q.is_integer()).ok_or_else(not_in)?;
        coeffs[0] = a0.to_integer();
        Ok(coeffs)
    }

    /// Whether γ is a nonnegative combination of β_0..β_k, with a witness.
    pub fn membership(&self, gamma: &Value, k: usize) -> Result<Membership> {
        let rep = match self.representation(gamma, k) {
            Ok(r) => r,
            Err(Error::NotInGroup(msg)) => {
                return Ok(Membership { member: false, witness: None, reason: Some(msg) });
            }
            Err(e) => return Err(e),
        };
        if !rep[0].is_negative() {
            return Ok(Membership { member: true, witness: Some(rep), reason: None });
        }
        let witness = nonneg_combination(gamma, &self.betas[..=k])?;
        let reason = witness.is_none().then(|| "in group but not a nonnegative combination".to_string());
        Ok(Membership { member: witness.is_some(), witness, reason })
    }
}

/// Answer of a semigroup membership query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_ints")]
    pub witness: Option<Vec<BigInt>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

fn ser_opt_ints<S: serde::Serializer>(v: &Option<Vec<BigInt>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Option<Vec<String>> = v.as_ref().map(|xs| xs.iter().map(|x| x.to_string()).collect());
    strs.serialize(s)
}

fn check_nbars(chain: &ValueChain, nbars: &[Card]) -> Result<()> {
    if nbars.len() + 1 != chain.len() {
        return Err(Error::InconsistentIndex(format!(
            "expected {} indices, got {}",
            chain.len() - 1,
            nbars.len()
        )));
    }
    for (i, (given, computed)) in nbars.iter().zip(chain.nbars()).enumerate() {
        if given != computed {
            return Err(Error::InconsistentIndex(format!(
                "n̄_{} supplied as {} but computed as {}",
                i + 1,
                given,
                computed
            )));
        }
    }
    Ok(())
}

/// Coefficients with 0 ≤ a_i < n̄_i for i ≥ 1 of γ over β_0..β_k; `nbars` must be n̄_1..n̄_k.
pub fn bounded_representation(gamma: &Value, betas: &[Value], nbars: &[Card]) -> Result<Vec<BigInt>> {
    let chain = ValueChain::new(betas)?;
    check_nbars(&chain, nbars)?;
    chain.representation(gamma, betas.len() - 1)
}

/// Semigroup membership of γ in S(β_0..β_k).
pub fn bounded_membership(gamma: &Value, betas: &[Value], nbars: &[Card]) -> Result<Membership> {
    let chain = ValueChain::new(betas)?;
    check_nbars(&chain, nbars)?;
    for b in betas {
        if !b.is_positive() {
            return Err(Error::Nonpositive(b.to_string()));
        }
    }
    chain.membership(gamma, betas.len() - 1)
}

/// Nonnegative integer coefficients c with γ = Σ c_i g_i, by bounded search.
///
/// All generators must be positive. The search is complete: every slot is bounded
/// by the remaining value (in LEX mode, generators with a = 0 are only used once
/// the first coordinate is exhausted).
pub fn nonneg_combination(gamma: &Value, gens: &[Value]) -> Result<Option<Vec<BigInt>>> {
    for g in gens {
        gamma.check_mode(g)?;
        if !g.is_positive() {
            return Err(Error::Nonpositive(g.to_string()));
        }
    }
    if gamma.sign() == Ordering::Less {
        return Ok(None);
    }
    let mode = gamma.mode;
    let mut order: Vec<usize> = (0..gens.len()).collect();
    // large generators first; in LEX, the a = 0 generators last
    order.sort_by(|&i, &j| {
        let ki = mode == Mode::Lex && gens[i].a.is_zero();
        let kj = mode == Mode::Lex && gens[j].a.is_zero();
        ki.cmp(&kj).then(gens[j].cmp(&gens[i]))
    });
    let mut coeffs = vec![BigInt::zero(); gens.len()];
    if search(gamma, gens, &order, 0, &mut coeffs) {
        Ok(Some(coeffs))
    } else {
        Ok(None)
    }
}

fn search(rem: &Value, gens: &[Value], order: &[usize], pos: usize, coeffs: &mut [BigInt]) -> bool {
    if rem.is_zero() {
        return true;
    }
    if pos == order.len() {
        return false;
    }
    let idx = order[pos];
    let g = &gens[idx];
    if rem.mode == Mode::Lex && g.a.is_zero() && !rem.a.is_zero() {
        return false;
    }
    if pos + 1 == order.len() {
        return match rem.ratio(g) {
            Some(q) if q.is_integer() && !q.is_negative() => {
                coeffs[idx] = q.to_integer();
                true
            }
            _ => false,
        };
    }
    let mut c = BigInt::zero();
    let mut cur = rem.clone();
    while cur.sign() != Ordering::Less {
        if search(&cur, gens, order, pos + 1, coeffs) {
            coeffs[idx] = c;
            return true;
        }
        cur = &cur - g;
        c += 1;
    }
    coeffs[idx] = BigInt::zero();
    false
}

/// Options for [`validate_semigroup_data`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationOptions {
    /// The list is the whole sequence (Λ = len − 1) rather than a prefix of an infinite one.
    pub finite: bool,
    /// Require the terminal alternatives for complete rings; when false the extra
    /// terminal case n̄_Λ < ∞, d_Λ < ∞ is admitted.
    pub complete: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions { finite: false, complete: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub nbars: Vec<Card>,
    pub ok: bool,
    pub first_violation: Option<Violation>,
}

/// Checks the inequality chain on β_0..β_{len-1} (and residue degrees d_1.. when given).
///
/// `dees[j]` is d_{j+1}. In prefix mode it may cover all indices or stop one short
/// (the last index has no successor to constrain it).
pub fn validate_semigroup_data(
    betas: &[Value],
    dees: Option<&[Card]>,
    opts: ValidationOptions,
) -> Result<ValidationReport> {
    if betas.len() < 2 {
        return Err(Error::Invalid("need at least two values".into()));
    }
    for b in betas {
        betas[0].check_mode(b)?;
        if !b.is_positive() {
            return Err(Error::Nonpositive(b.to_string()));
        }
    }
    let last = betas.len() - 1;
    if let Some(d) = dees {
        let ok_len = d.len() == last || (!opts.finite && d.len() + 1 == last);
        if !ok_len {
            return Err(Error::Invalid(format!("expected {} residue degrees, got {}", last, d.len())));
        }
    }
    let chain = ValueChain::new(betas)?;
    let nbars = chain.nbars().to_vec();
    let dee = |i: usize| dees.and_then(|d| d.get(i - 1).copied());
    let terminal = if opts.finite { Some(last) } else { None };

    let mut violation = None;
    for i in 1..=last {
        let nbar = chain.nbar(i);
        let v = |m: String| Some(Violation { index: i, message: m });
        if Some(i) == terminal {
            if let Some(d) = dee(i) {
                let ok = (nbar == Card::Infinite && d == Card::Finite(1))
                    || (nbar.is_finite() && d == Card::Infinite)
                    || (!opts.complete && nbar.is_finite() && d.is_finite());
                if !ok {
                    violation = v(format!("terminal index admits neither alternative (n̄ = {}, d = {})", nbar, d));
                }
            }
        } else {
            let Card::Finite(n) = nbar else {
                violation = v(format!("n̄_{} infinite before the terminal index", i));
                break;
            };
            let d = dee(i);
            let nd = match d {
                Some(Card::Infinite) => {
                    violation = v(format!("d_{} infinite before the terminal index", i));
                    break;
                }
                Some(Card::Finite(d)) => n * d,
                None => n,
            };
            if d.is_some() && nd <= 1 {
                violation = v(format!("n̄_{0}·d_{0} = 1, need n̄_{0}·d_{0}·β_{0} > β_{0}", i));
                break;
            }
            if i < last {
                let bound = chain.beta(i).scale(&BigInt::from(nd));
                if chain.beta(i + 1) <= &bound {
                    let what = if d.is_some() { "n̄_i·d_i·β_i" } else { "n̄_i·β_i" };
                    violation = v(format!("β_{} = {} is not > {} = {}", i + 1, chain.beta(i + 1), what, bound));
                }
            }
        }
        if violation.is_some() {
            break;
        }
    }
    Ok(ValidationReport { nbars, ok: violation.is_none(), first_violation: violation })
}
