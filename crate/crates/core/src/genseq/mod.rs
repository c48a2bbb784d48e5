//! Generating sequences of key polynomials P_0 = x, P_1 = y, P_2, …: synthesis
//! from value and residue data, discovery from an oracle valuation, canonical
//! expansions and the residue map on value-zero Laurent monomials.

mod analyze;
mod expand;
mod synth;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde_json::json;

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::rat::{int, json_rat, Rat};
use crate::tower::{BaseField, Tower, TowerElement};
use crate::values::{Card, Mode, Value, ValueChain};

pub use analyze::{analyze, AnalyzeOptions, DEFAULT_STABILIZE_AFTER};
pub use expand::{expand, expand_rewrite, residue_of, rewrite_step, value_of, Expansion};
pub use synth::{realize_residue, synthesize, SynthesisInput};

/// Exponent vector over P_0, P_1, ….
pub type Exps = Vec<u32>;

/// c·P_0^{e_0}⋯P_r^{e_r}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rat,
    pub exps: Exps,
}

impl Term {
    pub fn new(coeff: Rat, exps: Exps) -> Term {
        Term { coeff, exps }
    }

    fn to_json(&self, field: BaseField) -> serde_json::Value {
        json!({ "c": field.scalar_to_json(&self.coeff), "e": self.exps })
    }

    fn from_json(v: &serde_json::Value, field: BaseField) -> Result<Term> {
        let c = v.get("c").ok_or_else(|| Error::Parse("term without \"c\"".into()))?;
        let e = v
            .get("e")
            .and_then(|e| e.as_array())
            .ok_or_else(|| Error::Parse("term without \"e\" array".into()))?;
        let exps = e
            .iter()
            .map(|x| x.as_u64().and_then(|n| u32::try_from(n).ok()))
            .collect::<Option<Exps>>()
            .ok_or_else(|| Error::Parse("term exponents must be small nonnegative integers".into()))?;
        Ok(Term { coeff: field.scalar_from_json(c)?, exps })
    }
}

/// The data of index i ≥ 1, which defines P_{i+1} = P_i^{n_i} + Σ c·P^e.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub index: usize,
    pub nbar: u64,
    pub degree: u64,
    /// w_0(i), …, w_{i-1}(i): U_i = Π P_j^{w_j}.
    pub u: Exps,
    /// Correction terms over P_0..P_i (P_i exponents are multiples of n̄_i below n_i).
    pub relation: Vec<Term>,
}

impl Step {
    /// n_i = n̄_i·d_i.
    pub fn n(&self) -> u64 {
        self.nbar * self.degree
    }
}

/// How (and whether) the sequence ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Terminal {
    /// Truncated at the requested depth.
    Open,
    /// n̄_Ω = ∞: ν(P_Ω) leaves the rational span of the earlier values.
    TerminatedIndependent { index: usize },
    /// n̄_Ω < ∞ but α_Ω is transcendental.
    TerminatedTranscendental { index: usize },
    /// n_i = 1 for `run` consecutive steps from `from` on (a diagnosis, not a proof).
    Stabilized { from: usize, run: usize },
}

impl Terminal {
    pub fn name(&self) -> &'static str {
        match self {
            Terminal::Open => "OPEN",
            Terminal::TerminatedIndependent { .. } => "TERMINATED_INDEPENDENT",
            Terminal::TerminatedTranscendental { .. } => "TERMINATED_TRANSCENDENTAL",
            Terminal::Stabilized { .. } => "STABILIZED",
        }
    }

    /// Index whose key has unbounded exponents in expansions.
    pub fn terminal_index(&self) -> Option<usize> {
        match self {
            Terminal::TerminatedIndependent { index } | Terminal::TerminatedTranscendental { index } => Some(*index),
            _ => None,
        }
    }

    fn to_json(self) -> serde_json::Value {
        match self {
            Terminal::Open => json!({ "state": "OPEN" }),
            Terminal::TerminatedIndependent { index } => json!({ "state": self.name(), "index": index }),
            Terminal::TerminatedTranscendental { index } => json!({ "state": self.name(), "index": index }),
            Terminal::Stabilized { from, run } => json!({ "state": self.name(), "from": from, "run": run }),
        }
    }

    fn from_json(v: &serde_json::Value) -> Result<Terminal> {
        let state = v.get("state").and_then(|s| s.as_str()).unwrap_or("OPEN");
        let field = |k: &str| -> Result<usize> {
            v.get(k)
                .and_then(|x| x.as_u64())
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse(format!("terminal {} needs \"{}\"", state, k)))
        };
        Ok(match state {
            "OPEN" => Terminal::Open,
            "TERMINATED_INDEPENDENT" => Terminal::TerminatedIndependent { index: field("index")? },
            "TERMINATED_TRANSCENDENTAL" => Terminal::TerminatedTranscendental { index: field("index")? },
            "STABILIZED" => Terminal::Stabilized { from: field("from")?, run: field("run")? },
            other => return Err(Error::Parse(format!("unknown terminal state {:?}", other))),
        })
    }
}

/// Where a sequence came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Synthesis,
    Analysis,
}

impl Source {
    fn name(self) -> &'static str {
        match self {
            Source::Synthesis => "synthesis",
            Source::Analysis => "analysis",
        }
    }
}

/// A generating sequence truncated to a finite depth. Frozen after construction.
///
/// When `swapped` is set the keys live in swapped coordinates (x ↔ y), chosen so
/// that ν(P_0) = ν(m); inputs are swapped before evaluation.
#[derive(Clone, Debug)]
pub struct GenSeq {
    field: BaseField,
    mode: Mode,
    tower: Tower,
    keys: Vec<BiPoly>,
    /// Known values; may extend past the last key in synthesis (planned values).
    betas: Vec<Value>,
    steps: Vec<Step>,
    terminal: Terminal,
    curve: Option<(BiPoly, Value)>,
    swapped: bool,
    source: Source,
    chain: ValueChain,
}

impl PartialEq for GenSeq {
    fn eq(&self, o: &GenSeq) -> bool {
        self.field == o.field
            && self.mode == o.mode
            && self.tower == o.tower
            && self.keys == o.keys
            && self.betas == o.betas
            && self.steps == o.steps
            && self.terminal == o.terminal
            && self.curve == o.curve
            && self.swapped == o.swapped
            && self.source == o.source
    }
}

#[allow(clippy::too_many_arguments)]
impl GenSeq {
    fn assemble(
        field: BaseField,
        tower: Tower,
        keys: Vec<BiPoly>,
        betas: Vec<Value>,
        steps: Vec<Step>,
        terminal: Terminal,
        curve: Option<(BiPoly, Value)>,
        swapped: bool,
        source: Source,
    ) -> Result<GenSeq> {
        let chain = ValueChain::new(&betas)?;
        let mode = chain.mode();
        Ok(GenSeq { field, mode, tower, keys, betas, steps, terminal, curve, swapped, source, chain })
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn keys(&self) -> &[BiPoly] {
        &self.keys
    }

    pub fn key(&self, i: usize) -> &BiPoly {
        &self.keys[i]
    }

    /// All known values (possibly more than there are keys).
    pub fn betas(&self) -> &[Value] {
        &self.betas
    }

    /// ν(P_i) when known.
    pub fn beta(&self, i: usize) -> Option<&Value> {
        if i < self.keys.len() {
            self.betas.get(i)
        } else {
            None
        }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn step(&self, i: usize) -> Option<&Step> {
        if i == 0 {
            None
        } else {
            self.steps.get(i - 1)
        }
    }

    pub fn terminal(&self) -> Terminal {
        self.terminal
    }

    pub fn curve(&self) -> Option<&(BiPoly, Value)> {
        self.curve.as_ref()
    }

    pub fn swapped(&self) -> bool {
        self.swapped
    }

    pub fn source(&self) -> Source {
        self.source
    }

    /// Number of constructed steps; keys P_0..P_{depth+1} exist.
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn chain(&self) -> &ValueChain {
        &self.chain
    }

    /// Highest key index whose value is known.
    pub fn top(&self) -> usize {
        self.keys.len().min(self.betas.len()) - 1
    }

    /// n̄_i for a key with known value.
    pub fn nbar(&self, i: usize) -> Option<Card> {
        (i >= 1 && i < self.chain.len() && i < self.keys.len()).then(|| self.chain.nbar(i))
    }

    /// n_i, or ∞ for the terminal index; None when not determined.
    pub fn n_bound(&self, i: usize) -> Option<Card> {
        if let Some(s) = self.step(i) {
            return Some(Card::Finite(s.n()));
        }
        if self.terminal.terminal_index() == Some(i) {
            return Some(Card::Infinite);
        }
        None
    }

    /// Input polynomial in working coordinates.
    pub fn to_work(&self, f: &BiPoly) -> BiPoly {
        if self.swapped {
            f.swap_xy()
        } else {
            f.clone()
        }
    }

    /// Whether 0 ≤ e_k < n_k for k ≥ 1 (conservatively false when n_k is unknown
    /// and e_k ≥ n̄_k).
    pub fn in_range(&self, exps: &[u32]) -> bool {
        exps.iter().enumerate().skip(1).all(|(k, &e)| {
            if e == 0 {
                return true;
            }
            match self.n_bound(k) {
                Some(Card::Finite(n)) => (e as u64) < n,
                Some(Card::Infinite) => true,
                None => matches!(self.nbar(k), Some(Card::Finite(nb)) if (e as u64) < nb),
            }
        })
    }

    /// ν(P^e) when every key involved has a known value.
    pub fn monomial_value(&self, exps: &[u32]) -> Option<Value> {
        let mut v = Value::zero(self.mode);
        for (k, &e) in exps.iter().enumerate() {
            if e > 0 {
                v = &v + &self.beta(k)?.scale_i(e as i64);
            }
        }
        Some(v)
    }

    /// Π P_k^{e_k} as a polynomial (in working coordinates).
    pub fn monomial_poly(&self, exps: &[u32]) -> BiPoly {
        let mut p = BiPoly::one(self.field);
        for (k, &e) in exps.iter().enumerate() {
            if e > 0 {
                p = p.mul(&self.keys[k].pow(e));
            }
        }
        p
    }

    /// res(M) for a value-zero Laurent monomial M = Π P_k^{e_k}, via
    /// M = Π (P_j^{n̄_j}/U_j)^{s_j} reduced from the top index down.
    pub fn res(&self, exps: &[i64]) -> Result<TowerElement> {
        let mut e: Vec<BigInt> = exps.iter().map(|&x| BigInt::from(x)).collect();
        let mut acc = self.tower.one(0);
        for j in (1..e.len()).rev() {
            if e[j].is_zero() {
                continue;
            }
            let nbar = match self.nbar(j) {
                Some(Card::Finite(n)) => n,
                _ => return Err(Error::NotInGroup(format!("exponent of P_{} in a value-zero monomial", j))),
            };
            let (s, r) = e[j].div_rem(&BigInt::from(nbar));
            if !r.is_zero() {
                return Err(Error::Invalid(format!("monomial {:?} does not have value zero", exps)));
            }
            let step = self
                .step(j)
                .ok_or_else(|| Error::DepthExceeded(format!("residue needs α_{} (step {} not constructed)", j, j)))?;
            if self.tower.height() < j {
                return Err(Error::DepthExceeded(format!("tower has no level {}", j)));
            }
            let alpha = self.tower.generator(j)?;
            let si = s.to_i64().ok_or_else(|| Error::Invalid("exponent overflow".into()))?;
            acc = self.tower.mul(&acc, &self.tower.pow(&alpha, si)?);
            e[j] = BigInt::zero();
            for (k, w) in step.u.iter().enumerate() {
                e[k] += &s * BigInt::from(*w);
            }
        }
        if !e[0].is_zero() {
            return Err(Error::Invalid(format!("monomial {:?} does not have value zero", exps)));
        }
        Ok(acc)
    }

    /// Rank over k of the residues res(M_l / M_1) of same-value monomials.
    pub fn residue_rank(&self, monos: &[Exps]) -> Result<usize> {
        let Some(first) = monos.first() else { return Ok(0) };
        let len = monos.iter().map(|m| m.len()).max().unwrap_or(0);
        let v0 = self
            .monomial_value(first)
            .ok_or_else(|| Error::DepthExceeded("monomial with unknown value".into()))?;
        let mut elems = Vec::new();
        for m in monos {
            if self.monomial_value(m).as_ref() != Some(&v0) {
                return Err(Error::ValueMismatch(format!("{:?}", m), format!("{:?}", first)));
            }
            elems.push(self.res(&laurent_diff(m, first, len))?);
        }
        let level = elems.iter().map(|e| e.level()).max().unwrap_or(0);
        let rows: Vec<Vec<Rat>> = elems
            .iter()
            .map(|e| Ok(self.tower.flatten(&self.tower.lift(e, level)?)))
            .collect::<Result<_>>()?;
        Ok(rank(rows, self.field))
    }

    /// Checks the structural invariants: value growth, U_i ranges and values,
    /// relation ranges and values, the defining identity of each P_{i+1},
    /// monicity and y-degree, and the binomial shape when all d_i = 1.
    pub fn check_invariants(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(m));
        if self.keys.len() < 2 || self.keys[0] != BiPoly::x(self.field) || self.keys[1] != BiPoly::y(self.field) {
            return bad("keys must start with x, y".into());
        }
        if self.steps.len() + 2 < self.keys.len() {
            return bad("keys without defining steps".into());
        }
        let mut ydeg: u64 = 1;
        let mut all_trivial = true;
        for (idx, s) in self.steps.iter().enumerate() {
            let i = idx + 1;
            if s.index != i {
                return bad(format!("step {} labelled {}", i, s.index));
            }
            let beta = self.beta(i).ok_or_else(|| Error::Invalid(format!("β_{} unknown", i)))?;
            if self.nbar(i) != Some(Card::Finite(s.nbar)) {
                return bad(format!("n̄_{} recorded as {} but value data give {:?}", i, s.nbar, self.nbar(i)));
            }
            if s.u.len() != i {
                return bad(format!("U_{} has {} exponents", i, s.u.len()));
            }
            if !self.in_range(&padded(&s.u, i)) {
                return bad(format!("U_{} exponents out of range", i));
            }
            let nb = beta.scale_i(s.nbar as i64);
            if self.monomial_value(&s.u).as_ref() != Some(&nb) {
                return bad(format!("ν(U_{}) ≠ n̄_{}β_{}", i, i, i));
            }
            let target = beta.scale_i(s.n() as i64);
            for t in &s.relation {
                if t.exps.len() != i + 1 {
                    return bad(format!("relation term of step {} has {} exponents", i, t.exps.len()));
                }
                let top = t.exps[i] as u64;
                if !top.is_multiple_of(s.nbar) || top >= s.n() || !self.in_range(&t.exps[..i]) {
                    return bad(format!("relation term {:?} of step {} out of range", t.exps, i));
                }
                if self.monomial_value(&t.exps).as_ref() != Some(&target) {
                    return bad(format!("relation term {:?} of step {} has the wrong value", t.exps, i));
                }
            }
            if let Some(next) = self.beta(i + 1) {
                if next <= &target {
                    return bad(format!("β_{} = {} is not > n_{}β_{} = {}", i + 1, next, i, i, target));
                }
            }
            if i + 1 < self.keys.len() {
                let mut p = self.keys[i].pow(s.n() as u32);
                for t in &s.relation {
                    p = p.add(&self.monomial_poly(&t.exps).scale(&t.coeff));
                }
                if p != self.keys[i + 1] {
                    return bad(format!("P_{} does not match its defining relation", i + 1));
                }
                ydeg *= s.n();
                let pk = &self.keys[i + 1];
                if pk.deg_y()? as u64 != ydeg || !pk.is_monic_in_y()? {
                    return bad(format!("P_{} is not monic of y-degree {}", i + 1, ydeg));
                }
                all_trivial &= s.degree == 1;
                if all_trivial && s.relation.len() != 1 {
                    return bad(format!("P_{} is not a binomial although no residue extension occurred", i + 1));
                }
            }
        }
        Ok(())
    }

    // --- interchange format ---

    pub fn to_json(&self) -> serde_json::Value {
        let f = self.field;
        let mode = self.mode;
        let val = |v: &Value| value_json(v, mode);
        json!({
            "format": "valkey.genseq/1",
            "source": self.source.name(),
            "field": f,
            "mode": mode,
            "swapped": self.swapped,
            "tower": self.tower.to_json(),
            "keys": self.keys.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
            "betas": self.betas.iter().map(val).collect::<Vec<_>>(),
            "steps": self.steps.iter().map(|s| json!({
                "index": s.index,
                "nbar": s.nbar,
                "d": s.degree,
                "u": s.u,
                "relation": s.relation.iter().map(|t| t.to_json(f)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "terminal": self.terminal.to_json(),
            "curve": self.curve.as_ref().map(|(g, v)| json!({ "g": g.to_string(), "value": val(v) })),
            "depth": self.depth(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<GenSeq> {
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("sequence: missing \"{}\"", k)));
        let field: BaseField = serde_json::from_value(get("field")?.clone())
            .map_err(|e| Error::Parse(format!("sequence field: {}", e)))?;
        let mode: Mode =
            serde_json::from_value(get("mode")?.clone()).map_err(|e| Error::Parse(format!("sequence mode: {}", e)))?;
        let tower = Tower::from_json(get("tower")?)?;
        if tower.base() != field {
            return Err(Error::Parse("tower base differs from sequence field".into()));
        }
        let arr = |k: &str| -> Result<&Vec<serde_json::Value>> {
            get(k)?.as_array().ok_or_else(|| Error::Parse(format!("sequence: \"{}\" must be an array", k)))
        };
        let keys = arr("keys")?
            .iter()
            .map(|k| {
                let s = k.as_str().ok_or_else(|| Error::Parse("keys must be strings".into()))?;
                BiPoly::parse(s, field)
            })
            .collect::<Result<Vec<_>>>()?;
        let betas = arr("betas")?.iter().map(|b| Value::from_json(b, mode)).collect::<Result<Vec<_>>>()?;
        let mut steps = Vec::new();
        for s in arr("steps")? {
            let num = |k: &str| -> Result<u64> {
                s.get(k).and_then(|x| x.as_u64()).ok_or_else(|| Error::Parse(format!("step: missing \"{}\"", k)))
            };
            let u = s
                .get("u")
                .and_then(|u| u.as_array())
                .ok_or_else(|| Error::Parse("step: missing \"u\"".into()))?
                .iter()
                .map(|x| x.as_u64().and_then(|n| u32::try_from(n).ok()))
                .collect::<Option<Exps>>()
                .ok_or_else(|| Error::Parse("step: bad \"u\"".into()))?;
            let relation = s
                .get("relation")
                .and_then(|r| r.as_array())
                .ok_or_else(|| Error::Parse("step: missing \"relation\"".into()))?
                .iter()
                .map(|t| Term::from_json(t, field))
                .collect::<Result<Vec<_>>>()?;
            steps.push(Step { index: num("index")? as usize, nbar: num("nbar")?, degree: num("d")?, u, relation });
        }
        let terminal = Terminal::from_json(get("terminal")?)?;
        let curve = match v.get("curve") {
            None | Some(serde_json::Value::Null) => None,
            Some(c) => {
                let g = c.get("g").and_then(|g| g.as_str()).ok_or_else(|| Error::Parse("curve: missing \"g\"".into()))?;
                let val = c.get("value").ok_or_else(|| Error::Parse("curve: missing \"value\"".into()))?;
                Some((BiPoly::parse(g, field)?, Value::from_json(val, mode)?))
            }
        };
        let swapped = v.get("swapped").and_then(|s| s.as_bool()).unwrap_or(false);
        let source = match v.get("source").and_then(|s| s.as_str()) {
            Some("analysis") => Source::Analysis,
            _ => Source::Synthesis,
        };
        if keys.len() < 2 || betas.len() < 2 {
            return Err(Error::Parse("sequence needs at least the keys x, y and their values".into()));
        }
        let seq = GenSeq::assemble(field, tower, keys, betas, steps, terminal, curve, swapped, source)?;
        if seq.mode != mode {
            return Err(Error::ModeMismatch(seq.mode.name().into(), mode.name().into()));
        }
        seq.check_structure()?;
        seq.check_invariants()?;
        Ok(seq)
    }

    /// Shape checks that must pass before the invariants can be evaluated.
    fn check_structure(&self) -> Result<()> {
        if self.keys.len() > self.steps.len() + 2 {
            return Err(Error::Parse("more keys than steps allow".into()));
        }
        for (idx, s) in self.steps.iter().enumerate() {
            if s.index != idx + 1 || s.u.len() != s.index || s.nbar == 0 || s.degree == 0 {
                return Err(Error::Parse(format!("malformed step {}", idx + 1)));
            }
            if self.nbar(s.index) != Some(Card::Finite(s.nbar)) {
                return Err(Error::Parse(format!("step {}: n̄ disagrees with the values", s.index)));
            }
        }
        if self.tower.height() < self.steps.len() {
            return Err(Error::Parse("tower shorter than the step list".into()));
        }
        Ok(())
    }
}

/// Compact JSON for a value: "p/q" in RANK1, ["a", "b"] otherwise.
pub fn value_json(v: &Value, mode: Mode) -> serde_json::Value {
    if mode == Mode::Rank1 {
        json!(json_rat(v.a()))
    } else {
        json!([json_rat(v.a()), json_rat(v.b())])
    }
}

/// a − b as a Laurent exponent vector of length `len`.
pub(crate) fn laurent_diff(a: &[u32], b: &[u32], len: usize) -> Vec<i64> {
    (0..len)
        .map(|k| *a.get(k).unwrap_or(&0) as i64 - *b.get(k).unwrap_or(&0) as i64)
        .collect()
}

pub(crate) fn padded(e: &[u32], len: usize) -> Exps {
    let mut v = e.to_vec();
    v.resize(len.max(e.len()), 0);
    v
}

/// Rank of a rational matrix over the base field.
pub(crate) fn rank(mut rows: Vec<Vec<Rat>>, field: BaseField) -> usize {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    for r in rows.iter_mut() {
        r.resize(cols, Rat::zero());
    }
    let mut rk = 0;
    for c in 0..cols {
        let Some(p) = (rk..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rk, p);
        let inv = field.inv(&rows[rk][c]).expect("nonzero pivot");
        for r in 0..rows.len() {
            if r != rk && !rows[r][c].is_zero() {
                let f = field.mul(&rows[r][c], &inv);
                for k in c..cols {
                    let t = field.mul(&f, &rows[rk][k]);
                    rows[r][k] = field.sub(&rows[r][k], &t);
                }
            }
        }
        rk += 1;
    }
    rk
}

/// Caches key powers while assembling polynomials from exponent vectors.
pub(crate) struct PowCache<'a> {
    keys: &'a [BiPoly],
    cache: HashMap<(usize, u32), BiPoly>,
}

impl<'a> PowCache<'a> {
    pub(crate) fn new(keys: &'a [BiPoly]) -> PowCache<'a> {
        PowCache { keys, cache: HashMap::new() }
    }

    pub(crate) fn monomial(&mut self, exps: &[u32]) -> BiPoly {
        let field = self.keys[0].field();
        let mut p = BiPoly::one(field);
        for (k, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if k <= 1 {
                let (a, b) = if k == 0 { (e, 0) } else { (0, e) };
                p = p.shift(a, b);
                continue;
            }
            let key = &self.keys[k];
            let pw = self.cache.entry((k, e)).or_insert_with(|| key.pow(e));
            p = p.mul(pw);
        }
        p
    }
}

/// Default residue coefficient: α_i = 1, i.e. f_i(u) = u − 1.
pub fn unit_level() -> Vec<Rat> {
    vec![int(-1)]
}
