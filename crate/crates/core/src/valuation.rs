//! Valuations on k[x, y] and the semigroups of their values: minimal generators,
//! the rank-two case split, symmetry and the counting function φ(n).

use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde_json::json;

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::genseq::{analyze, value_json, value_of, AnalyzeOptions, GenSeq, Terminal};
use crate::rat::{json_rat, rat_gcd, Rat};
use crate::series::{composite_value, CompositeValuation, SeriesOracle, ValuationOracle};
use crate::tower::BaseField;
use crate::values::{lattice_from, nonneg_combination, Card, Mode, Value, ValueChain};

/// Largest normalized smallest generator accepted by the numerical-semigroup kernels.
pub const MAX_MODULUS: u64 = 1 << 24;

pub enum ValuationKind {
    Synthetic(GenSeq),
    Series(SeriesOracle),
    Composite(CompositeValuation),
}

/// A valuation dominating k[x, y]_{(x, y)}.
pub struct Valuation {
    kind: ValuationKind,
    analyzed: Mutex<Option<(usize, GenSeq)>>,
}

impl Valuation {
    pub fn synthetic(seq: GenSeq) -> Valuation {
        Valuation::new(ValuationKind::Synthetic(seq))
    }

    pub fn series(oracle: SeriesOracle) -> Valuation {
        Valuation::new(ValuationKind::Series(oracle))
    }

    pub fn composite(cv: CompositeValuation) -> Valuation {
        Valuation::new(ValuationKind::Composite(cv))
    }

    fn new(kind: ValuationKind) -> Valuation {
        Valuation { kind, analyzed: Mutex::new(None) }
    }

    pub fn kind(&self) -> &ValuationKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ValuationKind::Synthetic(_) => "SYNTHETIC",
            ValuationKind::Series(_) => "SERIES",
            ValuationKind::Composite(_) => "COMPOSITE",
        }
    }

    pub fn field(&self) -> BaseField {
        match &self.kind {
            ValuationKind::Synthetic(s) => s.field(),
            ValuationKind::Series(o) => o.field(),
            ValuationKind::Composite(c) => ValuationOracle::field(c),
        }
    }

    pub fn mode(&self) -> Mode {
        match &self.kind {
            ValuationKind::Synthetic(s) => s.mode(),
            ValuationKind::Series(_) => Mode::Rank1,
            ValuationKind::Composite(_) => Mode::Lex,
        }
    }

    pub fn value(&self, f: &BiPoly) -> Result<Value> {
        match &self.kind {
            ValuationKind::Synthetic(s) => value_of(f, s),
            ValuationKind::Series(o) => o.value(f),
            ValuationKind::Composite(c) => composite_value(f, c),
        }
    }

    /// ν(m) = min(ν(x), ν(y)).
    pub fn value_of_maximal_ideal(&self) -> Result<Value> {
        let f = self.field();
        Ok(self.value(&BiPoly::x(f))?.min(self.value(&BiPoly::y(f))?))
    }

    /// The generating sequence to the given depth: the stored one for synthetic
    /// valuations, otherwise the (cached) result of analysis.
    pub fn sequence(&self, depth: usize) -> Result<GenSeq> {
        let oracle: &dyn ValuationOracle = match &self.kind {
            ValuationKind::Synthetic(s) => return Ok(s.clone()),
            ValuationKind::Series(o) => o,
            ValuationKind::Composite(c) => c,
        };
        let mut cache = self.analyzed.lock().unwrap();
        if let Some((d, s)) = cache.as_ref() {
            if *d == depth {
                return Ok(s.clone());
            }
        }
        let s = analyze(oracle, AnalyzeOptions::depth(depth))?;
        *cache = Some((depth, s.clone()));
        Ok(s)
    }
}

/// Where a minimal generator comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorSource {
    /// ν(x) (of the working coordinates).
    X,
    /// ν(P_i) with n̄_i > 1.
    Key(usize),
    /// ν(g) for the kernel curve.
    Curve,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub value: Value,
    pub source: GeneratorSource,
    /// n̄_i for keys; None for x and the curve.
    pub nbar: Option<Card>,
}

/// Which alternative describes I_ν ∩ R for a rank-two valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemigroupCase {
    Rank1,
    /// I_ν ∩ R = m_R.
    Case1,
    /// I_ν ∩ R = (P_Ω).
    Case2 { omega: usize },
    /// I_ν ∩ R = (g).
    Case3 { curve: BiPoly },
    /// Rank two but no terminal event within the computed depth.
    Unresolved,
}

impl SemigroupCase {
    pub fn name(&self) -> &'static str {
        match self {
            SemigroupCase::Rank1 => "RANK1",
            SemigroupCase::Case1 => "CASE1",
            SemigroupCase::Case2 { .. } => "CASE2",
            SemigroupCase::Case3 { .. } => "CASE3",
            SemigroupCase::Unresolved => "UNRESOLVED",
        }
    }
}

/// Minimal generators of S^R(ν) as far as the sequence is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupDescription {
    pub mode: Mode,
    pub generators: Vec<Generator>,
    pub case: SemigroupCase,
    /// Largest key index whose value was used.
    pub depth: usize,
    /// Whether the generator list is the whole list (a finite sequence or a terminal event).
    pub complete: bool,
}

impl SemigroupDescription {
    /// A description from bare generator values (no key provenance).
    pub fn from_generators(gens: &[Value]) -> Result<SemigroupDescription> {
        let first = gens.first().ok_or_else(|| Error::Empty("generator list".into()))?;
        let mode = first.mode();
        for g in gens {
            if g.mode() != mode {
                return Err(Error::ModeMismatch(g.mode().name().into(), mode.name().into()));
            }
            if !g.is_positive() {
                return Err(Error::Nonpositive(g.to_string()));
            }
        }
        let mut sorted = gens.to_vec();
        sorted.sort();
        sorted.dedup();
        let generators = sorted
            .into_iter()
            .enumerate()
            .map(|(i, value)| Generator {
                value,
                source: if i == 0 { GeneratorSource::X } else { GeneratorSource::Key(i) },
                nbar: None,
            })
            .collect::<Vec<_>>();
        let depth = generators.len() - 1;
        let case = if mode.is_archimedean() { SemigroupCase::Rank1 } else { SemigroupCase::Unresolved };
        Ok(SemigroupDescription { mode, generators, case, depth, complete: true })
    }

    pub fn values(&self) -> Vec<Value> {
        self.generators.iter().map(|g| g.value.clone()).collect()
    }

    /// Each generator is checked not to be a nonnegative combination of the
    /// smaller ones; returns the first offender.
    pub fn verify_minimality(&self) -> Result<Option<usize>> {
        let vals = self.values();
        for i in 1..vals.len() {
            // outside the group of its predecessors a value cannot be a combination
            if !lattice_from(&vals[..i])?.contains(&vals[i]) {
                continue;
            }
            if nonneg_combination(&vals[i], &vals[..i])?.is_some() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let gens: Vec<_> = self
            .generators
            .iter()
            .map(|g| {
                let (source, index) = match g.source {
                    GeneratorSource::X => ("x", json!(0)),
                    GeneratorSource::Key(i) => ("key", json!(i)),
                    GeneratorSource::Curve => ("curve", serde_json::Value::Null),
                };
                json!({
                    "value": value_json(&g.value, self.mode),
                    "source": source,
                    "index": index,
                    "nbar": g.nbar.map(|c| c.to_string()),
                })
            })
            .collect();
        let mut out = json!({
            "mode": self.mode.name(),
            "generators": gens,
            "case": self.case.name(),
            "depth": self.depth,
            "complete": self.complete,
        });
        match &self.case {
            SemigroupCase::Case2 { omega } => out["omega"] = json!(omega),
            SemigroupCase::Case3 { curve } => out["curve"] = json!(curve.to_string()),
            _ => {}
        }
        out
    }
}

/// {ν(x)} ∪ {ν(P_i) | n̄_i > 1} (∪ {ν(g)}) from the sequence of ν to `depth`.
pub fn semigroup(v: &Valuation, depth: usize) -> Result<SemigroupDescription> {
    let seq = v.sequence(depth)?;
    describe(&seq, depth)
}

/// The semigroup description of a generating sequence, using β_0..β_{depth+1}.
pub fn describe(seq: &GenSeq, depth: usize) -> Result<SemigroupDescription> {
    let betas = seq.betas();
    let last = (depth + 1).min(betas.len() - 1);
    let chain = ValueChain::new(&betas[..=last])?;
    let mode = seq.mode();
    let mut generators = vec![Generator { value: betas[0].clone(), source: GeneratorSource::X, nbar: None }];
    for i in 1..=last {
        let n = chain.nbar(i);
        if n != Card::Finite(1) {
            generators.push(Generator { value: betas[i].clone(), source: GeneratorSource::Key(i), nbar: Some(n) });
        }
    }
    let terminal = seq.terminal();
    let omega = terminal.terminal_index().filter(|&o| o <= last);
    let case = if mode.is_archimedean() {
        SemigroupCase::Rank1
    } else if betas[0].a().is_positive() {
        SemigroupCase::Case1
    } else if let Some((g, gv)) = seq.curve() {
        generators.push(Generator { value: gv.clone(), source: GeneratorSource::Curve, nbar: None });
        SemigroupCase::Case3 { curve: g.clone() }
    } else if let (Terminal::TerminatedIndependent { index }, Some(_)) = (terminal, omega) {
        SemigroupCase::Case2 { omega: index }
    } else {
        SemigroupCase::Unresolved
    };
    let complete = omega.is_some()
        || matches!(case, SemigroupCase::Case3 { .. })
        || matches!(terminal, Terminal::Stabilized { .. });
    let desc = SemigroupDescription { mode, generators, case, depth: last, complete };
    if let Some(i) = desc.verify_minimality()? {
        return Err(Error::Invalid(format!("generator {} is generated by the smaller ones", desc.generators[i].value)));
    }
    Ok(desc)
}

/// The description read off value data alone, without building keys. With
/// `finite`, the list is the whole sequence.
pub fn describe_values(betas: &[Value], finite: bool) -> Result<SemigroupDescription> {
    let chain = ValueChain::new(betas)?;
    let mode = chain.mode();
    let last = betas.len() - 1;
    let mut generators = vec![Generator { value: betas[0].clone(), source: GeneratorSource::X, nbar: None }];
    for i in 1..=last {
        let n = chain.nbar(i);
        if n != Card::Finite(1) {
            generators.push(Generator { value: betas[i].clone(), source: GeneratorSource::Key(i), nbar: Some(n) });
        }
    }
    let case = if mode.is_archimedean() {
        SemigroupCase::Rank1
    } else if betas[0].a().is_positive() {
        SemigroupCase::Case1
    } else if finite && chain.nbar(last) == Card::Infinite {
        SemigroupCase::Case2 { omega: last }
    } else {
        SemigroupCase::Unresolved
    };
    let desc = SemigroupDescription { mode, generators, case, depth: last, complete: finite };
    if let Some(i) = desc.verify_minimality()? {
        return Err(Error::Invalid(format!("generator {} is generated by the smaller ones", desc.generators[i].value)));
    }
    Ok(desc)
}

/// All nonzero elements of the semigroup below `bound`, increasing.
pub fn enumerate_semigroup(desc: &SemigroupDescription, bound: &Value) -> Result<Vec<Value>> {
    if !desc.mode.is_archimedean() {
        return Err(Error::Unsupported(
            "LEX semigroups have infinitely many elements below most bounds; enumerate a rank-one projection".into(),
        ));
    }
    if !bound.is_positive() {
        return Err(Error::Nonpositive(bound.to_string()));
    }
    let mut seen: BTreeSet<Value> = BTreeSet::new();
    seen.insert(Value::zero(desc.mode));
    for g in desc.values() {
        let mut frontier: Vec<Value> = seen.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for e in frontier {
                let s = &e + &g;
                if &s < bound && seen.insert(s.clone()) {
                    next.push(s);
                }
            }
            frontier = next;
        }
    }
    seen.remove(&Value::zero(desc.mode));
    Ok(seen.into_iter().collect())
}

/// A rank-one discrete semigroup rescaled to a numerical semigroup ⊂ N with
/// gcd 1, described by its Apéry set with respect to the smallest generator.
#[derive(Clone, Debug)]
pub struct NumericalSemigroup {
    /// The positive rational with S = unit·T.
    pub unit: Rat,
    pub gens: Vec<u64>,
    /// apery[r] = least element ≡ r mod gens[0].
    apery: Vec<u64>,
}

impl NumericalSemigroup {
    pub fn new(desc: &SemigroupDescription) -> Result<NumericalSemigroup> {
        if desc.mode != Mode::Rank1 {
            return Err(Error::Unsupported(format!("{} values are not discrete of rank one", desc.mode.name())));
        }
        let vals: Vec<Rat> = desc.values().iter().map(|v| v.a().clone()).collect();
        let unit = rat_gcd(&vals);
        let mut gens = vals
            .iter()
            .map(|v| (v / &unit).to_integer().to_u64())
            .collect::<Option<Vec<u64>>>()
            .ok_or_else(|| Error::Unsupported("normalized generators too large".into()))?;
        gens.sort_unstable();
        gens.dedup();
        let m = gens[0];
        if m > MAX_MODULUS {
            return Err(Error::Unsupported(format!("smallest normalized generator {} exceeds {}", m, MAX_MODULUS)));
        }
        // shortest paths on Z/m with edge weights the generators
        let mut apery = vec![u64::MAX; m as usize];
        apery[0] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, 0usize)));
        while let Some(Reverse((d, r))) = heap.pop() {
            if d > apery[r] {
                continue;
            }
            for &g in &gens[1..] {
                let nd = d.checked_add(g).ok_or_else(|| Error::Unsupported("semigroup too large".into()))?;
                let nr = (r + (g % m) as usize) % m as usize;
                if nd < apery[nr] {
                    apery[nr] = nd;
                    heap.push(Reverse((nd, nr)));
                }
            }
        }
        Ok(NumericalSemigroup { unit, gens, apery })
    }

    pub fn contains(&self, s: i64) -> bool {
        if s < 0 {
            return false;
        }
        let m = self.gens[0];
        (s as u64) >= self.apery[(s as u64 % m) as usize]
    }

    /// The largest integer not in T (−1 when T = N).
    pub fn frobenius(&self) -> i64 {
        *self.apery.iter().max().expect("nonempty") as i64 - self.gens[0] as i64
    }

    /// |T ∩ (0, n)|.
    pub fn count_below(&self, n: u64) -> u64 {
        let m = self.gens[0];
        let mut total = 0;
        for &w in &self.apery {
            if w < n {
                // w, w + m, … below n
                total += (n - w - 1) / m + 1;
            }
        }
        total - 1
    }
}

/// Whether S (with 0) is symmetric: s ∈ S ⟺ m − s ∉ S on the group, with m the
/// Frobenius element, returned in the original units.
pub fn is_symmetric(desc: &SemigroupDescription) -> Result<(bool, Value)> {
    let t = NumericalSemigroup::new(desc)?;
    let f = t.frobenius();
    // outside [min(0, f), max(0, f)] one side of the biconditional is automatic
    let lo = f.min(0) - 1;
    let hi = f.max(0) + 1;
    let sym = (lo..=hi).all(|s| t.contains(s) != t.contains(f - s));
    Ok((sym, Value::rank1(&t.unit * Rat::from_integer(f.into()))))
}

/// One sample of the counting function: φ(n) = |S ∩ (0, n)| with the smallest
/// nonzero element scaled to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityPoint {
    pub n: u64,
    pub phi: u64,
    pub ratio: Rat,
}

/// φ(n)/n² for n = 1..=n_max.
pub fn density(desc: &SemigroupDescription, n_max: u64) -> Result<Vec<DensityPoint>> {
    let point = |n: u64, phi: u64| DensityPoint { n, phi, ratio: Rat::new(phi.into(), BigInt::from(n) * n) };
    match desc.mode {
        Mode::Rank1 => {
            let t = NumericalSemigroup::new(desc)?;
            // the smallest nonzero element is gens[0] in units of `unit`
            let m = t.gens[0];
            Ok((1..=n_max).map(|n| point(n, t.count_below(n * m))).collect())
        }
        Mode::Tau => {
            let beta0 = desc.generators[0].value.clone();
            let elems = enumerate_semigroup(desc, &beta0.scale_i(n_max as i64))?;
            let mut out = Vec::new();
            let mut k = 0;
            for n in 1..=n_max {
                let b = beta0.scale_i(n as i64);
                while k < elems.len() && elems[k] < b {
                    k += 1;
                }
                out.push(point(n, k as u64));
            }
            Ok(out)
        }
        Mode::Lex => Err(Error::Unsupported("density needs a rank-one valuation".into())),
    }
}

/// The smallest sampled n from which every ratio stays below 1/2.
pub fn burn_in(traj: &[DensityPoint]) -> Option<u64> {
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let bad = traj.iter().rposition(|p| p.ratio >= half);
    match bad {
        None => traj.first().map(|p| p.n),
        Some(i) => traj.get(i + 1).map(|p| p.n),
    }
}

pub fn density_json(traj: &[DensityPoint], k: usize) -> serde_json::Value {
    json!(traj
        .iter()
        .map(|p| json!({
            "n": p.n,
            "phi": p.phi,
            "ratio": json_rat(&p.ratio),
            "decimal": crate::rat::to_decimal(&p.ratio, k),
        }))
        .collect::<Vec<_>>())
}
