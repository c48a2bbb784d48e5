//! Value semigroups of the A_2 subring k[x², xy, y²] ⊂ k[x, y].
//!
//! When every key polynomial is a combination of odd-degree monomials, a
//! polynomial lies in the subring exactly when the exponents of its leading
//! key monomials have even sum, so the subring semigroup is
//! {Σ a_iβ_i : Σ a_i even}.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::genseq::{value_json, GenSeq};
use crate::rat::{big, rat_gcd, Rat};
use crate::valuation::{GeneratorSource, SemigroupDescription};
use crate::values::{lattice_from, Mode, Value};

/// Largest table the integer sieves will allocate.
const MAX_TABLE: u64 = 1 << 26;

/// Fails unless every key is a k-combination of odd-degree monomials.
pub fn check_parity(seq: &GenSeq) -> Result<()> {
    for (i, key) in seq.keys().iter().enumerate() {
        if let Some((e, _)) = key.terms().find(|(e, _)| e.total() % 2 == 0) {
            return Err(Error::Precondition(format!(
                "P_{} has the even-degree monomial x^{}y^{}",
                i, e.x, e.y
            )));
        }
    }
    Ok(())
}

/// Reachability of Σ a_i g_i by parity of Σ a_i, on 0..=limit in integer units.
#[derive(Clone, Debug)]
struct ParityTable {
    even: Vec<bool>,
}

impl ParityTable {
    fn new(gens: &[u64], limit: u64) -> ParityTable {
        let n = limit as usize + 1;
        let mut even = vec![false; n];
        let mut odd = vec![false; n];
        even[0] = true;
        for x in 1..n {
            for &g in gens {
                let g = g as usize;
                if g <= x {
                    even[x] |= odd[x - g];
                    odd[x] |= even[x - g];
                }
            }
        }
        ParityTable { even }
    }

    fn even(&self, x: i64) -> bool {
        x >= 0 && (x as usize) < self.even.len() && self.even[x as usize]
    }
}

/// Generator values of a rank-one description rescaled to integers.
struct Scaled {
    unit: Rat,
    gens: Vec<u64>,
}

impl Scaled {
    fn new(vals: &[Value], extra: &[&Value]) -> Result<Scaled> {
        let mut all: Vec<Rat> = vals.iter().map(|v| v.a().clone()).collect();
        all.extend(extra.iter().map(|v| v.a().clone()));
        let unit = rat_gcd(&all);
        let gens = vals.iter().map(|v| Self::to_int(&unit, v)).collect::<Result<Vec<_>>>()?;
        Ok(Scaled { unit, gens })
    }

    fn to_int(unit: &Rat, v: &Value) -> Result<u64> {
        let q = v.a() / unit;
        q.to_integer()
            .to_u64()
            .filter(|&n| n <= MAX_TABLE)
            .ok_or_else(|| Error::Unsupported(format!("{} is too large in units of {}", v, unit)))
    }

    fn value(&self, n: u64) -> Value {
        Value::rank1(&self.unit * big(&BigInt::from(n)))
    }
}

fn rank1_values(desc: &SemigroupDescription) -> Result<Vec<Value>> {
    if desc.mode != Mode::Rank1 {
        return Err(Error::Unsupported(format!("{} semigroups are not discrete of rank one", desc.mode.name())));
    }
    Ok(desc.values())
}

/// β_i for the generator that came from key i (β_0 is ν(x)).
fn beta(desc: &SemigroupDescription, i: usize) -> Result<Value> {
    desc.generators
        .iter()
        .find(|g| match g.source {
            GeneratorSource::X => i == 0,
            GeneratorSource::Key(k) => k == i,
            GeneratorSource::Curve => false,
        })
        .map(|g| g.value.clone())
        .ok_or_else(|| Error::DepthExceeded(format!("β_{} is not a known generator", i)))
}

/// Elements below the bound are only certain when no unknown generator can be smaller.
fn check_coverage(desc: &SemigroupDescription, bound: &Value) -> Result<()> {
    let last = desc.generators.last().map(|g| &g.value).ok_or_else(|| Error::Empty("generators".into()))?;
    if !desc.complete && bound > last {
        return Err(Error::DepthExceeded(format!(
            "bound {} exceeds the largest known generator {}",
            bound, last
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct A2Semigroup {
    pub bound: Value,
    /// Nonzero elements of {Σ a_iβ_i : Σ a_i even} below the bound, increasing.
    pub elements: Vec<Value>,
    /// γ_0 < γ_1 < …: the minimal generators below the bound.
    pub generators: Vec<Value>,
}

impl A2Semigroup {
    pub fn to_json(&self) -> serde_json::Value {
        let vs = |xs: &[Value]| xs.iter().map(|v| value_json(v, Mode::Rank1)).collect::<Vec<_>>();
        json!({
            "bound": value_json(&self.bound, Mode::Rank1),
            "generators": vs(&self.generators),
            "elements": vs(&self.elements),
        })
    }
}

/// The even-parity subsemigroup below `bound` and its minimal generators.
pub fn a2_semigroup(desc: &SemigroupDescription, bound: &Value) -> Result<A2Semigroup> {
    let vals = rank1_values(desc)?;
    check_coverage(desc, bound)?;
    let sc = Scaled::new(&vals, &[bound])?;
    let lim = Scaled::to_int(&sc.unit, bound)?;
    if lim == 0 {
        return Ok(A2Semigroup { bound: bound.clone(), elements: vec![], generators: vec![] });
    }
    let limit = lim - 1;
    let table = ParityTable::new(&sc.gens, limit);
    let elems: Vec<u64> = (1..=limit).filter(|&x| table.even(x as i64)).collect();
    // greedy sieve: an element is a generator iff no sum of smaller generators hits it
    let mut reach = vec![false; limit as usize + 1];
    reach[0] = true;
    let mut gens = Vec::new();
    for &e in &elems {
        if reach[e as usize] {
            continue;
        }
        gens.push(e);
        for x in 0..=(limit - e) as usize {
            if reach[x] {
                reach[x + e as usize] = true;
            }
        }
    }
    Ok(A2Semigroup {
        bound: bound.clone(),
        elements: elems.iter().map(|&x| sc.value(x)).collect(),
        generators: gens.iter().map(|&x| sc.value(x)).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapWitness {
    pub n: usize,
    pub l: usize,
    pub gamma_l: Value,
    pub gamma_next: Value,
    pub gamma0: Value,
    /// γ_{l+1} in the basis of G(γ_0, …, γ_l).
    pub coordinates: Vec<BigInt>,
    pub basis: Vec<Value>,
}

impl GapWitness {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "l": self.l,
            "gamma_l": value_json(&self.gamma_l, Mode::Rank1),
            "gamma_next": value_json(&self.gamma_next, Mode::Rank1),
            "gamma0": value_json(&self.gamma0, Mode::Rank1),
            "basis": self.basis.iter().map(|v| value_json(v, Mode::Rank1)).collect::<Vec<_>>(),
            "coordinates": self.coordinates.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Finds γ_l = β_0 + β_n among the subring generators and checks that the next
/// generator is β_1 + β_n = γ_l + γ_0/3, lying in G(γ_0, …, γ_l).
pub fn gap_witness(desc: &SemigroupDescription, n: usize) -> Result<GapWitness> {
    let (b0, b1, bn) = (beta(desc, 0)?, beta(desc, 1)?, beta(desc, n)?);
    let target = &b1 + &bn;
    let sg = a2_semigroup(desc, &(&target + &b0))?;
    let gens = &sg.generators;
    let gamma0 = gens.first().cloned().ok_or_else(|| Error::Empty("subring generators".into()))?;
    let gl = &b0 + &bn;
    let l = gens
        .iter()
        .position(|g| *g == gl)
        .ok_or_else(|| Error::Precondition(format!("β_0 + β_{} = {} is not a subring generator", n, gl)))?;
    let next = gens
        .get(l + 1)
        .cloned()
        .ok_or_else(|| Error::DepthExceeded(format!("no generator after γ_{}", l)))?;
    if next != target {
        return Err(Error::Precondition(format!("γ_{} = {} is not β_1 + β_{} = {}", l + 1, next, n, target)));
    }
    let third = gamma0.scale_rat(&Rat::new(1.into(), 3.into()));
    if next != &gl + &third {
        return Err(Error::Precondition(format!("γ_{} − γ_{} is not γ_0/3", l + 1, l)));
    }
    let lat = lattice_from(&gens[..=l])?;
    let coordinates = lat
        .coordinates(&next)
        .ok_or_else(|| Error::NotInGroup(format!("γ_{} ∉ G(γ_0, …, γ_{})", l + 1, l)))?;
    Ok(GapWitness { n, l, gamma_l: gl, gamma_next: next, gamma0, coordinates, basis: lat.basis() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleWitness {
    pub n: usize,
    /// Index of the witness β_l, l > n.
    pub l: usize,
    pub beta_l: Value,
    /// The candidate module generators: 0, β_i and β_i + β_j for i, j ≤ n.
    pub module_gens: Vec<Value>,
    /// Granularity of the exhaustive search.
    pub unit: Rat,
    /// Size of the searched set in units.
    pub searched: u64,
}

impl ModuleWitness {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "l": self.l,
            "beta_l": value_json(&self.beta_l, Mode::Rank1),
            "module_generators": self.module_gens.iter().map(|v| value_json(v, Mode::Rank1)).collect::<Vec<_>>(),
            "unit": crate::rat::json_rat(&self.unit),
            "searched": self.searched,
            "certified": true,
        })
    }
}

/// For n = 0..=bound_n, certifies β_{n+1} ∉ F + S with F = {0, β_i, β_i + β_j : i, j ≤ n}
/// and S the subring semigroup, by exhausting S ∩ [0, β_{n+1}] on the common
/// denominator of the values involved.
pub fn non_fg_module_witness(desc: &SemigroupDescription, bound_n: usize) -> Result<Vec<ModuleWitness>> {
    rank1_values(desc)?;
    let mut out = Vec::new();
    for n in 0..=bound_n {
        let l = n + 1;
        let bl = beta(desc, l)?;
        let low: Vec<Value> = (0..=n).map(|i| beta(desc, i)).collect::<Result<_>>()?;
        let mut module_gens = vec![Value::zero(Mode::Rank1)];
        module_gens.extend(low.iter().cloned());
        for i in 0..=n {
            for j in i..=n {
                module_gens.push(&low[i] + &low[j]);
            }
        }
        module_gens.sort();
        module_gens.dedup();
        // generators above β_l cannot contribute to elements ≤ β_l
        let mut gens = low.clone();
        gens.push(bl.clone());
        let sc = Scaled::new(&gens, &[])?;
        let limit = Scaled::to_int(&sc.unit, &bl)?;
        let table = ParityTable::new(&sc.gens, limit);
        for f in &module_gens {
            let diff = &bl - f;
            if diff.a() < &Rat::zero() {
                continue;
            }
            let d = Scaled::to_int(&sc.unit, &diff)?;
            if table.even(d as i64) {
                return Err(Error::Precondition(format!("β_{} = {} + (an element of S)", l, f)));
            }
        }
        out.push(ModuleWitness { n, l, beta_l: bl, module_gens, unit: sc.unit, searched: limit + 1 });
    }
    Ok(out)
}
