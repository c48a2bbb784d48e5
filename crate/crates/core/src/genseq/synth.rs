//! Construction of key polynomials from admissible value and residue data.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::{unit_level, GenSeq, PowCache, Source, Step, Term, Terminal};
use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::tower::{BaseField, Tower, TowerElement};
use crate::values::{validate_semigroup_data, Card, Mode, ValidationOptions, Value, ValueChain};

/// Parsed synthesis/validation request.
#[derive(Clone, Debug)]
pub struct SynthesisInput {
    pub betas: Vec<Value>,
    /// Explicit residue degrees (validation only); derived from the tower otherwise.
    pub dees: Option<Vec<Card>>,
    pub tower: Tower,
    pub depth: Option<usize>,
    pub options: ValidationOptions,
}

impl SynthesisInput {
    /// Reads `{"mode", "field", "betas", "dees", "tower", "depth", "finite", "complete"}`;
    /// only "betas" is required.
    pub fn from_json(v: &serde_json::Value) -> Result<SynthesisInput> {
        let mode = match v.get("mode") {
            None => Mode::Rank1,
            Some(m) => Mode::parse(m.as_str().ok_or_else(|| Error::Parse("\"mode\" must be a string".into()))?)?,
        };
        let field = match v.get("field") {
            None => BaseField::Q,
            Some(serde_json::Value::String(s)) => BaseField::parse(s)?,
            Some(f) => serde_json::from_value(f.clone()).map_err(|e| Error::Parse(format!("field: {}", e)))?,
        };
        let betas = v
            .get("betas")
            .and_then(|b| b.as_array())
            .ok_or_else(|| Error::Parse("missing \"betas\" array".into()))?
            .iter()
            .map(|b| Value::from_json(b, mode))
            .collect::<Result<Vec<_>>>()?;
        let dees = match v.get("dees") {
            None | Some(serde_json::Value::Null) => None,
            Some(d) => Some(
                serde_json::from_value::<Vec<Card>>(d.clone()).map_err(|e| Error::Parse(format!("dees: {}", e)))?,
            ),
        };
        let tower = match v.get("tower") {
            None | Some(serde_json::Value::Null) => Tower::new(field),
            Some(t) => {
                let mut t = t.clone();
                if t.get("base").is_none() {
                    t["base"] = serde_json::to_value(field).expect("field serializes");
                }
                Tower::from_json(&t)?
            }
        };
        if tower.base() != field {
            return Err(Error::Parse("tower base differs from \"field\"".into()));
        }
        let depth = match v.get("depth") {
            None | Some(serde_json::Value::Null) => None,
            Some(d) => Some(d.as_u64().ok_or_else(|| Error::Parse("\"depth\" must be a nonnegative integer".into()))?
                as usize),
        };
        let flag = |k: &str, dflt: bool| v.get(k).and_then(|x| x.as_bool()).unwrap_or(dflt);
        let options = ValidationOptions { finite: flag("finite", false), complete: flag("complete", true) };
        Ok(SynthesisInput { betas, dees, tower, depth, options })
    }
}

/// The tower extended by α_i = 1 levels up to height h (unless it is closed by a
/// transcendental marker).
fn extend_tower(tower: &Tower, h: usize) -> Result<Tower> {
    let mut t = tower.clone();
    while t.height() < h && !t.transcendental() {
        let one = unit_level();
        t.push_scalar_level(&one)?;
    }
    Ok(t)
}

/// Checks the value inequalities against the tower's residue degrees.
fn check_admissible(betas: &[Value], tower: &Tower) -> Result<()> {
    let chain = ValueChain::new(betas)?;
    let last = betas.len() - 1;
    let omega = (1..=last).find(|&i| chain.nbar(i) == Card::Infinite);
    let trans = tower.transcendental().then(|| tower.height() + 1).filter(|&l| l <= last);
    let deg = |i: usize| Card::Finite(tower.minpoly_degree(i).map(|d| d as u64).unwrap_or(1));
    let terminal = match (omega, trans) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let report = match terminal {
        Some(t) => {
            let mut dees: Vec<Card> = (1..t).map(deg).collect();
            dees.push(if Some(t) == trans && Some(t) != omega { Card::Infinite } else { Card::Finite(1) });
            validate_semigroup_data(&betas[..=t], Some(&dees), ValidationOptions { finite: true, complete: true })?
        }
        None => {
            let h = tower.height().min(last);
            let dees: Vec<Card> = (1..=h).map(deg).collect();
            let used = if h + 1 >= last { betas } else { &betas[..=h + 1] };
            validate_semigroup_data(used, Some(&dees), ValidationOptions::default())?
        }
    };
    match report.first_violation {
        None => Ok(()),
        Some(v) => Err(Error::Inadmissible(format!("index {}: {}", v.index, v.message))),
    }
}

/// Builds P_0 = x, P_1 = y, …, P_{depth+1} from β_0..β_L (depth ≤ L) and a residue
/// tower whose level i carries the minimal polynomial of α_i. Missing levels
/// default to α_i = 1.
pub fn synthesize(betas: &[Value], tower: &Tower, depth: usize) -> Result<GenSeq> {
    if betas.len() < 2 {
        return Err(Error::Invalid("need at least β_0 and β_1".into()));
    }
    let last = betas.len() - 1;
    if depth > last {
        return Err(Error::Invalid(format!("depth {} needs β_0..β_{}, only {} values given", depth, depth, betas.len())));
    }
    let field = tower.base();
    let tower = extend_tower(tower, depth)?;
    check_admissible(betas, &tower)?;
    if let BaseField::Fp(_) = field {
        for l in 1..=tower.height().min(depth) {
            if tower.minpoly_degree(l)? > 1 && !tower.check_irreducible(l)? {
                return Err(Error::Inadmissible(format!("minimal polynomial of level {} is reducible", l)));
            }
        }
    }
    let chain = ValueChain::new(betas)?;
    let mut seq = GenSeq::assemble(
        field,
        tower.clone(),
        vec![BiPoly::x(field), BiPoly::y(field)],
        betas.to_vec(),
        Vec::new(),
        Terminal::Open,
        None,
        false,
        Source::Synthesis,
    )?;
    for i in 1..=depth {
        let nbar = match chain.nbar(i) {
            Card::Finite(n) => n,
            Card::Infinite => {
                seq.terminal = Terminal::TerminatedIndependent { index: i };
                break;
            }
        };
        if tower.height() < i {
            seq.terminal = Terminal::TerminatedTranscendental { index: i };
            break;
        }
        let d = tower.minpoly_degree(i)? as u64;
        let u = representation_exponents(&chain, &chain.beta(i).scale_i(nbar as i64), i - 1)
            .map_err(|e| Error::NotRepresentable(format!("U_{}: {}", i, e)))?;
        let mut relation = Vec::new();
        for (t, b) in tower.minpoly(i)?.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let reference: Vec<i64> = u.iter().map(|&w| w as i64 * (d as i64 - t as i64)).collect();
            for mut term in realize_at(&seq, b, &reference, i - 1)? {
                term.exps.push(t as u32 * nbar as u32);
                relation.push(term);
            }
        }
        let n = nbar * d;
        let next = {
            let mut cache = PowCache::new(&seq.keys);
            let mut p = seq.keys[i].pow(n as u32);
            for term in &relation {
                p = p.add(&cache.monomial(&term.exps).scale(&term.coeff));
            }
            p
        };
        if let Some(b) = betas.get(i + 1) {
            if b <= &chain.beta(i).scale_i(n as i64) {
                return Err(Error::Inadmissible(format!("β_{} is not > n_{}β_{}", i + 1, i, i)));
            }
        }
        seq.steps.push(Step { index: i, nbar, degree: d, u, relation });
        seq.keys.push(next);
    }
    Ok(seq)
}

/// Coefficients r_0..r_k ≥ 0 with γ = Σ r_jβ_j and r_j < n̄_j for j ≥ 1.
fn representation_exponents(chain: &ValueChain, gamma: &Value, k: usize) -> Result<Vec<u32>> {
    let rep = chain.representation(gamma, k)?;
    if rep[0].is_negative() {
        return Err(Error::NotRepresentable(format!("{} needs a negative power of P_0", gamma)));
    }
    rep.iter()
        .map(|r| r.to_u32().ok_or_else(|| Error::NotRepresentable(format!("exponent {} too large", r))))
        .collect()
}

/// A k-combination G of in-range monomials in P_0..P_level, each of value ν(N),
/// with res(G/N) = λ, for the Laurent monomial N = P^n.
pub(crate) fn realize_at(seq: &GenSeq, lambda: &TowerElement, n: &[i64], level: usize) -> Result<Vec<Term>> {
    if lambda.is_zero() {
        return Ok(Vec::new());
    }
    if level == 0 {
        let c = lambda
            .as_scalar()
            .ok_or_else(|| Error::NotRepresentable("level-0 residue outside the base field".into()))?;
        let m = n[0];
        if m < 0 {
            return Err(Error::NotRepresentable(format!("target needs x^{}", m)));
        }
        return Ok(vec![Term::new(c, vec![m as u32])]);
    }
    let chain = seq.chain();
    let gamma = n
        .iter()
        .enumerate()
        .fold(Value::zero(seq.mode()), |acc, (k, &e)| &acc + &chain.beta(k).scale(&BigInt::from(e)));
    let r = representation_exponents(chain, &gamma, level).map_err(|e| match e {
        Error::NotInGroup(m) => Error::NotRepresentable(m),
        other => other,
    })?;
    let diff: Vec<i64> = n.iter().zip(&r).map(|(&a, &b)| a - b as i64).collect();
    let tower = seq.tower();
    let tau = seq.res(&diff)?;
    let e = tower.express_in_basis(&tower.mul(&tau, lambda), level)?;
    let step = seq
        .step(level)
        .ok_or_else(|| Error::DepthExceeded(format!("realization at level {} needs step {}", level, level)))?;
    let k = r[level];
    let mut out = Vec::new();
    for (j, ej) in e.iter().enumerate() {
        if ej.is_zero() {
            continue;
        }
        let target: Vec<i64> = (0..level).map(|m| r[m] as i64 - (j as i64) * step.u[m] as i64).collect();
        for mut t in realize_at(seq, ej, &target, level - 1)? {
            t.exps.push(k + (j as u64 * step.nbar) as u32);
            out.push(t);
        }
    }
    Ok(out)
}

/// Statement C: a combination of in-range monomials in P_0..P_level of value
/// `target` whose residue against the representation monomial of that value is λ.
pub fn realize_residue(lambda: &TowerElement, target: &Value, seq: &GenSeq, level: usize) -> Result<Vec<Term>> {
    if level >= seq.keys().len() || seq.beta(level).is_none() {
        return Err(Error::DepthExceeded(format!("level {} beyond the sequence", level)));
    }
    let r = representation_exponents(seq.chain(), target, level).map_err(|e| match e {
        Error::NotInGroup(m) => Error::NotRepresentable(m),
        other => other,
    })?;
    let n: Vec<i64> = r.iter().map(|&x| x as i64).collect();
    realize_at(seq, lambda, &n, level)
}
