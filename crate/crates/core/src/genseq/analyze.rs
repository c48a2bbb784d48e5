//! Discovery of the key polynomials of an oracle valuation.

use super::{value_of, residue_of, GenSeq, Source, Step, Term, Terminal};
use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::series::ValuationOracle;
use crate::tower::{BaseField, Tower};
use crate::values::{Card, Mode, Value, ValueChain};

/// Consecutive n_i = 1 steps before the sequence is reported as stabilized.
pub const DEFAULT_STABILIZE_AFTER: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Maximum number of steps (keys P_2..P_{depth+1}).
    pub depth: usize,
    pub stabilize_after: usize,
}

impl AnalyzeOptions {
    pub fn depth(depth: usize) -> AnalyzeOptions {
        AnalyzeOptions { depth, stabilize_after: DEFAULT_STABILIZE_AFTER }
    }
}

/// A synthesized or analyzed sequence used as a valuation oracle.
impl ValuationOracle for GenSeq {
    fn field(&self) -> BaseField {
        GenSeq::field(self)
    }

    fn mode(&self) -> Mode {
        GenSeq::mode(self)
    }

    fn value(&self, f: &BiPoly) -> Result<Value> {
        value_of(f, self)
    }

    fn residue(&self, f: &BiPoly, g: &BiPoly) -> Result<Rat> {
        let r = residue_of(f, g, self)?;
        r.as_scalar()
            .ok_or_else(|| Error::Unsupported(format!("residue {} is not in the base field", self.tower().fmt_elem(&r))))
    }

    fn curve(&self) -> Option<(BiPoly, Value)> {
        GenSeq::curve(self).map(|(g, v)| (if self.swapped() { g.swap_xy() } else { g.clone() }, v.clone()))
    }
}

fn kernel(index: usize, p: &BiPoly) -> impl Fn(Error) -> Error {
    let poly = p.to_string();
    move |e| match e {
        Error::CapExceeded { .. } => Error::KernelHit { index, poly: poly.clone() },
        other => other,
    }
}

/// Runs the key-polynomial algorithm against an oracle whose residues lie in k:
/// P_{i+1} = P_i^{n̄_i} − α_i·U_i with α_i = [P_i^{n̄_i}/U_i].
///
/// An oracle reporting CAP_EXCEEDED on a key surfaces as KERNEL_HIT.
pub fn analyze(oracle: &dyn ValuationOracle, opts: AnalyzeOptions) -> Result<GenSeq> {
    let field = oracle.field();
    let (x, y) = (BiPoly::x(field), BiPoly::y(field));
    let vx = oracle.value(&x).map_err(kernel(0, &x))?;
    let vy = oracle.value(&y).map_err(kernel(1, &y))?;
    let swapped = vy < vx;
    // keys live in working coordinates; the oracle sees original ones
    let orig = |p: &BiPoly| if swapped { p.swap_xy() } else { p.clone() };
    let (b0, b1) = if swapped { (vy, vx) } else { (vx, vy) };
    if !b0.is_positive() {
        return Err(Error::OracleInconsistent(format!("ν(m) = {} is not positive", b0)));
    }
    let mut keys = vec![x, y];
    let mut chain = ValueChain::new(&[b0, b1])?;
    let mut tower = Tower::new(field);
    let mut steps: Vec<Step> = Vec::new();
    let mut terminal = Terminal::Open;
    let mut run = 0;
    for i in 1..=opts.depth {
        let beta = chain.beta(i).clone();
        let nbar = match chain.nbar(i) {
            Card::Finite(n) => n,
            Card::Infinite => {
                terminal = Terminal::TerminatedIndependent { index: i };
                break;
            }
        };
        let rep = chain.representation(&beta.scale_i(nbar as i64), i - 1)?;
        let u = rep
            .iter()
            .map(|r| u32::try_from(r).ok())
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| Error::OracleInconsistent(format!("U_{} needs a negative power of x", i)))?;
        let mut um = BiPoly::one(field);
        for (k, &w) in u.iter().enumerate() {
            um = um.mul(&keys[k].pow(w));
        }
        let pn = keys[i].pow(nbar as u32);
        let alpha = oracle.residue(&orig(&pn), &orig(&um)).map_err(kernel(i, &keys[i]))?;
        let alpha = field.normalize(&alpha)?;
        if alpha == Rat::from_integer(0.into()) {
            return Err(Error::OracleInconsistent(format!("α_{} = 0", i)));
        }
        tower.push_scalar_level(&[field.neg(&alpha)])?;
        let next = pn.sub(&um.scale(&alpha));
        let mut rel = u.clone();
        rel.push(0);
        let vnext = oracle.value(&orig(&next)).map_err(kernel(i + 1, &orig(&next)))?;
        if vnext <= beta.scale_i(nbar as i64) {
            return Err(Error::OracleInconsistent(format!(
                "ν(P_{}) = {} is not > n_{}β_{} = {}",
                i + 1,
                vnext,
                i,
                i,
                beta.scale_i(nbar as i64)
            )));
        }
        steps.push(Step { index: i, nbar, degree: 1, u, relation: vec![Term::new(field.neg(&alpha), rel)] });
        keys.push(next);
        chain.push(vnext)?;
        run = if nbar == 1 { run + 1 } else { 0 };
        if opts.stabilize_after > 0 && run >= opts.stabilize_after {
            terminal = Terminal::Stabilized { from: i + 1 - run, run };
            break;
        }
    }
    let curve = oracle.curve().map(|(g, v)| (orig(&g), v));
    GenSeq::assemble(
        field,
        tower,
        keys,
        chain.betas().to_vec(),
        steps,
        terminal,
        curve,
        swapped,
        Source::Analysis,
    )
}
