//! Quadratic transforms along a valuation and the induced generating sequence
//! of the new center.

use num_bigint::BigInt;
use num_traits::One;
use serde_json::json;

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::genseq::{analyze, residue_of, value_json, value_of, AnalyzeOptions, GenSeq};
use crate::rat::{json_rat, Rat};
use crate::series::ValuationOracle;
use crate::tower::BaseField;
use crate::values::{Mode, Value};

/// The monomial change of coordinates x = x_1^{n̄_1} y_1^a, y = x_1^w y_1^b with
/// ε = n̄_1·b − w·a = ±1, and the strict transforms Q_i of the keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformData {
    pub nbar1: u64,
    pub d1: u64,
    pub w: u64,
    pub a: u64,
    pub b: u64,
    pub eps: i64,
    /// [y_1] (= α_1^ε); the new center is x_1 = 0, y_1 = c when d_1 = 1.
    pub center: Option<Rat>,
    /// Q_0 = x_1, Q_i = P_{i+1}/x_1^{w·n_1⋯n_i}, in (x_1, y_1).
    pub keys: Vec<BiPoly>,
    /// β̂_0 = β_0/n̄_1 and β̂_i = β_{i+1} − w·n_1⋯n_i·β̂_0 where β_{i+1} is known.
    pub betas: Vec<Value>,
}

impl TransformData {
    /// Laurent exponents of x_1^i y_1^j in (x, y).
    pub fn pullback_exponents(&self, i: i64, j: i64) -> (i64, i64) {
        let (a, b, w, n) = (self.a as i64, self.b as i64, self.w as i64, self.nbar1 as i64);
        (self.eps * (b * i - w * j), self.eps * (n * j - a * i))
    }

    /// f(x_1^{n̄} y_1^a, x_1^w y_1^b).
    pub fn total_transform(&self, f: &BiPoly) -> BiPoly {
        let (a, b, w, n) = (self.a as u32, self.b as u32, self.w as u32, self.nbar1 as u32);
        f.map_monomials(|i, j| (n * i + w * j, a * i + b * j))
    }

    /// Checks x = x_1^{n̄}y_1^a and y = x_1^w y_1^b after substituting
    /// x_1 = (x^b y^{−a})^ε, y_1 = (x^{−w} y^{n̄})^ε.
    pub fn verify_substitution(&self) -> bool {
        let back = |i: i64, j: i64| {
            let (p, q) = self.pullback_exponents(i, 0);
            let (r, s) = self.pullback_exponents(0, j);
            (p + r, q + s)
        };
        let det = self.nbar1 as i64 * self.b as i64 - self.w as i64 * self.a as i64;
        det == self.eps && back(self.nbar1 as i64, self.a as i64) == (1, 0) && back(self.w as i64, self.b as i64) == (0, 1)
    }

    pub fn to_json(&self, mode: Mode) -> serde_json::Value {
        json!({
            "nbar1": self.nbar1,
            "d1": self.d1,
            "w": self.w,
            "a": self.a,
            "b": self.b,
            "eps": self.eps,
            "substitution": {
                "x": format!("x1^{}*y1^{}", self.nbar1, self.a),
                "y": format!("x1^{}*y1^{}", self.w, self.b),
            },
            "center": self.center.as_ref().map(json_rat),
            "keys": self.keys.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
            "betas": self.betas.iter().map(|v| value_json(v, mode)).collect::<Vec<_>>(),
        })
    }
}

/// The canonical (a, b, ε) with n̄b − wa = ε = ±1 and 0 ≤ a < n̄.
pub fn bezout_pair(nbar: u64, w: u64) -> Result<(u64, u64, i64)> {
    for a in 0..nbar.max(1) {
        let wa = w * a;
        if (wa + 1).is_multiple_of(nbar) {
            return Ok((a, (wa + 1) / nbar, 1));
        }
        if wa >= 1 && (wa - 1).is_multiple_of(nbar) {
            return Ok((a, (wa - 1) / nbar, -1));
        }
    }
    Err(Error::Invalid(format!("n̄_1 = {} and w = {} are not coprime", nbar, w)))
}

/// The transform data of the first step of `seq` (which needs P_2).
pub fn transform_data(seq: &GenSeq) -> Result<TransformData> {
    let step = seq
        .step(1)
        .ok_or_else(|| Error::DepthExceeded("the transform needs P_2 (a constructed first step)".into()))?;
    let (nbar1, d1, w) = (step.nbar, step.degree, step.u[0] as u64);
    let (a, b, eps) = bezout_pair(nbar1, w)?;
    let mut td = TransformData { nbar1, d1, w, a, b, eps, center: None, keys: vec![], betas: vec![] };
    let field = seq.field();
    td.keys.push(BiPoly::x(field));
    let beta0_hat = seq.betas()[0].scale_rat(&Rat::new(BigInt::one(), nbar1.into()));
    td.betas.push(beta0_hat.clone());
    let mut prod: u64 = 1;
    for i in 1..seq.keys().len() - 1 {
        prod = prod
            .checked_mul(seq.step(i).expect("key has a step").n())
            .ok_or_else(|| Error::Invalid("exponent overflow".into()))?;
        let e = (w * prod) as i64;
        let (q, sx, sy) = seq.key(i + 1).map_laurent(|i, j| {
            ((nbar1 * i as u64 + w * j as u64) as i64 - e, (a * i as u64 + b * j as u64) as i64)
        });
        if sx != 0 || sy != 0 {
            return Err(Error::Invalid(format!("P_{} is not divisible by x_1^{}", i + 1, e)));
        }
        td.keys.push(q);
        if let Some(bi) = seq.beta(i + 1) {
            td.betas.push(bi - &beta0_hat.scale_i(e));
        }
    }
    if d1 == 1 {
        let (p, q) = td.pullback_exponents(0, 1);
        td.center = seq.res(&[p, q]).ok().and_then(|r| r.as_scalar());
    }
    Ok(td)
}

/// ν restricted to k[x_1, y_1'] with y_1' = y_1 − c, evaluated through the
/// original sequence.
struct Pullback<'a> {
    seq: &'a GenSeq,
    td: &'a TransformData,
    center: Rat,
}

impl Pullback<'_> {
    /// (p, A, B) with h(x_1, y_1') = x^{−A}y^{−B}·p(x, y), in working coordinates.
    fn pull(&self, h: &BiPoly) -> (BiPoly, u32, u32) {
        let f = self.seq.field();
        let shifted = h.compose(&BiPoly::x(f), &BiPoly::y(f).sub(&BiPoly::one(f).scale(&self.center)));
        let (p, a, b) = shifted.map_laurent(|i, j| self.td.pullback_exponents(i as i64, j as i64));
        (p, a as u32, b as u32)
    }
}

impl ValuationOracle for Pullback<'_> {
    fn field(&self) -> BaseField {
        self.seq.field()
    }

    fn mode(&self) -> Mode {
        self.seq.mode()
    }

    fn value(&self, h: &BiPoly) -> Result<Value> {
        if h.is_zero() {
            return Err(Error::ZeroInput);
        }
        let (p, a, b) = self.pull(h);
        let v = value_of(&self.seq.to_work(&p), self.seq)?;
        let betas = self.seq.betas();
        Ok(&(&v - &betas[0].scale_i(a as i64)) - &betas[1].scale_i(b as i64))
    }

    fn residue(&self, f: &BiPoly, g: &BiPoly) -> Result<Rat> {
        let (pf, af, bf) = self.pull(f);
        let (pg, ag, bg) = self.pull(g);
        // [f/g] = [p_f x^{A_g} y^{B_g} / p_g x^{A_f} y^{B_f}]
        let lhs = self.seq.to_work(&pf.shift(ag, bg));
        let rhs = self.seq.to_work(&pg.shift(af, bf));
        let r = residue_of(&lhs, &rhs, self.seq)?;
        r.as_scalar().ok_or_else(|| Error::Unsupported("residue outside the base field".into()))
    }
}

/// The quadratic transform along ν: the transform data and the generating
/// sequence of the new center in the parameters x_1, y_1 − c.
///
/// The new sequence is discovered by analysis of the transported valuation,
/// so it needs d_1 = 1 and residues in k.
pub fn quadratic_transform(seq: &GenSeq) -> Result<(TransformData, GenSeq)> {
    let td = transform_data(seq)?;
    if td.d1 != 1 {
        return Err(Error::Unsupported(format!(
            "the new center has residue field of degree {} over k; only d_1 = 1 is transported",
            td.d1
        )));
    }
    let center = td
        .center
        .clone()
        .ok_or_else(|| Error::Unsupported("center of the transform is not k-rational".into()))?;
    let depth = seq.steps().len().saturating_sub(1);
    let oracle = Pullback { seq, td: &td, center };
    let next = analyze(&oracle, AnalyzeOptions::depth(depth))?;
    Ok((td, next))
}

/// Iterates the quadratic transform `steps` times.
pub fn transform_chain(seq: &GenSeq, steps: usize) -> Result<Vec<(TransformData, GenSeq)>> {
    let mut out: Vec<(TransformData, GenSeq)> = Vec::new();
    for _ in 0..steps {
        let cur = out.last().map(|(_, s)| s).unwrap_or(seq);
        if cur.step(1).is_none() {
            return Err(Error::DepthExceeded(format!("transform {} needs a deeper sequence", out.len() + 1)));
        }
        out.push(quadratic_transform(cur)?);
    }
    Ok(out)
}

/// The exponents δ_0, δ_1 (0 ≤ δ_1 < n̄_1) and z with
/// x^{δ_0+iw} y^{δ_1+(d_1−1−i)n̄_1} = x_1^λ y_1^{z−iε} for 0 ≤ i < d_1.
pub fn delta_shift(lambda: u64, d1: u64, w: u64, nbar1: u64, a: u64, b: u64) -> Result<(u64, u64, i64)> {
    let eps = nbar1 as i64 * b as i64 - w as i64 * a as i64;
    if eps.abs() != 1 {
        return Err(Error::Invalid(format!("n̄_1·b − w·a = {} is not ±1", eps)));
    }
    if d1 == 0 || lambda < nbar1 * d1 * w {
        return Err(Error::Precondition(format!("λ = {} is below n_1·w = {}", lambda, nbar1 * d1 * w)));
    }
    let (l, n, w_, a_, b_) = (lambda as i64, nbar1 as i64, w as i64, a as i64, b as i64);
    let delta1 = (-l * eps * a_).rem_euclid(n);
    let r = (delta1 + l * eps * a_) / n;
    let delta0 = (l * eps * b_ - r * w_) - (d1 as i64 - 1) * w_;
    if delta0 < 0 {
        return Err(Error::Invalid(format!("δ_0 = {} is negative", delta0)));
    }
    let z = a_ * delta0 + b_ * (delta1 + (d1 as i64 - 1) * n);
    Ok((delta0 as u64, delta1 as u64, z))
}

/// Substitutes into both sides of the δ identity for every i.
pub fn check_delta_shift(lambda: u64, d1: u64, w: u64, nbar1: u64, a: u64, b: u64) -> Result<bool> {
    let (d0, dl1, z) = delta_shift(lambda, d1, w, nbar1, a, b)?;
    let eps = nbar1 as i64 * b as i64 - w as i64 * a as i64;
    Ok((0..d1).all(|i| {
        let ex = (d0 + i * w) as i64;
        let ey = (dl1 + (d1 - 1 - i) * nbar1) as i64;
        let x1 = nbar1 as i64 * ex + w as i64 * ey;
        let y1 = a as i64 * ex + b as i64 * ey;
        x1 == lambda as i64 && y1 == z - i as i64 * eps
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genseq::synthesize;
    use crate::rat::parse_rat;
    use crate::series::SeriesOracle;
    use crate::tower::Tower;

    const Q: BaseField = BaseField::Q;

    fn v(s: &str) -> Value {
        Value::rank1(parse_rat(s).unwrap())
    }

    fn p(s: &str) -> BiPoly {
        BiPoly::parse(s, Q).unwrap()
    }

    fn example1(depth: usize) -> GenSeq {
        let b: Vec<Value> = ["1", "5/3", "59/9", "545/27", "5027/81", "45689/243"].iter().map(|s| v(s)).collect();
        synthesize(&b, &Tower::new(Q), depth).unwrap()
    }

    #[test]
    fn bezout_choices() {
        assert_eq!(bezout_pair(3, 5).unwrap(), (1, 2, 1));
        assert_eq!(bezout_pair(1, 1).unwrap(), (0, 1, 1));
        assert_eq!(bezout_pair(2, 3).unwrap(), (1, 2, 1));
        assert_eq!(bezout_pair(3, 4).unwrap(), (1, 1, -1));
        assert!(bezout_pair(2, 4).is_err());
    }

    #[test]
    fn example1_transform_data() {
        let s = example1(3);
        let td = transform_data(&s).unwrap();
        assert_eq!((td.nbar1, td.w, td.a, td.b, td.eps), (3, 5, 1, 2, 1));
        assert!(td.verify_substitution());
        assert_eq!(td.total_transform(&p("x")), p("x^3*y"));
        assert_eq!(td.total_transform(&p("y")), p("x^5*y^2"));
        assert_eq!(td.betas[0], v("1/3"));
        assert_eq!(td.betas[1], v("14/9"));
        assert_eq!(td.keys[1], p("y^5*(y - 1)"));
        assert_eq!(td.center, Some(Rat::one()));
    }

    #[test]
    fn example1_transformed_sequence() {
        let s = example1(3);
        let (td, t) = quadratic_transform(&s).unwrap();
        t.check_invariants().unwrap();
        assert_eq!(t.betas()[..3], td.betas[..3]);
        // Q_1 = y_1^5 (y_1 − 1) is y_1' times a unit
        assert_eq!(t.key(1), &p("y"));
        for f in ["y", "x", "y^3 - x^5", "x^2*y + y^4", "(y^3 - x^5)^3 - x^18*y + x^20"] {
            let f = p(f);
            let ft = td.total_transform(&f).compose(&p("x"), &p("y + 1"));
            assert_eq!(value_of(&ft, &t).unwrap(), value_of(&f, &s).unwrap(), "{}", f);
        }
    }

    #[test]
    fn blowup_of_a_smooth_branch() {
        let o = SeriesOracle::sqrt1px(Q).unwrap();
        let s = analyze(&o, AnalyzeOptions::depth(4)).unwrap();
        let (td, t) = quadratic_transform(&s).unwrap();
        assert_eq!((td.a, td.b, td.eps), (0, 1, 1));
        assert_eq!(td.total_transform(&p("y")), p("x*y"));
        assert_eq!(t.betas()[..4], [v("1"), v("1"), v("2"), v("3")]);
        assert_eq!(t.key(2), &p("y - 1/2*x"));
    }

    #[test]
    fn delta_examples() {
        let (d0, d1, z) = delta_shift(15, 1, 5, 3, 1, 2).unwrap();
        assert!(d1 < 3);
        assert_eq!(3 * d0 + 5 * d1, 15);
        assert_eq!(z, d0 as i64 + 2 * d1 as i64);
        for lambda in 15..=65 {
            assert!(check_delta_shift(lambda, 1, 5, 3, 1, 2).unwrap());
            assert!(check_delta_shift(lambda + 30, 3, 5, 3, 1, 2).unwrap());
        }
        assert!(delta_shift(14, 1, 5, 3, 1, 2).is_err());
    }

    #[test]
    fn chain_of_two() {
        let s = example1(4);
        let chain = transform_chain(&s, 2).unwrap();
        assert_eq!(chain.len(), 2);
        let (td2, t2) = &chain[1];
        assert_eq!((td2.nbar1, td2.w), (3, 14));
        t2.check_invariants().unwrap();
        assert!(transform_chain(&s, 0).unwrap().is_empty());
    }
}
