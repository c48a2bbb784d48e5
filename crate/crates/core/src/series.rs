//! Oracle valuations on k[x, y]: restriction of ord_t along a parametrized
//! branch y = s(x), and the rank-two valuation composite with a curve.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::bipoly::{rat_mod, BiPoly};
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::tower::BaseField;
use crate::values::{Mode, Value};

/// Default hard cap on series truncation depth.
pub const DEFAULT_CAP: usize = 1 << 14;

/// Order to which a composite curve is checked to vanish on its branch.
pub const VANISHING_CHECK: usize = 1024;

/// 2^61 − 1, used to locate the order cheaply before the exact check.
const FILTER_PRIME: u64 = (1 << 61) - 1;

/// A valuation given as a black box: values and residues of quotients of equal value.
pub trait ValuationOracle {
    fn field(&self) -> BaseField;
    fn mode(&self) -> Mode;
    fn value(&self, f: &BiPoly) -> Result<Value>;
    /// The residue [f/g] for ν(f) = ν(g), when it lies in k.
    fn residue(&self, f: &BiPoly, g: &BiPoly) -> Result<Rat>;
    /// The kernel curve g and ν(g), for valuations composite with a curve.
    fn curve(&self) -> Option<(BiPoly, Value)> {
        None
    }
}

/// Where the coefficients of s(t) come from.
#[derive(Clone)]
pub enum SeriesSource {
    /// s(t) = t·√(1 + t) by the binomial series.
    Sqrt1pX,
    /// s(t) = a_1 t + a_2 t² + … + a_m t^m (a polynomial branch).
    Coefficients(Vec<Rat>),
    /// s_j = gen(j) for j ≥ 0 (gen(0) must be 0).
    Custom(Arc<dyn Fn(usize) -> Rat + Send + Sync>),
}

impl fmt::Debug for SeriesSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesSource::Sqrt1pX => write!(f, "Sqrt1pX"),
            SeriesSource::Coefficients(c) => write!(f, "Coefficients({:?})", c),
            SeriesSource::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// A power series s(t) with s(0) = 0, evaluated lazily; ν(f) = ord_t f(t, s(t)).
#[derive(Debug)]
pub struct SeriesOracle {
    field: BaseField,
    source: SeriesSource,
    name: String,
    cap: usize,
    cache: Mutex<Vec<Rat>>,
}

impl Clone for SeriesOracle {
    fn clone(&self) -> Self {
        SeriesOracle {
            field: self.field,
            source: self.source.clone(),
            name: self.name.clone(),
            cap: self.cap,
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl SeriesOracle {
    /// The branch y = x√(1 + x).
    pub fn sqrt1px(field: BaseField) -> Result<SeriesOracle> {
        if field.characteristic() == 2 {
            return Err(Error::Unsupported("binomial square root needs characteristic ≠ 2".into()));
        }
        Ok(SeriesOracle::build(field, SeriesSource::Sqrt1pX, "sqrt1px".into()))
    }

    /// The branch y = a_1 x + a_2 x² + …; `coeffs` lists a_1, a_2, ….
    pub fn polynomial(field: BaseField, coeffs: Vec<Rat>) -> Result<SeriesOracle> {
        let coeffs = coeffs.iter().map(|c| field.normalize(c)).collect::<Result<Vec<_>>>()?;
        Ok(SeriesOracle::build(field, SeriesSource::Coefficients(coeffs), "coeffs".into()))
    }

    /// A branch given by an arbitrary deterministic coefficient generator.
    pub fn custom(field: BaseField, name: &str, gen: Arc<dyn Fn(usize) -> Rat + Send + Sync>) -> SeriesOracle {
        SeriesOracle::build(field, SeriesSource::Custom(gen), name.into())
    }

    fn build(field: BaseField, source: SeriesSource, name: String) -> SeriesOracle {
        SeriesOracle { field, source, name, cap: DEFAULT_CAP, cache: Mutex::new(vec![Rat::zero()]) }
    }

    pub fn with_cap(mut self, cap: usize) -> SeriesOracle {
        self.cap = cap.max(2);
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &SeriesSource {
        &self.source
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    /// s_0, …, s_{n-1}.
    pub fn coefficients(&self, n: usize) -> Vec<Rat> {
        let mut cache = self.cache.lock().unwrap();
        while cache.len() < n {
            let j = cache.len();
            let next = match &self.source {
                SeriesSource::Sqrt1pX => {
                    // s_j = binom(1/2, j-1); binom(1/2, k+1) = binom(1/2, k)·(1/2 − k)/(k + 1)
                    if j == 1 {
                        Rat::one()
                    } else {
                        let k = Rat::from_integer((j as i64 - 2).into());
                        let half = Rat::new(1.into(), 2.into());
                        &cache[j - 1] * (half - &k) / (k + Rat::one())
                    }
                }
                SeriesSource::Coefficients(c) => c.get(j - 1).cloned().unwrap_or_else(Rat::zero),
                SeriesSource::Custom(g) => g(j),
            };
            cache.push(next);
        }
        let out: Vec<Rat> = cache[..n].to_vec();
        drop(cache);
        out.iter().map(|c| self.field.normalize(c).expect("series coefficient in field")).collect()
    }

    /// First truncation tried for a polynomial of total degree `deg`. A polynomial
    /// branch of degree m needs deg·m + 1 terms to expose any nonvanishing order
    /// up to the Bezout bound; infinite series start small and double.
    fn start_depth(&self, deg: usize) -> usize {
        match &self.source {
            SeriesSource::Coefficients(c) => (deg * (1 + c.len())).max(4),
            _ => 8,
        }
    }

    /// Exact coefficients of f(t, s(t)) mod t^depth.
    pub fn substitute(&self, f: &BiPoly, depth: usize) -> Vec<Rat> {
        f.subs_series(&self.coefficients(depth), depth)
    }

    /// First nonzero coefficient index of f(t, s(t)) below `depth`, if any.
    fn first_nonzero(&self, f: &BiPoly, depth: usize) -> Result<Option<usize>> {
        let s = self.coefficients(depth);
        if let BaseField::Fp(p) = self.field {
            let sm = s.iter().map(|c| rat_mod(c, p)).collect::<Result<Vec<_>>>()?;
            let r = f.subs_series_mod(&sm, depth, p)?;
            return Ok(r.iter().position(|&c| c != 0));
        }
        let filtered = s
            .iter()
            .map(|c| rat_mod(c, FILTER_PRIME))
            .collect::<Result<Vec<_>>>()
            .and_then(|sm| f.subs_series_mod(&sm, depth, FILTER_PRIME));
        match filtered {
            Ok(r) => match r.iter().position(|&c| c != 0) {
                // a coefficient nonzero mod P is nonzero; the exact order is at most m
                Some(m) => {
                    let exact = f.subs_series(&s, m + 1);
                    Ok(exact.iter().position(|c| !c.is_zero()))
                }
                None => Ok(None),
            },
            Err(_) => Ok(f.subs_series(&s, depth).iter().position(|c| !c.is_zero())),
        }
    }

    /// ord_t f(t, s(t)) with adaptive truncation; CAP_EXCEEDED at the hard cap.
    pub fn series_value(&self, f: &BiPoly) -> Result<u64> {
        if f.is_zero() {
            return Err(Error::ZeroInput);
        }
        let deg = f.total_degree()?.max(1) as usize;
        let mut depth = self.start_depth(deg);
        loop {
            let d = depth.min(self.cap);
            if let Some(k) = self.first_nonzero(f, d)? {
                return Ok(k as u64);
            }
            if d >= self.cap {
                return Err(Error::CapExceeded { cap: self.cap });
            }
            depth *= 2;
        }
    }

    /// Leading coefficient of f(t, s(t)).
    pub fn leading_coefficient(&self, f: &BiPoly) -> Result<Rat> {
        let k = self.series_value(f)? as usize;
        Ok(self.substitute(f, k + 1)[k].clone())
    }
}

/// ord_t f(t, s(t)); see [`SeriesOracle::series_value`].
pub fn series_value(f: &BiPoly, s: &SeriesOracle) -> Result<u64> {
    s.series_value(f)
}

impl ValuationOracle for SeriesOracle {
    fn field(&self) -> BaseField {
        self.field
    }

    fn mode(&self) -> Mode {
        Mode::Rank1
    }

    fn value(&self, f: &BiPoly) -> Result<Value> {
        Ok(Value::rank1(Rat::from_integer(self.series_value(f)?.into())))
    }

    fn residue(&self, f: &BiPoly, g: &BiPoly) -> Result<Rat> {
        let (vf, vg) = (self.series_value(f)?, self.series_value(g)?);
        if vf != vg {
            return Err(Error::ValueMismatch(vf.to_string(), vg.to_string()));
        }
        let k = vf as usize;
        let s = self.coefficients(k + 1);
        let a = f.subs_series(&s, k + 1)[k].clone();
        let b = g.subs_series(&s, k + 1)[k].clone();
        Ok(self.field.mul(&a, &self.field.inv(&b)?))
    }
}

/// The rank-two valuation ν(g^n h) = n·ν(g) + (0, ord_t h(t, s(t))) for a curve g
/// through the branch s, with ν(g) = (1, c) where c = ord_t ∂g/∂y(t, s(t)).
#[derive(Clone, Debug)]
pub struct CompositeValuation {
    g: BiPoly,
    oracle: SeriesOracle,
    curve_order: u64,
}

impl CompositeValuation {
    /// Checks that g vanishes on the branch to order min(cap, VANISHING_CHECK).
    pub fn new(g: BiPoly, oracle: SeriesOracle) -> Result<CompositeValuation> {
        if g.is_zero() || g.total_degree()? == 0 {
            return Err(Error::Invalid("curve must be a nonconstant polynomial".into()));
        }
        if g.field() != oracle.field() {
            return Err(Error::Invalid("curve and branch over different fields".into()));
        }
        if let Some(k) = oracle.first_nonzero(&g, oracle.cap.min(VANISHING_CHECK))? {
            return Err(Error::Invalid(format!("{} does not vanish on the branch (order {})", g, k)));
        }
        let dg = g.derivative_y();
        if dg.is_zero() {
            return Err(Error::Invalid(format!("{} has zero y-derivative", g)));
        }
        let curve_order = oracle.series_value(&dg).map_err(|e| match e {
            Error::CapExceeded { .. } => Error::Invalid(format!("branch is singular on {}", g)),
            other => other,
        })?;
        Ok(CompositeValuation { g, oracle, curve_order })
    }

    /// Uses an explicit second coordinate c for ν(g) = (1, c).
    pub fn with_curve_order(mut self, c: u64) -> CompositeValuation {
        self.curve_order = c;
        self
    }

    pub fn curve(&self) -> &BiPoly {
        &self.g
    }

    pub fn oracle(&self) -> &SeriesOracle {
        &self.oracle
    }

    pub fn curve_value(&self) -> Value {
        Value::lex(Rat::one(), Rat::from_integer(self.curve_order.into()))
    }

    /// f = g^n·h with g ∤ h.
    pub fn factor(&self, f: &BiPoly) -> Result<(u32, BiPoly)> {
        if f.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut n = 0;
        let mut h = f.clone();
        while let Some(q) = h.exact_div(&self.g)? {
            h = q;
            n += 1;
        }
        Ok((n, h))
    }

    fn branch_order(&self, h: &BiPoly) -> Result<u64> {
        self.oracle.series_value(h).map_err(|e| match e {
            Error::CapExceeded { cap } => Error::OracleInconsistent(format!(
                "g-free part {} vanishes on the branch to depth {}; the curve is not the kernel",
                h, cap
            )),
            other => other,
        })
    }
}

/// ν(f) for the composite valuation.
pub fn composite_value(f: &BiPoly, cv: &CompositeValuation) -> Result<Value> {
    let (n, h) = cv.factor(f)?;
    let m = cv.branch_order(&h)?;
    let n = Rat::from_integer(n.into());
    let c = Rat::from_integer(cv.curve_order.into());
    Ok(Value::lex(n.clone(), n * c + Rat::from_integer(m.into())))
}

impl ValuationOracle for CompositeValuation {
    fn field(&self) -> BaseField {
        self.g.field()
    }

    fn mode(&self) -> Mode {
        Mode::Lex
    }

    fn value(&self, f: &BiPoly) -> Result<Value> {
        composite_value(f, self)
    }

    fn residue(&self, f: &BiPoly, g: &BiPoly) -> Result<Rat> {
        let (n1, h1) = self.factor(f)?;
        let (n2, h2) = self.factor(g)?;
        let (v1, v2) = (self.value(f)?, self.value(g)?);
        if n1 != n2 || v1 != v2 {
            return Err(Error::ValueMismatch(v1.to_string(), v2.to_string()));
        }
        self.oracle.residue(&h1, &h2)
    }

    fn curve(&self) -> Option<(BiPoly, Value)> {
        Some((self.g.clone(), self.curve_value()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn q(s: &str) -> BiPoly {
        BiPoly::parse(s, BaseField::Q).unwrap()
    }

    fn sqrt() -> SeriesOracle {
        SeriesOracle::sqrt1px(BaseField::Q).unwrap().with_cap(256)
    }

    #[test]
    fn binomial_coefficients() {
        let s = sqrt().coefficients(6);
        assert_eq!(s, vec![int(0), int(1), rat(1, 2), rat(-1, 8), rat(1, 16), rat(-5, 128)]);
    }

    #[test]
    fn values_along_branch() {
        let s = sqrt();
        assert_eq!(s.series_value(&q("y - x")).unwrap(), 2);
        assert_eq!(s.series_value(&q("x")).unwrap(), 1);
        assert_eq!(s.series_value(&q("y - x - 1/2*x^2")).unwrap(), 3);
        assert_eq!(s.series_value(&q("y^2 - x^2 - x^3")), Err(Error::CapExceeded { cap: 256 }));
        assert_eq!(s.series_value(&BiPoly::zero(BaseField::Q)), Err(Error::ZeroInput));
        assert_eq!(s.series_value(&q("3")).unwrap(), 0);
    }

    #[test]
    fn high_order_found_exactly() {
        // y − (truncation to degree 40) has order 41
        let s = sqrt();
        let c = s.coefficients(41);
        let mut f = q("y");
        for (j, a) in c.iter().enumerate() {
            f = f.sub(&BiPoly::monomial(BaseField::Q, a.clone(), j as u32, 0));
        }
        assert_eq!(s.series_value(&f).unwrap(), 41);
    }

    #[test]
    fn finite_field_branch() {
        let f7 = BaseField::fp(7).unwrap();
        let s = SeriesOracle::sqrt1px(f7).unwrap().with_cap(128);
        let g = BiPoly::parse("y^2 - x^2 - x^3", f7).unwrap();
        assert!(matches!(s.series_value(&g), Err(Error::CapExceeded { .. })));
        assert_eq!(s.series_value(&BiPoly::parse("y - x", f7).unwrap()).unwrap(), 2);
        assert!(SeriesOracle::sqrt1px(BaseField::fp(2).unwrap()).is_err());
    }

    #[test]
    fn composite_examples() {
        let cv = CompositeValuation::new(q("y^2 - x^2 - x^3"), sqrt()).unwrap();
        assert_eq!(composite_value(&q("y^2 - x^2 - x^3"), &cv).unwrap(), Value::lex(int(1), int(1)));
        assert_eq!(composite_value(&q("x"), &cv).unwrap(), Value::lex(int(0), int(1)));
        let f = q("(y^2 - x^2 - x^3)^2 * x^3");
        assert_eq!(composite_value(&f, &cv).unwrap(), Value::lex(int(2), int(5)));
        assert!(CompositeValuation::new(q("y - x"), sqrt()).is_err());
    }

    #[test]
    fn residues() {
        let s = sqrt();
        assert_eq!(s.residue(&q("y"), &q("x")).unwrap(), int(1));
        assert_eq!(s.residue(&q("y - x"), &q("x^2")).unwrap(), rat(1, 2));
        assert!(s.residue(&q("y"), &q("x^2")).is_err());
    }

    #[test]
    fn polynomial_branch() {
        let s = SeriesOracle::polynomial(BaseField::Q, vec![int(0), int(1)]).unwrap().with_cap(64);
        assert_eq!(s.series_value(&q("y")).unwrap(), 2);
        assert!(matches!(s.series_value(&q("y - x^2")), Err(Error::CapExceeded { .. })));
    }
}
