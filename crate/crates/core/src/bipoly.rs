//! Sparse bivariate polynomials over Q or F_p.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, parse_rat, Rat};
use crate::tower::BaseField;

/// Exponent pair of a monomial x^x y^y, ordered by total degree then x.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Exp {
    pub x: u32,
    pub y: u32,
}

impl Exp {
    pub fn new(x: u32, y: u32) -> Exp {
        Exp { x, y }
    }

    pub fn total(self) -> u32 {
        self.x + self.y
    }
}

impl Ord for Exp {
    fn cmp(&self, o: &Exp) -> Ordering {
        self.total().cmp(&o.total()).then(self.x.cmp(&o.x))
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, o: &Exp) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A polynomial in k[x, y]; no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiPoly {
    field: BaseField,
    terms: BTreeMap<Exp, Rat>,
}

impl BiPoly {
    pub fn zero(field: BaseField) -> BiPoly {
        BiPoly { field, terms: BTreeMap::new() }
    }

    pub fn constant(field: BaseField, c: Rat) -> BiPoly {
        BiPoly::monomial(field, c, 0, 0)
    }

    pub fn one(field: BaseField) -> BiPoly {
        BiPoly::constant(field, Rat::one())
    }

    /// c·x^i·y^j (c is normalized into the field).
    pub fn monomial(field: BaseField, c: Rat, i: u32, j: u32) -> BiPoly {
        let mut p = BiPoly::zero(field);
        let c = field.normalize(&c).expect("coefficient not representable in the base field");
        if !c.is_zero() {
            p.terms.insert(Exp::new(i, j), c);
        }
        p
    }

    pub fn x(field: BaseField) -> BiPoly {
        BiPoly::monomial(field, Rat::one(), 1, 0)
    }

    pub fn y(field: BaseField) -> BiPoly {
        BiPoly::monomial(field, Rat::one(), 0, 1)
    }

    /// Builds a polynomial from (coefficient, x-exponent, y-exponent) triples.
    pub fn from_terms<I: IntoIterator<Item = (Rat, u32, u32)>>(field: BaseField, it: I) -> Result<BiPoly> {
        let mut p = BiPoly::zero(field);
        for (c, i, j) in it {
            let c = field.normalize(&c)?;
            p.add_term(Exp::new(i, j), &c);
        }
        Ok(p)
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending grlex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&Exp::new(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    /// Adds c·x^e in place.
    pub fn add_term(&mut self, e: Exp, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let f = self.field;
        let remove = match self.terms.get_mut(&e) {
            Some(v) => {
                *v = f.add(v, c);
                v.is_zero()
            }
            None => {
                self.terms.insert(e, c.clone());
                false
            }
        };
        if remove {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly {
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (*e, self.field.neg(c))).collect(),
        }
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, &self.field.neg(c));
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> BiPoly {
        let c = self.field.normalize(c).expect("scalar not representable in the base field");
        if c.is_zero() {
            return BiPoly::zero(self.field);
        }
        BiPoly {
            field: self.field,
            terms: self.terms.iter().map(|(e, v)| (*e, self.field.mul(v, &c))).collect(),
        }
    }

    /// Multiplies by x^i y^j.
    pub fn shift(&self, i: u32, j: u32) -> BiPoly {
        BiPoly {
            field: self.field,
            terms: self.terms.iter().map(|(e, v)| (Exp::new(e.x + i, e.y + j), v.clone())).collect(),
        }
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        let mut acc: std::collections::HashMap<Exp, Rat> = std::collections::HashMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = Exp::new(e1.x + e2.x, e1.y + e2.y);
                let p = c1 * c2;
                acc.entry(e).and_modify(|v| *v += &p).or_insert(p);
            }
        }
        let f = self.field;
        let terms = acc
            .into_iter()
            .map(|(e, c)| (e, f.normalize(&c).expect("normalized inputs")))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        BiPoly { field: f, terms }
    }

    pub fn pow(&self, n: u32) -> BiPoly {
        let mut result = BiPoly::one(self.field);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Minimum total degree of a term.
    pub fn ord_total(&self) -> Result<u32> {
        self.terms.keys().map(|e| e.total()).min().ok_or(Error::ZeroInput)
    }

    pub fn total_degree(&self) -> Result<u32> {
        self.terms.keys().map(|e| e.total()).max().ok_or(Error::ZeroInput)
    }

    pub fn deg_y(&self) -> Result<u32> {
        self.terms.keys().map(|e| e.y).max().ok_or(Error::ZeroInput)
    }

    pub fn deg_x(&self) -> Result<u32> {
        self.terms.keys().map(|e| e.x).max().ok_or(Error::ZeroInput)
    }

    /// Smallest x-exponent and y-exponent appearing (the monomial content).
    pub fn min_exps(&self) -> Result<(u32, u32)> {
        let mx = self.terms.keys().map(|e| e.x).min().ok_or(Error::ZeroInput)?;
        let my = self.terms.keys().map(|e| e.y).min().ok_or(Error::ZeroInput)?;
        Ok((mx, my))
    }

    /// Coefficient of y^j as a polynomial in x, returned as (x-exponent, coefficient) pairs.
    pub fn coeff_y(&self, j: u32) -> Vec<(u32, Rat)> {
        self.terms.iter().filter(|(e, _)| e.y == j).map(|(e, c)| (e.x, c.clone())).collect()
    }

    /// Whether the leading coefficient in y is a nonzero constant.
    pub fn is_monic_in_y(&self) -> Result<bool> {
        let d = self.deg_y()?;
        let top = self.coeff_y(d);
        Ok(top.len() == 1 && top[0].0 == 0)
    }

    pub fn derivative_y(&self) -> BiPoly {
        let f = self.field;
        let mut out = BiPoly::zero(f);
        for (e, c) in &self.terms {
            if e.y > 0 {
                let k = f.normalize(&Rat::from_integer(e.y.into())).expect("integer");
                out.add_term(Exp::new(e.x, e.y - 1), &f.mul(c, &k));
            }
        }
        out
    }

    pub fn swap_xy(&self) -> BiPoly {
        BiPoly {
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (Exp::new(e.y, e.x), c.clone())).collect(),
        }
    }

    /// Substitutes x := px, y := py.
    pub fn compose(&self, px: &BiPoly, py: &BiPoly) -> BiPoly {
        let f = self.field;
        let mut xpow = vec![BiPoly::one(f)];
        let mut ypow = vec![BiPoly::one(f)];
        let mut out = BiPoly::zero(f);
        for (e, c) in &self.terms {
            while xpow.len() <= e.x as usize {
                let next = xpow.last().unwrap().mul(px);
                xpow.push(next);
            }
            while ypow.len() <= e.y as usize {
                let next = ypow.last().unwrap().mul(py);
                ypow.push(next);
            }
            let t = xpow[e.x as usize].mul(&ypow[e.y as usize]).scale(c);
            out = out.add(&t);
        }
        out
    }

    /// Applies an exponent map x^i y^j ↦ x^{i'} y^{j'} to every monomial.
    pub fn map_monomials<F: Fn(u32, u32) -> (u32, u32)>(&self, m: F) -> BiPoly {
        let mut out = BiPoly::zero(self.field);
        for (e, c) in &self.terms {
            let (i, j) = m(e.x, e.y);
            out.add_term(Exp::new(i, j), c);
        }
        out
    }

    /// Applies a Laurent exponent map and clears denominators: returns (p, a, b)
    /// with p = x^a y^b · (mapped polynomial).
    pub fn map_laurent<F: Fn(u32, u32) -> (i64, i64)>(&self, m: F) -> (BiPoly, i64, i64) {
        let mapped: Vec<((i64, i64), &Rat)> = self.terms.iter().map(|(e, c)| (m(e.x, e.y), c)).collect();
        let a = mapped.iter().map(|((i, _), _)| -*i).max().unwrap_or(0).max(0);
        let b = mapped.iter().map(|((_, j), _)| -*j).max().unwrap_or(0).max(0);
        let mut out = BiPoly::zero(self.field);
        for ((i, j), c) in mapped {
            out.add_term(Exp::new((i + a) as u32, (j + b) as u32), c);
        }
        (out, a, b)
    }

    /// Division by a polynomial monic in y: returns (q, r) with deg_y r < deg_y g.
    pub fn div_rem_monic_y(&self, g: &BiPoly) -> Result<(BiPoly, BiPoly)> {
        if !g.is_monic_in_y()? {
            return Err(Error::Invalid(format!("{} is not monic in y", g)));
        }
        let f = self.field;
        let d = g.deg_y()?;
        let lead_inv = f.inv(&g.coeff(0, d))?;
        let mut q = BiPoly::zero(f);
        let mut r = self.clone();
        loop {
            let Ok(rd) = r.deg_y() else { break };
            if rd < d {
                break;
            }
            let top = BiPoly::from_terms(
                f,
                r.coeff_y(rd).into_iter().map(|(i, c)| (f.mul(&c, &lead_inv), i, rd - d)),
            )?;
            q = q.add(&top);
            r = r.sub(&top.mul(g));
        }
        Ok((q, r))
    }

    /// Leading term for the lexicographic order with y > x.
    fn lex_lead(&self) -> Option<(Exp, Rat)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| a.y.cmp(&b.y).then(a.x.cmp(&b.x)))
            .map(|(e, c)| (*e, c.clone()))
    }

    /// Exact quotient self / g, or None when g does not divide self.
    pub fn exact_div(&self, g: &BiPoly) -> Result<Option<BiPoly>> {
        let (ge, gc) = g.lex_lead().ok_or(Error::ZeroInput)?;
        let f = self.field;
        let ginv = f.inv(&gc)?;
        let mut q = BiPoly::zero(f);
        let mut r = self.clone();
        while let Some((re, rc)) = r.lex_lead() {
            if re.x < ge.x || re.y < ge.y {
                return Ok(None);
            }
            let t = BiPoly::monomial(f, f.mul(&rc, &ginv), re.x - ge.x, re.y - ge.y);
            r = r.sub(&t.mul(g));
            q = q.add(&t);
        }
        Ok(Some(q))
    }

    /// Coefficients of f(t, s(t)) mod t^depth, where `s` lists s_0, s_1, … (at least `depth` entries).
    pub fn subs_series(&self, s: &[Rat], depth: usize) -> Vec<Rat> {
        let f = self.field;
        let Ok(dy) = self.deg_y() else { return vec![Rat::zero(); depth] };
        let s = &s[..depth.min(s.len())];
        let mut acc = vec![Rat::zero(); depth];
        for j in (0..=dy).rev() {
            // acc = acc * s + A_j(t)
            let mut next = vec![Rat::zero(); depth];
            for (i, a) in acc.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, sk) in s.iter().enumerate() {
                    if i + k >= depth {
                        break;
                    }
                    if !sk.is_zero() {
                        next[i + k] += a * sk;
                    }
                }
            }
            for (xe, c) in self.coeff_y(j) {
                if (xe as usize) < depth {
                    next[xe as usize] += &c;
                }
            }
            acc = next.iter().map(|v| f.normalize(v).expect("normalized")).collect();
        }
        acc
    }

    /// Same as [`BiPoly::subs_series`] but with coefficients reduced mod a prime.
    pub fn subs_series_mod(&self, s: &[u64], depth: usize, p: u64) -> Result<Vec<u64>> {
        let Ok(dy) = self.deg_y() else { return Ok(vec![0; depth]) };
        let s = &s[..depth.min(s.len())];
        let mut acc = vec![0u64; depth];
        let coeffs: Vec<Vec<(u32, u64)>> = (0..=dy)
            .map(|j| {
                self.coeff_y(j)
                    .into_iter()
                    .map(|(xe, c)| Ok((xe, rat_mod(&c, p)?)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for j in (0..=dy as usize).rev() {
            let mut next = vec![0u128; depth];
            for (i, &a) in acc.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let a = a as u128;
                let lim = (depth - i).min(s.len());
                for k in 0..lim {
                    let v = &mut next[i + k];
                    *v = (*v + a * s[k] as u128) % p as u128;
                }
            }
            for &(xe, c) in &coeffs[j] {
                if (xe as usize) < depth {
                    next[xe as usize] = (next[xe as usize] + c as u128) % p as u128;
                }
            }
            acc = next.into_iter().map(|v| v as u64).collect();
        }
        Ok(acc)
    }

    /// Parses the text format: sums of signed terms in x, y with `*`, `^`,
    /// parentheses and rational literals "p/q".
    pub fn parse(text: &str, field: BaseField) -> Result<BiPoly> {
        let mut p = Parser { s: text.as_bytes(), pos: 0, field };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Parse(format!("unexpected {:?} at offset {}", p.s[p.pos] as char, p.pos)));
        }
        Ok(e)
    }

    /// Terms sorted for display: descending y-degree, then descending x-degree.
    pub fn display_terms(&self) -> Vec<(Exp, Rat)> {
        let mut v: Vec<(Exp, Rat)> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        v.sort_by(|(a, _), (b, _)| b.y.cmp(&a.y).then(b.x.cmp(&a.x)));
        v
    }
}

/// r mod p for a prime p not dividing the denominator.
pub fn rat_mod(r: &Rat, p: u64) -> Result<u64> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let pb = BigInt::from(p);
    let d = r.denom().mod_floor(&pb);
    if d.is_zero() {
        return Err(Error::ZeroDivisor(format!("{} has denominator divisible by {}", r, p)));
    }
    let inv = d.modpow(&(&pb - 2u32), &pb);
    Ok((r.numer() * inv).mod_floor(&pb).to_u64().expect("reduced mod p"))
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.display_terms().into_iter().enumerate() {
            let neg = self.field == BaseField::Q && c.is_negative();
            let a = if neg { -c } else { c };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut parts = Vec::new();
            if !a.is_one() || (e.x == 0 && e.y == 0) {
                parts.push(fmt_rat(&a));
            }
            match e.x {
                0 => {}
                1 => parts.push("x".into()),
                n => parts.push(format!("x^{}", n)),
            }
            match e.y {
                0 => {}
                1 => parts.push("y".into()),
                n => parts.push(format!("y^{}", n)),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    field: BaseField,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{} at offset {}", msg, self.pos)))
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = BiPoly::zero(self.field);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = if sign { acc.sub(&t) } else { acc.add(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                // juxtaposition such as "2x" or "x(y+1)"
                Some(c) if c == b'x' || c == b'y' || c == b'(' || c.is_ascii_digit() => {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<BiPoly> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected exponent");
            }
            let n: u32 = std::str::from_utf8(&self.s[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| Error::Parse("exponent too large".into()))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected number");
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap().to_string())
    }

    fn primary(&mut self) -> Result<BiPoly> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(BiPoly::x(self.field))
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(BiPoly::y(self.field))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut lit = self.number()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    lit = format!("{}/{}", lit, self.number()?);
                }
                let r = parse_rat(&lit)?;
                let c = self.field.normalize(&r)?;
                Ok(BiPoly::constant(self.field, c))
            }
            Some(c) => self.err(&format!("unexpected {:?}", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}
