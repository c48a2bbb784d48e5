//! Generators and brute-force oracles shared by the integration tests. The
//! oracles work in plain integers and do not call into the library's lattice or
//! semigroup code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use valkey_core::bipoly::BiPoly;
use valkey_core::genseq::{synthesize, GenSeq};
use valkey_core::rat::{parse_rat, Rat};
use valkey_core::tower::{BaseField, Tower};
use valkey_core::values::Value;

pub fn v(s: &str) -> Value {
    Value::rank1(parse_rat(s).unwrap())
}

pub fn q(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub const EXAMPLE1: [&str; 6] = ["1", "5/3", "59/9", "545/27", "5027/81", "45689/243"];

pub fn example1(depth: usize) -> GenSeq {
    let b: Vec<Value> = EXAMPLE1.iter().map(|s| v(s)).collect();
    synthesize(&b, &Tower::new(BaseField::Q), depth).unwrap()
}

/// The β_i of the doubling example: β_0 = 1, β_i = 2β_{i−1} + 1/2^i.
pub fn doubling(len: usize) -> Vec<Value> {
    let mut out = vec![q(1, 1)];
    for i in 1..len {
        let next = &out[i - 1] * q(2, 1) + q(1, 1 << i);
        out.push(next);
    }
    out.into_iter().map(Value::rank1).collect()
}

/// Admissible discrete rank-one data with β_0 = 1 and all denominators ≤ `max_den`:
/// the group grows by a chosen index m at each step, and β_{i+1} > n̄_iβ_i.
#[derive(Clone, Debug)]
pub struct RandomChain {
    pub betas: Vec<Value>,
    /// Denominator D_i of G(β_0..β_i) = (1/D_i)Z.
    pub dens: Vec<i64>,
}

pub fn random_chain<R: Rng>(rng: &mut R, len: usize, max_den: i64, min_index: i64) -> RandomChain {
    let mut betas = vec![q(1, 1)];
    let mut dens = vec![1i64];
    for i in 1..len {
        let d = dens[i - 1];
        let choices: Vec<i64> = (min_index..=4).filter(|m| d * m <= max_den).collect();
        let m = choices[rng.gen_range(0..choices.len())];
        let nd = d * m;
        let prev_nbar = if i >= 2 { dens[i - 1] / dens[i - 2] } else { 1 };
        // smallest numerator strictly above n̄_{i-1}·β_{i-1}
        let floor = (&betas[i - 1] * q(prev_nbar, 1) * q(nd, 1)).floor().to_integer().to_i64().unwrap();
        let mut num = floor + 1 + rng.gen_range(0..(3 * nd));
        while num.gcd(&m) != 1 {
            num += 1;
        }
        betas.push(q(num, nd));
        dens.push(nd);
    }
    RandomChain { betas: betas.into_iter().map(Value::rank1).collect(), dens }
}

/// The values as integers in units of 1/den.
pub fn scaled(vals: &[Value], den: i64) -> Vec<i64> {
    vals.iter()
        .map(|b| {
            let s = b.a() * q(den, 1);
            assert!(s.is_integer());
            s.to_integer().to_i64().unwrap()
        })
        .collect()
}

/// Reachable nonnegative combinations of the generators on 0..=limit.
pub fn reachable(gens: &[i64], limit: i64) -> Vec<bool> {
    let mut r = vec![false; limit as usize + 1];
    r[0] = true;
    for x in 1..=limit as usize {
        r[x] = gens.iter().any(|&g| g as usize <= x && r[x - g as usize]);
    }
    r
}

/// All integer vectors (a_1..a_k) with 0 ≤ a_i < bounds[i].
pub fn boxes(bounds: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..b).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

/// Gaps and Frobenius number of the numerical semigroup generated by `gens`
/// (gcd 1), by direct enumeration.
pub fn frobenius(gens: &[i64]) -> i64 {
    let m = *gens.iter().min().unwrap();
    let limit = gens.iter().max().unwrap() * m + m;
    let r = reachable(gens, limit);
    (0..=limit).rev().find(|&x| !r[x as usize]).unwrap_or(-1)
}

pub fn random_poly<R: Rng>(rng: &mut R, field: BaseField, deg: u32, height: i64) -> BiPoly {
    loop {
        let mut terms = Vec::new();
        let n = rng.gen_range(1..=6);
        for _ in 0..n {
            let d = rng.gen_range(0..=deg);
            let i = rng.gen_range(0..=d);
            let c = rng.gen_range(-height..=height);
            terms.push((q(c, 1), i, d - i));
        }
        let p = BiPoly::from_terms(field, terms).unwrap();
        // units have value 0; keep only elements of the maximal ideal
        if !p.is_zero() && p.coeff(0, 0) == q(0, 1) {
            return p;
        }
    }
}

/// Elements of the semigroup generated by `gens` up to `limit` (inclusive), by
/// breadth-first closure over exact rationals.
pub fn closure(gens: &[Rat], limit: &Rat) -> BTreeSet<Rat> {
    let mut seen = BTreeSet::new();
    let mut frontier = vec![q(0, 1)];
    seen.insert(q(0, 1));
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = &x + g;
            if &y <= limit && seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}
