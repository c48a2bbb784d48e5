//! The acceptance suite: one line per criterion.
//!
//! Criterion 3 quotes −1/4 as the cubic coefficient of x√(1+x); the binomial
//! series gives −1/8. The check is kept literal and is expected to fail; the
//! test itself fails only if the set of failing criteria changes.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use valkey_core::bipoly::BiPoly;
use valkey_core::birat::quadratic_transform;
use valkey_core::genseq::{analyze, expand, value_of, AnalyzeOptions, GenSeq};
use valkey_core::rat::{fmt_rat, Rat};
use valkey_core::series::{composite_value, CompositeValuation, SeriesOracle};
use valkey_core::subring::{a2_semigroup, gap_witness, non_fg_module_witness};
use valkey_core::tower::BaseField::Q;
use valkey_core::valuation::{
    burn_in, density, describe, describe_values, is_symmetric, SemigroupCase, SemigroupDescription, Valuation,
};
use valkey_core::values::{validate_semigroup_data, Card, ValidationOptions, Value, ValueChain};

type Check = Result<String, String>;

/// Polynomials expanded by earlier criteria, re-examined by criterion 8.
type Expanded = Vec<(GenSeq, BiPoly)>;

const EXPECTED_FAILURES: [u32; 1] = [3];

fn p(s: &str) -> BiPoly {
    BiPoly::parse(s, Q).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {:?}, limit {:?}", t, limit))
}

fn c1_doubling() -> Check {
    let start = Instant::now();
    let betas = doubling(12);
    let r = validate_semigroup_data(&betas, None, ValidationOptions::default()).map_err(|e| e.to_string())?;
    ensure(r.ok, || format!("rejected: {:?}", r.first_violation))?;
    ensure(r.nbars.iter().all(|&n| n == Card::Finite(2)), || format!("nbars {:?}", r.nbars))?;
    // d_1..d_10 are forced; with twelve values d_11 has no successor to bound it
    let mut rejected = 0;
    for mask in 0u32..(1 << 10) {
        let dees: Vec<Card> = (0..10).map(|i| Card::Finite(if mask >> i & 1 == 1 { 2 } else { 1 })).collect();
        let r = validate_semigroup_data(&betas, Some(&dees), ValidationOptions::default()).map_err(|e| e.to_string())?;
        if mask == 0 {
            ensure(r.ok, || "all d_i = 1 rejected".into())?;
        } else {
            ensure(!r.ok, || format!("accepted d = {:?}", dees))?;
            rejected += 1;
        }
    }
    for i in 0..10 {
        let dees: Vec<Card> = (0..10).map(|j| Card::Finite(if j == i { 3 } else { 1 })).collect();
        let r = validate_semigroup_data(&betas, Some(&dees), ValidationOptions::default()).map_err(|e| e.to_string())?;
        ensure(!r.ok, || format!("accepted d_{} = 3", i + 1))?;
        rejected += 1;
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("12 values accepted with n̄_i = 2; {} assignments with some d_i ≥ 2 rejected", rejected))
}

fn c2_example1(out: &mut Expanded) -> Check {
    let start = Instant::now();
    let s = example1(5);
    ensure(s.key(2) == &p("y^3 - x^5"), || format!("P_2 = {}", s.key(2)))?;
    ensure(s.key(3) == &p("(y^3 - x^5)^3 - x^18*y"), || format!("P_3 = {}", s.key(3)))?;
    s.check_invariants().map_err(|e| e.to_string())?;
    // 3β_i = a_iβ_0 + β_{i−1} with a_i even, and β_{i+1} > 3β_i
    for i in 2..=5 {
        let st = &s.steps()[i - 1];
        let a = st.u[0];
        ensure(a.is_multiple_of(2) && st.u[1..i - 1].iter().all(|&e| e == 0) && st.u[i - 1] == 1, || {
            format!("U_{} = {:?}", i, st.u)
        })?;
        let (b, prev) = (s.beta(i).unwrap(), s.beta(i - 1).unwrap());
        ensure(b.scale_i(3) == &Value::rank1(Rat::from_integer(a.into())) + prev, || format!("3β_{} ≠ a + β_{}", i, i - 1))?;
    }
    let desc = describe(&s, 5).map_err(|e| e.to_string())?;
    let sg = a2_semigroup(&desc, &v("6")).map_err(|e| e.to_string())?;
    ensure(sg.generators.first() == Some(&v("2")), || format!("γ_0 = {:?}", sg.generators.first()))?;
    let mut ls = Vec::new();
    for n in 2..=4 {
        let w = gap_witness(&desc, n).map_err(|e| e.to_string())?;
        ensure(&w.gamma_next - &w.gamma_l == w.gamma0.scale_rat(&q(1, 3)), || format!("n = {}", n))?;
        let back = w.coordinates.iter().zip(&w.basis).fold(Value::zero(w.gamma0.mode()), |acc, (c, b)| acc + b.scale(c));
        ensure(back == w.gamma_next, || format!("lattice coordinates wrong at n = {}", n))?;
        ls.push(format!("n={}: l={}", n, w.l));
    }
    within(start, Duration::from_secs(5))?;
    let s3 = example1(3);
    for f in ["y^3 - x^5", "x^18*y - (y^3 - x^5)^3 + x^3", "y^4 - x^5*y + x^7", "x*y^2 + 2*x^6", "y^6 - 2*x^5*y^3 + x^10"] {
        out.push((s3.clone(), p(f)));
    }
    Ok(format!("P_2, P_3 exact; γ_0 = 2; gap witnesses {}", ls.join(", ")))
}

/// x√(1+x) = Σ binom(1/2, k) x^{k+1}, computed directly.
fn sqrt_branch_coeffs(n: usize) -> Vec<Rat> {
    let mut c = vec![q(1, 1)];
    for k in 1..n {
        let prev = c[k - 1].clone();
        c.push(prev * (q(1, 2) - q(k as i64 - 1, 1)) / q(k as i64, 1));
    }
    c
}

fn c3_composite(out: &mut Expanded) -> Check {
    let start = Instant::now();
    let g = p("y^2 - x^2 - x^3");
    let cv = CompositeValuation::new(g.clone(), SeriesOracle::sqrt1px(Q).unwrap()).map_err(|e| e.to_string())?;
    let gv = composite_value(&g, &cv).map_err(|e| e.to_string())?;
    ensure(gv == Value::lex(q(1, 1), q(1, 1)), || format!("ν(g) = {}", gv))?;
    let val = Valuation::composite(cv);
    let s = val.sequence(6).map_err(|e| e.to_string())?;
    let sv = value_of(&g, &s).map_err(|e| e.to_string())?;
    ensure(sv == gv, || format!("value_of(g) = {}", sv))?;
    let desc = describe(&s, 6).map_err(|e| e.to_string())?;
    ensure(desc.case == SemigroupCase::Case3 { curve: g.clone() }, || format!("case {}", desc.case.name()))?;
    // the keys against the true truncations of the branch
    let true_c = sqrt_branch_coeffs(5);
    for i in 2..=5 {
        let mut t = p("y");
        for (k, c) in true_c.iter().take(i - 1).enumerate() {
            t = t.sub(&BiPoly::monomial(Q, c.clone(), k as u32 + 1, 0));
        }
        ensure(s.key(i) == &t, || format!("P_{} = {} is not the truncation {}", i, s.key(i), t))?;
    }
    out.push((s.clone(), g.clone()));
    out.push((s.clone(), p("y^2*x - x^3 - x^4 + y^3")));
    within(start, Duration::from_secs(5))?;
    // the quoted expansion coefficients
    let quoted = [q(1, 1), q(1, 2), q(-1, 4)];
    for i in 2..=5 {
        for (k, c) in quoted.iter().enumerate().take(i - 1) {
            let got = -s.key(i).coeff(k as u32 + 1, 0);
            ensure(&got == c, || {
                format!(
                    "ν(g) = (1,1) and CASE3 hold, keys equal the true truncations of x√(1+x), but P_{} has x^{} coefficient {} (series coefficient {}) where the quoted expansion gives {}",
                    i,
                    k + 1,
                    fmt_rat(&-&got),
                    fmt_rat(&got),
                    fmt_rat(c)
                )
            })?;
        }
    }
    Ok("keys match the quoted expansion; ν(g) = (1,1); CASE3".into())
}

fn c4_oracle(out: &mut Expanded) -> Check {
    let o = SeriesOracle::sqrt1px(Q).unwrap();
    let s = analyze(&o, AnalyzeOptions::depth(16)).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut mismatches = Vec::new();
    let total = 120;
    for _ in 0..total {
        let f = random_poly(&mut rng, Q, 6, 10);
        let a = value_of(&f, &s).map_err(|e| format!("{}: {}", f, e))?;
        let b = o.series_value(&f).map_err(|e| format!("{}: {}", f, e))?;
        if a.a().to_integer().to_u64() != Some(b) || !a.a().is_integer() {
            mismatches.push(format!("{}: {} vs {}", f, a, b));
        }
        out.push((s.clone(), f));
    }
    ensure(mismatches.is_empty(), || mismatches.join("; "))?;
    Ok(format!("{} random polynomials, 0 mismatches", total))
}

fn c5_representation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checks = 0;
    for inst in 0..200 {
        let len = rng.gen_range(2..=5);
        let c = random_chain(&mut rng, len, 16, 1);
        let chain = ValueChain::new(&c.betas).map_err(|e| e.to_string())?;
        let k = c.betas.len() - 1;
        let den = *c.dens.last().unwrap();
        let gens = scaled(&c.betas, den);
        let nbars: Vec<i64> = (1..=k).map(|i| c.dens[i] / c.dens[i - 1]).collect();
        // s_i: the least t with t·β_i in S(β_0..β_{i−1})
        for i in 1..=k {
            let t_max = 64i64;
            let reach = reachable(&gens[..i], gens[i] * t_max);
            let s = (1..=t_max).find(|&t| reach[(t * gens[i]) as usize]).unwrap();
            let nb = chain.nbar(i).finite().unwrap() as i64;
            ensure(s == nb && nb == nbars[i - 1], || format!("instance {}: s_{} = {}, n̄ = {}", inst, i, s, nb))?;
        }
        let limit = 200i64;
        let reach = reachable(&gens, limit);
        let digits = boxes(&nbars);
        for num in 0..limit {
            let gamma = Value::rank1(q(num, den));
            // every in-range digit vector that leaves an integer multiple of β_0
            let brute: Vec<Vec<i64>> = digits
                .iter()
                .filter(|d| (num - d.iter().zip(&gens[1..]).map(|(a, g)| a * g).sum::<i64>()) % gens[0] == 0)
                .cloned()
                .collect();
            let rep = chain.representation(&gamma, k).map_err(|e| e.to_string())?;
            ensure(brute.len() == 1, || format!("instance {}: {} digit vectors for {}", inst, brute.len(), gamma))?;
            let got: Vec<i64> = rep[1..].iter().map(|x| x.to_i64().unwrap()).collect();
            ensure(got == brute[0], || format!("instance {}: {} → {:?} vs {:?}", inst, gamma, got, brute[0]))?;
            let m = chain.membership(&gamma, k).map_err(|e| e.to_string())?;
            ensure(m.member == reach[num as usize], || format!("instance {}: membership of {}", inst, gamma))?;
            checks += 1;
        }
    }
    Ok(format!("200 instances, {} values, s_i = n̄_i throughout, 0 mismatches", checks))
}

fn c6_symmetry() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for inst in 0..50 {
        let len = rng.gen_range(2..=4);
        let c = random_chain(&mut rng, len, 64, 2);
        let desc = describe_values(&c.betas, true).map_err(|e| e.to_string())?;
        let (sym, m) = is_symmetric(&desc).map_err(|e| e.to_string())?;
        let den = *c.dens.last().unwrap();
        let gens = scaled(&desc.values(), den);
        let f = frobenius(&gens);
        let reach = reachable(&gens, f.max(0));
        let brute_sym = (0..=f).all(|s| reach[s as usize] != reach[(f - s) as usize]);
        ensure(sym && brute_sym, || format!("instance {}: not symmetric", inst))?;
        ensure(m.a() == &q(f, den), || format!("instance {}: Frobenius {} vs {}/{}", inst, m, f, den))?;
    }
    let d = SemigroupDescription::from_generators(&[v("2"), v("3")]).map_err(|e| e.to_string())?;
    let (sym, m) = is_symmetric(&d).map_err(|e| e.to_string())?;
    ensure(sym && m == v("1"), || format!("{{2,3}}: {} {}", sym, m))?;
    Ok("50 random lists symmetric with brute-force Frobenius; {2,3} gives m = 1".into())
}

fn c7_birat() -> Check {
    let s = example1(4);
    let (td, t) = quadratic_transform(&s).map_err(|e| e.to_string())?;
    ensure(td.total_transform(&p("x")) == p("x^3*y"), || "x ≠ x_1^3 y_1".into())?;
    ensure(td.total_transform(&p("y")) == p("x^5*y^2"), || "y ≠ x_1^5 y_1^2".into())?;
    ensure(td.verify_substitution(), || "inverse substitution fails".into())?;
    ensure(t.beta(1) == Some(&v("14/9")), || format!("β̂_1 = {:?}", t.beta(1)))?;
    t.check_invariants().map_err(|e| e.to_string())?;
    let c = td.center.clone().ok_or("no rational center")?;
    let shift = p("y").add(&BiPoly::constant(Q, c));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let f = random_poly(&mut rng, Q, 4, 6);
        let ft = td.total_transform(&f).compose(&p("x"), &shift);
        let (a, b) = (value_of(&f, &s).map_err(|e| e.to_string())?, value_of(&ft, &t).map_err(|e| e.to_string())?);
        ensure(a == b, || format!("{}: {} vs {}", f, a, b))?;
    }
    Ok("x = x_1^3 y_1, y = x_1^5 y_1^2; β̂_1 = 14/9; invariants hold; 50 values preserved".into())
}

fn c8_uniqueness(exp: &Expanded) -> Check {
    for (s, f) in exp {
        let e = expand(f, s).map_err(|e| format!("{}: {}", f, e))?;
        let lead = e.recompose_leading(s);
        let again = expand(&lead, s).map_err(|e| e.to_string())?;
        ensure(again.leading == e.leading && again.tail.is_empty() && again.rho == e.rho, || {
            format!("re-expanding the leading sum of {} changed it", f)
        })?;
        let monos: Vec<Vec<u32>> = e.leading.iter().map(|t| t.exps.clone()).collect();
        let r = s.residue_rank(&monos).map_err(|e| e.to_string())?;
        ensure(r == monos.len(), || format!("{}: residue rank {} < {}", f, r, monos.len()))?;
    }
    Ok(format!("{} expansions: leading sums idempotent, residues of full rank", exp.len()))
}

fn c9_density() -> Check {
    let nat = SemigroupDescription::from_generators(&[v("1")]).map_err(|e| e.to_string())?;
    let traj = density(&nat, 512).map_err(|e| e.to_string())?;
    for pt in &traj {
        let n = pt.n as i64;
        ensure(pt.ratio == q(n - 1, n * n), || format!("φ({})/n² = {}", n, pt.ratio))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let half = q(1, 2);
    let mut burns = Vec::new();
    for inst in 0..10 {
        let len = rng.gen_range(2..=4);
        let c = random_chain(&mut rng, len, 16, 2);
        let desc = describe_values(&c.betas, true).map_err(|e| e.to_string())?;
        let traj = density(&desc, 128).map_err(|e| e.to_string())?;
        let b = burn_in(&traj).ok_or_else(|| format!("instance {}: no burn-in within 128", inst))?;
        // φ re-counted by enumeration in units of the smallest generator
        let den = *c.dens.last().unwrap();
        let gens = scaled(&desc.values(), den);
        let m = gens[0];
        let reach = reachable(&gens, 128 * m);
        for pt in &traj {
            let brute = (1..(pt.n as i64 * m)).filter(|&x| reach[x as usize]).count() as u64;
            ensure(pt.phi == brute, || format!("instance {}: φ({}) = {} vs {}", inst, pt.n, pt.phi, brute))?;
            if pt.n >= b {
                ensure(pt.ratio < half, || format!("instance {}: ratio {} at n = {}", inst, pt.ratio, pt.n))?;
            }
        }
        burns.push(b.to_string());
    }
    Ok(format!(
        "N: (n−1)/n² for n ≤ 512; 10 random semigroups below 1/2 after burn-in ({}); attainment of all of [0, 1/2) not tested",
        burns.join(",")
    ))
}

fn c10_modules() -> Check {
    let s = example1(4);
    let desc = describe(&s, 4).map_err(|e| e.to_string())?;
    let ws = non_fg_module_witness(&desc, 4).map_err(|e| e.to_string())?;
    ensure(ws.len() == 5, || format!("{} witnesses", ws.len()))?;
    let betas: Vec<Rat> = EXAMPLE1.iter().map(|x| v(x).a().clone()).collect();
    for w in &ws {
        // independent re-check: the subring semigroup below β_l from all pair sums
        let pairs: Vec<Rat> = (0..=w.l).flat_map(|i| (i..=w.l).map(move |j| (i, j))).map(|(i, j)| &betas[i] + &betas[j]).collect();
        let sr: BTreeSet<Rat> = closure(&pairs, w.beta_l.a());
        let offending = w.module_gens.iter().find(|f| {
            let d = w.beta_l.a() - f.a();
            !(d < Rat::zero()) && sr.contains(&d)
        });
        ensure(offending.is_none(), || format!("n = {}: β_{} − {} is in S", w.n, w.l, offending.unwrap()))?;
        ensure(w.beta_l.a() == &betas[w.l], || format!("n = {}: witness is not β_{}", w.n, w.l))?;
    }
    Ok("witnesses β_1..β_5 for n = 0..4, each re-verified by pair-sum enumeration".into())
}

#[test]
fn acceptance() {
    let mut expanded: Expanded = Vec::new();
    let mut results: Vec<(u32, &str, Check)> = Vec::new();
    results.push((1, "doubling example", c1_doubling()));
    results.push((2, "Example 1 and the subring gaps", c2_example1(&mut expanded)));
    results.push((3, "rank-two composite example", c3_composite(&mut expanded)));
    results.push((4, "oracle equivalence", c4_oracle(&mut expanded)));
    results.push((5, "representation and membership", c5_representation()));
    results.push((6, "symmetry", c6_symmetry()));
    results.push((7, "quadratic transform", c7_birat()));
    results.push((8, "expansion uniqueness", c8_uniqueness(&expanded)));
    results.push((9, "density", c9_density()));
    results.push((10, "non-finite generation", c10_modules()));
    let mut failed = Vec::new();
    for (id, name, r) in &results {
        match r {
            Ok(d) => println!("criterion {:>2} PASS  {}: {}", id, name, d),
            Err(e) => {
                println!("criterion {:>2} FAIL  {}: {}", id, name, e);
                failed.push(*id);
            }
        }
    }
    assert_eq!(failed, EXPECTED_FAILURES.to_vec(), "unexpected set of failing criteria");
}
