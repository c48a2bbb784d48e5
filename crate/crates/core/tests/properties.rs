//! Property tests of the invariants against brute-force oracles.

mod common;

use common::*;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use valkey_core::genseq::{analyze, expand, synthesize, value_of, AnalyzeOptions};
use valkey_core::series::SeriesOracle;
use valkey_core::subring::a2_semigroup;
use valkey_core::tower::{BaseField, Tower};
use valkey_core::valuation::{describe_values, is_symmetric, NumericalSemigroup, SemigroupDescription};
use valkey_core::values::{combine, lattice_from, Card, ValueChain};

fn chain_strategy(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = RandomChain> {
    (any::<u64>(), len).prop_map(|(seed, n)| random_chain(&mut ChaCha8Rng::seed_from_u64(seed), n, 16, 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn representation_recomposes(c in chain_strategy(2..=5), num in -200i64..400) {
        let den = *c.dens.last().unwrap();
        let chain = ValueChain::new(&c.betas).unwrap();
        let k = c.betas.len() - 1;
        let gamma = valkey_core::values::Value::rank1(q(num, den));
        let rep = chain.representation(&gamma, k).unwrap();
        prop_assert_eq!(combine(&rep, &c.betas, gamma.mode()), gamma);
        for i in 1..=k {
            let n = chain.nbar(i).finite().unwrap();
            prop_assert!(rep[i] >= BigInt::zero() && rep[i] < BigInt::from(n));
        }
    }

    #[test]
    fn index_is_smallest_multiple_in_group(c in chain_strategy(2..=5)) {
        let chain = ValueChain::new(&c.betas).unwrap();
        for i in 1..c.betas.len() {
            let d_prev = c.dens[i - 1];
            let s = (1..=16i64)
                .find(|&s| (c.betas[i].a() * q(s * d_prev, 1)).is_integer())
                .unwrap();
            prop_assert_eq!(chain.nbar(i), Card::Finite(s as u64));
        }
    }

    #[test]
    fn membership_matches_enumeration(c in chain_strategy(2..=4), num in 0i64..600) {
        let den = *c.dens.last().unwrap();
        let chain = ValueChain::new(&c.betas).unwrap();
        let gens = scaled(&c.betas, den);
        let reach = reachable(&gens, num);
        let m = chain.membership(&valkey_core::values::Value::rank1(q(num, den)), c.betas.len() - 1).unwrap();
        prop_assert_eq!(m.member, reach[num as usize]);
    }

    #[test]
    fn symmetric_with_verified_frobenius(c in chain_strategy(2..=5)) {
        let desc = describe_values(&c.betas, true).unwrap();
        let (sym, m) = is_symmetric(&desc).unwrap();
        prop_assert!(sym);
        let den = *c.dens.last().unwrap();
        let gens = scaled(&desc.values(), den);
        let f = frobenius(&gens);
        prop_assert_eq!(m.a().clone(), q(f, den));
    }

    #[test]
    fn count_below_matches_enumeration(c in chain_strategy(2..=4), n in 1u64..200) {
        let desc = describe_values(&c.betas, true).unwrap();
        let t = NumericalSemigroup::new(&desc).unwrap();
        let reach = reachable(&t.gens.iter().map(|&g| g as i64).collect::<Vec<_>>(), n as i64);
        let brute = (1..n as usize).filter(|&x| reach[x]).count() as u64;
        prop_assert_eq!(t.count_below(n), brute);
    }

    #[test]
    fn valuation_is_additive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = example1(3);
        let f = random_poly(&mut rng, BaseField::Q, 4, 5);
        let g = random_poly(&mut rng, BaseField::Q, 4, 5);
        let (vf, vg) = (value_of(&f, &s).unwrap(), value_of(&g, &s).unwrap());
        prop_assert_eq!(value_of(&f.mul(&g), &s).unwrap(), &vf + &vg);
        let sum = f.add(&g);
        if !sum.is_zero() {
            prop_assert!(value_of(&sum, &s).unwrap() >= vf.clone().min(vg));
        }
    }

    #[test]
    fn expansion_reproduces_value(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = example1(3);
        let f = random_poly(&mut rng, BaseField::Q, 5, 7);
        let e = expand(&f, &s).unwrap();
        let lead = e.recompose_leading(&s);
        prop_assert_eq!(value_of(&lead, &s).unwrap(), e.rho.clone());
        prop_assert_eq!(expand(&lead, &s).unwrap().leading, e.leading);
    }

    #[test]
    fn analysis_agrees_with_series(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let o = SeriesOracle::sqrt1px(BaseField::Q).unwrap();
        let s = analyze(&o, AnalyzeOptions::depth(12)).unwrap();
        let f = random_poly(&mut rng, BaseField::Q, 6, 10);
        let direct = o.series_value(&f).unwrap();
        prop_assert_eq!(value_of(&f, &s).unwrap().a().to_integer().to_u64().unwrap(), direct);
    }

    #[test]
    fn subring_elements_have_even_parity(bound in 1i64..30) {
        let desc = SemigroupDescription::from_generators(
            &EXAMPLE1.iter().map(|x| v(x)).collect::<Vec<_>>(),
        ).unwrap();
        let sg = a2_semigroup(&desc, &v(&bound.to_string())).unwrap();
        // brute force: sums β_i + β_j generate the subring semigroup
        let mut pairs = Vec::new();
        for i in 0..EXAMPLE1.len() {
            for j in i..EXAMPLE1.len() {
                pairs.push(v(EXAMPLE1[i]).a() + v(EXAMPLE1[j]).a());
            }
        }
        let lim = q(bound, 1);
        let mut brute: Vec<_> = closure(&pairs, &lim).into_iter().filter(|x| *x != q(0, 1) && *x < lim).collect();
        brute.sort();
        let got: Vec<_> = sg.elements.iter().map(|e| e.a().clone()).collect();
        prop_assert_eq!(got, brute);
    }
}

#[test]
fn synthesis_accepts_random_admissible_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let c = random_chain(&mut rng, 4, 64, 2);
        let s = synthesize(&c.betas, &Tower::new(BaseField::Q), 2).unwrap();
        s.check_invariants().unwrap();
        let lat = lattice_from(&c.betas).unwrap();
        for b in s.betas() {
            assert!(lat.contains(b));
        }
    }
}
