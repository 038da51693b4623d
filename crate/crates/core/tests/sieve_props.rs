use numerorum::arith::{FactoredInt, SieveTables};
use proptest::prelude::*;
use std::sync::OnceLock;

fn sieve() -> &'static SieveTables {
    static SIEVE: OnceLock<SieveTables> = OnceLock::new();
    SIEVE.get_or_init(|| SieveTables::build(1_000_000).unwrap())
}

proptest! {
    #[test]
    fn factorization_reconstructs(n in 1usize..=1_000_000) {
        let s = sieve();
        let fact = s.factorize(n).unwrap();
        prop_assert_eq!(fact.reconstruct(), n as u64);
        prop_assert_eq!(&fact, &FactoredInt::by_trial_division(n as u64).unwrap());
        prop_assert!(fact.factors().windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert_eq!(fact.big_omega(), s.big_omega(n).unwrap());
        prop_assert_eq!(fact.small_omega(), s.small_omega(n).unwrap());
        prop_assert_eq!(fact.mobius(), s.mobius(n).unwrap());
    }

    #[test]
    fn multiplicativity_of_mobius(a in 1usize..1000, b in 1usize..1000) {
        let s = sieve();
        let gcd = (1..=a.min(b)).rev().find(|d| a % d == 0 && b % d == 0).unwrap();
        if gcd == 1 {
            prop_assert_eq!(
                s.mobius(a * b).unwrap(),
                s.mobius(a).unwrap() * s.mobius(b).unwrap()
            );
        }
        prop_assert_eq!(s.big_omega(a * b).unwrap(), s.big_omega(a).unwrap() + s.big_omega(b).unwrap());
    }
}
