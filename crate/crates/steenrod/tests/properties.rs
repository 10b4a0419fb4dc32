//! Randomized invariants: the rewriting engine's confluence and algebra
//! laws, unstable action axioms, duality properties of Wu classes, and
//! byte-stability of the report layer.

use proptest::prelude::*;

use steenrod::algebra::{
    RewriteStrategy, SqMonomial, SteenrodElement, adem_pair, normalize, normalize_monomial,
    normalize_with,
};
use steenrod::em::{self, EmPolynomial, unstable_act};
use steenrod::error::Error;
use steenrod::pd::{El, PDAlgebra};
use steenrod::report::{Check, Report};
use steenrod::corpus;

fn word(max_len: usize, max_exp: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1..=max_exp, 1..=max_len)
}

fn element() -> impl Strategy<Value = SteenrodElement> {
    prop::collection::vec(word(5, 9), 0..4).prop_map(|words| {
        let mut e = SteenrodElement::zero();
        for w in words {
            e.add_assign(&SteenrodElement::from_monomial(
                SqMonomial::new(w).expect("exponents are positive and in range"),
            ));
        }
        e
    })
}

fn load(key: &str) -> PDAlgebra {
    PDAlgebra::from_json(corpus::get(key).expect("bundled key")).expect("bundled algebras parse")
}

proptest! {
    #[test]
    fn normal_forms_are_admissible_and_degree_homogeneous(w in word(5, 9)) {
        let degree: u32 = w.iter().sum();
        let m = SqMonomial::new(w).unwrap();
        for t in normalize_monomial(&m).terms() {
            prop_assert!(t.admissible(), "{t} is not admissible");
            prop_assert_eq!(t.degree(), degree);
        }
    }

    #[test]
    fn rewriting_is_confluent(w in word(6, 8), seed in any::<u64>()) {
        let e = SteenrodElement::from_monomial(SqMonomial::new(w).unwrap());
        let left = normalize_with(&e, RewriteStrategy::Leftmost);
        let random = normalize_with(&e, RewriteStrategy::Seeded(seed));
        prop_assert_eq!(left, random);
    }

    #[test]
    fn normalize_is_idempotent(e in element()) {
        let once = normalize(&e);
        prop_assert_eq!(normalize(&once), once.clone());
    }

    #[test]
    fn normalize_is_additive(a in element(), b in element()) {
        let sum = a.clone().sum(&b);
        prop_assert_eq!(normalize(&sum), normalize(&a).sum(&normalize(&b)));
    }

    #[test]
    fn pair_expansions_are_admissible_exactly_in_range(a in 1u32..14, b in 1u32..14) {
        if a < 2 * b {
            let e = adem_pair(a, b).unwrap();
            for t in e.terms() {
                prop_assert!(t.admissible());
                prop_assert_eq!(t.degree(), a + b);
            }
            let w = SteenrodElement::from_monomial(SqMonomial::new(vec![a, b]).unwrap());
            prop_assert_eq!(normalize(&w), e);
        } else {
            let out_of_range = matches!(adem_pair(a, b), Err(Error::OutOfAdemRange { .. }));
            prop_assert!(out_of_range, "adem_pair({}, {}) should be out of range", a, b);
        }
    }

    #[test]
    fn unstable_action_obeys_the_kill_square_and_degree_rules(
        w in word(3, 9),
        n in 2u32..10,
    ) {
        let mut x = EmPolynomial::generator(SqMonomial::unit());
        let mut deg = n;
        for &i in w.iter().rev() {
            let before = x.clone();
            x = unstable_act(i, &x, n);
            if i > deg {
                prop_assert!(x.is_zero(), "Sq{i} above degree {deg} must vanish");
            }
            if i == deg {
                prop_assert_eq!(x.clone(), before.square());
            }
            for t in x.terms() {
                prop_assert_eq!(t.degree(n), deg + i);
            }
            if x.is_zero() {
                break;
            }
            deg += i;
        }
    }

    #[test]
    fn em_rows_are_homogeneous(n in 4u32..16, j in 0u32..=9) {
        for m in em::em_basis(n, n + j).unwrap() {
            prop_assert_eq!(m.degree(n), n + j);
        }
    }

    #[test]
    fn reports_serialize_identically_and_ignore_timestamps(
        id in "[a-z]{1,8}",
        pass in any::<bool>(),
        inputs in prop::collection::vec(prop::collection::vec(any::<u8>(), 0..24), 0..4),
    ) {
        let parts: Vec<&[u8]> = inputs.iter().map(|v| v.as_slice()).collect();
        let mk = || Report::new(&parts, vec![Check::new(id.clone(), "a = b", pass, "detail")]);
        prop_assert_eq!(mk().to_json(), mk().to_json());
        prop_assert_eq!(mk().with_timestamp().input_digest, mk().input_digest);
    }

    #[test]
    fn digests_separate_input_framings(
        a in prop::collection::vec(any::<u8>(), 1..16),
        b in prop::collection::vec(any::<u8>(), 1..16),
    ) {
        let joined: Vec<u8> = a.iter().chain(&b).copied().collect();
        let split = Report::new(&[a.as_slice(), b.as_slice()], Vec::new());
        let fused = Report::new(&[joined.as_slice()], Vec::new());
        prop_assert_ne!(split.input_digest, fused.input_digest);
    }
}

const ALL_KEYS: [&str; 22] = [
    "point", "s2", "s4", "s6", "s10", "s18", "rp1", "rp2", "rp3", "rp4", "rp5", "rp6", "rp7",
    "rp8", "rp9", "rp10", "cp2", "cp3", "cp4", "cp5", "hp2", "rp3x7",
];

// Small factors keep the randomized product constructions fast.
const SMALL_KEYS: [&str; 8] = ["point", "s2", "s4", "rp1", "rp2", "rp3", "rp4", "cp2"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wu_classes_satisfy_their_defining_duality(idx in 0usize..ALL_KEYS.len(), k in 0u32..12) {
        let a = load(ALL_KEYS[idx]);
        prop_assume!(k <= a.top);
        let wu = a.wu_classes().unwrap();
        let d = a.top - k;
        for expo in a.basis_monomials(d) {
            let mut y = El::new();
            y.insert(expo.clone());
            let lhs = a.kronecker(&a.mul(&wu.v[k as usize], &y));
            let rhs = a.kronecker(&a.sq(k, &y).unwrap());
            prop_assert_eq!(lhs, rhs, "degree {} class in {}", d, ALL_KEYS[idx]);
        }
    }

    #[test]
    fn degenerate_pairings_are_rejected(idx in 0usize..ALL_KEYS.len()) {
        let broken = load(ALL_KEYS[idx]).with_fundamental_zeroed();
        let pairing = broken
            .validate()
            .into_iter()
            .find(|c| c.id == "pd.pairing_nondegenerate")
            .expect("the pairing check always runs");
        prop_assert!(!pairing.pass);
        prop_assert!(broken.wu_classes().is_err());
    }

    #[test]
    fn wu_is_multiplicative_on_random_small_products(i in 0usize..SMALL_KEYS.len(), j in 0usize..SMALL_KEYS.len()) {
        let a = load(SMALL_KEYS[i]);
        let b = load(SMALL_KEYS[j]);
        let p = a.product(&b).unwrap();
        let wa = a.wu_classes().unwrap();
        let wb = b.wu_classes().unwrap();
        let wp = p.wu_classes().unwrap();
        for k in 0..=p.top as usize {
            let mut want = El::new();
            for r in 0..=k.min(a.top as usize) {
                let s = k - r;
                if s > b.top as usize {
                    continue;
                }
                let cross = p.reduce_el(&a.tensor(&b, &wa.v[r], &wb.v[s]));
                want = steenrod::pd::add(&want, &cross);
            }
            prop_assert_eq!(&wp.v[k], &want, "degree {} of {} x {}", k, SMALL_KEYS[i], SMALL_KEYS[j]);
        }
    }
}
