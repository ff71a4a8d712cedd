use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cqrac::analysis::{amplify, g, g_entropy, majority_success, TieRule};
use cqrac::encoder::data::{bits_to_string, parse_bits, parse_hex};
use cqrac::encoder::{CouplingScheme, ParityConfiguration};
use cqrac::pauli::{commutes, GeneralPauli, Letter, PauliWord, Phase};
use cqrac::retrieval::retrieve_parity;
use cqrac::stabilizer::dense::StateVector;
use cqrac::stabilizer::{CircuitParams, StabilizerState};

fn word(n: usize) -> impl Strategy<Value = PauliWord> {
    (0..3u64.pow(n as u32)).prop_map(move |i| PauliWord::from_index(n, i).unwrap())
}

fn general(n: usize) -> impl Strategy<Value = GeneralPauli> {
    let mask = (1u64 << n) - 1;
    (any::<u64>(), any::<u64>(), 0..4u32).prop_map(move |(x, z, k)| {
        GeneralPauli::from_masks(n, x & mask, z & mask, Phase::from_exponent(k)).unwrap()
    })
}

fn params(n: usize) -> impl Strategy<Value = CircuitParams> {
    (0..CircuitParams::count(n)).prop_map(move |id| CircuitParams::from_id(n, id).unwrap())
}

fn scheme(n: usize) -> impl Strategy<Value = CouplingScheme> {
    (any::<bool>(), any::<u64>()).prop_map(move |(shuffle, seed)| {
        if shuffle {
            CouplingScheme::shuffled(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
        } else {
            CouplingScheme::alphabetical(n).unwrap()
        }
    })
}

proptest! {
    #[test]
    fn word_index_and_text_round_trip(w in (1usize..=12).prop_flat_map(word)) {
        prop_assert_eq!(PauliWord::from_index(w.len(), w.index()).unwrap(), w);
        let text = w.to_string();
        prop_assert_eq!(text.parse::<PauliWord>().unwrap(), w);
    }

    #[test]
    fn full_weight_commutation_counts_differences(
        (a, b) in (1usize..=10).prop_flat_map(|n| (word(n), word(n)))
    ) {
        let differing = (0..a.len()).filter(|&q| a.letter(q) != b.letter(q)).count();
        prop_assert_eq!(commutes(&a, &b).unwrap(), differing % 2 == 0);
        prop_assert_eq!(commutes(&a, &b).unwrap(), commutes(&b, &a).unwrap());
    }

    #[test]
    fn products_commute_up_to_sign((a, b) in (1usize..=8).prop_flat_map(|n| (general(n), general(n)))) {
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        let sign = if commutes(&a, &b).unwrap() { Phase::ONE } else { Phase::MINUS_ONE };
        prop_assert_eq!(ab, ba.with_phase(ba.phase() * sign));
    }

    #[test]
    fn product_is_associative(
        (a, b, c) in (1usize..=6).prop_flat_map(|n| (general(n), general(n), general(n)))
    ) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn hermitian_elements_square_to_identity(a in (1usize..=8).prop_flat_map(general)) {
        let h = if a.phase().is_real() { a } else { a.with_phase(Phase::ONE) };
        prop_assert!(h.multiply(&h).unwrap().is_identity());
    }

    #[test]
    fn letters_map_to_symplectic_bits(l in prop::sample::select(Letter::ALL.to_vec())) {
        let (x, z) = l.bits();
        prop_assert!(x || z);
        prop_assert_eq!(Letter::from_digit(l.digit()), Some(l));
        prop_assert_eq!(l.cycle().cycle_back(), l);
    }

    #[test]
    fn coupling_round_trip(
        (s, data, choice, wildcard) in prop_oneof![Just(2usize), Just(4)].prop_flat_map(|n| {
            let m = (3usize.pow(n as u32) - 1) / 2;
            (
                scheme(n),
                prop::collection::vec(any::<bool>(), m),
                prop::collection::vec(any::<bool>(), m),
                prop_oneof![Just(1i8), Just(-1)],
            )
        })
    ) {
        let config = ParityConfiguration::encode(&s, &data, &choice, wildcard).unwrap();
        prop_assert_eq!(config.decode(&s), data);
        prop_assert_eq!(config.choice(&s), choice);
        prop_assert_eq!(config.sign(config.wildcard()), wildcard);
        let parsed = ParityConfiguration::parse_sign_string(&s, &config.to_sign_string()).unwrap();
        prop_assert_eq!(parsed, config);
    }

    #[test]
    fn params_text_and_id_round_trip(p in (1usize..=6).prop_flat_map(params)) {
        prop_assert_eq!(p.to_string().parse::<CircuitParams>().unwrap(), p.clone());
        prop_assert_eq!(CircuitParams::from_id(p.qubits(), p.id()).unwrap(), p);
    }

    #[test]
    fn bits_and_hex_round_trip(bits in prop::collection::vec(any::<bool>(), 1..200)) {
        prop_assert_eq!(parse_bits(&bits_to_string(&bits)).unwrap(), bits.clone());
        let padded: Vec<bool> = bits.iter().copied().chain(std::iter::repeat(false)).take(bits.len().div_ceil(4) * 4).collect();
        let hex: String = padded
            .chunks(4)
            .map(|c| {
                let d = c.iter().fold(0u32, |acc, &b| acc * 2 + b as u32);
                char::from_digit(d, 16).unwrap()
            })
            .collect();
        prop_assert_eq!(parse_hex(&hex).unwrap(), padded);
    }

    #[test]
    fn tolerance_series_is_binary_entropy(e in 0.0f64..0.49) {
        prop_assert!((g(e).unwrap() - g_entropy(e).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn majority_success_grows_with_match_rate(k in 1u64..60, p in 0.0f64..0.99, dp in 0.0f64..0.01) {
        for tie in [TieRule::Failure, TieRule::HalfCredit] {
            prop_assert!(majority_success(k, p, tie) <= majority_success(k, p + dp, tie) + 1e-12);
        }
    }

    #[test]
    fn amplification_helps_above_half(f in 0.51f64..0.99, r in 0u64..200) {
        let r = 2 * r + 1;
        prop_assert!(amplify(f, r + 2) >= amplify(f, r) - 1e-12);
        prop_assert!(amplify(f, r) >= f - 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tableau_matches_statevector_at_six_qubits(p in params(6), words in prop::collection::vec(word(6), 40)) {
        let state = StabilizerState::build(&p).unwrap();
        let dense = StateVector::from_params(&p).unwrap();
        for w in &words {
            let v = state.expectation(w).unwrap().value() as f64;
            prop_assert!((dense.expectation(w).unwrap() - v).abs() < 1e-9, "{} on {}", w, p);
        }
    }

    #[test]
    fn measurement_collapses_onto_outcome(p in params(4), w in word(4), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = StabilizerState::build(&p).unwrap();
        let before = state.expectation(&w).unwrap().value();
        let outcome = state.measure(&w, &mut rng).unwrap();
        if before != 0 {
            prop_assert_eq!(outcome, before);
        }
        prop_assert_eq!(state.expectation(&w).unwrap().value(), outcome);
        prop_assert_eq!(state.measure(&w, &mut rng).unwrap(), outcome);
    }

    #[test]
    fn definite_selection_is_never_filtered(
        ps in prop::collection::vec(params(2), 1..8),
        o in 0u64..9,
        steps in 1u32..12,
        seed in any::<u64>(),
    ) {
        let states: Vec<StabilizerState> = ps.iter().map(|p| StabilizerState::build(p).unwrap()).collect();
        let w = PauliWord::from_index(2, o).unwrap();
        let definite = states.iter().filter(|s| s.expectation(&w).unwrap().is_deterministic()).count();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match retrieve_parity(&states, &w, steps, &mut rng, None) {
            Ok(out) => prop_assert_eq!(out.survivors - out.unfiltered_unbiased, definite),
            Err(cqrac::Error::Unresolved(_)) => prop_assert_eq!(definite, 0),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
}
