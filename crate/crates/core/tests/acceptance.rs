//! Acceptance suite: one test per acceptance criterion, each printing a
//! PASS/FAIL line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Criterion 6 appears twice. The literal variant pins the published
//! decimal and binary renderings of the density constant; those published
//! renderings are internally inconsistent with the sequence that defines
//! the constant (the printed expansion is the expansion of four times the
//! constant, and the printed decimal contradicts the printed count table),
//! so the literal test fails by design and documents the erratum. The
//! adjusted variant pins the corrected relationship and passes.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use penney_core::correlation::{
    admissible_autocorrelations_mod, count_autocorr_suffix_class,
    count_autocorr_suffix_class_with, count_correlation_pairs, Correlation,
};
use penney_core::flipped::{check_conjecture3, flipped_best_response, flipped_optimal_strings, q_odds};
use penney_core::markov::{build_chain, first_occurrence_prob};
use penney_core::odds::win_prob;
use penney_core::pattern::{Coin, Fragment, PatternString};
use penney_core::rng::SplitMix64;
use penney_core::sequence::{alpha, c, dn_deviation, CnTable};
use penney_core::stats::{
    p_opt_opt, p_opt_rand, p_rand_opt, random_pairs, simulate, PlayerOneChoice, ResponderVariant,
};
use penney_core::strategy::{
    best_response, optimal_strings_bruteforce, optimal_strings_csirik,
};
use penney_core::ExactProb;

fn p(s: &str) -> PatternString {
    PatternString::parse(s).unwrap()
}

fn frac(num: i64, den: i64) -> ExactProb {
    ExactProb::new(num, den)
}

fn pass(criterion: &str, detail: &str) {
    println!("criterion {criterion}: PASS — {detail}");
}

#[test]
fn criterion_01_pairwise_table_length_3() {
    let start = std::time::Instant::now();
    // row = B, column = A, entry = P(B appears before A)
    let columns = ["HHH", "HHT", "HTH", "HTT", "THH", "THT", "TTH", "TTT"];
    type TableRow = (&'static str, [Option<(i64, i64)>; 8]);
    let rows: [TableRow; 8] = [
        ("HHH", [None, Some((1, 2)), Some((2, 5)), Some((2, 5)), Some((1, 8)), Some((5, 12)), Some((3, 10)), Some((1, 2))]),
        ("HHT", [Some((1, 2)), None, Some((2, 3)), Some((2, 3)), Some((1, 4)), Some((5, 8)), Some((1, 2)), Some((7, 10))]),
        ("HTH", [Some((3, 5)), Some((1, 3)), None, Some((1, 2)), Some((1, 2)), Some((1, 2)), Some((3, 8)), Some((7, 12))]),
        ("HTT", [Some((3, 5)), Some((1, 3)), Some((1, 2)), None, Some((1, 2)), Some((1, 2)), Some((3, 4)), Some((7, 8))]),
        ("THH", [Some((7, 8)), Some((3, 4)), Some((1, 2)), Some((1, 2)), None, Some((1, 2)), Some((1, 3)), Some((3, 5))]),
        ("THT", [Some((7, 12)), Some((3, 8)), Some((1, 2)), Some((1, 2)), Some((1, 2)), None, Some((1, 3)), Some((3, 5))]),
        ("TTH", [Some((7, 10)), Some((1, 2)), Some((5, 8)), Some((1, 4)), Some((2, 3)), Some((2, 3)), None, Some((1, 2))]),
        ("TTT", [Some((1, 2)), Some((3, 10)), Some((5, 12)), Some((1, 8)), Some((2, 5)), Some((2, 5)), Some((1, 2)), None]),
    ];
    let mut checked = 0;
    for (b, entries) in rows {
        for (a, expected) in columns.iter().zip(entries) {
            let Some((num, den)) = expected else { continue };
            assert_eq!(win_prob(&p(b), &p(a)).unwrap(), frac(num, den), "P({b} before {a})");
            checked += 1;
        }
    }
    assert_eq!(checked, 56);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    pass("1", &format!("all 56 published pairwise probabilities match exactly ({elapsed:?})"));
}

#[test]
fn criterion_02_oracle_equivalence() {
    for n in 3..=8usize {
        let strings: Vec<PatternString> = PatternString::enumerate(n).unwrap().collect();
        let mismatches: usize = strings
            .par_iter()
            .map(|a| {
                strings
                    .iter()
                    .filter(|b| {
                        **b != *a && {
                            let chain = build_chain(a, b).unwrap();
                            first_occurrence_prob(&chain).unwrap() != win_prob(a, b).unwrap()
                        }
                    })
                    .count()
            })
            .sum();
        assert_eq!(mismatches, 0, "oracle disagreement at n = {n}");
    }
    pass("2", "Conway formula equals the absorbing-chain rational on every ordered pair, n = 3..=8");
}

#[test]
fn criterion_03_best_response_tables() {
    let table3: [(&str, &str, (i64, i64)); 8] = [
        ("HHH", "THH", (7, 8)),
        ("HHT", "THH", (3, 4)),
        ("HTH", "HHT", (2, 3)),
        ("HTT", "HHT", (2, 3)),
        ("THH", "TTH", (2, 3)),
        ("THT", "TTH", (2, 3)),
        ("TTH", "HTT", (3, 4)),
        ("TTT", "HTT", (7, 8)),
    ];
    let table4: [(&str, &str, (i64, i64)); 16] = [
        ("HHHH", "THHH", (15, 16)),
        ("HHHT", "THHH", (7, 8)),
        ("HHTH", "HHHT", (2, 3)),
        ("HHTT", "HHHT", (2, 3)),
        ("HTHH", "THTH", (9, 14)),
        ("HTHT", "HHTH", (5, 7)),
        ("HTTH", "HHTT", (2, 3)),
        ("HTTT", "HHTT", (2, 3)),
        ("THHH", "TTHH", (2, 3)),
        ("THHT", "TTHH", (2, 3)),
        ("THTH", "TTHT", (5, 7)),
        ("THTT", "HTHT", (9, 14)),
        ("TTHH", "TTTH", (2, 3)),
        ("TTHT", "TTTH", (2, 3)),
        ("TTTH", "HTTT", (7, 8)),
        ("TTTT", "HTTT", (15, 16)),
    ];
    for (query, responder, (num, den)) in table3.iter().chain(&table4) {
        let response = best_response(&p(query));
        assert_eq!(response.responder, p(responder), "response to {query}");
        assert_eq!(response.prob, frac(*num, *den), "probability against {query}");
    }
    pass("3", "all 24 published best-response rows for lengths 3 and 4 match exactly");
}

#[test]
fn criterion_04_optimal_counts() {
    let expected: [(u64, u64); 13] = [
        (3, 4),
        (4, 2),
        (5, 2),
        (6, 2),
        (7, 6),
        (8, 10),
        (9, 22),
        (10, 42),
        (11, 86),
        (12, 166),
        (13, 338),
        (14, 666),
        (15, 1342),
    ];
    let start = std::time::Instant::now();
    for (n, count) in expected {
        if n <= 12 {
            let brute = optimal_strings_bruteforce(n as usize).unwrap();
            assert_eq!(brute.strings.len() as u64, count, "brute force at n = {n}");
        }
        if n >= 5 {
            let construction = optimal_strings_csirik(n as usize).unwrap();
            assert_eq!(construction.strings.len() as u64, count, "construction at n = {n}");
        }
        assert_eq!(c(n).unwrap().value, BigUint::from(count), "recurrence at n = {n}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 1 min");
    pass("4", &format!(
        "c_3..c_15 = 4,2,2,2,6,10,22,42,86,166,338,666,1342 by argmin (n<=12), construction (n>=5) and recurrence ({elapsed:?})"
    ));
}

#[test]
fn criterion_05_c25_binary() {
    let record = c(25).unwrap();
    assert_eq!(record.value, BigUint::from(1_363_510u32));
    assert_eq!(record.value.to_str_radix(2), "101001100111000110110");
    pass("5", "c_25 = 1363510 = 101001100111000110110_2 via the recurrence");
}

const PUBLISHED_EXPANSION_57: &str =
    "001010011001100111010000101011000001011010010011010100101";

#[test]
fn criterion_06_literal_published_rendering() {
    // Implemented exactly as published. The three published claims are
    // mutually consistent with each other but off by a factor of four
    // (two binary places) from the constant the count sequence defines;
    // see criterion_06_erratum_adjusted_rendering for the corrected
    // relationship, and criteria 4, 5 and 7 for the sequence data that
    // pins the true value. This test is expected to fail and is kept
    // as the faithful record of the published rendering.
    let start = std::time::Instant::now();
    let approx = alpha(64).unwrap();
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");

    let (lo, hi) = approx.interval();
    let claimed = BigRational::new(40602.into(), 1_000_000.into());
    let contains = lo <= claimed && claimed <= hi;
    let decimal6 = approx.certified_decimal(6).unwrap();
    let digits57 = approx.binary_digits(57).unwrap();
    let positions: Vec<usize> =
        approx.one_bit_positions(57).unwrap().into_iter().take(10).collect();

    let literal_holds = contains
        && decimal6 == "0.040602"
        && digits57 == PUBLISHED_EXPANSION_57
        && positions == [3, 5, 8, 9, 12, 13, 16, 17, 18, 20];
    if literal_holds {
        pass("6", "published decimal, 57-digit expansion and 1-bit positions reproduced literally");
    } else {
        println!(
            "criterion 6: FAIL — computed constant {} (1-bits at {:?}) cannot reproduce the published rendering 0.040602 / 0.{}… / 1-bits 3,5,8,…; the published expansion equals the true digits shifted two places (see the erratum-adjusted test)",
            decimal6, positions, &PUBLISHED_EXPANSION_57[..20],
        );
    }
    assert!(
        literal_holds,
        "published rendering of the constant is internally inconsistent with its own count \
         sequence: computed value {decimal6} (interval contains 0.040602: {contains}), \
         digits {digits57}, first 1-bits {positions:?}"
    );
}

#[test]
fn criterion_06_erratum_adjusted_rendering() {
    let start = std::time::Instant::now();
    let approx = alpha(64).unwrap();

    // decimal: the constant rounds to 0.040626 and truncates to
    // 0.04062…, agreeing with the five-digit rendering used elsewhere in
    // the published text
    assert_eq!(approx.certified_decimal(6).unwrap(), "0.040626");
    assert!(approx.certified_decimal(10).unwrap().starts_with("0.04062"));

    // binary: the published 57-digit string is the true expansion with
    // its two leading zero digits dropped (i.e. the expansion of 4x)
    let digits59 = approx.binary_digits(59).unwrap();
    assert_eq!(&digits59[..2], "00");
    assert_eq!(&digits59[2..], PUBLISHED_EXPANSION_57);

    // positions: the published list 3,5,8,9,12,13,16,17,18,20 is the true
    // list shifted down by exactly two
    let ones: Vec<usize> = approx.one_bit_positions(59).unwrap().into_iter().take(10).collect();
    assert_eq!(ones, [5, 7, 10, 11, 14, 15, 18, 19, 20, 22]);
    let published = [3usize, 5, 8, 9, 12, 13, 16, 17, 18, 20];
    let shifted: Vec<usize> = published.iter().map(|p| p + 2).collect();
    assert_eq!(ones, shifted);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    pass(
        "6 (erratum-adjusted)",
        "constant = 0.040626…; published digit string and 1-bit positions match after the two-place shift",
    );
}

#[test]
fn criterion_07_growth_and_convergence() {
    // growth bounds, scaled to avoid negative powers at n = 5
    for n in 5..=200u64 {
        let value = c(n).unwrap().value;
        let power = BigUint::one() << usize::try_from(n).unwrap();
        assert!(&value << 6u32 >= power, "lower bound at n = {n}");
        assert!(value << 4u32 <= power, "upper bound at n = {n}");
    }
    // normalized residuals against the limit, frozen bound 0.2
    // (observed maximum 0.1001 over n = 8..=60)
    let rows = dn_deviation(CnTable::global(), 60).unwrap();
    for row in rows.iter().filter(|r| r.n >= 8) {
        assert!(
            row.residual.is_finite() && row.residual <= 0.2,
            "residual {} at n = {}",
            row.residual,
            row.n
        );
    }
    pass("7", "2^(n-6) <= c_n <= 2^(n-4) for n = 5..=200; normalized residuals <= 0.2 for n = 8..=60");
}

#[test]
fn criterion_08_counting_identities() {
    // pair counts vs autocorrelation suffix classes, all k, m <= 7
    for m in 3..=7usize {
        for k in 0..(1u64 << m) {
            assert_eq!(
                count_correlation_pairs(m, k, None, None).unwrap(),
                count_autocorr_suffix_class(2 * m, k).unwrap(),
                "m = {m}, k = {k}"
            );
        }
    }
    // seeded random prefix/suffix constraints
    let mut rng = SplitMix64::new(0xBEEF);
    for m in 4..=7usize {
        for _ in 0..6 {
            let xl = 1 + rng.next_below((m - 1) as u64) as usize;
            let yl = 1 + rng.next_below((m - 1) as u64) as usize;
            let x = Fragment::new(xl, rng.next_below(1 << xl));
            let y = Fragment::new(yl, rng.next_below(1 << yl));
            let k = rng.next_below(1 << m);
            assert_eq!(
                count_correlation_pairs(m, k, Some(&x), Some(&y)).unwrap(),
                count_autocorr_suffix_class_with(2 * m, k, Some(&x), Some(&y)).unwrap(),
                "m = {m}, k = {k}, x = {x}, y = {y}"
            );
        }
    }
    // admissible autocorrelations with residue 1 stay within the forms
    for m in 2..=8usize {
        assert_eq!(
            admissible_autocorrelations_mod(2 * m, m).unwrap(),
            vec![Correlation::bookend(2 * m)],
            "length 2m, m = {m}"
        );
        let odd = [(1u64 << (2 * m)) | 1, (1u64 << (2 * m)) | (1 << m) | 1];
        for value in admissible_autocorrelations_mod(2 * m + 1, m).unwrap() {
            assert!(odd.contains(&value.value()), "length 2m+1, m = {m}: {value:?}");
        }
        let even = [(1u64 << (2 * m + 1)) | 1, (1u64 << (2 * m + 1)) | (1 << m) | 1];
        for value in admissible_autocorrelations_mod(2 * m + 2, m).unwrap() {
            assert!(even.contains(&value.value()), "length 2m+2, m = {m}: {value:?}");
        }
    }
    pass("8", "pair-count/suffix-class equality (m <= 7, all k, plus constrained samples) and admissibility containment (m = 2..=8)");
}

#[test]
fn criterion_09_flipped_optimum_and_ties() {
    for n in 3..=10usize {
        let set = flipped_optimal_strings(n).unwrap();
        let expected = vec![
            PatternString::repeated(Coin::Tails, n).unwrap(),
            PatternString::repeated(Coin::Heads, n).unwrap(),
        ];
        assert_eq!(set.strings, expected, "optimal flipped set at n = {n}");
        assert_eq!(set.player1_win_prob, ExactProb::half(), "value at n = {n}");

        // exact equality sets for the uniform strings
        let heads = expected[1];
        let tails = expected[0];
        for (uniform, near_miss) in [
            (heads, heads.prefix(n - 1).unwrap().push(Coin::Tails).to_pattern().unwrap()),
            (tails, tails.prefix(n - 1).unwrap().push(Coin::Heads).to_pattern().unwrap()),
        ] {
            let ties: Vec<PatternString> = PatternString::enumerate(n)
                .unwrap()
                .filter(|b| {
                    *b != uniform && {
                        let (fore, against) = q_odds(&uniform, b).unwrap();
                        fore == against
                    }
                })
                .collect();
            let mut expected_ties = vec![uniform.complement(), near_miss];
            expected_ties.sort();
            assert_eq!(ties, expected_ties, "equality set of {uniform}");
        }
        // every mixed string loses the flipped game to some uniform string
        for a in PatternString::enumerate(n).unwrap() {
            if a == heads || a == tails {
                continue;
            }
            let vs_heads = q_odds(&a, &heads).unwrap();
            let vs_tails = q_odds(&a, &tails).unwrap();
            assert!(
                vs_heads.0 < vs_heads.1 || vs_tails.0 < vs_tails.1,
                "{a} should lose to a uniform string"
            );
        }
    }
    pass("9", "flipped optimum is {all-H, all-T} at exactly 1/2 with the exact tie sets, n = 3..=10");
}

#[test]
fn criterion_10_flipped_response_table_and_conjecture() {
    // the 16 published rows for length 5 (queries starting with H),
    // with the self-response excluded on the all-heads row
    let rows: [(&str, &[&str], (i64, i64)); 16] = [
        ("HHHHH", &["HHHHT", "TTTTT"], (1, 2)),
        ("HHHHT", &["TTTTT"], (31, 46)),
        ("HHHTH", &["HHTHH", "HHTHT"], (2, 3)),
        ("HHHTT", &["TTTTT"], (31, 44)),
        ("HHTHH", &["HHHHH"], (7, 11)),
        ("HHTHT", &["HTHTH"], (10, 13)),
        ("HHTTH", &["HTTHT"], (9, 13)),
        ("HHTTT", &["TTTTT"], (31, 40)),
        ("HTHHH", &["HHHHH"], (3, 4)),
        ("HTHHT", &["THHTT"], (17, 26)),
        ("HTHTH", &["HHHHH"], (3, 5)),
        ("HTHTT", &["THTTH", "THTTT"], (17, 24)),
        ("HTTHH", &["HHHHH"], (15, 22)),
        ("HTTHT", &["TTTTT"], (31, 48)),
        ("HTTTH", &["HHHHH"], (15, 23)),
        ("HTTTT", &["TTTTT"], (31, 32)),
    ];
    for (query, maximizers, (num, den)) in rows {
        let response = flipped_best_response(&p(query)).unwrap();
        let mut expected: Vec<PatternString> = maximizers.iter().map(|s| p(s)).collect();
        expected.sort();
        assert_eq!(response.maximizers, expected, "maximizers for {query}");
        assert_eq!(response.prob, frac(num, den), "probability for {query}");
    }
    // the four-candidate conjecture holds through n = 10
    for n in 3..=10usize {
        let report = check_conjecture3(n).unwrap();
        assert!(report.holds, "conjecture should hold at n = {n}");
    }
    // new territory: n = 11 and 12 produce structured reports either way
    let mut outcomes = Vec::new();
    for n in [11usize, 12] {
        let report = check_conjecture3(n).unwrap();
        outcomes.push(format!(
            "n={n}: {} ({} queries, {} counterexamples)",
            if report.holds { "holds" } else { "fails" },
            report.queries,
            report.counterexamples.len()
        ));
        let rendered = serde_json::to_string(&report).unwrap();
        assert!(rendered.contains("\"holds\""));
    }
    pass("10", &format!(
        "all 16 published flipped-response rows match (self-response excluded); conjecture holds for n <= 10; {}",
        outcomes.join("; ")
    ));
}

#[test]
fn criterion_11_strategy_mix_tables() {
    // closed form for mutual optimal play, n = 5..=24
    for n in 5..=24usize {
        let numerator = (BigUint::one() << (n - 1)) + 1u32;
        let denominator = (BigUint::one() << (n - 2)) * 3u32 + 2u32;
        let expected = ExactProb::new(
            num_bigint::BigInt::from(numerator),
            num_bigint::BigInt::from(denominator),
        );
        assert_eq!(p_opt_opt(n).unwrap(), expected, "closed form at n = {n}");
    }

    // published random-vs-optimal column, 1e-6 per row
    let table5: [(usize, f64); 12] = [
        (5, 0.71868171),
        (6, 0.69865016),
        (7, 0.68739336),
        (8, 0.67913922),
        (9, 0.67411092),
        (10, 0.67094023),
        (11, 0.66910562),
        (12, 0.66803837),
        (13, 0.66743344),
        (14, 0.66708843),
        (15, 0.66689731),
        (16, 0.66679196),
    ];
    let start = std::time::Instant::now();
    for (n, expected) in table5 {
        let got = p_rand_opt(n).unwrap().to_f64();
        assert!((got - expected).abs() < 1e-6, "p_rand_opt({n}) = {got}, table {expected}");
    }
    let table5_elapsed = start.elapsed();
    assert!(table5_elapsed.as_secs_f64() < 120.0, "table-5 column took {table5_elapsed:?}");

    // published optimal-vs-random column under the identified definition
    // (Player I best against a random responder; collision counts 1/2);
    // tightened to 1e-6 (rows agree to all eight published decimals)
    let table6: [(usize, f64); 10] = [
        (5, 0.46497915),
        (6, 0.47844501),
        (7, 0.48728813),
        (8, 0.49267595),
        (9, 0.49585625),
        (10, 0.49768613),
        (11, 0.49872187),
        (12, 0.49930014),
        (13, 0.49961965),
        (14, 0.49979460),
    ];
    for (n, expected) in table6 {
        let got = p_opt_rand(n, PlayerOneChoice::BestAgainstRandom, ResponderVariant::IncludeSameAsHalf)
            .unwrap()
            .overall
            .to_f64();
        assert!((got - expected).abs() < 1e-6, "p_opt_rand({n}) = {got}, table {expected}");
    }
    pass("11", &format!(
        "closed form exact for n = 5..=24; both published columns reproduced within 1e-6 (in fact to all 8 decimals), table-5 sweep {table5_elapsed:?}"
    ));
}

#[test]
fn criterion_12_simulation_smoke() {
    let pairs = random_pairs(6, 20, 0xA11CE).unwrap();
    let mut max_abs_z: f64 = 0.0;
    for (a, b) in pairs {
        let run = simulate(&a, &b, 100_000, 0xA11CE).unwrap();
        let rerun = simulate(&a, &b, 100_000, 0xA11CE).unwrap();
        assert_eq!(run.wins_a, rerun.wins_a, "{a} vs {b} must be reproducible");
        assert!(run.z_score.abs() <= 4.0, "{a} vs {b}: z = {}", run.z_score);
        max_abs_z = max_abs_z.max(run.z_score.abs());
    }
    pass("12", &format!(
        "20 seeded length-6 pairs at 1e5 trials: bit-identical reruns, max |z| = {max_abs_z:.3}"
    ));
}
