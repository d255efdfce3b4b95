mod support;

use moodseries::scoring::{score, unit_normalize};
use moodseries::textnorm::porter_stem;
use moodseries::{Lexicon, TermSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::oracles::intersection_counts;

fn random_word<R: Rng>(rng: &mut R) -> String {
    let len = rng.random_range(3..9);
    (0..len).map(|_| char::from(b'a' + rng.random_range(0..6u8))).collect()
}

#[test]
fn thousand_random_instances_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c04e);
    for case in 0..1000 {
        // small alphabet so lexicon terms, overlaps and message terms collide often
        let raw: Vec<Vec<String>> = (0..6)
            .map(|_| (0..rng.random_range(1..8)).map(|_| random_word(&mut rng)).collect())
            .collect();
        let refs: Vec<Vec<&str>> = raw.iter().map(|d| d.iter().map(String::as_str).collect()).collect();
        let lexicon = Lexicon::from_raw_terms(
            "random",
            [
                &refs[0][..],
                &refs[1][..],
                &refs[2][..],
                &refs[3][..],
                &refs[4][..],
                &refs[5][..],
            ],
        )
        .unwrap();
        let stems: [Vec<String>; 6] = std::array::from_fn(|i| raw[i].iter().map(|w| porter_stem(w)).collect());
        let pool: Vec<String> = stems.iter().flatten().cloned().collect();
        let terms: Vec<String> = (0..rng.random_range(0..15))
            .map(|_| {
                if rng.random_bool(0.5) {
                    pool[rng.random_range(0..pool.len())].clone()
                } else {
                    porter_stem(&random_word(&mut rng))
                }
            })
            .collect();
        let expected = intersection_counts(&terms, &stems);
        let set = TermSet {
            source_token_count: terms.len(),
            terms,
        };
        let counts = score(&set, &lexicon);
        assert_eq!(counts.0, expected, "case {case}");
        match unit_normalize(&counts) {
            None => assert!(expected.iter().all(|&c| c == 0)),
            Some(v) => assert!((v.norm() - 1.0).abs() <= 1e-9, "case {case}"),
        }
    }
}
