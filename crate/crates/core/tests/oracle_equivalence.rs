mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ssc_core::oracle::{check_g0, check_g1, hautus_spotcheck, naive_fig1};
use ssc_core::{run, LinkedPattern, Mode, PatternTriplets};

use common::{ccs, dense, enumerated, random_triplets};

fn agree(t: &PatternTriplets) -> Result<(), String> {
    let x = ccs(t);
    let d = dense(t);
    for mode in Mode::BOTH {
        let fast = run(LinkedPattern::build(&x).unwrap(), mode).is_empty_witness();
        let brute = match mode {
            Mode::Zero => check_g0(&d).unwrap(),
            Mode::NonZero => check_g1(&d).unwrap(),
        };
        let naive = naive_fig1(&d, mode).is_empty();
        if fast != brute || fast != naive {
            return Err(format!(
                "{mode:?} on {:?}: run {fast}, brute {brute}, naive {naive}",
                t.entries
            ));
        }
    }
    Ok(())
}

#[test]
fn exhaustive_up_to_three_states() {
    let mut count = 0;
    for n in 1..=3 {
        for r in 0..=1 {
            for code in 0..1u64 << (n * (n + r)) {
                agree(&enumerated(n, r, code)).unwrap();
                count += 1;
            }
        }
    }
    assert_eq!(count, 2 + 4 + 16 + 64 + 512 + 4096);
}

#[test]
fn random_small_patterns() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3000 {
        let n = rng.random_range(1..=5);
        let r = rng.random_range(0..=2);
        let density = rng.random_range(0.0..=1.0);
        agree(&random_triplets(&mut rng, n, r, density)).unwrap();
    }
}

#[test]
fn witness_is_closed_under_the_method() {
    // Whatever V the fast run returns, the naive method started from the
    // same pattern ends with a nonempty set exactly when V is nonempty.
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..500 {
        let n = rng.random_range(1..=6);
        let r = rng.random_range(0..=2);
        let t = random_triplets(&mut rng, n, r, 0.3);
        let d = dense(&t);
        for mode in Mode::BOTH {
            let fast = run(LinkedPattern::build(&ccs(&t)).unwrap(), mode).witness;
            let naive = naive_fig1(&d, mode);
            assert_eq!(fast.is_empty(), naive.is_empty());
            assert!(fast.windows(2).all(|w| w[0] < w[1]));
            assert!(fast.iter().all(|&i| (1..=n).contains(&i)));
        }
    }
}

#[test]
fn hautus_holds_on_ssc_patterns() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut checked = 0;
    for k in 0..600u64 {
        let n = rng.random_range(1..=4);
        let r = rng.random_range(0..=2);
        let t = random_triplets(&mut rng, n, r, 0.4);
        let d = dense(&t);
        if check_g0(&d).unwrap() && check_g1(&d).unwrap() {
            assert!(hautus_spotcheck(&d, 20, k), "{:?}", t.entries);
            checked += 1;
        }
    }
    assert!(checked > 20);
}
