//! `verify`: randomized self-checks of the core identities. Exit code 0
//! when every check passes, 1 otherwise.

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use knowledge_metrics::{decompose, jaccard, learnability_ratio, split_nonneg, NonNegVector};
use lattice_core::{
    mobius_brute, mobius_transform, zeta_transform, InteractionVector, MaskedOutputTable,
};

use crate::errors::usage;

pub struct VerifyArgs {
    pub n_max: u8,
    pub trials: usize,
    pub seed: u64,
    /// Test hook: corrupt one transform result so the suite must fail.
    pub inject_fault: bool,
}

struct Check {
    name: &'static str,
    max_error: f64,
    tolerance: f64,
    passed: bool,
}

impl Check {
    fn of(name: &'static str, max_error: f64, tolerance: f64) -> Self {
        Self {
            name,
            max_error,
            tolerance,
            passed: max_error <= tolerance,
        }
    }
}

fn random_values(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-30.0..30.0)).collect()
}

fn max_rel_err(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1e-12))
        .fold(0.0, f64::max)
}

pub fn run(args: &VerifyArgs) -> Result<i32> {
    if args.n_max == 0 || args.n_max > 12 {
        return Err(usage(format!(
            "--n-max must lie in 1..=12, got {}",
            args.n_max
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut checks = Vec::new();

    // Round-trip and oracle equivalence over random tables.
    let mut round_trip_err = 0.0f64;
    let mut oracle_err = 0.0f64;
    let mut fault_pending = args.inject_fault;
    for n in 1..=args.n_max {
        for _ in 0..args.trials {
            let table = MaskedOutputTable::new(n, random_values(&mut rng, 1usize << n))?;
            let mut iv = mobius_transform(&table)?;
            if fault_pending {
                // Corrupt the lowest dividend; every consumer below
                // sees the damaged vector.
                let mut d = iv.into_dividends();
                d[0] += 1e-3;
                iv = InteractionVector::new(n, d)?;
                fault_pending = false;
            }
            let back = zeta_transform(&iv)?;
            round_trip_err = round_trip_err.max(max_rel_err(table.values(), back.values()));
            let brute = mobius_brute(&table)?;
            oracle_err = oracle_err.max(max_rel_err(iv.dividends(), brute.dividends()));
        }
    }
    checks.push(Check::of(
        "round-trip (zeta . mobius = id)",
        round_trip_err,
        1e-9,
    ));
    checks.push(Check::of(
        "oracle equivalence (fast vs brute)",
        oracle_err,
        1e-9,
    ));

    // Conservation identities on random vector pairs.
    let mut conservation_err = 0.0f64;
    for n in 1..=args.n_max {
        for _ in 0..args.trials {
            let len = 1usize << n;
            let pre = InteractionVector::new(n, random_values(&mut rng, len))?;
            let fine = InteractionVector::new(n, random_values(&mut rng, len))?;
            let d = decompose(&pre, &fine)?;
            for m in 0..len {
                let e1 = (d.preserve()[m] + d.discard()[m] - pre.dividends()[m].abs()).abs();
                let e2 = (d.preserve()[m] + d.new_knowledge()[m] - fine.dividends()[m].abs()).abs();
                conservation_err = conservation_err.max(e1).max(e2);
            }
        }
    }
    checks.push(Check::of(
        "conservation (preserve+discard, preserve+new)",
        conservation_err,
        0.0,
    ));

    // Jaccard: self-similarity, symmetry, range, scaled copies.
    let mut jaccard_err = 0.0f64;
    for _ in 0..args.trials.max(8) {
        let len = 2 * (1usize << args.n_max.min(6));
        let a = NonNegVector::from_signed(&random_values(&mut rng, len));
        let b = NonNegVector::from_signed(&random_values(&mut rng, len));
        let sym = (jaccard(&a, &b)? - jaccard(&b, &a)?).abs();
        let selfsim = (jaccard(&a, &a)? - 1.0).abs();
        let j = jaccard(&a, &b)?;
        let range = if (0.0..=1.0).contains(&j) { 0.0 } else { 1.0 };
        jaccard_err = jaccard_err.max(sym).max(selfsim).max(range);
        for t in [0.25, 0.5, 0.75] {
            let scaled = NonNegVector::new(a.values().iter().map(|v| t * v).collect())
                .expect("scaling keeps the expansion valid");
            jaccard_err = jaccard_err.max((jaccard(&scaled, &a)? - t).abs());
        }
    }
    checks.push(Check::of(
        "jaccard (symmetry, range, scaling)",
        jaccard_err,
        1e-12,
    ));

    // Ratio: analytic branch cases and bounds on random triples.
    let mut ratio_err = 0.0f64;
    let case = |pre: f64, fine: f64, rand: f64| -> Result<Option<f64>> {
        let mk = |v: f64| InteractionVector::new(1, vec![0.0, v]);
        let r = learnability_ratio(&mk(pre)?, &mk(fine)?, &mk(rand)?)?;
        Ok(r.per_subset()[1])
    };
    ratio_err = ratio_err.max((case(3.0, 2.0, 1.0)?.unwrap_or(f64::NAN) - 0.5).abs());
    ratio_err = ratio_err.max(case(3.0, 2.0, -1.0)?.unwrap_or(f64::NAN).abs());
    ratio_err = ratio_err.max((case(3.0, 3.0, 3.0)?.unwrap_or(f64::NAN) - 1.0).abs());
    for _ in 0..args.trials {
        let len = 1usize << args.n_max.min(6);
        let n = args.n_max.min(6);
        let pre = InteractionVector::new(n, random_values(&mut rng, len))?;
        let fine = InteractionVector::new(n, random_values(&mut rng, len))?;
        let rand = InteractionVector::new(n, random_values(&mut rng, len))?;
        let report = learnability_ratio(&pre, &fine, &rand)?;
        for v in report.per_subset().iter().flatten() {
            if !(0.0..=1.0).contains(v) {
                ratio_err = ratio_err.max(1.0);
            }
        }
        let _ = split_nonneg(&pre); // exercised for completeness
    }
    checks.push(Check::of(
        "learnability ratio (cases, bounds)",
        ratio_err,
        1e-12,
    ));

    let mut all_passed = true;
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!(
            "{status}  {:<44} max error {:.3e} (tolerance {:.1e})",
            c.name, c.max_error, c.tolerance
        );
        all_passed &= c.passed;
    }
    Ok(if all_passed { 0 } else { 1 })
}
