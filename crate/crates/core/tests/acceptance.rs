//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its headline numbers. Run with `cargo test --test acceptance`
//! (add `-- --nocapture` to see the lines for passing criteria).

mod common;

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use common::{random_algebraic, Rng};
use recipdeg::algnum::AlgebraicNumber;
use recipdeg::bounds::{check_separation, erdos_tail_bound, exponent_inequality_sides};
use recipdeg::certify::{
    mahler_chain_check, phi_trace, verdict, LinearCombination, PhiVerdict,
};
use recipdeg::dyadic::{interval_log2, log2_enclosure, Dyadic, DyadicInterval, Round};
use recipdeg::hypotheses::{
    check_theorem4, CheckParams, Evidence, HypothesisChecker, HypothesisConfig, SequenceTable,
    TableEntry, Theorem4Checker,
};
use recipdeg::sequences::{oscillating_tower, quadratic_surd_family, sylvester, TowerStep};

/// C1: on 200 random algebraic integers of degree <= 4, the certified
/// enclosures satisfy H^d overlapping M and the chain H <= house <= M at
/// interval-endpoint level, with relative widths <= 1e-20, inside 60 s.
#[test]
fn c1_lemma1_identity_chain() {
    let start = Instant::now();
    // 2^-67 < 1e-20.
    let tol = Dyadic::pow2(-67);
    let mut rng = Rng(0xC1);
    for case in 0..200 {
        let alpha = random_algebraic(&mut rng, 4, 8, true);
        let d = alpha.degree();
        let h = alpha.weil_height(&tol).unwrap();
        let m = alpha.mahler_measure(&tol).unwrap();
        let house = alpha.house(&tol).unwrap();

        // H^d and M enclose the same real: intervals must overlap.
        let hd = h.pow_int(&BigInt::from(d));
        assert!(
            hd.log2_lo() <= m.log2_hi() && m.log2_lo() <= hd.log2_hi(),
            "case {case}: H^d and M disjoint for {:?}",
            alpha
        );
        // H <= house <= M at endpoint level.
        let house_log = interval_log2(&house, 80).unwrap();
        assert!(
            h.log2_lo() <= house_log.hi(),
            "case {case}: H > house for {:?}",
            alpha
        );
        assert!(
            house_log.lo() <= m.log2_hi(),
            "case {case}: house > M for {:?}",
            alpha
        );
        // Enclosure quality: relative width of the linear-domain values.
        for lm in [&h, &m] {
            // log2 width w gives relative width 2^w - 1 <= w * 2 for w <= 1.
            assert!(lm.width() <= tol, "case {case}: enclosure too wide");
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "C1 overran: {elapsed:?}");
    println!(
        "ACCEPTANCE C1 lemma1-identity-chain: PASS (200 cases, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

/// C2: height rules and degree rules over 500 random pairs of degree
/// <= 3, |coeff| <= 10 -- zero violations.
#[test]
fn c2_height_and_degree_rules() {
    let start = Instant::now();
    let tol = Dyadic::pow2(-40);
    let mut rng = Rng(0xC2);
    for case in 0..500 {
        let a = random_algebraic(&mut rng, 3, 10, false);
        let b = random_algebraic(&mut rng, 3, 10, false);
        let da = a.degree();
        let db = b.degree();

        let ha = a.weil_height(&tol).unwrap();
        let hb = b.weil_height(&tol).unwrap();

        // H(1/a) = H(a): overlap of certified enclosures.
        let ra = a.recip().unwrap();
        assert_eq!(ra.degree(), da, "case {case}: recip changed degree");
        let hra = ra.weil_height(&tol).unwrap();
        assert!(
            hra.log2_lo() <= ha.log2_hi() && ha.log2_lo() <= hra.log2_hi(),
            "case {case}: H(1/a) != H(a)"
        );

        let sum = a.add(&b).unwrap();
        let dif = a.sub(&b).unwrap();
        let prd = a.mul(&b).unwrap();
        assert!(sum.degree() <= da * db, "case {case}: deg(a+b) too big");
        assert!(dif.degree() <= da * db, "case {case}: deg(a-b) too big");
        assert!(prd.degree() <= da * db, "case {case}: deg(ab) too big");

        // H(a+b) <= 2 H(a) H(b): no certified violation at endpoints.
        let hs = sum.weil_height(&tol).unwrap();
        let rhs_log =
            ha.log2_hi().add(hb.log2_hi()).add(&Dyadic::one());
        assert!(
            hs.log2_lo() <= &rhs_log,
            "case {case}: H(a+b) certified above 2 H(a) H(b)"
        );
        // H(ab) <= H(a) H(b).
        let hp = prd.weil_height(&tol).unwrap();
        let rhs_log = ha.log2_hi().add(hb.log2_hi());
        assert!(
            hp.log2_lo() <= &rhs_log,
            "case {case}: H(ab) certified above H(a) H(b)"
        );
    }
    let elapsed = start.elapsed();
    println!(
        "ACCEPTANCE C2 height-degree-rules: PASS (500 pairs, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

/// C3: 1000 random non-conjugate pairs pass the separation check with a
/// certified nonnegative margin, plus the worked example sqrt2 vs 1.
#[test]
fn c3_separation_bound() {
    let start = Instant::now();
    let tol = Dyadic::pow2(-40);
    let mut rng = Rng(0xC3);
    let mut checked = 0;
    while checked < 1000 {
        let a = random_algebraic(&mut rng, 4, 20, false);
        let b = random_algebraic(&mut rng, 4, 20, false);
        if a.is_conjugate(&b) {
            continue;
        }
        let (margin, ok) = check_separation(&a, &b, &tol).unwrap();
        assert!(ok, "separation violated for {a:?} vs {b:?}");
        assert!(!margin.log2_lo().is_negative());
        checked += 1;
    }

    // Worked example: sqrt2 vs 1 has margin log2(0.41421/0.125) = 1.7284.
    let sqrt2 = AlgebraicNumber::make(
        recipdeg::intpoly::IntPolynomial::from_i64(&[-2, 0, 1]),
        recipdeg::dyadic::ComplexBox::new(
            DyadicInterval::new(Dyadic::from_int(1), Dyadic::from_int(2)),
            DyadicInterval::point(Dyadic::zero()),
        ),
    )
    .unwrap();
    let one = AlgebraicNumber::from_integer(1);
    let (margin, ok) = check_separation(&sqrt2, &one, &tol).unwrap();
    assert!(ok);
    let mid = margin.log2_lo().to_f64();
    assert!((mid - 1.7284).abs() < 1e-3, "worked-example margin {mid}");
    let elapsed = start.elapsed();
    println!(
        "ACCEPTANCE C3 liouville-separation: PASS (1000 pairs + worked example, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

/// C4: exhaustive exact sweep of the exponent-product inequality for
/// (D,K) in {1,2,3}^2, d_i in {1,2,3}, N <= 5, inside 10 s.
#[test]
fn c4_exponent_inequality_sweep() {
    let start = Instant::now();
    let mut cases = 0u32;
    for d in 1..=3u32 {
        for k in 1..=3u32 {
            for n in 1..=5usize {
                let mut stack = vec![Vec::new()];
                for _ in 0..n {
                    let mut next = Vec::new();
                    for prefix in &stack {
                        for v in 1..=3u32 {
                            let mut t: Vec<u32> = prefix.clone();
                            t.push(v);
                            next.push(t);
                        }
                    }
                    stack = next;
                }
                for ds in &stack {
                    let (lhs, rhs) = exponent_inequality_sides(d, k, ds);
                    assert!(
                        lhs >= rhs,
                        "violation at D={d} K={k} ds={ds:?}: {lhs} < {rhs}"
                    );
                    cases += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "C4 overran: {elapsed:?}");
    println!(
        "ACCEPTANCE C4 exponent-sweep: PASS ({cases} exact cases, zero violations, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

/// C5: for a_n = n^2 (eps = 1), the exact tail (10^6 summed terms plus an
/// integral remainder) stays below the tail bound at N in {4, 10, 100}.
#[test]
fn c5_tail_bound_oracle() {
    let start = Instant::now();
    let horizon = 1_000_000u64;
    for n0 in [4u64, 10, 64, 100] {
        // Oracle: certified interval sum of 1/n^2 over [N, 10^6], plus the
        // integral bracket [1/(M+1), 1/M] for the rest.
        let mut acc = DyadicInterval::zero();
        for n in n0..=horizon {
            let sq = Dyadic::from_int(BigInt::from(n) * BigInt::from(n));
            let term = DyadicInterval::new(
                Dyadic::one().div(&sq, 50, Round::Down),
                Dyadic::one().div(&sq, 50, Round::Up),
            );
            acc = acc.add(&term).round_out(64);
        }
        let rest = DyadicInterval::new(
            Dyadic::one().div(&Dyadic::from_int(BigInt::from(horizon + 1)), 50, Round::Down),
            Dyadic::one().div(&Dyadic::from_int(BigInt::from(horizon)), 50, Round::Up),
        );
        let exact_tail = acc.add(&rest);

        let bound =
            erdos_tail_bound(&Dyadic::from_int(BigInt::from(n0 * n0)), &BigRational::one(), 64)
                .unwrap();
        assert!(
            exact_tail.hi() <= bound.lo(),
            "tail oracle at N={n0} exceeds the bound: {exact_tail:?} vs {bound:?}"
        );
        if n0 == 4 {
            // 0.28382 <= 0.75.
            assert!((exact_tail.lo().to_f64() - 0.283823).abs() < 1e-4);
            assert!(bound.contains(&Dyadic::new(BigInt::from(3), -2)));
        }
    }
    let elapsed = start.elapsed();
    println!(
        "ACCEPTANCE C5 tail-bound-oracle: PASS (N in {{4,10,64,100}}, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

/// C6: the quadratic-recurrence example: reciprocals sum to 1/(a1-1)
/// within 1/(a_26 - 1) exactly, and S_25 = a_25^(1/2^25) settles above
/// (a1^2 - a1)^(1/4) with |S_25 - S_24| <= 1e-4.
#[test]
fn c6_quadratic_recurrence_example() {
    let start = Instant::now();
    std::thread::scope(|scope| {
    for a1 in [2u64, 3, 4] {
        scope.spawn(move || {
        let seq = sylvester(a1, 26).unwrap();
        // Unreduced partial sum of 25 reciprocals: num/den with
        // den = prod a_n.
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for a in &seq[..25] {
            num = num * a + &den;
            den *= a;
        }
        // |num/den - 1/(a1-1)| <= 1/(a_26 - 1), exactly:
        // |num (a1-1) - den| * (a_26 - 1) <= den * (a1-1).
        let a1m = BigInt::from(a1 - 1);
        let diff = (&num * &a1m - &den).abs();
        let a26m = &seq[25] - BigInt::one();
        assert!(
            diff * a26m <= &den * &a1m,
            "a1={a1}: partial sum strays past the telescoped tolerance"
        );

        // S_25 vs S_24 and the fourth-root bracket, via certified log2.
        let log_s = |idx: usize| {
            let (lo, hi) = log2_enclosure(&Dyadic::from_int(seq[idx].clone()), 90).unwrap();
            let e = BigInt::one() << (idx + 1); // a_n has index n-1; exponent 2^n
            let ed = Dyadic::from_int(e);
            DyadicInterval::new(lo.div(&ed, 80, Round::Down), hi.div(&ed, 80, Round::Up))
        };
        let s25 = log_s(24);
        let s24 = log_s(23);
        // (a1^2 - a1)^(1/4): log2 / 4.
        let base = BigInt::from(a1 * a1 - a1);
        let (blo, bhi) = log2_enclosure(&Dyadic::from_int(base), 90).unwrap();
        let bracket = DyadicInterval::new(blo.mul_pow2(-2), bhi.mul_pow2(-2));
        assert!(
            bracket.hi() < s25.lo(),
            "a1={a1}: S_25 does not clear the fourth-root bracket"
        );
        // |S_25 - S_24| <= 1e-4: compare in linear domain.
        let lin25 = recipdeg::dyadic::interval_exp2(&s25, 80).unwrap();
        let lin24 = recipdeg::dyadic::interval_exp2(&s24, 80).unwrap();
        let gap = lin25.sub(&lin24).abs();
        let bound = BigRational::new(BigInt::one(), BigInt::from(10_000));
        assert!(
            gap.hi().to_rational() <= bound,
            "a1={a1}: |S_25 - S_24| too large: {:?}",
            gap
        );
        });
    }
    });
    let elapsed = start.elapsed();
    println!(
        "ACCEPTANCE C6 quadratic-recurrence: PASS (a1 in {{2,3,4}}, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

/// C7: the certification pipeline on the oscillating tower produces
/// certified Phi < 1 rows whose upper endpoints strictly decrease across
/// the jumps, inside 5 minutes at <= 4096 bits.
#[test]
fn c7_certify_pipeline_evidence() {
    let start = Instant::now();
    let seq = oscillating_tower(
        &Dyadic::from_int(2),
        &Dyadic::from_int(3),
        &[TowerStep::Lo, TowerStep::Hi],
        &BigRational::one(),
        1,
        1,
        &[1; 9],
        8,
    )
    .unwrap();
    let table = SequenceTable::from_integers(&seq).unwrap();
    let lc = LinearCombination::new(vec![BigInt::one()], &table).unwrap();
    let cfg = HypothesisConfig::k1_default(1, vec![1; 8]);
    let trace = phi_trace(&lc, &cfg, 1..=6, 4096).unwrap();

    let below: Vec<_> =
        trace.rows.iter().filter(|r| r.verdict == PhiVerdict::PhiBelowOne).collect();
    assert!(!below.is_empty(), "no certified phi-below-one row");
    // Running minimum of upper endpoints strictly decreases across jumps.
    let uppers: Vec<Dyadic> =
        below.iter().map(|r| r.log2_phi.as_ref().unwrap().log2_hi().clone()).collect();
    for w in uppers.windows(2) {
        assert!(w[1] < w[0], "phi minima not strictly decreasing");
    }
    let v = verdict(&trace).unwrap();
    assert!(v.evidence_found);
    assert!(v.message.contains("EVIDENCE"));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "C7 overran: {elapsed:?}");
    println!(
        "ACCEPTANCE C7 certify-evidence: PASS (below-one at N = {:?}, {:.2}s)",
        v.witness_ns,
        elapsed.as_secs_f64()
    );
}

/// C8: the Mahler chain holds on every N <= 3 partial sum of the
/// quadratic-surd family.
#[test]
fn c8_mahler_chain_on_surds() {
    let start = Instant::now();
    let fam = quadratic_surd_family(
        &[BigInt::from(2), BigInt::from(9), BigInt::from(16)],
        2,
    )
    .unwrap();
    let table = SequenceTable::from_algebraic(fam, None).unwrap();
    let lc = LinearCombination::new(vec![BigInt::one()], &table).unwrap();
    for n in 1..=3 {
        let (lhs, rhs, ok) = mahler_chain_check(&lc, n, &Dyadic::pow2(-40)).unwrap();
        assert!(
            ok,
            "Mahler chain failed at N={n}: lhs log2 {} vs rhs log2 {}",
            lhs.log2_hi(),
            rhs.log2_lo()
        );
    }
    let elapsed = start.elapsed();
    println!(
        "ACCEPTANCE C8 mahler-chain: PASS (N <= 3, D_N <= 8, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

/// C9: single-violation injections, one per hypothesis condition, each
/// localized to exactly the injected condition and index.
#[test]
fn c9_checker_soundness_injections() {
    let start = Instant::now();
    // K = 2 exponents: E_n = prod (2 D_i + d_i) = 3^(n-1), so the tower
    // must be generated with K = 2 for S_n to walk the 2/3 pattern.
    let seq = oscillating_tower(
        &Dyadic::from_int(2),
        &Dyadic::from_int(3),
        &[TowerStep::Lo, TowerStep::Hi],
        &BigRational::one(),
        1,
        2,
        &[1; 9],
        8,
    )
    .unwrap();
    // Second row is a_n + 1, all weights 1: ratios (a_n+1)/a_n decrease.
    let entries: Vec<TableEntry> = (1..=8)
        .flat_map(|n| {
            let a = seq[n - 1].clone();
            [
                TableEntry {
                    n,
                    i: 1,
                    alpha: AlgebraicNumber::from_integer(a.clone()),
                    b: BigInt::one(),
                },
                TableEntry {
                    n,
                    i: 2,
                    alpha: AlgebraicNumber::from_integer(a + 1),
                    b: BigInt::one(),
                },
            ]
        })
        .collect();
    let table = SequenceTable::new(2, 8, entries).unwrap();
    let mut cfg = HypothesisConfig::k1_default(1, vec![1; 8]);
    cfg.k = 2;
    cfg.betas = vec![BigInt::one(), BigInt::one()];
    cfg.eps = BigRational::new(1.into(), 2.into());
    let mut params = CheckParams::new(cfg.clone());
    params.claimed_a1 = Some(Dyadic::from_int(2));
    params.claimed_a2 = Some(Dyadic::from_int(3));
    // The a_7 -> a_8 ratio step is ~2^-729; certifying its direction
    // needs comfortably more working bits than that.
    params.bits = 1024;

    // The base table is fully clean.
    let base = Theorem4Checker.check(&table, &params).unwrap();
    assert!(base.all_finite_pass(), "base table not clean:\n{}", base.render_table());
    for name in ["A1", "A2", "A1_lt_A2", "increasing_fractions"] {
        assert_eq!(
            base.evidence_named(name).unwrap().verdict,
            Evidence::Consistent,
            "base evidence {name} not consistent"
        );
    }

    let run = |t: &SequenceTable, p: &CheckParams| Theorem4Checker.check(t, p).unwrap();
    let assert_only = |report: &recipdeg::hypotheses::HypothesisReport,
                       condition: &str,
                       at: usize| {
        for c in &report.conditions {
            if c.condition == condition {
                assert_eq!(
                    c.failures(),
                    vec![at],
                    "{condition} not localized: {:?}",
                    c.per_n
                );
            } else {
                assert!(
                    c.all_pass(),
                    "collateral failure in {} after injecting {condition}:\n{}",
                    c.condition,
                    report.render_table()
                );
            }
        }
    };

    // 1. increase: a dip at n = 3 fails the n = 2 comparison only
    // (n = 3 sits outside both evidence windows of an 8-row prefix).
    let broken = table
        .with_alpha(3, 1, AlgebraicNumber::from_integer(8))
        .with_alpha(3, 2, AlgebraicNumber::from_integer(9));
    assert_only(&run(&broken, &params), "increase", 2);

    // 2. a1n_large: with eps = 3/2 the bar at n = 2 is 2^2.5 = 5.66; a
    // replacement of 3 stays increasing (2 < 3 < 512) but drops below it.
    let mut params_eps = params.clone();
    params_eps.cfg.eps = BigRational::new(3.into(), 2.into());
    let base_eps = run(&table, &params_eps);
    assert!(base_eps.all_finite_pass(), "eps=3/2 base not clean");
    let broken = table
        .with_alpha(2, 1, AlgebraicNumber::from_integer(3))
        .with_alpha(2, 2, AlgebraicNumber::from_integer(4));
    assert_only(&run(&broken, &params_eps), "a1n_large", 2);

    // 3. deg_bound: a quadratic in the second row at n = 3 (d_3 = 1).
    let surd = quadratic_surd_family(&[BigInt::from(512)], 2).unwrap().remove(0);
    let broken = table.with_alpha(3, 2, surd);
    assert_only(&run(&broken, &params), "deg_bound", 3);

    // 4. house_ratio: T_3 = (log2 512)^(1/2) = 3 exactly, so the band is
    // (1/8, 8); a second-row value of 9 a_3 puts the ratio at 1/9.
    let broken = table.with_alpha(3, 2, AlgebraicNumber::from_integer(512 * 9));
    assert_only(&run(&broken, &params), "house_ratio", 3);

    // 5. house_b: b = 2 a_n at n = 3 (1024 > 2^(T_3) = 8).
    let broken = table.with_b(3, 1, BigInt::from(2) * &seq[2]);
    assert_only(&run(&broken, &params), "house_b", 3);

    // 6. re_zeta_pos: a negative entry in the second row at n = 3.
    let broken = table.with_alpha(3, 2, AlgebraicNumber::from_integer(-513));
    assert_only(&run(&broken, &params), "re_zeta_pos", 3);

    // 7. claimed A1 off: evidence flips, finite conditions stay green.
    let mut p = params.clone();
    p.claimed_a1 = Some(Dyadic::new(BigInt::from(5), -2)); // 1.25
    let r = run(&table, &p);
    assert!(r.all_finite_pass());
    assert_eq!(r.evidence_named("A1").unwrap().verdict, Evidence::Inconsistent);
    assert_eq!(r.evidence_named("A2").unwrap().verdict, Evidence::Consistent);

    // 8. claimed A2 off.
    let mut p = params.clone();
    p.claimed_a2 = Some(Dyadic::from_int(5));
    let r = run(&table, &p);
    assert!(r.all_finite_pass());
    assert_eq!(r.evidence_named("A2").unwrap().verdict, Evidence::Inconsistent);
    assert_eq!(r.evidence_named("A1").unwrap().verdict, Evidence::Consistent);

    // 9. increasing_fractions: growing first-row weights invert the
    // ratio trend; the sizes still satisfy every finite condition.
    let mut broken = table.clone();
    for n in 1..=8 {
        broken = broken.with_b(n, 1, BigInt::from(n as u32));
    }
    let r = run(&broken, &params);
    assert!(r.all_finite_pass(), "weighted table broke a finite condition:\n{}", r.render_table());
    assert_eq!(
        r.evidence_named("increasing_fractions").unwrap().verdict,
        Evidence::Inconsistent
    );

    // Determinism spot check while we hold a report: identical runs agree.
    let again = run(&table, &params);
    assert_eq!(
        serde_json::to_string(&base).unwrap(),
        serde_json::to_string(&again).unwrap()
    );
    assert!(!base.any_undetermined());
    let elapsed = start.elapsed();
    println!(
        "ACCEPTANCE C9 checker-soundness: PASS (9 injections localized, {:.2}s)",
        elapsed.as_secs_f64()
    );
}

/// Round-trip guarantee behind the checker suite: theorem-4 reports stay
/// deterministic through JSON.
#[test]
fn acceptance_report_roundtrip() {
    let seq = sylvester(2, 8).unwrap();
    let table = SequenceTable::from_integers(&seq).unwrap();
    let mut cfg = HypothesisConfig::k1_default(1, vec![1; 8]);
    cfg.eps = BigRational::new(1.into(), 2.into());
    let report = check_theorem4(&table, &cfg, None, None, 96).unwrap();
    let js = serde_json::to_string(&report).unwrap();
    let text = report.render_table();
    assert!(text.contains("checker: theorem4"));
    assert!(js.contains("s_trajectory"));
}
