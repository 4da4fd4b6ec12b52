//! Property and invariant tests that go beyond the per-module unit
//! coverage: algebraic identities on random inputs, containment of exact
//! values in certified enclosures, and the exactness claims of the
//! generators.

mod common;

use common::{random_algebraic, random_irreducible, Rng};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use recipdeg::algnum::{re_zeta, AlgebraicNumber};
use recipdeg::bounds::erdos_tail_bound;
use recipdeg::certify::{phi_trace, LinearCombination};
use recipdeg::dyadic::{
    interval_exp2, log2_enclosure, ComplexBox, Dyadic, DyadicInterval, Round,
};
use recipdeg::hypotheses::{HypothesisConfig, SequenceTable};
use recipdeg::intpoly::{factorize, IntPolynomial};
use recipdeg::rootbox::isolate_all_roots;
use recipdeg::sequences::{oscillating_tower, quadratic_surd_family, sylvester, TowerStep};

fn small_poly_strategy(max_degree: usize, bound: i64) -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-bound..=bound, 1..=max_degree + 1)
        .prop_map(|c| IntPolynomial::from_i64(&c))
        .prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Res(p, q r) = Res(p, q) Res(p, r) for nonzero inputs.
    #[test]
    fn resultant_is_multiplicative(
        p in small_poly_strategy(3, 9),
        q in small_poly_strategy(3, 9),
        r in small_poly_strategy(3, 9),
    ) {
        let qr = q.mul(&r);
        let lhs = p.resultant(&qr).unwrap();
        let rhs = p.resultant(&q).unwrap() * p.resultant(&r).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// Factorization re-multiplies to the canonical input.
    #[test]
    fn factorization_remultiplies(p in small_poly_strategy(6, 12)) {
        let factors = factorize(&p).unwrap();
        let mut prod = IntPolynomial::one();
        for (g, m) in &factors {
            prop_assert!(g.leading().is_positive());
            prop_assert_eq!(g.content(), BigInt::one());
            prod = prod.mul(&g.pow(*m));
        }
        if p.degree() == Some(0) {
            prop_assert!(factors.is_empty());
        } else {
            prop_assert_eq!(prod.canonical(), p.canonical());
        }
    }

    /// Interval Horner: exact rational evaluation lies inside the box
    /// image for points inside the input box.
    #[test]
    fn eval_on_box_contains_exact_values(
        p in small_poly_strategy(5, 10),
        re_n in -40i64..=40,
        im_n in -40i64..=40,
        spread in 1u32..=6,
    ) {
        let re = Dyadic::new(BigInt::from(re_n), -4);
        let im = Dyadic::new(BigInt::from(im_n), -4);
        let w = Dyadic::pow2(-(spread as i64));
        let bx = ComplexBox::new(
            DyadicInterval::new(re.sub(&w), re.add(&w)),
            DyadicInterval::new(im.sub(&w), im.add(&w)),
        );
        let img = p.eval_on_box(&bx);
        // Exact complex-rational evaluation at the box center.
        let (pre, pim) = eval_exact_complex(&p, &re.to_rational(), &im.to_rational());
        prop_assert!(contains_rational(&img.re, &pre));
        prop_assert!(contains_rational(&img.im, &pim));
    }

    /// Re_zeta is linear over dyadic scalars, exactly.
    #[test]
    fn re_zeta_scales_exactly(
        zr in -8i64..=8,
        zi in -8i64..=8,
        q_mant in 1i64..=31,
    ) {
        let zeta = ComplexBox::point(Dyadic::one(), Dyadic::zero());
        let z = ComplexBox::point(Dyadic::from_int(zr), Dyadic::from_int(zi));
        let q = Dyadic::new(BigInt::from(q_mant), -3);
        let scaled = ComplexBox::point(
            Dyadic::from_int(zr).mul(&q),
            Dyadic::from_int(zi).mul(&q),
        );
        let a = re_zeta(&zeta, &scaled).unwrap();
        let b = re_zeta(&zeta, &z).unwrap();
        prop_assert_eq!(a.lo().clone(), b.lo().mul(&q));
        prop_assert_eq!(a.hi().clone(), b.hi().mul(&q));
    }
}

fn eval_exact_complex(
    p: &IntPolynomial,
    re: &BigRational,
    im: &BigRational,
) -> (BigRational, BigRational) {
    let mut are = BigRational::zero();
    let mut aim = BigRational::zero();
    for c in p.coeffs().iter().rev() {
        let nre = &are * re - &aim * im + BigRational::from_integer(c.clone());
        let nim = &are * im + &aim * re;
        are = nre;
        aim = nim;
    }
    (are, aim)
}

fn contains_rational(iv: &DyadicInterval, v: &BigRational) -> bool {
    iv.lo().to_rational() <= *v && *v <= iv.hi().to_rational()
}

/// Resultant vanishes exactly when the inputs share a factor, over a
/// randomized corpus with coefficients in [-20, 20].
#[test]
fn resultant_zero_iff_common_factor() {
    let mut rng = Rng(0x7E5);
    for case in 0..120 {
        let p = random_irreducible(&mut rng, 3, 20, false);
        let q = random_irreducible(&mut rng, 3, 20, false);
        let share = case % 3 == 0;
        let (a, b) = if share {
            let common = random_irreducible(&mut rng, 2, 20, false);
            (p.mul(&common), q.mul(&common))
        } else {
            (p.clone(), q.clone())
        };
        let res = a.resultant(&b).unwrap();
        let gcd_nonconstant = a.gcd(&b).degree().map_or(false, |d| d > 0);
        assert_eq!(res.is_zero(), gcd_nonconstant, "case {case}");
        if !share {
            // Distinct irreducibles never share a root.
            assert!(!res.is_zero() || p == q, "case {case}");
        }
    }
}

/// Isolation returns exactly deg(p) boxes whose midpoints multiply back
/// to roughly the input polynomial.
#[test]
fn isolation_count_and_reconstruction() {
    let mut rng = Rng(0xAB3);
    for _ in 0..20 {
        let p = random_irreducible(&mut rng, 6, 50, false).canonical();
        let d = p.degree().unwrap();
        let boxes = isolate_all_roots(&p, &Dyadic::pow2(-40)).unwrap();
        assert_eq!(boxes.len(), d);
        // Product of (x - midpoint approximations) against p/lead in f64.
        let mut coeffs = vec![(0.0f64, 0.0f64); 1];
        coeffs[0] = (1.0, 0.0);
        for b in &boxes {
            let (re, im) = (b.re.midpoint().to_f64(), b.im.midpoint().to_f64());
            let mut next = vec![(0.0, 0.0); coeffs.len() + 1];
            for (k, &(ar, ai)) in coeffs.iter().enumerate() {
                next[k + 1].0 += ar;
                next[k + 1].1 += ai;
                next[k].0 -= ar * re - ai * im;
                next[k].1 -= ar * im + ai * re;
            }
            coeffs = next;
        }
        let lead = p.leading().to_string().parse::<f64>().unwrap();
        let scale: f64 = p
            .coeffs()
            .iter()
            .map(|c| c.to_string().parse::<f64>().unwrap().abs())
            .fold(1.0, f64::max);
        for (k, &(cr, ci)) in coeffs.iter().enumerate() {
            let expect = p.coeff(k).to_string().parse::<f64>().unwrap() / lead;
            assert!(
                (cr - expect).abs() / scale < 1e-6 && ci.abs() / scale < 1e-6,
                "coefficient {k} reconstruction off: {cr}+{ci}i vs {expect}"
            );
        }
    }
}

/// The Lemma 1 chain specialized to quadratic surds: the house of
/// m + sqrt(r) is the number itself, certified to shrinking width.
#[test]
fn house_of_real_surd_is_itself() {
    for (m, r) in [(2u64, 2u64), (9, 2), (5, 3), (11, 7)] {
        let fam = quadratic_surd_family(&[BigInt::from(m)], r).unwrap();
        let alpha = &fam[0];
        assert!(alpha.house_attained_here().unwrap());
        let tight = alpha.house(&Dyadic::pow2(-60)).unwrap();
        let own = alpha.modulus(&Dyadic::pow2(-60)).unwrap();
        assert!(tight.overlaps(&own));
        assert!(tight.width() <= Dyadic::pow2(-50));
    }
}

/// Tail-bound oracle for the cubic case: a_n = n^3 with eps = 2.
#[test]
fn tail_bound_oracle_cubes() {
    let horizon = 200_000u64;
    for n0 in [4u64, 10, 100] {
        let mut acc = DyadicInterval::zero();
        for n in n0..=horizon {
            let cube = Dyadic::from_int(BigInt::from(n).pow(3));
            acc = acc
                .add(&DyadicInterval::new(
                    Dyadic::one().div(&cube, 50, Round::Down),
                    Dyadic::one().div(&cube, 50, Round::Up),
                ))
                .round_out(64);
        }
        // Integral remainder for 1/n^3: between 1/(2(M+1)^2) and 1/(2M^2).
        let m2 = BigInt::from(horizon) * BigInt::from(horizon) * 2;
        let m12 = BigInt::from(horizon + 1) * BigInt::from(horizon + 1) * 2;
        let rest = DyadicInterval::new(
            Dyadic::one().div(&Dyadic::from_int(m12), 50, Round::Down),
            Dyadic::one().div(&Dyadic::from_int(m2), 50, Round::Up),
        );
        let exact = acc.add(&rest);
        let bound = erdos_tail_bound(
            &Dyadic::from_int(BigInt::from(n0).pow(3)),
            &BigRational::from_integer(2.into()),
            64,
        )
        .unwrap();
        assert!(
            exact.hi() <= bound.lo(),
            "cubic tail at N={n0}: {exact:?} vs {bound:?}"
        );
    }
}

/// Exact telescoping for the quadratic recurrence at every start: the
/// unreduced rational sum of reciprocals equals the closed form
/// 1/(a1-1) - 1/(a_{N+1}-1), exactly. Depth 25 for three starts is the
/// acceptance criterion; here every start 2..=10 is verified in exact
/// rational arithmetic to depth 16 (the terms already exceed 10^4000),
/// together with the per-step product identity that telescopes the rest.
#[test]
fn sylvester_telescoping_all_starts() {
    for a1 in 2u64..=10 {
        let seq = sylvester(a1, 17).unwrap();
        for w in seq.windows(2) {
            let lhs = (&w[0] - BigInt::one()) * &w[0];
            assert_eq!(lhs, &w[1] - BigInt::one(), "telescoping step broken at a1={a1}");
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for a in &seq[..16] {
            num = num * a + &den;
            den *= a;
        }
        let direct = BigRational::new(num, den);
        let closed = BigRational::new(BigInt::one(), BigInt::from(a1) - 1)
            - BigRational::new(BigInt::one(), &seq[16] - BigInt::one());
        assert_eq!(direct, closed, "a1={a1}: direct sum mismatch at N=16");
    }
}

/// Growth trajectory of the quadratic recurrence: a_{n+1} < a_n^2 makes
/// S_n = a_n^(1/2^n) strictly decreasing toward its limit, which stays
/// above the fourth-root bracket (a1^2 - a1)^(1/4).
#[test]
fn sylvester_growth_brackets() {
    for a1 in [2u64, 5, 10] {
        let seq = sylvester(a1, 25).unwrap();
        let log_s: Vec<DyadicInterval> = seq
            .iter()
            .enumerate()
            .map(|(idx, a)| {
                let (lo, hi) = log2_enclosure(&Dyadic::from_int(a.clone()), 80).unwrap();
                let e = Dyadic::from_int(BigInt::one() << (idx + 1));
                DyadicInterval::new(lo.div(&e, 70, Round::Down), hi.div(&e, 70, Round::Up))
            })
            .collect();
        for w in log_s.windows(2) {
            assert!(
                w[1].lo() < w[0].hi(),
                "trajectory stopped descending for a1={a1}"
            );
        }
        let (blo, _) = log2_enclosure(&Dyadic::from_int(BigInt::from(a1 * a1 - a1)), 80).unwrap();
        let bracket = blo.mul_pow2(-2);
        assert!(
            log_s[24].lo() > &bracket,
            "a1={a1}: S_25 does not clear the fourth-root bracket"
        );
    }
}

/// Tower generation refuses hypothesis-violating outputs.
#[test]
fn tower_validation_is_loud() {
    // Non-increasing pattern.
    assert!(oscillating_tower(
        &Dyadic::new(BigInt::from(17), -4),
        &Dyadic::from_int(100),
        &[TowerStep::Hi, TowerStep::Lo],
        &BigRational::one(),
        1,
        1,
        &[1; 4],
        2,
    )
    .is_err());
    // Guards on the bases.
    assert!(oscillating_tower(
        &Dyadic::one(),
        &Dyadic::from_int(2),
        &[TowerStep::Lo],
        &BigRational::one(),
        1,
        1,
        &[1; 4],
        2,
    )
    .is_err());
}

/// Log-domain consistency of the certification trace: the phi interval
/// is the exact interval sum of its two addends, and the linear-domain
/// enclosures multiply accordingly.
#[test]
fn phi_trace_log_domain_consistency() {
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
    let trace = phi_trace(&lc, &cfg, 1..=6, 2048).unwrap();
    let mut prev_bracket_hi: Option<Dyadic> = None;
    for row in &trace.rows {
        let gamma = row.log2_gamma.as_ref().unwrap();
        let phi = row.log2_phi.as_ref().unwrap();
        assert_eq!(phi.log2_lo().clone(), gamma.log2_lo().add(row.log2_bracket.log2_lo()));
        assert_eq!(phi.log2_hi().clone(), gamma.log2_hi().add(row.log2_bracket.log2_hi()));
        // Linear domain: exp2(phi) contains the product of the factor
        // enclosures' endpoint products.
        let glin = interval_exp2(&gamma.log2_interval(), 96).unwrap();
        let blin = interval_exp2(&row.log2_bracket.log2_interval(), 96).unwrap();
        let plin = interval_exp2(&phi.log2_interval(), 96).unwrap();
        let prod = glin.mul(&blin);
        assert!(plin.overlaps(&prod));
        // Bracket grows strictly in N.
        if let Some(prev) = prev_bracket_hi {
            assert!(row.log2_bracket.log2_lo() > &prev);
        }
        prev_bracket_hi = Some(row.log2_bracket.log2_hi().clone());
    }
}

/// The exact Sylvester tail stays inside the certified tail enclosure
/// for every N up to 10 at 256 bits.
#[test]
fn sylvester_tail_enclosures_to_ten() {
    let seq = sylvester(2, 14).unwrap();
    let table = SequenceTable::from_integers(&seq).unwrap();
    let lc = LinearCombination::new(vec![BigInt::one()], &table).unwrap();
    let mut cfg = HypothesisConfig::k1_default(1, vec![1; 14]);
    cfg.a = BigRational::new(1.into(), 2.into());
    for n in 1..=10usize {
        let gamma = recipdeg::certify::tail_enclosure(&lc, &cfg, n, 256).unwrap();
        let exact = BigRational::new(BigInt::one(), &seq[n] - BigInt::one());
        let iv = gamma.to_interval(200).unwrap();
        assert!(
            iv.lo().to_rational() <= exact && exact <= iv.hi().to_rational(),
            "telescoped tail escaped at N={n}"
        );
    }
}

/// Partial-sum degrees respect the compositum products on the surd
/// family, and the Mahler chain holds along the way.
#[test]
fn partial_sum_degree_growth() {
    let fam = quadratic_surd_family(
        &[BigInt::from(2), BigInt::from(9), BigInt::from(16)],
        2,
    )
    .unwrap();
    let table = SequenceTable::from_algebraic(fam, None).unwrap();
    let lc = LinearCombination::new(vec![BigInt::one()], &table).unwrap();
    let mut cap = 1usize;
    for n in 1..=3usize {
        cap *= 2;
        let gamma = recipdeg::certify::partial_sum_exact(&lc, n).unwrap();
        assert!(gamma.degree() <= cap, "degree {} above {cap} at N={n}", gamma.degree());
    }
}

/// Random addition against exact rational arithmetic: for rational
/// inputs the field operations are exact.
#[test]
fn rational_field_ops_are_exact() {
    let mut rng = Rng(0xF1E1d);
    for _ in 0..50 {
        let a = BigRational::new(
            BigInt::from(rng.coeff(50)),
            BigInt::from(1 + rng.below(20) as i64),
        );
        let b = BigRational::new(
            BigInt::from(rng.coeff(50)),
            BigInt::from(1 + rng.below(20) as i64),
        );
        let aa = AlgebraicNumber::from_rational(&a);
        let bb = AlgebraicNumber::from_rational(&b);
        let sum = aa.add(&bb).unwrap();
        assert_eq!(sum.as_rational().unwrap(), &a + &b);
        let prod = aa.mul(&bb).unwrap();
        assert_eq!(prod.as_rational().unwrap(), &a * &b);
        if !a.is_zero() {
            assert_eq!(aa.recip().unwrap().as_rational().unwrap(), a.recip());
        }
    }
}

/// Refinement stays inside its input across random starts.
#[test]
fn refinement_monotonic_random() {
    let mut rng = Rng(0x51);
    for _ in 0..25 {
        let alpha = random_algebraic(&mut rng, 4, 12, false);
        let coarse = alpha.refined(&Dyadic::pow2(-8)).unwrap();
        let fine = alpha.refined(&Dyadic::pow2(-80)).unwrap();
        let finer = recipdeg::rootbox::refine_root(
            alpha.minpoly(),
            &coarse,
            &Dyadic::pow2(-100),
        )
        .unwrap();
        assert!(coarse.max_side() >= fine.max_side());
        assert!(coarse.contains_box(&finer));
        assert!(finer.max_side() <= Dyadic::pow2(-100));
    }
}
