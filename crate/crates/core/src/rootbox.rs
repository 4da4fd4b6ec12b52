//! Certified isolation and refinement of the complex roots of a
//! squarefree integer polynomial.
//!
//! Real roots are isolated by Sturm-chain bisection (exact integer
//! arithmetic throughout). Non-real roots are approximated by Aberth
//! iteration and then certified: the disk of radius deg(p)*|p(z)/p'(z)|
//! around any point z contains at least one root, so a full set of
//! pairwise-disjoint disks strictly off the real axis pins exactly one
//! root each. Output boxes of real polynomials are conjugate-symmetric
//! by construction.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{ComplexBox, Dyadic, DyadicInterval, Round};
use crate::intpoly::IntPolynomial;
use crate::{Error, Result, MAX_PRECISION_BITS};

/// Isolate all deg(p) complex roots of a squarefree polynomial into
/// pairwise-disjoint certified boxes with sides at most `target_width`.
pub fn isolate_all_roots(p: &IntPolynomial, target_width: &Dyadic) -> Result<Vec<ComplexBox>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let degree = p.degree().unwrap();
    if degree == 0 {
        return Err(Error::InvalidInput("cannot isolate roots of a constant".into()));
    }
    if !p.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    assert!(target_width.is_positive(), "target width must be positive");

    let p = p.canonical();
    let mut boxes: Vec<ComplexBox> = Vec::new();

    // Real roots: exact count and isolation via Sturm bisection.
    let real = isolate_real_roots(&p, target_width)?;
    let nreal = real.len();
    for iv in &real {
        boxes.push(ComplexBox::new(iv.clone(), DyadicInterval::point(Dyadic::zero())));
    }

    let ncomplex = degree - nreal;
    debug_assert!(ncomplex % 2 == 0, "non-real roots of a real polynomial pair up");
    if ncomplex > 0 {
        let upper = certified_upper_roots(&p, ncomplex / 2, target_width)?;
        for b in upper {
            boxes.push(b.conj_box());
            boxes.push(b);
        }
    }

    separate_touching_boxes(&p, &mut boxes)?;
    boxes.sort_by(|a, b| (a.re.lo(), a.im.lo()).cmp(&(b.re.lo(), b.im.lo())));
    Ok(boxes)
}

/// Refine a certified one-root box until both sides are at most
/// `target_width`; the result is contained in the input box.
pub fn refine_root(
    p: &IntPolynomial,
    bx: &ComplexBox,
    target_width: &Dyadic,
) -> Result<ComplexBox> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let p = p.canonical();
    // Containment certificate: exactly one root inside.
    let found = count_roots_in_box(&p, bx)?;
    if found != 1 {
        return Err(Error::RootCount { found });
    }
    let refined = refine_certified(&p, bx, target_width)?;
    Ok(refined.intersect(bx).unwrap_or(refined))
}

/// Count the roots of a squarefree polynomial inside a closed box,
/// refining internal enclosures until none straddles the boundary.
pub fn count_roots_in_box(p: &IntPolynomial, bx: &ComplexBox) -> Result<usize> {
    let p = p.canonical();
    let width = bx.max_side();
    let start = if width.is_zero() { Dyadic::pow2(-32) } else { width.mul_pow2(-3) };
    let all = isolate_all_roots(&p, &start)?;
    let mut count = 0usize;
    for root in all {
        match classify_enclosure(&p, root, bx)? {
            Containment::Inside => count += 1,
            Containment::Outside => {}
        }
    }
    Ok(count)
}

enum Containment {
    Inside,
    Outside,
}

/// Shrink a root enclosure until it is entirely inside or entirely
/// outside the query box.
fn classify_enclosure(
    p: &IntPolynomial,
    mut enc: ComplexBox,
    bx: &ComplexBox,
) -> Result<Containment> {
    let mut width = enc.max_side();
    let mut guard = 0u32;
    loop {
        if bx.contains_box(&enc) {
            return Ok(Containment::Inside);
        }
        if enc.is_disjoint(bx) {
            return Ok(Containment::Outside);
        }
        guard += 1;
        if guard > 64 || width.is_zero() {
            // A root sitting exactly on the box boundary cannot be decided.
            return Err(Error::Undetermined { bits: MAX_PRECISION_BITS });
        }
        width = if width.is_zero() { Dyadic::pow2(-64) } else { width.mul_pow2(-8) };
        enc = refine_certified(p, &enc, &width)?;
    }
}

// ---------------------------------------------------------------------------
// Real roots: Sturm chains over exact integer arithmetic.

/// Sturm chain with the sign semantics of (p, p', -rem, ...): variations
/// at a minus variations at b count distinct real roots in (a, b), for
/// non-root endpoints.
fn sturm_chain(p: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let f = &chain[chain.len() - 2];
        let g = &chain[chain.len() - 1];
        if g.is_zero() {
            chain.pop();
            break;
        }
        if f.degree() < g.degree() {
            break;
        }
        let r = sturm_negated_remainder(f, g);
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    chain
}

/// -(f mod g) up to a positive scalar, in integer arithmetic.
fn sturm_negated_remainder(f: &IntPolynomial, g: &IntPolynomial) -> IntPolynomial {
    let df = f.degree().unwrap();
    let dg = g.degree().unwrap();
    let steps = df - dg + 1;
    // Eliminate exactly `steps` times so the implicit scaling factor is
    // lead(g)^steps; flip the sign when that factor is negative.
    let lead = g.leading().clone();
    let mut r = f.clone();
    for _ in 0..steps {
        r = match r.degree() {
            Some(d) if d >= dg => {
                let top = r.leading().clone();
                r.mul_scalar(&lead).sub(&g.shift_up(d - dg).mul_scalar(&top))
            }
            _ => r.mul_scalar(&lead),
        };
    }
    let positive_multiplier = !lead.is_negative() || steps % 2 == 0;
    let r = if positive_multiplier { r.neg() } else { r };
    // Divide by the (positive) content to control growth.
    let c = r.content();
    if c.is_zero() || c.is_one() {
        r
    } else {
        let coeffs = r.coeffs().iter().map(|x| x / &c).collect();
        IntPolynomial::from_coeffs(coeffs)
    }
}

fn sign_variations_at(chain: &[IntPolynomial], x: &Dyadic) -> usize {
    let mut last = 0i32;
    let mut vars = 0usize;
    for q in chain {
        let s = q.sign_at(x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            vars += 1;
        }
        last = s;
    }
    vars
}

/// Distinct real roots in the open interval (a, b); requires p(a), p(b) != 0.
fn count_roots_between(chain: &[IntPolynomial], a: &Dyadic, b: &Dyadic) -> usize {
    sign_variations_at(chain, a) - sign_variations_at(chain, b)
}

/// Isolating intervals (or exact points) for every real root, each of
/// width at most `target`, endpoints never roots.
fn isolate_real_roots(p: &IntPolynomial, target: &Dyadic) -> Result<Vec<DyadicInterval>> {
    if p.degree() == Some(1) {
        return Ok(vec![linear_root_interval(p, target)]);
    }
    let bound = p.cauchy_root_bound();
    let chain = sturm_chain(p);
    let lo = bound.neg();
    let hi = bound;
    debug_assert!(p.sign_at(&lo) != 0 && p.sign_at(&hi) != 0);
    let total = count_roots_between(&chain, &lo, &hi);
    let mut out = Vec::new();
    let mut stack = vec![(lo, hi, total)];
    while let Some((a, b, count)) = stack.pop() {
        match count {
            0 => continue,
            1 => {
                out.push(refine_real_interval(p, &chain, a, b, target));
                continue;
            }
            _ => {}
        }
        let m = a.add(&b).mul_pow2(-1);
        if p.sign_at(&m) == 0 {
            // Exact dyadic root at the split point: record it, deflate, and
            // isolate the rest on the quotient (root-free at m).
            let (deflated, rest_chain) = deflate_dyadic_root(p, &m);
            out.push(DyadicInterval::point(m));
            out.extend(isolate_real_roots_rest(&deflated, &rest_chain, &a, &b, target));
            continue;
        }
        let la = count_roots_between(&chain, &a, &m);
        stack.push((a, m.clone(), la));
        stack.push((m, b, count - la));
    }
    out.sort_by(|x, y| x.lo().cmp(y.lo()));
    Ok(out)
}

fn linear_root_interval(p: &IntPolynomial, target: &Dyadic) -> DyadicInterval {
    let c0 = Dyadic::from_int(p.coeff(0));
    let c1 = Dyadic::from_int(p.coeff(1));
    let neg = c0.neg();
    // Exact when the denominator's odd part divides the numerator.
    if (neg.mantissa() % c1.mantissa()).is_zero() {
        let m = neg.mantissa() / c1.mantissa();
        let root = Dyadic::new(m, neg.exponent() - c1.exponent());
        return DyadicInterval::point(root);
    }
    let mut prec = 64u32;
    loop {
        let lo = neg.div(&c1, prec, Round::Down);
        let hi = neg.div(&c1, prec, Round::Up);
        if hi.sub(&lo) <= *target {
            return DyadicInterval::new(lo, hi);
        }
        prec *= 2;
    }
}

/// Divide out (x - root) for a dyadic root: returns the deflated
/// polynomial (primitive) and its Sturm chain.
fn deflate_dyadic_root(p: &IntPolynomial, root: &Dyadic) -> (IntPolynomial, Vec<IntPolynomial>) {
    // Linear factor 2^k x - m for root = m / 2^k (k >= 0).
    let k = (-root.exponent()).max(0);
    let m = root.mantissa() << (root.exponent() + k).max(0) as u64;
    let linear = IntPolynomial::from_coeffs(vec![-m, BigInt::one() << k as u64]).canonical();
    let scaled = p.mul_scalar(&linear.leading().pow(p.degree().unwrap() as u32));
    let q = scaled
        .exact_div(&linear)
        .expect("dyadic root implies linear factor divides")
        .canonical();
    let chain = sturm_chain(&q);
    (q, chain)
}

fn isolate_real_roots_rest(
    q: &IntPolynomial,
    chain: &[IntPolynomial],
    a: &Dyadic,
    b: &Dyadic,
    target: &Dyadic,
) -> Vec<DyadicInterval> {
    if q.is_constant() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let count = count_roots_between(chain, a, b);
    let mut stack = vec![(a.clone(), b.clone(), count)];
    while let Some((a, b, count)) = stack.pop() {
        match count {
            0 => continue,
            1 => {
                out.push(refine_real_interval(q, chain, a, b, target));
                continue;
            }
            _ => {}
        }
        let m = a.add(&b).mul_pow2(-1);
        if q.sign_at(&m) == 0 {
            // Another dyadic root below; recurse once more.
            let (deflated, rest_chain) = deflate_dyadic_root(q, &m);
            out.push(DyadicInterval::point(m));
            out.extend(isolate_real_roots_rest(&deflated, &rest_chain, &a, &b, target));
            continue;
        }
        let la = count_roots_between(chain, &a, &m);
        stack.push((a, m.clone(), la));
        stack.push((m, b, count - la));
    }
    out
}

/// Shrink an isolating interval (one root strictly inside, endpoints
/// non-roots) to the target width: interval Newton when it contracts,
/// sign-change bisection otherwise.
fn refine_real_interval(
    p: &IntPolynomial,
    _chain: &[IntPolynomial],
    a: Dyadic,
    b: Dyadic,
    target: &Dyadic,
) -> DyadicInterval {
    let dp = p.derivative();
    let mut lo = a;
    let mut hi = b;
    let mut sign_lo = p.sign_at(&lo);
    debug_assert!(sign_lo != 0 && p.sign_at(&hi) != 0 && sign_lo != p.sign_at(&hi));
    loop {
        let width = hi.sub(&lo);
        if width <= *target {
            return DyadicInterval::new(lo, hi);
        }
        let iv = DyadicInterval::new(lo.clone(), hi.clone());
        let prec = newton_precision(&width);
        let m = iv.midpoint().round(prec, Round::Down);
        let m = if iv.contains(&m) && m > lo && m < hi { m } else { iv.midpoint() };
        let pm = p.evaluate_dyadic(&m);
        if pm.is_zero() {
            return DyadicInterval::point(m);
        }
        // Interval Newton: the root lies in m - p(m)/p'([lo,hi]) whenever
        // p' keeps constant sign over the interval.
        let dpi = dp.eval_on_interval(&iv);
        if !dpi.contains_zero() {
            let q = DyadicInterval::point(pm.clone()).div(&dpi, prec);
            let newton = DyadicInterval::point(m.clone()).sub(&q);
            if let Some(next) = newton.intersect(&iv) {
                if next.width() <= width.mul_pow2(-1) {
                    let (nl, nh) = signed_endpoints(p, &next, &lo, &hi, sign_lo);
                    if nh.sub(&nl) < width {
                        lo = nl;
                        hi = nh;
                        sign_lo = p.sign_at(&lo);
                        if sign_lo == 0 {
                            return DyadicInterval::point(lo);
                        }
                        continue;
                    }
                }
            }
        }
        let sm = pm.sign();
        if sm == sign_lo {
            lo = m;
        } else {
            hi = m;
        }
    }
}

fn newton_precision(width: &Dyadic) -> u32 {
    if width.is_zero() {
        return MAX_PRECISION_BITS;
    }
    let k = (-width.ilog2_floor()).max(16);
    ((k as u32).saturating_mul(2)).min(MAX_PRECISION_BITS) + 32
}

/// Given a Newton-contracted subinterval known to contain the root,
/// restore endpoints with opposite signs of p (required by bisection).
fn signed_endpoints(
    p: &IntPolynomial,
    next: &DyadicInterval,
    lo: &Dyadic,
    hi: &Dyadic,
    sign_lo: i32,
) -> (Dyadic, Dyadic) {
    let nl = next.lo().clone();
    let nh = next.hi().clone();
    let sl = p.sign_at(&nl);
    let sh = p.sign_at(&nh);
    if sl == 0 {
        return (nl.clone(), nl);
    }
    if sh == 0 {
        return (nh.clone(), nh);
    }
    let out_lo = if sl == sign_lo { nl } else { lo.clone() };
    let out_hi = if sh != sign_lo { nh } else { hi.clone() };
    (out_lo, out_hi)
}

// ---------------------------------------------------------------------------
// Non-real roots: Aberth iteration plus disk certificates.

#[derive(Clone, Debug)]
struct ApproxRoot {
    re: Dyadic,
    im: Dyadic,
}

#[derive(Clone)]
struct CertifiedDisk {
    center_re: Dyadic,
    center_im: Dyadic,
    radius: Dyadic,
}

impl CertifiedDisk {
    fn to_box(&self) -> ComplexBox {
        ComplexBox::new(
            DyadicInterval::new(self.center_re.sub(&self.radius), self.center_re.add(&self.radius)),
            DyadicInterval::new(self.center_im.sub(&self.radius), self.center_im.add(&self.radius)),
        )
    }

    fn strictly_upper(&self) -> bool {
        self.center_im.sub(&self.radius).is_positive()
    }

    fn box_disjoint(&self, other: &CertifiedDisk) -> bool {
        let rr = self.radius.add(&other.radius);
        self.center_re.sub(&other.center_re).abs() > rr
            || self.center_im.sub(&other.center_im).abs() > rr
    }
}

/// Certified boxes for the `want` roots in the open upper half plane,
/// refined to the target width.
fn certified_upper_roots(
    p: &IntPolynomial,
    want: usize,
    target_width: &Dyadic,
) -> Result<Vec<ComplexBox>> {
    let mut prec: u32 = 64;
    let mut approx: Option<Vec<ApproxRoot>> = None;
    loop {
        let roots = aberth(p, prec, approx.take());
        let disks: Vec<CertifiedDisk> =
            certify_disks(p, &roots, prec).into_iter().flatten().filter(|d| d.strictly_upper()).collect();
        let all_disjoint = disks.len() == want
            && disks
                .iter()
                .enumerate()
                .all(|(i, a)| disks.iter().skip(i + 1).all(|b| a.box_disjoint(b)));
        if all_disjoint {
            let mut out = Vec::with_capacity(want);
            for d in &disks {
                out.push(refine_complex(p, d.to_box(), target_width)?);
            }
            return Ok(out);
        }
        approx = Some(roots);
        prec = prec.saturating_mul(2);
        if prec > 4 * MAX_PRECISION_BITS {
            return Err(Error::Undetermined { bits: prec });
        }
    }
}

/// One certified disk per approximation where the certificate applies:
/// the disk around z of radius deg(p)*|p(z)|/|p'(z)| contains a root.
fn certify_disks(p: &IntPolynomial, roots: &[ApproxRoot], prec: u32) -> Vec<Option<CertifiedDisk>> {
    let d = BigInt::from(p.degree().unwrap());
    let dp = p.derivative();
    roots
        .iter()
        .map(|z| {
            let zb = ComplexBox::point(z.re.clone(), z.im.clone());
            let pv = p.eval_on_box_rounded(&zb, Some(4 * prec)).modulus(prec);
            let dv = dp.eval_on_box_rounded(&zb, Some(4 * prec)).modulus(prec);
            if !dv.lo().is_positive() {
                return None;
            }
            let radius = pv.hi().mul_int(&d).div(dv.lo(), prec, Round::Up);
            Some(CertifiedDisk { center_re: z.re.clone(), center_im: z.im.clone(), radius })
        })
        .collect()
}

/// Shrink a certified complex box below the target width by interval
/// Newton: with m the box center, the unique root lies in
/// (m - p(m)/p'(box)) intersect box whenever p' excludes zero over the
/// box, because the divided difference of p along the segment from m to
/// the root stays inside the convex interval image of p'. Intersection
/// makes progress monotone; precision escalation is bounded.
fn refine_complex(p: &IntPolynomial, bx: ComplexBox, target: &Dyadic) -> Result<ComplexBox> {
    let dp = p.derivative();
    let mut best = bx;
    let mut prec = newton_precision(target)
        .max(newton_precision(&best.max_side()))
        .max(64);
    let prec_cap = prec.saturating_mul(16).max(1 << 16);
    let mut stall = 0u32;
    loop {
        if best.max_side() <= *target {
            return Ok(best);
        }
        let (cre, cim) = best.mid();
        let m = ComplexBox::point(cre, cim);
        let pm = p.eval_on_box_rounded(&m, Some(prec));
        let dpb = dp.eval_on_box_rounded(&best, Some(prec));
        let mut contracted = false;
        if dpb.modulus_sq().lo().is_positive() {
            let q = pm.mul(&dpb.recip(prec)).round_out(prec);
            let newton = m.sub(&q);
            if let Some(next) = newton.intersect(&best) {
                if next.max_side() <= best.max_side().mul_pow2(-1) {
                    best = next.round_out(4 * prec.max(64));
                    contracted = true;
                }
            }
        }
        if contracted {
            stall = 0;
            continue;
        }
        stall += 1;
        prec = prec.saturating_mul(2);
        if prec > prec_cap || stall > 24 {
            return Err(Error::Undetermined { bits: prec.min(prec_cap) });
        }
    }
}

fn isolate_fallback(p: &IntPolynomial, bx: &ComplexBox, target: &Dyadic) -> Result<ComplexBox> {
    let all = isolate_all_roots(p, target)?;
    for root in all {
        if bx.contains_box(&root) {
            return Ok(root);
        }
    }
    Err(Error::RootCount { found: 0 })
}

/// Plain (uncertified) complex Horner evaluation with rounding.
fn eval_complex(p: &IntPolynomial, z: &ApproxRoot, prec: u32) -> (Dyadic, Dyadic) {
    let mut re = Dyadic::zero();
    let mut im = Dyadic::zero();
    for c in p.coeffs().iter().rev() {
        let nre = re.mul(&z.re).sub(&im.mul(&z.im)).add(&Dyadic::from_int(c.clone()));
        let nim = re.mul(&z.im).add(&im.mul(&z.re));
        re = nre.round(prec, Round::Down);
        im = nim.round(prec, Round::Down);
    }
    (re, im)
}

/// Aberth-Ehrlich simultaneous iteration at the given working precision.
fn aberth(p: &IntPolynomial, prec: u32, warm: Option<Vec<ApproxRoot>>) -> Vec<ApproxRoot> {
    let n = p.degree().unwrap();
    let dp = p.derivative();
    let mut zs = warm.unwrap_or_else(|| initial_points(p, n));
    let iterations = 48 + 16 * n as u32;
    let tol = Dyadic::pow2(-((prec as i64 * 3) / 4));
    for _ in 0..iterations {
        let mut max_step = Dyadic::zero();
        let snapshot = zs.clone();
        for i in 0..n {
            let z = &snapshot[i];
            let (pre, pim) = eval_complex(p, z, prec);
            if pre.is_zero() && pim.is_zero() {
                continue;
            }
            let (dre, dim) = eval_complex(&dp, z, prec);
            let denom = dre.square().add(&dim.square());
            if denom.is_zero() {
                continue;
            }
            // newton = p/p'
            let nre = pre.mul(&dre).add(&pim.mul(&dim)).div(&denom, prec, Round::Down);
            let nim = pim.mul(&dre).sub(&pre.mul(&dim)).div(&denom, prec, Round::Down);
            // sum of 1/(z - z_j) over the other approximations
            let mut sre = Dyadic::zero();
            let mut sim = Dyadic::zero();
            for (j, w) in snapshot.iter().enumerate() {
                if j == i {
                    continue;
                }
                let dxr = z.re.sub(&w.re);
                let dxi = z.im.sub(&w.im);
                let dd = dxr.square().add(&dxi.square());
                if dd.is_zero() {
                    continue;
                }
                sre = sre.add(&dxr.div(&dd, prec, Round::Down)).round(prec, Round::Down);
                sim = sim.add(&dxi.neg().div(&dd, prec, Round::Down)).round(prec, Round::Down);
            }
            // w = newton / (1 - newton*sum)
            let tre = Dyadic::one().sub(&nre.mul(&sre).sub(&nim.mul(&sim))).round(prec, Round::Down);
            let tim = nre.mul(&sim).add(&nim.mul(&sre)).neg().round(prec, Round::Down);
            let tden = tre.square().add(&tim.square());
            if tden.is_zero() {
                continue;
            }
            let wre = nre.mul(&tre).add(&nim.mul(&tim)).div(&tden, prec, Round::Down);
            let wim = nim.mul(&tre).sub(&nre.mul(&tim)).div(&tden, prec, Round::Down);
            zs[i] = ApproxRoot {
                re: z.re.sub(&wre).round(prec, Round::Down),
                im: z.im.sub(&wim).round(prec, Round::Down),
            };
            let step = Dyadic::max(&wre.abs(), &wim.abs());
            if step > max_step {
                max_step = step;
            }
        }
        if max_step < tol {
            break;
        }
    }
    zs
}

/// Deterministic starting points spread on a circle inside the root bound.
fn initial_points(p: &IntPolynomial, n: usize) -> Vec<ApproxRoot> {
    let bound = p.cauchy_root_bound().to_f64().min(1e100).max(0.5);
    let r = bound * 0.7;
    (0..n)
        .map(|k| {
            let theta =
                2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.41 / (n as f64) + 0.3;
            ApproxRoot {
                re: dyadic_from_f64(r * theta.cos()),
                im: dyadic_from_f64(r * theta.sin() + 0.13),
            }
        })
        .collect()
}

fn dyadic_from_f64(x: f64) -> Dyadic {
    if x == 0.0 || !x.is_finite() {
        return Dyadic::zero();
    }
    let bits = x.to_bits();
    let sign: i64 = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
    Dyadic::new(BigInt::from(sign * mant as i64), e)
}

/// Post-pass: shrink boxes that merely touch (shared endpoints from
/// bisection, or an exact root sitting on a neighbor's edge) until the
/// whole collection is pairwise disjoint.
fn separate_touching_boxes(p: &IntPolynomial, boxes: &mut [ComplexBox]) -> Result<()> {
    let n = boxes.len();
    for i in 0..n {
        for j in i + 1..n {
            let mut guard = 0;
            while !boxes[i].is_disjoint(&boxes[j]) {
                // Refine the wider of the two; distinct roots separate once
                // widths drop below their distance.
                let (a, b) =
                    if boxes[i].max_side() >= boxes[j].max_side() { (i, j) } else { (j, i) };
                let target = if boxes[a].max_side().is_zero() {
                    // Degenerate (exact) box: shrink the other one instead.
                    let bw = boxes[b].max_side().mul_pow2(-4);
                    boxes[b] = refine_certified(p, &boxes[b], &bw)?;
                    guard += 1;
                    if guard > 200 {
                        return Err(Error::Undetermined { bits: MAX_PRECISION_BITS });
                    }
                    continue;
                } else {
                    boxes[a].max_side().mul_pow2(-4)
                };
                boxes[a] = refine_certified(p, &boxes[a], &target)?;
                guard += 1;
                if guard > 200 {
                    return Err(Error::Undetermined { bits: MAX_PRECISION_BITS });
                }
            }
        }
    }
    Ok(())
}

/// Refinement for a box already known to hold exactly one root; skips the
/// expensive certificate re-validation of the public `refine_root`.
pub(crate) fn refine_certified(
    p: &IntPolynomial,
    bx: &ComplexBox,
    target: &Dyadic,
) -> Result<ComplexBox> {
    if bx.max_side() <= *target {
        return Ok(bx.clone());
    }
    if bx.is_real_line() {
        let refined = refine_real_in_box(p, &bx.re, target);
        return Ok(ComplexBox::new(refined, DyadicInterval::point(Dyadic::zero())));
    }
    match refine_complex(p, bx.clone(), target) {
        Ok(out) => Ok(out),
        Err(_) => isolate_fallback(p, bx, target),
    }
}

/// Real-root refinement inside a supplied interval. The interval comes
/// from a certificate, so exactly one root lies inside.
fn refine_real_in_box(p: &IntPolynomial, iv: &DyadicInterval, target: &Dyadic) -> DyadicInterval {
    if iv.is_point() || iv.width() <= *target {
        return iv.clone();
    }
    let lo = iv.lo().clone();
    let hi = iv.hi().clone();
    let sl = p.sign_at(&lo);
    let sh = p.sign_at(&hi);
    if sl == 0 {
        return DyadicInterval::point(lo);
    }
    if sh == 0 {
        return DyadicInterval::point(hi);
    }
    if sl != sh {
        return refine_real_interval(p, &[], lo, hi, target);
    }
    // Same sign at both ends: the root must be an interior point reachable
    // by Sturm subdivision (possible when the caller's box is generous).
    let chain = sturm_chain(p);
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        let m = a.add(&b).mul_pow2(-1);
        if p.sign_at(&m) == 0 {
            return DyadicInterval::point(m);
        }
        let left = count_roots_between(&chain, &a, &m);
        let right = count_roots_between(&chain, &m, &b);
        if left == 1 && p.sign_at(&a) * p.sign_at(&m) < 0 {
            return refine_real_interval(p, &chain, a, m, target);
        }
        if right == 1 && p.sign_at(&m) * p.sign_at(&b) < 0 {
            return refine_real_interval(p, &chain, m, b, target);
        }
        if left > 0 {
            stack.push((a, m.clone()));
        }
        if right > 0 {
            stack.push((m, b));
        }
    }
    iv.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(coeffs)
    }

    fn w(bits: i64) -> Dyadic {
        Dyadic::pow2(-bits)
    }

    #[test]
    fn isolates_x2_plus_1() {
        // Roots +-i.
        let boxes = isolate_all_roots(&poly(&[1, 0, 1]), &w(20)).unwrap();
        assert_eq!(boxes.len(), 2);
        for b in &boxes {
            assert!(b.re.contains(&Dyadic::zero()));
            assert!(b.max_side() <= w(20));
        }
        assert!(boxes.iter().any(|b| b.im.lo().is_positive()));
        assert!(boxes.iter().any(|b| b.im.hi().is_negative()));
    }

    #[test]
    fn isolates_cube_root_of_two() {
        let boxes = isolate_all_roots(&poly(&[-2, 0, 0, 1]), &w(30)).unwrap();
        assert_eq!(boxes.len(), 3);
        let real: Vec<_> = boxes.iter().filter(|b| b.is_real_line()).collect();
        assert_eq!(real.len(), 1);
        // 2^(1/3) = 1.2599210...
        let r = &real[0].re;
        assert!(r.lo().to_f64() < 1.2599212 && r.hi().to_f64() > 1.2599209);
        // Conjugate pair at -0.62996 +- 1.09112i.
        let upper: Vec<_> = boxes.iter().filter(|b| b.im.lo().is_positive()).collect();
        assert_eq!(upper.len(), 1);
        assert!((upper[0].re.midpoint().to_f64() + 0.62996).abs() < 1e-4);
        assert!((upper[0].im.midpoint().to_f64() - 1.09112).abs() < 1e-4);
    }

    #[test]
    fn isolates_quadratic_surd_pair() {
        // x^2 - 4x + 2: roots 2 +- sqrt 2 = 0.585786..., 3.414213...
        let boxes = isolate_all_roots(&poly(&[2, -4, 1]), &w(30)).unwrap();
        assert_eq!(boxes.len(), 2);
        assert!(boxes.iter().all(|b| b.is_real_line()));
        let mid: Vec<f64> = boxes.iter().map(|b| b.re.midpoint().to_f64()).collect();
        assert!((mid[0] - 0.5857864).abs() < 1e-6);
        assert!((mid[1] - 3.4142135).abs() < 1e-6);
    }

    #[test]
    fn rejects_non_squarefree_and_constants() {
        assert!(matches!(isolate_all_roots(&poly(&[1, 2, 1]), &w(10)), Err(Error::NotSquarefree)));
        assert!(isolate_all_roots(&poly(&[3]), &w(10)).is_err());
        assert!(isolate_all_roots(&IntPolynomial::zero(), &w(10)).is_err());
    }

    #[test]
    fn exact_dyadic_roots_become_points() {
        // x(x-5)(2x-1): roots 0, 5, 0.5 all dyadic.
        let f = poly(&[0, 1]).mul(&poly(&[-5, 1])).mul(&poly(&[-1, 2]));
        let boxes = isolate_all_roots(&f, &w(16)).unwrap();
        assert_eq!(boxes.len(), 3);
        for b in &boxes {
            assert!(b.is_real_line());
        }
        let points: Vec<f64> = boxes.iter().map(|b| b.re.midpoint().to_f64()).collect();
        for target in [0.0, 0.5, 5.0] {
            assert!(points.iter().any(|&v| (v - target).abs() < 1e-4), "missing {target}");
        }
    }

    #[test]
    fn refine_root_shrinks_and_stays_inside() {
        let f = poly(&[-2, 0, 1]);
        let start = ComplexBox::new(
            DyadicInterval::new(Dyadic::from_int(1), Dyadic::from_int(2)),
            DyadicInterval::point(Dyadic::zero()),
        );
        let refined = refine_root(&f, &start, &w(64)).unwrap();
        assert!(start.contains_box(&refined));
        assert!(refined.max_side() <= w(64));
        // sqrt(2) = 1.41421356...
        let r = refined.re.midpoint().to_f64();
        assert!((r - 1.41421356).abs() < 1e-7);
    }

    #[test]
    fn refine_root_rejects_bad_certificates() {
        let f = poly(&[-2, 0, 1]);
        let both = ComplexBox::new(
            DyadicInterval::new(Dyadic::from_int(-10), Dyadic::from_int(10)),
            DyadicInterval::new(Dyadic::from_int(-1), Dyadic::from_int(1)),
        );
        assert!(matches!(refine_root(&f, &both, &w(10)), Err(Error::RootCount { found: 2 })));
        let none = ComplexBox::new(
            DyadicInterval::new(Dyadic::from_int(5), Dyadic::from_int(6)),
            DyadicInterval::point(Dyadic::zero()),
        );
        assert!(matches!(refine_root(&f, &none, &w(10)), Err(Error::RootCount { found: 0 })));
    }

    #[test]
    fn refine_linear_exact_root() {
        let f = poly(&[-5, 1]);
        let start = ComplexBox::new(
            DyadicInterval::new(Dyadic::from_int(4), Dyadic::from_int(6)),
            DyadicInterval::point(Dyadic::zero()),
        );
        let refined = refine_root(&f, &start, &w(80)).unwrap();
        assert!(refined.re.contains(&Dyadic::from_int(5)));
        assert!(refined.max_side() <= w(80));
    }

    #[test]
    fn refine_to_100_bits() {
        // 2 + sqrt 2 to 100 bits.
        let f = poly(&[2, -4, 1]);
        let start = ComplexBox::new(
            DyadicInterval::new(Dyadic::from_int(3), Dyadic::from_int(4)),
            DyadicInterval::point(Dyadic::zero()),
        );
        let refined = refine_root(&f, &start, &w(100)).unwrap();
        assert!(refined.max_side() <= w(100));
        let lo = f.sign_at(refined.re.lo());
        let hi = f.sign_at(refined.re.hi());
        assert!(lo * hi <= 0);
    }

    #[test]
    fn count_roots_in_boxes() {
        let f = poly(&[-2, 0, 1]);
        let around_sqrt2 = ComplexBox::new(
            DyadicInterval::new(Dyadic::from_int(1), Dyadic::from_int(2)),
            DyadicInterval::new(Dyadic::from_int(-1), Dyadic::from_int(1)),
        );
        assert_eq!(count_roots_in_box(&f, &around_sqrt2).unwrap(), 1);
        let everything = ComplexBox::new(
            DyadicInterval::new(Dyadic::from_int(-4), Dyadic::from_int(4)),
            DyadicInterval::new(Dyadic::from_int(-4), Dyadic::from_int(4)),
        );
        assert_eq!(count_roots_in_box(&f, &everything).unwrap(), 2);
    }

    #[test]
    fn conjugate_symmetry_of_outputs() {
        // x^4+x+1 has two conjugate pairs.
        let f = poly(&[1, 1, 0, 0, 1]);
        let boxes = isolate_all_roots(&f, &w(24)).unwrap();
        assert_eq!(boxes.len(), 4);
        for b in &boxes {
            let mirror = b.conj_box();
            assert!(
                boxes.iter().any(|c| c.re == mirror.re && c.im == mirror.im),
                "missing conjugate mirror"
            );
        }
    }

    #[test]
    fn boxes_are_pairwise_disjoint() {
        let f = poly(&[-1, 1])
            .mul(&poly(&[-2, 1]))
            .mul(&poly(&[-3, 1]))
            .mul(&poly(&[-4, 1]))
            .mul(&poly(&[-5, 1]));
        let boxes = isolate_all_roots(&f, &w(20)).unwrap();
        assert_eq!(boxes.len(), 5);
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                assert!(boxes[i].is_disjoint(&boxes[j]), "boxes {i} and {j} overlap");
            }
        }
    }

    #[test]
    fn mixed_real_and_complex() {
        // (x^2+1)(x-3)(x+7)
        let f = poly(&[1, 0, 1]).mul(&poly(&[-3, 1])).mul(&poly(&[7, 1]));
        let boxes = isolate_all_roots(&f, &w(24)).unwrap();
        assert_eq!(boxes.len(), 4);
        let real: Vec<_> = boxes.iter().filter(|b| b.is_real_line()).collect();
        assert_eq!(real.len(), 2);
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                assert!(boxes[i].is_disjoint(&boxes[j]));
            }
        }
    }
}
