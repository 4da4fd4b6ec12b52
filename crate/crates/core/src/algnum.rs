//! Algebraic numbers as (irreducible minimal polynomial, isolating box)
//! pairs, with the measures defined on them: degree, conjugates, house,
//! Mahler measure, Weil height, exact field arithmetic through resultant
//! constructions, the directed real part, and conjugacy testing.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{interval_log2, ComplexBox, Dyadic, DyadicInterval, LogMagnitude, Round};
use crate::intpoly::{self, resultant_y, IntPolynomial};
use crate::rootbox;
use crate::{Error, Result, MAX_PRECISION_BITS};

/// An algebraic number: canonical irreducible minimal polynomial plus a
/// box certified to contain exactly one of its roots.
#[derive(Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AlgebraicNumber {
    minpoly: IntPolynomial,
    #[serde(rename = "box")]
    enclosure: ComplexBox,
}

impl std::fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "AlgebraicNumber({} @ ~{}+{}i)",
            self.minpoly,
            self.enclosure.re.midpoint().to_f64(),
            self.enclosure.im.midpoint().to_f64()
        )
    }
}

impl AlgebraicNumber {
    /// Validating constructor: the polynomial must be irreducible (checked
    /// through the factorization fast paths) and the box must contain
    /// exactly one of its roots.
    pub fn make(minpoly: IntPolynomial, enclosure: ComplexBox) -> Result<AlgebraicNumber> {
        if minpoly.is_zero() || minpoly.is_constant() {
            return Err(Error::InvalidInput("minimal polynomial must have degree >= 1".into()));
        }
        let canonical = minpoly.canonical();
        if !intpoly::is_irreducible(&canonical)? {
            return Err(Error::ReducibleMinimalPolynomial);
        }
        let found = rootbox::count_roots_in_box(&canonical, &enclosure)?;
        if found != 1 {
            return Err(Error::RootCount { found });
        }
        // Store a tightened certified enclosure inside the caller's box.
        let tight = rootbox::refine_root(&canonical, &enclosure, &pick_width(&enclosure))?;
        Ok(AlgebraicNumber { minpoly: canonical, enclosure: tight })
    }

    pub fn from_integer<T: Into<BigInt>>(v: T) -> AlgebraicNumber {
        let v = v.into();
        AlgebraicNumber {
            minpoly: IntPolynomial::linear_from_root(&v),
            enclosure: ComplexBox::real_point(Dyadic::from_int(v)),
        }
    }

    pub fn from_rational(r: &BigRational) -> AlgebraicNumber {
        let minpoly = IntPolynomial::from_coeffs(vec![-r.numer(), r.denom().clone()]).canonical();
        AlgebraicNumber { enclosure: rational_box(r, 96), minpoly }
    }

    pub fn zero() -> AlgebraicNumber {
        AlgebraicNumber::from_integer(0)
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn enclosure(&self) -> &ComplexBox {
        &self.enclosure
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap()
    }

    /// Algebraic integers are exactly the monic minimal polynomials.
    pub fn is_algebraic_integer(&self) -> bool {
        self.minpoly.is_monic()
    }

    pub fn is_zero(&self) -> bool {
        self.minpoly == IntPolynomial::x()
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.degree() != 1 {
            return None;
        }
        Some(BigRational::new(-self.minpoly.coeff(0), self.minpoly.coeff(1)))
    }

    /// Conjugacy is an exact syntactic check on canonical minimal
    /// polynomials.
    pub fn is_conjugate(&self, other: &AlgebraicNumber) -> bool {
        self.minpoly == other.minpoly
    }

    /// Certified enclosure with both box sides at most `width`.
    pub fn refined(&self, width: &Dyadic) -> Result<ComplexBox> {
        rootbox::refine_certified(&self.minpoly, &self.enclosure, width)
    }

    /// Isolating boxes for every conjugate, one of which encloses this
    /// number itself.
    pub fn conjugates(&self, width: &Dyadic) -> Result<Vec<ComplexBox>> {
        rootbox::isolate_all_roots(&self.minpoly, width)
    }

    /// Certified |self| with relative width at most `rel_tol` (exact for
    /// zero).
    pub fn modulus(&self, rel_tol: &Dyadic) -> Result<DyadicInterval> {
        if self.is_zero() {
            return Ok(DyadicInterval::zero());
        }
        let mut bits: u32 = 32;
        loop {
            let bx = self.refined(&Dyadic::pow2(-(bits as i64)))?;
            let prec = bits + 16;
            let m = bx.modulus(prec);
            if m.lo().is_positive() && m.rel_width_le(rel_tol) {
                return Ok(m);
            }
            bits = escalate(bits)?;
        }
    }

    /// Certified log2 |self| to about `frac_bits` fractional bits;
    /// requires self != 0.
    pub fn log2_modulus(&self, frac_bits: u32) -> Result<DyadicInterval> {
        if self.is_zero() {
            return Err(Error::InvalidInput("log of zero".into()));
        }
        let mut bits = frac_bits + 8;
        loop {
            let bx = self.refined(&Dyadic::pow2(-(bits as i64)))?;
            let m = bx.modulus(bits + 16);
            if m.lo().is_positive() {
                let l = interval_log2(&m, frac_bits + 4)?;
                if l.width() <= Dyadic::pow2(-(frac_bits as i64)) {
                    return Ok(l);
                }
            }
            bits = escalate(bits)?;
        }
    }

    /// The house: maximum modulus among the conjugates, as a certified
    /// interval of relative width at most `rel_tol`.
    pub fn house(&self, rel_tol: &Dyadic) -> Result<DyadicInterval> {
        if self.is_zero() {
            return Ok(DyadicInterval::zero());
        }
        let mut bits: u32 = 24;
        loop {
            let width = Dyadic::pow2(-(bits as i64));
            let prec = bits + 16;
            let conj = self.conjugates(&width)?;
            let mut acc: Option<DyadicInterval> = None;
            for b in &conj {
                let m = b.modulus(prec);
                acc = Some(match acc {
                    None => m,
                    Some(a) => a.max_with(&m),
                });
            }
            let acc = acc.expect("degree >= 1 has conjugates");
            if acc.rel_width_le(rel_tol) {
                return Ok(acc);
            }
            bits = escalate(bits)?;
        }
    }

    /// Certified check that the house is attained by this number itself:
    /// every other conjugate has certifiably smaller modulus or is a
    /// structural twin (mirror or negation) of equal modulus.
    pub fn house_attained_here(&self) -> Result<bool> {
        let mut bits: u32 = 24;
        loop {
            let width = Dyadic::pow2(-(bits as i64));
            let own = self.refined(&width)?;
            let prec = bits + 16;
            let own_m = own.modulus(prec);
            let twins = [own.clone(), own.conj_box(), own.neg(), own.conj_box().neg()];
            let mut undecided = false;
            for b in self.conjugates(&width)? {
                if twins.iter().any(|t| !t.is_disjoint(&b)) {
                    continue; // equal modulus by symmetry
                }
                let m = b.modulus(prec);
                if m.certainly_lt(&own_m) {
                    continue;
                }
                if own_m.certainly_lt(&m) {
                    return Ok(false);
                }
                undecided = true;
            }
            if !undecided {
                return Ok(true);
            }
            bits = escalate(bits)?;
        }
    }

    /// Mahler measure in log2 domain: log2 |lead| + sum of positive parts
    /// of log2 |conjugate|; certified, lower endpoint clamped at M = 1.
    pub fn mahler_measure(&self, rel_tol: &Dyadic) -> Result<LogMagnitude> {
        // Sufficient condition for relative width of M: a log2 width w
        // gives M_hi/M_lo = 2^w <= 1 + tol whenever w <= tol/2 (tol <= 2).
        let log_target = rel_tol.mul_pow2(-1);
        let mut bits: u32 = 32;
        loop {
            let width = Dyadic::pow2(-(bits as i64));
            let prec = bits + 16;
            let conj = self.conjugates(&width)?;
            let mut acc = lead_log2(self.minpoly.leading(), prec)?;
            let one = DyadicInterval::point(Dyadic::one());
            for b in &conj {
                let m = b.modulus(prec).max_with(&one);
                let l = interval_log2(&m, prec)?;
                acc = acc.mul(&LogMagnitude::from_log2_interval(l));
            }
            let acc = acc.clamp_at_one();
            if acc.width() <= log_target {
                return Ok(acc);
            }
            bits = escalate(bits)?;
        }
    }

    /// Weil height through the identity H = M^(1/d).
    pub fn weil_height(&self, rel_tol: &Dyadic) -> Result<LogMagnitude> {
        let d = self.degree() as u64;
        let m = self.mahler_measure(rel_tol)?;
        Ok(m.root_int(d, MAX_PRECISION_BITS))
    }

    pub fn neg(&self) -> AlgebraicNumber {
        AlgebraicNumber {
            minpoly: self.minpoly.compose_neg().canonical(),
            enclosure: self.enclosure.neg(),
        }
    }

    /// Reciprocal by coefficient reversal; degree-preserving.
    pub fn recip(&self) -> Result<AlgebraicNumber> {
        if self.is_zero() {
            return Err(Error::ReciprocalOfZero);
        }
        let minpoly = self.minpoly.reversed().canonical();
        // Refine until the box excludes the origin, then map it through 1/z.
        let mut bits: u32 = 16;
        loop {
            let b = self.refined(&Dyadic::pow2(-(bits as i64)))?;
            if !b.contains_zero() {
                break;
            }
            bits = escalate(bits)?;
        }
        let image = |bits: u32| -> Result<ComplexBox> {
            let mut w = bits;
            loop {
                let b = self.refined(&Dyadic::pow2(-(w as i64)))?;
                if !b.contains_zero() {
                    return Ok(b.recip(w + 16));
                }
                w = escalate(w)?;
            }
        };
        let enclosure = select_root_box(&minpoly, bits, image)?;
        Ok(AlgebraicNumber { minpoly, enclosure })
    }

    pub fn add(&self, other: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        // Rational fast paths keep partial-sum chains cheap and exact.
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return Ok(AlgebraicNumber::from_rational(&(a + b)));
        }
        if let Some(r) = other.as_rational() {
            return self.add_rational(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.add_rational(&r);
        }
        let degree_cap = self.degree() * other.degree();
        if degree_cap > intpoly::FACTOR_DEGREE_CEILING {
            return Err(Error::FactorizationCeiling {
                degree: degree_cap,
                ceiling: intpoly::FACTOR_DEGREE_CEILING,
            });
        }
        // Eliminate y from p(y), q(x - y).
        let py: Vec<IntPolynomial> =
            self.minpoly.coeffs().iter().map(|c| IntPolynomial::constant(c.clone())).collect();
        let resultant = resultant_y(&py, &shifted_coeffs(&other.minpoly));
        let sum_image = |bits: u32| -> Result<ComplexBox> {
            let w = Dyadic::pow2(-(bits as i64));
            Ok(self.refined(&w)?.add(&other.refined(&w)?))
        };
        construct_from_resultant(&resultant, sum_image)
    }

    pub fn sub(&self, other: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        if self.is_zero() || other.is_zero() {
            return Ok(AlgebraicNumber::zero());
        }
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return Ok(AlgebraicNumber::from_rational(&(a * b)));
        }
        if let Some(r) = other.as_rational() {
            return self.mul_rational(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.mul_rational(&r);
        }
        let degree_cap = self.degree() * other.degree();
        if degree_cap > intpoly::FACTOR_DEGREE_CEILING {
            return Err(Error::FactorizationCeiling {
                degree: degree_cap,
                ceiling: intpoly::FACTOR_DEGREE_CEILING,
            });
        }
        // Eliminate y from p(y), y^e q(x/y).
        let e = other.degree();
        let py: Vec<IntPolynomial> =
            self.minpoly.coeffs().iter().map(|c| IntPolynomial::constant(c.clone())).collect();
        let qy: Vec<IntPolynomial> = (0..=e)
            .map(|j| {
                let c = other.minpoly.coeff(e - j);
                if c.is_zero() {
                    IntPolynomial::zero()
                } else {
                    IntPolynomial::constant(c).shift_up(e - j)
                }
            })
            .collect();
        let resultant = resultant_y(&py, &qy);
        let prod_image = |bits: u32| -> Result<ComplexBox> {
            let w = Dyadic::pow2(-(bits as i64));
            Ok(self.refined(&w)?.mul(&other.refined(&w)?))
        };
        construct_from_resultant(&resultant, prod_image)
    }

    /// self + p/q by direct substitution into the minimal polynomial.
    fn add_rational(&self, r: &BigRational) -> Result<AlgebraicNumber> {
        if r.is_zero() {
            return Ok(self.clone());
        }
        let d = self.degree();
        let q = r.denom();
        let p = r.numer();
        // m(x - r) cleared to integers: Horner in Z[x] with weights q^(d-i).
        let lin = IntPolynomial::from_coeffs(vec![-p, q.clone()]); // q x - p
        let mut acc = IntPolynomial::zero();
        for i in (0..=d).rev() {
            acc = acc.mul(&lin);
            let w = self.minpoly.coeff(i) * q.pow((d - i) as u32);
            acc = acc.add(&IntPolynomial::constant(w));
        }
        let minpoly = acc.canonical();
        let image = |bits: u32| -> Result<ComplexBox> {
            let w = Dyadic::pow2(-(bits as i64));
            Ok(self.refined(&w)?.add(&rational_box(r, bits + 16)))
        };
        let enclosure = select_root_box(&minpoly, 32, image)?;
        Ok(AlgebraicNumber { minpoly, enclosure })
    }

    /// self * p/q by the substitution x -> q x / p.
    fn mul_rational(&self, r: &BigRational) -> Result<AlgebraicNumber> {
        if r.is_zero() {
            return Ok(AlgebraicNumber::zero());
        }
        if r.is_one() {
            return Ok(self.clone());
        }
        let d = self.degree();
        let p = r.numer();
        let q = r.denom();
        let coeffs: Vec<BigInt> = (0..=d)
            .map(|i| self.minpoly.coeff(i) * q.pow(i as u32) * p.pow((d - i) as u32))
            .collect();
        let minpoly = IntPolynomial::from_coeffs(coeffs).canonical();
        let image = |bits: u32| -> Result<ComplexBox> {
            let w = Dyadic::pow2(-(bits as i64));
            Ok(self.refined(&w)?.mul(&rational_box(r, bits + 16)))
        };
        let enclosure = select_root_box(&minpoly, 32, image)?;
        Ok(AlgebraicNumber { minpoly, enclosure })
    }
}

/// Re_zeta(z) = Re(conj(zeta) * z), the signed component of z in the
/// direction of zeta; zeta's enclosure must meet the unit circle.
pub fn re_zeta(zeta: &ComplexBox, z: &ComplexBox) -> Result<DyadicInterval> {
    let msq = zeta.modulus_sq();
    let one = Dyadic::one();
    if !(msq.lo() <= &one && &one <= msq.hi()) {
        return Err(Error::InvalidInput(
            "zeta enclosure is not certified to meet the unit circle".into(),
        ));
    }
    Ok(zeta.re.mul(&z.re).add(&zeta.im.mul(&z.im)))
}

// ---------------------------------------------------------------------------
// Construction helpers.

fn pick_width(bx: &ComplexBox) -> Dyadic {
    let w = bx.max_side();
    if w.is_zero() || w > Dyadic::pow2(-24) {
        Dyadic::pow2(-24)
    } else {
        w
    }
}

fn escalate(bits: u32) -> Result<u32> {
    let next = bits.saturating_mul(2);
    if next > MAX_PRECISION_BITS {
        return Err(Error::Undetermined { bits: MAX_PRECISION_BITS });
    }
    Ok(next)
}

/// log2 |lead| as a LogMagnitude (exactly zero for lead = +-1).
fn lead_log2(lead: &BigInt, prec: u32) -> Result<LogMagnitude> {
    let a = lead.abs();
    if a.is_one() {
        return Ok(LogMagnitude::one());
    }
    let point = DyadicInterval::point(Dyadic::from_int(a));
    LogMagnitude::from_interval(&point, prec)
}

/// A certified dyadic box around a rational point on the real line.
fn rational_box(r: &BigRational, bits: u32) -> ComplexBox {
    let num = Dyadic::from_int(r.numer().clone());
    let den = Dyadic::from_int(r.denom().clone());
    let lo = num.div(&den, bits, Round::Down);
    let hi = num.div(&den, bits, Round::Up);
    ComplexBox::new(DyadicInterval::new(lo, hi), DyadicInterval::point(Dyadic::zero()))
}

/// Expand q(x - y) as a polynomial in y with Z[x] coefficients.
fn shifted_coeffs(q: &IntPolynomial) -> Vec<IntPolynomial> {
    let e = q.degree().unwrap();
    let mut out = vec![IntPolynomial::zero(); e + 1];
    // (x - y)^k = sum_j C(k,j) x^(k-j) (-1)^j y^j.
    for (j, slot) in out.iter_mut().enumerate() {
        let mut coeffs_x: Vec<BigInt> = Vec::new();
        for k in j..=e {
            let qk = q.coeff(k);
            if qk.is_zero() {
                continue;
            }
            let sign = if j % 2 == 1 { -BigInt::one() } else { BigInt::one() };
            let c = binomial(k, j) * &qk * sign;
            let deg_x = k - j;
            if coeffs_x.len() <= deg_x {
                coeffs_x.resize(deg_x + 1, BigInt::zero());
            }
            coeffs_x[deg_x] += c;
        }
        *slot = IntPolynomial::from_coeffs(coeffs_x);
    }
    out
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Resolve a resultant construction: factor the eliminant, then refine the
/// operand image until exactly one irreducible factor admits the value,
/// and return that factor with a certified root box.
fn construct_from_resultant(
    resultant: &IntPolynomial,
    image: impl Fn(u32) -> Result<ComplexBox>,
) -> Result<AlgebraicNumber> {
    if resultant.is_zero() {
        return Err(Error::InvalidInput("degenerate resultant construction".into()));
    }
    let factors = intpoly::factorize(resultant)?;
    let candidates: Vec<&IntPolynomial> = factors.iter().map(|(g, _)| g).collect();
    let mut bits: u32 = 32;
    loop {
        let img = image(bits)?.round_out(4 * bits);
        let viable: Vec<&&IntPolynomial> = candidates
            .iter()
            .filter(|g| g.eval_on_box_rounded(&img, Some(4 * bits)).contains_zero())
            .collect();
        match viable.len() {
            0 => return Err(Error::Undetermined { bits }),
            1 => {
                let minpoly = (*viable[0]).clone();
                let enclosure = select_root_box(&minpoly, bits, image)?;
                return Ok(AlgebraicNumber { minpoly, enclosure });
            }
            _ => {
                bits = escalate(bits)?;
            }
        }
    }
}

/// Pick the unique root box of `minpoly` meeting the operand image,
/// escalating the image precision until the match is unambiguous. The
/// value is known to lie in every image box and to be a root, so the
/// surviving root box is its certified enclosure.
fn select_root_box(
    minpoly: &IntPolynomial,
    start_bits: u32,
    image: impl Fn(u32) -> Result<ComplexBox>,
) -> Result<ComplexBox> {
    let mut bits = start_bits.max(16);
    loop {
        let img = image(bits)?;
        let width = Dyadic::max(&img.max_side(), &Dyadic::pow2(-(bits as i64)));
        let roots = rootbox::isolate_all_roots(minpoly, &width)?;
        let meets: Vec<&ComplexBox> = roots.iter().filter(|r| !r.is_disjoint(&img)).collect();
        if meets.len() == 1 {
            return Ok(meets[0].clone());
        }
        bits = escalate(bits)?;
    }
}
