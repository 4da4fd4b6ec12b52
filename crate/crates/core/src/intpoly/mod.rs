//! Exact univariate polynomials over the integers: ring arithmetic,
//! resultants, squarefree decomposition, factorization over Q, and
//! outward-rounded interval evaluation on complex boxes.

mod factor;

pub use factor::{factorize, is_irreducible, FACTOR_DEGREE_CEILING};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{ComplexBox, Dyadic, DyadicInterval};
use crate::{Error, Result};

/// A univariate polynomial with arbitrary-precision integer coefficients,
/// stored ascending by degree with no trailing zero; the zero polynomial
/// is the empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> IntPolynomial {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> IntPolynomial {
        IntPolynomial { coeffs: vec![BigInt::one()] }
    }

    /// The monomial x.
    pub fn x() -> IntPolynomial {
        IntPolynomial { coeffs: vec![BigInt::zero(), BigInt::one()] }
    }

    pub fn constant(c: BigInt) -> IntPolynomial {
        IntPolynomial::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> IntPolynomial {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// x - r for an integer r.
    pub fn linear_from_root(r: &BigInt) -> IntPolynomial {
        IntPolynomial::from_coeffs(vec![-r, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, BigInt::is_one)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        IntPolynomial::from_coeffs(out)
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        IntPolynomial::from_coeffs(out)
    }

    pub fn neg(&self) -> IntPolynomial {
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::from_coeffs(out)
    }

    pub fn mul_scalar(&self, k: &BigInt) -> IntPolynomial {
        if k.is_zero() {
            return IntPolynomial::zero();
        }
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Multiply by x^k.
    pub fn shift_up(&self, k: usize) -> IntPolynomial {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs: out }
    }

    pub fn pow(&self, mut e: u32) -> IntPolynomial {
        let mut base = self.clone();
        let mut acc = IntPolynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self) -> IntPolynomial {
        if self.coeffs.len() <= 1 {
            return IntPolynomial::zero();
        }
        IntPolynomial::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i + 1))
                .collect(),
        )
    }

    /// p(-x).
    pub fn compose_neg(&self) -> IntPolynomial {
        IntPolynomial::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Coefficient reversal x^deg * p(1/x).
    pub fn reversed(&self) -> IntPolynomial {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPolynomial::from_coeffs(c)
    }

    /// gcd of all coefficients, nonnegative; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide out the content; zero stays zero.
    pub fn primitive_part(&self) -> IntPolynomial {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    /// Primitive with positive leading coefficient: the canonical form
    /// used for minimal polynomials.
    pub fn canonical(&self) -> IntPolynomial {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let p = self.primitive_part();
        if p.leading().is_negative() {
            p.neg()
        } else {
            p
        }
    }

    /// Exact division: Some(q) with self = q*other, or None.
    pub fn exact_div(&self, other: &IntPolynomial) -> Option<IntPolynomial> {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPolynomial::zero());
        }
        let dd = other.degree().unwrap();
        let dn = self.degree().unwrap();
        if dn < dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); dn - dd + 1];
        let lead = other.leading();
        for k in (0..=dn - dd).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in other.coeffs.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(IntPolynomial::from_coeffs(quot))
        } else {
            None
        }
    }

    pub fn divides(&self, other: &IntPolynomial) -> bool {
        other.exact_div(self).is_some()
    }

    /// Pseudo-remainder: lead(d)^(deg n - deg d + 1) * n mod d, computed
    /// in integer arithmetic.
    pub fn pseudo_rem(&self, d: &IntPolynomial) -> IntPolynomial {
        assert!(!d.is_zero());
        let dd = d.degree().unwrap();
        let mut r = self.clone();
        let lead = d.leading().clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let shift = dr - dd;
            let top = r.leading().clone();
            r = r.mul_scalar(&lead).sub(&d.shift_up(shift).mul_scalar(&top));
        }
        r
    }

    /// Primitive-PRS gcd, returned canonical (primitive, positive lead),
    /// with content gcd folded back in.
    pub fn gcd(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() {
            return other.canonical();
        }
        if other.is_zero() {
            return self.canonical();
        }
        let cont = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        let mut g = a.canonical();
        if !cont.is_one() {
            g = g.mul_scalar(&cont);
        }
        g
    }

    /// self / gcd(self, self'): primitive, positive leading coefficient,
    /// same roots with all multiplicities collapsed to one.
    pub fn squarefree_part(&self) -> Result<IntPolynomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(IntPolynomial::one());
        }
        let g = self.gcd(&self.derivative());
        let q = self
            .exact_div(&g)
            .or_else(|| self.mul_scalar(&g.content().max(BigInt::one())).exact_div(&g))
            .expect("gcd divides the polynomial");
        Ok(q.canonical())
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// Yun's squarefree decomposition: pairwise-coprime squarefree factors
    /// with multiplicities, product reconstructing the canonical input.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(IntPolynomial, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p = self.canonical();
        if p.is_constant() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut b = p.exact_div(&a0).expect("gcd divides");
        let mut c = dp.exact_div(&a0).expect("gcd divides derivative");
        let mut i = 1u32;
        loop {
            let d = c.sub(&b.derivative());
            if d.is_zero() {
                if b.degree() != Some(0) {
                    out.push((b.canonical(), i));
                }
                break;
            }
            let a = b.gcd(&d);
            if a.degree() != Some(0) {
                out.push((a.canonical(), i));
            }
            b = b.exact_div(&a).expect("factor divides");
            c = d.exact_div(&a).expect("factor divides");
            i += 1;
        }
        Ok(out)
    }

    /// Resultant of self and other, exact, via fraction-free elimination on
    /// the Sylvester matrix: equals lead(p)^deg q * lead(q)^deg p * prod
    /// over root pairs of (alpha_i - beta_j).
    pub fn resultant(&self, other: &IntPolynomial) -> Result<BigInt> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let m = self.degree().unwrap();
        let n = other.degree().unwrap();
        if m == 0 {
            return Ok(self.leading().pow(n as u32));
        }
        if n == 0 {
            return Ok(other.leading().pow(m as u32));
        }
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        // n rows of p's coefficients, descending powers.
        for (r, row) in mat.iter_mut().enumerate().take(n) {
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                row[r + k] = c.clone();
            }
        }
        // m rows of q's coefficients.
        for r in 0..m {
            for (k, c) in other.coeffs.iter().rev().enumerate() {
                mat[n + r][r + k] = c.clone();
            }
        }
        Ok(bareiss_determinant_int(mat))
    }

    pub fn evaluate_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn evaluate_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact evaluation at a dyadic point.
    pub fn evaluate_dyadic(&self, x: &Dyadic) -> Dyadic {
        let mut acc = Dyadic::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&Dyadic::from_int(c.clone()));
        }
        acc
    }

    /// Sign of p(x) at a dyadic point, exact.
    pub fn sign_at(&self, x: &Dyadic) -> i32 {
        self.evaluate_dyadic(x).sign()
    }

    /// Interval Horner evaluation: the returned box contains p(z) for every
    /// z in the input box. Exact interval arithmetic (no rounding).
    pub fn eval_on_box(&self, z: &ComplexBox) -> ComplexBox {
        self.eval_on_box_rounded(z, None)
    }

    /// Interval Horner with optional outward rounding per step, for long
    /// chains where exact mantissas would balloon.
    pub fn eval_on_box_rounded(&self, z: &ComplexBox, prec: Option<u32>) -> ComplexBox {
        let mut acc = ComplexBox::point(Dyadic::zero(), Dyadic::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z);
            acc.re = acc.re.add(&DyadicInterval::point(Dyadic::from_int(c.clone())));
            if let Some(p) = prec {
                acc = acc.round_out(p);
            }
        }
        acc
    }

    /// Interval evaluation over a real interval.
    pub fn eval_on_interval(&self, x: &DyadicInterval) -> DyadicInterval {
        let mut acc = DyadicInterval::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&DyadicInterval::point(Dyadic::from_int(c.clone())));
        }
        acc
    }

    /// Cauchy root bound: all complex roots have |z| < 1 + max|c_i|/|lead|,
    /// returned as an exact dyadic upper bound.
    pub fn cauchy_root_bound(&self) -> Dyadic {
        let d = self.degree().expect("root bound of zero polynomial");
        if d == 0 {
            return Dyadic::one();
        }
        let lead = self.leading().abs();
        let mut max = BigInt::zero();
        for c in &self.coeffs[..d] {
            let a = c.abs();
            if a > max {
                max = a;
            }
        }
        // ceil(max/lead) + 1 bounds 1 + max/lead.
        let q = max.div_ceil(&lead);
        Dyadic::from_int(q + 1)
    }

    /// JSON-friendly coefficient strings, ascending degree.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_coeff_strings(strs: &[String]) -> Result<IntPolynomial> {
        let mut coeffs = Vec::with_capacity(strs.len());
        for s in strs {
            coeffs.push(
                s.trim()
                    .parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("bad coefficient {s:?}: {e}")))?,
            );
        }
        Ok(IntPolynomial::from_coeffs(coeffs))
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 => {
                    if a.is_one() {
                        write!(f, "x")?
                    } else {
                        write!(f, "{a}x")?
                    }
                }
                _ => {
                    if a.is_one() {
                        write!(f, "x^{i}")?
                    } else {
                        write!(f, "{a}x^{i}")?
                    }
                }
            }
        }
        Ok(())
    }
}

impl serde::Serialize for IntPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeff_strings().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for IntPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<IntPolynomial, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        IntPolynomial::from_coeff_strings(&strs).map_err(serde::de::Error::custom)
    }
}

/// Fraction-free (Bareiss) determinant over the integers.
fn bareiss_determinant_int(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Fraction-free determinant over Z[x], for resultants of bivariate
/// constructions (sum/product minimal polynomials).
pub(crate) fn bareiss_determinant_poly(mut m: Vec<Vec<IntPolynomial>>) -> IntPolynomial {
    let n = m.len();
    if n == 0 {
        return IntPolynomial::one();
    }
    let mut sign = 1i32;
    let mut prev = IntPolynomial::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return IntPolynomial::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.exact_div(&prev).expect("Bareiss division must be exact");
            }
            m[i][k] = IntPolynomial::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        det.neg()
    } else {
        det
    }
}

/// Resultant in y of two polynomials with Z[x] coefficients, given as
/// vectors of Z[x] coefficients ascending in y.
pub(crate) fn resultant_y(py: &[IntPolynomial], qy: &[IntPolynomial]) -> IntPolynomial {
    let trim = |v: &[IntPolynomial]| {
        let mut n = v.len();
        while n > 0 && v[n - 1].is_zero() {
            n -= 1;
        }
        v[..n].to_vec()
    };
    let p = trim(py);
    let q = trim(qy);
    assert!(!p.is_empty() && !q.is_empty(), "resultant_y of zero polynomial");
    let m = p.len() - 1;
    let n = q.len() - 1;
    if m == 0 {
        return p[0].pow(n as u32);
    }
    if n == 0 {
        return q[0].pow(m as u32);
    }
    let size = m + n;
    let mut mat = vec![vec![IntPolynomial::zero(); size]; size];
    for (r, row) in mat.iter_mut().enumerate().take(n) {
        for (k, c) in p.iter().rev().enumerate() {
            row[r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in q.iter().rev().enumerate() {
            mat[n + r][r + k] = c.clone();
        }
    }
    bareiss_determinant_poly(mat)
}
