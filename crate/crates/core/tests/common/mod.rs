//! Shared helpers for the integration suites: a deterministic random
//! stream and corpus generators for algebraic numbers.

use num_bigint::BigInt;
use recipdeg::algnum::AlgebraicNumber;
use recipdeg::dyadic::Dyadic;
use recipdeg::intpoly::{is_irreducible, IntPolynomial};
use recipdeg::rootbox::isolate_all_roots;

/// SplitMix64: deterministic, seedable, no dependencies.
pub struct Rng(pub u64);

impl Rng {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [-bound, bound].
    pub fn coeff(&mut self, bound: i64) -> i64 {
        (self.next() % (2 * bound as u64 + 1)) as i64 - bound
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

/// Random irreducible polynomial with degree in [1, max_degree] and
/// coefficients in [-bound, bound]; monic on request (with nonzero
/// constant term, so the root is a nonzero algebraic integer).
pub fn random_irreducible(
    rng: &mut Rng,
    max_degree: usize,
    bound: i64,
    monic: bool,
) -> IntPolynomial {
    loop {
        let degree = 1 + rng.below(max_degree);
        let mut coeffs: Vec<BigInt> =
            (0..=degree).map(|_| BigInt::from(rng.coeff(bound))).collect();
        if monic {
            coeffs[degree] = BigInt::from(1);
            if coeffs[0] == BigInt::from(0) {
                coeffs[0] = BigInt::from(1 + rng.below(bound as usize) as i64);
            }
        }
        let p = IntPolynomial::from_coeffs(coeffs).canonical();
        if p.degree() != Some(degree) {
            continue;
        }
        if p.coeff(0) == BigInt::from(0) {
            continue; // keep zero out of the corpus
        }
        if is_irreducible(&p).unwrap_or(false) {
            return p;
        }
    }
}

/// Random algebraic number: random irreducible minimal polynomial plus a
/// uniformly chosen root box.
pub fn random_algebraic(
    rng: &mut Rng,
    max_degree: usize,
    bound: i64,
    monic: bool,
) -> AlgebraicNumber {
    let p = random_irreducible(rng, max_degree, bound, monic);
    let boxes = isolate_all_roots(&p, &Dyadic::pow2(-16)).expect("irreducible is squarefree");
    let bx = boxes[rng.below(boxes.len())].clone();
    AlgebraicNumber::make(p, bx).expect("isolated box certifies")
}
