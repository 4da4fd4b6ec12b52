//! Factorization of integer polynomials over the rationals: fast
//! irreducibility screens, then distinct-degree / equal-degree splitting
//! modulo a small prime, quadratic Hensel lifting, and subset
//! recombination. Everything is deterministic for fixed input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntPolynomial;
use crate::{Error, Result};

/// Full factorization is supported up to this degree; beyond it the
/// operation reports an explicit error instead of approximating.
pub const FACTOR_DEGREE_CEILING: usize = 16;

const SMALL_PRIMES: [u64; 50] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233,
];

/// Factor a nonzero polynomial into irreducible factors over Q, each
/// primitive with positive leading coefficient, with multiplicities.
/// Content and sign are dropped; the product of `factor^multiplicity`
/// reconstructs the input up to sign and content.
pub fn factorize(p: &IntPolynomial) -> Result<Vec<(IntPolynomial, u32)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let degree = p.degree().unwrap();
    if degree > FACTOR_DEGREE_CEILING {
        return Err(Error::FactorizationCeiling { degree, ceiling: FACTOR_DEGREE_CEILING });
    }
    if degree == 0 {
        return Ok(Vec::new());
    }
    let mut out: Vec<(IntPolynomial, u32)> = Vec::new();
    for (sqfree, mult) in p.squarefree_decomposition()? {
        for g in factor_squarefree(&sqfree) {
            out.push((g, mult));
        }
    }
    // Deterministic order: by degree, then coefficients.
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    Ok(out)
}

/// Irreducibility over Q for a nonconstant polynomial, going through the
/// cheap screens first and full factorization only when they are silent.
pub fn is_irreducible(p: &IntPolynomial) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let degree = p.degree().unwrap();
    if degree == 0 {
        return Ok(false);
    }
    let q = p.canonical();
    if degree == 1 {
        return Ok(true);
    }
    if !q.is_squarefree() {
        return Ok(false);
    }
    match quick_irreducible(&q) {
        Some(v) => Ok(v),
        None => Ok(factor_squarefree(&q).len() == 1),
    }
}

/// Fast screens: degree 2 discriminant, degree 3 root hunting mod small
/// primes, Eisenstein, and irreducibility modulo a small prime. `None`
/// means the screens could not decide.
fn quick_irreducible(p: &IntPolynomial) -> Option<bool> {
    let degree = p.degree().unwrap();
    debug_assert!(degree >= 2);
    if degree == 2 {
        // Reducible over Q iff the discriminant is a perfect square.
        let a = p.coeff(2);
        let b = p.coeff(1);
        let c = p.coeff(0);
        let disc = &b * &b - BigInt::from(4) * &a * &c;
        if disc.is_negative() {
            return Some(true);
        }
        let r = disc.sqrt();
        return Some(&r * &r != disc);
    }
    if eisenstein_applies(p) {
        return Some(true);
    }
    if degree == 3 {
        // A cubic is reducible over Q iff it has a rational root; a prime
        // where the reduction is rootless settles irreducibility.
        let mut rootless = false;
        for &q in SMALL_PRIMES.iter().take(12) {
            if (p.leading() % BigInt::from(q)).is_zero() {
                continue;
            }
            let m = reduce_mod(p, q);
            if (0..q).all(|x| eval_mod(&m, x, q) != 0) {
                rootless = true;
                break;
            }
        }
        if rootless {
            return Some(true);
        }
    }
    // Irreducible modulo a prime not dividing the leading coefficient
    // implies irreducible over Q.
    for &q in SMALL_PRIMES.iter().take(8) {
        if (p.leading() % BigInt::from(q)).is_zero() {
            continue;
        }
        let m = reduce_mod(p, q);
        if m.len() != degree + 1 {
            continue;
        }
        if !modp_squarefree(&m, q) {
            continue;
        }
        if modp_irreducible(&m, q) {
            return Some(true);
        }
    }
    None
}

fn eisenstein_applies(p: &IntPolynomial) -> bool {
    let n = p.degree().unwrap();
    'primes: for &q in SMALL_PRIMES.iter().take(25).chain([2].iter()) {
        let qq = BigInt::from(q);
        if (p.leading() % &qq).is_zero() {
            continue;
        }
        for i in 0..n {
            if !(p.coeff(i) % &qq).is_zero() {
                continue 'primes;
            }
        }
        if !(p.coeff(0) % (&qq * &qq)).is_zero() {
            return true;
        }
    }
    false
}

/// Factor a squarefree primitive polynomial of degree >= 1 into canonical
/// irreducible factors.
fn factor_square_inner(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let n = f.degree().unwrap();
    if n == 1 {
        return vec![f.canonical()];
    }
    if let Some(true) = quick_irreducible(f) {
        return vec![f.canonical()];
    }

    // Work monic: F(x) = a^(n-1) f(x/a) with a = lc(f); a factor G of F
    // pulls back to primitive_part(G(a x)).
    let a = f.leading().clone();
    let monic = monicize(f, &a);
    let monic_factors = factor_monic_squarefree(&monic);
    if monic_factors.len() == 1 {
        return vec![f.canonical()];
    }
    monic_factors
        .into_iter()
        .map(|g| substitute_scale(&g, &a).canonical())
        .collect()
}

fn factor_squarefree(f: &IntPolynomial) -> Vec<IntPolynomial> {
    factor_square_inner(&f.canonical())
}

/// F(x) = a^(n-1) * f(x/a): monic with integer coefficients.
fn monicize(f: &IntPolynomial, a: &BigInt) -> IntPolynomial {
    let n = f.degree().unwrap();
    let mut coeffs = Vec::with_capacity(n + 1);
    for i in 0..n {
        coeffs.push(f.coeff(i) * a.pow((n - 1 - i) as u32));
    }
    coeffs.push(BigInt::one());
    IntPolynomial::from_coeffs(coeffs)
}

/// g(a*x) followed by primitive part: pulls a monic factor of the
/// monicized polynomial back to a factor of the original.
fn substitute_scale(g: &IntPolynomial, a: &BigInt) -> IntPolynomial {
    let coeffs: Vec<BigInt> =
        g.coeffs().iter().enumerate().map(|(i, c)| c * a.pow(i as u32)).collect();
    IntPolynomial::from_coeffs(coeffs).primitive_part()
}

/// Zassenhaus on a monic squarefree polynomial of degree >= 2.
fn factor_monic_squarefree(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let n = f.degree().unwrap();
    // Choose the usable prime with the fewest modular factors among the
    // first few candidates.
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for &p in SMALL_PRIMES.iter() {
        let fp = reduce_mod(f, p);
        if fp.len() != n + 1 || !modp_squarefree(&fp, p) {
            continue;
        }
        let factors = modp_factor(&fp, p);
        tried += 1;
        let better = best.as_ref().map_or(true, |(_, bf)| factors.len() < bf.len());
        if better {
            best = Some((p, factors));
        }
        if tried >= 4 || best.as_ref().is_some_and(|(_, bf)| bf.len() == 1) {
            break;
        }
    }
    let (p, modular) = best.expect("some small prime keeps a squarefree polynomial squarefree");
    if modular.len() == 1 {
        return vec![f.clone()];
    }

    // Landau-Mignotte: coefficients of any monic factor are bounded by
    // 2^n * ||f||_2; lift until the modulus exceeds twice that.
    let norm_sq: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << n) * (norm_sq.sqrt() + 1);
    let target = &bound * BigInt::from(2) + BigInt::from(1);
    let lifted = hensel_lift_tree(f, &modular, p, &target);
    let modulus = lifted.modulus;

    // Subset recombination over the lifted factors, smallest subsets first.
    let mut pool: Vec<Vec<BigInt>> = lifted.factors;
    let mut remaining = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= pool.len() {
        let indices: Vec<usize> = (0..pool.len()).collect();
        for combo in combinations(&indices, size) {
            let mut cand = vec![BigInt::one()];
            for &i in &combo {
                cand = polymod_mul(&cand, &pool[i], &modulus);
            }
            let cand_poly = symmetric_poly(&cand, &modulus);
            if let Some(quot) = remaining.exact_div(&cand_poly) {
                out.push(cand_poly);
                remaining = quot;
                let combo_set: std::collections::HashSet<usize> = combo.into_iter().collect();
                pool = pool
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !combo_set.contains(i))
                    .map(|(_, v)| v)
                    .collect();
                continue 'outer;
            }
        }
        size += 1;
    }
    if remaining.degree().unwrap_or(0) > 0 {
        out.push(remaining);
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut combo = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, combo: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if combo.len() == k {
            out.push(combo.clone());
            return;
        }
        for i in start..items.len() {
            combo.push(items[i]);
            rec(items, k, i + 1, combo, out);
            combo.pop();
        }
    }
    rec(items, k, 0, &mut combo, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Arithmetic mod a small prime p (coefficients in [0, p), p odd, p < 2^31).

fn reduce_mod(p: &IntPolynomial, q: u64) -> Vec<u64> {
    let qq = BigInt::from(q);
    let mut v: Vec<u64> = p
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.mod_floor(&qq);
            u64::try_from(r).expect("reduced coefficient fits u64")
        })
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn modp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut v = vec![0u64; a.len().max(b.len())];
    for (i, slot) in v.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    trim(&mut v);
    v
}

fn modp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let prod = (x as u128 * y as u128 + v[i + j] as u128) % p as u128;
            v[i + j] = prod as u64;
        }
    }
    trim(&mut v);
    v
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: p prime.
    pow_mod(a % p, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Remainder of a by b mod p; b nonzero.
fn modp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let scale = (r[r.len() - 1] as u128 * lead_inv as u128 % p as u128) as u64;
        if scale != 0 {
            for (j, &c) in b.iter().enumerate() {
                let sub = (scale as u128 * c as u128) % p as u128;
                let idx = k + j;
                r[idx] = ((r[idx] as u128 + p as u128 - sub) % p as u128) as u64;
            }
        }
        r.pop();
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn modp_make_monic(a: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() {
        return Vec::new();
    }
    let inv = inv_mod(*a.last().unwrap(), p);
    a.iter().map(|&c| (c as u128 * inv as u128 % p as u128) as u64).collect()
}

fn modp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = modp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    if x.is_empty() {
        x
    } else {
        modp_make_monic(&x, p)
    }
}

fn modp_derivative(a: &[u64], p: u64) -> Vec<u64> {
    if a.len() <= 1 {
        return Vec::new();
    }
    let mut v: Vec<u64> =
        a[1..].iter().enumerate().map(|(i, &c)| (c as u128 * (i as u128 + 1) % p as u128) as u64).collect();
    trim(&mut v);
    v
}

fn modp_squarefree(a: &[u64], p: u64) -> bool {
    if a.len() <= 1 {
        return false;
    }
    let d = modp_derivative(a, p);
    if d.is_empty() {
        return false;
    }
    modp_gcd(a, &d, p).len() == 1
}

fn eval_mod(a: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in a.iter().rev() {
        acc = ((acc as u128 * x as u128 + c as u128) % p as u128) as u64;
    }
    acc
}

/// x^(p^k)-style powers: base^e mod (f, p) with a big exponent.
fn modp_powmod_big(base: &[u64], e: &BigInt, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = modp_rem(base, f, p);
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            acc = modp_rem(&modp_mul(&acc, &b, p), f, p);
        }
        if i + 1 < bits {
            b = modp_rem(&modp_mul(&b, &b, p), f, p);
        }
    }
    acc
}

fn modp_irreducible(f: &[u64], p: u64) -> bool {
    modp_distinct_degree(&modp_make_monic(f, p), p).len() == 1
        && modp_distinct_degree(&modp_make_monic(f, p), p)[0].1 == (f.len() - 1)
}

/// Distinct-degree split: returns (product-of-factors, degree) pairs.
fn modp_distinct_degree(f: &[u64], p: u64) -> Vec<(Vec<u64>, usize)> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0usize;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            let deg = rest.len() - 1;
            out.push((rest, deg));
            break;
        }
        h = modp_powmod_big(&h, &BigInt::from(p), &rest, p);
        let hx = modp_sub(&h, &x, p);
        let g = modp_gcd(&hx, &rest, p);
        if g.len() > 1 {
            out.push((g.clone(), d));
            rest = modp_div_exact(&rest, &g, p);
            h = modp_rem(&h, &rest, p);
        }
    }
    out
}

fn modp_div_exact(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    // Division with remainder known to be zero.
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    let mut q = vec![0u64; a.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let scale = (r[r.len() - 1] as u128 * lead_inv as u128 % p as u128) as u64;
        q[k] = scale;
        for (j, &c) in b.iter().enumerate() {
            let sub = (scale as u128 * c as u128) % p as u128;
            let idx = k + j;
            r[idx] = ((r[idx] as u128 + p as u128 - sub) % p as u128) as u64;
        }
        trim(&mut r);
        if r.len() <= db {
            break;
        }
    }
    trim(&mut q);
    q
}

/// Cantor-Zassenhaus equal-degree splitting with a deterministic stream.
fn modp_equal_degree(f: &[u64], d: usize, p: u64, rng: &mut u64) -> Vec<Vec<u64>> {
    let deg = f.len() - 1;
    if deg == d {
        return vec![modp_make_monic(f, p)];
    }
    let exponent = (BigInt::from(p).pow(d as u32) - 1) / 2;
    loop {
        // Random polynomial of degree < deg.
        let mut u: Vec<u64> = (0..deg).map(|_| splitmix64(rng) % p).collect();
        trim(&mut u);
        if u.is_empty() {
            continue;
        }
        let g = modp_gcd(&u, f, p);
        if g.len() > 1 && g.len() - 1 < deg {
            let rest = modp_div_exact(f, &g, p);
            let mut out = modp_equal_degree(&g, d, p, rng);
            out.extend(modp_equal_degree(&rest, d, p, rng));
            return out;
        }
        let w = modp_powmod_big(&u, &exponent, f, p);
        let w1 = modp_sub(&w, &[1], p);
        let g = modp_gcd(&w1, f, p);
        if g.len() > 1 && g.len() - 1 < deg {
            let rest = modp_div_exact(f, &g, p);
            let mut out = modp_equal_degree(&g, d, p, rng);
            out.extend(modp_equal_degree(&rest, d, p, rng));
            return out;
        }
    }
}

/// Full factorization of a squarefree monic polynomial mod p into monic
/// irreducible factors, deterministically ordered.
fn modp_factor(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let monic = modp_make_monic(f, p);
    let mut seed = 0x5EED_0000_0000_0001u64 ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    for &c in f {
        seed = seed.wrapping_mul(31).wrapping_add(c);
    }
    let mut out = Vec::new();
    for (prod, d) in modp_distinct_degree(&monic, p) {
        out.extend(modp_equal_degree(&prod, d, p, &mut seed));
    }
    out.sort();
    out
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// ---------------------------------------------------------------------------
// Hensel lifting: polynomials over Z/m with BigInt coefficients.

struct LiftedFactors {
    factors: Vec<Vec<BigInt>>,
    modulus: BigInt,
}

fn polymod_reduce(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().map_or(false, Zero::is_zero) {
        v.pop();
    }
    v
}

fn polymod_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    polymod_reduce(&v, m)
}

fn polymod_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, slot) in v.iter_mut().enumerate() {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        *slot = x + y;
    }
    polymod_reduce(&v, m)
}

fn polymod_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, slot) in v.iter_mut().enumerate() {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        *slot = x - y;
    }
    polymod_reduce(&v, m)
}

/// Division with remainder by a monic divisor, coefficients mod m.
fn polymod_divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    debug_assert!(b.last().map_or(false, BigInt::is_one), "divisor must be monic");
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), polymod_reduce(&r, m));
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let top = r[k + db].clone().mod_floor(m);
        if !top.is_zero() {
            for (j, c) in b.iter().enumerate() {
                let v = (&r[k + j] - &top * c).mod_floor(m);
                r[k + j] = v;
            }
        }
        q[k] = top;
        r.truncate(k + db);
    }
    (polymod_reduce(&q, m), polymod_reduce(&r, m))
}

/// Symmetric representative in (-m/2, m/2] as an IntPolynomial.
fn symmetric_poly(a: &[BigInt], m: &BigInt) -> IntPolynomial {
    let half = m >> 1;
    IntPolynomial::from_coeffs(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Extended Euclid over Z/p for polynomials: s*a + t*b = 1.
fn modp_ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    // Classic iterative version over the field.
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    let mut s0 = vec![1u64];
    let mut s1 = Vec::new();
    let mut t0 = Vec::new();
    let mut t1 = vec![1u64];
    trim(&mut r0);
    trim(&mut r1);
    while !r1.is_empty() {
        let (q, r) = modp_divrem(&r0, &r1, p);
        let s2 = modp_sub(&s0, &modp_mul(&q, &s1, p), p);
        let t2 = modp_sub(&t0, &modp_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    debug_assert_eq!(r0.len(), 1, "inputs must be coprime mod p");
    let inv = inv_mod(r0[0], p);
    let scale = |v: &[u64]| -> Vec<u64> {
        v.iter().map(|&c| (c as u128 * inv as u128 % p as u128) as u64).collect()
    };
    (scale(&s0), scale(&t0))
}

fn modp_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let scale = (r[r.len() - 1] as u128 * lead_inv as u128 % p as u128) as u64;
        q[k] = scale;
        for (j, &c) in b.iter().enumerate() {
            let sub = (scale as u128 * c as u128) % p as u128;
            let idx = k + j;
            r[idx] = ((r[idx] as u128 + p as u128 - sub) % p as u128) as u64;
        }
        r.pop();
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    trim(&mut q);
    (q, r)
}

fn u64_poly_to_big(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn int_poly_to_vec(p: &IntPolynomial) -> Vec<BigInt> {
    p.coeffs().to_vec()
}

/// Quadratic two-factor Hensel step: from f = g*h and s*g + t*h = 1
/// (mod m) to the same relations mod m^2. All of f, g, h monic.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m2: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let e = polymod_sub(f, &polymod_mul(g, h, m2), m2);
    let se = polymod_mul(s, &e, m2);
    let (q, r) = polymod_divrem_monic(&se, h, m2);
    let g_new = polymod_add(&polymod_add(g, &polymod_mul(t, &e, m2), m2), &polymod_mul(&q, g, m2), m2);
    let h_new = polymod_add(h, &r, m2);
    // Lift the Bezout pair as well.
    let b = polymod_sub(
        &polymod_add(&polymod_mul(s, &g_new, m2), &polymod_mul(t, &h_new, m2), m2),
        &[BigInt::one()],
        m2,
    );
    let sb = polymod_mul(s, &b, m2);
    let (c, d) = polymod_divrem_monic(&sb, &h_new, m2);
    let s_new = polymod_sub(s, &d, m2);
    let t_new = polymod_sub(
        &polymod_sub(t, &polymod_mul(t, &b, m2), m2),
        &polymod_mul(&c, &g_new, m2),
        m2,
    );
    (g_new, h_new, s_new, t_new)
}

/// Lift a list of pairwise-coprime monic factors of f mod p to factors of
/// f modulo at least `target`, by recursive two-way splits.
fn hensel_lift_tree(
    f: &IntPolynomial,
    modular: &[Vec<u64>],
    p: u64,
    target: &BigInt,
) -> LiftedFactors {
    let mut modulus = BigInt::from(p);
    let mut steps = 0u32;
    while &modulus < target {
        modulus = &modulus * &modulus;
        steps += 1;
    }
    let final_modulus = modulus;
    let mut factors = Vec::new();
    lift_rec(&int_poly_to_vec(f), modular, p, steps, &final_modulus, &mut factors);
    LiftedFactors { factors, modulus: final_modulus }
}

fn lift_rec(
    f: &[BigInt],
    modular: &[Vec<u64>],
    p: u64,
    steps: u32,
    final_modulus: &BigInt,
    out: &mut Vec<Vec<BigInt>>,
) {
    if modular.len() == 1 {
        out.push(polymod_reduce(f, final_modulus));
        return;
    }
    let mid = modular.len() / 2;
    let (left, right) = modular.split_at(mid);
    let mut gp = vec![1u64];
    for fac in left {
        gp = modp_mul(&gp, fac, p);
    }
    let mut hp = vec![1u64];
    for fac in right {
        hp = modp_mul(&hp, fac, p);
    }
    let (sp, tp) = modp_ext_gcd(&gp, &hp, p);
    let mut g = u64_poly_to_big(&gp);
    let mut h = u64_poly_to_big(&hp);
    let mut s = u64_poly_to_big(&sp);
    let mut t = u64_poly_to_big(&tp);
    let mut m = BigInt::from(p);
    for _ in 0..steps {
        m = &m * &m;
        let (g2, h2, s2, t2) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
    }
    lift_rec(&g, left, p, steps, final_modulus, out);
    lift_rec(&h, right, p, steps, final_modulus, out);
}
