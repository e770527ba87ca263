//! Integer number-theoretic kernel backing the deciders: sum-of-squares
//! characterizations, perfect-square testing, factorization, and
//! trailing-zero analysis.
//!
//! The characterizations are decided arithmetically, never by search: an
//! integer is a sum of three squares iff it is not of the form `4^a(8k+7)`,
//! and a sum of two squares iff every prime `≡ 3 (mod 4)` in its
//! factorization occurs to an even power.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num::bigint::BigInt;
use num::{BigUint, Integer, One, Signed, Zero};

/// Iteration cap for the factorization backend.
#[derive(Clone, Debug)]
pub struct FactorBudget {
    /// Pollard-rho iterations allowed per composite before giving up.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            rho_iterations: 1_000_000,
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum NumTheoryError {
    #[error("factorization budget exhausted on a {bits}-bit cofactor")]
    FactorizationTimeout { bits: u64 },
    #[error("factorization needs |n| ≥ 2")]
    FactorInputTooSmall,
    #[error("negative input")]
    NegativeInput,
    #[error("scan limit {limit} exceeds the 10^8 cap")]
    LimitTooLarge { limit: u64 },
}

/// Prime-power decomposition with the unit sign split off. Primes are
/// strictly increasing and multiply back to the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn product(&self) -> BigInt {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        let v = BigInt::from(acc);
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }
}

// ---------------------------------------------------------------------------
// integer square roots

/// Largest `a` with `a² ≤ n`, by Newton iteration from a power-of-two seed.
pub fn isqrt(n: &BigInt) -> Result<BigInt, NumTheoryError> {
    if n.is_negative() {
        return Err(NumTheoryError::NegativeInput);
    }
    Ok(BigInt::from(isqrt_mag(n.magnitude())))
}

pub(crate) fn isqrt_mag(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    // seed 2^ceil(bits/2) ≥ sqrt(n); the iteration decreases monotonically
    // until it reaches the floor, where it stops shrinking
    let mut r: BigUint = BigUint::one() << n.bits().div_ceil(2);
    loop {
        let next = (&r + n / &r) >> 1;
        if next >= r {
            return r;
        }
        r = next;
    }
}

/// Smallest `a` with `a² ≥ n`.
pub(crate) fn ceil_isqrt_mag(n: &BigUint) -> BigUint {
    let r = isqrt_mag(n);
    if &r * &r == *n {
        r
    } else {
        r + 1u32
    }
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = isqrt_mag(n.magnitude());
    &r * &r == *n.magnitude()
}

pub(crate) fn isqrt_u64(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    // float guess, then integer fix-ups in both directions
    let mut r = (n as f64).sqrt() as u64 + 1;
    while (r as u128) * (r as u128) > n as u128 {
        r -= 1;
    }
    while ((r + 1) as u128) * ((r + 1) as u128) <= n as u128 {
        r += 1;
    }
    r
}

fn is_square_u64(n: u64) -> bool {
    let r = isqrt_u64(n);
    r * r == n
}

// ---------------------------------------------------------------------------
// sum-of-squares characterizations

/// Sum of three squares: `n ≥ 0` and not of the form `4^a(8k+7)`.
pub fn is_3sos(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    if n.is_zero() {
        return true;
    }
    let mag = n.magnitude();
    let tz = mag.trailing_zeros().unwrap_or(0);
    let odd4: BigUint = mag >> (2 * (tz / 2));
    (odd4 & BigUint::from(7u32)) != BigUint::from(7u32)
}

pub fn is_3sos_u64(n: u64) -> bool {
    if n == 0 {
        return true;
    }
    let tz = n.trailing_zeros() as u64;
    (n >> (2 * (tz / 2))) & 7 != 7
}

/// Sum of two squares, via the full prime-power decomposition.
pub fn is_2sos(n: &BigInt, budget: &FactorBudget) -> Result<bool, NumTheoryError> {
    if n.is_negative() {
        return Ok(false);
    }
    if n.magnitude() <= &BigUint::one() {
        return Ok(true);
    }
    let f = factorize(n, budget)?;
    Ok(two_sos_from_factors(&f))
}

fn two_sos_from_factors(f: &Factorization) -> bool {
    f.factors
        .iter()
        .all(|(p, e)| e % 2 == 0 || (p & BigUint::from(3u32)) != BigUint::from(3u32))
}

pub fn is_2sos_u64(n: u64, budget: &FactorBudget) -> Result<bool, NumTheoryError> {
    if n <= 1 {
        return Ok(true);
    }
    let mut map = BTreeMap::new();
    factor_u64(n, &mut map, budget)?;
    Ok(map
        .iter()
        .all(|(p, e)| e % 2 == 0 || p % 4u32 != BigUint::from(3u32)))
}

// ---------------------------------------------------------------------------
// trailing zeros

/// 2-adic valuation of `|n|`; zero divides every power of two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrailingZeros {
    Finite(u64),
    Infinite,
}

impl TrailingZeros {
    pub fn at_least(self, l: u64) -> bool {
        match self {
            TrailingZeros::Infinite => true,
            TrailingZeros::Finite(t) => t >= l,
        }
    }
}

pub fn trailing_zeros(n: &BigInt) -> TrailingZeros {
    match n.magnitude().trailing_zeros() {
        Some(t) => TrailingZeros::Finite(t),
        None => TrailingZeros::Infinite,
    }
}

// ---------------------------------------------------------------------------
// primality

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        const LIMIT: usize = 1_000_000;
        let mut composite = vec![false; LIMIT + 1];
        let mut primes = Vec::with_capacity(78_498);
        for p in 2..=LIMIT {
            if !composite[p] {
                primes.push(p as u32);
                let mut m = p * p;
                while m <= LIMIT {
                    composite[m] = true;
                    m += p;
                }
            }
        }
        primes
    })
}

fn pow_mod_u64(a: u64, mut e: u64, m: u64) -> u64 {
    let mm = m as u128;
    let mut acc: u128 = 1;
    let mut base = (a % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % mm;
        }
        base = base * base % mm;
        e >>= 1;
    }
    acc as u64
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Probabilistic Miller–Rabin above 64 bits (40 rounds, bases derived
/// deterministically from the input so results replay).
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Ok(small) = u64::try_from(n) {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    let mut state = n.iter_u64_digits().fold(0x9e3779b97f4a7c15u64, |acc, w| {
        acc.rotate_left(23) ^ w.wrapping_mul(0xbf58476d1ce4e5b9)
    });
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    'rounds: for _ in 0..40 {
        let a = BigUint::from(next()) % (n - 3u32) + 2u32;
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'rounds;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// factorization

/// Full factorization: trial division over a sieved prime table, then
/// Miller–Rabin plus Pollard rho with Brent cycling on what remains.
pub fn factorize(n: &BigInt, budget: &FactorBudget) -> Result<Factorization, NumTheoryError> {
    let mag = n.magnitude();
    if mag < &BigUint::from(2u32) {
        return Err(NumTheoryError::FactorInputTooSmall);
    }
    let mut map: BTreeMap<BigUint, u32> = BTreeMap::new();
    factor_big(mag.clone(), &mut map, budget)?;
    let factorization = Factorization {
        sign: if n.is_negative() { -1 } else { 1 },
        factors: map.into_iter().collect(),
    };
    debug_assert_eq!(factorization.product().magnitude(), mag);
    Ok(factorization)
}

fn bump(map: &mut BTreeMap<BigUint, u32>, p: BigUint, e: u32) {
    *map.entry(p).or_insert(0) += e;
}

fn factor_u64(
    mut n: u64,
    map: &mut BTreeMap<BigUint, u32>,
    budget: &FactorBudget,
) -> Result<(), NumTheoryError> {
    for &p in small_primes() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            bump(map, BigUint::from(p), e);
        }
    }
    if n == 1 {
        return Ok(());
    }
    if is_prime_u64(n) {
        bump(map, BigUint::from(n), 1);
        return Ok(());
    }
    let d = rho_u64(n, budget.rho_iterations).ok_or(NumTheoryError::FactorizationTimeout {
        bits: 64 - n.leading_zeros() as u64,
    })?;
    factor_u64(d, map, budget)?;
    factor_u64(n / d, map, budget)
}

fn factor_big(
    mut n: BigUint,
    map: &mut BTreeMap<BigUint, u32>,
    budget: &FactorBudget,
) -> Result<(), NumTheoryError> {
    if let Ok(small) = u64::try_from(&n) {
        return factor_u64(small, map, budget);
    }
    // cheap trial pass over primes below 10^4; rho picks up anything past
    // the table quickly
    for &p in &small_primes()[..1_229] {
        let p = BigUint::from(p);
        let mut e = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            bump(map, p, e);
        }
    }
    if let Ok(small) = u64::try_from(&n) {
        if small == 1 {
            return Ok(());
        }
        return factor_u64(small, map, budget);
    }
    if is_probable_prime(&n) {
        bump(map, n, 1);
        return Ok(());
    }
    let bits = n.bits();
    let d =
        rho_big(&n, budget.rho_iterations).ok_or(NumTheoryError::FactorizationTimeout { bits })?;
    let q = &n / &d;
    factor_big(d, map, budget)?;
    factor_big(q, map, budget)
}

/// Brent-cycle Pollard rho for 64-bit composites. Returns a nontrivial
/// factor or `None` once the iteration budget runs out.
fn rho_u64(n: u64, max_iters: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let mut spent = 0u64;
    for c in 1u64.. {
        let f = |x: u64| -> u64 { (((x as u128 * x as u128) % n as u128) as u64 + c) % n };
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let (mut x, mut ys, mut g) = (0u64, 0u64, 1u64);
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = ((q as u128 * x.abs_diff(y) as u128) % n as u128) as u64;
                }
                g = gcd_u64(q, n);
                k += M;
                spent += M;
                if spent > max_iters {
                    return None;
                }
            }
            r *= 2;
        }
        if g == n {
            // backtrack one step at a time
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
                spent += 1;
                if spent > max_iters {
                    return None;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    unreachable!()
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Brent-cycle rho over big integers, batching gcds.
fn rho_big(n: &BigUint, max_iters: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let mut spent = 0u64;
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| -> BigUint { (x * x + &c) % n };
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut x = BigUint::zero();
        let mut ys = BigUint::zero();
        let mut g = BigUint::one();
        const M: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..M.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += M;
                spent += M;
                if spent > max_iters {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
                spent += 1;
                if spent > max_iters {
                    return None;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    unreachable!()
}

// ---------------------------------------------------------------------------
// four-square witness

/// A quadruple with `a² + b² + c² + d² = n`, by descending search on the
/// largest square with residue-characterization pruning.
pub fn four_square_witness(n: u64) -> (u64, u64, u64, u64) {
    let budget = FactorBudget::default();
    for a in (0..=isqrt_u64(n)).rev() {
        let r3 = n - a * a;
        if !is_3sos_u64(r3) {
            continue;
        }
        if let Some((b, c, d)) = three_square_witness(r3, &budget) {
            return (a, b, c, d);
        }
    }
    unreachable!("every natural number is a sum of four squares")
}

fn three_square_witness(n: u64, budget: &FactorBudget) -> Option<(u64, u64, u64)> {
    for b in (0..=isqrt_u64(n)).rev() {
        let r2 = n - b * b;
        if !is_2sos_u64(r2, budget).unwrap_or(false) {
            continue;
        }
        if let Some((c, d)) = two_square_witness(r2) {
            return Some((b, c, d));
        }
    }
    None
}

fn two_square_witness(n: u64) -> Option<(u64, u64)> {
    // scan the larger element; any representation has c² ≥ n/2
    let mut c = isqrt_u64(n);
    loop {
        if 2 * (c as u128) * (c as u128) < n as u128 {
            return None;
        }
        let rem = n - c * c;
        if is_square_u64(rem) {
            return Some((c, isqrt_u64(rem)));
        }
        if c == 0 {
            return None;
        }
        c -= 1;
    }
}

// ---------------------------------------------------------------------------
// density scans

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityKind {
    ThreeSos,
    TwoSos,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityScan {
    pub count: u64,
    /// `count/limit` for 3SoS; `count·√(ln limit)/limit` for 2SoS, which
    /// normalizes against the Landau–Ramanujan asymptotic.
    pub ratio: f64,
}

struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len / 64 + 1],
        }
    }
    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }
}

const SCAN_CAP: u64 = 100_000_000;

/// Counts qualifying integers in `[1, limit]` plus the normalized ratio.
pub fn density_scan(kind: DensityKind, limit: u64) -> Result<DensityScan, NumTheoryError> {
    if limit == 0 || limit > SCAN_CAP {
        return Err(NumTheoryError::LimitTooLarge { limit });
    }
    match kind {
        DensityKind::ThreeSos => {
            let count = (1..=limit).filter(|&n| is_3sos_u64(n)).count() as u64;
            Ok(DensityScan {
                count,
                ratio: count as f64 / limit as f64,
            })
        }
        DensityKind::TwoSos => {
            let count = two_sos_sieve_count(limit);
            let ratio = count as f64 * (limit as f64).ln().sqrt() / limit as f64;
            Ok(DensityScan { count, ratio })
        }
    }
}

/// Sieve marking every n with some prime `≡ 3 (mod 4)` to an odd power.
fn two_sos_sieve_count(limit: u64) -> u64 {
    let lim = limit as usize;
    let mut composite = BitSet::new(lim + 1);
    let mut bad = BitSet::new(lim + 1);
    let mut p = 3usize;
    while p * p <= lim {
        if !composite.get(p) {
            let mut m = p * p;
            while m <= lim {
                composite.set(m);
                m += p;
            }
        }
        p += 2;
    }
    for p in (3..=lim).step_by(2) {
        if composite.get(p) || p % 4 != 3 {
            continue;
        }
        let p = p as u64;
        let mut base = p; // odd powers p, p^3, p^5, …
        loop {
            let mut m = base;
            while m <= limit {
                if !(m / base).is_multiple_of(p) {
                    bad.set(m as usize);
                }
                match m.checked_add(base) {
                    Some(next) => m = next,
                    None => break,
                }
            }
            match base.checked_mul(p * p) {
                Some(next) if next <= limit => base = next,
                _ => break,
            }
        }
    }
    (1..=lim).filter(|&n| !bad.get(n)).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_examples() {
        for (n, r) in [(0u32, 0u32), (24, 4), (25, 5), (26, 5)] {
            assert_eq!(isqrt(&BigInt::from(n)).unwrap(), BigInt::from(r));
        }
        assert!(matches!(
            isqrt(&BigInt::from(-1)),
            Err(NumTheoryError::NegativeInput)
        ));
    }

    #[test]
    fn isqrt_matches_squares_up_to_64k() {
        for n in 0u64..65_536 {
            let r = isqrt_u64(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n, "n = {n}");
        }
    }

    #[test]
    fn isqrt_u64_extremes() {
        for r in 4_294_967_000u64..4_294_967_295 {
            let n = r * r;
            assert_eq!(isqrt_u64(n), r);
            assert_eq!(isqrt_u64(n - 1), r - 1);
            assert_eq!(isqrt_u64(n + 1), r);
        }
        assert_eq!(isqrt_u64(u64::MAX), 4_294_967_295);
    }

    #[test]
    fn perfect_square_examples() {
        assert!(is_perfect_square(&BigInt::from(16)));
        assert!(!is_perfect_square(&BigInt::from(15)));
        assert!(is_perfect_square(&BigInt::zero()));
        assert!(!is_perfect_square(&BigInt::from(-4)));
    }

    #[test]
    fn three_sos_examples() {
        assert!(is_3sos(&BigInt::zero()));
        assert!(!is_3sos(&BigInt::from(7)));
        assert!(!is_3sos(&BigInt::from(28)));
        assert!(is_3sos(&BigInt::from(6)));
        assert!(!is_3sos(&BigInt::from(-3)));
    }

    #[test]
    fn two_sos_examples() {
        let b = FactorBudget::default();
        assert!(is_2sos(&BigInt::from(2), &b).unwrap());
        assert!(!is_2sos(&BigInt::from(21), &b).unwrap());
        assert!(is_2sos(&BigInt::from(9), &b).unwrap());
        assert!(!is_2sos(&BigInt::from(-2), &b).unwrap());
    }

    #[test]
    fn seven_m4_is_never_3sos() {
        for m in 1u64..=100 {
            let v = BigInt::from(7) * BigInt::from(m).pow(4);
            assert!(!is_3sos(&v), "m = {m}");
        }
    }

    #[test]
    fn three_m2_is_never_2sos() {
        let b = FactorBudget::default();
        for m in 1u64..=100 {
            let v = BigInt::from(3) * BigInt::from(m).pow(2);
            assert!(!is_2sos(&v, &b).unwrap(), "m = {m}");
        }
    }

    #[test]
    fn factorize_examples() {
        let b = FactorBudget::default();
        let f = factorize(&BigInt::from(12), &b).unwrap();
        assert_eq!(
            f.factors,
            vec![(BigUint::from(2u32), 2), (BigUint::from(3u32), 1)]
        );
        let f = factorize(&BigInt::from(97), &b).unwrap();
        assert_eq!(f.factors, vec![(BigUint::from(97u32), 1)]);
        let f = factorize(&BigInt::from(-97), &b).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.product(), BigInt::from(-97));
    }

    #[test]
    fn factorize_fermat_f6() {
        // 2^64 + 1 = 274177 · 67280421310721
        let n = (BigInt::one() << 64) + 1;
        let f = factorize(&n, &FactorBudget::default()).unwrap();
        assert_eq!(
            f.factors,
            vec![
                (BigUint::from(274_177u64), 1),
                (BigUint::from(67_280_421_310_721u64), 1)
            ]
        );
        assert_eq!(f.product(), n);
    }

    #[test]
    fn factorize_rejects_units() {
        let b = FactorBudget::default();
        for n in [-1i64, 0, 1] {
            assert!(factorize(&BigInt::from(n), &b).is_err());
        }
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        for n in 0u64..2000 {
            let brute = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime_u64(n), brute, "n = {n}");
        }
    }

    #[test]
    fn trailing_zero_examples() {
        assert_eq!(trailing_zeros(&BigInt::from(12)), TrailingZeros::Finite(2));
        assert_eq!(trailing_zeros(&BigInt::from(7)), TrailingZeros::Finite(0));
        assert_eq!(trailing_zeros(&BigInt::zero()), TrailingZeros::Infinite);
        assert!(TrailingZeros::Infinite.at_least(1 << 40));
    }

    #[test]
    fn four_square_examples() {
        assert_eq!(four_square_witness(7), (2, 1, 1, 1));
        assert_eq!(four_square_witness(0), (0, 0, 0, 0));
        let (a, b, c, d) = four_square_witness(310);
        assert_eq!(a * a + b * b + c * c + d * d, 310);
        for n in 0u64..200 {
            let (a, b, c, d) = four_square_witness(n);
            assert_eq!(a * a + b * b + c * c + d * d, n, "n = {n}");
        }
    }

    #[test]
    fn density_3sos_small() {
        // the fifteen non-3SoS integers up to 100 leave a count of 85
        let scan = density_scan(DensityKind::ThreeSos, 100).unwrap();
        assert_eq!(scan.count, 85);
        let brute = (1u64..=100)
            .filter(|&n| {
                let lim = isqrt_u64(n);
                (0..=lim).any(|a| {
                    (a..=lim).any(|b| {
                        let rest = n as i64 - (a * a + b * b) as i64;
                        rest >= 0 && is_square_u64(rest as u64)
                    })
                })
            })
            .count() as u64;
        assert_eq!(scan.count, brute);
    }

    #[test]
    fn density_2sos_small() {
        // 1,2,4,5,8,9,10,13,16,17,18,20,25 are the 2SoS values ≤ 25
        let scan = density_scan(DensityKind::TwoSos, 25).unwrap();
        assert_eq!(scan.count, 13);
    }

    #[test]
    fn density_scan_cap() {
        assert!(density_scan(DensityKind::ThreeSos, SCAN_CAP + 1).is_err());
    }
}
