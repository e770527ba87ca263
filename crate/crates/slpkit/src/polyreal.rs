//! Exact univariate real-positivity machinery: square-free decomposition,
//! Sturm-sequence real-root counting, polynomial square testing, and a
//! rational lower bound on the minimum of a strictly positive polynomial.
//!
//! Everything here is decided exactly over the integers and rationals;
//! nothing is floated.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, Integer, One, Signed, Zero};

use crate::numtheory::{ceil_isqrt_mag, isqrt_mag};
use crate::poly::DensePolynomial;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

// ---------------------------------------------------------------------------
// exact division and gcd

/// Exact quotient `a / b` in `Z[x]`, or `None` when `b ∤ a`.
pub(crate) fn div_exact(a: &DensePolynomial, b: &DensePolynomial) -> Option<DensePolynomial> {
    if b.is_zero() {
        return None;
    }
    if a.is_zero() {
        return Some(DensePolynomial::zero());
    }
    let da = a.degree().unwrap();
    let db = b.degree().unwrap();
    if da < db {
        return None;
    }
    let bl = b.leading_coeff().unwrap().clone();
    let mut rem: Vec<BigInt> = a.coeffs().to_vec();
    let mut quot = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let lead = rem[db + k].clone();
        if lead.is_zero() {
            continue;
        }
        let (q, r) = lead.div_rem(&bl);
        if !r.is_zero() {
            return None;
        }
        for i in 0..=db {
            let t = &q * b.coeff(i);
            rem[i + k] -= t;
        }
        quot[k] = q;
    }
    if rem.iter().all(Zero::is_zero) {
        Some(DensePolynomial::from_coeffs(quot))
    } else {
        None
    }
}

/// Remainder of `a` modulo `b` over `Q`, returned as a primitive integer
/// polynomial scaled by a positive rational (signs are faithful).
fn rational_rem(a: &DensePolynomial, b: &DensePolynomial) -> DensePolynomial {
    let db = b.degree().expect("nonzero divisor");
    let bl = BigRational::from_integer(b.leading_coeff().unwrap().clone());
    let mut r: Vec<BigRational> = a
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    loop {
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
        if r.len() <= db {
            break;
        }
        let k = r.len() - 1 - db;
        let q = r.last().unwrap() / &bl;
        for i in 0..db {
            let t = &q * BigRational::from_integer(b.coeff(i));
            r[i + k] -= t;
        }
        r.pop();
    }
    // clear denominators and the content with positive factors only
    let mut denom_lcm = BigInt::one();
    for c in &r {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = r
        .iter()
        .map(|c| {
            let scaled = c * BigRational::from_integer(denom_lcm.clone());
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect();
    DensePolynomial::from_coeffs(ints).primitive_part()
}

/// Polynomial gcd over `Q`, normalized primitive with positive leading
/// coefficient.
pub fn poly_gcd(a: &DensePolynomial, b: &DensePolynomial) -> DensePolynomial {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        if y.degree() == Some(0) {
            return DensePolynomial::one();
        }
        let r = rational_rem(&x, &y);
        x = y;
        y = r;
    }
    x.normalized()
}

// ---------------------------------------------------------------------------
// square-free structure

/// Yun-style square-free decomposition of a nonzero polynomial: returns
/// pairwise-coprime square-free factors with their multiplicities, covering
/// the primitive positive-lc normalization of the input.
pub fn squarefree_decomposition(
    f: &DensePolynomial,
) -> Result<Vec<(DensePolynomial, u32)>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let w = f.normalized();
    if w.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let g = poly_gcd(&w, &w.derivative());
    if g.degree() == Some(0) {
        return Ok(vec![(w, 1)]);
    }
    let mut c = div_exact(&w, &g).expect("gcd divides");
    let mut d = div_exact(&w.derivative(), &g)
        .expect("gcd divides the derivative")
        .sub(&c.derivative());
    let mut out = Vec::new();
    let mut mult = 1u32;
    while c.degree().is_some_and(|dc| dc > 0) {
        let p = poly_gcd(&c, &d);
        let c_next = div_exact(&c, &p).expect("factor divides");
        let d_next = div_exact(&d, &p)
            .expect("factor divides")
            .sub(&c_next.derivative());
        if p.degree().is_some_and(|dp| dp > 0) {
            out.push((p, mult));
        }
        c = c_next;
        d = d_next;
        mult += 1;
    }
    Ok(out)
}

/// Product of the irreducible factors occurring to odd multiplicity,
/// primitive and with positive leading coefficient.
pub fn square_free_odd_part(f: &DensePolynomial) -> Result<DensePolynomial, PolyError> {
    let parts = squarefree_decomposition(f)?;
    let mut out = DensePolynomial::one();
    for (p, mult) in parts {
        if mult % 2 == 1 {
            out = out.mul(&p);
        }
    }
    Ok(out.normalized())
}

// ---------------------------------------------------------------------------
// Sturm sequences

/// The canonical Sturm chain `(f, f′, −rem, …)` with every element reduced
/// to a primitive integer polynomial by positive scaling. The last nonzero
/// element is `gcd(f, f′)` up to a positive constant.
#[derive(Clone, Debug)]
pub struct SturmChain {
    pub polys: Vec<DensePolynomial>,
}

impl SturmChain {
    pub fn new(f: &DensePolynomial) -> Result<Self, PolyError> {
        if f.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut polys = vec![f.primitive_part()];
        let fp = f.derivative();
        if fp.is_zero() {
            return Ok(SturmChain { polys });
        }
        polys.push(fp.primitive_part());
        loop {
            let n = polys.len();
            let (a, b) = (&polys[n - 2], &polys[n - 1]);
            if b.degree().is_none() || b.degree() == Some(0) {
                break;
            }
            let r = rational_rem(a, b);
            if r.is_zero() {
                break;
            }
            polys.push(r.neg());
        }
        Ok(SturmChain { polys })
    }

    /// Sign variations in the chain evaluated at −∞.
    pub fn variations_at_neg_inf(&self) -> usize {
        self.count_variations(|p| {
            let lc = p.leading_coeff().unwrap();
            let sign = if lc.is_negative() { -1 } else { 1 };
            if p.degree().unwrap() % 2 == 1 {
                -sign
            } else {
                sign
            }
        })
    }

    /// Sign variations in the chain evaluated at +∞.
    pub fn variations_at_pos_inf(&self) -> usize {
        self.count_variations(|p| {
            if p.leading_coeff().unwrap().is_negative() {
                -1
            } else {
                1
            }
        })
    }

    fn count_variations(&self, sign_of: impl Fn(&DensePolynomial) -> i32) -> usize {
        let mut variations = 0;
        let mut prev = 0i32;
        for p in &self.polys {
            if p.is_zero() {
                continue;
            }
            let s = sign_of(p);
            if prev != 0 && s != prev {
                variations += 1;
            }
            prev = s;
        }
        variations
    }
}

/// Number of distinct real roots, by Sturm's theorem on the square-free
/// part.
pub fn count_real_roots(f: &DensePolynomial) -> Result<usize, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if f.degree() == Some(0) {
        return Ok(0);
    }
    let g = poly_gcd(f, &f.derivative());
    let squarefree = div_exact(&f.normalized(), &g).expect("gcd divides");
    if squarefree.degree() == Some(0) {
        return Ok(0);
    }
    let chain = SturmChain::new(&squarefree)?;
    Ok(chain.variations_at_neg_inf() - chain.variations_at_pos_inf())
}

// ---------------------------------------------------------------------------
// positivity and squareness

/// Whether `f(x) ≥ 0` for all real `x`. The zero polynomial counts as
/// positive.
pub fn is_positive_poly(f: &DensePolynomial) -> bool {
    if f.is_zero() {
        return true;
    }
    let d = f.degree().unwrap();
    if d % 2 == 1 || f.leading_coeff().unwrap().is_negative() {
        return false;
    }
    let odd = square_free_odd_part(f).expect("nonzero");
    if odd.degree() == Some(0) {
        return true;
    }
    count_real_roots(&odd).expect("nonzero") == 0
}

/// Returns `g` with `g² = f` when one exists in `Z[x]` (the sign with a
/// positive leading coefficient), by coefficient recursion from the top
/// followed by an exact verification.
pub fn is_poly_square(f: &DensePolynomial) -> Option<DensePolynomial> {
    if f.is_zero() {
        return Some(DensePolynomial::zero());
    }
    let d = f.degree().unwrap();
    if d % 2 == 1 {
        return None;
    }
    let lc = f.leading_coeff().unwrap();
    if lc.is_negative() {
        return None;
    }
    let s = isqrt_mag(lc.magnitude());
    if &(&s * &s) != lc.magnitude() {
        return None;
    }
    let n = d / 2;
    let two_s = BigInt::from(s.clone()) << 1;
    let mut g = vec![BigInt::zero(); n + 1];
    g[n] = BigInt::from(s);
    for k in (0..n).rev() {
        let mut acc = f.coeff(n + k);
        for i in k + 1..n {
            acc -= &g[i] * &g[n + k - i];
        }
        let (q, r) = acc.div_rem(&two_s);
        if !r.is_zero() {
            return None;
        }
        g[k] = q;
    }
    let g = DensePolynomial::from_coeffs(g);
    if g.mul(&g) == *f {
        Some(g)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// minimum-value lower bound

/// Degree and coefficient bit-size of a strictly positive polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PositivityBoundInput {
    pub degree: u64,
    pub coeff_bitsize: u64,
}

/// Exact rational below `3^(d/2) / (2^((2d−1)τ) (d+1)^(2d−1/2))`, the lower
/// bound on the minimum of a strictly positive integer polynomial of degree
/// `d` and coefficient bit-size `τ`.
///
/// The half-integer powers are bracketed by integer square roots — the
/// numerator rounds down, the denominator rounds up — so the returned value
/// never exceeds the true bound.
pub fn min_value_lower_bound(inp: PositivityBoundInput) -> Result<BigRational, PolyError> {
    let (d, tau) = (inp.degree, inp.coeff_bitsize);
    if d < 1 || tau < 1 {
        return Err(PolyError::InvalidInput(
            "need degree ≥ 1 and coefficient bit-size ≥ 1".to_string(),
        ));
    }
    let d32 =
        u32::try_from(d).map_err(|_| PolyError::InvalidInput("degree too large".to_string()))?;
    let numerator = isqrt_mag(&BigUint::from(3u32).pow(d32));
    let pow2_exp = (2 * d - 1)
        .checked_mul(tau)
        .ok_or_else(|| PolyError::InvalidInput("exponent overflow".to_string()))?;
    let pow2 = BigUint::one() << pow2_exp;
    let dp1 = BigUint::from(d + 1).pow(4 * d32 - 1);
    let denominator = pow2 * ceil_isqrt_mag(&dp1);
    Ok(BigRational::new(
        BigInt::from(numerator),
        BigInt::from(denominator),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> DensePolynomial {
        DensePolynomial::from_i64(coeffs)
    }

    #[test]
    fn div_exact_basic() {
        let prod = p(&[-1, 0, 1]); // (x-1)(x+1)
        assert_eq!(div_exact(&prod, &p(&[-1, 1])), Some(p(&[1, 1])));
        assert_eq!(div_exact(&prod, &p(&[1, 1])), Some(p(&[-1, 1])));
        assert_eq!(div_exact(&prod, &p(&[2, 1])), None);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let a = p(&[-1, 1]).mul(&p(&[1, 0, 1])); // (x-1)(x^2+1)
        let b = p(&[-1, 1]).mul(&p(&[3, 1])); // (x-1)(x+3)
        assert_eq!(poly_gcd(&a, &b), p(&[-1, 1]));
        assert_eq!(poly_gcd(&a, &DensePolynomial::zero()), a.normalized());
    }

    #[test]
    fn odd_part_examples() {
        // x^2 (x-1) → x-1
        let f = p(&[0, 0, -1, 1]);
        assert_eq!(square_free_odd_part(&f).unwrap(), p(&[-1, 1]));
        // (x^2+1)^2 → 1
        let g = p(&[1, 0, 1]).mul(&p(&[1, 0, 1]));
        assert_eq!(square_free_odd_part(&g).unwrap(), DensePolynomial::one());
        // x^3 → x
        assert_eq!(square_free_odd_part(&p(&[0, 0, 0, 1])).unwrap(), p(&[0, 1]));
        assert!(square_free_odd_part(&DensePolynomial::zero()).is_err());
    }

    #[test]
    fn decomposition_reconstructs_structure() {
        // (x-1)^1 (x+2)^2 (x^2+1)^3
        let f = p(&[-1, 1])
            .mul(&p(&[2, 1]).mul(&p(&[2, 1])))
            .mul(&p(&[1, 0, 1]).mul(&p(&[1, 0, 1])).mul(&p(&[1, 0, 1])));
        let parts = squarefree_decomposition(&f).unwrap();
        assert_eq!(
            parts,
            vec![(p(&[-1, 1]), 1), (p(&[2, 1]), 2), (p(&[1, 0, 1]), 3)]
        );
    }

    #[test]
    fn real_root_counts() {
        assert_eq!(count_real_roots(&p(&[1, 0, 1])).unwrap(), 0); // x^2+1
        assert_eq!(count_real_roots(&p(&[-2, 0, 1])).unwrap(), 2); // x^2-2
        assert_eq!(count_real_roots(&p(&[0, -1, 0, 1])).unwrap(), 3); // x^3-x
        assert_eq!(count_real_roots(&p(&[5])).unwrap(), 0);
        // repeated roots count once: (x-1)^2 (x+2)
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1]));
        assert_eq!(count_real_roots(&f).unwrap(), 2);
    }

    #[test]
    fn sturm_chain_ends_near_gcd() {
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[1, 1])); // (x-1)^2 (x+1)
        let chain = SturmChain::new(&f).unwrap();
        let last = chain.polys.last().unwrap();
        // gcd(f, f') = x-1 up to sign
        assert_eq!(last.normalized(), p(&[-1, 1]));
        for w in chain.polys.windows(2) {
            assert!(w[1].degree().unwrap_or(0) < w[0].degree().unwrap_or(1));
        }
    }

    #[test]
    fn positivity_examples() {
        assert!(is_positive_poly(&p(&[0, 0, 1]))); // x^2
        assert!(!is_positive_poly(&p(&[0, 1]))); // x
        let sq = p(&[-2, 0, 1]).mul(&p(&[-2, 0, 1])); // (x^2-2)^2
        assert!(is_positive_poly(&sq));
        assert!(!is_positive_poly(&p(&[-1, 0, 1]))); // x^2-1
        assert!(is_positive_poly(&DensePolynomial::zero()));
        assert!(is_positive_poly(&p(&[3])));
        assert!(!is_positive_poly(&p(&[-3])));
        assert!(!is_positive_poly(&p(&[-2, 0, 1]))); // x^2-2
    }

    #[test]
    fn poly_square_examples() {
        assert_eq!(is_poly_square(&p(&[1, 2, 1])), Some(p(&[1, 1])));
        assert_eq!(is_poly_square(&p(&[1, 0, 1])), None);
        assert_eq!(is_poly_square(&p(&[0, 0, 0, 0, 4])), Some(p(&[0, 0, 2])));
        assert_eq!(
            is_poly_square(&DensePolynomial::zero()),
            Some(DensePolynomial::zero())
        );
        assert_eq!(is_poly_square(&p(&[9])), Some(p(&[3])));
        assert_eq!(is_poly_square(&p(&[8])), None);
        assert_eq!(is_poly_square(&p(&[0, 1])), None);
    }

    #[test]
    fn poly_square_recovers_negated_input() {
        let g = p(&[3, -2, -1]); // negative leading coefficient
        let f = g.mul(&g);
        assert_eq!(is_poly_square(&f), Some(g.neg()));
    }

    #[test]
    fn min_value_bound_examples() {
        // d=2, τ=1: floor(sqrt 9) / (2^3 · ceil(sqrt 3^7)) = 3/376 ≈ 0.00798,
        // below the true 3/(2^3·3^3.5) ≈ 0.00802 and above 0.007
        let b = min_value_lower_bound(PositivityBoundInput {
            degree: 2,
            coeff_bitsize: 1,
        })
        .unwrap();
        assert_eq!(b, BigRational::new(BigInt::from(3), BigInt::from(376)));
        assert!(b > BigRational::new(BigInt::from(7), BigInt::from(1000)));
        assert!(b < BigRational::new(BigInt::from(802), BigInt::from(100_000)));

        let b1 = min_value_lower_bound(PositivityBoundInput {
            degree: 1,
            coeff_bitsize: 1,
        })
        .unwrap();
        assert!(b1 > BigRational::zero());
        // true bound is 3^0.5/(2·2^1.5) ≈ 0.306
        assert!(b1 < BigRational::new(BigInt::from(307), BigInt::from(1000)));

        // τ only deepens the denominator
        let b2 = min_value_lower_bound(PositivityBoundInput {
            degree: 2,
            coeff_bitsize: 2,
        })
        .unwrap();
        assert!(b2 < b);

        assert!(min_value_lower_bound(PositivityBoundInput {
            degree: 0,
            coeff_bitsize: 1
        })
        .is_err());
    }

    #[test]
    fn decomposition_reconstructs_random_products() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0xdec0);
        for trial in 0..400 {
            // random factor multiset with known multiplicities, random
            // content and sign on top
            let mut f = DensePolynomial::constant(BigInt::from(
                rng.gen_range(1..=6i64) * if rng.gen_bool(0.5) { -1 } else { 1 },
            ));
            let mut roots: Vec<i64> = Vec::new();
            for _ in 0..rng.gen_range(1..=3usize) {
                let r = rng.gen_range(-9..=9i64);
                if roots.contains(&r) {
                    continue;
                }
                roots.push(r);
                let mult = rng.gen_range(1..=3u32);
                for _ in 0..mult {
                    f = f.mul(&p(&[-r, 1]));
                }
            }
            let parts = squarefree_decomposition(&f).unwrap();
            let mut rebuilt = DensePolynomial::one();
            for (factor, mult) in &parts {
                assert_eq!(*factor, factor.normalized(), "trial {trial}");
                for _ in 0..*mult {
                    rebuilt = rebuilt.mul(factor);
                }
            }
            assert_eq!(rebuilt, f.normalized(), "trial {trial}: {f}");

            let odd = square_free_odd_part(&f).unwrap();
            let mut expected = DensePolynomial::one();
            for (factor, mult) in &parts {
                if mult % 2 == 1 {
                    expected = expected.mul(factor);
                }
            }
            assert_eq!(odd, expected.normalized(), "trial {trial}");
        }
    }

    #[test]
    fn sturm_count_matches_constructed_roots() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x5709);
        for _ in 0..1000 {
            // degree stays ≤ 6: up to four simple roots and one
            // positive-definite quadratic
            let n_lin = rng.gen_range(0..=4);
            let n_quad = rng.gen_range(0..=1);
            if n_lin + n_quad == 0 {
                continue;
            }
            let mut roots: Vec<i64> = Vec::new();
            while roots.len() < n_lin {
                let r = rng.gen_range(-20..=20);
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
            let mut f = DensePolynomial::one();
            for &r in &roots {
                f = f.mul(&p(&[-r, 1]));
            }
            for _ in 0..n_quad {
                let a = rng.gen_range(-5i64..=5);
                let c = rng.gen_range(1i64..=30);
                // x^2 + 2ax + a^2 + c has no real roots
                f = f.mul(&p(&[a * a + c, 2 * a, 1]));
            }
            assert_eq!(count_real_roots(&f).unwrap(), n_lin, "roots {roots:?}");
        }
    }
}
