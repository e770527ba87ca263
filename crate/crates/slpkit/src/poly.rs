//! Exact integer-coefficient polynomials: the dense univariate form used as
//! the brute-force oracle representation, and a small sparse multivariate
//! table for the substitution reduction's cross-checks.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Univariate polynomial with arbitrary-precision integer coefficients,
/// `coeffs[k]` being the coefficient of `x^k`. The leading coefficient is
/// nonzero unless the polynomial is identically zero (empty list).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DensePolynomial {
    coeffs: Vec<BigInt>,
}

impl DensePolynomial {
    pub fn zero() -> Self {
        DensePolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        DensePolynomial::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        DensePolynomial::from_coeffs(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        DensePolynomial::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    /// Builds from `coeffs[k] = coefficient of x^k`, trimming leading zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        DensePolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        DensePolynomial::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial (conventionally −∞).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Order: the largest `k` with `x^k | f`. `None` for the zero polynomial
    /// (conventionally +∞).
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Lowest nonzero coefficient, `None` for zero.
    pub fn trailing_coeff(&self) -> Option<&BigInt> {
        self.order().map(|k| &self.coeffs[k])
    }

    /// Largest coefficient bit-length (0 for the zero polynomial).
    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.magnitude().bits())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        DensePolynomial::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - other.coeff(k));
        }
        DensePolynomial::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        DensePolynomial::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return DensePolynomial::zero();
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
        DensePolynomial::from_coeffs(out)
    }

    pub fn mul_scalar(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return DensePolynomial::zero();
        }
        DensePolynomial::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return DensePolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        DensePolynomial { coeffs: out }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return DensePolynomial::zero();
        }
        DensePolynomial::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// Horner evaluation at an integer point.
    pub fn eval_at(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation at a rational point.
    pub fn eval_at_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Coefficient reversal against a target degree `m ≥ deg(f)`: returns
    /// `x^m · f(1/x)`, i.e. coefficient `k` moves to position `m − k`.
    pub fn reversal(&self, m: usize) -> Self {
        let mut out = vec![BigInt::zero(); m + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            assert!(k <= m, "reversal target degree below deg(f)");
            out[m - k] = c.clone();
        }
        DensePolynomial::from_coeffs(out)
    }

    /// Content: the gcd of all coefficients, non-negative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num::integer::gcd(g, c.clone());
        }
        g
    }

    /// Divides out the content; the zero polynomial stays zero. The sign of
    /// the leading coefficient is preserved.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        DensePolynomial::from_coeffs(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Primitive with positive leading coefficient.
    pub fn normalized(&self) -> Self {
        let p = self.primitive_part();
        match p.leading_coeff() {
            Some(lc) if lc.is_negative() => p.neg(),
            _ => p,
        }
    }
}

impl fmt::Display for DensePolynomial {
    /// Prints as `c_d x^d + … + c_0`, skipping zero terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let mag = c.magnitude();
            match k {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{} ", mag)?;
                    }
                    if k == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial: exponent vector (length = `num_vars`)
/// to coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    pub num_vars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        MultiPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: BigInt) -> Self {
        let mut p = MultiPoly::zero(num_vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; num_vars], c);
        }
        p
    }

    /// The variable `x_k`, 1-based.
    pub fn var(num_vars: usize, k: usize) -> Self {
        assert!(k >= 1 && k <= num_vars);
        let mut exps = vec![0u32; num_vars];
        exps[k - 1] = 1;
        let mut p = MultiPoly::zero(num_vars);
        p.terms.insert(exps, BigInt::one());
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| u64::from(x)).sum())
            .max()
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.terms
            .values()
            .map(|c| c.magnitude().bits())
            .max()
            .unwrap_or(0)
    }

    fn insert(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.num_vars, other.num_vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.num_vars, other.num_vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.num_vars, other.num_vars);
        let mut out = MultiPoly::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(exps, ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_and_order() {
        let f = DensePolynomial::from_i64(&[0, 0, 3, 1]); // x^3 + 3x^2
        assert_eq!(f.degree(), Some(3));
        assert_eq!(f.order(), Some(2));
        let z = DensePolynomial::zero();
        assert_eq!(z.degree(), None);
        assert_eq!(z.order(), None);
    }

    #[test]
    fn trims_leading_zeros() {
        let f = DensePolynomial::from_i64(&[1, 2, 0, 0]);
        assert_eq!(f.degree(), Some(1));
        let z = DensePolynomial::from_i64(&[0, 0]);
        assert!(z.is_zero());
    }

    #[test]
    fn arithmetic() {
        let f = DensePolynomial::from_i64(&[1, 1]); // x + 1
        let g = DensePolynomial::from_i64(&[-1, 1]); // x - 1
        assert_eq!(f.mul(&g), DensePolynomial::from_i64(&[-1, 0, 1]));
        assert_eq!(f.add(&g), DensePolynomial::from_i64(&[0, 2]));
        assert_eq!(f.sub(&f), DensePolynomial::zero());
        assert_eq!(f.eval_at(&BigInt::from(9)), BigInt::from(10));
    }

    #[test]
    fn reversal_moves_coefficients() {
        let f = DensePolynomial::from_i64(&[0, 1, 1]); // x^2 + x
                                                       // x^3 f(1/x) = x + x^2
        assert_eq!(f.reversal(3), DensePolynomial::from_i64(&[0, 1, 1, 0]));
    }

    #[test]
    fn primitive_and_normalized() {
        let f = DensePolynomial::from_i64(&[-2, 0, -4]);
        assert_eq!(f.content(), BigInt::from(2));
        assert_eq!(f.normalized(), DensePolynomial::from_i64(&[1, 0, 2]));
    }

    #[test]
    fn display_form() {
        let f = DensePolynomial::from_i64(&[1, 0, 3, -1]);
        assert_eq!(f.to_string(), "-x^3 + 3 x^2 + 1");
        assert_eq!(DensePolynomial::zero().to_string(), "0");
    }

    #[test]
    fn multipoly_basics() {
        let n = 2;
        let x1 = MultiPoly::var(n, 1);
        let x2 = MultiPoly::var(n, 2);
        let p = x1.mul(&x2).add(&MultiPoly::constant(n, BigInt::from(5)));
        assert_eq!(p.total_degree(), Some(2));
        assert_eq!(p.num_terms(), 2);
        assert!(p.sub(&p).is_zero());
    }
}
