//! Exact, modular, and symbolic evaluation of straight-line programs.
//!
//! Exact evaluation and symbolic expansion are desk-scale oracles: gate
//! values can reach `2^(2^s)`, so both are guarded by an explicit budget.
//! Modular evaluation runs in time polynomial in the program size and the
//! modulus width and needs no guard.

use num::bigint::BigInt;
use num::{BigUint, One, Signed};

use crate::poly::{DensePolynomial, MultiPoly};
use crate::slp::{Instruction, Slp};

/// Caps for the expensive evaluation paths. All caps are strictly positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalBudget {
    /// Maximum bit-length of any intermediate integer or coefficient.
    pub max_bits: u64,
    /// Maximum degree reached during symbolic expansion.
    pub max_degree: u64,
    /// Maximum number of terms in a multivariate expansion.
    pub max_terms: usize,
}

impl EvalBudget {
    pub fn with_max_bits(max_bits: u64) -> Self {
        EvalBudget {
            max_bits,
            ..EvalBudget::default()
        }
    }
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget {
            max_bits: 1 << 20,
            max_degree: 1 << 16,
            max_terms: 1 << 16,
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("budget exceeded at gate {gate}")]
    BudgetExceeded { gate: usize },
    #[error("modulus must be ≥ 2")]
    BadModulus,
    #[error("assignment has {got} values but the program has {want} variables")]
    AssignmentMismatch { want: usize, got: usize },
    #[error("program has {got} variables, at most {max} supported here")]
    TooManyVars { max: usize, got: usize },
    #[error("|N| ≥ 2^{n}; value does not fit the requested representation")]
    PrecisionViolation { n: u64 },
    #[error("bit index {i} out of range for an n={n} representation")]
    BitIndexOutOfRange { n: u64, i: u64 },
}

/// Exact value of the output gate. Errors with the offending gate index as
/// soon as any intermediate exceeds `budget.max_bits`.
pub fn eval_exact(
    slp: &Slp,
    assignment: &[BigInt],
    budget: &EvalBudget,
) -> Result<BigInt, EvalError> {
    eval_exact_stats(slp, assignment, budget).map(|(v, _)| v)
}

/// Like [`eval_exact`] but also reports a crude work measure: the sum of the
/// bit-lengths of all gate values.
pub fn eval_exact_stats(
    slp: &Slp,
    assignment: &[BigInt],
    budget: &EvalBudget,
) -> Result<(BigInt, u64), EvalError> {
    if assignment.len() != slp.num_vars {
        return Err(EvalError::AssignmentMismatch {
            want: slp.num_vars,
            got: assignment.len(),
        });
    }
    let mut values: Vec<BigInt> = Vec::with_capacity(slp.size() + 1);
    values.push(BigInt::one());
    let mut bit_ops = 0u64;
    for p in 1..=slp.size() {
        let v = match slp.gate(p) {
            Instruction::One => BigInt::one(),
            Instruction::Var(k) => assignment[k - 1].clone(),
            Instruction::Add(i, j) => &values[i] + &values[j],
            Instruction::Sub(i, j) => &values[i] - &values[j],
            Instruction::Mul(i, j) => &values[i] * &values[j],
        };
        let bits = v.magnitude().bits();
        bit_ops = bit_ops.saturating_add(bits);
        if bits > budget.max_bits {
            return Err(EvalError::BudgetExceeded { gate: p });
        }
        values.push(v);
    }
    Ok((
        values.pop().expect("validated programs are non-empty"),
        bit_ops,
    ))
}

/// Value of the output gate modulo `modulus`, in `[0, modulus)`.
pub fn eval_mod(slp: &Slp, assignment: &[BigInt], modulus: &BigUint) -> Result<BigUint, EvalError> {
    if *modulus < BigUint::from(2u32) {
        return Err(EvalError::BadModulus);
    }
    if assignment.len() != slp.num_vars {
        return Err(EvalError::AssignmentMismatch {
            want: slp.num_vars,
            got: assignment.len(),
        });
    }
    let reduce = |v: &BigInt| -> BigUint {
        let m = BigInt::from(modulus.clone());
        let r = v % &m;
        let r = if r.is_negative() { r + &m } else { r };
        r.magnitude().clone()
    };
    let mut values: Vec<BigUint> = Vec::with_capacity(slp.size() + 1);
    values.push(BigUint::one() % modulus);
    for p in 1..=slp.size() {
        let v = match slp.gate(p) {
            Instruction::One => BigUint::one() % modulus,
            Instruction::Var(k) => reduce(&assignment[k - 1]),
            Instruction::Add(i, j) => (&values[i] + &values[j]) % modulus,
            Instruction::Sub(i, j) => {
                // a - b stays in range after adding one multiple of m
                (&values[i] + modulus - &values[j]) % modulus
            }
            Instruction::Mul(i, j) => (&values[i] * &values[j]) % modulus,
        };
        values.push(v);
    }
    Ok(values.pop().expect("validated programs are non-empty"))
}

fn check_poly(f: &DensePolynomial, gate: usize, budget: &EvalBudget) -> Result<(), EvalError> {
    let over_degree = f.degree().is_some_and(|d| d as u64 > budget.max_degree);
    if over_degree || f.max_coeff_bits() > budget.max_bits {
        return Err(EvalError::BudgetExceeded { gate });
    }
    Ok(())
}

/// Expands a univariate (or variable-free) program into its exact
/// coefficient representation.
pub fn expand_poly(slp: &Slp, budget: &EvalBudget) -> Result<DensePolynomial, EvalError> {
    if slp.num_vars > 1 {
        return Err(EvalError::TooManyVars {
            max: 1,
            got: slp.num_vars,
        });
    }
    let mut values: Vec<DensePolynomial> = Vec::with_capacity(slp.size() + 1);
    values.push(DensePolynomial::one());
    for p in 1..=slp.size() {
        let f = match slp.gate(p) {
            Instruction::One => DensePolynomial::one(),
            Instruction::Var(_) => DensePolynomial::x(),
            Instruction::Add(i, j) => values[i].add(&values[j]),
            Instruction::Sub(i, j) => values[i].sub(&values[j]),
            Instruction::Mul(i, j) => values[i].mul(&values[j]),
        };
        check_poly(&f, p, budget)?;
        values.push(f);
    }
    Ok(values.pop().expect("validated programs are non-empty"))
}

/// Multivariate expansion for small variable counts.
pub fn expand_multi(slp: &Slp, budget: &EvalBudget) -> Result<MultiPoly, EvalError> {
    const MAX_VARS: usize = 4;
    if slp.num_vars > MAX_VARS {
        return Err(EvalError::TooManyVars {
            max: MAX_VARS,
            got: slp.num_vars,
        });
    }
    let n = slp.num_vars;
    let mut values: Vec<MultiPoly> = Vec::with_capacity(slp.size() + 1);
    values.push(MultiPoly::constant(n, BigInt::one()));
    for p in 1..=slp.size() {
        let f = match slp.gate(p) {
            Instruction::One => MultiPoly::constant(n, BigInt::one()),
            Instruction::Var(k) => MultiPoly::var(n, k),
            Instruction::Add(i, j) => values[i].add(&values[j]),
            Instruction::Sub(i, j) => values[i].sub(&values[j]),
            Instruction::Mul(i, j) => values[i].mul(&values[j]),
        };
        let over_degree = f.total_degree().is_some_and(|d| d > budget.max_degree);
        if over_degree || f.num_terms() > budget.max_terms || f.max_coeff_bits() > budget.max_bits {
            return Err(EvalError::BudgetExceeded { gate: p });
        }
        values.push(f);
    }
    Ok(values.pop().expect("validated programs are non-empty"))
}

/// Per-gate degree bounds from the leaf recursion: constants 0, variables 1,
/// `m_g = m_{g1} + m_{g2}` for every binary gate (subtraction follows
/// addition). Index 0 is the implicit constant gate.
///
/// Panics if a bound exceeds `u64`, which needs programs past the desk
/// envelope (sizes beyond 63 gates).
pub fn gate_degree_bounds(slp: &Slp) -> Vec<u64> {
    let mut bounds: Vec<u64> = Vec::with_capacity(slp.size() + 1);
    bounds.push(0);
    for p in 1..=slp.size() {
        let m = match slp.gate(p) {
            Instruction::One => 0,
            Instruction::Var(_) => 1,
            Instruction::Add(i, j) | Instruction::Sub(i, j) | Instruction::Mul(i, j) => bounds[i]
                .checked_add(bounds[j])
                .expect("degree bound exceeds u64; program is past the desk envelope"),
        };
        bounds.push(m);
    }
    bounds
}

/// Upper bound `m` with `deg(f) ≤ m ≤ 2^s`, exactly the output-gate value of
/// the [`gate_degree_bounds`] recursion.
pub fn degree_upper_bound(slp: &Slp) -> u64 {
    *gate_degree_bounds(slp).last().unwrap()
}

/// Bit `i` of the sign-and-magnitude representation of the computed integer:
/// `i = 0` is the least significant magnitude bit, `i = n` is the sign bit.
pub fn bit_of(slp: &Slp, n: u64, i: u64, budget: &EvalBudget) -> Result<bool, EvalError> {
    if i > n {
        return Err(EvalError::BitIndexOutOfRange { n, i });
    }
    let value = eval_exact(slp, &[], budget)?;
    if value.magnitude().bits() > n {
        return Err(EvalError::PrecisionViolation { n });
    }
    if i == n {
        Ok(value.is_negative())
    } else {
        Ok(value.magnitude().bit(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slp::{int_to_slp, parse};

    fn tower(height: usize) -> Slp {
        // 2, then `height` squarings: value 2^(2^height)
        let mut instrs = vec![Instruction::Add(0, 0)];
        for p in 1..=height {
            instrs.push(Instruction::Mul(p, p));
        }
        Slp::new(0, instrs)
    }

    #[test]
    fn eval_exact_basic() {
        let slp = parse("slp 0\nadd 0 0\nmul 1 1\n").unwrap();
        assert_eq!(
            eval_exact(&slp, &[], &EvalBudget::with_max_bits(1024)).unwrap(),
            BigInt::from(4)
        );
    }

    #[test]
    fn eval_exact_tower_within_budget() {
        let t = tower(10);
        let v = eval_exact(&t, &[], &EvalBudget::with_max_bits(2048)).unwrap();
        assert_eq!(v, BigInt::from(2).pow(1024));
    }

    #[test]
    fn eval_exact_budget_guard_fires() {
        let t = tower(10);
        let err = eval_exact(&t, &[], &EvalBudget::with_max_bits(64)).unwrap_err();
        assert!(matches!(err, EvalError::BudgetExceeded { .. }));
    }

    #[test]
    fn eval_mod_basic() {
        let p16 = parse("slp 0\nadd 0 0\nmul 1 1\nmul 2 2\n").unwrap(); // 16
        assert_eq!(
            eval_mod(&p16, &[], &BigUint::from(7u32)).unwrap(),
            BigUint::from(2u32)
        );
        let neg5 = int_to_slp(&BigInt::from(-5));
        assert_eq!(
            eval_mod(&neg5, &[], &BigUint::from(17u32)).unwrap(),
            BigUint::from(12u32)
        );
        assert!(matches!(
            eval_mod(&neg5, &[], &BigUint::one()),
            Err(EvalError::BadModulus)
        ));
    }

    #[test]
    fn expand_poly_examples() {
        let slp = parse("slp 1\nvar 1\nmul 1 1\nadd 2 0\n").unwrap();
        let f = expand_poly(&slp, &EvalBudget::default()).unwrap();
        assert_eq!(f, DensePolynomial::from_i64(&[1, 0, 1])); // x^2 + 1

        let z = parse("slp 1\nvar 1\nsub 1 1\n").unwrap();
        assert!(expand_poly(&z, &EvalBudget::default()).unwrap().is_zero());
    }

    #[test]
    fn expand_poly_agrees_with_point_evaluation() {
        let slp = parse("slp 1\nvar 1\nmul 1 1\nadd 2 1\nsub 3 0\nmul 4 4\n").unwrap();
        let f = expand_poly(&slp, &EvalBudget::default()).unwrap();
        let x = BigInt::from(3);
        assert_eq!(
            f.eval_at(&x),
            eval_exact(&slp, std::slice::from_ref(&x), &EvalBudget::default()).unwrap()
        );
    }

    #[test]
    fn degree_upper_bound_recursion() {
        let sq = parse("slp 1\nvar 1\nmul 1 1\n").unwrap();
        assert_eq!(degree_upper_bound(&sq), 2);
        // additions over-count: bound 2 while the true degree is 1
        let dbl = parse("slp 1\nvar 1\nadd 1 1\n").unwrap();
        assert_eq!(degree_upper_bound(&dbl), 2);
        let c = parse("slp 0\nadd 0 0\n").unwrap();
        assert_eq!(degree_upper_bound(&c), 0);
    }

    #[test]
    fn bit_of_sign_and_magnitude() {
        let five = int_to_slp(&BigInt::from(5));
        let b = EvalBudget::default();
        assert!(bit_of(&five, 3, 0, &b).unwrap());
        assert!(!bit_of(&five, 3, 1, &b).unwrap());
        assert!(bit_of(&five, 3, 2, &b).unwrap());
        assert!(!bit_of(&five, 3, 3, &b).unwrap()); // sign bit clear

        let neg5 = int_to_slp(&BigInt::from(-5));
        assert!(bit_of(&neg5, 3, 3, &b).unwrap()); // sign bit set
        assert!(matches!(
            bit_of(&neg5, 2, 0, &b),
            Err(EvalError::PrecisionViolation { .. })
        ));
        assert!(matches!(
            bit_of(&neg5, 3, 4, &b),
            Err(EvalError::BitIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn expand_multi_matches_univariate() {
        let slp = parse("slp 1\nvar 1\nmul 1 1\nadd 2 0\n").unwrap();
        let m = expand_multi(&slp, &EvalBudget::default()).unwrap();
        assert_eq!(m.total_degree(), Some(2));
        assert_eq!(m.num_terms(), 2);
    }
}
