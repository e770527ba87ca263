//! Straight-line program IR: instructions, validation rules, the canonical
//! text format, and small constant-circuit builders.
//!
//! A program is a sequence of gates over `{1, x_1, …, x_n, +, −, ×}`. Gate 0
//! is always the implicit constant 1 and is never written; the written
//! instructions occupy gate indices `1..=s`. The value of a program is the
//! value of its last gate.

use std::fmt;

use num::bigint::BigInt;
use num::{BigUint, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A single gate. Operand indices are 0-based gate indices; `Var` indices are
/// 1-based variable numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instruction {
    /// The constant 1. Only ever gate 0, which is implicit; `validate`
    /// rejects it inside a written instruction list.
    One,
    Var(usize),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
}

impl Instruction {
    /// Operand gate indices, if any.
    pub fn operands(&self) -> Option<(usize, usize)> {
        match *self {
            Instruction::Add(i, j) | Instruction::Sub(i, j) | Instruction::Mul(i, j) => {
                Some((i, j))
            }
            Instruction::One | Instruction::Var(_) => None,
        }
    }
}

/// A validated-on-demand straight-line program.
///
/// `instrs[p-1]` is the instruction writing gate `p`. A program with
/// `num_vars == 0` computes an integer; otherwise it computes a polynomial
/// in `x_1, …, x_{num_vars}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Slp {
    pub num_vars: usize,
    pub instrs: Vec<Instruction>,
}

/// One broken validation rule, attached to the 1-based instruction position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "instruction {}: {}", self.position, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid program: {}", fmt_violations(.0))]
    Invalid(Vec<Violation>),
}

fn fmt_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl Slp {
    pub fn new(num_vars: usize, instrs: Vec<Instruction>) -> Self {
        Slp { num_vars, instrs }
    }

    /// Number of written instructions (the program length `s`).
    pub fn size(&self) -> usize {
        self.instrs.len()
    }

    /// Gate index of the output (the last written instruction).
    pub fn output_gate(&self) -> usize {
        self.instrs.len()
    }

    /// Uniform gate view: gate 0 is the implicit constant 1.
    pub fn gate(&self, p: usize) -> Instruction {
        if p == 0 {
            Instruction::One
        } else {
            self.instrs[p - 1]
        }
    }

    /// Checks every structural invariant, reporting all offending
    /// instructions rather than stopping at the first.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        if self.instrs.is_empty() {
            violations.push(Violation {
                position: 0,
                message: "program has no instructions".to_string(),
            });
        }
        for (idx, ins) in self.instrs.iter().enumerate() {
            let p = idx + 1;
            match *ins {
                Instruction::One => violations.push(Violation {
                    position: p,
                    message: "gate 0 is implicit; `one` cannot be written".to_string(),
                }),
                Instruction::Var(k) => {
                    if k == 0 || k > self.num_vars {
                        violations.push(Violation {
                            position: p,
                            message: format!(
                                "variable index {} out of range 1..={}",
                                k, self.num_vars
                            ),
                        });
                    }
                }
                Instruction::Add(i, j) | Instruction::Sub(i, j) | Instruction::Mul(i, j) => {
                    for op in [i, j] {
                        if op >= p {
                            violations.push(Violation {
                                position: p,
                                message: format!("operand {} ≥ position {}", op, p),
                            });
                        }
                    }
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

/// Parses the text format. `#` starts a comment; blank lines and extra
/// whitespace are tolerated on input. The parsed program must validate.
pub fn parse(text: &str) -> Result<Slp, ParseError> {
    let mut header: Option<usize> = None;
    let mut instrs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let num = |tok: &str| -> Result<usize, ParseError> {
            tok.parse::<usize>().map_err(|_| ParseError::Syntax {
                line,
                msg: format!("expected a decimal integer, found `{}`", tok),
            })
        };
        if header.is_none() {
            if tokens.len() != 2 || tokens[0] != "slp" {
                return Err(ParseError::Syntax {
                    line,
                    msg: "expected header `slp <num_vars>`".to_string(),
                });
            }
            header = Some(num(tokens[1])?);
            continue;
        }
        let ins = match (tokens[0], tokens.len()) {
            ("var", 2) => Instruction::Var(num(tokens[1])?),
            ("add", 3) => Instruction::Add(num(tokens[1])?, num(tokens[2])?),
            ("sub", 3) => Instruction::Sub(num(tokens[1])?, num(tokens[2])?),
            ("mul", 3) => Instruction::Mul(num(tokens[1])?, num(tokens[2])?),
            _ => {
                return Err(ParseError::Syntax {
                    line,
                    msg: format!("unrecognized instruction `{}`", content),
                })
            }
        };
        instrs.push(ins);
    }
    let num_vars = header.ok_or(ParseError::Syntax {
        line: text.lines().count().max(1),
        msg: "missing `slp <num_vars>` header".to_string(),
    })?;
    let slp = Slp::new(num_vars, instrs);
    slp.validate().map_err(ParseError::Invalid)?;
    Ok(slp)
}

/// Emits the canonical byte-exact form: lowercase keywords, single spaces,
/// LF line endings, no comments, no trailing whitespace.
pub fn serialize(slp: &Slp) -> String {
    let mut out = format!("slp {}\n", slp.num_vars);
    for ins in &slp.instrs {
        match *ins {
            Instruction::One => panic!("gate 0 is implicit; `one` has no written form"),
            Instruction::Var(k) => out.push_str(&format!("var {}\n", k)),
            Instruction::Add(i, j) => out.push_str(&format!("add {} {}\n", i, j)),
            Instruction::Sub(i, j) => out.push_str(&format!("sub {} {}\n", i, j)),
            Instruction::Mul(i, j) => out.push_str(&format!("mul {} {}\n", i, j)),
        }
    }
    out
}

impl fmt::Display for Slp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}

impl Serialize for Slp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&serialize(self))
    }
}

impl<'de> Deserialize<'de> for Slp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse(&text).map_err(D::Error::custom)
    }
}

/// Variable-free program computing exactly `k`, of size `O(bitlen k)`.
///
/// Horner evaluation of the binary expansion of `|k|`, starting from the
/// implicit leading 1 bit; negative values go through `0 - |k|`.
pub fn int_to_slp(k: &BigInt) -> Slp {
    if k.is_zero() {
        return Slp::new(0, vec![Instruction::Sub(0, 0)]);
    }
    let mag = k.magnitude();
    let mut instrs: Vec<Instruction> = Vec::new();
    let mut acc = 0usize; // gate holding the accumulated prefix; starts at the implicit 1
    let bits = mag.bits();
    for pos in (0..bits - 1).rev() {
        instrs.push(Instruction::Add(acc, acc));
        acc = instrs.len();
        if mag.bit(pos) {
            instrs.push(Instruction::Add(acc, 0));
            acc = instrs.len();
        }
    }
    if acc == 0 {
        // |k| == 1: materialize the constant as a written gate
        instrs.push(Instruction::Mul(0, 0));
        acc = instrs.len();
    }
    if k.is_negative() {
        instrs.push(Instruction::Sub(0, 0));
        let zero = instrs.len();
        instrs.push(Instruction::Sub(zero, acc));
    }
    Slp::new(0, instrs)
}

/// Variable-free program computing exactly `2^t`, built by repeated squaring
/// along the binary representation of `t`. Size is `O(bitlen t)`.
pub fn pow2_slp(t: &BigUint) -> Slp {
    if t.is_zero() {
        return Slp::new(0, vec![Instruction::Mul(0, 0)]);
    }
    let bits = t.bits();
    let mut instrs: Vec<Instruction> = Vec::new();
    // chain[j] = gate computing 2^(2^j)
    let mut chain = Vec::with_capacity(bits as usize);
    instrs.push(Instruction::Add(0, 0));
    chain.push(instrs.len());
    for _ in 1..bits {
        let prev = *chain.last().unwrap();
        instrs.push(Instruction::Mul(prev, prev));
        chain.push(instrs.len());
    }
    let mut acc: Option<usize> = None;
    for j in 0..bits {
        if t.bit(j) {
            acc = Some(match acc {
                None => chain[j as usize],
                Some(a) => {
                    instrs.push(Instruction::Mul(a, chain[j as usize]));
                    instrs.len()
                }
            });
        }
    }
    debug_assert_eq!(acc, Some(instrs.len()));
    Slp::new(0, instrs)
}

/// Program computing `value(slp) + c`, of size `size(slp) + O(bitlen c)`.
pub fn shift_slp(slp: &Slp, c: &BigInt) -> Slp {
    if c.is_zero() {
        return slp.clone();
    }
    let mut out = slp.clone();
    let lhs = out.output_gate();
    let rhs = append_constant_program(&mut out.instrs, &int_to_slp(c));
    out.instrs.push(Instruction::Add(lhs, rhs));
    out
}

/// Appends a variable-free program's instructions, remapping operands past
/// the shared implicit gate 0. Returns the gate index of the copy's output.
pub(crate) fn append_constant_program(dst: &mut Vec<Instruction>, src: &Slp) -> usize {
    debug_assert_eq!(src.num_vars, 0);
    let base = dst.len();
    let remap = |g: usize| if g == 0 { 0 } else { g + base };
    for ins in &src.instrs {
        dst.push(match *ins {
            Instruction::Add(i, j) => Instruction::Add(remap(i), remap(j)),
            Instruction::Sub(i, j) => Instruction::Sub(remap(i), remap(j)),
            Instruction::Mul(i, j) => Instruction::Mul(remap(i), remap(j)),
            Instruction::Var(_) | Instruction::One => {
                unreachable!("constant program contains no variables")
            }
        });
    }
    base + src.instrs.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval_exact, eval_mod, EvalBudget};
    use num::pow::Pow;
    use num::One;

    fn eval0(slp: &Slp) -> BigInt {
        eval_exact(slp, &[], &EvalBudget::default()).unwrap()
    }

    #[test]
    fn validate_minimal_program() {
        let slp = Slp::new(1, vec![Instruction::Var(1)]);
        assert!(slp.validate().is_ok());
    }

    #[test]
    fn validate_forward_reference() {
        let slp = Slp::new(0, vec![Instruction::Add(0, 5)]);
        let errs = slp.validate().unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].position, 1);
        assert!(errs[0].message.contains("operand 5 ≥ position 1"));
    }

    #[test]
    fn validate_var_out_of_range() {
        let slp = Slp::new(1, vec![Instruction::Var(2)]);
        let errs = slp.validate().unwrap_err();
        assert!(errs[0].message.contains("variable index"));
    }

    #[test]
    fn validate_rejects_written_one() {
        let slp = Slp::new(0, vec![Instruction::One]);
        assert!(slp.validate().is_err());
    }

    #[test]
    fn validate_rejects_empty() {
        let slp = Slp::new(0, vec![]);
        assert!(slp.validate().is_err());
    }

    #[test]
    fn parse_basic() {
        let slp = parse("slp 0\nadd 0 0\n").unwrap();
        assert_eq!(slp, Slp::new(0, vec![Instruction::Add(0, 0)]));
        assert_eq!(eval0(&slp), BigInt::from(2));

        let sq = parse("slp 1\nvar 1\nmul 1 1\n").unwrap();
        assert_eq!(sq.num_vars, 1);
        assert_eq!(sq.size(), 2);
    }

    #[test]
    fn parse_syntax_error_line_number() {
        let err = parse("slp 0\nbogus 1 2\n").unwrap_err();
        match err {
            ParseError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn parse_comments_and_whitespace() {
        let slp = parse("# header comment\n slp 1 \n\nvar 1   # x\n  mul 1 1\n").unwrap();
        assert_eq!(serialize(&slp), "slp 1\nvar 1\nmul 1 1\n");
    }

    #[test]
    fn parse_rejects_division_keyword() {
        assert!(parse("slp 0\ndiv 0 0\n").is_err());
    }

    #[test]
    fn serialize_canonical() {
        assert_eq!(
            serialize(&Slp::new(0, vec![Instruction::Add(0, 0)])),
            "slp 0\nadd 0 0\n"
        );
        assert_eq!(
            serialize(&Slp::new(1, vec![Instruction::Var(1)])),
            "slp 1\nvar 1\n"
        );
    }

    #[test]
    fn roundtrip_is_identity_on_parsed_input() {
        let text = "slp 2\nvar 1\nvar 2\nadd 1 2\nmul 3 3\nsub 4 0\n";
        let slp = parse(text).unwrap();
        assert_eq!(serialize(&slp), text);
        assert_eq!(parse(&serialize(&slp)).unwrap(), slp);
    }

    #[test]
    fn int_to_slp_values() {
        for k in [-17i64, -5, -1, 0, 1, 2, 3, 13, 64, 255, 1023] {
            let slp = int_to_slp(&BigInt::from(k));
            assert!(slp.is_valid());
            assert_eq!(eval0(&slp), BigInt::from(k), "k = {k}");
        }
        // 13 stays within the stated size envelope
        let slp = int_to_slp(&BigInt::from(13));
        assert!(slp.size() <= 2 * 4 + 2);
    }

    #[test]
    fn int_to_slp_zero_and_one() {
        assert_eq!(
            int_to_slp(&BigInt::zero()).instrs,
            vec![Instruction::Sub(0, 0)]
        );
        let one = int_to_slp(&BigInt::one());
        assert_eq!(one.size(), 1);
        assert_eq!(eval0(&one), BigInt::one());
    }

    #[test]
    fn pow2_slp_values() {
        for t in [0u32, 1, 2, 3, 5, 7, 12, 31, 64, 100] {
            let slp = pow2_slp(&BigUint::from(t));
            assert!(slp.is_valid());
            assert_eq!(eval0(&slp), BigInt::from(2).pow(t), "t = {t}");
            let bitlen = 64 - u64::from(t.max(1)).leading_zeros() as usize;
            assert!(slp.size() <= 2 * bitlen * bitlen + 2, "t = {t}");
        }
    }

    #[test]
    fn pow2_slp_large_exponent_mod_oracle() {
        let slp = pow2_slp(&BigUint::from(1024u32));
        let m = BigUint::from(1_000_000_007u64);
        let got = eval_mod(&slp, &[], &m).unwrap();
        let expect = BigUint::from(2u32).modpow(&BigUint::from(1024u32), &m);
        assert_eq!(got, expect);
    }

    #[test]
    fn shift_slp_values() {
        let five = int_to_slp(&BigInt::from(5));
        assert_eq!(eval0(&shift_slp(&five, &BigInt::from(2))), BigInt::from(7));
        assert_eq!(eval0(&shift_slp(&five, &BigInt::zero())), BigInt::from(5));
        let minus_one = int_to_slp(&BigInt::from(-1));
        assert_eq!(
            eval0(&shift_slp(&minus_one, &BigInt::from(2))),
            BigInt::one()
        );
    }
}
