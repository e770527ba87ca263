//! Desk-scale deciders for every decision problem on straight-line
//! programs, each also available behind a counting [`OracleHandle`] so the
//! reduction drivers can be wired with real or mocked oracles.

use std::cell::{Cell, RefCell};
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::{BigUint, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eval::{bit_of, eval_exact_stats, eval_mod, expand_poly, EvalBudget, EvalError};
use crate::numtheory::{
    is_2sos, is_3sos, is_perfect_square, is_prime_u64, FactorBudget, NumTheoryError,
};
use crate::polyreal::is_positive_poly;
use crate::slp::Slp;

/// Largest `ℓ` accepted by the divisibility decider; `2^ℓ` must stay a
/// materializable modulus.
pub const DIV2_DESK_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemTag {
    #[serde(rename = "posslp")]
    Pos,
    #[serde(rename = "equslp")]
    Equ,
    #[serde(rename = "bitslp")]
    Bit,
    #[serde(rename = "div2slp")]
    Div2,
    #[serde(rename = "3sosslp")]
    ThreeSos,
    #[serde(rename = "2sosslp")]
    TwoSos,
    #[serde(rename = "squslp")]
    Squ,
    #[serde(rename = "degslp")]
    Deg,
    #[serde(rename = "ordslp")]
    Ord,
    #[serde(rename = "pospolyslp")]
    PosPoly,
    #[serde(rename = "squpolyslp")]
    SquPoly,
}

impl ProblemTag {
    pub const ALL: [ProblemTag; 11] = [
        ProblemTag::Pos,
        ProblemTag::Equ,
        ProblemTag::Bit,
        ProblemTag::Div2,
        ProblemTag::ThreeSos,
        ProblemTag::TwoSos,
        ProblemTag::Squ,
        ProblemTag::Deg,
        ProblemTag::Ord,
        ProblemTag::PosPoly,
        ProblemTag::SquPoly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemTag::Pos => "posslp",
            ProblemTag::Equ => "equslp",
            ProblemTag::Bit => "bitslp",
            ProblemTag::Div2 => "div2slp",
            ProblemTag::ThreeSos => "3sosslp",
            ProblemTag::TwoSos => "2sosslp",
            ProblemTag::Squ => "squslp",
            ProblemTag::Deg => "degslp",
            ProblemTag::Ord => "ordslp",
            ProblemTag::PosPoly => "pospolyslp",
            ProblemTag::SquPoly => "squpolyslp",
        }
    }
}

impl fmt::Display for ProblemTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown problem `{s}`"))
    }
}

/// Auxiliary binary-encoded parameters; present exactly when the problem
/// requires them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Aux {
    None,
    /// `ℓ` for Div2SLP / OrdSLP.
    Ell(u64),
    /// `d` for DegSLP.
    Deg(u64),
    /// `(n, i)` for BitSLP.
    Bit {
        n: u64,
        i: u64,
    },
}

/// A named decision problem paired with a program and its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub problem: ProblemTag,
    pub slp: Slp,
    pub aux: Aux,
}

impl ProblemInstance {
    pub fn new(problem: ProblemTag, slp: Slp, aux: Aux) -> Self {
        ProblemInstance { problem, slp, aux }
    }

    /// Aux parameters must match what the tag requires.
    pub fn aux_consistent(&self) -> bool {
        matches!(
            (self.problem, self.aux),
            (ProblemTag::Div2 | ProblemTag::Ord, Aux::Ell(_))
                | (ProblemTag::Deg, Aux::Deg(_))
                | (ProblemTag::Bit, Aux::Bit { .. })
                | (
                    ProblemTag::Pos
                        | ProblemTag::Equ
                        | ProblemTag::ThreeSos
                        | ProblemTag::TwoSos
                        | ProblemTag::Squ
                        | ProblemTag::PosPoly
                        | ProblemTag::SquPoly,
                    Aux::None
                )
        )
    }
}

/// Which path produced a verdict. Randomized verdicts carry their seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Exact,
    Characterization,
    Randomized { seed: u64 },
}

/// Crude work accounting: oracle queries made, plus the summed bit-lengths
/// touched by evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cost {
    pub oracle_calls: u64,
    pub bit_ops: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub answer: bool,
    pub provenance: Provenance,
    pub cost: Cost,
}

impl Verdict {
    fn new(answer: bool, provenance: Provenance, bit_ops: u64) -> Self {
        Verdict {
            answer,
            provenance,
            cost: Cost {
                oracle_calls: 0,
                bit_ops,
            },
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
    #[error("{what} = {value} exceeds the desk cap {cap}")]
    DeskCap {
        what: &'static str,
        value: u64,
        cap: u64,
    },
    #[error("problem {tag} passed inconsistent aux parameters")]
    AuxMismatch { tag: ProblemTag },
}

/// Shared knobs for the deciders.
#[derive(Clone, Debug, Default)]
pub struct DecideCfg {
    pub budget: EvalBudget,
    pub factor_budget: FactorBudget,
    pub seed: u64,
    /// Overrides the `2^(200s)` sampling range exponent of the randomized
    /// polynomial-square test; desk scale only.
    pub sample_exp_override: Option<u64>,
}

// ---------------------------------------------------------------------------
// individual deciders

/// PosSLP: is the computed integer strictly positive? Exact evaluation with
/// one doubled-budget retry.
pub fn decide_pos(slp: &Slp, budget: &EvalBudget) -> Result<Verdict, DecideError> {
    match eval_exact_stats(slp, &[], budget) {
        Ok((v, bits)) => Ok(Verdict::new(v.is_positive(), Provenance::Exact, bits)),
        Err(EvalError::BudgetExceeded { .. }) => {
            let doubled = EvalBudget {
                max_bits: budget.max_bits.saturating_mul(2),
                ..budget.clone()
            };
            let (v, bits) = eval_exact_stats(slp, &[], &doubled)?;
            Ok(Verdict::new(v.is_positive(), Provenance::Exact, bits))
        }
        Err(e) => Err(e.into()),
    }
}

fn random_prime_62(rng: &mut ChaCha8Rng) -> u64 {
    loop {
        let candidate = rng.gen_range(1u64 << 61..1 << 62) | 1;
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

/// EquSLP: is the computed integer (or polynomial — this decider doubles as
/// arithmetic circuit identity testing) zero? Randomized evaluation against
/// 20 fresh 62-bit primes, with exact confirmation of a zero verdict when
/// the default budget allows.
pub fn decide_equ(slp: &Slp, seed: u64) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bit_ops = 0u64;
    let mut all_zero = true;
    for _ in 0..20 {
        let p = random_prime_62(&mut rng);
        let assignment: Vec<BigInt> = (0..slp.num_vars)
            .map(|_| BigInt::from(rng.gen_range(0..p)))
            .collect();
        let r = eval_mod(slp, &assignment, &BigUint::from(p)).expect("prime modulus is valid");
        bit_ops += 62 * slp.size() as u64;
        if !r.is_zero() {
            all_zero = false;
            break;
        }
    }
    if !all_zero {
        // a nonzero residue is a proof of nonzeroness
        return Verdict::new(false, Provenance::Randomized { seed }, bit_ops);
    }
    if slp.num_vars == 0 {
        if let Ok((v, bits)) = eval_exact_stats(slp, &[], &EvalBudget::default()) {
            return Verdict::new(v.is_zero(), Provenance::Exact, bit_ops + bits);
        }
    }
    Verdict::new(true, Provenance::Randomized { seed }, bit_ops)
}

/// Div2SLP: does `2^ℓ` divide the computed integer? Decided modulo `2^ℓ`.
pub fn decide_div2(slp: &Slp, ell: u64) -> Result<Verdict, DecideError> {
    if ell > DIV2_DESK_CAP {
        return Err(DecideError::DeskCap {
            what: "ℓ",
            value: ell,
            cap: DIV2_DESK_CAP,
        });
    }
    if ell == 0 {
        return Ok(Verdict::new(true, Provenance::Exact, 0));
    }
    let modulus = BigUint::one() << ell;
    let r = eval_mod(slp, &[], &modulus)?;
    Ok(Verdict::new(
        r.is_zero(),
        Provenance::Exact,
        ell * slp.size() as u64,
    ))
}

/// 3SoSSLP: exact evaluation, then the `4^a(8k+7)` characterization.
pub fn decide_3sos(slp: &Slp, budget: &EvalBudget) -> Result<Verdict, DecideError> {
    let (v, bits) = eval_exact_stats(slp, &[], budget)?;
    Ok(Verdict::new(
        is_3sos(&v),
        Provenance::Characterization,
        bits,
    ))
}

/// 2SoSSLP: exact evaluation, then the factorization characterization.
pub fn decide_2sos(
    slp: &Slp,
    budget: &EvalBudget,
    factor_budget: &FactorBudget,
) -> Result<Verdict, DecideError> {
    let (v, bits) = eval_exact_stats(slp, &[], budget)?;
    let answer = is_2sos(&v, factor_budget)?;
    Ok(Verdict::new(answer, Provenance::Characterization, bits))
}

/// SquSLP: exact evaluation, then the integer square-root test.
pub fn decide_squ(slp: &Slp, budget: &EvalBudget) -> Result<Verdict, DecideError> {
    let (v, bits) = eval_exact_stats(slp, &[], budget)?;
    Ok(Verdict::new(
        is_perfect_square(&v),
        Provenance::Characterization,
        bits,
    ))
}

/// BitSLP with the representation fixed in [`bit_of`].
pub fn decide_bit(slp: &Slp, n: u64, i: u64, budget: &EvalBudget) -> Result<Verdict, DecideError> {
    let b = bit_of(slp, n, i, budget)?;
    Ok(Verdict::new(b, Provenance::Exact, 0))
}

/// DegSLP: `deg(f) ≤ d` via full expansion. The zero polynomial has degree
/// −∞, so every `d` answers yes.
pub fn decide_deg(slp: &Slp, d: u64, budget: &EvalBudget) -> Result<Verdict, DecideError> {
    let f = expand_poly(slp, budget)?;
    let answer = match f.degree() {
        None => true,
        Some(deg) => deg as u64 <= d,
    };
    Ok(Verdict::new(answer, Provenance::Exact, f.max_coeff_bits()))
}

/// OrdSLP: `ord(f) ≥ ℓ` via full expansion. The zero polynomial has order
/// +∞, so every `ℓ` answers yes.
pub fn decide_ord(slp: &Slp, ell: u64, budget: &EvalBudget) -> Result<Verdict, DecideError> {
    let f = expand_poly(slp, budget)?;
    let answer = match f.order() {
        None => true,
        Some(ord) => ord as u64 >= ell,
    };
    Ok(Verdict::new(answer, Provenance::Exact, f.max_coeff_bits()))
}

/// PosPolySLP: expansion plus the exact Sturm positivity decision.
pub fn decide_pos_poly(slp: &Slp, budget: &EvalBudget) -> Result<Verdict, DecideError> {
    let f = expand_poly(slp, budget)?;
    Ok(Verdict::new(
        is_positive_poly(&f),
        Provenance::Exact,
        f.max_coeff_bits(),
    ))
}

pub(crate) fn random_biguint_bits(rng: &mut ChaCha8Rng, bits: u64) -> BigUint {
    if bits == 0 {
        return BigUint::zero();
    }
    let words = bits.div_ceil(32);
    let mut digits: Vec<u32> = (0..words).map(|_| rng.gen()).collect();
    let extra = (words * 32 - bits) as u32;
    if extra > 0 {
        let last = digits.last_mut().unwrap();
        *last >>= extra;
    }
    BigUint::new(digits)
}

/// SquPolySLP, one-sided-error randomized route: sample `t` uniformly from
/// `[1, 2^E]` with `E = 200·size` (or the desk override), evaluate `f(t)`
/// exactly, and answer yes iff the value is a perfect square. A "no" is
/// always correct; a "yes" errs only on the sparse square values of a
/// non-square polynomial.
pub fn decide_squ_poly_rand(
    slp: &Slp,
    sample_exp_override: Option<u64>,
    seed: u64,
    budget: &EvalBudget,
) -> Result<Verdict, DecideError> {
    let exponent = sample_exp_override.unwrap_or(200 * slp.size() as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = random_biguint_bits(&mut rng, exponent) + 1u32;
    let (v, bits) = eval_exact_stats(slp, &[BigInt::from(t)], budget)?;
    Ok(Verdict::new(
        is_perfect_square(&v),
        Provenance::Randomized { seed },
        bits,
    ))
}

/// Dispatches an instance to its decider.
pub fn decide(instance: &ProblemInstance, cfg: &DecideCfg) -> Result<Verdict, DecideError> {
    if !instance.aux_consistent() {
        return Err(DecideError::AuxMismatch {
            tag: instance.problem,
        });
    }
    let slp = &instance.slp;
    match (instance.problem, instance.aux) {
        (ProblemTag::Pos, _) => decide_pos(slp, &cfg.budget),
        (ProblemTag::Equ, _) => Ok(decide_equ(slp, cfg.seed)),
        (ProblemTag::Bit, Aux::Bit { n, i }) => decide_bit(slp, n, i, &cfg.budget),
        (ProblemTag::Div2, Aux::Ell(ell)) => decide_div2(slp, ell),
        (ProblemTag::ThreeSos, _) => decide_3sos(slp, &cfg.budget),
        (ProblemTag::TwoSos, _) => decide_2sos(slp, &cfg.budget, &cfg.factor_budget),
        (ProblemTag::Squ, _) => decide_squ(slp, &cfg.budget),
        (ProblemTag::Deg, Aux::Deg(d)) => decide_deg(slp, d, &cfg.budget),
        (ProblemTag::Ord, Aux::Ell(ell)) => decide_ord(slp, ell, &cfg.budget),
        (ProblemTag::PosPoly, _) => decide_pos_poly(slp, &cfg.budget),
        (ProblemTag::SquPoly, _) => {
            decide_squ_poly_rand(slp, cfg.sample_exp_override, cfg.seed, &cfg.budget)
        }
        _ => unreachable!("aux consistency checked above"),
    }
}

// ---------------------------------------------------------------------------
// oracle handles

/// One oracle query as seen by a reduction driver.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleCall {
    pub tag: ProblemTag,
    pub aux: Aux,
    pub query_size: usize,
    pub answer: bool,
}

type OracleFn<'a> = Box<dyn Fn(&Slp, &Aux) -> Result<Verdict, DecideError> + 'a>;

/// A callable decision procedure for one problem tag with a query counter
/// and a query log. Confined to one campaign executor; not `Sync`.
pub struct OracleHandle<'a> {
    tag: ProblemTag,
    calls: Cell<u64>,
    log: RefCell<Vec<OracleCall>>,
    func: OracleFn<'a>,
}

impl<'a> OracleHandle<'a> {
    pub fn new(
        tag: ProblemTag,
        func: impl Fn(&Slp, &Aux) -> Result<Verdict, DecideError> + 'a,
    ) -> Self {
        OracleHandle {
            tag,
            calls: Cell::new(0),
            log: RefCell::new(Vec::new()),
            func: Box::new(func),
        }
    }

    /// A truthful oracle backed by this crate's own decider for `tag`.
    pub fn truthful(tag: ProblemTag, cfg: DecideCfg) -> OracleHandle<'static> {
        OracleHandle::new(tag, move |slp, aux| {
            decide(&ProblemInstance::new(tag, slp.clone(), *aux), &cfg)
        })
    }

    pub fn tag(&self) -> ProblemTag {
        self.tag
    }

    pub fn query(&self, slp: &Slp, aux: &Aux) -> Result<bool, DecideError> {
        self.calls.set(self.calls.get() + 1);
        let verdict = (self.func)(slp, aux)?;
        self.log.borrow_mut().push(OracleCall {
            tag: self.tag,
            aux: *aux,
            query_size: slp.size(),
            answer: verdict.answer,
        });
        Ok(verdict.answer)
    }

    pub fn calls(&self) -> u64 {
        self.calls.get()
    }

    pub fn take_log(&self) -> Vec<OracleCall> {
        std::mem::take(&mut self.log.borrow_mut())
    }

    pub fn reset(&self) {
        self.calls.set(0);
        self.log.borrow_mut().clear();
    }
}
