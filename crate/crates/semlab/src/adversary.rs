//! The refutation experiment: run an emulator against the unbounded leq
//! language while capturing its transcript, forge a finite bound larger
//! than every numeral the emulator ever mentioned, and show the emulator
//! cannot tell the two languages apart even though their denotations
//! differ.
//!
//! The adversary sees only the transcript, never emulator internals. Each
//! run owns its oracles and emulator instance, so runs are independently
//! parallelizable.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

use crate::emulation::{
    binary_search_emulator, emulate_eq, linear_scan_emulator, CanonicalRepresentation,
    EmulationError, LeqEstimate,
};
use crate::languages::{leq_context, make_leq, LeqParam, TemplateSlot};
use crate::oracle::{replay_first_mismatch, AssertionOracle, QueryTranscript, Relation};
use crate::semantics::{compare, Context};

pub const ADVERSARY_EXPR: &str = "leq()";
pub const ADVERSARY_OTHER: &str = "True";

#[derive(Debug, Error)]
pub enum AdversaryError {
    #[error("replay against the forged language diverged at transcript entry {index}")]
    ReplayMismatch { index: usize },
    #[error("delta agreed with both languages, which contradicts their separation at the forged bound")]
    NoDisagreement,
    #[error(transparent)]
    Emulation(#[from] EmulationError),
}

impl From<crate::oracle::OracleError> for AdversaryError {
    fn from(e: crate::oracle::OracleError) -> Self {
        AdversaryError::Emulation(EmulationError::Oracle(e))
    }
}

/// An emulator's opaque representation of one expression. The adversary
/// never looks inside; only the emulator's own decider does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Repr {
    Canonical(CanonicalRepresentation),
    Bound(LeqEstimate),
    Constant,
    Signature(u64),
}

/// A black-box emulator: a representation procedure that talks to the
/// language only through the oracle it is handed, and a decider over
/// representations. No other channel to the language exists.
pub trait Emulator {
    fn name(&self) -> String;

    fn represent(&mut self, expr: &str, oracle: &mut AssertionOracle)
        -> Result<Repr, AdversaryError>;

    fn decide(&self, a: &Repr, b: &Repr, ctx: &Context) -> bool;
}

/// Canonical-index emulation: representations are first-equivalent-string
/// indices, the decider compares them and ignores the context.
pub struct NaiveEmulator;

impl Emulator for NaiveEmulator {
    fn name(&self) -> String {
        "naive".to_string()
    }

    fn represent(
        &mut self,
        expr: &str,
        oracle: &mut AssertionOracle,
    ) -> Result<Repr, AdversaryError> {
        Ok(Repr::Canonical(emulate_eq(expr, oracle)?))
    }

    fn decide(&self, a: &Repr, b: &Repr, ctx: &Context) -> bool {
        match (a, b) {
            (Repr::Canonical(x), Repr::Canonical(y)) => crate::emulation::delta_eq(x, y, ctx),
            _ => unreachable!("naive emulator only produces canonical representations"),
        }
    }
}

/// Recovers the bound by binary search over contexts `0..=n_max` and decides
/// equality of the two template expressions from the recovered bound and the
/// numeral in the context. Never queries a numeral above `n_max`.
pub struct BinarySearchEmulator {
    pub n_max: u64,
}

impl Emulator for BinarySearchEmulator {
    fn name(&self) -> String {
        format!("binary-search(N={})", self.n_max)
    }

    fn represent(
        &mut self,
        _expr: &str,
        oracle: &mut AssertionOracle,
    ) -> Result<Repr, AdversaryError> {
        let (estimate, _queries) = binary_search_emulator(oracle, self.n_max)?;
        Ok(Repr::Bound(estimate))
    }

    fn decide(&self, a: &Repr, _b: &Repr, ctx: &Context) -> bool {
        let estimate = match a {
            Repr::Bound(est) => est,
            _ => unreachable!("binary-search emulator only produces bound estimates"),
        };
        let n = context_numeral(ctx);
        match estimate {
            // Equality of the call and the literal tracks the guard n < m.
            LeqEstimate::Exact(m) => n < BigUint::from(*m),
            // The bound looked infinite from inside the window.
            LeqEstimate::AboveBound => true,
        }
    }
}

/// The degenerate emulator: no queries, always answers 0.
pub struct ConstantEmulator;

impl Emulator for ConstantEmulator {
    fn name(&self) -> String {
        "constant".to_string()
    }

    fn represent(
        &mut self,
        _expr: &str,
        _oracle: &mut AssertionOracle,
    ) -> Result<Repr, AdversaryError> {
        Ok(Repr::Constant)
    }

    fn decide(&self, _a: &Repr, _b: &Repr, _ctx: &Context) -> bool {
        false
    }
}

/// A seeded emulator that issues a random batch of well-formed queries
/// (template contexts, M-slot probes with numeral expressions, invalid
/// strings at the empty context) and decides from a hash of the answers.
/// Same seed, same behavior, byte for byte.
pub struct RandomEmulator {
    pub seed: u64,
}

impl Emulator for RandomEmulator {
    fn name(&self) -> String {
        format!("random(seed={})", self.seed)
    }

    fn represent(
        &mut self,
        expr: &str,
        oracle: &mut AssertionOracle,
    ) -> Result<Repr, AdversaryError> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ hash_str(expr));
        let mut signature: u64 = hash_str(expr);
        let queries = rng.gen_range(1..=32);
        for _ in 0..queries {
            let n: u64 = rng.gen_range(0..=50);
            let answer = match rng.gen_range(0u8..3) {
                0 => oracle.assert_query(
                    ADVERSARY_EXPR,
                    ADVERSARY_OTHER,
                    &leq_context(TemplateSlot::LeqCall, n),
                )?,
                1 => {
                    // Probe the hidden bound slot directly against a numeral.
                    let guard_n: u64 = rng.gen_range(0..=50);
                    let ctx = Context::new(
                        format!("def leq() -> bool:\n    return {guard_n} < "),
                        "\nprint(leq())",
                    );
                    oracle.assert_query("M", &n.to_string(), &ctx)?
                }
                _ => oracle.assert_query(&n.to_string(), &n.to_string(), &Context::empty())?,
            };
            signature = signature
                .rotate_left(7)
                .wrapping_add(answer as u64)
                .wrapping_mul(0x9e37_79b9_7f4a_7c15);
        }
        Ok(Repr::Signature(signature))
    }

    fn decide(&self, a: &Repr, b: &Repr, _ctx: &Context) -> bool {
        match (a, b) {
            (Repr::Signature(x), Repr::Signature(y)) => {
                (x ^ y ^ self.seed).count_ones() % 2 == 0
            }
            _ => unreachable!("random emulator only produces signatures"),
        }
    }
}

/// The template numeral of a leq context: the last digit run of the left
/// part (the skeleton itself contains no digits).
fn context_numeral(ctx: &Context) -> BigUint {
    digit_runs(&ctx.left)
        .last()
        .map(|run| run.parse().expect("digit run parses"))
        .unwrap_or_else(BigUint::zero)
}

fn hash_str(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x1000_0000_01b3))
}

/// Largest decimal numeral appearing anywhere in the transcript — queried
/// expressions as well as both context parts — or 0 if there is none.
/// Counting expression numerals closes the loophole of probing `M` against
/// bare numerals.
pub fn extract_max_numeral(transcript: &QueryTranscript) -> BigUint {
    let mut max = BigUint::zero();
    for rec in transcript.iter() {
        for text in [&rec.expr, &rec.other, &rec.context.left, &rec.context.right] {
            for run in digit_runs(text) {
                let value: BigUint = run.parse().expect("digit run parses");
                if value > max {
                    max = value;
                }
            }
        }
    }
    max
}

fn digit_runs(s: &str) -> Vec<&str> {
    let bytes = s.as_bytes();
    let mut runs = Vec::new();
    let mut start = None;
    for (i, b) in bytes.iter().enumerate() {
        match (b.is_ascii_digit(), start) {
            (true, None) => start = Some(i),
            (false, Some(from)) => {
                runs.push(&s[from..i]);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(from) = start {
        runs.push(&s[from..]);
    }
    runs
}

/// Which of the two candidate languages the emulator's verdict contradicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RefutedLanguage {
    #[serde(rename = "L_inf")]
    LInf,
    #[serde(rename = "L_mprime")]
    LMPrime,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AdversaryReport {
    pub emulator: String,
    pub transcript_inf: QueryTranscript,
    #[serde(serialize_with = "crate::report::biguint_as_string")]
    pub m_prime: BigUint,
    pub replay_identical: bool,
    /// The numeral of the disagreement context, always equal to `m_prime`.
    #[serde(serialize_with = "crate::report::biguint_as_string")]
    pub disagreement_n: BigUint,
    pub disagreement_context: Context,
    pub refuted_language: RefutedLanguage,
    pub delta_output: bool,
    pub ground_truth_inf: bool,
    pub ground_truth_m_prime: bool,
}

/// The full experiment from the impossibility proof, run constructively:
///
/// 1. run the emulator on `"leq()"` and `"True"` against the unbounded
///    language, capturing both transcripts;
/// 2. set `m' = extract_max_numeral + 1`;
/// 3. replay the combined transcript against the language with bound `m'`
///    and require every answer bit to match — so the emulator's
///    representations would have come out identical on either language;
/// 4. evaluate the decider at the context with numeral `m'`, where the two
///    languages genuinely disagree, and report which one it contradicts.
pub fn run_adversary(
    emu: &mut dyn Emulator,
    budget: Option<u64>,
) -> Result<AdversaryReport, AdversaryError> {
    let l_inf = Arc::new(make_leq(LeqParam::Infinite));
    let eq = Relation::equality();

    let mut oracle_a = match budget {
        Some(b) => AssertionOracle::with_budget(l_inf.clone(), eq.clone(), b),
        None => AssertionOracle::new(l_inf.clone(), eq.clone()),
    };
    let repr_a = emu.represent(ADVERSARY_EXPR, &mut oracle_a)?;
    let mut transcript = oracle_a.snapshot();

    let mut oracle_b = match budget {
        Some(b) => AssertionOracle::with_budget(l_inf.clone(), eq.clone(), b),
        None => AssertionOracle::new(l_inf.clone(), eq.clone()),
    };
    let repr_b = emu.represent(ADVERSARY_OTHER, &mut oracle_b)?;
    transcript.extend(oracle_b.snapshot());

    let m_prime = extract_max_numeral(&transcript) + 1u32;
    let forged = make_leq(LeqParam::Finite(m_prime.clone()));

    if let Some(index) = replay_first_mismatch(&transcript, &forged, &eq) {
        return Err(AdversaryError::ReplayMismatch { index });
    }

    let ctx = leq_context(TemplateSlot::LeqCall, m_prime.clone());
    let delta_output = emu.decide(&repr_a, &repr_b, &ctx);
    let gt_inf = compare(l_inf.as_ref(), &eq, ADVERSARY_EXPR, ADVERSARY_OTHER, &ctx);
    let gt_forged = compare(&forged, &eq, ADVERSARY_EXPR, ADVERSARY_OTHER, &ctx);
    if gt_inf == gt_forged {
        // The languages separate at m' by construction; anything else is a
        // broken experiment, not a refutation.
        return Err(AdversaryError::NoDisagreement);
    }

    let refuted_language = if delta_output != gt_inf {
        RefutedLanguage::LInf
    } else {
        RefutedLanguage::LMPrime
    };

    Ok(AdversaryReport {
        emulator: emu.name(),
        transcript_inf: transcript,
        m_prime: m_prime.clone(),
        replay_identical: true,
        disagreement_n: m_prime,
        disagreement_context: ctx,
        refuted_language,
        delta_output,
        ground_truth_inf: gt_inf,
        ground_truth_m_prime: gt_forged,
    })
}

/// One measured row of the binary-vs-linear comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityRow {
    #[serde(rename = "N")]
    pub n_window: u64,
    pub m: u64,
    pub binary: u64,
    pub linear: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplexityTable {
    pub rows: Vec<ComplexityRow>,
}

impl ComplexityTable {
    /// CSV rendering with the stable header `N,m,binary,linear`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,m,binary,linear\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.n_window, row.m, row.binary, row.linear
            ));
        }
        out
    }
}

/// Query counts of both bound-recovery strategies over sampled bounds
/// `m <= N`, measured by actually running them. Sampling is seeded so tables
/// are reproducible.
pub fn query_complexity_experiment(
    ns: &[u64],
    samples_per_n: usize,
    seed: u64,
) -> Result<ComplexityTable, AdversaryError> {
    let mut rows = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &n_window in ns {
        let mut ms: Vec<u64> = vec![1, n_window];
        while ms.len() < samples_per_n.max(2) {
            ms.push(rng.gen_range(1..=n_window));
        }
        ms.sort_unstable();
        ms.dedup();
        for m in ms {
            let lang = Arc::new(make_leq(LeqParam::finite(m)));
            let mut binary_oracle =
                AssertionOracle::new(lang.clone(), Relation::equality());
            let (binary_est, binary) = binary_search_emulator(&mut binary_oracle, n_window)?;
            debug_assert_eq!(binary_est, LeqEstimate::Exact(m));
            let mut linear_oracle = AssertionOracle::new(lang, Relation::equality());
            let (linear_est, linear) = linear_scan_emulator(&mut linear_oracle, n_window)?;
            debug_assert_eq!(linear_est, LeqEstimate::Exact(m));
            rows.push(ComplexityRow { n_window, m, binary, linear });
        }
    }
    Ok(ComplexityTable { rows })
}
