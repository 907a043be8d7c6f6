//! Possible-worlds extension: modal denotations and assertions over
//! explicit finite world tables, exhaustive verification of the box
//! theorem, and the diamond underspecification counterexample.
//!
//! Cells live in {0, 1, ∅} exactly as the appendix assumes. World tables
//! are plain finite maps, not language wrappers, because the theorems
//! quantify over arbitrary intensional assignments.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModalError {
    #[error("expression {0:?} not in table domain")]
    UnknownExpression(String),
    #[error("context {0:?} not in table domain")]
    UnknownContext(String),
    #[error("cell vector has length {got}, expected worlds*exprs*ctxs = {expected}")]
    ShapeMismatch { got: usize, expected: usize },
    #[error("sweep budget of {budget} checks exhausted")]
    BudgetExceeded { budget: u64 },
}

/// An intensional denotation value at one world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cell {
    Zero,
    One,
    Null,
}

impl Cell {
    pub fn render(self) -> &'static str {
        match self {
            Cell::Zero => "0",
            Cell::One => "1",
            Cell::Null => "null",
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.render())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModalQuantifier {
    /// Conjunctive fold: true in every world.
    Box,
    /// Disjunctive fold: true in some world.
    Diamond,
}

impl ModalQuantifier {
    fn fold(self, bits: impl Iterator<Item = bool>) -> bool {
        match self {
            ModalQuantifier::Box => bits.fold(true, |acc, b| acc && b),
            ModalQuantifier::Diamond => bits.fold(false, |acc, b| acc || b),
        }
    }
}

/// A finite intensional assignment: a cell for every
/// (world, expression, context) triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WorldTable {
    pub worlds: Vec<String>,
    pub exprs: Vec<String>,
    pub ctxs: Vec<String>,
    /// Indexed world-major, then expression, then context.
    cells: Vec<Cell>,
}

impl WorldTable {
    pub fn new(
        worlds: Vec<String>,
        exprs: Vec<String>,
        ctxs: Vec<String>,
        cells: Vec<Cell>,
    ) -> Result<Self, ModalError> {
        let expected = worlds.len() * exprs.len() * ctxs.len();
        if cells.len() != expected {
            return Err(ModalError::ShapeMismatch { got: cells.len(), expected });
        }
        Ok(WorldTable { worlds, exprs, ctxs, cells })
    }

    fn cell_at(&self, w: usize, e: usize, c: usize) -> Cell {
        self.cells[(w * self.exprs.len() + e) * self.ctxs.len() + c]
    }

    fn expr_index(&self, e: &str) -> Result<usize, ModalError> {
        self.exprs
            .iter()
            .position(|x| x == e)
            .ok_or_else(|| ModalError::UnknownExpression(e.to_string()))
    }

    fn ctx_index(&self, c: &str) -> Result<usize, ModalError> {
        self.ctxs
            .iter()
            .position(|x| x == c)
            .ok_or_else(|| ModalError::UnknownContext(c.to_string()))
    }

    pub fn cell(&self, world: usize, e: &str, c: &str) -> Result<Cell, ModalError> {
        Ok(self.cell_at(world, self.expr_index(e)?, self.ctx_index(c)?))
    }
}

/// The quantifier fold of the per-world denotations, with ∅-absorption:
/// if any world's cell is ∅ the modal denotation is ∅.
pub fn modal_denote(
    t: &WorldTable,
    q: ModalQuantifier,
    e: &str,
    ctx: &str,
) -> Result<Cell, ModalError> {
    let (ei, ci) = (t.expr_index(e)?, t.ctx_index(ctx)?);
    Ok(modal_denote_idx(t, q, ei, ci))
}

fn modal_denote_idx(t: &WorldTable, q: ModalQuantifier, ei: usize, ci: usize) -> Cell {
    let mut bits = Vec::with_capacity(t.worlds.len());
    for w in 0..t.worlds.len() {
        match t.cell_at(w, ei, ci) {
            Cell::Null => return Cell::Null,
            Cell::Zero => bits.push(false),
            Cell::One => bits.push(true),
        }
    }
    if q.fold(bits.into_iter()) {
        Cell::One
    } else {
        Cell::Zero
    }
}

/// The quantifier fold of the per-world assertion bits. Each world answers
/// 1 iff the two cells are identical there, with ∅ = ∅ counting as equal.
pub fn modal_assert(
    t: &WorldTable,
    q: ModalQuantifier,
    e: &str,
    e_prime: &str,
    ctx: &str,
) -> Result<bool, ModalError> {
    let (ei, ej, ci) = (t.expr_index(e)?, t.expr_index(e_prime)?, t.ctx_index(ctx)?);
    Ok(modal_assert_idx(t, q, ei, ej, ci))
}

fn modal_assert_idx(
    t: &WorldTable,
    q: ModalQuantifier,
    ei: usize,
    ej: usize,
    ci: usize,
) -> bool {
    q.fold((0..t.worlds.len()).map(|w| t.cell_at(w, ei, ci) == t.cell_at(w, ej, ci)))
}

/// One failed consistency check: the modal assertion claimed equivalence,
/// yet the modal denotations differ.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModalCounterexample {
    pub table: WorldTable,
    pub expr: String,
    pub expr_prime: String,
    pub ctx: String,
    pub denote: Cell,
    pub denote_prime: Cell,
    pub assertion: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub quantifier: ModalQuantifier,
    pub max_worlds: usize,
    pub expr_count: usize,
    pub ctx_count: usize,
    pub include_null: bool,
    pub tables_checked: u64,
    pub checks: u64,
    pub counterexample_count: u64,
    /// At most ten samples; the count above is exact.
    pub samples: Vec<ModalCounterexample>,
}

const MAX_SAMPLES: usize = 10;

/// Exhaustively sweeps every world table within the bounds and tests the
/// recovery property of the box theorem: whenever the modal assertion
/// answers 1, the two modal denotations must coincide. Pairs where either
/// modal denotation is ∅ are skipped, matching the theorem's hypotheses
/// (with cells restricted to {0, 1}, nothing is skipped).
///
/// Under □ the property is a theorem; under ◇ the same sweep rediscovers
/// underspecification witnesses like [`diamond_counterexample`].
pub fn sweep_quantifier(
    q: ModalQuantifier,
    max_worlds: usize,
    expr_count: usize,
    ctx_count: usize,
    include_null: bool,
    budget: u64,
) -> Result<VerificationReport, ModalError> {
    let domain: &[Cell] = if include_null {
        &[Cell::Zero, Cell::One, Cell::Null]
    } else {
        &[Cell::Zero, Cell::One]
    };
    let exprs: Vec<String> = (1..=expr_count).map(|i| format!("e{i}")).collect();
    let ctxs: Vec<String> = (1..=ctx_count).map(|i| format!("k{i}")).collect();

    let mut tables_checked = 0u64;
    let mut checks = 0u64;
    let mut counterexample_count = 0u64;
    let mut samples = Vec::new();

    for world_count in 1..=max_worlds {
        let worlds: Vec<String> = (1..=world_count).map(|i| format!("w{i}")).collect();
        let cell_count = world_count * expr_count * ctx_count;
        let mut assignment = vec![0usize; cell_count];
        loop {
            let cells: Vec<Cell> = assignment.iter().map(|&i| domain[i]).collect();
            let table =
                WorldTable::new(worlds.clone(), exprs.clone(), ctxs.clone(), cells)
                    .expect("assignment has the right shape");
            tables_checked += 1;

            for ci in 0..ctx_count {
                for ei in 0..expr_count {
                    for ej in 0..expr_count {
                        let den_e = modal_denote_idx(&table, q, ei, ci);
                        let den_e2 = modal_denote_idx(&table, q, ej, ci);
                        if den_e == Cell::Null || den_e2 == Cell::Null {
                            continue;
                        }
                        checks += 1;
                        if checks > budget {
                            return Err(ModalError::BudgetExceeded { budget });
                        }
                        let assertion = modal_assert_idx(&table, q, ei, ej, ci);
                        if assertion && den_e != den_e2 {
                            counterexample_count += 1;
                            if samples.len() < MAX_SAMPLES {
                                samples.push(ModalCounterexample {
                                    table: table.clone(),
                                    expr: table.exprs[ei].clone(),
                                    expr_prime: table.exprs[ej].clone(),
                                    ctx: table.ctxs[ci].clone(),
                                    denote: den_e,
                                    denote_prime: den_e2,
                                    assertion,
                                });
                            }
                        }
                    }
                }
            }

            // Odometer step over the cell assignment.
            let mut pos = 0;
            loop {
                if pos == cell_count {
                    break;
                }
                assignment[pos] += 1;
                if assignment[pos] < domain.len() {
                    break;
                }
                assignment[pos] = 0;
                pos += 1;
            }
            if pos == cell_count {
                break;
            }
        }
    }

    Ok(VerificationReport {
        quantifier: q,
        max_worlds,
        expr_count,
        ctx_count,
        include_null,
        tables_checked,
        checks,
        counterexample_count,
        samples,
    })
}

/// Both sweeps of the box theorem: the primary pass over {0, 1} cells and
/// the guarded pass including ∅ (which skips ∅-valued modal denotations,
/// per the theorem's hypotheses). Returns `(primary, guarded)`.
pub fn verify_box_theorem(
    max_worlds: usize,
    expr_count: usize,
    ctx_count: usize,
    budget: u64,
) -> Result<(VerificationReport, VerificationReport), ModalError> {
    let primary = sweep_quantifier(
        ModalQuantifier::Box,
        max_worlds,
        expr_count,
        ctx_count,
        false,
        budget,
    )?;
    let guarded = sweep_quantifier(
        ModalQuantifier::Box,
        max_worlds,
        expr_count,
        ctx_count,
        true,
        budget,
    )?;
    Ok((primary, guarded))
}

/// The two-universe comparison from the diamond theorem, with the paper's
/// cell values reproduced exactly.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiamondCheckReport {
    pub per_world_assert_left: Vec<bool>,
    pub per_world_assert_right: Vec<bool>,
    pub diamond_assert_left: bool,
    pub diamond_assert_right: bool,
    pub diamond_denote_left: (Cell, Cell),
    pub diamond_denote_right: (Cell, Cell),
    pub verdict_left_equal: bool,
    pub verdict_right_equal: bool,
}

/// Constructs the two universes of the diamond underspecification table —
/// identical assertion behavior, different equivalence verdicts — and
/// checks every published bit.
///
/// Left: e1 cells (0,0), e2 cells (0,0). Right: e1 cells (0,0), e2 cells
/// (0,1). In both, ◇-assertion answers 1; yet ◇-denotations are equal on
/// the left (0 = 0) and unequal on the right (0 ≠ 1).
pub fn diamond_counterexample() -> (WorldTable, WorldTable, DiamondCheckReport) {
    let worlds = vec!["w1".to_string(), "w2".to_string()];
    let exprs = vec!["e1".to_string(), "e2".to_string()];
    let ctxs = vec!["k".to_string()];
    // Cells in world-major order: (w1,e1) (w1,e2) (w2,e1) (w2,e2).
    let left = WorldTable::new(
        worlds.clone(),
        exprs.clone(),
        ctxs.clone(),
        vec![Cell::Zero, Cell::Zero, Cell::Zero, Cell::Zero],
    )
    .expect("left table shape");
    let right = WorldTable::new(
        worlds,
        exprs,
        ctxs,
        vec![Cell::Zero, Cell::Zero, Cell::Zero, Cell::One],
    )
    .expect("right table shape");

    let per_world = |t: &WorldTable| -> Vec<bool> {
        (0..t.worlds.len())
            .map(|w| t.cell_at(w, 0, 0) == t.cell_at(w, 1, 0))
            .collect()
    };
    let q = ModalQuantifier::Diamond;
    let den = |t: &WorldTable| {
        (
            modal_denote(t, q, "e1", "k").expect("e1 in domain"),
            modal_denote(t, q, "e2", "k").expect("e2 in domain"),
        )
    };
    let (dl, dr) = (den(&left), den(&right));
    let report = DiamondCheckReport {
        per_world_assert_left: per_world(&left),
        per_world_assert_right: per_world(&right),
        diamond_assert_left: modal_assert(&left, q, "e1", "e2", "k").expect("domain"),
        diamond_assert_right: modal_assert(&right, q, "e1", "e2", "k").expect("domain"),
        diamond_denote_left: dl,
        diamond_denote_right: dr,
        verdict_left_equal: dl.0 == dl.1,
        verdict_right_equal: dr.0 == dr.1,
    };
    (left, right, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_world_table(e1: [Cell; 2], e2: [Cell; 2]) -> WorldTable {
        WorldTable::new(
            vec!["w1".into(), "w2".into()],
            vec!["e1".into(), "e2".into()],
            vec!["k".into()],
            vec![e1[0], e2[0], e1[1], e2[1]],
        )
        .unwrap()
    }

    #[test]
    fn fold_definitions_on_mixed_cells() {
        let t = two_world_table([Cell::Zero, Cell::One], [Cell::One, Cell::One]);
        assert_eq!(modal_denote(&t, ModalQuantifier::Box, "e1", "k"), Ok(Cell::Zero));
        assert_eq!(modal_denote(&t, ModalQuantifier::Diamond, "e1", "k"), Ok(Cell::One));
        assert_eq!(modal_denote(&t, ModalQuantifier::Box, "e2", "k"), Ok(Cell::One));
    }

    #[test]
    fn null_absorbs_under_either_quantifier() {
        let t = two_world_table([Cell::One, Cell::Null], [Cell::Zero, Cell::Zero]);
        for q in [ModalQuantifier::Box, ModalQuantifier::Diamond] {
            assert_eq!(modal_denote(&t, q, "e1", "k"), Ok(Cell::Null));
        }
    }

    #[test]
    fn single_world_reduces_to_the_cell_and_the_plain_assertion() {
        for cell in [Cell::Zero, Cell::One, Cell::Null] {
            for other in [Cell::Zero, Cell::One, Cell::Null] {
                let t = WorldTable::new(
                    vec!["w1".into()],
                    vec!["e1".into(), "e2".into()],
                    vec!["k".into()],
                    vec![cell, other],
                )
                .unwrap();
                for q in [ModalQuantifier::Box, ModalQuantifier::Diamond] {
                    if cell != Cell::Null {
                        let den = modal_denote(&t, q, "e1", "k").unwrap();
                        assert_eq!(den, cell);
                    }
                    // Null = null counts as equal in a world.
                    assert_eq!(
                        modal_assert(&t, q, "e1", "e2", "k").unwrap(),
                        cell == other
                    );
                }
            }
        }
    }

    #[test]
    fn unknown_domain_entries_error() {
        let t = two_world_table([Cell::Zero; 2], [Cell::Zero; 2]);
        assert!(matches!(
            modal_denote(&t, ModalQuantifier::Box, "e9", "k"),
            Err(ModalError::UnknownExpression(_))
        ));
        assert!(matches!(
            modal_assert(&t, ModalQuantifier::Box, "e1", "e2", "nope"),
            Err(ModalError::UnknownContext(_))
        ));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let err = WorldTable::new(
            vec!["w1".into()],
            vec!["e1".into()],
            vec!["k".into()],
            vec![Cell::Zero, Cell::One],
        )
        .unwrap_err();
        assert_eq!(err, ModalError::ShapeMismatch { got: 2, expected: 1 });
    }

    #[test]
    fn box_sweep_is_clean_at_acceptance_bounds() {
        let (primary, guarded) = verify_box_theorem(3, 2, 2, u64::MAX).unwrap();
        assert_eq!(primary.counterexample_count, 0);
        assert_eq!(primary.tables_checked, 16 + 256 + 4096);
        assert_eq!(guarded.counterexample_count, 0);
    }

    #[test]
    fn box_sweep_single_world_is_trivially_clean() {
        let (primary, guarded) = verify_box_theorem(1, 2, 2, u64::MAX).unwrap();
        assert_eq!(primary.counterexample_count, 0);
        assert_eq!(guarded.counterexample_count, 0);
    }

    #[test]
    fn diamond_sweep_finds_counterexamples() {
        let report = sweep_quantifier(ModalQuantifier::Diamond, 2, 2, 1, false, u64::MAX)
            .unwrap();
        assert!(report.counterexample_count > 0);
        assert!(!report.samples.is_empty());
        let sample = &report.samples[0];
        assert!(sample.assertion);
        assert_ne!(sample.denote, sample.denote_prime);
    }

    #[test]
    fn null_absorption_holds_on_every_enumerated_table() {
        // Re-derive absorption from the sweep machinery: every table over
        // {0,1,null} with one world-null cell denotes null.
        let t = two_world_table([Cell::Null, Cell::Zero], [Cell::One, Cell::One]);
        for q in [ModalQuantifier::Box, ModalQuantifier::Diamond] {
            assert_eq!(modal_denote(&t, q, "e1", "k").unwrap(), Cell::Null);
            assert_eq!(modal_denote(&t, q, "e2", "k").unwrap(), Cell::One);
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let err = sweep_quantifier(ModalQuantifier::Box, 2, 2, 2, false, 5).unwrap_err();
        assert_eq!(err, ModalError::BudgetExceeded { budget: 5 });
    }

    #[test]
    fn diamond_counterexample_matches_the_published_table() {
        let (left, right, report) = diamond_counterexample();
        assert_eq!(report.per_world_assert_left, vec![true, true]);
        assert_eq!(report.per_world_assert_right, vec![true, false]);
        assert!(report.diamond_assert_left);
        assert!(report.diamond_assert_right);
        assert_eq!(report.diamond_denote_left, (Cell::Zero, Cell::Zero));
        assert_eq!(report.diamond_denote_right, (Cell::Zero, Cell::One));
        assert!(report.verdict_left_equal);
        assert!(!report.verdict_right_equal);
        assert_eq!(left.cell(1, "e2", "k"), Ok(Cell::Zero));
        assert_eq!(right.cell(1, "e2", "k"), Ok(Cell::One));
    }
}
