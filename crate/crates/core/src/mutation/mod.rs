//! First-order mutant generation and canonical-form pruning.

pub mod canonical;
mod operators;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

pub use canonical::{canonicalize, CanonicalForm};
pub use operators::{apply_edit, edits_for, Edit, EditError, OperatorId, OperatorSet, UnknownOperator, UomForms};

use crate::minilang::Program;

/// A single-site variant of a program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutant {
    /// `<OP>-L<line>-<n>`, with `n` counting from 1 per operator and line.
    pub id: String,
    pub operator: OperatorId,
    /// Line of the statement that houses the mutated site.
    pub line: u32,
    pub edit: Edit,
    pub description: String,
    pub program: Program,
}

impl Mutant {
    /// Rebuilds a mutant from its listing fields.
    pub fn rebuild(
        original: &Program,
        id: String,
        operator: OperatorId,
        line: u32,
        edit: Edit,
    ) -> Result<Mutant, EditError> {
        let (program, description) = apply_edit(original, line, edit)?;
        Ok(Mutant { id, operator, line, edit, description, program })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenerationStats {
    pub generated: usize,
    /// Equivalent and duplicate mutants together.
    pub duplicates_removed: usize,
    /// The part of `duplicates_removed` equal to the original program.
    pub equivalent: usize,
    pub retained: usize,
}

/// Why a mutant was dropped, and what it was found equal to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrunedMutant {
    pub mutant: Mutant,
    /// `None` when the mutant is equivalent to the original program.
    pub representative: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutantSet {
    pub original: Program,
    pub mutants: Vec<Mutant>,
    pub pruned: Vec<PrunedMutant>,
    pub stats: GenerationStats,
}

/// Generates every first-order mutant, ordered by line, then operator, then
/// site and replacement.
pub fn generate_mutants(program: &Program, ops: &OperatorSet) -> MutantSet {
    let mut statements = Vec::new();
    program.for_each_statement(&mut |s| statements.push(s));
    statements.sort_by_key(|s| s.line);

    let mut mutants = Vec::new();
    for stmt in statements {
        for op in ops.iter() {
            for (n, edit) in edits_for(op, stmt, ops.uom_forms).into_iter().enumerate() {
                let Ok(mutant) =
                    Mutant::rebuild(program, alloc::format!("{}-L{}-{}", op, stmt.line, n + 1), op, stmt.line, edit)
                else {
                    continue;
                };
                mutants.push(mutant);
            }
        }
    }
    let generated = mutants.len();
    MutantSet {
        original: program.clone(),
        mutants,
        pruned: Vec::new(),
        stats: GenerationStats { generated, duplicates_removed: 0, equivalent: 0, retained: generated },
    }
}

/// Drops mutants whose canonical form equals the original's, then keeps only
/// the first mutant (in generation order) of each canonical form.
pub fn prune_duplicates(set: MutantSet) -> MutantSet {
    let MutantSet { original, mutants, mut pruned, mut stats } = set;
    let original_form = canonicalize(&original);
    let mut seen: BTreeMap<CanonicalForm, String> = BTreeMap::new();
    let mut kept = Vec::new();
    for m in mutants {
        let form = canonicalize(&m.program);
        if form == original_form {
            stats.equivalent += 1;
            pruned.push(PrunedMutant { mutant: m, representative: None });
        } else if let Some(rep) = seen.get(&form) {
            pruned.push(PrunedMutant { mutant: m, representative: Some(rep.clone()) });
        } else {
            seen.insert(form, m.id.clone());
            kept.push(m);
        }
    }
    stats.retained = kept.len();
    stats.duplicates_removed = stats.generated - stats.retained;
    MutantSet { original, mutants: kept, pruned, stats }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minilang::{parse, Expr, StmtKind};
    use alloc::collections::BTreeSet;
    use alloc::vec;

    const MEDIAN: &str = include_str!("../../../../corpus/median/program.mini");

    #[test]
    fn aor_on_addition_yields_four() {
        let p = parse("t", "param a;\nparam b;\nx = a + b;").unwrap();
        let set = generate_mutants(&p, &OperatorSet::only(&[OperatorId::Aor]));
        let descs: Vec<&str> = set.mutants.iter().map(|m| m.description.as_str()).collect();
        assert_eq!(descs, ["a + b -> a - b", "a + b -> a * b", "a + b -> a / b", "a + b -> a % b"]);
        let ids: Vec<&str> = set.mutants.iter().map(|m| m.id.as_str()).collect();
        assert_eq!(ids, ["AOR-L3-1", "AOR-L3-2", "AOR-L3-3", "AOR-L3-4"]);
        assert_eq!(set.stats.generated, 4);
    }

    #[test]
    fn program_without_statements_has_no_mutants() {
        let p = Program::from_parts("empty", vec!["a".into()], 1, vec![]);
        let set = generate_mutants(&p, &OperatorSet::all());
        assert!(set.mutants.is_empty());
        assert_eq!(set.stats.generated, 0);
    }

    #[test]
    fn increment_only_uom_on_median_gives_plus_and_minus_one_per_read() {
        let p = parse("median", MEDIAN).unwrap();
        let set = generate_mutants(&p, &OperatorSet::increment_only());
        let mut reads = 0;
        p.for_each_statement(&mut |s| {
            if let Some(e) = s.kind.expr() {
                e.for_each_preorder(&mut |_, n| {
                    if matches!(n, Expr::Var(_)) {
                        reads += 1;
                    }
                });
            }
        });
        assert_eq!(set.mutants.len(), 2 * reads);
        for pair in set.mutants.chunks(2) {
            assert!(pair[0].description.ends_with("+ 1"), "{}", pair[0].description);
            assert!(pair[1].description.ends_with("- 1"), "{}", pair[1].description);
            assert_eq!(pair[0].line, pair[1].line);
        }
        let faulty: Vec<&str> = set.mutants.iter().filter(|m| m.line == 10).map(|m| m.description.as_str()).collect();
        assert_eq!(faulty, ["y -> y + 1", "y -> y - 1"]);
    }

    #[test]
    fn generation_is_ordered_by_line_then_operator() {
        let p = parse("median", MEDIAN).unwrap();
        let set = generate_mutants(&p, &OperatorSet::all());
        let keys: Vec<(u32, OperatorId)> = set.mutants.iter().map(|m| (m.line, m.operator)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let ids: BTreeSet<&str> = set.mutants.iter().map(|m| m.id.as_str()).collect();
        assert_eq!(ids.len(), set.mutants.len());
        assert_eq!(set, generate_mutants(&p, &OperatorSet::all()));
    }

    #[test]
    fn ssdl_on_control_statement_removes_the_block() {
        let p = parse("t", "param a;\nif (a) {\n  print 1;\n}\nprint 2;").unwrap();
        let set = generate_mutants(&p, &OperatorSet::only(&[OperatorId::Ssdl]));
        assert_eq!(set.mutants.len(), 3);
        assert_eq!(set.mutants[0].line, 2);
        assert!(matches!(set.mutants[0].program.statements()[0].kind, StmtKind::Skip));
        assert_eq!(set.mutants[0].program.lines(), vec![2, 5]);
    }

    #[test]
    fn equivalent_mutant_is_dropped() {
        let set = generate_mutants(
            &parse("t", "param a;\nparam b;\nx = a + 0 * b;\nprint x;").unwrap(),
            &OperatorSet::only(&[OperatorId::Aor]),
        );
        assert_eq!(set.stats.generated, 8);
        let pruned = prune_duplicates(set);
        let equivalent: Vec<&str> = pruned
            .pruned
            .iter()
            .filter(|p| p.representative.is_none())
            .map(|p| p.mutant.description.as_str())
            .collect();
        assert_eq!(equivalent, ["a + 0 * b -> a - 0 * b"]);
        assert_eq!(pruned.stats.retained + pruned.stats.duplicates_removed, pruned.stats.generated);
    }

    #[test]
    fn two_mutants_with_one_form_keep_the_first() {
        let p = parse("t", "param a;\nparam b;\nx = a + b;\nprint x;").unwrap();
        let (m1, _) = apply_edit(&p, 3, Edit::SwapBinOp { node: 0, op: crate::minilang::BinOp::Sub }).unwrap();
        let mk = |id: &str, edit, program| Mutant {
            id: id.into(),
            operator: OperatorId::Aor,
            line: 3,
            edit,
            description: String::new(),
            program,
        };
        let original = parse("t", "param a;\nparam b;\nx = a;\nprint x;").unwrap();
        let twin_a = parse("t", "param a;\nparam b;\nx = a - b;\nprint x;").unwrap();
        let set = MutantSet {
            original,
            mutants: vec![
                mk("m1", Edit::Delete, m1),
                mk("m2", Edit::Delete, twin_a),
                mk("m3", Edit::Delete, parse("t", "param a;\nparam b;\nx = a + 0 * b;\nprint x;").unwrap()),
            ],
            pruned: vec![],
            stats: GenerationStats { generated: 3, duplicates_removed: 0, equivalent: 0, retained: 3 },
        };
        let out = prune_duplicates(set);
        assert_eq!(out.mutants.iter().map(|m| m.id.as_str()).collect::<Vec<_>>(), ["m1"]);
        assert_eq!(out.pruned[0].representative.as_deref(), Some("m1"));
        assert_eq!(out.pruned[1].representative, None);
        assert_eq!(out.stats, GenerationStats { generated: 3, duplicates_removed: 2, equivalent: 1, retained: 1 });
    }

    #[test]
    fn four_shared_pairs_among_twenty() {
        // Sixteen distinct assignments, four of them spelled a second way.
        let original = parse("t", "param a;\nx = a;\nprint x;").unwrap();
        let mut programs = Vec::new();
        for k in 1..=16 {
            programs.push(alloc::format!("param a;\nx = a + {k};\nprint x;"));
        }
        for k in 1..=4 {
            programs.push(alloc::format!("param a;\nx = {k} + a;\nprint x;"));
        }
        let mutants: Vec<Mutant> = programs
            .iter()
            .enumerate()
            .map(|(i, src)| Mutant {
                id: alloc::format!("m{i}"),
                operator: OperatorId::Crcr,
                line: 2,
                edit: Edit::Delete,
                description: String::new(),
                program: parse("t", src).unwrap(),
            })
            .collect();
        let set = MutantSet {
            original,
            mutants,
            pruned: vec![],
            stats: GenerationStats { generated: 20, duplicates_removed: 0, equivalent: 0, retained: 20 },
        };
        let out = prune_duplicates(set);
        assert_eq!(out.stats.retained, 16);
        assert_eq!(out.stats.duplicates_removed, 4);
        assert_eq!(out.stats.equivalent, 0);
    }

    #[test]
    fn every_mutant_touches_exactly_one_statement() {
        let p = parse("median", MEDIAN).unwrap();
        let mut original = Vec::new();
        p.for_each_statement(&mut |s| original.push(s.clone()));
        for m in generate_mutants(&p, &OperatorSet::all()).mutants {
            let mut changed = Vec::new();
            let mut i = 0;
            let mut mutated = Vec::new();
            m.program.for_each_statement(&mut |s| mutated.push(s.clone()));
            // Statement deletion of a block drops its children from the walk.
            for s in &original {
                match mutated.get(i) {
                    Some(ms) if ms.line == s.line => {
                        if header_differs(s, ms) {
                            changed.push(s.line);
                        }
                        i += 1;
                    }
                    _ => {}
                }
            }
            assert_eq!(changed, vec![m.line], "{}", m.id);
        }
    }

    fn header_differs(a: &crate::minilang::Statement, b: &crate::minilang::Statement) -> bool {
        match (&a.kind, &b.kind) {
            (StmtKind::If { cond: c1, .. }, StmtKind::If { cond: c2, .. }) => c1 != c2,
            (StmtKind::While { cond: c1, .. }, StmtKind::While { cond: c2, .. }) => c1 != c2,
            (x, y) => x != y,
        }
    }
}
