//! Integration checks over the shipped toy ontology.

mod common;

use ontoprobe::fol::{self, LayerTag, TranslationOptions};
use ontoprobe::kif::{parse_suo_kif, render_formula, Formula};
use ontoprobe::tptp;

use common::data_dir;

fn toy_statements() -> Vec<(Formula, LayerTag)> {
    let toy = data_dir().join("toy");
    let mut statements = Vec::new();
    for (file, layer) in [("top.kif", LayerTag::TopLevel), ("mid.kif", LayerTag::MidLevel)] {
        let text = std::fs::read_to_string(toy.join(file)).unwrap();
        statements.extend(
            parse_suo_kif(&text)
                .unwrap()
                .into_iter()
                .map(|(f, _)| (f, layer)),
        );
    }
    statements
}

#[test]
fn toy_ontology_round_trips_through_render() {
    let statements = toy_statements();
    assert_eq!(statements.len(), 50, "the toy ontology ships 50 statements");
    for (formula, _) in &statements {
        // parse . render . parse is a fixpoint: rendering is canonical.
        let rendered = render_formula(formula);
        let reparsed = parse_suo_kif(&rendered).unwrap();
        assert_eq!(reparsed.len(), 1);
        assert_eq!(&reparsed[0].0, formula, "round-trip diverged for {rendered}");
        assert_eq!(render_formula(&reparsed[0].0), rendered);
    }
}

#[test]
fn toy_translation_satisfies_axiom_invariants() {
    let statements = toy_statements();
    let (set, report) = fol::translate_ontology(&statements, &TranslationOptions::default());
    // Closed, row-free, constant-predicate, unique names.
    set.validate().unwrap();
    assert!(report.dropped.is_empty());
    assert_eq!(report.non_logical, 3);

    // Layer/kind counting is additive.
    let counts = set.layer_counts();
    let summed: (usize, usize) = counts
        .values()
        .fold((0, 0), |(u, g), (lu, lg)| (u + lu, g + lg));
    assert_eq!(summed, set.totals());
    assert_eq!(summed.0 + summed.1, set.axioms.len());
    // Meta-knowledge and the transformation layer contribute no unit
    // clauses.
    assert_eq!(counts[&LayerTag::MetaKnowledge].0, 0);
    assert_eq!(counts[&LayerTag::FoTransformation].0, 0);
}

#[test]
fn emitted_toy_problem_is_accepted_by_the_reparser() {
    let statements = toy_statements();
    let (set, _) = fol::translate_ontology(&statements, &TranslationOptions::default());
    let emitted = tptp::emit_problem(&set, None).unwrap();
    let problem = tptp::parse_problem(&emitted).unwrap();
    // Names survive emission bijectively, in order.
    let emitted_names: Vec<&str> = problem.axioms.iter().map(|(n, _)| n.as_str()).collect();
    let set_names: Vec<&str> = set.axioms.iter().map(|a| a.name.as_str()).collect();
    assert_eq!(emitted_names, set_names);
    // Re-emission is byte-identical.
    assert_eq!(tptp::emit_problem(&set, None).unwrap(), emitted);
}
