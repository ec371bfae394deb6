//! Stated invariants of the reference diagrams.

use tldiag::admissible::{classify_diagram, edge_weight, length, loop_weight, nu, PzzType};
use tldiag::catalog::{basic_shared_neighbor, dotted_zigzag, left_peak, loop_neighbors, south_and_peak_types, weighted_undammed};
use tldiag::factor::{simple_edges, suitable_edges, EdgeType};
use tldiag::FamilyTag;

#[test]
fn weighted_undammed_values() {
    let r = weighted_undammed().unwrap();
    let d = &r.diagram;
    assert_eq!(length(d, &r.spec).unwrap(), 41);
    assert_eq!(nu(d), 16);
    for l in d.loops() {
        assert_eq!(loop_weight(l, &r.spec).unwrap(), 7);
    }
    let weights: Vec<(String, usize)> = (0..d.edges().len())
        .map(|e| (format!("{}-{}", d.edges()[e].a, d.edges()[e].b), edge_weight(d, e, &r.spec).unwrap()))
        .filter(|(_, w)| *w > 0)
        .collect();
    assert_eq!(weights, [("3-4".to_string(), 6), ("7'-8'".to_string(), 6)]);
}

#[test]
fn dotted_zigzag_values() {
    let r = dotted_zigzag().unwrap();
    let c = classify_diagram(&r.diagram, &r.spec).unwrap();
    assert_eq!((c.tag, c.pzz_type, c.l, c.r), (FamilyTag::Pzz, Some(PzzType::LeftLeft), 3, 2));
    assert_eq!(c.pzz_type.unwrap().symbol(r.spec.family), "⟨••⟩");
    assert_eq!(length(&r.diagram, &r.spec).unwrap(), 25);
}

#[test]
fn left_peak_values() {
    let r = left_peak().unwrap();
    let c = classify_diagram(&r.diagram, &r.spec).unwrap();
    assert_eq!((c.tag, c.j_l), (FamilyTag::Lp, Some(3)));
    assert_eq!(length(&r.diagram, &r.spec).unwrap(), 24);
}

#[test]
fn suitable_edge_examples() {
    let r = basic_shared_neighbor().unwrap();
    let se = suitable_edges(&r.diagram, &r.spec).unwrap();
    assert_eq!(se.iter().map(|s| s.edge.span()).collect::<Vec<_>>(), [(3, 4), (5, 6)]);
    assert!(se.iter().all(|s| s.kind == EdgeType::BasicD && s.neighbor.to_string() == "3'-6'(○)"));

    let r = south_and_peak_types().unwrap();
    let se = suitable_edges(&r.diagram, &r.spec).unwrap();
    assert_eq!(se.iter().map(|s| (s.edge.span(), s.kind)).collect::<Vec<_>>(), [((1, 2), EdgeType::SR), ((5, 6), EdgeType::PL)]);

    let r = loop_neighbors().unwrap();
    let se = suitable_edges(&r.diagram, &r.spec).unwrap();
    assert_eq!(se.len(), simple_edges(&r.diagram, &r.spec).len());
    assert!(se.iter().all(|s| s.kind == EdgeType::BasicA && s.neighbor.to_string() == "L(•△)"));
}
