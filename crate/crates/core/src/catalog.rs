//! Reference diagrams with known invariants, reconstructed from their stated parameters.

use crate::algebra::theta_unchecked;
use crate::coxeter::{CoxeterSpec, Word};
use crate::diagram::Diagram;
use crate::error::Result;

/// A named diagram together with the spec it lives in.
#[derive(Debug, Clone)]
pub struct Reference {
    pub name: &'static str,
    pub spec: CoxeterSpec,
    pub diagram: Diagram,
}

const WEIGHTED_UNDAMMED: &str = r#"{"k":8,"edges":[
  {"from":"1","to":"2","decor":["dot"]},{"from":"3","to":"4","decor":["dot","tri"]},
  {"from":"5","to":"8","decor":["circ"]},{"from":"6","to":"7"},
  {"from":"1'","to":"6'"},{"from":"2'","to":"5'"},{"from":"3'","to":"4'"},
  {"from":"7'","to":"8'","decor":["dot","circ"]}],
  "loops":[["dot","tri"],["dot","tri"],["dot","tri"]]}"#;

/// Undammed diagram in the 8-box (n = 6) of length 41 with three L•△ loops; the only weighted non-loop
/// edges are {3,4} and {7',8'}, each of weight 6.
pub fn weighted_undammed() -> Result<Reference> {
    Ok(Reference { name: "weighted-undammed", spec: CoxeterSpec::b(6), diagram: Diagram::from_json_str(WEIGHTED_UNDAMMED)? })
}

/// Factor of length `len` of the periodic zigzag s₀s₁s₂⋯sₙ₊₁sₙ⋯s₂, starting at `offset`.
pub fn zigzag_word(n: usize, offset: usize, len: usize) -> Word {
    let mut period = vec![0, 1];
    period.extend(2..=n + 1);
    period.extend((2..=n).rev());
    (0..len).map(|t| period[(offset + t) % period.len()]).collect()
}

/// PZZ-diagram of type ⟨••⟩ with three L•, two △ and length 25 (n = 4).
pub fn dotted_zigzag() -> Result<Reference> {
    let spec = CoxeterSpec::b(4);
    Ok(Reference { name: "dotted-zigzag", spec, diagram: theta_unchecked(&zigzag_word(4, 5, 25), &spec)? })
}

/// LP-diagram with jℓ = 3 and length 24 (n = 7).
pub fn left_peak() -> Result<Reference> {
    let spec = CoxeterSpec::b(7);
    let w = [8, 7, 6, 5, 4, 8, 7, 6, 5, 8, 3, 2, 0, 1, 2, 3, 4, 7, 8, 6, 7, 8, 5, 6];
    Ok(Reference { name: "left-peak", spec, diagram: theta_unchecked(&w, &spec)? })
}

/// Basic diagram in the 6-box whose suitable edges are {3,4} and {5,6} with common neighbor {3',6'}.
pub fn basic_shared_neighbor() -> Result<Reference> {
    let spec = CoxeterSpec::b(4);
    Ok(Reference { name: "basic-shared-neighbor", spec, diagram: theta_unchecked(&[1, 3, 5, 4], &spec)? })
}

/// Diagram in the 6-box whose suitable edges are {1,2} (type S_R) and {5,6} (type P_L).
pub fn south_and_peak_types() -> Result<Reference> {
    let spec = CoxeterSpec::b(4);
    Ok(Reference { name: "south-and-peak-types", spec, diagram: theta_unchecked(&[0, 2, 1, 5, 4], &spec)? })
}

/// Basic diagram in the 6-box with two L•△ loops; every simple edge is suitable with an L•△ neighbor.
pub fn loop_neighbors() -> Result<Reference> {
    let spec = CoxeterSpec::b(4);
    let w = [1, 3, 2, 0, 5, 4, 3, 2, 1, 5, 4, 3, 5];
    Ok(Reference { name: "loop-neighbors", spec, diagram: theta_unchecked(&w, &spec)? })
}

/// Diagrams whose full factorization traces are pinned: an ALT-diagram, a P-diagram reduced by K_L,
/// and a long undammed diagram.
pub fn factorization_samples() -> Result<Vec<Reference>> {
    Ok(vec![loop_neighbors()?, left_peak()?, weighted_undammed()?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::is_admissible;

    #[test]
    fn references_are_admissible() {
        for r in [weighted_undammed(), dotted_zigzag(), left_peak(), basic_shared_neighbor(), south_and_peak_types(), loop_neighbors()] {
            let r = r.unwrap();
            assert!(is_admissible(&r.diagram, &r.spec).admissible, "{}", r.name);
        }
    }

    #[test]
    fn zigzag_period() {
        assert_eq!(zigzag_word(2, 0, 7), vec![0, 1, 2, 3, 2, 0, 1]);
    }
}
