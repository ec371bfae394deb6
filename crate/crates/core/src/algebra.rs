//! ℤ[δ]-linear combinations of diagrams, the simple diagrams and the morphism θ.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coxeter::{is_fully_commutative, CoxeterSpec, Family, Word};
use crate::diagram::{multiply_diagrams, Decoration, Diagram, DiagramJson, Edge, Node};
use crate::error::{Error, Result};
use crate::poly::DeltaPoly;

/// A finite ℤ[δ]-combination of irreducible diagrams of one width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    spec: CoxeterSpec,
    terms: BTreeMap<Vec<u8>, (Diagram, DeltaPoly)>,
}

/// Serializable term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub diagram: DiagramJson,
    pub coeff: Vec<i64>,
}

impl AlgebraElement {
    pub fn zero(spec: CoxeterSpec) -> Self {
        AlgebraElement { spec, terms: BTreeMap::new() }
    }

    pub fn one(spec: CoxeterSpec) -> Self {
        Self::from_diagram(spec, Diagram::identity(spec.box_width()))
    }

    pub fn from_diagram(spec: CoxeterSpec, d: Diagram) -> Self {
        Self::from_term(spec, d, DeltaPoly::one())
    }

    pub fn from_term(spec: CoxeterSpec, d: Diagram, c: DeltaPoly) -> Self {
        let mut x = Self::zero(spec);
        x.add_term(d, c);
        x
    }

    pub fn spec(&self) -> CoxeterSpec {
        self.spec
    }

    pub fn add_term(&mut self, d: Diagram, c: DeltaPoly) {
        if c.is_zero() {
            return;
        }
        let key = d.canonical_key();
        let remove = match self.terms.get_mut(&key) {
            Some((_, acc)) => {
                *acc += &c;
                acc.is_zero()
            }
            None => {
                self.terms.insert(key, (d, c));
                false
            }
        };
        if remove {
            self.terms.retain(|_, (_, c)| !c.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Diagram, &DeltaPoly)> {
        self.terms.values().map(|(d, c)| (d, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The diagram, when the element is one diagram with coefficient 1.
    pub fn as_basis_diagram(&self) -> Option<&Diagram> {
        match self.terms.values().collect::<Vec<_>>().as_slice() {
            [(d, c)] if c.is_one() => Some(d),
            _ => None,
        }
    }

    pub fn scale(&self, c: &DeltaPoly) -> Self {
        let mut out = Self::zero(self.spec);
        for (d, x) in self.terms() {
            out.add_term(d.clone(), x * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (d, c) in other.terms() {
            out.add_term(d.clone(), c.clone());
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.spec.box_width() != other.spec.box_width() {
            return Err(Error::WidthMismatch(self.spec.box_width(), other.spec.box_width()));
        }
        if self.spec != other.spec {
            return Err(Error::InvalidSpec(format!("{:?} vs {:?}", self.spec, other.spec)));
        }
        Ok(())
    }

    /// Bilinear product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.spec);
        for (x, cx) in self.terms() {
            for (y, cy) in other.terms() {
                let r = multiply_diagrams(x, y, self.spec.family)?;
                out.add_term(r.diagram, &(cx * cy) * &r.coeff);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms().map(|(d, c)| TermJson { diagram: d.to_json(), coeff: c.coeffs().to_vec() }).collect()
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·{d}")?;
        }
        Ok(())
    }
}

/// The simple diagram attached to generator `i`.
pub fn simple_diagram(spec: &CoxeterSpec, i: usize) -> Result<Diagram> {
    let max = spec.max_generator();
    if i > max {
        return Err(Error::IndexOutOfRange { index: i, max });
    }
    let k = spec.box_width();
    let (col, decor) = if i == 0 {
        (1, vec![Decoration::Dot])
    } else if i == max {
        (k - 1, vec![Decoration::Circ])
    } else {
        (i, Vec::new())
    };
    let mut edges = vec![
        Edge::new(Node::N(col), Node::N(col + 1), decor.clone()),
        Edge::new(Node::S(col), Node::S(col + 1), decor),
    ];
    edges.extend((1..=k).filter(|&j| j != col && j != col + 1).map(|j| Edge::plain(Node::N(j), Node::S(j))));
    Diagram::from_parts(k, edges, Vec::new(), Vec::new())
}

/// The product of simple diagrams along `w`, without the FC check.
pub fn theta_product(w: &[usize], spec: &CoxeterSpec) -> Result<AlgebraElement> {
    spec.check_word(w)?;
    let mut d = Diagram::identity(spec.box_width());
    let mut c = DeltaPoly::one();
    for &s in w {
        let r = multiply_diagrams(&d, &simple_diagram(spec, s)?, spec.family)?;
        d = r.diagram;
        c = &c * &r.coeff;
    }
    Ok(AlgebraElement::from_term(*spec, d, c))
}

/// D_w for an FC word `w`, skipping the FC check.
pub fn theta_unchecked(w: &[usize], spec: &CoxeterSpec) -> Result<Diagram> {
    let x = theta_product(w, spec)?;
    match x.as_basis_diagram() {
        Some(d) => Ok(d.clone()),
        None => Err(Error::InternalAssertion(format!("product along {w:?} is {x}, not a basis diagram"))),
    }
}

/// θ(b_w) for a reduced FC word `w`.
pub fn theta(w: &[usize], spec: &CoxeterSpec) -> Result<AlgebraElement> {
    if !is_fully_commutative(w, spec)? {
        return Err(Error::NotFc);
    }
    Ok(AlgebraElement::from_diagram(*spec, theta_unchecked(w, spec)?))
}

/// Coefficients of b_u·b_v in the basis {b_w}, keyed by the factorized word of each diagram term.
pub fn structure_constants(u: &[usize], v: &[usize], spec: &CoxeterSpec) -> Result<BTreeMap<Word, DeltaPoly>> {
    let x = theta(u, spec)?.multiply(&theta(v, spec)?)?;
    let mut out = BTreeMap::new();
    for (d, c) in x.terms() {
        out.insert(crate::factor::factorize(d, spec)?, c.clone());
    }
    Ok(out)
}

/// One checked defining relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub generators: Vec<usize>,
    pub pass: bool,
}

/// Outcome of [`check_presentation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresentationReport {
    pub family: Family,
    pub n: usize,
    pub relations: Vec<RelationCheck>,
}

impl PresentationReport {
    pub fn all_pass(&self) -> bool {
        self.relations.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&RelationCheck> {
        self.relations.iter().filter(|r| !r.pass).collect()
    }
}

fn product_of(ds: &[&Diagram], spec: &CoxeterSpec) -> Result<AlgebraElement> {
    let mut x = AlgebraElement::one(*spec);
    for d in ds {
        x = x.multiply(&AlgebraElement::from_diagram(*spec, (*d).clone()))?;
    }
    Ok(x)
}

/// Checks the defining relations of the generalized Temperley–Lieb algebra on the simple diagrams.
pub fn check_presentation(spec: &CoxeterSpec) -> Result<PresentationReport> {
    let simples: Vec<Diagram> = (0..=spec.max_generator()).map(|i| simple_diagram(spec, i)).collect::<Result<_>>()?;
    check_presentation_with(spec, &simples)
}

/// As [`check_presentation`] with caller-supplied generator images.
pub fn check_presentation_with(spec: &CoxeterSpec, simples: &[Diagram]) -> Result<PresentationReport> {
    let prefix = match spec.family {
        Family::AffineB => 'b',
        Family::AffineD => 'd',
    };
    let delta = DeltaPoly::delta();
    let mut relations = Vec::new();
    let r = simples.len();
    for (i, s) in simples.iter().enumerate() {
        let sq = product_of(&[s, s], spec)?;
        let rhs = AlgebraElement::from_term(*spec, s.clone(), delta.clone());
        relations.push(RelationCheck { name: format!("{prefix}1"), generators: vec![i], pass: sq == rhs });
    }
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            let (a, b) = (&simples[i], &simples[j]);
            match spec.m(i, j) {
                2 if i < j => {
                    let pass = product_of(&[a, b], spec)? == product_of(&[b, a], spec)?;
                    relations.push(RelationCheck { name: format!("{prefix}2"), generators: vec![i, j], pass });
                }
                3 => {
                    let pass = product_of(&[a, b, a], spec)? == AlgebraElement::from_diagram(*spec, a.clone());
                    relations.push(RelationCheck { name: format!("{prefix}3"), generators: vec![i, j], pass });
                }
                4 => {
                    let lhs = product_of(&[a, b, a, b], spec)?;
                    let rhs = product_of(&[a, b], spec)?.scale(&DeltaPoly::constant(2));
                    relations.push(RelationCheck { name: format!("{prefix}4"), generators: vec![i, j], pass: lhs == rhs });
                }
                _ => {}
            }
        }
    }
    Ok(PresentationReport { family: spec.family, n: spec.n, relations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_diagrams_have_one_cup() {
        for spec in [CoxeterSpec::b(2), CoxeterSpec::b(4), CoxeterSpec::d(3)] {
            for i in 0..=spec.max_generator() {
                let d = simple_diagram(&spec, i).unwrap();
                assert_eq!(d.a_count(), 1);
                assert_eq!(d.k(), spec.box_width());
            }
        }
        assert!(simple_diagram(&CoxeterSpec::b(2), 4).is_err());
    }

    #[test]
    fn fork_generators_commute() {
        let spec = CoxeterSpec::b(3);
        let a = theta(&[0, 1], &spec).unwrap();
        let b = theta(&[1, 0], &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.as_basis_diagram().unwrap().loops(), &[vec![Decoration::Dot]]);
    }

    #[test]
    fn presentation_small() {
        for spec in [CoxeterSpec::b(2), CoxeterSpec::d(2)] {
            let rep = check_presentation(&spec).unwrap();
            assert!(rep.all_pass(), "{:?}", rep.failures());
        }
    }

    #[test]
    fn theta_rejects_non_fc() {
        let spec = CoxeterSpec::b(2);
        assert!(matches!(theta(&[2, 3, 2, 3], &spec), Err(Error::NotFc)));
        assert!(matches!(theta(&[1, 1], &spec), Err(Error::NotReduced)));
    }

    #[test]
    fn structure_constants_of_small_products() {
        let spec = CoxeterSpec::b(2);
        let sq = structure_constants(&[1], &[1], &spec).unwrap();
        assert_eq!(sq, BTreeMap::from([(vec![1], DeltaPoly::delta())]));
        let c = structure_constants(&[0], &[1], &spec).unwrap();
        assert_eq!(c.len(), 1);
        let (w, k) = c.iter().next().unwrap();
        assert!(k.is_one());
        assert_eq!(crate::heap::Heap::from_word(w, &spec).unwrap(), crate::heap::Heap::from_word(&[0, 1], &spec).unwrap());
        let four = structure_constants(&[2, 3], &[2, 3], &spec).unwrap();
        assert_eq!(four, BTreeMap::from([(vec![2, 3], DeltaPoly::constant(2))]));
    }

    #[test]
    fn unit_and_scaling() {
        let spec = CoxeterSpec::b(2);
        let x = theta(&[0, 2], &spec).unwrap();
        assert_eq!(AlgebraElement::one(spec).multiply(&x).unwrap(), x);
        let dx = AlgebraElement::one(spec).scale(&DeltaPoly::delta()).multiply(&x).unwrap();
        assert_eq!(dx, x.scale(&DeltaPoly::delta()));
    }
}
