//! The algebra A(Z) of a pointed matched circle.
//!
//! A(Z) sits inside the strands algebra A(4k) as the span of the swap-class
//! sums `a(x)` of equitable diagrams. A diagram is equitable when neither its
//! source nor its target contains both points of a matched pair; the swap
//! class of an equitable diagram moves each horizontal strand freely between
//! the two points of its pair. Product and differential are inherited from
//! A(4k) and stay inside A(Z).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::f2::{ChainComplexF2, SparseMatrixF2};
use crate::pmc::PointedMatchedCircle;
use crate::strands::{self, AlgebraElement, StrandDiagram};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArcAlgebraError {
    #[error("DuplicateEndpoint: chords share {0} point {1}")]
    DuplicateEndpoint(&'static str, usize),
    #[error("SizeLimit: genus {0} exceeds the homology guard {1}")]
    SizeLimit(usize, usize),
    #[error("chord endpoint {0} outside 1..={1}")]
    ChordOutOfRange(usize, usize),
    #[error("chord [{0},{1}] is not increasing")]
    ChordNotIncreasing(usize, usize),
}

/// An oriented chord on the circle, avoiding the basepoint: `from < to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chord {
    pub from: usize,
    pub to: usize,
}

impl Chord {
    pub fn new(from: usize, to: usize) -> Result<Chord, ArcAlgebraError> {
        if from >= to {
            return Err(ArcAlgebraError::ChordNotIncreasing(from, to));
        }
        Ok(Chord { from, to })
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.from, self.to)
    }
}

/// An element of A(Z), stored fully expanded in A(4k).
///
/// The expansion is always a union of complete swap classes of equitable
/// diagrams; operations preserve this.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcAlgebraElement {
    circle: PointedMatchedCircle,
    expansion: AlgebraElement,
}

impl ArcAlgebraElement {
    pub fn zero(circle: &PointedMatchedCircle) -> ArcAlgebraElement {
        ArcAlgebraElement {
            circle: circle.clone(),
            expansion: AlgebraElement::zero(circle.num_points()),
        }
    }

    pub fn circle(&self) -> &PointedMatchedCircle {
        &self.circle
    }

    pub fn expansion(&self) -> &AlgebraElement {
        &self.expansion
    }

    pub fn is_zero(&self) -> bool {
        self.expansion.is_zero()
    }

    pub fn add(&self, other: &ArcAlgebraElement) -> ArcAlgebraElement {
        assert_eq!(self.circle, other.circle, "circle mismatch");
        ArcAlgebraElement {
            circle: self.circle.clone(),
            expansion: self.expansion.add(&other.expansion),
        }
    }

    pub fn multiply(&self, other: &ArcAlgebraElement) -> ArcAlgebraElement {
        assert_eq!(self.circle, other.circle, "circle mismatch");
        ArcAlgebraElement {
            circle: self.circle.clone(),
            expansion: self.expansion.multiply(&other.expansion),
        }
    }

    pub fn differential(&self) -> ArcAlgebraElement {
        ArcAlgebraElement {
            circle: self.circle.clone(),
            expansion: self.expansion.differential(),
        }
    }

    /// Splits the element into basic generators (complete swap classes).
    /// Panics if the expansion is not swap-closed, which would indicate a
    /// broken invariant upstream.
    pub fn decompose(&self) -> Vec<BasicGenerator> {
        let mut seen: BTreeSet<StrandDiagram> = BTreeSet::new();
        let mut out = Vec::new();
        for d in self.expansion.terms() {
            if seen.contains(d) {
                continue;
            }
            let class = swap_class(&self.circle, d);
            for member in class.expansion.terms() {
                assert!(
                    self.expansion.contains(member),
                    "expansion is not closed under horizontal strand swapping"
                );
                seen.insert(member.clone());
            }
            out.push(BasicGenerator::from_class(class));
        }
        out.sort();
        out
    }

    /// The terms of a fixed weight, as an element.
    pub fn weight_part(&self, weight: usize) -> ArcAlgebraElement {
        ArcAlgebraElement {
            circle: self.circle.clone(),
            expansion: AlgebraElement::from_diagrams(
                self.circle.num_points(),
                self.expansion
                    .terms()
                    .filter(|d| d.weight() == weight)
                    .cloned(),
            ),
        }
    }
}

impl fmt::Display for ArcAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.decompose();
        if parts.is_empty() {
            return write!(f, "0");
        }
        let strs: Vec<String> = parts.iter().map(|b| format!("a({})", b.representative())).collect();
        write!(f, "{}", strs.join(" + "))
    }
}

/// A basic generator a(x) of A(Z): one complete swap class, keyed by its
/// canonical representative (horizontal strands at the lexicographically
/// least admissible positions).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasicGenerator {
    representative: StrandDiagram,
    element: ArcAlgebraElement,
}

impl BasicGenerator {
    fn from_class(element: ArcAlgebraElement) -> BasicGenerator {
        let representative = element
            .expansion
            .terms()
            .min_by_key(|d| d.sources())
            .expect("class is nonempty")
            .clone();
        BasicGenerator {
            representative,
            element,
        }
    }

    pub fn representative(&self) -> &StrandDiagram {
        &self.representative
    }

    pub fn element(&self) -> &ArcAlgebraElement {
        &self.element
    }

    pub fn circle(&self) -> &PointedMatchedCircle {
        &self.element.circle
    }

    pub fn weight(&self) -> usize {
        self.representative.weight()
    }

    /// True when every strand is horizontal, i.e. the generator lies in I(Z).
    pub fn is_idempotent(&self) -> bool {
        self.representative.is_identity()
    }

    /// Matched pairs occupied by the sources (equals those of any class
    /// member).
    pub fn source_pairs(&self) -> BTreeSet<usize> {
        self.representative
            .sources()
            .iter()
            .map(|&p| self.element.circle.pair_index(p))
            .collect()
    }

    pub fn target_pairs(&self) -> BTreeSet<usize> {
        self.representative
            .targets()
            .iter()
            .map(|&p| self.element.circle.pair_index(p))
            .collect()
    }
}

impl fmt::Display for BasicGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a({})", self.representative)
    }
}

/// Whether a diagram is equitable for the matching: no matched pair occurs
/// twice in the source or twice in the target.
pub fn is_equitable(circle: &PointedMatchedCircle, d: &StrandDiagram) -> bool {
    for set in [d.sources(), d.targets()] {
        let pairs: Vec<usize> = set.iter().map(|&p| circle.pair_index(p)).collect();
        let distinct: BTreeSet<usize> = pairs.iter().copied().collect();
        if distinct.len() != pairs.len() {
            return false;
        }
    }
    true
}

/// The full swap class of an equitable diagram as an element.
fn swap_class(circle: &PointedMatchedCircle, d: &StrandDiagram) -> ArcAlgebraElement {
    let horizontals: Vec<usize> = d
        .strands()
        .iter()
        .filter(|&&(s, t)| s == t)
        .map(|&(s, _)| s)
        .collect();
    let n = circle.num_points();
    let mut expansion = AlgebraElement::zero(n);
    for mask in 0..(1u64 << horizontals.len()) {
        let strands: Vec<(usize, usize)> = d
            .strands()
            .iter()
            .map(|&(s, t)| {
                if s == t {
                    let idx = horizontals.iter().position(|&h| h == s).unwrap();
                    if mask & (1 << idx) != 0 {
                        let m = circle.partner(s);
                        (m, m)
                    } else {
                        (s, t)
                    }
                } else {
                    (s, t)
                }
            })
            .collect();
        expansion.toggle(StrandDiagram::new(n, strands));
    }
    ArcAlgebraElement {
        circle: circle.clone(),
        expansion,
    }
}

/// The symmetrization map: `a(x) = sum over the swap class of x`, and zero
/// when `x` is not equitable. Extends linearly over sums of diagrams.
pub fn a_map(circle: &PointedMatchedCircle, x: &StrandDiagram) -> ArcAlgebraElement {
    assert_eq!(
        x.ambient(),
        circle.num_points(),
        "diagram lives in A(4k) for this circle"
    );
    if !is_equitable(circle, x) {
        return ArcAlgebraElement::zero(circle);
    }
    swap_class(circle, x)
}

/// The chord element a(rho_set): the sum over admissible horizontal
/// completions of the chord strands, symmetrized into A(Z).
pub fn chord_element(
    circle: &PointedMatchedCircle,
    chords: &[Chord],
) -> Result<ArcAlgebraElement, ArcAlgebraError> {
    let n = circle.num_points();
    let mut initials = BTreeSet::new();
    let mut terminals = BTreeSet::new();
    for c in chords {
        for p in [c.from, c.to] {
            if p == 0 || p > n {
                return Err(ArcAlgebraError::ChordOutOfRange(p, n));
            }
        }
        if !initials.insert(c.from) {
            return Err(ArcAlgebraError::DuplicateEndpoint("initial", c.from));
        }
        if !terminals.insert(c.to) {
            return Err(ArcAlgebraError::DuplicateEndpoint("terminal", c.to));
        }
    }
    // Points available for horizontal completion.
    let free: Vec<usize> = (1..=n)
        .filter(|p| !initials.contains(p) && !terminals.contains(p))
        .collect();
    let moving: Vec<(usize, usize)> = chords.iter().map(|c| (c.from, c.to)).collect();
    // Collect the distinct swap classes arising from equitable completions.
    let mut classes: BTreeSet<ArcAlgebraElement> = BTreeSet::new();
    for mask in 0..(1u64 << free.len()) {
        let mut strands = moving.clone();
        for (i, &p) in free.iter().enumerate() {
            if mask & (1 << i) != 0 {
                strands.push((p, p));
            }
        }
        let d = StrandDiagram::new(n, strands);
        let class = a_map(circle, &d);
        if !class.is_zero() {
            classes.insert(class);
        }
    }
    let mut out = ArcAlgebraElement::zero(circle);
    for class in classes {
        out = out.add(&class);
    }
    Ok(out)
}

/// One idempotent per subset of matched pairs; their sum is the unit.
/// Returned in lexicographic order of the pair subsets.
pub fn idempotents(circle: &PointedMatchedCircle) -> Vec<ArcAlgebraElement> {
    let pairs = circle.pairs();
    let mut out = Vec::new();
    for mask in 0..(1u64 << pairs.len()) {
        let chosen: Vec<usize> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &(a, _))| a)
            .collect();
        let d = StrandDiagram::identity(circle.num_points(), &chosen);
        out.push(a_map(circle, &d));
    }
    out.sort();
    out
}

/// The idempotent supported on a given set of matched-pair indices.
pub fn idempotent_for_pairs(
    circle: &PointedMatchedCircle,
    pair_indices: &BTreeSet<usize>,
) -> ArcAlgebraElement {
    let pairs = circle.pairs();
    let chosen: Vec<usize> = pair_indices.iter().map(|&i| pairs[i].0).collect();
    a_map(circle, &StrandDiagram::identity(circle.num_points(), &chosen))
}

/// The unit of A(Z): the sum of all idempotents.
pub fn unit(circle: &PointedMatchedCircle) -> ArcAlgebraElement {
    idempotents(circle)
        .into_iter()
        .fold(ArcAlgebraElement::zero(circle), |acc, e| acc.add(&e))
}

/// Basic generators of the summand A(Z, i), i.e. of weight `k + i`.
pub fn basis(circle: &PointedMatchedCircle, i: isize) -> Vec<BasicGenerator> {
    let k = circle.genus() as isize;
    assert!(-k <= i && i <= k, "weight index out of range");
    let weight = (k + i) as usize;
    let mut out: Vec<BasicGenerator> = Vec::new();
    let mut seen: BTreeSet<StrandDiagram> = BTreeSet::new();
    for d in strands::basis(circle.num_points(), weight) {
        if seen.contains(&d) || !is_equitable(circle, &d) {
            continue;
        }
        let class = swap_class(circle, &d);
        for member in class.expansion.terms() {
            seen.insert(member.clone());
        }
        out.push(BasicGenerator::from_class(class));
    }
    out.sort();
    out
}

/// All basic generators of A(Z) across weights.
pub fn full_basis(circle: &PointedMatchedCircle) -> Vec<BasicGenerator> {
    let k = circle.genus() as isize;
    (-k..=k).flat_map(|i| basis(circle, i)).collect()
}

/// Homology dimensions of the weight summands `(A(Z, i), d)` for
/// `i = -k..=k`, computed with the given genus guard.
pub fn poincare_polynomial_with_guard(
    circle: &PointedMatchedCircle,
    guard: usize,
) -> Result<Vec<usize>, ArcAlgebraError> {
    if circle.genus() > guard {
        return Err(ArcAlgebraError::SizeLimit(circle.genus(), guard));
    }
    let k = circle.genus() as isize;
    let mut out = Vec::new();
    for i in -k..=k {
        out.push(weight_piece_complex(circle, i).homology_dim());
    }
    Ok(out)
}

/// Default guard: genus 2.
pub fn poincare_polynomial(
    circle: &PointedMatchedCircle,
) -> Result<Vec<usize>, ArcAlgebraError> {
    poincare_polynomial_with_guard(circle, 2)
}

/// The chain complex of the summand A(Z, i) in the basic-generator basis.
pub fn weight_piece_complex(circle: &PointedMatchedCircle, i: isize) -> ChainComplexF2 {
    let gens = basis(circle, i);
    let index: BTreeMap<&StrandDiagram, usize> = gens
        .iter()
        .enumerate()
        .map(|(idx, g)| (g.representative(), idx))
        .collect();
    let mut boundary = SparseMatrixF2::zero(gens.len(), gens.len());
    for (col, g) in gens.iter().enumerate() {
        for term in g.element().differential().decompose() {
            let row = index[term.representative()];
            boundary.toggle(row, col);
        }
    }
    let labels = gens.iter().map(|g| g.to_string()).collect();
    ChainComplexF2::new(labels, boundary).expect("d^2 = 0 on A(Z, i)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmc::torus_circle;

    fn diagram(n: usize, strands: &[(usize, usize)]) -> StrandDiagram {
        StrandDiagram::new(n, strands.to_vec())
    }

    #[test]
    fn a_map_without_horizontals_is_single_term() {
        let z = torus_circle();
        let x = diagram(4, &[(1, 2)]);
        let ax = a_map(&z, &x);
        assert_eq!(ax.expansion().num_terms(), 1);
        assert!(ax.expansion().contains(&x));
    }

    #[test]
    fn a_map_swaps_horizontal_strand() {
        let z = torus_circle();
        let x = diagram(4, &[(1, 1), (2, 4)]);
        let ax = a_map(&z, &x);
        assert_eq!(ax.expansion().num_terms(), 2);
        assert!(ax.expansion().contains(&x));
        assert!(ax.expansion().contains(&diagram(4, &[(2, 4), (3, 3)])));
    }

    #[test]
    fn a_map_kills_non_equitable() {
        let z = torus_circle();
        // 1 and 3 are matched and both occur in the source.
        let x = diagram(4, &[(1, 2), (3, 3)]);
        assert!(a_map(&z, &x).is_zero());
    }

    #[test]
    fn a_map_constant_on_swap_classes() {
        let z = torus_circle();
        let x = diagram(4, &[(1, 1), (2, 4)]);
        let y = diagram(4, &[(2, 4), (3, 3)]);
        assert_eq!(a_map(&z, &x), a_map(&z, &y));
    }

    fn chords(list: &[(usize, usize)]) -> Vec<Chord> {
        list.iter().map(|&(a, b)| Chord::new(a, b).unwrap()).collect()
    }

    #[test]
    fn chord_elements_compose_in_weight_one() {
        let z = torus_circle();
        let r12 = chord_element(&z, &chords(&[(1, 2)])).unwrap();
        let r23 = chord_element(&z, &chords(&[(2, 3)])).unwrap();
        let r13 = chord_element(&z, &chords(&[(1, 3)])).unwrap();
        let product = r12.multiply(&r23);
        assert_eq!(product.weight_part(1), r13.weight_part(1));
    }

    #[test]
    fn chord_elements_vanishing_product() {
        let z = torus_circle();
        let r23 = chord_element(&z, &chords(&[(2, 3)])).unwrap();
        let r12 = chord_element(&z, &chords(&[(1, 2)])).unwrap();
        assert!(r23.multiply(&r12).is_zero());
        let r34 = chord_element(&z, &chords(&[(3, 4)])).unwrap();
        assert!(r34.multiply(&r23).is_zero());
    }

    #[test]
    fn empty_chord_set_gives_unit() {
        let z = torus_circle();
        let e = chord_element(&z, &[]).unwrap();
        assert_eq!(e, unit(&z));
    }

    #[test]
    fn duplicate_chord_endpoints_rejected() {
        let z = torus_circle();
        let cs = chords(&[(1, 2), (1, 3)]);
        assert!(matches!(
            chord_element(&z, &cs),
            Err(ArcAlgebraError::DuplicateEndpoint("initial", 1))
        ));
    }

    #[test]
    fn torus_has_four_idempotents_two_in_middle_weight() {
        let z = torus_circle();
        let idem = idempotents(&z);
        assert_eq!(idem.len(), 4);
        let weight1 = basis(&z, 0);
        let idem1: Vec<_> = weight1.iter().filter(|g| g.is_idempotent()).collect();
        assert_eq!(idem1.len(), 2);
    }

    #[test]
    fn sphere_algebra_is_f2() {
        let z = PointedMatchedCircle::validate(0, &[]).unwrap();
        let idem = idempotents(&z);
        assert_eq!(idem.len(), 1);
        assert_eq!(full_basis(&z).len(), 1);
        assert_eq!(poincare_polynomial(&z).unwrap(), vec![1]);
    }

    #[test]
    fn idempotents_are_orthogonal() {
        let z = torus_circle();
        let idem = idempotents(&z);
        for (i, e) in idem.iter().enumerate() {
            for (j, f) in idem.iter().enumerate() {
                let product = e.multiply(f);
                if i == j {
                    assert_eq!(&product, e);
                } else {
                    assert!(product.is_zero());
                }
            }
        }
    }

    #[test]
    fn unit_is_two_sided_identity() {
        let z = torus_circle();
        let one = unit(&z);
        for g in full_basis(&z) {
            assert_eq!(&one.multiply(g.element()), g.element());
            assert_eq!(&g.element().multiply(&one), g.element());
        }
    }

    #[test]
    fn torus_middle_weight_has_eight_generators() {
        let z = torus_circle();
        assert_eq!(basis(&z, 0).len(), 8);
    }

    #[test]
    fn lowest_weight_is_one_dimensional() {
        for k in 1..=2 {
            for z in PointedMatchedCircle::enumerate(k).unwrap() {
                let gens = basis(&z, -(k as isize));
                assert_eq!(gens.len(), 1);
            }
        }
    }

    #[test]
    fn differential_vanishes_in_weight_one() {
        // A(Z, -k+1) has no differential: single strands have no crossings.
        for z in PointedMatchedCircle::enumerate(2).unwrap() {
            for g in basis(&z, -1) {
                assert!(g.element().differential().is_zero());
            }
        }
    }

    #[test]
    fn torus_poincare_polynomial() {
        let z = torus_circle();
        // Middle entry recorded from the oracle run: the weight-1 summand is
        // 8-dimensional with zero differential.
        assert_eq!(poincare_polynomial(&z).unwrap(), vec![1, 8, 1]);
    }

    #[test]
    fn closure_under_product_and_differential_genus_one() {
        let z = torus_circle();
        let gens = full_basis(&z);
        for g in &gens {
            // decompose() panics if the result leaves A(Z).
            g.element().differential().decompose();
            for h in &gens {
                g.element().multiply(h.element()).decompose();
            }
        }
    }

    #[test]
    fn obstruction_identity_holds() {
        // y * x = d((dx) * y) for the genus-1 weight-2 generators.
        let z = torus_circle();
        let x = a_map(&z, &diagram(4, &[(1, 3), (2, 2)]));
        let y = a_map(&z, &diagram(4, &[(1, 1), (2, 4)]));
        let yx = y.multiply(&x);
        let rhs = x.differential().multiply(&y).differential();
        assert!(!yx.is_zero());
        assert_eq!(yx, rhs);
    }
}
