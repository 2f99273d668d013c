//! The strands algebra A(n).
//!
//! Basis elements are triples `(S, T, phi)` with `S, T` subsets of `1..=n`
//! and `phi: S -> T` a bijection satisfying `phi(s) >= s`. The product kills
//! pairs whose inversion counts fail to add; the differential resolves one
//! crossing at a time, keeping only terms that drop the inversion count by
//! exactly one. Coefficients are in F2 throughout: elements are sets of
//! diagrams, and adding a diagram twice cancels it.

use std::collections::BTreeSet;
use std::fmt;

/// A basis diagram of A(n): strands `(s, phi(s))` sorted by source.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrandDiagram {
    ambient: usize,
    strands: Vec<(usize, usize)>,
}

impl StrandDiagram {
    /// Builds a diagram from `(source, target)` pairs. Panics on data that
    /// violates the basis conditions; constructors of user input validate
    /// before calling this.
    pub fn new(ambient: usize, mut strands: Vec<(usize, usize)>) -> StrandDiagram {
        strands.sort();
        for &(s, t) in &strands {
            assert!(
                1 <= s && s <= ambient && t <= ambient,
                "strand ({s}, {t}) outside 1..={ambient}"
            );
            assert!(t >= s, "strand ({s}, {t}) decreases");
        }
        for w in strands.windows(2) {
            assert!(w[0].0 != w[1].0, "duplicate source {}", w[0].0);
        }
        let mut targets: Vec<usize> = strands.iter().map(|&(_, t)| t).collect();
        targets.sort();
        for w in targets.windows(2) {
            assert!(w[0] != w[1], "duplicate target {}", w[0]);
        }
        StrandDiagram { ambient, strands }
    }

    pub fn identity(ambient: usize, points: &[usize]) -> StrandDiagram {
        StrandDiagram::new(ambient, points.iter().map(|&p| (p, p)).collect())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn weight(&self) -> usize {
        self.strands.len()
    }

    pub fn strands(&self) -> &[(usize, usize)] {
        &self.strands
    }

    /// Source set S, sorted.
    pub fn sources(&self) -> Vec<usize> {
        self.strands.iter().map(|&(s, _)| s).collect()
    }

    /// Target set T, sorted.
    pub fn targets(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.strands.iter().map(|&(_, t)| t).collect();
        t.sort();
        t
    }

    pub fn image_of(&self, source: usize) -> Option<usize> {
        self.strands
            .iter()
            .find(|&&(s, _)| s == source)
            .map(|&(_, t)| t)
    }

    pub fn is_identity(&self) -> bool {
        self.strands.iter().all(|&(s, t)| s == t)
    }

    /// Inversions: pairs of sources `s1 < s2` with `phi(s2) < phi(s1)`,
    /// together with their count.
    pub fn inversions(&self) -> (Vec<(usize, usize)>, usize) {
        let mut inv = Vec::new();
        for i in 0..self.strands.len() {
            for j in i + 1..self.strands.len() {
                let (s1, t1) = self.strands[i];
                let (s2, t2) = self.strands[j];
                if t2 < t1 {
                    inv.push((s1, s2));
                }
            }
        }
        let count = inv.len();
        (inv, count)
    }

    pub fn inversion_count(&self) -> usize {
        self.inversions().1
    }

    /// The product with `other`, zero unless targets match sources and the
    /// inversion counts add.
    pub fn multiply(&self, other: &StrandDiagram) -> AlgebraElement {
        assert_eq!(self.ambient, other.ambient, "ambient size mismatch");
        if self.targets() != other.sources() {
            return AlgebraElement::zero(self.ambient);
        }
        let composed: Vec<(usize, usize)> = self
            .strands
            .iter()
            .map(|&(s, t)| (s, other.image_of(t).expect("targets match sources")))
            .collect();
        let product = StrandDiagram::new(self.ambient, composed);
        if product.inversion_count() != self.inversion_count() + other.inversion_count() {
            return AlgebraElement::zero(self.ambient);
        }
        AlgebraElement::from_diagram(product)
    }

    /// The differential: the sum over inversions whose transposition drops
    /// the inversion count by exactly one.
    pub fn differential(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.ambient);
        let (inversions, count) = self.inversions();
        for (s1, s2) in inversions {
            let t1 = self.image_of(s1).unwrap();
            let t2 = self.image_of(s2).unwrap();
            let swapped: Vec<(usize, usize)> = self
                .strands
                .iter()
                .map(|&(s, t)| {
                    if s == s1 {
                        (s, t2)
                    } else if s == s2 {
                        (s, t1)
                    } else {
                        (s, t)
                    }
                })
                .collect();
            let resolved = StrandDiagram::new(self.ambient, swapped);
            if resolved.inversion_count() + 1 == count {
                out.toggle(resolved);
            }
        }
        out
    }
}

impl fmt::Display for StrandDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_set = |v: Vec<usize>| {
            v.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let phi = self
            .strands
            .iter()
            .map(|(s, t)| format!("{s}>{t}"))
            .collect::<Vec<_>>()
            .join(",");
        write!(
            f,
            "S={{{}}} T={{{}}} phi=[{}]",
            fmt_set(self.sources()),
            fmt_set(self.targets()),
            phi
        )
    }
}

/// An F2 linear combination of strand diagrams; presence means coefficient 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlgebraElement {
    ambient: usize,
    terms: BTreeSet<StrandDiagram>,
}

impl AlgebraElement {
    pub fn zero(ambient: usize) -> AlgebraElement {
        AlgebraElement {
            ambient,
            terms: BTreeSet::new(),
        }
    }

    pub fn from_diagram(d: StrandDiagram) -> AlgebraElement {
        AlgebraElement {
            ambient: d.ambient(),
            terms: BTreeSet::from([d]),
        }
    }

    pub fn from_diagrams(
        ambient: usize,
        diagrams: impl IntoIterator<Item = StrandDiagram>,
    ) -> AlgebraElement {
        let mut out = AlgebraElement::zero(ambient);
        for d in diagrams {
            out.toggle(d);
        }
        out
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &StrandDiagram> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn contains(&self, d: &StrandDiagram) -> bool {
        self.terms.contains(d)
    }

    /// Adds one diagram in characteristic 2.
    pub fn toggle(&mut self, d: StrandDiagram) {
        assert_eq!(d.ambient(), self.ambient, "ambient size mismatch");
        if !self.terms.insert(d.clone()) {
            self.terms.remove(&d);
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.ambient, other.ambient, "ambient size mismatch");
        let mut out = self.clone();
        for d in &other.terms {
            out.toggle(d.clone());
        }
        out
    }

    pub fn multiply(&self, other: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.ambient, other.ambient, "ambient size mismatch");
        let mut out = AlgebraElement::zero(self.ambient);
        for x in &self.terms {
            for y in &other.terms {
                out = out.add(&x.multiply(y));
            }
        }
        out
    }

    pub fn differential(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.ambient);
        for d in &self.terms {
            out = out.add(&d.differential());
        }
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All basis diagrams of A(n) with `|S| = weight`.
pub fn basis(ambient: usize, weight: usize) -> Vec<StrandDiagram> {
    let mut out = Vec::new();
    for sources in subsets(ambient, weight) {
        for targets in subsets(ambient, weight) {
            collect_bijections(ambient, &sources, &targets, &mut Vec::new(), &mut out);
        }
    }
    out.sort();
    out
}

/// All basis diagrams of A(n), all weights.
pub fn full_basis(ambient: usize) -> Vec<StrandDiagram> {
    (0..=ambient).flat_map(|w| basis(ambient, w)).collect()
}

fn subsets(ambient: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(next: usize, ambient: usize, size: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for p in next..=ambient {
            current.push(p);
            rec(p + 1, ambient, size, current, out);
            current.pop();
        }
    }
    rec(1, ambient, size, &mut current, &mut out);
    out
}

fn collect_bijections(
    ambient: usize,
    sources: &[usize],
    remaining_targets: &[usize],
    chosen: &mut Vec<(usize, usize)>,
    out: &mut Vec<StrandDiagram>,
) {
    if chosen.len() == sources.len() {
        out.push(StrandDiagram::new(ambient, chosen.clone()));
        return;
    }
    let s = sources[chosen.len()];
    for (i, &t) in remaining_targets.iter().enumerate() {
        if t >= s {
            let mut rest = remaining_targets.to_vec();
            rest.remove(i);
            chosen.push((s, t));
            collect_bijections(ambient, sources, &rest, chosen, out);
            chosen.pop();
        }
    }
}
