//! Combinatorial bordered Heegaard diagrams.
//!
//! A diagram is pure incidence data: alpha arcs with boundary endpoint
//! positions, alpha circles, beta circles, and labeled intersection points.
//! No planar embedding is stored, so there is no region or domain
//! computation here; the diagrams feed generator enumeration and idempotent
//! assignment only.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::modules::Idempotent;
use crate::pmc::{PmcError, PointedMatchedCircle};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("arc count {0} does not match boundary genus {1}")]
    ArcCount(usize, usize),
    #[error("arc endpoint {0} repeated or out of range")]
    BadEndpoint(usize),
    #[error("point references unknown curve {0}")]
    UnknownCurve(String),
    #[error("too many alpha circle labels: {0} for g - k = {1}")]
    CircleCount(usize, usize),
    #[error("too many beta circle labels: {0} for g = {1}")]
    BetaCount(usize, usize),
    #[error("SizeLimit: more than {0} generator candidates")]
    SizeLimit(usize),
    #[error(transparent)]
    Boundary(#[from] PmcError),
}

/// An intersection point, tagged by the alpha curve (arc label `a<i>` or a
/// circle label) and the beta circle it lies on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionPoint {
    pub alpha: String,
    pub beta: String,
}

/// A combinatorial bordered Heegaard diagram of diagram genus `g` and
/// boundary genus `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorderedDiagram {
    g: usize,
    k: usize,
    /// Boundary endpoint positions of the 2k alpha arcs, labeled
    /// `a1..a{2k}` in order.
    arc_endpoints: Vec<(usize, usize)>,
    alpha_circles: Vec<String>,
    beta_circles: Vec<String>,
    points: Vec<IntersectionPoint>,
}

impl BorderedDiagram {
    /// Validates the incidence data. Alpha circle and beta circle label sets
    /// are inferred from the points; arcs are labeled `a1..a{2k}` by their
    /// position in `arc_endpoints`.
    pub fn new(
        g: usize,
        k: usize,
        arc_endpoints: Vec<(usize, usize)>,
        points: Vec<IntersectionPoint>,
    ) -> Result<BorderedDiagram, DiagramError> {
        if arc_endpoints.len() != 2 * k {
            return Err(DiagramError::ArcCount(arc_endpoints.len(), k));
        }
        let mut seen = BTreeSet::new();
        for &(p, q) in &arc_endpoints {
            for e in [p, q] {
                if e == 0 || e > 4 * k || !seen.insert(e) {
                    return Err(DiagramError::BadEndpoint(e));
                }
            }
        }
        let arc_labels: BTreeSet<String> =
            (1..=2 * k).map(|i| format!("a{i}")).collect();
        let mut alpha_circles = BTreeSet::new();
        let mut beta_circles = BTreeSet::new();
        for pt in &points {
            if !arc_labels.contains(&pt.alpha) {
                alpha_circles.insert(pt.alpha.clone());
            }
            beta_circles.insert(pt.beta.clone());
        }
        if alpha_circles.len() > g.saturating_sub(k) {
            return Err(DiagramError::CircleCount(alpha_circles.len(), g - k));
        }
        if beta_circles.len() > g {
            return Err(DiagramError::BetaCount(beta_circles.len(), g));
        }
        Ok(BorderedDiagram {
            g,
            k,
            arc_endpoints,
            alpha_circles: alpha_circles.into_iter().collect(),
            beta_circles: beta_circles.into_iter().collect(),
            points,
        })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn boundary_genus(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[IntersectionPoint] {
        &self.points
    }

    /// The boundary pointed matched circle: endpoints in boundary order,
    /// matched when they lie on the same arc.
    pub fn boundary_pmc(&self) -> Result<PointedMatchedCircle, DiagramError> {
        Ok(PointedMatchedCircle::validate(
            self.k,
            &self.arc_endpoints,
        )?)
    }

    /// All generators: `g`-element point sets with exactly one point on each
    /// beta circle, exactly one on each alpha circle, and at most one on
    /// each alpha arc. Deterministic order; guarded against blowup.
    pub fn generators(&self) -> Result<Vec<Vec<usize>>, DiagramError> {
        self.generators_with_guard(1 << 20)
    }

    pub fn generators_with_guard(&self, guard: usize) -> Result<Vec<Vec<usize>>, DiagramError> {
        // One point per beta circle; if the diagram has fewer labeled beta
        // circles than g, some beta has no intersections and there are no
        // generators.
        if self.g > 0 && self.beta_circles.len() < self.g {
            return Ok(Vec::new());
        }
        let by_beta: BTreeMap<&str, Vec<usize>> = {
            let mut m: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
            for (i, p) in self.points.iter().enumerate() {
                m.entry(p.beta.as_str()).or_default().push(i);
            }
            m
        };
        let betas: Vec<&str> = self.beta_circles.iter().map(|s| s.as_str()).collect();
        let mut out = Vec::new();
        let mut chosen: Vec<usize> = Vec::new();
        let mut used_alpha: BTreeSet<&str> = BTreeSet::new();
        fn rec<'a>(
            diagram: &'a BorderedDiagram,
            betas: &[&str],
            by_beta: &BTreeMap<&str, Vec<usize>>,
            level: usize,
            chosen: &mut Vec<usize>,
            used_alpha: &mut BTreeSet<&'a str>,
            out: &mut Vec<Vec<usize>>,
            guard: usize,
        ) -> Result<(), DiagramError> {
            if out.len() > guard {
                return Err(DiagramError::SizeLimit(guard));
            }
            if level == betas.len() {
                // Every alpha circle must be occupied.
                let circles_used = diagram
                    .alpha_circles
                    .iter()
                    .filter(|c| used_alpha.contains(c.as_str()))
                    .count();
                if circles_used == diagram.alpha_circles.len() {
                    out.push(chosen.clone());
                }
                return Ok(());
            }
            for &pt in by_beta.get(betas[level]).into_iter().flatten() {
                let alpha = diagram.points[pt].alpha.as_str();
                if used_alpha.contains(alpha) {
                    continue;
                }
                used_alpha.insert(alpha);
                chosen.push(pt);
                rec(diagram, betas, by_beta, level + 1, chosen, used_alpha, out, guard)?;
                chosen.pop();
                used_alpha.remove(alpha);
            }
            Ok(())
        }
        rec(
            self,
            &betas,
            &by_beta,
            0,
            &mut chosen,
            &mut used_alpha,
            &mut out,
            guard,
        )?;
        for g in &mut out {
            g.sort();
        }
        out.sort();
        Ok(out)
    }

    /// Arc labels occupied by a generator.
    fn occupied_arcs(&self, generator: &[usize]) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &pt in generator {
            let alpha = &self.points[pt].alpha;
            if let Some(rest) = alpha.strip_prefix('a') {
                if let Ok(i) = rest.parse::<usize>() {
                    if 1 <= i && i <= 2 * self.k {
                        out.insert(i);
                    }
                }
            }
        }
        out
    }

    /// Pair index in the boundary circle of the arc with 1-based label `i`.
    fn pair_index_of_arc(&self, circle: &PointedMatchedCircle, arc: usize) -> usize {
        let (p, q) = self.arc_endpoints[arc - 1];
        circle.pair_index(p.min(q))
    }

    /// The type A idempotent of a generator: the arcs it occupies, as pairs
    /// of the boundary circle.
    pub fn idempotent_a(&self, generator: &[usize]) -> Result<Idempotent, DiagramError> {
        let circle = self.boundary_pmc()?;
        let pairs = self
            .occupied_arcs(generator)
            .into_iter()
            .map(|arc| self.pair_index_of_arc(&circle, arc));
        Ok(Idempotent::from_pairs(pairs))
    }

    /// The type D idempotent: the complementary arcs, indexed in the
    /// reversed boundary circle.
    pub fn idempotent_d(&self, generator: &[usize]) -> Result<Idempotent, DiagramError> {
        let circle = self.boundary_pmc()?;
        let reversed = circle.reverse();
        let occupied = self.occupied_arcs(generator);
        let n = 4 * self.k;
        let pairs = (1..=2 * self.k)
            .filter(|arc| !occupied.contains(arc))
            .map(|arc| {
                let (p, q) = self.arc_endpoints[arc - 1];
                // Transport the pair through the reversal relabeling.
                reversed.pair_index((n + 1 - p).min(n + 1 - q))
            });
        Ok(Idempotent::from_pairs(pairs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmc::torus_circle;

    fn point(alpha: &str, beta: &str) -> IntersectionPoint {
        IntersectionPoint {
            alpha: alpha.into(),
            beta: beta.into(),
        }
    }

    /// The genus-one handlebody shape: one beta circle crossing each arc
    /// once.
    fn solid_torus_diagram() -> BorderedDiagram {
        BorderedDiagram::new(
            1,
            1,
            vec![(1, 3), (2, 4)],
            vec![point("a1", "b1"), point("a2", "b1")],
        )
        .unwrap()
    }

    #[test]
    fn boundary_circle_of_torus_fixture() {
        let d = solid_torus_diagram();
        assert_eq!(d.boundary_pmc().unwrap(), torus_circle());
    }

    #[test]
    fn boundary_order_sensitivity() {
        // Swapping two adjacent endpoints changes the matching.
        let d = BorderedDiagram::new(
            1,
            1,
            vec![(1, 4), (2, 3)],
            vec![point("a1", "b1"), point("a2", "b1")],
        )
        .unwrap();
        assert!(d.boundary_pmc().is_err() || d.boundary_pmc().unwrap() != torus_circle());
    }

    #[test]
    fn sphere_boundary_for_k_zero() {
        let d = BorderedDiagram::new(0, 0, vec![], vec![]).unwrap();
        assert_eq!(d.boundary_pmc().unwrap().genus(), 0);
    }

    #[test]
    fn solid_torus_diagram_has_two_generators() {
        let d = solid_torus_diagram();
        let gens = d.generators().unwrap();
        assert_eq!(gens.len(), 2);
    }

    #[test]
    fn beta_without_points_gives_no_generators() {
        // g = 2 but only one beta circle carries points.
        let d = BorderedDiagram::new(
            2,
            1,
            vec![(1, 3), (2, 4)],
            vec![point("a1", "b1"), point("c1", "b1")],
        )
        .unwrap();
        assert!(d.generators().unwrap().is_empty());
    }

    #[test]
    fn generator_count_matches_subset_brute_force() {
        // g = 2, k = 1 synthetic fixture: one alpha circle, two arcs, two
        // beta circles with assorted intersections.
        let d = BorderedDiagram::new(
            2,
            1,
            vec![(1, 3), (2, 4)],
            vec![
                point("a1", "b1"),
                point("a2", "b1"),
                point("c1", "b1"),
                point("c1", "b2"),
                point("a1", "b2"),
                point("a2", "b2"),
            ],
        )
        .unwrap();
        let gens = d.generators().unwrap();
        // Brute force over all 2-subsets of the six points.
        let mut expected = 0;
        for i in 0..6 {
            for j in i + 1..6 {
                let pts = [i, j];
                let betas: BTreeSet<&str> =
                    pts.iter().map(|&p| d.points()[p].beta.as_str()).collect();
                let alphas: Vec<&str> =
                    pts.iter().map(|&p| d.points()[p].alpha.as_str()).collect();
                let distinct_alphas: BTreeSet<&str> = alphas.iter().copied().collect();
                let circle_hit = alphas.contains(&"c1");
                if betas.len() == 2 && distinct_alphas.len() == 2 && circle_hit {
                    expected += 1;
                }
            }
        }
        assert_eq!(gens.len(), expected);
        assert!(expected > 0);
    }

    #[test]
    fn idempotents_are_complementary() {
        // I_A collects the occupied arcs and I_D the disjoint arcs, so the
        // underlying arc sets partition the 2k arcs; sizes add up even
        // though I_D is indexed in the reversed circle.
        let d = solid_torus_diagram();
        let circle = d.boundary_pmc().unwrap();
        for gen in d.generators().unwrap() {
            let ia = d.idempotent_a(&gen).unwrap();
            let id = d.idempotent_d(&gen).unwrap();
            assert_eq!(ia.0.len() + id.0.len(), circle.pairs().len());
        }
    }

    #[test]
    fn occupying_one_arc_of_two() {
        let d = solid_torus_diagram();
        let gens = d.generators().unwrap();
        // Generator on a1: I_A is the pair of a1. I_D is the pair of a2
        // carried through the reversal, which sends {2,4} to {1,3}, the
        // first pair slot of the reversed circle.
        let on_a1 = gens
            .iter()
            .find(|g| d.points()[g[0]].alpha == "a1")
            .unwrap();
        assert_eq!(d.idempotent_a(on_a1).unwrap(), Idempotent::from_pairs([0]));
        assert_eq!(d.idempotent_d(on_a1).unwrap(), Idempotent::from_pairs([0]));
        let on_a2 = gens
            .iter()
            .find(|g| d.points()[g[0]].alpha == "a2")
            .unwrap();
        assert_eq!(d.idempotent_a(on_a2).unwrap(), Idempotent::from_pairs([1]));
        assert_eq!(d.idempotent_d(on_a2).unwrap(), Idempotent::from_pairs([1]));
    }
}
