//! Pointed matched circles.
//!
//! A pointed matched circle is an oriented circle with `4k` marked points, a
//! fixed-point-free matching of the points, and a basepoint. Points are
//! labeled `1..=4k` in the circle's orientation order starting just after the
//! basepoint; the basepoint itself is never stored. Validity requires that
//! surgering the circle along all matched pairs yields a connected
//! 1-manifold.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PmcError {
    #[error("NotInvolution: {0}")]
    NotInvolution(String),
    #[error("Disconnected: surgery along the matched pairs is disconnected")]
    Disconnected,
    #[error("SizeLimit: genus {0} exceeds the enumeration guard {1}")]
    SizeLimit(usize, usize),
}

/// A validated pointed matched circle of genus `k` on `4k` points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointedMatchedCircle {
    genus: usize,
    /// `partner[i]` is the 1-based partner of point `i + 1`.
    partner: Vec<usize>,
}

impl PointedMatchedCircle {
    /// Validates raw matching data given as a list of pairs on `1..=4k`.
    pub fn validate(genus: usize, pairs: &[(usize, usize)]) -> Result<Self, PmcError> {
        let n = 4 * genus;
        if pairs.len() != 2 * genus {
            return Err(PmcError::NotInvolution(format!(
                "expected {} pairs for genus {genus}, got {}",
                2 * genus,
                pairs.len()
            )));
        }
        let mut partner = vec![0usize; n];
        let mut seen = vec![false; n];
        for &(a, b) in pairs {
            if a == 0 || b == 0 || a > n || b > n {
                return Err(PmcError::NotInvolution(format!(
                    "point out of range in pair ({a}, {b})"
                )));
            }
            if a == b {
                return Err(PmcError::NotInvolution(format!("fixed point {a}")));
            }
            for p in [a, b] {
                if seen[p - 1] {
                    return Err(PmcError::NotInvolution(format!("point {p} repeated")));
                }
                seen[p - 1] = true;
            }
            partner[a - 1] = b;
            partner[b - 1] = a;
        }
        let circle = PointedMatchedCircle { genus, partner };
        if !circle.surgery_connected() {
            return Err(PmcError::Disconnected);
        }
        Ok(circle)
    }

    /// Connectivity of the surgered 1-manifold, tested as graph connectivity
    /// on the `4k + 1` boundary arcs obtained by cutting at the basepoint.
    ///
    /// Arc `i` (0-based, `0..=4k`) sits between point `i` and point `i + 1`,
    /// with the two extreme arcs meeting at the basepoint. Surgery along a
    /// matched pair `{p, q}` glues the arc ending at `p` to the arc starting
    /// at `q`, and the arc ending at `q` to the arc starting at `p`.
    fn surgery_connected(&self) -> bool {
        let n = self.num_points();
        let arcs = n + 1;
        let mut dsu = Dsu::new(arcs);
        // The two arcs adjacent to the basepoint are joined through it.
        dsu.union(0, n);
        for p in 1..=n {
            let q = self.partner(p);
            if p < q {
                // arc ending at p = p - 1, arc starting at q = q
                dsu.union(p - 1, q);
                dsu.union(q - 1, p);
            }
        }
        let root = dsu.find(0);
        (0..arcs).all(|a| dsu.find(a) == root)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Number of marked points, `4k`.
    pub fn num_points(&self) -> usize {
        4 * self.genus
    }

    /// The matched partner of a 1-based point.
    pub fn partner(&self, point: usize) -> usize {
        self.partner[point - 1]
    }

    /// Matched pairs `(min, max)` sorted by their minimum point.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (1..=self.num_points())
            .filter(|&p| p < self.partner(p))
            .map(|p| (p, self.partner(p)))
            .collect();
        out.sort();
        out
    }

    /// Index of the matched pair containing `point`, in `pairs()` order.
    pub fn pair_index(&self, point: usize) -> usize {
        self.pairs()
            .iter()
            .position(|&(a, b)| a == point || b == point)
            .expect("point within range")
    }

    /// The circle with reversed orientation: point `i` maps to `4k + 1 - i`.
    pub fn reverse(&self) -> PointedMatchedCircle {
        let n = self.num_points();
        let partner = (1..=n).map(|i| n + 1 - self.partner(n + 1 - i)).collect();
        // Relabeling preserves connectivity, so no revalidation is needed.
        PointedMatchedCircle {
            genus: self.genus,
            partner,
        }
    }

    /// All valid pointed matched circles of genus `k`, in lexicographic order
    /// of their pair lists. No symmetry quotient is applied.
    pub fn enumerate(genus: usize) -> Result<Vec<PointedMatchedCircle>, PmcError> {
        PointedMatchedCircle::enumerate_with_guard(genus, 3)
    }

    /// `enumerate` with an explicit genus guard.
    pub fn enumerate_with_guard(
        genus: usize,
        guard: usize,
    ) -> Result<Vec<PointedMatchedCircle>, PmcError> {
        if genus > guard {
            return Err(PmcError::SizeLimit(genus, guard));
        }
        let n = 4 * genus;
        let mut out = Vec::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut used = vec![false; n + 1];
        fn rec(
            n: usize,
            genus: usize,
            used: &mut Vec<bool>,
            pairs: &mut Vec<(usize, usize)>,
            out: &mut Vec<PointedMatchedCircle>,
        ) {
            let Some(first) = (1..=n).find(|&p| !used[p]) else {
                if let Ok(c) = PointedMatchedCircle::validate(genus, pairs) {
                    out.push(c);
                }
                return;
            };
            used[first] = true;
            for q in first + 1..=n {
                if !used[q] {
                    used[q] = true;
                    pairs.push((first, q));
                    rec(n, genus, used, pairs, out);
                    pairs.pop();
                    used[q] = false;
                }
            }
            used[first] = false;
        }
        rec(n, genus, &mut used, &mut pairs, &mut out);
        Ok(out)
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// The unique genus-1 circle, matching `{1,3}, {2,4}`.
pub fn torus_circle() -> PointedMatchedCircle {
    PointedMatchedCircle::validate(1, &[(1, 3), (2, 4)]).expect("torus circle is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_matching_is_valid() {
        let c = PointedMatchedCircle::validate(1, &[(1, 3), (2, 4)]).unwrap();
        assert_eq!(c.genus(), 1);
        assert_eq!(c.pairs(), vec![(1, 3), (2, 4)]);
    }

    #[test]
    fn sphere_circle_is_valid() {
        let c = PointedMatchedCircle::validate(0, &[]).unwrap();
        assert_eq!(c.genus(), 0);
        assert_eq!(c.num_points(), 0);
    }

    #[test]
    fn adjacent_matching_is_disconnected() {
        let err = PointedMatchedCircle::validate(1, &[(1, 2), (3, 4)]).unwrap_err();
        assert_eq!(err, PmcError::Disconnected);
    }

    #[test]
    fn malformed_pairings_rejected() {
        assert!(matches!(
            PointedMatchedCircle::validate(1, &[(1, 1), (2, 4)]),
            Err(PmcError::NotInvolution(_))
        ));
        assert!(matches!(
            PointedMatchedCircle::validate(1, &[(1, 2), (2, 4)]),
            Err(PmcError::NotInvolution(_))
        ));
        assert!(matches!(
            PointedMatchedCircle::validate(1, &[(1, 2), (3, 5)]),
            Err(PmcError::NotInvolution(_))
        ));
    }

    #[test]
    fn genus_of_split_genus_two_matching() {
        let c = PointedMatchedCircle::validate(2, &[(1, 5), (2, 6), (3, 7), (4, 8)]).unwrap();
        assert_eq!(c.genus(), 2);
        assert_eq!(c.num_points() / 4, 2);
    }

    #[test]
    fn reverse_is_involution() {
        for c in PointedMatchedCircle::enumerate(2).unwrap() {
            assert_eq!(c.reverse().reverse(), c);
        }
    }

    #[test]
    fn reverse_of_torus_is_torus() {
        let c = torus_circle();
        assert_eq!(c.reverse(), c);
    }

    #[test]
    fn enumerate_genus_zero_and_one() {
        assert_eq!(PointedMatchedCircle::enumerate(0).unwrap().len(), 1);
        // Of the 3 fixed-point-free involutions on 4 points, only the torus
        // matching passes the connectivity test.
        let genus1 = PointedMatchedCircle::enumerate(1).unwrap();
        assert_eq!(genus1.len(), 1);
        assert_eq!(genus1[0], torus_circle());
    }

    #[test]
    fn enumerate_matches_brute_force_for_genus_two() {
        // Independent brute force: all fixed-point-free involutions on 8
        // points, filtered by validate.
        fn involutions(points: Vec<usize>) -> Vec<Vec<(usize, usize)>> {
            if points.is_empty() {
                return vec![Vec::new()];
            }
            let first = points[0];
            let mut out = Vec::new();
            for i in 1..points.len() {
                let second = points[i];
                let rest: Vec<usize> = points[1..]
                    .iter()
                    .copied()
                    .filter(|&p| p != second)
                    .collect();
                for mut tail in involutions(rest) {
                    tail.insert(0, (first, second));
                    out.push(tail);
                }
            }
            out
        }
        let brute: Vec<PointedMatchedCircle> = involutions((1..=8).collect())
            .into_iter()
            .filter_map(|pairs| PointedMatchedCircle::validate(2, &pairs).ok())
            .collect();
        let enumerated = PointedMatchedCircle::enumerate(2).unwrap();
        assert_eq!(enumerated.len(), brute.len());
        for c in &brute {
            assert!(enumerated.contains(c));
        }
        // Every returned circle validates and has the right genus.
        for c in &enumerated {
            assert!(PointedMatchedCircle::validate(2, &c.pairs()).is_ok());
            assert_eq!(c.genus(), c.num_points() / 4);
        }
    }
}
