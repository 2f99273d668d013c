//! The noncommutative grading group G(F) and G-set gradings.
//!
//! G(F) is the central extension of H1(F) by the powers of a distinguished
//! element lambda, with the twisted product
//! `(k1, a1) * (k2, a2) = (k1 + k2 + a1 . a2, a1 + a2)` where `.` is the
//! intersection pairing. Maslov components are half-integers and are stored
//! doubled so all arithmetic is exact. Module gradings live in G-sets given
//! by finite, possibly partial, action tables; the checkers verify the
//! containments `d(A_g) in A_{lambda^-1 g}`, `A_g A_h in A_{gh}` and their
//! module analogues on supplied data and report every violation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::arcalg::BasicGenerator;
use crate::modules::TypeDStructure;
use crate::pmc::PointedMatchedCircle;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GradingError {
    #[error("FormMismatch: elements belong to different grading groups")]
    FormMismatch,
    #[error("h1 vector length {0} does not match form rank {1}")]
    BadVectorLength(usize, usize),
}

/// A grading group instance: rank of H1 plus the intersection form. All
/// elements of one instance share the form, which must be antisymmetric.
#[derive(Debug, PartialEq, Eq)]
pub struct GradingGroup {
    form: Vec<Vec<i64>>,
}

impl GradingGroup {
    pub fn new(form: Vec<Vec<i64>>) -> Arc<GradingGroup> {
        let n = form.len();
        for row in &form {
            assert_eq!(row.len(), n, "form must be square");
        }
        for i in 0..n {
            for j in 0..n {
                assert_eq!(form[i][j], -form[j][i], "form must be antisymmetric");
            }
        }
        Arc::new(GradingGroup { form })
    }

    /// The group for integer gradings: trivial H1, lambda = 1.
    pub fn integer() -> Arc<GradingGroup> {
        GradingGroup::new(Vec::new())
    }

    /// The grading group of the surface of a pointed matched circle. The H1
    /// basis is indexed by matched pairs; two pairs pair to +-1 when their
    /// endpoints interleave on the circle and 0 otherwise.
    pub fn for_circle(circle: &PointedMatchedCircle) -> Arc<GradingGroup> {
        let pairs = circle.pairs();
        let n = pairs.len();
        let mut form = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (a1, a2) = pairs[i];
                let (b1, b2) = pairs[j];
                // Interleaved iff exactly one endpoint of pair j lies inside
                // the interval (a1, a2).
                let inside = |p: usize| a1 < p && p < a2;
                if inside(b1) != inside(b2) {
                    form[i][j] = if a1 < b1 { 1 } else { -1 };
                }
            }
        }
        GradingGroup::new(form)
    }

    pub fn rank(&self) -> usize {
        self.form.len()
    }

    pub fn pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut out = 0;
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                out += a[i] * self.form[i][j] * b[j];
            }
        }
        out
    }
}

/// An element `(k, alpha)` of a grading group; `maslov2` stores `2k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingGroupElement {
    maslov2: i64,
    h1: Vec<i64>,
    group: Arc<GradingGroup>,
}

impl GradingGroupElement {
    pub fn new(
        group: &Arc<GradingGroup>,
        maslov2: i64,
        h1: Vec<i64>,
    ) -> Result<GradingGroupElement, GradingError> {
        if h1.len() != group.rank() {
            return Err(GradingError::BadVectorLength(h1.len(), group.rank()));
        }
        Ok(GradingGroupElement {
            maslov2,
            h1,
            group: Arc::clone(group),
        })
    }

    pub fn identity(group: &Arc<GradingGroup>) -> GradingGroupElement {
        GradingGroupElement {
            maslov2: 0,
            h1: vec![0; group.rank()],
            group: Arc::clone(group),
        }
    }

    /// The distinguished central element lambda = (1, 0).
    pub fn lambda(group: &Arc<GradingGroup>) -> GradingGroupElement {
        GradingGroupElement {
            maslov2: 2,
            h1: vec![0; group.rank()],
            group: Arc::clone(group),
        }
    }

    /// The lift (0, e_i) of the i-th H1 basis vector.
    pub fn basis_lift(group: &Arc<GradingGroup>, i: usize) -> GradingGroupElement {
        let mut h1 = vec![0; group.rank()];
        h1[i] = 1;
        GradingGroupElement {
            maslov2: 0,
            h1,
            group: Arc::clone(group),
        }
    }

    pub fn maslov2(&self) -> i64 {
        self.maslov2
    }

    pub fn h1(&self) -> &[i64] {
        &self.h1
    }

    pub fn group(&self) -> &Arc<GradingGroup> {
        &self.group
    }

    pub fn is_identity(&self) -> bool {
        self.maslov2 == 0 && self.h1.iter().all(|&x| x == 0)
    }

    /// True when the element is an integer power of lambda.
    pub fn is_lambda_power(&self) -> bool {
        self.maslov2 % 2 == 0 && self.h1.iter().all(|&x| x == 0)
    }

    pub fn multiply(
        &self,
        other: &GradingGroupElement,
    ) -> Result<GradingGroupElement, GradingError> {
        if self.group != other.group {
            return Err(GradingError::FormMismatch);
        }
        let pairing = self.group.pairing(&self.h1, &other.h1);
        let h1 = self.h1.iter().zip(&other.h1).map(|(a, b)| a + b).collect();
        Ok(GradingGroupElement {
            maslov2: self.maslov2 + other.maslov2 + 2 * pairing,
            h1,
            group: Arc::clone(&self.group),
        })
    }

    pub fn inverse(&self) -> GradingGroupElement {
        // (k, a)^-1 = (-k + a . a, -a); the pairing term vanishes by
        // antisymmetry, leaving (-k, -a).
        GradingGroupElement {
            maslov2: -self.maslov2,
            h1: self.h1.iter().map(|x| -x).collect(),
            group: Arc::clone(&self.group),
        }
    }

    pub fn power(&self, n: i64) -> GradingGroupElement {
        let mut out = GradingGroupElement::identity(&self.group);
        let base = if n >= 0 { self.clone() } else { self.inverse() };
        for _ in 0..n.abs() {
            out = out.multiply(&base).expect("same group");
        }
        out
    }
}

impl fmt::Display for GradingGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h1: Vec<String> = self.h1.iter().map(|x| x.to_string()).collect();
        if self.maslov2 % 2 == 0 {
            write!(f, "({}; {})", self.maslov2 / 2, h1.join(","))
        } else {
            write!(f, "({}/2; {})", self.maslov2, h1.join(","))
        }
    }
}

/// Which side a G-set is acted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionSide {
    Left,
    Right,
}

/// A grading of a module by a G-set: a finite carrier with a (possibly
/// partial) action table and an assignment of carrier elements to module
/// generators.
#[derive(Debug, Clone)]
pub struct GSetGrading {
    pub side: ActionSide,
    pub carrier: Vec<String>,
    /// Entries `(g, s, t)` meaning `g . s = t` (left) or `s . g = t` (right).
    pub action: Vec<(GradingGroupElement, String, String)>,
    /// Module generator name -> carrier element.
    pub assignment: BTreeMap<String, String>,
}

impl GSetGrading {
    fn act(&self, g: &GradingGroupElement, s: &str) -> Option<&str> {
        self.action
            .iter()
            .find(|(h, from, _)| h == g && from == s)
            .map(|(_, _, to)| to.as_str())
    }

    /// Checks identity and compatibility laws on all combinations present in
    /// the table.
    pub fn check_action_laws(&self) -> Vec<GradingViolation> {
        let mut out = Vec::new();
        for (g, s, t) in &self.action {
            if g.is_identity() && s != t {
                out.push(GradingViolation::ActionLaw(format!(
                    "identity moves {s} to {t}"
                )));
            }
        }
        // Compatibility on sampled pairs: g acting after h must agree with
        // the product acting at once, whenever all three rows exist.
        for (g, mid, gs) in &self.action {
            for (h, s, hs) in &self.action {
                if hs != mid {
                    continue;
                }
                let combined = match self.side {
                    ActionSide::Left => g.multiply(h),
                    ActionSide::Right => h.multiply(g),
                };
                let Ok(combined) = combined else {
                    out.push(GradingViolation::ActionLaw(
                        "action table mixes grading groups".into(),
                    ));
                    continue;
                };
                if let Some(expect) = self.act(&combined, s) {
                    if expect != gs {
                        out.push(GradingViolation::ActionLaw(format!(
                            "compatibility fails on ({combined}, {s})"
                        )));
                    }
                }
            }
        }
        out
    }
}

/// A single check failure; reports carry all of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradingViolation {
    /// `d` of the named generator has a term whose grading is not
    /// `lambda^-1 * gr(x)`.
    Differential(String),
    /// A product term with mismatched grading.
    Product(String),
    /// The G-set data is incomplete or inconsistent.
    MalformedGSet(String),
    /// The action table violates the group action laws.
    ActionLaw(String),
}

impl fmt::Display for GradingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradingViolation::Differential(s) => write!(f, "differential: {s}"),
            GradingViolation::Product(s) => write!(f, "product: {s}"),
            GradingViolation::MalformedGSet(s) => write!(f, "MalformedGSet: {s}"),
            GradingViolation::ActionLaw(s) => write!(f, "action law: {s}"),
        }
    }
}

/// Report of a grading check; empty `violations` means the grading passes.
#[derive(Debug, Clone, Default)]
pub struct GradingReport {
    pub violations: Vec<GradingViolation>,
}

impl GradingReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `d(A_g) in A_{lambda^-1 g}` and `A_g A_h in A_{gh}` on all
/// differentials and pairwise products of the given basic generators.
///
/// `grading` must assign a group element to every generator of the piece;
/// products and differentials of piece members that leave the assignment's
/// domain are reported as malformed.
pub fn check_algebra_grading(
    piece: &[BasicGenerator],
    grading: &BTreeMap<BasicGenerator, GradingGroupElement>,
) -> GradingReport {
    let mut report = GradingReport::default();
    let Some(first) = piece.first() else {
        return report;
    };
    let group = match grading.get(first) {
        Some(g) => Arc::clone(g.group()),
        None => {
            report
                .violations
                .push(GradingViolation::MalformedGSet(format!(
                    "generator {first} has no grading"
                )));
            return report;
        }
    };
    let lambda_inv = GradingGroupElement::lambda(&group).inverse();
    let graded_terms = |elt: &crate::arcalg::ArcAlgebraElement,
                        report: &mut GradingReport|
     -> Vec<(BasicGenerator, GradingGroupElement)> {
        let mut out = Vec::new();
        for term in elt.decompose() {
            match grading.get(&term) {
                Some(g) => out.push((term, g.clone())),
                None => report
                    .violations
                    .push(GradingViolation::MalformedGSet(format!(
                        "term {term} has no grading"
                    ))),
            }
        }
        out
    };
    for x in piece {
        let Some(gx) = grading.get(x) else {
            report
                .violations
                .push(GradingViolation::MalformedGSet(format!(
                    "generator {x} has no grading"
                )));
            continue;
        };
        let expect_d = match lambda_inv.multiply(gx) {
            Ok(g) => g,
            Err(_) => {
                report
                    .violations
                    .push(GradingViolation::MalformedGSet("group mismatch".into()));
                continue;
            }
        };
        for (term, gterm) in graded_terms(&x.element().differential(), &mut report) {
            if gterm != expect_d {
                report
                    .violations
                    .push(GradingViolation::Differential(format!(
                        "d({x}) term {term}: got {gterm}, need {expect_d}"
                    )));
            }
        }
        for y in piece {
            let Some(gy) = grading.get(y) else { continue };
            let product = x.element().multiply(y.element());
            if product.is_zero() {
                continue;
            }
            let expect = match gx.multiply(gy) {
                Ok(g) => g,
                Err(_) => {
                    report
                        .violations
                        .push(GradingViolation::MalformedGSet("group mismatch".into()));
                    continue;
                }
            };
            for (term, gterm) in graded_terms(&product, &mut report) {
                if gterm != expect {
                    report.violations.push(GradingViolation::Product(format!(
                        "({x})({y}) term {term}: got {gterm}, need {expect}"
                    )));
                }
            }
        }
    }
    report
}

/// Checks `A_g M_s in M_{gs}` and `d(M_s) in M_{lambda^-1 s}` for a type D
/// structure: every term `a (x) y` of `delta1(x)` must satisfy
/// `gr(a) . s(y) = lambda^-1 . s(x)` in the carrier.
pub fn check_module_grading(
    module: &TypeDStructure,
    gset: &GSetGrading,
    algebra_grading: &BTreeMap<BasicGenerator, GradingGroupElement>,
) -> GradingReport {
    let mut report = GradingReport::default();
    report.violations.extend(gset.check_action_laws());
    let group = algebra_grading
        .values()
        .next()
        .map(|g| Arc::clone(g.group()));
    let lambda_inv = group
        .as_ref()
        .map(|g| GradingGroupElement::lambda(g).inverse());
    for (name, carrier) in &gset.assignment {
        if !gset.carrier.contains(carrier) {
            report
                .violations
                .push(GradingViolation::MalformedGSet(format!(
                    "assignment of {name} targets unknown carrier element {carrier}"
                )));
        }
    }
    for x in module.generator_names() {
        let delta = module.delta1_of(&x);
        let Some(sx) = gset.assignment.get(&x) else {
            report
                .violations
                .push(GradingViolation::MalformedGSet(format!(
                    "generator {x} has no carrier assignment"
                )));
            continue;
        };
        if delta.is_empty() {
            continue;
        }
        let Some(lambda_inv) = lambda_inv.as_ref() else {
            report.violations.push(GradingViolation::MalformedGSet(
                "empty algebra grading but nonzero differential".into(),
            ));
            continue;
        };
        let Some(target) = gset.act(lambda_inv, sx) else {
            report
                .violations
                .push(GradingViolation::MalformedGSet(format!(
                    "action of lambda^-1 on {sx} missing from the table"
                )));
            continue;
        };
        for (coeff, y) in delta {
            let Some(sy) = gset.assignment.get(&y) else {
                report
                    .violations
                    .push(GradingViolation::MalformedGSet(format!(
                        "generator {y} has no carrier assignment"
                    )));
                continue;
            };
            let Some(ga) = algebra_grading.get(&coeff) else {
                report
                    .violations
                    .push(GradingViolation::MalformedGSet(format!(
                        "coefficient {coeff} has no grading"
                    )));
                continue;
            };
            match gset.act(ga, sy) {
                Some(moved) => {
                    if moved != target {
                        report
                            .violations
                            .push(GradingViolation::Differential(format!(
                            "delta1({x}) term {coeff} (x) {y}: gr(a).s = {moved}, need {target}"
                        )));
                    }
                }
                None => report
                    .violations
                    .push(GradingViolation::MalformedGSet(format!(
                        "action of {ga} on {sy} missing from the table"
                    ))),
            }
        }
    }
    report
}

/// A set with a distinguished self-map, the residual lambda action on a
/// product of G-sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaSet {
    pub orbits: Vec<String>,
    /// `lambda_action[i]` is the orbit index of lambda applied to orbit i,
    /// when the underlying tables determine it.
    pub lambda_action: Vec<Option<usize>>,
}

/// The product `S x_G T` of a right G-set and a left G-set: orbits of
/// `S x T` under `(s g, t) ~ (s, g t)`, with the residual lambda action.
pub fn gset_product(s: &GSetGrading, t: &GSetGrading) -> Result<LambdaSet, GradingError> {
    assert_eq!(
        s.side,
        ActionSide::Right,
        "first factor must be a right G-set"
    );
    assert_eq!(
        t.side,
        ActionSide::Left,
        "second factor must be a left G-set"
    );
    let s_group = s.action.first().map(|(g, _, _)| Arc::clone(g.group()));
    let t_group = t.action.first().map(|(g, _, _)| Arc::clone(g.group()));
    if let (Some(a), Some(b)) = (&s_group, &t_group) {
        if a != b {
            return Err(GradingError::FormMismatch);
        }
    }
    let ns = s.carrier.len();
    let nt = t.carrier.len();
    let idx = |i: usize, j: usize| i * nt + j;
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let mut parent: Vec<usize> = (0..ns * nt).collect();
    // (s g, t) ~ (s, g t) for every g acting in both tables.
    for (g, s_from, s_to) in &s.action {
        for (h, t_from, t_to) in &t.action {
            if g != h {
                continue;
            }
            let si = s.carrier.iter().position(|x| x == s_from);
            let sgi = s.carrier.iter().position(|x| x == s_to);
            let tj = t.carrier.iter().position(|x| x == t_from);
            let gtj = t.carrier.iter().position(|x| x == t_to);
            if let (Some(si), Some(sgi), Some(tj), Some(gtj)) = (si, sgi, tj, gtj) {
                let (a, b) = (find(&mut parent, idx(sgi, tj)), find(&mut parent, idx(si, gtj)));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    // Orbit labels, ordered by smallest member.
    let mut roots: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..ns {
        for j in 0..nt {
            let r = find(&mut parent, idx(i, j));
            roots.entry(r).or_default().push((i, j));
        }
    }
    let root_list: Vec<usize> = roots.keys().copied().collect();
    let orbits: Vec<String> = root_list
        .iter()
        .map(|r| {
            let (i, j) = roots[r][0];
            format!("[{}|{}]", s.carrier[i], t.carrier[j])
        })
        .collect();
    // Residual lambda action: [(s, t)] -> [(s lambda, t)].
    let lambda = s
        .action
        .first()
        .map(|(g, _, _)| GradingGroupElement::lambda(g.group()));
    let mut lambda_action = vec![None; root_list.len()];
    if let Some(lambda) = lambda {
        for (o, r) in root_list.iter().enumerate() {
            for &(i, j) in &roots[r] {
                if let Some(to) = s.act(&lambda, &s.carrier[i]) {
                    let ti = s.carrier.iter().position(|x| x == to).unwrap();
                    let root = find(&mut parent, idx(ti, j));
                    lambda_action[o] = root_list.iter().position(|&x| x == root);
                    break;
                }
            }
        }
    }
    Ok(LambdaSet {
        orbits,
        lambda_action,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;
    use crate::arcalg;
    use crate::pmc::torus_circle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn torus_group() -> Arc<GradingGroup> {
        GradingGroup::for_circle(&torus_circle())
    }

    #[test]
    fn torus_form_is_symplectic() {
        let g = torus_group();
        assert_eq!(g.rank(), 2);
        assert_eq!(g.pairing(&[1, 0], &[0, 1]), 1);
        assert_eq!(g.pairing(&[0, 1], &[1, 0]), -1);
        assert_eq!(g.pairing(&[1, 0], &[1, 0]), 0);
    }

    #[test]
    fn lambda_is_central() {
        let group = torus_group();
        let lambda = GradingGroupElement::lambda(&group);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x = GradingGroupElement::new(
                &group,
                rng.gen_range(-6..6),
                vec![rng.gen_range(-4..4), rng.gen_range(-4..4)],
            )
            .unwrap();
            assert_eq!(lambda.multiply(&x).unwrap(), x.multiply(&lambda).unwrap());
        }
    }

    #[test]
    fn self_pairing_vanishes_by_antisymmetry() {
        let group = torus_group();
        let a = GradingGroupElement::new(&group, 0, vec![3, -2]).unwrap();
        let product = a.multiply(&a.inverse()).unwrap();
        assert!(product.is_identity());
    }

    #[test]
    fn displayed_formula_on_torus_form() {
        let group = torus_group();
        let e1 = GradingGroupElement::basis_lift(&group, 0);
        let e2 = GradingGroupElement::basis_lift(&group, 1);
        let p = e1.multiply(&e2).unwrap();
        assert_eq!(p.maslov2(), 2); // (1; e1+e2) with doubled Maslov
        assert_eq!(p.h1(), &[1, 1]);
        let q = e2.multiply(&e1).unwrap();
        assert_eq!(q.maslov2(), -2);
        assert_eq!(q.h1(), &[1, 1]);
    }

    #[test]
    fn multiply_is_associative_randomized() {
        let group = GradingGroup::new(vec![
            vec![0, 1, 0, -2, 0, 3],
            vec![-1, 0, 1, 0, 0, 0],
            vec![0, -1, 0, 1, 0, 0],
            vec![2, 0, -1, 0, 1, 0],
            vec![0, 0, 0, -1, 0, 1],
            vec![-3, 0, 0, 0, -1, 0],
        ]);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut random = |rng: &mut ChaCha8Rng| {
            GradingGroupElement::new(
                &group,
                rng.gen_range(-5..5),
                (0..6).map(|_| rng.gen_range(-3..3)).collect(),
            )
            .unwrap()
        };
        for _ in 0..100 {
            let (a, b, c) = (random(&mut rng), random(&mut rng), random(&mut rng));
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn kernel_of_projection_is_lambda_powers() {
        // Within the subgroup generated by lambda and the basis lifts, an
        // element projects to 0 in H1 iff it is a lambda power.
        let group = torus_group();
        let lambda = GradingGroupElement::lambda(&group);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let mut x = lambda.power(rng.gen_range(-3..=3));
            for _ in 0..rng.gen_range(0..6) {
                let i = rng.gen_range(0..2);
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                x = x
                    .multiply(&GradingGroupElement::basis_lift(&group, i).power(sign))
                    .unwrap();
            }
            if x.h1().iter().all(|&v| v == 0) {
                assert!(
                    x.is_lambda_power(),
                    "generated element {x} not a lambda power"
                );
            }
            assert!(lambda.power(rng.gen_range(-3..=3)).is_lambda_power());
        }
    }

    #[test]
    fn form_mismatch_detected() {
        let g1 = GradingGroup::new(vec![vec![0, 1], vec![-1, 0]]);
        let g2 = GradingGroup::new(vec![vec![0, 2], vec![-2, 0]]);
        let a = GradingGroupElement::new(&g1, 0, vec![1, 0]).unwrap();
        let b = GradingGroupElement::new(&g2, 0, vec![1, 0]).unwrap();
        assert_eq!(a.multiply(&b).unwrap_err(), GradingError::FormMismatch);
    }

    #[test]
    fn trivial_grading_passes_on_sphere_algebra() {
        let z = PointedMatchedCircle::validate(0, &[]).unwrap();
        let piece = arcalg::full_basis(&z);
        let group = GradingGroup::integer();
        let grading: BTreeMap<_, _> = piece
            .iter()
            .map(|g| (g.clone(), GradingGroupElement::identity(&group)))
            .collect();
        assert!(check_algebra_grading(&piece, &grading).passes());
    }

    #[test]
    fn constant_grading_passes_on_product_free_piece() {
        // The lowest weight piece of the torus algebra: one generator, no
        // differential, idempotent square. A grading of 0 on it passes.
        let z = torus_circle();
        let piece = arcalg::basis(&z, -1);
        let group = GradingGroup::integer();
        let grading: BTreeMap<_, _> = piece
            .iter()
            .map(|g| (g.clone(), GradingGroupElement::identity(&group)))
            .collect();
        assert!(check_algebra_grading(&piece, &grading).passes());
    }

    #[test]
    fn torus_weight_two_piece_refutes_integer_gradings() {
        let z = torus_circle();
        let piece = arcalg::basis(&z, 1);
        let group = GradingGroup::integer();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..100 {
            let grading: BTreeMap<_, _> = piece
                .iter()
                .map(|g| {
                    (
                        g.clone(),
                        GradingGroupElement::new(&group, 2 * rng.gen_range(-8i64..=8), vec![])
                            .unwrap(),
                    )
                })
                .collect();
            let report = check_algebra_grading(&piece, &grading);
            assert!(!report.passes(), "an integer grading slipped through");
        }
    }

    #[test]
    fn gset_product_of_torsors() {
        // G quotient: Z/4 acting by translation on itself; S = T = that
        // torsor. The product has |G| orbits and lambda permutes them in one
        // cycle.
        let group = GradingGroup::integer();
        let lambda = GradingGroupElement::lambda(&group);
        let labels: Vec<String> = (0..4).map(|i| format!("s{i}")).collect();
        let table = |side: ActionSide| GSetGrading {
            side,
            carrier: labels.clone(),
            action: (0..4)
                .map(|i| {
                    (
                        lambda.clone(),
                        format!("s{i}"),
                        format!("s{}", (i + 1) % 4),
                    )
                })
                .collect(),
            assignment: BTreeMap::new(),
        };
        let product = gset_product(&table(ActionSide::Right), &table(ActionSide::Left)).unwrap();
        assert_eq!(product.orbits.len(), 4);
        let mut seen = BTreeSet::new();
        let mut at = 0usize;
        for _ in 0..4 {
            seen.insert(at);
            at = product.lambda_action[at].unwrap();
        }
        assert_eq!(seen.len(), 4);
        assert_eq!(at, 0);
    }

    #[test]
    fn gset_product_of_points() {
        let group = GradingGroup::integer();
        let id = GradingGroupElement::identity(&group);
        let point = |side| GSetGrading {
            side,
            carrier: vec!["p".into()],
            action: vec![(id.clone(), "p".into(), "p".into())],
            assignment: BTreeMap::new(),
        };
        let product = gset_product(&point(ActionSide::Right), &point(ActionSide::Left)).unwrap();
        assert_eq!(product.orbits.len(), 1);
    }

    #[test]
    fn gset_product_orbit_count_matches_brute_force() {
        // |S| = 2, |T| = 2 over the quotient Z/2: the orbit partition closed
        // by hand gives two orbits {(x,u),(y,v)} and {(y,u),(x,v)}.
        let group = GradingGroup::integer();
        let lambda = GradingGroupElement::lambda(&group);
        let s = GSetGrading {
            side: ActionSide::Right,
            carrier: vec!["x".into(), "y".into()],
            action: vec![
                (lambda.clone(), "x".into(), "y".into()),
                (lambda.clone(), "y".into(), "x".into()),
            ],
            assignment: BTreeMap::new(),
        };
        let t = GSetGrading {
            side: ActionSide::Left,
            carrier: vec!["u".into(), "v".into()],
            action: vec![
                (lambda.clone(), "u".into(), "v".into()),
                (lambda.clone(), "v".into(), "u".into()),
            ],
            assignment: BTreeMap::new(),
        };
        let product = gset_product(&s, &t).unwrap();
        assert_eq!(product.orbits.len(), 2);
    }
}
