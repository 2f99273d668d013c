//! Finite presentations of type D structures, A-infinity modules, and DD/DA
//! bimodules over the algebras of pointed matched circles, together with
//! their structure-relation verifiers, boundedness analysis, duals, built-in
//! torus-boundary pieces, and coefficient solving from the condition
//! `d^2 = 0`.
//!
//! Conventions. Type D coefficients live in the algebra the structure
//! stores; for modules arising from bordered manifolds this is the algebra
//! of the reversed boundary circle, and pairings refuse mismatched circles.
//! All module types are strictly unital: operation tables never contain
//! idempotent algebra inputs, and the unital action is supplied by
//! `evaluate`.

mod builtin;
mod solve;

pub use builtin::{builtin_solid_torus_a, builtin_solid_torus_d, identity_da_bimodule};
pub use solve::{solve_delta_d, solve_delta_dd};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::arcalg::{self, ArcAlgebraElement, BasicGenerator};
use crate::pmc::PointedMatchedCircle;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("SizeLimit: {0}")]
    SizeLimit(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("duplicate generator name {0}")]
    DuplicateGenerator(String),
    #[error("idempotent pair index {0} out of range for genus {1}")]
    BadIdempotent(usize, usize),
    #[error("coefficient does not lie in the structure's algebra")]
    AlgebraMismatch,
    #[error("operation table contains an idempotent algebra input")]
    IdempotentInput,
}

/// An idempotent of A(Z): a subset of the matched pairs, by pair index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Idempotent(pub BTreeSet<usize>);

impl Idempotent {
    pub fn from_pairs(pairs: impl IntoIterator<Item = usize>) -> Idempotent {
        Idempotent(pairs.into_iter().collect())
    }

    pub fn element(&self, circle: &PointedMatchedCircle) -> ArcAlgebraElement {
        arcalg::idempotent_for_pairs(circle, &self.0)
    }

    pub fn complement(&self, circle: &PointedMatchedCircle) -> Idempotent {
        let all: BTreeSet<usize> = (0..circle.pairs().len()).collect();
        Idempotent(all.difference(&self.0).copied().collect())
    }
}

impl fmt::Display for Idempotent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A named generator with an idempotent assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub idempotent: Idempotent,
}

fn index_generators(gens: &[Generator]) -> Result<BTreeMap<String, usize>, ModuleError> {
    let mut map = BTreeMap::new();
    for (i, g) in gens.iter().enumerate() {
        if map.insert(g.name.clone(), i).is_some() {
            return Err(ModuleError::DuplicateGenerator(g.name.clone()));
        }
    }
    Ok(map)
}

/// Report of a structure-relation check for type D structures: one entry per
/// generator pair with a nonzero residual.
#[derive(Debug, Clone)]
pub struct DReport {
    pub residuals: Vec<(String, String, ArcAlgebraElement)>,
    /// Idempotent-compatibility violations, by offending entry.
    pub idempotent_violations: Vec<String>,
}

impl DReport {
    pub fn passes(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn passes_strictly(&self) -> bool {
        self.residuals.is_empty() && self.idempotent_violations.is_empty()
    }
}

/// A type D structure: generators with idempotents and a map
/// `delta1: X -> A (x) X` recorded coefficientwise on basic generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDStructure {
    circle: PointedMatchedCircle,
    generators: Vec<Generator>,
    delta1: Vec<BTreeSet<(BasicGenerator, usize)>>,
}

impl TypeDStructure {
    pub fn new(
        circle: PointedMatchedCircle,
        generators: Vec<Generator>,
    ) -> Result<TypeDStructure, ModuleError> {
        index_generators(&generators)?;
        let pair_count = circle.pairs().len();
        for g in &generators {
            for &p in &g.idempotent.0 {
                if p >= pair_count {
                    return Err(ModuleError::BadIdempotent(p, circle.genus()));
                }
            }
        }
        let delta1 = vec![BTreeSet::new(); generators.len()];
        Ok(TypeDStructure {
            circle,
            generators,
            delta1,
        })
    }

    /// Adds `coefficient (x) to` to `delta1(from)` in characteristic 2,
    /// splitting the coefficient into basic generators.
    pub fn add_delta(
        &mut self,
        from: &str,
        coefficient: &ArcAlgebraElement,
        to: &str,
    ) -> Result<(), ModuleError> {
        if coefficient.circle() != &self.circle {
            return Err(ModuleError::AlgebraMismatch);
        }
        let from = self.index_of(from)?;
        let to = self.index_of(to)?;
        for basic in coefficient.decompose() {
            let key = (basic, to);
            if !self.delta1[from].insert(key.clone()) {
                self.delta1[from].remove(&key);
            }
        }
        Ok(())
    }

    pub fn circle(&self) -> &PointedMatchedCircle {
        &self.circle
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize, ModuleError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| ModuleError::UnknownGenerator(name.to_string()))
    }

    /// The terms of `delta1` on a named generator.
    pub fn delta1_of(&self, name: &str) -> Vec<(BasicGenerator, String)> {
        let Ok(idx) = self.index_of(name) else {
            return Vec::new();
        };
        self.delta1[idx]
            .iter()
            .map(|(b, to)| (b.clone(), self.generators[*to].name.clone()))
            .collect()
    }

    pub fn delta1_terms(&self, idx: usize) -> impl Iterator<Item = &(BasicGenerator, usize)> {
        self.delta1[idx].iter()
    }

    /// The coefficient of `y` in `delta1(x)`, as an algebra element.
    pub fn coefficient(&self, x: usize, y: usize) -> ArcAlgebraElement {
        let mut out = ArcAlgebraElement::zero(&self.circle);
        for (b, to) in &self.delta1[x] {
            if *to == y {
                out = out.add(b.element());
            }
        }
        out
    }

    /// Idempotent-compatibility violations: entries where
    /// `I(x) . a . I(y) != a`.
    pub fn idempotent_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (x, terms) in self.delta1.iter().enumerate() {
            let ix = self.generators[x].idempotent.element(&self.circle);
            for (b, y) in terms {
                let iy = self.generators[*y].idempotent.element(&self.circle);
                let sandwiched = ix.multiply(b.element()).multiply(&iy);
                if &sandwiched != b.element() {
                    out.push(format!(
                        "delta1({}) term {} (x) {} is not idempotent-compatible",
                        self.generators[x].name, b, self.generators[*y].name
                    ));
                }
            }
        }
        out
    }

    /// Checks the structure relation `d(a_xy) + sum_w a_xw a_wy = 0` for all
    /// generator pairs, reporting every violation with its witness.
    pub fn verify(&self) -> DReport {
        let n = self.generators.len();
        let mut residuals = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let mut residual = self.coefficient(x, y).differential();
                for w in 0..n {
                    residual =
                        residual.add(&self.coefficient(x, w).multiply(&self.coefficient(w, y)));
                }
                if !residual.is_zero() {
                    residuals.push((
                        self.generators[x].name.clone(),
                        self.generators[y].name.clone(),
                        residual,
                    ));
                }
            }
        }
        DReport {
            residuals,
            idempotent_violations: self.idempotent_violations(),
        }
    }

    /// Conservative boundedness: true iff the generator graph of `delta1`
    /// has no directed cycle through a non-idempotent coefficient. A module
    /// reported unbounded may still have vanishing iterates.
    pub fn is_bounded(&self) -> bool {
        let n = self.generators.len();
        // Edges carrying any nonzero coefficient; flagged when some
        // coefficient is not an idempotent.
        let mut edges: BTreeMap<(usize, usize), bool> = BTreeMap::new();
        for (x, terms) in self.delta1.iter().enumerate() {
            for (b, y) in terms {
                let flag = edges.entry((x, *y)).or_insert(false);
                *flag |= !b.is_idempotent();
            }
        }
        // A cycle through a non-idempotent edge exists iff some strongly
        // connected component (including self-loops) contains one.
        let adj: Vec<Vec<usize>> = {
            let mut adj = vec![Vec::new(); n];
            for &(x, y) in edges.keys() {
                adj[x].push(y);
            }
            adj
        };
        let component = tarjan_scc(n, &adj);
        for (&(x, y), &nonidem) in &edges {
            if !nonidem {
                continue;
            }
            if x == y || component[x] == component[y] {
                return false;
            }
        }
        true
    }

    /// The n-fold iterate `delta^n: X -> A^(x)n (x) X`, returned per
    /// generator as a set of `(coefficient tensor, target)` terms.
    pub fn delta_n(&self, n: usize) -> Vec<BTreeSet<(Vec<BasicGenerator>, usize)>> {
        let gens = self.generators.len();
        let mut current: Vec<BTreeSet<(Vec<BasicGenerator>, usize)>> = (0..gens)
            .map(|x| BTreeSet::from([(Vec::new(), x)]))
            .collect();
        for _ in 0..n {
            let mut next: Vec<BTreeSet<(Vec<BasicGenerator>, usize)>> =
                vec![BTreeSet::new(); gens];
            for (x, terms) in current.iter().enumerate() {
                for (tensor, y) in terms {
                    for (b, z) in &self.delta1[*y] {
                        let mut extended = tensor.clone();
                        extended.push(b.clone());
                        let key = (extended, *z);
                        if !next[x].insert(key.clone()) {
                            next[x].remove(&key);
                        }
                    }
                }
            }
            current = next;
        }
        current
    }

    /// True when `delta^n` vanishes identically.
    pub fn delta_n_is_zero(&self, n: usize) -> bool {
        self.delta_n(n).iter().all(|terms| terms.is_empty())
    }

    /// Cancels arrows carrying idempotent coefficients, smallest generator
    /// pair first, until none remain. The result presents a homotopy
    /// equivalent type D structure.
    pub fn reduce(&self) -> TypeDStructure {
        let mut current = self.clone();
        loop {
            // A pivot is a pair whose full coefficient is exactly the
            // idempotent, so the cancellation inverse is exact.
            let mut pivot: Option<(usize, usize)> = None;
            'scan: for x in 0..current.generators.len() {
                for y in 0..current.generators.len() {
                    if x == y {
                        continue;
                    }
                    let coeff = current.coefficient(x, y);
                    if !coeff.is_zero()
                        && coeff
                            == current.generators[x].idempotent.element(&current.circle)
                    {
                        pivot = Some((x, y));
                        break 'scan;
                    }
                }
            }
            let Some((x, y)) = pivot else {
                return current;
            };
            // Zig-zag correction: for every arrow w -> y and x -> z other
            // than the cancelled one, add w --(a c)--> z.
            let incoming: Vec<(usize, ArcAlgebraElement)> = (0..current.generators.len())
                .filter(|&w| w != x && w != y)
                .map(|w| (w, current.coefficient(w, y)))
                .filter(|(_, a)| !a.is_zero())
                .collect();
            let outgoing: Vec<(usize, ArcAlgebraElement)> = (0..current.generators.len())
                .filter(|&z| z != x && z != y)
                .map(|z| (z, current.coefficient(x, z)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            let survivors: Vec<usize> = (0..current.generators.len())
                .filter(|&i| i != x && i != y)
                .collect();
            let generators: Vec<Generator> = survivors
                .iter()
                .map(|&i| current.generators[i].clone())
                .collect();
            let mut next = TypeDStructure::new(current.circle.clone(), generators)
                .expect("names stay unique");
            let position = |i: usize| survivors.iter().position(|&s| s == i).unwrap();
            for &w in &survivors {
                for (b, z) in &current.delta1[w] {
                    if *z == x || *z == y {
                        continue;
                    }
                    let from = next.generators[position(w)].name.clone();
                    let to = next.generators[position(*z)].name.clone();
                    next.add_delta(&from, b.element(), &to)
                        .expect("coefficients stay valid");
                }
            }
            for (w, a) in &incoming {
                for (z, c) in &outgoing {
                    let correction = a.multiply(c);
                    if correction.is_zero() {
                        continue;
                    }
                    let from = next.generators[position(*w)].name.clone();
                    let to = next.generators[position(*z)].name.clone();
                    next.add_delta(&from, &correction, &to)
                        .expect("coefficients stay valid");
                }
            }
            current = next;
        }
    }

    /// Whether two presentations differ only by a renaming of generators.
    /// Checked by backtracking over idempotent-respecting bijections.
    pub fn isomorphic_to(&self, other: &TypeDStructure) -> bool {
        if self.circle != other.circle
            || self.generators.len() != other.generators.len()
        {
            return false;
        }
        let n = self.generators.len();
        fn extend(
            a: &TypeDStructure,
            b: &TypeDStructure,
            map: &mut Vec<Option<usize>>,
            used: &mut Vec<bool>,
            at: usize,
        ) -> bool {
            let n = map.len();
            if at == n {
                // Verify the full delta correspondence.
                for x in 0..n {
                    for (coeff, y) in &a.delta1[x] {
                        let key = (coeff.clone(), map[*y].unwrap());
                        if !b.delta1[map[x].unwrap()].contains(&key) {
                            return false;
                        }
                    }
                    if a.delta1[x].len() != b.delta1[map[x].unwrap()].len() {
                        return false;
                    }
                }
                return true;
            }
            for candidate in 0..n {
                if used[candidate]
                    || a.generators[at].idempotent != b.generators[candidate].idempotent
                    || a.delta1[at].len() != b.delta1[candidate].len()
                {
                    continue;
                }
                map[at] = Some(candidate);
                used[candidate] = true;
                if extend(a, b, map, used, at + 1) {
                    return true;
                }
                map[at] = None;
                used[candidate] = false;
            }
            false
        }
        extend(
            self,
            other,
            &mut vec![None; n],
            &mut vec![false; n],
            0,
        )
    }

    /// The morphism-complex dual: a right A-infinity module over the same
    /// stored algebra, with carriers the idempotent-compatible maps
    /// `x -> b` into the algebra, `m1` induced by the differential and
    /// `delta1`, and the algebra acting by postcomposition.
    pub fn dual(&self) -> AInfModule {
        let basics = arcalg::full_basis(&self.circle);
        // Carrier (x, b) with left pairs of b equal to I(x).
        let mut carriers: Vec<(usize, BasicGenerator)> = Vec::new();
        for (x, g) in self.generators.iter().enumerate() {
            for b in &basics {
                if b.source_pairs() == g.idempotent.0 {
                    carriers.push((x, b.clone()));
                }
            }
        }
        let carrier_index = |x: usize, b: &BasicGenerator| -> Option<usize> {
            carriers.iter().position(|(cx, cb)| *cx == x && cb == b)
        };
        let generators: Vec<Generator> = carriers
            .iter()
            .map(|(x, b)| Generator {
                name: format!("{}|{}", self.generators[*x].name, b.representative()),
                idempotent: Idempotent(b.target_pairs()),
            })
            .collect();
        let mut module = AInfModule::new(self.circle.clone(), generators)
            .expect("carrier names are unique");
        for (i, (x, b)) in carriers.iter().enumerate() {
            // m1 from the algebra differential on the value.
            let mut m1_targets: BTreeSet<usize> = BTreeSet::new();
            for term in b.element().differential().decompose() {
                let j = carrier_index(*x, &term).expect("differential stays in the carrier");
                if !m1_targets.insert(j) {
                    m1_targets.remove(&j);
                }
            }
            // m1 from precomposition with delta1: (x', a (x) x) sends
            // (x, b) to (x', a b).
            for (x2, terms) in self.delta1.iter().enumerate() {
                for (a, to) in terms {
                    if to != x {
                        continue;
                    }
                    for term in a.element().multiply(b.element()).decompose() {
                        let j = carrier_index(x2, &term).expect("product stays in the carrier");
                        if !m1_targets.insert(j) {
                            m1_targets.remove(&j);
                        }
                    }
                }
            }
            for j in m1_targets {
                module.toggle_op(i, Vec::new(), j);
            }
            // m2 by postcomposition with every non-idempotent basic.
            for c in &basics {
                if c.is_idempotent() {
                    continue;
                }
                for term in b.element().multiply(c.element()).decompose() {
                    let j = carrier_index(*x, &term).expect("product stays in the carrier");
                    module.toggle_op(i, vec![c.clone()], j);
                }
            }
        }
        module
    }
}

fn tarjan_scc(n: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    // Iterative Tarjan; returns the component index per vertex.
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0usize;
    let mut next_comp = 0usize;
    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(start, 0)];
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            if *ei == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *ei < adj[v].len() {
                let w = adj[v][*ei];
                *ei += 1;
                if index[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
                call.pop();
                if let Some(&mut (u, _)) = call.last_mut() {
                    low[u] = low[u].min(low[v]);
                }
            }
        }
    }
    comp
}

/// One failing instance of the A-infinity relation.
#[derive(Debug, Clone)]
pub struct AInfFailure {
    pub generator: String,
    pub inputs: Vec<String>,
    pub residual: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct AInfReport {
    pub failures: Vec<AInfFailure>,
    pub idempotent_violations: Vec<String>,
}

impl AInfReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A right A-infinity module, presented by a finitely supported table of
/// operations `m_{n+1}(x, a_1, ..., a_n)` on non-idempotent basic inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AInfModule {
    circle: PointedMatchedCircle,
    generators: Vec<Generator>,
    ops: BTreeMap<(usize, Vec<BasicGenerator>), BTreeSet<usize>>,
}

impl AInfModule {
    pub fn new(
        circle: PointedMatchedCircle,
        generators: Vec<Generator>,
    ) -> Result<AInfModule, ModuleError> {
        index_generators(&generators)?;
        Ok(AInfModule {
            circle,
            generators,
            ops: BTreeMap::new(),
        })
    }

    pub fn circle(&self) -> &PointedMatchedCircle {
        &self.circle
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn index_of(&self, name: &str) -> Result<usize, ModuleError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| ModuleError::UnknownGenerator(name.to_string()))
    }

    pub fn ops(&self) -> impl Iterator<Item = (&(usize, Vec<BasicGenerator>), &BTreeSet<usize>)> {
        self.ops.iter()
    }

    pub fn max_arity(&self) -> usize {
        self.ops.keys().map(|(_, inputs)| inputs.len()).max().unwrap_or(0)
    }

    /// Toggles a single output of an operation table entry.
    pub fn toggle_op(&mut self, x: usize, inputs: Vec<BasicGenerator>, y: usize) {
        assert!(
            inputs.iter().all(|b| !b.is_idempotent()),
            "operation tables never contain idempotent inputs"
        );
        let entry = self.ops.entry((x, inputs)).or_default();
        if !entry.insert(y) {
            entry.remove(&y);
        }
        let key_empty = self
            .ops
            .iter()
            .filter(|(_, v)| v.is_empty())
            .map(|(k, _)| k.clone())
            .collect::<Vec<_>>();
        for k in key_empty {
            self.ops.remove(&k);
        }
    }

    pub fn add_op(
        &mut self,
        from: &str,
        inputs: Vec<BasicGenerator>,
        to: &str,
    ) -> Result<(), ModuleError> {
        if inputs.iter().any(|b| b.is_idempotent()) {
            return Err(ModuleError::IdempotentInput);
        }
        for b in &inputs {
            if b.circle() != &self.circle {
                return Err(ModuleError::AlgebraMismatch);
            }
        }
        let x = self.index_of(from)?;
        let y = self.index_of(to)?;
        self.toggle_op(x, inputs, y);
        Ok(())
    }

    /// Evaluates `m_{n+1}(x, inputs)` with the strictly unital convention:
    /// a lone idempotent input acts as the identity on a matching generator,
    /// idempotents in longer sequences kill the operation, and everything
    /// else is a table lookup.
    pub fn evaluate(&self, x: usize, inputs: &[BasicGenerator]) -> BTreeSet<usize> {
        if inputs.iter().any(|b| b.is_idempotent()) {
            if inputs.len() == 1 {
                let e = &inputs[0];
                if e.source_pairs() == self.generators[x].idempotent.0 {
                    return BTreeSet::from([x]);
                }
            }
            return BTreeSet::new();
        }
        self.ops
            .get(&(x, inputs.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    /// Evaluates with algebra elements in the input slots, extending
    /// multilinearly over their basic generators.
    pub fn evaluate_linear(&self, x: usize, slots: &[ArcAlgebraElement]) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let decomposed: Vec<Vec<BasicGenerator>> =
            slots.iter().map(|e| e.decompose()).collect();
        let mut choice = vec![0usize; decomposed.len()];
        loop {
            if decomposed.iter().any(|d| d.is_empty()) {
                break;
            }
            let inputs: Vec<BasicGenerator> = choice
                .iter()
                .zip(&decomposed)
                .map(|(&i, d)| d[i].clone())
                .collect();
            for y in self.evaluate(x, &inputs) {
                if !out.insert(y) {
                    out.remove(&y);
                }
            }
            // Advance the mixed-radix counter.
            let mut pos = 0;
            loop {
                if pos == choice.len() {
                    return out;
                }
                choice[pos] += 1;
                if choice[pos] < decomposed[pos].len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if choice.iter().all(|&c| c == 0) {
                break;
            }
        }
        out
    }

    /// Idempotent-compatibility violations of the operation table.
    pub fn idempotent_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for ((x, inputs), targets) in &self.ops {
            let mut current = self.generators[*x].idempotent.0.clone();
            let mut ok = true;
            for b in inputs {
                if b.source_pairs() != current {
                    ok = false;
                    break;
                }
                current = b.target_pairs();
            }
            for y in targets {
                if self.generators[*y].idempotent.0 != current {
                    ok = false;
                }
            }
            if !ok {
                let desc: Vec<String> = inputs.iter().map(|b| b.to_string()).collect();
                out.push(format!(
                    "m(.)({}; {}) breaks the idempotent chain",
                    self.generators[*x].name,
                    desc.join(", ")
                ));
            }
        }
        out
    }

    /// Checks the A-infinity module relation for all generators and input
    /// sequences of non-idempotent basic generators up to length `n_max`.
    pub fn verify(&self, n_max: usize) -> AInfReport {
        let basics: Vec<BasicGenerator> = arcalg::full_basis(&self.circle)
            .into_iter()
            .filter(|b| !b.is_idempotent())
            .collect();
        let mut report = AInfReport {
            failures: Vec::new(),
            idempotent_violations: self.idempotent_violations(),
        };
        for x in 0..self.generators.len() {
            let mut sequences: Vec<Vec<BasicGenerator>> = vec![Vec::new()];
            for n in 0..=n_max {
                for seq in &sequences {
                    let residual = self.relation_residual(x, seq);
                    if !residual.is_empty() {
                        report.failures.push(AInfFailure {
                            generator: self.generators[x].name.clone(),
                            inputs: seq.iter().map(|b| b.to_string()).collect(),
                            residual: residual
                                .iter()
                                .map(|&y| self.generators[y].name.clone())
                                .collect(),
                        });
                    }
                }
                if n == n_max {
                    break;
                }
                // Extend by one input, chaining idempotents from x.
                let mut next = Vec::new();
                for seq in &sequences {
                    let tail_pairs = match seq.last() {
                        Some(b) => b.target_pairs(),
                        None => self.generators[x].idempotent.0.clone(),
                    };
                    for b in &basics {
                        if b.source_pairs() == tail_pairs {
                            let mut e = seq.clone();
                            e.push(b.clone());
                            next.push(e);
                        }
                    }
                }
                sequences = next;
            }
        }
        report
    }

    /// The residual of the A-infinity relation on `(x, a_1..a_n)`; empty
    /// means the relation holds there.
    fn relation_residual(&self, x: usize, inputs: &[BasicGenerator]) -> BTreeSet<usize> {
        let n = inputs.len();
        let mut residual: BTreeSet<usize> = BTreeSet::new();
        let toggle_all = |set: BTreeSet<usize>, residual: &mut BTreeSet<usize>| {
            for y in set {
                if !residual.insert(y) {
                    residual.remove(&y);
                }
            }
        };
        // Composition terms m_i(m_j(x, a_1..a_{j-1}), a_j..a_n).
        for split in 0..=n {
            let inner = self.evaluate(x, &inputs[..split]);
            for w in inner {
                let outer = self.evaluate(w, &inputs[split..]);
                toggle_all(outer, &mut residual);
            }
        }
        // Differential of one input.
        for l in 0..n {
            let slots: Vec<ArcAlgebraElement> = inputs
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    if i == l {
                        b.element().differential()
                    } else {
                        b.element().clone()
                    }
                })
                .collect();
            toggle_all(self.evaluate_linear(x, &slots), &mut residual);
        }
        // Product of adjacent inputs.
        for l in 0..n.saturating_sub(1) {
            let mut slots: Vec<ArcAlgebraElement> = Vec::new();
            for (i, b) in inputs.iter().enumerate() {
                if i == l {
                    slots.push(b.element().multiply(inputs[l + 1].element()));
                } else if i == l + 1 {
                    continue;
                } else {
                    slots.push(b.element().clone());
                }
            }
            toggle_all(self.evaluate_linear(x, &slots), &mut residual);
        }
        residual
    }

    /// Finite presentations always have a maximal arity, so the module is
    /// bounded in the sense that `m_{n+1} = 0` for all large `n`.
    pub fn is_bounded(&self) -> bool {
        true
    }
}

/// A generator of a bimodule, with one idempotent per side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiGenerator {
    pub name: String,
    pub left: Idempotent,
    pub right: Idempotent,
}

/// A type DD bimodule: `delta1: X -> A_L (x) A_R (x) X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDDBimodule {
    left_circle: PointedMatchedCircle,
    right_circle: PointedMatchedCircle,
    generators: Vec<BiGenerator>,
    delta1: Vec<BTreeSet<(BasicGenerator, BasicGenerator, usize)>>,
}

impl TypeDDBimodule {
    pub fn new(
        left_circle: PointedMatchedCircle,
        right_circle: PointedMatchedCircle,
        generators: Vec<BiGenerator>,
    ) -> Result<TypeDDBimodule, ModuleError> {
        let mut names = BTreeSet::new();
        for g in &generators {
            if !names.insert(&g.name) {
                return Err(ModuleError::DuplicateGenerator(g.name.clone()));
            }
        }
        let delta1 = vec![BTreeSet::new(); generators.len()];
        Ok(TypeDDBimodule {
            left_circle,
            right_circle,
            generators,
            delta1,
        })
    }

    pub fn left_circle(&self) -> &PointedMatchedCircle {
        &self.left_circle
    }

    pub fn right_circle(&self) -> &PointedMatchedCircle {
        &self.right_circle
    }

    pub fn generators(&self) -> &[BiGenerator] {
        &self.generators
    }

    pub fn index_of(&self, name: &str) -> Result<usize, ModuleError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| ModuleError::UnknownGenerator(name.to_string()))
    }

    pub fn add_delta(
        &mut self,
        from: &str,
        left: &ArcAlgebraElement,
        right: &ArcAlgebraElement,
        to: &str,
    ) -> Result<(), ModuleError> {
        if left.circle() != &self.left_circle || right.circle() != &self.right_circle {
            return Err(ModuleError::AlgebraMismatch);
        }
        let from = self.index_of(from)?;
        let to = self.index_of(to)?;
        for lb in left.decompose() {
            for rb in right.decompose() {
                let key = (lb.clone(), rb, to);
                if !self.delta1[from].insert(key.clone()) {
                    self.delta1[from].remove(&key);
                }
            }
        }
        Ok(())
    }

    pub fn delta1_terms(
        &self,
        idx: usize,
    ) -> impl Iterator<Item = &(BasicGenerator, BasicGenerator, usize)> {
        self.delta1[idx].iter()
    }

    /// The structure relation for DD bimodules:
    /// `(d_L a) (x) b + a (x) (d_R b) + sum of coefficientwise products = 0`
    /// for each generator pair.
    pub fn verify(&self) -> DReport {
        let n = self.generators.len();
        let mut residuals = Vec::new();
        for x in 0..n {
            for y in 0..n {
                // Residual in A_L (x) A_R, stored by basic generator pairs.
                let mut residual: BTreeSet<(BasicGenerator, BasicGenerator)> = BTreeSet::new();
                let toggle = |l: BasicGenerator,
                                  r: BasicGenerator,
                                  residual: &mut BTreeSet<(BasicGenerator, BasicGenerator)>| {
                    let key = (l, r);
                    if !residual.insert(key.clone()) {
                        residual.remove(&key);
                    }
                };
                for (l, r, to) in &self.delta1[x] {
                    if *to != y {
                        continue;
                    }
                    for dl in l.element().differential().decompose() {
                        toggle(dl, r.clone(), &mut residual);
                    }
                    for dr in r.element().differential().decompose() {
                        toggle(l.clone(), dr, &mut residual);
                    }
                }
                for w in 0..n {
                    for (l1, r1, to1) in &self.delta1[x] {
                        if *to1 != w {
                            continue;
                        }
                        for (l2, r2, to2) in &self.delta1[w] {
                            if *to2 != y {
                                continue;
                            }
                            let lprod = l1.element().multiply(l2.element());
                            let rprod = r1.element().multiply(r2.element());
                            for lb in lprod.decompose() {
                                for rb in rprod.decompose() {
                                    toggle(lb.clone(), rb, &mut residual);
                                }
                            }
                        }
                    }
                }
                if !residual.is_empty() {
                    // Report the left components as the witness element.
                    let mut witness = ArcAlgebraElement::zero(&self.left_circle);
                    for (l, _) in &residual {
                        witness = witness.add(l.element());
                    }
                    residuals.push((
                        self.generators[x].name.clone(),
                        self.generators[y].name.clone(),
                        witness,
                    ));
                }
            }
        }
        DReport {
            residuals,
            idempotent_violations: self.idempotent_violations(),
        }
    }

    pub fn idempotent_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (x, terms) in self.delta1.iter().enumerate() {
            for (l, r, y) in terms {
                let ok = l.source_pairs() == self.generators[x].left.0
                    && l.target_pairs() == self.generators[*y].left.0
                    && r.source_pairs() == self.generators[x].right.0
                    && r.target_pairs() == self.generators[*y].right.0;
                if !ok {
                    out.push(format!(
                        "delta1({}) term {} (x) {} (x) {} breaks idempotents",
                        self.generators[x].name, l, r, self.generators[*y].name
                    ));
                }
            }
        }
        out
    }
}

/// A type DA bimodule: operations `delta_{1+j}(x, a_1..a_j)` consuming right
/// algebra inputs and emitting one left coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDABimodule {
    left_circle: PointedMatchedCircle,
    right_circle: PointedMatchedCircle,
    generators: Vec<BiGenerator>,
    delta: BTreeMap<(usize, Vec<BasicGenerator>), BTreeSet<(BasicGenerator, usize)>>,
}

impl TypeDABimodule {
    pub fn new(
        left_circle: PointedMatchedCircle,
        right_circle: PointedMatchedCircle,
        generators: Vec<BiGenerator>,
    ) -> Result<TypeDABimodule, ModuleError> {
        let mut names = BTreeSet::new();
        for g in &generators {
            if !names.insert(&g.name) {
                return Err(ModuleError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(TypeDABimodule {
            left_circle,
            right_circle,
            generators,
            delta: BTreeMap::new(),
        })
    }

    pub fn left_circle(&self) -> &PointedMatchedCircle {
        &self.left_circle
    }

    pub fn right_circle(&self) -> &PointedMatchedCircle {
        &self.right_circle
    }

    pub fn generators(&self) -> &[BiGenerator] {
        &self.generators
    }

    pub fn index_of(&self, name: &str) -> Result<usize, ModuleError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| ModuleError::UnknownGenerator(name.to_string()))
    }

    pub fn max_right_arity(&self) -> usize {
        self.delta.keys().map(|(_, i)| i.len()).max().unwrap_or(0)
    }

    pub fn add_delta(
        &mut self,
        from: &str,
        inputs: Vec<BasicGenerator>,
        coefficient: &ArcAlgebraElement,
        to: &str,
    ) -> Result<(), ModuleError> {
        if inputs.iter().any(|b| b.is_idempotent()) {
            return Err(ModuleError::IdempotentInput);
        }
        if coefficient.circle() != &self.left_circle
            || inputs.iter().any(|b| b.circle() != &self.right_circle)
        {
            return Err(ModuleError::AlgebraMismatch);
        }
        let from = self.index_of(from)?;
        let to = self.index_of(to)?;
        for basic in coefficient.decompose() {
            let entry = self.delta.entry((from, inputs.clone())).or_default();
            let key = (basic, to);
            if !entry.insert(key.clone()) {
                entry.remove(&key);
            }
        }
        self.delta.retain(|_, v| !v.is_empty());
        Ok(())
    }

    /// Evaluates `delta_{1+j}(x, inputs)` with the strictly unital
    /// convention on the right inputs.
    pub fn evaluate(
        &self,
        x: usize,
        inputs: &[BasicGenerator],
    ) -> BTreeSet<(BasicGenerator, usize)> {
        if inputs.iter().any(|b| b.is_idempotent()) {
            if inputs.len() == 1 && inputs[0].source_pairs() == self.generators[x].right.0 {
                let coeff = self.generators[x]
                    .left
                    .element(&self.left_circle)
                    .decompose();
                return coeff.into_iter().map(|c| (c, x)).collect();
            }
            return BTreeSet::new();
        }
        self.delta
            .get(&(x, inputs.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn delta_entries(
        &self,
    ) -> impl Iterator<Item = (&(usize, Vec<BasicGenerator>), &BTreeSet<(BasicGenerator, usize)>)>
    {
        self.delta.iter()
    }

    /// Conservative boundedness for the left differential part: no directed
    /// cycle among input-free entries with a non-idempotent left
    /// coefficient. The right side is finitely supported, hence bounded.
    pub fn is_bounded(&self) -> bool {
        let n = self.generators.len();
        let mut adj = vec![Vec::new(); n];
        let mut flagged: BTreeSet<(usize, usize)> = BTreeSet::new();
        for ((x, inputs), targets) in &self.delta {
            if !inputs.is_empty() {
                continue;
            }
            for (c, y) in targets {
                adj[*x].push(*y);
                if !c.is_idempotent() {
                    flagged.insert((*x, *y));
                }
            }
        }
        let comp = tarjan_scc(n, &adj);
        for &(x, y) in &flagged {
            if x == y || comp[x] == comp[y] {
                return false;
            }
        }
        true
    }

    pub fn idempotent_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for ((x, inputs), targets) in &self.delta {
            let mut right = self.generators[*x].right.0.clone();
            let mut ok = true;
            for b in inputs {
                if b.source_pairs() != right {
                    ok = false;
                    break;
                }
                right = b.target_pairs();
            }
            for (c, y) in targets {
                if c.source_pairs() != self.generators[*x].left.0
                    || c.target_pairs() != self.generators[*y].left.0
                    || self.generators[*y].right.0 != right
                {
                    ok = false;
                }
            }
            if !ok {
                out.push(format!(
                    "delta({}, ...) breaks the idempotent chains",
                    self.generators[*x].name
                ));
            }
        }
        out
    }

    /// The DA structure relation, checked for all generators and right input
    /// sequences up to length `n_max`: the left differential of each output,
    /// the two-step compositions, input differentials, and adjacent input
    /// products must cancel.
    pub fn verify(&self, n_max: usize) -> AInfReport {
        let basics: Vec<BasicGenerator> = arcalg::full_basis(&self.right_circle)
            .into_iter()
            .filter(|b| !b.is_idempotent())
            .collect();
        let mut report = AInfReport {
            failures: Vec::new(),
            idempotent_violations: self.idempotent_violations(),
        };
        for x in 0..self.generators.len() {
            let mut sequences: Vec<Vec<BasicGenerator>> = vec![Vec::new()];
            for n in 0..=n_max {
                for seq in &sequences {
                    let residual = self.relation_residual(x, seq);
                    if !residual.is_empty() {
                        report.failures.push(AInfFailure {
                            generator: self.generators[x].name.clone(),
                            inputs: seq.iter().map(|b| b.to_string()).collect(),
                            residual: residual
                                .iter()
                                .map(|(c, y)| {
                                    format!("{} (x) {}", c, self.generators[*y].name)
                                })
                                .collect(),
                        });
                    }
                }
                if n == n_max {
                    break;
                }
                let mut next = Vec::new();
                for seq in &sequences {
                    let tail_pairs = match seq.last() {
                        Some(b) => b.target_pairs(),
                        None => self.generators[x].right.0.clone(),
                    };
                    for b in &basics {
                        if b.source_pairs() == tail_pairs {
                            let mut e = seq.clone();
                            e.push(b.clone());
                            next.push(e);
                        }
                    }
                }
                sequences = next;
            }
        }
        report
    }

    fn relation_residual(
        &self,
        x: usize,
        inputs: &[BasicGenerator],
    ) -> BTreeSet<(BasicGenerator, usize)> {
        let n = inputs.len();
        let mut residual: BTreeSet<(BasicGenerator, usize)> = BTreeSet::new();
        let toggle =
            |c: BasicGenerator, y: usize, residual: &mut BTreeSet<(BasicGenerator, usize)>| {
                let key = (c, y);
                if !residual.insert(key.clone()) {
                    residual.remove(&key);
                }
            };
        // Left differential of the direct output.
        for (c, y) in self.evaluate(x, inputs) {
            for dc in c.element().differential().decompose() {
                toggle(dc, y, &mut residual);
            }
        }
        // Two-step compositions with left coefficients multiplied.
        for split in 0..=n {
            for (c1, w) in self.evaluate(x, &inputs[..split]) {
                for (c2, y) in self.evaluate(w, &inputs[split..]) {
                    for c in c1.element().multiply(c2.element()).decompose() {
                        toggle(c, y, &mut residual);
                    }
                }
            }
        }
        // Differential of one input.
        for l in 0..n {
            for replacement in inputs[l].element().differential().decompose() {
                let mut seq = inputs.to_vec();
                seq[l] = replacement;
                for (c, y) in self.evaluate(x, &seq) {
                    toggle(c, y, &mut residual);
                }
            }
        }
        // Product of adjacent inputs.
        for l in 0..n.saturating_sub(1) {
            let product = inputs[l].element().multiply(inputs[l + 1].element());
            for replacement in product.decompose() {
                let mut seq: Vec<BasicGenerator> = Vec::new();
                for (i, b) in inputs.iter().enumerate() {
                    if i == l {
                        seq.push(replacement.clone());
                    } else if i == l + 1 {
                        continue;
                    } else {
                        seq.push(b.clone());
                    }
                }
                for (c, y) in self.evaluate(x, &seq) {
                    toggle(c, y, &mut residual);
                }
            }
        }
        residual
    }
}
