//! Solving for structure maps from the condition `d^2 = 0`.
//!
//! Given generators with idempotents and a finite support of candidate
//! coefficient entries, the solver finds every F2 assignment to the entries
//! for which the structure relation holds. The search is a deterministic
//! backtracking over the entries in input order, pruning as soon as a
//! residual whose variables are all assigned is nonzero.

use std::collections::BTreeSet;

use crate::arcalg::{ArcAlgebraElement, BasicGenerator};
use crate::pmc::PointedMatchedCircle;

use super::{BiGenerator, Generator, ModuleError, TypeDDBimodule, TypeDStructure};

const UNKNOWN_GUARD: usize = 64;

/// One residual of the structure relation, expressed over the support
/// variables: a constant-free sum of linear terms (from differentials) and
/// quadratic terms (from coefficient paths).
struct Residual<T: Ord + Clone> {
    linear: Vec<(usize, BTreeSet<T>)>,
    quadratic: Vec<(usize, usize, BTreeSet<T>)>,
    last_var: usize,
}

impl<T: Ord + Clone> Residual<T> {
    fn is_zero_under(&self, assignment: &[bool]) -> bool {
        let mut acc: BTreeSet<T> = BTreeSet::new();
        let toggle_all = |terms: &BTreeSet<T>, acc: &mut BTreeSet<T>| {
            for t in terms {
                if !acc.insert(t.clone()) {
                    acc.remove(t);
                }
            }
        };
        for (v, terms) in &self.linear {
            if assignment[*v] {
                toggle_all(terms, &mut acc);
            }
        }
        for (v1, v2, terms) in &self.quadratic {
            if assignment[*v1] && assignment[*v2] {
                toggle_all(terms, &mut acc);
            }
        }
        acc.is_empty()
    }
}

fn backtrack<T: Ord + Clone>(num_vars: usize, residuals: &[Residual<T>]) -> Vec<Vec<bool>> {
    let mut solutions = Vec::new();
    let mut assignment = vec![false; num_vars];
    // Residuals become decidable once their last variable is assigned.
    let mut by_last: Vec<Vec<&Residual<T>>> = vec![Vec::new(); num_vars.max(1)];
    let mut constant_residuals: Vec<&Residual<T>> = Vec::new();
    for r in residuals {
        if num_vars == 0 || (r.linear.is_empty() && r.quadratic.is_empty()) {
            constant_residuals.push(r);
        } else {
            by_last[r.last_var].push(r);
        }
    }
    if !constant_residuals
        .iter()
        .all(|r| r.is_zero_under(&assignment))
    {
        return solutions;
    }
    fn rec<T: Ord + Clone>(
        var: usize,
        num_vars: usize,
        assignment: &mut Vec<bool>,
        by_last: &[Vec<&Residual<T>>],
        solutions: &mut Vec<Vec<bool>>,
    ) {
        if var == num_vars {
            solutions.push(assignment.clone());
            return;
        }
        for value in [false, true] {
            assignment[var] = value;
            if by_last[var].iter().all(|r| r.is_zero_under(assignment)) {
                rec(var + 1, num_vars, assignment, by_last, solutions);
            }
        }
        assignment[var] = false;
    }
    if num_vars == 0 {
        solutions.push(Vec::new());
        return solutions;
    }
    rec(0, num_vars, &mut assignment, &by_last, &mut solutions);
    solutions
}

/// All type D structures on the given generators whose `delta1` is supported
/// on the listed `(from, coefficient, to)` entries and which satisfy the
/// structure relation. Solutions come in deterministic order (entries off
/// before on, first entry varying slowest).
pub fn solve_delta_d(
    circle: &PointedMatchedCircle,
    generators: &[Generator],
    support: &[(String, ArcAlgebraElement, String)],
) -> Result<Vec<TypeDStructure>, ModuleError> {
    if support.len() > UNKNOWN_GUARD {
        return Err(ModuleError::SizeLimit(format!(
            "{} unknowns exceed the guard {UNKNOWN_GUARD}",
            support.len()
        )));
    }
    let template = TypeDStructure::new(circle.clone(), generators.to_vec())?;
    let mut entries: Vec<(usize, ArcAlgebraElement, usize)> = Vec::new();
    for (from, coeff, to) in support {
        if coeff.circle() != circle {
            return Err(ModuleError::AlgebraMismatch);
        }
        entries.push((template.index_of(from)?, coeff.clone(), template.index_of(to)?));
    }
    let n = generators.len();
    let mut residuals: Vec<Residual<BasicGenerator>> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let mut linear = Vec::new();
            let mut quadratic = Vec::new();
            let mut last_var = 0usize;
            for (v, (from, coeff, to)) in entries.iter().enumerate() {
                if *from == x && *to == y {
                    let d: BTreeSet<BasicGenerator> =
                        coeff.differential().decompose().into_iter().collect();
                    if !d.is_empty() {
                        linear.push((v, d));
                        last_var = last_var.max(v);
                    }
                }
            }
            for (v1, (f1, c1, t1)) in entries.iter().enumerate() {
                if *f1 != x {
                    continue;
                }
                for (v2, (f2, c2, t2)) in entries.iter().enumerate() {
                    if *f2 != *t1 || *t2 != y {
                        continue;
                    }
                    let product: BTreeSet<BasicGenerator> =
                        c1.multiply(c2).decompose().into_iter().collect();
                    if !product.is_empty() {
                        quadratic.push((v1, v2, product));
                        last_var = last_var.max(v1).max(v2);
                    }
                }
            }
            if !linear.is_empty() || !quadratic.is_empty() {
                residuals.push(Residual {
                    linear,
                    quadratic,
                    last_var,
                });
            }
        }
    }
    let solutions = backtrack(entries.len(), &residuals);
    let mut out = Vec::new();
    for assignment in solutions {
        let mut module = template.clone();
        for (v, (from, coeff, to)) in entries.iter().enumerate() {
            if assignment[v] {
                let from = generators[*from].name.as_str();
                let to = generators[*to].name.as_str();
                module.add_delta(from, coeff, to)?;
            }
        }
        out.push(module);
    }
    Ok(out)
}

/// The DD analogue of [`solve_delta_d`]: support entries carry a coefficient
/// on each side.
pub fn solve_delta_dd(
    left_circle: &PointedMatchedCircle,
    right_circle: &PointedMatchedCircle,
    generators: &[BiGenerator],
    support: &[(String, ArcAlgebraElement, ArcAlgebraElement, String)],
) -> Result<Vec<TypeDDBimodule>, ModuleError> {
    if support.len() > UNKNOWN_GUARD {
        return Err(ModuleError::SizeLimit(format!(
            "{} unknowns exceed the guard {UNKNOWN_GUARD}",
            support.len()
        )));
    }
    let template =
        TypeDDBimodule::new(left_circle.clone(), right_circle.clone(), generators.to_vec())?;
    let mut entries: Vec<(usize, ArcAlgebraElement, ArcAlgebraElement, usize)> = Vec::new();
    for (from, left, right, to) in support {
        if left.circle() != left_circle || right.circle() != right_circle {
            return Err(ModuleError::AlgebraMismatch);
        }
        entries.push((
            template.index_of(from)?,
            left.clone(),
            right.clone(),
            template.index_of(to)?,
        ));
    }
    let pair_terms = |l: &ArcAlgebraElement,
                      r: &ArcAlgebraElement|
     -> BTreeSet<(BasicGenerator, BasicGenerator)> {
        let mut out = BTreeSet::new();
        for lb in l.decompose() {
            for rb in r.decompose() {
                let key = (lb.clone(), rb);
                if !out.insert(key.clone()) {
                    out.remove(&key);
                }
            }
        }
        out
    };
    let n = generators.len();
    let mut residuals: Vec<Residual<(BasicGenerator, BasicGenerator)>> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let mut linear = Vec::new();
            let mut quadratic = Vec::new();
            let mut last_var = 0usize;
            for (v, (from, l, r, to)) in entries.iter().enumerate() {
                if *from == x && *to == y {
                    let mut terms = pair_terms(&l.differential(), r);
                    for t in pair_terms(l, &r.differential()) {
                        if !terms.insert(t.clone()) {
                            terms.remove(&t);
                        }
                    }
                    if !terms.is_empty() {
                        linear.push((v, terms));
                        last_var = last_var.max(v);
                    }
                }
            }
            for (v1, (f1, l1, r1, t1)) in entries.iter().enumerate() {
                if *f1 != x {
                    continue;
                }
                for (v2, (f2, l2, r2, t2)) in entries.iter().enumerate() {
                    if *f2 != *t1 || *t2 != y {
                        continue;
                    }
                    let terms = pair_terms(&l1.multiply(l2), &r1.multiply(r2));
                    if !terms.is_empty() {
                        quadratic.push((v1, v2, terms));
                        last_var = last_var.max(v1).max(v2);
                    }
                }
            }
            if !linear.is_empty() || !quadratic.is_empty() {
                residuals.push(Residual {
                    linear,
                    quadratic,
                    last_var,
                });
            }
        }
    }
    let solutions = backtrack(entries.len(), &residuals);
    let mut out = Vec::new();
    for assignment in solutions {
        let mut module = template.clone();
        for (v, (from, l, r, to)) in entries.iter().enumerate() {
            if assignment[v] {
                let from = generators[*from].name.as_str();
                let to = generators[*to].name.as_str();
                module.add_delta(from, l, r, to)?;
            }
        }
        out.push(module);
    }
    Ok(out)
}
