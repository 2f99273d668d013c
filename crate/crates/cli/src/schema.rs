//! JSON document schemas and their conversion to kernel types.
//!
//! One file holds one object. Schema errors name the first offending field.

use serde::Deserialize;

use bordered_core::arcalg::ArcAlgebraElement;
use bordered_core::diagrams::{BorderedDiagram, IntersectionPoint};
use bordered_core::modules::{
    builtin_solid_torus_a, builtin_solid_torus_d, identity_da_bimodule, AInfModule, BiGenerator,
    Generator, Idempotent, TypeDABimodule, TypeDDBimodule, TypeDStructure,
};
use bordered_core::pmc::PointedMatchedCircle;

use crate::literal::parse_element;

#[derive(Debug)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for SchemaError {}

fn bad(field: &str, why: impl std::fmt::Display) -> SchemaError {
    SchemaError(format!("field {field:?}: {why}"))
}

/// `{"genus": k, "matching": [[1,3],[2,4]]}`
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleDoc {
    pub genus: usize,
    pub matching: Vec<(usize, usize)>,
}

impl CircleDoc {
    pub fn build(&self) -> Result<PointedMatchedCircle, SchemaError> {
        PointedMatchedCircle::validate(self.genus, &self.matching)
            .map_err(|e| bad("matching", e))
    }
}

/// Module document. `side` selects the structure type; bimodules carry two
/// algebras and two-part idempotents. `builtin` replaces everything else.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    #[serde(default)]
    pub builtin: Option<String>,
    #[serde(default)]
    pub framing: Option<i64>,
    #[serde(default)]
    pub algebra: Option<CircleDoc>,
    #[serde(default)]
    pub algebra_right: Option<CircleDoc>,
    #[serde(default)]
    pub side: Option<String>,
    #[serde(default)]
    pub generators: Vec<GeneratorDoc>,
    #[serde(default)]
    pub delta: Vec<DeltaDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub name: String,
    pub idempotent: IdempotentDoc,
}

/// Either a flat list of pair indices or a two-sided `[[left],[right]]`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum IdempotentDoc {
    Single(Vec<usize>),
    Two(Vec<Vec<usize>>),
}

impl IdempotentDoc {
    fn single(&self) -> Result<Idempotent, SchemaError> {
        match self {
            IdempotentDoc::Single(v) => Ok(Idempotent::from_pairs(v.iter().copied())),
            IdempotentDoc::Two(_) => Err(bad(
                "idempotent",
                "expected a flat pair-index list for a one-sided module",
            )),
        }
    }

    fn two(&self) -> Result<(Idempotent, Idempotent), SchemaError> {
        match self {
            IdempotentDoc::Two(v) if v.len() == 2 => Ok((
                Idempotent::from_pairs(v[0].iter().copied()),
                Idempotent::from_pairs(v[1].iter().copied()),
            )),
            _ => Err(bad(
                "idempotent",
                "expected [[left pairs],[right pairs]] for a bimodule",
            )),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaDoc {
    pub from: String,
    /// F2 sum of element literals (the coefficient; left coefficient for
    /// DA/DD documents, where `coeffs_right` holds the other side).
    #[serde(default)]
    pub coeffs: Vec<String>,
    #[serde(default)]
    pub coeffs_right: Vec<String>,
    /// Right algebra inputs for A and DA documents.
    #[serde(default)]
    pub inputs: Vec<String>,
    pub to: String,
}

/// Any of the four module flavors, as parsed.
pub enum AnyModule {
    D(TypeDStructure),
    A(AInfModule),
    Dd(TypeDDBimodule),
    Da(TypeDABimodule),
}

impl ModuleDoc {
    pub fn build(&self) -> Result<AnyModule, SchemaError> {
        if let Some(name) = &self.builtin {
            return self.build_builtin(name);
        }
        let side = self.side.as_deref().unwrap_or("D");
        let algebra = self
            .algebra
            .as_ref()
            .ok_or_else(|| bad("algebra", "missing"))?
            .build()?;
        match side {
            "D" => {
                let gens = self.one_sided_generators()?;
                let mut m = TypeDStructure::new(algebra.clone(), gens)
                    .map_err(|e| bad("generators", e))?;
                for (i, d) in self.delta.iter().enumerate() {
                    let field = format!("delta[{i}]");
                    if !d.inputs.is_empty() || !d.coeffs_right.is_empty() {
                        return Err(bad(&field, "type D entries take coeffs only"));
                    }
                    for lit in &d.coeffs {
                        let coeff =
                            parse_element(&algebra, lit).map_err(|e| bad(&field, e))?;
                        m.add_delta(&d.from, &coeff, &d.to)
                            .map_err(|e| bad(&field, e))?;
                    }
                }
                Ok(AnyModule::D(m))
            }
            "A" => {
                let gens = self.one_sided_generators()?;
                let mut m =
                    AInfModule::new(algebra.clone(), gens).map_err(|e| bad("generators", e))?;
                for (i, d) in self.delta.iter().enumerate() {
                    let field = format!("delta[{i}]");
                    if !d.coeffs.is_empty() || !d.coeffs_right.is_empty() {
                        return Err(bad(&field, "type A entries take inputs only"));
                    }
                    let mut inputs = Vec::new();
                    for lit in &d.inputs {
                        let element =
                            parse_element(&algebra, lit).map_err(|e| bad(&field, e))?;
                        let mut basics = element.decompose();
                        if basics.len() != 1 {
                            return Err(bad(
                                &field,
                                "each input literal must be a single basic generator",
                            ));
                        }
                        inputs.push(basics.remove(0));
                    }
                    m.add_op(&d.from, inputs, &d.to).map_err(|e| bad(&field, e))?;
                }
                Ok(AnyModule::A(m))
            }
            "DD" => {
                let right = self
                    .algebra_right
                    .as_ref()
                    .ok_or_else(|| bad("algebra_right", "missing"))?
                    .build()?;
                let gens = self.two_sided_generators()?;
                let mut m = TypeDDBimodule::new(algebra.clone(), right.clone(), gens)
                    .map_err(|e| bad("generators", e))?;
                for (i, d) in self.delta.iter().enumerate() {
                    let field = format!("delta[{i}]");
                    if !d.inputs.is_empty() {
                        return Err(bad(&field, "type DD entries take no inputs"));
                    }
                    if d.coeffs.len() != d.coeffs_right.len() {
                        return Err(bad(&field, "coeffs and coeffs_right must pair up"));
                    }
                    for (l, r) in d.coeffs.iter().zip(&d.coeffs_right) {
                        let left = parse_element(&algebra, l).map_err(|e| bad(&field, e))?;
                        let rightc = parse_element(&right, r).map_err(|e| bad(&field, e))?;
                        m.add_delta(&d.from, &left, &rightc, &d.to)
                            .map_err(|e| bad(&field, e))?;
                    }
                }
                Ok(AnyModule::Dd(m))
            }
            "DA" => {
                let right = self
                    .algebra_right
                    .as_ref()
                    .ok_or_else(|| bad("algebra_right", "missing"))?
                    .build()?;
                let gens = self.two_sided_generators()?;
                let mut m = TypeDABimodule::new(algebra.clone(), right.clone(), gens)
                    .map_err(|e| bad("generators", e))?;
                for (i, d) in self.delta.iter().enumerate() {
                    let field = format!("delta[{i}]");
                    if !d.coeffs_right.is_empty() {
                        return Err(bad(&field, "type DA entries use coeffs and inputs"));
                    }
                    let mut inputs = Vec::new();
                    for lit in &d.inputs {
                        let element = parse_element(&right, lit).map_err(|e| bad(&field, e))?;
                        let mut basics = element.decompose();
                        if basics.len() != 1 {
                            return Err(bad(
                                &field,
                                "each input literal must be a single basic generator",
                            ));
                        }
                        inputs.push(basics.remove(0));
                    }
                    for lit in &d.coeffs {
                        let coeff = parse_element(&algebra, lit).map_err(|e| bad(&field, e))?;
                        m.add_delta(&d.from, inputs.clone(), &coeff, &d.to)
                            .map_err(|e| bad(&field, e))?;
                    }
                }
                Ok(AnyModule::Da(m))
            }
            other => Err(bad("side", format!("unknown side {other:?}"))),
        }
    }

    fn build_builtin(&self, name: &str) -> Result<AnyModule, SchemaError> {
        match name {
            "solid_torus_d" => {
                let framing = self.framing.ok_or_else(|| bad("framing", "missing"))?;
                Ok(AnyModule::D(
                    builtin_solid_torus_d(framing).map_err(|e| bad("framing", e))?,
                ))
            }
            "solid_torus_a" => {
                let framing = self.framing.ok_or_else(|| bad("framing", "missing"))?;
                Ok(AnyModule::A(
                    builtin_solid_torus_a(framing).map_err(|e| bad("framing", e))?,
                ))
            }
            "identity_da" => {
                let algebra = self
                    .algebra
                    .as_ref()
                    .ok_or_else(|| bad("algebra", "missing"))?
                    .build()?;
                Ok(AnyModule::Da(identity_da_bimodule(&algebra)))
            }
            other => Err(bad("builtin", format!("unknown builtin {other:?}"))),
        }
    }

    fn one_sided_generators(&self) -> Result<Vec<Generator>, SchemaError> {
        self.generators
            .iter()
            .map(|g| {
                Ok(Generator {
                    name: g.name.clone(),
                    idempotent: g.idempotent.single()?,
                })
            })
            .collect()
    }

    fn two_sided_generators(&self) -> Result<Vec<BiGenerator>, SchemaError> {
        self.generators
            .iter()
            .map(|g| {
                let (left, right) = g.idempotent.two()?;
                Ok(BiGenerator {
                    name: g.name.clone(),
                    left,
                    right,
                })
            })
            .collect()
    }
}

/// Support document for `module solve`:
/// `{"entries": [{"from":..., "coeffs":[...], "to":...}]}`; DD supports add
/// `coeffs_right`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportDoc {
    pub entries: Vec<DeltaDoc>,
}

impl SupportDoc {
    pub fn d_entries(
        &self,
        circle: &PointedMatchedCircle,
    ) -> Result<Vec<(String, ArcAlgebraElement, String)>, SchemaError> {
        let mut out = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            let field = format!("entries[{i}]");
            if !e.inputs.is_empty() || !e.coeffs_right.is_empty() {
                return Err(bad(&field, "type D support entries take coeffs only"));
            }
            for lit in &e.coeffs {
                let coeff = parse_element(circle, lit).map_err(|err| bad(&field, err))?;
                out.push((e.from.clone(), coeff, e.to.clone()));
            }
        }
        Ok(out)
    }
}

/// Diagram document:
/// `{"g":..., "k":..., "arc_endpoints":[[p,q],...], "points":[{"alpha":..., "beta":...}]}`
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub g: usize,
    pub k: usize,
    pub arc_endpoints: Vec<(usize, usize)>,
    pub points: Vec<PointDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub alpha: String,
    pub beta: String,
}

impl DiagramDoc {
    pub fn build(&self) -> Result<BorderedDiagram, SchemaError> {
        BorderedDiagram::new(
            self.g,
            self.k,
            self.arc_endpoints.clone(),
            self.points
                .iter()
                .map(|p| IntersectionPoint {
                    alpha: p.alpha.clone(),
                    beta: p.beta.clone(),
                })
                .collect(),
        )
        .map_err(|e| bad("points", e))
    }
}

/// Algebra piece document for grading checks:
/// `{"circle": <circle doc>, "weight": i}`
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub circle: CircleDoc,
    pub weight: isize,
}

/// Grading document: an intersection form plus per-generator assignments
/// keyed by the canonical representative literal.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradingDoc {
    #[serde(default)]
    pub form: Vec<Vec<i64>>,
    pub assignments: std::collections::BTreeMap<String, GradingValueDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradingValueDoc {
    pub m2: i64,
    #[serde(default)]
    pub h1: Vec<i64>,
}
