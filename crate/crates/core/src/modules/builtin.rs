//! Built-in torus-boundary pieces.
//!
//! The solid-torus family is indexed by an integer framing counted as the
//! unsigned twist distance from the meridian filling: `framing 0` is the
//! meridian, and gluing the dual of framing `n` against framing `m` yields
//! the lens-space family with homology rank `|n| - |m|` in absolute value
//! (rank 2 when the framings agree, the product of a circle with a sphere).
//! The tables were pinned down by the generator data plus the condition
//! `d^2 = 0`, then validated through the gluing checkpoints and frozen here.

use crate::arcalg::{self, ArcAlgebraElement};
use crate::pmc::{torus_circle, PointedMatchedCircle};
use crate::strands::StrandDiagram;

use super::{AInfModule, BiGenerator, Generator, Idempotent, ModuleError, TypeDABimodule,
            TypeDStructure};

const FRAMING_GUARD: i64 = 16;

/// The weight-one chord class from `from` to `to` on the torus circle.
fn rho(circle: &PointedMatchedCircle, from: usize, to: usize) -> ArcAlgebraElement {
    arcalg::a_map(
        circle,
        &StrandDiagram::new(circle.num_points(), vec![(from, to)]),
    )
}

/// The type D invariant of the solid torus with the given framing.
///
/// Framing 0 is a single generator with vanishing differential. Framing
/// `n != 0` is a chain of `|n| + 1` generators: one in the idempotent of the
/// first matched pair feeding both ends of a chain in the second.
pub fn builtin_solid_torus_d(framing: i64) -> Result<TypeDStructure, ModuleError> {
    if framing.abs() > FRAMING_GUARD {
        return Err(ModuleError::SizeLimit(format!(
            "framing {framing} exceeds the guard {FRAMING_GUARD}"
        )));
    }
    let circle = torus_circle();
    let m = framing.unsigned_abs() as usize;
    if m == 0 {
        let generators = vec![Generator {
            name: "m0".into(),
            idempotent: Idempotent::from_pairs([0]),
        }];
        return TypeDStructure::new(circle, generators);
    }
    let mut generators = vec![Generator {
        name: "a".into(),
        idempotent: Idempotent::from_pairs([0]),
    }];
    for i in 1..=m {
        generators.push(Generator {
            name: format!("b{i}"),
            idempotent: Idempotent::from_pairs([1]),
        });
    }
    let mut module = TypeDStructure::new(circle.clone(), generators)?;
    module.add_delta("a", &rho(&circle, 1, 2), "b1")?;
    module.add_delta("a", &rho(&circle, 3, 4), &format!("b{m}"))?;
    for i in 1..m {
        module.add_delta(&format!("b{}", i + 1), &rho(&circle, 2, 4), &format!("b{i}"))?;
    }
    Ok(module)
}

/// The A-side invariant of the same solid torus, realized as the morphism
/// dual of the type D invariant.
pub fn builtin_solid_torus_a(framing: i64) -> Result<AInfModule, ModuleError> {
    Ok(builtin_solid_torus_d(framing)?.dual())
}

/// The identity DA bimodule of a circle: one generator per idempotent, with
/// `delta_2` feeding every non-idempotent basic generator straight through.
pub fn identity_da_bimodule(circle: &PointedMatchedCircle) -> TypeDABimodule {
    let pair_count = circle.pairs().len();
    let mut generators = Vec::new();
    for mask in 0..(1u64 << pair_count) {
        let pairs: Vec<usize> = (0..pair_count).filter(|i| mask & (1 << i) != 0).collect();
        let idem = Idempotent::from_pairs(pairs.iter().copied());
        let label: Vec<String> = pairs.iter().map(|p| p.to_string()).collect();
        generators.push(BiGenerator {
            name: format!("e[{}]", label.join(",")),
            left: idem.clone(),
            right: idem,
        });
    }
    let mut bimodule = TypeDABimodule::new(circle.clone(), circle.clone(), generators.clone())
        .expect("generator names are unique");
    for b in arcalg::full_basis(circle) {
        if b.is_idempotent() {
            continue;
        }
        let from = generators
            .iter()
            .find(|g| g.right.0 == b.source_pairs())
            .expect("every pair subset is a generator")
            .name
            .clone();
        let to = generators
            .iter()
            .find(|g| g.right.0 == b.target_pairs())
            .expect("every pair subset is a generator")
            .name
            .clone();
        bimodule
            .add_delta(&from, vec![b.clone()], b.element(), &to)
            .expect("identity entries are compatible");
    }
    bimodule
}
