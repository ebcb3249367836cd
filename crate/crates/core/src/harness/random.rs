//! Seeded random test data.
//!
//! Real and imaginary parts have integer numerators in `[-9, 9]` and
//! denominators in `{1, 2, 3, 4}`.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cylinder::CylinderFunction;
use crate::diagram::BratteliDiagram;
use crate::error::Result;
use crate::groupoid::GroupoidFunction;
use crate::scalar::{Rational, Scalar};
use crate::tower::AfElement;

pub const RNG_NAME: &str = "chacha8";

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.random_range(-9..=9), rng.random_range(1..=4))
}

pub fn random_scalar(rng: &mut impl Rng) -> Scalar {
    Scalar::new(random_rational(rng), random_rational(rng))
}

/// Real scalar with nonnegative value.
pub fn random_nonnegative(rng: &mut impl Rng) -> Scalar {
    Scalar::real(Rational::new(rng.random_range(0..=9), rng.random_range(1..=4)))
}

pub fn random_cylinder(diagram: &Arc<BratteliDiagram>, level: usize, rng: &mut impl Rng) -> Result<CylinderFunction> {
    CylinderFunction::from_fn(diagram.clone(), level, |_, _| random_scalar(rng))
}

pub fn random_element(diagram: &Arc<BratteliDiagram>, level: usize, rng: &mut impl Rng) -> Result<AfElement> {
    AfElement::from_fn(diagram.clone(), level, |_, _, _| random_scalar(rng))
}

/// Random values on every `R_support`-admissible pair of `Ω_table_level`.
pub fn random_groupoid(
    diagram: &Arc<BratteliDiagram>,
    support: usize,
    table_level: usize,
    rng: &mut impl Rng,
) -> Result<GroupoidFunction> {
    let part = diagram.tail_partition(support, table_level)?;
    let level = diagram.path_level(table_level)?;
    let mut values = Vec::new();
    for class in part.classes() {
        for &i in class {
            for &j in class {
                values.push((level.path(i).clone(), level.path(j).clone(), random_scalar(rng)));
            }
        }
    }
    GroupoidFunction::from_entries(diagram.clone(), support, table_level, values)
}
