//! Averaging over tail classes: the unnormalized sum `E⁰ₙ`, the
//! conditional expectation `Eₙ` onto the `Rₙ`-invariant functions, and the
//! identities they satisfy.
//!
//! Everything here sums directly over enumerated classes. Nothing depends on
//! the matrix model in [`crate::tower`], which uses this module as an
//! independent oracle.

use std::sync::Arc;

use crate::cylinder::CylinderFunction;
use crate::diagram::{BratteliDiagram, FinitePath, Vertex};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Sums `f` over each `Rₙ` class and spreads the sum back over the class.
fn class_sums(f: &CylinderFunction, n: usize, normalize: bool) -> Result<CylinderFunction> {
    let d = f.diagram().clone();
    let m = f.level().max(n);
    let f = f.refine(m)?;
    let part = d.tail_partition(n, m)?;
    let counts = d.path_counts(n)?;
    let mut table = vec![Scalar::zero(); f.table().len()];
    for (c, members) in part.classes().iter().enumerate() {
        let mut sum: Scalar = members.iter().map(|&i| &f.table()[i]).sum();
        if normalize {
            sum = sum.scale(&Rational::from(counts[part.class_vertex(c)]).recip());
        }
        for &i in members {
            table[i] = sum.clone();
        }
    }
    CylinderFunction::from_table(d, m, table)
}

/// `E⁰ₙ(f)(α) = Σ_{β ∈ Rₙ(α)} f(β)`.
pub fn e0n(f: &CylinderFunction, n: usize) -> Result<CylinderFunction> {
    class_sums(f, n, false)
}

/// `Eₙ(f)(α) = E⁰ₙ(f)(α) / #s(αₙ)`.
pub fn en(f: &CylinderFunction, n: usize) -> Result<CylinderFunction> {
    class_sums(f, n, true)
}

/// Closed form `Eₙ(I_γ) = I^{r(γ)} / #r(γ)` for `γ ∈ Ωₙ`.
pub fn en_of_indicator(diagram: Arc<BratteliDiagram>, gamma: &FinitePath) -> Result<CylinderFunction> {
    diagram.check_path(gamma)?;
    let v = gamma.range();
    let count = diagram.path_count(v)?;
    Ok(CylinderFunction::indicator_vertex(diagram, v)?.scale(&Rational::from(count).recip()))
}

/// `Σ_{γ∈Ωₙ} #r(γ) · I_γ · Eₙ(I_γ f)`, which reconstructs `f`.
///
/// This is the quasi-basis expansion with `u_γ = √#r(γ) I_γ` written with
/// the square roots multiplied out.
pub fn quasi_basis_apply(f: &CylinderFunction, n: usize) -> Result<CylinderFunction> {
    let d = f.diagram().clone();
    let level = d.path_level(n)?;
    let counts = d.path_counts(n)?;
    let mut acc = CylinderFunction::zero(d.clone());
    for (i, gamma) in level.paths().iter().enumerate() {
        let ig = CylinderFunction::indicator_path(d.clone(), gamma)?;
        let term = ig.mul(&en(&ig.mul(f)?, n)?)?.scale(&Rational::from(counts[level.terminal(i)]));
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Checks `Σ_{x∈Xᵢ} f(x y) = Σ_{x∈Xᵢ} Eₙ(f)(x y)` for every vertex `vᵢ` of
/// level `n` and every segment `y` from `vᵢ` to level `m`, where `Xᵢ` is
/// the set of rooted paths ending at `vᵢ`.
pub fn star_identity_check(f: &CylinderFunction, n: usize, m: usize) -> Result<bool> {
    let d = f.diagram().clone();
    if n > m {
        return Err(Error::LevelOrder(format!("n = {n} > m = {m}")));
    }
    if f.level() > m {
        return Err(Error::LevelOrder(format!("function level {} > m = {m}", f.level())));
    }
    d.check_level(m)?;
    let lhs_fn = f.refine(m)?;
    let rhs_fn = en(f, n)?.refine(m)?;
    let level_n = d.path_level(n)?;
    for vi in 0..d.vertex_counts()[n] {
        let xs = level_n.block(vi);
        for w in 0..d.vertex_counts()[m] {
            for y in d.enumerate_segments(Vertex::new(n, vi), Vertex::new(m, w))? {
                let mut lhs = Scalar::zero();
                let mut rhs = Scalar::zero();
                for &x in xs {
                    let xy = d.splice_index(n, x, &y.edges)?;
                    lhs += &lhs_fn.table()[xy];
                    rhs += &rhs_fn.table()[xy];
                }
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
