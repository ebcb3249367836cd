//! The finite-dimensional algebras `Aₙ = ⊕_{v∈Vₙ} M_{#v}` and the
//! embeddings `Aₙ ↪ Aₙ₊₁` the diagram determines.
//!
//! Rows and columns of block `v` are the rooted length-`n` paths ending at
//! `v`, in canonical order. The matrix unit `eⁿ_{γ,δ}` is the elementary
//! matrix at `(γ, δ)`; it only exists when `r(γ) = r(δ)`.

use std::fmt;
use std::sync::Arc;

use crate::cylinder::{same_diagram, CylinderFunction};
use crate::diagram::{BratteliDiagram, FinitePath};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Block {
    size: usize,
    data: Vec<Scalar>,
}

impl Block {
    fn zero(size: usize) -> Self {
        Block { size, data: std::iter::repeat_with(Scalar::zero).take(size * size).collect() }
    }

    fn identity(size: usize) -> Self {
        let mut b = Block::zero(size);
        for i in 0..size {
            b.data[i * size + i] = Scalar::one();
        }
        b
    }

    fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.size + j]
    }

    fn set(&mut self, i: usize, j: usize, s: Scalar) {
        self.data[i * self.size + j] = s;
    }

    fn mul(&self, rhs: &Block) -> Block {
        let n = self.size;
        let mut out = Block::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    fn adjoint(&self) -> Block {
        let n = self.size;
        let mut out = Block::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.get(i, j).conj();
            }
        }
        out
    }

    fn trace(&self) -> Scalar {
        (0..self.size).map(|i| self.get(i, i)).sum()
    }
}

/// An element of `Aₙ`.
#[derive(Clone, Debug)]
pub struct AfElement {
    diagram: Arc<BratteliDiagram>,
    level: usize,
    blocks: Vec<Block>,
}

impl AfElement {
    fn with_blocks(diagram: Arc<BratteliDiagram>, level: usize, make: impl Fn(usize) -> Block) -> Result<Self> {
        let sizes = diagram.path_level(level)?.block_sizes();
        diagram.check_entries(sizes.iter().map(|&s| (s * s) as u128).sum())?;
        let blocks = sizes.into_iter().map(make).collect();
        Ok(AfElement { diagram, level, blocks })
    }

    pub fn zero(diagram: Arc<BratteliDiagram>, level: usize) -> Result<Self> {
        AfElement::with_blocks(diagram, level, Block::zero)
    }

    pub fn identity(diagram: Arc<BratteliDiagram>, level: usize) -> Result<Self> {
        AfElement::with_blocks(diagram, level, Block::identity)
    }

    /// Fills every block entry from `entry(vertex, row, column)`.
    pub fn from_fn(
        diagram: Arc<BratteliDiagram>,
        level: usize,
        mut entry: impl FnMut(usize, usize, usize) -> Scalar,
    ) -> Result<Self> {
        let mut x = AfElement::zero(diagram, level)?;
        for (v, block) in x.blocks.iter_mut().enumerate() {
            for i in 0..block.size {
                for j in 0..block.size {
                    block.set(i, j, entry(v, i, j));
                }
            }
        }
        Ok(x)
    }

    /// `eⁿ_{γ,δ}`.
    pub fn matrix_unit(diagram: Arc<BratteliDiagram>, gamma: &FinitePath, delta: &FinitePath) -> Result<Self> {
        if gamma.len() != delta.len() {
            return Err(Error::LevelMismatch { left: gamma.len(), right: delta.len() });
        }
        diagram.check_path(gamma)?;
        diagram.check_path(delta)?;
        let (rg, rd) = (gamma.range(), delta.range());
        if rg != rd {
            return Err(Error::TerminalMismatch { left: rg.index, right: rd.index });
        }
        let n = gamma.len();
        let level = diagram.path_level(n)?;
        let i = level.block_pos(level.index_of(gamma).expect("checked path"));
        let j = level.block_pos(level.index_of(delta).expect("checked path"));
        let mut x = AfElement::zero(diagram, n)?;
        x.blocks[rg.index].set(i, j, Scalar::one());
        Ok(x)
    }

    pub fn diagram(&self) -> &Arc<BratteliDiagram> {
        &self.diagram
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Entry at `(γ, δ)`; zero when the paths end at different vertices.
    pub fn entry(&self, gamma: &FinitePath, delta: &FinitePath) -> Result<Scalar> {
        let level = self.diagram.path_level(self.level)?;
        let find = |p: &FinitePath| level.index_of(p).ok_or_else(|| Error::InvalidPath(p.to_string()));
        let (a, b) = (find(gamma)?, find(delta)?);
        if level.terminal(a) != level.terminal(b) {
            return Ok(Scalar::zero());
        }
        Ok(self.blocks[level.terminal(a)].get(level.block_pos(a), level.block_pos(b)).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.data.iter().all(Scalar::is_zero))
    }

    /// Nonzero entries as `(vertex, row path, column path, value)`.
    pub fn entries(&self) -> Vec<(usize, FinitePath, FinitePath, Scalar)> {
        let level = self.diagram.path_level(self.level).expect("level enumerated at construction");
        let mut out = Vec::new();
        for (v, block) in self.blocks.iter().enumerate() {
            let paths = level.block(v);
            for i in 0..block.size {
                for j in 0..block.size {
                    let s = block.get(i, j);
                    if !s.is_zero() {
                        out.push((v, level.path(paths[i]).clone(), level.path(paths[j]).clone(), s.clone()));
                    }
                }
            }
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if !same_diagram(&self.diagram, &other.diagram) {
            return Err(Error::DiagramMismatch);
        }
        if self.level != other.level {
            return Err(Error::LevelMismatch { left: self.level, right: other.level });
        }
        Ok(())
    }

    fn zip_blocks(&self, other: &Self, op: impl Fn(&Block, &Block) -> Block) -> Result<Self> {
        self.check_compatible(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| op(a, b)).collect();
        Ok(AfElement { diagram: self.diagram.clone(), level: self.level, blocks })
    }

    fn map_entries(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let blocks =
            self.blocks.iter().map(|b| Block { size: b.size, data: b.data.iter().map(&f).collect() }).collect();
        AfElement { diagram: self.diagram.clone(), level: self.level, blocks }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, |a, b| Block {
            size: a.size,
            data: a.data.iter().zip(&b.data).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, |a, b| Block {
            size: a.size,
            data: a.data.iter().zip(&b.data).map(|(x, y)| x - y).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, Block::mul)
    }

    pub fn scalar_mul(&self, c: &Scalar) -> Self {
        self.map_entries(|x| c * x)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map_entries(|x| x.scale(r))
    }

    pub fn adjoint(&self) -> Self {
        let blocks = self.blocks.iter().map(Block::adjoint).collect();
        AfElement { diagram: self.diagram.clone(), level: self.level, blocks }
    }

    /// Trace of each block.
    pub fn block_traces(&self) -> Vec<Scalar> {
        self.blocks.iter().map(Block::trace).collect()
    }

    /// The canonical inclusion `Aₙ ↪ Aₙ₊₁`: entry `(ζε, ηε)` of the image is
    /// entry `(ζ, η)` of `self`, for every edge `ε` leaving `r(ζ)`.
    pub fn embed(&self) -> Result<Self> {
        let d = &self.diagram;
        let n = self.level;
        if n >= d.depth() {
            return Err(Error::DepthExhausted { level: n, depth: d.depth() });
        }
        let from = d.path_level(n)?;
        let to = d.path_level(n + 1)?;
        let mut out = AfElement::zero(self.diagram.clone(), n + 1)?;
        for (w, block) in out.blocks.iter_mut().enumerate() {
            let paths = to.block(w);
            for (i, &a) in paths.iter().enumerate() {
                for (j, &b) in paths.iter().enumerate() {
                    if to.last_edge(a) != to.last_edge(b) {
                        continue;
                    }
                    let (za, zb) = (to.parent(a), to.parent(b));
                    let v = from.terminal(za);
                    block.set(i, j, self.blocks[v].get(from.block_pos(za), from.block_pos(zb)).clone());
                }
            }
        }
        Ok(out)
    }

    /// Image in `Aₘ` under the composed inclusions.
    pub fn embed_to(&self, m: usize) -> Result<Self> {
        if m < self.level {
            return Err(Error::LevelOrder(format!("cannot embed level {} into level {m}", self.level)));
        }
        self.diagram.check_level(m)?;
        let mut x = self.clone();
        while x.level < m {
            x = x.embed()?;
        }
        Ok(x)
    }
}

impl PartialEq for AfElement {
    fn eq(&self, other: &Self) -> bool {
        self.check_compatible(other).is_ok() && self.blocks == other.blocks
    }
}

impl fmt::Display for AfElement {
    /// Per block, the nonzero `(row, column, value)` entries.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries = self.entries();
        for v in 0..self.blocks.len() {
            if v > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "block {v}:")?;
            for (_, r, c, s) in entries.iter().filter(|e| e.0 == v) {
                write!(f, " ({r},{c},{s})")?;
            }
        }
        Ok(())
    }
}

/// `ρ(f) = Σ_{γ∈Ωₘ} f(γ) eᵐ_{γ,γ}` for a cylinder function of level `m`.
pub fn represent_cylinder(f: &CylinderFunction) -> Result<AfElement> {
    let d = f.diagram().clone();
    let m = f.level();
    let level = d.path_level(m)?;
    let mut x = AfElement::zero(d.clone(), m)?;
    for (i, value) in f.table().iter().enumerate() {
        let p = level.block_pos(i);
        x.blocks[level.terminal(i)].set(p, p, value.clone());
    }
    Ok(x)
}

/// `ρ` applied at a chosen level `m ≥ level(f)`.
pub fn represent_cylinder_at(f: &CylinderFunction, m: usize) -> Result<AfElement> {
    represent_cylinder(&f.refine(m)?)
}

/// Image in `Aₘ` of `eₙ = Σ_{r(γ)=r(δ)} #r(γ)⁻¹ eⁿ_{γ,δ}`.
pub fn jones_projection(diagram: Arc<BratteliDiagram>, n: usize, m: usize) -> Result<AfElement> {
    if n > m {
        return Err(Error::LevelOrder(format!("e_{n} has no image in A_{m}")));
    }
    diagram.check_level(m)?;
    let sizes = diagram.path_level(n)?.block_sizes();
    let e = AfElement::from_fn(diagram, n, |v, _, _| Scalar::real(Rational::from(sizes[v] as u64).recip()))?;
    e.embed_to(m)
}

/// `#r(γ) · ρ(I_γ) · eₙ · ρ(I_δ)` computed in `Aₘ`.
///
/// Equals the embedded matrix unit when `r(γ) = r(δ)` and vanishes
/// otherwise.
pub fn toeplitz_word(
    diagram: Arc<BratteliDiagram>,
    gamma: &FinitePath,
    delta: &FinitePath,
    m: usize,
) -> Result<AfElement> {
    if gamma.len() != delta.len() {
        return Err(Error::LevelMismatch { left: gamma.len(), right: delta.len() });
    }
    let n = gamma.len();
    let count = diagram.path_count(gamma.range())?;
    let left = represent_cylinder_at(&CylinderFunction::indicator_path(diagram.clone(), gamma)?, m)?;
    let right = represent_cylinder_at(&CylinderFunction::indicator_path(diagram.clone(), delta)?, m)?;
    let e = jones_projection(diagram, n, m)?;
    Ok(left.mul(&e)?.mul(&right)?.scale(&Rational::from(count)))
}

/// Checks `eₙ = Σ_{γ∈Ωₙ₊₁} (#r(γ)/#r(γ')²) · ^{γₙ}I · eₙ₊₁ · ^{γₙ}I` in `Aₘ`,
/// where `γ'` is `γ` without its last edge.
pub fn en_refinement_check(diagram: Arc<BratteliDiagram>, n: usize, m: usize) -> Result<bool> {
    if n + 1 > m {
        return Err(Error::LevelOrder(format!("need n + 1 <= m, got n = {n}, m = {m}")));
    }
    diagram.check_level(m)?;
    let next = jones_projection(diagram.clone(), n + 1, m)?;
    let mut sum = AfElement::zero(diagram.clone(), m)?;
    for gamma in diagram.enumerate_paths(n + 1)? {
        let last = *gamma.edges().last().expect("length n + 1 >= 1");
        let r_gamma = Rational::from(diagram.path_count(gamma.range())?);
        let r_prefix = Rational::from(diagram.path_count(last.source_vertex())?);
        let coeff = &r_gamma / &(&r_prefix * &r_prefix);
        let edge = represent_cylinder_at(&CylinderFunction::indicator_edge(diagram.clone(), last)?, m)?;
        sum = sum.add(&edge.mul(&next)?.mul(&edge)?.scale(&coeff))?;
    }
    Ok(sum == jones_projection(diagram, n, m)?)
}

/// `(#v)_{v∈Vₙ}` and `dim Aₙ = Σ #v²`.
pub fn dimension_vector(diagram: &BratteliDiagram, n: usize) -> Result<(Vec<u64>, u128)> {
    let counts = diagram.path_counts(n)?;
    let dim = counts.iter().map(|&c| (c as u128) * (c as u128)).sum();
    Ok((counts, dim))
}

/// How many times block `v` of `Aₙ` sits inside block `w` of `Aₙ₊₁`,
/// read off from the embedding: the trace of block `w` of the image of a
/// minimal projection of block `v`.
pub fn block_multiplicities(diagram: Arc<BratteliDiagram>, n: usize) -> Result<Vec<Vec<u64>>> {
    let level = diagram.path_level(n)?;
    let mut out = Vec::with_capacity(level.blocks().len());
    for block in level.blocks() {
        let Some(&first) = block.first() else {
            out.push(vec![0; diagram.vertex_count(n + 1)?]);
            continue;
        };
        let p = level.path(first);
        let image = AfElement::matrix_unit(diagram.clone(), p, p)?.embed()?;
        let row = image
            .block_traces()
            .iter()
            .map(|t| {
                debug_assert!(t.is_real() && t.re().is_integer());
                u64::try_from(t.re().numer()).expect("trace of a projection is a natural number")
            })
            .collect();
        out.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Builtin;
    use crate::expectation::en;

    fn diagram(b: Builtin, depth: usize) -> Arc<BratteliDiagram> {
        Arc::new(b.diagram(depth).unwrap())
    }

    fn path(s: &str) -> FinitePath {
        s.parse().unwrap()
    }

    #[test]
    fn matrix_unit_rejects_distinct_ranges() {
        let d = diagram(Builtin::Pascal, 3);
        let err = AfElement::matrix_unit(d, &path("0>0#0"), &path("0>1#0")).unwrap_err();
        assert!(matches!(err, Error::TerminalMismatch { .. }));
    }

    #[test]
    fn car_embedding_of_off_diagonal_unit() {
        let d = diagram(Builtin::Car, 2);
        let (a, b) = (path("0>0#0"), path("0>0#1"));
        let x = AfElement::matrix_unit(d.clone(), &a, &b).unwrap().embed().unwrap();
        let expected = AfElement::matrix_unit(d.clone(), &path("0>0#0;0>0#0"), &path("0>0#1;0>0#0"))
            .unwrap()
            .add(&AfElement::matrix_unit(d.clone(), &path("0>0#0;0>0#1"), &path("0>0#1;0>0#1")).unwrap())
            .unwrap();
        assert_eq!(x, expected);
    }

    #[test]
    fn unit_maps_to_unit() {
        let d = diagram(Builtin::Car, 3);
        let root = FinitePath::empty();
        let e0 = AfElement::matrix_unit(d.clone(), &root, &root).unwrap();
        assert_eq!(e0, AfElement::identity(d.clone(), 0).unwrap());
        assert_eq!(e0.embed_to(2).unwrap(), AfElement::identity(d.clone(), 2).unwrap());
        assert_eq!(e0.embed_to(0).unwrap(), e0);
        assert!(e0.embed_to(4).is_err());
        assert!(matches!(AfElement::identity(d, 3).unwrap().embed(), Err(Error::DepthExhausted { .. })));
    }

    #[test]
    fn car_jones_projection() {
        let d = diagram(Builtin::Car, 3);
        let e1 = jones_projection(d.clone(), 1, 1).unwrap();
        assert_eq!(e1.entries().len(), 4);
        assert!(e1.entries().iter().all(|(_, _, _, s)| *s == Scalar::ratio(1, 2)));
        assert_eq!(e1.mul(&e1).unwrap(), e1);
        assert_eq!(jones_projection(d.clone(), 0, 3).unwrap(), AfElement::identity(d.clone(), 3).unwrap());
        let e2 = jones_projection(d.clone(), 2, 3).unwrap();
        let e1 = jones_projection(d.clone(), 1, 3).unwrap();
        assert_eq!(e1.mul(&e2).unwrap(), e2);
        assert_eq!(e2.mul(&e1).unwrap(), e2);
    }

    #[test]
    fn toeplitz_words_and_zero_cases() {
        let d = diagram(Builtin::Fibonacci, 3);
        let (g, h) = (path("0>0#0;0>1#0"), path("0>0#0;0>0#0"));
        assert_ne!(g.range(), h.range());
        assert!(toeplitz_word(d.clone(), &g, &h, 2).unwrap().is_zero());
        assert!(toeplitz_word(d.clone(), &g, &h, 3).unwrap().is_zero());

        let car = diagram(Builtin::Car, 2);
        let a = path("0>0#0");
        assert_eq!(
            toeplitz_word(car.clone(), &a, &a, 1).unwrap(),
            AfElement::matrix_unit(car.clone(), &a, &a).unwrap()
        );
        let root = FinitePath::empty();
        assert_eq!(toeplitz_word(car.clone(), &root, &root, 0).unwrap(), AfElement::identity(car, 0).unwrap());
    }

    #[test]
    fn refinement_of_projections() {
        assert!(en_refinement_check(diagram(Builtin::Car, 1), 0, 1).unwrap());
        assert!(en_refinement_check(diagram(Builtin::Pascal, 2), 1, 2).unwrap());
        assert!(en_refinement_check(diagram(Builtin::Fibonacci, 3), 1, 3).unwrap());
        assert!(en_refinement_check(diagram(Builtin::Car, 2), 1, 1).is_err());
    }

    #[test]
    fn dimensions() {
        let car = Builtin::Car.diagram(3).unwrap();
        assert_eq!(dimension_vector(&car, 3).unwrap(), (vec![8], 64));
        let pascal = Builtin::Pascal.diagram(3).unwrap();
        assert_eq!(dimension_vector(&pascal, 3).unwrap(), (vec![1, 3, 3, 1], 20));
        assert_eq!(dimension_vector(&pascal, 0).unwrap(), (vec![1], 1));
    }

    #[test]
    fn realized_multiplicities_are_incidence() {
        for b in Builtin::ALL {
            let d = diagram(b, 4);
            for n in 0..4 {
                assert_eq!(&block_multiplicities(d.clone(), n).unwrap(), d.incidence(n).unwrap());
            }
        }
    }

    #[test]
    fn toeplitz_conditional_expectation_relation() {
        let d = diagram(Builtin::Pascal, 3);
        let f = CylinderFunction::from_fn(d.clone(), 3, |i, _| Scalar::from_int(i as i64 * 3 % 5 - 2)).unwrap();
        for n in 0..=3 {
            let e = jones_projection(d.clone(), n, 3).unwrap();
            let lhs = e.mul(&represent_cylinder(&f).unwrap()).unwrap().mul(&e).unwrap();
            let rhs = represent_cylinder_at(&en(&f, n).unwrap(), 3).unwrap().mul(&e).unwrap();
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }
}
