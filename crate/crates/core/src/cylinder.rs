//! Functions on the infinite path space that depend only on the first `m`
//! edges, stored as dense tables over `Ω_m`.

use std::fmt;
use std::sync::Arc;

use crate::diagram::{BratteliDiagram, Edge, FinitePath, Vertex};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

pub(crate) fn same_diagram(a: &Arc<BratteliDiagram>, b: &Arc<BratteliDiagram>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Debug)]
pub struct CylinderFunction {
    diagram: Arc<BratteliDiagram>,
    level: usize,
    table: Vec<Scalar>,
}

impl CylinderFunction {
    /// Wraps a table indexed by `Ω_level` in canonical order.
    pub fn from_table(diagram: Arc<BratteliDiagram>, level: usize, table: Vec<Scalar>) -> Result<Self> {
        let expected = diagram.path_level(level)?.len();
        if table.len() != expected {
            return Err(Error::Shape(format!("table has {} entries, Ω_{level} has {expected}", table.len())));
        }
        Ok(CylinderFunction { diagram, level, table })
    }

    pub fn from_fn(
        diagram: Arc<BratteliDiagram>,
        level: usize,
        mut f: impl FnMut(usize, &FinitePath) -> Scalar,
    ) -> Result<Self> {
        let table = diagram.path_level(level)?.paths().iter().enumerate().map(|(i, p)| f(i, p)).collect();
        Ok(CylinderFunction { diagram, level, table })
    }

    pub fn constant(diagram: Arc<BratteliDiagram>, c: Scalar) -> Self {
        CylinderFunction { diagram, level: 0, table: vec![c] }
    }

    pub fn one(diagram: Arc<BratteliDiagram>) -> Self {
        CylinderFunction::constant(diagram, Scalar::one())
    }

    pub fn zero(diagram: Arc<BratteliDiagram>) -> Self {
        CylinderFunction::constant(diagram, Scalar::zero())
    }

    /// `I_γ`: one on the paths beginning with `γ`.
    pub fn indicator_path(diagram: Arc<BratteliDiagram>, gamma: &FinitePath) -> Result<Self> {
        diagram.check_path(gamma)?;
        let level = gamma.len();
        let idx = diagram.path_level(level)?.index_of(gamma).ok_or_else(|| Error::InvalidPath(gamma.to_string()))?;
        CylinderFunction::from_fn(diagram, level, |i, _| if i == idx { Scalar::one() } else { Scalar::zero() })
    }

    /// `I^v`: one on the paths passing through `v`.
    pub fn indicator_vertex(diagram: Arc<BratteliDiagram>, v: Vertex) -> Result<Self> {
        diagram.check_vertex(v)?;
        let level = diagram.path_level(v.level)?;
        let table = (0..level.len()).map(|i| indicator(level.terminal(i) == v.index)).collect();
        Ok(CylinderFunction { diagram, level: v.level, table })
    }

    /// `^εI`: one on the paths whose edge at level `ε.level` is `ε`.
    pub fn indicator_edge(diagram: Arc<BratteliDiagram>, edge: Edge) -> Result<Self> {
        diagram.check_level(edge.level + 1)?;
        if edge.source >= diagram.vertex_counts()[edge.level]
            || edge.range >= diagram.vertex_counts()[edge.level + 1]
            || edge.copy as u64 >= diagram.multiplicity(edge.level, edge.source, edge.range)
        {
            return Err(Error::InvalidPath(format!("edge {edge} at level {} is not in the diagram", edge.level)));
        }
        CylinderFunction::from_fn(diagram, edge.level + 1, |_, p| indicator(p.edges().last() == Some(&edge)))
    }

    pub fn diagram(&self) -> &Arc<BratteliDiagram> {
        &self.diagram
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn table(&self) -> &[Scalar] {
        &self.table
    }

    /// Same function tabulated over `Ω_m` for `m ≥ level`.
    pub fn refine(&self, m: usize) -> Result<Self> {
        if m < self.level {
            return Err(Error::LevelOrder(format!("cannot refine level {} down to {m}", self.level)));
        }
        if m == self.level {
            return Ok(self.clone());
        }
        let d = &self.diagram;
        let size = d.path_level(m)?.len();
        let table = (0..size)
            .map(|i| d.prefix_index(m, i, self.level).map(|p| self.table[p].clone()))
            .collect::<Result<_>>()?;
        Ok(CylinderFunction { diagram: self.diagram.clone(), level: m, table })
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self> {
        if !same_diagram(&self.diagram, &other.diagram) {
            return Err(Error::DiagramMismatch);
        }
        let m = self.level.max(other.level);
        let (a, b) = (self.refine(m)?, other.refine(m)?);
        let table = a.table.iter().zip(&b.table).map(|(x, y)| op(x, y)).collect();
        Ok(CylinderFunction { diagram: self.diagram.clone(), level: m, table })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x * y)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        CylinderFunction { diagram: self.diagram.clone(), level: self.level, table: self.table.iter().map(f).collect() }
    }

    pub fn scalar_mul(&self, c: &Scalar) -> Self {
        self.map(|x| c * x)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|x| x.scale(r))
    }

    pub fn conjugate(&self) -> Self {
        self.map(Scalar::conj)
    }

    /// Value on any infinite path beginning with `gamma`.
    pub fn eval(&self, gamma: &FinitePath) -> Result<Scalar> {
        if gamma.len() < self.level {
            return Err(Error::PathTooShort { len: gamma.len(), level: self.level });
        }
        self.diagram.check_path(gamma)?;
        let prefix = gamma.prefix(self.level);
        let idx = self
            .diagram
            .path_level(self.level)?
            .index_of(&prefix)
            .ok_or_else(|| Error::InvalidPath(prefix.to_string()))?;
        Ok(self.table[idx].clone())
    }

    /// Value at path `idx` of `Ω_m`, `m ≥ level`.
    pub fn eval_index(&self, m: usize, idx: usize) -> Result<Scalar> {
        Ok(self.table[self.diagram.prefix_index(m, idx, self.level)?].clone())
    }

    /// Whether `f` is constant on every `R_n` class.
    pub fn is_invariant(&self, n: usize) -> Result<bool> {
        let m = self.level.max(n);
        let f = self.refine(m)?;
        let part = self.diagram.tail_partition(n, m)?;
        Ok(part.classes().iter().all(|c| c.iter().all(|&i| f.table[i] == f.table[c[0]])))
    }

    /// `‖f‖∞²`.
    pub fn sup_norm_sq(&self) -> Rational {
        self.table.iter().map(Scalar::norm_sq).max().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(Scalar::is_zero)
    }

    /// `(path, value)` pairs in canonical order.
    pub fn entries(&self) -> Vec<(FinitePath, Scalar)> {
        let level = self.diagram.path_level(self.level).expect("level was enumerated at construction");
        level.paths().iter().cloned().zip(self.table.iter().cloned()).collect()
    }
}

fn indicator(b: bool) -> Scalar {
    if b {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}

impl PartialEq for CylinderFunction {
    /// Pointwise equality, decided after refining both to a common level.
    fn eq(&self, other: &Self) -> bool {
        if !same_diagram(&self.diagram, &other.diagram) {
            return false;
        }
        let m = self.level.max(other.level);
        match (self.refine(m), other.refine(m)) {
            (Ok(a), Ok(b)) => a.table == b.table,
            _ => false,
        }
    }
}

impl fmt::Display for CylinderFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, s)) in self.entries().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "({p},{s})")?;
        }
        Ok(())
    }
}
