//! Functions on the tail-equivalence relation and their convolution.
//!
//! A [`GroupoidFunction`] with support level `n` and table level `m` is a
//! function `F(α, β)` on pairs of infinite paths that vanishes unless
//! `α ~ₙ β`, and otherwise depends only on the length-`m` prefixes. It is
//! stored sparsely: only nonzero values on admissible prefix pairs.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::cylinder::{same_diagram, CylinderFunction};
use crate::diagram::{BratteliDiagram, FinitePath};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::tower::AfElement;

#[derive(Clone, Debug)]
pub struct GroupoidFunction {
    diagram: Arc<BratteliDiagram>,
    support: usize,
    table_level: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

/// Whether paths `i, j ∈ Ω_m` are `Rₙ`-equivalent.
fn admissible(d: &BratteliDiagram, n: usize, m: usize, i: usize, j: usize) -> Result<bool> {
    let level = d.path_level(m)?;
    if n == m {
        return Ok(level.terminal(i) == level.terminal(j));
    }
    Ok(level.path(i).edges()[n..] == level.path(j).edges()[n..])
}

/// Outcome of [`vanishing_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Vanishing {
    /// Every product vanished and the function is zero.
    Zero,
    /// A path `η` with `F ★ I_η ★ ěₙ ≠ 0`.
    Witness(FinitePath),
}

impl GroupoidFunction {
    fn check_levels(d: &BratteliDiagram, support: usize, table_level: usize) -> Result<()> {
        d.check_level(table_level)?;
        if support > table_level {
            return Err(Error::LevelOrder(format!("support level {support} > table level {table_level}")));
        }
        Ok(())
    }

    pub fn zero(diagram: Arc<BratteliDiagram>, support: usize, table_level: usize) -> Result<Self> {
        GroupoidFunction::check_levels(&diagram, support, table_level)?;
        Ok(GroupoidFunction { diagram, support, table_level, entries: BTreeMap::new() })
    }

    /// Builds from `(γ, δ, value)` triples of length-`table_level` paths.
    pub fn from_entries(
        diagram: Arc<BratteliDiagram>,
        support: usize,
        table_level: usize,
        values: impl IntoIterator<Item = (FinitePath, FinitePath, Scalar)>,
    ) -> Result<Self> {
        let mut f = GroupoidFunction::zero(diagram.clone(), support, table_level)?;
        let level = diagram.path_level(table_level)?;
        for (g, h, s) in values {
            let find = |p: &FinitePath| level.index_of(p).ok_or_else(|| Error::InvalidPath(p.to_string()));
            let (i, j) = (find(&g)?, find(&h)?);
            if !admissible(&diagram, support, table_level, i, j)? {
                return Err(Error::InvalidPath(format!("({g}, {h}) is not in R_{support}")));
            }
            f.insert(i, j, s);
        }
        Ok(f)
    }

    fn insert(&mut self, i: usize, j: usize, s: Scalar) {
        if s.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), s);
        }
    }

    fn accumulate(&mut self, i: usize, j: usize, s: &Scalar) {
        let sum = match self.entries.get(&(i, j)) {
            Some(old) => old + s,
            None => s.clone(),
        };
        self.insert(i, j, sum);
    }

    /// `f` on the diagonal `{(α, α)}`.
    pub fn diag(f: &CylinderFunction) -> Self {
        let entries =
            f.table().iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(i, s)| ((i, i), s.clone())).collect();
        GroupoidFunction { diagram: f.diagram().clone(), support: 0, table_level: f.level(), entries }
    }

    /// `ěₙ(α, β) = 1/#s(αₙ)` on `Rₙ`, tabulated at level `n`.
    pub fn check_en(diagram: Arc<BratteliDiagram>, n: usize) -> Result<Self> {
        let level = diagram.path_level(n)?;
        diagram.check_entries(level.block_sizes().iter().map(|&s| (s * s) as u128).sum())?;
        let mut entries = BTreeMap::new();
        for block in level.blocks() {
            let value = Scalar::real(Rational::from(block.len() as u64).recip());
            for &i in block {
                for &j in block {
                    entries.insert((i, j), value.clone());
                }
            }
        }
        Ok(GroupoidFunction { diagram, support: n, table_level: n, entries })
    }

    pub fn diagram(&self) -> &Arc<BratteliDiagram> {
        &self.diagram
    }

    pub fn support_level(&self) -> usize {
        self.support
    }

    pub fn table_level(&self) -> usize {
        self.table_level
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Value at a pair of length-`table_level` paths.
    pub fn value(&self, gamma: &FinitePath, delta: &FinitePath) -> Result<Scalar> {
        let level = self.diagram.path_level(self.table_level)?;
        let find = |p: &FinitePath| level.index_of(p).ok_or_else(|| Error::InvalidPath(p.to_string()));
        let key = (find(gamma)?, find(delta)?);
        Ok(self.entries.get(&key).cloned().unwrap_or_default())
    }

    /// Nonzero `(γ, δ, value)` triples.
    pub fn entries(&self) -> Vec<(FinitePath, FinitePath, Scalar)> {
        let level = self.diagram.path_level(self.table_level).expect("level enumerated at construction");
        self.entries.iter().map(|(&(i, j), s)| (level.path(i).clone(), level.path(j).clone(), s.clone())).collect()
    }

    /// Whether every nonzero value sits on an `Rₙ`-admissible pair.
    pub fn is_supported_in(&self, n: usize) -> Result<bool> {
        if n >= self.support {
            return Ok(true);
        }
        for &(i, j) in self.entries.keys() {
            if !admissible(&self.diagram, n, self.table_level, i, j)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The same function viewed with support level `n ≥ support` and table
    /// level `m ≥ table_level`.
    pub fn widen(&self, n: usize, m: usize) -> Result<Self> {
        if n < self.support || m < self.table_level || n > m {
            return Err(Error::LevelOrder(format!(
                "cannot widen ({}, {}) to ({n}, {m})",
                self.support, self.table_level
            )));
        }
        let d = &self.diagram;
        d.check_level(m)?;
        if m == self.table_level {
            return Ok(GroupoidFunction { support: n, ..self.clone() });
        }
        let fine = d.path_level(m)?;
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); d.path_level(self.table_level)?.len()];
        for a in 0..fine.len() {
            children[d.prefix_index(m, a, self.table_level)?].push(a);
        }
        let mut entries = BTreeMap::new();
        for (&(i, j), s) in &self.entries {
            for &a in &children[i] {
                let b = d.splice_index(self.table_level, j, &fine.path(a).edges()[self.table_level..])?;
                entries.insert((a, b), s.clone());
            }
        }
        Ok(GroupoidFunction { diagram: self.diagram.clone(), support: n, table_level: m, entries })
    }

    /// Both operands at the larger table level, borrowed when already
    /// there, with the larger support level.
    fn common<'a>(&'a self, other: &'a Self) -> Result<(Cow<'a, Self>, Cow<'a, Self>, usize)> {
        if !same_diagram(&self.diagram, &other.diagram) {
            return Err(Error::DiagramMismatch);
        }
        let m = self.table_level.max(other.table_level);
        let at = |f: &'a Self| -> Result<Cow<'a, Self>> {
            if f.table_level == m {
                Ok(Cow::Borrowed(f))
            } else {
                Ok(Cow::Owned(f.widen(f.support, m)?))
            }
        };
        Ok((at(self)?, at(other)?, self.support.max(other.support)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b, n) = self.common(other)?;
        let mut out = a.into_owned();
        out.support = n;
        for (&(i, j), s) in &b.entries {
            out.accumulate(i, j, s);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scalar_mul(&Scalar::from_int(-1)))
    }

    pub fn scalar_mul(&self, c: &Scalar) -> Self {
        let mut out = GroupoidFunction { entries: BTreeMap::new(), ..self.clone() };
        for (&(i, j), s) in &self.entries {
            out.insert(i, j, c * s);
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.scalar_mul(&Scalar::real(r.clone()))
    }

    /// `(F ★ G)(α, β) = Σ_γ F(α, γ) G(γ, β)` over the class of `β`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        let (a, b, n) = self.common(other)?;
        let mut out = GroupoidFunction::zero(self.diagram.clone(), n, a.table_level)?;
        for (&(i, k), x) in &a.entries {
            for (&(_, j), y) in b.entries.range((k, 0)..(k + 1, 0)) {
                out.accumulate(i, j, &(x * y));
            }
        }
        Ok(out)
    }

    /// `F*(α, β) = conj(F(β, α))`.
    pub fn involution(&self) -> Self {
        let entries = self.entries.iter().map(|(&(i, j), s)| ((j, i), s.conj())).collect();
        GroupoidFunction { entries, ..self.clone() }
    }
}

impl PartialEq for GroupoidFunction {
    /// Equality as functions on the relation, after widening to a common
    /// support and table level.
    fn eq(&self, other: &Self) -> bool {
        match self.common(other) {
            Ok((a, b, _)) => a.entries == b.entries,
            Err(_) => false,
        }
    }
}

impl fmt::Display for GroupoidFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R_{}@{}:", self.support, self.table_level)?;
        for (g, h, s) in self.entries() {
            write!(f, " ({g},{h},{s})")?;
        }
        Ok(())
    }
}

/// `ψ(eⁿ_{γ,δ}) = #r(γ) · I_γ ★ ěₙ ★ I_δ`, extended linearly to `Aₙ`.
pub fn psi(x: &AfElement) -> Result<GroupoidFunction> {
    let d = x.diagram().clone();
    let n = x.level();
    let check = GroupoidFunction::check_en(d.clone(), n)?;
    let counts = d.path_counts(n)?;
    let mut acc = GroupoidFunction::zero(d.clone(), n, n)?;
    for (v, gamma, delta, s) in x.entries() {
        let left = GroupoidFunction::diag(&CylinderFunction::indicator_path(d.clone(), &gamma)?);
        let right = GroupoidFunction::diag(&CylinderFunction::indicator_path(d.clone(), &delta)?);
        let word = left.convolve(&check)?.convolve(&right)?;
        let coeff = s.scale(&Rational::from(counts[v]));
        for (&(i, j), w) in &word.entries {
            acc.accumulate(i, j, &(w * &coeff));
        }
    }
    Ok(acc)
}

/// Kernel test behind the vanishing of redundancies: computes
/// `F ★ I_η ★ ěₙ` for every `η ∈ Ω_m`, where `n` is the support level of
/// `F`. Returns the first `η` giving a nonzero product, or
/// [`Vanishing::Zero`] when all vanish and `F = 0`. All products vanishing
/// for a nonzero `F` is reported as [`Error::KernelLemma`].
pub fn vanishing_check(f: &GroupoidFunction, m: usize) -> Result<Vanishing> {
    let d = f.diagram().clone();
    if m < f.table_level() {
        return Err(Error::LevelOrder(format!("m = {m} below table level {}", f.table_level())));
    }
    let n = f.support_level();
    let check = GroupoidFunction::check_en(d.clone(), n)?;
    for eta in d.enumerate_paths(m)? {
        let peak = GroupoidFunction::diag(&CylinderFunction::indicator_path(d.clone(), &eta)?);
        if !f.convolve(&peak)?.convolve(&check)?.is_zero() {
            return Ok(Vanishing::Witness(eta));
        }
    }
    if f.is_zero() {
        Ok(Vanishing::Zero)
    } else {
        Err(Error::KernelLemma(format!("nonzero {f} annihilated by every F * I_eta * e_{n}")))
    }
}
