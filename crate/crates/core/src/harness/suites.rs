use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::oracle;
use super::random::{random_cylinder, random_element, random_groupoid, random_nonnegative, random_scalar, stream_rng};
use super::{Outcome, SuiteResult, VerifyConfig};
use crate::cylinder::CylinderFunction;
use crate::diagram::{BratteliDiagram, Builtin, Vertex};
use crate::error::Error;
use crate::expectation::{e0n, en, en_of_indicator, quasi_basis_apply, star_identity_check};
use crate::groupoid::{psi, vanishing_check, GroupoidFunction, Vanishing};
use crate::scalar::{Rational, Scalar};
use crate::tower::{
    block_multiplicities, dimension_vector, en_refinement_check, jones_projection, represent_cylinder,
    represent_cylinder_at, toeplitz_word, AfElement,
};

enum Stop {
    Fail(String),
    Lib(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Lib(e)
    }
}

type Step = Result<(), Stop>;

struct Ctx<'a> {
    d: &'a Arc<BratteliDiagram>,
    builtin: Option<Builtin>,
    samples: usize,
    rng: ChaCha8Rng,
    checks: u64,
}

impl Ctx<'_> {
    fn check(&mut self, ok: bool, counterexample: impl FnOnce() -> String) -> Step {
        self.checks += 1;
        if ok {
            Ok(())
        } else {
            Err(Stop::Fail(counterexample()))
        }
    }

    /// Tallies a batch of independently computed checks; the first failure
    /// in input order wins, so parallel evaluation stays deterministic.
    fn check_all(&mut self, results: Vec<Result<Option<String>, Error>>) -> Step {
        for r in results {
            self.checks += 1;
            if let Some(ce) = r? {
                return Err(Stop::Fail(ce));
            }
        }
        Ok(())
    }

    fn depth(&self) -> usize {
        self.d.depth()
    }

    fn cylinder(&mut self, level: usize) -> Result<CylinderFunction, Error> {
        random_cylinder(self.d, level, &mut self.rng)
    }
}

pub(super) fn run(name: &str, stream: u64, d: &Arc<BratteliDiagram>, config: &VerifyConfig) -> SuiteResult {
    let mut ctx = Ctx {
        d,
        builtin: config.source.builtin(),
        samples: config.samples,
        rng: stream_rng(config.seed, stream),
        checks: 0,
    };
    let result = match name {
        "validation" => validation(&mut ctx),
        "combinatorics" => combinatorics(&mut ctx),
        "expectation" => expectation(&mut ctx),
        "matrix_units" => matrix_units(&mut ctx),
        "tower" => tower(&mut ctx),
        "groupoid" => groupoid(&mut ctx),
        other => Err(Stop::Fail(format!("unknown suite {other}"))),
    };
    let outcome = match result {
        Ok(()) => Outcome::Pass,
        Err(Stop::Fail(counterexample)) => Outcome::Fail { counterexample },
        Err(Stop::Lib(e @ Error::ResourceLimit { .. })) => Outcome::Resource { message: e.to_string() },
        Err(Stop::Lib(e)) => Outcome::Error { message: e.to_string() },
    };
    SuiteResult { name: name.to_string(), checks: ctx.checks, outcome }
}

fn validation(ctx: &mut Ctx) -> Step {
    let report = ctx.d.validate();
    ctx.check(report.is_empty(), || report.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
}

fn combinatorics(ctx: &mut Ctx) -> Step {
    let d = ctx.d.clone();
    for n in 0..=ctx.depth().min(5) {
        let counts = d.path_counts(n)?;
        let brute = oracle::dfs_paths(&d, n);
        let brute_counts: Vec<u64> = brute.iter().map(|b| b.len() as u64).collect();
        ctx.check(counts == brute_counts, || {
            format!("level {n}: recursion {counts:?} vs enumeration {brute_counts:?}")
        })?;

        let level = d.path_level(n)?;
        ctx.check(level.len() as u64 == counts.iter().sum::<u64>(), || format!("|Omega_{n}| = {}", level.len()))?;

        for (v, expected) in brute.iter().enumerate() {
            let segs = d.enumerate_segments(Vertex::ROOT, Vertex::new(n, v))?;
            let from_segments: Vec<&[_]> = segs.iter().map(|s| s.edges.as_slice()).collect();
            let from_level: Vec<&[_]> = level.block(v).iter().map(|&i| level.path(i).edges()).collect();
            let expected: Vec<&[_]> = expected.iter().map(Vec::as_slice).collect();
            ctx.check(from_segments == expected && from_level == expected, || {
                format!("rooted paths ending at ({n},{v}) disagree with depth-first enumeration")
            })?;
        }

        let (_, dim) = dimension_vector(&d, n)?;
        let brute_dim: u128 = brute_counts.iter().map(|&c| (c as u128) * (c as u128)).sum();
        ctx.check(dim == brute_dim, || format!("dim A_{n} = {dim}, enumeration gives {brute_dim}"))?;
    }
    if ctx.builtin == Some(Builtin::Pascal) {
        for n in 0..=ctx.depth().min(6) {
            let (_, dim) = dimension_vector(&d, n)?;
            let central = oracle::binomial(2 * n as u64, n as u64);
            ctx.check(dim == central, || format!("Pascal dim A_{n} = {dim}, C(2n,n) = {central}"))?;
        }
    }
    Ok(())
}

fn expectation(ctx: &mut Ctx) -> Step {
    let d = ctx.d.clone();
    let one = CylinderFunction::one(d.clone());
    for n in 0..=ctx.depth().min(3) {
        ctx.check(en(&one, n)? == one, || format!("E_{n}(1) != 1"))?;

        let counts = d.path_counts(n)?;
        let class_sizes =
            CylinderFunction::from_fn(d.clone(), n, |_, p| Scalar::from(Rational::from(counts[p.range().index])))?;
        ctx.check(e0n(&one, n)? == class_sizes, || format!("E0_{n}(1) is not #s(alpha_n)"))?;

        for gamma in d.enumerate_paths(n)? {
            let closed = en_of_indicator(d.clone(), &gamma)?;
            let summed = en(&CylinderFunction::indicator_path(d.clone(), &gamma)?, n)?;
            ctx.check(closed == summed, || format!("E_{n}(I_gamma) for gamma={gamma}: {summed} != {closed}"))?;
        }

        if n < ctx.depth() {
            for gamma in d.enumerate_paths(n + 1)? {
                let last = *gamma.edges().last().expect("nonempty");
                let edge = CylinderFunction::indicator_edge(d.clone(), last)?;
                let prefix = CylinderFunction::indicator_path(d.clone(), &gamma.prefix(n))?;
                let lhs = en(&prefix.mul(&edge)?, n)?;
                let rhs = edge.scale(&Rational::from(d.path_count(last.source_vertex())?).recip());
                ctx.check(lhs == rhs, || format!("E_{n}(I_gamma' eI) for gamma={gamma}: {lhs} != {rhs}"))?;
            }
        }

        let k = Rational::from(counts.iter().copied().max().unwrap_or(1));
        let k_sq = &k * &k;
        for m in n..=ctx.depth().min(4) {
            for _ in 0..ctx.samples {
                let f = ctx.cylinder(m)?;
                let e = en(&f, n)?;
                let show = |what: &str| format!("{what} n={n} m={m} f={f}");

                ctx.check(e.is_invariant(n)?, || show("E_n(f) not R_n-invariant"))?;
                ctx.check(en(&e, n)? == e, || show("idempotence"))?;

                let g = ctx.cylinder(m)?;
                let c = random_scalar(&mut ctx.rng);
                let lin = en(&f.scalar_mul(&c).add(&g)?, n)?;
                ctx.check(lin == e.scalar_mul(&c).add(&en(&g, n)?)?, || show("linearity"))?;

                let left = en(&ctx.cylinder(m)?, n)?;
                let right = en(&ctx.cylinder(m)?, n)?;
                let module = en(&left.mul(&f)?.mul(&right)?, n)?;
                ctx.check(module == left.mul(&e)?.mul(&right)?, || show("module property"))?;

                let em = en(&f, m)?;
                ctx.check(en(&em, n)? == em, || show("E_n E_m != E_m"))?;
                ctx.check(en(&e, m)? == em, || show("E_m E_n != E_m"))?;

                ctx.check(star_identity_check(&f, n, m)?, || show("identity over X_i"))?;
                ctx.check(quasi_basis_apply(&f, n)? == f, || show("quasi-basis expansion"))?;

                let bound = &k_sq * &f.sup_norm_sq();
                ctx.check(e0n(&f, n)?.sup_norm_sq() <= bound, || show("sup-norm bound"))?;

                let p = CylinderFunction::from_fn(d.clone(), m, |_, _| random_nonnegative(&mut ctx.rng))?;
                let ep = en(&p, n)?;
                ctx.check(ep.table().iter().all(|s| s.is_real() && !s.re().is_negative()), || {
                    format!("positivity n={n} m={m} p={p}")
                })?;
            }
        }
    }
    Ok(())
}

/// Every matrix unit of `A_n` as `(γ index, δ index, element)`.
fn units(d: &Arc<BratteliDiagram>, n: usize) -> Result<Vec<(usize, usize, AfElement)>, Error> {
    let level = d.path_level(n)?;
    let mut out = Vec::new();
    for block in level.blocks() {
        for &g in block {
            for &h in block {
                out.push((g, h, AfElement::matrix_unit(d.clone(), level.path(g), level.path(h))?));
            }
        }
    }
    Ok(out)
}

fn matrix_units(ctx: &mut Ctx) -> Step {
    let d = ctx.d.clone();
    for n in 0..=ctx.depth().min(3) {
        let level = d.path_level(n)?;
        let units = units(&d, n)?;
        let lookup: HashMap<(usize, usize), usize> = units.iter().enumerate().map(|(k, u)| ((u.0, u.1), k)).collect();
        let zero = AfElement::zero(d.clone(), n)?;
        let name = |g: usize, h: usize| format!("e^{n}_({},{})", level.path(g), level.path(h));

        let mut sum = zero.clone();
        for (g, h, e) in &units {
            if g == h {
                sum = sum.add(e)?;
            }
        }
        ctx.check(sum == AfElement::identity(d.clone(), n)?, || format!("sum of e^{n}_(g,g) is not the identity"))?;

        for (g, h, e) in &units {
            let flipped = &units[lookup[&(*h, *g)]].2;
            ctx.check(e.adjoint() == *flipped, || format!("adjoint of {}", name(*g, *h)))?;
        }

        let products: Vec<Result<Option<String>, Error>> = units
            .par_iter()
            .flat_map_iter(|(g, h, a)| {
                let (units, lookup, zero) = (&units, &lookup, &zero);
                units.iter().map(move |(k, l, b)| {
                    let product = a.mul(b)?;
                    let expected = if h == k { &units[lookup[&(*g, *l)]].2 } else { zero };
                    Ok((product != *expected).then(|| format!("{} * {}", name(*g, *h), name(*k, *l))))
                })
            })
            .collect();
        ctx.check_all(products)?;

        let mut targets = vec![n];
        if n < ctx.depth() {
            targets.push(n + 1);
        }
        let mut zero_cases = 0u64;
        for &m in &targets {
            let zero_m = AfElement::zero(d.clone(), m)?;
            let pairs: Vec<(usize, usize)> =
                (0..level.len()).flat_map(|g| (0..level.len()).map(move |h| (g, h))).collect();
            zero_cases += pairs.iter().filter(|(g, h)| level.terminal(*g) != level.terminal(*h)).count() as u64;
            let words: Vec<Result<Option<String>, Error>> = pairs
                .par_iter()
                .map(|&(g, h)| {
                    let word = toeplitz_word(d.clone(), level.path(g), level.path(h), m)?;
                    let expected = if level.terminal(g) == level.terminal(h) {
                        units[lookup[&(g, h)]].2.embed_to(m)?
                    } else {
                        zero_m.clone()
                    };
                    Ok((word != expected)
                        .then(|| format!("word for ({},{}) in A_{m}: {word}", level.path(g), level.path(h))))
                })
                .collect();
            ctx.check_all(words)?;
        }
        if n >= 1 && matches!(ctx.builtin, Some(Builtin::Pascal | Builtin::Fibonacci)) {
            ctx.check(zero_cases > 0, || format!("no pairs with distinct terminal vertices at level {n}"))?;
        }
    }
    Ok(())
}

fn tower(ctx: &mut Ctx) -> Step {
    let d = ctx.d.clone();
    let depth = ctx.depth();
    for n in 0..depth {
        let image = AfElement::identity(d.clone(), n)?.embed()?;
        ctx.check(image == AfElement::identity(d.clone(), n + 1)?, || format!("embed(1) != 1 at level {n}"))?;
        let realized = block_multiplicities(d.clone(), n)?;
        let incidence = d.incidence(n)?;
        ctx.check(realized == incidence, || {
            format!("stage {n}: realized multiplicities {realized:?} vs incidence {incidence:?}")
        })?;
    }

    for n in 0..depth.min(4) {
        let zero = AfElement::zero(d.clone(), n)?;
        ctx.check(zero.embed()?.is_zero(), || format!("embed(0) != 0 at level {n}"))?;
        for _ in 0..ctx.samples {
            let x = random_element(&d, n, &mut ctx.rng)?;
            let y = random_element(&d, n, &mut ctx.rng)?;
            let (ex, ey) = (x.embed()?, y.embed()?);
            let show = |what: &str| format!("{what} at level {n}: x={x} y={y}");
            ctx.check(x.mul(&y)?.embed()? == ex.mul(&ey)?, || show("embed(xy) != embed(x)embed(y)"))?;
            ctx.check(x.add(&y)?.embed()? == ex.add(&ey)?, || show("embed not additive"))?;
            ctx.check(x.adjoint().embed()? == ex.adjoint(), || show("embed(x*) != embed(x)*"))?;
            ctx.check(x.is_zero() || !ex.is_zero(), || show("embed not injective"))?;
            if n + 2 <= depth {
                ctx.check(x.embed_to(n + 2)? == ex.embed()?, || show("embed_to != embed twice"))?;
            }
            let f = ctx.cylinder(n)?;
            let lhs = represent_cylinder(&f)?.embed()?;
            ctx.check(lhs == represent_cylinder(&f.refine(n + 1)?)?, || {
                format!("embed(rho(f)) != rho(refine f) for f={f}")
            })?;
        }
    }

    for m in 0..=depth.min(4) {
        let identity = AfElement::identity(d.clone(), m)?;
        let projections = (0..=m).map(|n| jones_projection(d.clone(), n, m)).collect::<Result<Vec<_>, _>>()?;
        ctx.check(projections[0] == identity, || format!("e_0 != 1 in A_{m}"))?;
        for n in 0..=m {
            let e = &projections[n];
            ctx.check(e.mul(e)? == *e && e.adjoint() == *e, || format!("e_{n} not a projection in A_{m}"))?;
            if n < m {
                let next = &projections[n + 1];
                ctx.check(next.mul(e)? == *next && e.mul(next)? == *next, || {
                    format!("e_{n} e_{} ladder in A_{m}", n + 1)
                })?;
                ctx.check(en_refinement_check(d.clone(), n, m)?, || format!("e_{n} refinement in A_{m}"))?;
            }
            for _ in 0..ctx.samples {
                let level = ctx.rng.random_range(0..=m);
                let f = ctx.cylinder(level)?;
                let rho = represent_cylinder_at(&f, m)?;
                let lhs = e.mul(&rho)?.mul(e)?;
                let rhs = represent_cylinder_at(&en(&f, n)?, m)?.mul(e)?;
                ctx.check(lhs == rhs, || format!("e_n rho(f) e_n != rho(E_n f) e_n, n={n} m={m} f={f}"))?;
            }
        }
    }
    Ok(())
}

fn groupoid(ctx: &mut Ctx) -> Step {
    let d = ctx.d.clone();
    let depth = ctx.depth();
    let one = GroupoidFunction::diag(&CylinderFunction::one(d.clone()));
    for n in 0..=depth.min(3) {
        let e = GroupoidFunction::check_en(d.clone(), n)?;
        ctx.check(e.convolve(&e)? == e && e.involution() == e, || format!("check e_{n} not a projection"))?;
        if n < depth {
            let next = GroupoidFunction::check_en(d.clone(), n + 1)?;
            ctx.check(e.convolve(&next)? == next && next.convolve(&e)? == next, || {
                format!("check e_{n} e_{} ladder", n + 1)
            })?;
        }

        let m = (n + 1).min(depth);
        for _ in 0..ctx.samples {
            let f = ctx.cylinder(m)?;
            let g = ctx.cylinder(m)?;
            let (df, dg) = (GroupoidFunction::diag(&f), GroupoidFunction::diag(&g));
            let lhs = e.convolve(&df)?.convolve(&e)?;
            let rhs = GroupoidFunction::diag(&en(&f, n)?).convolve(&e)?;
            ctx.check(lhs == rhs, || format!("check e_n f check e_n != E_n(f) check e_n, n={n} f={f}"))?;

            let product = df.widen(m, m)?.convolve(&e)?.convolve(&dg)?;
            ctx.check(product.is_supported_in(n)?, || format!("f * e_{n} * g leaves R_{n}: f={f} g={g}"))?;

            let supports: Vec<usize> = (0..3).map(|_| ctx.rng.random_range(0..=n)).collect();
            let fs =
                supports.iter().map(|&s| random_groupoid(&d, s, n, &mut ctx.rng)).collect::<Result<Vec<_>, _>>()?;
            let (a, b, c) = (&fs[0], &fs[1], &fs[2]);
            let show = |what: &str| format!("{what}: F={a} G={b} H={c}");
            ctx.check(a.convolve(b)?.convolve(c)? == a.convolve(&b.convolve(c)?)?, || show("associativity"))?;
            ctx.check(a.convolve(&b.add(c)?)? == a.convolve(b)?.add(&a.convolve(c)?)?, || show("distributivity"))?;
            ctx.check(a.convolve(b)?.involution() == b.involution().convolve(&a.involution())?, || {
                show("(FG)* != G*F*")
            })?;
            ctx.check(a.involution().involution() == *a, || show("involution not involutive"))?;
            ctx.check(one.convolve(a)? == *a && a.convolve(&one)? == *a, || show("diag(1) not a unit"))?;
        }

        psi_checks(ctx, n)?;

        let zero = GroupoidFunction::zero(d.clone(), n, n)?;
        ctx.check(vanishing_check(&zero, n)? == Vanishing::Zero, || format!("zero function at R_{n} has a witness"))?;
        let m = (n + 1).min(depth);
        for _ in 0..ctx.samples {
            let f = random_groupoid(&d, n, m, &mut ctx.rng)?;
            if f.is_zero() {
                continue;
            }
            let found = matches!(vanishing_check(&f, m)?, Vanishing::Witness(_));
            ctx.check(found, || format!("no witness for nonzero {f}"))?;

            // Peaked test function at η: (F ★ I_η ★ ěₙ)(α, η) = F(α, η) ěₙ(η, η).
            let level = d.path_level(m)?;
            let eta_index = ctx.rng.random_range(0..level.len());
            let eta = level.path(eta_index).clone();
            let peak = GroupoidFunction::diag(&CylinderFunction::indicator_path(d.clone(), &eta)?);
            let product = f.convolve(&peak)?.convolve(&e)?.widen(n, m)?;
            let diagonal = Rational::from(d.path_count(eta.prefix(n).range())?).recip();
            for alpha in level.paths() {
                let lhs = product.value(alpha, &eta)?;
                let rhs = f.value(alpha, &eta)?.scale(&diagonal);
                ctx.check(lhs == rhs, || format!("peaked product at ({alpha},{eta}): {lhs} != {rhs}"))?;
            }
        }
    }
    Ok(())
}

fn psi_checks(ctx: &mut Ctx, n: usize) -> Step {
    let d = ctx.d.clone();
    let depth = ctx.depth();
    let level = d.path_level(n)?;
    let units = units(&d, n)?;
    let lookup: HashMap<(usize, usize), usize> = units.iter().enumerate().map(|(k, u)| ((u.0, u.1), k)).collect();
    let images = units.par_iter().map(|(_, _, u)| psi(u)).collect::<Result<Vec<_>, _>>()?;
    let zero = GroupoidFunction::zero(d.clone(), n, n)?;
    let name = |g: usize, h: usize| format!("psi(e^{n}_({},{}))", level.path(g), level.path(h));

    let one = GroupoidFunction::diag(&CylinderFunction::one(d.clone()));
    ctx.check(psi(&AfElement::identity(d.clone(), n)?)? == one, || format!("psi(1) != diag(1) at level {n}"))?;

    // The images of the matrix units are the point masses at (γ, δ): a
    // linearly independent family, so ψ is injective on Aₙ.
    for (k, (g, h, _)) in units.iter().enumerate() {
        let entries = images[k].entries();
        let expected = [(level.path(*g).clone(), level.path(*h).clone(), Scalar::one())];
        ctx.check(entries == expected, || format!("{} = {}", name(*g, *h), images[k]))?;
        let flipped = &images[lookup[&(*h, *g)]];
        ctx.check(images[k].involution() == *flipped, || format!("{}* != psi of adjoint", name(*g, *h)))?;
    }

    let products: Vec<Result<Option<String>, Error>> = units
        .par_iter()
        .enumerate()
        .flat_map_iter(|(a, (g, h, _))| {
            let (units, lookup, images, zero) = (&units, &lookup, &images, &zero);
            units.iter().enumerate().map(move |(b, (k, l, _))| {
                let product = images[a].convolve(&images[b])?;
                let expected = if h == k { &images[lookup[&(*g, *l)]] } else { zero };
                Ok((product != *expected).then(|| format!("{} * {}", name(*g, *h), name(*k, *l))))
            })
        })
        .collect();
    ctx.check_all(products)?;

    for _ in 0..ctx.samples {
        let x = random_element(&d, n, &mut ctx.rng)?;
        let y = random_element(&d, n, &mut ctx.rng)?;
        let (px, py) = (psi(&x)?, psi(&y)?);
        let show = |what: &str| format!("{what} at level {n}: x={x} y={y}");
        ctx.check(psi(&x.mul(&y)?)? == px.convolve(&py)?, || show("psi(xy) != psi(x) psi(y)"))?;
        ctx.check(psi(&x.adjoint())? == px.involution(), || show("psi(x*) != psi(x)*"))?;
        ctx.check(x.is_zero() || !px.is_zero(), || show("psi not injective"))?;
        if n < depth {
            ctx.check(psi(&x.embed()?)? == px.widen(n + 1, n + 1)?, || show("psi(embed x) != widen(psi x)"))?;
        }
    }

    let witnesses: Vec<Result<Option<String>, Error>> = units
        .par_iter()
        .zip(images.par_iter())
        .map(|((g, h, _), image)| {
            Ok(match vanishing_check(image, n)? {
                Vanishing::Witness(_) => None,
                Vanishing::Zero => Some(format!("no witness for {}", name(*g, *h))),
            })
        })
        .collect();
    ctx.check_all(witnesses)?;
    Ok(())
}
