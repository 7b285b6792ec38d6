//! Darboux transformations of the gauged linear system: the component step,
//! one-fold potentials in three formula variants, and N-fold chains through
//! Wronskian ratios.
//!
//! Every output is a grid-sampled candidate. Nothing here checks that a
//! candidate solves PII; that is the residual oracle's job.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lax::PiiParams;
use crate::linear_system::{integrate_on_seed, EigenPair, HalfGridSeed};
use crate::pauli::{C64, ZERO};
use crate::potential::{central_difference, Samples, SampledPotential, SmoothPotential};
use crate::seeds::{residual_from_samples, ResidualReport, DEFAULT_POLE_RADIUS};
use crate::wronskian::{logderiv_ratio, w_grid_values, RowLayout, WKind, WMatrixSpec};

/// A spectral value with the eigenfunction data `(X, Y)` at the left end of
/// the grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub lambda: C64,
    pub ic: [C64; 2],
}

impl SpectralPoint {
    pub fn new(lambda: C64, ic: [C64; 2]) -> Self {
        SpectralPoint { lambda, ic }
    }

    /// `ic = (cos φ, sin φ)`, so on the zero seed `X = cos θ`, `Y = sin θ`
    /// with `θ = λ(x − x0) + φ`.
    pub fn trig(lambda: f64, phase: f64) -> Self {
        SpectralPoint {
            lambda: lambda.into(),
            ic: [phase.cos().into(), phase.sin().into()],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaVariant {
    /// `−v + λ1 (Y1/X1 − X1/Y1)`.
    Ratio,
    /// `−v + d/dx ln(X1/Y1)`.
    Logderiv,
    /// `v (Y1/X1)²`.
    Remark,
}

impl FormulaVariant {
    pub const ALL: [FormulaVariant; 3] = [FormulaVariant::Ratio, FormulaVariant::Logderiv, FormulaVariant::Remark];

    pub fn as_str(self) -> &'static str {
        match self {
            FormulaVariant::Ratio => "ratio",
            FormulaVariant::Logderiv => "logderiv",
            FormulaVariant::Remark => "remark",
        }
    }
}

impl fmt::Display for FormulaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormulaVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ratio" => Ok(FormulaVariant::Ratio),
            "logderiv" => Ok(FormulaVariant::Logderiv),
            "remark" => Ok(FormulaVariant::Remark),
            _ => Err(Error::Parse(format!("variant must be ratio, logderiv or remark, got {s:?}"))),
        }
    }
}

/// The seed, its samples and the eigenpairs at `λ_1..λ_N` (and optionally
/// a generic `λ_0`), all on one grid.
#[derive(Clone, Debug)]
pub struct DarbouxChain {
    params: PiiParams,
    points: Vec<SpectralPoint>,
    generic: Option<SpectralPoint>,
    seed: Samples,
    pairs: Vec<EigenPair>,
    generic_pair: Option<EigenPair>,
}

impl DarbouxChain {
    pub fn new(
        seed: &dyn SmoothPotential,
        params: PiiParams,
        points: Vec<SpectralPoint>,
        generic: Option<SpectralPoint>,
        grid: &Grid,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Argument("a Darboux chain needs at least one spectral value".into()));
        }
        if params.alpha != ZERO {
            if let Some(p) = points.iter().chain(&generic).find(|p| p.lambda == ZERO) {
                return Err(Error::Argument(format!(
                    "λ = {} is not allowed when α = {} (the α/λ term is singular)",
                    p.lambda, params.alpha
                )));
            }
        }
        let half = HalfGridSeed::new(seed, grid)?;
        let samples = seed.sample(grid)?;
        let pairs = points
            .iter()
            .map(|p| integrate_on_seed(&half, p.lambda, p.ic))
            .collect::<Result<Vec<_>>>()?;
        let generic_pair = generic.map(|p| integrate_on_seed(&half, p.lambda, p.ic)).transpose()?;
        Ok(DarbouxChain {
            params,
            points,
            generic,
            seed: samples,
            pairs,
            generic_pair,
        })
    }

    pub fn params(&self) -> &PiiParams {
        &self.params
    }

    pub fn points(&self) -> &[SpectralPoint] {
        &self.points
    }

    pub fn generic(&self) -> Option<&SpectralPoint> {
        self.generic.as_ref()
    }

    pub fn grid(&self) -> &Grid {
        &self.seed.grid
    }

    pub fn seed_samples(&self) -> &Samples {
        &self.seed
    }

    pub fn pairs(&self) -> &[EigenPair] {
        &self.pairs
    }

    pub fn generic_pair(&self) -> Option<&EigenPair> {
        self.generic_pair.as_ref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The same chain restricted to its first `n` spectral values.
    pub fn truncated(&self, n: usize) -> Result<DarbouxChain> {
        check_level(self, n)?;
        let mut c = self.clone();
        c.points.truncate(n);
        c.pairs.truncate(n);
        Ok(c)
    }

    /// The chain with its spectral values in another order.
    pub fn permuted(&self, order: &[usize]) -> Result<DarbouxChain> {
        let mut seen = vec![false; self.len()];
        for &k in order {
            if k >= self.len() || std::mem::replace(&mut seen[k], true) {
                return Err(Error::Argument(format!("{order:?} is not a permutation of 0..{}", self.len())));
            }
        }
        if order.len() != self.len() {
            return Err(Error::Argument(format!("{order:?} is not a permutation of 0..{}", self.len())));
        }
        let mut c = self.clone();
        c.points = order.iter().map(|&k| self.points[k]).collect();
        c.pairs = order.iter().map(|&k| self.pairs[k].clone()).collect();
        Ok(c)
    }
}

fn check_level(chain: &DarbouxChain, n: usize) -> Result<()> {
    if n == 0 || n > chain.len() {
        return Err(Error::Argument(format!(
            "level {n} requested from a chain of {} spectral values",
            chain.len()
        )));
    }
    Ok(())
}

fn near_zero(f: C64, df: C64) -> bool {
    f == ZERO || !f.is_finite() || df.norm() * DEFAULT_POLE_RADIUS > f.norm()
}

/// `X[1] = λY − λ1 (Y1/X1) X`, `Y[1] = λX − λ1 (X1/Y1) Y`, with derivatives
/// by the product and quotient rules. Masked where `X1` or `Y1` is within
/// the pole radius of a zero.
pub fn darboux_component_step(pair: &EigenPair, fixed: &EigenPair) -> Result<EigenPair> {
    pair.check_same_grid(fixed)?;
    let n = pair.len();
    let (l, l1) = (pair.lambda, fixed.lambda);
    let mut out = EigenPair {
        lambda: l,
        grid: pair.grid,
        ic: [ZERO; 2],
        x: vec![ZERO; n],
        y: vec![ZERO; n],
        dx: vec![ZERO; n],
        dy: vec![ZERO; n],
        mask: vec![false; n],
    };
    for i in 0..n {
        let (x1, y1, dx1, dy1) = (fixed.x[i], fixed.y[i], fixed.dx[i], fixed.dy[i]);
        let (x, y, dx, dy) = (pair.x[i], pair.y[i], pair.dx[i], pair.dy[i]);
        if pair.mask[i] || fixed.mask[i] || near_zero(x1, dx1) || near_zero(y1, dy1) {
            out.mask[i] = true;
            continue;
        }
        let r = y1 / x1;
        let s = x1 / y1;
        let dr = (dy1 * x1 - y1 * dx1) / (x1 * x1);
        let ds = (dx1 * y1 - x1 * dy1) / (y1 * y1);
        out.x[i] = l * y - l1 * r * x;
        out.y[i] = l * x - l1 * s * y;
        out.dx[i] = l * dy - l1 * (dr * x + r * dx);
        out.dy[i] = l * dx - l1 * (ds * y + s * dy);
    }
    out.ic = [out.x[0], out.y[0]];
    Ok(out)
}

/// One-fold candidate from the first spectral value of the chain.
pub fn onefold_v(chain: &DarbouxChain, variant: FormulaVariant) -> Result<SampledPotential> {
    let seed = &chain.seed;
    let p = &chain.pairs[0];
    let l = p.lambda;
    let n = seed.len();
    let mut out = Samples {
        grid: seed.grid,
        v: vec![ZERO; n],
        dv: vec![ZERO; n],
        d2v: vec![ZERO; n],
        d2v_analytic: seed.d2v_analytic,
        mask: vec![false; n],
    };
    for i in 0..n {
        let (v, dv, d2v) = (seed.v[i], seed.dv[i], seed.d2v[i]);
        if seed.mask[i] || near_zero(p.x[i], p.dx[i]) || near_zero(p.y[i], p.dy[i]) {
            out.mask[i] = true;
            continue;
        }
        let r = p.y[i] / p.x[i];
        let s = p.x[i] / p.y[i];
        let dr = l * (r * r + 1.0) - v * r * 2.0;
        let ds = -l * (s * s + 1.0) + v * s * 2.0;
        let d2r = l * r * dr * 2.0 - dv * r * 2.0 - v * dr * 2.0;
        let d2s = -l * s * ds * 2.0 + dv * s * 2.0 + v * ds * 2.0;
        let (a, b, c) = match variant {
            FormulaVariant::Ratio => (-v + l * (r - s), -dv + l * (dr - ds), -d2v + l * (d2r - d2s)),
            FormulaVariant::Logderiv => (v - l * (r + s), dv - l * (dr + ds), d2v - l * (d2r + d2s)),
            FormulaVariant::Remark => (
                v * r * r,
                dv * r * r + v * r * dr * 2.0,
                d2v * r * r + dv * r * dr * 4.0 + v * (dr * dr + r * d2r) * 2.0,
            ),
        };
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            out.mask[i] = true;
            continue;
        }
        out.v[i] = a;
        out.dv[i] = b;
        out.d2v[i] = c;
    }
    let label = format!("onefold-{variant}");
    SampledPotential::new(out, label)
}

/// `−v + d/dx ln(W1[n]/W2[n])` over the first `n` spectral values.
pub fn nfold_v(chain: &DarbouxChain, n: usize) -> Result<SampledPotential> {
    nfold_v_with_layout(chain, n, RowLayout::Displayed)
}

pub fn nfold_v_with_layout(chain: &DarbouxChain, n: usize, layout: RowLayout) -> Result<SampledPotential> {
    check_level(chain, n)?;
    let pairs = &chain.pairs[..n];
    let s1 = WMatrixSpec::new(WKind::W1, n, false).with_layout(layout);
    let s2 = WMatrixSpec::new(WKind::W2, n, false).with_layout(layout);
    let w1 = w_grid_values(&s1, pairs, None, &chain.seed)?;
    let w2 = w_grid_values(&s2, pairs, None, &chain.seed)?;
    let ratio = logderiv_ratio(&w1, &w2)?;
    let seed = &chain.seed;
    let len = seed.len();
    let mut out = Samples {
        grid: seed.grid,
        v: vec![ZERO; len],
        dv: vec![ZERO; len],
        d2v: vec![ZERO; len],
        d2v_analytic: seed.d2v_analytic && !w1.fd_fallback.iter().chain(&w2.fd_fallback).any(|f| *f),
        mask: vec![false; len],
    };
    for i in 0..len {
        if ratio.mask[i] || seed.mask[i] {
            out.mask[i] = true;
            continue;
        }
        out.v[i] = -seed.v[i] + ratio.values[i];
        out.dv[i] = -seed.dv[i] + w1.log_derivs[1][i] - w2.log_derivs[1][i];
        out.d2v[i] = -seed.d2v[i] + w1.log_derivs[2][i] - w2.log_derivs[2][i];
    }
    SampledPotential::new(out, format!("nfold-{n}"))
}

/// Eigenpairs after `level` component steps: the pairs at
/// `λ_{level+1}..λ_N` and the generic pair, if any.
#[derive(Clone, Debug)]
pub struct ChainLevel {
    pub level: usize,
    pub pairs: Vec<EigenPair>,
    pub generic: Option<EigenPair>,
}

/// Applies the component step level by level: level `k` is level `k − 1`
/// transformed by its own first pair. The result has `N + 1` entries,
/// starting with the untransformed eigenpairs.
pub fn iterate_chain(chain: &DarbouxChain) -> Result<Vec<ChainLevel>> {
    let mut levels = vec![ChainLevel {
        level: 0,
        pairs: chain.pairs.clone(),
        generic: chain.generic_pair.clone(),
    }];
    for k in 1..=chain.len() {
        let prev = &levels[k - 1];
        let fixed = &prev.pairs[0];
        let pairs = prev.pairs[1..]
            .iter()
            .map(|p| darboux_component_step(p, fixed))
            .collect::<Result<Vec<_>>>()?;
        let generic = prev.generic.as_ref().map(|g| darboux_component_step(g, fixed)).transpose()?;
        levels.push(ChainLevel { level: k, pairs, generic });
    }
    Ok(levels)
}

/// How the potential is carried through an iterated chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IterationRule {
    /// `v[k] = v[k−1] + d/dx ln(X_k[k−1]/Y_k[k−1])` after a first `−v`,
    /// i.e. `v[N] = −v + Σ_k d/dx ln(X_k[k−1]/Y_k[k−1])`.
    Accumulated,
    /// `v[k] = −v[k−1] + d/dx ln(X_k[k−1]/Y_k[k−1])` at every level.
    Literal,
}

/// Potential after `n` iterated steps. Derivatives of the transformed
/// eigenfunctions are only known to first order, so `v′` and `v″` are
/// central differences and the samples are flagged accordingly.
pub fn iterated_v(chain: &DarbouxChain, levels: &[ChainLevel], n: usize, rule: IterationRule) -> Result<SampledPotential> {
    check_level(chain, n)?;
    if levels.len() <= n - 1 {
        return Err(Error::Argument(format!("{} levels given, {n} needed", levels.len())));
    }
    let seed = &chain.seed;
    let len = seed.len();
    let mut v: Vec<C64> = seed.v.clone();
    let mut mask = seed.mask.clone();
    for (k, level) in levels.iter().take(n).enumerate() {
        let p = &level.pairs[0];
        for i in 0..len {
            if p.mask[i] || near_zero(p.x[i], p.dx[i]) || near_zero(p.y[i], p.dy[i]) {
                mask[i] = true;
                continue;
            }
            let term = p.dx[i] / p.x[i] - p.dy[i] / p.y[i];
            let base = match rule {
                IterationRule::Literal => -v[i],
                IterationRule::Accumulated if k == 0 => -v[i],
                IterationRule::Accumulated => v[i],
            };
            v[i] = base + term;
        }
    }
    for (z, m) in v.iter_mut().zip(&mask) {
        if *m {
            *z = ZERO;
        }
    }
    let h = seed.grid.step();
    let dv = central_difference(&v, h);
    let d2v = central_difference(&dv, h);
    // Differences reach one and two cells past a masked point.
    let mut wide = mask.clone();
    for i in 0..len {
        if mask[i] {
            for j in i.saturating_sub(2)..(i + 3).min(len) {
                wide[j] = true;
            }
        }
    }
    let out = Samples {
        grid: seed.grid,
        v,
        dv,
        d2v,
        d2v_analytic: false,
        mask: wide,
    };
    SampledPotential::new(out, format!("iterated-{n}"))
}

/// Largest pointwise relative difference between two sample sets, over points
/// unmasked in both. `None` when no point survives.
pub fn max_relative_difference(a: &Samples, b: &Samples) -> Option<f64> {
    let mut worst: Option<f64> = None;
    for i in 0..a.len().min(b.len()) {
        if a.mask[i] || b.mask[i] {
            continue;
        }
        let d = (a.v[i] - b.v[i]).norm() / a.v[i].norm().max(b.v[i].norm()).max(1.0);
        worst = Some(worst.map_or(d, |w: f64| w.max(d)));
    }
    worst
}

/// Agreement of the level-`n` generic pair from iteration with the
/// determinant ratios `W1[n+1]/W1[n]` and `W2[n+1]/W2[n]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComponentCheck {
    pub level: usize,
    pub layout: RowLayout,
    pub x_error: f64,
    pub y_error: f64,
    /// Same ratios with the `(n+1)` determinants' letters swapped.
    pub swapped_x_error: f64,
    pub swapped_y_error: f64,
    pub unmasked: usize,
}

/// Compares the iterated generic pair at level `n` against Wronskian ratios.
/// Requires a generic spectral value.
pub fn component_vs_determinant(chain: &DarbouxChain, levels: &[ChainLevel], n: usize, layout: RowLayout) -> Result<ComponentCheck> {
    check_level(chain, n)?;
    let generic = chain
        .generic_pair
        .as_ref()
        .ok_or_else(|| Error::Argument("component check needs a generic spectral value".into()))?;
    let iterated = levels
        .get(n)
        .and_then(|l| l.generic.as_ref())
        .ok_or_else(|| Error::Argument(format!("level {n} with a generic pair was not computed")))?;
    let pairs = &chain.pairs[..n];
    let det = |kind, level, with_generic| {
        let spec = WMatrixSpec::new(kind, level, with_generic).with_layout(layout);
        w_grid_values(&spec, pairs, if with_generic { Some(generic) } else { None }, &chain.seed)
    };
    let (w1n, w2n) = (det(WKind::W1, n, false)?, det(WKind::W2, n, false)?);
    let (w1g, w2g) = (det(WKind::W1, n + 1, true)?, det(WKind::W2, n + 1, true)?);
    let rel = |a: C64, b: C64| (a - b).norm() / a.norm().max(b.norm()).max(1e-300);
    let mut check = ComponentCheck {
        level: n,
        layout,
        x_error: 0.0,
        y_error: 0.0,
        swapped_x_error: 0.0,
        swapped_y_error: 0.0,
        unmasked: 0,
    };
    for i in 0..chain.seed.len() {
        if iterated.mask[i] || w1n.mask[i] || w2n.mask[i] || w1g.mask[i] || w2g.mask[i] {
            continue;
        }
        check.unmasked += 1;
        let (x, y) = (iterated.x[i], iterated.y[i]);
        check.x_error = check.x_error.max(rel(x, w1g.values[i] / w1n.values[i]));
        check.y_error = check.y_error.max(rel(y, w2g.values[i] / w2n.values[i]));
        check.swapped_x_error = check.swapped_x_error.max(rel(x, w2g.values[i] / w1n.values[i]));
        check.swapped_y_error = check.swapped_y_error.max(rel(y, w1g.values[i] / w2n.values[i]));
    }
    if check.unmasked == 0 {
        return Err(Error::EmptyDomain("no point survives the component check masks".into()));
    }
    Ok(check)
}

/// Residual reports of one candidate at `α − 1`, `α` and `α + 1`.
pub fn residual_family(samples: &Samples, params: &PiiParams) -> Result<[ResidualReport; 3]> {
    let at = |shift: f64| {
        let p = PiiParams {
            alpha: params.alpha + shift,
            ..*params
        };
        residual_from_samples(samples, &p)
    };
    Ok([at(-1.0)?, at(0.0)?, at(1.0)?])
}
