//! Wronskian-type determinants of eigenfunction components and the
//! x-log-derivatives of their ratios.
//!
//! A matrix of size `m` has one column per eigenpair, ordered by descending
//! index (`λ_N, …, λ_1`, then the generic pair when present). Row `r` holds
//! `λ^r · L` where `L` is `X` or `Y`: a superscript `(r)` is a power of the
//! column's spectral value, not a derivative.
//!
//! Row letters alternate. For [`RowLayout::Displayed`], `W1` starts with `X`
//! at sizes 1 and 2 and at every even size, and with `Y` at odd sizes ≥ 3;
//! `W2` swaps the letters. The empty letter in the even-`N` `W2` display is
//! read as `Y`. [`RowLayout::Alternating`] starts `W1` with `X` at every
//! size, which is the layout that iterating the component step reproduces.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linear_system::EigenPair;
use crate::pauli::{C64, ZERO};
use crate::potential::{central_difference, Samples};
use crate::seeds::DEFAULT_POLE_RADIUS;

/// Relative size `|det| / Π‖column‖` below which a matrix counts as singular.
pub const SINGULAR_FLOOR: f64 = 1e-12;

/// Condition estimate above which the trace identity is replaced by finite
/// differences.
pub const CONDITION_LIMIT: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WKind {
    W1,
    W2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RowLayout {
    #[default]
    Displayed,
    Alternating,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    fn other(self) -> Letter {
        match self {
            Letter::X => Letter::Y,
            Letter::Y => Letter::X,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WMatrixSpec {
    pub kind: WKind,
    /// Matrix size, the bracketed `[N]` or `[N + 1]`.
    pub level: usize,
    pub include_generic: bool,
    pub layout: RowLayout,
}

impl WMatrixSpec {
    pub fn new(kind: WKind, level: usize, include_generic: bool) -> Self {
        WMatrixSpec {
            kind,
            level,
            include_generic,
            layout: RowLayout::Displayed,
        }
    }

    pub fn with_layout(mut self, layout: RowLayout) -> Self {
        self.layout = layout;
        self
    }

    /// Number of non-generic eigenpairs the matrix expects.
    pub fn pair_count(&self) -> usize {
        self.level - usize::from(self.include_generic)
    }

    /// `(letter, power)` for each row.
    pub fn row_pattern(&self) -> Vec<(Letter, u32)> {
        let m = self.level;
        let w1_start = match self.layout {
            RowLayout::Alternating => Letter::X,
            RowLayout::Displayed if m == 1 || m % 2 == 0 => Letter::X,
            RowLayout::Displayed => Letter::Y,
        };
        let start = match self.kind {
            WKind::W1 => w1_start,
            WKind::W2 => w1_start.other(),
        };
        let mut letter = start;
        (0..m as u32)
            .map(|r| {
                let row = (letter, r);
                letter = letter.other();
                row
            })
            .collect()
    }
}

fn columns<'a>(spec: &WMatrixSpec, pairs: &'a [EigenPair], generic: Option<&'a EigenPair>) -> Result<Vec<&'a EigenPair>> {
    if spec.level == 0 {
        return Err(Error::Argument("Wronskian level must be positive".into()));
    }
    if pairs.len() != spec.pair_count() {
        return Err(Error::Argument(format!(
            "level-{} matrix needs {} eigenpairs, got {}",
            spec.level,
            spec.pair_count(),
            pairs.len()
        )));
    }
    if spec.include_generic != generic.is_some() {
        return Err(Error::Argument(
            "generic eigenpair must be given exactly when the spec includes it".into(),
        ));
    }
    let mut cols: Vec<&EigenPair> = pairs.iter().rev().collect();
    cols.extend(generic);
    for c in &cols[1..] {
        cols[0].check_same_grid(c)?;
    }
    Ok(cols)
}

/// The matrix at grid index `i`.
pub fn build_w_matrix(spec: &WMatrixSpec, pairs: &[EigenPair], generic: Option<&EigenPair>, i: usize) -> Result<DMatrix<C64>> {
    let cols = columns(spec, pairs, generic)?;
    let rows = spec.row_pattern();
    Ok(DMatrix::from_fn(spec.level, spec.level, |r, c| {
        let (letter, power) = rows[r];
        let p = cols[c];
        let entry = match letter {
            Letter::X => p.x[i],
            Letter::Y => p.y[i],
        };
        p.lambda.powu(power) * entry
    }))
}

/// Determinant by LU with partial pivoting.
pub fn determinant(m: &DMatrix<C64>) -> C64 {
    assert!(m.is_square(), "determinant of a non-square matrix");
    if m.nrows() == 1 {
        return m[(0, 0)];
    }
    m.clone().lu().determinant()
}

/// Determinant values and log-derivatives on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WGridValues {
    pub values: Vec<C64>,
    /// `d/dx det`.
    pub derivative: Vec<C64>,
    /// `(ln det)′, (ln det)″, (ln det)‴`.
    pub log_derivs: [Vec<C64>; 3],
    pub mask: Vec<bool>,
    /// Points where the trace identity was replaced by finite differences.
    pub fd_fallback: Vec<bool>,
}

/// Per-column x-derivatives of `X` and `Y` up to third order, from the
/// linear system and the seed's `v, v′, v″`.
struct ColumnJets {
    x: [C64; 4],
    y: [C64; 4],
}

fn column_jets(p: &EigenPair, seed: &Samples, i: usize) -> ColumnJets {
    let (v, dv, d2v) = (seed.v[i], seed.dv[i], seed.d2v[i]);
    let l = p.lambda;
    let (x0, y0) = (p.x[i], p.y[i]);
    let x1 = v * x0 - l * y0;
    let y1 = l * x0 - v * y0;
    let x2 = dv * x0 + v * x1 - l * y1;
    let y2 = l * x1 - dv * y0 - v * y1;
    let x3 = d2v * x0 + dv * x1 * 2.0 + v * x2 - l * y2;
    let y3 = l * x2 - d2v * y0 - dv * y1 * 2.0 - v * y2;
    ColumnJets {
        x: [x0, x1, x2, x3],
        y: [y0, y1, y2, y3],
    }
}

fn trace(m: &DMatrix<C64>) -> C64 {
    (0..m.nrows()).map(|k| m[(k, k)]).sum()
}

fn norm1(m: &DMatrix<C64>) -> f64 {
    (0..m.ncols())
        .map(|c| m.column(c).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Determinants over the grid for eigenpairs integrated on `seed`'s grid.
/// Derivatives use `det′/det = tr(M⁻¹M′)` and its two higher analogues
/// `tr(M⁻¹M″ − P²)` and `tr(M⁻¹M‴ − 3PQ + 2P³)`, where `P = M⁻¹M′` and
/// `Q = M⁻¹M″`.
pub fn w_grid_values(spec: &WMatrixSpec, pairs: &[EigenPair], generic: Option<&EigenPair>, seed: &Samples) -> Result<WGridValues> {
    let cols = columns(spec, pairs, generic)?;
    let n = seed.len();
    if cols[0].len() != n {
        return Err(Error::Argument("eigenpairs and seed samples differ in length".into()));
    }
    let rows = spec.row_pattern();
    let m = spec.level;
    let mut out = WGridValues {
        values: vec![ZERO; n],
        derivative: vec![ZERO; n],
        log_derivs: [vec![ZERO; n], vec![ZERO; n], vec![ZERO; n]],
        mask: vec![false; n],
        fd_fallback: vec![false; n],
    };
    for i in 0..n {
        let jets: Vec<ColumnJets> = cols.iter().map(|p| column_jets(p, seed, i)).collect();
        let mats: Vec<DMatrix<C64>> = (0..4)
            .map(|d| {
                DMatrix::from_fn(m, m, |r, c| {
                    let (letter, power) = rows[r];
                    let e = match letter {
                        Letter::X => jets[c].x[d],
                        Letter::Y => jets[c].y[d],
                    };
                    cols[c].lambda.powu(power) * e
                })
            })
            .collect();
        let det = determinant(&mats[0]);
        out.values[i] = det;
        let hadamard: f64 = (0..m).map(|c| mats[0].column(c).norm()).product();
        let transformed_mask = cols.iter().any(|p| p.mask[i]);
        if transformed_mask || !det.is_finite() || det.norm() <= SINGULAR_FLOOR * hadamard || det == ZERO {
            out.mask[i] = true;
            continue;
        }
        let lu = mats[0].clone().lu();
        let (Some(p), Some(q), Some(t)) = (lu.solve(&mats[1]), lu.solve(&mats[2]), lu.solve(&mats[3])) else {
            out.mask[i] = true;
            continue;
        };
        let l1 = trace(&p);
        let pp = &p * &p;
        let l2 = trace(&q) - trace(&pp);
        let l3 = trace(&t) - trace(&(&p * &q)) * 3.0 + trace(&(&pp * &p)) * 2.0;
        out.log_derivs[0][i] = l1;
        out.log_derivs[1][i] = l2;
        out.log_derivs[2][i] = l3;
        out.derivative[i] = det * l1;
        if l1.norm() * DEFAULT_POLE_RADIUS > 1.0 {
            out.mask[i] = true;
            continue;
        }
        let col_scaled = DMatrix::from_fn(m, m, |r, c| mats[0][(r, c)] / mats[0].column(c).norm());
        if let Some(inv) = col_scaled.clone().try_inverse() {
            if norm1(&col_scaled) * norm1(&inv) >= CONDITION_LIMIT {
                out.fd_fallback[i] = true;
            }
        } else {
            out.fd_fallback[i] = true;
        }
    }
    if out.fd_fallback.iter().any(|f| *f) {
        apply_fd_fallback(&mut out, seed.grid.step());
    }
    Ok(out)
}

fn apply_fd_fallback(w: &mut WGridValues, h: f64) {
    let d1 = central_difference(&w.values, h);
    let n = w.values.len();
    for i in 0..n {
        if w.fd_fallback[i] && !w.mask[i] {
            w.derivative[i] = d1[i];
            w.log_derivs[0][i] = d1[i] / w.values[i];
        }
    }
    let l2 = central_difference(&w.log_derivs[0], h);
    let l3 = central_difference(&w.log_derivs[1], h);
    for i in 0..n {
        if w.fd_fallback[i] && !w.mask[i] {
            w.log_derivs[1][i] = l2[i];
            w.log_derivs[2][i] = l3[i];
        }
    }
}

/// Values with a validity mask.
#[derive(Clone, Debug, PartialEq)]
pub struct MaskedSeries {
    pub values: Vec<C64>,
    pub mask: Vec<bool>,
}

impl MaskedSeries {
    pub fn unmasked_count(&self) -> usize {
        self.mask.iter().filter(|m| !**m).count()
    }
}

/// `d/dx ln(W1/W2) = W1′/W1 − W2′/W2` with the masks combined.
pub fn logderiv_ratio(w1: &WGridValues, w2: &WGridValues) -> Result<MaskedSeries> {
    if w1.values.len() != w2.values.len() {
        return Err(Error::Argument("determinant series differ in length".into()));
    }
    let mask: Vec<bool> = w1.mask.iter().zip(&w2.mask).map(|(a, b)| *a || *b).collect();
    let values = (0..mask.len())
        .map(|i| if mask[i] { ZERO } else { w1.log_derivs[0][i] - w2.log_derivs[0][i] })
        .collect();
    let series = MaskedSeries { values, mask };
    if series.unmasked_count() == 0 {
        return Err(Error::EmptyDomain("both Wronskians are masked everywhere".into()));
    }
    Ok(series)
}

/// Central-difference log-derivative of determinant values, used to cross
/// check the trace identity.
pub fn fd_log_derivative(w: &WGridValues, h: f64) -> Vec<C64> {
    let d = central_difference(&w.values, h);
    d.iter().zip(&w.values).map(|(d, v)| d / v).collect()
}
